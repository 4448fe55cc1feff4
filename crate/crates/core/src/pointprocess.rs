//! Transmitter deployments: PPP and Gauss–Poisson sampling in a disc window,
//! nearest-transmitter queries and exclusion-zone band masks.
//!
//! The reference user sits at the origin, the center of the window.

use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::csvfmt::fmt_g6;

/// Expected number of transmitters per operator inside the default window.
pub const POINTS_PER_OPERATOR: f64 = 500.0;

/// Most bands a [`BandMask`] can hold.
pub const MAX_BANDS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointProcessError {
    #[error("intensity must be positive and finite, got {0}")]
    InvalidIntensity(f64),
    #[error("window radius must be positive and finite, got {0}")]
    InvalidWindow(f64),
    #[error("invalid Gauss-Poisson parameters: {0}")]
    InvalidGpp(String),
    #[error("exclusion radius must be non-negative and finite, got {0}")]
    InvalidRadius(f64),
    #[error("no transmitter in the selected subset")]
    EmptySubset,
    #[error("at most {MAX_BANDS} operators are supported, got {0}")]
    TooManyOperators(usize),
}

pub type Result<T> = std::result::Result<T, PointProcessError>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn distance_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

/// Disc-shaped simulation window centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    radius: f64,
}

impl Window {
    pub fn new(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(Self { radius })
        } else {
            Err(PointProcessError::InvalidWindow(radius))
        }
    }

    /// Window holding [`POINTS_PER_OPERATOR`] expected points at `density`.
    pub fn for_density(density: f64) -> Result<Self> {
        if !(density.is_finite() && density > 0.0) {
            return Err(PointProcessError::InvalidIntensity(density));
        }
        Self::new((POINTS_PER_OPERATOR / (density * std::f64::consts::PI)).sqrt())
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.norm_sq() <= self.radius * self.radius
    }
}

fn uniform_in_disc<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    // rejection from the bounding square: no trigonometry
    loop {
        let x = rng.random::<f64>() * 2.0 - 1.0;
        let y = rng.random::<f64>() * 2.0 - 1.0;
        if x * x + y * y <= 1.0 {
            return Point::new(x * radius, y * radius);
        }
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite mean");
    d.sample(rng) as usize
}

fn sample_disc<R: Rng + ?Sized>(intensity: f64, radius: f64, rng: &mut R) -> Vec<Point> {
    let area = std::f64::consts::PI * radius * radius;
    let n = poisson_count(intensity * area, rng);
    (0..n).map(|_| uniform_in_disc(radius, rng)).collect()
}

/// Homogeneous PPP of the given intensity restricted to `window`.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, window: &Window, rng: &mut R) -> Result<Vec<Point>> {
    if !(intensity.is_finite() && intensity > 0.0) {
        return Err(PointProcessError::InvalidIntensity(intensity));
    }
    Ok(sample_disc(intensity, window.radius(), rng))
}

/// Gauss–Poisson process: PPP cluster centres, each cluster holding a second
/// point with probability `pair_probability`, uniform on the circle of radius
/// `pair_radius` around the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GppParams {
    pub cluster_intensity: f64,
    pub pair_probability: f64,
    pub pair_radius: f64,
    /// Flip a fair coin per cluster for which operator gets the centre;
    /// otherwise centres belong to operator 0 and companions to operator 1.
    #[serde(default)]
    pub randomize_assignment: bool,
}

impl GppParams {
    pub fn new(cluster_intensity: f64, pair_probability: f64, pair_radius: f64) -> Result<Self> {
        let p = Self {
            cluster_intensity,
            pair_probability,
            pair_radius,
            randomize_assignment: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cluster_intensity.is_finite() && self.cluster_intensity > 0.0) {
            return Err(PointProcessError::InvalidIntensity(self.cluster_intensity));
        }
        if !(0.0..=1.0).contains(&self.pair_probability) {
            return Err(PointProcessError::InvalidGpp(format!(
                "pair probability {} outside [0, 1]",
                self.pair_probability
            )));
        }
        if !(self.pair_radius.is_finite() && self.pair_radius >= 0.0) {
            return Err(PointProcessError::InvalidGpp(format!(
                "pair radius {} must be non-negative",
                self.pair_radius
            )));
        }
        Ok(())
    }
}

/// Sample a two-operator Gauss–Poisson deployment.
///
/// Centres are drawn in a disc enlarged by `pair_radius` so that companions
/// of clusters centred just outside the window are not lost; both sets are
/// then restricted to `window`.
pub fn sample_gpp<R: Rng + ?Sized>(params: &GppParams, window: &Window, rng: &mut R) -> Result<[Vec<Point>; 2]> {
    params.validate()?;
    let outer = window.radius() + params.pair_radius;
    let centers = sample_disc(params.cluster_intensity, outer, rng);
    let mut ops: [Vec<Point>; 2] = [Vec::new(), Vec::new()];
    for c in centers {
        let companion = if rng.random::<f64>() < params.pair_probability {
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            Some(Point::new(
                c.x + params.pair_radius * phi.cos(),
                c.y + params.pair_radius * phi.sin(),
            ))
        } else {
            None
        };
        let center_op = if params.randomize_assignment {
            usize::from(rng.random::<bool>())
        } else {
            0
        };
        if window.contains(&c) {
            ops[center_op].push(c);
        }
        if let Some(q) = companion.filter(|q| window.contains(q)) {
            ops[1 - center_op].push(q);
        }
    }
    Ok(ops)
}

/// Bands a transmitter may use; bit `k` set means band `k` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BandMask(u64);

impl BandMask {
    pub fn all(n_bands: usize) -> Self {
        debug_assert!(n_bands <= MAX_BANDS);
        if n_bands == MAX_BANDS {
            Self(u64::MAX)
        } else {
            Self((1u64 << n_bands) - 1)
        }
    }

    #[inline]
    pub fn allows(&self, band: usize) -> bool {
        self.0 >> band & 1 == 1
    }

    pub fn set(&mut self, band: usize, allowed: bool) {
        if allowed {
            self.0 |= 1 << band;
        } else {
            self.0 &= !(1 << band);
        }
    }

    pub fn count(&self) -> u32 {
        self.0.count_ones()
    }

    /// `"1"`/`"0"` per band, band 0 first.
    pub fn to_bit_string(&self, n_bands: usize) -> String {
        (0..n_bands)
            .map(|b| if self.allows(b) { '1' } else { '0' })
            .collect()
    }
}

/// One spatial realisation: transmitters per operator plus band-use masks.
/// Band `n` is the band licensed to operator `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    points: Vec<Vec<Point>>,
    masks: Vec<Vec<BandMask>>,
}

impl Deployment {
    /// Every transmitter allowed on every band (no coordination).
    pub fn new(points: Vec<Vec<Point>>) -> Result<Self> {
        let n = points.len();
        if n > MAX_BANDS {
            return Err(PointProcessError::TooManyOperators(n));
        }
        let masks = points.iter().map(|ps| vec![BandMask::all(n); ps.len()]).collect();
        Ok(Self { points, masks })
    }

    pub fn n_operators(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self, operator: usize) -> &[Point] {
        &self.points[operator]
    }

    pub fn masks(&self, operator: usize) -> &[BandMask] {
        &self.masks[operator]
    }

    pub fn mask(&self, operator: usize, index: usize) -> BandMask {
        self.masks[operator][index]
    }

    pub fn total_points(&self) -> usize {
        self.points.iter().map(Vec::len).sum()
    }

    /// Recompute masks for exclusion radius `radius`: a transmitter of
    /// operator `j` loses band `n ≠ j` iff some operator-`n` transmitter lies
    /// strictly closer than `radius`. Own-band entries are always kept, and a
    /// zero radius leaves every entry allowed.
    pub fn apply_exclusion_zones(&mut self, radius: f64) -> Result<()> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(PointProcessError::InvalidRadius(radius));
        }
        let n = self.n_operators();
        for masks in &mut self.masks {
            masks.iter_mut().for_each(|m| *m = BandMask::all(n));
        }
        if radius == 0.0 {
            return Ok(());
        }
        let r_sq = radius * radius;
        for band in 0..n {
            if self.points[band].is_empty() {
                continue;
            }
            let grid = CellGrid::build(&self.points[band], radius);
            for op in (0..n).filter(|&op| op != band) {
                for (i, p) in self.points[op].iter().enumerate() {
                    if grid.any_within(&self.points[band], p, r_sq) {
                        self.masks[op][i].set(band, false);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_exclusion_zones(mut self, radius: f64) -> Result<Self> {
        self.apply_exclusion_zones(radius)?;
        Ok(self)
    }

    /// Border-corrected exclusion count for `band`: among transmitters of the
    /// other operators whose distance to the window edge is at least
    /// `radius`, returns `(excluded, total)`. Restricting to those points
    /// removes the bias from exclusion discs that are cut by the window.
    pub fn excluded_count(&self, band: usize, window: &Window, radius: f64) -> (usize, usize) {
        let inner = (window.radius() - radius).max(0.0);
        let inner_sq = inner * inner;
        let mut excluded = 0;
        let mut total = 0;
        for op in (0..self.n_operators()).filter(|&op| op != band) {
            for (p, m) in self.points[op].iter().zip(&self.masks[op]) {
                if p.norm_sq() <= inner_sq {
                    total += 1;
                    if !m.allows(band) {
                        excluded += 1;
                    }
                }
            }
        }
        (excluded, total)
    }

    /// CSV snapshot with columns `x,y,operator,band_mask`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,operator,band_mask")?;
        let n = self.n_operators();
        for (op, (pts, masks)) in self.points.iter().zip(&self.masks).enumerate() {
            for (p, m) in pts.iter().zip(masks) {
                writeln!(out, "{},{},{},{}", fmt_g6(p.x), fmt_g6(p.y), op, m.to_bit_string(n))?;
            }
        }
        Ok(())
    }
}

// Uniform grid over the bounding box of one operator's points.
struct CellGrid {
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    reach: i64,
    offsets: Vec<u32>,
    indices: Vec<u32>,
}

impl CellGrid {
    fn build(points: &[Point], radius: f64) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        let extent = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
        // cells no smaller than extent/256 keep the table bounded for tiny radii
        let cell = radius.max(extent / 256.0);
        let nx = ((max_x - min_x) / cell) as usize + 1;
        let ny = ((max_y - min_y) / cell) as usize + 1;
        let reach = (radius / cell).ceil() as i64;
        let mut counts = vec![0u32; nx * ny + 1];
        let key = |p: &Point| {
            let cx = ((p.x - min_x) / cell) as usize;
            let cy = ((p.y - min_y) / cell) as usize;
            cy.min(ny - 1) * nx + cx.min(nx - 1)
        };
        for p in points {
            counts[key(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let offsets = counts.clone();
        let mut fill = counts;
        let mut indices = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let k = key(p);
            indices[fill[k] as usize] = i as u32;
            fill[k] += 1;
        }
        Self {
            min_x,
            min_y,
            cell,
            nx,
            ny,
            reach,
            offsets,
            indices,
        }
    }

    fn any_within(&self, points: &[Point], q: &Point, r_sq: f64) -> bool {
        let cx = ((q.x - self.min_x) / self.cell).floor() as i64;
        let cy = ((q.y - self.min_y) / self.cell).floor() as i64;
        for gy in (cy - self.reach).max(0)..=(cy + self.reach).min(self.ny as i64 - 1) {
            for gx in (cx - self.reach).max(0)..=(cx + self.reach).min(self.nx as i64 - 1) {
                let k = gy as usize * self.nx + gx as usize;
                let range = self.offsets[k] as usize..self.offsets[k + 1] as usize;
                if self.indices[range]
                    .iter()
                    .any(|&i| points[i as usize].distance_sq(q) < r_sq)
                {
                    return true;
                }
            }
        }
        false
    }
}

/// Which transmitters a user may associate with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Operator(usize),
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nearest {
    pub operator: usize,
    pub index: usize,
    pub point: Point,
    pub distance: f64,
}

/// Closest transmitter to `origin` within the selected subset. Ties go to the
/// lowest operator id, then the lexicographically smallest coordinates.
pub fn nearest_point(deployment: &Deployment, origin: Point, selector: Selector) -> Result<Nearest> {
    let operators = match selector {
        Selector::Operator(n) if n < deployment.n_operators() => n..n + 1,
        Selector::Operator(_) => return Err(PointProcessError::EmptySubset),
        Selector::All => 0..deployment.n_operators(),
    };
    let mut best: Option<(f64, Nearest)> = None;
    for op in operators {
        for (i, p) in deployment.points(op).iter().enumerate() {
            let d = p.distance_sq(&origin);
            let better = match &best {
                None => true,
                Some((bd, b)) => {
                    d < *bd
                        || (d == *bd
                            && b.operator == op
                            && (p.x, p.y) < (b.point.x, b.point.y))
                }
            };
            if better {
                best = Some((
                    d,
                    Nearest {
                        operator: op,
                        index: i,
                        point: *p,
                        distance: 0.0,
                    },
                ));
            }
        }
    }
    best.map(|(d, mut n)| {
        n.distance = d.sqrt();
        n
    })
    .ok_or(PointProcessError::EmptySubset)
}

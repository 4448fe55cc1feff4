//! Rayleigh against Nakagami-m fading. Larger m means less fading and less
//! to gain from independent fades across pooled bands.

use netshare::analytic::Sharing;
use netshare::simulator::{simulate, Scenario};
use netshare::{BandMode, FadingModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let grid = [0.0, 10.0];
    println!("full sharing coverage at {grid:?} dB");
    for m in [1.0, 2.0, 5.0] {
        for mode in [BandMode::Flat, BandMode::Selective] {
            let fading = FadingModel::nakagami(m, mode)?;
            let s = Scenario::ppp(Sharing::Full, mode, &[1.0, 1.0]).with_fading(fading);
            let c = simulate(&s, n, 9)?.coverage_curve(&grid, "c");
            println!("m = {m}  {:<9}  {:.4?}", format!("{mode:?}"), c.probabilities);
        }
    }
    Ok(())
}

//! Inter-operator clustering with a Gauss-Poisson process: each cluster
//! centre belongs to one operator, and with probability `p` the other
//! operator has a site at distance `u` from it.
//!
//!     cargo run --release --example clustering -- [realizations]

use netshare::analytic::Sharing;
use netshare::pointprocess::GppParams;
use netshare::simulator::{simulate, Scenario};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let grid = [-5.0, 0.0, 5.0, 10.0];
    println!("coverage at {grid:?} dB");
    for sharing in [Sharing::Infrastructure, Sharing::Spectrum, Sharing::Full] {
        let ppp = simulate(&Scenario::ppp(sharing, BandMode::Flat, &[1.0, 1.0]), n, 3)?.coverage_curve(&grid, "ppp");
        println!("{:<15} independent   {:.3?}", sharing.name(), ppp.probabilities);
        for u in [0.01, 0.2, 1.0] {
            let params = GppParams::new(1.0, 1.0, u)?;
            let c = simulate(&Scenario::gpp(sharing, BandMode::Flat, params), n, 3)?.coverage_curve(&grid, "gpp");
            println!("{:<15} u = {u:<9} {:.3?}", "", c.probabilities);
        }
    }
    Ok(())
}

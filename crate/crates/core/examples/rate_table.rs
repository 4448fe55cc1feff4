//! Average rate per scenario with percentiles.
//!
//!     cargo run --release --example rate_table -- [realizations]

use netshare::analytic::{self, NoiseModel, OperatorSet, Sharing};
use netshare::simulator::{simulate, Scenario};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(50_000);
    let ops = OperatorSet::equal(2, 1.0)?;

    println!("{:<16}{:>9}{:>9}{:>8}{:>8}{:>8}{:>10}", "scenario", "analytic", "mean", "p5", "p50", "p95", "mean/p50");
    for sharing in Sharing::ALL {
        let exact = analytic::average_rate(sharing, &ops, 0, 4.0, &NoiseModel::InterferenceLimited)?;
        let s = simulate(&Scenario::ppp(sharing, BandMode::Flat, ops.densities()), n, 11)?.rate_stats();
        println!(
            "{:<16}{exact:>9.3}{:>9.3}{:>8.3}{:>8.3}{:>8.3}{:>10.2}",
            sharing.name(),
            s.mean,
            s.p5,
            s.p50,
            s.p95,
            s.mean_to_median()
        );
    }
    Ok(())
}

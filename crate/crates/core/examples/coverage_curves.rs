//! Monte-Carlo and closed-form coverage for the four sharing scenarios,
//! two operators of equal density, flat and frequency-selective fading.
//!
//!     cargo run --release --example coverage_curves -- [realizations]

use netshare::analytic::{self, Analytic, NoiseModel, OperatorSet, Sharing};
use netshare::csvfmt::fmt_g6;
use netshare::simulator::{simulate, Scenario};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let grid = analytic::theta_grid_db(-10.0, 20.0, 5.0);
    let ops = OperatorSet::equal(2, 1.0)?;
    let model = Analytic::default();

    println!("scenario,mode,theta_db,monte_carlo,std_err,analytic");
    for mode in [BandMode::Flat, BandMode::Selective] {
        for sharing in Sharing::ALL {
            let scenario = Scenario::ppp(sharing, mode, ops.densities());
            let mc = simulate(&scenario, n, 7)?.coverage_curve(&grid, sharing.name());
            for (i, &db) in grid.iter().enumerate() {
                let exact = model.coverage(sharing, mode, analytic::db_to_linear(db), &ops, 0, 4.0, &NoiseModel::InterferenceLimited)?;
                println!(
                    "{},{mode:?},{},{},{},{}",
                    sharing.name(),
                    fmt_g6(db),
                    fmt_g6(mc.probabilities[i]),
                    fmt_g6(mc.std_errors[i]),
                    fmt_g6(exact)
                );
            }
        }
    }
    Ok(())
}

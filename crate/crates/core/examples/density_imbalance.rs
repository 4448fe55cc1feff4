//! A sparse operator (λ = 0.25) sharing with a dense one (λ = 1). Coverage
//! seen by each operator's subscribers, with thermal noise.

use netshare::analytic::{self, Analytic, NoiseModel, OperatorSet, Sharing};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ops = OperatorSet::new(vec![0.25, 1.0])?;
    let noise = NoiseModel::WithNoise { power: 1e-3 };
    let model = Analytic::default();

    for served in 0..2 {
        println!("operator {served} (density {}), association probability {:.3}", ops.density(served), analytic::association_probability(&ops, served)?);
        println!("  theta_db    none   infra  spectrum   full");
        for db in [-5.0, 0.0, 5.0, 10.0] {
            let theta = analytic::db_to_linear(db);
            let p = |s| model.coverage(s, BandMode::Flat, theta, &ops, served, 4.0, &noise);
            println!(
                "  {db:>8}  {:.4}  {:.4}  {:>8.4}  {:.4}",
                p(Sharing::None)?,
                p(Sharing::Infrastructure)?,
                p(Sharing::Spectrum)?,
                p(Sharing::Full)?
            );
        }
        let rate = |s| analytic::average_rate(s, &ops, served, 4.0, &noise);
        println!("  mean rate: none {:.3}, full {:.3}", rate(Sharing::None)?, rate(Sharing::Full)?);
    }
    Ok(())
}

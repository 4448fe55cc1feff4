//! How coverage at 0 dB and mean rate move as more operators pool
//! resources. Closed forms only, so this runs instantly.

use netshare::analytic::{self, Analytic, NoiseModel, OperatorSet, Sharing};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = Analytic::default();
    let il = NoiseModel::InterferenceLimited;
    println!("operators  infra@0dB  spectrum@0dB  full-sel@0dB  rate(none)  rate(infra)  rate(spectrum)  rate(full)");
    for n in 1..=6 {
        let ops = OperatorSet::equal(n, 1.0)?;
        let cov = |s, m| model.coverage(s, m, 1.0, &ops, 0, 4.0, &il);
        let rate = |s| analytic::average_rate(s, &ops, 0, 4.0, &il);
        println!(
            "{n:>9}  {:>9.4}  {:>12.4}  {:>12.4}  {:>10.3}  {:>11.3}  {:>14.3}  {:>10.3}",
            cov(Sharing::Infrastructure, BandMode::Flat)?,
            cov(Sharing::Spectrum, BandMode::Flat)?,
            cov(Sharing::Full, BandMode::Selective)?,
            rate(Sharing::None)?,
            rate(Sharing::Infrastructure)?,
            rate(Sharing::Spectrum)?,
            rate(Sharing::Full)?,
        );
    }
    Ok(())
}

//! Spectrum sharing with coordination: operator n's band is barred to other
//! operators' transmitters within R_s of any operator-n site.

use netshare::analytic::Sharing;
use netshare::simulator::{simulate, Scenario};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    println!("R_s     excluded  void-prob  coverage@0dB  mean-rate");
    for r in [0.0, 0.2, 0.4, 0.6, 0.8, 1.2] {
        let s = Scenario::ppp(Sharing::Spectrum, BandMode::Selective, &[1.0, 1.0]).with_coordination_radius(r);
        let out = simulate(&s, n, 5)?;
        let (frac, _) = out.excluded_fraction().unwrap_or((0.0, 0.0));
        let void = 1.0 - (-std::f64::consts::PI * r * r).exp();
        let cov = out.coverage_curve(&[0.0], "c").probabilities[0];
        println!("{r:<7} {frac:>8.3}  {void:>9.3}  {cov:>12.4}  {:>9.3}", out.rate_stats().mean);
    }
    Ok(())
}

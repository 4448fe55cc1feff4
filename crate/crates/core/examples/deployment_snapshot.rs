//! Draw one deployment, apply exclusion zones and print it as CSV
//! (`x,y,operator,band_mask`), ready for a scatter plot.

use netshare::analytic::Sharing;
use netshare::simulator::{run_realization, Scenario};
use netshare::BandMode;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = Scenario::ppp(Sharing::Spectrum, BandMode::Flat, &[1.0, 1.0])
        .with_coordination_radius(0.4)
        .with_window(6.0);
    let outcome = run_realization(&s, 42, 0)?;
    let r = &outcome.result;
    eprintln!(
        "served by operator {} at distance {:.3}, max SINR {:.2} dB",
        r.serving_operator,
        r.serving_distance,
        10.0 * r.max_sinr().log10()
    );
    outcome.deployment.write_csv(std::io::stdout().lock())?;
    Ok(())
}

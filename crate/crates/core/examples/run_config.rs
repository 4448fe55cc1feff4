//! Run one of the shipped configs into a scratch directory, the same way
//! `netshare run` does.
//!
//!     cargo run --release --example run_config -- configs/coverage_flat.toml 5000

use std::path::PathBuf;

use netshare::experiment::{run_experiment, Overrides};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/coverage_flat.toml")));
    let realizations = args.next().map(|s| s.parse()).transpose()?.or(Some(2_000));
    let out_dir = std::env::temp_dir().join("netshare-example");
    let summary = run_experiment(
        &config,
        &Overrides {
            realizations,
            out_dir: Some(out_dir),
            ..Overrides::default()
        },
    )?;
    println!("wrote {} files to {}", summary.files.len(), summary.out_dir.display());
    for s in &summary.results.scenarios {
        if let (Some(mc), Some(a)) = (&s.monte_carlo, &s.analytic) {
            println!("  {:<20} max |MC - analytic| {:.4}", s.name, mc.max_abs_deviation(a));
        }
    }
    for r in &summary.results.rates {
        println!("  {:<20} mean rate {:.3} (median {:.3})", r.scenario, r.stats.mean, r.stats.p50);
    }
    Ok(())
}

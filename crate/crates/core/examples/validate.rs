//! Cross-check Monte-Carlo against the closed forms over all eight
//! scenario and band-mode pairs.
//!
//!     cargo run --release --example validate -- [realizations]

use netshare::experiment::{validate, ValidationSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let realizations = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let report = validate(&ValidationSettings {
        realizations,
        ..ValidationSettings::default()
    })?;
    for s in &report.scenarios {
        println!(
            "{:<24} {} max deviation {:.4} at {} dB",
            s.scenario,
            if s.passed { "PASS" } else { "FAIL" },
            s.max_deviation,
            s.worst_theta_db
        );
    }
    println!("tolerance {}, overall {}", report.tolerance, if report.passed { "PASS" } else { "FAIL" });
    Ok(())
}

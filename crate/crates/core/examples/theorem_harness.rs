//! Runs the six theorem harnesses with a fixed seed.

use dualrisk::harness::verify_theorem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50);
    for theorem in 1..=6 {
        let report = verify_theorem(theorem, trials, 42, 5, None)?;
        println!("{}", report.summary());
        for f in &report.failures {
            println!("  replay: {}", f.provenance);
        }
    }
    Ok(())
}

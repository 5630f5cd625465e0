// Runs a few theorem suites and the negative controls.
//
// ```bash
// cargo run --example verify_theorems
// ```

use dualorder::harness::{self, VerifyConfig};
use dualorder::Result;

pub fn run_example() -> Result<()> {
    let cfg = VerifyConfig {
        trials: 40,
        ..VerifyConfig::default()
    };
    for id in ["thm-2.3", "thm-3.5", "thm-3.6", "thm-5.3", "fixtures-4.1", "fixtures-5.x"] {
        let o = harness::verify(id, &cfg)?;
        println!(
            "{:<13} {:>3} trials, {} failures, {} skipped, max residual {:.1e}",
            o.theorem_id, o.trials, o.failures, o.skipped, o.max_residual
        );
        assert!(o.passed());
    }
    let c = harness::negative_controls(40, 1, 0.1, &cfg.tol)?;
    println!("0.1 block nudges flipped the order in {}/{} trials", c.flipped, c.trials);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}

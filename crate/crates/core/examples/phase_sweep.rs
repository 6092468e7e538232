//! Empirical error probability over a small grid of lengths and
//! compression ratios, next to the asymptotic thresholds.

use ffcs::harness::{phase_sweep, Execution};
use ffcs::scenario::Scenario;
use ffcs::source::{SiSource, SourceModel};
use ffcs::Result;

fn main() -> Result<()> {
    let base = Scenario::builder(12, 6, SourceModel::Si(SiSource::new(vec![0.89, 0.11])?))?
        .gamma(0.5)
        .trials(300)
        .build()?;
    let sweep = phase_sweep(&base, &[8, 12, 16], &[0.25, 0.5, 0.75, 1.0], None, Execution::Parallel(0))?;
    println!("threshold: {:?}", sweep.sufficient_ratio);
    for c in &sweep.cells {
        if let Some(e) = c.estimate() {
            println!(
                "N = {:>2}, M = {:>2}: P_e = {:.3} [{:.3}, {:.3}]",
                c.n, c.m, e.pe, e.ci.0, e.ci.1
            );
        }
    }
    Ok(())
}

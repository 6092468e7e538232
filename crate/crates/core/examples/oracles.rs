//! Reduced runs of the three oracle suites.

use ffcs::harness::Execution;
use ffcs::verify::{lemma2_default_grid, verify_appendix_b, verify_decoder_equivalence, verify_lemma2, AppendixBConfig};
use ffcs::Result;

fn main() -> Result<()> {
    let exec = Execution::Parallel(0);
    let l2 = verify_lemma2(&lemma2_default_grid(), 20_000, 1, exec)?;
    println!("collision probability: {} points, max |z| = {:.2}, passed = {}", l2.points.len(), l2.max_abs_z, l2.passed);

    let dec = verify_decoder_equivalence(40, 1, 6, exec)?;
    println!("decoder equivalence: {} scenarios, {} mismatches", dec.cases.len(), dec.mismatches);

    let cfg = AppendixBConfig {
        draws: 200_000,
        seeds: 5,
        ..AppendixBConfig::default()
    };
    let ab = verify_appendix_b(&cfg, 1, exec)?;
    println!(
        "gaussian pair: epsilon z = {:.2}, entropy error = {:.4}; mean rates {:?}; passed = {}",
        ab.epsilon_z,
        ab.entropy_mc - ab.entropy_closed,
        ab.mean_rates,
        ab.passed
    );
    Ok(())
}

//! Compression-ratio thresholds, the sparsity requirement and the
//! finite-length upper bound for a noisy sparse source.

use ffcs::bounds::{f_collision, gamma_min, scenario_report, select_alpha, upper_bound_nc, BoundInputs, FParams};
use ffcs::channel::CommNoise;
use ffcs::scenario::Scenario;
use ffcs::source::{SiSource, SourceModel};
use ffcs::Result;

fn main() -> Result<()> {
    let s = Scenario::builder(200, 120, SourceModel::Si(SiSource::new(vec![0.89, 0.11])?))?
        .gamma(0.3)
        .comm(CommNoise::worst_case(2, 0.01)?)
        .build()?;
    print!("{}", scenario_report(&s)?.to_table().to_csv());

    let inputs = BoundInputs::from_scenario(&s)?;
    println!("\ngamma_min for H(u) = {:.4}: {:.5}", inputs.h_u, gamma_min(inputs.h_u));

    println!("\nupper bound on the error probability at M/N = 0.6:");
    for n in [100usize, 1000, 10000, 100000] {
        let m = (0.6 * n as f64).round() as usize;
        let alpha = select_alpha(&inputs, n, 0.0, 0.0)?;
        let ub = upper_bound_nc(&inputs, n, m, alpha.alpha, 0.0)?;
        println!("  N = {n:>6}: alpha = {:.4}, P1 + P2 = {:.3e}", alpha.alpha, ub.total(0.0));
    }

    println!("\ncollision probability f(d1, 0; gamma, 2, 10):");
    for gamma in [0.05, 0.2, 0.5] {
        let row: Vec<String> = [1usize, 2, 5, 20]
            .iter()
            .map(|&d1| Ok(format!("{:.3e}", f_collision(&FParams { d1, d2: 0, gamma, q: 2, m: 10 })?)))
            .collect::<Result<_>>()?;
        println!("  gamma = {gamma}: {}", row.join("  "));
    }
    Ok(())
}

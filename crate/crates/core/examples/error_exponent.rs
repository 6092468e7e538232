//! The error exponent of the noisy-network decoder across compression
//! ratios; it turns positive at the sufficient threshold.

use ffcs::bounds::{sufficient_ratio, BoundInputs};
use ffcs::channel::CommNoise;
use ffcs::exponent::error_exponent_nc;
use ffcs::figures::lin_space;
use ffcs::scenario::Scenario;
use ffcs::source::{SiSource, SourceModel};
use ffcs::Result;

fn main() -> Result<()> {
    let p_theta = [0.89, 0.11];
    let noise = CommNoise::worst_case(2, 0.01)?;
    let s = Scenario::builder(10, 5, SourceModel::Si(SiSource::new(p_theta.to_vec())?))?
        .comm(noise.clone())
        .build()?;
    let threshold = sufficient_ratio(&BoundInputs::from_scenario(&s)?)?.map(|(r, _)| r);
    println!("sufficient ratio: {threshold:?}");
    println!("ratio,exponent,margin,converged");
    for r in lin_space(0.05, 1.0, 20) {
        let e = error_exponent_nc(&p_theta, noise.pmf(), 2, r)?;
        println!("{r:.2},{:.6},{:.6},{}", e.value, e.margin, e.converged);
    }
    Ok(())
}

//! A sign-quantized Gaussian field on random sensor positions: its
//! nearest-neighbour entropy bound, its estimated entropy rate, and the
//! threshold that rate implies.

use ffcs::gaussian::{conditional_entropy_bound, epsilon_rho, EstimatorParams, GaussianFieldSource, DEFAULT_JITTER};
use ffcs::Result;

fn main() -> Result<()> {
    for rho in [0.0, 0.5, 0.9, 0.99] {
        println!(
            "rho = {rho}: epsilon = {:.4}, H(sign | neighbour sign) <= {:.4}",
            epsilon_rho(rho)?,
            conditional_entropy_bound(rho)?
        );
    }
    for n in [16, 64, 256] {
        let src = GaussianFieldSource::random_placement(10.0, n, DEFAULT_JITTER, 5)?;
        let est = src.estimate_entropy_rate(&EstimatorParams::default())?;
        println!(
            "N = {n:>3}: nearest-neighbour bound {:.4}, estimated rate {:.4} ({:?})",
            src.nearest_neighbour_bound(),
            est.rate,
            est.method
        );
    }
    let src = GaussianFieldSource::random_placement(10.0, 12, DEFAULT_JITTER, 5)?;
    println!("one realization on 12 sensors: {:?}", src.sample(1)?.0);
    Ok(())
}

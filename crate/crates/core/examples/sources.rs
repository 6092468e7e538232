//! Entropy rates and sample paths of the memoryless and Markov sources.

use ffcs::source::{SiSource, SourceModel, StmSource};
use ffcs::Result;

fn main() -> Result<()> {
    let sparse = SourceModel::Si(SiSource::new(vec![0.89, 0.11])?);
    let markov = SourceModel::Stm(StmSource::new(
        1,
        vec![vec![0.8, 0.1, 0.1], vec![0.2, 0.7, 0.1], vec![0.3, 0.3, 0.4]],
        None,
    )?);
    let second_order = SourceModel::Stm(StmSource::new(
        2,
        vec![
            vec![0.9, 0.1],
            vec![0.5, 0.5],
            vec![0.4, 0.6],
            vec![0.1, 0.9],
        ],
        None,
    )?);

    for (name, src) in [("sparse iid", &sparse), ("ternary Markov", &markov), ("binary order 2", &second_order)] {
        let rate = src.entropy_rate()?;
        println!("{name}: entropy rate {:.4} bits/symbol ({:?})", rate.rate, rate.method);
        println!("  marginal {:?}", src.marginal()?);
        let path = src.sample(24, 7)?;
        println!("  sample {:?}", path.0);
        println!("  log2 p(sample) = {:.3}", src.log2_prob(&path)?);
    }
    Ok(())
}

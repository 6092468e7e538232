//! One measurement instance decoded in each noise regime.

use ffcs::channel::{CommNoise, SensingChannel};
use ffcs::decoder::{decode, sample_instance};
use ffcs::scenario::Scenario;
use ffcs::source::{SiSource, SourceModel};
use ffcs::Result;

fn main() -> Result<()> {
    let source = SourceModel::Si(SiSource::new(vec![0.85, 0.1, 0.05])?);
    let base = Scenario::builder(8, 6, source)?.gamma(0.5).seed(11);
    let scenarios = [
        base.clone().build()?,
        base.clone().comm(CommNoise::worst_case(3, 0.05)?).build()?,
        base.clone().sensing(SensingChannel::symmetric_flip(3, 0.05)?).build()?,
        base.comm(CommNoise::worst_case(3, 0.05)?)
            .sensing(SensingChannel::symmetric_flip(3, 0.05)?)
            .build()?,
    ];
    for s in &scenarios {
        let inst = sample_instance(s, 2024)?;
        let r = decode(s, &inst.y, &inst.a)?;
        println!("{}:", s.regime());
        println!("  theta    {:?}", inst.theta.0);
        println!("  y        {:?}", inst.y.0);
        println!("  estimate {:?}", r.estimate.0);
        println!(
            "  correct {}, log2 score {:.3}, ties {}, candidates scored {}",
            r.estimate == inst.theta,
            r.score.log2_score,
            r.tie_count,
            r.work
        );
    }
    Ok(())
}

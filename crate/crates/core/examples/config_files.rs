//! Scenario files: parse, inspect, serialize and parse again.

use ffcs::scenario::Scenario;
use ffcs::Result;

const TEXT: &str = r#"
n = 10
m = 7
q = 4
gamma = 0.3
seed = 42
trials = 200
comm_noise = [0.97, 0.01, 0.01, 0.01]
sensing_noise = 0.02

[source]
model = "si"
pmf = [0.7, 0.1, 0.1, 0.1]
"#;

fn main() -> Result<()> {
    let s = Scenario::parse(TEXT, None)?;
    println!("regime {}, field GF({}), M x N = {} x {}", s.regime(), s.q(), s.m, s.n);
    let text = s.to_toml()?;
    println!("serialized:\n{text}");
    assert_eq!(Scenario::parse(&text, None)?, s);
    println!("round trip ok");
    match Scenario::parse(&TEXT.replace("trials", "trails"), None) {
        Err(e) => println!("misspelt key rejected: {e}"),
        Ok(_) => println!("misspelt key accepted"),
    }
    Ok(())
}

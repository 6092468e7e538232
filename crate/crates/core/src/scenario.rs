//! Experiment configuration.
//!
//! A scenario is written as TOML. Unknown keys are rejected.
//!
//! ```toml
//! n = 12                 # source length N
//! m = 6                  # number of measurements M
//! q = 2                  # field size
//! gamma = 0.5            # sparsity factor, 0 < gamma <= 1 - 1/q
//! seed = 1               # master seed, 0 <= seed < 2^63
//! trials = 500
//! max_candidates = 4194304   # optional decoder cap, default 2^22
//! matrix = "random"      # optional, "random" or "identity"
//! comm_noise = 0.01      # optional: Pr(u != 0) spread evenly, or a pmf list
//! sensing_noise = 0.05   # optional: Pr(x != theta) spread evenly, or a q x q table
//!
//! [source]
//! model = "si"           # "si", "stm" or "gaussian"
//! pmf = [0.89, 0.11]
//! # stm:      r = 1, kernel = [[0.9, 0.1], [0.1, 0.9]], initial = [...] (optional)
//! # gaussian: lambda = 10.0, n = 64, jitter = 1e-10, positions-file = "pos.csv"
//! #           (or positions = [[x, y], ...]; sampled from the seed when absent)
//!
//! [phase]                # optional, used by phase sweeps
//! n_list = [12, 16, 20]
//! ratio_list = [0.25, 0.8]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{CommNoise, MatrixLaw, SensingChannel};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gaussian::{GaussianFieldSource, DEFAULT_JITTER};
use crate::seed;
use crate::source::{SiSource, SourceModel, StmSource};

pub const DEFAULT_MAX_CANDIDATES: u64 = 1 << 22;

/// Noise regime, by presence of sensing and communication noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// No noise.
    Wn,
    /// Communication noise only.
    Nc,
    /// Sensing noise only.
    Ns,
    /// Both.
    Ncs,
}

impl Regime {
    pub fn from_noise(sensing_noise: bool, comm_noise: bool) -> Self {
        match (sensing_noise, comm_noise) {
            (false, false) => Regime::Wn,
            (false, true) => Regime::Nc,
            (true, false) => Regime::Ns,
            (true, true) => Regime::Ncs,
        }
    }

    pub fn has_sensing_noise(self) -> bool {
        matches!(self, Regime::Ns | Regime::Ncs)
    }

    pub fn has_comm_noise(self) -> bool {
        matches!(self, Regime::Nc | Regime::Ncs)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Wn => "WN",
            Regime::Nc => "NC",
            Regime::Ns => "NS",
            Regime::Ncs => "NCS",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixMode {
    #[default]
    Random,
    /// Use the identity in place of a sampled matrix (requires `m == n`).
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGrid {
    pub n_list: Vec<usize>,
    pub ratio_list: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Level(f64),
    Pmf(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SensingSpec {
    Level(f64),
    Table(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceConfig {
    Si {
        pmf: Vec<f64>,
    },
    Stm {
        r: usize,
        kernel: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<Vec<f64>>,
    },
    Gaussian {
        lambda: f64,
        n: usize,
        #[serde(default = "default_jitter")]
        jitter: f64,
        #[serde(default, rename = "positions-file", skip_serializing_if = "Option::is_none")]
        positions_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        positions: Option<Vec<[f64; 2]>>,
    },
}

fn default_jitter() -> f64 {
    DEFAULT_JITTER
}

fn default_max_candidates() -> u64 {
    DEFAULT_MAX_CANDIDATES
}

fn default_trials() -> u64 {
    100
}

fn is_default_max(v: &u64) -> bool {
    *v == DEFAULT_MAX_CANDIDATES
}

fn is_random(m: &MatrixMode) -> bool {
    *m == MatrixMode::Random
}

/// On-disk form of a [`Scenario`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n: usize,
    pub m: usize,
    pub q: u32,
    pub gamma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_max_candidates", skip_serializing_if = "is_default_max")]
    pub max_candidates: u64,
    #[serde(default, skip_serializing_if = "is_random")]
    pub matrix: MatrixMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comm_noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensing_noise: Option<SensingSpec>,
    pub source: SourceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<PhaseGrid>,
}

/// One fully resolved experiment configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub n: usize,
    pub m: usize,
    pub field: Field,
    pub gamma: f64,
    pub source: SourceModel,
    pub sensing: SensingChannel,
    pub comm: CommNoise,
    pub matrix: MatrixMode,
    pub master_seed: u64,
    pub trials: u64,
    pub max_candidates: u64,
    pub phase: Option<PhaseGrid>,
}

impl Scenario {
    /// Noiseless scenario with iid prior `pmf` over GF(pmf.len()).
    pub fn builder(n: usize, m: usize, source: SourceModel) -> Result<ScenarioBuilder> {
        let q = source.q();
        Ok(ScenarioBuilder {
            scenario: Scenario {
                n,
                m,
                field: Field::new(q as u64)?,
                gamma: 1.0 - 1.0 / q as f64,
                sensing: SensingChannel::identity(q),
                comm: CommNoise::zero(q),
                source,
                matrix: MatrixMode::Random,
                master_seed: 0,
                trials: default_trials(),
                max_candidates: DEFAULT_MAX_CANDIDATES,
                phase: None,
            },
        })
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn regime(&self) -> Regime {
        Regime::from_noise(!self.sensing.is_identity(), !self.comm.is_zero())
    }

    pub fn matrix_law(&self) -> Result<MatrixLaw> {
        MatrixLaw::new(self.gamma, self.q(), self.m, self.n)
    }

    /// Same scenario with different dimensions.
    pub fn with_dims(&self, n: usize, m: usize) -> Result<Scenario> {
        let mut s = self.clone();
        s.n = n;
        s.m = m;
        if let SourceModel::GaussianField(_) = s.source {
            return Err(Error::Unsupported("Gaussian-field scenarios have a fixed N".into()));
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.q();
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        for (what, got) in [
            ("source", self.source.q()),
            ("sensing channel", self.sensing.q()),
            ("communication noise", self.comm.q()),
        ] {
            if got != q {
                return Err(Error::Config(format!("{what} is over GF({got}) but q = {q}")));
            }
        }
        if self.matrix == MatrixMode::Random {
            self.matrix_law()?;
        } else if self.m != self.n {
            return Err(Error::Config("an identity matrix needs m = n".into()));
        }
        if let SourceModel::GaussianField(g) = &self.source {
            if g.n_sensors() != self.n {
                return Err(Error::Config(format!(
                    "Gaussian field has {} sensors but n = {}",
                    g.n_sensors(),
                    self.n
                )));
            }
        }
        if let SourceModel::Stm(s) = &self.source {
            if self.n < s.order() {
                return Err(Error::Config("n is smaller than the Markov order".into()));
            }
        }
        if self.master_seed > i64::MAX as u64 {
            return Err(Error::Config("seed must be below 2^63".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_config(cfg: ScenarioConfig, base_dir: Option<&Path>) -> Result<Scenario> {
        let field = Field::new(cfg.q as u64)?;
        let q = cfg.q;
        let source = match cfg.source {
            SourceConfig::Si { pmf } => SourceModel::Si(SiSource::new(pmf)?),
            SourceConfig::Stm { r, kernel, initial } => SourceModel::Stm(StmSource::new(r, kernel, initial)?),
            SourceConfig::Gaussian {
                lambda,
                n,
                jitter,
                positions_file,
                positions,
            } => {
                if q != 2 {
                    return Err(Error::Config("the Gaussian-field source is binary; set q = 2".into()));
                }
                let g = match (positions_file, positions) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Config(
                            "give either positions-file or positions, not both".into(),
                        ))
                    }
                    (Some(path), None) => {
                        let resolved = match base_dir {
                            Some(dir) if path.is_relative() => dir.join(&path),
                            _ => path.clone(),
                        };
                        let mut g = GaussianFieldSource::from_positions_file(lambda, &resolved, jitter)?;
                        g.set_positions_file(path);
                        g
                    }
                    (None, Some(pos)) => GaussianFieldSource::new(lambda, pos, jitter)?,
                    (None, None) => GaussianFieldSource::random_placement(
                        lambda,
                        n,
                        jitter,
                        seed::derive(cfg.seed, seed::stream::PLACEMENT),
                    )?,
                };
                if g.n_sensors() != n {
                    return Err(Error::Config(format!(
                        "source lists {} sensor positions but n = {n}",
                        g.n_sensors()
                    )));
                }
                SourceModel::GaussianField(g)
            }
        };
        let comm = match cfg.comm_noise {
            None => CommNoise::zero(q),
            Some(NoiseSpec::Level(p)) => CommNoise::worst_case(q, p)?,
            Some(NoiseSpec::Pmf(pmf)) => CommNoise::new(pmf)?,
        };
        let sensing = match cfg.sensing_noise {
            None => SensingChannel::identity(q),
            Some(SensingSpec::Level(p)) => SensingChannel::symmetric_flip(q, p)?,
            Some(SensingSpec::Table(t)) => SensingChannel::new(t)?,
        };
        let s = Scenario {
            n: cfg.n,
            m: cfg.m,
            field,
            gamma: cfg.gamma,
            source,
            sensing,
            comm,
            matrix: cfg.matrix,
            master_seed: cfg.seed,
            trials: cfg.trials,
            max_candidates: cfg.max_candidates,
            phase: cfg.phase,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn to_config(&self) -> ScenarioConfig {
        let source = match &self.source {
            SourceModel::Si(s) => SourceConfig::Si { pmf: s.pmf().to_vec() },
            SourceModel::Stm(s) => SourceConfig::Stm {
                r: s.order(),
                kernel: s.kernel().to_vec(),
                initial: Some(s.initial().to_vec()),
            },
            SourceModel::GaussianField(g) => SourceConfig::Gaussian {
                lambda: g.lambda(),
                n: g.n_sensors(),
                jitter: g.jitter(),
                positions_file: g.positions_file().map(Path::to_path_buf),
                positions: g.positions_file().is_none().then(|| g.positions().to_vec()),
            },
        };
        ScenarioConfig {
            n: self.n,
            m: self.m,
            q: self.q(),
            gamma: self.gamma,
            seed: self.master_seed,
            trials: self.trials,
            max_candidates: self.max_candidates,
            matrix: self.matrix,
            comm_noise: (!self.comm.is_zero()).then(|| NoiseSpec::Pmf(self.comm.pmf().to_vec())),
            sensing_noise: (!self.sensing.is_identity())
                .then(|| SensingSpec::Table(self.sensing.transition().to_vec())),
            source,
            phase: self.phase.clone(),
        }
    }

    /// Parses TOML; relative positions files resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Scenario> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Scenario::from_config(cfg, base_dir)
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::parse(&text, path.parent())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&self.to_config()).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioBuilder {
    scenario: Scenario,
}

impl ScenarioBuilder {
    pub fn gamma(mut self, gamma: f64) -> Self {
        self.scenario.gamma = gamma;
        self
    }

    pub fn comm(mut self, comm: CommNoise) -> Self {
        self.scenario.comm = comm;
        self
    }

    pub fn sensing(mut self, sensing: SensingChannel) -> Self {
        self.scenario.sensing = sensing;
        self
    }

    pub fn matrix(mut self, mode: MatrixMode) -> Self {
        self.scenario.matrix = mode;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.scenario.master_seed = seed;
        self
    }

    pub fn trials(mut self, trials: u64) -> Self {
        self.scenario.trials = trials;
        self
    }

    pub fn max_candidates(mut self, cap: u64) -> Self {
        self.scenario.max_candidates = cap;
        self
    }

    pub fn build(self) -> Result<Scenario> {
        self.scenario.validate()?;
        Ok(self.scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SI: &str = r#"
n = 12
m = 6
q = 2
gamma = 0.5
seed = 3
trials = 50
comm_noise = 0.01

[source]
model = "si"
pmf = [0.89, 0.11]
"#;

    #[test]
    fn parse_si() {
        let s = Scenario::parse(SI, None).unwrap();
        assert_eq!(s.regime(), Regime::Nc);
        assert_eq!(s.comm.pmf(), &[0.99, 0.01]);
        assert_eq!(s.max_candidates, DEFAULT_MAX_CANDIDATES);
        let back = Scenario::parse(&s.to_toml().unwrap(), None).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SI.replace("trials = 50", "trials = 50\ntrails = 2");
        assert!(matches!(Scenario::parse(&bad, None), Err(Error::Config(_))));
        let bad = SI.replace("model = \"si\"", "model = \"si\"\nfoo = 1");
        assert!(matches!(Scenario::parse(&bad, None), Err(Error::Config(_))));
    }

    #[test]
    fn stm_and_sensing_table() {
        let text = r#"
n = 8
m = 4
q = 3
gamma = 0.4
sensing_noise = [[0.9, 0.05, 0.05], [0.05, 0.9, 0.05], [0.05, 0.05, 0.9]]

[source]
model = "stm"
r = 1
kernel = [[0.8, 0.1, 0.1], [0.2, 0.7, 0.1], [0.3, 0.3, 0.4]]
"#;
        let s = Scenario::parse(text, None).unwrap();
        assert_eq!(s.regime(), Regime::Ns);
        let back = Scenario::parse(&s.to_toml().unwrap(), None).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn gaussian_positions() {
        let text = r#"
n = 10
m = 5
q = 2
gamma = 0.5
seed = 9

[source]
model = "gaussian"
lambda = 10.0
n = 10
"#;
        let s = Scenario::parse(text, None).unwrap();
        let again = Scenario::parse(text, None).unwrap();
        assert_eq!(s, again);
        let back = Scenario::parse(&s.to_toml().unwrap(), None).unwrap();
        assert_eq!(back, s);

        let dir = tempfile::tempdir().unwrap();
        let SourceModel::GaussianField(g) = &s.source else { unreachable!() };
        crate::gaussian::write_positions(&dir.path().join("pos.csv"), g.positions()).unwrap();
        let with_file = text.replace("n = 10\n\"", "") + "positions-file = \"pos.csv\"\n";
        let loaded = Scenario::parse(&with_file, Some(dir.path())).unwrap();
        let SourceModel::GaussianField(g2) = &loaded.source else { unreachable!() };
        assert_eq!(g2.positions(), g.positions());
        let roundtrip = Scenario::parse(&loaded.to_toml().unwrap(), Some(dir.path())).unwrap();
        assert_eq!(roundtrip, loaded);
    }

    #[test]
    fn validation_errors() {
        assert!(Scenario::parse(&SI.replace("gamma = 0.5", "gamma = 0.7"), None).is_err());
        assert!(Scenario::parse(&SI.replace("q = 2", "q = 3"), None).is_err());
        let id = SI.replace("trials = 50", "trials = 50\nmatrix = \"identity\"");
        assert!(Scenario::parse(&id, None).is_err());
        let id = id.replace("m = 6", "m = 12");
        assert_eq!(Scenario::parse(&id, None).unwrap().matrix, MatrixMode::Identity);
    }
}

//! Sign-quantized Gaussian random field over sensors in the unit disk.
//!
//! Sensor readings are `Ω ~ N(0, Σ)` with `Σ_ij = exp(-λ d_ij²)` and the
//! binary state is `Θ_i = 0` iff `Ω_i < 0`. As sensors get denser the nearest
//! neighbour correlation approaches one and the entropy rate goes to zero.

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldVec};
use crate::info;
use crate::seed;
use crate::source::{EntropyMethod, EntropyReport};

pub const DEFAULT_JITTER: f64 = 1e-10;
/// Jitter is multiplied by 10 after each failed factorization, up to this.
pub const MAX_JITTER: f64 = 1e-6;

/// `ε(ρ) = 1/4 - arctan(ρ / sqrt(1 - ρ²)) / 2π`, the probability that two
/// unit-variance Gaussians with correlation `ρ` fall on a given pair of
/// opposite sides of zero. `Pr(Θ_n ≠ Θ_j) = 2ε(ρ)`.
pub fn epsilon_rho(rho: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("correlation {rho} outside [0, 1)")));
    }
    Ok(0.25 - (rho / (1.0 - rho * rho).sqrt()).atan() / (2.0 * PI))
}

/// `H(Θ_n | Θ_j) = H2(2ε(ρ))` for a sign-quantized correlated pair.
pub fn conditional_entropy_bound(rho: f64) -> Result<f64> {
    Ok(info::binary_entropy(2.0 * epsilon_rho(rho)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorParams {
    /// Number of nearest earlier sensors used as conditioning context.
    pub context: usize,
    /// Lower bound on the total number of sampled symbols.
    pub min_symbols: usize,
    pub min_realizations: usize,
    /// Batches for the batch-means confidence interval.
    pub batches: usize,
    pub seed: u64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            context: 4,
            min_symbols: 100_000,
            min_realizations: 1000,
            batches: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianFieldSource {
    lambda: f64,
    positions: Vec<[f64; 2]>,
    jitter: f64,
    positions_file: Option<PathBuf>,
    lower: DMatrix<f64>,
    used_jitter: f64,
}

impl GaussianFieldSource {
    pub fn new(lambda: f64, positions: Vec<[f64; 2]>, jitter: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        if positions.is_empty() {
            return Err(Error::InvalidParameter("at least one sensor is required".into()));
        }
        if !(jitter >= 0.0 && jitter.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid jitter {jitter}")));
        }
        let sigma = covariance(lambda, &positions);
        let (lower, used_jitter) = factor(&sigma, jitter)?;
        Ok(GaussianFieldSource {
            lambda,
            positions,
            jitter,
            positions_file: None,
            lower,
            used_jitter,
        })
    }

    /// `n` sensors placed uniformly on the unit disk (radius `sqrt(U)`,
    /// angle `2πV`).
    pub fn random_placement(lambda: f64, n: usize, jitter: f64, seed: u64) -> Result<Self> {
        let mut rng = seed::rng(seed);
        let positions = (0..n)
            .map(|_| {
                let r = rng.random::<f64>().sqrt();
                let t = 2.0 * PI * rng.random::<f64>();
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        Self::new(lambda, positions, jitter)
    }

    pub fn from_positions_file(lambda: f64, path: &Path, jitter: f64) -> Result<Self> {
        let positions = read_positions(path)?;
        let mut src = Self::new(lambda, positions, jitter)?;
        src.positions_file = Some(path.to_path_buf());
        Ok(src)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Jitter that actually made the factorization succeed.
    pub fn used_jitter(&self) -> f64 {
        self.used_jitter
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn positions_file(&self) -> Option<&Path> {
        self.positions_file.as_deref()
    }

    /// Records the file the positions came from, as it should be written back.
    pub fn set_positions_file(&mut self, path: PathBuf) {
        self.positions_file = Some(path);
    }

    pub fn n_sensors(&self) -> usize {
        self.positions.len()
    }

    pub fn covariance(&self) -> DMatrix<f64> {
        covariance(self.lambda, &self.positions)
    }

    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        (-self.lambda * dist2(self.positions[i], self.positions[j])).exp()
    }

    fn sample_with(&self, rng: &mut seed::Rng) -> Vec<Elem> {
        let n = self.n_sensors();
        let z = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let omega = &self.lower * z;
        omega.iter().map(|&w| if w < 0.0 { 0 } else { 1 }).collect()
    }

    pub fn sample(&self, seed: u64) -> Result<FieldVec> {
        Ok(FieldVec(self.sample_with(&mut seed::rng(seed))))
    }

    /// For each sensor, the indices of up to `context` nearest sensors among
    /// those with a smaller index (ties broken by index).
    pub fn earlier_neighbours(&self, context: usize) -> Vec<Vec<usize>> {
        (0..self.n_sensors())
            .map(|n| {
                let mut prev: Vec<(f64, usize)> =
                    (0..n).map(|i| (dist2(self.positions[n], self.positions[i]), i)).collect();
                prev.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                prev.into_iter().take(context).map(|(_, i)| i).collect()
            })
            .collect()
    }

    /// Upper bound on the per-sensor conditional entropy from the nearest
    /// earlier sensor alone, averaged over sensors:
    /// `(1 + Σ_{n≥2} H2(2ε(ρ_n))) / N`.
    pub fn nearest_neighbour_bound(&self) -> f64 {
        let nn = self.earlier_neighbours(1);
        let total: f64 = nn
            .iter()
            .enumerate()
            .map(|(n, prev)| match prev.first() {
                None => 1.0,
                Some(&j) => {
                    let rho = self.correlation(n, j).min(1.0 - 1e-16);
                    conditional_entropy_bound(rho).unwrap_or(0.0)
                }
            })
            .sum();
        total / self.n_sensors() as f64
    }

    /// Plug-in estimates of `H(Θ_n | nearest earlier context)` for every
    /// sensor, from `realizations` independent field samples.
    pub fn conditional_entropy_profile(&self, context: usize, realizations: &[Vec<Elem>]) -> Vec<f64> {
        let neighbours = self.earlier_neighbours(context);
        neighbours
            .iter()
            .enumerate()
            .map(|(n, ctx)| {
                let joint = realizations.iter().map(|r| {
                    ctx.iter().fold(0u64, |acc, &i| acc * 2 + r[i] as u64) * 2 + r[n] as u64
                });
                let h_joint = info::plugin_entropy(joint);
                let h_ctx = info::plugin_entropy(
                    realizations
                        .iter()
                        .map(|r| ctx.iter().fold(0u64, |acc, &i| acc * 2 + r[i] as u64)),
                );
                (h_joint - h_ctx).max(0.0)
            })
            .collect()
    }

    /// Cesàro-average entropy-rate estimate: the mean over sensors of the
    /// plug-in conditional entropy given the nearest earlier sensors.
    pub fn estimate_entropy_rate(&self, params: &EstimatorParams) -> Result<EntropyReport> {
        if params.batches == 0 {
            return Err(Error::InvalidParameter("at least one batch is required".into()));
        }
        let n = self.n_sensors();
        let mut k = params.min_realizations.max(params.min_symbols.div_ceil(n));
        k = k.div_ceil(params.batches) * params.batches;
        let mut rng = seed::rng(params.seed);
        let draws: Vec<Vec<Elem>> = (0..k).map(|_| self.sample_with(&mut rng)).collect();
        let mean = |slice: &[Vec<Elem>]| {
            let prof = self.conditional_entropy_profile(params.context, slice);
            prof.iter().sum::<f64>() / n as f64
        };
        let rate = mean(&draws);
        let ci_halfwidth = if params.batches > 1 {
            let per = k / params.batches;
            let est: Vec<f64> = draws.chunks(per).map(mean).collect();
            let m = est.iter().sum::<f64>() / est.len() as f64;
            let var = est.iter().map(|e| (e - m).powi(2)).sum::<f64>() / (est.len() - 1) as f64;
            1.96 * (var / est.len() as f64).sqrt()
        } else {
            f64::NAN
        };
        Ok(EntropyReport {
            rate,
            method: EntropyMethod::Estimated {
                context: params.context,
                samples: k * n,
                ci_halfwidth,
            },
        })
    }
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn covariance(lambda: f64, positions: &[[f64; 2]]) -> DMatrix<f64> {
    let n = positions.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            (-lambda * dist2(positions[i], positions[j])).exp()
        }
    })
}

fn factor(sigma: &DMatrix<f64>, jitter: f64) -> Result<(DMatrix<f64>, f64)> {
    let n = sigma.nrows();
    let mut j = jitter;
    loop {
        let regularized = sigma + DMatrix::identity(n, n) * j;
        if let Some(ch) = regularized.cholesky() {
            return Ok((ch.l(), j));
        }
        let next = if j == 0.0 { DEFAULT_JITTER } else { j * 10.0 };
        if next > MAX_JITTER * (1.0 + 1e-9) {
            return Err(Error::Cholesky { jitter: j });
        }
        j = next;
    }
}

/// Reads `x,y` pairs, one sensor per line. `#` comment lines are skipped.
pub fn read_positions(path: &Path) -> Result<Vec<[f64; 2]>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    reader
        .deserialize::<(f64, f64)>()
        .enumerate()
        .map(|(i, row)| {
            row.map(|(x, y)| [x, y])
                .map_err(|e| Error::Config(format!("{}: record {} is not an x,y pair: {e}", path.display(), i + 1)))
        })
        .collect()
}

pub fn write_positions(path: &Path, positions: &[[f64; 2]]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    file.write_all(b"# x,y\n").map_err(io_err)?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    for p in positions {
        writer
            .serialize((p[0], p[1]))
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    writer.flush().map_err(io_err)
}

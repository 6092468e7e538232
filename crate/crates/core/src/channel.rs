//! Sensing channel `p(x | θ)`, iid communication noise `p_u`, the sparse
//! random matrix law and the measurement map `y = A x + u`.
//!
//! The four noise regimes are compositions of these pieces: an identity
//! [`SensingChannel`] and a point-mass [`CommNoise`] give the noiseless case.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldMatrix, FieldVec};
use crate::info;
use crate::seed;
use crate::source::Categorical;

/// Memoryless, stationary channel from θ to x. Row `θ` is `p(· | θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SensingChannel {
    transition: Vec<Vec<f64>>,
    log_transition: Vec<Vec<f64>>,
    rows: Vec<Categorical>,
}

impl SensingChannel {
    pub fn new(transition: Vec<Vec<f64>>) -> Result<Self> {
        let q = transition.len();
        if q < 2 {
            return Err(Error::InvalidDistribution("transition table needs q >= 2 rows".into()));
        }
        for (t, row) in transition.iter().enumerate() {
            info::validate_pmf(row, q, &format!("sensing row {t}"))?;
        }
        Ok(SensingChannel {
            log_transition: transition
                .iter()
                .map(|r| r.iter().map(|&p| if p > 0.0 { p.log2() } else { f64::NEG_INFINITY }).collect())
                .collect(),
            rows: transition.iter().map(|r| Categorical::new(r)).collect(),
            transition,
        })
    }

    pub fn identity(q: u32) -> Self {
        let q = q as usize;
        Self::new((0..q).map(|i| (0..q).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect())
            .expect("identity table is stochastic")
    }

    /// `x = θ` with probability `1 - flip`, otherwise uniform over the other
    /// `q - 1` symbols.
    pub fn symmetric_flip(q: u32, flip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip) || q < 2 {
            return Err(Error::InvalidParameter(format!("flip probability {flip} with q = {q}")));
        }
        let q = q as usize;
        let off = flip / (q - 1) as f64;
        Self::new(
            (0..q)
                .map(|i| (0..q).map(|j| if i == j { 1.0 - flip } else { off }).collect())
                .collect(),
        )
    }

    pub fn q(&self) -> u32 {
        self.transition.len() as u32
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn is_identity(&self) -> bool {
        self.transition
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &p)| p == if i == j { 1.0 } else { 0.0 }))
    }

    #[inline]
    pub fn log2_prob(&self, x: Elem, theta: Elem) -> f64 {
        self.log_transition[theta as usize][x as usize]
    }

    /// `log2 p(x^N | θ^N)` for the memoryless channel.
    pub fn log2_prob_vec(&self, x: &[Elem], theta: &[Elem]) -> f64 {
        x.iter().zip(theta).map(|(&a, &t)| self.log2_prob(a, t)).sum()
    }

    /// `H(x | Θ)` per symbol when Θ has marginal `pi`.
    pub fn conditional_entropy(&self, pi: &[f64]) -> f64 {
        pi.iter().zip(&self.transition).map(|(&p, row)| p * info::entropy(row)).sum()
    }

    /// Output marginal `Σ_θ π(θ) p(x | θ)`.
    pub fn output_marginal(&self, pi: &[f64]) -> Vec<f64> {
        let q = self.transition.len();
        (0..q)
            .map(|x| pi.iter().zip(&self.transition).map(|(&p, row)| p * row[x]).sum())
            .collect()
    }

    pub fn apply(&self, field: &Field, theta: &[Elem], seed: u64) -> Result<FieldVec> {
        if field.q() != self.q() {
            return Err(Error::InvalidParameter(format!(
                "channel over GF({}) applied in GF({})",
                self.q(),
                field.q()
            )));
        }
        field.check_vec(theta)?;
        let mut rng = seed::rng(seed);
        Ok(FieldVec(theta.iter().map(|&t| self.rows[t as usize].sample(&mut rng)).collect()))
    }
}

/// Iid communication noise on each measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct CommNoise {
    pmf: Vec<f64>,
    log_pmf: Vec<f64>,
    sampler: Categorical,
}

impl CommNoise {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        info::validate_pmf(&pmf, pmf.len(), "noise pmf")?;
        if pmf.len() < 2 {
            return Err(Error::InvalidDistribution("noise pmf needs q >= 2 entries".into()));
        }
        Ok(CommNoise {
            log_pmf: pmf.iter().map(|&p| if p > 0.0 { p.log2() } else { f64::NEG_INFINITY }).collect(),
            sampler: Categorical::new(&pmf),
            pmf,
        })
    }

    pub fn zero(q: u32) -> Self {
        let mut pmf = vec![0.0; q as usize];
        pmf[0] = 1.0;
        Self::new(pmf).expect("point mass is a pmf")
    }

    /// `Pr(u ≠ 0) = p_nonzero` spread evenly over the nonzero symbols, the
    /// entropy-maximizing noise at that error level.
    pub fn worst_case(q: u32, p_nonzero: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_nonzero) || q < 2 {
            return Err(Error::InvalidParameter(format!("noise level {p_nonzero} with q = {q}")));
        }
        let mut pmf = vec![p_nonzero / (q - 1) as f64; q as usize];
        pmf[0] = 1.0 - p_nonzero;
        Self::new(pmf)
    }

    pub fn q(&self) -> u32 {
        self.pmf.len() as u32
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn is_zero(&self) -> bool {
        self.pmf[0] == 1.0
    }

    pub fn entropy(&self) -> f64 {
        info::entropy(&self.pmf)
    }

    pub fn p_nonzero(&self) -> f64 {
        1.0 - self.pmf[0]
    }

    /// `log2 p_u^M(u)`, accumulated from symbol counts.
    pub fn log2_prob(&self, u: &[Elem]) -> f64 {
        let mut counts = vec![0u32; self.pmf.len()];
        for &e in u {
            counts[e as usize] += 1;
        }
        counts
            .iter()
            .zip(&self.log_pmf)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, &lp)| c as f64 * lp)
            .sum()
    }

    pub fn sample(&self, m: usize, seed: u64) -> FieldVec {
        let mut rng = seed::rng(seed);
        FieldVec((0..m).map(|_| self.sampler.sample(&mut rng)).collect())
    }
}

/// Shannon entropy of the noise, in bits.
pub fn noise_entropy(noise: &CommNoise) -> f64 {
    noise.entropy()
}

/// Entries iid with `Pr(0) = 1 - γ` and `γ / (q - 1)` on each nonzero symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixLaw {
    pub gamma: f64,
    pub q: u32,
    pub rows: usize,
    pub cols: usize,
}

impl MatrixLaw {
    pub fn new(gamma: f64, q: u32, rows: usize, cols: usize) -> Result<Self> {
        let law = MatrixLaw { gamma, q, rows, cols };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        let max = 1.0 - 1.0 / self.q as f64;
        if !(self.gamma > 0.0 && self.gamma <= max + 1e-15) {
            return Err(Error::InvalidParameter(format!(
                "sparsity {} outside (0, 1 - 1/q] = (0, {max}]",
                self.gamma
            )));
        }
        Ok(())
    }

    /// One entry: a uniform draw below `1 - γ` is zero, otherwise a uniform
    /// nonzero symbol.
    #[inline]
    pub(crate) fn sample_entry(&self, rng: &mut seed::Rng) -> Elem {
        let u: f64 = rng.random();
        if u < 1.0 - self.gamma {
            0
        } else {
            rng.random_range(1..self.q)
        }
    }

    pub fn sample(&self, seed: u64) -> Result<FieldMatrix> {
        self.validate()?;
        let mut rng = seed::rng(seed);
        let data = (0..self.rows * self.cols).map(|_| self.sample_entry(&mut rng)).collect();
        FieldMatrix::from_vec(self.rows, self.cols, data)
    }
}

pub fn sample_matrix(law: &MatrixLaw, seed: u64) -> Result<FieldMatrix> {
    law.sample(seed)
}

/// `y = A x + u`.
pub fn measure(field: &Field, a: &FieldMatrix, x: &[Elem], u: &[Elem]) -> Result<FieldVec> {
    if u.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "noise has length {} but the matrix has {} rows",
            u.len(),
            a.rows()
        )));
    }
    field.check_vec(u)?;
    let ax = field.matvec(a, x)?;
    field.add_vec(&ax, u)
}

//! Source models for the state vector: iid (SI), stationary r-th order
//! Markov (StM) and the quantized Gaussian field (a general stationary
//! ergodic source).

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldVec};
use crate::gaussian::GaussianFieldSource;
use crate::info;
use crate::seed;

/// Power iteration stops when the L1 change drops below this.
pub const STATIONARY_TOLERANCE: f64 = 1e-12;
pub const STATIONARY_MAX_ITERATIONS: usize = 100_000;
/// An explicit initial distribution counts as stationary within this residual.
pub const STATIONARY_RESIDUAL: f64 = 1e-9;
/// Largest `q^r` for which the StM rate is computed exactly.
pub const MAX_EXACT_STATES: usize = 4096;

/// Inverse-CDF sampler over symbols `0..len`, scanned in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Categorical {
    cdf: Vec<f64>,
    last_positive: Elem,
}

impl Categorical {
    pub(crate) fn new(pmf: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let last_positive = pmf.iter().rposition(|&p| p > 0.0).unwrap_or(0) as Elem;
        Categorical { cdf, last_positive }
    }

    #[inline]
    pub(crate) fn sample(&self, rng: &mut seed::Rng) -> Elem {
        let u: f64 = rng.random();
        // the last symbol with positive mass absorbs rounding in the cdf tail
        match self.cdf.iter().position(|&c| u < c) {
            Some(i) => i as Elem,
            None => self.last_positive,
        }
    }
}

fn log2_or_neg_inf(p: f64) -> f64 {
    if p > 0.0 {
        p.log2()
    } else {
        f64::NEG_INFINITY
    }
}

/// Iid source with symbol pmf `p_Θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiSource {
    pmf: Vec<f64>,
    log_pmf: Vec<f64>,
    sampler: Categorical,
}

impl SiSource {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        info::validate_pmf(&pmf, pmf.len(), "source pmf")?;
        if pmf.len() < 2 {
            return Err(Error::InvalidDistribution("source pmf needs q >= 2 entries".into()));
        }
        Ok(SiSource {
            log_pmf: pmf.iter().map(|&p| log2_or_neg_inf(p)).collect(),
            sampler: Categorical::new(&pmf),
            pmf,
        })
    }

    /// Binary source with `Pr(Θ = 1) = p1`.
    pub fn bernoulli(p1: f64) -> Result<Self> {
        Self::new(vec![1.0 - p1, p1])
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn q(&self) -> u32 {
        self.pmf.len() as u32
    }

    /// Sparse in the sense `p_Θ(0) > 1/2`.
    pub fn is_sparse(&self) -> bool {
        self.pmf[0] > 0.5
    }

    pub fn log2_prob(&self, theta: &[Elem]) -> f64 {
        let mut counts = vec![0u32; self.pmf.len()];
        for &t in theta {
            counts[t as usize] += 1;
        }
        counts
            .iter()
            .zip(&self.log_pmf)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, &lp)| c as f64 * lp)
            .sum()
    }

    pub fn entropy_rate(&self) -> f64 {
        info::entropy(&self.pmf)
    }
}

/// Stationary r-th order Markov source. States are the last `r` symbols
/// packed base `q`, oldest symbol most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct StmSource {
    q: u32,
    order: usize,
    kernel: Vec<Vec<f64>>,
    initial: Vec<f64>,
    stationary: bool,
    log_kernel: Vec<Vec<f64>>,
    log_initial: Vec<f64>,
}

impl StmSource {
    /// `kernel` has `q^order` rows of length `q`. With `initial = None` the
    /// stationary state distribution is computed and used.
    pub fn new(order: usize, kernel: Vec<Vec<f64>>, initial: Option<Vec<f64>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("Markov order must be at least 1".into()));
        }
        let q = kernel.first().map_or(0, Vec::len);
        if q < 2 {
            return Err(Error::InvalidDistribution("kernel rows need q >= 2 entries".into()));
        }
        let states = (q as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
        if states != kernel.len() as u128 {
            return Err(Error::InvalidDistribution(format!(
                "kernel has {} rows, expected q^r = {states}",
                kernel.len()
            )));
        }
        for (s, row) in kernel.iter().enumerate() {
            info::validate_pmf(row, q, &format!("kernel row {s}"))?;
        }
        let mut src = StmSource {
            q: q as u32,
            order,
            log_kernel: Vec::new(),
            log_initial: Vec::new(),
            kernel,
            initial: Vec::new(),
            stationary: false,
        };
        let initial = match initial {
            Some(init) => {
                info::validate_pmf(&init, src.kernel.len(), "initial distribution")?;
                init
            }
            None => src.stationary_distribution()?,
        };
        src.stationary = src.residual(&initial) <= STATIONARY_RESIDUAL;
        src.log_initial = initial.iter().map(|&p| log2_or_neg_inf(p)).collect();
        src.log_kernel = src
            .kernel
            .iter()
            .map(|row| row.iter().map(|&p| log2_or_neg_inf(p)).collect())
            .collect();
        src.initial = initial;
        Ok(src)
    }

    /// First-order binary chain that flips its symbol with probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        Self::new(1, vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]], None)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    /// Whether the initial distribution is invariant under the kernel.
    pub fn is_stationary(&self) -> bool {
        self.stationary
    }

    fn num_states(&self) -> usize {
        self.kernel.len()
    }

    #[inline]
    fn next_state(&self, state: usize, symbol: Elem) -> usize {
        (state * self.q as usize + symbol as usize) % self.num_states()
    }

    fn step(&self, dist: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; dist.len()];
        for (s, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for (x, &k) in self.kernel[s].iter().enumerate() {
                out[self.next_state(s, x as Elem)] += mass * k;
            }
        }
        out
    }

    fn residual(&self, dist: &[f64]) -> f64 {
        self.step(dist).iter().zip(dist).map(|(a, b)| (a - b).abs()).sum()
    }

    /// Stationary distribution of the induced state chain by power iteration
    /// from the uniform distribution.
    pub fn stationary_distribution(&self) -> Result<Vec<f64>> {
        let n = self.num_states();
        let mut dist = vec![1.0 / n as f64; n];
        let mut change = f64::INFINITY;
        for _ in 0..STATIONARY_MAX_ITERATIONS {
            let next = self.step(&dist);
            change = next.iter().zip(&dist).map(|(a, b)| (a - b).abs()).sum();
            dist = next;
            if change < STATIONARY_TOLERANCE {
                return Ok(dist);
            }
        }
        Err(Error::NotErgodic {
            iterations: STATIONARY_MAX_ITERATIONS,
            residual: change,
        })
    }

    /// Stationary marginal of a single symbol.
    pub fn marginal(&self) -> Result<Vec<f64>> {
        let pi = self.stationary_distribution()?;
        let mut m = vec![0.0; self.q as usize];
        for (s, &p) in pi.iter().enumerate() {
            m[s % self.q as usize] += p;
        }
        Ok(m)
    }

    pub fn log2_prob(&self, theta: &[Elem]) -> Result<f64> {
        if theta.len() < self.order {
            return Err(Error::InvalidParameter(format!(
                "sequence of length {} is shorter than the Markov order {}",
                theta.len(),
                self.order
            )));
        }
        let q = self.q as usize;
        let mut state = theta[..self.order].iter().fold(0, |s, &t| s * q + t as usize);
        let mut counts = vec![0u32; self.num_states() * q];
        for &t in &theta[self.order..] {
            counts[state * q + t as usize] += 1;
            state = self.next_state(state, t);
        }
        let initial_state = theta[..self.order].iter().fold(0, |s, &t| s * q + t as usize);
        let mut acc = self.log_initial[initial_state];
        for (idx, &c) in counts.iter().enumerate() {
            if c > 0 {
                acc += c as f64 * self.log_kernel[idx / q][idx % q];
            }
        }
        Ok(acc)
    }

    fn sample(&self, n: usize, rng: &mut seed::Rng) -> Result<FieldVec> {
        if n < self.order {
            return Err(Error::InvalidParameter(format!(
                "cannot sample {n} symbols from an order-{} chain",
                self.order
            )));
        }
        let q = self.q as usize;
        let mut state = Categorical::new(&self.initial).sample(rng) as usize;
        let mut out = Vec::with_capacity(n);
        let mut s = state;
        let mut head = vec![0; self.order];
        for slot in head.iter_mut().rev() {
            *slot = (s % q) as Elem;
            s /= q;
        }
        out.extend_from_slice(&head);
        let rows: Vec<Categorical> = self.kernel.iter().map(|r| Categorical::new(r)).collect();
        while out.len() < n {
            let x = rows[state].sample(rng);
            out.push(x);
            state = self.next_state(state, x);
        }
        Ok(FieldVec(out))
    }
}

/// How an [`EntropyReport`] was obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum EntropyMethod {
    Exact,
    Estimated {
        context: usize,
        samples: usize,
        ci_halfwidth: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    /// Entropy rate in bits per symbol.
    pub rate: f64,
    pub method: EntropyMethod,
}

/// Path length used when an StM state space is too large for the exact rate.
pub const STM_ESTIMATE_LENGTH: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum SourceModel {
    Si(SiSource),
    Stm(StmSource),
    GaussianField(GaussianFieldSource),
}

impl SourceModel {
    pub fn q(&self) -> u32 {
        match self {
            SourceModel::Si(s) => s.q(),
            SourceModel::Stm(s) => s.q(),
            SourceModel::GaussianField(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SourceModel::Si(_) => "si",
            SourceModel::Stm(_) => "stm",
            SourceModel::GaussianField(_) => "gaussian",
        }
    }

    /// A length-`n` realization; a pure function of `(self, n, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<FieldVec> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample length must be at least 1".into()));
        }
        let mut rng = seed::rng(seed);
        match self {
            SourceModel::Si(s) => Ok(FieldVec((0..n).map(|_| s.sampler.sample(&mut rng)).collect())),
            SourceModel::Stm(s) => s.sample(n, &mut rng),
            SourceModel::GaussianField(g) => {
                if n != g.n_sensors() {
                    return Err(Error::InvalidParameter(format!(
                        "Gaussian field has {} sensors, asked for {n} symbols",
                        g.n_sensors()
                    )));
                }
                g.sample(seed)
            }
        }
    }

    /// Pointwise prior `log2 p(θ^N)`. Only SI and StM priors are evaluable.
    pub fn log2_prob(&self, theta: &[Elem]) -> Result<f64> {
        match self {
            SourceModel::Si(s) => Ok(s.log2_prob(theta)),
            SourceModel::Stm(s) => s.log2_prob(theta),
            SourceModel::GaussianField(_) => Err(Error::Unsupported(
                "the quantized Gaussian field has no closed-form pointwise prior".into(),
            )),
        }
    }

    pub fn entropy_rate(&self) -> Result<EntropyReport> {
        match self {
            SourceModel::Si(s) => Ok(EntropyReport {
                rate: s.entropy_rate(),
                method: EntropyMethod::Exact,
            }),
            SourceModel::Stm(s) if s.num_states() <= MAX_EXACT_STATES => {
                let pi = s.stationary_distribution()?;
                let rate = pi
                    .iter()
                    .zip(&s.kernel)
                    .map(|(&p, row)| p * info::entropy(row))
                    .sum::<f64>();
                Ok(EntropyReport {
                    rate: rate.clamp(0.0, (s.q as f64).log2()),
                    method: EntropyMethod::Exact,
                })
            }
            SourceModel::Stm(s) => {
                let path = s.sample(STM_ESTIMATE_LENGTH, &mut seed::rng(0))?;
                let rate = info::plugin_conditional_entropy(&path, s.q, s.order)?;
                Ok(EntropyReport {
                    rate,
                    method: EntropyMethod::Estimated {
                        context: s.order,
                        samples: STM_ESTIMATE_LENGTH,
                        ci_halfwidth: f64::NAN,
                    },
                })
            }
            SourceModel::GaussianField(g) => g.estimate_entropy_rate(&Default::default()),
        }
    }

    /// Single-symbol stationary marginal.
    pub fn marginal(&self) -> Result<Vec<f64>> {
        match self {
            SourceModel::Si(s) => Ok(s.pmf.clone()),
            SourceModel::Stm(s) => s.marginal(),
            SourceModel::GaussianField(_) => Ok(vec![0.5, 0.5]),
        }
    }

    /// Whether the rate of a noisy observation of this source is exactly
    /// computable (iid sources only).
    pub fn is_memoryless(&self) -> bool {
        matches!(self, SourceModel::Si(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn degenerate_si_samples_zeros() {
        let src = SourceModel::Si(SiSource::new(vec![1.0, 0.0, 0.0]).unwrap());
        assert!(src.sample(50, 3).unwrap().iter().all(|&e| e == 0));
        assert_eq!(src.entropy_rate().unwrap().rate, 0.0);
    }

    #[test]
    fn si_frequency_concentrates() {
        let src = SourceModel::Si(SiSource::new(vec![0.89, 0.11]).unwrap());
        let v = src.sample(100_000, 9).unwrap();
        let freq = v.weight() as f64 / 1e5;
        assert!((freq - 0.11).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn si_rates() {
        let uniform = SiSource::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(uniform.entropy_rate(), 1.0);
        for q in [2usize, 3, 4, 8] {
            let s = SiSource::new(vec![1.0 / q as f64; q]).unwrap();
            assert_abs_diff_eq!(s.entropy_rate(), (q as f64).log2(), epsilon = 1e-12);
        }
        assert!(SiSource::new(vec![0.89, 0.11]).unwrap().is_sparse());
        assert!(!uniform.is_sparse());
    }

    #[test]
    fn sticky_chain_is_constant() {
        let stm = StmSource::new(1, vec![vec![1.0, 0.0], vec![0.0, 1.0]], Some(vec![0.5, 0.5])).unwrap();
        assert!(stm.is_stationary());
        let src = SourceModel::Stm(stm);
        for seed in 0..10 {
            let v = src.sample(40, seed).unwrap();
            assert!(v.iter().all(|&e| e == v[0]));
        }
    }

    #[test]
    fn symmetric_flip_rate() {
        let src = SourceModel::Stm(StmSource::binary_symmetric(0.1).unwrap());
        let r = src.entropy_rate().unwrap();
        assert_eq!(r.method, EntropyMethod::Exact);
        assert_abs_diff_eq!(r.rate, 0.468_995_593_589_281_2, epsilon = 1e-9);
        assert_abs_diff_eq!(src.marginal().unwrap()[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn periodic_chain_is_flagged() {
        // 0 -> 1 -> 0 with 2 -> 0: the uniform start oscillates forever
        let kernel = vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
        let err = StmSource::new(1, kernel.clone(), None).unwrap_err();
        assert!(matches!(err, Error::NotErgodic { .. }));
        let stm = StmSource::new(1, kernel, Some(vec![1.0, 0.0, 0.0])).unwrap();
        assert!(!stm.is_stationary());
        assert!(SourceModel::Stm(stm).entropy_rate().is_err());
    }

    #[test]
    fn second_order_rate_matches_plugin() {
        let kernel = vec![
            vec![0.9, 0.1],
            vec![0.4, 0.6],
            vec![0.3, 0.7],
            vec![0.2, 0.8],
        ];
        let stm = StmSource::new(2, kernel, None).unwrap();
        assert!(stm.is_stationary());
        let src = SourceModel::Stm(stm.clone());
        let exact = src.entropy_rate().unwrap().rate;
        let path = src.sample(1_000_000, 5).unwrap();
        let est = info::plugin_conditional_entropy(&path, 2, 2).unwrap();
        assert!((exact - est).abs() < 0.01, "exact {exact} est {est}");
    }

    #[test]
    fn stm_log_prob_matches_chain_rule() {
        let stm = StmSource::binary_symmetric(0.2).unwrap();
        let theta = [0, 0, 1, 1, 0];
        let expected = 0.5f64.log2() + 0.8f64.log2() + 0.2f64.log2() + 0.8f64.log2() + 0.2f64.log2();
        assert_abs_diff_eq!(stm.log2_prob(&theta).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn si_log_prob() {
        let si = SiSource::new(vec![0.9, 0.1]).unwrap();
        assert_abs_diff_eq!(si.log2_prob(&[1, 0]), (0.09f64).log2(), epsilon = 1e-12);
        let point = SiSource::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(point.log2_prob(&[0, 1]), f64::NEG_INFINITY);
    }

    #[test]
    fn invalid_inputs() {
        assert!(SiSource::new(vec![0.7, 0.7]).is_err());
        assert!(StmSource::new(1, vec![vec![0.5, 0.5]], None).is_err());
        assert!(StmSource::new(0, vec![vec![1.0, 0.0], vec![0.0, 1.0]], None).is_err());
        let src = SourceModel::Stm(StmSource::new(3, vec![vec![0.5, 0.5]; 8], None).unwrap());
        assert!(src.sample(2, 0).is_err());
        assert!(src.sample(0, 0).is_err());
    }
}

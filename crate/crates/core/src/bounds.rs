//! Necessary and sufficient compression-ratio thresholds, the collision
//! probability of a sparse random matrix and the finite-`N` upper bound on
//! the decoding error probability.
//!
//! Rates and entropies are in bits. Thresholds are the asymptotic values
//! with every slack term set to zero unless a slack is passed explicitly.

use crate::error::{Error, Result};
use crate::exponent::{error_exponent_nc, ExponentResult};
use crate::info::binary_entropy;
use crate::scenario::{Regime, Scenario};
use crate::seed;
use crate::source::SourceModel;
use crate::table::{Table, Value};

/// Arguments of the collision probability `Pr{Aμ = s}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FParams {
    /// Hamming weight of `μ`.
    pub d1: usize,
    /// Hamming weight of `s`.
    pub d2: usize,
    pub gamma: f64,
    pub q: u32,
    pub m: usize,
}

impl FParams {
    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::InvalidParameter(format!("field size {} < 2", self.q)));
        }
        let max = 1.0 - 1.0 / self.q as f64;
        if !(self.gamma > 0.0 && self.gamma <= max + 1e-15) {
            return Err(Error::InvalidParameter(format!("gamma {} outside (0, {max}]", self.gamma)));
        }
        if self.d1 == 0 {
            return Err(Error::InvalidParameter("d1 must be at least 1".into()));
        }
        if self.d2 > self.m {
            return Err(Error::InvalidParameter(format!("d2 = {} exceeds m = {}", self.d2, self.m)));
        }
        Ok(())
    }
}

/// `1 - γ/(1 - 1/Q)`, clamped at zero for the uniform law.
fn contraction(gamma: f64, q: u32) -> f64 {
    let qi = 1.0 / q as f64;
    (1.0 - gamma / (1.0 - qi)).max(0.0)
}

/// Probability that `Aμ = s` for fixed `μ` of weight `d1` and `s` of weight
/// `d2`, when the entries of `A` are iid with `Pr(0) = 1 - γ` and uniform
/// nonzero values otherwise:
///
/// `(1/Q + c^d1 (1 - 1/Q))^(M - d2) (1/Q - c^d1 / Q)^d2`, `c = 1 - γ/(1 - 1/Q)`.
pub fn f_collision(p: &FParams) -> Result<f64> {
    p.validate()?;
    let qi = 1.0 / p.q as f64;
    let cd = contraction(p.gamma, p.q).powi(p.d1 as i32);
    let zero = qi + cd * (1.0 - qi);
    let nonzero = qi - cd * qi;
    Ok(zero.powi((p.m - p.d2) as i32) * nonzero.powi(p.d2 as i32))
}

/// Rates entering the threshold formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    /// Entropy rate of the source.
    pub rate_theta: f64,
    /// Joint entropy rate of source and sensed output.
    pub rate_joint: f64,
    /// Entropy rate of the sensed output when exactly known.
    pub rate_x: Option<f64>,
    /// Entropy of one noise symbol.
    pub h_u: f64,
    pub q: u32,
    pub gamma: f64,
    pub regime: Regime,
}

const RATE_TOL: f64 = 1e-9;

impl BoundInputs {
    pub fn log_q(&self) -> f64 {
        (self.q as f64).log2()
    }

    pub fn validate(&self) -> Result<()> {
        let lq = self.log_q();
        let ok = self.q >= 2
            && self.rate_theta >= -RATE_TOL
            && self.rate_theta <= self.rate_joint + RATE_TOL
            && self.rate_joint <= lq + self.rate_theta + RATE_TOL
            && self.h_u >= -RATE_TOL
            && self.h_u <= lq + RATE_TOL
            && self.rate_x.is_none_or(|r| r >= -RATE_TOL && r <= self.rate_joint + RATE_TOL);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("inconsistent bound inputs {self:?}")))
        }
    }

    /// Exact or estimated rates for a scenario.
    pub fn from_scenario(s: &Scenario) -> Result<BoundInputs> {
        let rate_theta = s.source.entropy_rate()?.rate;
        let pi = s.source.marginal()?;
        let rate_joint = rate_theta + s.sensing.conditional_entropy(&pi);
        let rate_x = if s.sensing.is_identity() {
            Some(rate_theta)
        } else if s.source.is_memoryless() {
            Some(crate::info::entropy(&s.sensing.output_marginal(&pi)))
        } else {
            None
        };
        Ok(BoundInputs {
            rate_theta,
            rate_joint,
            rate_x,
            h_u: s.comm.entropy(),
            q: s.q(),
            gamma: s.gamma,
            regime: s.regime(),
        })
    }

    fn numerator(&self) -> f64 {
        if self.regime.has_sensing_noise() {
            self.rate_joint
        } else {
            self.rate_theta
        }
    }

    fn denominator(&self) -> f64 {
        if self.regime.has_comm_noise() {
            self.log_q() - self.h_u
        } else {
            self.log_q()
        }
    }
}

/// Conditions under which a threshold does not exist or is not met.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundFlags {
    /// `H(p_u) >= log Q`.
    pub uniform_noise: bool,
    /// `H(Θ, x) > log Q`.
    pub joint_exceeds_log_q: bool,
    /// `H(x) = 0`: the only necessary condition is `H(Θ, x) = 0`.
    pub degenerate_output: bool,
    /// `H(Θ | x) > 0` where computable: exact recovery is impossible.
    pub ambiguous_sensing: Option<bool>,
    /// The configured `γ` does not exceed `gamma_min`.
    pub gamma_too_small: bool,
}

pub fn gamma_min(h_u: f64) -> f64 {
    1.0 - (-h_u).exp2()
}

pub fn flags(inputs: &BoundInputs) -> BoundFlags {
    let noisy_sensing = inputs.regime.has_sensing_noise();
    let comm = inputs.regime.has_comm_noise();
    BoundFlags {
        uniform_noise: comm && inputs.h_u >= inputs.log_q() - RATE_TOL,
        joint_exceeds_log_q: noisy_sensing && inputs.rate_joint > inputs.log_q() + RATE_TOL,
        degenerate_output: inputs.rate_x.is_some_and(|r| r.abs() <= RATE_TOL),
        ambiguous_sensing: inputs.rate_x.map(|r| inputs.rate_joint - r > RATE_TOL),
        gamma_too_small: comm && inputs.h_u > 0.0 && inputs.gamma <= gamma_min(inputs.h_u),
    }
}

/// Asymptotic necessary threshold on `M/N`.
pub fn necessary_ratio(inputs: &BoundInputs) -> Result<Option<f64>> {
    inputs.validate()?;
    let fl = flags(inputs);
    if fl.uniform_noise || fl.degenerate_output {
        return Ok(None);
    }
    Ok(Some(inputs.numerator() / inputs.denominator()))
}

/// Asymptotic sufficient threshold on `M/N` and the lower bound on `γ`.
pub fn sufficient_ratio(inputs: &BoundInputs) -> Result<Option<(f64, f64)>> {
    inputs.validate()?;
    let fl = flags(inputs);
    if fl.uniform_noise || fl.joint_exceeds_log_q {
        return Ok(None);
    }
    let g = if inputs.regime.has_comm_noise() { gamma_min(inputs.h_u) } else { 0.0 };
    Ok(Some((inputs.numerator() / inputs.denominator(), g)))
}

/// Terms of the finite-`N` upper bound `P_e <= P1 + P2 + 2ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBound {
    pub e1: f64,
    pub e2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl UpperBound {
    pub fn total(&self, eps: f64) -> f64 {
        self.p1 + self.p2 + 2.0 * eps
    }
}

/// Exponent of `P1`.
pub fn exponent_e1(inputs: &BoundInputs, n: usize, m: usize, alpha: f64, eps: f64) -> f64 {
    let r = m as f64 / n as f64;
    let nf = n as f64;
    -r * (inputs.h_u + (1.0 - inputs.gamma).log2() + eps)
        - binary_entropy(alpha)
        - alpha * ((inputs.q - 1) as f64).log2()
        - (alpha * nf).log2() / nf
}

/// Exponent of `P2`.
pub fn exponent_e2(inputs: &BoundInputs, n: usize, m: usize, alpha: f64, eps: f64) -> f64 {
    let r = m as f64 / n as f64;
    let qi = 1.0 / inputs.q as f64;
    let k = (alpha * n as f64).ceil() as i32;
    let c = contraction(inputs.gamma, inputs.q).powi(k);
    -inputs.rate_theta - r * (inputs.h_u + (qi + c * (1.0 - qi)).log2() + eps) - eps
}

/// `P1(α) = 2^(-N E1)` and `P2(α) = 2^(-N E2)` without sensing noise.
pub fn upper_bound_nc(inputs: &BoundInputs, n: usize, m: usize, alpha: f64, eps: f64) -> Result<UpperBound> {
    inputs.validate()?;
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, 0.5)")));
    }
    if n == 0 || eps < 0.0 {
        return Err(Error::InvalidParameter("need n >= 1 and eps >= 0".into()));
    }
    let e1 = exponent_e1(inputs, n, m, alpha, eps);
    let e2 = exponent_e2(inputs, n, m, alpha, eps);
    let nf = n as f64;
    Ok(UpperBound {
        e1,
        e2,
        p1: (-nf * e1).exp2(),
        p2: (-nf * e2).exp2(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaSelection {
    pub alpha: f64,
    /// The right-hand side of the selection rule is zero, so `α` sits at
    /// the smallest value the `log(αN)/N` term allows.
    pub degenerate: bool,
    /// The rule holds on all of `(0, 0.5)`.
    pub saturated: bool,
}

pub const ALPHA_TOLERANCE: f64 = 1e-10;

/// Left-hand side of the `α` selection rule.
pub fn alpha_lhs(inputs: &BoundInputs, n: usize, alpha: f64, eps: f64) -> f64 {
    let nf = n as f64;
    let num = binary_entropy(alpha) + alpha * ((inputs.q - 1) as f64).log2() + (alpha * nf).log2() / nf;
    num / ((1.0 / (1.0 - inputs.gamma)).log2() - inputs.h_u - eps)
}

/// Right-hand side of the `α` selection rule.
pub fn alpha_rhs(inputs: &BoundInputs, eps: f64, xi: f64) -> f64 {
    (inputs.rate_theta + eps) / (inputs.log_q() - inputs.h_u - xi)
}

/// Largest `α in (0, 0.5)` with `lhs(α) <= rhs`, by bisection.
pub fn select_alpha(inputs: &BoundInputs, n: usize, eps: f64, xi: f64) -> Result<AlphaSelection> {
    inputs.validate()?;
    if inputs.regime.has_sensing_noise() {
        return Err(Error::Unsupported("alpha selection applies without sensing noise".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let denom = (1.0 / (1.0 - inputs.gamma)).log2() - inputs.h_u - eps;
    if denom <= 0.0 {
        return Err(Error::NoFeasibleAlpha(format!(
            "gamma = {} is not above 1 - 2^-(H(p_u) + eps)",
            inputs.gamma
        )));
    }
    let rhs_denom = inputs.log_q() - inputs.h_u - xi;
    if rhs_denom <= 0.0 {
        return Err(Error::NoFeasibleAlpha("communication noise is too close to uniform".into()));
    }
    let rhs = alpha_rhs(inputs, eps, xi);
    let degenerate = rhs <= 0.0;
    let hi_bound = 0.5;
    if alpha_lhs(inputs, n, hi_bound, eps) <= rhs {
        return Ok(AlphaSelection {
            alpha: hi_bound,
            degenerate,
            saturated: true,
        });
    }
    let (mut lo, mut hi) = (0.0, hi_bound);
    while hi - lo > ALPHA_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if alpha_lhs(inputs, n, mid, eps) <= rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo <= 0.0 {
        return Err(Error::NoFeasibleAlpha("no alpha above the bisection tolerance".into()));
    }
    Ok(AlphaSelection {
        alpha: lo,
        degenerate,
        saturated: false,
    })
}

/// All threshold quantities for one configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub necessary_ratio: Option<f64>,
    pub sufficient_ratio: Option<f64>,
    /// Lower bound on `γ`; zero without communication noise.
    pub gamma_min: f64,
    pub alpha_star: Option<AlphaSelection>,
    pub flags: BoundFlags,
    pub exponent: Option<ExponentResult>,
}

impl BoundReport {
    /// Two columns, `quantity` and `value`; absent quantities are empty.
    pub fn to_table(&self) -> Table {
        fn flag(b: bool) -> Value {
            Value::Int(b as u64)
        }
        let i = &self.inputs;
        let mut t = Table::new(["quantity", "value"]);
        let mut row = |k: &str, v: Value| t.push(vec![k.into(), v]);
        row("regime", Value::Text(i.regime.to_string()));
        row("q", Value::Int(i.q as u64));
        row("gamma", i.gamma.into());
        row("rate_theta", i.rate_theta.into());
        row("rate_joint", i.rate_joint.into());
        row("rate_x", i.rate_x.into());
        row("h_u", i.h_u.into());
        row("necessary_ratio", self.necessary_ratio.into());
        row("sufficient_ratio", self.sufficient_ratio.into());
        row("gamma_min", self.gamma_min.into());
        row("alpha_star", self.alpha_star.map(|a| a.alpha).into());
        row("alpha_degenerate", self.alpha_star.map_or(Value::Missing, |a| flag(a.degenerate)));
        row("alpha_saturated", self.alpha_star.map_or(Value::Missing, |a| flag(a.saturated)));
        row("flag_uniform_noise", flag(self.flags.uniform_noise));
        row("flag_joint_exceeds_log_q", flag(self.flags.joint_exceeds_log_q));
        row("flag_degenerate_output", flag(self.flags.degenerate_output));
        row("flag_ambiguous_sensing", self.flags.ambiguous_sensing.map_or(Value::Missing, flag));
        row("flag_gamma_too_small", flag(self.flags.gamma_too_small));
        let e = self.exponent.as_ref();
        row("error_exponent", e.map(|e| e.value).into());
        row("exponent_margin", e.map(|e| e.margin).into());
        row("exponent_converged", e.map_or(Value::Missing, |e| flag(e.converged)));
        t
    }
}

/// Builds a report. `alpha_n` selects `α` at that `N`; `exponent` gives
/// `(p_Θ, p_u, M/N)` for the error exponent.
pub fn report(
    inputs: &BoundInputs,
    alpha_n: Option<usize>,
    exponent: Option<(&[f64], &[f64], f64)>,
) -> Result<BoundReport> {
    let nec = necessary_ratio(inputs)?;
    let suf = sufficient_ratio(inputs)?;
    let alpha_star = match alpha_n {
        Some(n) if !inputs.regime.has_sensing_noise() => select_alpha(inputs, n, 0.0, 0.0).ok(),
        _ => None,
    };
    let exponent = match exponent {
        Some((pt, pu, r)) => Some(error_exponent_nc(pt, pu, inputs.q, r)?),
        None => None,
    };
    Ok(BoundReport {
        inputs: *inputs,
        necessary_ratio: nec,
        sufficient_ratio: suf.map(|(r, _)| r),
        gamma_min: suf.map_or_else(|| gamma_min(inputs.h_u), |(_, g)| g),
        alpha_star,
        flags: flags(inputs),
        exponent,
    })
}

/// Report for a scenario: `α` is selected at the scenario's `N`, and the
/// exponent is included for iid sources without sensing noise over
/// `GF(Q <= 4)`.
pub fn scenario_report(s: &Scenario) -> Result<BoundReport> {
    let inputs = BoundInputs::from_scenario(s)?;
    let exponent = match &s.source {
        SourceModel::Si(si) if !inputs.regime.has_sensing_noise() && s.q() <= 4 && s.m > 0 => {
            Some((si.pmf(), s.comm.pmf(), s.m as f64 / s.n as f64))
        }
        _ => None,
    };
    report(&inputs, Some(s.n), exponent)
}

/// Empirical check of the no-overlap condition between conditional typical
/// sets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapDiagnostic {
    pub pairs: u64,
    pub overlaps: u64,
    /// Fraction of pairs where the output sensed from θ is conditionally
    /// typical for φ.
    pub rate: f64,
    /// Samples discarded because θ or φ was not typical or they coincided.
    pub rejected: u64,
}

/// Samples `pairs` pairs `(θ, φ)` of distinct weakly typical source
/// vectors, senses `x` from θ and counts how often `x` is also weakly
/// conditionally typical given φ.
pub fn overlap_diagnostic(s: &Scenario, eps: f64, pairs: u64, master_seed: u64) -> Result<OverlapDiagnostic> {
    let rate = s.source.entropy_rate()?.rate;
    let pi = s.source.marginal()?;
    let h_cond = s.sensing.conditional_entropy(&pi);
    let nf = s.n as f64;
    let typical = |v: &[u32]| -> Result<bool> { Ok((-s.source.log2_prob(v)? / nf - rate).abs() <= eps) };
    let max_draws = pairs.saturating_mul(1000).max(1000);
    let (mut got, mut overlaps, mut rejected, mut draw) = (0u64, 0u64, 0u64, 0u64);
    while got < pairs {
        if draw >= max_draws {
            return Err(Error::InvalidParameter(format!(
                "only {got} typical pairs in {draw} draws; increase eps or n"
            )));
        }
        let base = seed::derive(master_seed, draw);
        draw += 1;
        let theta = s.source.sample(s.n, seed::derive(base, 0))?;
        let phi = s.source.sample(s.n, seed::derive(base, 1))?;
        if theta == phi || !typical(&theta)? || !typical(&phi)? {
            rejected += 1;
            continue;
        }
        let x = s.sensing.apply(&s.field, &theta, seed::derive(base, 2))?;
        let lp = s.sensing.log2_prob_vec(&x, &phi);
        if (-lp / nf - h_cond).abs() <= eps {
            overlaps += 1;
        }
        got += 1;
    }
    Ok(OverlapDiagnostic {
        pairs: got,
        overlaps,
        rate: overlaps as f64 / got.max(1) as f64,
        rejected,
    })
}

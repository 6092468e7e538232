//! Entropy, divergence and plug-in estimators. All quantities are in bits.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Elem;

pub const PMF_TOLERANCE: f64 = 1e-12;

pub fn validate_pmf(pmf: &[f64], len: usize, what: &str) -> Result<()> {
    if pmf.len() != len {
        return Err(Error::InvalidDistribution(format!(
            "{what} has {} entries, expected {len}",
            pmf.len()
        )));
    }
    if let Some(bad) = pmf.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("{what} has entry {bad}")));
    }
    let total: f64 = pmf.iter().sum();
    if (total - 1.0).abs() > PMF_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("{what} sums to {total}")));
    }
    Ok(())
}

/// Shannon entropy, with `0 log 0 = 0`.
pub fn entropy(pmf: &[f64]) -> f64 {
    0.0 - pmf.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

/// Relative entropy `D(p || q)`; infinite when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| if b > 0.0 { a * (a / b).log2() } else { f64::INFINITY })
        .sum()
}

/// `log2(sum 2^x_i)` without overflow; `-inf` for an empty or all `-inf` input.
pub fn log2_sum_exp2(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp2()).sum::<f64>().log2()
}

/// Running `log2(sum 2^x)` accumulator.
#[derive(Clone, Copy, Debug)]
pub struct Log2SumExp2 {
    max: f64,
    scaled: f64,
}

impl Default for Log2SumExp2 {
    fn default() -> Self {
        Log2SumExp2 {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl Log2SumExp2 {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += (x - self.max).exp2();
        } else {
            self.scaled = self.scaled * (self.max - x).exp2() + 1.0;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            self.max
        } else {
            self.max + self.scaled.log2()
        }
    }
}

/// Plug-in entropy of the empirical distribution of `symbols`.
pub fn plugin_entropy<I: IntoIterator<Item = u64>>(symbols: I) -> f64 {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut total = 0u64;
    for s in symbols {
        *counts.entry(s).or_default() += 1;
        total += 1;
    }
    entropy_of_counts(counts.values().copied(), total)
}

fn entropy_of_counts(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    // sorted summation keeps the result independent of hash order
    let mut terms: Vec<u64> = counts.filter(|&c| c > 0).collect();
    terms.sort_unstable();
    -terms
        .into_iter()
        .map(|c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Plug-in estimate of `H(X_t | X_{t-L}, ..., X_{t-1})` from one path, as the
/// difference of empirical (L+1)-block and L-block entropies over the same
/// window positions.
pub fn plugin_conditional_entropy(seq: &[Elem], q: u32, context: usize) -> Result<f64> {
    if seq.len() <= context {
        return Err(Error::InvalidParameter(format!(
            "sequence of length {} is too short for context {context}",
            seq.len()
        )));
    }
    let q = q as u64;
    if (q as f64).powi(context as i32 + 1) > u64::MAX as f64 {
        return Err(Error::InvalidParameter(format!(
            "context {context} too long for alphabet {q}"
        )));
    }
    let modulus = q.pow(context as u32);
    let mut joint: HashMap<u64, u64> = HashMap::new();
    let mut ctx_counts: HashMap<u64, u64> = HashMap::new();
    let mut ctx = 0u64;
    for &s in &seq[..context] {
        ctx = ctx * q + s as u64;
    }
    let mut total = 0u64;
    for &s in &seq[context..] {
        *ctx_counts.entry(ctx).or_default() += 1;
        *joint.entry(ctx * q + s as u64).or_default() += 1;
        total += 1;
        ctx = if modulus == 1 { 0 } else { (ctx * q + s as u64) % modulus };
    }
    let h_joint = entropy_of_counts(joint.into_values(), total);
    let h_ctx = entropy_of_counts(ctx_counts.into_values(), total);
    Ok((h_joint - h_ctx).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[0.5, 0.5]), 1.0);
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
        assert_eq!(entropy(&[0.25; 4]), 2.0);
        // H2(0.1) = -0.1 log2 0.1 - 0.9 log2 0.9
        assert_abs_diff_eq!(binary_entropy(0.1), 0.468_995_593_589_281_2, epsilon = 1e-15);
    }

    #[test]
    fn kl_basics() {
        assert_eq!(kl_divergence(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
        assert!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).is_infinite());
        assert_abs_diff_eq!(kl_divergence(&[1.0, 0.0], &[0.5, 0.5]), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn log_sum_exp() {
        assert_abs_diff_eq!(log2_sum_exp2([1.0, 1.0]), 2.0, epsilon = 1e-15);
        assert_eq!(log2_sum_exp2([f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert_abs_diff_eq!(log2_sum_exp2([-1100.0, -1100.0]), -1099.0, epsilon = 1e-9);
        let mut acc = Log2SumExp2::default();
        for x in [-3.0, 5.0, f64::NEG_INFINITY, 2.0] {
            acc.push(x);
        }
        assert_abs_diff_eq!(acc.value(), log2_sum_exp2([-3.0, 5.0, 2.0]), epsilon = 1e-12);
    }

    #[test]
    fn validate() {
        assert!(validate_pmf(&[0.5, 0.5], 2, "p").is_ok());
        assert!(validate_pmf(&[0.5, 0.6], 2, "p").is_err());
        assert!(validate_pmf(&[0.5, 0.5], 3, "p").is_err());
        assert!(validate_pmf(&[1.5, -0.5], 2, "p").is_err());
    }

    #[test]
    fn conditional_entropy_of_periodic_sequence() {
        let seq: Vec<Elem> = (0..1000).map(|i| (i % 3) as Elem).collect();
        assert_abs_diff_eq!(plugin_conditional_entropy(&seq, 3, 1).unwrap(), 0.0, epsilon = 1e-12);
        let h0 = plugin_conditional_entropy(&seq, 3, 0).unwrap();
        assert_abs_diff_eq!(h0, 3f64.log2(), epsilon = 1e-2);
        assert!(plugin_conditional_entropy(&seq[..2], 3, 2).is_err());
    }
}

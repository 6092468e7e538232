//! Numerical evaluation of the error exponent without sensing noise,
//!
//! `E0 = min_{p, q} D(p||p_Θ) + r D(q||p_u) + |r log Q - H(p) - r H(q)|^+`,
//!
//! over the probability simplex of `GF(Q)` for both `p` and `q`, `r = M/N`.

use crate::error::{Error, Result};
use crate::info::{entropy, kl_divergence, validate_pmf};

pub const GRID_STEP: f64 = 0.02;
pub const FINAL_STEP: f64 = 1e-4;
pub const MAX_Q: u32 = 4;
const MAX_MOVES_PER_STEP: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentResult {
    pub value: f64,
    /// Minimizing source type.
    pub p: Vec<f64>,
    /// Minimizing noise type.
    pub q: Vec<f64>,
    /// `r log Q - H(p_Θ) - r H(p_u)`; the exponent is positive iff this is.
    pub margin: f64,
    /// False when the local refinement hit its move limit.
    pub converged: bool,
}

fn objective(p: &[f64], pt: &[f64], q: &[f64], pu: &[f64], r: f64, lq: f64) -> f64 {
    let gap = r * lq - entropy(p) - r * entropy(q);
    kl_divergence(p, pt) + r * kl_divergence(q, pu) + gap.max(0.0)
}

/// Points of the simplex with coordinates on multiples of `1/k`.
fn simplex_grid(dim: usize, k: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / k as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(dim, left - c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, k, k, &mut Vec::new(), &mut out);
    out
}

/// Points not dominated in (smaller divergence, larger entropy).
fn frontier(points: Vec<Vec<f64>>, reference: &[f64]) -> Vec<(Vec<f64>, f64, f64)> {
    let mut scored: Vec<(Vec<f64>, f64, f64)> = points
        .into_iter()
        .map(|p| {
            let d = kl_divergence(&p, reference);
            let h = entropy(&p);
            (p, d, h)
        })
        .filter(|(_, d, _)| d.is_finite())
        .collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.2.total_cmp(&a.2)));
    let mut out: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    for item in scored {
        if out.last().is_none_or(|last| item.2 > last.2) {
            out.push(item);
        }
    }
    out
}

pub fn error_exponent_nc(p_theta: &[f64], p_u: &[f64], q: u32, ratio: f64) -> Result<ExponentResult> {
    if q > MAX_Q {
        return Err(Error::Unsupported(format!("exponent minimization supports Q <= {MAX_Q}, got {q}")));
    }
    let dim = q as usize;
    validate_pmf(p_theta, dim, "source pmf")?;
    validate_pmf(p_u, dim, "noise pmf")?;
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidParameter(format!("ratio must be positive, got {ratio}")));
    }
    let lq = (q as f64).log2();
    let r = ratio;
    let margin = r * lq - entropy(p_theta) - r * entropy(p_u);

    let k = (1.0 / GRID_STEP).round() as usize;
    let mut ps = simplex_grid(dim, k);
    ps.push(p_theta.to_vec());
    let mut qs = simplex_grid(dim, k);
    qs.push(p_u.to_vec());
    let fp = frontier(ps, p_theta);
    let fq = frontier(qs, p_u);

    let mut best = (objective(p_theta, p_theta, p_u, p_u, r, lq), p_theta.to_vec(), p_u.to_vec());
    for (p, dp, hp) in &fp {
        for (qq, dq, hq) in &fq {
            let v = dp + r * dq + (r * lq - hp - r * hq).max(0.0);
            if v < best.0 {
                best = (v, p.clone(), qq.clone());
            }
        }
    }

    let (mut value, mut p, mut qv) = best;
    let mut converged = true;
    let mut step = GRID_STEP;
    loop {
        let mut moves = 0;
        loop {
            let mut improved: Option<(f64, Vec<f64>, Vec<f64>)> = None;
            for side in 0..2 {
                for i in 0..dim {
                    for j in 0..dim {
                        let src = if side == 0 { &p } else { &qv };
                        if i == j || src[i] <= 0.0 {
                            continue;
                        }
                        let amount = step.min(src[i]);
                        let mut cand = src.clone();
                        cand[i] -= amount;
                        cand[j] += amount;
                        let v = if side == 0 {
                            objective(&cand, p_theta, &qv, p_u, r, lq)
                        } else {
                            objective(&p, p_theta, &cand, p_u, r, lq)
                        };
                        if v < improved.as_ref().map_or(value, |b| b.0) - 1e-15 {
                            improved = Some(if side == 0 { (v, cand, qv.clone()) } else { (v, p.clone(), cand) });
                        }
                    }
                }
            }
            match improved {
                Some((v, np, nq)) => {
                    value = v;
                    p = np;
                    qv = nq;
                    moves += 1;
                    if moves >= MAX_MOVES_PER_STEP {
                        converged = false;
                        break;
                    }
                }
                None => break,
            }
        }
        if step <= FINAL_STEP {
            break;
        }
        step = (step / 2.0).max(FINAL_STEP);
    }
    Ok(ExponentResult {
        value: value.max(0.0),
        p,
        q: qv,
        margin,
        converged,
    })
}

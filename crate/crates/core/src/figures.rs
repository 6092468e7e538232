//! Threshold curves as tables.
//!
//! Communication noise is the worst case for its level, `Pr(u != 0)` spread
//! evenly over the nonzero symbols. Sensing noise is the symmetric channel
//! with `Pr(x != Θ)` spread evenly over the wrong symbols.
//!
//! * `fig2`: columns `p_u_nonzero`, then `gamma_min_q{Q}` per field size.
//! * `fig3`: columns `rate_over_log_q`, `noiseless`, then `q{Q}_pu{p}` per
//!   field size and noise level.
//! * `fig4`: columns `rate_over_log_q`, then `q{Q}_px{p}` per field size and
//!   sensing-error level, at a fixed communication noise level. Cells are
//!   empty where the joint rate exceeds `log Q`.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{gamma_min, sufficient_ratio, BoundInputs};
use crate::error::{Error, Result};
use crate::info::binary_entropy;
use crate::scenario::Regime;
use crate::table::{Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    Fig2,
    Fig3,
    Fig4,
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(FigureKind::Fig2),
            "fig3" => Ok(FigureKind::Fig3),
            "fig4" => Ok(FigureKind::Fig4),
            other => Err(Error::Config(format!("unknown figure {other:?}; expected fig2, fig3 or fig4"))),
        }
    }
}

impl fmt::Display for FigureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureKind::Fig2 => "fig2",
            FigureKind::Fig3 => "fig3",
            FigureKind::Fig4 => "fig4",
        })
    }
}

/// Entropy of a symbol that is nonzero with probability `p`, spread evenly
/// over the `q - 1` nonzero values.
pub fn worst_case_entropy(q: u32, p: f64) -> f64 {
    binary_entropy(p) + p * ((q - 1) as f64).log2()
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)
            }
        })
        .collect()
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn lin_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureGrid {
    pub x: Vec<f64>,
    pub q_list: Vec<u32>,
    /// Noise levels: `Pr(u != 0)` for fig3, `Pr(x != Θ)` for fig4.
    pub levels: Vec<f64>,
    /// `Pr(u != 0)` used by fig4.
    pub comm_level: f64,
}

impl FigureGrid {
    pub fn default_for(kind: FigureKind) -> FigureGrid {
        match kind {
            FigureKind::Fig2 => FigureGrid {
                x: log_space(1e-5, 1e-1, 41),
                q_list: vec![2, 4, 16, 64, 256],
                levels: Vec::new(),
                comm_level: 0.0,
            },
            FigureKind::Fig3 => FigureGrid {
                x: lin_space(0.0, 1.0, 21),
                q_list: vec![2, 4, 16],
                levels: vec![0.01, 0.05, 0.1, 0.2],
                comm_level: 0.0,
            },
            FigureKind::Fig4 => FigureGrid {
                x: lin_space(0.0, 1.0, 21),
                q_list: vec![2, 4, 16],
                levels: vec![0.0, 0.01, 0.05, 0.1],
                comm_level: 0.1,
            },
        }
    }
}

fn ratio_cell(inputs: BoundInputs) -> Result<Value> {
    Ok(sufficient_ratio(&inputs)?.map(|(r, _)| r).into())
}

pub fn figure_table(kind: FigureKind, grid: &FigureGrid) -> Result<Table> {
    match kind {
        FigureKind::Fig2 => fig2(grid),
        FigureKind::Fig3 => fig3(grid),
        FigureKind::Fig4 => fig4(grid),
    }
}

fn fig2(grid: &FigureGrid) -> Result<Table> {
    let mut header = vec!["p_u_nonzero".to_owned()];
    header.extend(grid.q_list.iter().map(|q| format!("gamma_min_q{q}")));
    let mut t = Table::new(header);
    for &p in &grid.x {
        let mut row = vec![Value::Float(p)];
        row.extend(grid.q_list.iter().map(|&q| Value::Float(gamma_min(worst_case_entropy(q, p)))));
        t.push(row);
    }
    Ok(t)
}

fn fig3(grid: &FigureGrid) -> Result<Table> {
    let mut header = vec!["rate_over_log_q".to_owned(), "noiseless".to_owned()];
    for q in &grid.q_list {
        header.extend(grid.levels.iter().map(|p| format!("q{q}_pu{p}")));
    }
    let mut t = Table::new(header);
    for &x in &grid.x {
        let mut row = vec![Value::Float(x)];
        row.push(ratio_cell(BoundInputs {
            rate_theta: x,
            rate_joint: x,
            rate_x: None,
            h_u: 0.0,
            q: 2,
            gamma: 0.5,
            regime: Regime::Wn,
        })?);
        for &q in &grid.q_list {
            let lq = (q as f64).log2();
            for &p in &grid.levels {
                let h_u = worst_case_entropy(q, p);
                row.push(ratio_cell(BoundInputs {
                    rate_theta: x * lq,
                    rate_joint: x * lq,
                    rate_x: None,
                    h_u,
                    q,
                    gamma: 1.0 - 1.0 / q as f64,
                    regime: Regime::from_noise(false, p > 0.0),
                })?);
            }
        }
        t.push(row);
    }
    Ok(t)
}

fn fig4(grid: &FigureGrid) -> Result<Table> {
    let mut header = vec!["rate_over_log_q".to_owned()];
    for q in &grid.q_list {
        header.extend(grid.levels.iter().map(|p| format!("q{q}_px{p}")));
    }
    let mut t = Table::new(header);
    for &x in &grid.x {
        let mut row = vec![Value::Float(x)];
        for &q in &grid.q_list {
            let lq = (q as f64).log2();
            let h_u = worst_case_entropy(q, grid.comm_level);
            for &pe in &grid.levels {
                let rate = x * lq;
                row.push(ratio_cell(BoundInputs {
                    rate_theta: rate,
                    rate_joint: rate + worst_case_entropy(q, pe),
                    rate_x: None,
                    h_u,
                    q,
                    gamma: 1.0 - 1.0 / q as f64,
                    regime: Regime::from_noise(pe > 0.0, grid.comm_level > 0.0),
                })?);
            }
        }
        t.push(row);
    }
    Ok(t)
}

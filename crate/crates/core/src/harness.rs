//! Monte Carlo estimation of the decoding error probability.
//!
//! Trial `t` of a scenario uses the seed `derive(master_seed, t)`, and only
//! integer counts are aggregated, so every estimate is identical whatever
//! the thread count or execution order.

use rayon::prelude::*;

use crate::bounds::{necessary_ratio, sufficient_ratio, BoundInputs};
use crate::decoder::run_trial;
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::seed;
use crate::table::{Table, Value};

/// Wilson score interval at 95% confidence.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// How trials are spread over threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Rayon worker pool; `0` means one worker per core.
    Parallel(usize),
}

impl Execution {
    pub fn from_threads(threads: usize) -> Self {
        if threads == 1 {
            Execution::Serial
        } else {
            Execution::Parallel(threads)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeEstimate {
    pub trials: u64,
    pub errors: u64,
    pub pe: f64,
    pub ci: (f64, f64),
    pub mean_ties: f64,
    pub mean_work: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Counts {
    trials: u64,
    errors: u64,
    ties: u64,
    work: u64,
}

impl Counts {
    fn merge(self, o: Counts) -> Counts {
        Counts {
            trials: self.trials + o.trials,
            errors: self.errors + o.errors,
            ties: self.ties + o.ties,
            work: self.work + o.work,
        }
    }
}

fn one(s: &Scenario, t: u64) -> Result<Counts> {
    let out = run_trial(s, seed::derive(s.master_seed, t))?;
    Ok(Counts {
        trials: 1,
        errors: out.error as u64,
        ties: out.detail.tie_count,
        work: out.detail.work,
    })
}

/// Runs a closure on a pool of the requested size.
pub fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn estimate_pe(s: &Scenario, exec: Execution) -> Result<PeEstimate> {
    let counts = match exec {
        Execution::Serial => (0..s.trials).try_fold(Counts::default(), |acc, t| Ok::<_, Error>(acc.merge(one(s, t)?)))?,
        Execution::Parallel(threads) => with_pool(threads, || {
            (0..s.trials)
                .into_par_iter()
                .map(|t| one(s, t))
                .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))
        })??,
    };
    let n = counts.trials as f64;
    Ok(PeEstimate {
        trials: counts.trials,
        errors: counts.errors,
        pe: counts.errors as f64 / n,
        ci: wilson(counts.errors, counts.trials),
        mean_ties: counts.ties as f64 / n,
        mean_work: counts.work as f64 / n,
    })
}

/// One-row table describing a single scenario and its estimate, with the
/// threshold overlays.
pub fn simulation_table(s: &Scenario, e: &PeEstimate) -> Result<Table> {
    let inputs = BoundInputs::from_scenario(s)?;
    let mut t = Table::new([
        "n",
        "m",
        "q",
        "gamma",
        "regime",
        "seed",
        "trials",
        "errors",
        "pe",
        "ci_low",
        "ci_high",
        "mean_ties",
        "mean_work",
        "necessary_ratio",
        "sufficient_ratio",
    ]);
    t.push(vec![
        s.n.into(),
        s.m.into(),
        (s.q() as u64).into(),
        s.gamma.into(),
        Value::Text(s.regime().to_string()),
        s.master_seed.into(),
        e.trials.into(),
        e.errors.into(),
        e.pe.into(),
        e.ci.0.into(),
        e.ci.1.into(),
        e.mean_ties.into(),
        e.mean_work.into(),
        necessary_ratio(&inputs)?.into(),
        sufficient_ratio(&inputs)?.map(|(r, _)| r).into(),
    ]);
    Ok(t)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellOutcome {
    Done(PeEstimate),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub ratio: f64,
    pub m: usize,
    pub gamma: f64,
    pub outcome: CellOutcome,
}

impl SweepCell {
    pub fn estimate(&self) -> Option<&PeEstimate> {
        match &self.outcome {
            CellOutcome::Done(e) => Some(e),
            CellOutcome::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub n_list: Vec<usize>,
    pub ratio_list: Vec<f64>,
    pub gamma_list: Vec<f64>,
    /// Row-major over `(gamma, n, ratio)`.
    pub cells: Vec<SweepCell>,
    pub necessary_ratio: Option<f64>,
    pub sufficient_ratio: Option<f64>,
}

impl SweepResult {
    pub fn cell(&self, n: usize, ratio: f64) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.n == n && c.ratio == ratio)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "n",
            "ratio",
            "m",
            "gamma",
            "trials",
            "errors",
            "pe",
            "ci_low",
            "ci_high",
            "mean_ties",
            "mean_work",
            "necessary_ratio",
            "sufficient_ratio",
            "status",
        ]);
        for c in &self.cells {
            let mut row: Vec<Value> = vec![c.n.into(), c.ratio.into(), c.m.into(), c.gamma.into()];
            match &c.outcome {
                CellOutcome::Done(e) => {
                    row.extend([
                        e.trials.into(),
                        e.errors.into(),
                        e.pe.into(),
                        e.ci.0.into(),
                        e.ci.1.into(),
                        e.mean_ties.into(),
                        e.mean_work.into(),
                    ]);
                }
                CellOutcome::Skipped(_) => row.extend(std::iter::repeat_n(Value::Missing, 7)),
            }
            row.push(self.necessary_ratio.into());
            row.push(self.sufficient_ratio.into());
            row.push(match &c.outcome {
                CellOutcome::Done(_) => "ok".into(),
                CellOutcome::Skipped(why) => Value::Text(format!("skipped: {why}")),
            });
            t.push(row);
        }
        t
    }
}

/// `M = round(ratio * N)`.
pub fn measurements_for(n: usize, ratio: f64) -> usize {
    (ratio * n as f64).round() as usize
}

/// Estimates `P_e` on every `(γ, N, M/N)` cell. Cells that exceed the
/// decoder caps are skipped.
pub fn phase_sweep(
    base: &Scenario,
    n_list: &[usize],
    ratio_list: &[f64],
    gamma_list: Option<&[f64]>,
    exec: Execution,
) -> Result<SweepResult> {
    let gammas: Vec<f64> = gamma_list.map_or_else(|| vec![base.gamma], <[f64]>::to_vec);
    let inputs = BoundInputs::from_scenario(base)?;
    let mut cells = Vec::new();
    for &gamma in &gammas {
        for &n in n_list {
            for &ratio in ratio_list {
                let m = measurements_for(n, ratio);
                let mut s = base.with_dims(n, m)?;
                s.gamma = gamma;
                s.validate()?;
                let outcome = match estimate_pe(&s, exec) {
                    Ok(e) => CellOutcome::Done(e),
                    Err(e @ Error::CapExceeded { .. }) => CellOutcome::Skipped(e.to_string()),
                    Err(e) => return Err(e),
                };
                cells.push(SweepCell {
                    n,
                    ratio,
                    m,
                    gamma,
                    outcome,
                });
            }
        }
    }
    Ok(SweepResult {
        n_list: n_list.to_vec(),
        ratio_list: ratio_list.to_vec(),
        gamma_list: gammas,
        cells,
        necessary_ratio: necessary_ratio(&inputs)?,
        sufficient_ratio: sufficient_ratio(&inputs)?.map(|(r, _)| r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::CommNoise;
    use crate::scenario::MatrixMode;
    use crate::source::{SiSource, SourceModel};

    fn si(p0: f64) -> SourceModel {
        SourceModel::Si(SiSource::new(vec![p0, 1.0 - p0]).unwrap())
    }

    #[test]
    fn wilson_properties() {
        let (lo, hi) = wilson(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(((0.5 - lo) - (hi - 0.5)).abs() < 1e-12);
        let w1 = wilson(300, 1000);
        let w2 = wilson(600, 2000);
        let ratio = (w1.1 - w1.0) / (w2.1 - w2.0);
        assert!((ratio - 2f64.sqrt()).abs() < 0.01);
    }

    #[test]
    fn identity_matrix_never_errs() {
        let s = Scenario::builder(6, 6, si(0.8))
            .unwrap()
            .matrix(MatrixMode::Identity)
            .trials(100)
            .build()
            .unwrap();
        let e = estimate_pe(&s, Execution::Serial).unwrap();
        assert_eq!(e.errors, 0);
        assert_eq!(e.pe, 0.0);
    }

    #[test]
    fn zero_measurements() {
        let s = Scenario::builder(4, 0, si(0.89)).unwrap().trials(5000).seed(12).build().unwrap();
        let e = estimate_pe(&s, Execution::Parallel(4)).unwrap();
        let expected = 1.0 - 0.89f64.powi(4);
        assert!(e.ci.0 <= expected && expected <= e.ci.1, "{e:?}");
    }

    #[test]
    fn serial_equals_parallel() {
        let s = Scenario::builder(8, 5, si(0.85))
            .unwrap()
            .gamma(0.3)
            .comm(CommNoise::worst_case(2, 0.05).unwrap())
            .trials(300)
            .seed(77)
            .build()
            .unwrap();
        let a = estimate_pe(&s, Execution::Serial).unwrap();
        for threads in [0, 2, 3, 8] {
            assert_eq!(a, estimate_pe(&s, Execution::Parallel(threads)).unwrap());
        }
    }

    #[test]
    fn sweep_skips_capped_cells() {
        let base = Scenario::builder(8, 4, si(0.89))
            .unwrap()
            .comm(CommNoise::worst_case(2, 0.01).unwrap())
            .trials(20)
            .max_candidates(1 << 10)
            .build()
            .unwrap();
        let r = phase_sweep(&base, &[8, 12], &[0.5], None, Execution::Serial).unwrap();
        assert!(r.cell(8, 0.5).unwrap().estimate().is_some());
        assert!(matches!(r.cell(12, 0.5).unwrap().outcome, CellOutcome::Skipped(_)));
        let inputs = BoundInputs::from_scenario(&base).unwrap();
        assert_eq!(r.sufficient_ratio, sufficient_ratio(&inputs).unwrap().map(|x| x.0));
        let csv = r.to_table().to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().ends_with("skipped: search space of 4096 candidates exceeds the cap of 1024"));
    }
}

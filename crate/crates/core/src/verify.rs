//! Oracle suites that check closed forms against simulation and the fast
//! decoders against brute force. Each suite returns a report with a table
//! of per-point results and an overall verdict.

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bounds::{f_collision, FParams};
use crate::channel::{CommNoise, MatrixLaw};
use crate::decoder::{decode_exhaustive, decode_max_q_prob, decode_nc, sample_instance};
use crate::error::Result;
use crate::field::{Field, FieldVec};
use crate::gaussian::{conditional_entropy_bound, epsilon_rho, EstimatorParams, GaussianFieldSource, DEFAULT_JITTER};
use crate::harness::{with_pool, Execution};
use crate::info::plugin_entropy;
use crate::scenario::Scenario;
use crate::seed;
use crate::source::{SiSource, SourceModel};
use crate::table::{Table, Value};

/// Runs `f(i)` for `i in 0..count`, in order, serially or on a pool.
fn map_indexed<T, F>(count: usize, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match exec {
        Execution::Serial => (0..count).map(f).collect(),
        Execution::Parallel(threads) => with_pool(threads, || (0..count).into_par_iter().map(f).collect())?,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma2Point {
    pub params: FParams,
    pub closed_form: f64,
    pub hits: u64,
    pub samples: u64,
    pub z: f64,
    /// For `γ = 1 - 1/Q`: whether the closed form equals `Q^-M` exactly.
    pub uniform_exact: Option<bool>,
}

impl Lemma2Point {
    pub fn estimate(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Report {
    pub points: Vec<Lemma2Point>,
    pub max_abs_z: f64,
    pub z_limit: f64,
    pub passed: bool,
}

impl Lemma2Report {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["q", "gamma", "m", "d1", "d2", "closed_form", "estimate", "samples", "z", "uniform_exact"]);
        for p in &self.points {
            let fp = p.params;
            t.push(vec![
                (fp.q as u64).into(),
                fp.gamma.into(),
                fp.m.into(),
                fp.d1.into(),
                fp.d2.into(),
                p.closed_form.into(),
                p.estimate().into(),
                p.samples.into(),
                p.z.into(),
                p.uniform_exact.map_or(Value::Missing, |b| if b { "yes".into() } else { "no".into() }),
            ]);
        }
        t
    }
}

/// The default grid: `γ ∈ {0.1, 0.3, 0.5, 1 - 1/Q}`, `Q ∈ {2, 4}`,
/// `M ∈ {1, 3, 5}`, `d1 ∈ {1, 2, 5}`, `d2 ∈ {0, 1, M}`, duplicates removed.
pub fn lemma2_default_grid() -> Vec<FParams> {
    let mut out = Vec::new();
    for q in [2u32, 4] {
        let mut gammas = vec![0.1, 0.3, 0.5];
        let uniform = 1.0 - 1.0 / q as f64;
        if !gammas.contains(&uniform) {
            gammas.push(uniform);
        }
        for &gamma in &gammas {
            for m in [1usize, 3, 5] {
                for d1 in [1usize, 2, 5] {
                    let mut d2s = vec![0, 1, m];
                    d2s.dedup();
                    for d2 in d2s {
                        out.push(FParams { d1, d2, gamma, q, m });
                    }
                }
            }
        }
    }
    out
}

/// Monte Carlo check of the collision probability: for every grid point,
/// `samples` draws of the `M x d1` block of `A` acting on a weight-`d1`
/// vector with random nonzero entries, compared with a weight-`d2` target.
pub fn verify_lemma2(grid: &[FParams], samples: u64, master_seed: u64, exec: Execution) -> Result<Lemma2Report> {
    let z_limit = 4.0;
    let points = map_indexed(grid.len(), exec, |i| {
        let p = grid[i];
        let closed_form = f_collision(&p)?;
        let field = Field::new(p.q as u64)?;
        let law = MatrixLaw::new(p.gamma, p.q, p.m, p.d1)?;
        let mut rng = seed::rng(seed::derive(master_seed, i as u64));
        let mut hits = 0u64;
        let mut mu = vec![0u32; p.d1];
        let mut target = vec![0u32; p.m];
        for _ in 0..samples {
            for v in mu.iter_mut() {
                *v = rng.random_range(1..p.q);
            }
            for (k, v) in target.iter_mut().enumerate() {
                *v = if k < p.d2 { rng.random_range(1..p.q) } else { 0 };
            }
            let mut ok = true;
            for row_target in target.iter() {
                let mut acc = 0u32;
                for &m in &mu {
                    acc = field.add(acc, field.mul(law.sample_entry(&mut rng), m));
                }
                ok &= acc == *row_target;
            }
            hits += ok as u64;
        }
        let n = samples as f64;
        let sd = (closed_form * (1.0 - closed_form) / n).sqrt();
        let diff = hits as f64 / n - closed_form;
        let z = if sd > 0.0 { diff / sd } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
        let uniform = (p.gamma - (1.0 - 1.0 / p.q as f64)).abs() < 1e-15;
        let uniform_exact = uniform.then(|| {
            let exact = (p.q as f64).powi(-(p.m as i32));
            (closed_form - exact).abs() <= 4.0 * f64::EPSILON * exact
        });
        Ok(Lemma2Point {
            params: p,
            closed_form,
            hits,
            samples,
            z,
            uniform_exact,
        })
    })?;
    let max_abs_z = points.iter().map(|p| p.z.abs()).fold(0.0, f64::max);
    let passed = max_abs_z <= z_limit && points.iter().all(|p| p.uniform_exact != Some(false));
    Ok(Lemma2Report {
        points,
        max_abs_z,
        z_limit,
        passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MismatchKind {
    /// MAP and maximum-Q-probability estimates differ.
    MaxQProb,
    /// MAP and exhaustive estimates differ.
    Exhaustive,
    /// A point-mass prior did not return its support point.
    PointMass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderCase {
    pub index: usize,
    pub seed: u64,
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub noisy: bool,
    pub point_mass: bool,
    pub work_map: u64,
    pub work_max_q: u64,
    pub mismatches: Vec<MismatchKind>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderReport {
    pub cases: Vec<DecoderCase>,
    pub mismatches: usize,
    pub passed: bool,
}

impl DecoderReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "index", "seed", "q", "n", "m", "noisy", "point_mass", "work_map", "work_max_q", "mismatches",
        ]);
        for c in &self.cases {
            let kinds: Vec<&str> = c
                .mismatches
                .iter()
                .map(|k| match k {
                    MismatchKind::MaxQProb => "max_q_prob",
                    MismatchKind::Exhaustive => "exhaustive",
                    MismatchKind::PointMass => "point_mass",
                })
                .collect();
            t.push(vec![
                c.index.into(),
                c.seed.into(),
                (c.q as u64).into(),
                c.n.into(),
                c.m.into(),
                (c.noisy as u64).into(),
                (c.point_mass as u64).into(),
                c.work_map.into(),
                c.work_max_q.into(),
                Value::Text(kinds.join(" ")),
            ]);
        }
        t
    }
}

fn random_pmf(rng: &mut seed::Rng, q: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..q).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// A random WN or NC scenario with `Q ∈ {2, 3}` and `N, M <= max_dim`.
/// Every tenth scenario has a point-mass prior.
pub fn random_decoder_scenario(index: usize, case_seed: u64, max_dim: usize) -> Result<(Scenario, bool, bool)> {
    let mut rng = seed::rng(case_seed);
    let q: u32 = if rng.random_bool(0.5) { 2 } else { 3 };
    let n = rng.random_range(1..=max_dim);
    let m = rng.random_range(1..=max_dim);
    let noisy = index % 2 == 1;
    let point_mass = index.is_multiple_of(10);
    let pmf = if point_mass {
        let mut p = vec![0.0; q as usize];
        p[rng.random_range(0..q as usize)] = 1.0;
        p
    } else {
        random_pmf(&mut rng, q as usize)
    };
    let mut b = Scenario::builder(n, m, SourceModel::Si(SiSource::new(pmf)?))?
        .gamma(rng.random_range(0.1..(1.0 - 1.0 / q as f64)))
        .seed(case_seed >> 1);
    if noisy {
        b = b.comm(CommNoise::new(random_pmf(&mut rng, q as usize))?);
    }
    Ok((b.build()?, noisy, point_mass))
}

/// Compares MAP, maximum-Q-probability and exhaustive decoding on `count`
/// random scenarios.
pub fn verify_decoder_equivalence(count: usize, master_seed: u64, max_dim: usize, exec: Execution) -> Result<DecoderReport> {
    let cases = map_indexed(count, exec, |i| {
        let case_seed = seed::derive(master_seed, i as u64);
        let (s, noisy, point_mass) = random_decoder_scenario(i, case_seed, max_dim)?;
        let inst = sample_instance(&s, s.master_seed)?;
        let map = decode_nc(&s, &inst.y, &inst.a)?;
        let mq = decode_max_q_prob(&s, &inst.y, &inst.a)?;
        let naive = decode_exhaustive(&s, &inst.y, &inst.a)?;
        let mut mismatches = Vec::new();
        if map.estimate != mq.estimate {
            mismatches.push(MismatchKind::MaxQProb);
        }
        if map.estimate != naive.estimate {
            mismatches.push(MismatchKind::Exhaustive);
        }
        if point_mass && map.score.feasible() {
            let SourceModel::Si(si) = &s.source else { unreachable!() };
            let support = si.pmf().iter().position(|&p| p == 1.0).expect("point mass") as u32;
            if map.estimate != FieldVec(vec![support; s.n]) {
                mismatches.push(MismatchKind::PointMass);
            }
        }
        Ok(DecoderCase {
            index: i,
            seed: case_seed,
            q: s.q(),
            n: s.n,
            m: s.m,
            noisy,
            point_mass,
            work_map: map.work,
            work_max_q: mq.work,
            mismatches,
        })
    })?;
    let mismatches = cases.iter().filter(|c| !c.mismatches.is_empty()).count();
    Ok(DecoderReport {
        cases,
        mismatches,
        passed: mismatches == 0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixBConfig {
    pub rho: f64,
    pub draws: u64,
    pub rho_grid: Vec<f64>,
    pub lambda: f64,
    pub n_list: Vec<usize>,
    pub seeds: u64,
    pub estimator: EstimatorParams,
}

impl Default for AppendixBConfig {
    fn default() -> Self {
        let mut rho_grid: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        rho_grid.push(0.99);
        AppendixBConfig {
            rho: 0.9,
            draws: 1_000_000,
            rho_grid,
            lambda: 10.0,
            n_list: vec![16, 64, 256],
            seeds: 20,
            estimator: EstimatorParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixBReport {
    pub rho: f64,
    pub epsilon_closed: f64,
    pub epsilon_mc: f64,
    pub epsilon_z: f64,
    pub entropy_closed: f64,
    pub entropy_mc: f64,
    pub rho_grid: Vec<f64>,
    pub entropy_grid: Vec<f64>,
    pub grid_strictly_decreasing: bool,
    pub n_list: Vec<usize>,
    /// Entropy-rate estimate averaged over placements, per `N`.
    pub mean_rates: Vec<f64>,
    pub rates_non_increasing: bool,
    pub epsilon_ok: bool,
    pub entropy_ok: bool,
    pub passed: bool,
}

impl AppendixBReport {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["check", "x", "closed_form", "estimate", "statistic"]);
        t.push(vec![
            "epsilon".into(),
            self.rho.into(),
            self.epsilon_closed.into(),
            self.epsilon_mc.into(),
            self.epsilon_z.into(),
        ]);
        t.push(vec![
            "conditional_entropy".into(),
            self.rho.into(),
            self.entropy_closed.into(),
            self.entropy_mc.into(),
            (self.entropy_mc - self.entropy_closed).into(),
        ]);
        for (r, h) in self.rho_grid.iter().zip(&self.entropy_grid) {
            t.push(vec!["bound_grid".into(), (*r).into(), (*h).into(), Value::Missing, Value::Missing]);
        }
        for (n, r) in self.n_list.iter().zip(&self.mean_rates) {
            t.push(vec!["mean_rate".into(), (*n).into(), Value::Missing, (*r).into(), Value::Missing]);
        }
        t
    }
}

/// Checks the sign-quantized Gaussian pair formulas against simulation and
/// the decrease of the estimated entropy rate of a Gaussian field with
/// fixed `λ` as sensors are added to the unit disk.
pub fn verify_appendix_b(cfg: &AppendixBConfig, master_seed: u64, exec: Execution) -> Result<AppendixBReport> {
    let rho = cfg.rho;
    let mut rng = seed::rng(seed::derive(master_seed, 0));
    let c = (1.0 - rho * rho).sqrt();
    let mut pairs = Vec::with_capacity(cfg.draws as usize);
    let mut split = 0u64;
    for _ in 0..cfg.draws {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let a = (z1 >= 0.0) as u64;
        let b = ((rho * z1 + c * z2) >= 0.0) as u64;
        split += (a == 0 && b == 1) as u64;
        pairs.push((a, b));
    }
    let n = cfg.draws as f64;
    let epsilon_closed = epsilon_rho(rho)?;
    let epsilon_mc = split as f64 / n;
    let sd = (epsilon_closed * (1.0 - epsilon_closed) / n).sqrt();
    let epsilon_z = (epsilon_mc - epsilon_closed) / sd;
    let entropy_closed = conditional_entropy_bound(rho)?;
    let entropy_mc = plugin_entropy(pairs.iter().map(|&(a, b)| a * 2 + b)) - plugin_entropy(pairs.iter().map(|&(_, b)| b));

    let entropy_grid = cfg
        .rho_grid
        .iter()
        .map(|&r| conditional_entropy_bound(r))
        .collect::<Result<Vec<f64>>>()?;
    let grid_strictly_decreasing = entropy_grid.windows(2).all(|w| w[1] < w[0]);

    let jobs: Vec<(usize, u64)> = cfg.n_list.iter().flat_map(|&n| (0..cfg.seeds).map(move |k| (n, k))).collect();
    let rates = map_indexed(jobs.len(), exec, |j| {
        let (n, k) = jobs[j];
        let job_seed = seed::derive(seed::derive(master_seed, 1 + n as u64), k);
        let src = GaussianFieldSource::random_placement(cfg.lambda, n, DEFAULT_JITTER, seed::derive(job_seed, 0))?;
        let params = EstimatorParams {
            seed: seed::derive(job_seed, 1),
            ..cfg.estimator.clone()
        };
        Ok(src.estimate_entropy_rate(&params)?.rate)
    })?;
    let per = cfg.seeds as usize;
    let mean_rates: Vec<f64> = rates.chunks(per).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    let rates_non_increasing = mean_rates.windows(2).all(|w| w[1] <= w[0]);

    let epsilon_ok = epsilon_z.abs() <= 3.0;
    let entropy_ok = (entropy_mc - entropy_closed).abs() <= 0.02;
    Ok(AppendixBReport {
        rho,
        epsilon_closed,
        epsilon_mc,
        epsilon_z,
        entropy_closed,
        entropy_mc,
        rho_grid: cfg.rho_grid.clone(),
        entropy_grid,
        grid_strictly_decreasing,
        n_list: cfg.n_list.clone(),
        mean_rates,
        rates_non_increasing,
        epsilon_ok,
        entropy_ok,
        passed: epsilon_ok && entropy_ok && grid_strictly_decreasing && rates_non_increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = lemma2_default_grid();
        assert_eq!(g.len(), 72 + 96);
        assert!(g.iter().any(|p| p.q == 4 && p.gamma == 0.75));
    }

    #[test]
    fn collision_small_run() {
        let grid = [
            FParams { d1: 1, d2: 0, gamma: 0.5, q: 2, m: 3 },
            FParams { d1: 2, d2: 1, gamma: 0.75, q: 4, m: 3 },
        ];
        let r = verify_lemma2(&grid, 20_000, 1, Execution::Serial).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.points[0].estimate() - 0.125).abs() < 0.01);
        assert_eq!(r.points[1].uniform_exact, Some(true));
        assert_eq!(r, verify_lemma2(&grid, 20_000, 1, Execution::Parallel(2)).unwrap());
    }

    #[test]
    fn decoders_small_run() {
        let a = verify_decoder_equivalence(20, 5, 5, Execution::Serial).unwrap();
        assert!(a.passed);
        assert!(a.cases.iter().any(|c| c.point_mass));
        assert_eq!(a, verify_decoder_equivalence(20, 5, 5, Execution::Parallel(3)).unwrap());
    }

    #[test]
    fn appendix_b_small_run() {
        let cfg = AppendixBConfig {
            draws: 200_000,
            n_list: vec![8, 32],
            seeds: 3,
            estimator: EstimatorParams {
                min_symbols: 20_000,
                min_realizations: 500,
                ..EstimatorParams::default()
            },
            ..AppendixBConfig::default()
        };
        let r = verify_appendix_b(&cfg, 3, Execution::Parallel(0)).unwrap();
        assert!(r.epsilon_ok && r.entropy_ok && r.grid_strictly_decreasing, "{r:?}");
        assert_eq!(r.mean_rates.len(), 2);
    }
}

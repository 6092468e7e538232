//! Exact MAP decoders.
//!
//! Every score is an unnormalized base-2 log-posterior. Among co-maximal
//! candidates the lexicographically smallest is returned. When no candidate
//! has a finite score, the lexicographically smallest enumerated candidate is
//! returned with `flagged_infeasible` set.

use std::cmp::Ordering;

use crate::channel;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldMatrix, FieldVec};
use crate::info::Log2SumExp2;
use crate::linalg::{coset_size, solve_affine, unit_basis, CosetIter};
use crate::scenario::{MatrixMode, Regime, Scenario};
use crate::seed::{self, stream};
use crate::source::SourceModel;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PosteriorScore {
    pub log2_score: f64,
}

impl PosteriorScore {
    pub fn feasible(&self) -> bool {
        self.log2_score.is_finite()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub estimate: FieldVec,
    pub score: PosteriorScore,
    /// Number of candidates sharing the maximal score.
    pub tie_count: u64,
    pub regime: Regime,
    /// Candidates scored.
    pub work: u64,
    pub flagged_infeasible: bool,
}

/// Running argmax with lexicographic tie-breaking.
#[derive(Clone, Debug)]
pub struct Best {
    score: f64,
    estimate: Option<FieldVec>,
    ties: u64,
    work: u64,
}

impl Default for Best {
    fn default() -> Self {
        Best {
            score: f64::NEG_INFINITY,
            estimate: None,
            ties: 0,
            work: 0,
        }
    }
}

impl Best {
    pub fn offer(&mut self, score: f64, candidate: &[Elem]) {
        self.work += 1;
        let order = match &self.estimate {
            None => Ordering::Greater,
            Some(_) => score.partial_cmp(&self.score).unwrap_or(Ordering::Less),
        };
        match order {
            Ordering::Greater => {
                self.score = score;
                self.estimate = Some(FieldVec(candidate.to_vec()));
                self.ties = 1;
            }
            Ordering::Equal => {
                self.ties += 1;
                let current = self.estimate.as_mut().expect("set on first offer");
                if candidate < &current[..] {
                    current.copy_from_slice(candidate);
                }
            }
            Ordering::Less => {}
        }
    }

    pub fn finish(self, regime: Regime, n: usize) -> DecodeResult {
        let feasible = self.score.is_finite();
        DecodeResult {
            estimate: self.estimate.unwrap_or_else(|| FieldVec::zeros(n)),
            score: PosteriorScore { log2_score: self.score },
            tie_count: self.ties.max(1),
            regime,
            work: self.work,
            flagged_infeasible: !feasible,
        }
    }
}

fn check_cap(size: u128, cap: u64) -> Result<()> {
    if size > cap as u128 {
        Err(Error::CapExceeded { size, cap })
    } else {
        Ok(())
    }
}

fn check_inputs(s: &Scenario, y: &[Elem], a: &FieldMatrix) -> Result<()> {
    if a.cols() != s.n || a.rows() != y.len() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, measurements have length {}, scenario has n = {}",
            a.rows(),
            a.cols(),
            y.len(),
            s.n
        )));
    }
    s.field.check_matrix(a)?;
    s.field.check_vec(y)
}

/// Iterates `(θ, y - Aθ)` over all of `GF(q)^N` in lexicographic order of θ.
struct ResidualScan<'a> {
    theta: CosetIter<'a>,
    residual: CosetIter<'a>,
}

impl<'a> ResidualScan<'a> {
    fn new(field: &'a Field, y: &[Elem], units: &'a [FieldVec], neg_cols: &'a [FieldVec]) -> Self {
        ResidualScan {
            theta: CosetIter::new(field, FieldVec::zeros(units.len()), units),
            residual: CosetIter::new(field, FieldVec(y.to_vec()), neg_cols),
        }
    }

    fn advance(&mut self) -> bool {
        let a = self.theta.advance();
        let b = self.residual.advance();
        debug_assert_eq!(a, b);
        a
    }
}

fn negated_columns(field: &Field, a: &FieldMatrix) -> Vec<FieldVec> {
    (0..a.cols())
        .map(|j| FieldVec(a.column(j).iter().map(|&e| field.neg(e)).collect()))
        .collect()
}

fn prior(source: &SourceModel, theta: &[Elem], offset: f64) -> Result<f64> {
    Ok(source.log2_prob(theta)? + offset)
}

/// MAP decoding without sensing noise: `argmax log p(θ) + log p_u(y - Aθ)`.
///
/// With zero communication noise only the coset `{θ : Aθ = y}` is
/// enumerated; otherwise all `q^N` candidates are scanned.
pub fn decode_nc(s: &Scenario, y: &[Elem], a: &FieldMatrix) -> Result<DecodeResult> {
    decode_nc_offset(s, y, a, 0.0)
}

pub(crate) fn decode_nc_offset(s: &Scenario, y: &[Elem], a: &FieldMatrix, offset: f64) -> Result<DecodeResult> {
    check_inputs(s, y, a)?;
    if s.regime().has_sensing_noise() {
        return Err(Error::Unsupported("decode_nc needs an identity sensing channel".into()));
    }
    let f = &s.field;
    let mut best = Best::default();
    if s.comm.is_zero() {
        let sol = solve_affine(f, a, y)?;
        check_cap(sol.size(f.q()), s.max_candidates)?;
        if let Some(mut it) = sol.iter(f) {
            while it.advance() {
                let th = it.current();
                best.offer(prior(&s.source, th, offset)?, th);
            }
        }
        return Ok(best.finish(Regime::Wn, s.n));
    }
    check_cap(coset_size(f.q(), s.n), s.max_candidates)?;
    let units = unit_basis(s.n);
    let neg = negated_columns(f, a);
    let mut scan = ResidualScan::new(f, y, &units, &neg);
    while scan.advance() {
        let th = scan.theta.current();
        let p = prior(&s.source, th, offset)?;
        let score = if p == f64::NEG_INFINITY {
            p
        } else {
            p + s.comm.log2_prob(scan.residual.current())
        };
        best.offer(score, th);
    }
    Ok(best.finish(Regime::Nc, s.n))
}

/// Maximum-Q-probability decoding: maximize `p(φ) p(v)` over pairs with
/// `Aφ + v = y`, enumerating `v` over the support of the noise and `φ`
/// over each solution coset.
pub fn decode_max_q_prob(s: &Scenario, y: &[Elem], a: &FieldMatrix) -> Result<DecodeResult> {
    check_inputs(s, y, a)?;
    if s.regime().has_sensing_noise() {
        return Err(Error::Unsupported("decode_max_q_prob needs an identity sensing channel".into()));
    }
    let f = &s.field;
    let m = y.len();
    check_cap(coset_size(f.q(), m), s.max_candidates)?;
    let support: Vec<Elem> = (0..f.q()).filter(|&e| s.comm.pmf()[e as usize] > 0.0).collect();
    let mut best = Best::default();
    let mut idx = vec![0usize; m];
    loop {
        let v: Vec<Elem> = idx.iter().map(|&i| support[i]).collect();
        let pv = s.comm.log2_prob(&v);
        let rhs: Vec<Elem> = y.iter().zip(&v).map(|(&a, &b)| f.sub(a, b)).collect();
        let sol = solve_affine(f, a, &rhs)?;
        check_cap(sol.size(f.q()), s.max_candidates)?;
        if let Some(mut it) = sol.iter(f) {
            while it.advance() {
                let phi = it.current();
                best.offer(s.source.log2_prob(phi)? + pv, phi);
            }
        }
        let mut k = m;
        loop {
            if k == 0 {
                let regime = if s.comm.is_zero() { Regime::Wn } else { Regime::Nc };
                return Ok(best.finish(regime, s.n));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < support.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// MAP decoding with sensing noise:
/// `argmax log p(θ) + log Σ_z p(z|θ) p_u(y - Az)`.
///
/// The weights `p_u(y - Az)` are computed once. With zero communication
/// noise `z` ranges over the coset `{z : Az = y}` only.
pub fn decode_ncs(s: &Scenario, y: &[Elem], a: &FieldMatrix) -> Result<DecodeResult> {
    check_inputs(s, y, a)?;
    let f = &s.field;
    let n = s.n;
    check_cap(coset_size(f.q(), n), s.max_candidates)?;
    let mut weights: Vec<(FieldVec, f64)> = Vec::new();
    let units = unit_basis(n);
    if s.comm.is_zero() {
        let sol = solve_affine(f, a, y)?;
        check_cap(sol.size(f.q()), s.max_candidates)?;
        if let Some(it) = sol.iter(f) {
            weights.extend(it.map(|z| (z, 0.0)));
        }
    } else {
        let neg = negated_columns(f, a);
        let mut scan = ResidualScan::new(f, y, &units, &neg);
        while scan.advance() {
            let w = s.comm.log2_prob(scan.residual.current());
            if w > f64::NEG_INFINITY {
                weights.push((FieldVec(scan.theta.current().to_vec()), w));
            }
        }
    }
    let regime = Regime::from_noise(true, !s.comm.is_zero());
    let mut best = Best::default();
    let mut theta = CosetIter::new(f, FieldVec::zeros(n), &units);
    while theta.advance() {
        let th = theta.current();
        let p = s.source.log2_prob(th)?;
        let score = if p == f64::NEG_INFINITY {
            p
        } else {
            let mut acc = Log2SumExp2::default();
            for (z, w) in &weights {
                acc.push(s.sensing.log2_prob_vec(z, th) + w);
            }
            p + acc.value()
        };
        best.offer(score, th);
    }
    Ok(best.finish(regime, n))
}

/// Naive argmax of the exact posterior over all `q^N` candidates, summing
/// over every `z` for each candidate.
pub fn decode_exhaustive(s: &Scenario, y: &[Elem], a: &FieldMatrix) -> Result<DecodeResult> {
    check_inputs(s, y, a)?;
    let f = &s.field;
    let size = coset_size(f.q(), s.n);
    check_cap(size.saturating_mul(size), s.max_candidates.saturating_mul(s.max_candidates))?;
    let units = unit_basis(s.n);
    let all: Vec<FieldVec> = CosetIter::new(f, FieldVec::zeros(s.n), &units).collect();
    let mut best = Best::default();
    for th in &all {
        let mut acc = Log2SumExp2::default();
        for z in &all {
            let az = f.matvec(a, z)?;
            let u = f.sub_vec(y, &az)?;
            acc.push(s.source.log2_prob(th)? + s.sensing.log2_prob_vec(z, th) + s.comm.log2_prob(&u));
        }
        best.offer(acc.value(), th);
    }
    Ok(best.finish(s.regime(), s.n))
}

/// Decodes with the decoder matching the scenario's noise regime.
pub fn decode(s: &Scenario, y: &[Elem], a: &FieldMatrix) -> Result<DecodeResult> {
    if s.regime().has_sensing_noise() {
        decode_ncs(s, y, a)
    } else {
        decode_nc(s, y, a)
    }
}

/// One sampled instance of the measurement pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub theta: FieldVec,
    pub x: FieldVec,
    pub a: FieldMatrix,
    pub u: FieldVec,
    pub y: FieldVec,
}

pub fn sample_instance(s: &Scenario, trial_seed: u64) -> Result<Instance> {
    let f = &s.field;
    let theta = s.source.sample(s.n, seed::derive(trial_seed, stream::SOURCE))?;
    let x = s.sensing.apply(f, &theta, seed::derive(trial_seed, stream::SENSING))?;
    let a = match s.matrix {
        MatrixMode::Identity => f.identity(s.n),
        MatrixMode::Random => s.matrix_law()?.sample(seed::derive(trial_seed, stream::MATRIX))?,
    };
    let u = s.comm.sample(s.m, seed::derive(trial_seed, stream::COMM));
    let y = channel::measure(f, &a, &x, &u)?;
    Ok(Instance { theta, x, a, u, y })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub error: bool,
    pub theta: FieldVec,
    pub detail: DecodeResult,
}

/// Samples and decodes one trial; a pure function of `(s, trial_seed)`.
pub fn run_trial(s: &Scenario, trial_seed: u64) -> Result<TrialOutcome> {
    let inst = sample_instance(s, trial_seed)?;
    let detail = decode(s, &inst.y, &inst.a)?;
    Ok(TrialOutcome {
        error: detail.estimate != inst.theta,
        theta: inst.theta,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{CommNoise, SensingChannel};
    use crate::source::{SiSource, StmSource};
    use rand::Rng;

    fn si(pmf: Vec<f64>) -> SourceModel {
        SourceModel::Si(SiSource::new(pmf).unwrap())
    }

    fn mat(rows: &[Vec<Elem>]) -> FieldMatrix {
        FieldMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn wn_identity_returns_y() {
        let s = Scenario::builder(4, 4, si(vec![0.7, 0.1, 0.1, 0.1])).unwrap().build().unwrap();
        let y = [3, 0, 2, 1];
        let r = decode_nc(&s, &y, &s.field.identity(4)).unwrap();
        assert_eq!(&r.estimate[..], &y);
        assert_eq!(r.tie_count, 1);
        assert_eq!(r.regime, Regime::Wn);
        assert_eq!(r.work, 1);
    }

    #[test]
    fn wn_two_candidates() {
        let s = Scenario::builder(2, 1, si(vec![0.9, 0.1])).unwrap().build().unwrap();
        let r = decode_nc(&s, &[1], &mat(&[vec![1, 0]])).unwrap();
        assert_eq!(&r.estimate[..], &[1, 0]);
        assert_eq!(r.work, 2);
        assert!((r.score.log2_score - 0.09f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn nc_single_symbol() {
        let s = Scenario::builder(1, 1, si(vec![0.9, 0.1]))
            .unwrap()
            .comm(CommNoise::new(vec![0.9, 0.1]).unwrap())
            .build()
            .unwrap();
        let r = decode_nc(&s, &[0], &mat(&[vec![1]])).unwrap();
        assert_eq!(&r.estimate[..], &[0]);
        assert!((r.score.log2_score - 0.81f64.log2()).abs() < 1e-12);
        assert_eq!(r.regime, Regime::Nc);
    }

    #[test]
    fn ncs_identity_matrix_example() {
        let s = Scenario::builder(2, 2, si(vec![0.9, 0.1]))
            .unwrap()
            .sensing(SensingChannel::symmetric_flip(2, 0.1).unwrap())
            .build()
            .unwrap();
        let a = s.field.identity(2);
        let r = decode_ncs(&s, &[0, 0], &a).unwrap();
        assert_eq!(&r.estimate[..], &[0, 0]);
        assert_eq!(r.regime, Regime::Ns);
        let naive = decode_exhaustive(&s, &[0, 0], &a).unwrap();
        assert_eq!(naive.estimate, r.estimate);
    }

    #[test]
    fn ncs_score_below_prior() {
        let s = Scenario::builder(3, 2, si(vec![0.6, 0.3, 0.1]))
            .unwrap()
            .sensing(SensingChannel::symmetric_flip(3, 0.2).unwrap())
            .comm(CommNoise::worst_case(3, 0.1).unwrap())
            .build()
            .unwrap();
        let inst = sample_instance(&s, 5).unwrap();
        let r = decode_ncs(&s, &inst.y, &inst.a).unwrap();
        assert!(r.score.log2_score <= s.source.log2_prob(&r.estimate).unwrap() + 1e-12);
    }

    #[test]
    fn infeasible_wn_is_flagged() {
        let s = Scenario::builder(2, 2, si(vec![0.9, 0.1])).unwrap().build().unwrap();
        let r = decode_nc(&s, &[0, 1], &mat(&[vec![1, 1], vec![1, 1]])).unwrap();
        assert!(r.flagged_infeasible);
        assert!(!r.score.feasible());
        assert_eq!(&r.estimate[..], &[0, 0]);
    }

    #[test]
    fn cap_enforced() {
        let s = Scenario::builder(10, 2, si(vec![0.9, 0.1]))
            .unwrap()
            .comm(CommNoise::worst_case(2, 0.1).unwrap())
            .max_candidates(512)
            .build()
            .unwrap();
        let inst = sample_instance(&s, 1).unwrap();
        assert!(matches!(
            decode_nc(&s, &inst.y, &inst.a),
            Err(Error::CapExceeded { size: 1024, cap: 512 })
        ));
    }

    fn random_pmf(rng: &mut seed::Rng, q: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..q).map(|_| rng.random_range(0.05..1.0)).collect();
        let t: f64 = w.iter().sum();
        w.into_iter().map(|x| x / t).collect()
    }

    fn random_nc_scenario(rng: &mut seed::Rng, noisy: bool) -> Scenario {
        let q: u32 = if rng.random_bool(0.5) { 2 } else { 3 };
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=6);
        let mut b = Scenario::builder(n, m, si(random_pmf(rng, q as usize)))
            .unwrap()
            .gamma(rng.random_range(0.1..(1.0 - 1.0 / q as f64)))
            .seed(rng.random_range(0..1 << 40));
        if noisy {
            b = b.comm(CommNoise::new(random_pmf(rng, q as usize)).unwrap());
        }
        b.build().unwrap()
    }

    #[test]
    fn max_q_prob_equivalence() {
        let mut rng = seed::rng(2024);
        for i in 0..200 {
            let s = random_nc_scenario(&mut rng, i % 2 == 1);
            let inst = sample_instance(&s, s.master_seed).unwrap();
            let a = decode_nc(&s, &inst.y, &inst.a).unwrap();
            let b = decode_max_q_prob(&s, &inst.y, &inst.a).unwrap();
            assert_eq!(a.estimate, b.estimate, "scenario {i}");
            assert_eq!(a.tie_count, b.tie_count, "scenario {i}");
            assert!((a.score.log2_score - b.score.log2_score).abs() < 1e-9);
        }
    }

    #[test]
    fn regime_degeneration() {
        let mut rng = seed::rng(7);
        for i in 0..60 {
            let s = random_nc_scenario(&mut rng, i % 2 == 1);
            let inst = sample_instance(&s, i).unwrap();
            let nc = decode_nc(&s, &inst.y, &inst.a).unwrap();
            let ncs = decode_ncs(&s, &inst.y, &inst.a).unwrap();
            assert_eq!(nc.estimate, ncs.estimate);
            assert_eq!(nc.tie_count, ncs.tie_count);
            assert_eq!(nc.score, ncs.score);
        }
        let mut rng = seed::rng(8);
        for i in 0..60 {
            let wn = random_nc_scenario(&mut rng, false);
            let inst = sample_instance(&wn, i).unwrap();
            let mut point_mass = wn.clone();
            point_mass.comm = CommNoise::new({
                let mut p = vec![0.0; wn.q() as usize];
                p[0] = 1.0;
                p
            })
            .unwrap();
            let coset = decode_nc(&wn, &inst.y, &inst.a).unwrap();
            let full = decode_exhaustive(&point_mass, &inst.y, &inst.a).unwrap();
            assert_eq!(coset.estimate, full.estimate);
            assert_eq!(coset.tie_count, full.tie_count);
        }
    }

    #[test]
    fn coset_matches_naive_scan() {
        let mut rng = seed::rng(99);
        for t in 0..40 {
            let n = rng.random_range(6..=12);
            let m = rng.random_range(1..=n);
            let s = Scenario::builder(n, m, si(vec![0.8, 0.2]))
                .unwrap()
                .gamma(0.3)
                .build()
                .unwrap();
            let inst = sample_instance(&s, t).unwrap();
            let fast = decode_nc(&s, &inst.y, &inst.a).unwrap();
            let mut best = Best::default();
            for th in CosetIter::new(&s.field, FieldVec::zeros(n), &unit_basis(n)) {
                let ok = s.field.matvec(&inst.a, &th).unwrap() == inst.y;
                let score = if ok { s.source.log2_prob(&th).unwrap() } else { f64::NEG_INFINITY };
                best.offer(score, &th);
            }
            let naive = best.finish(Regime::Wn, n);
            assert_eq!(fast.estimate, naive.estimate);
            assert_eq!(fast.tie_count, naive.tie_count);
        }
    }

    #[test]
    fn ncs_matches_exhaustive() {
        let mut rng = seed::rng(31);
        for t in 0..30 {
            let q = if t % 2 == 0 { 2 } else { 3 };
            let n = rng.random_range(1..=4);
            let m = rng.random_range(1..=4);
            let mut b = Scenario::builder(n, m, si(random_pmf(&mut rng, q)))
                .unwrap()
                .sensing(SensingChannel::symmetric_flip(q as u32, 0.15).unwrap());
            if t % 3 != 0 {
                b = b.comm(CommNoise::new(random_pmf(&mut rng, q)).unwrap());
            }
            let s = b.build().unwrap();
            let inst = sample_instance(&s, t).unwrap();
            let fast = decode_ncs(&s, &inst.y, &inst.a).unwrap();
            let naive = decode_exhaustive(&s, &inst.y, &inst.a).unwrap();
            assert_eq!(fast.estimate, naive.estimate, "trial {t}");
            assert!((fast.score.log2_score - naive.score.log2_score).abs() < 1e-9);
        }
    }

    #[test]
    fn offset_invariance() {
        let mut rng = seed::rng(3);
        for i in 0..40 {
            let s = random_nc_scenario(&mut rng, true);
            let inst = sample_instance(&s, i).unwrap();
            let base = decode_nc(&s, &inst.y, &inst.a).unwrap();
            for offset in [-37.5, 12.25, 1000.0] {
                let shifted = decode_nc_offset(&s, &inst.y, &inst.a, offset).unwrap();
                assert_eq!(shifted.estimate, base.estimate);
                assert_eq!(shifted.tie_count, base.tie_count);
            }
        }
    }

    #[test]
    fn uniform_noise_and_prior_ties_everything() {
        let s = Scenario::builder(3, 2, si(vec![0.5, 0.5]))
            .unwrap()
            .comm(CommNoise::new(vec![0.5, 0.5]).unwrap())
            .build()
            .unwrap();
        let inst = sample_instance(&s, 0).unwrap();
        let r = decode_max_q_prob(&s, &inst.y, &inst.a).unwrap();
        assert_eq!(r.tie_count, 8);
        assert_eq!(&r.estimate[..], &[0, 0, 0]);
    }

    #[test]
    fn identity_override_never_errs() {
        let s = Scenario::builder(8, 8, si(vec![0.7, 0.3]))
            .unwrap()
            .matrix(MatrixMode::Identity)
            .build()
            .unwrap();
        for t in 0..50 {
            assert!(!run_trial(&s, t).unwrap().error);
        }
    }

    #[test]
    fn no_measurements_picks_prior_mode() {
        let s = Scenario::builder(4, 0, si(vec![0.8, 0.2])).unwrap().build().unwrap();
        let trials = 4000;
        let mut errors = 0;
        for t in 0..trials {
            let out = run_trial(&s, seed::derive(11, t)).unwrap();
            assert_eq!(out.detail.work, 16);
            assert_eq!(&out.detail.estimate[..], &[0, 0, 0, 0]);
            errors += out.error as u32;
        }
        let expected = 1.0 - 0.8f64.powi(4);
        let rate = errors as f64 / trials as f64;
        let sd = (expected * (1.0 - expected) / trials as f64).sqrt();
        assert!((rate - expected).abs() < 4.0 * sd, "{rate} vs {expected}");
    }

    #[test]
    fn trials_reproducible() {
        let s = Scenario::builder(6, 4, si(vec![0.6, 0.2, 0.2]))
            .unwrap()
            .gamma(0.4)
            .comm(CommNoise::worst_case(3, 0.05).unwrap())
            .build()
            .unwrap();
        for t in 0..10 {
            assert_eq!(run_trial(&s, t).unwrap(), run_trial(&s, t).unwrap());
        }
    }

    #[test]
    fn markov_prior_decodes() {
        let src = SourceModel::Stm(StmSource::binary_symmetric(0.1).unwrap());
        let s = Scenario::builder(10, 6, src.clone())
            .unwrap()
            .comm(CommNoise::worst_case(2, 0.02).unwrap())
            .build()
            .unwrap();
        let inst = sample_instance(&s, 4).unwrap();
        assert_eq!(
            decode_nc(&s, &inst.y, &inst.a).unwrap(),
            decode_nc(&s, &inst.y, &inst.a).unwrap()
        );
        let mq = decode_max_q_prob(&s, &inst.y, &inst.a).unwrap();
        assert_eq!(decode_nc(&s, &inst.y, &inst.a).unwrap().estimate, mq.estimate);
    }

    #[test]
    fn error_rate_falls_with_m() {
        let rates: Vec<f64> = [2usize, 6, 10]
            .iter()
            .map(|&m| {
                let s = Scenario::builder(12, m, si(vec![0.9, 0.1])).unwrap().gamma(0.5).build().unwrap();
                let errs = (0..200).filter(|&t| run_trial(&s, seed::derive(5, t)).unwrap().error).count();
                errs as f64 / 200.0
            })
            .collect();
        assert!(rates[0] >= rates[1] && rates[1] >= rates[2], "{rates:?}");
    }
}

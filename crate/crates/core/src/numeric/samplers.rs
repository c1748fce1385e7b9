//! Randomized checks of the perturbation lemmas.
//!
//! Every trial seeds its own ChaCha8 stream from `(seed, trial)`, trials run
//! on a rayon pool capped by `CYCLEHOM_THREADS`, and results are reduced in
//! trial order, so reports do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::embedding::{
    compose_embeddings, dp_example_phi, is_locally_regular, is_proper, is_rigid_numeric, rigid_embedding,
    EmbeddingData,
};
use super::linalg::{
    column_projection, dist_to_partial_isometry, haar_unitary, near_identity_unitary, op_norm, perturbation,
    random_partial_isometry, upper_rank, CMatrix,
};
use super::{RIGIDITY_TOL, SAMPLER_MARGIN, VALIDATION_TOL};
use crate::cycle::Signature;

/// Violation witnesses kept per report.
pub const MAX_WITNESSES: usize = 16;
/// Rejection draws allowed per requested sample.
pub const DRAWS_PER_SAMPLE: usize = 50;

thread_local! {
    static THREAD_OVERRIDE: std::cell::Cell<Option<usize>> = const { std::cell::Cell::new(None) };
}

/// Worker count for sampler pools: an active [`with_thread_cap`] override,
/// else `CYCLEHOM_THREADS`, else rayon's default.
pub fn thread_cap() -> Option<usize> {
    THREAD_OVERRIDE.with(|c| c.get()).or_else(|| {
        std::env::var("CYCLEHOM_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
    })
}

/// Runs `f` with sampler pools on this thread capped at `threads` workers.
pub fn with_thread_cap<R>(threads: usize, f: impl FnOnce() -> R) -> R {
    let prev = THREAD_OVERRIDE.with(|c| c.replace(Some(threads.max(1))));
    let out = f();
    THREAD_OVERRIDE.with(|c| c.set(prev));
    out
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trials<R, F>(samples: usize, seed: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> R + Sync + Send,
{
    let body = || (0..samples).into_par_iter().map(|t| f(&mut trial_rng(seed, t), t)).collect();
    match rayon::ThreadPoolBuilder::new().num_threads(thread_cap().unwrap_or(0)).build() {
        Ok(pool) => pool.install(body),
        Err(_) => (0..samples).map(|t| f(&mut trial_rng(seed, t), t)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma62Config {
    pub samples: usize,
    pub seed: u64,
    /// Largest size of each of the four blocks; the contraction is at most
    /// `2·max_block` square.
    pub max_block: usize,
    pub margin: f64,
}

impl Default for Lemma62Config {
    fn default() -> Self {
        Lemma62Config { samples: 10_000, seed: 42, max_block: 4, margin: SAMPLER_MARGIN }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma62Witness {
    pub trial: usize,
    pub adversarial: bool,
    pub matrix: CMatrix<f64>,
    pub corner_rows: usize,
    pub corner_cols: usize,
    pub eta: f64,
    pub delta: f64,
    pub distance: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma62Report {
    pub samples: usize,
    pub seed: u64,
    pub adversarial: usize,
    pub violations: usize,
    /// Largest `dist(x) / 8δ`.
    pub max_ratio: f64,
    pub max_delta: f64,
    pub worst: Option<Lemma62Witness>,
    pub witnesses: Vec<Lemma62Witness>,
}

impl Lemma62Report {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn corner(m: &CMatrix<f64>, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix<f64> {
    m.view((r0, c0), (rows, cols)).into_owned()
}

fn lemma62_trial(rng: &mut ChaCha8Rng, trial: usize, cfg: &Lemma62Config) -> (Lemma62Witness, bool) {
    let mut dim = || rng.random_range(1..=cfg.max_block);
    let (n1, m1, n2, m2) = (dim(), dim(), dim(), dim());
    let adversarial = rng.random_bool(0.25);
    let mut scale: f64 = 1.0 / 8.0;
    loop {
        let k1 = rng.random_range(0..=n1.min(m1));
        let k2 = rng.random_range(0..=n2.min(m2));
        let v1 = random_partial_isometry::<f64, _>(rng, n1, m1, k1);
        let v2 = random_partial_isometry::<f64, _>(rng, n2, m2, k2);
        let mut m = CMatrix::<f64>::zeros(n1 + n2, m1 + m2);
        if adversarial {
            // x = (1 − s)·v1 with no off-diagonal mass: dist(x) = s = δ
            let s = rng.random_range(0.0..scale);
            m.view_mut((0, 0), (n1, m1)).copy_from(&(v1 * num_complex::Complex::new(1.0 - s, 0.0)));
            m.view_mut((n1, m1), (n2, m2)).copy_from(&v2);
        } else {
            m.view_mut((0, 0), (n1, m1)).copy_from(&v1);
            m.view_mut((n1, m1), (n2, m2)).copy_from(&v2);
            let size = rng.random_range(0.0..scale) / 3.0;
            m += perturbation::<f64, _>(rng, n1 + n2, m1 + m2, size);
            let norm = op_norm(&m);
            if norm > 1.0 {
                m /= num_complex::Complex::new(norm, 0.0);
            }
        }
        let eta = dist_to_partial_isometry(&m).distance;
        let e1 = op_norm(&corner(&m, 0, m1, n1, m2));
        let e2 = op_norm(&corner(&m, n1, 0, n2, m1));
        let delta = eta + e1 + e2;
        if delta >= 1.0 / 8.0 {
            scale /= 2.0;
            continue;
        }
        let distance = dist_to_partial_isometry(&corner(&m, 0, 0, n1, m1)).distance;
        let ratio = if delta > 0.0 { distance / (8.0 * delta) } else if distance > 0.0 { f64::INFINITY } else { 0.0 };
        let violated = distance > 8.0 * delta + cfg.margin;
        let w = Lemma62Witness {
            trial,
            adversarial,
            matrix: m,
            corner_rows: n1,
            corner_cols: m1,
            eta,
            delta,
            distance,
            ratio,
        };
        return (w, violated);
    }
}

/// Contractions `[[x, ε1], [ε2, y]]` near a block-diagonal partial isometry,
/// checked for `dist(x) ≤ 8δ` with `δ = η + ‖ε1‖ + ‖ε2‖ < 1/8`.
pub fn verify_lemma_6_2(cfg: &Lemma62Config) -> Lemma62Report {
    let results = run_trials(cfg.samples, cfg.seed, |rng, t| lemma62_trial(rng, t, cfg));
    let mut report = Lemma62Report {
        samples: cfg.samples,
        seed: cfg.seed,
        adversarial: 0,
        violations: 0,
        max_ratio: 0.0,
        max_delta: 0.0,
        worst: None,
        witnesses: Vec::new(),
    };
    for (w, violated) in results {
        report.adversarial += w.adversarial as usize;
        report.max_delta = report.max_delta.max(w.delta);
        if violated {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(w.clone());
            }
        }
        if report.worst.as_ref().is_none_or(|b| w.ratio > b.ratio) {
            report.max_ratio = w.ratio;
            report.worst = Some(w);
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma65Config {
    pub samples: usize,
    pub seed: u64,
    pub max_dim: usize,
    /// Hypothesis levels are drawn from `(0, max_epsilon]`.
    pub max_epsilon: f64,
    pub margin: f64,
}

impl Default for Lemma65Config {
    fn default() -> Self {
        Lemma65Config { samples: 10_000, seed: 7, max_dim: 8, max_epsilon: 0.05, margin: SAMPLER_MARGIN }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma65Witness {
    pub trial: usize,
    pub projections: [CMatrix<f64>; 4],
    /// Smallest `ε` meeting all three hypotheses.
    pub epsilon: f64,
    pub e1_minus_e3: f64,
    pub e2_minus_e4: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SamplerStatus {
    Complete,
    /// The draw budget ran out before every trial found a hypothesis-satisfying quadruple.
    Underpowered { accepted: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma65Report {
    pub samples: usize,
    pub seed: u64,
    pub status: SamplerStatus,
    pub accepted: usize,
    pub draws: usize,
    pub violations: usize,
    /// Largest `max(‖E1 − E3‖, ‖E2 − E4‖) / √(6ε)`.
    pub max_ratio: f64,
    pub max_epsilon: f64,
    pub worst: Option<Lemma65Witness>,
    pub witnesses: Vec<Lemma65Witness>,
}

impl Lemma65Report {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.status == SamplerStatus::Complete
    }
}

/// The least `ε` for which the quadruple meets the hypotheses.
pub fn lemma65_epsilon(e: &[CMatrix<f64>; 4]) -> f64 {
    let sum = &e[0] + &e[1] - &e[2] - &e[3];
    (op_norm(&sum) / 2.0).max(op_norm(&(&e[0] * &e[3]))).max(op_norm(&(&e[1] * &e[2])))
}

/// Conclusion norms `(‖E1 − E3‖, ‖E2 − E4‖)`.
pub fn lemma65_conclusions(e: &[CMatrix<f64>; 4]) -> (f64, f64) {
    (op_norm(&(&e[0] - &e[2])), op_norm(&(&e[1] - &e[3])))
}

fn lemma65_trial(rng: &mut ChaCha8Rng, trial: usize, cfg: &Lemma65Config) -> (Option<(Lemma65Witness, bool)>, usize) {
    let target = cfg.max_epsilon * (1.0 - rng.random::<f64>());
    let mut size = target;
    for draw in 1..=DRAWS_PER_SAMPLE {
        let n = rng.random_range(2..=cfg.max_dim);
        let k1 = rng.random_range(1..n);
        let k2 = rng.random_range(1..=n - k1);
        let u = haar_unitary::<f64, _>(rng, n);
        let p = column_projection(&u, 0, k1);
        let q = column_projection(&u, k1, k2);
        let mut conj = |x: &CMatrix<f64>| {
            let w = near_identity_unitary::<f64, _>(rng, n, size);
            &w * x * w.adjoint()
        };
        let e = [conj(&p), conj(&q), conj(&p), conj(&q)];
        let epsilon = lemma65_epsilon(&e);
        if epsilon > target {
            size /= 2.0;
            continue;
        }
        let (d13, d24) = lemma65_conclusions(&e);
        let bound = (6.0 * epsilon).sqrt();
        let violated = d13.max(d24) > bound + cfg.margin;
        let ratio = if bound > 0.0 { d13.max(d24) / bound } else { 0.0 };
        let w = Lemma65Witness { trial, projections: e, epsilon, e1_minus_e3: d13, e2_minus_e4: d24, ratio };
        return (Some((w, violated)), draw);
    }
    (None, DRAWS_PER_SAMPLE)
}

/// Projection quadruples near `(P, Q, P, Q)` with `P ⊥ Q`, accepted when the
/// hypotheses hold at a level `ε ≤ max_epsilon`, then checked for
/// `‖E1 − E3‖, ‖E2 − E4‖ ≤ √(6ε)`.
pub fn verify_lemma_6_5(cfg: &Lemma65Config) -> Lemma65Report {
    let results = run_trials(cfg.samples, cfg.seed, |rng, t| lemma65_trial(rng, t, cfg));
    let mut report = Lemma65Report {
        samples: cfg.samples,
        seed: cfg.seed,
        status: SamplerStatus::Complete,
        accepted: 0,
        draws: 0,
        violations: 0,
        max_ratio: 0.0,
        max_epsilon: 0.0,
        worst: None,
        witnesses: Vec::new(),
    };
    for (outcome, draws) in results {
        report.draws += draws;
        let Some((w, violated)) = outcome else { continue };
        report.accepted += 1;
        report.max_epsilon = report.max_epsilon.max(w.epsilon);
        if violated {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(w.clone());
            }
        }
        if report.worst.as_ref().is_none_or(|b| w.ratio > b.ratio) {
            report.max_ratio = w.ratio;
            report.worst = Some(w);
        }
    }
    if report.accepted < cfg.samples {
        report.status = SamplerStatus::Underpowered { accepted: report.accepted };
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperRankWitness {
    pub trial: usize,
    pub partial_isometry: CMatrix<f64>,
    pub perturbation: CMatrix<f64>,
    pub rank: usize,
    pub recovered: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperRankReport {
    pub samples: usize,
    pub seed: u64,
    pub failures: usize,
    pub max_perturbation: f64,
    pub witnesses: Vec<UpperRankWitness>,
}

impl UpperRankReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// `upper_rank(u + e) = rank(u)` for random partial isometries `u` of size
/// at most `max_dim` and perturbations with `‖e‖ ≤ 1/3`.
pub fn verify_upper_rank(samples: usize, seed: u64, max_dim: usize) -> UpperRankReport {
    let results = run_trials(samples, seed, |rng, trial| {
        let (n, m) = (rng.random_range(1..=max_dim), rng.random_range(1..=max_dim));
        let rank = rng.random_range(0..=n.min(m));
        let u = random_partial_isometry::<f64, _>(rng, n, m, rank);
        let size = rng.random_range(0.0..=1.0 / 3.0);
        let e = perturbation::<f64, _>(rng, n, m, size);
        let recovered = upper_rank(&(&u + &e));
        UpperRankWitness { trial, partial_isometry: u, perturbation: e, rank, recovered }
    });
    let mut report = UpperRankReport { samples, seed, failures: 0, max_perturbation: 0.0, witnesses: Vec::new() };
    for w in results {
        report.max_perturbation = report.max_perturbation.max(op_norm(&w.perturbation));
        if w.rank != w.recovered {
            report.failures += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(w);
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidRecoveryReport {
    pub samples: usize,
    pub seed: u64,
    pub failures: usize,
    pub failed_signatures: Vec<[i64; 4]>,
}

fn random_signature(rng: &mut ChaCha8Rng, max_rho: i64) -> Signature<i64> {
    let rho = rng.random_range(1..=max_rho);
    let mut r = [0i64; 4];
    for _ in 0..rho {
        r[rng.random_range(0..4)] += 1;
    }
    Signature::new(r).expect("nonnegative")
}

/// Randomly conjugated rigid embeddings of multiplicity at most `max_rho`
/// must be recognized with their construction signature.
pub fn verify_rigid_recovery(samples: usize, seed: u64, max_rho: i64, tol: f64) -> RigidRecoveryReport {
    let results = run_trials(samples, seed, |rng, _| {
        let s = random_signature(rng, max_rho);
        let d = rigid_embedding::<f64, _>(&s, Some(rng));
        let ok = d.validate(VALIDATION_TOL).is_empty() && is_rigid_numeric(&d, tol).as_ref() == Some(&s);
        (*s.components(), ok)
    });
    let failed_signatures: Vec<[i64; 4]> = results.into_iter().filter(|(_, ok)| !ok).map(|(r, _)| r).collect();
    RigidRecoveryReport { samples, seed, failures: failed_signatures.len(), failed_signatures }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquirankReport {
    pub samples: usize,
    pub seed: u64,
    /// Pairs whose inner factor is proper, not locally regular, and whose
    /// composite is rigid.
    pub qualifying: usize,
    pub counterexamples: Vec<([usize; 4], [usize; 4])>,
}

/// Diagonal phase conjugation of the rank-one-block example.
fn phased_dp(rng: &mut ChaCha8Rng) -> EmbeddingData<f64> {
    let mut d = dp_example_phi::<f64>();
    let phase = |rng: &mut ChaCha8Rng| num_complex::Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let rows: [_; 4] = std::array::from_fn(|_| phase(rng));
    let cols: [_; 4] = std::array::from_fn(|_| phase(rng));
    // spaces P' R' Q' S' and P R Q S are all one-dimensional here
    let pairs = [([0, 2], [0, 2]), ([0, 2], [1, 3]), ([1, 3], [1, 3]), ([1, 3], [0, 2])];
    for (g, (r, c)) in pairs.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                d.unitaries[g][(i, j)] *= rows[r[i]] * cols[c[j]].conj();
            }
        }
    }
    d
}

/// Haar `U13, U23, U24` with `U14` forced by the cycle relation.
fn haar_embedding(rng: &mut ChaCha8Rng, rho: usize) -> EmbeddingData<f64> {
    let split = |rng: &mut ChaCha8Rng| {
        let a = rng.random_range(0..=rho);
        (a, rho - a)
    };
    let (pp, qq) = split(rng);
    let (rr, ss) = split(rng);
    let (p, q) = split(rng);
    let (r, s) = split(rng);
    let u13 = haar_unitary::<f64, _>(rng, rho);
    let u23 = haar_unitary::<f64, _>(rng, rho);
    let u24 = haar_unitary::<f64, _>(rng, rho);
    let u14 = &u13 * u23.adjoint() * &u24;
    EmbeddingData { row_dims: [pp, rr, qq, ss], col_dims: [p, r, q, s], unitaries: [u13, u14, u24, u23] }
}

/// Composites `ψ ∘ φ` that come out rigid although `φ` is proper and not
/// locally regular must have all eight dimensions of `φ` equal.
pub fn verify_equirank(samples: usize, seed: u64) -> EquirankReport {
    let results = run_trials(samples, seed, |rng, _| {
        let inner = if rng.random_bool(0.5) {
            phased_dp(rng)
        } else {
            let rho = rng.random_range(1..=3);
            haar_embedding(rng, rho)
        };
        if !is_proper(&inner, VALIDATION_TOL) || is_locally_regular(&inner, RIGIDITY_TOL) {
            return None;
        }
        let outer = if rng.random_bool(0.5) { phased_dp(rng) } else { haar_embedding(rng, 2) };
        if !is_proper(&outer, VALIDATION_TOL) {
            return None;
        }
        let c = compose_embeddings(&inner, &outer).ok()?;
        is_rigid_numeric(&c, RIGIDITY_TOL)?;
        Some((inner.row_dims, inner.col_dims))
    });
    let mut report = EquirankReport { samples, seed, qualifying: 0, counterexamples: Vec::new() };
    for (rows, cols) in results.into_iter().flatten() {
        report.qualifying += 1;
        if rows.iter().chain(cols.iter()).any(|&x| x != rows[0]) {
            report.counterexamples.push((rows, cols));
        }
    }
    report
}

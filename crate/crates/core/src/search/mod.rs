//! Derivative-free search for tail coefficients `a_1 .. a_d` that satisfy
//! the sign conditions at a target dimension, with exact re-certification
//! of rationalized candidates.
//!
//! The objective is the feasibility margin, the minimum of the four
//! normalized quantities `disc, I(1), -I''(1), -J(1)` with `a_0` eliminated
//! as the largest root. Coordinates are searched through
//! `a_i = SCALE * sinh(z_i)`, which samples magnitudes from `1e-5` to `1e3`
//! roughly log-uniformly.

mod nelder_mead;
mod rationalize;

pub use nelder_mead::{minimize, Minimum, SimplexOptions};
pub use rationalize::{best_approximation, rationalize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::certify::{certify_dimension, check_degree, Certificate, Weights};
use crate::error::{Error, Result};
use crate::exact::{format_rational, rational_to_f64};
use crate::moments::moment_family_f64;
use crate::poly::{alpha_coefficients, beta_coefficients, CoeffVector};

/// Scale of the `sinh` coordinate map.
const SCALE: f64 = 1e-5;

/// Bound on `|a_i|` of the search box.
pub const BOX: f64 = 1e3;

fn z_of(a: f64) -> f64 {
    (a / SCALE).asinh()
}

fn a_of(z: f64) -> f64 {
    let zmax = z_of(BOX);
    (SCALE * z.clamp(-zmax, zmax).sinh()).clamp(-BOX, BOX)
}

/// `sum_q c_q x_q k_q` and `sum_q |c_q x_q k_q|` in floating point.
fn weighted(values: &[f64], moments: &[f64], k: &[f64]) -> (f64, f64) {
    values.iter().zip(moments).zip(k).fold((0.0, 0.0), |(s, a), ((x, c), w)| {
        let t = x * c * w;
        (s + t, a + t.abs())
    })
}

/// The four normalized margins at a given dimension. Returned as
/// `[disc, I(1), -I''(1), -J(1)]`, each divided by the sum of absolute
/// values of its contributing terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    pub discriminant: f64,
    pub i1: f64,
    pub neg_i2: f64,
    pub neg_j1: f64,
    pub a0: f64,
}

impl Margins {
    pub fn min(&self) -> f64 {
        self.discriminant.min(self.i1).min(self.neg_i2).min(self.neg_j1)
    }
}

/// Floating evaluator for a fixed `(n, d, T_c)`; moment values and weights
/// are computed once.
#[derive(Debug, Clone)]
pub struct MarginEvaluator {
    n: i64,
    d: usize,
    moments: Vec<f64>,
    wi: Vec<f64>,
    wj: Vec<f64>,
}

impl MarginEvaluator {
    pub fn new(n: i64, d: usize, tc: f64) -> Result<Self> {
        check_degree(n, d)?;
        let w = Weights::new(n, d)?;
        Ok(Self {
            n,
            d,
            moments: moment_family_f64(n, 2 * d as i64 + 1, tc)?,
            wi: w.i.iter().map(rational_to_f64).collect(),
            wj: w.j.iter().map(rational_to_f64).collect(),
        })
    }

    fn i_terms(&self, coeffs: &[f64], order: u32) -> (f64, f64) {
        let alpha = alpha_coefficients(coeffs, self.n);
        let k: Vec<f64> = self
            .wi
            .iter()
            .enumerate()
            .map(|(q, w)| {
                let q = q as f64;
                w * match order {
                    0 => 1.0,
                    1 => q + 2.0,
                    _ => (q + 2.0) * (q + 1.0),
                }
            })
            .collect();
        weighted(&alpha, &self.moments, &k)
    }

    pub fn margins(&self, tail: &[f64]) -> Result<Margins> {
        if tail.len() != self.d {
            return Err(Error::Usage(format!("expected {} tail coefficients, got {}", self.d, tail.len())));
        }
        let with_a0 = |a0: f64| -> Vec<f64> { std::iter::once(a0).chain(tail.iter().copied()).collect() };
        let v: Vec<f64> = (0..3).map(|k| self.i_terms(&with_a0(k as f64), 1).0).collect();
        let a = (v[2] - 2.0 * v[1] + v[0]) / 2.0;
        let b = (4.0 * v[1] - 3.0 * v[0] - v[2]) / 2.0;
        let c = v[0];
        let disc = b * b - 4.0 * a * c;
        let scale_d = b * b + 4.0 * (a * c).abs();
        let disc_margin = if scale_d > 0.0 { disc / scale_d } else { 0.0 };
        if !(disc > 0.0) || !(a > 0.0) {
            return Ok(Margins { discriminant: disc_margin, i1: 0.0, neg_i2: 0.0, neg_j1: 0.0, a0: f64::NAN });
        }
        let a0 = (-b + disc.sqrt()) / (2.0 * a);
        let coeffs = with_a0(a0);
        let ratio = |(v, s): (f64, f64)| if s > 0.0 { v / s } else { 0.0 };
        let i1 = ratio(self.i_terms(&coeffs, 0));
        let i2 = ratio(self.i_terms(&coeffs, 2));
        let j1 = ratio(weighted(&beta_coefficients(&coeffs), &self.moments, &self.wj));
        Ok(Margins { discriminant: disc_margin, i1, neg_i2: -i2, neg_j1: -j1, a0 })
    }

    pub fn margin(&self, tail: &[f64]) -> Result<f64> {
        Ok(self.margins(tail)?.min())
    }
}

/// Minimum of the normalized margins; positive iff all four strict
/// conditions hold numerically.
pub fn feasibility_margin(n: i64, tail: &[f64], tc: f64) -> Result<f64> {
    MarginEvaluator::new(n, tail.len(), tc)?.margin(tail)
}

/// A searched tail with its floating margin and, once rechecked, its exact
/// rationalization and certificate.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub n: i64,
    pub tail_f64: Vec<f64>,
    pub margin: f64,
    pub tail: Option<CoeffVector>,
    /// Present only when the exact certificate of `tail` passes.
    pub certified: Option<Certificate>,
    pub note: String,
}

impl Candidate {
    pub fn new(n: i64, tail_f64: Vec<f64>, margin: f64) -> Self {
        Self { n, tail_f64, margin, tail: None, certified: None, note: String::new() }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "n": self.n,
            "tail_float": self.tail_f64,
            "tail": self.tail.as_ref().map(|t| t.tail().iter().map(format_rational).collect::<Vec<_>>()),
            "margin": self.margin,
            "certified": self.certified.is_some(),
            "certificate": self.certified.as_ref().map(Certificate::to_json),
            "note": self.note,
        })
    }
}

/// Replaces the floating tail by its best rationals under `max_den` and
/// runs the exact certificate at `T_c = tc`. Only a passing exact
/// certificate marks the candidate certified.
pub fn rationalize_and_recheck(c: &Candidate, max_den: u64, tc: f64) -> Candidate {
    let mut out = c.clone();
    out.certified = None;
    let tail = match c.tail_f64.iter().map(|&x| rationalize(x, max_den)).collect::<Result<Vec<_>>>() {
        Ok(t) => CoeffVector::from_tail(t),
        Err(e) => {
            out.note = format!("rationalization failed: {e}");
            return out;
        }
    };
    let tc = match rationalize(tc, max_den) {
        Ok(t) => t,
        Err(e) => {
            out.note = format!("rationalization failed: {e}");
            return out;
        }
    };
    match certify_dimension(c.n, &tail, &tc) {
        Ok(cert) if cert.passed() => {
            out.note = "certified".into();
            out.certified = Some(cert);
        }
        Ok(cert) => {
            out.note = format!(
                "rejected: discriminant {}, I(1) {}, I'(1) {}, I''(1) {}, J(1) {}",
                cert.verdicts.discriminant.name(),
                cert.verdicts.i1.name(),
                cert.verdicts.iprime1.name(),
                cert.verdicts.idoubleprime1.name(),
                cert.verdicts.j1.name()
            );
        }
        Err(e) => out.note = format!("rejected: {e}"),
    }
    out.tail = Some(tail);
    out
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Total number of margin evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Denominator cap for rationalization.
    pub max_den: u64,
    /// `T_c` the margin is evaluated at.
    pub tc: f64,
    /// Number of best distinct candidates that are rechecked exactly.
    pub recheck: usize,
    /// Number of candidates reported.
    pub keep: usize,
}

impl SearchOptions {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self { budget, seed, max_den: 1_000_000, tc: 0.0, recheck: 8, keep: 16 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub d: usize,
    pub n: i64,
    pub options: SearchOptions,
    pub evaluations: usize,
    pub candidates: Vec<Candidate>,
}

impl SearchReport {
    pub fn certified(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.certified.is_some())
    }

    pub fn to_json(&self) -> Json {
        json!({
            "parameters": {
                "d": self.d,
                "n": self.n,
                "budget": self.options.budget,
                "seed": self.options.seed,
                "max_den": self.options.max_den,
                "tc": self.options.tc,
            },
            "evaluations": self.evaluations,
            "candidates": self.candidates.iter().map(Candidate::to_json).collect::<Vec<_>>(),
            "version": crate::VERSION,
        })
    }
}

/// Random start in `z` coordinates: magnitudes log-uniform over
/// `[1e-4, 10]`, signs alternating `-, +, -, ...` from `a_1`.
fn random_start(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..d)
        .map(|i| {
            let mag = 10f64.powf(rng.gen_range(-4.0..1.0));
            let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
            z_of(sign * mag)
        })
        .collect()
}

struct Run {
    z: Vec<f64>,
    margin: f64,
    evaluations: usize,
}

fn descend(eval: &MarginEvaluator, z0: &[f64], budget: usize, step: f64) -> Run {
    let objective = |z: &[f64]| -> f64 {
        let a: Vec<f64> = z.iter().map(|&v| a_of(v)).collect();
        eval.margin(&a).map(|m| -m).unwrap_or(f64::INFINITY)
    };
    let mut z = z0.to_vec();
    let mut best = f64::INFINITY;
    let mut used = 0usize;
    // restart the simplex from its own optimum while budget remains
    while used < budget {
        let m = minimize(objective, &z, SimplexOptions { step, f_tol: 1e-10, max_evaluations: budget - used });
        used += m.evaluations;
        if m.value < best - 1e-12 {
            best = m.value;
            z = m.x;
        } else {
            break;
        }
    }
    Run { margin: -best, z, evaluations: used }
}

/// Multi-start simplex descent followed by perturbed restarts around the
/// best points found; deterministic for fixed `(d, n, options)`.
///
/// Half of the budget goes to independent starts, the rest to restarts from
/// perturbations of the current leaders. Each start draws from its own
/// stream of the seeded generator, so results do not depend on the thread
/// count.
pub fn search(d: usize, n: i64, options: SearchOptions) -> Result<SearchReport> {
    if options.budget == 0 {
        return Err(Error::Usage("search budget must be positive".into()));
    }
    let eval = MarginEvaluator::new(n, d, options.tc)?;
    let stream = |k: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(k);
        rng
    };

    if options.budget == 1 || d == 0 {
        let z = random_start(d, &mut stream(0));
        let a: Vec<f64> = z.iter().map(|&v| a_of(v)).collect();
        let margin = eval.margin(&a)?;
        let candidates = vec![Candidate::new(n, a, margin)];
        let candidates = recheck_all(candidates, &options);
        return Ok(SearchReport { d, n, options, evaluations: 1, candidates });
    }

    let per_run = (options.budget / 40).clamp(1, 2000).max(4 * (d + 1)).min(options.budget);
    let runs = (options.budget / per_run).max(1);
    let first = (runs / 2).max(1);
    let phase1: Vec<Run> = (0..first)
        .into_par_iter()
        .map(|k| descend(&eval, &random_start(d, &mut stream(k as u64 + 1)), per_run, 1.0))
        .collect();
    let mut evaluations: usize = phase1.iter().map(|r| r.evaluations).sum();
    let mut pool = phase1;
    pool.sort_by(|a, b| b.margin.total_cmp(&a.margin));

    let second = runs - first;
    if second > 0 {
        let leaders: Vec<Vec<f64>> = pool.iter().take(4).map(|r| r.z.clone()).collect();
        let phase2: Vec<Run> = (0..second)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(1_000_000 + k as u64);
                let base = &leaders[k % leaders.len()];
                let z0: Vec<f64> = base.iter().map(|v| v + rng.gen_range(-1.5..1.5)).collect();
                descend(&eval, &z0, per_run, 0.5)
            })
            .collect();
        evaluations += phase2.iter().map(|r| r.evaluations).sum::<usize>();
        pool.extend(phase2);
    }
    pool.sort_by(|a, b| b.margin.total_cmp(&a.margin));

    let mut candidates: Vec<Candidate> = Vec::new();
    for r in pool {
        let a: Vec<f64> = r.z.iter().map(|&v| a_of(v)).collect();
        let duplicate = candidates.iter().any(|c| {
            c.tail_f64.iter().zip(&a).all(|(x, y)| (x - y).abs() <= 1e-6 * (1.0 + x.abs().max(y.abs())))
        });
        if !duplicate {
            candidates.push(Candidate::new(n, a, r.margin));
        }
        if candidates.len() >= options.keep {
            break;
        }
    }
    let candidates = recheck_all(candidates, &options);
    Ok(SearchReport { d, n, options, evaluations, candidates })
}

fn recheck_all(mut candidates: Vec<Candidate>, options: &SearchOptions) -> Vec<Candidate> {
    let k = options.recheck.min(candidates.len());
    let checked: Vec<Candidate> = candidates[..k]
        .par_iter()
        .map(|c| {
            if c.margin > 0.0 {
                rationalize_and_recheck(c, options.max_den, options.tc)
            } else {
                let mut c = c.clone();
                c.note = "not rechecked: margin is not positive".into();
                c
            }
        })
        .collect();
    candidates.splice(..k, checked);
    candidates
}

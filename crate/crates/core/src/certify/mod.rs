//! Certification of the sign conditions
//!
//! ```text
//! B^2 - 4AC > 0,  I(1) > 0,  I'(1) = 0,  I''(1) < 0,  J(1) < 0
//! ```
//!
//! where `a_0` is the largest root of `p_n(a_0) = I'(1) = A a_0^2 + B a_0 + C`.
//! At `T_c = 0` everything lives in `Q(sqrt(B^2 - 4AC))` and signs are
//! decided exactly. For `T_c < 0` moments are enclosed and the conditions are
//! certified over whole `T_c` intervals, splitting where undecided.

mod assemble;
mod certificate;

pub use assemble::{
    check_degree, i_derivative, j_value, largest_root, largest_root_interval, quadratic_in_a0,
    quantity_at_one, MomentForm, Quantity, QuadraticInA0, Weights,
};
pub use certificate::{Certificate, Entry, Mode, Value, Verdict, Verdicts};

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{bits_for_precision, enclose_sqrt, QuadExt, RatInterval, Rational, Sign};
use crate::moments::{moment_slopes, moment_zero_family, Kappa, MomentCache};
use crate::poly::CoeffVector;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Certificate for one dimension at a single `T_c <= 0`. Runs in exact mode
/// at `T_c = 0`; otherwise in interval mode on the point `[T_c, T_c]` with
/// [`DEFAULT_PRECISION_BITS`].
pub fn certify_dimension(n: i64, tail: &CoeffVector, tc: &Rational) -> Result<Certificate> {
    if tc.is_positive() {
        return Err(Error::UnsupportedDomain(format!("T_c must be <= 0, got {tc}")));
    }
    if tc.is_zero() {
        return certify_exact(n, tail);
    }
    let precision = Rational::new(One::one(), num_bigint::BigInt::one() << DEFAULT_PRECISION_BITS);
    certify_interval(n, tail, &RatInterval::point(tc.clone()), &precision)
}

/// Exact-mode certificate at `T_c = 0`.
pub fn certify_exact(n: i64, tail: &CoeffVector) -> Result<Certificate> {
    let start = Instant::now();
    check_degree(n, tail.degree())?;
    let moments = moment_zero_family(n, 2 * tail.degree() as i64 + 1)?;
    let mut cert = certify_with_moments(n, tail, &moments)?;
    cert.kappa = Some(Kappa::for_dimension(n));
    cert.elapsed_ms = elapsed_ms(start);
    Ok(cert)
}

/// Exact pipeline for given rational moments `c_0 .. c_{2d}` (any common
/// positive factor may be divided out beforehand).
pub fn certify_with_moments(n: i64, tail: &CoeffVector, moments: &[Rational]) -> Result<Certificate> {
    let quad = quadratic_in_a0(n, tail, moments)?;
    let disc = quad.discriminant();
    let disc_sign = Sign::of_rational(&disc);
    let mut cert = Certificate {
        n,
        tail: tail.clone(),
        tc: RatInterval::point(Rational::zero()),
        mode: Mode::Exact,
        kappa: None,
        discriminant: Entry::new(Value::Rational(disc), Some(disc_sign)),
        a0: None,
        i1: Entry::default(),
        iprime1: Entry::default(),
        idoubleprime1: Entry::default(),
        j1: Entry::default(),
        verdicts: Verdicts::all(Verdict::NotEvaluated),
        overall: Verdict::Fail,
        leaves: 1,
        elapsed_ms: 0,
    };
    cert.verdicts.discriminant = Verdict::from_sign(Some(disc_sign), Sign::Positive);
    if disc_sign != Sign::Positive {
        cert.overall = cert.verdicts.overall();
        return Ok(cert);
    }
    let root = largest_root(&quad)?;
    let coeffs = tail.embed_with_a0(root.clone());
    let mq: Vec<QuadExt> = moments.iter().cloned().map(QuadExt::rational).collect();
    let eval = |which| -> Result<Entry> {
        let v = quantity_at_one(n, which, &coeffs, &mq)?;
        let s = v.sign();
        Ok(Entry::new(Value::Quad(v), Some(s)))
    };
    cert.i1 = eval(Quantity::I)?;
    cert.iprime1 = eval(Quantity::IPrime)?;
    cert.idoubleprime1 = eval(Quantity::IDoublePrime)?;
    cert.j1 = eval(Quantity::J)?;
    cert.a0 = Some(Value::Quad(root));
    cert.verdicts.i1 = Verdict::from_sign(cert.i1.sign, Sign::Positive);
    cert.verdicts.iprime1 = Verdict::from_sign(cert.iprime1.sign, Sign::Zero);
    cert.verdicts.idoubleprime1 = Verdict::from_sign(cert.idoubleprime1.sign, Sign::Negative);
    cert.verdicts.j1 = Verdict::from_sign(cert.j1.sign, Sign::Negative);
    cert.overall = cert.verdicts.overall();
    Ok(cert)
}

/// Exact certificates for every `n` in `n_min ..= n_max`, computed in
/// parallel, in increasing `n`.
pub fn certify_range(n_min: i64, n_max: i64, tail: &CoeffVector) -> Vec<Result<Certificate>> {
    (n_min..=n_max).into_par_iter().map(|n| certify_exact(n, tail)).collect()
}

/// Default precision of moment enclosures, as `2^-bits`.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Splitting budget for interval certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitOptions {
    /// Maximum bisection depth of the `T_c` interval.
    pub max_depth: u32,
    /// Maximum number of sub-intervals evaluated.
    pub max_leaves: usize,
}

impl Default for SplitOptions {
    fn default() -> Self {
        Self { max_depth: 20, max_leaves: 4096 }
    }
}

struct Leaf {
    verdicts: Verdicts,
    disc: RatInterval,
    a0: Option<RatInterval>,
    values: Option<[RatInterval; 4]>,
}

struct Forms {
    i: MomentForm,
    iprime: MomentForm,
    idoubleprime: MomentForm,
    j: MomentForm,
}

impl Forms {
    fn new(n: i64, tail: &CoeffVector) -> Result<Self> {
        Ok(Self {
            i: MomentForm::new(n, tail, Quantity::I)?,
            iprime: MomentForm::new(n, tail, Quantity::IPrime)?,
            idoubleprime: MomentForm::new(n, tail, Quantity::IDoublePrime)?,
            j: MomentForm::new(n, tail, Quantity::J)?,
        })
    }
}

fn rounded(q: QuadraticInA0<RatInterval>, work: u32) -> QuadraticInA0<RatInterval> {
    QuadraticInA0 { a: q.a.round_out(work), b: q.b.round_out(work), c: q.c.round_out(work) }
}

/// Naive enclosures from the moment ranges over the whole sub-interval.
fn evaluate_naive(forms: &Forms, moments: &[RatInterval], grid: u32) -> Result<Leaf> {
    let work = grid + 16;
    let quad = rounded(forms.iprime.collapse(moments)?, work);
    let disc = quad.discriminant_interval().round_out(work);
    let mut verdicts = Verdicts::all(Verdict::NotEvaluated);
    verdicts.discriminant = Verdict::from_sign(disc.sign(), Sign::Positive);
    if verdicts.discriminant != Verdict::Pass || quad.a.sign() != Some(Sign::Positive) {
        if verdicts.discriminant == Verdict::Pass {
            verdicts.discriminant = Verdict::Indeterminate;
        }
        return Ok(Leaf { verdicts, disc, a0: None, values: None });
    }
    let root_precision = Rational::new(One::one(), num_bigint::BigInt::one() << grid);
    let a0 = largest_root_interval(&quad, &root_precision)?.round_out(work);
    let at = |form: &MomentForm| -> Result<RatInterval> {
        Ok(rounded(form.collapse(moments)?, work).eval_interval(&a0).round_out(work))
    };
    let values = [at(&forms.i)?, at(&forms.iprime)?, at(&forms.idoubleprime)?, at(&forms.j)?];
    verdicts.i1 = Verdict::from_sign(values[0].sign(), Sign::Positive);
    verdicts.iprime1 = Verdict::Structural;
    verdicts.idoubleprime1 = Verdict::from_sign(values[2].sign(), Sign::Negative);
    verdicts.j1 = Verdict::from_sign(values[3].sign(), Sign::Negative);
    Ok(Leaf { verdicts, disc, a0: Some(a0), values: Some(values) })
}

/// Mean-value refinement of a naive leaf on a proper sub-interval: each
/// quantity `F` is enclosed by `F(mid) + [-w/2, w/2] F'(sub)`, where
/// `F'` follows from the explicit moment derivatives and, for `a_0`, from
/// differentiating `I'(1) = 0`. Intersected with the naive enclosure.
#[allow(clippy::too_many_arguments)]
fn refine_centered(
    n: i64,
    d: usize,
    forms: &Forms,
    tc: &RatInterval,
    naive: Leaf,
    moments: &[RatInterval],
    grid: u32,
    cache: &MomentCache,
) -> Result<Leaf> {
    let work = grid + 16;
    let count = 2 * d as i64 + 1;
    let mid = RatInterval::point(tc.midpoint());
    let at_mid = evaluate_naive(forms, &cache.family(n, count, &mid, grid)?, grid)?;
    let (Some(a0_mid), Some(mid_values)) = (at_mid.a0, at_mid.values) else {
        return Ok(naive);
    };
    let slopes = moment_slopes(n, count, tc, work)?;
    let half = tc.width() / rat(2, 1);
    let h = RatInterval::from_sorted(-half.clone(), half);
    let two = rat(2, 1);

    let quad = rounded(forms.iprime.collapse(moments)?, work);
    let dquad = rounded(forms.iprime.collapse(&slopes)?, work);
    let ddisc = (quad.b.clone() * dquad.b.clone()).scale(&two)
        - (dquad.a.clone() * quad.c.clone() + quad.a.clone() * dquad.c.clone()).scale(&rat(4, 1));
    let disc = (at_mid.disc + h.clone() * ddisc.round_out(work)).round_out(work);
    let disc = disc.intersect(&naive.disc).unwrap_or(naive.disc.clone());
    let mut verdicts = Verdicts::all(Verdict::NotEvaluated);
    verdicts.discriminant = Verdict::from_sign(disc.sign(), Sign::Positive);
    if verdicts.discriminant != Verdict::Pass || quad.a.sign() != Some(Sign::Positive) {
        if verdicts.discriminant == Verdict::Pass {
            verdicts.discriminant = Verdict::Indeterminate;
        }
        return Ok(Leaf { verdicts, disc, a0: None, values: None });
    }

    // 2 A a_0 + B = sqrt(disc) at the largest root
    let precision = Rational::new(One::one(), num_bigint::BigInt::one() << work);
    let root = enclose_sqrt(&disc, &precision)?;
    let mut a0 = (root.clone() - quad.b.clone()).div(&quad.a.scale(&two))?.round_out(work);
    if let Some(x) = naive.a0.as_ref().and_then(|x| x.intersect(&a0)) {
        a0 = x;
    }
    let mut da0 = RatInterval::point(Rational::zero());
    for _ in 0..2 {
        da0 = (-dquad.eval_interval(&a0)).div(&root)?.round_out(work);
        let centered = (a0_mid.clone() + h.clone() * da0.clone()).round_out(work);
        if let Some(x) = centered.intersect(&a0) {
            a0 = x;
        }
    }
    let derivative = |form: &MomentForm| -> Result<RatInterval> {
        let q = rounded(form.collapse(moments)?, work);
        let dq = rounded(form.collapse(&slopes)?, work);
        let slope = q.a.scale(&two) * a0.clone() + q.b.clone();
        Ok((dq.eval_interval(&a0) + slope * da0.clone()).round_out(work))
    };
    let mut values = [
        RatInterval::point(Rational::zero()),
        quad.eval_interval(&a0).round_out(work),
        RatInterval::point(Rational::zero()),
        RatInterval::point(Rational::zero()),
    ];
    for (k, form) in [(0usize, &forms.i), (2, &forms.idoubleprime), (3, &forms.j)] {
        let centered = (mid_values[k].clone() + h.clone() * derivative(form)?).round_out(work);
        values[k] = match &naive.values {
            Some(v) => centered.intersect(&v[k]).unwrap_or(centered),
            None => centered,
        };
    }
    verdicts.i1 = Verdict::from_sign(values[0].sign(), Sign::Positive);
    verdicts.iprime1 = Verdict::Structural;
    verdicts.idoubleprime1 = Verdict::from_sign(values[2].sign(), Sign::Negative);
    verdicts.j1 = Verdict::from_sign(values[3].sign(), Sign::Negative);
    Ok(Leaf { verdicts, disc, a0: Some(a0), values: Some(values) })
}

fn evaluate_leaf(n: i64, d: usize, forms: &Forms, tc: &RatInterval, grid: u32, cache: &MomentCache) -> Result<Leaf> {
    let moments = cache.family(n, 2 * d as i64 + 1, tc, grid)?;
    let naive = evaluate_naive(forms, &moments, grid)?;
    if tc.is_point() || naive.verdicts.overall() != Verdict::Indeterminate {
        return Ok(naive);
    }
    refine_centered(n, d, forms, tc, naive, &moments, grid, cache)
}

fn merge(v: &mut Verdict, w: Verdict) {
    *v = if *v == Verdict::Structural && w == Verdict::Structural { Verdict::Structural } else { v.and(w) };
}

fn hull(acc: &mut Option<RatInterval>, x: &RatInterval) {
    *acc = Some(match acc.take() {
        Some(a) => a.hull(x),
        None => x.clone(),
    });
}

/// Interval-mode certificate over `tc` with moments enclosed to `precision`.
pub fn certify_interval(n: i64, tail: &CoeffVector, tc: &RatInterval, precision: &Rational) -> Result<Certificate> {
    certify_interval_with(n, tail, tc, precision, SplitOptions::default(), &MomentCache::new())
}

/// [`certify_interval`] with an explicit split budget and a shared moment
/// cache.
///
/// The strict conditions must hold on the whole `a_0` enclosure for every
/// `t` in the sub-interval; `I'(1) = 0` holds by the choice of `a_0` for
/// each `t` and is reported as structural. Undecided sub-intervals are
/// bisected (left first) until decided or the budget runs out; a certified
/// failure on any sub-interval stops the search.
pub fn certify_interval_with(
    n: i64,
    tail: &CoeffVector,
    tc: &RatInterval,
    precision: &Rational,
    split: SplitOptions,
    cache: &MomentCache,
) -> Result<Certificate> {
    let start = Instant::now();
    if tc.hi().is_positive() {
        return Err(Error::UnsupportedDomain(format!("T_c must be <= 0, got interval {tc}")));
    }
    let d = tail.degree();
    check_degree(n, d)?;
    let grid = bits_for_precision(precision)? + 1;
    let forms = Forms::new(n, tail)?;

    let mut stack = vec![(tc.clone(), 0u32)];
    let mut verdicts: Option<Verdicts> = None;
    let mut disc: Option<RatInterval> = None;
    let mut a0: Option<RatInterval> = None;
    let mut values: [Option<RatInterval>; 4] = Default::default();
    let mut leaves = 0usize;
    while let Some((sub, depth)) = stack.pop() {
        let leaf = evaluate_leaf(n, d, &forms, &sub, grid, cache)?;
        leaves += 1;
        let overall = leaf.verdicts.overall();
        let can_split = overall == Verdict::Indeterminate
            && depth < split.max_depth
            && !sub.is_point()
            && leaves + stack.len() + 2 <= split.max_leaves;
        if can_split {
            let mid = sub.midpoint();
            stack.push((RatInterval::new(mid.clone(), sub.hi().clone())?, depth + 1));
            stack.push((RatInterval::new(sub.lo().clone(), mid)?, depth + 1));
            continue;
        }
        match verdicts.as_mut() {
            None => verdicts = Some(leaf.verdicts),
            Some(v) => {
                merge(&mut v.discriminant, leaf.verdicts.discriminant);
                merge(&mut v.i1, leaf.verdicts.i1);
                merge(&mut v.iprime1, leaf.verdicts.iprime1);
                merge(&mut v.idoubleprime1, leaf.verdicts.idoubleprime1);
                merge(&mut v.j1, leaf.verdicts.j1);
            }
        }
        hull(&mut disc, &leaf.disc);
        if let Some(x) = &leaf.a0 {
            hull(&mut a0, x);
        }
        if let Some(vals) = &leaf.values {
            for (acc, x) in values.iter_mut().zip(vals) {
                hull(acc, x);
            }
        }
        if overall == Verdict::Fail {
            break;
        }
    }

    let verdicts = verdicts.expect("at least one leaf is evaluated");
    let entry = |v: &Option<RatInterval>| match v {
        Some(iv) => Entry::new(Value::Interval(iv.clone()), iv.sign()),
        None => Entry::default(),
    };
    let [i1, iprime1, idoubleprime1, j1] = values;
    Ok(Certificate {
        n,
        tail: tail.clone(),
        tc: tc.clone(),
        mode: Mode::Interval,
        kappa: None,
        discriminant: entry(&disc),
        a0: a0.map(Value::Interval),
        i1: entry(&i1),
        iprime1: entry(&iprime1),
        idoubleprime1: entry(&idoubleprime1),
        j1: entry(&j1),
        overall: verdicts.overall(),
        verdicts,
        leaves,
        elapsed_ms: elapsed_ms(start),
    })
}

/// `T_c = -c / (n - 2)`.
pub fn tc_of_c(n: i64, c: &Rational) -> Rational {
    -c / rat(n - 2, 1)
}

/// Result of [`find_cbar`].
#[derive(Debug, Clone)]
pub struct CbarResult {
    pub n: i64,
    /// Certified: the conditions hold for every `T_c` in `[-cbar/(n-2), 0]`.
    pub cbar: Rational,
    /// Smallest `c` tried that could not be certified.
    pub upper: Rational,
    /// Precision of the moment enclosures used by every certificate.
    pub moment_precision: Rational,
    pub certificate: Certificate,
    /// Number of interval certificates computed.
    pub evaluations: usize,
}

/// Extra bits of moment precision beyond the bisection tolerance.
const CBAR_GUARD_BITS: u32 = 96;

/// Largest `c` found by bisection such that the conditions are certified on
/// `T_c in [-c/(n-2), 0]`.
///
/// `precision` is the relative bisection tolerance: the search stops once
/// `upper - cbar <= precision * cbar`. The bracket starts at `c = 1`, doubles
/// while certification passes and halves while it fails.
pub fn find_cbar(n: i64, tail: &CoeffVector, precision: &Rational) -> Result<CbarResult> {
    let base = certify_exact(n, tail)?;
    if !base.passed() {
        return Err(Error::Precondition(format!("the T_c = 0 certificate does not pass for n = {n}")));
    }
    let bits = bits_for_precision(precision)?;
    let moment_precision = Rational::new(One::one(), num_bigint::BigInt::one() << (bits + CBAR_GUARD_BITS));
    let cache = MomentCache::new();
    let mut evaluations = 0usize;
    let mut attempt = |c: &Rational| -> Result<Certificate> {
        evaluations += 1;
        let tc = RatInterval::new(tc_of_c(n, c), Rational::zero())?;
        certify_interval_with(n, tail, &tc, &moment_precision, SplitOptions::default(), &cache)
    };

    let two = rat(2, 1);
    let mut lo;
    let mut hi;
    let mut best;
    let first = attempt(&Rational::one())?;
    if first.passed() {
        lo = Rational::one();
        best = first;
        hi = &lo * &two;
        loop {
            let cert = attempt(&hi)?;
            if !cert.passed() {
                break;
            }
            if hi > rat(1 << 30, 1) {
                return Err(Error::Precondition("certified c-bar exceeds 2^30; no finite bound found".into()));
            }
            lo = hi.clone();
            best = cert;
            hi = &lo * &two;
        }
    } else {
        hi = Rational::one();
        lo = rat(1, 2);
        loop {
            let cert = attempt(&lo)?;
            if cert.passed() {
                best = cert;
                break;
            }
            if lo < rat(1, 1 << 40) {
                return Err(Error::Precondition("no c >= 2^-40 could be certified".into()));
            }
            hi = lo.clone();
            lo = &lo / &two;
        }
    }
    while &hi - &lo > precision * &lo {
        let mid = (&lo + &hi) / &two;
        let cert = attempt(&mid)?;
        if cert.passed() {
            lo = mid;
            best = cert;
        } else {
            hi = mid;
        }
    }
    Ok(CbarResult { n, cbar: lo, upper: hi, moment_precision, certificate: best, evaluations })
}

/// The degree-1 profile `f(s) = -s + a_0` at `T_c = 0`.
pub fn reproduce_chenwu(n: i64) -> Result<Certificate> {
    if n <= 10 {
        return Err(Error::Precondition(format!("the degree-1 profile needs n > 10, got n = {n}")));
    }
    certify_exact(n, &CoeffVector::preset_degree_one())
}

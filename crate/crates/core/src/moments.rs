//! The moment integrals
//!
//! ```text
//! c_q(T) = int_0^inf (1 + (t - T)^2)^((5 + 2q - n) / 2) dt,   T <= 0.
//! ```
//!
//! With `m = n - 5 - 2q` the integrand is `(1 + x^2)^(-m/2)` after the shift
//! `x = t - T`, and the integral converges iff `m > 1`, i.e. `n - 6 - 2q > 0`.
//!
//! At `T = 0` the value is `kappa * r` with `r` rational and `kappa` either 1
//! (odd `m`, even `n`) or `pi` (even `m`, odd `n`). For `T < 0` it equals
//! `G_m(-T)` with `G_k(u) = int_u^inf (1 + x^2)^(-k/2) dx`, obtained from the
//! reduction
//!
//! ```text
//! G_k = (-u (1 + u^2)^(-(k-2)/2) + (k - 3) G_{k-2}) / (k - 2),   k >= 4,
//! G_2 = pi/2 - arctan u,   G_3 = 1 - u / sqrt(1 + u^2).
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::{
    arctan_point, bits_for_precision, ceil_dyadic, floor_dyadic, pi_bounds, sqrt_point, RatInterval, Rational,
};
use crate::quadrature::{geometric_breaks, integrate_with_breaks, QuadOptions};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Common transcendental factor of the moments at `T = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kappa {
    One,
    Pi,
}

impl Kappa {
    pub fn for_dimension(n: i64) -> Self {
        if n.rem_euclid(2) == 1 {
            Kappa::Pi
        } else {
            Kappa::One
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Kappa::One => 1.0,
            Kappa::Pi => std::f64::consts::PI,
        }
    }
}

/// Exact `c_q(0) = kappa * r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentZero {
    pub kappa: Kappa,
    pub r: Rational,
}

impl MomentZero {
    pub fn to_f64(&self) -> f64 {
        self.kappa.to_f64() * crate::exact::rational_to_f64(&self.r)
    }
}

impl fmt::Display for MomentZero {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kappa {
            Kappa::One => write!(f, "{}", self.r),
            Kappa::Pi => write!(f, "{}*pi", self.r),
        }
    }
}

/// Certified enclosure of `{c_q(t) : t in tc}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentEnclosure {
    pub n: i64,
    pub q: i64,
    pub tc: RatInterval,
    pub value: RatInterval,
}

fn exponent(n: i64, q: i64) -> Result<i64> {
    if q < 0 || n - 6 - 2 * q <= 0 {
        return Err(Error::DivergentMoment { n, q });
    }
    Ok(n - 5 - 2 * q)
}

/// Number of convergent moments for dimension `n`.
pub fn admissible_count(n: i64) -> i64 {
    if n < 7 {
        0
    } else {
        (n - 7) / 2 + 1
    }
}

fn double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = k;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

/// Exact `c_q(0)`: the closed form at `q = 0`, then the recurrence
/// `c_{q+1}(0) = c_q(0) (n - 7 - 2q) / (n - 8 - 2q)`.
pub fn moment_zero(n: i64, q: i64) -> Result<MomentZero> {
    exponent(n, q)?;
    let m = n - 5;
    let mut r = Rational::new(double_factorial(m - 3), double_factorial(m - 2));
    if m % 2 == 0 {
        r /= rat(2, 1);
    }
    for j in 0..q {
        r *= rat(n - 7 - 2 * j, n - 8 - 2 * j);
    }
    Ok(MomentZero { kappa: Kappa::for_dimension(n), r })
}

/// Rational parts `r_0 .. r_{count-1}` of `c_q(0)`.
pub fn moment_zero_family(n: i64, count: i64) -> Result<Vec<Rational>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    exponent(n, count - 1)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut r = moment_zero(n, 0)?.r;
    for q in 0..count {
        if q > 0 {
            r *= rat(n - 7 - 2 * (q - 1), n - 8 - 2 * (q - 1));
        }
        out.push(r.clone());
    }
    Ok(out)
}

/// Enclosures of `G_{n-5-2q}(u)` for every admissible `q`, evaluated with
/// outward rounding at `w` bits.
fn family_at(n: i64, u: &Rational, w: u32) -> Vec<RatInterval> {
    let top = n - 5;
    let s2 = Rational::one() + u * u;
    let inv_s2 = s2.recip();
    let base = top.rem_euclid(2) + 2;
    let (mut g, mut power) = if base == 2 {
        let half_pi = pi_bounds(w).scale(&rat(1, 2));
        (half_pi - arctan_point(u, w), RatInterval::point(Rational::one()))
    } else {
        // (1 + u^2)^(-1/2), from the exact enclosure of sqrt(1 + u^2)
        let inv_sqrt = sqrt_point(&s2, w).recip().expect("sqrt(1 + u^2) >= 1").round_out(w);
        (RatInterval::point(Rational::one()) - inv_sqrt.scale(u), inv_sqrt)
    };
    g = g.round_out(w);
    let mut by_k = vec![(base, g.clone())];
    let mut k = base + 2;
    while k <= top {
        power = power.scale(&inv_s2).round_out(w);
        let boundary = power.scale(&-u.clone());
        g = (boundary + g.scale(&rat(k - 3, 1))).scale(&rat(1, k - 2)).round_out(w);
        by_k.push((k, g.clone()));
        k += 2;
    }
    // index by q: m = top - 2q
    by_k.into_iter().rev().filter(|(k, _)| *k >= 2).map(|(_, g)| g).collect()
}

/// Exact floor/ceil on the grid `2^-grid` of every `c_q(t)` at the point
/// `t`, for `q = 0 .. count-1`.
fn snapped_family(n: i64, t: &Rational, count: usize, grid: u32) -> Vec<(Rational, Rational)> {
    let u = -t.clone();
    let mut extra = 24;
    loop {
        let fam = family_at(n, &u, grid + extra);
        let mut out = Vec::with_capacity(count);
        let mut resolved = true;
        for iv in fam.iter().take(count) {
            let (f_lo, f_hi) = (floor_dyadic(iv.lo(), grid), floor_dyadic(iv.hi(), grid));
            let (c_lo, c_hi) = (ceil_dyadic(iv.lo(), grid), ceil_dyadic(iv.hi(), grid));
            resolved &= iv.is_point() || (f_lo == f_hi && c_lo == c_hi);
            out.push((f_lo, c_hi));
        }
        if resolved || extra >= 1 << 12 {
            return out;
        }
        extra *= 2;
    }
}

fn check_tc(tc: &RatInterval) -> Result<()> {
    if tc.hi().is_positive() {
        return Err(Error::UnsupportedDomain(format!("T_c must be <= 0, got interval {tc}")));
    }
    Ok(())
}

/// Memo of snapped point families keyed by `(n, t, grid)`. Shared by the
/// interval certifier across its Tc splits.
#[derive(Default)]
pub struct MomentCache {
    points: Mutex<HashMap<(i64, Rational, u32), Arc<Vec<(Rational, Rational)>>>>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn point(&self, n: i64, t: &Rational, grid: u32) -> Arc<Vec<(Rational, Rational)>> {
        let key = (n, t.clone(), grid);
        if let Some(v) = self.points.lock().expect("moment cache poisoned").get(&key) {
            return v.clone();
        }
        let fam = Arc::new(snapped_family(n, t, admissible_count(n) as usize, grid));
        self.points.lock().expect("moment cache poisoned").insert(key, fam.clone());
        fam
    }

    pub fn len(&self) -> usize {
        self.points.lock().expect("moment cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Enclosures of `c_0 .. c_{count-1}` over `tc`, on the grid `2^-grid`.
    ///
    /// Each `c_q` increases with `T` on `T <= 0`, so the enclosure over an
    /// interval is `[c_q(tc.lo) rounded down, c_q(tc.hi) rounded up]`.
    pub fn family(&self, n: i64, count: i64, tc: &RatInterval, grid: u32) -> Result<Vec<RatInterval>> {
        check_tc(tc)?;
        if count > 0 {
            exponent(n, count - 1)?;
        }
        let lo = self.point(n, tc.lo(), grid);
        let hi = self.point(n, tc.hi(), grid);
        Ok((0..count as usize).map(|q| RatInterval::from_sorted(lo[q].0.clone(), hi[q].1.clone())).collect())
    }
}

/// Enclosures over `tc` of the derivatives `d c_q / d T_c = (1 + T_c^2)^{-(n-5-2q)/2}`
/// for `q = 0 .. count-1`, with outward rounding at `w` bits. Each derivative
/// increases with `T_c <= 0`, so the endpoints bound it.
pub fn moment_slopes(n: i64, count: i64, tc: &RatInterval, w: u32) -> Result<Vec<RatInterval>> {
    check_tc(tc)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    exponent(n, count - 1)?;
    let at = |t: &Rational| -> Vec<RatInterval> {
        let s2 = Rational::one() + t * t;
        let inv = RatInterval::point(s2.recip());
        let inv_sqrt = sqrt_point(&s2, w).recip().expect("sqrt(1 + t^2) >= 1").round_out(w);
        (0..count)
            .map(|q| {
                let m = n - 5 - 2 * q;
                let even = inv.powi((m / 2) as u32).round_out(w);
                if m % 2 == 0 {
                    even
                } else {
                    (even * inv_sqrt.clone()).round_out(w)
                }
            })
            .collect()
    };
    let (lo, hi) = (at(tc.lo()), at(tc.hi()));
    Ok(lo.into_iter().zip(hi).map(|(a, b)| RatInterval::from_sorted(a.lo().clone(), b.hi().clone())).collect())
}

/// Certified enclosure of `c_q` over `tc`, with endpoints snapped to the
/// dyadic grid of `precision`. At a point `tc` the width is at most
/// `precision`; refining `tc` or `precision` gives nested enclosures.
pub fn moment_general(n: i64, q: i64, tc: &RatInterval, precision: &Rational) -> Result<MomentEnclosure> {
    exponent(n, q)?;
    check_tc(tc)?;
    let grid = bits_for_precision(precision)? + 1;
    let lo = snapped_family(n, tc.lo(), q as usize + 1, grid);
    let hi = snapped_family(n, tc.hi(), q as usize + 1, grid);
    let value = RatInterval::from_sorted(lo[q as usize].0.clone(), hi[q as usize].1.clone());
    Ok(MomentEnclosure { n, q, tc: tc.clone(), value })
}

/// Floating values of `c_0 .. c_{count-1}` at `tc <= 0`, by the same
/// reduction as the certified path. Cancellation in the recurrence costs
/// about `m log2(1 + tc^2) / 2` bits, so this is meant for moderate `|tc|`.
pub fn moment_family_f64(n: i64, count: i64, tc: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    exponent(n, count - 1)?;
    if tc > 0.0 || !tc.is_finite() {
        return Err(Error::UnsupportedDomain(format!("T_c must be a finite value <= 0, got {tc}")));
    }
    if tc == 0.0 {
        return Ok(moment_zero_family(n, count)?
            .iter()
            .map(|r| Kappa::for_dimension(n).to_f64() * crate::exact::rational_to_f64(r))
            .collect());
    }
    let u = -tc;
    let s2 = 1.0 + u * u;
    let top = n - 5;
    let mut by_k = Vec::new();
    let (mut k, mut g, mut power) = if top % 2 == 0 {
        (2, std::f64::consts::FRAC_PI_2 - u.atan(), 1.0)
    } else {
        (3, 1.0 - u / s2.sqrt(), 1.0 / s2.sqrt())
    };
    by_k.push(g);
    while k + 2 <= top {
        k += 2;
        power /= s2;
        g = (-u * power + (k - 3) as f64 * g) / (k - 2) as f64;
        by_k.push(g);
    }
    by_k.reverse();
    Ok(by_k.into_iter().take(count as usize).collect())
}

/// Floating quadrature of `c_q(tc)` with relative error target `tol`.
///
/// The range is truncated at `L` where the tail bound
/// `int_L^inf (t - T)^-m dt = (L - T)^(1-m) / (m - 1)` falls below a tenth of
/// the tolerance relative to a lower bound of the integral.
pub fn moment_quadrature(n: i64, q: i64, tc: f64, tol: f64) -> Result<f64> {
    let m = exponent(n, q)? as f64;
    if tc > 0.0 || !tc.is_finite() {
        return Err(Error::UnsupportedDomain(format!("T_c must be a finite value <= 0, got {tc}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let f = move |t: f64| {
        let x = t - tc;
        (1.0 + x * x).powf(-0.5 * m)
    };
    // the integrand is decreasing in t, so f(1) bounds int_0^1 from below
    let lower = f(1.0);
    let tail_target = 0.1 * tol * lower;
    let len = ((m - 1.0) * tail_target).powf(-1.0 / (m - 1.0)) + tc;
    let len = len.max(1.0);
    let breaks = geometric_breaks(0.0, len, 1.0 + tc.abs().min(1.0));
    let r = integrate_with_breaks(f, &breaks, QuadOptions { rel_tol: 0.1 * tol, max_segments: 20_000, ..Default::default() });
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn iv(lo: Rational, hi: Rational) -> RatInterval {
        RatInterval::new(lo, hi).unwrap()
    }

    /// Wallis-type oracle: int_0^inf (1+t^2)^(-m/2) dt computed by the
    /// standalone recursion I_m = (m-3)/(m-2) I_{m-2}, I_2 = pi/2, I_3 = 1.
    fn wallis(m: i64) -> MomentZero {
        let (mut r, mut k, kappa) = if m % 2 == 0 { (rat(1, 2), 2, Kappa::Pi) } else { (rat(1, 1), 3, Kappa::One) };
        while k < m {
            k += 2;
            r *= rat(k - 3, k - 2);
        }
        MomentZero { kappa, r }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(moment_zero(35, 12).unwrap(), MomentZero { kappa: Kappa::Pi, r: rat(3, 16) });
        assert_eq!(moment_zero(36, 12).unwrap(), MomentZero { kappa: Kappa::One, r: rat(8, 15) });
        assert_eq!(moment_zero(7, 0).unwrap(), MomentZero { kappa: Kappa::Pi, r: rat(1, 2) });
    }

    #[test]
    fn divergent_rejected() {
        assert_eq!(moment_zero(35, 15), Err(Error::DivergentMoment { n: 35, q: 15 }));
        assert!(moment_zero(35, 14).is_ok());
        assert!(moment_zero(36, 15).is_err());
        assert!(moment_zero(36, 14).is_ok());
        assert!(moment_zero(35, -1).is_err());
    }

    #[test]
    fn matches_wallis_oracle() {
        for n in 7..=80 {
            for q in 0..admissible_count(n) {
                assert_eq!(moment_zero(n, q).unwrap(), wallis(n - 5 - 2 * q), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn recurrence_holds() {
        for n in [35, 36, 48, 62, 63] {
            let fam = moment_zero_family(n, admissible_count(n)).unwrap();
            for q in 0..fam.len() - 1 {
                let qi = q as i64;
                assert_eq!(&fam[q + 1] * rat(n - 8 - 2 * qi, 1), &fam[q] * rat(n - 7 - 2 * qi, 1));
            }
        }
    }

    #[test]
    fn general_at_zero_contains_closed_form() {
        let p = rat(1, 1 << 30);
        for (n, q) in [(35, 0), (35, 12), (36, 12), (36, 0), (7, 0), (62, 5)] {
            let enc = moment_general(n, q, &RatInterval::point(Rational::zero()), &p).unwrap();
            let mz = moment_zero(n, q).unwrap();
            let (lo, hi) = enc.value.to_f64_pair();
            let v = mz.to_f64();
            assert!(lo <= v && v <= hi, "n={n} q={q}: {v} not in [{lo}, {hi}]");
            assert!(enc.value.width() <= p);
            if mz.kappa == Kappa::One {
                assert!(enc.value.contains(&mz.r));
            }
        }
    }

    #[test]
    fn general_quarter_pi() {
        let enc = moment_general(7, 0, &RatInterval::point(rat(-1, 1)), &rat(1, 1 << 40)).unwrap();
        let pi4 = pi_bounds(80).scale(&rat(1, 4));
        assert!(enc.value.contains_interval(&pi4));
    }

    #[test]
    fn general_odd_base() {
        // n = 8, q = 0: m = 3, G_3(u) = 1 - u / sqrt(1 + u^2); u = 3/4 gives 2/5
        let enc = moment_general(8, 0, &RatInterval::point(rat(-3, 4)), &rat(1, 1 << 30)).unwrap();
        assert!(enc.value.contains(&rat(2, 5)));
    }

    #[test]
    fn monotone_in_tc() {
        let p = rat(1, 1 << 40);
        let near = moment_general(35, 0, &iv(rat(-1, 10), Rational::zero()), &p).unwrap();
        let zero = moment_general(35, 0, &RatInterval::point(Rational::zero()), &p).unwrap();
        assert!(near.value.hi() <= zero.value.hi());
        let left = moment_general(35, 3, &iv(rat(-1, 2), rat(-2, 5)), &p).unwrap();
        let right = moment_general(35, 3, &iv(rat(-1, 5), rat(-1, 10)), &p).unwrap();
        assert!(left.value.hi() < right.value.lo());
    }

    #[test]
    fn positive_tc_rejected() {
        let r = moment_general(35, 0, &iv(rat(-1, 2), rat(1, 2)), &rat(1, 100));
        assert!(matches!(r, Err(Error::UnsupportedDomain(_))));
        assert!(moment_quadrature(35, 0, 0.5, 1e-8).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (n, q) in [(35, 12), (36, 12), (35, 0), (62, 7), (36, 14)] {
            let exact = moment_zero(n, q).unwrap().to_f64();
            let approx = moment_quadrature(n, q, 0.0, 1e-10).unwrap();
            assert!(((approx - exact) / exact).abs() < 1e-9, "n={n} q={q}: {approx} vs {exact}");
        }
    }

    #[test]
    fn quadrature_matches_general() {
        let tol = 1e-10;
        for (n, q) in [(35, 0), (35, 12), (36, 5), (62, 10)] {
            let enc = moment_general(n, q, &RatInterval::point(rat(-1, 2)), &rat(1, 1 << 60)).unwrap();
            let mid = crate::exact::rational_to_f64(&enc.value.midpoint());
            let approx = moment_quadrature(n, q, -0.5, tol).unwrap();
            assert!(((approx - mid) / mid).abs() < 10.0 * tol, "n={n} q={q}: {approx} vs {mid}");
        }
    }

    #[test]
    fn floating_family_matches_enclosure() {
        for tc in [0.0, -0.25, -1.0] {
            let fam = moment_family_f64(35, 13, tc).unwrap();
            let t = crate::exact::rational_from_f64(tc).unwrap();
            for (q, v) in fam.iter().enumerate() {
                let enc = moment_general(35, q as i64, &RatInterval::point(t.clone()), &rat(1, 1 << 60)).unwrap();
                let mid = crate::exact::rational_to_f64(&enc.value.midpoint());
                // the upward recurrence cancels a few digits for T_c < 0
                assert!(((v - mid) / mid).abs() < 1e-10, "tc={tc} q={q}: {v} vs {mid}");
            }
        }
    }

    #[test]
    fn slopes_match_difference_quotients() {
        // c_q(t + h) - c_q(t) lies in h * slope enclosure over [t, t + h]
        let (t, h) = (rat(-3, 10), rat(1, 1000));
        let tc = iv(t.clone(), &t + &h);
        let slopes = moment_slopes(35, 13, &tc, 80).unwrap();
        let grid = 100;
        let cache = MomentCache::new();
        let lo = cache.family(35, 13, &RatInterval::point(t.clone()), grid).unwrap();
        let hi = cache.family(35, 13, &RatInterval::point(&t + &h), grid).unwrap();
        for q in 0..13 {
            let diff = hi[q].clone() - lo[q].clone();
            let bound = slopes[q].scale(&h);
            assert!(bound.lo() <= diff.hi() && diff.lo() <= bound.hi(), "q={q}: {diff} vs {bound}");
            assert!(slopes[q].lo().is_positive());
        }
        // at T_c = 0 the slope is exactly 1
        let s0 = moment_slopes(36, 3, &RatInterval::point(rat(0, 1)), 64).unwrap();
        assert!(s0.iter().all(|s| s.contains(&rat(1, 1))));
        assert!(moment_slopes(35, 16, &tc, 64).is_err());
    }

    #[test]
    fn cache_matches_direct() {
        let cache = MomentCache::new();
        let tc = iv(rat(-1, 8), rat(-1, 16));
        let grid = 60;
        let fam = cache.family(35, 13, &tc, grid).unwrap();
        for (q, enc) in fam.iter().enumerate() {
            let direct = moment_general(35, q as i64, &tc, &rat(1, 1 << 59)).unwrap();
            assert_eq!(enc, &direct.value);
        }
        assert_eq!(cache.len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn enclosures_nest(a in 0i64..200, b in 0i64..200, q in 0i64..13) {
            let (lo, hi) = (a.min(b), a.max(b));
            let outer = iv(rat(-hi - 10, 100), rat(-lo, 100));
            let inner = iv(rat(-hi - 5, 100), rat(-lo - 1, 100).max(rat(-hi - 5, 100)));
            let coarse = moment_general(35, q, &outer, &rat(1, 1 << 20)).unwrap();
            let fine = moment_general(35, q, &inner, &rat(1, 1 << 40)).unwrap();
            prop_assert!(coarse.value.contains_interval(&fine.value));
            prop_assert!(fine.value.lo().is_positive());
        }
    }
}

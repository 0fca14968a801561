//! Certified enclosures of pi, arctan and square roots.
//!
//! Every public enclosure snaps outward to the dyadic grid `2^-b` where `b`
//! is derived from the requested precision, and the snapped endpoints are
//! the exact floor/ceil of the true value on that grid. Internal
//! evaluations are refined until this holds, so results are deterministic
//! and refine monotonically.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ceil_dyadic, floor_dyadic, RatInterval, Rational};
use crate::error::{Error, Result};

/// Guard bits added to every internal evaluation.
const GUARD: u32 = 32;

/// Largest number of extra bits tried while resolving a snapped endpoint.
const MAX_EXTRA: u32 = 1 << 14;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Smallest `b >= 0` with `2^-b <= precision`.
pub fn bits_for_precision(precision: &Rational) -> Result<u32> {
    if !precision.is_positive() {
        return Err(Error::Domain(format!("precision must be positive, got {precision}")));
    }
    let mut b: u32 = 0;
    let inv = precision.recip();
    let mut pow = Rational::one();
    while pow < inv {
        pow *= rat(2, 1);
        b += 1;
    }
    Ok(b)
}

/// Alternating arctan series at a rational `0 <= x <= 1/2` with outward
/// rounding at `bits + GUARD` after each step and an explicit tail bound.
fn arctan_series(x: &Rational, bits: u32) -> RatInterval {
    let w = bits + GUARD;
    let x = RatInterval::point(x.clone()).round_out(w);
    let x2 = x.square().round_out(w);
    let eps = Rational::new(BigInt::one(), BigInt::one() << w as usize);
    let mut power = x.clone();
    let mut sum = RatInterval::point(Rational::zero());
    let mut k: i64 = 0;
    loop {
        let term = power.scale(&rat(1, 2 * k + 1)).round_out(w);
        if term.hi() <= &eps {
            let tail = term.hi().clone();
            return RatInterval::from_sorted(sum.lo() - &tail, sum.hi() + &tail).round_out(w);
        }
        sum = if k % 2 == 0 { sum + term } else { sum - term };
        sum = sum.round_out(w);
        power = (power * x2.clone()).round_out(w);
        k += 1;
    }
}

/// Internal enclosure of pi of width about `2^-bits` (Machin's formula).
pub(crate) fn pi_bounds(bits: u32) -> RatInterval {
    let a = arctan_series(&rat(1, 5), bits + 6).scale(&rat(16, 1));
    let b = arctan_series(&rat(1, 239), bits + 4).scale(&rat(4, 1));
    (a - b).round_out(bits + GUARD)
}

/// Internal enclosure of `arctan(x)` for any rational `x`.
pub(crate) fn arctan_point(x: &Rational, bits: u32) -> RatInterval {
    if x.is_zero() {
        return RatInterval::point(Rational::zero());
    }
    if x.is_negative() {
        return -arctan_point(&-x, bits);
    }
    let one = Rational::one();
    if x > &one {
        let half_pi = pi_bounds(bits + 2).scale(&rat(1, 2));
        return (half_pi - arctan_point(&x.recip(), bits + 2)).round_out(bits + GUARD);
    }
    let half = rat(1, 2);
    if x > &half {
        // arctan x = arctan(1/2) + arctan((2x - 1) / (2 + x))
        let reduced = (x * rat(2, 1) - &one) / (x + rat(2, 1));
        return (arctan_series(&half, bits + 1) + arctan_series(&reduced, bits + 1)).round_out(bits + GUARD);
    }
    arctan_series(x, bits)
}

/// `[floor_g(sqrt x), ceil_g(sqrt x)]` on the grid `2^-g`, computed exactly.
pub(crate) fn sqrt_point(x: &Rational, g: u32) -> RatInterval {
    let scale = Rational::from_integer(BigInt::one() << (2 * g) as usize);
    let y = x * scale;
    let lo_int = y.floor().to_integer().sqrt();
    let ceil_y = y.ceil().to_integer();
    let mut hi_int = ceil_y.sqrt();
    if &hi_int * &hi_int < ceil_y {
        hi_int += 1;
    }
    let den = BigInt::one() << g as usize;
    RatInterval::from_sorted(Rational::new(lo_int, den.clone()), Rational::new(hi_int, den))
}

/// Exact `(floor_g(v), ceil_g(v))` of the value enclosed by `eval(bits)`,
/// refining `bits` until both are resolved.
fn snap<F: Fn(u32) -> RatInterval>(eval: F, grid: u32) -> (Rational, Rational) {
    let mut extra = 24;
    loop {
        let iv = eval(grid + extra);
        if iv.is_point() {
            return (floor_dyadic(iv.lo(), grid), ceil_dyadic(iv.hi(), grid));
        }
        let f_lo = floor_dyadic(iv.lo(), grid);
        let f_hi = floor_dyadic(iv.hi(), grid);
        let c_lo = ceil_dyadic(iv.lo(), grid);
        let c_hi = ceil_dyadic(iv.hi(), grid);
        if (f_lo == f_hi && c_lo == c_hi) || extra >= MAX_EXTRA {
            return (f_lo, c_hi);
        }
        extra *= 2;
    }
}

/// Enclosure of pi of width at most `precision`.
pub fn enclose_pi(precision: &Rational) -> Result<RatInterval> {
    let grid = bits_for_precision(precision)?;
    let (lo, hi) = snap(pi_bounds, grid);
    Ok(RatInterval::from_sorted(lo, hi))
}

/// Enclosure of `{arctan t : t in x}`; width at most `precision` plus the
/// variation of arctan over `x`.
pub fn enclose_arctan(x: &RatInterval, precision: &Rational) -> Result<RatInterval> {
    let grid = bits_for_precision(precision)? + 1;
    let (lo, _) = snap(|b| arctan_point(x.lo(), b), grid);
    let (_, hi) = snap(|b| arctan_point(x.hi(), b), grid);
    Ok(RatInterval::from_sorted(lo, hi))
}

/// Enclosure of `{sqrt t : t in x}` for `x >= 0`.
pub fn enclose_sqrt(x: &RatInterval, precision: &Rational) -> Result<RatInterval> {
    if x.lo().is_negative() {
        return Err(Error::Domain(format!("square root of interval {x} with negative part")));
    }
    let grid = bits_for_precision(precision)? + 1;
    let lo = sqrt_point(x.lo(), grid).lo().clone();
    let hi = sqrt_point(x.hi(), grid).hi().clone();
    Ok(RatInterval::from_sorted(lo, hi))
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{rational_to_f64, Rational, Sign};
use crate::error::{Error, Result};

/// Element `p + q*sqrt(D)` of a real quadratic extension of the rationals.
///
/// `D` is carried verbatim, never reduced to square-free form. Arithmetic
/// between two elements requires a common `D` unless one side is rational
/// (`q = 0`); mixing two genuine radicands is a programming error and panics.
#[derive(Clone, Debug)]
pub struct QuadExt {
    p: Rational,
    q: Rational,
    d: Rational,
}

impl QuadExt {
    pub fn new(p: Rational, q: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::Domain(format!("negative radicand {d}: not a real number")));
        }
        Ok(Self { p, q, d })
    }

    pub fn rational(p: Rational) -> Self {
        Self { p, q: Rational::zero(), d: Rational::zero() }
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    /// True when the value is rational by construction (`q = 0` or `D = 0`).
    pub fn is_rational(&self) -> bool {
        self.q.is_zero() || self.d.is_zero()
    }

    /// Exact sign, by case analysis on the signs of `p`, `q` and a
    /// comparison of `p^2` against `q^2 D`.
    pub fn sign(&self) -> Sign {
        let sp = Sign::of_rational(&self.p);
        if self.is_rational() {
            return sp;
        }
        let sq = Sign::of_rational(&self.q);
        if sp == Sign::Zero || sp == sq {
            return sq;
        }
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * &self.d;
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Sign::Zero,
        }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.p) + rational_to_f64(&self.q) * rational_to_f64(&self.d).sqrt()
    }

    /// `(p, s * q^2 D)` with `s = sign(q)`: the value is `p + s*sqrt(|R|)`.
    /// Two elements are equal iff their canonical pairs agree, provided the
    /// radicands are not perfect squares of rationals.
    pub fn canonical(&self) -> (Rational, Rational) {
        if self.is_rational() {
            return (self.p.clone(), Rational::zero());
        }
        let r = &self.q * &self.q * &self.d;
        if self.q.is_negative() {
            (self.p.clone(), -r)
        } else {
            (self.p.clone(), r)
        }
    }

    /// Integer surd form `(P + s*sqrt(R)) / Q` with minimal positive `Q`
    /// when the denominator of `q^2 D` is a perfect square (always the case
    /// for roots built from a rational quadratic). Returns `(P, s*R, Q)`.
    pub fn surd_form(&self) -> (BigInt, BigInt, BigInt) {
        let (p, signed_r) = self.canonical();
        let r = signed_r.abs();
        let e = r.denom().clone();
        let root = e.sqrt();
        let m = if &root * &root == e { root } else { e };
        let big_q = p.denom().lcm(&m);
        let big_p = (&p * Rational::from_integer(big_q.clone())).to_integer();
        let big_r = (&r * Rational::from_integer(&big_q * &big_q)).to_integer();
        let big_r = if signed_r.is_negative() { -big_r } else { big_r };
        (big_p, big_r, big_q)
    }

    fn common_d(&self, other: &Self) -> Rational {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Rational::zero(),
            (true, false) => other.d.clone(),
            (false, true) => self.d.clone(),
            (false, false) => {
                assert!(self.d == other.d, "QuadExt arithmetic across radicands {} and {}", self.d, other.d);
                self.d.clone()
            }
        }
    }

    /// Exact comparison of two elements sharing a radicand (or rational).
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        if self.is_rational() || other.is_rational() || self.d == other.d {
            self.cmp_exact(other) == Ordering::Equal
        } else {
            self.canonical() == other.canonical()
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        let d = self.common_d(&rhs);
        QuadExt { p: self.p + rhs.p, q: self.q + rhs.q, d }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        let d = self.common_d(&rhs);
        QuadExt { p: self.p - rhs.p, q: self.q - rhs.q, d }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let d = self.common_d(&rhs);
        let p = &self.p * &rhs.p + &self.q * &rhs.q * &d;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        QuadExt { p, q, d }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { p: -self.p, q: -self.q, d: self.d }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + {}*sqrt({})", self.p, self.q, self.d)
        }
    }
}

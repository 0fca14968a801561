//! Assembly of `I^(k)(s)` and `J(s)` from the coefficient expansions and the
//! moments, the `a_0`-quadratic `p_n(a_0) = I'(1)`, and its largest root.
//!
//! ```text
//! I^(k)(s) = sum_{q=0}^{2d} c_q alpha_q m_k(q) s^(q+2-k) prod_{j=0}^{q} (n-1+2j)/(n-5-2j)
//! J(s)     = sum_{q=0}^{2d-1} c_q beta_q s^(q+2) prod_{j=0}^{q} (n+3+2j)/(n-5-2j)
//! ```
//!
//! with `m_0 = 1`, `m_1 = q+2`, `m_2 = (q+2)(q+1)`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{enclose_sqrt, QuadExt, RatInterval, Rational, Sign};
use crate::poly::{alpha_coefficients, beta_coefficients, CoeffVector};
use crate::scalar::Scalar;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Which quantity a linear form in the moments represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    I,
    IPrime,
    IDoublePrime,
    J,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [Quantity::I, Quantity::IPrime, Quantity::IDoublePrime, Quantity::J];

    pub fn order(self) -> Option<u32> {
        match self {
            Quantity::I => Some(0),
            Quantity::IPrime => Some(1),
            Quantity::IDoublePrime => Some(2),
            Quantity::J => None,
        }
    }
}

/// `n > 4d + 6`, which also makes every moment `c_0 .. c_{2d}` converge and
/// keeps the product denominators `n - 5 - 2j` positive.
pub fn check_degree(n: i64, d: usize) -> Result<()> {
    let d = d as i64;
    if n <= 4 * d + 6 {
        return Err(Error::DegreeConstraint { n, d });
    }
    Ok(())
}

/// The product weights of the `I` and `J` sums for fixed `(n, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    pub n: i64,
    pub d: usize,
    /// `prod_{j=0}^{q} (n-1+2j)/(n-5-2j)` for `q = 0 .. 2d`.
    pub i: Vec<Rational>,
    /// `prod_{j=0}^{q} (n+3+2j)/(n-5-2j)` for `q = 0 .. 2d-1`.
    pub j: Vec<Rational>,
}

impl Weights {
    pub fn new(n: i64, d: usize) -> Result<Self> {
        check_degree(n, d)?;
        let running = |off: i64, len: usize| {
            let mut acc = Rational::one();
            (0..len as i64)
                .map(|j| {
                    acc *= rat(n + off + 2 * j, n - 5 - 2 * j);
                    acc.clone()
                })
                .collect::<Vec<_>>()
        };
        Ok(Self { n, d, i: running(-1, 2 * d + 1), j: running(3, 2 * d) })
    }
}

fn derivative_multiplier(q: usize, order: u32) -> i64 {
    let q = q as i64;
    match order {
        0 => 1,
        1 => q + 2,
        _ => (q + 2) * (q + 1),
    }
}

fn check_moments<T>(moments: &[T], needed: usize) -> Result<()> {
    if moments.len() < needed {
        return Err(Error::Usage(format!("need {needed} moments, got {}", moments.len())));
    }
    Ok(())
}

/// `I^(order)(s)` for the profile with coefficients `a_0 .. a_d`.
pub fn i_derivative<T: Scalar>(n: i64, coeffs: &[T], moments: &[T], order: u32, s: &T) -> Result<T> {
    if order > 2 {
        return Err(Error::Usage(format!("derivative order must be 0, 1 or 2, got {order}")));
    }
    let d = coeffs.len().saturating_sub(1);
    let w = Weights::new(n, d)?;
    check_moments(moments, 2 * d + 1)?;
    let alpha = alpha_coefficients(coeffs, n);
    let mut acc = T::zero_value();
    for (q, a) in alpha.iter().enumerate() {
        let k = &w.i[q] * rat(derivative_multiplier(q, order), 1);
        let sp = s.powi(q as u32 + 2 - order);
        acc = acc + (moments[q].clone() * a.clone() * sp).scale(&k);
    }
    Ok(acc)
}

/// `J(s)`; zero for a constant profile.
pub fn j_value<T: Scalar>(n: i64, coeffs: &[T], moments: &[T], s: &T) -> Result<T> {
    let d = coeffs.len().saturating_sub(1);
    let w = Weights::new(n, d)?;
    check_moments(moments, 2 * d)?;
    let beta = beta_coefficients(coeffs);
    let mut acc = T::zero_value();
    for (q, b) in beta.iter().enumerate() {
        let sp = s.powi(q as u32 + 2);
        acc = acc + (moments[q].clone() * b.clone() * sp).scale(&w.j[q]);
    }
    Ok(acc)
}

/// Evaluates one of the four quantities at `s = 1`.
pub fn quantity_at_one<T: Scalar>(n: i64, which: Quantity, coeffs: &[T], moments: &[T]) -> Result<T> {
    let one = T::from_i64(1);
    match which.order() {
        Some(order) => i_derivative(n, coeffs, moments, order, &one),
        None => j_value(n, coeffs, moments, &one),
    }
}

/// `p(a_0) = A a_0^2 + B a_0 + C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticInA0<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> QuadraticInA0<T> {
    /// Exact interpolation through the values at `a_0 = 0, 1, 2`.
    pub fn interpolate(v0: T, v1: T, v2: T) -> Self {
        let half = rat(1, 2);
        let a = (v2.clone() - v1.scale(&rat(2, 1)) + v0.clone()).scale(&half);
        let b = (v1.scale(&rat(4, 1)) - v0.scale(&rat(3, 1)) - v2).scale(&half);
        Self { a, b, c: v0 }
    }

    pub fn discriminant(&self) -> T {
        self.b.clone() * self.b.clone() - (self.a.clone() * self.c.clone()).scale(&rat(4, 1))
    }

    pub fn eval(&self, x: &T) -> T {
        (self.a.clone() * x.clone() + self.b.clone()) * x.clone() + self.c.clone()
    }
}

impl QuadraticInA0<RatInterval> {
    /// `A x^2 + B x + C` using the tight square of `x`.
    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        self.a.clone() * x.square() + self.b.clone() * x.clone() + self.c.clone()
    }

    /// Discriminant with the tight square of `B`.
    pub fn discriminant_interval(&self) -> RatInterval {
        self.b.square() - (self.a.clone() * self.c.clone()).scale(&rat(4, 1))
    }
}

/// `(A, B, C)` of `I'(1)` as a function of `a_0`, by three-point
/// interpolation of the generic assembly; `tail` supplies `a_1 .. a_d`.
pub fn quadratic_in_a0<T: Scalar>(n: i64, tail: &CoeffVector, moments: &[T]) -> Result<QuadraticInA0<T>> {
    let at = |k: i64| {
        let coeffs = tail.embed_with_a0(T::from_i64(k));
        i_derivative(n, &coeffs, moments, 1, &T::from_i64(1))
    };
    Ok(QuadraticInA0::interpolate(at(0)?, at(1)?, at(2)?))
}

/// The `+sqrt` root `(-B + sqrt(B^2 - 4AC)) / (2A)` as an exact element of
/// `Q(sqrt(B^2 - 4AC))`.
pub fn largest_root(quad: &QuadraticInA0<Rational>) -> Result<QuadExt> {
    let disc = quad.discriminant();
    if !disc.is_positive() {
        return Err(Error::NoRealRoot);
    }
    if !quad.a.is_positive() {
        return Err(Error::Precondition(format!("leading coefficient must be positive, got {}", quad.a)));
    }
    let two_a = &quad.a * rat(2, 1);
    QuadExt::new(-&quad.b / &two_a, two_a.recip(), disc)
}

/// Enclosure of the `+sqrt` root over every `(A, B, C)` in the boxes.
/// Requires `A > 0` and discriminant `> 0` on the whole box.
pub fn largest_root_interval(quad: &QuadraticInA0<RatInterval>, precision: &Rational) -> Result<RatInterval> {
    let disc = quad.discriminant_interval();
    if disc.sign() != Some(Sign::Positive) {
        return Err(Error::NoRealRoot);
    }
    if quad.a.sign() != Some(Sign::Positive) {
        return Err(Error::Precondition("leading coefficient not certified positive".into()));
    }
    let root = enclose_sqrt(&disc, precision)?;
    (root - quad.b.clone()).div(&quad.a.scale(&rat(2, 1)))
}

/// A quantity written as `sum_q c_q (k2_q a_0^2 + k1_q a_0 + k0_q)` with
/// exact rational `k`. Collapsing against moment enclosures keeps every
/// moment to a single occurrence, which avoids the dependency widening of
/// evaluating the generic assembly directly on intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentForm {
    pub quantity: Quantity,
    /// `[k0, k1, k2]` per moment index.
    pub terms: Vec<[Rational; 3]>,
}

impl MomentForm {
    pub fn new(n: i64, tail: &CoeffVector, quantity: Quantity) -> Result<Self> {
        let d = tail.degree();
        let w = Weights::new(n, d)?;
        let at = |k: i64| -> Vec<Rational> {
            let coeffs = tail.embed_with_a0(Rational::from_integer(k.into()));
            match quantity {
                Quantity::J => beta_coefficients(&coeffs),
                _ => alpha_coefficients(&coeffs, n),
            }
        };
        let (e0, e1, e2) = (at(0), at(1), at(2));
        let terms = (0..e0.len())
            .map(|q| {
                let k = match quantity.order() {
                    Some(order) => &w.i[q] * rat(derivative_multiplier(q, order), 1),
                    None => w.j[q].clone(),
                };
                let p = QuadraticInA0::interpolate(e0[q].clone(), e1[q].clone(), e2[q].clone());
                [p.c * &k, p.b * &k, p.a * &k]
            })
            .collect();
        Ok(Self { quantity, terms })
    }

    /// Coefficients of the quantity as a quadratic in `a_0` for the given
    /// moment values.
    pub fn collapse<T: Scalar>(&self, moments: &[T]) -> Result<QuadraticInA0<T>> {
        check_moments(moments, self.terms.len())?;
        let mut out = QuadraticInA0 { a: T::zero_value(), b: T::zero_value(), c: T::zero_value() };
        for (t, c) in self.terms.iter().zip(moments) {
            if !t[2].is_zero() {
                out.a = out.a + c.scale(&t[2]);
            }
            if !t[1].is_zero() {
                out.b = out.b + c.scale(&t[1]);
            }
            if !t[0].is_zero() {
                out.c = out.c + c.scale(&t[0]);
            }
        }
        Ok(out)
    }
}

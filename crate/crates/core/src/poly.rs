//! Dense polynomials and the profile expansions
//!
//! ```text
//! sum_q alpha_q s^q = (n+1) f^2 + 4 s f f' + 2 s^2 f'^2
//! sum_q beta_q  s^q = 2 f f' + s f'
//! ```
//!
//! for `f(s) = a_0 + a_1 s + ... + a_d s^d`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};
use crate::scalar::Scalar;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Rational polynomial, coefficient `i` multiplies `s^i`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * s + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(derivative(&self.coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        Poly::new(mul(&self.coeffs, &other.coeffs))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly::new(add(&self.coeffs, &other.coeffs))
    }
}

fn derivative<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter().enumerate().skip(1).map(|(i, c)| c.scale(&rat(i as i64, 1))).collect()
}

fn mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero_value(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero_value(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = out[i].clone() + x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = out[i].clone() + y.clone();
    }
    out
}

/// Multiplies by `s^k`.
fn shift<T: Scalar>(a: &[T], k: usize) -> Vec<T> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero_value(); k];
    out.extend_from_slice(a);
    out
}

fn pad<T: Scalar>(mut a: Vec<T>, len: usize) -> Vec<T> {
    a.resize(len, T::zero_value());
    a
}

/// `alpha_0 .. alpha_{2d}` for the coefficient list `a_0 .. a_d`.
pub fn alpha_coefficients<T: Scalar>(a: &[T], n: i64) -> Vec<T> {
    if a.is_empty() {
        return Vec::new();
    }
    let len = 2 * a.len() - 1;
    let fp = derivative(a);
    let f2 = mul(a, a);
    let ffp = shift(&mul(a, &fp), 1);
    let fp2 = shift(&mul(&fp, &fp), 2);
    let sum = add(
        &add(
            &f2.iter().map(|c| c.scale(&rat(n + 1, 1))).collect::<Vec<_>>(),
            &ffp.iter().map(|c| c.scale(&rat(4, 1))).collect::<Vec<_>>(),
        ),
        &fp2.iter().map(|c| c.scale(&rat(2, 1))).collect::<Vec<_>>(),
    );
    pad(sum, len)
}

/// `beta_0 .. beta_{2d-1}`; empty for a constant profile.
pub fn beta_coefficients<T: Scalar>(a: &[T]) -> Vec<T> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let len = 2 * a.len() - 2;
    let fp = derivative(a);
    let two_ffp: Vec<T> = mul(a, &fp).iter().map(|c| c.scale(&rat(2, 1))).collect();
    pad(add(&two_ffp, &shift(&fp, 1)), len)
}

/// `alpha` list of a rational polynomial; length `2*deg + 1`.
pub fn expand_alpha(f: &Poly, n: i64) -> Vec<Rational> {
    alpha_coefficients(f.coeffs(), n)
}

/// `beta` list of a rational polynomial; the empty list for constants.
pub fn expand_beta(f: &Poly) -> Vec<Rational> {
    beta_coefficients(f.coeffs())
}

/// Profile coefficients `a_0 .. a_d`. When only the tail `a_1 .. a_d` is
/// meaningful, `a_0` holds a placeholder zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffVector {
    coeffs: Vec<Rational>,
}

impl CoeffVector {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Usage("coefficient vector needs at least a_0".into()));
        }
        Ok(Self { coeffs })
    }

    /// Tail `a_1 .. a_d` with a placeholder `a_0 = 0`.
    pub fn from_tail(tail: Vec<Rational>) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(tail);
        Self { coeffs }
    }

    /// Built-in degree-6 tail `(-10, 10^-4, -10^-3, 184/1000, -265/10000, 737/10^6)`.
    pub fn preset_degree_six() -> Self {
        Self::from_tail(vec![
            rat(-10, 1),
            rat(1, 10_000),
            rat(-1, 1_000),
            rat(184, 1_000),
            rat(-265, 10_000),
            rat(737, 1_000_000),
        ])
    }

    /// Built-in degree-1 tail `a_1 = -1`, i.e. `f(s) = -s + a_0`.
    pub fn preset_degree_one() -> Self {
        Self::from_tail(vec![rat(-1, 1)])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn a0(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn tail(&self) -> &[Rational] {
        &self.coeffs[1..]
    }

    pub fn with_a0(&self, a0: Rational) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = a0;
        Self { coeffs }
    }

    /// Coefficients embedded in another scalar type with `a_0` replaced.
    pub fn embed_with_a0<T: Scalar>(&self, a0: T) -> Vec<T> {
        std::iter::once(a0).chain(self.tail().iter().map(T::from_rational)).collect()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    pub fn tail_strings(&self) -> Vec<String> {
        self.tail().iter().map(format_rational).collect()
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.tail_strings().join(", "))
    }
}

fn require_d6(a: &CoeffVector) -> Result<&[Rational]> {
    if a.degree() != 6 {
        return Err(Error::Usage(format!("closed-form degree-6 expansion needs d = 6, got d = {}", a.degree())));
    }
    Ok(a.coeffs())
}

/// The thirteen hand-expanded `alpha_q` for `d = 6`, term by term.
pub fn alpha_d6_closed_form(a: &CoeffVector, n: i64) -> Result<Vec<Rational>> {
    let c = require_d6(a)?;
    let k = |v: i64| Rational::from_integer(v.into());
    let (a0, a1, a2, a3, a4, a5, a6) = (&c[0], &c[1], &c[2], &c[3], &c[4], &c[5], &c[6]);
    Ok(vec![
        k(n + 1) * a0 * a0,
        k(2 * (n + 3)) * a0 * a1,
        k(n + 7) * a1 * a1 + k(2 * (n + 5)) * a0 * a2,
        k(2 * (n + 11)) * a1 * a2 + k(2 * (n + 7)) * a0 * a3,
        k(n + 17) * a2 * a2 + k(2 * (n + 15)) * a1 * a3 + k(2 * (n + 9)) * a0 * a4,
        k(2 * (n + 23)) * a2 * a3 + k(2 * (n + 19)) * a1 * a4 + k(2 * (n + 11)) * a0 * a5,
        k(n + 31) * a3 * a3 + k(2 * (n + 29)) * a2 * a4 + k(2 * (n + 23)) * a1 * a5 + k(2 * (n + 13)) * a0 * a6,
        k(2 * (n + 39)) * a3 * a4 + k(2 * (n + 35)) * a2 * a5 + k(2 * (n + 27)) * a1 * a6,
        k(n + 49) * a4 * a4 + k(2 * (n + 47)) * a3 * a5 + k(2 * (n + 41)) * a2 * a6,
        k(2 * (n + 59)) * a4 * a5 + k(2 * (n + 55)) * a3 * a6,
        k(n + 71) * a5 * a5 + k(2 * (n + 69)) * a4 * a6,
        k(2 * (n + 83)) * a5 * a6,
        k(n + 97) * a6 * a6,
    ])
}

/// Coefficient of `a_5 a_6` in `beta_10`. Some printed tables carry 20 here;
/// the expansion of `2 f f' + s f'` gives `2 (5 + 6) = 22`.
pub const BETA10_A5A6: i64 = 22;

/// The twelve hand-expanded `beta_q` for `d = 6`.
pub fn beta_d6_closed_form(a: &CoeffVector) -> Result<Vec<Rational>> {
    let c = require_d6(a)?;
    let k = |v: i64| Rational::from_integer(v.into());
    let (a0, a1, a2, a3, a4, a5, a6) = (&c[0], &c[1], &c[2], &c[3], &c[4], &c[5], &c[6]);
    Ok(vec![
        k(2) * a0 * a1,
        a1 + k(2) * a1 * a1 + k(4) * a0 * a2,
        k(2) * a2 + k(6) * a1 * a2 + k(6) * a0 * a3,
        k(4) * a2 * a2 + k(3) * a3 + k(8) * a1 * a3 + k(8) * a0 * a4,
        k(10) * a2 * a3 + k(4) * a4 + k(10) * a1 * a4 + k(10) * a0 * a5,
        k(6) * a3 * a3 + k(12) * a2 * a4 + k(5) * a5 + k(12) * a1 * a5 + k(12) * a0 * a6,
        k(14) * a3 * a4 + k(14) * a2 * a5 + k(6) * a6 + k(14) * a1 * a6,
        k(8) * a4 * a4 + k(16) * a3 * a5 + k(16) * a2 * a6,
        k(18) * a4 * a5 + k(18) * a3 * a6,
        k(10) * a5 * a5 + k(20) * a4 * a6,
        k(BETA10_A5A6) * a5 * a6,
        k(12) * a6 * a6,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(a0: Rational) -> CoeffVector {
        CoeffVector::preset_degree_six().with_a0(a0)
    }

    #[test]
    fn constant_profile() {
        let f = Poly::new(vec![rat(3, 2)]);
        assert_eq!(expand_alpha(&f, 35), vec![rat(36, 1) * rat(9, 4)]);
        assert!(expand_beta(&f).is_empty());
    }

    #[test]
    fn degree_one_profile() {
        // f = -s + a0
        let a0 = rat(7, 3);
        let f = Poly::new(vec![a0.clone(), rat(-1, 1)]);
        let n = 62;
        let alpha = expand_alpha(&f, n);
        assert_eq!(alpha, vec![rat(n + 1, 1) * &a0 * &a0, rat(-2 * (n + 3), 1) * &a0, rat(n + 7, 1)]);
        assert_eq!(expand_beta(&f), vec![rat(-2, 1) * &a0, rat(1, 1)]);
    }

    #[test]
    fn leading_coefficients_degree_six() {
        let a = sym(rat(5, 1));
        let a6 = a.coeffs()[6].clone();
        let alpha = alpha_coefficients(a.coeffs(), 35);
        assert_eq!(alpha.len(), 13);
        assert_eq!(alpha[12], rat(132, 1) * &a6 * &a6);
        let beta = beta_coefficients(a.coeffs());
        assert_eq!(beta.len(), 12);
        assert_eq!(beta[11], rat(12, 1) * &a6 * &a6);
        assert_eq!(beta[10], rat(22, 1) * &a.coeffs()[5] * &a6);
        assert_ne!(beta[10], rat(20, 1) * &a.coeffs()[5] * &a6);
    }

    #[test]
    fn closed_forms_reject_other_degrees() {
        let a = CoeffVector::preset_degree_one();
        assert!(matches!(alpha_d6_closed_form(&a, 35), Err(Error::Usage(_))));
        assert!(matches!(beta_d6_closed_form(&a), Err(Error::Usage(_))));
    }

    #[test]
    fn closed_forms_vanish_on_zero() {
        let z = CoeffVector::new(vec![Rational::zero(); 7]).unwrap();
        assert!(alpha_d6_closed_form(&z, 40).unwrap().iter().all(Zero::is_zero));
        assert!(beta_d6_closed_form(&z).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn preset_closed_form_alpha12() {
        let a = sym(rat(1, 1));
        let alpha = alpha_d6_closed_form(&a, 35).unwrap();
        let a6 = &a.coeffs()[6];
        assert_eq!(alpha[12], rat(35 + 97, 1) * a6 * a6);
        let beta = beta_d6_closed_form(&a).unwrap();
        assert_eq!(beta[11], rat(12, 1) * a6 * a6);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-200i64..200, 1i64..40).prop_map(|(n, d)| rat(n, d))
    }

    fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(small_rational(), 1..=max_len)
    }

    proptest! {
        #[test]
        fn closed_forms_match_expansion(c in coeffs(7), n in 31i64..=100) {
            let mut padded = c.clone();
            padded.resize(7, Rational::zero());
            let a = CoeffVector::new(padded.clone()).unwrap();
            let mut alpha = alpha_coefficients(&c, n);
            alpha.resize(13, Rational::zero());
            prop_assert_eq!(alpha, alpha_d6_closed_form(&a, n).unwrap());
            let mut beta = beta_coefficients(&c);
            beta.resize(12, Rational::zero());
            prop_assert_eq!(beta, beta_d6_closed_form(&a).unwrap());
        }

        #[test]
        fn alpha_point_evaluation(c in coeffs(7), n in 31i64..=100) {
            let f = Poly::new(c.clone());
            let alpha = alpha_coefficients(&c, n);
            let one = rat(1, 1);
            let total: Rational = alpha.iter().cloned().fold(Rational::zero(), |a, b| a + b);
            let f1 = f.eval(&one);
            let fp1 = f.derivative().eval(&one);
            let expected = rat(n + 1, 1) * &f1 * &f1 + rat(4, 1) * &f1 * &fp1 + rat(2, 1) * &fp1 * &fp1;
            prop_assert_eq!(total, expected);
        }

        #[test]
        fn alpha_is_quadratic_form(c in coeffs(7), n in 31i64..=100, lam in small_rational()) {
            let scaled: Vec<Rational> = c.iter().map(|x| x * &lam).collect();
            let lhs = alpha_coefficients(&scaled, n);
            let rhs: Vec<Rational> = alpha_coefficients(&c, n).iter().map(|x| x * &lam * &lam).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn beta_splits_into_quadratic_and_linear_parts(c in coeffs(7), lam in small_rational()) {
            // beta(lam f) = lam^2 * 2ff' + lam * s f'
            let scaled: Vec<Rational> = c.iter().map(|x| x * &lam).collect();
            let f = Poly::new(c.clone());
            let fp = f.derivative();
            let mut quad = f.mul(&fp).coeffs().iter().map(|x| x * rat(2, 1)).collect::<Vec<_>>();
            let mut lin: Vec<Rational> = std::iter::once(Rational::zero()).chain(fp.coeffs().iter().cloned()).collect();
            let len = beta_coefficients(&c).len();
            quad.resize(len, Rational::zero());
            lin.resize(len.max(lin.len()), Rational::zero());
            lin.truncate(len);
            let expected: Vec<Rational> = quad.iter().zip(&lin).map(|(q, l)| q * &lam * &lam + l * &lam).collect();
            prop_assert_eq!(beta_coefficients(&scaled), expected);
        }
    }
}

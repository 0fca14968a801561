//! Independent oracles: literal transcriptions of the printed `A_n`, `B_n`,
//! `C_n`, `I''(1)` and `J(1)` expansions for a degree-six profile, written
//! term by term without touching the library's assembly code.

#![allow(dead_code)]

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yamabe_cert::{CoeffVector, Rational};

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `prod_{j=0}^{q} (n + off + 2j) / (n - 5 - 2j)`.
pub fn prod(n: i64, off: i64, q: i64) -> Rational {
    let mut acc = Rational::one();
    for j in 0..=q {
        acc *= rat(n + off + 2 * j, n - 5 - 2 * j);
    }
    acc
}

/// `I'(1) = A a_0^2 + B a_0 + C` as printed; `a` holds `a_0 .. a_6` (only
/// `a_1 .. a_6` are read), `c` holds `c_0 .. c_12`. `k_a2a4` is the shift in
/// the `2(n + k) a_2 a_4` term of the `c_6` bracket (29 as printed).
pub fn abc_with(n: i64, a: &[Rational], c: &[Rational], k_a2a4: i64) -> (Rational, Rational, Rational) {
    let p = |q: i64| prod(n, -1, q);
    let big_a = r(2 * (n - 1) * (n + 1)) / r(n - 5) * &c[0];
    let mut big_b = Rational::from_integer(0.into());
    for l in 1..=6i64 {
        big_b += r(l + 2) * &a[l as usize] * &c[l as usize] * prod(n, 1, l);
    }
    big_b *= r(2 * (n - 1));
    let (a1, a2, a3, a4, a5, a6) = (&a[1], &a[2], &a[3], &a[4], &a[5], &a[6]);
    let big_c = r(4 * (n + 7)) * a1 * a1 * &c[2] * p(2)
        + r(10 * (n + 11)) * a1 * a2 * &c[3] * p(3)
        + r(6) * (r(n + 17) * a2 * a2 + r(2 * (n + 15)) * a1 * a3) * &c[4] * p(4)
        + r(14) * (r(n + 23) * a2 * a3 + r(n + 19) * a1 * a4) * &c[5] * p(5)
        + r(8) * (r(n + 31) * a3 * a3 + r(2 * (n + k_a2a4)) * a2 * a4 + r(2 * (n + 23)) * a1 * a5) * &c[6] * p(6)
        + r(18) * (r(n + 39) * a3 * a4 + r(n + 35) * a2 * a5 + r(n + 27) * a1 * a6) * &c[7] * p(7)
        + r(10) * (r(n + 49) * a4 * a4 + r(2 * (n + 47)) * a3 * a5 + r(2 * (n + 41)) * a2 * a6) * &c[8] * p(8)
        + r(22) * (r(n + 59) * a4 * a5 + r(n + 55) * a3 * a6) * &c[9] * p(9)
        + r(12) * (r(n + 71) * a5 * a5 + r(2 * (n + 69)) * a4 * a6) * &c[10] * p(10)
        + r(26 * (n + 83)) * a5 * a6 * &c[11] * p(11)
        + r(14 * (n + 97)) * a6 * a6 * &c[12] * p(12);
    (big_a, big_b, big_c)
}

pub fn abc(n: i64, a: &[Rational], c: &[Rational]) -> (Rational, Rational, Rational) {
    abc_with(n, a, c, 29)
}

/// `I''(1)` as printed, with `a_0 = a[0]`.
pub fn i_second(n: i64, a: &[Rational], c: &[Rational]) -> Rational {
    let p = |q: i64| prod(n, -1, q);
    let (a0, a1, a2, a3, a4, a5, a6) = (&a[0], &a[1], &a[2], &a[3], &a[4], &a[5], &a[6]);
    let mut linear = Rational::from_integer(0.into());
    for l in 1..=6i64 {
        linear += r((l + 1) * (l + 2)) * &a[l as usize] * &c[l as usize] * prod(n, 1, l);
    }
    r(2 * (n - 1) * (n + 1)) / r(n - 5) * a0 * a0 * &c[0]
        + r(2 * (n - 1)) * a0 * linear
        + r(12 * (n + 7)) * a1 * a1 * &c[2] * p(2)
        + r(40 * (n + 11)) * a1 * a2 * &c[3] * p(3)
        + r(30) * (r(n + 17) * a2 * a2 + r(2 * (n + 15)) * a1 * a3) * &c[4] * p(4)
        + r(84) * (r(n + 23) * a2 * a3 + r(n + 19) * a1 * a4) * &c[5] * p(5)
        + r(56) * (r(n + 31) * a3 * a3 + r(2 * (n + 29)) * a2 * a4 + r(2 * (n + 23)) * a1 * a5) * &c[6] * p(6)
        + r(144) * (r(n + 39) * a3 * a4 + r(n + 35) * a2 * a5 + r(n + 27) * a1 * a6) * &c[7] * p(7)
        + r(90) * (r(n + 49) * a4 * a4 + r(2 * (n + 47)) * a3 * a5 + r(2 * (n + 41)) * a2 * a6) * &c[8] * p(8)
        + r(220) * (r(n + 59) * a4 * a5 + r(n + 55) * a3 * a6) * &c[9] * p(9)
        + r(132) * (r(n + 71) * a5 * a5 + r(2 * (n + 69)) * a4 * a6) * &c[10] * p(10)
        + r(312 * (n + 83)) * a5 * a6 * &c[11] * p(11)
        + r(182 * (n + 97)) * a6 * a6 * &c[12] * p(12)
}

/// `J(1)` as printed, except that the `c_6` bracket uses `14 a_1 a_6` where
/// the display has `14 a_1 a_0` (the expansion of `2 f f' + s f'` has no
/// `a_1 a_0` term at that order).
pub fn j_one(n: i64, a: &[Rational], c: &[Rational]) -> Rational {
    let p = |q: i64| prod(n, 3, q);
    let (a0, a1, a2, a3, a4, a5, a6) = (&a[0], &a[1], &a[2], &a[3], &a[4], &a[5], &a[6]);
    r(2) * a1 * a0 * &c[0] * p(0)
        + (a1 + r(2) * a1 * a1 + r(4) * a2 * a0) * &c[1] * p(1)
        + (r(2) * a2 + r(6) * a1 * a2 + r(6) * a3 * a0) * &c[2] * p(2)
        + (r(4) * a2 * a2 + r(3) * a3 + r(8) * a1 * a3 + r(8) * a4 * a0) * &c[3] * p(3)
        + (r(10) * a2 * a3 + r(4) * a4 + r(10) * a1 * a4 + r(10) * a5 * a0) * &c[4] * p(4)
        + (r(6) * a3 * a3 + r(12) * a2 * a4 + r(5) * a5 + r(12) * a1 * a5 + r(12) * a6 * a0) * &c[5] * p(5)
        + (r(14) * a3 * a4 + r(14) * a2 * a5 + r(6) * a6 + r(14) * a1 * a6) * &c[6] * p(6)
        + (r(8) * a4 * a4 + r(16) * a3 * a5 + r(16) * a2 * a6) * &c[7] * p(7)
        + (r(18) * a4 * a5 + r(18) * a3 * a6) * &c[8] * p(8)
        + (r(10) * a5 * a5 + r(20) * a4 * a6) * &c[9] * p(9)
        + r(22) * a5 * a6 * &c[10] * p(10)
        + r(12) * a6 * a6 * &c[11] * p(11)
}

/// `int_0^inf (1 + t^2)^(-m/2) dt` from the reduction
/// `W_m = (m - 3)/(m - 2) W_{m-2}` with `W_2 = pi/2`, `W_3 = 1`, returned as
/// `(r, uses_pi)` with value `r * pi` or `r`.
pub fn wallis(m: i64) -> (Rational, bool) {
    assert!(m >= 2);
    let (mut k, mut v, pi) = if m % 2 == 0 { (2, rat(1, 2), true) } else { (3, r(1), false) };
    while k < m {
        k += 2;
        v *= rat(k - 3, k - 2);
    }
    (v, pi)
}

/// Seeded random rational with numerator in `[-num, num]` and denominator in
/// `[1, den]`.
pub fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Seeded degree-six coefficient vectors `a_0 .. a_6` with nonzero `a_6`.
pub fn random_profiles(seed: u64, count: usize) -> Vec<CoeffVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut a: Vec<Rational> = (0..7).map(|_| random_rational(&mut rng, 1000, 997)).collect();
            if a[6] == r(0) {
                a[6] = rat(1, 7);
            }
            CoeffVector::new(a).expect("nonzero leading coefficient")
        })
        .collect()
}

/// Compares the library's expansions and assemblies against the literal
/// transcriptions for one profile and one moment list `c_0 .. c_12`.
/// Returns a description of every mismatch.
pub fn equivalence_mismatches(n: i64, profile: &CoeffVector, c: &[Rational]) -> Vec<String> {
    use yamabe_cert::certify::{i_derivative, j_value, quadratic_in_a0};
    use yamabe_cert::poly::{alpha_d6_closed_form, beta_d6_closed_form, expand_alpha, expand_beta};

    let a = profile.coeffs();
    let mut out = Vec::new();
    let f = profile.to_poly();
    if expand_alpha(&f, n) != alpha_d6_closed_form(profile, n).unwrap() {
        out.push(format!("alpha differs at n={n}, a={profile:?}"));
    }
    if expand_beta(&f) != beta_d6_closed_form(profile).unwrap() {
        out.push(format!("beta differs at a={profile:?}"));
    }
    let quad = quadratic_in_a0(n, profile, c).unwrap();
    if (quad.a.clone(), quad.b.clone(), quad.c.clone()) != abc(n, a, c) {
        out.push(format!("(A, B, C) differs at n={n}, a={profile:?}"));
    }
    if i_derivative(n, a, c, 2, &r(1)).unwrap() != i_second(n, a, c) {
        out.push(format!("I''(1) differs at n={n}, a={profile:?}"));
    }
    if j_value(n, a, c, &r(1)).unwrap() != j_one(n, a, c) {
        out.push(format!("J(1) differs at n={n}, a={profile:?}"));
    }
    out
}

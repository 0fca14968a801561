//! Best rational approximation under a denominator cap.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{rational_from_f64, Rational};

/// Closest rational to `x` with denominator at most `max_den`, from the
/// continued fraction of the exact binary value of `x` (convergents and the
/// admissible semiconvergent).
pub fn rationalize(x: f64, max_den: u64) -> Result<Rational> {
    if max_den == 0 {
        return Err(Error::Domain("denominator cap must be positive".into()));
    }
    let exact = rational_from_f64(x)?;
    Ok(best_approximation(&exact, &BigInt::from(max_den)))
}

/// Closest rational to `target` with denominator at most `max_den`.
pub fn best_approximation(target: &Rational, max_den: &BigInt) -> Rational {
    if target.denom() <= max_den {
        return target.clone();
    }
    let negative = target.is_negative();
    let t = target.abs();
    // convergents h/k
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::zero());
    let mut rem = t.clone();
    loop {
        let a = rem.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            // largest semiconvergent step that fits under the cap
            let steps = (max_den - &k0) / &k1;
            let semi = Rational::new(&steps * &h1 + &h0, &steps * &k1 + &k0);
            let conv = Rational::new(h1.clone(), k1.clone());
            let best = if (&semi - &t).abs() < (&conv - &t).abs() { semi } else { conv };
            return if negative { -best } else { best };
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let frac = &rem - Rational::from_integer(a);
        if frac.is_zero() {
            let best = Rational::new(h1, k1);
            return if negative { -best } else { best };
        }
        rem = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exact_decimals() {
        assert_eq!(rationalize(0.184, 1_000_000).unwrap(), rat(23, 125));
        assert_eq!(rationalize(-2.65e-2, 1_000_000).unwrap(), rat(-53, 2000));
        assert_eq!(rationalize(7.37e-4, 1_000_000).unwrap(), rat(737, 1_000_000));
        assert_eq!(rationalize(1e-4, 1_000_000).unwrap(), rat(1, 10_000));
        assert_eq!(rationalize(-10.0, 1_000_000).unwrap(), rat(-10, 1));
        assert_eq!(rationalize(0.0, 1).unwrap(), rat(0, 1));
    }

    #[test]
    fn classic_approximations() {
        assert_eq!(rationalize(std::f64::consts::PI, 1000).unwrap(), rat(355, 113));
        assert_eq!(rationalize(std::f64::consts::PI, 100).unwrap(), rat(311, 99));
        assert_eq!(rationalize(std::f64::consts::PI, 7).unwrap(), rat(22, 7));
        let half = rationalize(0.5, 1).unwrap();
        assert!(half == rat(0, 1) || half == rat(1, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(rationalize(f64::NAN, 10).is_err());
        assert!(rationalize(1.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn best_under_cap(x in -1000.0f64..1000.0, cap in 1u64..5000) {
            let r = rationalize(x, cap).unwrap();
            prop_assert!(r.denom() <= &BigInt::from(cap));
            let t = rational_from_f64(x).unwrap();
            let err = (&r - &t).abs();
            // no fraction with a small denominator does better
            for den in 1..=cap.min(60) {
                let num = (&t * rat(den as i64, 1)).round();
                let cand = num / rat(den as i64, 1);
                prop_assert!(err <= (&cand - &t).abs());
            }
        }
    }
}

//! Exact scalar arithmetic.

mod enclose;
mod interval;
mod quadext;
mod rational;

pub use enclose::{bits_for_precision, enclose_arctan, enclose_pi, enclose_sqrt};
pub(crate) use enclose::{arctan_point, pi_bounds, sqrt_point};
pub use interval::RatInterval;
pub use quadext::QuadExt;
pub use rational::{
    ceil_dyadic, floor_dyadic, format_rational, parse_rational, parse_rational_strict,
    rational_from_f64, rational_to_f64, Rational,
};

use std::fmt;

/// Exact sign of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(r: &Rational) -> Self {
        use num_traits::Signed;
        if r.is_positive() {
            Sign::Positive
        } else if r.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn of_f64(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    /// Short symbol used in CSV tables.
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

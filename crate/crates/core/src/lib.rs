//! Exact-arithmetic certification of the sign conditions behind the
//! polynomial-profile bubble construction for the constant scalar curvature /
//! constant boundary mean curvature problem on the half-space.
//!
//! The crate is layered bottom-up:
//!
//! * [`exact`]: rationals, quadratic-field elements with exact sign
//!   determination, and rational-endpoint interval arithmetic with certified
//!   enclosures of pi, arctan and square roots.
//! * [`poly`]: the coefficient expansions `alpha_q` and `beta_q` of the
//!   profile polynomial `f`.
//! * [`moments`]: the moment integrals `c_q(T_c)`, exactly at `T_c = 0` and
//!   by certified enclosure for `T_c < 0`.
//! * [`certify`]: assembly of `I(1)`, `I'(1)`, `I''(1)`, `J(1)`, the
//!   `a_0`-quadratic and its largest root, exact and interval certificates,
//!   and the certified bound `c-bar`.
//! * [`search`]: derivative-free search for new tail coefficient vectors.
//! * [`bubble`]: floating-point diagnostics of the bubble family.

pub mod bubble;
pub mod certify;
pub mod error;
pub mod exact;
pub mod moments;
pub mod poly;
pub mod quadrature;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use exact::{QuadExt, RatInterval, Rational, Sign};
pub use poly::{CoeffVector, Poly};
pub use scalar::Scalar;

/// Version string embedded in certificates and reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value outside the real domain of an operation (negative radicand,
    /// empty interval, division by an interval containing zero, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The moment integral `c_q` diverges: requires `n - 6 - 2q > 0`.
    #[error("divergent moment: c_{q} diverges for n = {n} (need n - 6 - 2q > 0)")]
    DivergentMoment { n: i64, q: i64 },

    /// The profile degree violates `0 <= d < (n - 6) / 4`.
    #[error("degree constraint violated: d = {d} requires n > {}, got n = {n}", 4 * d + 6)]
    DegreeConstraint { n: i64, d: i64 },

    /// Only `T_c <= 0` is supported.
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    /// The `a_0`-quadratic has no real root.
    #[error("no real root: discriminant is not positive")]
    NoRealRoot,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),
}

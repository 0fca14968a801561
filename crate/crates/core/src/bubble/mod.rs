//! Floating-point diagnostics of the half-space bubble family.
//!
//! Points of the closed half-space are slices `x = (x_1, .., x_n)` with
//! `x_n >= 0`. With `D = eps^2 + (x_n - T_c eps)^2 + |x' - xi|^2` the bubble is
//! `u = (eps / D)^{(n-2)/2}` and `W` is the unit bubble (`xi = 0`, `eps = 1`).
//!
//! Integral identities are evaluated by dimension reduction: a function of
//! `(|x'|, x_n)` integrates over the half-space as
//! `omega_{n-2} * int int F(r, t) r^{n-2} dr dt`. Everything here is
//! diagnostic and floating point only.

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::quadrature::{geometric_breaks, integrate_signed_pair, integrate_with_breaks, QuadOptions};

/// Parameters of a bubble `u_(xi, eps)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BubbleParams {
    pub n: i64,
    pub tc: f64,
    pub xi: Vec<f64>,
    pub eps: f64,
    pub c1: f64,
}

impl BubbleParams {
    pub fn new(n: i64, tc: f64, xi: Vec<f64>, eps: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("dimension must be at least 3, got {n}")));
        }
        if !tc.is_finite() || tc > 0.0 {
            return Err(Error::UnsupportedDomain(format!("T_c must be finite and <= 0, got {tc}")));
        }
        if xi.len() as i64 != n - 1 {
            return Err(Error::Domain(format!("xi must have {} components, got {}", n - 1, xi.len())));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        Ok(Self { n, tc, xi, eps, c1: (n * (n - 2)) as f64 })
    }

    /// `xi = 0`, `eps = 1`.
    pub fn unit(n: i64, tc: f64) -> Result<Self> {
        Self::new(n, tc, vec![0.0; (n.max(1) - 1) as usize], 1.0)
    }

    pub fn with_c1(mut self, c1: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(Error::Domain(format!("c1 must be positive, got {c1}")));
        }
        self.c1 = c1;
        Ok(self)
    }

    /// `(n(n-2)/c1)^{(n-2)/4}`; equals 1 for the default `c1`.
    fn normalization(&self) -> f64 {
        let n = self.n as f64;
        (n * (n - 2.0) / self.c1).powf((n - 2.0) / 4.0)
    }

    /// `(|x' - xi|^2, x_n)` after validating the point.
    fn offsets(&self, x: &[f64]) -> Result<(f64, f64)> {
        if x.len() as i64 != self.n {
            return Err(Error::Domain(format!("point must have {} components, got {}", self.n, x.len())));
        }
        let xn = x[x.len() - 1];
        if !(xn >= 0.0) {
            return Err(Error::Domain(format!("x_n must be >= 0, got {xn}")));
        }
        let q2 = x[..x.len() - 1].iter().zip(&self.xi).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok((q2, xn))
    }

    fn denominator(&self, q2: f64, xn: f64) -> f64 {
        let s = xn - self.tc * self.eps;
        self.eps * self.eps + s * s + q2
    }
}

/// Pointwise value of `u_(xi, eps)`, scaled by `(n(n-2)/c1)^{(n-2)/4}` so that
/// the unit bubble equals `W` for every `c1`.
pub fn eval_bubble(p: &BubbleParams, x: &[f64]) -> Result<f64> {
    let (q2, xn) = p.offsets(x)?;
    let n = p.n as f64;
    Ok(p.normalization() * (p.eps / p.denominator(q2, xn)).powf((n - 2.0) / 2.0))
}

/// The unit bubble `W = (1 + |x - T_c e_n|^2)^{(2-n)/2}` with `c1 = n(n-2)`.
pub fn eval_w(n: i64, tc: f64, x: &[f64]) -> Result<f64> {
    eval_bubble(&BubbleParams::unit(n, tc)?, x)
}

/// The pair `(u_a, uhat_a)` of derivative bubbles, `a` in `1..=n`.
pub fn eval_deriv_bubbles(p: &BubbleParams, a: usize, x: &[f64]) -> Result<(f64, f64)> {
    let n = p.n as usize;
    if a == 0 || a > n {
        return Err(Error::Usage(format!("index a must be in 1..={n}, got {a}")));
    }
    let (q2, xn) = p.offsets(x)?;
    let d = p.denominator(q2, xn);
    let base = p.eps / d;
    let factor = if a < n {
        2.0 * p.eps * (x[a - 1] - p.xi[a - 1]) / d
    } else {
        ((1.0 + p.tc * p.tc) * p.eps * p.eps - xn * xn - q2) / d
    };
    let nf = p.n as f64;
    Ok((base.powf((nf + 2.0) / 2.0) * factor, base.powf(nf / 2.0) * factor))
}

/// `W` without the half-space check, for finite differences.
fn w_raw(n: f64, tc: f64, x: &[f64]) -> f64 {
    let last = x.len() - 1;
    let s = x[last] - tc;
    let r2: f64 = x[..last].iter().map(|v| v * v).sum();
    (1.0 + r2 + s * s).powf((2.0 - n) / 2.0)
}

/// Residuals of the boundary value problem for `W`:
/// interior `|Lap W + n(n-2) W^{(n+2)/(n-2)}|` at `x` by central differences,
/// and boundary `|d_n W - (n-2) T_c W^{n/(n-2)}|` at `(x', 0)` by the
/// second-order one-sided difference `(-3 W_0 + 4 W_1 - W_2) / 2h`.
pub fn pde_residual_w(n: i64, tc: f64, x: &[f64], h: f64) -> Result<(f64, f64)> {
    let p = BubbleParams::unit(n, tc)?;
    p.offsets(x)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let nf = n as f64;
    let w0 = w_raw(nf, tc, x);
    let mut y = x.to_vec();
    let mut lap = 0.0;
    for i in 0..x.len() {
        y[i] = x[i] + h;
        let plus = w_raw(nf, tc, &y);
        y[i] = x[i] - h;
        let minus = w_raw(nf, tc, &y);
        y[i] = x[i];
        lap += (plus - 2.0 * w0 + minus) / (h * h);
    }
    let interior = (lap + nf * (nf - 2.0) * w0.powf((nf + 2.0) / (nf - 2.0))).abs();

    let last = x.len() - 1;
    let mut b = x.to_vec();
    let at = |b: &mut Vec<f64>, t: f64| {
        b[last] = t;
        w_raw(nf, tc, b)
    };
    let (b0, b1, b2) = (at(&mut b, 0.0), at(&mut b, h), at(&mut b, 2.0 * h));
    let dn = (-3.0 * b0 + 4.0 * b1 - b2) / (2.0 * h);
    let boundary = (dn - (nf - 2.0) * tc * b0.powf(nf / (nf - 2.0))).abs();
    Ok((interior, boundary))
}

/// Ratio of interior residuals at steps `h` and `h/2`; close to 4 for a
/// second-order scheme.
pub fn richardson_ratio(n: i64, tc: f64, x: &[f64], h: f64) -> Result<f64> {
    let coarse = pde_residual_w(n, tc, x, h)?.0;
    let fine = pde_residual_w(n, tc, x, 0.5 * h)?.0;
    Ok(coarse / fine)
}

/// Area of the unit `k`-sphere, `2 pi^{(k+1)/2} / Gamma((k+1)/2)`, by the
/// recurrence `omega_k = 2 pi omega_{k-2} / (k-1)`.
pub fn omega(k: u32) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut w = if k % 2 == 0 { 2.0 } else { two_pi };
    let mut j = 2 + k % 2;
    while j <= k {
        w *= two_pi / (j - 1) as f64;
        j += 2;
    }
    w
}

/// Truncation radius for an integrand whose tail beyond `L`, relative to
/// the whole integral, is bounded by `decay^2 L^{-decay}` in units of the
/// peak location `1 + |T_c|`, with a safety factor of 10.
fn truncation_radius(decay: f64, tol: f64, center: f64) -> f64 {
    let scale = 1.0 + center.abs();
    scale * (10.0 * decay * decay / tol).powf(1.0 / decay).max(4.0)
}

fn breaks(l: f64) -> Vec<f64> {
    geometric_breaks(0.0, l, 0.125)
}

/// Signed integral and integral of `|f|` over `[0, l]`.
fn quad_1d<F: Fn(f64) -> f64>(f: F, l: f64, tol: f64) -> (f64, f64) {
    let r = integrate_with_breaks(&f, &breaks(l), QuadOptions { max_segments: 20_000, ..QuadOptions::l1_relative(tol) });
    (r.value, r.l1)
}

/// Integrals over `[0, l]` of a signed value and a bound of its modulus,
/// both to `tol` relative to the bound.
fn quad_signed<F: Fn(f64) -> (f64, f64)>(f: F, l: f64, tol: f64) -> (f64, f64) {
    let (signed, abs) = integrate_signed_pair(
        |x| {
            let (v, m) = f(x);
            [v, m]
        },
        &breaks(l),
        tol,
        20_000,
    );
    (signed.value, abs.value)
}

/// Signed and absolute integrals of `f(r, t)` over `[0, l]^2`.
fn quad_2d<F: Fn(f64, f64) -> f64>(f: F, l: f64, tol: f64) -> (f64, f64) {
    quad_signed(|t| quad_1d(|r| f(r, t), l, 0.1 * tol), l, tol)
}

/// Interior and boundary integrals of `2n int u u_a - T_c int u uhat_a` for
/// the unit bubble, with their absolute counterparts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityIntegrals {
    pub interior: f64,
    pub interior_abs: f64,
    pub boundary: f64,
    pub boundary_abs: f64,
}

impl OrthogonalityIntegrals {
    pub fn residual(&self, n: i64, tc: f64) -> f64 {
        let two_n = 2.0 * n as f64;
        let num = two_n * self.interior - tc * self.boundary;
        let den = two_n * self.interior_abs + tc.abs() * self.boundary_abs;
        if den > 0.0 {
            num.abs() / den
        } else {
            num.abs()
        }
    }
}

fn check_orthogonality_args(n: i64, tc: f64, a: usize, tol: f64) -> Result<()> {
    if n < 5 {
        return Err(Error::Precondition(format!("orthogonality integrals need n >= 5, got {n}")));
    }
    if !tc.is_finite() || tc > 0.0 {
        return Err(Error::UnsupportedDomain(format!("T_c must be finite and <= 0, got {tc}")));
    }
    if a == 0 || a as i64 > n {
        return Err(Error::Usage(format!("index a must be in 1..={n}, got {a}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Integrals for `a = n` by the `(r, t)` reduction. The common factor
/// `omega_{n-2}` is included.
fn normal_integrals(n: i64, tc: f64, tol: f64) -> OrthogonalityIntegrals {
    let nf = n as f64;
    let k = 1.0 + tc * tc;
    let w = omega((n - 2) as u32);
    // |F| r^{n-2} ~ rho^{-n-2} in the plane, boundary ~ r^{-n}
    let li = truncation_radius(nf, tol, tc);
    let lb = truncation_radius(nf - 1.0, tol, tc);
    let (interior, interior_abs) = quad_2d(
        |r, t| {
            let d = 1.0 + (t - tc) * (t - tc) + r * r;
            (k - t * t - r * r) * d.powf(-(nf + 1.0)) * r.powf(nf - 2.0)
        },
        li,
        tol,
    );
    let (boundary, boundary_abs) = quad_1d(|r| (k - r * r) * (k + r * r).powf(-nf) * r.powf(nf - 2.0), lb, tol);
    OrthogonalityIntegrals {
        interior: w * interior,
        interior_abs: w * interior_abs,
        boundary: w * boundary,
        boundary_abs: w * boundary_abs,
    }
}

/// Integrals with one distinguished tangential coordinate `s = x_j - shift`
/// and the remaining `n-2` tangential directions reduced radially. The
/// domain in `x_j` is `[shift - L, shift + L]`. For `a < n`, `j = a` and the
/// integrand is odd in `s`; mirrored nodes are paired.
fn split_integrals(n: i64, tc: f64, a: usize, tol: f64, shift: f64) -> OrthogonalityIntegrals {
    let nf = n as f64;
    let k = 1.0 + tc * tc;
    let normal = a as i64 == n;
    let w = omega((n - 3) as u32);
    let li = truncation_radius(nf - 1.0, tol, tc);
    let lb = truncation_radius(nf - 2.0, tol, tc);
    // integrands in the absolute coordinate x_j
    let interior_at = |xj: f64, rho: f64, t: f64| {
        let ds = xj - shift;
        let q2 = ds * ds + rho * rho;
        let d = 1.0 + (t - tc) * (t - tc) + q2;
        let factor = if normal { k - t * t - q2 } else { 2.0 * ds };
        factor * d.powf(-(nf + 1.0)) * rho.powf(nf - 3.0)
    };
    let boundary_at = |xj: f64, rho: f64| {
        let ds = xj - shift;
        let q2 = ds * ds + rho * rho;
        let factor = if normal { k - q2 } else { 2.0 * ds };
        factor * (k + q2).powf(-nf) * rho.powf(nf - 3.0)
    };
    // x_j over [shift - L, shift + L] as s in [0, L] with mirrored nodes
    let pair = |g: &dyn Fn(f64) -> (f64, f64), s: f64| {
        let (p, pa) = g(shift + s);
        let (m, ma) = g(shift - s);
        (p + m, pa + ma)
    };
    let inner_rho = |s: f64, t: f64| quad_1d(|rho| interior_at(s, rho, t), li, 0.01 * tol);
    let over_s = |t: f64| quad_signed(|s| pair(&|x| inner_rho(x, t), s), li, 0.1 * tol);
    let (interior, interior_abs) = quad_signed(over_s, li, tol);

    let bd_rho = |s: f64| quad_1d(|rho| boundary_at(s, rho), lb, 0.1 * tol);
    let (boundary, boundary_abs) = quad_signed(|s| pair(&bd_rho, s), lb, tol);
    OrthogonalityIntegrals {
        interior: w * interior,
        interior_abs: w * interior_abs,
        boundary: w * boundary,
        boundary_abs: w * boundary_abs,
    }
}

/// Normalized residual `|2n int u u_a - T_c int_bd u uhat_a|` over the sum of
/// the absolute integrals, for the unit bubble. `a = n` uses the planar
/// reduction; `a < n` keeps `x_a` explicit.
pub fn orthogonality_residual(n: i64, tc: f64, a: usize, tol: f64) -> Result<f64> {
    check_orthogonality_args(n, tc, a, tol)?;
    let ints = if a as i64 == n { normal_integrals(n, tc, tol) } else { split_integrals(n, tc, a, tol, 0.0) };
    Ok(ints.residual(n, tc))
}

/// As [`orthogonality_residual`] for the bubble centered at
/// `xi = shift * e_j` (`j = a` for `a < n`, else `j = 1`), with the
/// quadrature domain translated along.
pub fn orthogonality_residual_translated(n: i64, tc: f64, a: usize, tol: f64, shift: f64) -> Result<f64> {
    check_orthogonality_args(n, tc, a, tol)?;
    Ok(split_integrals(n, tc, a, tol, shift).residual(n, tc))
}

/// The three integrals entering the energy of `W`, each including
/// `omega_{n-2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyIntegrals {
    /// `int |grad W|^2`
    pub gradient: f64,
    /// `int W^{2n/(n-2)}`
    pub volume: f64,
    /// `int_bd W^{2(n-1)/(n-2)}`
    pub boundary: f64,
}

pub fn energy_integrals(n: i64, tc: f64, tol: f64) -> Result<EnergyIntegrals> {
    if n < 3 {
        return Err(Error::Domain(format!("dimension must be at least 3, got {n}")));
    }
    if !tc.is_finite() || tc > 0.0 {
        return Err(Error::UnsupportedDomain(format!("T_c must be finite and <= 0, got {tc}")));
    }
    let nf = n as f64;
    let w = omega((n - 2) as u32);
    // |grad W|^2 r^{n-2} ~ rho^{-n}; W^{2n/(n-2)} r^{n-2} ~ rho^{-n-2}
    let lg = truncation_radius(nf - 2.0, tol, tc);
    let lv = truncation_radius(nf, tol, tc);
    let lb = truncation_radius(nf - 1.0, tol, tc);
    let gradient = quad_2d(
        |r, t| {
            let s2 = r * r + (t - tc) * (t - tc);
            (nf - 2.0).powi(2) * s2 * (1.0 + s2).powf(-nf) * r.powf(nf - 2.0)
        },
        lg,
        tol,
    )
    .0;
    let volume = quad_2d(|r, t| (1.0 + r * r + (t - tc) * (t - tc)).powf(-nf) * r.powf(nf - 2.0), lv, tol).0;
    let boundary = quad_1d(|r| (1.0 + tc * tc + r * r).powf(1.0 - nf) * r.powf(nf - 2.0), lb, tol).0;
    Ok(EnergyIntegrals { gradient: w * gradient, volume: w * volume, boundary: w * boundary })
}

/// `S_c = 4/(n-2) int |grad W|^2 + 4 c1/(n-2) int W^{2n/(n-2)}` with
/// `c1 = n(n-2)`.
pub fn energy_sc(n: i64, tc: f64, tol: f64) -> Result<f64> {
    let e = energy_integrals(n, tc, tol)?;
    let nf = n as f64;
    Ok(4.0 / (nf - 2.0) * e.gradient + 4.0 * nf * e.volume)
}

/// The defining three-term energy
/// `4(n-1)/(n-2) int |grad W|^2 - 4(n-1)/n c1 int W^{2n/(n-2)} - 4c int_bd W^{2(n-1)/(n-2)}`
/// with `c = -(n-2) T_c`.
pub fn energy_three_term(n: i64, tc: f64, tol: f64) -> Result<f64> {
    let e = energy_integrals(n, tc, tol)?;
    let nf = n as f64;
    let c = -(nf - 2.0) * tc;
    Ok(4.0 * (nf - 1.0) / (nf - 2.0) * e.gradient - 4.0 * (nf - 1.0) * (nf - 2.0) * e.volume - 4.0 * c * e.boundary)
}

/// One line of a diagnostics report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub parameters: Json,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    /// Passes when `residual < tolerance`.
    pub fn below(check: &str, parameters: Json, residual: f64, tolerance: f64) -> Self {
        Self { check: check.into(), parameters, residual, tolerance, pass: residual < tolerance }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "check": self.check,
            "parameters": self.parameters,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Sample points for the boundary check: `x' = s e_1`, `x_n = 0`.
pub const BOUNDARY_SAMPLES: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.0];

/// The standard diagnostics battery at `(n, T_c)`: tangential and normal
/// orthogonality, `S_c > 0`, boundary residuals at five points with
/// `h = 1e-5`, and the Richardson ratio of the interior residual.
pub fn run_checks(n: i64, tc: f64) -> Result<Vec<CheckReport>> {
    let params = |extra: Json| {
        let mut p = json!({ "n": n, "tc": tc });
        if let (Some(m), Some(e)) = (p.as_object_mut(), extra.as_object()) {
            m.extend(e.clone());
        }
        p
    };
    let mut out = Vec::new();
    let tangential = orthogonality_residual(n, tc, 1, 1e-8)?;
    out.push(CheckReport::below("orthogonality_tangential", params(json!({ "a": 1 })), tangential, 1e-12));
    let normal = orthogonality_residual(n, tc, n as usize, 1e-9)?;
    out.push(CheckReport::below("orthogonality_normal", params(json!({ "a": n })), normal, 1e-6));
    let sc = energy_sc(n, tc, 1e-8)?;
    out.push(CheckReport { check: "energy_positive".into(), parameters: params(json!({ "value": sc })), residual: -sc, tolerance: 0.0, pass: sc > 0.0 });
    let h = 1e-5;
    for s in BOUNDARY_SAMPLES {
        let mut x = vec![0.0; n as usize];
        x[0] = s;
        let (_, boundary) = pde_residual_w(n, tc, &x, h)?;
        out.push(CheckReport::below("boundary_pde", params(json!({ "x1": s, "h": h })), boundary, 1e-6));
    }
    let mut x = vec![0.0; n as usize];
    x[0] = 0.3;
    x[n as usize - 1] = 0.4;
    let hr = 1e-3;
    let ratio = richardson_ratio(n, tc, &x, hr)?;
    out.push(CheckReport {
        check: "interior_richardson".into(),
        parameters: params(json!({ "x1": 0.3, "xn": 0.4, "h": hr, "ratio": ratio })),
        residual: (ratio - 4.0).abs(),
        tolerance: 0.5,
        pass: (3.5..=4.5).contains(&ratio),
    });
    Ok(out)
}

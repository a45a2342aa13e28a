//! Numerical checks of the contour-integral argument: the circle integrals
//! around `s = 0`, `log F(1 + s)` off the real axis, and the truncated
//! Perron integral for `sum_{n<=x} b_F(n)/n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::quad::{AdaptiveSimpson, GaussLegendre};
use super::special::{dirichlet_l_em, ein, exp_integral_e1, zeta_em, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::lfunc::SelbergInstance;
use crate::mertens::dirichlet_partial_sum;
use crate::scan::{sum_over_primes, ScanOptions};

/// Default constant `c` in the circle radius `c / sqrt(log x)`.
pub const DEFAULT_CIRCLE_CONSTANT: f64 = 0.4;

/// Largest `x` accepted by [`perron_truncated`].
pub const PERRON_MAX_X: f64 = 1e4;

/// Largest `w` accepted by [`circle_identity_report`].
pub const CIRCLE_MAX_W: f64 = 50.0;

/// Parameters of the truncated Perron integral and of the small circle
/// around `s = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub x: f64,
    /// Abscissa of the vertical segment, `1 / log x`.
    pub b: f64,
    /// Height of the segment, `exp(sqrt(log x))` by default.
    pub t_max: f64,
    /// Circle radius `c / sqrt(log x)`.
    pub radius: f64,
    pub quad_tol: f64,
    pub max_nodes: usize,
}

impl ContourSpec {
    pub fn new(x: f64) -> Result<Self> {
        Self::with_circle_constant(x, DEFAULT_CIRCLE_CONSTANT)
    }

    pub fn with_circle_constant(x: f64, c: f64) -> Result<Self> {
        if !(x >= 2.0 && x.is_finite()) {
            return Err(Error::Domain(format!("x must be at least 2, got {x}")));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Domain(format!("circle constant must lie in (0, 1), got {c}")));
        }
        let log_x = x.ln();
        let spec = Self {
            x,
            b: 1.0 / log_x,
            t_max: log_x.sqrt().exp(),
            radius: c / log_x.sqrt(),
            quad_tol: 1e-10,
            max_nodes: 1 << 20,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_t_max(mut self, t_max: f64) -> Result<Self> {
        self.t_max = t_max;
        self.validate()?;
        Ok(self)
    }

    pub fn with_quadrature(mut self, quad_tol: f64, max_nodes: usize) -> Result<Self> {
        self.quad_tol = quad_tol;
        self.max_nodes = max_nodes;
        self.validate()?;
        Ok(self)
    }

    /// `radius * log x`, the argument of the circle integrals.
    pub fn circle_argument(&self) -> f64 {
        self.radius * self.x.ln()
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Domain(what));
        if !(self.b > 0.0) {
            return bad(format!("b must be positive, got {}", self.b));
        }
        if !(self.t_max >= 1.0 && self.t_max.is_finite()) {
            return bad(format!("T must be at least 1, got {}", self.t_max));
        }
        if !(self.radius > 0.0 && self.radius < 0.5) {
            return bad(format!("circle radius must lie in (0, 1/2), got {}", self.radius));
        }
        if !(1e-14..=1e-6).contains(&self.quad_tol) {
            return bad(format!(
                "quadrature tolerance must lie in [1e-14, 1e-6], got {}",
                self.quad_tol
            ));
        }
        if self.max_nodes < 16 {
            return bad(format!("max_nodes too small: {}", self.max_nodes));
        }
        Ok(())
    }
}

/// One identity check: the numerically integrated side against the
/// closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_error: f64,
}

impl IdentityCheck {
    fn new(name: &'static str, lhs: Complex64, rhs: Complex64) -> Self {
        Self {
            name,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_error: (lhs - rhs).norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleIdentityReport {
    pub w: f64,
    pub checks: Vec<IdentityCheck>,
}

/// Order of the Gauss-Legendre rule used on the circle.
const CIRCLE_ORDER: usize = 64;

/// Evaluates the three circle identities at `w = radius * log x`:
///
/// * `circle_mean`: `int_{-pi}^{pi} exp(w e^{i theta}) d theta = 2 pi`;
/// * `circle_moment`: `int_{-pi}^{pi} theta exp(w e^{i theta}) d theta
///   = (2 pi / i) int_0^w (e^-u - 1)/u du`, right side as `(2 pi / i)(-Ein w)`;
/// * `ein_closed_form`: `int_0^w (e^-u - 1)/u du = -(gamma + log w + E1(w))`,
///   left side by adaptive quadrature.
///
/// The last identity carries a minus sign on `gamma + log w`; written with
/// a plus sign it is off by `2 (gamma + log w)`.
pub fn circle_identity_report(w: f64, quad_tol: f64, max_nodes: usize) -> Result<CircleIdentityReport> {
    if !(w > 0.0 && w <= CIRCLE_MAX_W) {
        return Err(Error::Domain(format!("w must lie in (0, {CIRCLE_MAX_W}], got {w}")));
    }
    let gl = GaussLegendre::new(CIRCLE_ORDER);
    let on_circle = |theta: f64| (Complex64::from_polar(w, theta)).exp();

    let mean = gl.integrate(on_circle, -PI, PI, quad_tol, max_nodes)?;
    let moment = gl.integrate(|t| on_circle(t) * t, -PI, PI, quad_tol, max_nodes)?;
    let two_pi_over_i = Complex64::new(0.0, -2.0 * PI);
    let moment_rhs = two_pi_over_i * (-ein(w));

    let integrand = |u: f64| if u == 0.0 { -1.0 } else { (-u).exp_m1() / u };
    let direct = AdaptiveSimpson::new(quad_tol, max_nodes).integrate_real(integrand, 0.0, w)?;
    let closed = -(EULER_GAMMA + w.ln() + exp_integral_e1(w));

    Ok(CircleIdentityReport {
        w,
        checks: vec![
            IdentityCheck::new("circle_mean", mean.value, Complex64::new(2.0 * PI, 0.0)),
            IdentityCheck::new("circle_moment", moment.value, moment_rhs),
            IdentityCheck::new("ein_closed_form", direct.value, Complex64::new(closed, 0.0)),
        ],
    })
}

/// Unwraps the imaginary part of successive logarithms so that consecutive
/// values never jump by more than `pi`.
#[derive(Debug, Clone, Default)]
pub struct BranchTracker {
    previous: Option<f64>,
}

impl BranchTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Takes a principal-branch logarithm and returns it shifted by the
    /// multiple of `2 pi i` closest to the previous value.
    pub fn track(&mut self, principal: Complex64) -> Complex64 {
        let mut z = principal;
        if let Some(prev) = self.previous {
            let turns = ((prev - z.im) / (2.0 * PI)).round();
            z.im += turns * 2.0 * PI;
        }
        self.previous = Some(z.im);
        z
    }
}

/// `log zeta(1 + s)` along `path`, continued from the principal branch at the
/// first point.
pub fn log_zeta_along_path(path: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut tracker = BranchTracker::new();
    path.iter()
        .map(|&s| Ok(tracker.track(zeta_em(s + 1.0)?.ln())))
        .collect()
}

/// `log F(1 + s)` truncated to `p <= prime_cutoff`, with the estimated size
/// of the omitted primes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogOnLine {
    pub re: f64,
    pub im: f64,
    pub tail_bound: f64,
}

impl LogOnLine {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `log F(1 + s) = sum_{p <= P} sum_j -log(1 - alpha_j(p) p^{-1-s})`.
///
/// The omitted primes contribute about `k P^{-Re s} / (Re s log P)`; the
/// call fails when that exceeds `tol`.
pub fn log_f_on_line(
    instance: &SelbergInstance,
    s: Complex64,
    prime_cutoff: u64,
    tol: f64,
    opts: &ScanOptions,
) -> Result<LogOnLine> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!("Re s must be positive, got {s}")));
    }
    if prime_cutoff < 2 {
        return Err(Error::Domain("prime cutoff must be at least 2".into()));
    }
    instance.check_coverage(prime_cutoff)?;
    let pc = prime_cutoff as f64;
    let tail_bound = instance.degree() as f64 * pc.powf(-s.re) / (s.re * pc.ln());
    if tail_bound > tol {
        return Err(Error::Accuracy {
            requested: tol,
            bound: tail_bound,
        });
    }
    let exponent = -(s + 1.0);
    let [re, im] = sum_over_primes(prime_cutoff, opts, |p| {
        let w = (exponent * (p as f64).ln()).exp();
        let v = instance.roots_at(p).neg_log_factor(w);
        [v.re, v.im]
    })?;
    Ok(LogOnLine { re, im, tail_bound })
}

/// Outcome of [`perron_truncated`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronReport {
    pub x: f64,
    pub b: f64,
    pub t_max: f64,
    pub integral_re: f64,
    pub integral_im: f64,
    pub partial_sum: f64,
    /// `|integral - partial_sum|`.
    pub gap: f64,
    pub nodes: usize,
}

/// Number of ordered points used to confirm that the principal logarithm is
/// continuous along the segment.
const BRANCH_CHECK_POINTS: usize = 4096;

/// `(1 / 2 pi i) int_{b - iT}^{b + iT} x^s / s log F(1 + s) ds` by adaptive
/// Simpson, compared with `sum_{n <= x} b_F(n) / n`.
///
/// Only zeta and real Dirichlet L-functions are supported: `log F(1 + s)`
/// comes from the Euler-Maclaurin evaluators, since the Euler product
/// converges far too slowly at `Re s = 1 / log x`.
pub fn perron_truncated(
    instance: &SelbergInstance,
    spec: &ContourSpec,
    opts: &ScanOptions,
) -> Result<PerronReport> {
    if spec.x > PERRON_MAX_X {
        return Err(Error::Domain(format!(
            "Perron check limited to x <= {PERRON_MAX_X}, got {}",
            spec.x
        )));
    }
    let d = instance.discriminant();
    let log_f = |s: Complex64| -> Result<Complex64> {
        if instance.is_zeta() {
            Ok(zeta_em(s)?.ln())
        } else if instance.is_dirichlet() {
            Ok(dirichlet_l_em(s, d.unwrap_or_default())?.ln())
        } else {
            Err(Error::Domain(format!(
                "no Euler-Maclaurin evaluator for {}",
                instance.name()
            )))
        }
    };
    log_f(Complex64::new(1.0 + spec.b, 0.0))?;

    // The principal branch is used inside the quadrature; confirm first that
    // it is continuous along the segment.
    let mut tracker = BranchTracker::new();
    for k in 0..=BRANCH_CHECK_POINTS {
        let t = -spec.t_max + 2.0 * spec.t_max * k as f64 / BRANCH_CHECK_POINTS as f64;
        let principal = log_f(Complex64::new(1.0 + spec.b, t))?;
        let tracked = tracker.track(principal);
        if (tracked - principal).norm() > 0.0 {
            return Err(Error::Domain(format!(
                "log {} leaves the principal branch at t = {t}",
                instance.name()
            )));
        }
    }

    let log_x = spec.x.ln();
    let integrand = |t: f64| {
        let s = Complex64::new(spec.b, t);
        let lf = log_f(s + 1.0).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        (s * log_x).exp() / s * lf
    };
    let q = AdaptiveSimpson::new(spec.quad_tol * 2.0 * PI, spec.max_nodes).integrate(
        integrand,
        -spec.t_max,
        spec.t_max,
    )?;
    // ds = i dt, so (1 / 2 pi i) int ... ds = (1 / 2 pi) int ... dt
    let integral = q.value / (2.0 * PI);
    if !(integral.re.is_finite() && integral.im.is_finite()) {
        return Err(Error::Domain("integrand evaluation failed".into()));
    }
    let partial_sum = dirichlet_partial_sum(instance, spec.x, opts)?;
    Ok(PerronReport {
        x: spec.x,
        b: spec.b,
        t_max: spec.t_max,
        integral_re: integral.re,
        integral_im: integral.im,
        partial_sum,
        gap: (integral - partial_sum).norm(),
        nodes: q.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_spec_defaults() {
        let spec = ContourSpec::new(1e3).unwrap();
        let lx = 1e3f64.ln();
        assert!((spec.b - 1.0 / lx).abs() < 1e-15);
        assert!((spec.t_max - lx.sqrt().exp()).abs() < 1e-12);
        assert!(spec.radius > 0.0 && spec.radius < 0.5);
        assert!(ContourSpec::new(1.5).is_err());
        assert!(ContourSpec::with_circle_constant(1e3, 1.0).is_err());
        assert!(spec.with_t_max(0.5).is_err());
        assert!(spec.with_quadrature(1e-3, 100).is_err());
        // radius must stay below 1/2 even at x = 2 with the default constant
        assert!(ContourSpec::new(2.0).is_ok());
    }

    #[test]
    fn circle_identities_at_one() {
        let r = circle_identity_report(1.0, 1e-13, 1 << 16).unwrap();
        assert!(r.checks[0].abs_error <= 1e-10);
        assert!(r.checks[1].abs_error <= 1e-9);
        assert!(r.checks[2].abs_error <= 1e-9);
        assert!((r.checks[2].rhs_re + 0.796_599_599_3).abs() < 1e-9);
    }

    #[test]
    fn ein_closed_form_small_w() {
        let w = 1e-6;
        let r = circle_identity_report(w, 1e-14, 1 << 16).unwrap();
        let lhs = r.checks[2].lhs_re;
        assert!((lhs + w).abs() < 1e-9);
        assert!((r.checks[2].rhs_re + w).abs() < 1e-9);
    }

    #[test]
    fn circle_identities_hold_across_w() {
        for w in [0.1, 1.0, 5.0] {
            let r = circle_identity_report(w, 1e-13, 1 << 16).unwrap();
            for c in &r.checks {
                assert!(c.abs_error < 1e-10, "w = {w}: {c:?}");
            }
        }
        assert!(circle_identity_report(0.0, 1e-12, 1 << 16).is_err());
        assert!(circle_identity_report(51.0, 1e-12, 1 << 16).is_err());
    }

    #[test]
    fn branch_tracker_unwraps() {
        let mut t = BranchTracker::new();
        assert_eq!(t.track(Complex64::new(0.0, 3.0)).im, 3.0);
        let z = t.track(Complex64::new(0.0, -3.0));
        assert!((z.im - (2.0 * PI - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn log_zeta_on_path_matches_principal_on_right_half_plane() {
        let path: Vec<Complex64> = (0..200).map(|k| Complex64::new(0.2, -20.0 + 0.2 * k as f64)).collect();
        let tracked = log_zeta_along_path(&path).unwrap();
        for (s, l) in path.iter().zip(&tracked) {
            let principal = zeta_em(*s + 1.0).unwrap().ln();
            assert!((principal - l).norm() < 1e-14);
        }
    }

    #[test]
    fn log_on_line_for_zeta_and_dirichlet() {
        let opts = ScanOptions::default();
        let zeta = SelbergInstance::zeta();
        let v = log_f_on_line(&zeta, Complex64::new(0.5, 0.0), 1_000_000, 2e-4, &opts).unwrap();
        let exact = zeta_em(Complex64::new(1.5, 0.0)).unwrap().re.ln();
        assert!((exact - 2.612_375_348_7f64.ln()).abs() < 1e-10);
        assert!(v.tail_bound < 1.5e-4);
        assert!((v.re - exact).abs() <= v.tail_bound, "{} vs {exact}", v.re);
        assert_eq!(v.im, 0.0);

        let chi = SelbergInstance::dirichlet(-4).unwrap();
        let v = log_f_on_line(&chi, Complex64::new(1.0, 0.0), 100_000, 1e-5, &opts).unwrap();
        assert!((v.re - 0.915_965_594_2f64.ln()).abs() < 1e-5);

        let err = log_f_on_line(&zeta, Complex64::new(0.1, 0.0), 1000, 1e-6, &opts).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn log_on_line_reflection() {
        let opts = ScanOptions::default();
        let r = SelbergInstance::rankin_delta(3000).unwrap();
        let s = Complex64::new(0.8, 3.0);
        let a = log_f_on_line(&r, s, 3000, 1.0, &opts).unwrap().value();
        let b = log_f_on_line(&r, s.conj(), 3000, 1.0, &opts).unwrap().value();
        assert!((a - b.conj()).norm() < 1e-13);
    }
}

//! Quadrature rules: adaptive Simpson for general integrands and composite
//! Gauss-Legendre for smooth periodic ones.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Result of a quadrature run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes: usize,
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like starting guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 1..=n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p2) / j as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule with a fixed order, refined by doubling the
/// panel count until two successive estimates agree within `tol`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral over `[a, b]` split into `panels` equal pieces.
    pub fn fixed<F: Fn(f64) -> Complex64>(&self, f: &F, a: f64, b: f64, panels: usize) -> Complex64 {
        let h = (b - a) / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..panels {
            let lo = a + h * k as f64;
            let mid = lo + 0.5 * h;
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc += f(mid + 0.5 * h * x) * *w;
            }
            total += acc * (0.5 * h);
        }
        total
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        tol: f64,
        max_nodes: usize,
    ) -> Result<Quadrature> {
        let mut panels = 1;
        let mut coarse = self.fixed(&f, a, b, panels);
        let mut used = self.order();
        loop {
            panels *= 2;
            let fine = self.fixed(&f, a, b, panels);
            used += panels * self.order();
            let err = (fine - coarse).norm();
            if err <= tol {
                return Ok(Quadrature {
                    value: fine,
                    error_estimate: err,
                    nodes: used,
                });
            }
            if used + 2 * panels * self.order() > max_nodes {
                return Err(Error::Quadrature {
                    nodes: used,
                    estimate: fine.re,
                    error: err,
                });
            }
            coarse = fine;
        }
    }
}

/// Adaptive Simpson with an absolute tolerance and a cap on evaluations.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson {
    pub tol: f64,
    pub max_nodes: usize,
}

struct SimpsonState<'a, F> {
    f: &'a F,
    evals: usize,
    max_nodes: usize,
    exhausted: bool,
    error: f64,
}

const MAX_DEPTH: u32 = 60;

impl AdaptiveSimpson {
    pub fn new(tol: f64, max_nodes: usize) -> Self {
        Self { tol, max_nodes }
    }

    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Result<Quadrature> {
        let mut st = SimpsonState {
            f: &f,
            evals: 3,
            max_nodes: self.max_nodes,
            exhausted: false,
            error: 0.0,
        };
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
        let value = refine(&mut st, a, b, fa, fm, fb, whole, self.tol, 0);
        if st.exhausted {
            return Err(Error::Quadrature {
                nodes: st.evals,
                estimate: value.re,
                error: st.error,
            });
        }
        Ok(Quadrature {
            value,
            error_estimate: st.error,
            nodes: st.evals,
        })
    }

    pub fn integrate_real<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Quadrature> {
        self.integrate(|x| Complex64::new(f(x), 0.0), a, b)
    }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> Complex64>(
    st: &mut SimpsonState<'_, F>,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    st.evals += 2;
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    let converged = delta.norm() <= 15.0 * tol;
    if converged || depth >= MAX_DEPTH || st.evals + 4 > st.max_nodes {
        if !converged {
            st.exhausted = true;
        }
        st.error += delta.norm() / 15.0;
        return left + right + delta / 15.0;
    }
    let l = refine(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
    let r = refine(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    l + r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // int x^126 over [-1, 1] = 2/127
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(126)).sum();
        assert!((m - 2.0 / 127.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(5);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((m - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn simpson_integrates_smooth_and_oscillatory() {
        let q = AdaptiveSimpson::new(1e-12, 1 << 20)
            .integrate_real(|x| x.sin(), 0.0, PI)
            .unwrap();
        assert!((q.value.re - 2.0).abs() < 1e-11);
        let q = AdaptiveSimpson::new(1e-12, 1 << 20)
            .integrate(|t| Complex64::new(0.0, 40.0 * t).exp(), -1.0, 1.0)
            .unwrap();
        assert!((q.value.re - 2.0 * (40f64).sin() / 40.0).abs() < 1e-11);
        assert!(q.value.im.abs() < 1e-15);
    }

    #[test]
    fn simpson_node_cap() {
        let err = AdaptiveSimpson::new(1e-14, 50)
            .integrate_real(|x| (50.0 * x).sin().abs(), 0.0, 3.0)
            .unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn invariant_under_doubling_node_cap() {
        let f = |x: f64| (x * x).cos() * (-x).exp();
        let a = AdaptiveSimpson::new(1e-11, 1 << 16).integrate_real(f, 0.0, 4.0).unwrap();
        let b = AdaptiveSimpson::new(1e-11, 1 << 17).integrate_real(f, 0.0, 4.0).unwrap();
        assert!((a.value - b.value).norm() < 1e-11);
        let gl = GaussLegendre::new(64);
        let g = |t: f64| Complex64::new(0.0, t).exp().exp();
        let a = gl.integrate(g, -PI, PI, 1e-13, 1 << 12).unwrap();
        let b = gl.integrate(g, -PI, PI, 1e-13, 1 << 13).unwrap();
        assert!((a.value - b.value).norm() < 1e-13);
    }

    #[test]
    fn gauss_legendre_reports_non_convergence() {
        let gl = GaussLegendre::new(8);
        let err = gl
            .integrate(|x| Complex64::new((200.0 * x).sin(), 0.0), 0.0, 10.0, 1e-14, 64)
            .unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}

//! Selberg-class instances given by their Euler products.
//!
//! An instance supplies, for every prime `p`, the inverse roots
//! `alpha_1(p), ..., alpha_k(p)` of its local factor
//! `prod_j (1 - alpha_j(p) p^-s)^-1`. Everything else is derived from them:
//! the coefficients of `log F` are the power sums
//! `b(p^r) = (alpha_1^r + ... + alpha_k^r) / r`, and the Dirichlet
//! coefficients `a(p^r)` are the complete homogeneous symmetric polynomials
//! of the roots. Ramified factors pad the root list with exact zeros so that
//! every prime carries exactly `k` roots.
//!
//! For Rankin-Selberg products `b(p^r)` is taken from the degree-4 roots,
//! which gives `(alpha_f^r + beta_f^r)(alpha_g^r + beta_g^r) / r`. The
//! additive expression `(alpha_f^r + beta_f^r + alpha_g^r + beta_g^r) / r`
//! sometimes quoted for this product does not match its Euler factor and is
//! not used.

mod coefficients;
mod tau;

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

pub use coefficients::{load_coefficients, parse_coefficients, CoefficientTable};
pub use tau::{pentagonal_terms, tau_table, TAU_TABLE_LIMIT};

use crate::analysis::{dirichlet_l1, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::primes::{is_fundamental_discriminant, kronecker_symbol};

/// Largest degree of any supported instance.
pub const MAX_DEGREE: usize = 4;

/// Largest `r` accepted by [`SelbergInstance::a_coeff`].
pub const MAX_A_COEFF_POWER: u32 = 64;

/// Inverse roots of the local Euler factor at one prime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerRoots {
    pub p: u64,
    len: usize,
    roots: [Complex64; MAX_DEGREE],
}

impl EulerRoots {
    fn new(p: u64, roots: &[Complex64]) -> Self {
        let mut buf = [Complex64::new(0.0, 0.0); MAX_DEGREE];
        buf[..roots.len()].copy_from_slice(roots);
        Self {
            p,
            len: roots.len(),
            roots: buf,
        }
    }

    fn real(p: u64, roots: &[f64]) -> Self {
        let mut buf = [Complex64::new(0.0, 0.0); MAX_DEGREE];
        for (b, &r) in buf.iter_mut().zip(roots) {
            *b = Complex64::new(r, 0.0);
        }
        Self {
            p,
            len: roots.len(),
            roots: buf,
        }
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots[..self.len]
    }

    pub fn degree(&self) -> usize {
        self.len
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Sums `f(alpha_j)` over the roots. Degree-4 root lists are stored as
    /// `[a, b, conj(b), conj(a)]` whenever the coefficients are real, so they
    /// are summed as `(v0 + v3) + (v1 + v2)`, which cancels imaginary parts
    /// exactly.
    #[inline]
    fn sum_over<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        let r = self.roots();
        match r.len() {
            4 => (f(r[0]) + f(r[3])) + (f(r[1]) + f(r[2])),
            _ => r.iter().fold(Complex64::new(0.0, 0.0), |acc, &z| acc + f(z)),
        }
    }

    /// `alpha_1^r + ... + alpha_k^r`.
    pub fn power_sum(&self, r: u32) -> Complex64 {
        self.sum_over(|z| z.powu(r))
    }

    /// `sum_j -log(1 - alpha_j w)`, the log of the local factor evaluated at
    /// `p^-s = w`.
    #[inline]
    pub fn neg_log_factor(&self, w: Complex64) -> Complex64 {
        self.sum_over(|a| neg_log1m(a * w))
    }

    /// `sum_j [-log(1 - alpha_j w) - alpha_j w]`, the part of the local log
    /// factor coming from `r >= 2`.
    #[inline]
    pub fn neg_log_factor_tail(&self, w: Complex64) -> Complex64 {
        self.sum_over(|a| neg_log1m_tail(a * w))
    }
}

/// `-log(1 - z)` for `|z| < 1`, accurate for small `z`.
#[inline]
pub fn neg_log1m(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(-(-z.re).ln_1p(), 0.0);
    }
    // |1 - z|^2 = 1 - 2 Re z + |z|^2
    let re = -0.5 * (z.norm_sqr() - 2.0 * z.re).ln_1p();
    let im = -(-z.im).atan2(1.0 - z.re);
    Complex64::new(re, im)
}

/// `-log(1 - z) - z = sum_{r>=2} z^r / r` for `|z| < 1`.
#[inline]
pub fn neg_log1m_tail(z: Complex64) -> Complex64 {
    if z.norm_sqr() > 0.0625 {
        return neg_log1m(z) - z;
    }
    let mut term = z * z;
    let mut acc = term / 2.0;
    let mut r = 2.0;
    loop {
        term *= z;
        r += 1.0;
        let t = term / r;
        acc += t;
        if t.norm() <= 1e-18 * acc.norm() || t.norm() == 0.0 {
            break;
        }
    }
    acc
}

/// Where the constant `c_{-m} = lim (s - 1)^m F(s)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "source")]
pub enum LeadingSource {
    Exact { value: f64 },
    AnalyticL1 { d: i64 },
    Config { value: f64 },
    EmpiricalFit,
}

#[derive(Debug, Clone)]
enum Family {
    Zeta,
    Dirichlet { d: i64, chi: Arc<[i8]> },
    DedekindQuadratic { d: i64, chi: Arc<[i8]> },
    RankinSelberg {
        f: Arc<CoefficientTable>,
        g: Arc<CoefficientTable>,
    },
}

/// A concrete Selberg-class function with an Euler product.
///
/// Analytic continuation, the functional equation and the zero-free region
/// are assumed, not checked.
#[derive(Debug, Clone)]
pub struct SelbergInstance {
    name: String,
    degree: usize,
    pole_order: i32,
    leading_source: LeadingSource,
    family: Family,
}

/// `c_{-m}` together with an uncertainty (zero for exact sources).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingCoefficient {
    pub value: f64,
    pub uncertainty: f64,
}

fn character_table(d: i64) -> Result<Arc<[i8]>> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
    }
    let q = d.unsigned_abs();
    Ok((0..q).map(|n| kronecker_symbol(d, n)).collect())
}

impl SelbergInstance {
    pub fn zeta() -> Self {
        Self {
            name: "zeta".into(),
            degree: 1,
            pole_order: 1,
            leading_source: LeadingSource::Exact { value: 1.0 },
            family: Family::Zeta,
        }
    }

    /// `L(s, chi_d)` for a fundamental discriminant `d`.
    pub fn dirichlet(d: i64) -> Result<Self> {
        Ok(Self {
            name: format!("dirichlet({d})"),
            degree: 1,
            pole_order: 0,
            leading_source: LeadingSource::AnalyticL1 { d },
            family: Family::Dirichlet {
                d,
                chi: character_table(d)?,
            },
        })
    }

    /// Dedekind zeta of `Q(sqrt d)`, factored as `zeta(s) L(s, chi_d)`.
    pub fn dedekind_quadratic(d: i64) -> Result<Self> {
        Ok(Self {
            name: format!("dedekind({d})"),
            degree: 2,
            pole_order: 1,
            leading_source: LeadingSource::AnalyticL1 { d },
            family: Family::DedekindQuadratic {
                d,
                chi: character_table(d)?,
            },
        })
    }

    /// `L(s, f x g)` for two normalized eigenforms of the same weight. The
    /// pole order is 1 when the tables are identical and 0 otherwise; the
    /// leading coefficient is `leading` when given, else fitted empirically.
    pub fn rankin_selberg(
        f: Arc<CoefficientTable>,
        g: Arc<CoefficientTable>,
        leading: Option<f64>,
    ) -> Result<Self> {
        if f.weight() != g.weight() {
            return Err(Error::Domain(format!(
                "weights differ: {} and {}",
                f.weight(),
                g.weight()
            )));
        }
        let same = Arc::ptr_eq(&f, &g) || f == g;
        let leading_source = match leading {
            Some(value) if value.is_finite() && value != 0.0 => LeadingSource::Config { value },
            Some(value) => {
                return Err(Error::Domain(format!(
                    "leading coefficient must be finite and nonzero, got {value}"
                )))
            }
            None => LeadingSource::EmpiricalFit,
        };
        Ok(Self {
            name: if same { "rankin(f x f)" } else { "rankin(f x g)" }.into(),
            degree: 4,
            pole_order: if same { 1 } else { 0 },
            leading_source,
            family: Family::RankinSelberg { f, g },
        })
    }

    /// `L(s, Delta x Delta)` with eigenvalues from `tau_table(limit)`.
    pub fn rankin_delta(limit: usize) -> Result<Self> {
        Self::rankin_delta_with_leading(limit, None)
    }

    /// As [`Self::rankin_delta`], with an optional configured leading
    /// coefficient in place of the empirical fit.
    pub fn rankin_delta_with_leading(limit: usize, leading: Option<f64>) -> Result<Self> {
        let table = Arc::new(CoefficientTable::from_tau(&tau_table(limit)?)?);
        let mut inst = Self::rankin_selberg(table.clone(), table, leading)?;
        inst.name = "rankin(delta x delta)".into();
        Ok(inst)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Order of the pole at `s = 1`; negative values are zeros.
    pub fn pole_order(&self) -> i32 {
        self.pole_order
    }

    pub fn leading_source(&self) -> LeadingSource {
        self.leading_source
    }

    /// Discriminant of the quadratic character, if any.
    pub fn discriminant(&self) -> Option<i64> {
        match &self.family {
            Family::Dirichlet { d, .. } | Family::DedekindQuadratic { d, .. } => Some(*d),
            _ => None,
        }
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self.family, Family::Zeta)
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self.family, Family::Dirichlet { .. })
    }

    /// Largest `x` such that every `p <= x` has local data; `None` if unbounded.
    pub fn coverage(&self) -> Option<u64> {
        match &self.family {
            Family::RankinSelberg { f, g } => Some(f.coverage().min(g.coverage())),
            _ => None,
        }
    }

    /// Fails with a coverage error unless every prime up to `x` has data.
    pub fn check_coverage(&self, x: u64) -> Result<()> {
        match self.coverage() {
            Some(max_x) if x > max_x => Err(Error::Coverage { p: x, max_x }),
            _ => Ok(()),
        }
    }

    /// Inverse roots at the prime `p`.
    pub fn local_roots(&self, p: u64) -> Result<EulerRoots> {
        self.check_coverage(p)?;
        Ok(self.roots_at(p))
    }

    /// As [`local_roots`](Self::local_roots), for callers that already
    /// checked coverage.
    #[inline]
    pub(crate) fn roots_at(&self, p: u64) -> EulerRoots {
        match &self.family {
            Family::Zeta => EulerRoots::real(p, &[1.0]),
            Family::Dirichlet { chi, .. } => {
                EulerRoots::real(p, &[chi[(p % chi.len() as u64) as usize] as f64])
            }
            Family::DedekindQuadratic { chi, .. } => {
                EulerRoots::real(p, &[1.0, chi[(p % chi.len() as u64) as usize] as f64])
            }
            Family::RankinSelberg { f, g } => {
                let (af, bf) = unit_roots(f.lambda(p).unwrap_or(0.0));
                let (ag, bg) = unit_roots(g.lambda(p).unwrap_or(0.0));
                EulerRoots::new(p, &[af * ag, af * bg, bf * ag, bf * bg])
            }
        }
    }

    /// `b_F(p^r) = (alpha_1(p)^r + ... + alpha_k(p)^r) / r`.
    pub fn b_coeff(&self, p: u64, r: u32) -> Result<Complex64> {
        if r == 0 {
            return Err(Error::Domain("b_F(p^r) needs r >= 1".into()));
        }
        Ok(self.local_roots(p)?.power_sum(r) / r as f64)
    }

    /// `a_F(p^r)`, the coefficient of `z^r` in `prod_j (1 - alpha_j z)^-1`,
    /// from the power sums by Newton's identities.
    pub fn a_coeff(&self, p: u64, r: u32) -> Result<Complex64> {
        if r > MAX_A_COEFF_POWER {
            return Err(Error::Domain(format!(
                "a_F(p^r) limited to r <= {MAX_A_COEFF_POWER}, got {r}"
            )));
        }
        let roots = self.local_roots(p)?;
        let sums: Vec<Complex64> = (1..=r).map(|i| roots.power_sum(i)).collect();
        let mut h = vec![Complex64::new(1.0, 0.0)];
        for n in 1..=r as usize {
            let acc = (1..=n).fold(Complex64::new(0.0, 0.0), |acc, i| acc + sums[i - 1] * h[n - i]);
            h.push(acc / n as f64);
        }
        Ok(h[r as usize])
    }

    /// `c_{-m}`. Empirical fits need `samples` of `(x, log F_x(1))`, at least
    /// four of them; the estimate is the value of
    /// `log F_x(1) - m gamma - m log log x` at the largest `x`, and its
    /// uncertainty is the spread of that quantity over the upper half of the
    /// samples.
    pub fn leading_coefficient(&self, samples: Option<&[(f64, f64)]>) -> Result<LeadingCoefficient> {
        match self.leading_source {
            LeadingSource::Exact { value } | LeadingSource::Config { value } => Ok(LeadingCoefficient {
                value,
                uncertainty: 0.0,
            }),
            LeadingSource::AnalyticL1 { d } => Ok(LeadingCoefficient {
                value: dirichlet_l1(d)?,
                uncertainty: 1e-10,
            }),
            LeadingSource::EmpiricalFit => {
                let samples = samples.unwrap_or(&[]);
                let mut pts: Vec<(f64, f64)> = samples
                    .iter()
                    .filter(|(x, v)| *x > 1.0 && v.is_finite())
                    .copied()
                    .collect();
                if pts.len() < 4 {
                    return Err(Error::InsufficientData {
                        needed: 4,
                        got: pts.len(),
                    });
                }
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let m = self.pole_order as f64;
                let logc: Vec<f64> = pts
                    .iter()
                    .map(|&(x, lf)| lf - m * EULER_GAMMA - m * x.ln().ln())
                    .collect();
                let last = *logc.last().unwrap_or(&0.0);
                let spread = logc[logc.len() / 2..]
                    .iter()
                    .map(|v| (v - last).abs())
                    .fold(0.0, f64::max);
                let value = last.exp();
                Ok(LeadingCoefficient {
                    value,
                    uncertainty: value * spread.exp_m1(),
                })
            }
        }
    }
}

/// Roots of `z^2 - lambda z + 1` for `|lambda| <= 2`, on the unit circle.
fn unit_roots(lambda: f64) -> (Complex64, Complex64) {
    let half = 0.5 * lambda;
    // 1 - lambda^2 / 4 factored to avoid cancellation near |lambda| = 2
    let im = ((1.0 - half) * (1.0 + half)).max(0.0).sqrt();
    let alpha = Complex64::new(half, im);
    (alpha, alpha.conj())
}

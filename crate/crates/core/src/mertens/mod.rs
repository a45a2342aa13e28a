//! Mertens-type sums over primes for a Selberg-class instance.
//!
//! For `F` with Euler roots `alpha_j(p)`, pole order `m` and leading
//! coefficient `c = c_{-m}`:
//!
//! * third theorem: `F_x(1) = prod_{p<=x} prod_j (1 - alpha_j(p)/p)^-1`
//!   against `c e^{gamma m} (log x)^m`;
//! * second theorem: `sum_{p<=x} b(p)/p` against `m log log x + M` with
//!   `M = log c + m gamma - sum_p sum_{r>=2} b(p^r)/p^r`;
//! * first theorem: `sum_{p<=x} b(p) log p / p` against `m log x + M1`;
//! * prime number theorem: `psi_F(x) = sum_{n<=x} b(n) log n` against `m x`.
//!
//! Every sum runs through [`crate::scan`], so results are bit-identical for
//! any thread count.

mod fit;

use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use fit::{fit_decay, DecayFit, FIT_ZERO_THRESHOLD};

use crate::analysis::EULER_GAMMA;
use crate::error::{Error, Result};
use crate::lfunc::{LeadingCoefficient, SelbergInstance};
use crate::scan::{scan_chunks, sum_over_primes, ScanOptions};
use crate::sum::Neumaier;

/// Default truncation for `M`, and default range for both `M1` estimators.
pub const DEFAULT_CONSTANT_BOUND: u64 = 100_000_000;

/// Smallest truncation bound accepted for `M`.
pub const MIN_M_BOUND: u64 = 1_000;

/// Smallest integration bound accepted for `M1`.
pub const MIN_M1_BOUND: u64 = 10_000;

/// Estimator gap above which the `M1` result carries a warning.
pub const M1_GAP_WARNING: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Mertens1,
    Mertens2,
    Mertens3,
    Pnt,
}

impl ReportKind {
    pub const ALL: [ReportKind; 4] = [
        ReportKind::Mertens1,
        ReportKind::Mertens2,
        ReportKind::Mertens3,
        ReportKind::Pnt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::Mertens1 => "mertens1",
            ReportKind::Mertens2 => "mertens2",
            ReportKind::Mertens3 => "mertens3",
            ReportKind::Pnt => "pnt",
        }
    }
}

impl std::str::FromStr for ReportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReportKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown kind `{s}`; expected one of mertens1, mertens2, mertens3, pnt"
                ))
            })
    }
}

impl std::fmt::Display for ReportKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluation of a sum against its main term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MertensReport {
    pub instance: String,
    pub x: f64,
    pub kind: ReportKind,
    /// The sum, or the product `F_x(1)` for the third theorem.
    pub value: f64,
    pub main_term: f64,
    /// `M1`, `M` or `log c_{-m}`; zero for the prime number theorem.
    pub constant_used: f64,
    /// `value - main_term`.
    pub residual: f64,
    /// `residual / main_term`, or `residual / x` for the prime number
    /// theorem; the plain residual when the main term vanishes.
    pub rel_residual: f64,
    /// Magnitude of the imaginary part of the underlying accumulation.
    pub imag_residue: f64,
    pub elapsed_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_part: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_power_part: Option<f64>,
}

fn prime_bound(x: f64) -> Result<u64> {
    if !(x >= 2.0 && x.is_finite()) || x >= u64::MAX as f64 {
        return Err(Error::Domain(format!("x must be finite and at least 2, got {x}")));
    }
    Ok(x.floor() as u64)
}

fn checked_bound(instance: &SelbergInstance, x: f64) -> Result<u64> {
    let n = prime_bound(x)?;
    instance.check_coverage(n)?;
    Ok(n)
}

/// `log F_x(1)` split into its real part and the size of its imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogEuler {
    pub value: f64,
    pub imag_residue: f64,
}

/// `log F_x(1) = sum_{p<=x} sum_j -log(1 - alpha_j(p)/p)`, each local factor
/// in closed form.
pub fn log_partial_euler(instance: &SelbergInstance, x: f64, opts: &ScanOptions) -> Result<LogEuler> {
    let n = checked_bound(instance, x)?;
    let [re, im] = sum_over_primes(n, opts, |p| {
        let v = instance
            .roots_at(p)
            .neg_log_factor(Complex64::new(1.0 / p as f64, 0.0));
        [v.re, v.im]
    })?;
    Ok(LogEuler {
        value: re,
        imag_residue: im.abs(),
    })
}

/// `sum_{p^r <= x} b_F(p^r) / p^r`.
pub fn dirichlet_partial_sum(instance: &SelbergInstance, x: f64, opts: &ScanOptions) -> Result<f64> {
    let n = checked_bound(instance, x)?;
    let [re] = sum_over_primes(n, opts, |p| {
        let roots = instance.roots_at(p);
        let mut acc = 0.0;
        let mut pr = p;
        let mut r = 1u32;
        loop {
            acc += roots.power_sum(r).re / (r as f64 * pr as f64);
            match pr.checked_mul(p) {
                Some(next) if next <= n => pr = next,
                _ => break,
            }
            r += 1;
        }
        [acc]
    })?;
    Ok(re)
}

/// `sum_{p<=x} b_F(p) / p`, real part and imaginary magnitude.
pub fn mertens2_sum(instance: &SelbergInstance, x: f64, opts: &ScanOptions) -> Result<(f64, f64)> {
    let n = checked_bound(instance, x)?;
    let [re, im] = sum_over_primes(n, opts, |p| {
        let b = instance.roots_at(p).power_sum(1) / p as f64;
        [b.re, b.im]
    })?;
    Ok((re, im.abs()))
}

/// `sum_{p<=x} b_F(p) log p / p`, real part and imaginary magnitude.
pub fn mertens1_sum(instance: &SelbergInstance, x: f64, opts: &ScanOptions) -> Result<(f64, f64)> {
    let n = checked_bound(instance, x)?;
    let [re, im] = sum_over_primes(n, opts, |p| {
        let pf = p as f64;
        let b = instance.roots_at(p).power_sum(1) * (pf.ln() / pf);
        [b.re, b.im]
    })?;
    Ok((re, im.abs()))
}

/// `psi_F(x)` split into primes and higher prime powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiSum {
    /// `sum_{p<=x} b_F(p) log p`.
    pub prime_part: f64,
    /// `sum_{p^r<=x, r>=2} b_F(p^r) log p^r`.
    pub prime_power_part: f64,
    pub imag_residue: f64,
}

impl PsiSum {
    pub fn total(&self) -> f64 {
        self.prime_part + self.prime_power_part
    }
}

pub fn psi_sum(instance: &SelbergInstance, x: f64, opts: &ScanOptions) -> Result<PsiSum> {
    let n = checked_bound(instance, x)?;
    let [prime, power, im] = sum_over_primes(n, opts, |p| {
        let roots = instance.roots_at(p);
        let lp = (p as f64).ln();
        let first = roots.power_sum(1) * lp;
        // b(p^r) log p^r = (sum_j alpha_j^r) log p
        let mut higher = Complex64::new(0.0, 0.0);
        let mut pr = p;
        let mut r = 1u32;
        while let Some(next) = pr.checked_mul(p).filter(|&v| v <= n) {
            pr = next;
            r += 1;
            higher += roots.power_sum(r) * lp;
        }
        [first.re, higher.re, first.im + higher.im]
    })?;
    Ok(PsiSum {
        prime_part: prime,
        prime_power_part: power,
        imag_residue: im.abs(),
    })
}

/// The generalized Mertens constant from its defining series, truncated at
/// `p <= p_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MConstant {
    pub value: f64,
    /// Bound `2k / p_max` on the omitted primes.
    pub tail_bound: f64,
    pub p_max: u64,
    pub log_leading: f64,
}

/// `M = log c + m gamma - sum_{p<=P} sum_{r>=2} b(p^r)/p^r`.
pub fn mertens_constant_m(
    instance: &SelbergInstance,
    p_max: u64,
    leading: &LeadingCoefficient,
    opts: &ScanOptions,
) -> Result<MConstant> {
    if p_max < MIN_M_BOUND {
        return Err(Error::Domain(format!(
            "truncation bound must be at least {MIN_M_BOUND}, got {p_max}"
        )));
    }
    instance.check_coverage(p_max)?;
    let [higher] = sum_over_primes(p_max, opts, |p| {
        let v = instance
            .roots_at(p)
            .neg_log_factor_tail(Complex64::new(1.0 / p as f64, 0.0));
        [v.re]
    })?;
    let m = instance.pole_order() as f64;
    let log_leading = leading.value.abs().ln();
    Ok(MConstant {
        value: log_leading + m * EULER_GAMMA - higher,
        tail_bound: 2.0 * instance.degree() as f64 / p_max as f64,
        p_max,
        log_leading,
    })
}

/// The limit estimator `sum_{p<=x} b(p)/p - m log log x` of `M`.
pub fn mertens_constant_m_limit(instance: &SelbergInstance, x: f64, opts: &ScanOptions) -> Result<f64> {
    let (s, _) = mertens2_sum(instance, x, opts)?;
    Ok(s - instance.pole_order() as f64 * x.ln().ln())
}

/// Both estimators of the first-theorem constant `M1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M1Constant {
    /// `-int_2^U Delta_2(u)/u du + M log 2 + m log 2 (log log 2 - 1)` with
    /// the integral evaluated exactly between consecutive primes.
    pub integral_estimate: f64,
    /// `sum_{p <= x_max} b(p) log p / p - m log x_max`.
    pub limit_estimate: f64,
    pub gap: f64,
    pub u_max: u64,
    pub x_max: u64,
    /// `int_U^inf |Delta_2(u)|/u du` under the fitted envelope, when the
    /// fitted decay rate is positive. Not included in the estimate.
    pub tail_uncertainty: Option<f64>,
    pub envelope: Option<DecayFit>,
    pub warning: Option<String>,
}

struct IntegralChunk {
    s: Neumaier,
    weighted: Neumaier,
    first_moment: Neumaier,
    log_span: f64,
    samples: Vec<(usize, f64)>,
}

#[inline]
fn log_ratio(hi: f64, lo: f64) -> f64 {
    ((hi - lo) / lo).ln_1p()
}

/// `log u (log log u - 1)`, antiderivative of `log log u / u`.
fn loglog_antiderivative(u: f64) -> f64 {
    let l = u.ln();
    l * (l.ln() - 1.0)
}

/// Sample points for the `Delta_2` envelope: half decades from 10^3 to `u`.
fn envelope_points(u: u64) -> Vec<u64> {
    let mut pts: Vec<u64> = (6..)
        .map(|k| 10f64.powf(k as f64 / 2.0).round() as u64)
        .take_while(|&v| v < u)
        .collect();
    pts.push(u);
    pts
}

/// `M1` from `M`, by both estimators.
pub fn mertens_constant_m1(
    instance: &SelbergInstance,
    u_max: u64,
    x_max: u64,
    m_const: f64,
    opts: &ScanOptions,
) -> Result<M1Constant> {
    if u_max < MIN_M1_BOUND || x_max < MIN_M1_BOUND {
        return Err(Error::Domain(format!(
            "integration and limit bounds must be at least {MIN_M1_BOUND}"
        )));
    }
    instance.check_coverage(u_max.max(x_max))?;
    let m = instance.pole_order() as f64;
    let samples = envelope_points(u_max);

    let chunks = scan_chunks(u_max, opts, |a, b, primes| {
        let u_start = a.max(2) as f64;
        let u_end = if b == u_max { u_max as f64 } else { (b + 1) as f64 };
        let mut s = Neumaier::new();
        let mut weighted = Neumaier::new();
        let mut first_moment = Neumaier::new();
        let mut prev = u_start;
        let mut out = Vec::new();
        let mut pending = samples
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= a && v <= b)
            .peekable();
        for &p in primes {
            while let Some((i, _)) = pending.next_if(|(_, &v)| v < p) {
                out.push((i, s.value()));
            }
            let pf = p as f64;
            if pf > prev {
                weighted.add(s.value() * log_ratio(pf, prev));
            }
            let b1 = instance.roots_at(p).power_sum(1).re / pf;
            s.add(b1);
            first_moment.add(b1 * pf.ln());
            prev = pf;
        }
        out.extend(pending.map(|(i, _)| (i, s.value())));
        weighted.add(s.value() * log_ratio(u_end, prev));
        IntegralChunk {
            s,
            weighted,
            first_moment,
            log_span: log_ratio(u_end, u_start),
            samples: out,
        }
    })?;

    let mut prefix = Neumaier::new();
    let mut integral_s = Neumaier::new();
    let mut moment = Neumaier::new();
    let mut at_samples = vec![0.0; samples.len()];
    for c in &chunks {
        let base = prefix.value();
        integral_s.add(base * c.log_span);
        integral_s.absorb(&c.weighted);
        for &(i, partial) in &c.samples {
            at_samples[i] = base + partial;
        }
        prefix.absorb(&c.s);
        moment.absorb(&c.first_moment);
    }

    let u = u_max as f64;
    let ln2 = 2f64.ln();
    let integral = integral_s.value()
        - m_const * log_ratio(u, 2.0)
        - m * (loglog_antiderivative(u) - loglog_antiderivative(2.0));
    let integral_estimate = -integral + m_const * ln2 + m * loglog_antiderivative(2.0);

    let limit_estimate = if x_max == u_max {
        moment.value() - m * u.ln()
    } else {
        mertens1_sum(instance, x_max as f64, opts)?.0 - m * (x_max as f64).ln()
    };

    let residuals: Vec<(f64, f64)> = samples
        .iter()
        .zip(&at_samples)
        .map(|(&v, &s)| {
            let vf = v as f64;
            (vf, s - m * vf.ln().ln() - m_const)
        })
        .collect();
    let envelope = fit_decay(&residuals).ok();
    let tail_uncertainty = envelope.as_ref().and_then(|f| f.tail_integral(u));

    let gap = (integral_estimate - limit_estimate).abs();
    let warning = (gap > M1_GAP_WARNING).then(|| {
        format!("M1 estimators disagree by {gap:.3e} (> {M1_GAP_WARNING:e})")
    });
    Ok(M1Constant {
        integral_estimate,
        limit_estimate,
        gap,
        u_max,
        x_max,
        tail_uncertainty,
        envelope,
        warning,
    })
}

/// Truncation parameters for the constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MertensConfig {
    /// Truncation bound for `M`.
    pub p_max: u64,
    /// Integration bound for the `M1` integral estimator.
    pub u_max: u64,
    /// Bound for the `M1` limit estimator and the empirical leading
    /// coefficient.
    pub x_max: u64,
    pub scan: ScanOptions,
}

impl Default for MertensConfig {
    fn default() -> Self {
        Self {
            p_max: DEFAULT_CONSTANT_BOUND,
            u_max: DEFAULT_CONSTANT_BOUND,
            x_max: DEFAULT_CONSTANT_BOUND,
            scan: ScanOptions::default(),
        }
    }
}

/// Report generator for one instance; constants are computed on first use
/// and cached. Bounds larger than the instance's coverage are clamped to it.
pub struct Mertens<'a> {
    instance: &'a SelbergInstance,
    config: MertensConfig,
    leading: OnceLock<Result<LeadingCoefficient>>,
    m_const: OnceLock<Result<MConstant>>,
    m1_const: OnceLock<Result<M1Constant>>,
}

/// Number of sample points for the empirical leading coefficient.
const EMPIRICAL_SAMPLES: usize = 9;

impl<'a> Mertens<'a> {
    pub fn new(instance: &'a SelbergInstance, config: MertensConfig) -> Self {
        Self {
            instance,
            config,
            leading: OnceLock::new(),
            m_const: OnceLock::new(),
            m1_const: OnceLock::new(),
        }
    }

    pub fn instance(&self) -> &SelbergInstance {
        self.instance
    }

    pub fn config(&self) -> &MertensConfig {
        &self.config
    }

    fn clamp(&self, bound: u64) -> u64 {
        self.instance.coverage().map_or(bound, |c| bound.min(c))
    }

    /// `(x, log F_x(1))` on a log-spaced grid over the top two decades below
    /// the constant bound.
    pub fn leading_samples(&self) -> Result<Vec<(f64, f64)>> {
        let hi = self.clamp(self.config.x_max) as f64;
        let lo = (hi / 100.0).max(100.0);
        if hi < lo * 1.5 {
            return Err(Error::InsufficientData { needed: 4, got: 0 });
        }
        let step = (hi / lo).ln() / (EMPIRICAL_SAMPLES - 1) as f64;
        (0..EMPIRICAL_SAMPLES)
            .map(|i| {
                let x = if i + 1 == EMPIRICAL_SAMPLES {
                    hi
                } else {
                    (lo.ln() + step * i as f64).exp().floor()
                };
                Ok((x, log_partial_euler(self.instance, x, &self.config.scan)?.value))
            })
            .collect()
    }

    pub fn leading(&self) -> Result<LeadingCoefficient> {
        self.leading
            .get_or_init(|| {
                let samples = match self.instance.leading_source() {
                    crate::lfunc::LeadingSource::EmpiricalFit => Some(self.leading_samples()?),
                    _ => None,
                };
                self.instance.leading_coefficient(samples.as_deref())
            })
            .clone()
    }

    pub fn m_constant(&self) -> Result<MConstant> {
        self.m_const
            .get_or_init(|| {
                let leading = self.leading()?;
                mertens_constant_m(
                    self.instance,
                    self.clamp(self.config.p_max),
                    &leading,
                    &self.config.scan,
                )
            })
            .clone()
    }

    pub fn m1_constant(&self) -> Result<M1Constant> {
        self.m1_const
            .get_or_init(|| {
                let m = self.m_constant()?.value;
                mertens_constant_m1(
                    self.instance,
                    self.clamp(self.config.u_max),
                    self.clamp(self.config.x_max),
                    m,
                    &self.config.scan,
                )
            })
            .clone()
    }

    fn finish(
        &self,
        kind: ReportKind,
        x: f64,
        value: f64,
        main_term: f64,
        constant_used: f64,
        imag_residue: f64,
        start: Instant,
    ) -> MertensReport {
        let residual = value - main_term;
        let scale = match kind {
            ReportKind::Pnt => x,
            _ if main_term != 0.0 => main_term,
            _ => 1.0,
        };
        MertensReport {
            instance: self.instance.name().to_string(),
            x,
            kind,
            value,
            main_term,
            constant_used,
            residual,
            rel_residual: residual / scale,
            imag_residue,
            elapsed_seconds: start.elapsed().as_secs_f64(),
            prime_part: None,
            prime_power_part: None,
        }
    }

    /// `F_x(1)` against `c e^{gamma m} (log x)^m`.
    pub fn mertens3_report(&self, x: f64) -> Result<MertensReport> {
        let c = self.leading()?;
        let start = Instant::now();
        let log = log_partial_euler(self.instance, x, &self.config.scan)?;
        let m = self.instance.pole_order();
        let main = c.value * (EULER_GAMMA * m as f64).exp() * x.ln().powi(m);
        Ok(self.finish(
            ReportKind::Mertens3,
            x,
            log.value.exp(),
            main,
            c.value.abs().ln(),
            log.imag_residue,
            start,
        ))
    }

    /// `sum_{p<=x} b(p)/p` against `m log log x + M`.
    pub fn mertens2_report(&self, x: f64) -> Result<MertensReport> {
        let mc = self.m_constant()?.value;
        let start = Instant::now();
        let (value, im) = mertens2_sum(self.instance, x, &self.config.scan)?;
        let main = self.instance.pole_order() as f64 * x.ln().ln() + mc;
        Ok(self.finish(ReportKind::Mertens2, x, value, main, mc, im, start))
    }

    /// `sum_{p<=x} b(p) log p / p` against `m log x + M1`.
    pub fn mertens1_report(&self, x: f64) -> Result<MertensReport> {
        let m1 = self.m1_constant()?.integral_estimate;
        let start = Instant::now();
        let (value, im) = mertens1_sum(self.instance, x, &self.config.scan)?;
        let main = self.instance.pole_order() as f64 * x.ln() + m1;
        Ok(self.finish(ReportKind::Mertens1, x, value, main, m1, im, start))
    }

    /// `psi_F(x)` against `m x`.
    pub fn pnt_report(&self, x: f64) -> Result<MertensReport> {
        let start = Instant::now();
        let psi = psi_sum(self.instance, x, &self.config.scan)?;
        let main = self.instance.pole_order() as f64 * x;
        let mut r = self.finish(ReportKind::Pnt, x, psi.total(), main, 0.0, psi.imag_residue, start);
        r.prime_part = Some(psi.prime_part);
        r.prime_power_part = Some(psi.prime_power_part);
        Ok(r)
    }

    pub fn report(&self, kind: ReportKind, x: f64) -> Result<MertensReport> {
        match kind {
            ReportKind::Mertens1 => self.mertens1_report(x),
            ReportKind::Mertens2 => self.mertens2_report(x),
            ReportKind::Mertens3 => self.mertens3_report(x),
            ReportKind::Pnt => self.pnt_report(x),
        }
    }
}

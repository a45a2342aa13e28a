use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residuals below this magnitude are dropped before fitting.
pub const FIT_ZERO_THRESHOLD: f64 = 1e-300;

/// Least-squares fit of `log |residual| = intercept - C sqrt(log x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub points: Vec<(f64, f64)>,
    pub c_estimate: f64,
    pub intercept: f64,
    pub rms_misfit: f64,
    pub dropped: usize,
}

impl DecayFit {
    /// `exp(intercept - C sqrt(log x))`.
    pub fn envelope(&self, x: f64) -> f64 {
        (self.intercept - self.c_estimate * x.ln().sqrt()).exp()
    }

    /// `int_u^inf envelope(t) / t dt`, finite only for `C > 0`.
    pub fn tail_integral(&self, u: f64) -> Option<f64> {
        let c = self.c_estimate;
        if !(c > 0.0) {
            return None;
        }
        // t = e^{v^2}: int_{w0}^inf 2 v e^{a - C v} dv
        let w0 = u.ln().sqrt();
        let v = 2.0 * (self.intercept - c * w0).exp() * (w0 / c + 1.0 / (c * c));
        v.is_finite().then_some(v)
    }
}

/// Fits the decay constant of a residual sequence.
pub fn fit_decay(points: &[(f64, f64)]) -> Result<DecayFit> {
    let mut used = Vec::with_capacity(points.len());
    let mut dropped = 0;
    for &(x, r) in points {
        if !(x > 1.0 && x.is_finite()) {
            return Err(Error::Domain(format!("fit points need finite x > 1, got {x}")));
        }
        if r.is_nan() || r.abs() < FIT_ZERO_THRESHOLD {
            dropped += 1;
            continue;
        }
        used.push((x, r));
    }
    if used.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: used.len(),
        });
    }
    let mut xs: Vec<f64> = used.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("fit points must have distinct x".into()));
    }

    let n = used.len() as f64;
    let u: Vec<f64> = used.iter().map(|p| p.0.ln().sqrt()).collect();
    let v: Vec<f64> = used.iter().map(|p| p.1.abs().ln()).collect();
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let suu: f64 = u.iter().map(|a| (a - mu) * (a - mu)).sum();
    let suv: f64 = u.iter().zip(&v).map(|(a, b)| (a - mu) * (b - mv)).sum();
    let slope = suv / suu;
    let intercept = mv - slope * mu;
    let ss: f64 = u
        .iter()
        .zip(&v)
        .map(|(a, b)| {
            let e = b - (intercept + slope * a);
            e * e
        })
        .sum();
    let c_estimate = -slope;
    if !c_estimate.is_finite() {
        return Err(Error::Domain("degenerate fit".into()));
    }
    Ok(DecayFit {
        points: used,
        c_estimate,
        intercept,
        rms_misfit: (ss / n).sqrt(),
        dropped,
    })
}

//! Special functions: Riemann and Hurwitz zeta by Euler-Maclaurin summation,
//! digamma, `L(1, chi_d)`, and the exponential integrals `E1` and `Ein`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::{is_fundamental_discriminant, kronecker_symbol};
use crate::sum::Neumaier;

/// Euler's constant to 17 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// Largest `|s|` accepted by the Euler-Maclaurin evaluators.
pub const ZETA_MAX_MODULUS: f64 = 1e3;

/// Largest `|d|` accepted by [`dirichlet_l1`].
pub const L1_MAX_DISCRIMINANT: u64 = 10_000;

/// `B_{2k}` as (numerator, denominator), k = 1..=12.
const BERNOULLI_2K: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
];

/// `B_{2k} / (2k)!`.
fn bernoulli_over_factorial() -> [f64; 12] {
    let mut out = [0.0; 12];
    let mut fact = 1.0;
    for (k, o) in out.iter_mut().enumerate() {
        let n = 2 * (k + 1);
        fact *= ((n - 1) * n) as f64;
        let (num, den) = BERNOULLI_2K[k];
        *o = num / den / fact;
    }
    out
}

fn check_zeta_domain(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) || s.norm() > ZETA_MAX_MODULUS {
        return Err(Error::Domain(format!(
            "|s| must be at most {ZETA_MAX_MODULUS}, got s = {s}"
        )));
    }
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("Re s must be positive, got s = {s}")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    Ok(())
}

/// Euler-Maclaurin evaluation of `sum_{n>=0} (n + a)^-s` with the first
/// `cutoff` terms summed directly.
fn euler_maclaurin(s: Complex64, a: f64, cutoff: usize) -> Complex64 {
    let mut head = Complex64::new(0.0, 0.0);
    for n in 0..cutoff {
        head += (-s * (n as f64 + a).ln()).exp();
    }
    let big = cutoff as f64 + a;
    let ln_big = big.ln();
    let big_pow = (-s * ln_big).exp(); // big^-s
    let one = Complex64::new(1.0, 0.0);
    let mut tail = big_pow * big / (s - one) + big_pow * 0.5;
    // corrections B_{2k}/(2k)! s(s+1)...(s+2k-2) big^{-s-2k+1}
    let coeffs = bernoulli_over_factorial();
    let inv_sq = 1.0 / (big * big);
    let mut rising = s;
    let mut power = big_pow / big;
    for (k, &c) in coeffs.iter().enumerate() {
        let term = rising * power * c;
        tail += term;
        let j = (2 * k + 1) as f64;
        rising = rising * (s + j) * (s + j + 1.0);
        power *= inv_sq;
    }
    head + tail
}

fn cutoff_for(s: Complex64) -> usize {
    (s.norm().ceil() as usize + 20).max(20)
}

/// Riemann zeta for `Re s > 0`, `s != 1`, `|s| <= 1000`; absolute error
/// below `1e-10`.
pub fn zeta_em(s: Complex64) -> Result<Complex64> {
    check_zeta_domain(s)?;
    // sum from n = 1: shift a = 1
    Ok(euler_maclaurin(s, 1.0, cutoff_for(s)))
}

/// Hurwitz zeta `zeta(s, a)` for `a` in `(0, 1]`, same domain as [`zeta_em`].
pub fn hurwitz_em(s: Complex64, a: f64) -> Result<Complex64> {
    check_zeta_domain(s)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("Hurwitz parameter must lie in (0, 1], got {a}")));
    }
    Ok(euler_maclaurin(s, a, cutoff_for(s)))
}

/// `L(s, chi_d) = |d|^-s sum_{a=1}^{|d|-1} chi_d(a) zeta(s, a/|d|)`.
pub fn dirichlet_l_em(s: Complex64, d: i64) -> Result<Complex64> {
    check_discriminant(d)?;
    let q = d.unsigned_abs();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..q {
        let chi = kronecker_symbol(d, a);
        if chi != 0 {
            acc += hurwitz_em(s, a as f64 / q as f64)? * chi as f64;
        }
    }
    Ok(acc * (-s * (q as f64).ln()).exp())
}

/// Terms of the digamma asymptotic series, `B_{2k} / (2k)` for k = 1..7.
const DIGAMMA_ASYMPTOTIC: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Digamma `psi(x)` for `x > 0`: upward recurrence to `x >= 10`, then the
/// asymptotic series.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut shift = Neumaier::new();
    let mut y = x;
    while y < 10.0 {
        shift.add(-1.0 / y);
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut series = 0.0;
    let mut power = inv2;
    for c in DIGAMMA_ASYMPTOTIC {
        series += c * power;
        power *= inv2;
    }
    shift.add(y.ln() - 0.5 / y - series);
    shift.value()
}

fn check_discriminant(d: i64) -> Result<()> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::Domain(format!("{d} is not a fundamental discriminant")));
    }
    if d.unsigned_abs() > L1_MAX_DISCRIMINANT {
        return Err(Error::Domain(format!(
            "|d| must be at most {L1_MAX_DISCRIMINANT}, got {d}"
        )));
    }
    Ok(())
}

/// `L(1, chi_d) = -(1/|d|) sum_{a=1}^{|d|-1} chi_d(a) psi(a/|d|)`.
pub fn dirichlet_l1(d: i64) -> Result<f64> {
    check_discriminant(d)?;
    let q = d.unsigned_abs();
    let acc: Neumaier = (1..q)
        .map(|a| kronecker_symbol(d, a) as f64 * digamma(a as f64 / q as f64))
        .collect();
    Ok(-acc.value() / q as f64)
}

/// `Ein(w) = int_0^w (1 - e^-u)/u du`. The alternating series
/// `sum (-1)^{r+1} w^r / (r r!)` is used up to `w = 2`; beyond that its
/// terms cancel too much, and the positive series
/// `e^-w sum_{n>=1} H_n w^n / n!` takes over.
pub fn ein(w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    if w.is_nan() || w < 0.0 {
        return f64::NAN;
    }
    if w <= 2.0 {
        let mut acc = Neumaier::new();
        let mut power = 1.0; // w^r / r!
        for r in 1..200 {
            power *= w / r as f64;
            let term = power / r as f64;
            acc.add(if r % 2 == 1 { term } else { -term });
            if term < 1e-18 * acc.value().abs() {
                break;
            }
        }
        acc.value()
    } else {
        let mut acc = Neumaier::new();
        let mut power = 1.0;
        let mut harmonic = 0.0;
        let mut n = 1u32;
        loop {
            power *= w / n as f64;
            harmonic += 1.0 / n as f64;
            let term = power * harmonic;
            acc.add(term);
            if n as f64 > w && term < 1e-18 * acc.value() {
                break;
            }
            n += 1;
        }
        acc.value() * (-w).exp()
    }
}

/// `E1(y) = int_y^inf e^-u / u du` for `y > 0`: power series below 1,
/// continued fraction from 1 up.
pub fn exp_integral_e1(y: f64) -> f64 {
    if y == 0.0 {
        return f64::INFINITY;
    }
    if y.is_nan() || y < 0.0 {
        return f64::NAN;
    }
    if y < 1.0 {
        return ein(y) - EULER_GAMMA - y.ln();
    }
    // modified Lentz on e^-y / (y + 1 - 1/(y + 3 - 4/(y + 5 - ...)))
    const TINY: f64 = 1e-300;
    let mut b = y + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-y).exp()
}

/// Euler's constant from `Ein(1) - E1(1)`.
pub fn gamma_euler() -> f64 {
    ein(1.0) - exp_integral_e1(1.0)
}

//! Compensated summation.
//!
//! Every long sum over primes goes through [`Neumaier`]. Parallel scans
//! produce one accumulator per fixed-size chunk and merge them in ascending
//! chunk order with [`Neumaier::absorb`], so the result does not depend on
//! how many threads produced the chunks.

use num_complex::Complex64;

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merges another partial sum into this one.
    #[inline]
    pub fn absorb(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of complex values, real and imaginary parts kept apart.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexNeumaier {
    pub re: Neumaier,
    pub im: Neumaier,
}

impl ComplexNeumaier {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn absorb(&mut self, other: &ComplexNeumaier) {
        self.re.absorb(&other.re);
        self.im.absorb(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().collect::<Neumaier>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(&values), 2.0);
        assert_eq!(values.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn harmonic_tail_matches_reverse_order_sum() {
        let n = 1_000_000;
        let forward: Neumaier = (1..=n).map(|k| 1.0 / k as f64).collect();
        // reverse-order naive summation is accurate for decreasing terms
        let reverse: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        assert!((forward.value() - reverse).abs() < 1e-13);
    }

    #[test]
    fn absorb_equals_sequential_for_exact_inputs() {
        let mut a = Neumaier::new();
        let mut b = Neumaier::new();
        for k in 0..100 {
            a.add(k as f64);
        }
        for k in 100..200 {
            b.add(k as f64);
        }
        a.absorb(&b);
        assert_eq!(a.value(), (0..200).sum::<i32>() as f64);
    }
}

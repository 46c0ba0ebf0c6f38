//! Fixed-order compensated summation.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation. Terms are consumed in the order
/// given, so a fixed input order gives bit-identical results.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Compensated sum of an `f64` sequence.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<NeumaierSum>().value()
}

/// Compensated sum of a complex sequence, real and imaginary parts separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum_complex(values: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut s = ComplexSum::new();
    for z in values {
        s.add(z);
    }
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(v), 2.0);
        assert_eq!(v.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn many_tenths() {
        let s = sum(std::iter::repeat(0.1).take(1_000_000));
        assert!((s - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn complex_parts_are_independent() {
        let z = sum_complex([Complex64::new(1e16, 1.0), Complex64::new(1.0, -1.0), Complex64::new(-1e16, 0.5)]);
        assert_eq!(z, Complex64::new(1.0, 0.5));
    }
}

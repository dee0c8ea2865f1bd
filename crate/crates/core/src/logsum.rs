//! Log-domain accumulation.

/// `ln(e^a + e^b)`.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(sum e^{v_i})`; `-inf` for an empty slice.
pub fn log_sum_exp(v: &[f64]) -> f64 {
    let mut acc = LogSum::new();
    v.iter().for_each(|&x| acc.add(x));
    acc.value()
}

/// Streaming `ln sum e^{x_i}` that rescales whenever a larger term arrives.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    max: f64,
    sum: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        Self { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    /// Adds `w * e^x` for `w > 0`.
    #[inline]
    pub fn add_weighted(&mut self, w: f64, x: f64) {
        if w > 0.0 {
            self.add(x + w.ln());
        }
    }

    pub fn value(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let v = [0.1, -2.0, 3.5, 1.0];
        let direct: f64 = v.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&v) - direct).abs() < 1e-14);
    }

    #[test]
    fn survives_huge_exponents() {
        let v = [1e6, 1e6, 1e6 - 1000.0];
        assert!((log_sum_exp(&v) - (1e6 + 2f64.ln())).abs() < 1e-9);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_add_exp(-1e5, -1e5) - (-1e5 + 2f64.ln())).abs() < 1e-9);
    }
}

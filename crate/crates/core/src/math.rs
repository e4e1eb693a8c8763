//! Scalar helpers on top of `libm`.

pub(crate) use libm::{ceil, exp, expm1, fabs, floor, log, log1p, sqrt};

pub(crate) const LN_2: f64 = core::f64::consts::LN_2;

/// `log cosh x` without overflow.
#[inline]
pub(crate) fn log_cosh(x: f64) -> f64 {
    let a = fabs(x);
    a + log1p(exp(-2.0 * a)) - LN_2
}

#[inline]
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// Streaming `log Σ exp(x_i)` with a running maximum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    pub(crate) fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, x: f64) {
        if x <= self.max {
            self.sum += exp(x - self.max);
        } else {
            self.sum = self.sum * exp(self.max - x) + 1.0;
            self.max = x;
        }
    }

    pub(crate) fn value(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + log(self.sum)
        }
    }
}

/// SplitMix64 finalizer, used to derive independent seeds from `(seed, index)`.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_cosh_matches_direct_formula() {
        for &x in &[0.0, 0.3, -1.7, 5.0] {
            let direct = log((exp(x) + exp(-x)) / 2.0);
            assert!((log_cosh(x) - direct).abs() < 1e-14);
        }
        // no overflow far out
        assert!((log_cosh(1000.0) - (1000.0 - LN_2)).abs() < 1e-12);
    }

    #[test]
    fn streaming_lse_is_order_independent() {
        let xs = [3.0, -1.0, 700.0, 2.5, 699.0];
        let mut a = LogSumExp::new();
        let mut b = LogSumExp::new();
        for &x in &xs {
            a.push(x);
        }
        for &x in xs.iter().rev() {
            b.push(x);
        }
        assert!((a.value() - b.value()).abs() < 1e-12);
        assert!((a.value() - (700.0 + log(1.0 + exp(-1.0)))).abs() < 1e-12);
    }

    #[test]
    fn powi_small_cases() {
        assert_eq!(powi(0.5, 0), 1.0);
        assert_eq!(powi(0.5, 3), 0.125);
        assert_eq!(powi(-2.0, 5), -32.0);
    }
}

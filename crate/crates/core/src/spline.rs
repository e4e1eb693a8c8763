//! Clamped cubic spline on a uniform grid over `[0, x_max]`, evaluated as an
//! even function with a linear tail.

use crate::math::{fabs, floor};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone)]
pub struct EvenSpline {
    h: f64,
    x_max: f64,
    y: Vec<f64>,
    // second derivatives at the nodes
    m: Vec<f64>,
    tail_slope: f64,
}

impl EvenSpline {
    /// `y[j]` is the value at `j·h`. The slope is clamped to 0 at the origin
    /// (evenness) and to `tail_slope` at the right end, where the function
    /// continues linearly.
    pub fn new(h: f64, y: Vec<f64>, tail_slope: f64) -> Self {
        let n = y.len();
        assert!(n >= 3, "spline needs at least three nodes");
        // tridiagonal system for the clamped spline, solved by the Thomas algorithm
        let mut diag = vec![4.0; n];
        let mut rhs = vec![0.0; n];
        let upper = 1.0;
        let lower = 1.0;
        diag[0] = 2.0;
        diag[n - 1] = 2.0;
        let h2 = h * h;
        rhs[0] = 6.0 / h * ((y[1] - y[0]) / h);
        rhs[n - 1] = 6.0 / h * (tail_slope - (y[n - 1] - y[n - 2]) / h);
        for j in 1..n - 1 {
            rhs[j] = 6.0 / h2 * (y[j + 1] - 2.0 * y[j] + y[j - 1]);
        }
        let mut c = vec![0.0; n];
        c[0] = upper / diag[0];
        rhs[0] /= diag[0];
        for j in 1..n {
            let denom = diag[j] - lower * c[j - 1];
            c[j] = upper / denom;
            rhs[j] = (rhs[j] - lower * rhs[j - 1]) / denom;
        }
        let mut m = rhs;
        for j in (0..n - 1).rev() {
            m[j] -= c[j] * m[j + 1];
        }
        let x_max = h * (n - 1) as f64;
        EvenSpline {
            h,
            x_max,
            y,
            m,
            tail_slope,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let x = fabs(x);
        if x >= self.x_max {
            return self.y[self.y.len() - 1] + self.tail_slope * (x - self.x_max);
        }
        let u = x / self.h;
        let j = (floor(u) as usize).min(self.y.len() - 2);
        let b = u - j as f64;
        let a = 1.0 - b;
        let h2 = self.h * self.h / 6.0;
        a * self.y[j]
            + b * self.y[j + 1]
            + ((a * a * a - a) * self.m[j] + (b * b * b - b) * self.m[j + 1]) * h2
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }
}

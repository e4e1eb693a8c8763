use super::FreeEnergy;
use crate::error::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// A scalar free energy tabulated as `t ↦ F(√t)` on given nodes and
/// interpolated by a natural cubic spline in `t`.
///
/// Nested transforms evaluate `F` thousands of times; the table makes that
/// affordable for models whose `F` needs a full minimization.
#[derive(Debug, Clone)]
pub struct TabulatedFreeEnergy {
    name: String,
    t: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl TabulatedFreeEnergy {
    /// `t` must be strictly increasing and nonnegative.
    pub fn from_values(name: impl Into<String>, t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        const OP: &str = "TabulatedFreeEnergy";
        if t.len() < 3 || t.len() != y.len() {
            return Err(Error::usage(OP, "need at least three nodes with one value each"));
        }
        if t[0] < 0.0 || t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::usage(OP, "nodes must be nonnegative and strictly increasing"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::numerics(OP, "non-finite tabulated value", None));
        }
        let n = t.len();
        // natural spline: tridiagonal system for the interior second derivatives
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let mut up = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = t[i] - t[i - 1];
            let h1 = t[i + 1] - t[i];
            diag[i] = 2.0 * (h0 + h1);
            up[i] = h1;
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        }
        let mut m = vec![0.0; n];
        // forward elimination over rows 1..n-2
        for i in 2..n - 1 {
            let low = t[i] - t[i - 1];
            let w = low / diag[i - 1];
            diag[i] -= w * up[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for i in (1..n - 1).rev() {
            m[i] = (rhs[i] - up[i] * m[i + 1]) / diag[i];
        }
        Ok(TabulatedFreeEnergy {
            name: name.into(),
            t,
            y,
            m,
        })
    }

    /// Evaluates a one-dimensional handle at `β = √t` for every node.
    pub fn from_handle(f: &dyn FreeEnergy, t: Vec<f64>) -> Result<Self> {
        if f.dim() != 1 {
            return Err(Error::usage("TabulatedFreeEnergy", "only scalar temperatures can be tabulated"));
        }
        let y = crate::par::map(t.clone(), |x| f.value(&[crate::math::sqrt(x)]))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        Self::from_values(f.name(), t, y)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn locate(&self, x: f64) -> Result<usize> {
        let n = self.t.len();
        if !(x >= self.t[0] && x <= self.t[n - 1]) {
            return Err(Error::domain(
                "TabulatedFreeEnergy",
                format!("t = {x} outside the table [{}, {}]", self.t[0], self.t[n - 1]),
            ));
        }
        Ok(self.t.partition_point(|&s| s <= x).clamp(1, n - 1) - 1)
    }

    /// Spline value at `t`.
    pub fn at_t(&self, x: f64) -> Result<f64> {
        let i = self.locate(x)?;
        let h = self.t[i + 1] - self.t[i];
        let a = (self.t[i + 1] - x) / h;
        let b = 1.0 - a;
        Ok(a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }

    /// Spline derivative at `t`.
    pub fn slope_t(&self, x: f64) -> Result<f64> {
        let i = self.locate(x)?;
        let h = self.t[i + 1] - self.t[i];
        let a = (self.t[i + 1] - x) / h;
        let b = 1.0 - a;
        Ok((self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0)
    }
}

impl FreeEnergy for TabulatedFreeEnergy {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> Result<f64> {
        match beta {
            [b] => self.at_t(b * b),
            _ => Err(Error::usage("TabulatedFreeEnergy", "expected one coordinate")),
        }
    }

    fn scaled_gradient(&self, beta: &[f64]) -> Option<Result<Vec<f64>>> {
        // F′(β)/β = 2 dF/dt
        Some(match beta {
            [b] => self.slope_t(b * b).map(|s| vec![2.0 * s]),
            _ => Err(Error::usage("TabulatedFreeEnergy", "expected one coordinate")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubic_inside_and_nodes_exactly() {
        let t: Vec<f64> = (0..=20).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = t.iter().map(|x| 0.3 * x).collect();
        let tab = TabulatedFreeEnergy::from_values("lin", t.clone(), y).unwrap();
        assert!((tab.at_t(1.37).unwrap() - 0.411).abs() < 1e-14);
        assert!((tab.slope_t(2.9).unwrap() - 0.3).abs() < 1e-13);
        let y: Vec<f64> = t.iter().map(|x| x.sin()).collect();
        let tab = TabulatedFreeEnergy::from_values("sin", t.clone(), y).unwrap();
        assert_eq!(tab.at_t(t[7]).unwrap(), t[7].sin());
        assert!((tab.at_t(2.05).unwrap() - 2.05f64.sin()).abs() < 1e-4);
        assert!(tab.at_t(4.5).is_err());
    }
}

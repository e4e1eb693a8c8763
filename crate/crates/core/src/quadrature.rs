//! Gauss–Hermite rules for expectations over a standard Gaussian.

use crate::error::{Error, Result};
use crate::math::{exp, fabs, log, sqrt};
use alloc::vec;
use alloc::vec::Vec;

/// Nodes `z_i` and weights `w_i` with `Σ w_i f(z_i) ≈ E f(Z)`, `Z ~ N(0, 1)`.
///
/// The weights sum to one. The rule is exact for polynomials of degree up to
/// `2n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Nodes are the eigenvalues of the Jacobi matrix of the Hermite
    /// polynomials (zero diagonal, off-diagonal `√j`), located by Sturm
    /// bisection. Weights come from the Christoffel function
    /// `1 / Σ_{j<n} p_j(z)²` of the orthonormal polynomials, rescaled on the
    /// way so that large rules neither overflow nor lose the tiny weights.
    pub fn new(n: usize) -> Result<Self> {
        const OP: &str = "GaussHermite::new";
        if !(1..=2048).contains(&n) {
            return Err(Error::usage(OP, "node count must be in 1..=2048"));
        }
        // eigenvalues of the Jacobi matrix below x
        let below = |x: f64| -> usize {
            let mut d = -x;
            let mut count = usize::from(d < 0.0);
            for j in 1..n {
                if d == 0.0 {
                    d = f64::MIN_POSITIVE;
                }
                d = -x - j as f64 / d;
                count += usize::from(d < 0.0);
            }
            count
        };
        let roots: Vec<f64> = (0..=n).map(|j| sqrt(j as f64)).collect();
        // p_n(z) / p_n′(z) from the orthonormal recurrence
        let newton_step = |z: f64| -> f64 {
            let (mut prev, mut cur) = (0.0, 1.0);
            for j in 1..=n {
                let next = (z * cur - roots[j - 1] * prev) / roots[j];
                prev = cur;
                cur = next;
                if fabs(cur) > 1e150 {
                    prev /= 1e150;
                    cur /= 1e150;
                }
            }
            cur / (roots[n] * prev)
        };
        let bound = 2.0 * sqrt(n as f64) + 1.0;
        let mut nodes = vec![0.0; n];
        let mut start = 0.0;
        for i in n / 2..n {
            if n % 2 == 1 && i == n / 2 {
                continue;
            }
            // isolate by bisection, then polish
            let (mut lo, mut hi) = (start, bound);
            while hi - lo > 1e-3 {
                let mid = 0.5 * (lo + hi);
                if below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut z = 0.5 * (lo + hi);
            for _ in 0..20 {
                let next = (z - newton_step(z)).clamp(lo, hi);
                let done = fabs(next - z) <= 1e-15 * (1.0 + fabs(z));
                z = next;
                if done {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            start = hi;
        }
        let weights = nodes
            .iter()
            .map(|&z| {
                const BIG: f64 = 1e150;
                let (mut prev, mut cur) = (0.0, 1.0);
                let mut sum = 1.0;
                let mut log_scale = 0.0;
                for j in 1..n {
                    let next = (z * cur - roots[j - 1] * prev) / roots[j];
                    prev = cur;
                    cur = next;
                    sum += cur * cur;
                    if fabs(cur) > BIG {
                        prev /= BIG;
                        cur /= BIG;
                        sum /= BIG * BIG;
                        log_scale += log(BIG);
                    }
                }
                exp(-2.0 * log_scale) / sum
            })
            .collect();
        Ok(GaussHermite { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in increasing order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn expect(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }
}

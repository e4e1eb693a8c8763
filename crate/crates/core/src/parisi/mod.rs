//! Parisi functional of the Ising mixed p-spin model: the PDE value for step
//! order parameters, minimization over k-step distributions, the derivative
//! of the free energy, and the Legendre transform `Γ`.

mod gamma;
mod minimize;
mod pde;

pub use gamma::{gamma_transform, verify_thm7, GammaMember, GammaResult};
pub use minimize::{ising_derivative, parisi_minimize, ParisiSolution};
pub use pde::{parisi_functional, parisi_pde_value, ParisiSolver};

pub(crate) use gamma::FAMILY;
pub(crate) use minimize::{decode_steps, encode_steps, simplex_for, starting_points};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Discretization and optimizer settings shared by the Parisi and
/// Crisanti-Sommers solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParisiNumerics {
    /// Gauss–Hermite nodes per Gaussian expectation.
    pub quad_nodes: usize,
    /// Half-width of the spatial grid. `None` picks `12 + 4 β √ξ′(1)`.
    pub x_max: Option<f64>,
    /// Points of the full grid on `[−x_max, x_max]`.
    pub x_points: usize,
    /// Objective spread at which a simplex run counts as converged.
    pub outer_tol: f64,
    pub multistart: usize,
    /// Seed of the random multistart points.
    pub seed: u64,
    /// Evaluation budget per start.
    pub max_evals: usize,
}

impl Default for ParisiNumerics {
    fn default() -> Self {
        ParisiNumerics {
            quad_nodes: 40,
            x_max: None,
            x_points: 2048,
            outer_tol: 1e-13,
            multistart: 8,
            seed: 0x5eed,
            max_evals: 6000,
        }
    }
}

impl ParisiNumerics {
    pub fn validate(&self) -> Result<()> {
        const OP: &str = "ParisiNumerics";
        if self.quad_nodes < 8 {
            return Err(Error::usage(OP, "quad_nodes must be >= 8"));
        }
        if self.x_points < 64 {
            return Err(Error::usage(OP, "x_points must be >= 64"));
        }
        if let Some(x) = self.x_max {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::usage(OP, "x_max must be positive"));
            }
        }
        if !(self.outer_tol > 0.0) {
            return Err(Error::usage(OP, "outer_tol must be positive"));
        }
        if self.multistart < 1 || self.max_evals < 10 {
            return Err(Error::usage(OP, "need at least one start and a positive budget"));
        }
        Ok(())
    }
}

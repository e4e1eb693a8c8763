//! Model-agnostic Legendre duality between `F(β)` and `V(m)`: the two
//! transforms, stationary energies, concavity checks, round trips, and the
//! max-representation of `F` through `L_*` and `Γ^*`.

mod corollary;
mod handles;
mod legendre;
mod table;

pub use corollary::{corollary_check, gamma_star, l_star, CorollaryCheck, GridFunction};
pub use handles::{
    FnFreeEnergy, FnSquaredFreeEnergy, IsingFreeEnergy, RemFreeEnergy, RemSquaredFreeEnergy, SupTransform,
    ZeroFreeEnergy,
};
pub use legendre::{
    concavity_check, legendre_inf_f, legendre_sup_v, roundtrip_gap, stationary_energy, ConcavityReport,
    InfResult, SearchBox, SupResult,
};
pub use table::TabulatedFreeEnergy;

use crate::error::Result;
use alloc::vec::Vec;

/// An evaluator `β ↦ F(β)` over truncated temperature vectors of length
/// [`dim`](FreeEnergy::dim). Must be deterministic.
pub trait FreeEnergy: Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn value(&self, beta: &[f64]) -> Result<f64>;

    /// `(∂_p F(β) / β_p)_p` when the model knows it in closed form. This is
    /// also defined where some `β_p = 0`.
    fn scaled_gradient(&self, _beta: &[f64]) -> Option<Result<Vec<f64>>> {
        None
    }
}

/// An evaluator `m ↦ V(m)`.
pub trait SquaredFreeEnergy: Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn value(&self, m: &[f64]) -> Result<f64>;
}

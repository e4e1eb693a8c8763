//! Free energies of mean-field spin glasses and the Legendre duality between
//! the free energy `F` of a Hamiltonian and the free energy `V` of its square.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: closed forms for the random energy model, the Parisi
//! functional of the Ising mixed p-spin model, the Crisanti-Sommers
//! functional of the spherical model, a model-agnostic Legendre engine, and
//! an exact enumeration oracle at finite `N`. File formats and the command
//! line live in the `glassdual` crate.
//!
//! Enable the `parallel` feature to run multistarts, grid pre-scans and
//! disorder replicas on rayon. Results do not depend on the thread count.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "parallel"))]
extern crate std;

pub mod duality;
mod error;
pub mod finite_n;
pub(crate) mod math;
pub mod model;
pub mod optimize;
pub(crate) mod par;
pub mod parisi;
pub mod quadrature;
pub mod rem;
pub mod report;
pub mod spherical;
pub mod spline;

pub use error::{Error, ErrorKind, Result};
pub use model::{EnergyVector, MixtureKind, MixtureSpec, StepDistribution, TemperatureVector};
pub use report::{Direction, DualityPoint, DualityReport};

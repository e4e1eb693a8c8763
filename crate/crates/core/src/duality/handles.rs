use super::{legendre_sup_v, FreeEnergy, SearchBox, SquaredFreeEnergy};
use crate::error::{Error, Result};
use crate::model::{alpha_integral_xi_prime, EnergyVector, MixtureSpec};
use crate::parisi::{ParisiNumerics, ParisiSolver};
use crate::rem::{beta_c, rem_free_energy, rem_squared_free_energy};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

fn scalar(op: &'static str, beta: &[f64]) -> Result<f64> {
    match beta {
        [b] if *b >= 0.0 && b.is_finite() => Ok(*b),
        [b] => Err(Error::domain(op, format!("beta = {b} must be >= 0"))),
        _ => Err(Error::usage(op, format!("expected one coordinate, got {}", beta.len()))),
    }
}

/// Random energy model, extended by `F(0) = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RemFreeEnergy;

impl FreeEnergy for RemFreeEnergy {
    fn name(&self) -> &str {
        "rem"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> Result<f64> {
        let b = scalar("rem", beta)?;
        if b == 0.0 {
            Ok(0.0)
        } else {
            rem_free_energy(b)
        }
    }

    fn scaled_gradient(&self, beta: &[f64]) -> Option<Result<Vec<f64>>> {
        Some(scalar("rem", beta).map(|b| vec![if b <= beta_c() { 1.0 } else { beta_c() / b }]))
    }
}

/// `V(m) = log 2/m − log 2` on `(0, 1]`, continued by `0` for `m ≥ 1`, which
/// is what the sup transform of the REM free energy gives there.
#[derive(Debug, Clone, Copy, Default)]
pub struct RemSquaredFreeEnergy;

impl SquaredFreeEnergy for RemSquaredFreeEnergy {
    fn name(&self) -> &str {
        "rem"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, m: &[f64]) -> Result<f64> {
        match m {
            [x] if *x >= 1.0 => Ok(0.0),
            [x] => rem_squared_free_energy(*x),
            _ => Err(Error::usage("rem", "expected one coordinate")),
        }
    }
}

/// `F(β) = inf P_β` of the Ising mixed p-spin model at RSB level `k`.
#[derive(Debug, Clone)]
pub struct IsingFreeEnergy {
    solver: ParisiSolver,
    k: usize,
}

impl IsingFreeEnergy {
    pub fn new(spec: &MixtureSpec, num: &ParisiNumerics, k: usize) -> Result<Self> {
        Ok(IsingFreeEnergy {
            solver: ParisiSolver::new(spec, num)?,
            k,
        })
    }
}

impl FreeEnergy for IsingFreeEnergy {
    fn name(&self) -> &str {
        "ising"
    }

    fn dim(&self) -> usize {
        1
    }

    fn value(&self, beta: &[f64]) -> Result<f64> {
        let b = scalar("ising", beta)?;
        if b == 0.0 {
            return Ok(0.0);
        }
        Ok(self.solver.minimize(b, self.k)?.value)
    }

    fn scaled_gradient(&self, beta: &[f64]) -> Option<Result<Vec<f64>>> {
        Some(scalar("ising", beta).and_then(|b| {
            if b == 0.0 {
                return Ok(vec![self.solver.spec().xi(1.0)]);
            }
            let sol = self.solver.minimize(b, self.k)?;
            Ok(vec![alpha_integral_xi_prime(self.solver.spec(), &sol.alpha_star)])
        }))
    }
}

/// `F ≡ 0`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroFreeEnergy {
    pub dim: usize,
}

impl FreeEnergy for ZeroFreeEnergy {
    fn name(&self) -> &str {
        "zero"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, _beta: &[f64]) -> Result<f64> {
        Ok(0.0)
    }

    fn scaled_gradient(&self, beta: &[f64]) -> Option<Result<Vec<f64>>> {
        Some(Ok(vec![0.0; beta.len()]))
    }
}

/// A free energy given by a closure.
pub struct FnFreeEnergy<F> {
    pub name: String,
    pub dim: usize,
    pub f: F,
}

impl<F> FreeEnergy for FnFreeEnergy<F>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, beta: &[f64]) -> Result<f64> {
        (self.f)(beta)
    }
}

/// A squared free energy given by a closure.
pub struct FnSquaredFreeEnergy<F> {
    pub name: String,
    pub dim: usize,
    pub f: F,
}

impl<F> SquaredFreeEnergy for FnSquaredFreeEnergy<F>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, m: &[f64]) -> Result<f64> {
        (self.f)(m)
    }
}

/// `V(m) = sup_β (F(β) − ½ Σ β_p² m_p)` computed from a free-energy handle.
pub struct SupTransform<'a> {
    pub f: &'a dyn FreeEnergy,
    pub search: SearchBox,
}

impl SquaredFreeEnergy for SupTransform<'_> {
    fn name(&self) -> &str {
        self.f.name()
    }

    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, m: &[f64]) -> Result<f64> {
        Ok(legendre_sup_v(self.f, &EnergyVector::new(m.to_vec())?, &self.search)?.value)
    }
}

//! The random energy model: closed-form free energies on both sides of the
//! duality and the one-parameter Parisi-form minimization.

use crate::error::{Error, Result};
use crate::math::{sqrt, LN_2};
use crate::optimize::{golden_min, Tie};
use crate::report::{Direction, DualityPoint, DualityReport};
use alloc::format;

/// Argument tolerance of the REM line searches.
const LINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemModel {
    pub beta_c: f64,
}

impl Default for RemModel {
    fn default() -> Self {
        RemModel { beta_c: beta_c() }
    }
}

/// `β_c = √(2 log 2)`.
pub fn beta_c() -> f64 {
    sqrt(2.0 * LN_2)
}

fn check_beta(op: &'static str, beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("beta = {beta} must be > 0")))
    }
}

/// `β²/2` below `β_c`, `β β_c − log 2` above.
pub fn rem_free_energy(beta: f64) -> Result<f64> {
    check_beta("rem_free_energy", beta)?;
    let bc = beta_c();
    Ok(if beta <= bc { beta * beta / 2.0 } else { beta * bc - LN_2 })
}

/// `F′(β)`: `β` below `β_c`, `β_c` above.
pub fn rem_free_energy_derivative(beta: f64) -> Result<f64> {
    check_beta("rem_free_energy_derivative", beta)?;
    Ok(beta.min(beta_c()))
}

/// `V(m) = log 2 / m − log 2` on `0 < m ≤ 1`.
pub fn rem_squared_free_energy(m: f64) -> Result<f64> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::domain(
            "rem_squared_free_energy",
            format!("m = {m} outside (0, 1]"),
        ));
    }
    Ok(LN_2 / m - LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemParisi {
    pub m_star: f64,
    pub value: f64,
}

fn parisi_objective(beta: f64, m: f64) -> f64 {
    beta * beta * m / 2.0 + LN_2 / m - LN_2
}

/// Minimizes `β² m / 2 + log 2 / m − log 2` over `0 < m ≤ 1`.
///
/// The bracket is centred on the stationary point `β_c / β` clipped to 1.
pub fn rem_parisi_minimize(beta: f64) -> Result<RemParisi> {
    check_beta("rem_parisi_minimize", beta)?;
    let center = (beta_c() / beta).min(1.0);
    let lo = center / 2.0;
    let hi = (2.0 * center).min(1.0);
    let r = golden_min(|m| Ok(parisi_objective(beta, m)), lo, hi, LINE_TOL, Tie::Right)?;
    Ok(RemParisi {
        m_star: r.x,
        value: r.value,
    })
}

/// For each `β`, recovers `F(β) = inf_{0<m≤1} (V(m) + β² m / 2)` by a line
/// search over the whole interval and compares with the closed form.
pub fn rem_duality_roundtrip(grid: &[f64]) -> Result<DualityReport> {
    const OP: &str = "rem_duality_roundtrip";
    if grid.is_empty() {
        return Err(Error::usage(OP, "temperature grid is empty"));
    }
    let mut report = DualityReport::new("rem", Direction::VToF);
    for &beta in grid {
        check_beta(OP, beta)?;
        let r = golden_min(
            |m| Ok(rem_squared_free_energy(m)? + beta * beta * m / 2.0),
            1e-9,
            1.0,
            LINE_TOL,
            Tie::Left,
        )?;
        let exact = rem_free_energy(beta)?;
        report.push(
            DualityPoint::new("F", r.value, exact)
                .at_beta(&[beta])
                .with_optimizer(&[r.x])
                .flags(r.x >= 1.0 - 1e-9, false),
        );
    }
    Ok(report)
}

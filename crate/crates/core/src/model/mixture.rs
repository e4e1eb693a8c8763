use crate::error::{Error, Result};
use crate::math::powi;
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixtureKind {
    /// `ξ(s) = Σ c_p² s^p`.
    Ising,
    /// `ξ(s) = Σ 2^{-p} c_p² s^p`, the normalization of the spherical model
    /// where `c_p` plays the role of `β_p`.
    Spherical,
}

/// A covariance mixture given by its degrees and coefficients `c_p ≥ 0`.
///
/// Coefficients are stored unsquared; every evaluation uses `c_p²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureRepr", into = "MixtureRepr")]
pub struct MixtureSpec {
    kind: MixtureKind,
    terms: Vec<(u32, f64)>,
    // weights[i] is the coefficient of s^p in ξ for terms[i]
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MixtureRepr {
    kind: MixtureKind,
    terms: Vec<(u32, f64)>,
}

impl TryFrom<MixtureRepr> for MixtureSpec {
    type Error = Error;

    fn try_from(r: MixtureRepr) -> Result<Self> {
        MixtureSpec::new(r.kind, r.terms)
    }
}

impl From<MixtureSpec> for MixtureRepr {
    fn from(m: MixtureSpec) -> Self {
        MixtureRepr {
            kind: m.kind,
            terms: m.terms,
        }
    }
}

impl MixtureSpec {
    pub fn new(kind: MixtureKind, terms: Vec<(u32, f64)>) -> Result<Self> {
        const OP: &str = "MixtureSpec::new";
        if terms.is_empty() {
            return Err(Error::usage(OP, "mixture needs at least one term"));
        }
        for (i, &(p, c)) in terms.iter().enumerate() {
            if p < 1 {
                return Err(Error::domain(OP, "degrees must be >= 1"));
            }
            if i > 0 && p <= terms[i - 1].0 {
                return Err(Error::domain(OP, "degrees must be strictly increasing"));
            }
            if !c.is_finite() || c < 0.0 {
                return Err(Error::domain(OP, format!("coefficient c_{p} = {c} must be finite and >= 0")));
            }
        }
        if terms.iter().all(|&(_, c)| c == 0.0) {
            return Err(Error::domain(OP, "at least one coefficient must be positive"));
        }
        let summable: f64 = terms.iter().map(|&(p, c)| powi(2.0, p) * c * c).sum();
        if !summable.is_finite() {
            return Err(Error::domain(OP, "sum of 2^p c_p^2 is not finite"));
        }
        let weights = terms
            .iter()
            .map(|&(p, c)| match kind {
                MixtureKind::Ising => c * c,
                MixtureKind::Spherical => c * c / powi(2.0, p),
            })
            .collect();
        Ok(MixtureSpec { kind, terms, weights })
    }

    /// Sherrington-Kirkpatrick: `ξ(s) = s²/2`.
    pub fn sk() -> Self {
        Self::pure(MixtureKind::Ising, 2, core::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn pure(kind: MixtureKind, p: u32, c: f64) -> Self {
        Self::new(kind, alloc::vec![(p, c)]).expect("pure mixture with positive coefficient")
    }

    pub fn kind(&self) -> MixtureKind {
        self.kind
    }

    pub fn terms(&self) -> &[(u32, f64)] {
        &self.terms
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.0)
    }

    fn monomials(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.terms.iter().zip(&self.weights).map(|(&(p, _), &w)| (p, w))
    }

    #[inline]
    pub fn xi(&self, s: f64) -> f64 {
        self.monomials().map(|(p, w)| w * powi(s, p)).sum()
    }

    #[inline]
    pub fn xi_prime(&self, s: f64) -> f64 {
        self.monomials()
            .map(|(p, w)| w * p as f64 * powi(s, p - 1))
            .sum()
    }

    #[inline]
    pub fn xi_second(&self, s: f64) -> f64 {
        self.monomials()
            .filter(|&(p, _)| p >= 2)
            .map(|(p, w)| w * (p * (p - 1)) as f64 * powi(s, p - 2))
            .sum()
    }

    /// `ξ`, `ξ′` or `ξ″` at `s ∈ [0, 1]`.
    pub fn eval(&self, s: f64, order: u32) -> Result<f64> {
        const OP: &str = "mixture_eval";
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::domain(OP, format!("s = {s} outside [0, 1]")));
        }
        match order {
            0 => Ok(self.xi(s)),
            1 => Ok(self.xi_prime(s)),
            2 => Ok(self.xi_second(s)),
            _ => Err(Error::usage(OP, format!("derivative order {order} not in {{0, 1, 2}}"))),
        }
    }
}

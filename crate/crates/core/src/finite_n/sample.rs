use crate::error::{Error, Result};
use crate::math::{mix64, powi, sqrt};
use crate::model::{MixtureKind, MixtureSpec};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderModel {
    IsingMixed,
    Rem,
}

/// Size caps for sampling and enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteNLimits {
    pub max_n: usize,
    pub max_degree: u32,
    /// Stored Gaussians (tensor entries or REM energies) per sample.
    pub max_entries: usize,
}

impl Default for FiniteNLimits {
    fn default() -> Self {
        FiniteNLimits {
            max_n: 24,
            max_degree: 4,
            max_entries: 1 << 24,
        }
    }
}

// one monomial χ_S(σ) = Π_{i∈S} σ_i of the reduced Hamiltonian
#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    mask: u32,
    comp: usize,
    coef: f64,
}

/// One realization of the disorder.
///
/// For the mixed model, `H_{N,p}(σ) = c_p N^{-(p−1)/2} Σ g_{i_1…i_p} σ_{i_1}⋯σ_{i_p}`
/// over all ordered index tuples; for the REM, `2^N` independent energies of
/// variance `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderSample {
    model: DisorderModel,
    n: usize,
    seed: u64,
    degrees: Vec<u32>,
    coefficients: Vec<f64>,
    // ising: one dense tensor per degree, row-major over (i_1, …, i_p)
    couplings: Vec<Vec<f64>>,
    // rem: energies indexed by the bit pattern of σ (bit i set means σ_i = −1)
    energies: Vec<f64>,
    terms: Vec<Term>,
}

/// `N(0,1)` keyed by `(seed, p, i_1, …, i_p)`, so a coupling does not depend
/// on `N` and systems of different sizes share their common couplings.
fn keyed_gaussian(seed: u64, p: u32, idx: &[usize]) -> f64 {
    let mut h = mix64(seed ^ ((p as u64) << 56));
    for &i in idx {
        h = mix64(h ^ (i as u64 + 1));
    }
    StandardNormal.sample(&mut ChaCha8Rng::seed_from_u64(h))
}

fn tuples(n: usize, p: u32) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(p);
    (0..total).map(move |mut code| {
        let mut idx = vec![0; p as usize];
        for slot in idx.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        idx
    })
}

pub fn sample_disorder(model: DisorderModel, spec: Option<&MixtureSpec>, n: usize, seed: u64) -> Result<DisorderSample> {
    sample_disorder_with(model, spec, n, seed, &FiniteNLimits::default())
}

pub fn sample_disorder_with(
    model: DisorderModel,
    spec: Option<&MixtureSpec>,
    n: usize,
    seed: u64,
    limits: &FiniteNLimits,
) -> Result<DisorderSample> {
    const OP: &str = "sample_disorder";
    DisorderSample::check_size(OP, model, spec, n, limits)?;
    match model {
        DisorderModel::Rem => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix64(seed));
            let sd = sqrt(n as f64);
            let energies = (0..1usize << n)
                .map(|_| sd * Distribution::<f64>::sample(&StandardNormal, &mut rng))
                .collect();
            Ok(DisorderSample {
                model,
                n,
                seed,
                degrees: vec![1],
                coefficients: vec![1.0],
                couplings: Vec::new(),
                energies,
                terms: Vec::new(),
            })
        }
        DisorderModel::IsingMixed => {
            let spec = spec.unwrap();
            let couplings = spec
                .terms()
                .iter()
                .map(|&(p, _)| tuples(n, p).map(|idx| keyed_gaussian(seed, p, &idx)).collect())
                .collect();
            let mut s = DisorderSample::from_couplings(spec, n, couplings)?;
            s.seed = seed;
            Ok(s)
        }
    }
}

impl DisorderSample {
    fn check_size(
        op: &'static str,
        model: DisorderModel,
        spec: Option<&MixtureSpec>,
        n: usize,
        limits: &FiniteNLimits,
    ) -> Result<()> {
        if n < 1 {
            return Err(Error::usage(op, "N must be >= 1"));
        }
        if n > limits.max_n || n > 31 {
            return Err(Error::resource(
                op,
                format!("N = {n} exceeds the enumeration cap {}", limits.max_n.min(31)),
            ));
        }
        match model {
            DisorderModel::Rem => {
                if (1usize << n) > limits.max_entries {
                    return Err(Error::resource(op, format!("2^{n} REM energies exceed the memory budget")));
                }
            }
            DisorderModel::IsingMixed => {
                let spec = spec.ok_or_else(|| Error::usage(op, "the mixed model needs a mixture"))?;
                if spec.kind() != MixtureKind::Ising {
                    return Err(Error::usage(op, "mixture kind must be ising"));
                }
                let mut total = 0usize;
                for &(p, _) in spec.terms() {
                    if p > limits.max_degree {
                        return Err(Error::resource(
                            op,
                            format!("degree {p} exceeds the degree cap {}", limits.max_degree),
                        ));
                    }
                    total = total.saturating_add((n as u64).saturating_pow(p).min(usize::MAX as u64) as usize);
                    if total > limits.max_entries {
                        return Err(Error::resource(
                            op,
                            format!("coupling tensors up to degree {p} at N = {n} exceed the memory budget"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// A mixed-model sample with the given tensors, one per term of `spec`
    /// with `N^p` entries each.
    pub fn from_couplings(spec: &MixtureSpec, n: usize, couplings: Vec<Vec<f64>>) -> Result<Self> {
        const OP: &str = "DisorderSample::from_couplings";
        Self::check_size(OP, DisorderModel::IsingMixed, Some(spec), n, &FiniteNLimits::default())?;
        if couplings.len() != spec.terms().len()
            || couplings.iter().zip(spec.terms()).any(|(g, &(p, _))| g.len() != n.pow(p))
        {
            return Err(Error::usage(OP, "need one tensor with N^p entries per term"));
        }
        let mut s = DisorderSample {
            model: DisorderModel::IsingMixed,
            n,
            seed: 0,
            degrees: spec.terms().iter().map(|t| t.0).collect(),
            coefficients: spec.terms().iter().map(|t| t.1).collect(),
            couplings,
            energies: Vec::new(),
            terms: Vec::new(),
        };
        s.reduce();
        Ok(s)
    }

    /// Test hook: the same sample with every coupling set to zero.
    pub fn with_zero_couplings(mut self) -> Self {
        for g in &mut self.couplings {
            g.iter_mut().for_each(|x| *x = 0.0);
        }
        self.energies.iter_mut().for_each(|x| *x = 0.0);
        self.reduce();
        self
    }

    // σ_i² = 1 collapses each tuple to the set of indices with odd multiplicity
    fn reduce(&mut self) {
        let n = self.n;
        let mut terms = Vec::new();
        for (comp, ((&p, &c), g)) in self.degrees.iter().zip(&self.coefficients).zip(&self.couplings).enumerate() {
            let scale = c / powi(sqrt(n as f64), p - 1);
            let mut acc: Vec<(u32, f64)> = tuples(n, p)
                .zip(g)
                .map(|(idx, &x)| (idx.iter().fold(0u32, |m, &i| m ^ (1 << i)), x))
                .collect();
            acc.sort_by_key(|t| t.0);
            let mut i = 0;
            while i < acc.len() {
                let mask = acc[i].0;
                let mut sum = 0.0;
                while i < acc.len() && acc[i].0 == mask {
                    sum += acc[i].1;
                    i += 1;
                }
                if sum != 0.0 {
                    terms.push(Term {
                        mask,
                        comp,
                        coef: scale * sum,
                    });
                }
            }
        }
        self.terms = terms;
    }

    pub fn model(&self) -> DisorderModel {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Degree of each energy component (`[1]` for the REM).
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn components(&self) -> usize {
        self.degrees.len()
    }

    pub fn couplings(&self) -> &[Vec<f64>] {
        &self.couplings
    }

    /// The σ-independent part of each component (the empty monomial).
    pub fn constant_terms(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.components()];
        for t in self.terms.iter().filter(|t| t.mask == 0) {
            out[t.comp] += t.coef;
        }
        out
    }

    /// `H_{N,p}(σ)` per component, straight from the definition. `sigma`
    /// holds `±1`.
    pub fn energy(&self, sigma: &[i8]) -> Result<Vec<f64>> {
        if sigma.len() != self.n || sigma.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::usage("DisorderSample::energy", "sigma must hold N entries of +1 or -1"));
        }
        match self.model {
            DisorderModel::Rem => {
                let code = sigma.iter().enumerate().fold(0usize, |c, (i, &s)| if s < 0 { c | 1 << i } else { c });
                Ok(vec![self.energies[code]])
            }
            DisorderModel::IsingMixed => Ok(self
                .degrees
                .iter()
                .zip(&self.coefficients)
                .zip(&self.couplings)
                .map(|((&p, &c), g)| {
                    let sum: f64 = tuples(self.n, p)
                        .zip(g)
                        .map(|(idx, &x)| x * idx.iter().map(|&i| sigma[i] as f64).product::<f64>())
                        .sum();
                    c / powi(sqrt(self.n as f64), p - 1) * sum
                })
                .collect()),
        }
    }

    /// Calls `f` with the component energies of every configuration, in Gray
    /// code order for the mixed model.
    pub fn visit(&self, mut f: impl FnMut(&[f64])) -> Result<()> {
        match self.model {
            DisorderModel::Rem => {
                for e in &self.energies {
                    f(core::slice::from_ref(e));
                }
            }
            DisorderModel::IsingMixed => {
                let n = self.n;
                let mut by_spin: Vec<Vec<usize>> = vec![Vec::new(); n];
                for (t, term) in self.terms.iter().enumerate() {
                    for (i, list) in by_spin.iter_mut().enumerate() {
                        if term.mask & (1 << i) != 0 {
                            list.push(t);
                        }
                    }
                }
                let mut chi = vec![1.0f64; self.terms.len()];
                let mut h = vec![0.0; self.components()];
                for t in &self.terms {
                    h[t.comp] += t.coef;
                }
                f(&h);
                for step in 1usize..1 << n {
                    let i = step.trailing_zeros() as usize;
                    for &t in &by_spin[i] {
                        let term = &self.terms[t];
                        h[term.comp] -= 2.0 * term.coef * chi[t];
                        chi[t] = -chi[t];
                    }
                    f(&h);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rem_is_deterministic() {
        let a = sample_disorder(DisorderModel::Rem, None, 3, 7).unwrap();
        let b = sample_disorder(DisorderModel::Rem, None, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.energies.len(), 8);
        assert_ne!(a, sample_disorder(DisorderModel::Rem, None, 3, 8).unwrap());
    }

    #[test]
    fn couplings_are_shared_across_sizes() {
        let spec = MixtureSpec::sk();
        let small = sample_disorder(DisorderModel::IsingMixed, Some(&spec), 3, 11).unwrap();
        let big = sample_disorder(DisorderModel::IsingMixed, Some(&spec), 5, 11).unwrap();
        // g_{01} sits at (0, 1) in both tensors
        assert_eq!(small.couplings()[0][1], big.couplings()[0][1]);
        assert_eq!(small.couplings()[0][3 + 2], big.couplings()[0][5 + 2]);
    }

    #[test]
    fn gray_enumeration_matches_direct_energies() {
        let spec = MixtureSpec::new(MixtureKind::Ising, vec![(1, 0.3), (2, 0.6), (3, 0.4)]).unwrap();
        let s = sample_disorder(DisorderModel::IsingMixed, Some(&spec), 5, 3).unwrap();
        let mut seen = Vec::new();
        s.visit(|h| seen.push(h.to_vec())).unwrap();
        assert_eq!(seen.len(), 32);
        for (step, h) in seen.iter().enumerate() {
            let gray = step ^ (step >> 1);
            let sigma: Vec<i8> = (0..5).map(|i| if gray >> i & 1 == 1 { -1 } else { 1 }).collect();
            let direct = s.energy(&sigma).unwrap();
            for (a, b) in h.iter().zip(&direct) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn caps_are_resource_errors() {
        let e = sample_disorder(DisorderModel::Rem, None, 30, 1).unwrap_err();
        assert_eq!(e.kind(), crate::ErrorKind::Resource);
        let spec = MixtureSpec::pure(MixtureKind::Ising, 5, 1.0);
        let e = sample_disorder(DisorderModel::IsingMixed, Some(&spec), 4, 1).unwrap_err();
        assert_eq!(e.kind(), crate::ErrorKind::Resource);
        let tight = FiniteNLimits {
            max_entries: 100,
            ..FiniteNLimits::default()
        };
        let e = sample_disorder_with(DisorderModel::IsingMixed, Some(&MixtureSpec::sk()), 12, 1, &tight).unwrap_err();
        assert!(std::string::ToString::to_string(&e).contains("degree 2"));
    }
}

use super::{FreeEnergy, SquaredFreeEnergy, SupTransform};
use crate::error::{Error, Result};
use crate::math::{fabs, sqrt};
use crate::model::{EnergyVector, TemperatureVector};
use crate::optimize::{golden_min, Tie};
use crate::report::{Direction, DualityPoint, DualityReport};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Search region and tolerances for the two transforms. Every `β_p` ranges
/// over `[0, hi]` and every `m_p` over `[m_lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub hi: f64,
    pub m_lo: f64,
    /// Points of the coarse scan preceding each line search.
    pub prescan: usize,
    /// Argument tolerance of the golden-section refinement.
    pub tol: f64,
    /// Coordinate sweeps for more than one coordinate.
    pub sweeps: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            hi: 4.0,
            m_lo: 1e-3,
            prescan: 24,
            tol: 1e-10,
            sweeps: 3,
        }
    }
}

impl SearchBox {
    fn validate(&self, op: &'static str) -> Result<()> {
        if !(self.hi > 0.0 && self.hi.is_finite() && self.m_lo > 0.0 && self.m_lo < self.hi) {
            return Err(Error::usage(op, "search box needs 0 < m_lo < hi < inf"));
        }
        if self.prescan < 3 || !(self.tol > 0.0) || self.sweeps < 1 {
            return Err(Error::usage(op, "need prescan >= 3, tol > 0 and sweeps >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    /// Maximize; ties go to the larger argument.
    Max,
    /// Minimize; ties go to the smaller argument.
    Min,
}

struct Line {
    x: f64,
    value: f64,
    at_lower: bool,
    flat: bool,
}

// Coarse scan, then golden section between the neighbours of the best scan
// point. For minimization, an inner failure that reports a lower bound counts
// as that bound and must not undercut the final minimum.
fn line_search<G>(op: &'static str, g: G, lo: f64, hi: f64, search: &SearchBox, sense: Sense) -> Result<Line>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let n = search.prescan;
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let sign = if sense == Sense::Max { -1.0 } else { 1.0 };
    let raw = crate::par::map(xs.clone(), &g);
    let mut vals = Vec::with_capacity(n);
    let mut bounds = Vec::new();
    for (x, r) in xs.iter().zip(raw) {
        match r {
            Ok(v) => vals.push(sign * v),
            Err(Error::Numerics { best: Some(b), .. }) if sense == Sense::Min => {
                bounds.push((*x, b));
                vals.push(f64::INFINITY);
            }
            Err(e) => return Err(e),
        }
    }
    let mut best = 0;
    for i in 1..n {
        let better = if sense == Sense::Max { vals[i] <= vals[best] } else { vals[i] < vals[best] };
        if better {
            best = i;
        }
    }
    if !vals[best].is_finite() {
        return Err(Error::numerics(op, "objective unavailable on the whole scan", None));
    }
    let vmax = vals.iter().copied().filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    if bounds.is_empty() && vmax - vals[best] <= 1e-12 * (1.0 + fabs(vals[best])) {
        let x = if sense == Sense::Max { hi } else { lo };
        return Ok(Line {
            x,
            value: sign * vals[best],
            at_lower: sense == Sense::Min,
            flat: true,
        });
    }
    if best == n - 1 && vals[n - 1] < vals[n - 2] {
        return Err(Error::numerics(
            op,
            format!("optimum escapes the search box at its upper edge {hi}; enlarge the box"),
            Some(sign * vals[n - 1]),
        ));
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(n - 1)];
    let tie = if sense == Sense::Max { Tie::Right } else { Tie::Left };
    let r = golden_min(|x| g(x).map(|v| sign * v), a, b, search.tol, tie)?;
    let (x, v) = if r.value < vals[best] || (r.value == vals[best] && (r.x > xs[best]) == (sense == Sense::Max)) {
        (r.x, r.value)
    } else {
        (xs[best], vals[best])
    };
    if let Some(&(bx, bv)) = bounds.iter().find(|(_, b)| *b <= v) {
        return Err(Error::numerics(
            op,
            format!("inner optimization failed at {bx} with lower bound {bv} below the minimum; enlarge the box"),
            Some(v),
        ));
    }
    Ok(Line {
        x,
        value: sign * v,
        at_lower: x - lo <= search.tol,
        flat: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    /// `V(m)`.
    pub value: f64,
    pub beta_star: Vec<f64>,
    /// Some `β_p*` sits at `0`.
    pub boundary: bool,
    /// The last line search saw a constant objective.
    pub flat: bool,
}

/// `V(m) = sup_β (F(β) − ½ Σ β_p² m_p)` by coordinate line searches.
pub fn legendre_sup_v(f: &dyn FreeEnergy, m: &EnergyVector, search: &SearchBox) -> Result<SupResult> {
    const OP: &str = "legendre_sup_V";
    search.validate(OP)?;
    let m = m.entries();
    if m.len() != f.dim() {
        return Err(Error::usage(OP, format!("energy has {} entries, model has {}", m.len(), f.dim())));
    }
    let penalty = |b: &[f64]| -> f64 { 0.5 * b.iter().zip(m).map(|(x, y)| x * x * y).sum::<f64>() };
    let mut beta = vec![0.0; m.len()];
    let mut last = None;
    for _ in 0..if m.len() == 1 { 1 } else { search.sweeps } {
        let mut moved = 0.0f64;
        for p in 0..m.len() {
            let base = beta.clone();
            let g = |x: f64| -> Result<f64> {
                let mut b = base.clone();
                b[p] = x;
                Ok(f.value(&b)? - penalty(&b))
            };
            let line = line_search(OP, g, 0.0, search.hi, search, Sense::Max)?;
            moved = moved.max(fabs(line.x - beta[p]));
            beta[p] = line.x;
            last = Some(line);
        }
        if moved <= 1e3 * search.tol {
            break;
        }
    }
    let last = last.unwrap();
    Ok(SupResult {
        value: last.value,
        boundary: beta.iter().any(|&b| b <= search.tol),
        flat: last.flat,
        beta_star: beta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfResult {
    /// `F(β)`.
    pub value: f64,
    pub m_star: Vec<f64>,
    /// Some `m_p*` sits at the lower edge of the box.
    pub boundary: bool,
    pub flat: bool,
}

/// `F(β) = inf_m (V(m) + ½ Σ β_p² m_p)` by coordinate line searches.
pub fn legendre_inf_f(v: &dyn SquaredFreeEnergy, beta: &TemperatureVector, search: &SearchBox) -> Result<InfResult> {
    const OP: &str = "legendre_inf_F";
    search.validate(OP)?;
    let beta = beta.entries();
    if beta.len() != v.dim() {
        return Err(Error::usage(OP, format!("temperature has {} entries, model has {}", beta.len(), v.dim())));
    }
    let penalty = |m: &[f64]| -> f64 { 0.5 * m.iter().zip(beta).map(|(x, b)| b * b * x).sum::<f64>() };
    let mut m = vec![search.hi; beta.len()];
    let mut last = None;
    for _ in 0..if beta.len() == 1 { 1 } else { search.sweeps } {
        let mut moved = 0.0f64;
        for p in 0..beta.len() {
            let base = m.clone();
            let g = |x: f64| -> Result<f64> {
                let mut y = base.clone();
                y[p] = x;
                Ok(v.value(&y)? + penalty(&y))
            };
            let line = line_search(OP, g, search.m_lo, search.hi, search, Sense::Min)?;
            moved = moved.max(fabs(line.x - m[p]));
            m[p] = line.x;
            last = Some(line);
        }
        if moved <= 1e3 * search.tol {
            break;
        }
    }
    let last = last.unwrap();
    Ok(InfResult {
        value: last.value,
        boundary: last.at_lower || m.iter().any(|&x| x - search.m_lo <= search.tol),
        flat: last.flat,
        m_star: m,
    })
}

/// `m_p = ∂_p F(β) / β_p`, from the model when it knows the derivative and
/// by centered differences with step `fd_step` otherwise.
///
/// Fails with a domain error naming the entries that are not positive, since
/// those are not scaled energies.
pub fn stationary_energy(f: &dyn FreeEnergy, beta: &TemperatureVector, fd_step: f64) -> Result<EnergyVector> {
    const OP: &str = "stationary_energy";
    let b = beta.entries();
    if b.len() != f.dim() {
        return Err(Error::usage(OP, format!("temperature has {} entries, model has {}", b.len(), f.dim())));
    }
    let m = match f.scaled_gradient(b) {
        Some(r) => r?,
        None => {
            if !(fd_step > 0.0) {
                return Err(Error::usage(OP, "fd_step must be positive"));
            }
            let mut out = Vec::with_capacity(b.len());
            for p in 0..b.len() {
                if b[p] == 0.0 {
                    return Err(Error::domain(OP, format!("beta_{} = 0 leaves m_{} undefined", p + 1, p + 1)));
                }
                let at = |x: f64| {
                    let mut y = b.to_vec();
                    y[p] = x;
                    f.value(&y)
                };
                let d = if b[p] > fd_step {
                    (at(b[p] + fd_step)? - at(b[p] - fd_step)?) / (2.0 * fd_step)
                } else {
                    (at(b[p] + fd_step)? - at(b[p])?) / fd_step
                };
                out.push(d / b[p]);
            }
            out
        }
    };
    let bad: Vec<usize> = (0..m.len()).filter(|&i| !(m[i] > 0.0)).map(|i| i + 1).collect();
    if !bad.is_empty() {
        return Err(Error::domain(
            OP,
            format!("entries {bad:?} of the stationary energy {m:?} are not positive"),
        ));
    }
    EnergyVector::new(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub t_grid: Vec<f64>,
    /// `F(√t e_p)` per coordinate ray.
    pub values: Vec<Vec<f64>>,
    /// Second central differences per ray, at the interior points.
    pub second_differences: Vec<Vec<f64>>,
    /// Largest positive second difference, `0` when concave.
    pub max_violation: f64,
}

/// Second differences of `t ↦ F(√t e_p)` along each coordinate ray.
pub fn concavity_check(f: &dyn FreeEnergy, t_grid: &[f64]) -> Result<ConcavityReport> {
    const OP: &str = "concavity_check";
    if t_grid.len() < 3 {
        return Err(Error::usage(OP, "t grid needs at least three points"));
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::domain(OP, "t grid must be positive"));
    }
    let h = t_grid[1] - t_grid[0];
    if t_grid
        .windows(2)
        .any(|w| !(w[1] > w[0]) || fabs(w[1] - w[0] - h) > 1e-9 * (1.0 + h))
    {
        return Err(Error::usage(OP, "t grid must be uniform and increasing"));
    }
    let mut values = Vec::with_capacity(f.dim());
    let mut second = Vec::with_capacity(f.dim());
    let mut worst = 0.0f64;
    for p in 0..f.dim() {
        let ray = crate::par::map(t_grid.to_vec(), |t| {
            let mut b = vec![0.0; f.dim()];
            b[p] = sqrt(t);
            f.value(&b)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        let d2: Vec<f64> = ray.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect();
        worst = d2.iter().fold(worst, |a, &d| a.max(d));
        values.push(ray);
        second.push(d2);
    }
    Ok(ConcavityReport {
        t_grid: t_grid.to_vec(),
        values,
        second_differences: second,
        max_violation: worst,
    })
}

/// For each `β`: `m` from [`stationary_energy`], `V(m)` by the sup
/// transform, then `F` back by the inf transform of that `V`.
///
/// Points labelled `V` compare `V(m)` with `F(β) − ½Σβ_p²m_p`; points
/// labelled `F` compare the recovered free energy with `F(β)`.
pub fn roundtrip_gap(f: &dyn FreeEnergy, betas: &[TemperatureVector], search: &SearchBox) -> Result<DualityReport> {
    const OP: &str = "roundtrip_gap";
    if betas.is_empty() {
        return Err(Error::usage(OP, "empty temperature grid"));
    }
    let mut report = DualityReport::new(f.name(), Direction::Roundtrip);
    let v = SupTransform { f, search: *search };
    for beta in betas {
        let b = beta.entries();
        let fb = f.value(b)?;
        let m = stationary_energy(f, beta, 1e-4)?;
        let pen: f64 = 0.5 * b.iter().zip(m.entries()).map(|(x, y)| x * x * y).sum::<f64>();
        let sup = legendre_sup_v(f, &m, search)?;
        report.push(
            DualityPoint::new("V", sup.value, fb - pen)
                .at_beta(b)
                .at_energy(m.entries())
                .with_optimizer(&sup.beta_star)
                .flags(sup.boundary, sup.flat),
        );
        let inf = legendre_inf_f(&v, beta, search)?;
        report.push(
            DualityPoint::new("F", inf.value, fb)
                .at_beta(b)
                .at_energy(m.entries())
                .with_optimizer(&inf.m_star)
                .flags(inf.boundary, inf.flat),
        );
    }
    Ok(report)
}

//! Derivative-free optimizers shared by the variational solvers: golden-section
//! line search, Nelder–Mead with a coordinate pattern-search polish, and a
//! deterministic multistart driver.

use crate::error::{Error, Result};
use crate::math::sqrt;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Which end of a plateau a line search settles on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tie {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMinimum {
    pub x: f64,
    pub value: f64,
    pub evals: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[a, b]` down to bracket width `tol`.
///
/// The function is evaluated on the closed interval only. On exact ties the
/// bracket moves toward `tie`, so a flat stretch resolves to its left or
/// right end.
pub fn golden_min<F>(mut f: F, a: f64, b: f64, tol: f64, tie: Tie) -> Result<LineMinimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a <= b) || !tol.is_finite() || tol <= 0.0 {
        return Err(Error::usage("golden_min", "need a <= b and tol > 0"));
    }
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 2;
    while hi - lo > tol && evals < 500 {
        let go_left = fc < fd || (fc == fd && tie == Tie::Left);
        if go_left {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d)?;
        }
        evals += 1;
    }
    // the final bracket ends are legitimate candidates too (minimum on the boundary)
    let flo = f(lo)?;
    let fhi = f(hi)?;
    evals += 2;
    let mut cands = [(lo, flo), (c, fc), (d, fd), (hi, fhi)];
    if tie == Tie::Right {
        cands.reverse();
    }
    let (x, value) = cands
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |best, (x, v)| if v < best.1 { (x, v) } else { best });
    if value.is_nan() || x.is_nan() {
        return Err(Error::numerics("golden_min", "objective returned NaN", None));
    }
    Ok(LineMinimum { x, value, evals })
}

/// Golden-section maximization; ties resolve toward `tie`.
pub fn golden_max<F>(mut f: F, a: f64, b: f64, tol: f64, tie: Tie) -> Result<LineMinimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = golden_min(|x| f(x).map(|v| -v), a, b, tol, tie)?;
    Ok(LineMinimum {
        value: -m.value,
        ..m
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex search followed by a coordinate pattern search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexSearch {
    pub initial_step: f64,
    /// Spread of objective values across the simplex at convergence.
    pub ftol: f64,
    /// Simplex radius at convergence.
    pub xtol: f64,
    pub max_evals: usize,
    /// Smallest coordinate step tried by the polish.
    pub polish_step: f64,
}

impl Default for SimplexSearch {
    fn default() -> Self {
        SimplexSearch {
            initial_step: 0.1,
            ftol: 1e-13,
            xtol: 1e-9,
            max_evals: 6000,
            polish_step: 1e-9,
        }
    }
}

impl SimplexSearch {
    pub fn minimize<F>(&self, f: &F, x0: &[f64]) -> Result<Minimum>
    where
        F: Fn(&[f64]) -> Result<f64> + ?Sized,
    {
        let first = self.nelder_mead(f, x0, self.initial_step, self.max_evals)?;
        // restarting from the best vertex undoes premature collapse of the simplex
        let budget = self.max_evals.saturating_sub(first.evals).max(50);
        let second = self.nelder_mead(f, &first.x, self.initial_step * 0.1, budget)?;
        let mut best = if second.value <= first.value { second.clone() } else { first.clone() };
        best.evals = first.evals + second.evals;
        best.converged = first.converged || second.converged;
        self.polish(f, best)
    }

    fn nelder_mead<F>(&self, f: &F, x0: &[f64], step: f64, max_evals: usize) -> Result<Minimum>
    where
        F: Fn(&[f64]) -> Result<f64> + ?Sized,
    {
        let n = x0.len();
        if n == 0 {
            let value = f(x0)?;
            return Ok(Minimum {
                x: Vec::new(),
                value,
                evals: 1,
                converged: true,
            });
        }
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        pts.push(x0.to_vec());
        for i in 0..n {
            let mut p = x0.to_vec();
            p[i] += if p[i] >= 0.0 { step } else { -step };
            pts.push(p);
        }
        let mut vals = Vec::with_capacity(n + 1);
        for p in &pts {
            vals.push(f(p)?);
        }
        let mut evals = n + 1;
        let mut converged = false;
        let mut order: Vec<usize> = (0..=n).collect();
        while evals < max_evals {
            order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
            let best = order[0];
            let worst = order[n];
            let second_worst = order[n - 1];
            let spread = vals[worst] - vals[best];
            let radius = pts
                .iter()
                .map(|p| dist(p, &pts[best]))
                .fold(0.0, f64::max);
            if spread <= self.ftol && radius <= self.xtol {
                converged = true;
                break;
            }
            let mut centroid = vec![0.0; n];
            for &i in &order[..n] {
                for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                    *c += x / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&pts[worst])
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };
            let xr = along(-1.0);
            let fr = f(&xr)?;
            evals += 1;
            if fr < vals[best] {
                let xe = along(-2.0);
                let fe = f(&xe)?;
                evals += 1;
                if fe < fr {
                    pts[worst] = xe;
                    vals[worst] = fe;
                } else {
                    pts[worst] = xr;
                    vals[worst] = fr;
                }
                continue;
            }
            if fr < vals[second_worst] {
                pts[worst] = xr;
                vals[worst] = fr;
                continue;
            }
            let (xc, fc) = if fr < vals[worst] {
                let xc = along(-0.5);
                let fc = f(&xc)?;
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = f(&xc)?;
                (xc, fc)
            };
            evals += 1;
            if fc < vals[worst].min(fr) {
                pts[worst] = xc;
                vals[worst] = fc;
                continue;
            }
            // shrink toward the best vertex
            let xb = pts[best].clone();
            for i in 0..=n {
                if i == best {
                    continue;
                }
                for (x, b) in pts[i].iter_mut().zip(&xb) {
                    *x = b + 0.5 * (*x - b);
                }
                vals[i] = f(&pts[i])?;
                evals += 1;
            }
        }
        let best = (0..=n)
            .min_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)))
            .unwrap();
        if vals[best].is_nan() {
            return Err(Error::numerics("nelder_mead", "objective returned NaN", None));
        }
        Ok(Minimum {
            x: pts[best].clone(),
            value: vals[best],
            evals,
            converged,
        })
    }

    fn polish<F>(&self, f: &F, mut m: Minimum) -> Result<Minimum>
    where
        F: Fn(&[f64]) -> Result<f64> + ?Sized,
    {
        let mut step = (self.initial_step * 0.1).max(self.polish_step);
        let budget = m.evals + 40 * (m.x.len() + 1) * 30;
        while step >= self.polish_step && m.evals < budget {
            let mut improved = false;
            for i in 0..m.x.len() {
                for dir in [1.0, -1.0] {
                    let mut y = m.x.clone();
                    y[i] += dir * step;
                    let v = f(&y)?;
                    m.evals += 1;
                    if v < m.value {
                        m.x = y;
                        m.value = v;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.25;
            }
        }
        Ok(m)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Runs `search` from every start and keeps the lowest value. Ties are broken
/// lexicographically on the parameter vector, so the result does not depend
/// on execution order.
///
/// Fails with a numerics error carrying the best value when no start
/// converged within the evaluation budget.
pub fn multistart<F>(search: &SimplexSearch, f: &F, starts: Vec<Vec<f64>>) -> Result<Minimum>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if starts.is_empty() {
        return Err(Error::usage("multistart", "no starting points"));
    }
    let runs = crate::par::map(starts, |x0| search.minimize(f, &x0));
    let mut best: Option<Minimum> = None;
    let mut any_converged = false;
    for run in runs {
        let run = run?;
        any_converged |= run.converged;
        best = match best {
            None => Some(run),
            Some(b) => Some(if better(&run, &b) { run } else { b }),
        };
    }
    let best = best.unwrap();
    if !any_converged {
        return Err(Error::numerics(
            "multistart",
            alloc::format!("no start converged; best value {}", best.value),
            Some(best.value),
        ));
    }
    Ok(best)
}

fn better(a: &Minimum, b: &Minimum) -> bool {
    match a.value.partial_cmp(&b.value) {
        Some(Ordering::Less) => true,
        Some(Ordering::Greater) => false,
        _ => a
            .x
            .iter()
            .zip(&b.x)
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
            .find(|o| *o != Ordering::Equal)
            == Some(Ordering::Less),
    }
}

//! Canned curve sweeps over one-parameter state families: the geometric
//! measure, the `F`/`co F` bounds, and numerical `E_R` dots at selected grid
//! points. The CLI renders these rows to CSV.

use rayon::prelude::*;

use crate::error::Result;
use crate::gme::{epsilon_symmetric, lambda_max_numeric, GmeConfig};
use crate::re::{co_f_two_component, er_numeric, f_upper, monotone_f, ErConfig, Restriction};
use crate::zoo::{make_dicke_mixture, make_w_superposition, two_component};

/// The three-qubit two-component families (`ρ_{3;0,1}`, `ρ_{3;0,2}`, `ρ_{3;1,2}`).
pub const FIG2_FAMILIES: [(usize, usize, usize); 3] = [(3, 0, 1), (3, 0, 2), (3, 1, 2)];
/// `ρ_{4;0,3}`, shown with a blow-up of `s ∈ [0, 0.01]`.
pub const FIG3_FAMILY: (usize, usize, usize) = (4, 0, 3);
/// The remaining four-qubit families.
pub const FIG4_FAMILIES: [(usize, usize, usize); 4] = [(4, 0, 1), (4, 0, 2), (4, 1, 2), (4, 1, 3)];
/// Seven-qubit bound comparison family.
pub const FIG5_FAMILY: (usize, usize, usize) = (7, 2, 5);
/// Eleven-qubit `ℰ` vs `F` family.
pub const FIG6_FAMILY: (usize, usize, usize) = (11, 2, 6);

/// Sweep controls shared by the figures.
#[derive(Debug, Clone)]
pub struct FigureConfig {
    /// Points in the `s` (or `x`) sweep.
    pub grid: usize,
    /// Number of grid points at which numerical `E_R` is evaluated.
    pub numeric_points: usize,
    /// Starts per numerical `E_R` run.
    pub starts: usize,
    pub seed: u64,
    /// Disable the numerical `E_R` column entirely.
    pub numeric: bool,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            grid: 101,
            numeric_points: 11,
            starts: 16,
            seed: 0,
            numeric: true,
        }
    }
}

fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Indices of the rows that get a numerical `E_R` dot.
fn numeric_indices(rows: usize, points: usize) -> Vec<usize> {
    if points == 0 || rows == 0 {
        return Vec::new();
    }
    if points >= rows {
        return (0..rows).collect();
    }
    let mut out: Vec<usize> = (0..points)
        .map(|j| (j as f64 * (rows - 1) as f64 / (points - 1) as f64).round() as usize)
        .collect();
    out.dedup();
    out
}

/// `|WW̃(s)⟩` sweep: geometric `E_log₂` curve with numerical `E_R` dots.
#[derive(Debug, Clone)]
pub struct Fig1Row {
    pub s: f64,
    pub e_log2: f64,
    pub er_numeric: Option<f64>,
}

pub fn fig1_rows(fc: &FigureConfig) -> Result<Vec<Fig1Row>> {
    let xs = uniform_grid(0.0, 1.0, fc.grid.max(2));
    let gme_cfg = GmeConfig {
        starts: 24,
        seed: fc.seed,
        ..GmeConfig::default()
    };
    let mut rows = xs
        .iter()
        .map(|&s| {
            let psi = make_w_superposition(s)?;
            let r = lambda_max_numeric(&psi, &gme_cfg)?;
            Ok(Fig1Row {
                s,
                e_log2: r.e_log2,
                er_numeric: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if fc.numeric {
        let picks = numeric_indices(rows.len(), fc.numeric_points);
        let dots: Vec<(usize, f64)> = picks
            .par_iter()
            .map(|&idx| {
                let s = xs[idx];
                let psi = make_w_superposition(s)?;
                let rho = psi.density()?;
                let cfg = ErConfig {
                    ensemble_size: 64,
                    starts: fc.starts,
                    seed: fc.seed.wrapping_add(idx as u64),
                    ..ErConfig::for_structure(rho.structure())
                };
                Ok((idx, er_numeric(&rho, &cfg)?.value))
            })
            .collect::<Result<Vec<_>>>()?;
        for (idx, v) in dots {
            rows[idx].er_numeric = Some(v);
        }
    }
    Ok(rows)
}

/// One row of an `F` / `co F` / numerical-`E_R` family sweep.
#[derive(Debug, Clone)]
pub struct FamilyRow {
    pub s: f64,
    pub f: f64,
    pub co_f: f64,
    pub er_numeric: Option<f64>,
}

/// Family sweep over the full range `s ∈ [0, 1]`.
pub fn family_rows(n: usize, k1: usize, k2: usize, fc: &FigureConfig) -> Result<Vec<FamilyRow>> {
    family_rows_range(n, k1, k2, 0.0, 1.0, fc)
}

/// Family sweep over `s ∈ [lo, hi]` (the convex envelope is still taken
/// over the full segment `[0, 1]`).
pub fn family_rows_range(
    n: usize,
    k1: usize,
    k2: usize,
    lo: f64,
    hi: f64,
    fc: &FigureConfig,
) -> Result<Vec<FamilyRow>> {
    let xs = uniform_grid(lo, hi, fc.grid.max(2));
    let env = co_f_two_component(n, k1, k2, 1001)?;
    let tight = env.is_tight(1e-12);
    let mut rows = Vec::with_capacity(xs.len());
    for &s in &xs {
        let mut p = vec![0.0; n + 1];
        p[k1] = s;
        p[k2] = 1.0 - s;
        let f = f_upper(n, &p)?;
        let co_f = if tight { f } else { env.envelope_at(s).min(f) };
        rows.push(FamilyRow {
            s,
            f,
            co_f,
            er_numeric: None,
        });
    }
    if fc.numeric {
        let picks = numeric_indices(rows.len(), fc.numeric_points);
        let dots: Vec<(usize, f64)> = picks
            .par_iter()
            .map(|&idx| {
                let s = xs[idx];
                let rho = make_dicke_mixture(&two_component(n, k1, k2, s)?);
                let d = rho.total_dim();
                let cfg = ErConfig {
                    ensemble_size: d * d,
                    starts: fc.starts,
                    max_iters: 500,
                    tol: 1e-9,
                    seed: fc.seed.wrapping_add(1000 + idx as u64),
                    restrict: Restriction::None,
                };
                Ok((idx, er_numeric(&rho, &cfg)?.value))
            })
            .collect::<Result<Vec<_>>>()?;
        for (idx, v) in dots {
            rows[idx].er_numeric = Some(v);
        }
    }
    Ok(rows)
}

/// `F` and `co F` only (no numerics); used for the seven-qubit family.
#[derive(Debug, Clone)]
pub struct BoundRow {
    pub s: f64,
    pub f: f64,
    pub co_f: f64,
}

pub fn fig5_rows(grid: usize) -> Result<Vec<BoundRow>> {
    let (n, k1, k2) = FIG5_FAMILY;
    let xs = uniform_grid(0.0, 1.0, grid.max(2));
    let env = co_f_two_component(n, k1, k2, 1001)?;
    let tight = env.is_tight(1e-12);
    xs.into_iter()
        .map(|s| {
            let mut p = vec![0.0; n + 1];
            p[k1] = s;
            p[k2] = 1.0 - s;
            let f = f_upper(n, &p)?;
            let co_f = if tight { f } else { env.envelope_at(s).min(f) };
            Ok(BoundRow { s, f, co_f })
        })
        .collect()
}

/// `ℰ` vs `F` for the eleven-qubit family.
#[derive(Debug, Clone)]
pub struct EpsilonRow {
    pub s: f64,
    pub epsilon: f64,
    pub f: f64,
}

pub fn fig6_rows(grid: usize) -> Result<Vec<EpsilonRow>> {
    let (n, k1, k2) = FIG6_FAMILY;
    uniform_grid(0.0, 1.0, grid.max(2))
        .into_iter()
        .map(|s| {
            let mut p = vec![0.0; n + 1];
            p[k1] = s;
            p[k2] = 1.0 - s;
            Ok(EpsilonRow {
                s,
                epsilon: epsilon_symmetric(n, &p)?,
                f: f_upper(n, &p)?,
            })
        })
        .collect()
}

/// The monotonicity counterexample curve `f(4, x)`.
#[derive(Debug, Clone)]
pub struct MonotoneRow {
    pub x: f64,
    pub f: f64,
}

pub fn fig7_rows(grid: usize) -> Result<Vec<MonotoneRow>> {
    uniform_grid(0.0, 1.0, grid.max(2))
        .into_iter()
        .map(|x| {
            Ok(MonotoneRow {
                x,
                f: monotone_f(4, x)?,
            })
        })
        .collect()
}

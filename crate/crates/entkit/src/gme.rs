//! Geometric measure of entanglement: the entanglement eigenvalue `Λ_max`
//! (maximal overlap with product states), closed forms for the symmetric and
//! antisymmetric families, an alternating multi-start solver for arbitrary
//! pure states, the symmetric-sector function `ℰ({q})`, and the lower convex
//! envelope used for one-parameter convex-roof segments.

use ndarray::Array1;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::state::{advance, PartyStructure, ProductState, PureState};
use crate::tolerances::WEIGHT_TOL;
use crate::zoo::{binom, factorial};

/// Solver controls for [`lambda_max_numeric`].
#[derive(Debug, Clone)]
pub struct GmeConfig {
    /// Number of independent starts (first two are deterministic heuristics).
    pub starts: usize,
    /// Hard cap on alternating sweeps per start.
    pub max_sweeps: usize,
    /// Convergence threshold on the overlap change per full sweep.
    pub tol: f64,
    /// Seed for the random starts; each start uses its own substream.
    pub seed: u64,
}

impl Default for GmeConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            max_sweeps: 500,
            tol: 1e-12,
            seed: 0,
        }
    }
}

impl GmeConfig {
    fn validate(&self) -> Result<()> {
        if self.starts < 1 {
            return Err(Error::InvalidParameter("starts must be >= 1".into()));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter("tol must be > 0".into()));
        }
        Ok(())
    }
}

/// Output of the alternating solver.
#[derive(Debug, Clone)]
pub struct GmeResult {
    /// Best overlap found, clamped into `(0, 1]`.
    pub lambda_max: f64,
    /// The maximizing product state.
    pub closest: ProductState,
    /// `1 − Λ²_max`.
    pub e_sin2: f64,
    /// `−2·log₂ Λ_max`, in bits.
    pub e_log2: f64,
    /// Whether the best start met the sweep-to-sweep tolerance.
    pub converged: bool,
    /// Sweeps used by the best start.
    pub sweeps_used: usize,
}

/// Families with closed-form entanglement eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormFamily {
    /// `|S(n,k)⟩`: `√(C^n_k) (k/n)^{k/2} ((n−k)/n)^{(n−k)/2}`.
    Dicke { n: usize, k: usize },
    /// `|S(n,{k})⟩`: `√(n!/Πkᵢ!) Π (kᵢ/n)^{kᵢ/2}`.
    Generalized { n: usize, counts: Vec<usize> },
    /// `|Detₙ⟩`: `Λ² = 1/n!`.
    Det { n: usize },
    /// `|Det_{n,d}⟩` with `d^p` slots: `Λ² = 1/(d^p)!`.
    DetGeneral { d: usize, p: usize },
}

/// Exact closed-form `Λ_max` for the supported families.
pub fn lambda_max_closed_form(family: &ClosedFormFamily) -> Result<f64> {
    match family {
        ClosedFormFamily::Dicke { n, k } => {
            if *n == 0 || *k > *n {
                return Err(Error::InvalidParameter(format!("n = {n}, k = {k}")));
            }
            let n_f = *n as f64;
            let k_f = *k as f64;
            // 0^0 = 1 at the product-state endpoints.
            Ok(binom(*n, *k).sqrt()
                * (k_f / n_f).powf(k_f / 2.0)
                * ((n_f - k_f) / n_f).powf((n_f - k_f) / 2.0))
        }
        ClosedFormFamily::Generalized { n, counts } => {
            if counts.len() < 2 || counts.iter().sum::<usize>() != *n {
                return Err(Error::InvalidParameter(format!(
                    "counts {counts:?} do not sum to n = {n}"
                )));
            }
            let multinomial = counts
                .iter()
                .fold(factorial(*n), |acc, &k| acc / factorial(k))
                as f64;
            let n_f = *n as f64;
            let prod: f64 = counts
                .iter()
                .map(|&k| (k as f64 / n_f).powf(k as f64 / 2.0))
                .product();
            Ok(multinomial.sqrt() * prod)
        }
        ClosedFormFamily::Det { n } => {
            if !(2..=6).contains(n) {
                return Err(Error::InvalidParameter(format!("n = {n} not in 2..=6")));
            }
            Ok(1.0 / (factorial(*n) as f64).sqrt())
        }
        ClosedFormFamily::DetGeneral { d, p } => {
            if *d < 2 || *p == 0 {
                return Err(Error::InvalidParameter(format!("d = {d}, p = {p}")));
            }
            let slots = d.pow(*p as u32);
            if slots > 6 {
                return Err(Error::SizeLimit(format!("d^p = {slots} > 6")));
            }
            Ok(1.0 / (factorial(slots) as f64).sqrt())
        }
    }
}

/// Contraction of the amplitude tensor against the conjugated locals of all
/// parties except `skip`: the alternating update vector for party `skip`.
pub(crate) fn contract_all_but(
    amps: &Array1<Complex64>,
    dims: &[usize],
    locals: &[Array1<Complex64>],
    skip: usize,
) -> Array1<Complex64> {
    let n = dims.len();
    let mut out = Array1::<Complex64>::zeros(dims[skip]);
    let mut digits = vec![0usize; n];
    for &a in amps.iter() {
        if a != Complex64::ZERO {
            let mut prod = a;
            for b in 0..n {
                if b != skip {
                    prod *= locals[b][digits[b]].conj();
                }
            }
            out[digits[skip]] += prod;
        }
        advance(&mut digits, dims);
    }
    out
}

pub(crate) struct StartRun {
    pub locals: Vec<Array1<Complex64>>,
    pub overlap: f64,
    pub sweeps: usize,
    pub converged: bool,
    /// Overlap reached after each full sweep; non-decreasing.
    #[allow(dead_code)] // read by the monotonicity tests
    pub history: Vec<f64>,
}

/// One full pass of the alternating fixed-point iteration from `init`.
pub(crate) fn run_single_start(
    psi: &PureState,
    mut locals: Vec<Array1<Complex64>>,
    max_sweeps: usize,
    tol: f64,
) -> StartRun {
    let dims = psi.structure().dims().to_vec();
    let n = dims.len();
    let mut history = Vec::new();
    let mut last = -1.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    for sweep in 0..max_sweeps {
        let mut overlap = 0.0;
        for party in 0..n {
            let v = contract_all_but(psi.amplitudes(), &dims, &locals, party);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                // The contraction vanished (orthogonal environment); restart
                // this local at the uniform superposition.
                let d = dims[party];
                let u = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
                locals[party] = Array1::from_elem(d, u);
                overlap = 0.0;
                continue;
            }
            locals[party] = v.mapv(|z| z / norm);
            overlap = norm;
        }
        history.push(overlap);
        sweeps = sweep + 1;
        if (overlap - last).abs() < tol {
            converged = true;
            break;
        }
        last = overlap;
    }
    let overlap = *history.last().unwrap_or(&0.0);
    StartRun {
        locals,
        overlap,
        sweeps,
        converged,
        history,
    }
}

fn basis_start(psi: &PureState) -> Vec<Array1<Complex64>> {
    let structure = psi.structure();
    let best = psi
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    ProductState::basis(structure.clone(), best)
        .expect("basis index in range")
        .locals()
        .to_vec()
}

fn uniform_start(structure: &PartyStructure) -> Vec<Array1<Complex64>> {
    structure
        .dims()
        .iter()
        .map(|&d| Array1::from_elem(d, Complex64::new(1.0 / (d as f64).sqrt(), 0.0)))
        .collect()
}

pub(crate) fn random_locals(structure: &PartyStructure, rng: &mut ChaCha8Rng) -> Vec<Array1<Complex64>> {
    structure
        .dims()
        .iter()
        .map(|&d| {
            let mut v: Array1<Complex64> = Array1::from_iter((0..d).map(|_| {
                Complex64::new(
                    rng.sample(rand_distr::StandardNormal),
                    rng.sample(rand_distr::StandardNormal),
                )
            }));
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                v[0] = Complex64::new(1.0, 0.0);
                return v;
            }
            v.mapv_inplace(|z| z / norm);
            v
        })
        .collect()
}

/// Entanglement eigenvalue by alternating fixed-point iteration of the
/// stationarity conditions, best over `cfg.starts` independent starts.
///
/// Start 0 is the largest-amplitude basis product state, start 1 the uniform
/// symmetric ansatz, the rest draw Haar-like random locals from per-start
/// substreams of `cfg.seed`. Each sweep is monotonically non-decreasing in
/// overlap; a start converges when the overlap change per sweep drops below
/// `cfg.tol`. Non-convergence is reported through `converged = false` with
/// the best iterate still returned.
pub fn lambda_max_numeric(psi: &PureState, cfg: &GmeConfig) -> Result<GmeResult> {
    cfg.validate()?;
    let structure = psi.structure().clone();
    let runs: Vec<StartRun> = (0..cfg.starts)
        .into_par_iter()
        .map(|start| {
            let init = match start {
                0 => basis_start(psi),
                1 => uniform_start(&structure),
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(start as u64);
                    random_locals(&structure, &mut rng)
                }
            };
            run_single_start(psi, init, cfg.max_sweeps, cfg.tol)
        })
        .collect();

    // Deterministic reduction: best overlap, ties to the lowest start index.
    let mut best = 0usize;
    for i in 1..runs.len() {
        if runs[i].overlap > runs[best].overlap {
            best = i;
        }
    }
    let run = &runs[best];
    let lambda = run.overlap.clamp(f64::MIN_POSITIVE, 1.0);
    let closest = ProductState::from_unnormalized(structure, run.locals.clone())?;
    Ok(GmeResult {
        lambda_max: lambda,
        closest,
        e_sin2: (1.0 - lambda * lambda).max(0.0),
        e_log2: (-2.0 * lambda.log2()).max(0.0),
        converged: run.converged,
        sweeps_used: run.sweeps,
    })
}

/// `E_sin² = 1 − Λ²_max` and `E_log₂ = −2·log₂ Λ_max` for a pure state.
pub fn e_measures(psi: &PureState, cfg: &GmeConfig) -> Result<GmeResult> {
    lambda_max_numeric(psi, cfg)
}

/// `ℰ({q}) = −2·log₂ max_θ Σ_k √(q_k C^n_k) cos^k θ sin^{n−k} θ` for the
/// symmetric-sector pure state `Σ_k √q_k |S(n,k)⟩`.
///
/// The maximum over `θ ∈ [0, π/2]` is found by a 256-interval bracket scan
/// followed by golden-section refinement to 1e-12.
pub fn epsilon_symmetric(n: usize, q: &[f64]) -> Result<f64> {
    if q.len() != n + 1 {
        return Err(Error::InvalidDistribution(format!(
            "need {} weights for n = {n}",
            n + 1
        )));
    }
    if let Some(&p) = q.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::InvalidDistribution(format!("weight {p}")));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidDistribution(format!("sum {sum}")));
    }
    let coeffs: Vec<f64> = (0..=n).map(|k| (q[k] * binom(n, k)).sqrt()).collect();
    let g = |theta: f64| -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(k, &w)| w * c.powi(k as i32) * s.powi((n - k) as i32))
            .sum()
    };
    let lambda = maximize_on_interval(g, 0.0, std::f64::consts::FRAC_PI_2, 256, 1e-12);
    Ok((-2.0 * lambda.min(1.0).log2()).max(0.0))
}

/// Bracket scan plus golden-section refinement; returns the maximum value.
pub(crate) fn maximize_on_interval(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    scan_intervals: usize,
    xtol: f64,
) -> f64 {
    let m = scan_intervals.max(2);
    let step = (hi - lo) / m as f64;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..=m {
        let v = f(lo + step * i as f64);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > xtol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    best_v.max(f1).max(f2)
}

/// A sampled function on `[0, 1]` together with its lower convex envelope.
#[derive(Debug, Clone)]
pub struct Envelope1D {
    /// Uniform grid over `[0, 1]`.
    pub xs: Vec<f64>,
    /// `f` at the grid points.
    pub values: Vec<f64>,
    /// Lower convex envelope at the grid points.
    pub envelope: Vec<f64>,
    hull: Vec<(f64, f64)>,
}

impl Envelope1D {
    /// Envelope value at arbitrary `x ∈ [0, 1]` (linear on hull segments).
    pub fn envelope_at(&self, x: f64) -> f64 {
        let h = &self.hull;
        if x <= h[0].0 {
            return h[0].1;
        }
        for w in h.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if x <= x1 {
                let t = (x - x0) / (x1 - x0);
                return y0 + t * (y1 - y0);
            }
        }
        h.last().unwrap().1
    }

    /// True when the envelope coincides with the samples everywhere (within
    /// `tol`), i.e. the sampled function was already convex.
    pub fn is_tight(&self, tol: f64) -> bool {
        self.values
            .iter()
            .zip(&self.envelope)
            .all(|(v, e)| v - e <= tol)
    }
}

/// Lower convex envelope of `f` sampled on a uniform grid over `[0, 1]`,
/// computed by a monotone-chain lower hull. The envelope is convex, sits at
/// or below `f` pointwise, and touches `f` at both endpoints.
pub fn convex_roof_segment(f: impl Fn(f64) -> f64, grid: usize) -> Result<Envelope1D> {
    if grid < 3 {
        return Err(Error::InvalidParameter("grid must be >= 3".into()));
    }
    let xs: Vec<f64> = (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect();
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "function not finite on [0,1]: {bad}"
        )));
    }

    let mut hull: Vec<(f64, f64)> = Vec::new();
    for (&x, &y) in xs.iter().zip(&values) {
        while hull.len() >= 2 {
            let (x0, y0) = hull[hull.len() - 2];
            let (x1, y1) = hull[hull.len() - 1];
            let cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }

    let mut envelope = Vec::with_capacity(grid);
    let mut seg = 0usize;
    for &x in &xs {
        while seg + 1 < hull.len() - 1 && hull[seg + 1].0 < x {
            seg += 1;
        }
        let (x0, y0) = hull[seg];
        let (x1, y1) = hull[seg + 1.min(hull.len() - 1 - seg)];
        let e = if x1 > x0 {
            y0 + (x - x0) / (x1 - x0) * (y1 - y0)
        } else {
            y0
        };
        envelope.push(e.min(values[envelope.len()]));
    }

    Ok(Envelope1D {
        xs,
        values,
        envelope,
        hull,
    })
}

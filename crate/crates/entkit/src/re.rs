//! Relative entropy of entanglement: the geometric lower bound, direct
//! numerical minimization of `S(ρ‖σ)` over separable ensembles, the `F({p})`
//! upper bound with its stationarity angle, segment convexifications `co F`,
//! the closed forms they imply for two-component Dicke mixtures, the
//! partial-trace bound saturation check, and the monotonicity counterexample
//! `f(N,x)`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entropy::{cross_term, eigenvalue_log2_trace, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::gme::{
    contract_all_but, convex_roof_segment, lambda_max_closed_form, lambda_max_numeric,
    random_locals, ClosedFormFamily, Envelope1D, GmeConfig,
};
use crate::linalg::{adjoint, hermitian_eig};
use crate::state::{
    partial_trace, DensityMatrix, PartyStructure, ProductState, PureState, SeparableEnsemble,
};
use crate::tolerances::WEIGHT_TOL;
use crate::zoo::{binom, make_dicke, sigma_theta_weights};

const LN_2: f64 = std::f64::consts::LN_2;

/// Search space for [`er_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// Generic separable ensembles `Σ pᵢ|φᵢ⟩⟨φᵢ|`.
    None,
    /// Mixtures `Σ tᵢ σ(θᵢ)` of the binomial Dicke-diagonal states; valid
    /// for Dicke-diagonal inputs, where this set contains a closest
    /// separable state.
    DickeDiagonal,
}

/// Controls for [`er_numeric`].
#[derive(Debug, Clone)]
pub struct ErConfig {
    /// Number of product terms (or `σ(θ)` components under restriction).
    pub ensemble_size: usize,
    pub starts: usize,
    pub max_iters: usize,
    /// Convergence window: stop once the objective improves by less than
    /// this over 50 iterations.
    pub tol: f64,
    pub seed: u64,
    pub restrict: Restriction,
}

impl ErConfig {
    /// Defaults for a given state: `ensemble_size = D²`, 16 starts.
    pub fn for_structure(structure: &PartyStructure) -> Self {
        let d = structure.total_dim();
        Self {
            ensemble_size: d * d,
            starts: 16,
            max_iters: 500,
            tol: 1e-9,
            seed: 0,
            restrict: Restriction::None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.ensemble_size < 1 {
            return Err(Error::InvalidParameter("ensemble_size must be >= 1".into()));
        }
        if self.starts < 1 || self.max_iters < 1 {
            return Err(Error::InvalidParameter(
                "starts and max_iters must be >= 1".into(),
            ));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter("tol must be > 0".into()));
        }
        Ok(())
    }
}

/// The separable state found by the minimizer.
#[derive(Debug, Clone)]
pub enum ErSigma {
    Ensemble(SeparableEnsemble),
    /// Under [`Restriction::DickeDiagonal`]: `σ = Σ tᵢ σ(θᵢ)`.
    ThetaMixture { weights: Vec<f64>, thetas: Vec<f64> },
}

/// Result of the separable-state minimization. `value` is a certified upper
/// bound on `E_R`: the returned `sigma` is separable by construction and
/// `value = S(ρ‖σ)`.
#[derive(Debug, Clone)]
pub struct ErResult {
    pub value: f64,
    pub sigma: ErSigma,
    pub converged: bool,
    /// Accepted objective values, one per iteration; non-increasing.
    pub trace: Vec<f64>,
}

/// Geometric lower bound `E_R(|ψ⟩) ≥ −2·log₂ Λ_max(ψ)`.
pub fn er_lower_bound(psi: &PureState, cfg: &GmeConfig) -> Result<f64> {
    Ok(lambda_max_numeric(psi, cfg)?.e_log2)
}

/// Stationarity angle of `S(ρ({p})‖σ(θ))`:
/// `tan²θ = Σ_k p_k(n−k) / Σ_k p_k·k`, with `θ = π/2` when all weight sits
/// at `k = 0` and `θ = 0` when it all sits at `k = n`.
pub fn theta_star(n: usize, p: &[f64]) -> Result<f64> {
    validate_distribution(n, p)?;
    let numer: f64 = p.iter().enumerate().map(|(k, &w)| w * (n - k) as f64).sum();
    let denom: f64 = p.iter().enumerate().map(|(k, &w)| w * k as f64).sum();
    if denom <= 0.0 {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    if numer <= 0.0 {
        return Ok(0.0);
    }
    Ok((numer / denom).sqrt().atan())
}

/// Upper bound on `E_R` of the Dicke mixture `ρ({p})`:
/// `F({p}) = Σ_k p_k log₂[p_k n^n / (C^n_k α^k (n−α)^{n−k})]`, `α = Σ p_k·k`.
pub fn f_upper(n: usize, p: &[f64]) -> Result<f64> {
    validate_distribution(n, p)?;
    let alpha: f64 = p.iter().enumerate().map(|(k, &w)| w * k as f64).sum();
    let beta = (n as f64 - alpha).max(0.0);
    let n_f = n as f64;
    let mut total = 0.0;
    for (k, &w) in p.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        // log form: log₂ p_k + n log₂ n − log₂ C − k log₂ α − (n−k) log₂ β,
        // with 0·log 0 handled by the zero-exponent cases.
        let mut term = w.log2() + n_f * n_f.log2() - binom(n, k).log2();
        if k > 0 {
            term -= k as f64 * alpha.log2();
        }
        if k < n {
            term -= (n - k) as f64 * beta.log2();
        }
        total += w * term;
    }
    Ok(total)
}

fn validate_distribution(n: usize, p: &[f64]) -> Result<()> {
    if p.len() != n + 1 {
        return Err(Error::InvalidDistribution(format!(
            "need {} weights for n = {n}, got {}",
            n + 1,
            p.len()
        )));
    }
    if let Some(&w) = p.iter().find(|&&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidDistribution(format!("weight {w}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidDistribution(format!("sum {sum}")));
    }
    Ok(())
}

fn two_component_probs(n: usize, k1: usize, k2: usize, s: f64) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[k1] = s;
    p[k2] = 1.0 - s;
    p
}

/// Lower convex envelope of `s ↦ F(ρ_{n;k1,k2}(s))` over `s ∈ [0, 1]`.
pub fn co_f_two_component(n: usize, k1: usize, k2: usize, grid: usize) -> Result<Envelope1D> {
    if k1 == k2 || k1 > n || k2 > n {
        return Err(Error::InvalidParameter(format!(
            "bad two-component family ({n};{k1},{k2})"
        )));
    }
    // Parameters are validated above; the closure cannot fail.
    convex_roof_segment(
        |s| f_upper(n, &two_component_probs(n, k1, k2, s)).expect("validated family"),
        grid,
    )
}

/// `co F` of the two-component family at a single point. Exact where `F` is
/// convex (the envelope is `F` itself); interpolated on a 1001-point hull
/// otherwise.
pub fn co_f_two_component_at(n: usize, k1: usize, k2: usize, s: f64) -> Result<f64> {
    let env = co_f_two_component(n, k1, k2, 1001)?;
    if env.is_tight(1e-12) {
        f_upper(n, &two_component_probs(n, k1, k2, s))
    } else {
        Ok(env.envelope_at(s))
    }
}

/// Closed-form conjectured `E_R` for the two-component families where `F` is
/// convex: `(2;0,1)`, `(3;2,1)`, `(3;0,1)`, `(4;0,1)`, `(4;1,2)`, `(4;1,3)`,
/// plus their `k ↔ n−k` relabelings and `(k1,k2,s) ↔ (k2,k1,1−s)` swaps.
pub fn conjectured_er_closed(n: usize, k1: usize, k2: usize, s: f64) -> Result<f64> {
    if k1 == k2 || k1 > n || k2 > n {
        return Err(Error::InvalidParameter(format!(
            "bad two-component family ({n};{k1},{k2})"
        )));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("s = {s} not in [0,1]")));
    }
    let candidates = [
        (k1, k2, s),
        (n - k1, n - k2, s),
        (k2, k1, 1.0 - s),
        (n - k2, n - k1, 1.0 - s),
    ];
    for (a, b, t) in candidates {
        if let Some(v) = closed_form_table(n, a, b, t) {
            return Ok(v);
        }
    }
    Err(Error::UnsupportedFamily(format!(
        "({n};{k1},{k2}) has no closed form (convexification needed)"
    )))
}

/// `w·log₂(num/den)` with the `w = 0` term dropped.
fn wlog(w: f64, num: f64, den: f64) -> f64 {
    if w <= 0.0 {
        0.0
    } else {
        w * (num / den).log2()
    }
}

fn closed_form_table(n: usize, k1: usize, k2: usize, s: f64) -> Option<f64> {
    let v = match (n, k1, k2) {
        (2, 0, 1) => wlog(s, 4.0 * s, (1.0 + s).powi(2)) + wlog(1.0 - s, 2.0, 1.0 + s),
        (3, 2, 1) => {
            wlog(s, 9.0 * s, (1.0 + s).powi(2) * (2.0 - s))
                + wlog(1.0 - s, 9.0 * (1.0 - s), (2.0 - s).powi(2) * (1.0 + s))
        }
        (3, 0, 1) => {
            wlog(s, 27.0 * s, (2.0 + s).powi(3)) + wlog(1.0 - s, 9.0, (2.0 + s).powi(2))
        }
        (4, 0, 1) => {
            wlog(s, 256.0 * s, (3.0 + s).powi(4)) + wlog(1.0 - s, 64.0, (3.0 + s).powi(3))
        }
        (4, 1, 2) => {
            wlog(s, 64.0 * s, (2.0 - s) * (2.0 + s).powi(3))
                + wlog(
                    1.0 - s,
                    128.0 * (1.0 - s),
                    3.0 * (2.0 - s).powi(2) * (2.0 + s).powi(2),
                )
        }
        (4, 1, 3) => {
            wlog(s, 64.0 * s, (3.0 - 2.0 * s) * (1.0 + 2.0 * s).powi(3))
                + wlog(
                    1.0 - s,
                    64.0 * (1.0 - s),
                    (3.0 - 2.0 * s).powi(3) * (1.0 + 2.0 * s),
                )
        }
        _ => return None,
    };
    Some(v)
}

/// `f(N,x) = log₂(1+Nx²) − [Nx²/(1+Nx²)]·log₂N`; negative values witness
/// that `E_log₂` is not an entanglement monotone.
pub fn monotone_f(n_levels: usize, x: f64) -> Result<f64> {
    if n_levels < 1 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("x = {x} not in [0,1]")));
    }
    let nx2 = n_levels as f64 * x * x;
    Ok((1.0 + nx2).log2() - nx2 / (1.0 + nx2) * (n_levels as f64).log2())
}

// ---------------------------------------------------------------------------
// Dicke-basis helpers
// ---------------------------------------------------------------------------

/// Dicke-basis weights of `ρ` when it is diagonal in `{|S(n,k)⟩}` within
/// `tol` (max elementwise); `None` otherwise. Qubit registers only.
pub fn dicke_diagonal_weights(rho: &DensityMatrix, tol: f64) -> Option<Vec<f64>> {
    dicke_weights(rho, tol)
}

pub(crate) fn dicke_weights(rho: &DensityMatrix, tol: f64) -> Option<Vec<f64>> {
    if !rho.structure().is_qubits() {
        return None;
    }
    let n = rho.structure().party_count();
    let d = rho.total_dim();
    let mut weights = vec![0.0; n + 1];
    let mut recon = Array2::<Complex64>::zeros((d, d));
    for (k, w) in weights.iter_mut().enumerate() {
        let dicke = make_dicke(n, k).expect("valid Dicke parameters");
        let amps = dicke.amplitudes();
        let mut acc = Complex64::ZERO;
        for i in 0..d {
            if amps[i] == Complex64::ZERO {
                continue;
            }
            for j in 0..d {
                acc += amps[i].conj() * rho.matrix()[[i, j]] * amps[j];
            }
        }
        *w = acc.re.max(0.0);
        for i in 0..d {
            if amps[i] == Complex64::ZERO {
                continue;
            }
            for j in 0..d {
                recon[[i, j]] += amps[i] * amps[j].conj() * *w;
            }
        }
    }
    let defect = crate::linalg::max_abs_diff(&recon, rho.matrix());
    if defect > tol {
        return None;
    }
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);
    Some(weights)
}

// ---------------------------------------------------------------------------
// Restricted minimization over mixtures of σ(θ)
// ---------------------------------------------------------------------------

fn binomial_weight_dtheta(n: usize, k: usize, theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let b = binom(n, k);
    let mut out = 0.0;
    if k > 0 {
        out -= 2.0 * k as f64 * b * c.powi(2 * k as i32 - 1) * s.powi(2 * (n - k) as i32 + 1);
    }
    if k < n {
        out += 2.0 * (n - k) as f64 * b * c.powi(2 * k as i32 + 1) * s.powi(2 * (n - k) as i32 - 1);
    }
    out
}

struct RestrictedProblem {
    n: usize,
    r: Vec<f64>,
    r_log: f64, // Σ r_k log₂ r_k
}

impl RestrictedProblem {
    fn mixture_weights(&self, t: &[f64], thetas: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; self.n + 1];
        for (&ti, &th) in t.iter().zip(thetas) {
            if ti == 0.0 {
                continue;
            }
            for (k, w) in sigma_theta_weights(self.n, th).into_iter().enumerate() {
                s[k] += ti * w;
            }
        }
        s
    }

    fn objective(&self, t: &[f64], thetas: &[f64]) -> f64 {
        let s = self.mixture_weights(t, thetas);
        let mut cross = 0.0;
        for (k, &rk) in self.r.iter().enumerate() {
            if rk <= 1e-15 {
                continue;
            }
            if s[k] < 1e-300 {
                return f64::INFINITY;
            }
            cross += rk * s[k].log2();
        }
        self.r_log - cross
    }

    fn gradient(&self, v: &[f64], t: &[f64], thetas: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let s = self.mixture_weights(t, thetas);
        let m = t.len();
        let mut d = vec![0.0; self.n + 1];
        for (k, &rk) in self.r.iter().enumerate() {
            if rk > 1e-15 {
                d[k] = -rk / (s[k].max(1e-300) * LN_2);
            }
        }
        let mut gt = vec![0.0; m];
        let mut gtheta = vec![0.0; m];
        for i in 0..m {
            let w = sigma_theta_weights(self.n, thetas[i]);
            gt[i] = (0..=self.n).map(|k| d[k] * w[k]).sum();
            gtheta[i] = t[i]
                * (0..=self.n)
                    .map(|k| d[k] * binomial_weight_dtheta(self.n, k, thetas[i]))
                    .sum::<f64>();
        }
        let vsq: f64 = v.iter().map(|x| x * x).sum();
        let mean: f64 = t.iter().zip(&gt).map(|(ti, gi)| ti * gi).sum();
        let gv: Vec<f64> = v
            .iter()
            .zip(&gt)
            .map(|(&vi, &gi)| 2.0 * vi / vsq * (gi - mean))
            .collect();
        (gv, gtheta)
    }
}

fn simplex_from_raw(v: &[f64]) -> Vec<f64> {
    let total: f64 = v.iter().map(|x| x * x).sum();
    v.iter().map(|x| x * x / total).collect()
}

struct DescentOutcome {
    value: f64,
    trace: Vec<f64>,
    converged: bool,
}

/// Backtracking projected-gradient loop: one gradient per iteration, step
/// halved (up to 30 times) until the objective decreases, step doubled after
/// a first-try success.
fn descend<S: Clone, G>(
    state: &mut S,
    mut objective: impl FnMut(&S) -> f64,
    mut gradient: impl FnMut(&S) -> G,
    mut apply: impl FnMut(&S, &G, f64) -> S,
    max_iters: usize,
    window_tol: f64,
) -> DescentOutcome {
    let mut fcur = objective(state);
    let mut trace = vec![fcur];
    let mut step = 0.1;
    let mut converged = false;
    for _ in 0..max_iters {
        if !fcur.is_finite() {
            break;
        }
        let grad = gradient(state);
        let mut accepted = false;
        for halving in 0..30 {
            let candidate = apply(state, &grad, step);
            let fnew = objective(&candidate);
            if fnew < fcur {
                *state = candidate;
                fcur = fnew;
                if halving == 0 {
                    step *= 2.0;
                }
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // Stationary within line-search resolution.
            converged = true;
            break;
        }
        trace.push(fcur);
        let window = 50;
        if trace.len() > window {
            let before = trace[trace.len() - 1 - window];
            if before - fcur < window_tol {
                converged = true;
                break;
            }
        }
    }
    DescentOutcome {
        value: fcur,
        trace,
        converged,
    }
}

#[derive(Clone)]
struct RestrictedState {
    v: Vec<f64>,
    thetas: Vec<f64>,
}

fn er_restricted(rho: &DensityMatrix, cfg: &ErConfig) -> Result<ErResult> {
    let r = dicke_weights(rho, 1e-8).ok_or_else(|| {
        Error::InvalidParameter(
            "DICKE_DIAGONAL restriction needs a Dicke-diagonal qubit state".into(),
        )
    })?;
    let n = rho.structure().party_count();
    let problem = RestrictedProblem {
        n,
        r_log: r
            .iter()
            .filter(|&&x| x > 1e-15)
            .map(|&x| x * x.log2())
            .sum(),
        r: r.clone(),
    };
    let m = cfg.ensemble_size;
    let tstar = theta_star(n, &r)?;

    let runs: Vec<(DescentOutcome, RestrictedState)> = (0..cfg.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_d1ce);
            rng.set_stream(start as u64);
            let thetas: Vec<f64> = (0..m)
                .map(|j| {
                    if start == 0 {
                        if j == 0 {
                            tstar.clamp(0.02, std::f64::consts::FRAC_PI_2 - 0.02)
                        } else {
                            0.05 + (j as f64 / m as f64) * (std::f64::consts::FRAC_PI_2 - 0.1)
                        }
                    } else {
                        rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05)
                    }
                })
                .collect();
            let v: Vec<f64> = (0..m)
                .map(|_| {
                    if start == 0 {
                        1.0
                    } else {
                        rng.random_range(0.2..1.0f64)
                    }
                })
                .collect();
            let mut state = RestrictedState { v, thetas };
            let outcome = descend(
                &mut state,
                |s| problem.objective(&simplex_from_raw(&s.v), &s.thetas),
                |s| problem.gradient(&s.v, &simplex_from_raw(&s.v), &s.thetas),
                |s, (gv, gth), step| {
                    let v: Vec<f64> = s.v.iter().zip(gv).map(|(x, g)| x - step * g).collect();
                    let thetas: Vec<f64> =
                        s.thetas.iter().zip(gth).map(|(x, g)| x - step * g).collect();
                    RestrictedState { v, thetas }
                },
                cfg.max_iters,
                cfg.tol,
            );
            (outcome, state)
        })
        .collect();

    let best = select_best(runs.iter().map(|(o, _)| o.value));
    let (outcome, state) = &runs[best];
    let weights = simplex_from_raw(&state.v);
    let thetas: Vec<f64> = state.thetas.iter().map(|&t| fold_theta(t)).collect();
    Ok(ErResult {
        value: outcome.value.max(0.0),
        sigma: ErSigma::ThetaMixture { weights, thetas },
        converged: outcome.converged,
        trace: outcome.trace.clone(),
    })
}

fn fold_theta(theta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut t = theta.rem_euclid(pi);
    if t > pi / 2.0 {
        t = pi - t;
    }
    t
}

fn select_best(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0usize;
    let mut best_v = f64::INFINITY;
    for (i, v) in values.enumerate() {
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Unrestricted minimization over separable ensembles
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct EnsembleState {
    w: Vec<f64>,
    locals: Vec<Vec<Array1<Complex64>>>,
}

impl EnsembleState {
    fn product_vectors(&self) -> Vec<Array1<Complex64>> {
        self.locals
            .iter()
            .map(|ls| {
                let mut v = ls[0].clone();
                for l in &ls[1..] {
                    v = crate::linalg::kron_vec(&v, l);
                }
                v
            })
            .collect()
    }

    fn sigma(&self, dims: &[usize]) -> (Vec<f64>, Vec<Array1<Complex64>>, Array2<Complex64>) {
        let p = simplex_from_raw(&self.w);
        let phis = self.product_vectors();
        let d: usize = dims.iter().product();
        let mut sigma = Array2::<Complex64>::zeros((d, d));
        for (pi, phi) in p.iter().zip(&phis) {
            if *pi == 0.0 {
                continue;
            }
            for i in 0..d {
                let left = phi[i] * *pi;
                if left == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    sigma[[i, j]] += left * phi[j].conj();
                }
            }
        }
        (p, phis, sigma)
    }
}

struct EnsembleProblem {
    dims: Vec<usize>,
    rho: Array2<Complex64>,
    /// `Tr ρ log₂ ρ`, fixed across the minimization.
    rho_log_trace: f64,
}

impl EnsembleProblem {
    fn objective(&self, state: &EnsembleState) -> f64 {
        let (_, _, sigma) = state.sigma(&self.dims);
        let Ok(eig) = hermitian_eig(&sigma) else {
            return f64::INFINITY;
        };
        cross_term(&self.rho, &eig)
            .map_or(f64::INFINITY, |t2| self.rho_log_trace - t2)
    }

    /// Analytic gradient of `S(ρ‖σ(params))` via the spectral Fréchet
    /// derivative of the matrix logarithm. Validated against central
    /// differences in the tests below.
    fn gradient(&self, state: &EnsembleState) -> (Vec<f64>, Vec<Vec<Array1<Complex64>>>) {
        let (p, phis, sigma) = state.sigma(&self.dims);
        let eig = hermitian_eig(&sigma).expect("sigma is Hermitian by construction");
        let d = sigma.nrows();
        let v = &eig.eigenvectors;
        let vt = adjoint(v);
        let r_tilde = vt.dot(&self.rho).dot(v);
        // G with d Tr(ρ ln σ) = Tr(G dσ): G = V (R ∘ K) V†.
        let mut core = Array2::<Complex64>::zeros((d, d));
        for i in 0..d {
            let li = eig.eigenvalues[i].max(1e-30);
            for j in 0..d {
                let lj = eig.eigenvalues[j].max(1e-30);
                let k = if (li - lj).abs() <= 1e-12 * (li + lj) {
                    2.0 / (li + lj)
                } else {
                    (li.ln() - lj.ln()) / (li - lj)
                };
                core[[i, j]] = r_tilde[[i, j]] * k;
            }
        }
        let g = v.dot(&core).dot(&vt);

        let wsq: f64 = state.w.iter().map(|x| x * x).sum();
        let mut gw = vec![0.0; state.w.len()];
        let mut glocals: Vec<Vec<Array1<Complex64>>> = Vec::with_capacity(phis.len());
        for (i, phi) in phis.iter().enumerate() {
            let gphi = g.dot(phi);
            let q: f64 = phi
                .iter()
                .zip(gphi.iter())
                .map(|(a, b)| (a.conj() * b).re)
                .sum();
            gw[i] = -(2.0 * state.w[i] / (wsq * LN_2)) * (q - 1.0);
            let mut member_grads = Vec::with_capacity(self.dims.len());
            for party in 0..self.dims.len() {
                let env = contract_all_but(&gphi, &self.dims, &state.locals[i], party);
                // ∂/∂ū through the unit-norm constraint: (T û − q û).
                let tangent = &env - &state.locals[i][party].mapv(|z| z * q);
                member_grads.push(tangent.mapv(|z| z * (-p[i] / LN_2)));
            }
            glocals.push(member_grads);
        }
        (gw, glocals)
    }
}

fn normalize_locals(locals: &mut [Array1<Complex64>]) {
    for l in locals.iter_mut() {
        let norm = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            l[0] = Complex64::new(1.0, 0.0);
            let norm = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            l.mapv_inplace(|z| z / norm);
        } else {
            l.mapv_inplace(|z| z / norm);
        }
    }
}

/// Basis product states covering the full computational basis; mixing a
/// little of all of them keeps σ full rank so the objective starts finite.
fn basis_members(structure: &PartyStructure) -> Vec<Vec<Array1<Complex64>>> {
    (0..structure.total_dim())
        .map(|b| {
            ProductState::basis(structure.clone(), b)
                .expect("index in range")
                .locals()
                .to_vec()
        })
        .collect()
}

enum StartPlan {
    Diagonal,
    RestrictedExpansion,
    GmeOrbit,
    Random,
}

fn er_unrestricted(rho: &DensityMatrix, cfg: &ErConfig) -> Result<ErResult> {
    let structure = rho.structure().clone();
    let dims = structure.dims().to_vec();
    let d = structure.total_dim();
    let m = cfg.ensemble_size;
    let n = structure.party_count();

    let rho_eig = hermitian_eig(rho.matrix())?;
    let problem = EnsembleProblem {
        dims: dims.clone(),
        rho: rho.matrix().clone(),
        rho_log_trace: eigenvalue_log2_trace(&rho_eig.eigenvalues),
    };

    let is_pure = rho_eig.eigenvalues.last().copied().unwrap_or(0.0) > 1.0 - 1e-10;
    let dicke = dicke_weights(rho, 1e-8);

    // Expansion of the restricted optimum into product states: σ(θ) is the
    // exact (n+1)-point collective-phase average of |ξ(θ,φ)⟩.
    let restricted_seed: Option<Vec<(f64, f64)>> = if dicke.is_some() && m >= d + (n + 1) * 2 {
        let rcfg = ErConfig {
            ensemble_size: n + 2,
            starts: 6,
            max_iters: 400,
            tol: 1e-10,
            seed: cfg.seed ^ 0xd1c3,
            restrict: Restriction::DickeDiagonal,
        };
        er_restricted(rho, &rcfg).ok().map(|res| match res.sigma {
            ErSigma::ThetaMixture { weights, thetas } => {
                let mut pairs: Vec<(f64, f64)> = weights.into_iter().zip(thetas).collect();
                pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                // Keep as many θ components as the ensemble has room for.
                let cap = (m - d) / (n + 1);
                pairs.truncate(cap.max(1));
                let total: f64 = pairs.iter().map(|(w, _)| w).sum();
                pairs.into_iter().map(|(w, t)| (w / total, t)).collect()
            }
            _ => unreachable!("restricted solver returns theta mixtures"),
        })
    } else {
        None
    };

    let orbit_locals: Option<Vec<Vec<Array1<Complex64>>>> = if is_pure
        && structure.is_qubits()
        && m > d + n
    {
        let top = rho_eig.eigenvectors.column(d - 1).to_owned();
        let psi = PureState::from_unnormalized(structure.clone(), top).ok();
        psi.and_then(|psi| {
            let gcfg = GmeConfig {
                starts: 8,
                seed: cfg.seed ^ 0x0b17,
                ..GmeConfig::default()
            };
            lambda_max_numeric(&psi, &gcfg).ok().map(|r| {
                (0..=n)
                    .map(|j| {
                        let phi = 2.0 * std::f64::consts::PI * j as f64 / (n + 1) as f64;
                        r.closest
                            .locals()
                            .iter()
                            .map(|l| {
                                let mut rotated = l.clone();
                                rotated[1] *= Complex64::from_polar(1.0, phi);
                                rotated
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
        })
    } else {
        None
    };

    let basis = basis_members(&structure);
    let diag: Vec<f64> = rho.matrix().diag().iter().map(|z| z.re.max(0.0)).collect();

    let runs: Vec<(DescentOutcome, EnsembleState)> = (0..cfg.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xe45e);
            rng.set_stream(start as u64);
            let plan = match start {
                0 => StartPlan::Diagonal,
                1 if restricted_seed.is_some() => StartPlan::RestrictedExpansion,
                2 if orbit_locals.is_some() => StartPlan::GmeOrbit,
                _ => StartPlan::Random,
            };
            let mut weights_raw: Vec<f64> = Vec::with_capacity(m);
            let mut locals: Vec<Vec<Array1<Complex64>>> = Vec::with_capacity(m);

            // Every start reserves the basis block as the full-rank admixture.
            let basis_count = d.min(m);
            locals.extend(basis.iter().take(basis_count).cloned());
            match plan {
                StartPlan::Diagonal => {
                    let dsum: f64 = diag.iter().sum();
                    weights_raw.extend(
                        diag.iter()
                            .take(basis_count)
                            .map(|&p| (0.999 * (p / dsum) + 1e-3 / d as f64).sqrt()),
                    );
                }
                _ => {
                    weights_raw
                        .extend(std::iter::repeat_n((1e-3 / d as f64).sqrt(), basis_count));
                }
            }
            match plan {
                StartPlan::RestrictedExpansion => {
                    let pairs = restricted_seed.as_ref().unwrap();
                    for &(wt, theta) in pairs {
                        for j in 0..=n {
                            if locals.len() >= m {
                                break;
                            }
                            let phi = 2.0 * std::f64::consts::PI * j as f64 / (n + 1) as f64;
                            let xi = crate::zoo::make_product_ansatz(n, theta, phi);
                            locals.push(xi.locals().to_vec());
                            weights_raw.push((0.997 * wt / (n + 1) as f64).sqrt());
                        }
                    }
                }
                StartPlan::GmeOrbit => {
                    for member in orbit_locals.as_ref().unwrap() {
                        if locals.len() >= m {
                            break;
                        }
                        locals.push(member.clone());
                        weights_raw.push((0.997 / (n + 1) as f64).sqrt());
                    }
                }
                _ => {}
            }
            // Fill the remainder with random members.
            let fill_weight = match plan {
                StartPlan::Random => 0.997 / ((m - locals.len()).max(1)) as f64,
                _ => 1e-6,
            };
            while locals.len() < m {
                locals.push(random_locals(&structure, &mut rng));
                let jitter: f64 = rng.random_range(0.5..1.5);
                weights_raw.push((fill_weight * jitter).sqrt());
            }

            let mut state = EnsembleState {
                w: weights_raw,
                locals,
            };
            let outcome = descend(
                &mut state,
                |s| problem.objective(s),
                |s| problem.gradient(s),
                |s, (gw, gl), step| {
                    let mut w: Vec<f64> =
                        s.w.iter().zip(gw).map(|(x, g)| x - step * g).collect();
                    let wnorm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if wnorm > 1e-300 {
                        w.iter_mut().for_each(|x| *x /= wnorm);
                    }
                    let mut locals = s.locals.clone();
                    for (ls, gs) in locals.iter_mut().zip(gl) {
                        for (l, g) in ls.iter_mut().zip(gs) {
                            // Real-coordinate gradient is 2·(∂f/∂ū).
                            *l = &*l - &g.mapv(|z| z * (2.0 * step));
                        }
                        normalize_locals(ls);
                    }
                    EnsembleState { w, locals }
                },
                cfg.max_iters,
                cfg.tol,
            );
            (outcome, state)
        })
        .collect();

    let best = select_best(runs.iter().map(|(o, _)| o.value));
    let (outcome, state) = &runs[best];
    let weights = simplex_from_raw(&state.w);
    let members = state
        .locals
        .iter()
        .map(|ls| ProductState::from_unnormalized(structure.clone(), ls.clone()))
        .collect::<Result<Vec<_>>>()?;
    let sigma = SeparableEnsemble::new(weights, members)?;
    Ok(ErResult {
        value: outcome.value.max(0.0),
        sigma: ErSigma::Ensemble(sigma),
        converged: outcome.converged,
        trace: outcome.trace.clone(),
    })
}

/// Minimizes `S(ρ‖σ)` over separable states by projected gradient descent
/// with multi-start; the returned value is a certified upper bound on
/// `E_R(ρ)` (the σ found is separable by construction).
///
/// Under [`Restriction::DickeDiagonal`] the search space is mixtures
/// `Σ tᵢ σ(θᵢ)` and the parameters are `{tᵢ, θᵢ}`.
pub fn er_numeric(rho: &DensityMatrix, cfg: &ErConfig) -> Result<ErResult> {
    cfg.validate()?;
    match cfg.restrict {
        Restriction::DickeDiagonal => er_restricted(rho, cfg),
        Restriction::None => er_unrestricted(rho, cfg),
    }
}

// ---------------------------------------------------------------------------
// Partial-trace lower-bound saturation
// ---------------------------------------------------------------------------

/// `E_R` of a state that is a mixture of at most two Dicke components, via
/// the segment convexification of `F`; falls back to the numerical
/// minimizer otherwise.
fn reduced_er(rho: &DensityMatrix, seed: u64) -> Result<f64> {
    if let Some(p) = dicke_weights(rho, 1e-8) {
        let n = rho.structure().party_count();
        let support: Vec<usize> = p
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 1e-12)
            .map(|(k, _)| k)
            .collect();
        match support.len() {
            1 => {
                let k = support[0];
                let lam = lambda_max_closed_form(&ClosedFormFamily::Dicke { n, k })?;
                return Ok(-2.0 * lam.log2());
            }
            2 => {
                let (ka, kb) = (support[0], support[1]);
                return co_f_two_component_at(n, ka, kb, p[ka]);
            }
            _ => {
                let cfg = ErConfig {
                    ensemble_size: 4 * (n + 1),
                    starts: 12,
                    max_iters: 600,
                    tol: 1e-10,
                    seed,
                    restrict: Restriction::DickeDiagonal,
                };
                return Ok(er_numeric(rho, &cfg)?.value);
            }
        }
    }
    let cfg = ErConfig {
        seed,
        ..ErConfig::for_structure(rho.structure())
    };
    Ok(er_numeric(rho, &cfg)?.value)
}

/// Both sides of the partial-trace lower bound
/// `max_i [E_R(ρ_{…î…}) + S(ρ_{…î…})] ≤ E_R(ψ)` for an `n`-qubit pure state.
///
/// Returns `(lhs, rhs)`. For Dicke inputs both sides come from closed forms
/// (the bound is saturated); for other 3-qubit states the minimizer supplies
/// the values.
pub fn plenio_vedral_check(psi: &PureState) -> Result<(f64, f64)> {
    if !psi.structure().is_qubits() {
        return Err(Error::InvalidParameter(
            "partial-trace bound check expects a qubit register".into(),
        ));
    }
    let n = psi.structure().party_count();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two parties".into()));
    }
    let rho = psi.density()?;

    // rhs = E_R(ψ): closed form for Dicke states, numerics otherwise.
    let mut dicke_k: Option<usize> = None;
    for k in 0..=n {
        let snk = make_dicke(n, k)?;
        if psi.overlap(&snk)?.norm() > 1.0 - 1e-10 {
            dicke_k = Some(k);
            break;
        }
    }
    let rhs = match dicke_k {
        Some(k) => {
            let lam = lambda_max_closed_form(&ClosedFormFamily::Dicke { n, k })?;
            -2.0 * lam.log2()
        }
        None if n == 3 => {
            let cfg = ErConfig::for_structure(psi.structure());
            er_numeric(&rho, &cfg)?.value
        }
        None => {
            return Err(Error::InvalidParameter(
                "reduced E_R is only computable for Dicke states or 3-qubit inputs".into(),
            ))
        }
    };

    let mut lhs = f64::NEG_INFINITY;
    for party in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&i| i != party).collect();
        let reduced = partial_trace(&rho, &keep)?;
        let er = reduced_er(&reduced, 1000 + party as u64)?;
        let s = von_neumann_entropy(&reduced);
        lhs = lhs.max(er + s);
    }
    Ok((lhs, rhs))
}

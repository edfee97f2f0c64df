//! Constructors for the named states: Dicke and generalized symmetric states,
//! determinant (totally antisymmetric) states, GHZ, W superpositions, Dicke
//! mixtures, the product ansatz `|ξ(θ,φ)⟩`, the binomial separable states
//! `σ(θ)`, and the closest separable mixed states that saturate the
//! geometric lower bound.
//!
//! Convention: `|S(n,k)⟩` is the symmetric state with `k` parties in `|0⟩`
//! and `n−k` in `|1⟩`, so `|W⟩ = |S(3,2)⟩`.

use itertools::Itertools;
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, PartyStructure, ProductState, PureState};
use crate::tolerances::{MAX_DENSITY_DIM, MAX_PURE_DIM, WEIGHT_TOL};

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (factorial(n) / (factorial(k) * factorial(n - k))) as f64
}

/// Dicke state `|S(n,k)⟩`: equal amplitudes `√(k!(n−k)!/n!)` on every basis
/// state with `k` zeros and `n−k` ones.
pub fn make_dicke(n: usize, k: usize) -> Result<PureState> {
    if n == 0 || n > 14 {
        return Err(Error::InvalidParameter(format!("n = {n} not in 1..=14")));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} > n = {n}")));
    }
    let structure = PartyStructure::qubits(n)?;
    let amp = 1.0 / binom(n, k).sqrt();
    let mut amps = Array1::zeros(1usize << n);
    for b in 0..(1usize << n) {
        if n as u32 - (b as u64).count_ones() == k as u32 {
            amps[b] = Complex64::new(amp, 0.0);
        }
    }
    PureState::new(structure, amps)
}

/// Generalized symmetric state `|S(n,{k})⟩` of `n` parties, each with
/// `counts.len()` levels; `counts[i]` parties occupy level `i`.
pub fn make_generalized_symmetric(n: usize, counts: &[usize]) -> Result<PureState> {
    if counts.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two levels".into(),
        ));
    }
    if counts.iter().sum::<usize>() != n {
        return Err(Error::InvalidParameter(format!(
            "counts {counts:?} do not sum to n = {n}"
        )));
    }
    let d = counts.len();
    let total = d
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_PURE_DIM)
        .ok_or_else(|| Error::SizeLimit(format!("{d}^{n} exceeds {MAX_PURE_DIM}")))?;
    let structure = PartyStructure::uniform(n, d)?;

    let multinomial = counts
        .iter()
        .fold(factorial(n), |acc, &k| acc / factorial(k));
    let amp = 1.0 / (multinomial as f64).sqrt();

    let mut amps = Array1::zeros(total);
    let mut digits = vec![0usize; n];
    let mut hist = vec![0usize; d];
    for b in 0..total {
        structure.digits_of(b, &mut digits);
        hist.iter_mut().for_each(|h| *h = 0);
        for &x in &digits {
            hist[x] += 1;
        }
        if hist == counts {
            amps[b] = Complex64::new(amp, 0.0);
        }
    }
    PureState::new(structure, amps)
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Totally antisymmetric state `|Detₙ⟩` of `n` parties with `n` levels each:
/// amplitude `ε_{i₁…iₙ}/√(n!)`.
pub fn make_determinant(n: usize) -> Result<PureState> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} not in 2..=6")));
    }
    let structure = PartyStructure::uniform(n, n)?;
    let amp = 1.0 / (factorial(n) as f64).sqrt();
    let mut amps = Array1::zeros(structure.total_dim());
    for perm in (0..n).permutations(n) {
        let idx = structure.index_of(&perm);
        amps[idx] = Complex64::new(permutation_sign(&perm) * amp, 0.0);
    }
    PureState::new(structure, amps)
}

/// Generalized determinant state `|Det_{n,d}⟩` with `n = p·d^p` parties of
/// `d` levels each: slot `j` of the `d^p`-slot antisymmetric state is encoded
/// as `p` base-`d` parties (most significant digit first).
pub fn make_determinant_general(d: usize, p: usize) -> Result<PureState> {
    if d < 2 || p == 0 {
        return Err(Error::InvalidParameter(format!("d = {d}, p = {p}")));
    }
    let slots = d.pow(p as u32);
    if slots > 6 {
        return Err(Error::SizeLimit(format!("d^p = {slots} > 6")));
    }
    let n_parties = p * slots;
    let total = d
        .checked_pow(n_parties as u32)
        .filter(|&t| t <= MAX_PURE_DIM)
        .ok_or_else(|| Error::SizeLimit(format!("{d}^{n_parties} exceeds {MAX_PURE_DIM}")))?;
    let structure = PartyStructure::uniform(n_parties, d)?;
    let amp = 1.0 / (factorial(slots) as f64).sqrt();

    // Level tuple of slot value v: p base-d digits, big-endian.
    let tuple_of = |v: usize| -> Vec<usize> {
        let mut out = vec![0usize; p];
        let mut rest = v;
        for slot in out.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        out
    };

    let mut amps = Array1::zeros(total);
    let mut digits = Vec::with_capacity(n_parties);
    for perm in (0..slots).permutations(slots) {
        digits.clear();
        for &v in &perm {
            digits.extend(tuple_of(v));
        }
        let idx = structure.index_of(&digits);
        amps[idx] = Complex64::new(permutation_sign(&perm) * amp, 0.0);
    }
    PureState::new(structure, amps)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n ≥ 2` qubits.
pub fn make_ghz(n: usize) -> Result<PureState> {
    if !(2..=14).contains(&n) {
        return Err(Error::InvalidParameter(format!("n = {n} not in 2..=14")));
    }
    let structure = PartyStructure::qubits(n)?;
    let mut amps = Array1::zeros(1usize << n);
    let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = a;
    amps[(1usize << n) - 1] = a;
    PureState::new(structure, amps)
}

/// `|WW̃(s)⟩ = √s|W⟩ + √(1−s)|W̃⟩` (orthogonal components, so normalized).
pub fn make_w_superposition(s: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("s = {s} not in [0,1]")));
    }
    let w = make_dicke(3, 2)?;
    let wt = make_dicke(3, 1)?;
    let amps = w.amplitudes().mapv(|z| z * s.sqrt())
        + wt.amplitudes().mapv(|z| z * (1.0 - s).sqrt());
    PureState::new(PartyStructure::qubits(3)?, amps)
}

/// Probability weights over the Dicke basis `{|S(n,k)⟩}`, `k = 0..=n` zeros.
#[derive(Debug, Clone)]
pub struct DickeMixture {
    n: usize,
    probs: Vec<f64>,
}

impl DickeMixture {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n + 1 {
            return Err(Error::InvalidDistribution(format!(
                "need {} probabilities for n = {n}, got {}",
                n + 1,
                probs.len()
            )));
        }
        if let Some(&p) = probs.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidDistribution(format!("probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidDistribution(format!("sum {sum}")));
        }
        Ok(Self { n, probs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// `ρ_{n;k₁,k₂}(s) = s|S(n,k₁)⟩⟨S(n,k₁)| + (1−s)|S(n,k₂)⟩⟨S(n,k₂)|`.
pub fn two_component(n: usize, k1: usize, k2: usize, s: f64) -> Result<DickeMixture> {
    if k1 == k2 {
        return Err(Error::InvalidParameter("k1 = k2".into()));
    }
    if k1 > n || k2 > n {
        return Err(Error::InvalidParameter(format!(
            "k out of range: {k1}, {k2} for n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("s = {s} not in [0,1]")));
    }
    let mut probs = vec![0.0; n + 1];
    probs[k1] = s;
    probs[k2] = 1.0 - s;
    DickeMixture::new(n, probs)
}

/// Dicke-diagonal density matrix `Σ_k p_k |S(n,k)⟩⟨S(n,k)|`.
///
/// Panics when `2^n` exceeds the dense-matrix cap; the JSON descriptor path
/// rejects such inputs with an error before reaching this.
pub fn make_dicke_mixture(mixture: &DickeMixture) -> DensityMatrix {
    let n = mixture.n;
    let d = 1usize << n;
    assert!(
        d <= MAX_DENSITY_DIM,
        "Dicke mixture density needs 2^{n} <= {MAX_DENSITY_DIM}"
    );
    let structure = PartyStructure::qubits(n).expect("n >= 1");
    let mut matrix = Array2::<Complex64>::zeros((d, d));
    for (k, &p) in mixture.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let dicke = make_dicke(n, k).expect("validated Dicke parameters");
        let amps = dicke.amplitudes();
        for i in 0..d {
            if amps[i] == Complex64::ZERO {
                continue;
            }
            for j in 0..d {
                matrix[[i, j]] += amps[i] * amps[j].conj() * p;
            }
        }
    }
    DensityMatrix::from_valid_parts(structure, matrix)
}

/// Product ansatz `|ξ(θ,φ)⟩ = (cosθ|0⟩ + e^{iφ} sinθ|1⟩)^⊗n`.
pub fn make_product_ansatz(n: usize, theta: f64, phi: f64) -> ProductState {
    let structure = PartyStructure::qubits(n).expect("n >= 1");
    let local = Array1::from(vec![
        Complex64::new(theta.cos(), 0.0),
        Complex64::from_polar(theta.sin(), phi),
    ]);
    // cos²+sin² = 1 exactly enough for the norm gate.
    ProductState::new(structure, vec![local; n]).expect("ansatz locals are unit vectors")
}

/// Binomial Dicke-diagonal separable state
/// `σ(θ) = Σ_k C^n_k cos^{2k}θ sin^{2(n−k)}θ |S(n,k)⟩⟨S(n,k)|`,
/// the collective-phase average of `|ξ(θ,φ)⟩⟨ξ(θ,φ)|`.
pub fn make_sigma_theta(n: usize, theta: f64) -> DensityMatrix {
    let mixture = DickeMixture::new(n, sigma_theta_weights(n, theta))
        .expect("binomial weights form a distribution");
    make_dicke_mixture(&mixture)
}

/// The Dicke-basis weights of `σ(θ)`.
pub fn sigma_theta_weights(n: usize, theta: f64) -> Vec<f64> {
    let c2 = theta.cos().powi(2);
    let s2 = theta.sin().powi(2);
    let mut probs: Vec<f64> = (0..=n)
        .map(|k| binom(n, k) * c2.powi(k as i32) * s2.powi((n - k) as i32))
        .collect();
    let sum: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= sum);
    probs
}

/// Families with a known closest separable mixed state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparableFamily {
    /// `σ*`: binomial Dicke mixture with `p = k/n`.
    Dicke { n: usize, k: usize },
    /// `σ₁`: uniform mixture of the `n!` permutation basis states.
    Det { n: usize },
    /// `σ₂ = (|000⟩⟨000| + |111⟩⟨111|)/2` for the three-qubit GHZ state.
    Ghz,
    /// `σ₃`: the collective-phase integral of `(√(2/3)|0⟩+e^{iφ}√(1/3)|1⟩)^⊗3`.
    WContinuous,
    /// `σ₄`: the three-point phase average, `(4/9)|W⟩⟨W| + (2/9)|W̃⟩⟨W̃| + (1/3)|ξ⟩⟨ξ|`.
    WDiscrete,
}

/// A separable state achieving `S(ρ‖σ) = −2·log₂ Λ_max(ρ)` for the matching
/// family state `ρ`.
pub fn make_closest_separable(family: &SeparableFamily) -> Result<DensityMatrix> {
    match family {
        SeparableFamily::Dicke { n, k } => {
            if *k > *n {
                return Err(Error::InvalidParameter(format!("k = {k} > n = {n}")));
            }
            if 1usize << *n > MAX_DENSITY_DIM {
                return Err(Error::SizeLimit(format!("2^{n} exceeds {MAX_DENSITY_DIM}")));
            }
            let p = *k as f64 / *n as f64;
            let mut probs: Vec<f64> = (0..=*n)
                .map(|j| {
                    binom(*n, j)
                        * p.powi(j as i32)
                        * (1.0 - p).powi((*n - j) as i32)
                })
                .collect();
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|q| *q /= sum);
            Ok(make_dicke_mixture(&DickeMixture::new(*n, probs)?))
        }
        SeparableFamily::Det { n } => {
            if !(2..=6).contains(n) {
                return Err(Error::InvalidParameter(format!("n = {n} not in 2..=6")));
            }
            let structure = PartyStructure::uniform(*n, *n)?;
            let d = structure.total_dim();
            if d > MAX_DENSITY_DIM {
                return Err(Error::SizeLimit(format!("{n}^{n} exceeds {MAX_DENSITY_DIM}")));
            }
            let w = 1.0 / factorial(*n) as f64;
            let mut matrix = Array2::<Complex64>::zeros((d, d));
            for perm in (0..*n).permutations(*n) {
                let idx = structure.index_of(&perm);
                matrix[[idx, idx]] = Complex64::new(w, 0.0);
            }
            Ok(DensityMatrix::from_valid_parts(structure, matrix))
        }
        SeparableFamily::Ghz => {
            let structure = PartyStructure::qubits(3)?;
            let mut matrix = Array2::<Complex64>::zeros((8, 8));
            matrix[[0, 0]] = Complex64::new(0.5, 0.0);
            matrix[[7, 7]] = Complex64::new(0.5, 0.0);
            Ok(DensityMatrix::from_valid_parts(structure, matrix))
        }
        SeparableFamily::WContinuous => {
            // (4/9)|W⟩⟨W| + (2/9)|W̃⟩⟨W̃| + (8/27)|000⟩⟨000| + (1/27)|111⟩⟨111|
            let structure = PartyStructure::qubits(3)?;
            let w = make_dicke(3, 2)?;
            let wt = make_dicke(3, 1)?;
            let mut matrix = Array2::<Complex64>::zeros((8, 8));
            accumulate_projector(&mut matrix, w.amplitudes(), 4.0 / 9.0);
            accumulate_projector(&mut matrix, wt.amplitudes(), 2.0 / 9.0);
            matrix[[0, 0]] += Complex64::new(8.0 / 27.0, 0.0);
            matrix[[7, 7]] += Complex64::new(1.0 / 27.0, 0.0);
            Ok(DensityMatrix::from_valid_parts(structure, matrix))
        }
        SeparableFamily::WDiscrete => {
            // (4/9)|W⟩⟨W| + (2/9)|W̃⟩⟨W̃| + (1/3)|ξ⟩⟨ξ|, 3|ξ⟩ = 2√2|000⟩+|111⟩
            let structure = PartyStructure::qubits(3)?;
            let w = make_dicke(3, 2)?;
            let wt = make_dicke(3, 1)?;
            let mut xi = Array1::zeros(8);
            xi[0] = Complex64::new(2.0 * 2f64.sqrt() / 3.0, 0.0);
            xi[7] = Complex64::new(1.0 / 3.0, 0.0);
            let mut matrix = Array2::<Complex64>::zeros((8, 8));
            accumulate_projector(&mut matrix, w.amplitudes(), 4.0 / 9.0);
            accumulate_projector(&mut matrix, wt.amplitudes(), 2.0 / 9.0);
            accumulate_projector(&mut matrix, &xi, 1.0 / 3.0);
            Ok(DensityMatrix::from_valid_parts(structure, matrix))
        }
    }
}

fn accumulate_projector(matrix: &mut Array2<Complex64>, v: &Array1<Complex64>, weight: f64) {
    for i in 0..v.len() {
        if v[i] == Complex64::ZERO {
            continue;
        }
        for j in 0..v.len() {
            matrix[[i, j]] += v[i] * v[j].conj() * weight;
        }
    }
}

/// JSON state descriptor, e.g. `{"type":"dicke","n":4,"k":2}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateDescriptor {
    Dicke { n: usize, k: usize },
    DickeMixture { n: usize, probs: Vec<f64> },
    Ghz { n: usize },
    Det { n: usize },
    DetGeneral { d: usize, p: usize },
    WSuperposition { s: f64 },
    SigmaTheta { n: usize, theta: f64 },
    Symmetric { n: usize, counts: Vec<usize> },
    ProductAnsatz { n: usize, theta: f64, phi: f64 },
}

/// A constructed state: pure vector or density matrix.
#[derive(Debug, Clone)]
pub enum StateObject {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl StateObject {
    pub fn structure(&self) -> &PartyStructure {
        match self {
            StateObject::Pure(p) => p.structure(),
            StateObject::Mixed(m) => m.structure(),
        }
    }

    /// The state as a density matrix regardless of representation.
    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            StateObject::Pure(p) => p.density(),
            StateObject::Mixed(m) => Ok(m.clone()),
        }
    }
}

impl StateDescriptor {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn build(&self) -> Result<StateObject> {
        Ok(match self {
            StateDescriptor::Dicke { n, k } => StateObject::Pure(make_dicke(*n, *k)?),
            StateDescriptor::DickeMixture { n, probs } => {
                let mix = DickeMixture::new(*n, probs.clone())?;
                if 1usize << *n > MAX_DENSITY_DIM {
                    return Err(Error::SizeLimit(format!(
                        "2^{n} exceeds {MAX_DENSITY_DIM}"
                    )));
                }
                StateObject::Mixed(make_dicke_mixture(&mix))
            }
            StateDescriptor::Ghz { n } => StateObject::Pure(make_ghz(*n)?),
            StateDescriptor::Det { n } => StateObject::Pure(make_determinant(*n)?),
            StateDescriptor::DetGeneral { d, p } => {
                StateObject::Pure(make_determinant_general(*d, *p)?)
            }
            StateDescriptor::WSuperposition { s } => {
                StateObject::Pure(make_w_superposition(*s)?)
            }
            StateDescriptor::SigmaTheta { n, theta } => {
                if *n == 0 || 1usize << *n > MAX_DENSITY_DIM {
                    return Err(Error::InvalidParameter(format!("n = {n}")));
                }
                StateObject::Mixed(make_sigma_theta(*n, *theta))
            }
            StateDescriptor::Symmetric { n, counts } => {
                StateObject::Pure(make_generalized_symmetric(*n, counts)?)
            }
            StateDescriptor::ProductAnsatz { n, theta, phi } => {
                if *n == 0 || *n > 14 {
                    return Err(Error::InvalidParameter(format!("n = {n}")));
                }
                StateObject::Pure(make_product_ansatz(*n, *theta, *phi).to_pure())
            }
        })
    }
}

//! Domain types: party structures, pure states, density matrices, product
//! states, separable ensembles, and the partial trace.
//!
//! Basis convention: party 0 is the slowest-varying tensor index, so the flat
//! index of local digits `(x_0, …, x_{n-1})` is the usual row-major
//! `((x_0·d_1 + x_1)·d_2 + x_2)…`. For qubits this makes the flat index the
//! big-endian bit string reading party 0 first.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eig};
use crate::tolerances::{
    HERMITIAN_TOL, MAX_DENSITY_DIM, MAX_PURE_DIM, NORM_TOL, PSD_TOL, TRACE_TOL, WEIGHT_TOL,
};

/// Ordered list of local Hilbert-space dimensions; defines the tensor
/// factorization of every state in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyStructure {
    dims: Vec<usize>,
}

impl PartyStructure {
    /// Every local dimension must be at least 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidStructure("no parties".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidStructure(format!("local dimension {d} < 2")));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .ok_or_else(|| Error::SizeLimit("total dimension overflows".into()))?;
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Row-major strides: `stride[i]` is the flat-index step of party `i`.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    /// Flat index of the given local digits (party 0 slowest).
    pub fn index_of(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        let mut idx = 0;
        for (x, d) in digits.iter().zip(&self.dims) {
            debug_assert!(x < d);
            idx = idx * d + x;
        }
        idx
    }

    /// Local digits of a flat index, written into `out`.
    pub fn digits_of(&self, index: usize, out: &mut [usize]) {
        debug_assert_eq!(out.len(), self.dims.len());
        let mut rest = index;
        for i in (0..self.dims.len()).rev() {
            out[i] = rest % self.dims[i];
            rest /= self.dims[i];
        }
    }

    /// Structure of the parties listed in `keep` (ascending order).
    pub fn restricted_to(&self, keep: &[usize]) -> Result<Self> {
        Self::new(keep.iter().map(|&i| self.dims[i]).collect())
    }

    fn label(&self) -> String {
        format!("{:?}", self.dims)
    }
}

fn check_same_structure(a: &PartyStructure, b: &PartyStructure) -> Result<()> {
    if a != b {
        return Err(Error::StructureMismatch(a.label(), b.label()));
    }
    Ok(())
}

/// Normalized complex amplitude tensor over a [`PartyStructure`], stored flat
/// in row-major party order.
#[derive(Debug, Clone)]
pub struct PureState {
    structure: PartyStructure,
    amplitudes: Array1<Complex64>,
}

impl PureState {
    pub fn new(structure: PartyStructure, amplitudes: Array1<Complex64>) -> Result<Self> {
        if amplitudes.len() != structure.total_dim() {
            return Err(Error::InvalidStructure(format!(
                "amplitude length {} does not match total dimension {}",
                amplitudes.len(),
                structure.total_dim()
            )));
        }
        if amplitudes.len() > MAX_PURE_DIM {
            return Err(Error::SizeLimit(format!(
                "pure state dimension {} exceeds {}",
                amplitudes.len(),
                MAX_PURE_DIM
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// Normalizes before constructing; rejects (near-)zero vectors.
    pub fn from_unnormalized(
        structure: PartyStructure,
        amplitudes: Array1<Complex64>,
    ) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::NotNormalized(norm));
        }
        let scaled = amplitudes.mapv(|z| z / norm);
        Self::new(structure, scaled)
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        check_same_structure(&self.structure, &other.structure)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|ψ⟩⟨ψ|` as a density matrix.
    pub fn density(&self) -> Result<DensityMatrix> {
        let d = self.structure.total_dim();
        if d > MAX_DENSITY_DIM {
            return Err(Error::SizeLimit(format!(
                "density matrix dimension {d} exceeds {MAX_DENSITY_DIM}"
            )));
        }
        Ok(DensityMatrix {
            structure: self.structure.clone(),
            matrix: linalg::outer(&self.amplitudes),
        })
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix tagged with a
/// [`PartyStructure`].
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    structure: PartyStructure,
    matrix: Array2<Complex64>,
}

impl DensityMatrix {
    /// Full validation: Hermitian within 1e-12 (max elementwise), trace 1
    /// within 1e-12, and eigenvalues ≥ −1e-10 (checked spectrally).
    pub fn new(structure: PartyStructure, matrix: Array2<Complex64>) -> Result<Self> {
        let d = structure.total_dim();
        if matrix.dim() != (d, d) {
            return Err(Error::InvalidDensityMatrix(format!(
                "matrix is {:?}, structure needs {d}x{d}",
                matrix.dim()
            )));
        }
        if d > MAX_DENSITY_DIM {
            return Err(Error::SizeLimit(format!(
                "density matrix dimension {d} exceeds {MAX_DENSITY_DIM}"
            )));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {defect:.3e})"
            )));
        }
        let trace: Complex64 = matrix.diag().iter().sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} is not 1"
            )));
        }
        let eig = hermitian_eig(&matrix).map_err(|e| {
            Error::InvalidDensityMatrix(format!("eigendecomposition failed: {e}"))
        })?;
        if eig.eigenvalues[0] < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                eig.eigenvalues[0]
            )));
        }
        Ok(Self { structure, matrix })
    }

    /// Constructor for matrices that are PSD with unit trace by construction
    /// (convex mixtures of projectors, CPTP images of valid states). Checks
    /// the cheap invariants, skips the spectral one.
    pub(crate) fn from_valid_parts(structure: PartyStructure, matrix: Array2<Complex64>) -> Self {
        debug_assert_eq!(matrix.dim(), (structure.total_dim(), structure.total_dim()));
        debug_assert!(linalg::hermiticity_defect(&matrix) <= 1e-10);
        debug_assert!({
            let tr: Complex64 = matrix.diag().iter().sum();
            (tr.re - 1.0).abs() <= 1e-10
        });
        Self { structure, matrix }
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        self.structure.total_dim()
    }

    pub(crate) fn same_structure(&self, other: &DensityMatrix) -> Result<()> {
        check_same_structure(&self.structure, &other.structure)
    }
}

/// One normalized local vector per party; a separable pure state `⊗ᵢ|φ⁽ⁱ⁾⟩`.
#[derive(Debug, Clone)]
pub struct ProductState {
    structure: PartyStructure,
    locals: Vec<Array1<Complex64>>,
}

impl ProductState {
    pub fn new(structure: PartyStructure, locals: Vec<Array1<Complex64>>) -> Result<Self> {
        if locals.len() != structure.party_count() {
            return Err(Error::InvalidStructure(format!(
                "{} local vectors for {} parties",
                locals.len(),
                structure.party_count()
            )));
        }
        for (i, (v, &d)) in locals.iter().zip(structure.dims()).enumerate() {
            if v.len() != d {
                return Err(Error::InvalidStructure(format!(
                    "party {i} local vector has length {} (dimension {d})",
                    v.len()
                )));
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(Self { structure, locals })
    }

    /// Normalizes each local vector before constructing.
    pub fn from_unnormalized(
        structure: PartyStructure,
        locals: Vec<Array1<Complex64>>,
    ) -> Result<Self> {
        let normalized = locals
            .into_iter()
            .map(|v| {
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm < 1e-300 {
                    Err(Error::NotNormalized(norm))
                } else {
                    Ok(v.mapv(|z| z / norm))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(structure, normalized)
    }

    /// Basis product state `|x_0 … x_{n-1}⟩` for the flat index.
    pub fn basis(structure: PartyStructure, flat_index: usize) -> Result<Self> {
        let n = structure.party_count();
        let mut digits = vec![0usize; n];
        structure.digits_of(flat_index, &mut digits);
        let locals = digits
            .iter()
            .zip(structure.dims())
            .map(|(&x, &d)| {
                let mut v = Array1::zeros(d);
                v[x] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::new(structure, locals)
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn locals(&self) -> &[Array1<Complex64>] {
        &self.locals
    }

    /// Expands the tensor product into a flat [`PureState`].
    pub fn to_pure(&self) -> PureState {
        let mut amps = self.locals[0].clone();
        for v in &self.locals[1..] {
            amps = linalg::kron_vec(&amps, v);
        }
        PureState {
            structure: self.structure.clone(),
            amplitudes: amps,
        }
    }

    /// `⟨self|ψ⟩` without expanding the product state.
    pub fn overlap_with(&self, psi: &PureState) -> Result<Complex64> {
        check_same_structure(&self.structure, &psi.structure)?;
        let dims = self.structure.dims();
        let n = dims.len();
        let mut digits = vec![0usize; n];
        let mut acc = Complex64::ZERO;
        for (idx, &amp) in psi.amplitudes.iter().enumerate() {
            if amp == Complex64::ZERO {
                advance(&mut digits, dims);
                continue;
            }
            let mut prod = amp;
            for (b, &x) in digits.iter().enumerate() {
                prod *= self.locals[b][x].conj();
            }
            acc += prod;
            let _ = idx;
            advance(&mut digits, dims);
        }
        Ok(acc)
    }
}

/// Odometer increment of row-major digits.
pub(crate) fn advance(digits: &mut [usize], dims: &[usize]) {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < dims[i] {
            return;
        }
        digits[i] = 0;
    }
}

/// Probability weights over product states; a candidate separable mixed state
/// `σ = Σᵢ pᵢ|φᵢ⟩⟨φᵢ|`.
#[derive(Debug, Clone)]
pub struct SeparableEnsemble {
    weights: Vec<f64>,
    members: Vec<ProductState>,
}

impl SeparableEnsemble {
    pub fn new(weights: Vec<f64>, members: Vec<ProductState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != members.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for {} members",
                weights.len(),
                members.len()
            )));
        }
        if let Some(&w) = weights.iter().find(|&&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidDistribution(format!("weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        let structure = members[0].structure().clone();
        for m in &members[1..] {
            check_same_structure(&structure, m.structure())?;
        }
        Ok(Self { weights, members })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[ProductState] {
        &self.members
    }

    pub fn structure(&self) -> &PartyStructure {
        self.members[0].structure()
    }

    /// `Σᵢ pᵢ|φᵢ⟩⟨φᵢ|`; valid by construction.
    pub fn as_density(&self) -> Result<DensityMatrix> {
        let structure = self.structure().clone();
        let d = structure.total_dim();
        if d > MAX_DENSITY_DIM {
            return Err(Error::SizeLimit(format!(
                "density matrix dimension {d} exceeds {MAX_DENSITY_DIM}"
            )));
        }
        let mut matrix = Array2::<Complex64>::zeros((d, d));
        for (w, member) in self.weights.iter().zip(&self.members) {
            if *w == 0.0 {
                continue;
            }
            let v = member.to_pure();
            let amps = v.amplitudes();
            for i in 0..d {
                let wi = amps[i] * *w;
                if wi == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    matrix[[i, j]] += wi * amps[j].conj();
                }
            }
        }
        // Renormalize away the ≤1e-10 weight slack so the result meets the
        // stricter density-matrix trace invariant.
        let trace: f64 = matrix.diag().iter().map(|z| z.re).sum();
        let matrix = matrix.mapv(|z| z / trace);
        Ok(DensityMatrix::from_valid_parts(structure, matrix))
    }
}

/// Traces out every party not in `keep`; the result keeps the listed parties
/// in their original ascending order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.structure().party_count();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidPartySet("empty keep set".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidPartySet(format!(
            "party {bad} out of range for {n} parties"
        )));
    }

    let dims = rho.structure().dims();
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let keep_structure = rho.structure().restricted_to(&keep)?;
    let dk = keep_structure.total_dim();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();

    let strides = rho.structure().strides();
    let keep_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();

    // Flat offsets contributed by each sub-index of the kept/traced parties.
    let offsets = |parties: &[usize], sub_dims: &[usize], count: usize| -> Vec<usize> {
        let mut digits = vec![0usize; parties.len()];
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(
                digits
                    .iter()
                    .zip(parties)
                    .map(|(&x, &p)| x * strides[p])
                    .sum(),
            );
            advance(&mut digits, sub_dims);
        }
        out
    };
    let keep_offsets = offsets(&keep, &keep_dims, dk);
    let traced_offsets = offsets(&traced, &traced_dims, dt);

    let m = rho.matrix();
    let mut out = Array2::<Complex64>::zeros((dk, dk));
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for &ot in &traced_offsets {
                acc += m[[oi + ot, oj + ot]];
            }
            out[[i, j]] = acc;
        }
    }
    Ok(DensityMatrix::from_valid_parts(keep_structure, out))
}

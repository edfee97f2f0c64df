//! Von Neumann entropy and quantum relative entropy, both in bits.
//!
//! The matrix logarithm is taken spectrally on the support (eigenvalues above
//! [`SUPPORT_TOL`]); `0·log₂0 = 0` throughout. `S(ρ‖σ)` returns
//! `f64::INFINITY` when the support of `ρ` is not contained in the support of
//! `σ`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{adjoint, hermitian_eig, HermitianEig};
use crate::state::DensityMatrix;
use crate::tolerances::{ENTROPY_EIG_CUTOFF, INFINITE_MASS_TOL, SUPPORT_TOL};

/// `S(ρ) = −Tr ρ log₂ ρ`, with eigenvalues below 1e-12 treated as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eig = hermitian_eig(rho.matrix())
        .expect("density matrix invariant guarantees a Hermitian input");
    -eigenvalue_log2_trace(&eig.eigenvalues)
}

/// `Σ λ log₂ λ` over eigenvalues above the cutoff (this is `−S` in bits).
pub(crate) fn eigenvalue_log2_trace(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > ENTROPY_EIG_CUTOFF)
        .map(|&l| l * l.log2())
        .sum()
}

/// `S(ρ‖σ) = Tr(ρ log₂ ρ − ρ log₂ σ)`; `f64::INFINITY` marks a support
/// failure. Errors on mismatched party structures.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.same_structure(sigma)?;
    let rho_eig = hermitian_eig(rho.matrix())?;
    let t1 = eigenvalue_log2_trace(&rho_eig.eigenvalues);
    let sigma_eig = hermitian_eig(sigma.matrix())?;
    Ok(cross_term(rho.matrix(), &sigma_eig).map_or(f64::INFINITY, |t2| t1 - t2))
}

/// `Tr(ρ log₂ σ)` given the eigensystem of `σ`, or `None` when `ρ` carries
/// more than [`INFINITE_MASS_TOL`] of probability outside the support of `σ`.
pub(crate) fn cross_term(rho: &Array2<Complex64>, sigma_eig: &HermitianEig) -> Option<f64> {
    // Diagonal of V†ρV: amount of ρ sitting on each eigenvector of σ.
    let vt = adjoint(&sigma_eig.eigenvectors);
    let rv = rho.dot(&sigma_eig.eigenvectors);
    let mut outside = 0.0;
    let mut term = 0.0;
    for (i, &lam) in sigma_eig.eigenvalues.iter().enumerate() {
        let mut diag = Complex64::ZERO;
        for k in 0..rho.nrows() {
            diag += vt[[i, k]] * rv[[k, i]];
        }
        let mass = diag.re.max(0.0);
        if lam > SUPPORT_TOL {
            term += mass * lam.log2();
        } else {
            outside += mass;
        }
    }
    if outside > INFINITE_MASS_TOL {
        None
    } else {
        Some(term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{PartyStructure, PureState};
    use crate::zoo;
    use ndarray::{Array1, Array2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_density(probs: &[f64]) -> DensityMatrix {
        let n = probs.len();
        let s = PartyStructure::new(vec![n]).unwrap();
        let m = Array2::from_diag(&Array1::from(
            probs.iter().map(|&p| c(p, 0.0)).collect::<Vec<_>>(),
        ));
        DensityMatrix::new(s, m).unwrap()
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let psi = zoo::make_ghz(3).unwrap();
        let s = von_neumann_entropy(&psi.density().unwrap());
        assert!(s.abs() < 1e-10, "S = {s}");
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit_is_one() {
        let rho = diag_density(&[0.5, 0.5]);
        assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_three_quarters_mixture() {
        let rho = diag_density(&[0.75, 0.25]);
        // −(3/4)log₂(3/4) − (1/4)log₂(1/4), evaluated independently.
        let expect = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((von_neumann_entropy(&rho) - expect).abs() < 1e-12);
        assert!((expect - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_of_identical_states_is_zero() {
        let rho = zoo::make_dicke(3, 2).unwrap().density().unwrap();
        let s = relative_entropy(&rho, &rho).unwrap();
        assert!(s.abs() < 1e-10, "S = {s}");
    }

    #[test]
    fn relative_entropy_ghz_vs_sigma2_is_one_bit() {
        let rho = zoo::make_ghz(3).unwrap().density().unwrap();
        let sigma = zoo::make_closest_separable(&zoo::SeparableFamily::Ghz).unwrap();
        let s = relative_entropy(&rho, &sigma).unwrap();
        assert!((s - 1.0).abs() < 1e-9, "S = {s}");
    }

    #[test]
    fn relative_entropy_det3_vs_sigma1_is_log2_6() {
        let rho = zoo::make_determinant(3).unwrap().density().unwrap();
        let sigma = zoo::make_closest_separable(&zoo::SeparableFamily::Det { n: 3 }).unwrap();
        let s = relative_entropy(&rho, &sigma).unwrap();
        assert!((s - 6f64.log2()).abs() < 1e-9, "S = {s}");
    }

    #[test]
    fn disjoint_support_is_infinite() {
        let s = PartyStructure::qubits(1).unwrap();
        let zero = PureState::new(s.clone(), Array1::from(vec![c(1.0, 0.0), c(0.0, 0.0)]))
            .unwrap()
            .density()
            .unwrap();
        let one = PureState::new(s, Array1::from(vec![c(0.0, 0.0), c(1.0, 0.0)]))
            .unwrap()
            .density()
            .unwrap();
        assert!(relative_entropy(&zero, &one).unwrap().is_infinite());
    }

    #[test]
    fn structure_mismatch_rejected() {
        let a = zoo::make_ghz(2).unwrap().density().unwrap();
        let b = zoo::make_ghz(3).unwrap().density().unwrap();
        assert!(relative_entropy(&a, &b).is_err());
    }
}

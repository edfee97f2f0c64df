//! Twirling projections: collective-phase dephasing and party-permutation
//! averaging. Both are idempotent, trace-preserving, and map states to
//! states.

use itertools::Itertools;
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Collective-phase twirl `ρ → ∫ dφ/2π U(φ)^⊗n ρ U(φ)†⊗n` for `n` qubits,
/// with `U(φ)|1⟩ = e^{-iφ}|1⟩`.
///
/// The φ-average kills exactly the matrix elements between computational
/// basis states of different Hamming weight, so this is implemented as that
/// dephasing directly rather than by quadrature.
pub fn phase_twirl(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if !rho.structure().is_qubits() {
        return Err(Error::InvalidParameter(
            "phase twirl is defined for qubit registers".into(),
        ));
    }
    let d = rho.total_dim();
    let mut out = Array2::<Complex64>::zeros((d, d));
    for i in 0..d {
        let wi = (i as u64).count_ones();
        for j in 0..d {
            if (j as u64).count_ones() == wi {
                out[[i, j]] = rho.matrix()[[i, j]];
            }
        }
    }
    Ok(DensityMatrix::from_valid_parts(
        rho.structure().clone(),
        out,
    ))
}

/// Average of `ρ` over all `n!` party permutations.
///
/// Requires identical local dimensions and at most 8 parties (the
/// permutation group is enumerated explicitly).
pub fn permutation_twirl(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.structure().dims();
    let n = dims.len();
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::InvalidParameter(
            "permutation twirl needs identical local dimensions".into(),
        ));
    }
    if n > 8 {
        return Err(Error::SizeLimit(format!(
            "permutation twirl enumerates n! permutations; n = {n} > 8"
        )));
    }
    let d = rho.total_dim();
    let local = dims[0];
    let mut out = Array2::<Complex64>::zeros((d, d));
    let mut count = 0usize;
    let mut digits = vec![0usize; n];
    let mut permuted = vec![0usize; n];
    for perm in (0..n).permutations(n) {
        // Basis map: party `i`'s digit moves to slot `perm[i]`.
        let mut index_map = vec![0usize; d];
        for (idx, slot) in index_map.iter_mut().enumerate() {
            rho.structure().digits_of(idx, &mut digits);
            for (i, &p) in perm.iter().enumerate() {
                permuted[p] = digits[i];
            }
            *slot = rho.structure().index_of(&permuted);
        }
        for i in 0..d {
            for j in 0..d {
                out[[index_map[i], index_map[j]]] += rho.matrix()[[i, j]];
            }
        }
        count += 1;
        let _ = local;
    }
    let scale = 1.0 / count as f64;
    let out = out.mapv(|z| z * scale);
    Ok(DensityMatrix::from_valid_parts(
        rho.structure().clone(),
        out,
    ))
}

/// Conjugates `ρ` by the permutation that swaps parties `a` and `b`.
/// Used by tests to verify permutation invariance directly.
pub fn swap_parties(rho: &DensityMatrix, a: usize, b: usize) -> Result<DensityMatrix> {
    let n = rho.structure().party_count();
    if a >= n || b >= n {
        return Err(Error::InvalidPartySet(format!("swap ({a},{b}) out of range")));
    }
    let dims = rho.structure().dims();
    if dims[a] != dims[b] {
        return Err(Error::InvalidParameter(
            "swapped parties must have equal dimensions".into(),
        ));
    }
    let d = rho.total_dim();
    let mut digits = vec![0usize; n];
    let mut index_map = vec![0usize; d];
    for (idx, slot) in index_map.iter_mut().enumerate() {
        rho.structure().digits_of(idx, &mut digits);
        digits.swap(a, b);
        *slot = rho.structure().index_of(&digits);
    }
    let mut out = Array2::<Complex64>::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            out[[index_map[i], index_map[j]]] = rho.matrix()[[i, j]];
        }
    }
    Ok(DensityMatrix::from_valid_parts(
        rho.structure().clone(),
        out,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::state::{PartyStructure, ProductState, SeparableEnsemble};
    use crate::zoo;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phase_twirl_of_ghz_keeps_only_diagonal_blocks() {
        let rho = zoo::make_ghz(3).unwrap().density().unwrap();
        let t = phase_twirl(&rho).unwrap();
        // (|000⟩⟨000| + |111⟩⟨111|)/2: weight-0/weight-3 coherences are gone.
        assert!((t.matrix()[[0, 0]].re - 0.5).abs() < 1e-14);
        assert!((t.matrix()[[7, 7]].re - 0.5).abs() < 1e-14);
        assert!(t.matrix()[[0, 7]].norm() < 1e-14);
        assert!(t.matrix()[[7, 0]].norm() < 1e-14);
    }

    #[test]
    fn phase_twirl_of_product_ansatz_is_sigma_theta() {
        for &(n, theta, phi) in &[(2usize, 0.7f64, 0.3f64), (3, 1.1, 2.0), (4, 0.4, 5.5)] {
            let xi = zoo::make_product_ansatz(n, theta, phi)
                .to_pure()
                .density()
                .unwrap();
            let twirled = phase_twirl(&xi).unwrap();
            let sigma = zoo::make_sigma_theta(n, theta);
            assert!(
                max_abs_diff(twirled.matrix(), sigma.matrix()) < 1e-12,
                "n={n} theta={theta}"
            );
        }
    }

    #[test]
    fn twirls_are_idempotent_and_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let rho = random_density(3, &mut rng);
            for twirl in [phase_twirl, permutation_twirl] {
                let once = twirl(&rho).unwrap();
                let twice = twirl(&once).unwrap();
                assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
                let tr: f64 = once.matrix().diag().iter().map(|z| z.re).sum();
                assert!((tr - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn permutation_twirl_output_is_swap_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_density(3, &mut rng);
        let t = permutation_twirl(&rho).unwrap();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let swapped = swap_parties(&t, a, b).unwrap();
            assert!(max_abs_diff(t.matrix(), swapped.matrix()) < 1e-12);
        }
    }

    #[test]
    fn permutation_twirl_of_two_qubit_basis_state() {
        // |01⟩⟨01| → (|01⟩⟨01| + |10⟩⟨10|)/2
        let s = PartyStructure::qubits(2).unwrap();
        let rho = ProductState::basis(s, 1).unwrap().to_pure().density().unwrap();
        let t = permutation_twirl(&rho).unwrap();
        assert!((t.matrix()[[1, 1]].re - 0.5).abs() < 1e-14);
        assert!((t.matrix()[[2, 2]].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dicke_mixture_is_fixed_by_both_twirls() {
        let mix = zoo::two_component(3, 0, 2, 0.3).unwrap();
        let rho = zoo::make_dicke_mixture(&mix);
        let p = phase_twirl(&rho).unwrap();
        let q = permutation_twirl(&rho).unwrap();
        assert!(max_abs_diff(p.matrix(), rho.matrix()) < 1e-12);
        assert!(max_abs_diff(q.matrix(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_unsupported_structures() {
        let s = PartyStructure::new(vec![2, 3]).unwrap();
        let e = SeparableEnsemble::new(
            vec![1.0],
            vec![ProductState::basis(s, 0).unwrap()],
        )
        .unwrap();
        let rho = e.as_density().unwrap();
        assert!(phase_twirl(&rho).is_err());
        assert!(permutation_twirl(&rho).is_err());
    }

    fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        // Mixture of a handful of random product states: valid by construction.
        let s = PartyStructure::qubits(n).unwrap();
        let m = 6;
        let mut weights = vec![0.0f64; m];
        let mut members = Vec::with_capacity(m);
        for w in weights.iter_mut() {
            *w = rng.random::<f64>() + 0.05;
        }
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        for _ in 0..m {
            let locals = (0..n)
                .map(|_| {
                    ndarray::Array1::from(
                        (0..2)
                            .map(|_| {
                                num_complex::Complex64::new(
                                    rng.sample(rand_distr::StandardNormal),
                                    rng.sample(rand_distr::StandardNormal),
                                )
                            })
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            members.push(ProductState::from_unnormalized(s.clone(), locals).unwrap());
        }
        SeparableEnsemble::new(weights, members)
            .unwrap()
            .as_density()
            .unwrap()
    }
}

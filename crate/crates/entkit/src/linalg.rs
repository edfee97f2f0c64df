//! Dense complex linear algebra: Kronecker products and a cyclic Jacobi
//! eigensolver for Hermitian matrices.
//!
//! The solver is self-contained (no LAPACK); for the dimensions this crate
//! targets (at most a few thousand) cyclic Jacobi is fast, unconditionally
//! stable, and delivers orthonormal eigenvectors to machine precision.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{
    EIG_INPUT_HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL,
};

/// Eigendecomposition of a Hermitian matrix: `m = V diag(λ) V†`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, one per column, matching `eigenvalues`.
    pub eigenvectors: Array2<Complex64>,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Kronecker product of two column vectors.
pub(crate) fn kron_vec(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Array1<Complex64> {
    let mut out = Array1::zeros(a.len() * b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Conjugate transpose.
pub(crate) fn adjoint(m: &Array2<Complex64>) -> Array2<Complex64> {
    let (r, c) = m.dim();
    let mut out = Array2::zeros((c, r));
    for i in 0..r {
        for j in 0..c {
            out[[j, i]] = m[[i, j]].conj();
        }
    }
    out
}

/// Rank-one projector `|v⟩⟨v|`.
pub(crate) fn outer(v: &Array1<Complex64>) -> Array2<Complex64> {
    let n = v.len();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            out[[i, j]] = v[i] * v[j].conj();
        }
    }
    out
}

/// Largest elementwise modulus of `a - b`.
pub(crate) fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest elementwise deviation from Hermiticity.
pub(crate) fn hermiticity_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max(m[[i, i]].im.abs());
        for j in (i + 1)..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

fn off_diagonal_mass(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[[i, j]].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius mass drops below
/// [`JACOBI_OFF_TOL`] (with a machine-precision floor for large-norm input),
/// or after [`JACOBI_MAX_SWEEPS`] sweeps. Rejects inputs that deviate from
/// Hermiticity by more than 1e-10.
pub fn hermitian_eig(m: &Array2<Complex64>) -> Result<HermitianEig> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::NotSquare(n, m.ncols()));
    }
    let defect = hermiticity_defect(m);
    if defect > EIG_INPUT_HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }

    // Work on the exactly-Hermitian part; the defect is within tolerance.
    let mut a = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        a[[i, i]] = Complex64::new(m[[i, i]].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[[i, j]] + m[[j, i]].conj()) * 0.5;
            a[[i, j]] = avg;
            a[[j, i]] = avg.conj();
        }
    }
    let mut v = Array2::<Complex64>::eye(n);

    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = JACOBI_OFF_TOL.max(f64::EPSILON * fro * n as f64);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&a) < stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let beta = a[[p, q]];
                let mag = beta.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = beta / mag; // e^{iφ}
                let tau = (a[[q, q]].re - a[[p, p]].re) / (2.0 * mag);
                let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = 1.0 / (tau + sgn * (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cphase = phase.conj();

                // A ← A·J with J = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]] on (p,q).
                for r in 0..n {
                    let xp = a[[r, p]];
                    let xq = a[[r, q]];
                    a[[r, p]] = xp * c - xq * cphase * s;
                    a[[r, q]] = xp * s + xq * cphase * c;
                }
                // A ← J†·A.
                for r in 0..n {
                    let ap = a[[p, r]];
                    let aq = a[[q, r]];
                    a[[p, r]] = ap * c - aq * phase * s;
                    a[[q, r]] = ap * s + aq * phase * c;
                }
                // The pivot is annihilated analytically; pin it.
                a[[p, q]] = Complex64::ZERO;
                a[[q, p]] = Complex64::ZERO;
                a[[p, p]] = Complex64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = Complex64::new(a[[q, q]].re, 0.0);

                // V ← V·J.
                for r in 0..n {
                    let xp = v[[r, p]];
                    let xq = v[[r, q]];
                    v[[r, p]] = xp * c - xq * cphase * s;
                    v[[r, q]] = xp * s + xq * cphase * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.partial_cmp(&a[[j, j]].re).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[[i, i]].re).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[[r, dst]] = v[[r, src]];
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

//! # entkit
//!
//! Entanglement measures for small multipartite quantum states, at desk scale:
//!
//! - **Geometric measure**: the entanglement eigenvalue `Λ_max` (maximal overlap
//!   with product states), its closed forms for Dicke, generalized symmetric and
//!   determinant states, and an alternating multi-start solver for arbitrary
//!   pure states ([`gme`]).
//! - **Relative entropy of entanglement**: the lower bound `−2·log₂ Λ_max`, the
//!   closest-separable-state constructions that saturate it, the `F`/`co F`
//!   upper bounds for Dicke mixtures, and direct numerical minimization of
//!   `S(ρ‖σ)` over separable ensembles ([`re`]).
//! - **Primitives**: dense complex linear algebra (Kronecker products, cyclic
//!   Jacobi Hermitian eigensolver), partial trace, von Neumann and relative
//!   entropies, phase and permutation twirls ([`linalg`], [`state`],
//!   [`entropy`], [`twirl`]).
//! - **State zoo**: constructors for every named state used by the measures,
//!   plus JSON descriptors for the CLI ([`zoo`]).
//!
//! All logarithms are base 2; every entropic quantity is in bits.
//!
//! Values are immutable after construction and all operations are pure
//! functions of their inputs, so everything here is safe to share across
//! threads. Randomized solvers draw per-start substreams from a fixed seed and
//! reduce over starts order-independently, so results are reproducible for a
//! given seed regardless of scheduling.
//!
//! ```
//! use entkit::{make_ghz, lambda_max_numeric, GmeConfig};
//!
//! let ghz = make_ghz(3)?;
//! let r = lambda_max_numeric(&ghz, &GmeConfig::default())?;
//! assert!((r.lambda_max - 0.5f64.sqrt()).abs() < 1e-9);
//! assert!((r.e_log2 - 1.0).abs() < 1e-8); // one bit of entanglement
//! # Ok::<(), entkit::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod entropy;
pub mod error;
pub mod figures;
pub mod gme;
pub mod linalg;
pub mod re;
pub mod state;
pub mod tolerances;
pub mod twirl;
pub mod zoo;

pub use entropy::{relative_entropy, von_neumann_entropy};
pub use error::{Error, Result};
pub use gme::{
    convex_roof_segment, e_measures, epsilon_symmetric, lambda_max_closed_form,
    lambda_max_numeric, ClosedFormFamily, Envelope1D, GmeConfig, GmeResult,
};
pub use linalg::{hermitian_eig, kron, HermitianEig};
pub use re::{
    co_f_two_component, co_f_two_component_at, conjectured_er_closed, dicke_diagonal_weights,
    er_lower_bound, er_numeric, f_upper, monotone_f, plenio_vedral_check, theta_star, ErConfig,
    ErResult, ErSigma, Restriction,
};
pub use state::{
    partial_trace, DensityMatrix, PartyStructure, ProductState, PureState, SeparableEnsemble,
};
pub use twirl::{permutation_twirl, phase_twirl};
pub use zoo::{
    make_closest_separable, make_determinant, make_determinant_general, make_dicke,
    make_dicke_mixture, make_generalized_symmetric, make_ghz, make_product_ansatz,
    make_sigma_theta, make_w_superposition, two_component, DickeMixture, SeparableFamily,
    StateDescriptor, StateObject,
};

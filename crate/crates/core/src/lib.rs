//! Kronecker-product algebra and spin-1/2 Hamiltonians.
//!
//! * [`kron`]: the product itself, its algebraic rules as residual checks, and
//!   the perfect-shuffle similarity between `A ⊗ B` and `B ⊗ A`.
//! * [`linalg`]: dense complex arithmetic and a Jacobi Hermitian eigensolver.
//! * [`spin`]: Pauli matrices, site lifting, total spin components and `S²`.
//! * [`hamiltonian`]: NMR Hamiltonians from a coupling spec.
//! * [`matfree`]: matrix-free Kronecker sums, state-vector application and Lanczos.
//! * [`cli`]: the `kronspin` command-line front end.

pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod kron;
pub mod linalg;
pub mod matfree;
pub mod matrix;
pub mod spin;

pub use error::{Error, Result};
pub use hamiltonian::{
    build_general, build_h2, build_h3, verify_h2_decomposition, CouplingEdge, CouplingMatch,
    H2Decomposition, HamiltonianSpec, WeightTriple,
};
pub use kron::{
    check_property, commutation_matrix, kron, kron_chain, noncommutativity_witness,
    similarity_transform, swap_kron_factors, KronProperty, PropertyCheck, ResidualReport,
};
pub use linalg::{commutator, eigh, spectrum_multiset_equal, Spectrum};
pub use matfree::{
    lanczos_extremal, spec_to_kronsum, Factor, KronSum, KronTerm, LanczosConfig, StateVector, Which,
};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use spin::{
    conserved_residual, lift, pauli, total_component, total_spin_squared, PauliAxis, SiteIndex,
    DENSE_CAP,
};

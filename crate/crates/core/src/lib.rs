//! Ladder operators, extremal states and coherent states for n-dimensional
//! quadratic Hamiltonians in the trap regime.

pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod penning;
pub mod spectral;

pub use error::{Error, Result};
pub use gaussian::{
    coherent_wavefunction, decompose_linear_forms, displacement_vectors, extremal_state, extremal_wavefunction,
    CoherentState, GaussianExtremalState, LinearFormDecomposition,
};
pub use model::{
    build_hamiltonian, dynamical_matrix, symplectic_form, DynamicalMatrix, QuadraticHamiltonian, SymplecticForm,
};
pub use observables::{
    covariance, evolve, fock_energy, gaussian_covariance, hamiltonian_stats, kernel, mode_action, CovarianceReport,
    HamiltonianStats,
};
pub use oracle::{Axis, Grid, Stencil};
pub use penning::{
    penning_closed_forms, penning_hamiltonian, penning_ladder, uncertainty_surface, PenningClosedForms, PenningParams,
    SweepPoint,
};
pub use spectral::{
    classify_regime, eigen_pairing, ladder_system, normalize_ladder, random_trap_hamiltonian, random_trap_system,
    EigenPairing, LadderSystem, RegimeKind, RegimeReport,
};

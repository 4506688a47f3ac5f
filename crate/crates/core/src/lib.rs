//! Variance-product uncertainty bounds for pairs of observables on
//! finite-dimensional pure states.
//!
//! The crate computes the classical Robertson and Schrödinger bounds, the
//! Mondal-Bagchi-Pati bound, and the weighted Callebaut and Milne bounds in a
//! fixed basis ([`bounds`]); maximizes the latter two over orthonormal bases
//! ([`basisopt`]); and cross-checks everything with independent verifiers
//! ([`oracle`]).

pub mod basisopt;
pub mod bounds;
mod error;
pub mod neldermead;
pub mod oracle;
pub mod qcore;
pub mod scenarios;

pub use basisopt::{
    l1_l2_combined, objective, optimize, optimize_all, unitary_from_params, BasisParams,
    ObjectiveKind, OptResult, OptimizedBounds, OptimizerConfig,
};
pub use bounds::{
    callebaut_product, combined_bound, full_report, mbp_bound, mbp_bound_literal, milne_product,
    robertson_bound, schrodinger_bound, BoundReport, MagnitudeVector, Weight,
};
pub use error::{Error, Result};
pub use oracle::{verify_suite, VerifyReport};
pub use qcore::{
    amplitudes, anticommutator_expectation, centered_apply, commutator_expectation, expectation,
    inner, variance, CMatrix, Complex64, ComplexVector, HermitianObservable, OrthonormalBasis,
    PureState,
};
pub use scenarios::{
    pauli_operators, random_hermitian, random_state, spin1_operators, sweep, theta_state,
    BasisMode, SweepRow, SweepSpec,
};

//! Least upper bounds on the probability that a canonical phase measurement
//! of precision `dalpha` succeeds on a state whose photon number was first
//! measured to precision `dk`.
//!
//! The bound is the largest eigenvalue of a sinc-type Toeplitz kernel
//! ([`bound_kernel`]); its fixed-concentration limit is an integral operator
//! with prolate spheroidal eigenfunctions ([`asymptotic_limit`]). The
//! underlying probability model lives in [`canonical_povm`], and [`oracle`]
//! holds independent brute-force checks.

pub mod asymptotic_limit;
pub mod bound_kernel;
pub mod canonical_povm;
pub mod eigen;
pub mod oracle;
pub mod quadrature;
pub mod state_space;

pub use asymptotic_limit::{
    discrete_to_asymptotic_check, lambda0_asymptotic, nystrom_spectrum, xi, AsymptoticError,
    AsymptoticLambda0, AsymptoticProblem, AsymptoticSpectrum, ConvergenceReport,
};
pub use bound_kernel::{
    cauchy_bound, eigensystem, least_upper_bound, least_upper_bound_at_xi, ConcentrationKernel,
    KernelError, OptimalBound, SpectrumResult,
};
pub use canonical_povm::{
    conditional_probability, interval_probability, number_probability, phase_density, reduce,
    PhaseMatrix, PovmError, ValidityReport,
};
pub use eigen::EigenError;
pub use oracle::{OracleConfig, OracleError, PowerEstimate, PowerStatus};
pub use state_space::{FockState, NumberWindow, PhaseWindow, StateError};

//! The concentration kernel and the least upper bound on the success
//! probability of a phase measurement after a number measurement.
//!
//! For phase precision `dalpha` and number precision `dk` the kernel is the
//! `(dk+1) x (dk+1)` symmetric Toeplitz matrix
//!
//! ```text
//! G[n][m] = sin(dalpha (n - m) / 2) / (pi (n - m)),   G[n][n] = dalpha / (2 pi)
//! ```
//!
//! and the conditional phase probability of a state supported on `0..=dk`,
//! with the window centred at zero, is the quadratic form `<psi|G|psi>`. Its
//! supremum is the largest eigenvalue.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::eigen::{symmetric_eigen, Diagnostics, EigenError};
use crate::state_space::FockState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("phase precision {0} outside [0, 2pi]")]
    PhasePrecision(f64),
    #[error("concentration {xi} needs phase precision above 2pi at dk = {dk}")]
    ConcentrationTooLarge { xi: f64, dk: usize },
    #[error("concentration {0} must be finite and non-negative")]
    Concentration(f64),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

impl KernelError {
    /// True for parameter-domain errors, false for numerical failures.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            KernelError::Eigen(EigenError::ConvergenceFailure { .. })
        )
    }
}

pub(crate) fn check_phase_precision(dalpha: f64) -> Result<(), KernelError> {
    if (0.0..=TAU).contains(&dalpha) {
        Ok(())
    } else {
        Err(KernelError::PhasePrecision(dalpha))
    }
}

/// Off-diagonal kernel value at distance `d >= 1`.
fn off_diagonal(dalpha: f64, d: usize) -> f64 {
    if dalpha == TAU {
        // full circle: sin(pi d) vanishes exactly
        return 0.0;
    }
    let d = d as f64;
    (0.5 * dalpha * d).sin() / (PI * d)
}

/// Symmetric Toeplitz kernel stored by its first column.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationKernel {
    dalpha: f64,
    dk: usize,
    column: Vec<f64>,
}

impl ConcentrationKernel {
    pub fn new(dalpha: f64, dk: usize) -> Result<Self, KernelError> {
        check_phase_precision(dalpha)?;
        Ok(Self::assemble(dalpha, dk, dalpha / TAU))
    }

    /// Kernel at concentration `xi = dalpha (dk+1) / (2 pi)`.
    ///
    /// The diagonal is set to `xi / (dk+1)` directly so that the trace is `xi`
    /// without a round trip through `dalpha`.
    pub fn from_xi(xi: f64, dk: usize) -> Result<Self, KernelError> {
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(KernelError::Concentration(xi));
        }
        let size = (dk + 1) as f64;
        if xi > size {
            return Err(KernelError::ConcentrationTooLarge { xi, dk });
        }
        let dalpha = if xi == size { TAU } else { TAU * xi / size };
        Ok(Self::assemble(dalpha, dk, xi / size))
    }

    fn assemble(dalpha: f64, dk: usize, diagonal: f64) -> Self {
        let mut column = Vec::with_capacity(dk + 1);
        column.push(diagonal);
        column.extend((1..=dk).map(|d| off_diagonal(dalpha, d)));
        Self { dalpha, dk, column }
    }

    pub fn dalpha(&self) -> f64 {
        self.dalpha
    }

    pub fn dk(&self) -> usize {
        self.dk
    }

    pub fn dim(&self) -> usize {
        self.dk + 1
    }

    pub fn entry(&self, n: usize, m: usize) -> f64 {
        self.column[n.abs_diff(m)]
    }

    /// First column; entry `d` is `G[n][n + d]`.
    pub fn column(&self) -> &[f64] {
        &self.column
    }

    pub fn trace(&self) -> f64 {
        self.column[0] * self.dim() as f64
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut dense = Vec::with_capacity(n * n);
        for i in 0..n {
            dense.extend((0..n).map(|j| self.entry(i, j)));
        }
        dense
    }

    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = v
                .iter()
                .enumerate()
                .map(|(j, x)| self.entry(i, j) * x)
                .sum();
        }
    }

    /// `sum_{n,m} G[n][m] conj(psi_n) psi_m` for amplitudes on `0..=dk`.
    ///
    /// Shorter slices are zero-padded; extra amplitudes are ignored.
    pub fn quadratic_form(&self, psi: &[Complex64]) -> f64 {
        let psi = &psi[..psi.len().min(self.dim())];
        let mut total = 0.0;
        for (n, a) in psi.iter().enumerate() {
            total += self.column[0] * a.norm_sqr();
            for (m, b) in psi.iter().enumerate().take(n) {
                total += 2.0 * self.column[n - m] * (a.conj() * b).re;
            }
        }
        total
    }

    /// Quadratic form over squared norm.
    pub fn rayleigh_quotient(&self, psi: &[Complex64]) -> f64 {
        let norm_sq: f64 = psi[..psi.len().min(self.dim())]
            .iter()
            .map(|a| a.norm_sqr())
            .sum();
        self.quadratic_form(psi) / norm_sq
    }
}

/// Descending spectrum of a kernel with its eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl SpectrumResult {
    pub fn lambda0(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn eigensystem(kernel: &ConcentrationKernel) -> Result<SpectrumResult, KernelError> {
    let eig = symmetric_eigen(&kernel.to_dense(), kernel.dim())?;
    Ok(SpectrumResult {
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        diagnostics: eig.diagnostics,
    })
}

/// Largest achievable conditional phase probability and a state attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalBound {
    pub lambda0: f64,
    /// Top eigenvector as a state on photon numbers `0..=dk`.
    pub state: FockState,
    pub spectrum: SpectrumResult,
}

pub fn least_upper_bound(dalpha: f64, dk: usize) -> Result<OptimalBound, KernelError> {
    optimal_for(&ConcentrationKernel::new(dalpha, dk)?)
}

/// As [`least_upper_bound`], parametrized by concentration.
pub fn least_upper_bound_at_xi(xi: f64, dk: usize) -> Result<OptimalBound, KernelError> {
    optimal_for(&ConcentrationKernel::from_xi(xi, dk)?)
}

fn optimal_for(kernel: &ConcentrationKernel) -> Result<OptimalBound, KernelError> {
    let spectrum = eigensystem(kernel)?;
    let top = spectrum.eigenvectors[0]
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    let state = FockState::new(0, top).expect("eigenvector entries are finite");
    Ok(OptimalBound {
        lambda0: spectrum.lambda0(),
        state,
        spectrum,
    })
}

/// The elementary bound `min(1, dalpha (dk+1) / (2 pi))`, valid for every state.
pub fn cauchy_bound(dalpha: f64, dk: usize) -> Result<f64, KernelError> {
    check_phase_precision(dalpha)?;
    Ok((dalpha * (dk + 1) as f64 / TAU).min(1.0))
}

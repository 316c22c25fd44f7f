//! Brute-force cross-checks that share no numerical method with the
//! production path: Simpson quadrature of the phase density, power iteration
//! for the top eigenvalue, and random search over states for the supremum.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::bound_kernel::{ConcentrationKernel, KernelError};
use crate::eigen::fix_sign;
use crate::state_space::{FockState, PhaseWindow, StateError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    Config(&'static str),
    #[error("power iteration needs a nonzero kernel")]
    ZeroKernel,
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Simpson points per full turn; windows get a proportional share.
    pub quadrature_points: usize,
    pub trials: usize,
    pub seed: u64,
    pub power_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            quadrature_points: 4096,
            trials: 1000,
            seed: 42,
            power_tolerance: 1e-12,
            max_iterations: 100_000,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.quadrature_points == 0 {
            return Err(OracleError::Config("quadrature points must be positive"));
        }
        if self.trials == 0 {
            return Err(OracleError::Config("trial count must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(OracleError::Config("iteration cap must be positive"));
        }
        if !(self.power_tolerance > 0.0 && self.power_tolerance <= 1e-6) {
            return Err(OracleError::Config("power tolerance must lie in (0, 1e-6]"));
        }
        Ok(())
    }
}

/// Composite Simpson estimate of the canonical phase probability.
///
/// Integrates `(1/2pi) |sum psi_n exp(-i n phi)|^2` straight across
/// `[center - width/2, center + width/2]` without reducing to `[-pi, pi)`; the
/// integrand is periodic so no splitting is needed.
pub fn quadrature_probability(
    state: &FockState,
    window: &PhaseWindow,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    cfg.validate()?;
    let state = state.normalize()?;
    let width = window.width();
    if width == 0.0 {
        return Ok(0.0);
    }
    let density = |phi: f64| {
        let mut sum = Complex64::default();
        for (n, a) in state.iter() {
            let angle = -(n as f64) * phi;
            sum += a * Complex64::new(angle.cos(), angle.sin());
        }
        sum.norm_sqr() / TAU
    };
    let mut intervals = ((cfg.quadrature_points as f64 * width / TAU).ceil() as usize).max(2);
    intervals += intervals % 2;
    let lo = window.center() - 0.5 * width;
    let h = width / intervals as f64;
    let mut acc = density(lo) + density(lo + width);
    for i in 1..intervals {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * density(lo + i as f64 * h);
    }
    Ok(acc * h / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerStatus {
    Converged,
    /// Iteration cap hit before the extrapolated error met the tolerance.
    SlowConvergence,
    /// Two seeded starts converged to different vectors: the top eigenvalue
    /// is (numerically) repeated and the vector is not determined.
    GapDegenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerEstimate {
    pub lambda0: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub status: PowerStatus,
}

fn seeded_unit_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

fn run_power(kernel: &ConcentrationKernel, start: Vec<f64>, cfg: &OracleConfig) -> PowerEstimate {
    let mut v = start;
    let mut w = vec![0.0; v.len()];
    let mut rho = 0.0;
    let mut last_step = f64::NAN;
    for iteration in 1..=cfg.max_iterations {
        kernel.apply(&v, &mut w);
        let previous = rho;
        rho = v.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>();
        let residual = w
            .iter()
            .zip(&v)
            .map(|(y, x)| (y - rho * x).powi(2))
            .sum::<f64>()
            .sqrt();
        let step = rho - previous;
        let done = residual <= cfg.power_tolerance
            || (iteration > 2 && step == 0.0)
            || (iteration > 2 && {
                // Rayleigh quotients converge geometrically; extrapolate the tail
                let q = step / last_step;
                q > 0.0 && q < 1.0 && step.abs() * q / (1.0 - q) <= cfg.power_tolerance
            });
        last_step = step;
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if done || norm == 0.0 {
            fix_sign(&mut v);
            return PowerEstimate {
                lambda0: rho,
                vector: v,
                iterations: iteration,
                status: PowerStatus::Converged,
            };
        }
        v.iter_mut().zip(&w).for_each(|(x, y)| *x = y / norm);
    }
    fix_sign(&mut v);
    PowerEstimate {
        lambda0: rho,
        vector: v,
        iterations: cfg.max_iterations,
        status: PowerStatus::SlowConvergence,
    }
}

/// Dominant eigenpair by repeated multiplication from a seeded start.
///
/// A second run from `seed + 1` detects a repeated top eigenvalue.
pub fn power_iteration(
    kernel: &ConcentrationKernel,
    cfg: &OracleConfig,
) -> Result<PowerEstimate, OracleError> {
    cfg.validate()?;
    if kernel.column().iter().all(|&x| x == 0.0) {
        return Err(OracleError::ZeroKernel);
    }
    let dim = kernel.dim();
    let mut first = run_power(kernel, seeded_unit_vector(dim, cfg.seed), cfg);
    if first.status != PowerStatus::Converged || dim == 1 {
        return Ok(first);
    }
    let second = run_power(
        kernel,
        seeded_unit_vector(dim, cfg.seed.wrapping_add(1)),
        cfg,
    );
    if second.status == PowerStatus::Converged {
        let overlap: f64 = first
            .vector
            .iter()
            .zip(&second.vector)
            .map(|(x, y)| x * y)
            .sum();
        if 1.0 - overlap.abs() > 1e-3 {
            first.status = PowerStatus::GapDegenerate;
        }
    }
    Ok(first)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: f64,
    pub best_trial: usize,
    /// Success probability of every trial state, in trial order.
    pub values: Vec<f64>,
}

/// Best conditional phase probability over random states on `0..=dk`.
///
/// Trial `t` draws complex Gaussian amplitudes from a generator seeded with
/// `seed + t`, so trials are independent of each other and of scheduling.
pub fn random_state_search(
    dalpha: f64,
    dk: usize,
    cfg: &OracleConfig,
) -> Result<SearchResult, OracleError> {
    cfg.validate()?;
    let kernel = ConcentrationKernel::new(dalpha, dk)?;
    let values: Vec<f64> = (0..cfg.trials)
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(trial as u64));
            let psi: Vec<Complex64> = (0..=dk)
                .map(|_| {
                    Complex64::new(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    )
                })
                .collect();
            kernel.rayleigh_quotient(&psi)
        })
        .collect();
    let (best_trial, best) =
        values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, x)| if x > acc.1 { (i, x) } else { acc },
            );
    Ok(SearchResult {
        best,
        best_trial,
        values,
    })
}

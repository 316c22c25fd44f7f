//! The limit of infinitely fine number resolution at fixed concentration.
//!
//! As `dk` grows with `xi = dalpha (dk+1) / (2 pi)` held fixed, the kernel
//! eigenproblem tends to the integral eigenproblem on `[-1, 1]`
//!
//! ```text
//! int_{-1}^{1} K(z, z') phi(z') dz' = lambda phi(z),
//! K(z, z') = sin(pi xi (z - z') / 2) / (pi (z - z')),   K(z, z) = xi / 2,
//! ```
//!
//! whose eigenfunctions are the angular prolate spheroidal functions. It is
//! discretized with a Gauss-Legendre Nystrom rule.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::bound_kernel::{check_phase_precision, least_upper_bound_at_xi, KernelError};
use crate::eigen::{symmetric_eigen, EigenError};
use crate::quadrature::GaussLegendre;

/// Node count the refinement in [`lambda0_asymptotic`] starts from.
pub const START_NODES: usize = 32;
/// Refinement stops after this node count.
pub const MAX_NODES: usize = 4096;
/// Successive top eigenvalues closer than this count as converged.
pub const REFINE_TOL: f64 = 1e-10;
/// At the node cap, differences below this are still accepted.
pub const ACCEPT_TOL: f64 = 1e-8;

/// Below this `|pi xi t / 2|` the kernel uses its Taylor series.
const TAYLOR_SWITCH: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticError {
    #[error("concentration {0} must be finite and non-negative")]
    Concentration(f64),
    #[error("Nystrom rule needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("top eigenvalue not converged at {nodes} nodes (last change {difference:e})")]
    NoConvergence { nodes: usize, difference: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// `xi = dalpha (dk+1) / (2 pi)`.
pub fn xi(dalpha: f64, dk: usize) -> Result<f64, KernelError> {
    check_phase_precision(dalpha)?;
    Ok(dalpha * (dk + 1) as f64 / TAU)
}

/// Continuum kernel at concentration `xi` and separation `t = z - z'`.
pub fn sinc_kernel(xi: f64, t: f64) -> f64 {
    let x = 0.5 * PI * xi * t;
    if x.abs() < TAYLOR_SWITCH {
        let x2 = x * x;
        0.5 * xi * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0)))
    } else {
        x.sin() / (PI * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticProblem {
    pub xi: f64,
    pub nodes: usize,
}

impl AsymptoticProblem {
    pub fn new(xi: f64, nodes: usize) -> Result<Self, AsymptoticError> {
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(AsymptoticError::Concentration(xi));
        }
        if nodes < 2 {
            return Err(AsymptoticError::TooFewNodes(nodes));
        }
        Ok(Self { xi, nodes })
    }

    pub fn kernel(&self, z: f64, zp: f64) -> f64 {
        sinc_kernel(self.xi, z - zp)
    }

    /// Symmetrized Nystrom matrix `sqrt(w_i w_j) K(z_i, z_j)`, row-major.
    pub fn nystrom_matrix(&self, rule: &GaussLegendre) -> Vec<f64> {
        let n = rule.len();
        let roots: Vec<f64> = rule.weights.iter().map(|w| w.sqrt()).collect();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = roots[i] * roots[j] * self.kernel(rule.nodes[i], rule.nodes[j]);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticSpectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenfunctions[v][i]` samples the `v`-th eigenfunction at `nodes[i]`,
    /// normalized in `L2([-1, 1])`.
    pub eigenfunctions: Vec<Vec<f64>>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `|lambda_v(n) - lambda_v(n/2)|` where the coarse rule resolves index `v`.
    pub error_estimates: Vec<Option<f64>>,
}

impl AsymptoticSpectrum {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

fn solve(
    problem: &AsymptoticProblem,
) -> Result<(GaussLegendre, crate::eigen::SymmetricEigen), AsymptoticError> {
    let rule = GaussLegendre::new(problem.nodes);
    let eig = symmetric_eigen(&problem.nystrom_matrix(&rule), problem.nodes)?;
    Ok((rule, eig))
}

pub fn nystrom_spectrum(
    problem: &AsymptoticProblem,
) -> Result<AsymptoticSpectrum, AsymptoticError> {
    let (rule, eig) = solve(problem)?;
    let coarse = if problem.nodes >= 4 {
        Some(
            solve(&AsymptoticProblem::new(problem.xi, problem.nodes / 2)?)?
                .1
                .values,
        )
    } else {
        None
    };
    let error_estimates = eig
        .values
        .iter()
        .enumerate()
        .map(|(v, fine)| {
            coarse
                .as_ref()
                .and_then(|c| c.get(v))
                .map(|c| (fine - c).abs())
        })
        .collect();
    let eigenfunctions = eig
        .vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(&rule.weights)
                .map(|(x, w)| x / w.sqrt())
                .collect()
        })
        .collect();
    Ok(AsymptoticSpectrum {
        eigenvalues: eig.values,
        eigenfunctions,
        nodes: rule.nodes,
        weights: rule.weights,
        error_estimates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticLambda0 {
    pub value: f64,
    /// Change between the last two resolutions.
    pub error_estimate: f64,
    /// Node count of the returned value.
    pub nodes: usize,
}

/// Top eigenvalue of the integral operator, refining the rule by doubling.
pub fn lambda0_asymptotic(xi: f64) -> Result<AsymptoticLambda0, AsymptoticError> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(AsymptoticError::Concentration(xi));
    }
    let top = |nodes| -> Result<f64, AsymptoticError> {
        Ok(solve(&AsymptoticProblem::new(xi, nodes)?)?.1.values[0])
    };
    let mut nodes = START_NODES;
    let mut previous = top(nodes)?;
    loop {
        let next_nodes = nodes * 2;
        let value = top(next_nodes)?;
        let difference = (value - previous).abs();
        if difference < REFINE_TOL || next_nodes >= MAX_NODES {
            if difference >= ACCEPT_TOL {
                return Err(AsymptoticError::NoConvergence {
                    nodes: next_nodes,
                    difference,
                });
            }
            return Ok(AsymptoticLambda0 {
                value,
                error_estimate: difference,
                nodes: next_nodes,
            });
        }
        nodes = next_nodes;
        previous = value;
    }
}

/// Discrete bound at finite `dk` next to its continuum limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub xi: f64,
    pub dk: usize,
    pub dalpha: f64,
    pub discrete: f64,
    pub asymptotic: AsymptoticLambda0,
}

impl ConvergenceReport {
    /// `discrete - asymptotic`; positive when the finite-`dk` curve lies above.
    pub fn difference(&self) -> f64 {
        self.discrete - self.asymptotic.value
    }
}

pub fn discrete_to_asymptotic_check(
    xi: f64,
    dk: usize,
) -> Result<ConvergenceReport, AsymptoticError> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(AsymptoticError::Concentration(xi));
    }
    let bound = least_upper_bound_at_xi(xi, dk)?;
    let asymptotic = lambda0_asymptotic(xi)?;
    Ok(ConvergenceReport {
        xi,
        dk,
        dalpha: TAU * xi / (dk + 1) as f64,
        discrete: bound.lambda0,
        asymptotic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn xi_examples() {
        assert_eq!(xi(PI, 1).unwrap(), 1.0);
        assert_eq!(xi(TAU, 0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            xi(0.1, 99).unwrap(),
            1.591_549_430_918_953_4,
            epsilon = 1e-15
        );
        assert!(xi(-0.5, 2).is_err());
    }

    #[test]
    fn taylor_branch_is_continuous() {
        for xi in [0.3, 1.0, 7.0] {
            let edge = 2.0 * TAYLOR_SWITCH / (PI * xi);
            let inside = sinc_kernel(xi, edge * (1.0 - 1e-9));
            let outside = sinc_kernel(xi, edge * (1.0 + 1e-9));
            assert_abs_diff_eq!(inside, outside, epsilon = 1e-14);
            assert_eq!(sinc_kernel(xi, 0.0), 0.5 * xi);
            assert_eq!(sinc_kernel(xi, 0.3), sinc_kernel(xi, -0.3));
        }
    }

    #[test]
    fn zero_concentration_gives_zero_spectrum() {
        let s = nystrom_spectrum(&AsymptoticProblem::new(0.0, 16).unwrap()).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| l == 0.0));
        let l = lambda0_asymptotic(0.0).unwrap();
        assert_eq!(l.value, 0.0);
    }

    #[test]
    fn nystrom_trace() {
        let p = AsymptoticProblem::new(1.0, 64).unwrap();
        let rule = GaussLegendre::new(64);
        let diag_sum: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&z, &w)| w * p.kernel(z, z))
            .sum();
        assert_abs_diff_eq!(diag_sum, 1.0, epsilon = 1e-13);
        let s = nystrom_spectrum(&p).unwrap();
        assert_abs_diff_eq!(s.eigenvalues.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn resolution_independence() {
        let a = nystrom_spectrum(&AsymptoticProblem::new(1.0, 64).unwrap()).unwrap();
        let b = nystrom_spectrum(&AsymptoticProblem::new(1.0, 128).unwrap()).unwrap();
        assert!((a.eigenvalues[0] - b.eigenvalues[0]).abs() < 1e-10);
        assert!(b.error_estimates[0].unwrap() < 1e-10);
        assert!(b.error_estimates[100].is_none());
    }

    #[test]
    fn lambda0_examples() {
        let small = lambda0_asymptotic(0.1).unwrap();
        let ratio = small.value / 0.1;
        assert!((0.99..=1.0).contains(&ratio), "ratio {ratio}");
        assert!(lambda0_asymptotic(4.0).unwrap().value > 0.999);
        assert!(lambda0_asymptotic(-1.0).is_err());
        assert!(lambda0_asymptotic(f64::INFINITY).is_err());
    }

    #[test]
    fn eigenfunctions_are_l2_normalized() {
        let s = nystrom_spectrum(&AsymptoticProblem::new(2.0, 48).unwrap()).unwrap();
        for f in s.eigenfunctions.iter().take(4) {
            let norm: f64 = f.iter().zip(&s.weights).map(|(x, w)| w * x * x).sum();
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn convergence_check_examples() {
        let r = discrete_to_asymptotic_check(1.0, 200).unwrap();
        assert!(r.difference().abs() < 1e-3);

        let d: Vec<f64> = [10, 50, 200]
            .iter()
            .map(|&dk| {
                discrete_to_asymptotic_check(1.0, dk)
                    .unwrap()
                    .difference()
                    .abs()
            })
            .collect();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");

        let r = discrete_to_asymptotic_check(0.5, 0).unwrap();
        assert_eq!(r.discrete, 0.5);
        assert!(r.asymptotic.value < 0.5);
        assert!(r.difference() > 0.0);

        assert!(matches!(
            discrete_to_asymptotic_check(3.0, 1),
            Err(AsymptoticError::Kernel(
                KernelError::ConcentrationTooLarge { .. }
            ))
        ));
        assert!(discrete_to_asymptotic_check(0.0, 3).is_err());
    }
}

//! Dense symmetric eigensolver: cyclic Jacobi rotations.
//!
//! Matrices are row-major `dim * dim` slices. The solver works on a full
//! copy, rotating rows in place and mirroring them into columns so every
//! inner loop walks contiguous memory. Eigenvectors are accumulated as rows.

use thiserror::Error;

/// Sweep cap; quadratic convergence normally finishes in under a dozen.
pub const MAX_SWEEPS: usize = 100;

/// Per-dimension residual target: `||A v - lambda v|| <= RESIDUAL_TOL * dim * max(1, max|a_ij|)`.
pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix has {len} entries, expected {dim}x{dim}")]
    Shape { len: usize, dim: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("no convergence after {sweeps} sweeps (residual {residual:e}, target {target:e})")]
    ConvergenceFailure {
        sweeps: usize,
        residual: f64,
        target: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub sweeps: usize,
    /// `max_s ||A v_s - lambda_s v_s||`.
    pub max_residual: f64,
    /// `max |V^T V - I|`.
    pub orthogonality_defect: f64,
    /// `lambda_0 - lambda_1`, infinite for a 1x1 matrix.
    pub top_gap: f64,
    /// Smallest adjacent gap in the sorted spectrum.
    pub min_gap: f64,
}

/// Eigenpairs sorted by descending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[s]` pairs with `values[s]`; unit length, largest-magnitude
    /// component positive.
    pub vectors: Vec<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

impl SymmetricEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Flips `v` so its largest-magnitude component is positive. Components within
/// a relative `1e-10` of the maximum count as ties; the first one decides.
pub fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-10))
        .expect("maximum is attained");
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn sym_matvec(a: &[f64], dim: usize, v: &[f64], out: &mut [f64]) {
    for (row, o) in a.chunks_exact(dim).zip(out.iter_mut()) {
        *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
    }
}

/// Full eigendecomposition of a real symmetric matrix.
pub fn symmetric_eigen(matrix: &[f64], dim: usize) -> Result<SymmetricEigen, EigenError> {
    if matrix.len() != dim * dim {
        return Err(EigenError::Shape {
            len: matrix.len(),
            dim,
        });
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(EigenError::NonFinite);
    }
    let scale = matrix.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..dim {
        for j in 0..i {
            let (x, y) = (matrix[i * dim + j], matrix[j * dim + i]);
            if (x - y).abs() > 1e-14 * scale.max(1.0) {
                return Err(EigenError::NotSymmetric { row: i, col: j });
            }
        }
    }

    let mut a = matrix.to_vec();
    let mut vt = vec![0.0; dim * dim];
    for i in 0..dim {
        vt[i * dim + i] = 1.0;
    }
    let frobenius = matrix.iter().map(|x| x * x).sum::<f64>().sqrt();
    let floor = frobenius * 1e-30;

    let mut sweeps = 0;
    let mut converged = dim <= 1;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotations = 0usize;
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                if apq.abs() <= floor
                    || apq.abs() <= 0.5 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt()
                {
                    a[p * dim + q] = 0.0;
                    a[q * dim + p] = 0.0;
                    continue;
                }
                rotations += 1;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;

                a[p * dim + p] = app - t * apq;
                a[q * dim + q] = aqq + t * apq;
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
                for k in 0..dim {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[p * dim + k];
                    let akq = a[q * dim + k];
                    let new_p = c * akp - s * akq;
                    let new_q = s * akp + c * akq;
                    a[p * dim + k] = new_p;
                    a[k * dim + p] = new_p;
                    a[q * dim + k] = new_q;
                    a[k * dim + q] = new_q;
                }
                let (head, tail) = vt.split_at_mut(q * dim);
                let row_p = &mut head[p * dim..(p + 1) * dim];
                let row_q = &mut tail[..dim];
                for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
                    let (x, y) = (*vp, *vq);
                    *vp = c * x - s * y;
                    *vq = s * x + c * y;
                }
            }
        }
        converged = rotations == 0;
    }

    let mut order: Vec<usize> = (0..dim).collect();
    // stable: equal eigenvalues keep their original order
    order.sort_by(|&i, &j| a[j * dim + j].total_cmp(&a[i * dim + i]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * dim + i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v = vt[i * dim..(i + 1) * dim].to_vec();
            fix_sign(&mut v);
            v
        })
        .collect();

    let mut work = vec![0.0; dim];
    let mut max_residual = 0.0f64;
    for (lambda, v) in values.iter().zip(&vectors) {
        sym_matvec(matrix, dim, v, &mut work);
        let r = work
            .iter()
            .zip(v)
            .map(|(av, x)| (av - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        max_residual = max_residual.max(r);
    }
    let mut orthogonality_defect = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, w) in vectors.iter().enumerate().take(i + 1) {
            let dot: f64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orthogonality_defect = orthogonality_defect.max((dot - target).abs());
        }
    }
    let gaps: Vec<f64> = values.windows(2).map(|w| w[0] - w[1]).collect();
    let diagnostics = Diagnostics {
        sweeps,
        max_residual,
        orthogonality_defect,
        top_gap: gaps.first().copied().unwrap_or(f64::INFINITY),
        min_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
    };

    let target = RESIDUAL_TOL * dim.max(1) as f64 * scale.max(1.0);
    if !converged || max_residual > target {
        return Err(EigenError::ConvergenceFailure {
            sweeps,
            residual: max_residual,
            target,
        });
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_by_two_toeplitz_closed_form() {
        let (a, b) = (0.5, 0.3);
        let eig = symmetric_eigen(&[a, b, b, a], 2).unwrap();
        assert_abs_diff_eq!(eig.values[0], a + b, epsilon = 1e-15);
        assert_abs_diff_eq!(eig.values[1], a - b, epsilon = 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(eig.vectors[0][0], h, epsilon = 1e-15);
        assert_abs_diff_eq!(eig.vectors[0][1], h, epsilon = 1e-15);
        // antisymmetric vector: tie broken towards the first component
        assert!(eig.vectors[1][0] > 0.0 && eig.vectors[1][1] < 0.0);
    }

    #[test]
    fn diagonal_and_zero_matrices() {
        let eig = symmetric_eigen(&[1.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 2.0], 3).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(eig.vectors[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(eig.diagnostics.sweeps, 1);

        let zero = symmetric_eigen(&[0.0; 9], 3).unwrap();
        assert_eq!(zero.values, vec![0.0; 3]);
        assert_eq!(zero.vectors[0], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn one_by_one_and_empty() {
        let eig = symmetric_eigen(&[0.25], 1).unwrap();
        assert_eq!(eig.values, vec![0.25]);
        assert_eq!(eig.vectors, vec![vec![1.0]]);
        assert!(eig.diagnostics.top_gap.is_infinite());
        assert_eq!(symmetric_eigen(&[], 0).unwrap().dim(), 0);
    }

    #[test]
    fn reconstructs_dense_matrix() {
        // Lehmer-like test matrix with known positive definiteness
        let n = 7;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = (i.min(j) + 1) as f64 / (i.max(j) + 1) as f64;
            }
        }
        let eig = symmetric_eigen(&m, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let r: f64 = (0..n)
                    .map(|s| eig.values[s] * eig.vectors[s][i] * eig.vectors[s][j])
                    .sum();
                assert_abs_diff_eq!(r, m[i * n + j], epsilon = 1e-13);
            }
        }
        assert!(eig.diagnostics.orthogonality_defect < 1e-14);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let trace: f64 = (0..n).map(|i| m[i * n + i]).sum();
        assert_abs_diff_eq!(eig.values.iter().sum::<f64>(), trace, epsilon = 1e-13);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            symmetric_eigen(&[1.0, 2.0, 3.0], 2),
            Err(EigenError::Shape { .. })
        ));
        assert!(matches!(
            symmetric_eigen(&[1.0, 2.0, 3.0, 1.0], 2),
            Err(EigenError::NotSymmetric { row: 1, col: 0 })
        ));
        assert_eq!(symmetric_eigen(&[f64::NAN], 1), Err(EigenError::NonFinite));
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.9, 0.3];
        fix_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
        let mut zero = vec![0.0, 0.0];
        fix_sign(&mut zero);
        assert_eq!(zero, vec![0.0, 0.0]);
    }
}

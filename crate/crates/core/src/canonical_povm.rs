//! Covariant phase measurements and sequential number-then-phase probabilities.
//!
//! The phase density of a pure state under phase matrix `c` is the expectation
//! of `F(phi) = (1/2pi) sum_{n,m} c_nm exp(i(n-m)phi) |n><m|`, i.e.
//! `(1/2pi) sum_{n,m} c_nm conj(psi_n) psi_m exp(i(n-m)phi)`. With this sign
//! `exp(i theta N)` moves the whole distribution by `+theta`. For the
//! canonical measure (`c_nm = 1`) window probabilities are integrated in
//! closed form arc by arc, using `int_a^b exp(i d phi) dphi = (e^{idb} - e^{ida}) / (i d)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::state_space::{FockState, NumberWindow, PhaseWindow, StateError};

/// Distance from `[0, 1]` that is silently clamped.
pub const PROBABILITY_SLACK: f64 = 1e-12;

const MATRIX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PovmError {
    #[error("invalid phase matrix: {0}")]
    InvalidMatrix(String),
    #[error("state support [{first}, {last}] not covered by phase matrix window [{lo}, {hi})")]
    SupportOutsideMatrix {
        first: usize,
        last: usize,
        lo: usize,
        hi: usize,
    },
    #[error("number window {base}..={last} annihilates the state")]
    IncompatibleWindow { base: usize, last: usize },
    #[error("probability {0} outside [0, 1] beyond rounding")]
    Inconsistent(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Coefficients `c_nm` weighting the coherences of a covariant phase density.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseMatrix {
    /// `c_nm = 1` for every pair: the canonical phase measure.
    Canonical,
    /// Explicit coefficients on photon numbers `[offset, offset + dim)`, row-major.
    Explicit {
        offset: usize,
        dim: usize,
        coeffs: Vec<Complex64>,
    },
}

/// First offending entry of a failed check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixViolation {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// Outcome of the necessary conditions on a phase matrix.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidityReport {
    /// Not square (coefficient count differs from `dim * dim`).
    pub shape: Option<usize>,
    pub unit_diagonal: Option<MatrixViolation>,
    pub modulus_bound: Option<MatrixViolation>,
    pub hermitian: Option<MatrixViolation>,
}

impl ValidityReport {
    pub fn passed(&self) -> bool {
        self.shape.is_none()
            && self.unit_diagonal.is_none()
            && self.modulus_bound.is_none()
            && self.hermitian.is_none()
    }

    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(len) = self.shape {
            parts.push(format!("{len} coefficients do not form a square matrix"));
        }
        if let Some(v) = self.unit_diagonal {
            parts.push(format!("diagonal ({}, {}) = {}", v.row, v.col, v.value));
        }
        if let Some(v) = self.modulus_bound {
            parts.push(format!(
                "|c({}, {})| = {} > 1",
                v.row,
                v.col,
                v.value.norm()
            ));
        }
        if let Some(v) = self.hermitian {
            parts.push(format!("not hermitian at ({}, {})", v.row, v.col));
        }
        parts.join("; ")
    }
}

impl PhaseMatrix {
    /// Checks unit diagonal, `|c_nm| <= 1` and hermiticity. Positivity of the
    /// full measure is not certified. Indices in the report are photon numbers.
    pub fn validate(&self) -> ValidityReport {
        let (offset, dim, coeffs) = match self {
            PhaseMatrix::Canonical => return ValidityReport::default(),
            PhaseMatrix::Explicit {
                offset,
                dim,
                coeffs,
            } => (*offset, *dim, coeffs),
        };
        let mut report = ValidityReport::default();
        if coeffs.len() != dim * dim {
            report.shape = Some(coeffs.len());
            return report;
        }
        let at = |n: usize, m: usize| coeffs[n * dim + m];
        let violation = |n: usize, m: usize| MatrixViolation {
            row: offset + n,
            col: offset + m,
            value: at(n, m),
        };
        for n in 0..dim {
            for m in 0..dim {
                let c = at(n, m);
                if n == m && report.unit_diagonal.is_none() && (c - 1.0).norm() > MATRIX_TOL {
                    report.unit_diagonal = Some(violation(n, m));
                }
                if report.modulus_bound.is_none() && c.norm() > 1.0 + MATRIX_TOL {
                    report.modulus_bound = Some(violation(n, m));
                }
                if report.hermitian.is_none() && (c - at(m, n).conj()).norm() > MATRIX_TOL {
                    report.hermitian = Some(violation(n, m));
                }
            }
        }
        report
    }

    fn coefficient(&self, n: usize, m: usize) -> Complex64 {
        match self {
            PhaseMatrix::Canonical => Complex64::new(1.0, 0.0),
            PhaseMatrix::Explicit {
                offset,
                dim,
                coeffs,
            } => coeffs[(n - offset) * dim + (m - offset)],
        }
    }
}

/// Phase density of `state` under `matrix` at angle `phi`, in 1/radian.
pub fn phase_density(state: &FockState, matrix: &PhaseMatrix, phi: f64) -> Result<f64, PovmError> {
    let report = matrix.validate();
    if !report.passed() {
        return Err(PovmError::InvalidMatrix(report.describe()));
    }
    match matrix {
        PhaseMatrix::Canonical => {
            let sum: Complex64 = state
                .iter()
                .map(|(n, a)| a * Complex64::from_polar(1.0, -(n as f64) * phi))
                .sum();
            Ok(sum.norm_sqr() / TAU)
        }
        PhaseMatrix::Explicit { offset, dim, .. } => {
            if !state.is_empty() {
                let first = state.offset();
                let last = first + state.len() - 1;
                if first < *offset || last >= offset + dim {
                    return Err(PovmError::SupportOutsideMatrix {
                        first,
                        last,
                        lo: *offset,
                        hi: offset + dim,
                    });
                }
            }
            let mut total = 0.0;
            for (n, a) in state.iter() {
                for (m, b) in state.iter() {
                    let phase = Complex64::from_polar(1.0, (n as f64 - m as f64) * phi);
                    total += (matrix.coefficient(n, m) * a.conj() * b * phase).re;
                }
            }
            Ok(total / TAU)
        }
    }
}

/// `int_lo^hi exp(i d phi) dphi` for integer `d`.
fn arc_moment(d: i64, lo: f64, hi: f64) -> Complex64 {
    if d == 0 {
        return Complex64::new(hi - lo, 0.0);
    }
    let d = d as f64;
    let delta = Complex64::from_polar(1.0, d * hi) - Complex64::from_polar(1.0, d * lo);
    delta / Complex64::new(0.0, d)
}

fn clamp_probability(p: f64) -> Result<f64, PovmError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else if p > -PROBABILITY_SLACK && p < 1.0 + PROBABILITY_SLACK {
        Ok(p.clamp(0.0, 1.0))
    } else {
        Err(PovmError::Inconsistent(p))
    }
}

/// Probability that a canonical phase measurement lands in `window`.
///
/// The state is normalized first, so any nonzero vector is accepted.
pub fn interval_probability(state: &FockState, window: &PhaseWindow) -> Result<f64, PovmError> {
    let state = state.normalize()?;
    let arcs = window.arcs();
    let amps = state.amplitudes();
    let len = amps.len();

    // Moments depend only on n - m; tabulate d = 0..len once per arc.
    let mut moments = vec![Complex64::default(); len];
    for &(lo, hi) in &arcs {
        for (d, slot) in moments.iter_mut().enumerate() {
            *slot += arc_moment(d as i64, lo, hi);
        }
    }

    let mut total = 0.0;
    for (i, a) in amps.iter().enumerate() {
        total += a.norm_sqr() * moments[0].re;
        for (j, b) in amps.iter().enumerate().take(i) {
            // the (i, j) and (j, i) terms are complex conjugates
            total += 2.0 * (a.conj() * b * moments[i - j]).re;
        }
    }
    clamp_probability(total / TAU)
}

/// Probability of a photon count inside `window`.
pub fn number_probability(state: &FockState, window: &NumberWindow) -> Result<f64, PovmError> {
    let state = state.normalize()?;
    let p = state
        .iter()
        .filter(|(n, _)| window.contains(*n))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    clamp_probability(p)
}

/// Projects onto the number window and renormalizes.
pub fn reduce(state: &FockState, window: &NumberWindow) -> Result<FockState, PovmError> {
    let lo = window.base().max(state.offset());
    let hi = window
        .last()
        .min(state.offset() + state.len().saturating_sub(1));
    let incompatible = PovmError::IncompatibleWindow {
        base: window.base(),
        last: window.last(),
    };
    if state.is_empty() || lo > hi {
        return Err(incompatible);
    }
    let kept = state.amplitudes()[lo - state.offset()..=hi - state.offset()].to_vec();
    FockState::new(lo, kept)?.normalize().map_err(|e| match e {
        StateError::ZeroState => incompatible,
        other => other.into(),
    })
}

/// Probability of a phase in `phase` after a number measurement found the
/// count in `number` and the state was reduced accordingly.
pub fn conditional_probability(
    state: &FockState,
    phase: &PhaseWindow,
    number: &NumberWindow,
) -> Result<f64, PovmError> {
    interval_probability(&reduce(state, number)?, phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_PI, PI};

    fn equal_pair() -> FockState {
        FockState::from_real(&[1.0, 1.0])
            .unwrap()
            .normalize()
            .unwrap()
    }

    fn equal_triple() -> FockState {
        FockState::from_real(&[1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn canonical_and_identity_matrices_validate() {
        assert!(PhaseMatrix::Canonical.validate().passed());
        let mut coeffs = vec![Complex64::default(); 9];
        for i in 0..3 {
            coeffs[i * 3 + i] = Complex64::new(1.0, 0.0);
        }
        let identity = PhaseMatrix::Explicit {
            offset: 0,
            dim: 3,
            coeffs,
        };
        assert!(identity.validate().passed());
    }

    #[test]
    fn bad_diagonal_is_reported() {
        let one = Complex64::new(1.0, 0.0);
        let coeffs = vec![Complex64::new(0.5, 0.0), one, one, one];
        let report = PhaseMatrix::Explicit {
            offset: 4,
            dim: 2,
            coeffs,
        }
        .validate();
        assert!(!report.passed());
        let v = report.unit_diagonal.unwrap();
        assert_eq!((v.row, v.col), (4, 4));
        assert!(report.modulus_bound.is_none());
        assert!(report.hermitian.is_none());
    }

    #[test]
    fn modulus_and_hermiticity_are_reported() {
        let one = Complex64::new(1.0, 0.0);
        let big = PhaseMatrix::Explicit {
            offset: 0,
            dim: 2,
            coeffs: vec![one, Complex64::new(1.5, 0.0), Complex64::new(1.5, 0.0), one],
        };
        assert_eq!(big.validate().modulus_bound.unwrap().col, 1);

        let skew = PhaseMatrix::Explicit {
            offset: 0,
            dim: 2,
            coeffs: vec![one, Complex64::new(0.0, 0.5), Complex64::new(0.0, 0.5), one],
        };
        let report = skew.validate();
        assert!(report.hermitian.is_some());
        assert!(report.modulus_bound.is_none());

        let ragged = PhaseMatrix::Explicit {
            offset: 0,
            dim: 2,
            coeffs: vec![one; 3],
        };
        assert_eq!(ragged.validate().shape, Some(3));
    }

    #[test]
    fn density_examples() {
        let canonical = PhaseMatrix::Canonical;
        for phi in [-3.0, -1.0, 0.0, 0.4, 2.9] {
            let d = phase_density(&FockState::number(5), &canonical, phi).unwrap();
            assert_abs_diff_eq!(d, 1.0 / TAU, epsilon = 1e-15);
        }
        let pair = equal_pair();
        assert_abs_diff_eq!(
            phase_density(&pair, &canonical, 0.0).unwrap(),
            FRAC_1_PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            phase_density(&pair, &canonical, PI).unwrap(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn explicit_density_matches_canonical_for_all_ones() {
        let state = FockState::new(
            1,
            vec![
                Complex64::new(0.3, 0.1),
                Complex64::new(-0.2, 0.7),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap()
        .normalize()
        .unwrap();
        let ones = PhaseMatrix::Explicit {
            offset: 0,
            dim: 5,
            coeffs: vec![Complex64::new(1.0, 0.0); 25],
        };
        for phi in [-2.0, 0.1, 1.7] {
            let a = phase_density(&state, &ones, phi).unwrap();
            let b = phase_density(&state, &PhaseMatrix::Canonical, phi).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn identity_matrix_erases_phase_information() {
        let mut coeffs = vec![Complex64::default(); 4];
        coeffs[0] = Complex64::new(1.0, 0.0);
        coeffs[3] = Complex64::new(1.0, 0.0);
        let identity = PhaseMatrix::Explicit {
            offset: 0,
            dim: 2,
            coeffs,
        };
        let d = phase_density(&equal_pair(), &identity, PI).unwrap();
        assert_abs_diff_eq!(d, 1.0 / TAU, epsilon = 1e-15);
    }

    #[test]
    fn density_rejects_invalid_or_uncovering_matrix() {
        let one = Complex64::new(1.0, 0.0);
        let bad = PhaseMatrix::Explicit {
            offset: 0,
            dim: 2,
            coeffs: vec![Complex64::new(0.5, 0.0), one, one, one],
        };
        assert!(matches!(
            phase_density(&equal_pair(), &bad, 0.0),
            Err(PovmError::InvalidMatrix(_))
        ));
        let small = PhaseMatrix::Explicit {
            offset: 0,
            dim: 1,
            coeffs: vec![one],
        };
        assert!(matches!(
            phase_density(&equal_pair(), &small, 0.0),
            Err(PovmError::SupportOutsideMatrix { .. })
        ));
    }

    #[test]
    fn interval_probability_examples() {
        for center in [-3.0, 0.0, 1.0, 3.1] {
            let w = PhaseWindow::new(center, 1.0).unwrap();
            let p = interval_probability(&FockState::number(7), &w).unwrap();
            assert_abs_diff_eq!(p, 0.159_154_943_091_895_35, epsilon = 1e-15);
        }
        let full = PhaseWindow::new(0.3, TAU).unwrap();
        let mixed = FockState::from_real(&[0.2, -0.4, 0.9, 0.1]).unwrap();
        assert_abs_diff_eq!(
            interval_probability(&mixed, &full).unwrap(),
            1.0,
            epsilon = 1e-15
        );

        let half = PhaseWindow::centered(PI).unwrap();
        let p = interval_probability(&equal_pair(), &half).unwrap();
        assert_abs_diff_eq!(p, (PI + 2.0) / TAU, epsilon = 1e-15);
        assert_abs_diff_eq!(p, 0.818_309_886_183_790_7, epsilon = 1e-15);
    }

    #[test]
    fn empty_window_has_zero_probability() {
        let w = PhaseWindow::new(1.0, 0.0).unwrap();
        assert_eq!(interval_probability(&equal_pair(), &w).unwrap(), 0.0);
    }

    #[test]
    fn wrapped_window_matches_unwrapped_shift() {
        // the same arc seen from the other side of the branch cut
        let state = FockState::from_real(&[0.3, 0.8, -0.5]).unwrap();
        let straddling = PhaseWindow::new(PI - 0.2, 1.5).unwrap();
        let shifted = state.phase_shift(-PI);
        let inside = PhaseWindow::new(-0.2, 1.5).unwrap();
        let a = interval_probability(&state, &straddling).unwrap();
        let b = interval_probability(&shifted, &inside).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-14);
    }

    #[test]
    fn number_probability_examples() {
        let w = NumberWindow::new(0, 1);
        assert_abs_diff_eq!(
            number_probability(&equal_triple(), &w).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(number_probability(&FockState::number(3), &w).unwrap(), 0.0);
        let wide = NumberWindow::new(0, 10);
        assert_abs_diff_eq!(
            number_probability(&equal_triple(), &wide).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&equal_triple(), &NumberWindow::new(0, 1)).unwrap();
        assert_eq!(r.offset(), 0);
        assert_eq!(r.len(), 2);
        for a in r.amplitudes() {
            assert_abs_diff_eq!(a.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        }

        let r = reduce(&FockState::number(2), &NumberWindow::new(2, 0)).unwrap();
        assert_eq!(r, FockState::number(2));

        assert_eq!(
            reduce(&FockState::number(3), &NumberWindow::new(0, 1)),
            Err(PovmError::IncompatibleWindow { base: 0, last: 1 })
        );
        // overlapping range but only zero amplitudes inside
        let gap = FockState::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            reduce(&gap, &NumberWindow::new(1, 1)),
            Err(PovmError::IncompatibleWindow { .. })
        ));
    }

    #[test]
    fn conditional_probability_examples() {
        let pw = PhaseWindow::centered(PI).unwrap();
        let p = conditional_probability(&equal_triple(), &pw, &NumberWindow::new(0, 1)).unwrap();
        assert_abs_diff_eq!(p, (PI + 2.0) / TAU, epsilon = 1e-15);

        let full = PhaseWindow::new(-1.2, TAU).unwrap();
        let p = conditional_probability(&equal_triple(), &full, &NumberWindow::new(1, 4)).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-15);

        let one = PhaseWindow::centered(1.0).unwrap();
        let p =
            conditional_probability(&FockState::number(0), &one, &NumberWindow::new(0, 0)).unwrap();
        assert_abs_diff_eq!(p, 1.0 / TAU, epsilon = 1e-15);

        assert!(matches!(
            conditional_probability(&FockState::number(3), &one, &NumberWindow::new(0, 1)),
            Err(PovmError::IncompatibleWindow { .. })
        ));
    }

    #[test]
    fn clamping_policy() {
        assert_eq!(clamp_probability(1.0 + 5e-13).unwrap(), 1.0);
        assert_eq!(clamp_probability(-5e-13).unwrap(), 0.0);
        assert!(matches!(
            clamp_probability(1.0 + 1e-9),
            Err(PovmError::Inconsistent(_))
        ));
    }
}

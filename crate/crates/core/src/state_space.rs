//! Photon states in the number basis and the two kinds of measurement window.
//!
//! A [`FockState`] stores a dense block of amplitudes `[offset, offset + len)`;
//! everything outside the block is zero. All types here are plain values.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Squared norms at or below this are treated as the zero vector.
pub const ZERO_NORM_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("state has zero norm")]
    ZeroState,
    #[error("number shift by {shift} moves offset {offset} below zero")]
    NegativeIndex { offset: usize, shift: i64 },
    #[error("amplitude arrays differ in length (re: {re}, im: {im})")]
    LengthMismatch { re: usize, im: usize },
    #[error("non-finite amplitude at photon number {0}")]
    NonFinite(usize),
    #[error("phase window width {0} outside [0, 2pi]")]
    WindowWidth(f64),
    #[error("phase window center {0} is not finite")]
    WindowCenter(f64),
}

/// Pure state with finite support in the photon-number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    offset: usize,
    amplitudes: Vec<Complex64>,
}

impl FockState {
    pub fn new(offset: usize, amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(StateError::NonFinite(offset + i));
        }
        Ok(Self { offset, amplitudes })
    }

    /// State from real amplitudes starting at photon number zero.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, StateError> {
        Self::new(
            0,
            amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
        )
    }

    /// The number state `|n>`.
    pub fn number(n: usize) -> Self {
        Self {
            offset: n,
            amplitudes: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Number of explicitly stored amplitudes.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Amplitude `<n|psi>`; zero outside the stored block.
    pub fn amplitude(&self, n: usize) -> Complex64 {
        n.checked_sub(self.offset)
            .and_then(|i| self.amplitudes.get(i).copied())
            .unwrap_or_default()
    }

    /// Photon numbers with an explicitly stored amplitude, paired with it.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, &a)| (self.offset + i, a))
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&self) -> Result<Self, StateError> {
        let norm_sq = self.norm_squared();
        if norm_sq.is_nan() || norm_sq <= ZERO_NORM_GUARD {
            return Err(StateError::ZeroState);
        }
        let scale = norm_sq.sqrt().recip();
        Ok(Self {
            offset: self.offset,
            amplitudes: self.amplitudes.iter().map(|a| a * scale).collect(),
        })
    }

    /// Applies `exp(i theta N)`: the amplitude at `n` picks up `exp(i n theta)`.
    pub fn phase_shift(&self, theta: f64) -> Self {
        Self {
            offset: self.offset,
            amplitudes: self
                .iter()
                .map(|(n, a)| a * Complex64::from_polar(1.0, n as f64 * theta))
                .collect(),
        }
    }

    /// Relabels photon number `n` as `n + shift`.
    pub fn number_shift(&self, shift: i64) -> Result<Self, StateError> {
        let offset = i64::try_from(self.offset)
            .ok()
            .and_then(|o| o.checked_add(shift))
            .filter(|&o| o >= 0)
            .ok_or(StateError::NegativeIndex {
                offset: self.offset,
                shift,
            })?;
        Ok(Self {
            offset: offset as usize,
            amplitudes: self.amplitudes.clone(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FockStateJson {
    offset: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for FockState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FockStateJson {
            offset: self.offset,
            re: self.amplitudes.iter().map(|a| a.re).collect(),
            im: self.amplitudes.iter().map(|a| a.im).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = FockStateJson::deserialize(deserializer)?;
        if raw.re.len() != raw.im.len() {
            return Err(serde::de::Error::custom(StateError::LengthMismatch {
                re: raw.re.len(),
                im: raw.im.len(),
            }));
        }
        let amplitudes = raw
            .re
            .iter()
            .zip(&raw.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        FockState::new(raw.offset, amplitudes).map_err(serde::de::Error::custom)
    }
}

/// Maps an angle onto `[-pi, pi)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let wrapped = (angle + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU
    if wrapped >= PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// The phase interval `[center - width/2, center + width/2)`, taken modulo 2pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWindow {
    center: f64,
    width: f64,
}

impl PhaseWindow {
    pub fn new(center: f64, width: f64) -> Result<Self, StateError> {
        if !center.is_finite() {
            return Err(StateError::WindowCenter(center));
        }
        if !(0.0..=TAU).contains(&width) {
            return Err(StateError::WindowWidth(width));
        }
        Ok(Self {
            center: wrap_angle(center),
            width,
        })
    }

    /// Window centred at zero, the reference position of the bound.
    pub fn centered(width: f64) -> Result<Self, StateError> {
        Self::new(0.0, width)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Same width, centre moved by `theta`.
    pub fn rotated(&self, theta: f64) -> Result<Self, StateError> {
        Self::new(self.center + theta, self.width)
    }

    /// The window as disjoint arcs `[lo, hi)` inside `[-pi, pi)`.
    ///
    /// A window straddling `±pi` comes back as two arcs; a full window is the
    /// single arc `[-pi, pi)`.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        if self.width >= TAU {
            return vec![(-PI, PI)];
        }
        if self.width == 0.0 {
            return Vec::new();
        }
        let lo = self.center - 0.5 * self.width;
        let hi = self.center + 0.5 * self.width;
        if lo < -PI {
            vec![(-PI, hi), (lo + TAU, PI)]
        } else if hi > PI {
            vec![(-PI, hi - TAU), (lo, PI)]
        } else {
            vec![(lo, hi)]
        }
    }
}

/// The photon-number set `{base, base + 1, ..., base + precision}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NumberWindow {
    base: usize,
    precision: usize,
}

impl NumberWindow {
    pub fn new(base: usize, precision: usize) -> Self {
        Self { base, precision }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Largest photon number in the window.
    pub fn last(&self) -> usize {
        self.base + self.precision
    }

    pub fn contains(&self, n: usize) -> bool {
        (self.base..=self.last()).contains(&n)
    }

    pub fn len(&self) -> usize {
        self.precision + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

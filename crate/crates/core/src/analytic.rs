//! Closed-form model of the deletion operator on the two-dimensional
//! subspace spanned by `|c⟩` (normalized uniform superposition of the
//! unmarked items) and `|τ⟩`.
//!
//! Every vector and matrix here is written in the ordered basis
//! `(|c⟩, |τ⟩)`. Nothing in this module touches a full statevector except
//! [`lift_to_full`] and [`project_to_plane`], which translate between the two
//! pictures; the module is therefore an independent check on the engine.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

use crate::deletion::{matched_phase, CaseTag, PhaseMode, PhaseParameters};
use crate::error::{Error, Result};
use crate::statevector::{StateVector, DEFAULT_QUBIT_CAP};

/// Amplitudes on `|c⟩` and `|τ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoDState {
    pub a_c: Complex64,
    pub a_tau: Complex64,
}

impl TwoDState {
    pub fn new(a_c: Complex64, a_tau: Complex64) -> Self {
        Self { a_c, a_tau }
    }

    /// The uniform superposition, `cosβ|c⟩ + sinβ|τ⟩`.
    pub fn initial(params: &PhaseParameters) -> Self {
        Self::new(params.cos_beta.into(), params.sin_beta.into())
    }

    pub fn norm(&self) -> f64 {
        (self.a_c.norm_sqr() + self.a_tau.norm_sqr()).sqrt()
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        (self.a_c - other.a_c).norm().max((self.a_tau - other.a_tau).norm())
    }
}

/// A 2×2 complex matrix, rows then columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl Matrix2 {
    pub fn new(s11: Complex64, s12: Complex64, s21: Complex64, s22: Complex64) -> Self {
        Self { s11, s12, s21, s22 }
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self::new(one, zero, zero, one)
    }

    pub fn diagonal(d1: Complex64, d2: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(d1, zero, zero, d2)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(
            self.s11 * factor,
            self.s12 * factor,
            self.s21 * factor,
            self.s22 * factor,
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.s11.conj(), self.s21.conj(), self.s12.conj(), self.s22.conj())
    }

    pub fn apply(&self, v: &TwoDState) -> TwoDState {
        TwoDState::new(
            self.s11 * v.a_c + self.s12 * v.a_tau,
            self.s21 * v.a_c + self.s22 * v.a_tau,
        )
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| *self * acc)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.s11, self.s12, self.s21, self.s22]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `M·M† - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        (*self * self.adjoint()).max_deviation(&Self::identity())
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.s11 * r.s11 + self.s12 * r.s21,
            self.s11 * r.s12 + self.s12 * r.s22,
            self.s21 * r.s11 + self.s22 * r.s21,
            self.s21 * r.s12 + self.s22 * r.s22,
        )
    }
}

/// `S = -W·I_0·W·I_c` restricted to the `(|c⟩, |τ⟩)` plane.
pub fn s_matrix(size: usize, phi: f64) -> Result<Matrix2> {
    let p = PhaseParameters::with_phase(size, phi)?;
    let e = Complex64::cis(phi);
    let em1 = e - 1.0;
    let (s, c) = (p.sin_beta, p.cos_beta);
    Ok(Matrix2::new(
        -e * (1.0 + em1 * c * c),
        -em1 * s * c,
        -e * em1 * s * c,
        -e + em1 * c * c,
    ))
}

/// `S = U·Λ·U†` in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub u: Matrix2,
    /// `[-e^{i(φ+2β′)}, -e^{i(φ-2β′)}]`, paired with the columns of `u`.
    pub lambda: [Complex64; 2],
    pub beta_prime: f64,
    /// Squared norm of the unnormalized eigenvector columns.
    pub r: f64,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> Matrix2 {
        self.u * Matrix2::diagonal(self.lambda[0], self.lambda[1]) * self.u.adjoint()
    }

    /// `U·Λ^k·U†`.
    pub fn power(&self, k: u32) -> Matrix2 {
        let k = k as i32;
        self.u * Matrix2::diagonal(self.lambda[0].powi(k), self.lambda[1].powi(k)) * self.u.adjoint()
    }
}

/// Eigendecomposition of [`s_matrix`]`(size, phi)`.
///
/// With `g = cos(φ/2)cosβ + cosβ′` the eigenvector columns are
/// `(e^{-iφ/2}g, sinβ)` and `(-sinβ, e^{iφ/2}g)`, each of squared length
/// `R = sin²β + g²`.
pub fn spectral_decompose(size: usize, phi: f64) -> Result<SpectralDecomposition> {
    let p = PhaseParameters::with_phase(size, phi)?;
    let beta_prime = (p.sin_half_phi * p.cos_beta).asin();
    let g = p.cos_half_phi * p.cos_beta + beta_prime.cos();
    let r = p.sin_beta * p.sin_beta + g * g;
    let inv = Complex64::new(1.0 / r.sqrt(), 0.0);
    let u = Matrix2::new(
        Complex64::cis(-phi / 2.0) * g,
        (-p.sin_beta).into(),
        p.sin_beta.into(),
        Complex64::cis(phi / 2.0) * g,
    )
    .scale(inv);
    Ok(SpectralDecomposition {
        u,
        lambda: [
            -Complex64::cis(phi + 2.0 * beta_prime),
            -Complex64::cis(phi - 2.0 * beta_prime),
        ],
        beta_prime,
        r,
    })
}

/// `(sin(kπ/3), cos(kπ/3))` from the six-step cycle, exact to the last bit.
pub fn exact_sixth_turn(k: u32) -> (f64, f64) {
    let half_sqrt3 = 3f64.sqrt() * 0.5;
    match k % 6 {
        0 => (0.0, 1.0),
        1 => (half_sqrt3, 0.5),
        2 => (half_sqrt3, -0.5),
        3 => (0.0, -1.0),
        4 => (-half_sqrt3, -0.5),
        _ => (-half_sqrt3, 0.5),
    }
}

/// `S^k` for the matched phase, via the closed form with `θ = kπ/3`.
pub fn s_power(size: usize, k: u32) -> Result<Matrix2> {
    let p = matched_phase(size)?;
    let n = size as f64;
    let (sin_t, cos_t) = exact_sixth_turn(k);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let front = Complex64::cis(f64::from(k) * p.phi) * sign;
    let diag = sin_t * ((3.0 * n - 4.0) / (3.0 * n)).sqrt();
    let off_re = sin_t * (1.0 / (3.0 * (n - 1.0))).sqrt();
    let off_im = sin_t * ((3.0 * n - 4.0) / (3.0 * n * (n - 1.0))).sqrt();
    Ok(Matrix2::new(
        Complex64::new(cos_t, diag),
        Complex64::new(off_re, off_im),
        Complex64::new(-off_re, off_im),
        Complex64::new(cos_t, -diag),
    )
    .scale(front))
}

/// One row of the θ = kπ/3 periodicity table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigRow {
    pub k: u32,
    pub sin_theta: f64,
    pub cos_theta: f64,
    /// `(-1)^k sinθ`
    pub signed_sin_theta: f64,
    /// `(-1)^k cosθ`
    pub signed_cos_theta: f64,
}

pub fn trig_period_table(k_max: u32) -> Result<Vec<TrigRow>> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    Ok((1..=k_max)
        .map(|k| {
            let (sin_theta, cos_theta) = exact_sixth_turn(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            TrigRow {
                k,
                sin_theta,
                cos_theta,
                // + 0.0 folds -0.0 into 0.0
                signed_sin_theta: sign * sin_theta + 0.0,
                signed_cos_theta: sign * cos_theta + 0.0,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub state: TwoDState,
    pub case: CaseTag,
}

/// Closed-form state after `k` steps from the uniform state.
///
/// Exact mode uses the per-case formulas. For the fixed-π/3 mode only the
/// one-step matrix is known in closed form, so `k` steps are its `k`-th
/// power.
pub fn predict_final(size: usize, k: u32, mode: PhaseMode) -> Result<Prediction> {
    let p = mode.parameters(size)?;
    let initial = TwoDState::initial(&p);
    let case = CaseTag::for_iterations(k);
    if k == 0 {
        return Ok(Prediction { state: initial, case });
    }
    let state = match mode {
        PhaseMode::FixedPiOverThree => approximate_s_matrix(size)?.pow(k).apply(&initial),
        PhaseMode::Exact => {
            let (kf, phi) = (f64::from(k), p.phi);
            let pi = std::f64::consts::PI;
            match case {
                CaseTag::Deleted => TwoDState::new(
                    Complex64::cis((kf - 0.5) * phi - pi / 2.0),
                    Complex64::new(0.0, 0.0),
                ),
                // The relative phase between the components is -φ.
                CaseTag::PhaseShifted => TwoDState::new(
                    Complex64::from_polar(p.cos_beta, pi + (kf - 1.0) * phi),
                    Complex64::from_polar(p.sin_beta, pi + kf * phi),
                ),
                CaseTag::Identity => TwoDState::new(
                    Complex64::from_polar(p.cos_beta, kf * phi),
                    Complex64::from_polar(p.sin_beta, kf * phi),
                ),
            }
        }
    };
    Ok(Prediction { state, case })
}

/// `S` with both phases fixed at π/3, entries written out explicitly.
pub fn approximate_s_matrix(size: usize) -> Result<Matrix2> {
    PhaseParameters::with_phase(size, std::f64::consts::FRAC_PI_3)?;
    let n = size as f64;
    let half_sqrt3 = 3f64.sqrt() / 2.0;
    let root = (n - 1.0).sqrt();
    Ok(Matrix2::new(
        Complex64::new((n - 2.0) / (2.0 * n), -half_sqrt3),
        Complex64::new(root / (2.0 * n), -(3.0 * (n - 1.0)).sqrt() / (2.0 * n)),
        Complex64::new(root / n, 0.0),
        Complex64::new((1.0 - 2.0 * n) / (2.0 * n), -3f64.sqrt() / (2.0 * n)),
    ))
}

/// Maps a plane state into the register: `a_τ` on `|τ⟩`, `a_c/√(N-1)` on
/// every other basis state.
pub fn lift_to_full(two_d: &TwoDState, tau: usize, n: usize) -> Result<StateVector> {
    if n == 0 || n > DEFAULT_QUBIT_CAP {
        return Err(Error::Capacity {
            n,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    let size = 1usize << n;
    if tau >= size {
        return Err(Error::IndexOutOfRange { tau, size });
    }
    let mut amps = vec![two_d.a_c / ((size - 1) as f64).sqrt(); size];
    amps[tau] = two_d.a_tau;
    StateVector::from_amplitudes(amps)
}

/// Orthogonal projection of a register state onto the `(|c⟩, |τ⟩)` plane.
pub fn project_to_plane(state: &StateVector, tau: usize) -> Result<TwoDState> {
    let size = state.len();
    if tau >= size {
        return Err(Error::IndexOutOfRange { tau, size });
    }
    let unmarked: Complex64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != tau)
        .map(|(_, a)| *a)
        .sum();
    Ok(TwoDState::new(
        unmarked / ((size - 1) as f64).sqrt(),
        state.amplitude(tau),
    ))
}

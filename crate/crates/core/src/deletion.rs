//! The deletion operator `S = -W·I_0·W·I_c`, the matched phase that makes a
//! single application remove the marked item, and the k-step driver.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::statevector::{StateVector, DEFAULT_QUBIT_CAP};

/// How the conditional phase angle is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Size-dependent matched phase `φ = 2·arcsin(1/(2cosβ))`; deletes exactly.
    Exact,
    /// The large-N limit `φ₀ = π/3`; leaves a marked amplitude of `N^{-3/2}`.
    FixedPiOverThree,
}

impl PhaseMode {
    pub fn parameters(self, size: usize) -> Result<PhaseParameters> {
        match self {
            PhaseMode::Exact => matched_phase(size),
            PhaseMode::FixedPiOverThree => PhaseParameters::with_phase(size, FRAC_PI_3),
        }
    }
}

impl fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseMode::Exact => "exact",
            PhaseMode::FixedPiOverThree => "fixed-pi-over-three",
        })
    }
}

/// Database size, the angle `β` of the initial state in the `(|c⟩, |τ⟩)`
/// plane, and the phase `φ` with its half-angle functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseParameters {
    pub size: usize,
    pub sin_beta: f64,
    pub cos_beta: f64,
    pub phi: f64,
    pub sin_half_phi: f64,
    pub cos_half_phi: f64,
}

impl PhaseParameters {
    /// β-quantities for `size` with an arbitrary phase angle.
    pub fn with_phase(size: usize, phi: f64) -> Result<Self> {
        check_size(size)?;
        let (sin_beta, cos_beta) = beta(size);
        Ok(Self {
            size,
            sin_beta,
            cos_beta,
            phi,
            sin_half_phi: (phi / 2.0).sin(),
            cos_half_phi: (phi / 2.0).cos(),
        })
    }
}

fn check_size(size: usize) -> Result<()> {
    if size < 2 {
        return Err(Error::Domain {
            size,
            reason: "need at least two items",
        });
    }
    Ok(())
}

fn beta(size: usize) -> (f64, f64) {
    let n = size as f64;
    ((1.0 / n).sqrt(), ((n - 1.0) / n).sqrt())
}

/// The phase for which one application of `S` to the uniform state leaves
/// no amplitude on the marked item.
pub fn matched_phase(size: usize) -> Result<PhaseParameters> {
    check_size(size)?;
    let (sin_beta, cos_beta) = beta(size);
    let n = size as f64;
    let sin_half_phi = 0.5 / cos_beta;
    Ok(PhaseParameters {
        size,
        sin_beta,
        cos_beta,
        phi: 2.0 * sin_half_phi.asin(),
        sin_half_phi,
        cos_half_phi: 0.5 * ((3.0 * n - 4.0) / (n - 1.0)).sqrt(),
    })
}

/// `φ - π/3` for the matched phase, without the cancellation of
/// subtracting two nearly equal angles:
/// `2·arcsin(1/(√(N-1)·(√(3N) + √(3N-4))))`.
pub fn phase_excess(size: usize) -> Result<f64> {
    check_size(size)?;
    let n = size as f64;
    let d = (n - 1.0).sqrt() * ((3.0 * n).sqrt() + (3.0 * n - 4.0).sqrt());
    Ok(2.0 * (1.0 / d).asin())
}

/// Outcome class of `k` iterations, periodic in `k` with period 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "DeletedCase")]
    Deleted,
    #[serde(rename = "PhaseShiftedCase")]
    PhaseShifted,
    #[serde(rename = "IdentityCase")]
    Identity,
}

impl CaseTag {
    /// `k ≡ 1 → Deleted`, `k ≡ 2 → PhaseShifted`, `k ≡ 0 → Identity`
    /// (mod 3). `k = 0` is the identity operator.
    pub fn for_iterations(k: u32) -> Self {
        match k % 3 {
            1 => CaseTag::Deleted,
            2 => CaseTag::PhaseShifted,
            _ => CaseTag::Identity,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Deleted => "DeletedCase",
            CaseTag::PhaseShifted => "PhaseShiftedCase",
            CaseTag::Identity => "IdentityCase",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Global phase carried by the state after `k` steps, as removed by
/// [`run`] when `normalize_global_phase` is set.
///
/// Deleted: `(k - 1/2)φ - π/2`. Identity: `kφ`. PhaseShifted has no single
/// global phase; the phase of the marked component, `π + kφ`, is used.
pub fn predicted_global_phase(k: u32, phi: f64) -> f64 {
    let kf = f64::from(k);
    match CaseTag::for_iterations(k) {
        CaseTag::Deleted => (kf - 0.5) * phi - FRAC_PI_2,
        CaseTag::PhaseShifted => PI + kf * phi,
        CaseTag::Identity => kf * phi,
    }
}

/// The query oracle: the only operation that depends on the marked index.
/// Every application is counted.
#[derive(Debug, Clone)]
pub struct MarkedOracle {
    tau: usize,
    calls: u64,
}

impl MarkedOracle {
    pub fn new(tau: usize) -> Self {
        Self { tau, calls: 0 }
    }

    /// Applies `I_c(φ)` and records one query.
    pub fn apply<'a>(&mut self, state: &'a mut StateVector, phi: f64) -> Result<&'a mut StateVector> {
        let state = state.apply_marked_complement_phase(self.tau, phi)?;
        self.calls += 1;
        Ok(state)
    }

    /// Applies a whole deletion step, whose only `τ`-dependent part is
    /// `I_c(φ)`; one query.
    pub fn apply_in_step<'a>(
        &mut self,
        state: &'a mut StateVector,
        phi: f64,
    ) -> Result<&'a mut StateVector> {
        let state = state.apply_fused_deletion_step(self.tau, phi)?;
        self.calls += 1;
        Ok(state)
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }
}

/// One application of `S`, querying through `oracle`: `I_c`, `W`, `I_0`,
/// `W`, then the overall sign.
///
/// Runs as the engine's fused kernel (three sweeps over the register
/// instead of six); [`deletion_step_unfused`] is the same operator one
/// primitive at a time.
pub fn deletion_step<'a>(
    state: &'a mut StateVector,
    oracle: &mut MarkedOracle,
    phi: f64,
) -> Result<&'a mut StateVector> {
    oracle.apply_in_step(state, phi)
}

/// [`deletion_step`] spelled out one primitive at a time.
pub fn deletion_step_unfused<'a>(
    state: &'a mut StateVector,
    oracle: &mut MarkedOracle,
    phi: f64,
) -> Result<&'a mut StateVector> {
    oracle
        .apply(state, phi)?
        .apply_walsh_hadamard()
        .apply_zero_phase(phi)
        .apply_walsh_hadamard()
        .negate();
    Ok(state)
}

pub fn apply_deletion_step(state: &mut StateVector, tau: usize, phi: f64) -> Result<&mut StateVector> {
    deletion_step(state, &mut MarkedOracle::new(tau), phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionConfig {
    pub n: usize,
    pub tau: usize,
    pub k: u32,
    pub mode: PhaseMode,
    pub normalize_global_phase: bool,
    pub qubit_cap: usize,
}

impl DeletionConfig {
    /// Exact mode, no phase normalization, default cap.
    pub fn new(n: usize, tau: usize, k: u32) -> Self {
        Self {
            n,
            tau,
            k,
            mode: PhaseMode::Exact,
            normalize_global_phase: false,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }

    pub fn with_mode(mut self, mode: PhaseMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn normalized(mut self, normalize: bool) -> Self {
        self.normalize_global_phase = normalize;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.qubit_cap = cap;
        self
    }

    pub fn size(&self) -> usize {
        1usize << self.n
    }

    pub fn validate(&self) -> Result<()> {
        let cap = self.qubit_cap.min(usize::BITS as usize - 2);
        if self.n == 0 || self.n > cap {
            return Err(Error::Capacity { n: self.n, cap });
        }
        if self.tau >= self.size() {
            return Err(Error::IndexOutOfRange {
                tau: self.tau,
                size: self.size(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub case: CaseTag,
    pub residual_marked_magnitude: f64,
    pub final_state: StateVector,
    pub phase: PhaseParameters,
    /// Number of `I_c` applications performed.
    pub oracle_calls: u64,
}

/// Runs `k` deletion steps from the uniform state.
pub fn run(config: &DeletionConfig) -> Result<IterationOutcome> {
    config.validate()?;
    let phase = config.mode.parameters(config.size())?;
    let mut state = StateVector::uniform_with_cap(config.n, config.qubit_cap)?;
    let mut oracle = MarkedOracle::new(config.tau);
    for _ in 0..config.k {
        deletion_step(&mut state, &mut oracle, phase.phi)?;
    }
    if config.normalize_global_phase && config.k > 0 {
        state.apply_global_phase(-predicted_global_phase(config.k, phase.phi));
    }
    Ok(IterationOutcome {
        case: CaseTag::for_iterations(config.k),
        residual_marked_magnitude: state.amplitude(config.tau).norm(),
        final_state: state,
        phase,
        oracle_calls: oracle.calls(),
    })
}

/// Marked-amplitude magnitude left by one fixed-π/3 step: `N^{-3/2}`.
pub fn approximate_residual(size: usize) -> f64 {
    (size as f64).powf(-1.5)
}

/// Queries a classical linear scan spends locating the marked item at
/// `tau_position` before it can be removed.
pub fn classical_deletion_queries(size: usize, tau_position: usize) -> Result<usize> {
    if tau_position >= size {
        return Err(Error::IndexOutOfRange {
            tau: tau_position,
            size,
        });
    }
    let query = |x: usize| x == tau_position;
    let mut calls = 0;
    for x in 0..size {
        calls += 1;
        if query(x) {
            break;
        }
    }
    Ok(calls)
}

/// Expected linear-scan cost over a uniformly placed marked item, `(N+1)/2`.
pub fn classical_average_queries(size: usize) -> f64 {
    (size as f64 + 1.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::statevector::fidelity;

    #[test]
    fn phase_excess_matches_difference() {
        assert!((phase_excess(2).unwrap() - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        for n in 1..=16 {
            let size = 1usize << n;
            let direct = matched_phase(size).unwrap().phi - FRAC_PI_3;
            assert!((phase_excess(size).unwrap() - direct).abs() < 1e-13, "n={n}");
        }
        let mut last = f64::INFINITY;
        for n in 1..=62 {
            let e = phase_excess(1usize << n).unwrap();
            assert!(e > 0.0 && e < last, "n={n}");
            last = e;
        }
        assert!(phase_excess(1).is_err());
    }

    #[test]
    fn matched_phase_two_items() {
        // sin(φ/2) = 1/(2·√(1/2)) = 1/√2
        let p = matched_phase(2).unwrap();
        assert!((p.phi - FRAC_PI_2).abs() <= 1e-12);
        assert!((p.sin_half_phi - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-15);
    }

    #[test]
    fn matched_phase_four_items() {
        // 1/(2cosβ) = 1/(2·√3/2) = 1/√3
        let p = matched_phase(4).unwrap();
        let expected = 2.0 * (1.0 / 3f64.sqrt()).asin();
        assert!((p.phi - expected).abs() <= 1e-15);
        assert!((p.phi - 1.230959).abs() <= 1e-6);
    }

    #[test]
    fn matched_phase_large_limit() {
        let p = matched_phase(1 << 26).unwrap();
        assert!(p.phi > FRAC_PI_3);
        assert!(p.phi - FRAC_PI_3 <= 1e-6);
    }

    #[test]
    fn matched_phase_identities() {
        for size in (1..=30).map(|n| 1usize << n).chain([3, 5, 7, 100]) {
            let p = matched_phase(size).unwrap();
            let n = size as f64;
            assert!((p.sin_beta - (1.0 / n).sqrt()).abs() <= 1e-14);
            assert!((p.cos_beta - ((n - 1.0) / n).sqrt()).abs() <= 1e-14);
            assert!((p.sin_half_phi - 0.5 * (n / (n - 1.0)).sqrt()).abs() <= 1e-12);
            assert!((p.sin_half_phi.powi(2) + p.cos_half_phi.powi(2) - 1.0).abs() <= 1e-12);
            assert!((p.sin_half_phi - (p.phi / 2.0).sin()).abs() <= 1e-12);
            assert!((p.cos_half_phi - (p.phi / 2.0).cos()).abs() <= 1e-12);
            assert!(p.phi > FRAC_PI_3 && p.phi <= FRAC_PI_2 + 1e-15);
        }
    }

    #[test]
    fn matched_phase_domain() {
        assert!(matches!(matched_phase(1), Err(Error::Domain { size: 1, .. })));
        assert!(matched_phase(0).is_err());
    }

    #[test]
    fn single_step_deletes_marked_item_with_phase() {
        let p = matched_phase(4).unwrap();
        let mut s = StateVector::uniform(2).unwrap();
        apply_deletion_step(&mut s, 2, p.phi).unwrap();
        assert!(s.amplitude(2).norm() <= 1e-10);
        let expected = Complex64::from_polar(1.0 / 3f64.sqrt(), (p.phi - PI) / 2.0);
        for i in [0, 1, 3] {
            assert!((s.amplitude(i).norm() - 1.0 / 3f64.sqrt()).abs() <= 1e-10);
            assert!((s.amplitude(i) - expected).norm() <= 1e-10, "amp {i}");
        }
    }

    #[test]
    fn single_step_marked_zero() {
        let p = matched_phase(4).unwrap();
        let mut s = StateVector::uniform(2).unwrap();
        apply_deletion_step(&mut s, 0, p.phi).unwrap();
        assert!(s.amplitude(0).norm() <= 1e-10);
    }

    #[test]
    fn step_matches_dense_operator_product() {
        // -W·I_0·W·I_c built as explicit 4x4 matrices, τ = 0 and τ = 3.
        let size = 4;
        let phi = matched_phase(size).unwrap().phi;
        let e = Complex64::cis(phi);
        let h = |r: usize, c: usize| {
            let sign = if (r & c).count_ones() % 2 == 0 { 0.5 } else { -0.5 };
            Complex64::new(sign, 0.0)
        };
        for tau in [0usize, 3] {
            let mut total = vec![vec![Complex64::new(0.0, 0.0); size]; size];
            for r in 0..size {
                for c in 0..size {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 0..size {
                        // (W I_0 W)[r][m] · I_c[m][c]
                        let mut wiw = Complex64::new(0.0, 0.0);
                        for j in 0..size {
                            let i0 = if j == 0 { e } else { Complex64::new(1.0, 0.0) };
                            wiw += h(r, j) * i0 * h(j, m);
                        }
                        let ic = if m != c {
                            Complex64::new(0.0, 0.0)
                        } else if m == tau {
                            Complex64::new(1.0, 0.0)
                        } else {
                            e
                        };
                        acc += wiw * ic;
                    }
                    total[r][c] = -acc;
                }
            }
            for col in 0..size {
                let mut s = StateVector::basis(2, col).unwrap();
                apply_deletion_step(&mut s, tau, phi).unwrap();
                for (row, entry) in total.iter().enumerate() {
                    assert!((s.amplitude(row) - entry[col]).norm() <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn fused_step_matches_unfused() {
        for n in [1usize, 3, 14, 15, 16] {
            let phi = matched_phase(1 << n).unwrap().phi;
            let tau = (1 << n) / 3;
            let mut a = StateVector::uniform(n).unwrap();
            let mut b = a.clone();
            let (mut oa, mut ob) = (MarkedOracle::new(tau), MarkedOracle::new(tau));
            for _ in 0..4 {
                deletion_step(&mut a, &mut oa, phi).unwrap();
                deletion_step_unfused(&mut b, &mut ob, phi).unwrap();
            }
            assert!(a.max_deviation(&b).unwrap() <= 1e-12, "n={n}");
            assert_eq!(oa.calls(), 4);
            assert_eq!(ob.calls(), 4);
        }
    }

    #[test]
    fn run_one_step_deletes_for_all_sizes() {
        for n in 1..=14 {
            let tau = (1usize << n) - 1;
            let out = run(&DeletionConfig::new(n, tau, 1)).unwrap();
            assert_eq!(out.case, CaseTag::Deleted);
            assert!(out.residual_marked_magnitude <= 1e-10, "n={n}");
            assert_eq!(out.oracle_calls, 1);
        }
    }

    #[test]
    fn run_two_steps_shifts_relative_phase() {
        let out = run(&DeletionConfig::new(3, 5, 2)).unwrap();
        assert_eq!(out.case, CaseTag::PhaseShifted);
        let amps = out.final_state.amplitudes();
        for a in amps {
            assert!((a.norm() - 1.0 / 8f64.sqrt()).abs() <= 1e-10);
        }
        // unmarked minus marked phase is -φ (mod 2π)
        let rel = (amps[0] / amps[5]).arg();
        let diff = (rel + out.phase.phi).rem_euclid(2.0 * PI);
        assert!(diff.min(2.0 * PI - diff) <= 1e-10, "rel={rel}");
    }

    #[test]
    fn run_three_steps_restores_uniform() {
        let out = run(&DeletionConfig::new(3, 6, 3)).unwrap();
        assert_eq!(out.case, CaseTag::Identity);
        let u = StateVector::uniform(3).unwrap();
        assert!(fidelity(&out.final_state, &u).unwrap() >= 1.0 - 1e-10);
        assert_eq!(out.oracle_calls, 3);
    }

    #[test]
    fn run_zero_steps_is_identity() {
        let out = run(&DeletionConfig::new(4, 3, 0).normalized(true)).unwrap();
        assert_eq!(out.case, CaseTag::Identity);
        assert_eq!(out.final_state, StateVector::uniform(4).unwrap());
        assert_eq!(out.oracle_calls, 0);
    }

    #[test]
    fn normalization_removes_case_phase() {
        for k in [1u32, 4, 7] {
            let out = run(&DeletionConfig::new(5, 9, k).normalized(true)).unwrap();
            let a = out.final_state.amplitude(0);
            assert!((a - Complex64::new(1.0 / 31f64.sqrt(), 0.0)).norm() <= 1e-10, "k={k}");
        }
        let out = run(&DeletionConfig::new(5, 9, 6).normalized(true)).unwrap();
        let u = StateVector::uniform(5).unwrap();
        assert!(out.final_state.max_deviation(&u).unwrap() <= 1e-10);
        let out = run(&DeletionConfig::new(5, 9, 5).normalized(true)).unwrap();
        let marked = out.final_state.amplitude(9);
        assert!((marked - Complex64::new(1.0 / 32f64.sqrt(), 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn run_rejects_bad_config() {
        assert_eq!(
            run(&DeletionConfig::new(3, 9, 1)).unwrap_err(),
            Error::IndexOutOfRange { tau: 9, size: 8 }
        );
        assert!(matches!(
            run(&DeletionConfig::new(0, 0, 1)),
            Err(Error::Capacity { .. })
        ));
        assert!(run(&DeletionConfig::new(6, 0, 1).with_cap(5)).is_err());
    }

    #[test]
    fn approximate_residual_values() {
        assert_eq!(approximate_residual(4), 0.125);
        assert_eq!(approximate_residual(1 << 20), 2f64.powi(-30));
    }

    #[test]
    fn fixed_mode_single_step_residual() {
        let cfg = DeletionConfig::new(4, 11, 1).with_mode(PhaseMode::FixedPiOverThree);
        let out = run(&cfg).unwrap();
        assert!((out.residual_marked_magnitude - 1.0 / 64.0).abs() <= 1e-12);
    }

    #[test]
    fn classical_queries() {
        assert_eq!(classical_deletion_queries(8, 0).unwrap(), 1);
        assert_eq!(classical_deletion_queries(8, 7).unwrap(), 8);
        assert!(classical_deletion_queries(8, 8).is_err());
        let total: usize = (0..8).map(|t| classical_deletion_queries(8, t).unwrap()).sum();
        assert_eq!(total as f64 / 8.0, 4.5);
        assert_eq!(classical_average_queries(8), 4.5);
    }

    #[test]
    fn case_pattern() {
        let tags: Vec<_> = (1..=6).map(CaseTag::for_iterations).collect();
        use CaseTag::*;
        assert_eq!(tags, [Deleted, PhaseShifted, Identity, Deleted, PhaseShifted, Identity]);
        assert_eq!(CaseTag::for_iterations(0), Identity);
    }
}

//! The cross-module invariant suite behind `qdelete verify`.
//!
//! Every invariant keeps its largest observed deviation and the
//! configuration that produced it, so a failure can be replayed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_6;

use crate::analytic::{
    approximate_s_matrix, lift_to_full, predict_final, project_to_plane, s_matrix, s_power,
    spectral_decompose, Matrix2, TwoDState,
};
use crate::deletion::{
    apply_deletion_step, approximate_residual, matched_phase, run, CaseTag, DeletionConfig,
    PhaseMode,
};
use crate::error::{Error, Result};
use crate::statevector::{fidelity, StateVector};

/// Names accepted by `--inject-fault`, in report order.
pub const INVARIANTS: &[&str] = &[
    "norm_preservation",
    "hadamard_involution",
    "phase_commutation",
    "phase_inverse",
    "single_query_deletion",
    "span_periodicity",
    "complement_phase",
    "operator_period_six",
    "case_pattern",
    "query_count",
    "mode_consistency",
    "residual_law",
    "oracle_equivalence",
    "closed_form_power",
    "operator_period_three",
    "unitarity",
    "eigenvalues",
    "beta_prime",
    "spectral_reconstruction",
    "lift_round_trip",
];

const ORACLE_N_MAX: usize = 12;
const ORACLE_K_MAX: u32 = 12;
const POWER_K_MAX: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub trials: usize,
    /// Test-only: forces the named invariant to fail.
    pub inject_fault: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n_max: 10,
            trials: 3,
            inject_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub name: String,
    pub checks: u64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Configuration of the largest deviation.
    pub worst_case: Option<String>,
}

struct Check {
    name: &'static str,
    tolerance: f64,
    checks: u64,
    max_deviation: f64,
    worst_case: Option<String>,
    fault: bool,
}

impl Check {
    fn new(name: &'static str, tolerance: f64, fault: Option<&str>) -> Self {
        debug_assert!(INVARIANTS.contains(&name));
        Self {
            name,
            tolerance,
            checks: 0,
            max_deviation: 0.0,
            worst_case: None,
            fault: fault == Some(name),
        }
    }

    fn record(&mut self, deviation: f64, case: impl FnOnce() -> String) {
        let mut d = if deviation.is_nan() { f64::INFINITY } else { deviation };
        if self.fault {
            d += 1.0 + self.tolerance;
        }
        self.checks += 1;
        if d > self.max_deviation || self.worst_case.is_none() {
            self.max_deviation = self.max_deviation.max(d);
            self.worst_case = Some(case());
        }
    }

    fn finish(self) -> InvariantResult {
        InvariantResult {
            name: self.name.to_string(),
            checks: self.checks,
            max_deviation: self.max_deviation,
            tolerance: self.tolerance,
            passed: self.max_deviation <= self.tolerance,
            worst_case: self.worst_case,
        }
    }
}

struct Suite {
    norm: Check,
    involution: Check,
    commutation: Check,
    inverse: Check,
    deletion: Check,
    span_period: Check,
    complement: Check,
    period_six: Check,
    case_pattern: Check,
    query_count: Check,
    mode_consistency: Check,
    residual_law: Check,
    oracle: Check,
    power: Check,
    period_three: Check,
    unitarity: Check,
    eigenvalues: Check,
    beta_prime: Check,
    reconstruction: Check,
    round_trip: Check,
}

impl Suite {
    fn new(fault: Option<&str>) -> Self {
        Self {
            norm: Check::new("norm_preservation", 1e-10, fault),
            involution: Check::new("hadamard_involution", 1e-12, fault),
            commutation: Check::new("phase_commutation", 1e-12, fault),
            inverse: Check::new("phase_inverse", 1e-12, fault),
            deletion: Check::new("single_query_deletion", 1e-10, fault),
            span_period: Check::new("span_periodicity", 1e-9, fault),
            complement: Check::new("complement_phase", 1e-9, fault),
            period_six: Check::new("operator_period_six", 1e-9, fault),
            case_pattern: Check::new("case_pattern", 0.0, fault),
            query_count: Check::new("query_count", 0.0, fault),
            // N·(1 - F), bounded by 10
            mode_consistency: Check::new("mode_consistency", 10.0, fault),
            residual_law: Check::new("residual_law", 1e-12, fault),
            oracle: Check::new("oracle_equivalence", 1e-9, fault),
            power: Check::new("closed_form_power", 1e-10, fault),
            period_three: Check::new("operator_period_three", 1e-10, fault),
            unitarity: Check::new("unitarity", 1e-12, fault),
            eigenvalues: Check::new("eigenvalues", 1e-12, fault),
            beta_prime: Check::new("beta_prime", 1e-12, fault),
            reconstruction: Check::new("spectral_reconstruction", 1e-12, fault),
            round_trip: Check::new("lift_round_trip", 1e-12, fault),
        }
    }

    fn finish(self) -> Vec<InvariantResult> {
        [
            self.norm,
            self.involution,
            self.commutation,
            self.inverse,
            self.deletion,
            self.span_period,
            self.complement,
            self.period_six,
            self.case_pattern,
            self.query_count,
            self.mode_consistency,
            self.residual_law,
            self.oracle,
            self.power,
            self.period_three,
            self.unitarity,
            self.eigenvalues,
            self.beta_prime,
            self.reconstruction,
            self.round_trip,
        ]
        .into_iter()
        .map(Check::finish)
        .collect()
    }
}

/// Runs every invariant for `n = 1..=n_max` with `trials` random draws each.
pub fn run_suite(opts: &VerifyOptions, seed: u64, cap: usize) -> Result<Vec<InvariantResult>> {
    if opts.n_max == 0 || opts.n_max > cap {
        return Err(Error::Capacity {
            n: opts.n_max,
            cap,
        });
    }
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let fault = opts.inject_fault.as_deref();
    if let Some(name) = fault {
        if !INVARIANTS.contains(&name) {
            return Err(Error::InvalidArgument(format!("unknown invariant {name:?}")));
        }
    }
    let mut suite = Suite::new(fault);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=opts.n_max {
        for trial in 0..opts.trials {
            engine_checks(&mut suite, &mut rng, n, trial, seed)?;
        }
        if n <= ORACLE_N_MAX {
            oracle_checks(&mut suite, &mut rng, n, seed, cap)?;
        }
        analytic_checks(&mut suite, &mut rng, n, seed)?;
    }
    Ok(suite.finish())
}

fn random_plane_state(rng: &mut impl Rng) -> TwoDState {
    let mut v = [0.0f64; 4];
    for x in &mut v {
        *x = rng.gen_range(-1.0..1.0);
    }
    let s = TwoDState::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
    let norm = s.norm().max(f64::MIN_POSITIVE);
    TwoDState::new(s.a_c / norm, s.a_tau / norm)
}

fn steps(state: &mut StateVector, tau: usize, phi: f64, k: u32) -> Result<()> {
    for _ in 0..k {
        apply_deletion_step(state, tau, phi)?;
    }
    Ok(())
}

fn scaled(state: &StateVector, factor: Complex64) -> StateVector {
    let mut s = state.clone();
    s.apply_global_phase(factor.arg());
    s
}

fn engine_checks(
    suite: &mut Suite,
    rng: &mut ChaCha8Rng,
    n: usize,
    trial: usize,
    seed: u64,
) -> Result<()> {
    let size = 1usize << n;
    let phi = matched_phase(size)?.phi;
    let tau = rng.gen_range(0..size);
    let psi = StateVector::random(n, rng)?;
    let at = |what: &str| format!("n={n} tau={tau} trial={trial} seed={seed} {what}");

    let ops: [(&str, fn(&mut StateVector, usize, f64)); 4] = [
        ("op=walsh_hadamard", |s, _, _| {
            s.apply_walsh_hadamard();
        }),
        ("op=marked_complement_phase", |s, t, p| {
            s.apply_marked_complement_phase(t, p).expect("tau in range");
        }),
        ("op=zero_phase", |s, _, p| {
            s.apply_zero_phase(p);
        }),
        ("op=deletion_step", |s, t, p| {
            apply_deletion_step(s, t, p).expect("tau in range");
        }),
    ];
    for (label, op) in ops {
        let mut s = psi.clone();
        op(&mut s, tau, phi);
        suite.norm.record((s.norm() - psi.norm()).abs(), || at(label));
    }

    let mut s = psi.clone();
    s.apply_walsh_hadamard().apply_walsh_hadamard();
    suite.involution.record(s.max_deviation(&psi)?, || at(""));

    let tau_nz = tau.max(1);
    let mut a = psi.clone();
    a.apply_marked_complement_phase(tau_nz, phi)?.apply_zero_phase(phi);
    let mut b = psi.clone();
    b.apply_zero_phase(phi).apply_marked_complement_phase(tau_nz, phi)?;
    suite
        .commutation
        .record(a.max_deviation(&b)?, || format!("n={n} tau={tau_nz} trial={trial} seed={seed}"));

    let mut s = psi.clone();
    s.apply_marked_complement_phase(tau, phi)?
        .apply_marked_complement_phase(tau, -phi)?;
    suite.inverse.record(s.max_deviation(&psi)?, || at(""));

    let outcome = run(&DeletionConfig::new(n, tau, 1))?;
    let target = Complex64::from_polar(1.0 / ((size - 1) as f64).sqrt(), (phi - std::f64::consts::PI) / 2.0);
    let worst = outcome
        .final_state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != tau)
        .map(|(_, a)| (a.re - target.re).abs().max((a.im - target.im).abs()))
        .fold(outcome.residual_marked_magnitude, f64::max);
    suite.deletion.record(worst, || at("k=1 mode=exact"));

    let plane = random_plane_state(rng);
    let start = lift_to_full(&plane, tau, n)?;
    let mut s = start.clone();
    steps(&mut s, tau, phi, 3)?;
    let expected = scaled(&start, Complex64::cis(3.0 * phi));
    suite.span_period.record(s.max_deviation(&expected)?, || at("k=3"));

    if n >= 2 {
        let proj = project_to_plane(&psi, tau)?;
        let along = lift_to_full(&proj, tau, n)?;
        let rest: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .zip(along.amplitudes())
            .map(|(p, q)| p - q)
            .collect();
        let mut perp = StateVector::from_amplitudes(rest)?;
        perp.normalize();
        let mut s = perp.clone();
        apply_deletion_step(&mut s, tau, phi)?;
        let expected = scaled(&perp, -Complex64::cis(phi));
        suite.complement.record(s.max_deviation(&expected)?, || at("k=1"));
    }

    let mut s = psi.clone();
    steps(&mut s, tau, phi, 6)?;
    let expected = scaled(&psi, Complex64::cis(6.0 * phi));
    suite.period_six.record(s.max_deviation(&expected)?, || at("k=6"));

    if n >= 10 {
        let exact = run(&DeletionConfig::new(n, tau, 1))?;
        let fixed = run(&DeletionConfig::new(n, tau, 1).with_mode(PhaseMode::FixedPiOverThree))?;
        let f = fidelity(&exact.final_state, &fixed.final_state)?;
        suite
            .mode_consistency
            .record((1.0 - f) * size as f64, || at("k=1"));
    }

    let fixed = run(&DeletionConfig::new(n, tau, 1).with_mode(PhaseMode::FixedPiOverThree))?;
    suite.residual_law.record(
        (fixed.residual_marked_magnitude - approximate_residual(size)).abs(),
        || at("k=1 mode=fixed-pi-over-three"),
    );
    Ok(())
}

fn oracle_checks(
    suite: &mut Suite,
    rng: &mut ChaCha8Rng,
    n: usize,
    seed: u64,
    cap: usize,
) -> Result<()> {
    let size = 1usize << n;
    for mode in [PhaseMode::Exact, PhaseMode::FixedPiOverThree] {
        for k in 0..=ORACLE_K_MAX {
            let tau = rng.gen_range(0..size);
            let at = || format!("n={n} tau={tau} k={k} mode={mode} normalize=false seed={seed}");
            let config = DeletionConfig::new(n, tau, k).with_mode(mode).with_cap(cap);
            let outcome = run(&config)?;
            let predicted = predict_final(size, k, mode)?;
            let lifted = lift_to_full(&predicted.state, tau, n)?;
            suite
                .oracle
                .record(outcome.final_state.max_deviation(&lifted)?, at);

            let expected_case = [CaseTag::Identity, CaseTag::Deleted, CaseTag::PhaseShifted]
                [(k % 3) as usize];
            let mismatch = outcome.case != expected_case || predicted.case != expected_case;
            suite
                .case_pattern
                .record(if mismatch { 1.0 } else { 0.0 }, at);
            suite
                .query_count
                .record((outcome.oracle_calls as f64 - f64::from(k)).abs(), at);
        }
    }
    Ok(())
}

fn eigenvalue_deviation(m: &Matrix2, lambda: [Complex64; 2]) -> f64 {
    let [a, b, c, d] = m.entries();
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let roots = [(tr + disc) / 2.0, (tr - disc) / 2.0];
    let straight = (roots[0] - lambda[0]).norm().max((roots[1] - lambda[1]).norm());
    let crossed = (roots[0] - lambda[1]).norm().max((roots[1] - lambda[0]).norm());
    straight.min(crossed)
}

fn analytic_checks(suite: &mut Suite, rng: &mut ChaCha8Rng, n: usize, seed: u64) -> Result<()> {
    let size = 1usize << n;
    let p = matched_phase(size)?;
    let s = s_matrix(size, p.phi)?;
    let at = |what: String| format!("N={size} {what}");

    let mut repeated = Matrix2::identity();
    for k in 0..=POWER_K_MAX {
        let closed = s_power(size, k)?;
        suite
            .power
            .record(closed.max_deviation(&repeated), || at(format!("k={k}")));
        suite
            .unitarity
            .record(closed.unitarity_deviation(), || at(format!("s_power k={k}")));
        if k + 3 <= POWER_K_MAX {
            let later = s_power(size, k + 3)?;
            let shifted = closed.scale(Complex64::cis(3.0 * p.phi));
            suite
                .period_three
                .record(later.max_deviation(&shifted), || at(format!("k={k}")));
        }
        repeated = repeated * s;
    }

    let d = spectral_decompose(size, p.phi)?;
    suite
        .unitarity
        .record(s.unitarity_deviation(), || at("s_matrix".into()));
    suite
        .unitarity
        .record(d.u.unitarity_deviation(), || at("eigenvectors".into()));
    suite.unitarity.record(
        approximate_s_matrix(size)?.unitarity_deviation(),
        || at("approximate_s_matrix".into()),
    );
    suite
        .eigenvalues
        .record(eigenvalue_deviation(&s, d.lambda), || at(String::new()));
    suite
        .beta_prime
        .record((d.beta_prime - FRAC_PI_6).abs(), || at(String::new()));
    suite
        .reconstruction
        .record(d.reconstruct().max_deviation(&s), || at(String::new()));

    let tau = rng.gen_range(0..size);
    let plane = random_plane_state(rng);
    let back = project_to_plane(&lift_to_full(&plane, tau, n)?, tau)?;
    suite.round_trip.record(back.max_deviation(&plane), || {
        format!("n={n} tau={tau} seed={seed}")
    });
    Ok(())
}

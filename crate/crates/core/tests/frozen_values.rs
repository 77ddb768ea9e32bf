//! Reference values from a dense 40-digit simulation (mpmath, explicit
//! N×N Hadamard sums), frozen here. Nothing in this file is derived from
//! the crate's own formulas.

#![allow(clippy::excessive_precision, clippy::approx_constant)]

use num_complex::Complex64;
use qdelete::{matched_phase, run, DeletionConfig, PhaseMode};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn matched_phase_values() {
    for (size, phi) in [
        (2, 1.5707963267948966),
        (4, 1.2309594173407747),
        (8, 1.1278852827212577),
        (16, 1.0852782044993055),
        (1024, 1.0477618290742372),
    ] {
        let got = matched_phase(size).unwrap().phi;
        assert!((got - phi).abs() < 1e-15, "N={size}: {got} vs {phi}");
    }
}

/// (n, tau, k, marked amplitude, amplitude at tau + 1)
const EXACT: &[(usize, usize, u32, (f64, f64), (f64, f64))] = &[
    (3, 3, 1, (0.0, 0.0), (0.20203050891044215, -0.31943828249996996)),
    (3, 3, 2, (0.22367663486513238, -0.27380424214283139), (-0.15152288168283161, -0.31943828249996996)),
    (3, 3, 3, (-0.3432457115672308, -0.084748932091828764), (-0.3432457115672308, -0.084748932091828764)),
    (2, 0, 2, (0.38888888888888889, -0.31426968052735446), (-0.16666666666666667, -0.47140452079103168)),
    (4, 9, 4, (0.0, 0.0), (-0.15766913580246914, 0.20446787102615709)),
    (1, 1, 5, (0.0, -0.70710678118654752), (-0.70710678118654752, 0.0)),
];

#[test]
fn exact_mode_amplitudes() {
    for &(n, tau, k, marked, other) in EXACT {
        let out = run(&DeletionConfig::new(n, tau, k)).unwrap();
        let state = &out.final_state;
        let size = 1usize << n;
        let m = state.amplitude(tau);
        let o = state.amplitude((tau + 1) % size);
        assert!((m - c(marked.0, marked.1)).norm() < 1e-14, "n={n} tau={tau} k={k}: marked {m}");
        assert!((o - c(other.0, other.1)).norm() < 1e-14, "n={n} tau={tau} k={k}: other {o}");
        assert_eq!(out.oracle_calls, u64::from(k));
    }
}

#[test]
fn fixed_mode_amplitudes() {
    for (n, tau, marked, other) in [
        (4, 5, (-0.0078125, -0.013531646934131854), (0.1171875, -0.23003799788024152)),
        (6, 0, (-0.0009765625, -0.0016914558667664817), (0.0615234375, -0.10994463133982131)),
    ] {
        let config = DeletionConfig::new(n, tau, 1).with_mode(PhaseMode::FixedPiOverThree);
        let state = run(&config).unwrap().final_state;
        let size = 1usize << n;
        assert!((state.amplitude(tau) - c(marked.0, marked.1)).norm() < 1e-15);
        assert!((state.amplitude((tau + 1) % size) - c(other.0, other.1)).norm() < 1e-15);
    }
}

//! Statevector simulation of the single-query quantum deletion algorithm.
//!
//! A database of `N = 2^n` items is held as the uniform superposition over
//! `n` qubits. One item `τ` is marked by a query oracle. The deletion
//! operator
//!
//! ```text
//! S = -W · I_0(φ) · W · I_c(φ)
//! ```
//!
//! with the matched phase `φ = 2·arcsin(1/(2cosβ))`, `sinβ = 1/√N`, removes
//! `|τ⟩` from the superposition with a single oracle call. Repeating `S`
//! cycles with period three through deleted, phase-shifted and restored
//! states.
//!
//! The crate is split into:
//!
//! - [`statevector`]: dense amplitudes and the primitives `W`, `I_c`, `I_0`.
//! - [`deletion`]: the matched phase, the operator `S` and the k-step driver.
//! - [`analytic`]: the closed-form 2×2 model used as an independent oracle.
//! - [`harness`]: report types and the commands behind the `qdelete` binary.
//!
//! ```
//! use qdelete::{run, CaseTag, DeletionConfig};
//!
//! let outcome = run(&DeletionConfig::new(10, 37, 1)).unwrap();
//! assert_eq!(outcome.case, CaseTag::Deleted);
//! assert!(outcome.residual_marked_magnitude < 1e-10);
//! assert_eq!(outcome.oracle_calls, 1);
//! ```

pub mod analytic;
pub mod deletion;
pub mod error;
pub mod harness;
pub mod statevector;

pub use analytic::{
    approximate_s_matrix, lift_to_full, predict_final, project_to_plane, s_matrix, s_power,
    spectral_decompose, trig_period_table, Matrix2, Prediction, SpectralDecomposition, TrigRow,
    TwoDState,
};
pub use deletion::{
    apply_deletion_step, approximate_residual, classical_average_queries,
    classical_deletion_queries, deletion_step, deletion_step_unfused, matched_phase, phase_excess,
    predicted_global_phase, run, CaseTag, DeletionConfig,
    IterationOutcome, MarkedOracle, PhaseMode, PhaseParameters,
};
pub use error::{Error, Result};
pub use statevector::{fidelity, StateVector, DEFAULT_QUBIT_CAP};

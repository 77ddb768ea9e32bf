//! The commands behind the `qdelete` binary.
//!
//! Each `cmd_*` function returns the rendered output together with the exit
//! status instead of printing, so the same code paths serve the binary,
//! the tests and the examples. [`execute`] adds argument parsing on top.

mod cli;
pub mod report;
pub mod verify;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use crate::analytic::{predict_final, project_to_plane, trig_period_table};
use crate::deletion::{
    classical_average_queries, deletion_step, matched_phase, phase_excess, run, DeletionConfig,
    MarkedOracle, PhaseMode,
};
use crate::error::{Error, Result};
use crate::statevector::{StateVector, DEFAULT_QUBIT_CAP};

pub use cli::{execute, main_entry};
pub use report::{
    AmplitudeRow, BenchReport, BenchRow, ComplexValue, Report, RunConfigEcho, RunReport,
    SweepReport, SweepRow, TableReport, VerifyReport,
};
pub use verify::{InvariantResult, VerifyOptions, INVARIANTS};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 7;
/// Amplitude tables are printed up to this many qubits unless forced.
pub const AMPLITUDE_TABLE_MAX_QUBITS: usize = 12;
/// `run` exits with [`ExitStatus::Verification`] below `1 - FIDELITY_SLACK`.
pub const FIDELITY_SLACK: f64 = 1e-6;
/// Largest accepted `--cap`; keeps `2^n` inside a `usize`.
pub const MAX_CAP: usize = usize::BITS as usize - 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalOptions {
    pub format: OutputFormat,
    pub seed: u64,
    pub cap: usize,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        Self {
            format: OutputFormat::Human,
            seed: DEFAULT_SEED,
            cap: DEFAULT_QUBIT_CAP,
        }
    }
}

impl GlobalOptions {
    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub n: usize,
    pub tau: usize,
    pub k: u32,
    pub mode: PhaseMode,
    pub normalize: bool,
    pub dump_amps: bool,
}

impl RunOptions {
    pub fn new(n: usize, tau: usize, k: u32) -> Self {
        Self {
            n,
            tau,
            k,
            mode: PhaseMode::Exact,
            normalize: false,
            dump_amps: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub n_min: usize,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchOptions {
    pub ns: Vec<usize>,
    pub repetitions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Usage,
    Verification,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Usage => 1,
            ExitStatus::Verification => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    pub status: ExitStatus,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            status: ExitStatus::Success,
        }
    }

    pub(crate) fn usage(err: &Error) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            status: ExitStatus::Usage,
        }
    }
}

pub(crate) fn check_cap(cap: usize) -> Result<()> {
    if cap == 0 || cap > MAX_CAP {
        return Err(Error::InvalidArgument(format!(
            "cap must be in [1, {MAX_CAP}]: got {cap}"
        )));
    }
    Ok(())
}

/// Runs the deletion and scores it against the closed-form prediction.
pub fn run_report(global: &GlobalOptions, opts: &RunOptions) -> Result<RunReport> {
    check_cap(global.cap)?;
    let config = DeletionConfig::new(opts.n, opts.tau, opts.k)
        .with_mode(opts.mode)
        .normalized(opts.normalize)
        .with_cap(global.cap);
    config.validate()?;
    let start = Instant::now();
    let outcome = run(&config)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    // The prediction lies in the (|c⟩, |τ⟩) plane, so its overlap with the
    // simulated state only needs the state's projection onto that plane.
    let predicted = predict_final(config.size(), opts.k, opts.mode)?.state;
    let plane = project_to_plane(&outcome.final_state, opts.tau)?;
    let overlap = predicted.a_c.conj() * plane.a_c + predicted.a_tau.conj() * plane.a_tau;
    let fidelity = overlap.norm().min(1.0);

    let amplitudes = (opts.dump_amps || opts.n <= AMPLITUDE_TABLE_MAX_QUBITS).then(|| {
        outcome
            .final_state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(index, a)| AmplitudeRow {
                index,
                amplitude: (*a).into(),
                probability: a.norm_sqr(),
            })
            .collect()
    });

    Ok(RunReport {
        config: RunConfigEcho {
            n: opts.n,
            tau: opts.tau,
            k: opts.k,
            mode: opts.mode,
            normalize_global_phase: opts.normalize,
            cap: global.cap,
        },
        case: outcome.case,
        residual: outcome.residual_marked_magnitude,
        fidelity,
        elapsed_ms,
        seed: global.seed,
        version: VERSION.to_string(),
        oracle_calls: outcome.oracle_calls,
        amplitudes,
    })
}

pub fn cmd_run(global: &GlobalOptions, opts: &RunOptions) -> CommandOutput {
    match run_report(global, opts) {
        Ok(report) => {
            let mut out = CommandOutput::ok(report.render(global.format));
            if report.fidelity < 1.0 - FIDELITY_SLACK {
                out.status = ExitStatus::Verification;
                out.stderr = format!(
                    "error: fidelity {} to the closed-form prediction is below 1 - {FIDELITY_SLACK}\n",
                    report.fidelity
                );
            }
            out
        }
        Err(e) => CommandOutput::usage(&e),
    }
}

pub fn sweep_report(global: &GlobalOptions, opts: &SweepOptions) -> Result<SweepReport> {
    check_cap(global.cap)?;
    if opts.n_min < 1 || opts.n_min > opts.n_max || opts.n_max > global.cap {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n_min <= n_max <= cap ({}): got n_min={} n_max={}",
            global.cap, opts.n_min, opts.n_max
        )));
    }
    let rows = (opts.n_min..=opts.n_max)
        .map(|n| {
            let size = 1usize << n;
            Ok(SweepRow {
                n,
                size,
                phi: matched_phase(size)?.phi,
                phi_minus_pi_over_3: phase_excess(size)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        seed: global.seed,
        version: VERSION.to_string(),
        rows,
    })
}

pub fn cmd_sweep_phi(global: &GlobalOptions, opts: &SweepOptions) -> CommandOutput {
    match sweep_report(global, opts) {
        Ok(r) => CommandOutput::ok(r.render(global.format)),
        Err(e) => CommandOutput::usage(&e),
    }
}

pub fn table_report(k_max: u32) -> Result<TableReport> {
    Ok(TableReport {
        version: VERSION.to_string(),
        rows: trig_period_table(k_max)?,
    })
}

pub fn cmd_table(global: &GlobalOptions, k_max: u32) -> CommandOutput {
    match table_report(k_max) {
        Ok(r) => CommandOutput::ok(r.render(global.format)),
        Err(e) => CommandOutput::usage(&e),
    }
}

pub fn verify_report(global: &GlobalOptions, opts: &VerifyOptions) -> Result<VerifyReport> {
    check_cap(global.cap)?;
    let invariants = verify::run_suite(opts, global.seed, global.cap)?;
    Ok(VerifyReport {
        n_max: opts.n_max,
        trials: opts.trials,
        seed: global.seed,
        version: VERSION.to_string(),
        passed: invariants.iter().all(|r| r.passed),
        invariants,
    })
}

pub fn cmd_verify(global: &GlobalOptions, opts: &VerifyOptions) -> CommandOutput {
    let report = match verify_report(global, opts) {
        Ok(r) => r,
        Err(e) => return CommandOutput::usage(&e),
    };
    let mut out = CommandOutput::ok(report.render(global.format));
    if !report.passed {
        out.status = ExitStatus::Verification;
        for r in report.failures() {
            out.stderr.push_str(&format!(
                "error: invariant {} failed: max deviation {:e} > {:e} at {}\n",
                r.name,
                r.max_deviation,
                r.tolerance,
                r.worst_case.as_deref().unwrap_or("-")
            ));
        }
    }
    out
}

/// Wall times in seconds of single deletion steps, one row per entry of
/// `ns` (qubit count, marked index).
///
/// Every register is prepared and warmed up by one untimed step first, then
/// the sizes are timed round-robin, `repetitions` rounds, so a slow spell
/// on a shared machine lands on all sizes alike.
pub fn time_deletion_steps(
    ns: &[(usize, usize)],
    repetitions: usize,
    cap: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut registers = Vec::with_capacity(ns.len());
    for &(n, tau) in ns {
        let phi = matched_phase(1usize << n)?.phi;
        let mut state = StateVector::uniform_with_cap(n, cap)?;
        let mut oracle = MarkedOracle::new(tau);
        deletion_step(&mut state, &mut oracle, phi)?;
        registers.push((state, oracle, phi));
    }
    let mut times = vec![Vec::with_capacity(repetitions); ns.len()];
    for _ in 0..repetitions {
        for ((state, oracle, phi), row) in registers.iter_mut().zip(&mut times) {
            let start = Instant::now();
            deletion_step(state, oracle, *phi)?;
            row.push(start.elapsed().as_secs_f64());
        }
    }
    Ok(times)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn bench_report(global: &GlobalOptions, opts: &BenchOptions) -> Result<BenchReport> {
    check_cap(global.cap)?;
    if opts.repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
    }
    if opts.ns.is_empty() {
        return Err(Error::InvalidArgument("no qubit counts given".into()));
    }
    if let Some(&n) = opts.ns.iter().find(|&&n| n == 0 || n > global.cap) {
        return Err(Error::Capacity { n, cap: global.cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
    let targets: Vec<(usize, usize)> = opts
        .ns
        .iter()
        .map(|&n| (n, rng.gen_range(0..1usize << n)))
        .collect();
    let timings = time_deletion_steps(&targets, opts.repetitions, global.cap)?;
    let mut rows = Vec::with_capacity(opts.ns.len());
    for (&n, mut times) in opts.ns.iter().zip(timings) {
        let size = 1usize << n;
        times.sort_by(f64::total_cmp);
        let min = times[0];
        let mid = times.len() / 2;
        let median = if times.len() % 2 == 1 {
            times[mid]
        } else {
            (times[mid - 1] + times[mid]) / 2.0
        };
        rows.push(BenchRow {
            n,
            size,
            step_ms_min: min * 1e3,
            step_ms_median: median * 1e3,
            amps_per_sec: size as f64 / min,
            quantum_queries: 1,
            classical_avg_queries: classical_average_queries(size),
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.size as f64, r.step_ms_min))
        .collect();
    Ok(BenchReport {
        seed: global.seed,
        version: VERSION.to_string(),
        repetitions: opts.repetitions,
        loglog_slope: loglog_slope(&points),
        rows,
    })
}

pub fn cmd_bench(global: &GlobalOptions, opts: &BenchOptions) -> CommandOutput {
    match bench_report(global, opts) {
        Ok(r) => CommandOutput::ok(r.render(global.format)),
        Err(e) => CommandOutput::usage(&e),
    }
}

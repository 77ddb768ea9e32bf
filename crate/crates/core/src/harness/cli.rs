use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;

use super::{
    cmd_bench, cmd_run, cmd_sweep_phi, cmd_table, cmd_verify, BenchOptions, CommandOutput,
    ExitStatus, GlobalOptions, OutputFormat, RunOptions, SweepOptions, VerifyOptions,
    DEFAULT_SEED,
};
use crate::deletion::PhaseMode;
use crate::statevector::DEFAULT_QUBIT_CAP;

#[derive(Parser, Debug)]
#[command(name = "qdelete", version, about = "Single-query quantum deletion on a simulated register")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Largest qubit count accepted (a state takes 16 * 2^n bytes).
    #[arg(long, global = true, env = "QDELETE_CAP", default_value_t = DEFAULT_QUBIT_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run k deletion steps from the uniform state and score them against
    /// the closed form.
    Run(RunArgs),
    /// Tabulate the matched phase against the database size.
    SweepPhi(SweepArgs),
    /// Print sinθ, cosθ and their (-1)^k variants for θ = kπ/3.
    Table(TableArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Time one deletion step per qubit count.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    #[value(alias = "fixed-pi-over-three", alias = "pi3")]
    Fixed,
}

impl From<ModeArg> for PhaseMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => PhaseMode::Exact,
            ModeArg::Fixed => PhaseMode::FixedPiOverThree,
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    /// Marked index, in [0, 2^n).
    #[arg(long)]
    tau: usize,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Remove the predicted global phase from the final state.
    #[arg(long)]
    normalize: bool,
    /// Print the amplitude table even above 12 qubits.
    #[arg(long)]
    dump_amps: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "n-min", alias = "n_min", default_value_t = 1)]
    n_min: usize,
    #[arg(long = "n-max", alias = "n_max", default_value_t = 20)]
    n_max: usize,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long = "k-max", alias = "k_max", default_value_t = 12)]
    k_max: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "n-max", alias = "n_max", default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long = "inject-fault", hide = true)]
    inject_fault: Option<String>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Qubit counts, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_value = "16,18,20")]
    ns: Vec<usize>,
    #[arg(long, alias = "reps", default_value_t = 3)]
    repetitions: usize,
}

/// Parses `args` (program name first) and runs the selected command.
pub fn execute<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutput {
                    stdout: text,
                    stderr: String::new(),
                    status: ExitStatus::Success,
                },
                _ => {
                    let mut stderr = text;
                    if !stderr.contains("Usage:") {
                        stderr.push_str(&format!("\n{}\n", Cli::command().render_usage()));
                    }
                    CommandOutput {
                        stdout: String::new(),
                        stderr,
                        status: ExitStatus::Usage,
                    }
                }
            };
        }
    };
    let global = GlobalOptions {
        format: cli.format,
        seed: cli.seed,
        cap: cli.cap,
    };
    let mut out = match super::check_cap(global.cap) {
        Err(e) => CommandOutput::usage(&e),
        Ok(()) => dispatch(&global, cli.command),
    };
    if out.status == ExitStatus::Usage {
        out.stderr
            .push_str(&format!("\n{}\n", Cli::command().render_usage()));
    }
    out
}

fn dispatch(global: &GlobalOptions, command: Command) -> CommandOutput {
    let global = *global;
    match command {
        Command::Run(a) => cmd_run(
            &global,
            &RunOptions {
                n: a.n,
                tau: a.tau,
                k: a.k,
                mode: a.mode.into(),
                normalize: a.normalize,
                dump_amps: a.dump_amps,
            },
        ),
        Command::SweepPhi(a) => cmd_sweep_phi(
            &global,
            &SweepOptions {
                n_min: a.n_min,
                n_max: a.n_max,
            },
        ),
        Command::Table(a) => cmd_table(&global, a.k_max),
        Command::Verify(a) => cmd_verify(
            &global,
            &VerifyOptions {
                n_max: a.n_max,
                trials: a.trials,
                inject_fault: a.inject_fault,
            },
        ),
        Command::Bench(a) => cmd_bench(
            &global,
            &BenchOptions {
                ns: a.ns,
                repetitions: a.repetitions,
            },
        ),
    }
}

/// Entry point for the binary: parses the process arguments, writes both
/// streams and returns the exit code.
pub fn main_entry() -> i32 {
    let out = execute(std::env::args_os());
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.status.code()
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Simulate, encode and analyze information transmission by robot swarms on
/// grid graphs.
#[derive(Debug, Parser)]
#[command(name = "swarmlink", version)]
struct Cli {
    /// Output format; `ascii` draws configurations where that makes sense.
    #[arg(long, value_enum, global = true, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Ascii,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Alg1,
    Alg2,
    Loco,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Send one codeword (or sweep all codewords) over G_8(m, 2).
    Transmit(TransmitArgs),
    /// Run an algorithm and write its behaviour as a JSON-lines trace.
    Simulate(SimulateArgs),
    /// Replay a trace file as ASCII frames.
    Render(RenderArgs),
    /// Build codes for a symbol source.
    Code {
        #[command(subcommand)]
        action: CodeCommand,
    },
    /// Exact capacity of a small instance by transition-diagram maxflow.
    Analyze(AnalyzeArgs),
    /// Closed-form bounds for given k, m and source.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
pub struct TransmitArgs {
    #[arg(long, value_enum)]
    pub alg: Algorithm,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: usize,
    /// Codeword as a 0/1 string.
    #[arg(long)]
    pub bits: Option<String>,
    /// Transmit every codeword for a range of sizes, e.g. `k=4..9`.
    #[arg(long, conflicts_with_all = ["k", "bits"])]
    pub sweep: Option<String>,
    #[arg(long)]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub alg: Algorithm,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub bits: Option<String>,
    /// Trace destination; the trace goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Window width; defaults to the widest column in the trace.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum CodeCommand {
    /// Variable-size tower code for a source file `{"probs": [..]}`.
    Build(CodeBuildArgs),
}

#[derive(Debug, Args)]
pub struct CodeBuildArgs {
    #[arg(long, value_enum)]
    pub alg: Algorithm,
    #[arg(long)]
    pub probs: PathBuf,
    /// Strip width for the measured delays; defaults to 3 times the largest swarm.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// `strip`, `eightgrid`, `fourgrid` or `file:<path>`.
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Abort above this many configurations.
    #[arg(long, default_value_t = swarmlink::analysis::DEFAULT_GUARD)]
    pub guard: usize,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    /// Uniform source size, ignored when `--probs` is given.
    #[arg(long, default_value_t = 2)]
    pub alpha: usize,
    #[arg(long)]
    pub probs: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transmit(args) => commands::transmit(&args, cli.format),
        Command::Simulate(args) => commands::simulate(&args, cli.format),
        Command::Render(args) => commands::render(&args, cli.format),
        Command::Code {
            action: CodeCommand::Build(args),
        } => commands::code_build(&args, cli.format),
        Command::Analyze(args) => commands::analyze(&args, cli.format),
        Command::Bounds(args) => commands::bounds(&args, cli.format),
    };
    match result {
        Ok(output) => {
            print!("{}", output.text);
            if output.bounds_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(commands::EXIT_BOUNDS)
            }
        }
        Err(failure) => {
            eprintln!("swarmlink: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

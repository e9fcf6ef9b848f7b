use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "spheres", version, about = "Interval-sphere decompositions of filtered chain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose into interval spheres.
    Decompose(DecomposeArgs),
    /// Decompose and emit the persistence barcode.
    Barcode(BarcodeArgs),
    /// Decompose the kernel of a simplicial map with a section.
    Kernel(KernelArgs),
    /// Compare the decomposition barcode with column reduction.
    SpaCheck(SpaCheckArgs),
    /// Reduction statistics, row iteration counts and pair counts.
    Stats(StatsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    DistancesLower,
    DistancesSquare,
    Points,
    Filtration,
    Boundary,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Linf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Spa,
    AsGiven,
    DegreeSweep,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    EntranceDegree,
    DegreeEntrance,
    AsGiven,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Input files; several inputs are processed as a batch.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::DistancesSquare)]
    pub format: InputFormat,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    pub metric: MetricArg,
    /// Prime characteristic; boundary files carry their own.
    #[arg(long)]
    pub field: Option<u64>,
    /// Largest simplex dimension of a Rips construction.
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// Keep only simplices entering at or below this value.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = OrderArg::AsGiven)]
    pub order: OrderArg,
    /// Worker threads for batch inputs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Spa)]
    pub strategy: StrategyArg,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Prefix the sphere list with one comment line per split.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct BarcodeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Spa)]
    pub strategy: StrategyArg,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write the sphere list here.
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    /// Append zero-length spheres marked `Z`.
    #[arg(long)]
    pub include_zero_length: bool,
    /// Write an SVG persistence diagram.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    /// Filtration file of the source complex.
    pub source: PathBuf,
    /// Filtration file of the target complex.
    pub target: PathBuf,
    /// Map file with `vertex_map` and `section` blocks.
    pub map: PathBuf,
    #[arg(long)]
    pub field: Option<u64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Spa)]
    pub strategy: StrategyArg,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpaCheckArgs {
    /// Input files; omit and pass `--random` for generated instances.
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::DistancesSquare)]
    pub format: InputFormat,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    pub metric: MetricArg,
    #[arg(long)]
    pub field: Option<u64>,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Number of random distance matrices to check.
    #[arg(long)]
    pub random: Option<usize>,
    /// First seed for `--random`; with files, shuffles ties before reduction.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(args) => commands::decompose(&args),
        Command::Barcode(args) => commands::barcode(&args),
        Command::Kernel(args) => commands::kernel(&args),
        Command::SpaCheck(args) => commands::spa_check(&args),
        Command::Stats(args) => commands::stats(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

mod records;
mod sweep;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use waltz::gates::library;
use waltz::{compile, compile_on, BenchmarkSpec, LogicalCircuit, NoiseConfig, Strategy};

use records::RunRecord;
use sweep::SweepArgs;

#[derive(Parser)]
#[command(name = "waltz", version, about = "Compile and simulate circuits on qubit and ququart devices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark circuit in the text format.
    Bench(BenchArgs),
    /// Compile a circuit and print the compilation report.
    Compile(CompileArgs),
    /// Compile, estimate and simulate a circuit; prints one JSON record.
    Run(RunArgs),
    /// Sweep sizes or noise parameters across strategies; writes CSV.
    Sweep(SweepArgs),
    /// Print the gate library (name, radices, duration, fidelity).
    Gates(GatesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cnu,
    Cuccaro,
    Qram,
    Select,
    Synthetic,
}

#[derive(Args)]
struct BenchArgs {
    family: Family,
    #[arg(long)]
    controls: Option<usize>,
    #[arg(long)]
    bits: Option<usize>,
    #[arg(long)]
    address_bits: Option<usize>,
    #[arg(long)]
    index_bits: Option<usize>,
    #[arg(long)]
    targets: Option<usize>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    gates: Option<usize>,
    #[arg(long)]
    cx_fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    circuit: PathBuf,
    #[arg(short, long)]
    strategy: Strategy,
    /// Device count; defaults to the smallest mesh holding every qubit.
    #[arg(long)]
    devices: Option<usize>,
    /// Write the scheduled physical circuit here as JSON lines.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct NoiseArgs {
    /// Noise configuration (JSON); defaults apply when omitted.
    #[arg(long, env = "WALTZ_NOISE_CONFIG")]
    noise: Option<PathBuf>,
}

impl NoiseArgs {
    pub fn load(&self) -> Result<NoiseConfig, CliError> {
        match &self.noise {
            Some(path) => Ok(NoiseConfig::load(path)?),
            None => Ok(NoiseConfig::default()),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    circuit: PathBuf,
    #[arg(short, long)]
    strategy: Strategy,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Random input states; 0 skips simulation and reports the estimate only.
    #[arg(long, default_value_t = 200)]
    n_states: usize,
    #[arg(long, default_value_t = 1)]
    trajectories: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = waltz::simulator::DEFAULT_MAX_DIMENSION)]
    max_dimension: u128,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Args)]
struct GatesArgs {
    #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
    format: TableFormat,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(waltz::Error),
    Io(io::Error),
    Csv(csv::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Csv(e) => write!(f, "{e}"),
        }
    }
}

impl From<waltz::Error> for CliError {
    fn from(e: waltz::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    /// 2 for bad input, 3 when the device or the simulator cannot hold the
    /// circuit, 1 otherwise.
    fn exit_code(&self) -> u8 {
        use waltz::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::InsufficientCapacity { .. } | E::SimulationRefused { .. }) => 3,
            CliError::Core(
                E::Parse { .. }
                | E::InvalidCircuit(_)
                | E::InvalidStrategy(_)
                | E::InvalidParameter(_)
                | E::UnknownGate(_)
                | E::Json(_),
            ) => 2,
            _ => 1,
        }
    }
}

fn required<T>(value: Option<T>, flag: &str, family: Family) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{family:?} benchmarks need --{flag}").to_lowercase()))
}

fn bench_spec(a: &BenchArgs) -> Result<BenchmarkSpec, CliError> {
    let f = a.family;
    Ok(match f {
        Family::Cnu => BenchmarkSpec::Cnu { controls: required(a.controls, "controls", f)? },
        Family::Cuccaro => BenchmarkSpec::Cuccaro { bits: required(a.bits, "bits", f)? },
        Family::Qram => BenchmarkSpec::Qram { address_bits: required(a.address_bits, "address-bits", f)? },
        Family::Select => BenchmarkSpec::Select {
            index_bits: required(a.index_bits, "index-bits", f)?,
            targets: required(a.targets, "targets", f)?,
            seed: a.seed,
        },
        Family::Synthetic => BenchmarkSpec::Synthetic {
            qubits: required(a.qubits, "qubits", f)?,
            gates: required(a.gates, "gates", f)?,
            cx_fraction: required(a.cx_fraction, "cx-fraction", f)?,
            seed: a.seed,
        },
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_circuit(path: &Path) -> Result<LogicalCircuit, CliError> {
    Ok(LogicalCircuit::parse_text(&fs::read_to_string(path)?)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bench(a) => {
            let circuit = bench_spec(&a)?.generate()?;
            emit(a.output.as_deref(), &circuit.to_text())
        }
        Command::Compile(a) => {
            let circuit = read_circuit(&a.circuit)?;
            let compiled = match a.devices {
                Some(n) => compile_on(&circuit, n, a.strategy)?,
                None => compile(&circuit, a.strategy)?,
            };
            if let Some(path) = &a.output {
                fs::write(path, compiled.circuit.to_jsonl()?)?;
            }
            let report = compiled.report(a.strategy, circuit.n_qubits);
            emit(None, &format!("{}\n", serde_json::to_string_pretty(&report)?))
        }
        Command::Run(a) => {
            let circuit = read_circuit(&a.circuit)?;
            let noise = a.noise.load()?;
            let label = a.circuit.display().to_string();
            let options = records::SimOptions {
                n_states: a.n_states,
                trajectories: a.trajectories,
                seed: a.seed,
                max_dimension: a.max_dimension,
            };
            let record = RunRecord::evaluate(&label, &circuit, a.strategy, &noise, &options)?;
            emit(None, &format!("{}\n", serde_json::to_string_pretty(&record)?))
        }
        Command::Sweep(a) => sweep::run(&a),
        Command::Gates(a) => {
            let records = library().records();
            let text = match a.format {
                TableFormat::Json => format!("{}\n", serde_json::to_string_pretty(&records)?),
                TableFormat::Tsv => {
                    let mut out = String::from("name\tradices\tduration_ns\tfidelity\n");
                    for r in &records {
                        let radices: Vec<String> = r.radices.iter().map(|d| d.dim().to_string()).collect();
                        out.push_str(&format!("{}\t{}\t{}\t{}\n", r.name, radices.join(","), r.duration_ns, r.fidelity));
                    }
                    out
                }
            };
            emit(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

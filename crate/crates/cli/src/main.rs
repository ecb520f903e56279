use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod failure;

use failure::Failure;

const EXIT_CODES: &str = "\
Exit codes:
  0  success; every requested check passed
  1  a requested check failed or could not be decided
  2  invalid command line
  3  unknown code name
  4  invalid code parameters or construction failure
  5  code file could not be read or parsed
  6  simulation or gadget error
  7  overhead model error
  8  report could not be written";

#[derive(Parser)]
#[command(
    name = "cssft",
    version,
    about = "Build and certify CSS codes, verify transversal gates and gadgets, and evaluate the fault-tolerance overhead model",
    after_help = EXIT_CODES
)]
struct Cli {
    /// Format of the machine-readable report.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Suppress the human summary on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a CSS code and optionally write its matrices and certificate.
    #[command(after_help = EXIT_CODES)]
    Build(BuildArgs),
    /// Check transversal-gate lemmas on a code.
    #[command(after_help = EXIT_CODES)]
    Verify(VerifyArgs),
    /// Simulate every measurement branch of a gadget network.
    #[command(after_help = EXIT_CODES)]
    SimulateGadget(GadgetArgs),
    /// Tolerable noise and scale-up per code.
    #[command(after_help = EXIT_CODES)]
    Overhead(OverheadArgs),
    /// Check that dual-containing BCH codes have doubly-even duals.
    #[command(after_help = EXIT_CODES)]
    BchConjecture(ConjectureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Bch,
    Qr,
    Rm,
    Named,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Code family; omit when using --load.
    #[arg(value_enum, required_unless_present = "load")]
    pub family: Option<Family>,
    /// Registry name for `named` (e.g. steane, golay23, bch127-29).
    pub name: Option<String>,
    /// Field degree for BCH (`n = 2^m − 1`) or Reed–Muller.
    #[arg(long)]
    pub m: Option<u32>,
    /// Designed distance for BCH.
    #[arg(long)]
    pub delta: Option<usize>,
    /// Prime for the extended quadratic-residue code.
    #[arg(long)]
    pub p: Option<usize>,
    /// Reed–Muller order.
    #[arg(long)]
    pub r: Option<u32>,
    /// Number of `[[n−1,k+1]]` derivation steps applied after construction.
    #[arg(long, default_value_t = 0)]
    pub delete: usize,
    /// Classical code file (generator or check matrix with `# key: value` header).
    #[arg(long, conflicts_with = "family")]
    pub load: Option<PathBuf>,
    /// Directory receiving H̃, D̃, stabilizers, summary and certificate.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Registry name, alias, `n,k,d` triple, or path to a classical code file.
    pub code: String,
    /// Lemmas to check (1–5); defaults to 2,3,4.
    #[arg(long, value_delimiter = ',')]
    pub lemmas: Vec<u8>,
    #[arg(long)]
    pub lemma1: bool,
    #[arg(long)]
    pub lemma2: bool,
    #[arg(long)]
    pub lemma3: bool,
    #[arg(long)]
    pub lemma4: bool,
    #[arg(long)]
    pub lemma5: bool,
    /// Phase-gate modulus for lemma 1; defaults to the registry weight.
    #[arg(long)]
    pub w: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    CxPair,
    CzPair,
}

#[derive(Args, Debug)]
pub struct GadgetArgs {
    /// merged-measure, intra-block-cx, teleport, toffoli, switch-out or switch-in.
    pub kind: String,
    #[arg(long, default_value = "steane")]
    pub code: String,
    /// Teleportation ancilla pair.
    #[arg(long, value_enum, default_value_t = Variant::CxPair)]
    pub variant: Variant,
    /// Logical qubit indices (switching and merged measurement).
    #[arg(long, value_delimiter = ',')]
    pub qubit: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct OverheadArgs {
    /// Comma-separated codes; defaults to the seven reference-table codes.
    #[arg(long)]
    pub codes: Option<String>,
    /// Algorithm size K·Q.
    #[arg(long, default_value_t = cssft::overhead::TABLE1_KQ)]
    pub kq: f64,
    /// Multiplier applied to --kq (6561 = 3⁸ for thousand-digit factoring).
    #[arg(long, default_value_t = 1.0)]
    pub kq_scale: f64,
    /// Memory error as a multiple of γ; defaults to 1/n.
    #[arg(long)]
    pub epsilon_ratio: Option<f64>,
    /// Size the accumulator at about K/4k blocks instead of 3.
    #[arg(long)]
    pub large_accumulator: bool,
    /// Logical qubit count K for the finite-machine scale-up.
    #[arg(long)]
    pub logical_qubits: Option<f64>,
    /// Check the results against the embedded reference table.
    #[arg(long)]
    pub compare_paper: bool,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    #[arg(long, default_value_t = 4)]
    pub m_min: u32,
    #[arg(long, default_value_t = 7)]
    pub m_max: u32,
}

/// What a command produced.
pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
    pub csv: Option<String>,
    pub ok: bool,
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialise") + "\n",
        Format::Text => report.text.clone(),
        Format::Csv => report
            .csv
            .clone()
            .ok_or_else(|| Failure::usage("csv output is only available for the overhead command"))?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::output(path, e))?,
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::output("stdout", e))?,
    }
    if !cli.quiet && (cli.format != Format::Text || cli.output.is_some()) {
        eprint!("{}", report.text);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::SimulateGadget(a) => commands::simulate_gadget(a),
        Command::Overhead(a) => commands::overhead(a),
        Command::BchConjecture(a) => commands::bch_conjecture(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|report| emit(&cli, &report).map(|()| report.ok));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(failure::CHECK_FAILED),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

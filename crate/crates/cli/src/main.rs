mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subspace_codes::spread::Convention;

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "subspace-codes",
    version,
    about = "Encode, retrieve and analyze subspace codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from its spec and list its codewords.
    Construct(ConstructArgs),
    /// Map a message to its codeword.
    Encode(EncodeArgs),
    /// Recover the message of a codeword or of a generator power.
    Retrieve(RetrieveArgs),
    /// Subspace distance between two codewords, or the code's minimum distance.
    Distance(DistanceArgs),
    /// Check the structural properties of a code exhaustively.
    Verify(VerifyArgs),
    /// Factor q^n - 1 and report the cost of discrete-log retrieval.
    Analyze(AnalyzeArgs),
    /// Send a codeword through a seeded erasure/insertion channel and decode.
    Simulate(SimulateArgs),
    /// Apply a semi-linear isometry to a codeword or to an encoded message.
    IsometryApply(IsometryApplyArgs),
    /// Retrieve a message through an isometry from a received codeword.
    IsometryRetrieve(IsometryRetrieveArgs),
    /// Search for a linear isometry between two small binary codes.
    IsometrySearch(IsometrySearchArgs),
    /// Orbit-code commands.
    #[command(subcommand)]
    Orbit(OrbitCommand),
}

#[derive(Subcommand)]
enum OrbitCommand {
    Encode(EncodeArgs),
    Retrieve(RetrieveArgs),
    Analyze(CodeArg),
}

#[derive(Args)]
struct CodeArg {
    /// Code spec (JSON).
    #[arg(long)]
    code: PathBuf,
}

#[derive(Args)]
struct ConventionArg {
    /// Message map for spread codes.
    #[arg(long, value_parser = parse_convention)]
    convention: Option<Convention>,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: subspace_codes::Error| e.to_string())
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
    /// Print only the summary, not the codewords.
    #[arg(long)]
    summary: bool,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
    /// Message, in decimal.
    #[arg(long)]
    message: String,
}

#[derive(Args)]
struct RetrieveArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
    /// Codeword matrix file ("-" for stdin).
    #[arg(long, conflicts_with = "power")]
    codeword: Option<PathBuf>,
    /// Generator power P^i reported by a decoder (orbit codes).
    #[arg(long)]
    power: Option<PathBuf>,
    /// Orbit of a union code, numbered from 1.
    #[arg(long)]
    orbit_id: Option<usize>,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    code: CodeArg,
    /// Two codeword files; without them the code's minimum distance is printed.
    #[arg(long, num_args = 1)]
    codeword: Vec<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Analyze the group order of this code.
    #[arg(long, conflicts_with_all = ["q", "n", "n_max"])]
    code: Option<PathBuf>,
    /// Field size.
    #[arg(long)]
    q: Option<u32>,
    /// Ambient dimension.
    #[arg(long, conflicts_with = "n_max")]
    n: Option<usize>,
    /// List every n^2-smooth n up to this bound.
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
    #[arg(long)]
    message: String,
    #[arg(long, default_value_t = 0)]
    erasures: usize,
    #[arg(long, default_value_t = 0)]
    insertions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct IsometryApplyArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
    /// Isometry document {"A": [[..]], "frobenius_power": s}.
    #[arg(long)]
    isometry: PathBuf,
    #[arg(
        long,
        required_unless_present = "codeword",
        conflicts_with = "codeword"
    )]
    message: Option<String>,
    #[arg(long)]
    codeword: Option<PathBuf>,
    /// Apply the inverse map instead.
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct IsometryRetrieveArgs {
    #[command(flatten)]
    code: CodeArg,
    #[command(flatten)]
    convention: ConventionArg,
    #[arg(long)]
    isometry: PathBuf,
    #[arg(long)]
    codeword: PathBuf,
}

#[derive(Args)]
struct IsometrySearchArgs {
    #[command(flatten)]
    code: CodeArg,
    /// Spec of the image code.
    #[arg(long)]
    target: PathBuf,
}

fn run(cli: Cli) -> Result<String, CliError> {
    use commands as c;
    match cli.command {
        Command::Construct(a) => c::construct(&a.code.code, a.convention.convention, a.summary),
        Command::Encode(a) => c::encode(&a.code.code, a.convention.convention, &a.message, false),
        Command::Retrieve(a) => c::retrieve(&c::RetrieveRequest {
            code: &a.code.code,
            convention: a.convention.convention,
            codeword: a.codeword.as_deref(),
            power: a.power.as_deref(),
            orbit_id: a.orbit_id,
            orbit_only: false,
        }),
        Command::Distance(a) => c::distance(&a.code.code, &a.codeword),
        Command::Verify(a) => c::verify(&a.code.code, a.convention.convention),
        Command::Analyze(a) => match (a.code, a.q, a.n, a.n_max) {
            (Some(code), ..) => c::analyze_code(&code, false),
            (None, Some(q), Some(n), None) => c::analyze_order(q, n),
            (None, Some(q), None, Some(n_max)) => c::analyze_table(q, n_max),
            _ => Err(CliError::usage(
                "analyze needs --code, --q with --n, or --q with --n-max",
            )),
        },
        Command::Simulate(a) => c::simulate(&c::SimulateRequest {
            code: &a.code.code,
            convention: a.convention.convention,
            message: &a.message,
            erasures: a.erasures,
            insertions: a.insertions,
            seed: a.seed,
            json: a.json,
        }),
        Command::IsometryApply(a) => c::isometry_apply(
            &a.code.code,
            a.convention.convention,
            &a.isometry,
            a.message.as_deref(),
            a.codeword.as_deref(),
            a.inverse,
        ),
        Command::IsometryRetrieve(a) => c::isometry_retrieve(
            &a.code.code,
            a.convention.convention,
            &a.isometry,
            &a.codeword,
        ),
        Command::IsometrySearch(a) => c::isometry_search(&a.code.code, &a.target),
        Command::Orbit(OrbitCommand::Encode(a)) => {
            c::encode(&a.code.code, a.convention.convention, &a.message, true)
        }
        Command::Orbit(OrbitCommand::Retrieve(a)) => c::retrieve(&c::RetrieveRequest {
            code: &a.code.code,
            convention: a.convention.convention,
            codeword: a.codeword.as_deref(),
            power: a.power.as_deref(),
            orbit_id: a.orbit_id,
            orbit_only: true,
        }),
        Command::Orbit(OrbitCommand::Analyze(a)) => c::analyze_code(&a.code, true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(report) = e.report() {
                print!("{report}");
            }
            eprintln!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}

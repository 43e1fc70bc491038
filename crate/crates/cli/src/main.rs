use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Failure;

/// Exact computations over finite chain rings.
#[derive(Parser, Debug)]
#[command(name = "chainlift", version, about)]
struct Cli {
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized factorization.
    #[arg(long, global = true, env = "CHAINLIFT_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a chain ring.
    RingInfo(RingArg),
    /// Irreducible factors of X^m - 1 over the residue field.
    Factor(FactorArgs),
    /// Hensel lift of the factorization of X^m - 1.
    Hensel(HenselArgs),
    /// Linear code operations.
    #[command(subcommand)]
    Code(CodeCommand),
    #[command(name = "code-std", alias = "code-std-form", hide = true)]
    CodeStd(CodeArgs),
    #[command(name = "code-dual", hide = true)]
    CodeDual(CodeArgs),
    #[command(name = "code-check", hide = true)]
    CodeCheck(CheckArgs),
    /// Lift or project a code between precision levels.
    Lift(LiftArgs),
    /// Hensel-lift a cyclic code from the residue field.
    LiftCyclic(LiftCyclicArgs),
    /// Construction A lattices and ideal lattices.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    #[command(name = "lattice-build", hide = true)]
    LatticeBuild(BuildArgs),
    #[command(name = "lattice-ideal", hide = true)]
    LatticeIdeal(IdealArgs),
    /// Discriminant of O_K over Z_p.
    DiscK(DiscArgs),
}

#[derive(Subcommand, Debug)]
enum CodeCommand {
    /// Standard form, type and cardinality.
    StdForm(CodeArgs),
    /// The dual code.
    Dual(CodeArgs),
    /// Structural predicates.
    Check(CheckArgs),
}

#[derive(Subcommand, Debug)]
enum LatticeCommand {
    /// Construction A lattice of a code.
    Build(BuildArgs),
    /// Lattice of the ideal <pi^i>.
    Ideal(IdealArgs),
}

#[derive(Args, Debug)]
struct RingArg {
    /// Ring spec file (JSON).
    #[arg(long)]
    ring: PathBuf,
}

#[derive(Args, Debug)]
struct FactorArgs {
    #[command(flatten)]
    ring: RingArg,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Debug)]
struct HenselArgs {
    #[command(flatten)]
    ring: RingArg,
    #[arg(long)]
    m: usize,
    /// Lift modulo pi^precision; defaults to the nilpotency index.
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[command(flatten)]
    ring: RingArg,
    /// Code file: a generator matrix or {"length", "matrix"}.
    #[arg(long)]
    code: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    self_orthogonal: bool,
    #[arg(long)]
    self_dual: bool,
    #[arg(long)]
    cyclic: bool,
    #[arg(long)]
    free: bool,
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Level of the input code; defaults to the nilpotency index of the ring.
    #[arg(long)]
    from_precision: Option<usize>,
    #[arg(long)]
    to_precision: usize,
}

#[derive(Args, Debug)]
struct LiftCyclicArgs {
    #[command(flatten)]
    ring: RingArg,
    #[arg(long)]
    m: usize,
    /// Generator over the residue field: JSON coefficient list, or a path to one.
    #[arg(long)]
    gbar: String,
    /// Target level; defaults to the nilpotency index of the ring.
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Element file for alpha (integer e x r array); defaults to 1.
    #[arg(long)]
    alpha: Option<PathBuf>,
    /// Starting p-adic working precision.
    #[arg(long)]
    precision: Option<usize>,
    /// Use (x, y) -> Tr(x y) / p; needs a self-orthogonal code and r = 1.
    #[arg(long)]
    scaled: bool,
}

#[derive(Args, Debug)]
struct IdealArgs {
    #[command(flatten)]
    ring: RingArg,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    alpha: Option<PathBuf>,
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args, Debug)]
struct DiscArgs {
    #[command(flatten)]
    ring: RingArg,
    #[arg(long)]
    precision: Option<usize>,
}

fn dispatch(cli: &Cli) -> Result<serde_json::Value, Failure> {
    let seed = cli.seed.unwrap_or(chainlift::poly::DEFAULT_SEED);
    match &cli.command {
        Command::RingInfo(a) => commands::ring_info(&a.ring),
        Command::Factor(a) => commands::factor(&a.ring.ring, a.m, seed),
        Command::Hensel(a) => commands::hensel(&a.ring.ring, a.m, a.precision, seed),
        Command::Code(CodeCommand::StdForm(a)) | Command::CodeStd(a) => commands::code_std(&a.ring.ring, &a.code),
        Command::Code(CodeCommand::Dual(a)) | Command::CodeDual(a) => commands::code_dual(&a.ring.ring, &a.code),
        Command::Code(CodeCommand::Check(a)) | Command::CodeCheck(a) => {
            let checks = commands::Checks {
                self_orthogonal: a.self_orthogonal,
                self_dual: a.self_dual,
                cyclic: a.cyclic,
                free: a.free,
            };
            commands::code_check(&a.code.ring.ring, &a.code.code, checks)
        }
        Command::Lift(a) => commands::lift(&a.code.ring.ring, &a.code.code, a.from_precision, a.to_precision),
        Command::LiftCyclic(a) => commands::lift_cyclic(&a.ring.ring, a.m, &a.gbar, a.precision),
        Command::Lattice(LatticeCommand::Build(a)) | Command::LatticeBuild(a) => {
            commands::lattice_build(&a.code.ring.ring, &a.code.code, a.alpha.as_deref(), a.precision, a.scaled)
        }
        Command::Lattice(LatticeCommand::Ideal(a)) | Command::LatticeIdeal(a) => {
            commands::lattice_ideal(&a.ring.ring, a.i, a.alpha.as_deref(), a.precision)
        }
        Command::DiscK(a) => commands::disc_k(&a.ring.ring, a.precision),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, status) = match dispatch(&cli) {
        Ok(doc) => (doc, 0),
        Err(f) => {
            println!("{}", render(&f.document()));
            return ExitCode::from(f.exit_status());
        }
    };
    let text = render(&doc);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                let f = Failure::io(path, e);
                println!("{}", render(&f.document()));
                return ExitCode::from(f.exit_status());
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(status)
}

fn render(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

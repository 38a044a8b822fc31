use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relext_cli::{cache, run, CliError, Command, ObstructionMode, Options};

/// Exact relative Schur multipliers, universal central extensions and
/// lifting obstructions for homomorphisms of finite groups.
#[derive(Parser)]
#[command(name = "relext", version, about)]
struct Cli {
    /// Cross-check results through independent constructions where
    /// available (Hopf formula vs. mapping cone).
    #[arg(long, global = true)]
    verify: bool,

    /// Bypass the result cache for both reads and writes.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Override the order budget for constructed groups and tower stages.
    #[arg(long, global = true, value_name = "N")]
    budget_order: Option<usize>,

    /// Allow slow bar-complex runs on groups of order up to 128.
    #[arg(long, global = true)]
    slow: bool,

    /// Fail (exit 3) when the input map is not surjective on
    /// abelianizations.
    #[arg(long, global = true)]
    require_ab_surjective: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariant factors of the relative multiplier H2(G, Γ) of a
    /// homomorphism file.
    Multiplier { hom: PathBuf },
    /// Construct the universal central f-extension and write it to a
    /// file.
    Universal { hom: PathBuf, out: PathBuf },
    /// Iterate the universal construction until the multiplier
    /// vanishes.
    Tower {
        hom: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_steps: usize,
    },
    /// Lifting obstructions in an extension (or in the universal
    /// extension of a homomorphism file).
    Obstruction {
        input: PathBuf,
        /// Commuting pair of base-group elements.
        #[arg(long, num_args = 2, value_names = ["X", "Y"], conflicts_with_all = ["order", "hom"])]
        pair: Option<Vec<u32>>,
        /// Base-group element to lift at its own order.
        #[arg(long, conflicts_with = "hom")]
        order: Option<u32>,
        /// Homomorphism file to lift through the projection.
        #[arg(long)]
        hom: Option<PathBuf>,
    },
    /// Exactness of the five-term homology sequence of an extension
    /// file.
    FiveTerm { ext: PathBuf },
    /// Enumerate equivalence classes of central f-extensions with the
    /// given cyclic coefficient moduli.
    Classes {
        hom: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        coeff: Vec<u64>,
    },
}

fn command(cmd: Cmd) -> Result<Command, CliError> {
    Ok(match cmd {
        Cmd::Multiplier { hom } => Command::Multiplier { hom },
        Cmd::Universal { hom, out } => Command::Universal { hom, out },
        Cmd::Tower { hom, max_steps } => Command::Tower { hom, max_steps },
        Cmd::Obstruction { input, pair, order, hom } => {
            let mode = match (pair, order, hom) {
                (Some(p), None, None) => ObstructionMode::Pair(p[0], p[1]),
                (None, Some(x), None) => ObstructionMode::Order(x),
                (None, None, Some(path)) => ObstructionMode::Hom(path),
                _ => {
                    return Err(CliError::Parse(
                        "exactly one of --pair, --order, --hom is required".into(),
                    ))
                }
            };
            Command::Obstruction { input, mode }
        }
        Cmd::FiveTerm { ext } => Command::FiveTerm { ext },
        Cmd::Classes { hom, coeff } => Command::Classes { hom, coeff },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        verify: cli.verify,
        no_cache: cli.no_cache,
        budget_order: cli.budget_order,
        slow: cli.slow,
        require_ab_surjective: cli.require_ab_surjective,
    };
    let result = command(cli.cmd).and_then(|cmd| run(&cmd, &opts));
    match result {
        Ok(out) => {
            if let Some((path, body)) = &out.artifact {
                if let Err(e) = cache::write_atomic(path, body) {
                    eprintln!("io error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            println!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use uqcn::report::{self, CocycleChoice, RunConfig, SectorSelection, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_FAIL: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "uqcn", version, about = "Exact verification of the level -1/2 free-field realization of U_q(C_n^(1))")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Rank n.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Oscillator degree cutoff D.
    #[arg(long, default_value_t = 2)]
    cutoff: u32,
    /// Mode window W.
    #[arg(long, default_value_t = 2)]
    window: i64,
    /// Highest p-degree in character comparisons.
    #[arg(long, default_value_t = 3)]
    pmax: i64,
    /// Bound on |l_j| for character weights.
    #[arg(long, default_value_t = 2)]
    weight_bound: i64,
    #[arg(long, value_enum, default_value_t = Sectors::Default)]
    sectors: Sectors,
    /// JSON file holding a 2n x 2n sign table, or "trivial".
    #[arg(long, default_value = "trivial")]
    cocycle: String,
    /// Comma-separated relation families (default: all).
    #[arg(long, value_delimiter = ',')]
    relations: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Command {
    VerifyRelations,
    VerifyIdentities,
    Characters,
    HighestWeights,
    Screening,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sectors {
    Default,
    Hw,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Json,
    Text,
}

fn config(cli: &Cli) -> Result<RunConfig, String> {
    let cocycle = if cli.cocycle == "trivial" {
        CocycleChoice::Trivial
    } else {
        let raw = std::fs::read_to_string(&cli.cocycle).map_err(|e| format!("cannot read {}: {e}", cli.cocycle))?;
        let m: Vec<Vec<i64>> = serde_json::from_str(&raw).map_err(|e| format!("bad cocycle table: {e}"))?;
        CocycleChoice::Table(m)
    };
    Ok(RunConfig {
        rank: cli.rank,
        cutoff: cli.cutoff,
        window: cli.window,
        pmax: cli.pmax,
        weight_bound: cli.weight_bound,
        sectors: match cli.sectors {
            Sectors::Default => SectorSelection::Default,
            Sectors::Hw => SectorSelection::Hw,
        },
        cocycle,
        relations: cli.relations.clone(),
        output: cli.out.clone(),
    })
}

fn subcommand(c: Command) -> Subcommand {
    match c {
        Command::VerifyRelations => Subcommand::VerifyRelations,
        Command::VerifyIdentities => Subcommand::VerifyIdentities,
        Command::Characters => Subcommand::Characters,
        Command::HighestWeights => Subcommand::HighestWeights,
        Command::Screening => Subcommand::Screening,
        Command::All => Subcommand::All,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match config(&cli).and_then(|c| c.validate().map(|_| c).map_err(|e| e.to_string())) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let rep = match report::run(subcommand(cli.command), &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let body = match cli.format {
        Format::Json => rep.to_json() + "\n",
        Format::Text => rep.to_text(),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_USAGE);
            }
            eprint!("{}", rep.to_text());
        }
        None => print!("{body}"),
    }
    if rep.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

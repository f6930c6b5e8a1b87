mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grassblow_core::{Side, SignConvention};
use report::{Failure, Report};

#[derive(Parser)]
#[command(name = "grassblow", version, about = "Exact computations on canonical blow-ups of Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divisor lattice, B classes and the anticanonical class
    Lattice(Common),
    /// Interior certificates for the restricted anticanonical class
    Certify(Common),
    /// Evaluate the restricted identity suite
    Identities(Common),
    /// Chart counts, the 4x8 golden pattern and transition checks
    Atlas(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Minus,
    Plus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Listed,
    Ascending,
}

#[derive(Args, Clone)]
pub struct Common {
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// sweep every normalized triple with n up to this bound
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// sample points per chart pair for transition checks
    #[arg(long, default_value_t = 25)]
    points: usize,
    #[arg(long, env = "GRASSBLOW_SEED")]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "listed")]
    sign: SignArg,
    #[arg(long)]
    json: bool,
}

/// Parsed and defaulted options shared by all commands.
pub struct Config {
    pub triple: Option<(usize, usize, usize)>,
    pub max_n: Option<usize>,
    pub side: Option<Side>,
    pub j: Option<usize>,
    pub l: Option<usize>,
    pub points: usize,
    pub seed: u64,
    pub sign: SignConvention,
}

impl Config {
    fn from_args(c: &Common) -> Result<Config, Failure> {
        let triple = match (c.s, c.p, c.n) {
            (Some(s), Some(p), Some(n)) => Some((s, p, n)),
            (None, None, None) => None,
            _ => return Err(Failure::param("parameters out of range: --s, --p and --n go together")),
        };
        if triple.is_none() && c.max_n.is_none() {
            return Err(Failure::param("parameters out of range: give --s --p --n or --max-n"));
        }
        Ok(Config {
            triple,
            max_n: c.max_n,
            side: c.side.map(|s| match s {
                SideArg::Minus => Side::Minus,
                SideArg::Plus => Side::Plus,
            }),
            j: c.j,
            l: c.l,
            points: c.points,
            seed: c.seed.unwrap_or_else(|| grassblow_core::fixtures::Fixtures::load().seeds.default),
            sign: match c.sign {
                SignArg::Listed => SignConvention::Listed,
                SignArg::Ascending => SignConvention::Ascending,
            },
        })
    }
}

fn main() {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Lattice(c) => ("lattice", c),
        Command::Certify(c) => ("certify", c),
        Command::Identities(c) => ("identities", c),
        Command::Atlas(c) => ("atlas", c),
    };
    let result = Config::from_args(common).and_then(|cfg| match name {
        "lattice" => commands::lattice(&cfg),
        "certify" => commands::certify(&cfg),
        "identities" => commands::identities(&cfg),
        _ => commands::atlas(&cfg),
    });
    let code = match result {
        Ok(report) => {
            emit(&report, common.json);
            report.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if common.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({ "error": f.message, "exit_code": f.code }))
                        .expect("error serializes")
                );
            }
            f.code
        }
    };
    std::process::exit(code);
}

fn emit(report: &Report, json: bool) {
    use std::io::Write;
    let text = if json {
        format!("{}\n", report.to_json())
    } else {
        report.to_human()
    };
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().write_all(text.as_bytes());
}

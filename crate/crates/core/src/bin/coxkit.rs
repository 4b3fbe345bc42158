use clap::{Args, Parser, Subcommand};
use coxkit::cli::{self, CmdResult, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "coxkit",
    about = "Coxeter systems, buildings, and counting quasi-morphisms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// System (or building) description, JSON
    #[arg(long, value_name = "FILE")]
    system: PathBuf,
    /// Ball radius for witness searches and chamber sets
    #[arg(long)]
    radius: Option<usize>,
    /// Power horizon for identities like gamma2^n = a gamma1^n b
    #[arg(long)]
    horizon: Option<usize>,
    /// Largest power tried by the reversibility search
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    /// Exhaustive pair window for defect estimation
    #[arg(long = "length-bound")]
    length_bound: Option<usize>,
    /// Largest power used for homogenization
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Seed for sampled checks; fixed seed gives identical bytes
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the JSON report here (atomically)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the diagram and optional generator subsets
    Classify {
        #[command(flatten)]
        common: Common,
        /// Generator subset like "s1 s3"; repeatable
        #[arg(long, action = clap::ArgAction::Append)]
        subset: Vec<String>,
    },
    /// Normal form of a word
    Nf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
    },
    /// Parabolic closure of an element
    Pc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
    },
    /// Whether the closure of an element is the whole group
    Essential {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
    },
    /// Rank-one decision with oracle cross-checks
    Rank1 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
    },
    /// Search for gamma^k = (involution)(involution)
    Reversible {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
    },
    /// Equivalence witness search between two elements
    Equiv {
        #[command(flatten)]
        common: Common,
        /// Pass twice: the two elements to compare
        #[arg(long, action = clap::ArgAction::Append, num_args = 1)]
        word: Vec<String>,
    },
    /// Hunt for an inequivalent pair of rank-one elements
    Pair {
        #[command(flatten)]
        common: Common,
    },
    /// Check building axioms, retraction, and projection gates
    BuildingCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Contracting certificate for a building element
    BuildingRank1 {
        #[command(flatten)]
        common: Common,
        /// Thin: a word; graph product: a chamber like "x1^2 x2",
        /// where xi generates the vertex group over the i-th generator
        #[arg(long)]
        word: String,
    },
    /// Axis-counting quasi-morphism with defect and homogenization
    Qm {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        word: String,
    },
    /// End-to-end demonstration on one system
    DemoMainTheorem {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Classify { common, .. }
            | Command::Nf { common, .. }
            | Command::Pc { common, .. }
            | Command::Essential { common, .. }
            | Command::Rank1 { common, .. }
            | Command::Reversible { common, .. }
            | Command::Equiv { common, .. }
            | Command::Pair { common }
            | Command::BuildingCheck { common }
            | Command::BuildingRank1 { common, .. }
            | Command::Qm { common, .. }
            | Command::DemoMainTheorem { common } => common,
        }
    }
}

fn config_of(c: &Common) -> RunConfig {
    RunConfig {
        system_path: c.system.clone(),
        radius: c.radius,
        horizon: c.horizon,
        k_max: c.k_max,
        length_bound: c.length_bound,
        n_max: c.n_max,
        seed: c.seed,
        out: c.out.clone(),
    }
}

fn run(command: &Command) -> coxkit::error::Result<CmdResult> {
    let cfg = config_of(command.common());
    match command {
        Command::Classify { subset, .. } => cli::cmd_classify(&cfg, subset),
        Command::Nf { word, .. } => cli::cmd_nf(&cfg, word),
        Command::Pc { word, .. } => cli::cmd_pc(&cfg, word),
        Command::Essential { word, .. } => cli::cmd_essential(&cfg, word),
        Command::Rank1 { word, .. } => cli::cmd_rank1(&cfg, word),
        Command::Reversible { word, .. } => cli::cmd_reversible(&cfg, word),
        Command::Equiv { word, .. } => {
            if word.len() != 2 {
                return Err(coxkit::error::CoxError::InvalidWord(
                    "equiv needs --word passed exactly twice".into(),
                ));
            }
            cli::cmd_equiv(&cfg, &word[0], &word[1])
        }
        Command::Pair { .. } => cli::cmd_pair(&cfg),
        Command::BuildingCheck { .. } => cli::cmd_building_check(&cfg),
        Command::BuildingRank1 { word, .. } => cli::cmd_building_rank1(&cfg, word),
        Command::Qm { word, .. } => cli::cmd_qm(&cfg, word),
        Command::DemoMainTheorem { .. } => cli::cmd_demo_main_theorem(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.command.common().threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = cli.command.common().out.clone();
    match run(&cli.command) {
        Ok(result) => {
            let text = cli::render_report(&result);
            print!("{text}");
            if let Some(path) = out {
                if let Err(e) = cli::write_report(&path, &text) {
                    eprintln!("error: failed to write report: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(result.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}

mod commands;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ktree_core::families::DEFAULT_CLASS_BUDGET;
use ktree_core::oracle::DEFAULT_BUDGET;

#[derive(Parser, Debug)]
#[command(
    name = "ktree",
    version,
    about = "Sub-k-tree statistics, families and verification sweeps"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Largest n - k allowed for brute-force enumeration.
    #[arg(long, global = true, env = "KTREE_BUDGET", default_value_t = DEFAULT_BUDGET as u64,
          value_parser = clap::value_parser!(u64).range(1..=40))]
    pub budget: u64,
    /// Largest number of isomorphism classes held in one generation level.
    #[arg(long, global = true, default_value_t = DEFAULT_CLASS_BUDGET,
          value_parser = positive)]
    pub class_budget: usize,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_parser = positive)]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stream one .ktc block per isomorphism class of k-trees on n vertices.
    Gen {
        #[arg(long, value_parser = positive)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a named family member as .ktc.
    Family {
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = positive)]
        k: usize,
        /// Order (star, path).
        #[arg(long)]
        n: Option<usize>,
        /// Handle length (broom) or stem length (caterpillar).
        #[arg(long)]
        s: Option<usize>,
        /// Extra leaves (broom).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact N, R, complements and mean for one scope, one CSV row per engine.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        /// global, clique=<v1,..,vk> or vertex=<v>
        #[arg(long, default_value = "global")]
        scope: String,
        /// oracle or recursive; repeatable.
        #[arg(long = "engine", default_values_t = [String::from("oracle")])]
        engines: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 1-characteristic tree of a k-clique, in DOT.
    CharTree {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated vertex ids; defaults to the base clique.
        #[arg(long)]
        clique: Option<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run the checks over every class with n <= n-max. Exit 1 on any FAIL.
    Verify {
        #[arg(long, value_parser = positive)]
        k: usize,
        #[arg(long)]
        n_max: usize,
        /// Comma list of max-local, double-bound, series-reduced, structural, aux; or all.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        fail_fast: bool,
        /// Keep only FAIL records in the JSON report.
        #[arg(long)]
        failures_only: bool,
        /// Seed for the sampled inequality checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Rank every class on n vertices by an objective.
    Extremal {
        #[arg(long, value_parser = positive)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// min-global, max-global or max-local
        #[arg(long, default_value = "min-global")]
        objective: String,
        /// all, series-reduced or path-type
        #[arg(long, default_value = "all")]
        filter: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Global means of k-stars and k-caterpillars against the band edges.
    PlotData {
        #[arg(long, value_parser = positive)]
        k: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Why a run stopped, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    Io(String),
    ChecksFailed(u64),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::ChecksFailed(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl From<ktree_core::Error> for Failure {
    fn from(e: ktree_core::Error) -> Self {
        match e {
            ktree_core::Error::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.run.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
        {
            eprintln!("ktree: cannot start {w} workers: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Gen { k, n, out } => commands::gen(&cli.run, k, n, out.as_deref()),
        Command::Family {
            family,
            k,
            n,
            s,
            m,
            out,
        } => commands::family(&family, k, n, s, m, out.as_deref()),
        Command::Stats {
            input,
            scope,
            engines,
            out,
        } => commands::stats(&cli.run, &input, &scope, &engines, out.as_deref()),
        Command::CharTree { input, clique, dot } => {
            commands::char_tree(&input, clique.as_deref(), dot.as_deref())
        }
        Command::Verify {
            k,
            n_max,
            checks,
            json,
            fail_fast,
            failures_only,
            seed,
            no_timestamp,
        } => {
            let opts = commands::VerifyOptions {
                k,
                n_max,
                checks,
                json,
                fail_fast,
                failures_only,
                seed,
                timestamp: !no_timestamp,
            };
            commands::verify(&cli.run, &opts)
        }
        Command::Extremal {
            k,
            n,
            objective,
            filter,
            top,
            csv,
        } => commands::extremal(&cli.run, k, n, &objective, &filter, top, csv.as_deref()),
        Command::PlotData { k, n_max, out } => commands::plot_data(k, n_max, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::ChecksFailed(n) => eprintln!("ktree: {n} check record(s) failed"),
                Failure::Usage(m) | Failure::Budget(m) | Failure::Io(m) => eprintln!("ktree: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

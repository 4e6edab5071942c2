//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a requested Nash set is empty, 2 on any
//! input, validation or usage failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::market::{payoff_tensor_par, profile_payoffs, MarketRule};
use crate::network::{all_pairs_shortest_paths, DistanceOracle};
use crate::report::{
    render_allocations, render_payoffs, AllocationRow, DistanceDocument, Format, PayoffRow,
    SolutionDocument,
};
use crate::scenario::{joint_profiles, load_scenario, strategy_space, Scenario};
use crate::solvers::{compromise_set, find_nash};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_EQUILIBRIUM: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_MAX_PROFILES: usize = 10_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "facloc",
    version,
    about = "Facility location games on transportation networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find Nash equilibria and/or the compromise set.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = SolverArg::Both)]
        solver: SolverArg,
    },
    /// Print shortest-path distances.
    Distances {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the payoff tensor with per-owner income breakdowns.
    Payoffs {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print where each demand point buys, for every joint profile.
    Allocate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_PROFILES)]
    pub max_profiles: usize,
    /// Which distribution sites compete for demand.
    #[arg(long, value_enum, default_value_t = MarketArg::Candidates)]
    pub market: MarketArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Nash,
    Compromise,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MarketArg {
    Candidates,
    Open,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

impl From<MarketArg> for MarketRule {
    fn from(m: MarketArg) -> Self {
        match m {
            MarketArg::Candidates => MarketRule::AllCandidates,
            MarketArg::Open => MarketRule::OpenSites,
        }
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn common(cmd: &Command) -> &CommonArgs {
    match cmd {
        Command::Solve { common, .. }
        | Command::Distances { common }
        | Command::Payoffs { common }
        | Command::Allocate { common } => common,
    }
}

fn load(args: &CommonArgs, stderr: &mut dyn Write) -> Result<(Scenario, DistanceOracle), Failure> {
    let file = File::open(&args.scenario)
        .map_err(|e| Failure(format!("cannot open {}: {e}", args.scenario.display())))?;
    let sc = load_scenario(file)?;
    if sc.network.has_capacities() {
        let _ = writeln!(
            stderr,
            "warning: edge capacities are stored but not used by any computation"
        );
    }
    let oracle = all_pairs_shortest_paths(&sc.network)?;
    Ok((sc, oracle))
}

fn guard(sc: &Scenario, limit: usize) -> Result<usize, Failure> {
    match sc.profile_count() {
        Some(n) if n <= limit => Ok(n),
        Some(n) => Err(Failure(format!(
            "{n} joint profiles exceed the limit of {limit} (see --max-profiles)"
        ))),
        None => Err(Failure(format!(
            "joint profile count overflows; limit is {limit}"
        ))),
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let args = common(cmd);
    let format = Format::from(args.format);
    let rule = MarketRule::from(args.market);
    let (sc, oracle) = load(args, stderr)?;

    let mut code = EXIT_OK;
    let text = match cmd {
        Command::Distances { .. } => DistanceDocument::new(&sc, &oracle).render(format),
        Command::Payoffs { .. } => {
            guard(&sc, args.max_profiles)?;
            let rows: Vec<PayoffRow> = joint_profiles(&sc)
                .enumerate()
                .map(|(i, p)| {
                    let (a, b) = profile_payoffs(&sc, &oracle, &p, rule);
                    PayoffRow::new(&sc, i, &p.strategies, &a, &b)
                })
                .collect();
            render_payoffs(&rows, format)
        }
        Command::Allocate { .. } => {
            guard(&sc, args.max_profiles)?;
            let rows: Vec<AllocationRow> = joint_profiles(&sc)
                .enumerate()
                .map(|(i, p)| {
                    let (a, _) = profile_payoffs(&sc, &oracle, &p, rule);
                    AllocationRow::new(&sc, i, &p.strategies, &a)
                })
                .collect();
            render_allocations(&rows, format)
        }
        Command::Solve { solver, .. } => {
            guard(&sc, args.max_profiles)?;
            let strategies = strategy_space(&sc);
            let tensor = payoff_tensor_par(&sc, &oracle, rule);
            let mut out = String::new();
            if matches!(solver, SolverArg::Nash | SolverArg::Both) {
                let nash = find_nash(&tensor);
                if nash.is_empty() {
                    code = EXIT_NO_EQUILIBRIUM;
                }
                out.push_str(&SolutionDocument::new(&sc, &strategies, &nash).render(format));
            }
            if matches!(solver, SolverArg::Compromise | SolverArg::Both) {
                let comp = compromise_set(&tensor);
                out.push_str(&SolutionDocument::new(&sc, &strategies, &comp).render(format));
            }
            out
        }
    };

    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(code)
}

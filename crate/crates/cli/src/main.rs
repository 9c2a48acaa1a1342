use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use paramgame::antichain::Sets;
use paramgame::arena::has_errors;
use paramgame::bench::{run_bench, write_csv, BenchSpec};
use paramgame::explicit::{build_from, to_dot};
use paramgame::qbf::{gen_random, parse_qdimacs, reduce_to_game};
use paramgame::symbolic::{solve_walt_in, solve_wk_with, SolveOptions};
use paramgame::{
    format_arena, gen_family, parse_arena, resolve_start, solve, Algorithm, BuildOptions, Deadline, Family,
    FixpointTrace, IntervalSet, Lattice, LatticeError, ReachGame, RunOptions, Severity, SolveError, TraceMode,
};

#[derive(Parser, Debug)]
#[command(name = "paramgame", version, about = "Solve reachability games with an unknown number of opponents")]
struct Cli {
    /// Print diagnostics and timings on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Limits {
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Maximum number of lattice elements.
    #[arg(long, default_value_t = paramgame::lattice::DEFAULT_CAP)]
    cap: usize,
}

impl Limits {
    fn deadline(&self) -> anyhow::Result<Deadline> {
        Ok(match self.timeout {
            None => Deadline::none(),
            Some(s) if s.is_finite() && s >= 0.0 => Deadline::after(Duration::from_secs_f64(s)),
            Some(s) => bail!("invalid timeout {s}"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Walt,
    Wk,
    Attractor,
    Dfs,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Walt => Algorithm::Walt,
            AlgoArg::Wk => Algorithm::Wk,
            AlgoArg::Attractor => Algorithm::Attractor,
            AlgoArg::Dfs => Algorithm::Dfs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SymbolicArg {
    Walt,
    Wk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QbfAlgoArg {
    Walt,
    Wk,
    Attractor,
    Dfs,
    Brute,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether Eve wins from a vertex; prints WIN or LOSE.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Walt)]
        algo: AlgoArg,
        /// Start vertex; defaults to the arena's `init`.
        #[arg(long)]
        from: Option<String>,
        /// Run walt over the precomputed lattice.
        #[arg(long)]
        lattice: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Print the limit of the winning-region sequence.
    Region {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SymbolicArg::Walt)]
        algo: SymbolicArg,
        /// Print every iterate, not only the limit.
        #[arg(long)]
        trace: bool,
        /// Run walt over the precomputed lattice.
        #[arg(long)]
        lattice: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Build the knowledge lattice of an arena.
    Lattice {
        file: PathBuf,
        /// Print every element with its Hasse links.
        #[arg(long)]
        dump: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Explore the reachable knowledge game.
    Kgame {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
        /// Emit Graphviz DOT instead of a summary.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Quantified Boolean formulas.
    Qbf {
        #[command(subcommand)]
        command: QbfCommand,
    },
    /// Write an instance of a synthetic family.
    Gen {
        /// One of D-NW-1, D-W-1, ND-NW, D-NW-2, D-W-2.
        family: String,
        #[arg(short)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run all solvers over the synthetic families.
    Bench {
        /// Comma-separated family names; all by default.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        /// Parameter range such as `2..8`, inclusive.
        #[arg(long, default_value = "2..8")]
        n: String,
        /// Comma-separated solvers.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgoArg::Walt, AlgoArg::Wk, AlgoArg::Attractor, AlgoArg::Dfs])]
        algos: Vec<AlgoArg>,
        /// Seconds per run.
        #[arg(long, default_value_t = 300.0)]
        timeout: f64,
        /// Write the table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
        /// Leave timing columns empty so the output is reproducible.
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(Subcommand, Debug)]
enum QbfCommand {
    /// Random formula in QDIMACS.
    Gen {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a formula; prints TRUE or FALSE.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = QbfAlgoArg::Walt)]
        algo: QbfAlgoArg,
        #[command(flatten)]
        limits: Limits,
    },
    /// Write the reachability game built from a formula.
    Reduce {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Limit(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn limit_or_input(e: SolveError) -> Failure {
    match e {
        SolveError::Timeout => Failure::Limit(anyhow!("time limit reached")),
        SolveError::Lattice(e) => Failure::Limit(e.into()),
    }
}

fn lattice_failure(e: LatticeError) -> Failure {
    limit_or_input(e.into())
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("cannot write to stdout"),
    }
}

/// Parses and validates an arena file. Errors stop the run; warnings are
/// shown only in verbose mode.
fn load_game(path: &Path, verbose: bool) -> anyhow::Result<ReachGame> {
    let text = read(path)?;
    let game = parse_arena(&text).with_context(|| format!("in {}", path.display()))?;
    let diags = game.validate();
    for d in &diags {
        if verbose || d.severity == Severity::Error {
            eprintln!("{}: {d}", path.display());
        }
    }
    if has_errors(&diags) {
        bail!("{} is not complete for enabled actions", path.display());
    }
    Ok(game)
}

fn build_lattice(game: &ReachGame, limits: &Limits) -> Result<Lattice, Failure> {
    let opts = BuildOptions {
        cap: limits.cap,
        deadline: limits.deadline()?,
    };
    Lattice::build_with(&game.arena, &opts).map_err(lattice_failure)
}

fn run(cli: &Cli) -> CliResult {
    let verbose = cli.verbose;
    match &cli.command {
        Command::Solve {
            file,
            algo,
            from,
            lattice,
            limits,
        } => {
            let game = load_game(file, verbose)?;
            let v0 = resolve_start(&game, from.as_deref()).map_err(anyhow::Error::from)?;
            let opts = RunOptions {
                deadline: limits.deadline()?,
                lattice_cap: limits.cap,
                walt_lattice: *lattice,
            };
            let report = solve(&game, v0, (*algo).into(), &opts).map_err(limit_or_input)?;
            if verbose {
                if let Some(stats) = report.lattice {
                    eprintln!("lattice: {} elements, height {}", stats.size, stats.height);
                }
                if let Some(i) = report.converged_at {
                    eprintln!("converged at iteration {i}");
                }
                eprintln!("time: {:?}", report.total_time());
            }
            println!("{}", report.verdict);
        }
        Command::Region {
            file,
            algo,
            trace,
            lattice,
            limits,
        } => {
            let game = load_game(file, verbose)?;
            let opts = SolveOptions {
                trace: if *trace { TraceMode::Full } else { TraceMode::LastTwo },
                deadline: limits.deadline()?,
            };
            let result: FixpointTrace<IntervalSet> = match (algo, lattice) {
                (SymbolicArg::Walt, false) => solve_walt_in(&Sets, &game, &opts).map_err(|e| limit_or_input(e.into()))?,
                (SymbolicArg::Walt, true) => {
                    let l = build_lattice(&game, limits)?;
                    solve_walt_in(&l, &game, &opts).map_err(|e| limit_or_input(e.into()))?.to_sets(&l)
                }
                (SymbolicArg::Wk, _) => {
                    let l = build_lattice(&game, limits)?;
                    solve_wk_with(&game, &l, &opts).map_err(|e| limit_or_input(e.into()))?.to_sets(&l)
                }
            };
            let mut out = String::new();
            if *trace {
                for (i, w) in result.iterations.iter().enumerate() {
                    out.push_str(&format!("# W{i}\n{}", w.format(&game.arena)));
                }
                out.push_str(&format!("# converged at {}\n", result.converged_at));
            } else {
                out.push_str(&result.last().format(&game.arena));
            }
            emit(None, &out)?;
        }
        Command::Lattice { file, dump, limits } => {
            let game = load_game(file, verbose)?;
            let l = build_lattice(&game, limits)?;
            if *dump {
                emit(None, &l.dump())?;
            } else {
                let stats = l.stats();
                println!("size {}", stats.size);
                println!("height {}", stats.height);
                println!("generators {}", stats.generators);
            }
        }
        Command::Kgame {
            file,
            from,
            dot,
            limits,
        } => {
            let game = load_game(file, verbose)?;
            let v0 = resolve_start(&game, from.as_deref()).map_err(anyhow::Error::from)?;
            let kg = build_from(&game, v0, IntervalSet::full(), limits.deadline()?)
                .map_err(|e| limit_or_input(e.into()))?;
            if *dot {
                emit(None, &to_dot(&kg, &game))?;
            } else {
                println!("eve {}", kg.eve_count());
                println!("adam {}", kg.adam_count());
                println!("edges {}", kg.edge_count());
            }
        }
        Command::Qbf { command } => run_qbf(command)?,
        Command::Gen { family, n, output } => {
            let family: Family = family.parse().map_err(anyhow::Error::from)?;
            let game = gen_family(family, *n).map_err(anyhow::Error::from)?;
            emit(output.as_deref(), &format_arena(&game))?;
        }
        Command::Bench {
            families,
            n,
            algos,
            timeout,
            csv,
            threads,
            no_timings,
        } => {
            let families = if families.is_empty() {
                Family::ALL.to_vec()
            } else {
                families
                    .iter()
                    .map(|f| f.parse::<Family>())
                    .collect::<Result<_, _>>()
                    .map_err(anyhow::Error::from)?
            };
            if !(timeout.is_finite() && *timeout > 0.0) {
                return Err(anyhow!("invalid timeout {timeout}").into());
            }
            let mut spec = BenchSpec {
                families,
                sizes: parse_range(n)?,
                algorithms: algos.iter().map(|&a| a.into()).collect(),
                timeout: Duration::from_secs_f64(*timeout),
                ..BenchSpec::default()
            };
            if let Some(t) = threads {
                spec.threads = *t;
            }
            let records = run_bench(&spec);
            let mut buf = Vec::new();
            write_csv(&records, &mut buf, !no_timings).context("cannot format CSV")?;
            emit(csv.as_deref(), &String::from_utf8(buf).expect("CSV output is UTF-8"))?;
        }
    }
    Ok(())
}

fn run_qbf(command: &QbfCommand) -> CliResult {
    match command {
        QbfCommand::Gen {
            vars,
            clauses,
            width,
            seed,
            output,
        } => {
            let f = gen_random(*vars, *clauses, *width, *seed).map_err(anyhow::Error::from)?;
            emit(output.as_deref(), &f.to_qdimacs())?;
        }
        QbfCommand::Solve { file, algo, limits } => {
            let text = read(file)?;
            let f = parse_qdimacs(&text).with_context(|| format!("in {}", file.display()))?;
            let truth = match algo {
                QbfAlgoArg::Brute => f.brute_eval().map_err(anyhow::Error::from)?,
                other => {
                    let algo = match other {
                        QbfAlgoArg::Walt => Algorithm::Walt,
                        QbfAlgoArg::Wk => Algorithm::Wk,
                        QbfAlgoArg::Attractor => Algorithm::Attractor,
                        _ => Algorithm::Dfs,
                    };
                    let game = reduce_to_game(&f);
                    let v0 = game.initial.expect("the reduction sets an initial vertex");
                    let opts = RunOptions {
                        deadline: limits.deadline()?,
                        lattice_cap: limits.cap,
                        walt_lattice: false,
                    };
                    solve(&game, v0, algo, &opts).map_err(limit_or_input)?.verdict.is_win()
                }
            };
            println!("{}", if truth { "TRUE" } else { "FALSE" });
        }
        QbfCommand::Reduce { file, output } => {
            let text = read(file)?;
            let f = parse_qdimacs(&text).with_context(|| format!("in {}", file.display()))?;
            emit(output.as_deref(), &format_arena(&reduce_to_game(&f)))?;
        }
    }
    Ok(())
}

/// `a..b` (inclusive), `a..=b` or a single value.
fn parse_range(text: &str) -> anyhow::Result<Vec<usize>> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .with_context(|| format!("bad number `{s}` in range `{text}`"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(text)?;
            (n, n)
        }
    };
    if lo < 2 || lo > hi {
        bail!("range `{text}` must be nonempty with values at least 2");
    }
    Ok((lo..=hi).collect())
}

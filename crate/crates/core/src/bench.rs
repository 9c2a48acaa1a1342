//! Benchmark sweeps over the synthetic families.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::families::{gen_family, Family};
use crate::limits::Deadline;
use crate::solve::{solve, Algorithm, RunOptions, SolveError};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchSpec {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    /// Wall-clock budget per run, lattice construction included.
    pub timeout: Duration,
    pub threads: usize,
    pub lattice_cap: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            families: Family::ALL.to_vec(),
            sizes: (2..=8).collect(),
            algorithms: Algorithm::ALL.to_vec(),
            timeout: Duration::from_secs(60),
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            lattice_cap: crate::lattice::DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved(Verdict),
    Timeout,
    CapExceeded,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Solved(Verdict::Win) => "WIN",
            Outcome::Solved(Verdict::Lose) => "LOSE",
            Outcome::Timeout => "TIMEOUT",
            Outcome::CapExceeded => "CAP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub family: Family,
    pub n: usize,
    pub algorithm: Algorithm,
    pub vertices: usize,
    pub outcome: Outcome,
    pub lattice_size: Option<usize>,
    pub lattice_time: Option<Duration>,
    pub solve_time: Option<Duration>,
    pub total_time: Duration,
    /// Fixpoint index reached by the symbolic solvers.
    pub iterations: Option<usize>,
}

/// Runs one configuration. `walt` and `wk` are lattice-backed here so that
/// their solve times are comparable.
pub fn run_one(family: Family, n: usize, algorithm: Algorithm, timeout: Duration, lattice_cap: usize) -> BenchRecord {
    let game = gen_family(family, n).expect("bench sizes are at least 2");
    let v0 = game.initial.expect("families declare an initial vertex");
    let opts = RunOptions {
        deadline: Deadline::after(timeout),
        lattice_cap,
        walt_lattice: true,
    };
    let started = Instant::now();
    let result = solve(&game, v0, algorithm, &opts);
    let total_time = started.elapsed();
    let mut record = BenchRecord {
        family,
        n,
        algorithm,
        vertices: game.arena.vertex_count(),
        outcome: Outcome::Timeout,
        lattice_size: None,
        lattice_time: None,
        solve_time: None,
        total_time,
        iterations: None,
    };
    match result {
        Ok(report) => {
            record.outcome = Outcome::Solved(report.verdict);
            record.lattice_size = report.lattice.map(|s| s.size);
            record.lattice_time = report.lattice_time;
            record.solve_time = Some(report.solve_time);
            record.iterations = report.converged_at;
        }
        Err(SolveError::Timeout) => {}
        Err(SolveError::Lattice(_)) => record.outcome = Outcome::CapExceeded,
    }
    record
}

/// Every family × size × algorithm, in that nesting order, run on a pool
/// of worker threads. The result order does not depend on scheduling.
pub fn run_bench(spec: &BenchSpec) -> Vec<BenchRecord> {
    let jobs: Vec<(Family, usize, Algorithm)> = spec
        .families
        .iter()
        .flat_map(|&f| {
            spec.sizes
                .iter()
                .flat_map(move |&n| spec.algorithms.iter().map(move |&a| (f, n, a)))
        })
        .collect();
    let next = AtomicUsize::new(0);
    let slots = Mutex::new(vec![None; jobs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..spec.threads.clamp(1, jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(f, n, a)) = jobs.get(i) else { break };
                let record = run_one(f, n, a, spec.timeout, spec.lattice_cap);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(record);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

pub const CSV_HEADER: [&str; 11] = [
    "family",
    "n",
    "vertices",
    "algorithm",
    "label",
    "outcome",
    "lattice_size",
    "lattice_ms",
    "solve_ms",
    "total_ms",
    "iterations",
];

fn millis(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

/// Long-format CSV, one row per record. With `timings` off every duration
/// column is left empty, which makes the output reproducible.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W, timings: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let time = |d: Option<Duration>| match d {
        Some(d) if timings => millis(d),
        _ => String::new(),
    };
    for r in records {
        w.write_record([
            r.family.name().to_string(),
            r.n.to_string(),
            r.vertices.to_string(),
            r.algorithm.name().to_string(),
            r.algorithm.label().to_string(),
            r.outcome.as_str().to_string(),
            r.lattice_size.map(|s| s.to_string()).unwrap_or_default(),
            time(r.lattice_time),
            time(r.solve_time),
            time(Some(r.total_time)),
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

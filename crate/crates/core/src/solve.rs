//! One entry point over all four solvers.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::arena::{ReachGame, VertexId};
use crate::explicit::{attractor_solve, build_from, dfs_solve_with};
use crate::intervalset::IntervalSet;
use crate::lattice::{BuildOptions, Lattice, LatticeError, LatticeStats, DEFAULT_CAP};
use crate::limits::{Deadline, Interrupted};
use crate::symbolic::{solve_walt_in, solve_wk_with, verdict, SolveOptions, TraceMode};
use crate::antichain::Sets;
use crate::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Direct construction of knowledge predecessors.
    Walt,
    /// Knowledge predecessors over the precomputed lattice.
    Wk,
    /// Attractor on the explicit knowledge game.
    Attractor,
    /// Sub-game decomposition.
    Dfs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Walt, Algorithm::Wk, Algorithm::Attractor, Algorithm::Dfs];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Walt => "walt",
            Algorithm::Wk => "wk",
            Algorithm::Attractor => "attractor",
            Algorithm::Dfs => "dfs",
        }
    }

    /// Column label used in benchmark tables.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Walt => "Alt",
            Algorithm::Wk => "Fin",
            Algorithm::Attractor => "Attractor",
            Algorithm::Dfs => "Explicit",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm `{0}` (expected walt, wk, attractor or dfs)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub deadline: Deadline,
    pub lattice_cap: usize,
    /// Run `walt` over the precomputed lattice instead of raw sets.
    pub walt_lattice: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            deadline: Deadline::none(),
            lattice_cap: DEFAULT_CAP,
            walt_lattice: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub verdict: Verdict,
    /// Present when the run built the lattice.
    pub lattice: Option<LatticeStats>,
    pub lattice_time: Option<Duration>,
    /// Time spent after the lattice was available.
    pub solve_time: Duration,
    /// Fixpoint index for the symbolic solvers.
    pub converged_at: Option<usize>,
}

impl SolveReport {
    pub fn total_time(&self) -> Duration {
        self.lattice_time.unwrap_or_default() + self.solve_time
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("time limit reached")]
    Timeout,
    #[error(transparent)]
    Lattice(LatticeError),
}

impl From<Interrupted> for SolveError {
    fn from(_: Interrupted) -> Self {
        SolveError::Timeout
    }
}

impl From<LatticeError> for SolveError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Interrupted(_) => SolveError::Timeout,
            other => SolveError::Lattice(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StartError {
    #[error("no start vertex given and the arena has no `init` line")]
    Missing,
    #[error("unknown start vertex `{0}`")]
    Unknown(String),
}

/// The named vertex, or the arena's declared initial vertex.
pub fn resolve_start(game: &ReachGame, name: Option<&str>) -> Result<VertexId, StartError> {
    match name {
        Some(n) => game.arena.vertex_id(n).map_err(|_| StartError::Unknown(n.to_string())),
        None => game.initial.ok_or(StartError::Missing),
    }
}

/// Decides whether Eve wins from `(v0, ℕ)`.
pub fn solve(game: &ReachGame, v0: VertexId, algo: Algorithm, opts: &RunOptions) -> Result<SolveReport, SolveError> {
    let needs_lattice = algo == Algorithm::Wk || (algo == Algorithm::Walt && opts.walt_lattice);
    let (lattice, lattice_time) = if needs_lattice {
        let t = Instant::now();
        let build = BuildOptions {
            cap: opts.lattice_cap,
            deadline: opts.deadline,
        };
        let l = Lattice::build_with(&game.arena, &build)?;
        (Some(l), Some(t.elapsed()))
    } else {
        (None, None)
    };
    let sym = SolveOptions {
        trace: TraceMode::LastTwo,
        deadline: opts.deadline,
    };
    let started = Instant::now();
    let (verdict_, converged_at) = match (algo, &lattice) {
        (Algorithm::Wk, Some(l)) => {
            let trace = solve_wk_with(game, l, &sym)?;
            (verdict(l, v0, &trace), Some(trace.converged_at))
        }
        (Algorithm::Walt, Some(l)) => {
            let trace = solve_walt_in(l, game, &sym)?;
            (verdict(l, v0, &trace), Some(trace.converged_at))
        }
        (Algorithm::Walt, None) => {
            let trace = solve_walt_in(&Sets, game, &sym)?;
            (verdict(&Sets, v0, &trace), Some(trace.converged_at))
        }
        (Algorithm::Attractor, _) => {
            let kg = build_from(game, v0, IntervalSet::full(), opts.deadline)?;
            opts.deadline.check()?;
            (attractor_solve(&kg, v0, &IntervalSet::full()), None)
        }
        (Algorithm::Dfs, _) => (dfs_solve_with(game, v0, opts.deadline)?.0, None),
        (Algorithm::Wk, None) => unreachable!("wk always builds the lattice"),
    };
    Ok(SolveReport {
        verdict: verdict_,
        lattice: lattice.as_ref().map(Lattice::stats),
        lattice_time,
        solve_time: started.elapsed(),
        converged_at,
    })
}

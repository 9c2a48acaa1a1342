//! Reachability games whose edges are guarded by an unknown positive
//! integer parameter.
//!
//! Eve does not know the parameter; she only learns which moves were
//! possible. Solvers work on pairs `(v, K)` where `K` is the set of
//! parameter values still consistent with the play.

use std::fmt;

pub mod antichain;
pub mod arena;
pub mod bench;
pub mod explicit;
pub mod families;
pub mod fixtures;
pub mod intervalset;
pub mod lattice;
pub mod limits;
pub mod qbf;
pub mod solve;
pub mod symbolic;

pub use antichain::{KnowledgeAntichain, KnowledgeDomain, Sets};
pub use arena::{
    format_arena, parse_arena, ActionId, ArenaError, ArenaParseError, Diagnostic, ParamArena, ReachGame, Severity,
    VertexId,
};
pub use families::{gen_family, Family};
pub use intervalset::{IntervalParseError, IntervalSet};
pub use lattice::{BuildOptions, Lattice, LatticeError, LatticeId, LatticeStats};
pub use limits::{Deadline, Interrupted};
pub use qbf::{QbfError, QbfFormula};
pub use solve::{resolve_start, solve, Algorithm, RunOptions, SolveError, SolveReport};
pub use symbolic::{FixpointTrace, TraceMode};

/// Outcome of a game from a given start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Win,
    Lose,
}

impl Verdict {
    pub fn from_win(win: bool) -> Self {
        if win {
            Verdict::Win
        } else {
            Verdict::Lose
        }
    }

    pub fn is_win(self) -> bool {
        self == Verdict::Win
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Win => "WIN",
            Verdict::Lose => "LOSE",
        })
    }
}

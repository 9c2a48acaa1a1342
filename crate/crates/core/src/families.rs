//! Scalable benchmark arenas and a random arena generator.
//!
//! | family | shape |
//! |--------|-------|
//! | `D-NW-1` | `v -a_i-> x_i`, `x_i -b,=i-> y_i`, `x_i -b,≠i-> v`, `y_i -b-> t` |
//! | `D-W-1`  | `D-NW-1` plus `v -c,≤n-> s` and `v -c,>n-> t` |
//! | `ND-NW`  | `D-W-1` with every `a_i` merged into one action `a` |
//! | `D-NW-2` | `v -a,>n-> t`, `v -a,≤n-> s`, `v -b_i-> x_i`, `x_i -a,<i-> v`, `x_i -a,=i-> t`, `x_i -a,>i-> s_i` |
//! | `D-W-2`  | `D-NW-2` with `v -a,≤n-> v` instead of the edge to `s` |
//!
//! Sinks carry a self-loop so that every non-target vertex has a move.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::arena::{ParamArena, ReachGame, VertexId};
use crate::intervalset::IntervalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    DNw1,
    DW1,
    NdNw,
    DNw2,
    DW2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected one of D-NW-1, D-W-1, ND-NW, D-NW-2, D-W-2)")]
    Unknown(String),
    #[error("family parameter must be at least 2, got {0}")]
    TooSmall(usize),
}

impl Family {
    pub const ALL: [Family; 5] = [Family::DNw1, Family::DW1, Family::NdNw, Family::DNw2, Family::DW2];

    pub fn name(self) -> &'static str {
        match self {
            Family::DNw1 => "D-NW-1",
            Family::DW1 => "D-W-1",
            Family::NdNw => "ND-NW",
            Family::DNw2 => "D-NW-2",
            Family::DW2 => "D-W-2",
        }
    }

    /// Whether the family is meant to be winning for Eve from `v`.
    pub fn eve_wins(self) -> bool {
        matches!(self, Family::DW1 | Family::DW2)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| FamilyError::Unknown(s.to_string()))
    }
}

/// Instance of `family` with parameter `n`; the initial vertex is `v`.
pub fn gen_family(family: Family, n: usize) -> Result<ReachGame, FamilyError> {
    if n < 2 {
        return Err(FamilyError::TooSmall(n));
    }
    Ok(match family {
        Family::DNw1 | Family::DW1 | Family::NdNw => first_kind(family, n),
        Family::DNw2 | Family::DW2 => second_kind(family == Family::DW2, n),
    })
}

fn vertices(arena: &mut ParamArena, names: impl IntoIterator<Item = String>) -> Vec<VertexId> {
    names
        .into_iter()
        .map(|name| arena.add_vertex(&name).expect("generated names are distinct"))
        .collect()
}

fn first_kind(family: Family, n: usize) -> ReachGame {
    let mut arena = ParamArena::new();
    let all = IntervalSet::full();
    let v = vertices(&mut arena, ["v".to_string()])[0];
    let xs = vertices(&mut arena, (1..=n).map(|i| format!("x{i}")));
    let ys = vertices(&mut arena, (1..=n).map(|i| format!("y{i}")));
    let with_escape = family != Family::DNw1;
    let sink = with_escape.then(|| vertices(&mut arena, ["s".to_string()])[0]);
    let t = vertices(&mut arena, ["t".to_string()])[0];

    let moves: Vec<_> = if family == Family::NdNw {
        vec![arena.add_action("a").unwrap(); n]
    } else {
        (1..=n).map(|i| arena.add_action(&format!("a{i}")).unwrap()).collect()
    };
    let b = arena.add_action("b").unwrap();

    for i in 0..n {
        let k = i as u64 + 1;
        arena.add_edge(v, moves[i], xs[i], &all);
        arena.add_edge(xs[i], b, ys[i], &IntervalSet::singleton(k));
        arena.add_edge(xs[i], b, v, &IntervalSet::singleton(k).complement());
        arena.add_edge(ys[i], b, t, &all);
    }
    if let Some(s) = sink {
        let c = arena.add_action("c").unwrap();
        arena.add_edge(v, c, s, &IntervalSet::range(1, n as u64));
        arena.add_edge(v, c, t, &IntervalSet::greater_than(n as u64));
        arena.add_edge(s, b, s, &all);
    }
    ReachGame::new(arena, t).with_initial(v)
}

fn second_kind(winning: bool, n: usize) -> ReachGame {
    let mut arena = ParamArena::new();
    let all = IntervalSet::full();
    let n64 = n as u64;
    let v = vertices(&mut arena, ["v".to_string()])[0];
    let xs = vertices(&mut arena, (1..=n).map(|i| format!("x{i}")));
    let sinks = vertices(&mut arena, (1..=n).map(|i| format!("s{i}")));
    let s = vertices(&mut arena, ["s".to_string()])[0];
    let t = vertices(&mut arena, ["t".to_string()])[0];

    let a = arena.add_action("a").unwrap();
    let picks: Vec<_> = (1..=n).map(|i| arena.add_action(&format!("b{i}")).unwrap()).collect();

    arena.add_edge(v, a, t, &IntervalSet::greater_than(n64));
    let low = IntervalSet::range(1, n64);
    arena.add_edge(v, a, if winning { v } else { s }, &low);
    for i in 0..n {
        let k = i as u64 + 1;
        arena.add_edge(v, picks[i], xs[i], &all);
        arena.add_edge(xs[i], a, v, &IntervalSet::less_than(k));
        arena.add_edge(xs[i], a, t, &IntervalSet::singleton(k));
        arena.add_edge(xs[i], a, sinks[i], &IntervalSet::greater_than(k));
        arena.add_edge(sinks[i], a, sinks[i], &all);
    }
    arena.add_edge(s, a, s, &all);
    ReachGame::new(arena, t).with_initial(v)
}

/// Bounds for [`random_arena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomArenaParams {
    pub max_vertices: usize,
    pub max_actions: usize,
    /// Largest finite interval endpoint.
    pub max_endpoint: u64,
}

impl Default for RandomArenaParams {
    fn default() -> Self {
        RandomArenaParams {
            max_vertices: 6,
            max_actions: 3,
            max_endpoint: 8,
        }
    }
}

fn random_set<R: Rng>(rng: &mut R, max_endpoint: u64) -> IntervalSet {
    if rng.gen_bool(0.15) {
        return IntervalSet::full();
    }
    let pieces = rng.gen_range(1..=2);
    IntervalSet::from_intervals((0..pieces).map(|_| {
        let lo = rng.gen_range(1..=max_endpoint);
        if rng.gen_bool(0.25) {
            (lo, None)
        } else {
            (lo, Some(rng.gen_range(lo..=max_endpoint)))
        }
    }))
}

/// A random arena that is complete for enabled actions. Vertices are
/// `q0..`, the target is the last one and the initial vertex is `q0`.
/// Some vertices may be dead ends.
pub fn random_arena<R: Rng>(rng: &mut R, params: &RandomArenaParams) -> ReachGame {
    let mut arena = ParamArena::new();
    let nv = rng.gen_range(2..=params.max_vertices.max(2));
    let na = rng.gen_range(1..=params.max_actions.max(1));
    let vs = vertices(&mut arena, (0..nv).map(|i| format!("q{i}")));
    let acts: Vec<_> = (0..na).map(|i| arena.add_action(&format!("m{i}")).unwrap()).collect();
    let target = vs[nv - 1];

    for &v in &vs {
        for &a in &acts {
            let enable = if v == target { 0.2 } else { 0.75 };
            if !rng.gen_bool(enable) {
                continue;
            }
            let fanout = rng.gen_range(1..=nv.min(3));
            let mut covered = IntervalSet::empty();
            let mut chosen = Vec::new();
            for _ in 0..fanout {
                let w = vs[rng.gen_range(0..nv)];
                let set = random_set(rng, params.max_endpoint);
                covered = covered.union(&set);
                arena.add_edge(v, a, w, &set);
                chosen.push(w);
            }
            let rest = covered.complement();
            if !rest.is_empty() {
                let w = chosen[rng.gen_range(0..chosen.len())];
                arena.add_edge(v, a, w, &rest);
            }
        }
    }
    ReachGame::new(arena, target).with_initial(vs[0])
}

//! Parameterized arenas, reachability games on them, and the text format.
//!
//! An edge `v --a--> w` carries the set of opponent counts under which
//! playing `a` at `v` may lead to `w`. Absent edges carry the empty set.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use indexmap::IndexMap;
use thiserror::Error;

use crate::intervalset::{IntervalParseError, IntervalSet};

pub type VertexId = usize;
pub type ActionId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate action `{0}`")]
    DuplicateAction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ArenaParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`{directive}` expects {expected}")]
    Arity {
        directive: &'static str,
        expected: &'static str,
    },
    #[error("{0}")]
    Arena(#[from] ArenaError),
    #[error("bad constraint: {0}")]
    Constraint(#[from] IntervalParseError),
    #[error("directive `{0}` given twice")]
    Repeated(&'static str),
    #[error("missing `target` line")]
    MissingTarget,
}

/// Vertices, actions and the transition constraints of a parameterized arena.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamArena {
    vertices: Vec<String>,
    actions: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    action_index: HashMap<String, ActionId>,
    // Insertion order is kept so that formatting round-trips.
    edges: IndexMap<(VertexId, ActionId, VertexId), IntervalSet>,
    // Per vertex, per action: successors sorted by id with their constraint.
    adjacency: Vec<BTreeMap<ActionId, Vec<(VertexId, IntervalSet)>>>,
}

impl ParamArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, ArenaError> {
        if self.vertex_index.contains_key(name) {
            return Err(ArenaError::DuplicateVertex(name.to_string()));
        }
        let id = self.vertices.len();
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        self.adjacency.push(BTreeMap::new());
        Ok(id)
    }

    pub fn add_action(&mut self, name: &str) -> Result<ActionId, ArenaError> {
        if self.action_index.contains_key(name) {
            return Err(ArenaError::DuplicateAction(name.to_string()));
        }
        let id = self.actions.len();
        self.actions.push(name.to_string());
        self.action_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Adds `counts` to the constraint of `from --action--> to`. Repeated
    /// edges accumulate by union; an empty set adds nothing.
    pub fn add_edge(&mut self, from: VertexId, action: ActionId, to: VertexId, counts: &IntervalSet) {
        assert!(from < self.vertices.len() && to < self.vertices.len(), "vertex out of range");
        assert!(action < self.actions.len(), "action out of range");
        if counts.is_empty() {
            return;
        }
        let merged = match self.edges.get(&(from, action, to)) {
            Some(old) => old.union(counts),
            None => counts.clone(),
        };
        self.edges.insert((from, action, to), merged.clone());
        let succ = self.adjacency[from].entry(action).or_default();
        match succ.binary_search_by_key(&to, |&(w, _)| w) {
            Ok(pos) => succ[pos].1 = merged,
            Err(pos) => succ.insert(pos, (to, merged)),
        }
    }

    /// Name-based variant of [`ParamArena::add_edge`].
    pub fn add_edge_named(
        &mut self,
        from: &str,
        action: &str,
        to: &str,
        counts: &IntervalSet,
    ) -> Result<(), ArenaError> {
        let (v, a, w) = (self.vertex_id(from)?, self.action_id(action)?, self.vertex_id(to)?);
        self.add_edge(v, a, w, counts);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn action_names(&self) -> &[String] {
        &self.actions
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, ArenaError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| ArenaError::UnknownVertex(name.to_string()))
    }

    pub fn action_id(&self, name: &str) -> Result<ActionId, ArenaError> {
        self.action_index
            .get(name)
            .copied()
            .ok_or_else(|| ArenaError::UnknownAction(name.to_string()))
    }

    /// The counts under which `a` at `v` may lead to `w`.
    pub fn nabla(&self, v: VertexId, a: ActionId, w: VertexId) -> IntervalSet {
        self.edges.get(&(v, a, w)).cloned().unwrap_or_default()
    }

    pub fn nabla_named(&self, v: &str, a: &str, w: &str) -> Result<IntervalSet, ArenaError> {
        Ok(self.nabla(self.vertex_id(v)?, self.action_id(a)?, self.vertex_id(w)?))
    }

    /// Actions enabled at `v`, in declaration order.
    pub fn enabled(&self, v: VertexId) -> Vec<ActionId> {
        self.adjacency[v].keys().copied().collect()
    }

    /// Vertices reachable from `v` under `a` for some count, in declaration order.
    pub fn successors(&self, v: VertexId, a: ActionId) -> Vec<VertexId> {
        self.out_edges(v, a).iter().map(|&(w, _)| w).collect()
    }

    /// Successors of `(v, a)` together with their constraints.
    pub fn out_edges(&self, v: VertexId, a: ActionId) -> &[(VertexId, IntervalSet)] {
        self.adjacency[v].get(&a).map_or(&[], Vec::as_slice)
    }

    /// All stored edges in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, ActionId, VertexId, &IntervalSet)> + '_ {
        self.edges.iter().map(|(&(v, a, w), set)| (v, a, w, set))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Distinct constraint sets appearing on edges.
    pub fn distinct_constraints(&self) -> Vec<IntervalSet> {
        let mut sets: Vec<IntervalSet> = self.edges.values().cloned().collect();
        sets.sort();
        sets.dedup();
        sets
    }

    /// Counts that reach exactly the vertices of `targets` under `a` at `v`:
    /// the intersection of their constraints minus the constraints of every
    /// other vertex.
    pub fn nabla_subset(&self, v: VertexId, a: ActionId, targets: &[VertexId]) -> IntervalSet {
        let mut inside = IntervalSet::full();
        for &w in targets {
            inside = inside.intersect(&self.nabla(v, a, w));
            if inside.is_empty() {
                return inside;
            }
        }
        for &(w, ref set) in self.out_edges(v, a) {
            if !targets.contains(&w) {
                inside = inside.difference(set);
            }
        }
        inside
    }

    /// The nonempty blocks `nabla_subset(v, a, V')` for nonempty
    /// `V' ⊆ successors(v, a)`, computed by successive refinement. The
    /// member lists are sorted by vertex id.
    pub fn partition(&self, v: VertexId, a: ActionId) -> Vec<(Vec<VertexId>, IntervalSet)> {
        let mut blocks: Vec<(Vec<VertexId>, IntervalSet)> = vec![(Vec::new(), IntervalSet::full())];
        for &(w, ref set) in self.out_edges(v, a) {
            let mut next = Vec::with_capacity(blocks.len() * 2);
            for (members, block) in blocks {
                let hit = block.intersect(set);
                let miss = block.difference(set);
                if !hit.is_empty() {
                    let mut with = members.clone();
                    with.push(w);
                    next.push((with, hit));
                }
                if !miss.is_empty() {
                    next.push((members, miss));
                }
            }
            blocks = next;
        }
        blocks.retain(|(members, _)| !members.is_empty());
        blocks.sort_by(|x, y| x.0.cmp(&y.0));
        blocks
    }

    /// Counts for which `a` at `v` has no successor at all.
    pub fn uncovered(&self, v: VertexId, a: ActionId) -> IntervalSet {
        self.out_edges(v, a)
            .iter()
            .fold(IntervalSet::full(), |rest, (_, set)| rest.difference(set))
    }
}

/// A parameterized arena with a target vertex and an optional initial vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachGame {
    pub arena: ParamArena,
    pub target: VertexId,
    pub initial: Option<VertexId>,
}

impl ReachGame {
    pub fn new(arena: ParamArena, target: VertexId) -> Self {
        assert!(target < arena.vertex_count(), "target out of range");
        ReachGame {
            arena,
            target,
            initial: None,
        }
    }

    pub fn with_initial(mut self, v: VertexId) -> Self {
        assert!(v < self.arena.vertex_count(), "initial vertex out of range");
        self.initial = Some(v);
        self
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Checks completeness for enabled actions and flags dead ends. Nothing is
/// repaired.
pub fn validate(game: &ReachGame) -> Vec<Diagnostic> {
    let arena = &game.arena;
    let mut out = Vec::new();
    for v in 0..arena.vertex_count() {
        let enabled = arena.enabled(v);
        if enabled.is_empty() && v != game.target {
            out.push(Diagnostic {
                severity: Severity::Warning,
                message: format!(
                    "vertex `{}` has no enabled action and is losing for Eve",
                    arena.vertex_name(v)
                ),
            });
        }
        for a in enabled {
            let missing = arena.uncovered(v, a);
            if !missing.is_empty() {
                out.push(Diagnostic {
                    severity: Severity::Error,
                    message: format!(
                        "action `{}` at `{}` is incomplete: no successor for counts {{{}}}",
                        arena.action_name(a),
                        arena.vertex_name(v),
                        missing
                    ),
                });
                continue;
            }
            let blocks = arena.partition(v, a);
            for sample in partition_samples(arena, v, a) {
                let rebuilt = blocks
                    .iter()
                    .fold(IntervalSet::empty(), |acc, (_, b)| acc.union(&sample.intersect(b)));
                if rebuilt != sample {
                    out.push(Diagnostic {
                        severity: Severity::Error,
                        message: format!(
                            "action `{}` at `{}`: successor blocks do not recompose {{{}}}",
                            arena.action_name(a),
                            arena.vertex_name(v),
                            sample
                        ),
                    });
                }
            }
        }
    }
    out
}

fn partition_samples(arena: &ParamArena, v: VertexId, a: ActionId) -> Vec<IntervalSet> {
    let mut samples = vec![IntervalSet::full(), IntervalSet::range(1, 3), IntervalSet::at_least(5)];
    for (_, set) in arena.out_edges(v, a) {
        samples.push(set.clone());
        samples.push(set.complement());
    }
    samples
}

/// Parses the line-oriented arena format.
///
/// ```text
/// vertices v x t
/// actions a
/// target t
/// init v
/// edge v a x 1-2
/// edge v a t 3-*
/// edge x a x *
/// ```
pub fn parse_arena(text: &str) -> Result<ReachGame, ArenaParseError> {
    let mut arena = ParamArena::new();
    let mut target: Option<(usize, String)> = None;
    let mut initial: Option<(usize, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |kind: ParseErrorKind| ArenaParseError { line, kind };
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = content.split_whitespace();
        let Some(directive) = tokens.next() else {
            continue;
        };
        match directive {
            "vertices" => {
                for name in tokens {
                    arena.add_vertex(name).map_err(|e| err(e.into()))?;
                }
            }
            "actions" => {
                for name in tokens {
                    arena.add_action(name).map_err(|e| err(e.into()))?;
                }
            }
            "target" | "init" => {
                let (Some(name), None) = (tokens.next(), tokens.next()) else {
                    let directive = if directive == "target" { "target" } else { "init" };
                    return Err(err(ParseErrorKind::Arity {
                        directive,
                        expected: "one vertex name",
                    }));
                };
                let slot = if directive == "target" { &mut target } else { &mut initial };
                if slot.is_some() {
                    let directive = if directive == "target" { "target" } else { "init" };
                    return Err(err(ParseErrorKind::Repeated(directive)));
                }
                *slot = Some((line, name.to_string()));
            }
            "edge" => {
                let parts: Vec<&str> = tokens.collect();
                if parts.len() < 4 {
                    return Err(err(ParseErrorKind::Arity {
                        directive: "edge",
                        expected: "a source, an action, a destination and a count set",
                    }));
                }
                let counts: IntervalSet = parts[3..].join("").parse().map_err(|e: IntervalParseError| err(e.into()))?;
                arena
                    .add_edge_named(parts[0], parts[1], parts[2], &counts)
                    .map_err(|e| err(e.into()))?;
            }
            other => return Err(err(ParseErrorKind::UnknownDirective(other.to_string()))),
        }
    }

    let resolve = |(line, name): (usize, String)| {
        arena
            .vertex_id(&name)
            .map_err(|e| ArenaParseError { line, kind: e.into() })
    };
    let Some(target) = target else {
        return Err(ArenaParseError {
            line: text.lines().count(),
            kind: ParseErrorKind::MissingTarget,
        });
    };
    let target = resolve(target)?;
    let initial = initial.map(resolve).transpose()?;
    Ok(ReachGame {
        arena,
        target,
        initial,
    })
}

/// Writes a game in the format read by [`parse_arena`].
pub fn format_arena(game: &ReachGame) -> String {
    let arena = &game.arena;
    let mut out = String::new();
    let _ = writeln!(out, "vertices {}", arena.vertices.join(" "));
    let _ = writeln!(out, "actions {}", arena.actions.join(" "));
    let _ = writeln!(out, "target {}", arena.vertex_name(game.target));
    if let Some(v) = game.initial {
        let _ = writeln!(out, "init {}", arena.vertex_name(v));
    }
    for (v, a, w, set) in arena.edges() {
        let _ = writeln!(
            out,
            "edge {} {} {} {}",
            arena.vertex_name(v),
            arena.action_name(a),
            arena.vertex_name(w),
            set
        );
    }
    out
}

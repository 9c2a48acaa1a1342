//! Explicit knowledge games and the two baseline solvers.
//!
//! The knowledge game has Eve nodes `(v, K)` and Adam nodes `(v, K, a)`.
//! From `(v, K)` Eve picks an enabled action; from `(v, K, a)` Adam moves to
//! any `(w, K ∩ ∇(v,a,w))` with a nonempty intersection. Target nodes are
//! `(t, K)`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::arena::{ActionId, ReachGame, VertexId};
use crate::intervalset::IntervalSet;
use crate::limits::{Deadline, Interrupted};
use crate::Verdict;

pub type EveNode = usize;
pub type AdamNode = usize;

/// The part of a knowledge game reachable from one Eve node.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGame {
    eve: Vec<(VertexId, IntervalSet)>,
    adam: Vec<(EveNode, ActionId)>,
    eve_succ: Vec<Vec<AdamNode>>,
    adam_succ: Vec<Vec<EveNode>>,
    index: HashMap<(VertexId, IntervalSet), EveNode>,
    target: VertexId,
}

impl KnowledgeGame {
    pub fn eve_count(&self) -> usize {
        self.eve.len()
    }

    pub fn adam_count(&self) -> usize {
        self.adam.len()
    }

    pub fn edge_count(&self) -> usize {
        self.eve_succ.iter().map(Vec::len).sum::<usize>() + self.adam_succ.iter().map(Vec::len).sum::<usize>()
    }

    pub fn eve_node(&self, e: EveNode) -> (VertexId, &IntervalSet) {
        let (v, ref k) = self.eve[e];
        (v, k)
    }

    pub fn adam_node(&self, a: AdamNode) -> (EveNode, ActionId) {
        self.adam[a]
    }

    pub fn find(&self, v: VertexId, k: &IntervalSet) -> Option<EveNode> {
        self.index.get(&(v, k.clone())).copied()
    }

    pub fn eve_successors(&self, e: EveNode) -> &[AdamNode] {
        &self.eve_succ[e]
    }

    pub fn adam_successors(&self, a: AdamNode) -> &[EveNode] {
        &self.adam_succ[a]
    }

    pub fn is_target(&self, e: EveNode) -> bool {
        self.eve[e].0 == self.target
    }
}

/// Reachable knowledge game from `(v0, ℕ)`.
pub fn build_reachable(game: &ReachGame, v0: VertexId) -> KnowledgeGame {
    build_from(game, v0, IntervalSet::full(), Deadline::none()).expect("no deadline set")
}

/// Reachable knowledge game from `(v0, k0)`. Target nodes are not expanded.
pub fn build_from(
    game: &ReachGame,
    v0: VertexId,
    k0: IntervalSet,
    deadline: Deadline,
) -> Result<KnowledgeGame, Interrupted> {
    assert!(!k0.is_empty(), "knowledge games start from a nonempty set");
    let arena = &game.arena;
    let mut kg = KnowledgeGame {
        target: game.target,
        ..Default::default()
    };
    let mut queue = VecDeque::new();
    let intern = |kg: &mut KnowledgeGame, queue: &mut VecDeque<EveNode>, v: VertexId, k: IntervalSet| {
        if let Some(&e) = kg.index.get(&(v, k.clone())) {
            return e;
        }
        let e = kg.eve.len();
        kg.index.insert((v, k.clone()), e);
        kg.eve.push((v, k));
        kg.eve_succ.push(Vec::new());
        queue.push_back(e);
        e
    };
    intern(&mut kg, &mut queue, v0, k0);

    while let Some(e) = queue.pop_front() {
        if kg.eve.len().is_multiple_of(1024) {
            deadline.check()?;
        }
        let (v, k) = kg.eve[e].clone();
        if v == game.target {
            continue;
        }
        for a in arena.enabled(v) {
            let adam = kg.adam.len();
            kg.adam.push((e, a));
            kg.eve_succ[e].push(adam);
            let mut succ = Vec::new();
            for (w, set) in arena.out_edges(v, a) {
                let next = k.intersect(set);
                if !next.is_empty() {
                    succ.push(intern(&mut kg, &mut queue, *w, next));
                }
            }
            kg.adam_succ.push(succ);
        }
    }
    Ok(kg)
}

/// Eve's winning nodes by backward attractor: targets win, an Eve node wins
/// when one of its Adam successors wins, an Adam node wins when all of its
/// successors win. Non-target Eve nodes without moves lose.
pub fn attractor(kg: &KnowledgeGame) -> Vec<bool> {
    let mut eve_pred: Vec<Vec<AdamNode>> = vec![Vec::new(); kg.eve.len()];
    for (a, succ) in kg.adam_succ.iter().enumerate() {
        for &e in succ {
            eve_pred[e].push(a);
        }
    }
    let mut remaining: Vec<usize> = kg.adam_succ.iter().map(Vec::len).collect();
    let mut win = vec![false; kg.eve.len()];
    let mut queue: VecDeque<EveNode> = VecDeque::new();
    for (e, w) in win.iter_mut().enumerate() {
        if kg.is_target(e) {
            *w = true;
            queue.push_back(e);
        }
    }
    while let Some(e) = queue.pop_front() {
        for &a in &eve_pred[e] {
            remaining[a] -= 1;
            if remaining[a] == 0 {
                let owner = kg.adam[a].0;
                if !win[owner] {
                    win[owner] = true;
                    queue.push_back(owner);
                }
            }
        }
    }
    win
}

/// Status of `(v, k)` in the attractor of `kg`.
///
/// # Panics
/// If `(v, k)` is not a node of `kg`.
pub fn attractor_solve(kg: &KnowledgeGame, v: VertexId, k: &IntervalSet) -> Verdict {
    let start = kg.find(v, k).expect("start node belongs to the knowledge game");
    Verdict::from_win(attractor(kg)[start])
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DfsStats {
    /// Deepest nesting of sub-games; the root sub-game has depth 1.
    pub max_depth: usize,
    /// Number of sub-games solved.
    pub subgames: usize,
    /// Number of `(v, K)` statuses memoized.
    pub memoized: usize,
}

/// Sub-game decomposition solver from `(v0, ℕ)`.
pub fn dfs_solve(game: &ReachGame, v0: VertexId) -> (Verdict, DfsStats) {
    dfs_solve_with(game, v0, Deadline::none()).expect("no deadline set")
}

pub fn dfs_solve_with(game: &ReachGame, v0: VertexId, deadline: Deadline) -> Result<(Verdict, DfsStats), Interrupted> {
    let mut dfs = Dfs {
        game,
        memo: HashMap::new(),
        stats: DfsStats::default(),
        deadline,
    };
    let win = dfs.eval(v0, &IntervalSet::full(), 1)?;
    dfs.stats.memoized = dfs.memo.len();
    Ok((Verdict::from_win(win), dfs.stats))
}

struct Dfs<'a> {
    game: &'a ReachGame,
    memo: HashMap<(VertexId, IntervalSet), bool>,
    stats: DfsStats,
    deadline: Deadline,
}

enum Succ {
    Local(usize),
    Exit(bool),
}

impl Dfs<'_> {
    /// Solves the sub-game of nodes reachable from `(v, k)` without refining
    /// `k`. Edges that refine it leave through exit nodes, each solved by a
    /// recursive call on a strictly smaller knowledge set.
    fn eval(&mut self, v: VertexId, k: &IntervalSet, depth: usize) -> Result<bool, Interrupted> {
        if let Some(&w) = self.memo.get(&(v, k.clone())) {
            return Ok(w);
        }
        self.deadline.check()?;
        self.stats.subgames += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);

        let game = self.game;
        let arena = &game.arena;
        let mut local: Vec<VertexId> = vec![v];
        let mut local_index: HashMap<VertexId, usize> = HashMap::from([(v, 0)]);
        // Adam nodes: (owner, successors).
        let mut adam: Vec<(usize, Vec<Succ>)> = Vec::new();
        let mut next = 0;
        while next < local.len() {
            let u = local[next];
            next += 1;
            if u == game.target {
                continue;
            }
            for a in arena.enabled(u) {
                let mut succ = Vec::new();
                for (w, set) in arena.out_edges(u, a) {
                    let refined = k.intersect(set);
                    if refined.is_empty() {
                        continue;
                    }
                    if refined == *k {
                        let idx = *local_index.entry(*w).or_insert_with(|| {
                            local.push(*w);
                            local.len() - 1
                        });
                        succ.push(Succ::Local(idx));
                    } else {
                        succ.push(Succ::Exit(self.eval(*w, &refined, depth + 1)?));
                    }
                }
                adam.push((next - 1, succ));
            }
        }

        // Attractor inside the sub-game; winning exits act as targets.
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); local.len()];
        let mut remaining: Vec<usize> = Vec::with_capacity(adam.len());
        let mut win = vec![false; local.len()];
        let mut queue = VecDeque::new();
        for (i, &u) in local.iter().enumerate() {
            if u == self.game.target {
                win[i] = true;
                queue.push_back(i);
            }
        }
        for (ai, (owner, succ)) in adam.iter().enumerate() {
            let mut open = 0;
            for s in succ {
                match *s {
                    Succ::Local(i) => {
                        preds[i].push(ai);
                        open += 1;
                    }
                    Succ::Exit(false) => open += 1,
                    Succ::Exit(true) => {}
                }
            }
            remaining.push(open);
            if open == 0 && !win[*owner] {
                win[*owner] = true;
                queue.push_back(*owner);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &ai in &preds[i] {
                remaining[ai] -= 1;
                let owner = adam[ai].0;
                if remaining[ai] == 0 && !win[owner] {
                    win[owner] = true;
                    queue.push_back(owner);
                }
            }
        }

        for (i, &u) in local.iter().enumerate() {
            self.memo.insert((u, k.clone()), win[i]);
        }
        Ok(win[0])
    }
}

/// DOT rendering: Eve nodes as ellipses labelled `v | K`, Adam nodes as
/// boxes, target nodes double-circled.
pub fn to_dot(kg: &KnowledgeGame, game: &ReachGame) -> String {
    let arena = &game.arena;
    let mut out = String::from("digraph knowledge_game {\n");
    for (e, (v, k)) in kg.eve.iter().enumerate() {
        let shape = if kg.is_target(e) { "doublecircle" } else { "ellipse" };
        let _ = writeln!(out, "  e{e} [shape={shape}, label=\"{} | {}\"];", arena.vertex_name(*v), k);
    }
    for (a, &(owner, action)) in kg.adam.iter().enumerate() {
        let (v, k) = &kg.eve[owner];
        let _ = writeln!(
            out,
            "  a{a} [shape=box, label=\"{} | {} | {}\"];",
            arena.vertex_name(*v),
            k,
            arena.action_name(action)
        );
    }
    for (e, succ) in kg.eve_succ.iter().enumerate() {
        for a in succ {
            let _ = writeln!(out, "  e{e} -> a{a};");
        }
    }
    for (a, succ) in kg.adam_succ.iter().enumerate() {
        for e in succ {
            let _ = writeln!(out, "  a{a} -> e{e};");
        }
    }
    out.push_str("}\n");
    out
}

//! Antichain fixed-point computation of Eve's winning region.
//!
//! Both sequences start from `{(t, ℕ)} ∪ {(v, ∅) : v ≠ t}` and iterate
//! `W ← W ⊔ Pred(W)` until nothing changes:
//!
//! * [`solve_wk`] works inside a finite [`Lattice`]. For each `(v, a)` it
//!   collects the maximal lattice elements `K` such that every successor
//!   `(w, K ∩ ∇(v,a,w))` lies in the down-closure of `W`, walking the Hasse
//!   diagram from the top and skipping the part below an accepted element.
//! * [`solve_walt`] builds candidate sets directly: for every choice of one
//!   stored set `K_w` per successor `w`, it forms the union over the
//!   successor blocks `∇(v,a,V')` of `∇(v,a,V') ∩ ⋂_{w ∈ V'} K_w`. It runs on
//!   raw interval sets or on lattice ids.
//!
//! Both return the full sequence of antichains; the two sequences agree
//! step by step.

use crate::antichain::{KnowledgeAntichain, KnowledgeDomain, Sets};
use crate::arena::{ActionId, ParamArena, ReachGame, VertexId};
use crate::intervalset::IntervalSet;
use crate::lattice::{Lattice, LatticeId};
use crate::limits::{Deadline, Interrupted};
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointTrace<E> {
    /// `W^0, W^1, ...`; the last two entries are equal. In
    /// [`TraceMode::LastTwo`] only the final two are kept.
    pub iterations: Vec<KnowledgeAntichain<E>>,
    /// Smallest `i` with `W^i = W^{i-1}`.
    pub converged_at: usize,
}

impl<E> FixpointTrace<E> {
    /// The limit antichain.
    pub fn last(&self) -> &KnowledgeAntichain<E> {
        self.iterations.last().expect("a trace holds at least one antichain")
    }

    /// `W^i`, when retained.
    pub fn get(&self, i: usize) -> Option<&KnowledgeAntichain<E>> {
        let first = self.converged_at + 1 - self.iterations.len();
        i.checked_sub(first).and_then(|k| self.iterations.get(k))
    }
}

impl<E: Clone + Eq + Ord + std::hash::Hash + std::fmt::Debug> FixpointTrace<E> {
    pub fn to_sets<D: KnowledgeDomain<Elem = E>>(&self, domain: &D) -> FixpointTrace<IntervalSet> {
        FixpointTrace {
            iterations: self.iterations.iter().map(|w| w.to_sets(domain)).collect(),
            converged_at: self.converged_at,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TraceMode {
    #[default]
    Full,
    LastTwo,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub trace: TraceMode,
    pub deadline: Deadline,
}

/// Maximal `K` of the lattice whose every `a`-successor knowledge at `v`
/// is dominated by `w`.
pub fn kpred_k(
    lattice: &Lattice,
    arena: &ParamArena,
    v: VertexId,
    a: ActionId,
    w: &KnowledgeAntichain<LatticeId>,
) -> Vec<LatticeId> {
    let edges = lattice_edges(lattice, arena, v, a);
    kpred_k_edges(lattice, &edges, w)
}

fn lattice_edges(lattice: &Lattice, arena: &ParamArena, v: VertexId, a: ActionId) -> Vec<(VertexId, LatticeId)> {
    arena
        .out_edges(v, a)
        .iter()
        .map(|(succ, set)| (*succ, lattice.id_of(set)))
        .collect()
}

fn kpred_k_edges(
    lattice: &Lattice,
    edges: &[(VertexId, LatticeId)],
    w: &KnowledgeAntichain<LatticeId>,
) -> Vec<LatticeId> {
    let qualifies = |k: LatticeId| {
        edges
            .iter()
            .all(|&(succ, nabla)| w.dominated(lattice, succ, &lattice.meet(k, nabla)))
    };
    let mut seen = vec![false; lattice.len()];
    let mut emitted = Vec::new();
    let mut stack = vec![lattice.top()];
    seen[lattice.top().index()] = true;
    while let Some(k) = stack.pop() {
        if qualifies(k) {
            emitted.push(k);
            continue;
        }
        for &c in lattice.children(k) {
            if !seen[c.index()] {
                seen[c.index()] = true;
                stack.push(c);
            }
        }
    }
    reduce_ids(lattice, emitted)
}

fn reduce_ids(lattice: &Lattice, mut ids: Vec<LatticeId>) -> Vec<LatticeId> {
    ids.sort_unstable();
    ids.dedup();
    let all = ids.clone();
    ids.retain(|&x| !all.iter().any(|&y| y != x && lattice.leq(x, y)));
    ids
}

/// Successor blocks of `(v, a)` embedded in a domain, plus the successor list.
#[derive(Debug, Clone)]
pub struct ActionBlocks<E> {
    pub successors: Vec<VertexId>,
    /// For each nonempty block: positions (into `successors`) of its
    /// members and the block itself.
    pub blocks: Vec<(Vec<usize>, E)>,
}

impl<E: Clone> ActionBlocks<E> {
    pub fn new<D: KnowledgeDomain<Elem = E>>(domain: &D, arena: &ParamArena, v: VertexId, a: ActionId) -> Self {
        let successors = arena.successors(v, a);
        let blocks = arena
            .partition(v, a)
            .into_iter()
            .map(|(members, set)| {
                let pos = members
                    .iter()
                    .map(|m| successors.binary_search(m).expect("block members are successors"))
                    .collect();
                (pos, domain.embed(&set))
            })
            .collect();
        ActionBlocks { successors, blocks }
    }
}

/// Every set obtained from one choice of stored knowledge per successor,
/// deduplicated and sorted.
pub fn kpred_alt<D: KnowledgeDomain>(
    domain: &D,
    arena: &ParamArena,
    v: VertexId,
    a: ActionId,
    w: &KnowledgeAntichain<D::Elem>,
) -> Vec<D::Elem> {
    kpred_alt_blocks(domain, &ActionBlocks::new(domain, arena, v, a), w)
}

fn kpred_alt_blocks<D: KnowledgeDomain>(
    domain: &D,
    blocks: &ActionBlocks<D::Elem>,
    w: &KnowledgeAntichain<D::Elem>,
) -> Vec<D::Elem> {
    let choices: Vec<&[D::Elem]> = blocks.successors.iter().map(|&s| w.entries(s)).collect();
    let mut pick = vec![0usize; choices.len()];
    let mut results = Vec::new();
    loop {
        let mut acc = domain.bottom();
        for (members, block) in &blocks.blocks {
            let mut part = block.clone();
            for &m in members {
                if domain.is_bottom(&part) {
                    break;
                }
                part = domain.meet(&part, &choices[m][pick[m]]);
            }
            acc = domain.join(&acc, &part);
            if domain.is_top(&acc) {
                break;
            }
        }
        results.push(acc);

        // Advance the odometer over witness families.
        let mut pos = 0;
        loop {
            if pos == pick.len() {
                results.sort();
                results.dedup();
                return results;
            }
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

/// Shared fixpoint loop with dirty-vertex scheduling: `(v, a)` is
/// re-evaluated only when one of its successors changed in the previous
/// step.
fn iterate<D, F>(
    domain: &D,
    game: &ReachGame,
    opts: &SolveOptions,
    mut pred: F,
) -> Result<FixpointTrace<D::Elem>, Interrupted>
where
    D: KnowledgeDomain,
    F: FnMut(usize, &KnowledgeAntichain<D::Elem>) -> Vec<D::Elem>,
{
    let arena = &game.arena;
    let n = arena.vertex_count();
    // Slots follow `enabled_pairs`, the order the callers index by.
    let slots: Vec<(VertexId, Vec<VertexId>)> = enabled_pairs(game)
        .into_iter()
        .map(|(v, a)| (v, arena.successors(v, a)))
        .collect();

    let mut current = KnowledgeAntichain::initial(domain, n, game.target);
    let mut iterations = vec![current.clone()];
    let mut changed = vec![true; n];
    let mut step = 0;
    loop {
        opts.deadline.check()?;
        step += 1;
        let mut lists: Vec<Vec<D::Elem>> = (0..n).map(|v| current.entries(v).to_vec()).collect();
        for (slot, (v, succ)) in slots.iter().enumerate() {
            if succ.iter().any(|&s| changed[s]) {
                lists[*v].extend(pred(slot, &current));
            }
        }
        let next = KnowledgeAntichain::reduce(domain, lists);
        for (v, flag) in changed.iter_mut().enumerate() {
            *flag = next.entries(v) != current.entries(v);
        }
        let done = next == current;
        current = next;
        iterations.push(current.clone());
        if opts.trace == TraceMode::LastTwo && iterations.len() > 2 {
            iterations.remove(0);
        }
        if done {
            return Ok(FixpointTrace {
                iterations,
                converged_at: step,
            });
        }
    }
}

fn enabled_pairs(game: &ReachGame) -> Vec<(VertexId, ActionId)> {
    let arena = &game.arena;
    (0..arena.vertex_count())
        .filter(|&v| v != game.target)
        .flat_map(|v| arena.enabled(v).into_iter().map(move |a| (v, a)))
        .collect()
}

/// The lattice-based sequence.
pub fn solve_wk(game: &ReachGame, lattice: &Lattice) -> FixpointTrace<LatticeId> {
    solve_wk_with(game, lattice, &SolveOptions::default()).expect("no deadline set")
}

pub fn solve_wk_with(
    game: &ReachGame,
    lattice: &Lattice,
    opts: &SolveOptions,
) -> Result<FixpointTrace<LatticeId>, Interrupted> {
    let edges: Vec<Vec<(VertexId, LatticeId)>> = enabled_pairs(game)
        .into_iter()
        .map(|(v, a)| lattice_edges(lattice, &game.arena, v, a))
        .collect();
    iterate(lattice, game, opts, |slot, w| kpred_k_edges(lattice, &edges[slot], w))
}

/// The direct-construction sequence in an arbitrary domain.
pub fn solve_walt_in<D: KnowledgeDomain>(
    domain: &D,
    game: &ReachGame,
    opts: &SolveOptions,
) -> Result<FixpointTrace<D::Elem>, Interrupted> {
    let blocks: Vec<ActionBlocks<D::Elem>> = enabled_pairs(game)
        .into_iter()
        .map(|(v, a)| ActionBlocks::new(domain, &game.arena, v, a))
        .collect();
    iterate(domain, game, opts, |slot, w| kpred_alt_blocks(domain, &blocks[slot], w))
}

/// The direct-construction sequence, lattice-backed when a lattice is
/// given and on raw interval sets otherwise.
pub fn solve_walt(game: &ReachGame, lattice: Option<&Lattice>) -> FixpointTrace<IntervalSet> {
    solve_walt_with(game, lattice, &SolveOptions::default()).expect("no deadline set")
}

pub fn solve_walt_with(
    game: &ReachGame,
    lattice: Option<&Lattice>,
    opts: &SolveOptions,
) -> Result<FixpointTrace<IntervalSet>, Interrupted> {
    match lattice {
        Some(l) => Ok(solve_walt_in(l, game, opts)?.to_sets(l)),
        None => solve_walt_in(&Sets, game, opts),
    }
}

/// Eve wins from `v0` iff `(v0, ℕ)` is a maximal element of the limit.
pub fn verdict<D: KnowledgeDomain>(domain: &D, v0: VertexId, trace: &FixpointTrace<D::Elem>) -> Verdict {
    Verdict::from_win(trace.last().contains(v0, &domain.top()))
}

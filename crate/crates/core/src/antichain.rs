//! Antichains of Eve's knowledge vertices `(v, K)`.
//!
//! `(v, K) ⪯ (w, K')` iff `v = w` and `K ⊆ K'`. An antichain stores, for
//! every arena vertex, the `⊆`-maximal knowledge sets of a downward-closed
//! region. Down-closures are never materialized: membership is answered by
//! subset tests against the stored maxima.
//!
//! Knowledge sets are abstracted by [`KnowledgeDomain`] so the same code runs
//! on lattice ids ([`Lattice`]) or on raw interval sets ([`Sets`]).

use std::fmt::{Debug, Write as _};
use std::hash::Hash;

use crate::arena::{ParamArena, VertexId};
use crate::intervalset::IntervalSet;
use crate::lattice::{Lattice, LatticeId};

/// Operations on knowledge sets needed by antichains and the solvers.
pub trait KnowledgeDomain {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn top(&self) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_bottom(&self, a: &Self::Elem) -> bool {
        *a == self.bottom()
    }
    fn is_top(&self, a: &Self::Elem) -> bool {
        *a == self.top()
    }
    /// Converts an interval set into this domain.
    ///
    /// # Panics
    /// Lattice-backed domains panic if `set` is not an element.
    fn embed(&self, set: &IntervalSet) -> Self::Elem;
    fn to_set(&self, a: &Self::Elem) -> IntervalSet;
}

/// Lattice-free domain: knowledge sets are canonical interval sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sets;

impl KnowledgeDomain for Sets {
    type Elem = IntervalSet;

    fn top(&self) -> IntervalSet {
        IntervalSet::full()
    }
    fn bottom(&self) -> IntervalSet {
        IntervalSet::empty()
    }
    fn leq(&self, a: &IntervalSet, b: &IntervalSet) -> bool {
        a.is_subset(b)
    }
    fn meet(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.intersect(b)
    }
    fn join(&self, a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
        a.union(b)
    }
    fn is_bottom(&self, a: &IntervalSet) -> bool {
        a.is_empty()
    }
    fn is_top(&self, a: &IntervalSet) -> bool {
        a.is_full()
    }
    fn embed(&self, set: &IntervalSet) -> IntervalSet {
        set.clone()
    }
    fn to_set(&self, a: &IntervalSet) -> IntervalSet {
        a.clone()
    }
}

impl KnowledgeDomain for Lattice {
    type Elem = LatticeId;

    fn top(&self) -> LatticeId {
        Lattice::top(self)
    }
    fn bottom(&self) -> LatticeId {
        Lattice::bottom(self)
    }
    fn leq(&self, a: &LatticeId, b: &LatticeId) -> bool {
        Lattice::leq(self, *a, *b)
    }
    fn meet(&self, a: &LatticeId, b: &LatticeId) -> LatticeId {
        Lattice::meet(self, *a, *b)
    }
    fn join(&self, a: &LatticeId, b: &LatticeId) -> LatticeId {
        Lattice::join(self, *a, *b)
    }
    fn embed(&self, set: &IntervalSet) -> LatticeId {
        self.id_of(set)
    }
    fn to_set(&self, a: &LatticeId) -> IntervalSet {
        self.elem(*a).clone()
    }
}

/// Per-vertex `⊆`-maximal knowledge sets. Every vertex has at least one
/// entry; the empty set stands for "nothing known to be winning".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnowledgeAntichain<E> {
    per_vertex: Vec<Vec<E>>,
}

impl<E: Clone + Eq + Ord + Hash + Debug> KnowledgeAntichain<E> {
    /// `{(target, ℕ)} ∪ {(v, ∅) : v ≠ target}`.
    pub fn initial<D>(domain: &D, vertex_count: usize, target: VertexId) -> Self
    where
        D: KnowledgeDomain<Elem = E>,
    {
        let per_vertex = (0..vertex_count)
            .map(|v| vec![if v == target { domain.top() } else { domain.bottom() }])
            .collect();
        KnowledgeAntichain { per_vertex }
    }

    /// Keeps the maximal elements of each list. Vertices without entries
    /// receive the bottom element.
    pub fn reduce<D>(domain: &D, lists: Vec<Vec<E>>) -> Self
    where
        D: KnowledgeDomain<Elem = E>,
    {
        let per_vertex = lists.into_iter().map(|list| reduce_list(domain, list)).collect();
        KnowledgeAntichain { per_vertex }
    }

    /// Reduced form of a list of `(vertex, knowledge)` pairs.
    pub fn from_pairs<D, I>(domain: &D, vertex_count: usize, pairs: I) -> Self
    where
        D: KnowledgeDomain<Elem = E>,
        I: IntoIterator<Item = (VertexId, E)>,
    {
        let mut lists = vec![Vec::new(); vertex_count];
        for (v, k) in pairs {
            lists[v].push(k);
        }
        Self::reduce(domain, lists)
    }

    pub fn vertex_count(&self) -> usize {
        self.per_vertex.len()
    }

    /// Stored maxima at `v`, sorted.
    pub fn entries(&self, v: VertexId) -> &[E] {
        &self.per_vertex[v]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &E)> + '_ {
        self.per_vertex
            .iter()
            .enumerate()
            .flat_map(|(v, list)| list.iter().map(move |k| (v, k)))
    }

    /// Total number of stored pairs.
    pub fn len(&self) -> usize {
        self.per_vertex.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `(v, k)` is stored as a maximal element.
    pub fn contains(&self, v: VertexId, k: &E) -> bool {
        self.per_vertex[v].binary_search(k).is_ok()
    }

    /// Whether `(v, k)` lies in the down-closure.
    pub fn dominated<D>(&self, domain: &D, v: VertexId, k: &E) -> bool
    where
        D: KnowledgeDomain<Elem = E>,
    {
        domain.is_bottom(k) || self.per_vertex[v].iter().any(|stored| domain.leq(k, stored))
    }

    /// Least upper bound: maxima of the union.
    pub fn join<D>(&self, domain: &D, other: &Self) -> Self
    where
        D: KnowledgeDomain<Elem = E>,
    {
        assert_eq!(self.vertex_count(), other.vertex_count());
        let lists = self
            .per_vertex
            .iter()
            .zip(&other.per_vertex)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Self::reduce(domain, lists)
    }

    /// Greatest lower bound: maxima of the pairwise intersections.
    pub fn meet<D>(&self, domain: &D, other: &Self) -> Self
    where
        D: KnowledgeDomain<Elem = E>,
    {
        assert_eq!(self.vertex_count(), other.vertex_count());
        let lists = self
            .per_vertex
            .iter()
            .zip(&other.per_vertex)
            .map(|(a, b)| {
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| (x, y)))
                    .map(|(x, y)| domain.meet(x, y))
                    .collect()
            })
            .collect();
        Self::reduce(domain, lists)
    }

    /// Lifted preorder: every element of `self` lies below some element of
    /// `other`.
    pub fn leq_sim<D>(&self, domain: &D, other: &Self) -> bool
    where
        D: KnowledgeDomain<Elem = E>,
    {
        self.iter().all(|(v, k)| other.dominated(domain, v, k))
    }

    /// The same antichain over interval sets.
    pub fn to_sets<D>(&self, domain: &D) -> KnowledgeAntichain<IntervalSet>
    where
        D: KnowledgeDomain<Elem = E>,
    {
        KnowledgeAntichain {
            per_vertex: self
                .per_vertex
                .iter()
                .map(|list| {
                    let mut sets: Vec<IntervalSet> = list.iter().map(|k| domain.to_set(k)).collect();
                    sets.sort();
                    sets
                })
                .collect(),
        }
    }
}

impl KnowledgeAntichain<IntervalSet> {
    /// The antichain over lattice ids; every set must be an element.
    pub fn to_lattice(&self, lattice: &Lattice) -> KnowledgeAntichain<LatticeId> {
        KnowledgeAntichain {
            per_vertex: self
                .per_vertex
                .iter()
                .map(|list| {
                    let mut ids: Vec<LatticeId> = list.iter().map(|k| lattice.id_of(k)).collect();
                    ids.sort();
                    ids
                })
                .collect(),
        }
    }

    /// One line per vertex in declaration order, `v : K1 | K2 | ...`, sets
    /// in text form sorted lexicographically.
    pub fn format(&self, arena: &ParamArena) -> String {
        let mut out = String::new();
        for (v, list) in self.per_vertex.iter().enumerate() {
            let mut texts: Vec<String> = list.iter().map(IntervalSet::to_string).collect();
            texts.sort();
            let _ = writeln!(out, "{} : {}", arena.vertex_name(v), texts.join(" | "));
        }
        out
    }
}

fn reduce_list<D: KnowledgeDomain>(domain: &D, mut list: Vec<D::Elem>) -> Vec<D::Elem> {
    list.sort();
    list.dedup();
    if list.len() > 1 {
        let all = list.clone();
        list.retain(|x| !all.iter().any(|y| y != x && domain.leq(x, y)));
    }
    if list.is_empty() {
        list.push(domain.bottom());
    }
    list
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;

    fn s(text: &str) -> IntervalSet {
        text.parse().unwrap()
    }

    #[test]
    fn reduce_drops_dominated() {
        let g = fig1();
        let id = |n: &str| g.arena.vertex_id(n).unwrap();
        let pairs = [
            (id("t"), s("*")),
            (id("y1"), s("1")),
            (id("y1"), s("1-2")),
            (id("y2"), s("1-2")),
        ];
        let a = KnowledgeAntichain::from_pairs(&Sets, 7, pairs);
        assert_eq!(a.entries(id("y1")), &[s("1-2")]);
        assert_eq!(a.entries(id("y2")), &[s("1-2")]);
        assert_eq!(a.entries(id("t")), &[s("*")]);
        assert_eq!(a.entries(id("v")), &[IntervalSet::empty()]);
        let again = KnowledgeAntichain::reduce(&Sets, a.per_vertex.clone());
        assert_eq!(again, a);
    }

    #[test]
    fn duplicates_collapse() {
        let a = KnowledgeAntichain::from_pairs(&Sets, 1, [(0, s("")), (0, s(""))]);
        assert_eq!(a.entries(0), &[IntervalSet::empty()]);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn dominated_queries() {
        let a = KnowledgeAntichain::from_pairs(&Sets, 2, [(0, s("3-*")), (1, s("1,3-*"))]);
        assert!(a.dominated(&Sets, 0, &s("3-*").intersect(&s("1,3-*"))));
        assert!(a.dominated(&Sets, 0, &s("5-9")));
        assert!(!a.dominated(&Sets, 0, &s("*")));
        assert!(a.dominated(&Sets, 1, &IntervalSet::empty()));
        assert!(!a.dominated(&Sets, 1, &s("2")));
    }

    #[test]
    fn join_and_meet() {
        let one = KnowledgeAntichain::from_pairs(&Sets, 1, [(0, s("1"))]);
        let both = KnowledgeAntichain::from_pairs(&Sets, 1, [(0, s("1-2"))]);
        assert_eq!(one.join(&Sets, &both), both);
        assert_eq!(both.join(&Sets, &both), both);

        let not1 = KnowledgeAntichain::from_pairs(&Sets, 1, [(0, s("2-*"))]);
        let not2 = KnowledgeAntichain::from_pairs(&Sets, 1, [(0, s("1,3-*"))]);
        assert_eq!(not1.meet(&Sets, &not2).entries(0), &[s("3-*")]);
    }

    #[test]
    fn lifted_preorder() {
        let bottom = KnowledgeAntichain::initial(&Sets, 3, 0);
        let other = KnowledgeAntichain::from_pairs(&Sets, 3, [(1, s("2"))]);
        assert!(!bottom.leq_sim(&Sets, &other));
        let empties = KnowledgeAntichain::<IntervalSet>::reduce(&Sets, vec![vec![]; 3]);
        assert!(empties.leq_sim(&Sets, &other));
        assert!(other.leq_sim(&Sets, &other.join(&Sets, &bottom)));
    }

    #[test]
    fn lattice_backing_agrees() {
        let g = fig1();
        let l = Lattice::build(&g.arena).unwrap();
        let sets = KnowledgeAntichain::from_pairs(&Sets, 2, [(0, s("2-*")), (0, s("1")), (1, s("1-2"))]);
        let ids = sets.to_lattice(&l);
        assert_eq!(ids.to_sets(&l), sets);
        let other = KnowledgeAntichain::from_pairs(&Sets, 2, [(0, s("1,3-*")), (1, s("3-*"))]);
        assert_eq!(ids.meet(&l, &other.to_lattice(&l)).to_sets(&l), sets.meet(&Sets, &other));
        assert_eq!(ids.join(&l, &other.to_lattice(&l)).to_sets(&l), sets.join(&Sets, &other));
    }

    #[test]
    fn region_format() {
        let g = fig1();
        let a = KnowledgeAntichain::from_pairs(&Sets, 7, [(0, s("3-*")), (0, s("1")), (6, s("*"))]);
        let text = a.format(&g.arena);
        assert!(text.starts_with("v : 1 | 3-*\nx1 : \n"), "{text}");
        assert!(text.ends_with("t : *\n"));
    }
}

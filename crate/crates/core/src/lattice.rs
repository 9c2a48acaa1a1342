//! The least family of knowledge sets that contains the empty set, all
//! positive integers and every edge constraint of an arena, closed under
//! union, intersection and difference.
//!
//! Elements live in an append-only array and are referred to by
//! [`LatticeId`]. Each element keeps its direct parents and direct children
//! (the covering relation of `⊆` restricted to the elements), maintained on
//! every insertion. The solvers walk these links top-down.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::arena::ParamArena;
use crate::intervalset::IntervalSet;
use crate::limits::{Deadline, Interrupted};

/// Default bound on the number of elements before construction gives up.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeId(u32);

impl LatticeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice exceeds the cap of {cap} elements (reached {size})")]
    CapExceeded { size: usize, cap: usize },
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub cap: usize,
    pub deadline: Deadline,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            cap: DEFAULT_CAP,
            deadline: Deadline::none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeStats {
    pub size: usize,
    /// Number of covering steps in a longest chain from bottom to top.
    pub height: usize,
    /// Number of distinct constraints the lattice was generated from.
    pub generators: usize,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    elements: Vec<IntervalSet>,
    parents: Vec<Vec<LatticeId>>,
    children: Vec<Vec<LatticeId>>,
    index: HashMap<IntervalSet, LatticeId>,
    generators: usize,
}

impl Default for Lattice {
    fn default() -> Self {
        Self::new()
    }
}

impl Lattice {
    /// The two-element lattice `{∅, ℕ}`.
    pub fn new() -> Self {
        let top = IntervalSet::full();
        let bottom = IntervalSet::empty();
        let mut index = HashMap::new();
        index.insert(top.clone(), LatticeId(0));
        index.insert(bottom.clone(), LatticeId(1));
        Lattice {
            elements: vec![top, bottom],
            parents: vec![vec![], vec![LatticeId(0)]],
            children: vec![vec![LatticeId(1)], vec![]],
            index,
            generators: 0,
        }
    }

    /// Closure of the constraints of `arena` with default options.
    pub fn build(arena: &ParamArena) -> Result<Self, LatticeError> {
        Self::build_with(arena, &BuildOptions::default())
    }

    pub fn build_with(arena: &ParamArena, opts: &BuildOptions) -> Result<Self, LatticeError> {
        Self::from_generators(arena.edges().map(|(_, _, _, set)| set.clone()), opts)
    }

    /// Closure of an arbitrary family of sets, seeded in iteration order.
    pub fn from_generators<I>(generators: I, opts: &BuildOptions) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = IntervalSet>,
    {
        let mut lattice = Lattice::new();
        let mut seeds: Vec<IntervalSet> = generators.into_iter().collect();
        let mut distinct = seeds.clone();
        distinct.sort();
        distinct.dedup();
        lattice.generators = distinct.len();

        let mut queue: VecDeque<LatticeId> = lattice.ids().collect();
        for set in seeds.drain(..) {
            if lattice.get(&set).is_none() {
                let id = lattice.insert(set);
                queue.push_back(id);
                lattice.check_cap(opts.cap)?;
            }
        }

        while let Some(i) = queue.pop_front() {
            opts.deadline.check()?;
            let known = lattice.len();
            for j in 0..known {
                let (a, b) = (lattice.elem(i), &lattice.elements[j]);
                let candidates = [a.union(b), a.difference(b), b.difference(a)];
                for set in candidates {
                    if lattice.get(&set).is_none() {
                        let id = lattice.insert(set);
                        queue.push_back(id);
                        lattice.check_cap(opts.cap)?;
                    }
                }
            }
        }
        Ok(lattice)
    }

    fn check_cap(&self, cap: usize) -> Result<(), LatticeError> {
        if self.len() > cap {
            Err(LatticeError::CapExceeded {
                size: self.len(),
                cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn top(&self) -> LatticeId {
        LatticeId(0)
    }

    pub fn bottom(&self) -> LatticeId {
        LatticeId(1)
    }

    pub fn ids(&self) -> impl Iterator<Item = LatticeId> {
        (0..self.elements.len() as u32).map(LatticeId)
    }

    pub fn elem(&self, id: LatticeId) -> &IntervalSet {
        &self.elements[id.index()]
    }

    pub fn elements(&self) -> &[IntervalSet] {
        &self.elements
    }

    pub fn get(&self, set: &IntervalSet) -> Option<LatticeId> {
        self.index.get(set).copied()
    }

    /// Id of a set known to be an element.
    ///
    /// # Panics
    /// If `set` is not an element.
    pub fn id_of(&self, set: &IntervalSet) -> LatticeId {
        match self.get(set) {
            Some(id) => id,
            None => panic!("{{{set}}} is not an element of the lattice"),
        }
    }

    pub fn parents(&self, id: LatticeId) -> &[LatticeId] {
        &self.parents[id.index()]
    }

    pub fn children(&self, id: LatticeId) -> &[LatticeId] {
        &self.children[id.index()]
    }

    pub fn leq(&self, i: LatticeId, j: LatticeId) -> bool {
        i == j || self.elem(i).is_subset(self.elem(j))
    }

    pub fn meet(&self, i: LatticeId, j: LatticeId) -> LatticeId {
        if self.leq(i, j) {
            return i;
        }
        if self.leq(j, i) {
            return j;
        }
        self.id_of(&self.elem(i).intersect(self.elem(j)))
    }

    pub fn join(&self, i: LatticeId, j: LatticeId) -> LatticeId {
        if self.leq(i, j) {
            return j;
        }
        if self.leq(j, i) {
            return i;
        }
        self.id_of(&self.elem(i).union(self.elem(j)))
    }

    pub fn difference(&self, i: LatticeId, j: LatticeId) -> LatticeId {
        self.id_of(&self.elem(i).difference(self.elem(j)))
    }

    /// Adds `set` if absent and rewires the covering relation.
    pub fn insert(&mut self, set: IntervalSet) -> LatticeId {
        if let Some(id) = self.get(&set) {
            return id;
        }
        let below = self.maximal_below(&set);
        let above = self.minimal_above(&set);

        let id = LatticeId(self.elements.len() as u32);
        for &p in &above {
            self.children[p.index()].retain(|c| !below.contains(c));
            self.children[p.index()].push(id);
        }
        for &c in &below {
            self.parents[c.index()].retain(|p| !above.contains(p));
            self.parents[c.index()].push(id);
        }
        self.index.insert(set.clone(), id);
        self.elements.push(set);
        self.parents.push(above);
        self.children.push(below);
        id
    }

    /// Maximal elements strictly contained in `set`, found by descending
    /// from the top through elements that are not contained in `set`.
    fn maximal_below(&self, set: &IntervalSet) -> Vec<LatticeId> {
        let mut seen = vec![false; self.len()];
        let mut found = Vec::new();
        let mut stack = vec![self.top()];
        seen[self.top().index()] = true;
        while let Some(n) = stack.pop() {
            if self.elem(n).is_subset(set) {
                found.push(n);
                continue;
            }
            for &c in self.children(n) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    stack.push(c);
                }
            }
        }
        self.keep_extremal(found, |a, b| self.elem(a).is_subset(self.elem(b)))
    }

    /// Minimal elements strictly containing `set`, found by ascending from
    /// the bottom through elements that do not contain `set`.
    fn minimal_above(&self, set: &IntervalSet) -> Vec<LatticeId> {
        let mut seen = vec![false; self.len()];
        let mut found = Vec::new();
        let mut stack = vec![self.bottom()];
        seen[self.bottom().index()] = true;
        while let Some(n) = stack.pop() {
            if set.is_subset(self.elem(n)) {
                found.push(n);
                continue;
            }
            for &p in self.parents(n) {
                if !seen[p.index()] {
                    seen[p.index()] = true;
                    stack.push(p);
                }
            }
        }
        self.keep_extremal(found, |a, b| self.elem(b).is_subset(self.elem(a)))
    }

    /// Drops every `x` for which some other `y` satisfies `below(x, y)`.
    fn keep_extremal(
        &self,
        mut found: Vec<LatticeId>,
        below: impl Fn(LatticeId, LatticeId) -> bool,
    ) -> Vec<LatticeId> {
        let snapshot = found.clone();
        found.retain(|&x| !snapshot.iter().any(|&y| y != x && below(x, y)));
        found.sort_unstable();
        found
    }

    pub fn stats(&self) -> LatticeStats {
        LatticeStats {
            size: self.len(),
            height: self.height(),
            generators: self.generators,
        }
    }

    fn height(&self) -> usize {
        // Longest path in the Hasse DAG, memoized iterative DFS.
        let mut depth: Vec<Option<usize>> = vec![None; self.len()];
        fn visit(l: &Lattice, n: LatticeId, depth: &mut [Option<usize>]) -> usize {
            if let Some(d) = depth[n.index()] {
                return d;
            }
            let mut stack = vec![(n, 0usize)];
            while let Some(&(node, next)) = stack.last() {
                let kids = l.children(node);
                if next < kids.len() {
                    stack.last_mut().unwrap().1 += 1;
                    let c = kids[next];
                    if depth[c.index()].is_none() {
                        stack.push((c, 0));
                    }
                } else {
                    let d = kids.iter().map(|c| depth[c.index()].unwrap() + 1).max().unwrap_or(0);
                    depth[node.index()] = Some(d);
                    stack.pop();
                }
            }
            depth[n.index()].unwrap()
        }
        visit(self, self.top(), &mut depth)
    }

    /// One element per line: `id<TAB>set<TAB>parents<TAB>children`, with
    /// comma-separated ids.
    pub fn dump(&self) -> String {
        let ids = |list: &[LatticeId]| {
            let mut list: Vec<usize> = list.iter().map(|i| i.index()).collect();
            list.sort_unstable();
            list.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        };
        let mut out = String::new();
        for id in self.ids() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                id.index(),
                self.elem(id),
                ids(self.parents(id)),
                ids(self.children(id))
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;

    fn s(text: &str) -> IntervalSet {
        text.parse().unwrap()
    }

    /// Covering relation recomputed from scratch over all pairs.
    fn brute_children(l: &Lattice, i: LatticeId) -> Vec<LatticeId> {
        let strictly = |a: LatticeId, b: LatticeId| a != b && l.elem(a).is_subset(l.elem(b));
        let mut out: Vec<LatticeId> = l
            .ids()
            .filter(|&j| strictly(j, i) && !l.ids().any(|k| strictly(j, k) && strictly(k, i)))
            .collect();
        out.sort_unstable();
        out
    }

    fn assert_hasse(l: &Lattice) {
        for i in l.ids() {
            let mut kids = l.children(i).to_vec();
            kids.sort_unstable();
            assert_eq!(kids, brute_children(l, i), "children of {:?}", l.elem(i));
            for &c in l.children(i) {
                assert!(l.parents(c).contains(&i));
            }
        }
    }

    #[test]
    fn insert_rewires_covers() {
        let mut l = Lattice::new();
        let one = l.insert(s("1"));
        let two = l.insert(s("2"));
        assert_hasse(&l);
        assert_eq!(l.children(l.top()), &[one, two]);
        let both = l.insert(s("1-2"));
        assert_eq!(l.children(both), &[one, two]);
        assert_eq!(l.parents(both), &[l.top()]);
        assert_eq!(l.children(l.top()), &[both]);
        assert_hasse(&l);
    }

    #[test]
    fn insert_existing_is_idempotent() {
        let mut l = Lattice::new();
        l.insert(s("1"));
        let before = l.dump();
        assert_eq!(l.insert(IntervalSet::full()), l.top());
        assert_eq!(l.insert(IntervalSet::empty()), l.bottom());
        assert_eq!(l.dump(), before);
    }

    #[test]
    fn insert_finds_covers_off_the_superset_path() {
        // {1} sits below {1,5} only; inserting {1,2} must still adopt it.
        let mut l = Lattice::new();
        l.insert(s("1,5"));
        l.insert(s("1"));
        l.insert(s("1-2"));
        assert_hasse(&l);
    }

    #[test]
    fn fig1_lattice() {
        let l = Lattice::build(&fig1().arena).unwrap();
        let mut sets: Vec<String> = l.elements().iter().map(|x| x.to_string()).collect();
        sets.sort();
        let mut expected = vec!["*", "2-*", "1,3-*", "1-2", "1", "2", "3-*", ""];
        expected.sort();
        assert_eq!(sets, expected);
        assert_hasse(&l);
        let st = l.stats();
        assert_eq!(st.size, 8);
        assert_eq!(st.height, 3);
    }

    #[test]
    fn trivial_constraints_give_two_elements() {
        let l = Lattice::from_generators([IntervalSet::full()], &BuildOptions::default()).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.stats().height, 1);
    }

    #[test]
    fn lattice_ops() {
        let l = Lattice::build(&fig1().arena).unwrap();
        let id = |t: &str| l.id_of(&s(t));
        assert_eq!(l.meet(id("2-*"), id("1,3-*")), id("3-*"));
        assert_eq!(l.join(id("1"), l.bottom()), id("1"));
        assert_eq!(l.join(id("1"), id("2")), id("1-2"));
        assert!(l.leq(id("1"), id("1,3-*")));
        assert!(!l.leq(id("1-2"), id("3-*")));
        assert_eq!(l.difference(l.top(), id("2-*")), id("1"));
    }

    #[test]
    fn cap_is_reported() {
        let gens = (1..=6).map(IntervalSet::singleton);
        let err = Lattice::from_generators(gens, &BuildOptions { cap: 20, deadline: Deadline::none() }).unwrap_err();
        assert_eq!(err, LatticeError::CapExceeded { size: 21, cap: 20 });
    }

    #[test]
    fn dump_format() {
        let l = Lattice::new();
        assert_eq!(l.dump(), "0\t*\t\t1\n1\t\t0\t\n");
    }
}

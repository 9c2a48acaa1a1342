//! Oracles shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use paramgame::explicit::{attractor_solve, build_from};
use paramgame::families::{random_arena, RandomArenaParams};
use paramgame::fixtures::fig1;
use paramgame::symbolic::{kpred_alt, kpred_k};
use paramgame::{
    gen_family, ActionId, Deadline, Family, IntervalSet, KnowledgeAntichain, Lattice, LatticeId, ParamArena,
    ReachGame,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

// ---- interval sets vs a bitset model ------------------------------------

/// Values 1..=64 as bits plus one bit for "every k > 64".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bits {
    pub low: u64,
    pub tail: bool,
}

impl Bits {
    pub fn of(set: &IntervalSet) -> Bits {
        let mut low = 0u64;
        for k in 1..=64 {
            if set.contains(k) {
                low |= 1 << (k - 1);
            }
        }
        let tail = set.contains(65);
        assert_eq!(tail, set.contains(1_000_000_007), "{set} is not uniform above 64");
        Bits { low, tail }
    }

    pub fn union(self, o: Bits) -> Bits {
        Bits { low: self.low | o.low, tail: self.tail || o.tail }
    }

    pub fn inter(self, o: Bits) -> Bits {
        Bits { low: self.low & o.low, tail: self.tail && o.tail }
    }

    pub fn minus(self, o: Bits) -> Bits {
        Bits { low: self.low & !o.low, tail: self.tail && !o.tail }
    }

    pub fn not(self) -> Bits {
        Bits { low: !self.low, tail: !self.tail }
    }

    pub fn is_empty(self) -> bool {
        self.low == 0 && !self.tail
    }
}

/// Builds a set that is uniform above 64 from `(lo, len)` pieces; a
/// missing length or `lo = 65` gives an unbounded piece.
pub fn set_from_pieces(pieces: &[(u64, Option<u64>)]) -> IntervalSet {
    IntervalSet::from_intervals(pieces.iter().map(|&(lo, len)| match len {
        Some(len) if lo <= 64 => (lo, Some((lo + len).min(64))),
        _ => (lo, None),
    }))
}

pub fn random_set(rng: &mut ChaCha8Rng) -> IntervalSet {
    match rng.gen_range(0..10) {
        0 => IntervalSet::empty(),
        1 => IntervalSet::full(),
        _ => {
            let pieces: Vec<_> = (0..rng.gen_range(0..6))
                .map(|_| (rng.gen_range(1..=65), rng.gen_bool(0.8).then(|| rng.gen_range(0..20))))
                .collect();
            set_from_pieces(&pieces)
        }
    }
}

pub fn assert_canonical(s: &IntervalSet) {
    let iv: Vec<_> = s.intervals().collect();
    for &(lo, hi) in &iv {
        assert!(1 <= lo && hi.is_none_or(|hi| lo <= hi), "{s:?}");
    }
    for w in iv.windows(2) {
        // Sorted, disjoint and not adjacent.
        let hi = w[0].1.expect("only the last interval is unbounded");
        assert!(hi + 1 < w[1].0, "{s:?}");
    }
}

pub fn check_interval_ops(a: &IntervalSet, b: &IntervalSet) {
    let (ma, mb) = (Bits::of(a), Bits::of(b));
    let ops = [
        (a.union(b), ma.union(mb), "union"),
        (a.intersect(b), ma.inter(mb), "intersect"),
        (a.difference(b), ma.minus(mb), "difference"),
        (a.complement(), ma.not(), "complement"),
    ];
    for (got, want, op) in ops {
        assert_canonical(&got);
        assert_eq!(Bits::of(&got), want, "{op} of {a} and {b}");
    }
    assert_eq!(a.is_subset(b), mb.inter(ma) == ma, "{a} ⊆ {b}");
    assert_eq!(a.is_subset(b), a.difference(b).is_empty());
    assert_eq!(a.is_disjoint(b), ma.inter(mb).is_empty());
    assert_eq!(a.is_empty(), ma.is_empty());
    assert_eq!(a.is_full(), ma.not().is_empty());
    assert_eq!(a == b, ma == mb);
    assert_eq!(&a.to_string().parse::<IntervalSet>().unwrap(), a);
}

// ---- antichains over a finite lattice -----------------------------------

/// Vertices used by the antichain checks.
pub const VERTICES: usize = 3;

pub type Pairs = Vec<(usize, LatticeId)>;

pub fn fig3() -> &'static Lattice {
    static FIG3: OnceLock<Lattice> = OnceLock::new();
    FIG3.get_or_init(|| Lattice::build(&fig1().arena).unwrap())
}

pub fn lattice_512() -> &'static Lattice {
    static BIG: OnceLock<Lattice> = OnceLock::new();
    BIG.get_or_init(|| {
        let l = Lattice::build(&gen_family(Family::DNw1, 8).unwrap().arena).unwrap();
        assert_eq!(l.len(), 512);
        l
    })
}

/// Every vertex implicitly carries `(v, ∅)`, as in the stored form.
pub fn normalize(l: &Lattice, mut pairs: Pairs) -> Pairs {
    pairs.extend((0..VERTICES).map(|v| (v, l.bottom())));
    pairs
}

/// Lattice pairs from `(vertex, element index)` pairs, normalized.
pub fn ids(l: &Lattice, raw: &[(usize, usize)]) -> Pairs {
    let all: Vec<LatticeId> = l.ids().collect();
    normalize(l, raw.iter().map(|&(v, i)| (v, all[i % all.len()])).collect())
}

pub fn random_raw(rng: &mut ChaCha8Rng, size: usize) -> Vec<(usize, usize)> {
    (0..rng.gen_range(0..8))
        .map(|_| (rng.gen_range(0..VERTICES), rng.gen_range(0..size)))
        .collect()
}

pub fn down(l: &Lattice, pairs: &[(usize, LatticeId)]) -> BTreeSet<(usize, LatticeId)> {
    pairs
        .iter()
        .flat_map(|&(v, k)| l.ids().filter(move |&j| l.leq(j, k)).map(move |j| (v, j)))
        .collect()
}

pub fn antichain(l: &Lattice, n: usize, pairs: &[(usize, LatticeId)]) -> KnowledgeAntichain<LatticeId> {
    KnowledgeAntichain::from_pairs(l, n, pairs.iter().copied())
}

pub fn stored(a: &KnowledgeAntichain<LatticeId>) -> Pairs {
    a.iter().map(|(v, &k)| (v, k)).collect()
}

pub fn lifted_leq(l: &Lattice, a: &[(usize, LatticeId)], b: &[(usize, LatticeId)]) -> bool {
    a.iter().all(|&(v, k)| b.iter().any(|&(w, j)| v == w && l.leq(k, j)))
}

/// `reduce` yields an antichain with the same down-closure, and reducing
/// the down-closure gives the same result.
pub fn check_reduce(l: &Lattice, pairs: &Pairs) {
    let r = antichain(l, VERTICES, pairs);
    let s = stored(&r);
    for (i, &(v, k)) in s.iter().enumerate() {
        for &(w, j) in &s[i + 1..] {
            assert!(v != w || !(l.leq(k, j) || l.leq(j, k)), "not an antichain: {s:?}");
        }
    }
    assert_eq!(down(l, pairs), down(l, &s));
    let closed: Pairs = down(l, pairs).into_iter().collect();
    assert_eq!(antichain(l, VERTICES, &closed), r);
}

/// Equal reductions, mutual lifted order and mutual inclusion in
/// down-closures are the same condition.
pub fn check_equivalence(l: &Lattice, a: &Pairs, b: &Pairs) {
    let same_reduce = antichain(l, VERTICES, a) == antichain(l, VERTICES, b);
    let mutual_leq = lifted_leq(l, a, b) && lifted_leq(l, b, a);
    let (da, db) = (down(l, a), down(l, b));
    let mutual_inclusion = a.iter().all(|p| db.contains(p)) && b.iter().all(|p| da.contains(p));
    assert_eq!(same_reduce, mutual_leq, "{a:?} {b:?}");
    assert_eq!(mutual_leq, mutual_inclusion, "{a:?} {b:?}");
    let (ra, rb) = (antichain(l, VERTICES, a), antichain(l, VERTICES, b));
    assert_eq!(ra.leq_sim(l, &rb), lifted_leq(l, a, b));
}

/// A list and its down-closure minus one non-maximal pair are equivalent.
pub fn check_thinned_closure(l: &Lattice, a: &Pairs, drop: usize) {
    let mut closed: Pairs = down(l, a).into_iter().collect();
    let maxima = stored(&antichain(l, VERTICES, a));
    if let Some(i) = (0..closed.len())
        .map(|i| (i + drop) % closed.len())
        .find(|&i| !maxima.contains(&closed[i]))
    {
        closed.remove(i);
    }
    check_equivalence(l, a, &normalize(l, closed));
}

/// Join and meet are union and intersection of down-closures.
pub fn check_lattice_ops(l: &Lattice, a: &Pairs, b: &Pairs) {
    let (ra, rb) = (antichain(l, VERTICES, a), antichain(l, VERTICES, b));
    let (da, db) = (down(l, a), down(l, b));
    let join = stored(&ra.join(l, &rb));
    let meet = stored(&ra.meet(l, &rb));
    assert_eq!(down(l, &join), da.union(&db).copied().collect());
    assert_eq!(down(l, &meet), da.intersection(&db).copied().collect());
    for v in 0..VERTICES {
        for k in l.ids() {
            assert_eq!(ra.dominated(l, v, &k), da.contains(&(v, k)));
        }
    }
}

// ---- predecessor operators -----------------------------------------------

pub type PairSet = BTreeSet<(usize, LatticeId)>;

/// The fig1 fixture followed by random arenas, with their lattices.
pub fn small_arenas() -> &'static [(ReachGame, Lattice)] {
    static ALL: OnceLock<Vec<(ReachGame, Lattice)>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut games = vec![fig1()];
        while games.len() < 120 {
            games.push(random_arena(&mut rng, &RandomArenaParams::default()));
        }
        games
            .into_iter()
            .map(|g| {
                let l = Lattice::build(&g.arena).unwrap();
                (g, l)
            })
            .collect()
    })
}

pub fn arenas(max_lattice: usize) -> impl Iterator<Item = (&'static ReachGame, &'static Lattice)> {
    small_arenas()
        .iter()
        .filter(move |(_, l)| l.len() <= max_lattice)
        .map(|(g, l)| (g, l))
}

pub fn random_pairs(rng: &mut ChaCha8Rng, g: &ReachGame, l: &Lattice, count: usize) -> PairSet {
    let ids: Vec<LatticeId> = l.ids().collect();
    let n = g.arena.vertex_count();
    let mut s: PairSet = (0..n).map(|v| (v, l.bottom())).collect();
    for _ in 0..count {
        s.insert((rng.gen_range(0..n), *ids.choose(rng).unwrap()));
    }
    s
}

pub fn down_set(l: &Lattice, s: &PairSet) -> PairSet {
    s.iter()
        .flat_map(|&(v, k)| l.ids().filter(move |&j| l.leq(j, k)).map(move |j| (v, j)))
        .collect()
}

pub fn antichain_of(l: &Lattice, n: usize, s: &PairSet) -> KnowledgeAntichain<LatticeId> {
    KnowledgeAntichain::from_pairs(l, n, s.iter().copied())
}

pub fn maxima(l: &Lattice, ks: &BTreeSet<LatticeId>) -> BTreeSet<LatticeId> {
    ks.iter().copied().filter(|&k| !ks.iter().any(|&j| j != k && l.leq(k, j))).collect()
}

/// `{K : ∀v'. (v', K ∩ ∇(v,a,v')) ∈ S}` taken literally.
pub fn kpred_k_brute(l: &Lattice, arena: &ParamArena, v: usize, a: ActionId, s: &PairSet) -> BTreeSet<LatticeId> {
    l.ids()
        .filter(|&k| {
            (0..arena.vertex_count()).all(|w| {
                let meet = l.elem(k).intersect(&arena.nabla(v, a, w));
                s.contains(&(w, l.id_of(&meet)))
            })
        })
        .collect()
}

/// All `⋃_{V'} ∇(v,a,V') ∩ ⋂_{v'∈V'} K_v'` over choices `(v', K_v') ∈ S`.
pub fn kpred_alt_brute(l: &Lattice, arena: &ParamArena, v: usize, a: ActionId, s: &PairSet) -> BTreeSet<LatticeId> {
    let succ = arena.successors(v, a);
    let blocks = arena.partition(v, a);
    let options: Vec<Vec<LatticeId>> = succ
        .iter()
        .map(|&w| s.iter().filter(|p| p.0 == w).map(|p| p.1).collect())
        .collect();
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; succ.len()];
    loop {
        let mut acc = IntervalSet::empty();
        for (members, block) in &blocks {
            let mut part = block.clone();
            for m in members {
                let i = succ.iter().position(|w| w == m).unwrap();
                part = part.intersect(l.elem(options[i][pick[i]]));
            }
            acc = acc.union(&part);
        }
        out.insert(l.id_of(&acc));
        let mut pos = 0;
        loop {
            if pos == pick.len() {
                return out;
            }
            pick[pos] += 1;
            if pick[pos] < options[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

pub fn for_each_action(g: &ReachGame, mut f: impl FnMut(usize, ActionId)) {
    for v in 0..g.arena.vertex_count() {
        for a in g.arena.enabled(v) {
            f(v, a);
        }
    }
}

/// The library operators match their literal definitions.
pub fn check_operator_definitions(g: &ReachGame, l: &Lattice, s: &PairSet) {
    let n = g.arena.vertex_count();
    let w = antichain_of(l, n, s);
    let st: PairSet = w.iter().map(|(v, &k)| (v, k)).collect();
    let closed = down_set(l, s);
    for_each_action(g, |v, a| {
        let got: BTreeSet<_> = kpred_k(l, &g.arena, v, a, &w).into_iter().collect();
        assert_eq!(got, maxima(l, &kpred_k_brute(l, &g.arena, v, a, &closed)));
        let alt: BTreeSet<_> = kpred_alt(l, &g.arena, v, a, &w).into_iter().collect();
        assert_eq!(maxima(l, &alt), maxima(l, &kpred_alt_brute(l, &g.arena, v, a, &st)));
    });
}

/// `KPred_K(S) ⊆ KPredAlt(S) ⊆ KPred_K(⌊S⌋)` literally, equality on
/// down-closed sets, and equal maxima for `S` and `⌊S⌋`.
pub fn check_operator_inclusions(g: &ReachGame, l: &Lattice, s: &PairSet) {
    let closed = down_set(l, s);
    for_each_action(g, |v, a| {
        let low = kpred_k_brute(l, &g.arena, v, a, s);
        let mid = kpred_alt_brute(l, &g.arena, v, a, s);
        let high = kpred_k_brute(l, &g.arena, v, a, &closed);
        assert!(low.is_subset(&mid), "{low:?} ⊄ {mid:?}");
        assert!(mid.is_subset(&high), "{mid:?} ⊄ {high:?}");
        let on_closed = kpred_alt_brute(l, &g.arena, v, a, &closed);
        assert_eq!(on_closed, high);
        assert_eq!(maxima(l, &mid), maxima(l, &on_closed));
    });
}

/// `S ⊑̃ S'` implies `KPredAlt(S) ⊑̃ KPredAlt(S')`.
pub fn check_monotone(rng: &mut ChaCha8Rng, g: &ReachGame, l: &Lattice) {
    let n = g.arena.vertex_count();
    let all: Vec<LatticeId> = l.ids().collect();
    let s = random_pairs(rng, g, l, 5);
    // Every pair is kept or enlarged, and more are added.
    let mut bigger: PairSet = s
        .iter()
        .map(|&(v, k)| {
            let up: Vec<LatticeId> = all.iter().copied().filter(|&j| l.leq(k, j)).collect();
            (v, *up.choose(rng).unwrap())
        })
        .collect();
    bigger.extend(random_pairs(rng, g, l, 3));
    let (w, w2) = (antichain_of(l, n, &s), antichain_of(l, n, &bigger));
    assert!(w.leq_sim(l, &w2));
    for_each_action(g, |v, a| {
        let large = kpred_alt(l, &g.arena, v, a, &w2);
        for k in kpred_alt(l, &g.arena, v, a, &w) {
            assert!(large.iter().any(|&j| l.leq(k, j)));
        }
    });
}

/// Membership in the limit matches the explicit solver on every lattice
/// element, and the explicit winning region is downward closed.
pub fn check_region(g: &ReachGame, l: &Lattice, limit: &KnowledgeAntichain<LatticeId>) {
    for v in 0..g.arena.vertex_count() {
        let mut wins = BTreeSet::new();
        for k in l.ids() {
            if k == l.bottom() {
                // No parameter value is left, so there is no play to lose.
                assert!(limit.dominated(l, v, &k));
                wins.insert(k);
                continue;
            }
            let kg = build_from(g, v, l.elem(k).clone(), Deadline::none()).unwrap();
            let explicit = attractor_solve(&kg, v, l.elem(k)).is_win();
            assert_eq!(limit.dominated(l, v, &k), explicit, "v={v} K={}", l.elem(k));
            if explicit {
                wins.insert(k);
            }
        }
        for &k in &wins {
            for j in l.ids().filter(|&j| l.leq(j, k)) {
                assert!(wins.contains(&j), "v={v}: {} wins but {} loses", l.elem(k), l.elem(j));
            }
        }
    }
}

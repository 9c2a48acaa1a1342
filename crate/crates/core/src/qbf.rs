//! Prenex-CNF quantified Boolean formulas: QDIMACS I/O, a brute-force
//! evaluator, random generation, and a reduction to parameterized
//! reachability games.
//!
//! The reduction uses the opponent count as a clause challenge. A count
//! `k ∈ [1, m]` names clause `k`; `k > m` names no clause. Eve assigns the
//! existential variables, Adam the universal ones (by nondeterminism).
//! After variable `x_i` is set to `b`, the checkpoint `c_i^b` sends every
//! count whose clause contains the literal `x_i = b` to the target and lets
//! the others continue. At the final vertex the counts of undischarged
//! clauses fall into a losing sink. Eve therefore wins for every count iff
//! her assignment strategy satisfies all clauses against every universal
//! assignment, that is iff the formula is true.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{ParamArena, ReachGame};
use crate::intervalset::IntervalSet;

/// Largest variable count accepted by [`QbfFormula::brute_eval`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    fn letter(self) -> char {
        match self {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("variable {0} is not quantified")]
    Undeclared(i64),
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {0} contains a variable and its negation")]
    Tautology(usize),
    #[error("{vars} variables exceed the brute-force limit of {limit}")]
    TooManyVariables { vars: usize, limit: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

/// A prenex-CNF formula over variables `1..=n`, quantified in index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QbfFormula {
    /// Quantifier of variable `i + 1`.
    prefix: Vec<Quantifier>,
    /// Literals are `±variable`, sorted by variable within a clause.
    clauses: Vec<Vec<i32>>,
}

impl QbfFormula {
    /// Checks the clause invariants and normalizes literal order.
    pub fn new(prefix: Vec<Quantifier>, clauses: Vec<Vec<i32>>) -> Result<Self, QbfError> {
        let n = prefix.len() as i64;
        let mut normalized = Vec::with_capacity(clauses.len());
        for (c, mut clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(QbfError::EmptyClause(c + 1));
            }
            for &lit in &clause {
                let var = (lit as i64).abs();
                if lit == 0 || var > n {
                    return Err(QbfError::Undeclared(lit as i64));
                }
            }
            clause.sort_by_key(|l| (l.abs(), *l));
            clause.dedup();
            if clause.windows(2).any(|w| w[0] == -w[1]) {
                return Err(QbfError::Tautology(c + 1));
            }
            normalized.push(clause);
        }
        Ok(QbfFormula {
            prefix,
            clauses: normalized,
        })
    }

    pub fn var_count(&self) -> usize {
        self.prefix.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn prefix(&self) -> &[Quantifier] {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Truth value by exhaustive expansion of the prefix.
    pub fn brute_eval(&self) -> Result<bool, QbfError> {
        if self.var_count() > BRUTE_FORCE_LIMIT {
            return Err(QbfError::TooManyVariables {
                vars: self.var_count(),
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        Ok(self.eval_from(0, 0))
    }

    fn eval_from(&self, depth: usize, assignment: u32) -> bool {
        if depth == self.prefix.len() {
            return self.clauses.iter().all(|clause| {
                clause.iter().any(|&lit| {
                    let value = assignment >> (lit.unsigned_abs() - 1) & 1 == 1;
                    value == (lit > 0)
                })
            });
        }
        let branch = |value: bool| self.eval_from(depth + 1, assignment | (u32::from(value) << depth));
        match self.prefix[depth] {
            Quantifier::Exists => branch(false) || branch(true),
            Quantifier::Forall => branch(false) && branch(true),
        }
    }

    /// QDIMACS text: header, one line per quantifier block, one per clause.
    pub fn to_qdimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.var_count(), self.clause_count());
        let mut i = 0;
        while i < self.prefix.len() {
            let q = self.prefix[i];
            let mut line = q.letter().to_string();
            while i < self.prefix.len() && self.prefix[i] == q {
                let _ = write!(line, " {}", i + 1);
                i += 1;
            }
            let _ = writeln!(out, "{line} 0");
        }
        for clause in &self.clauses {
            let lits: Vec<String> = clause.iter().map(i32::to_string).collect();
            let _ = writeln!(out, "{} 0", lits.join(" "));
        }
        out
    }
}

/// Parses QDIMACS, renumbering variables to their position in the prefix.
pub fn parse_qdimacs(text: &str) -> Result<QbfFormula, QbfError> {
    let syntax = |line: usize, message: &str| QbfError::Syntax {
        line,
        message: message.to_string(),
    };
    let mut header: Option<(usize, usize)> = None;
    let mut rename: std::collections::HashMap<i64, i32> = std::collections::HashMap::new();
    let mut prefix = Vec::new();
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let mut in_clauses = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('c') {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let first = tokens.next().unwrap_or("");
        if first == "p" {
            if header.is_some() {
                return Err(syntax(line, "repeated problem line"));
            }
            let parts: Vec<&str> = tokens.collect();
            let [kind, n, m] = parts.as_slice() else {
                return Err(syntax(line, "expected `p cnf <vars> <clauses>`"));
            };
            if *kind != "cnf" {
                return Err(syntax(line, "only the `cnf` format is supported"));
            }
            let n = n.parse().map_err(|_| syntax(line, "bad variable count"))?;
            let m = m.parse().map_err(|_| syntax(line, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(syntax(line, "content before the problem line"));
        };
        if first == "e" || first == "a" {
            if in_clauses {
                return Err(syntax(line, "quantifier block after the first clause"));
            }
            let q = if first == "e" { Quantifier::Exists } else { Quantifier::Forall };
            let mut closed = false;
            for tok in tokens {
                let var: i64 = tok.parse().map_err(|_| syntax(line, "bad variable"))?;
                if closed {
                    return Err(syntax(line, "tokens after terminating 0"));
                }
                if var == 0 {
                    closed = true;
                    continue;
                }
                if var < 0 || var as usize > n {
                    return Err(syntax(line, "variable outside the declared range"));
                }
                if rename.contains_key(&var) {
                    return Err(syntax(line, "variable quantified twice"));
                }
                prefix.push(q);
                rename.insert(var, prefix.len() as i32);
            }
            if !closed {
                return Err(syntax(line, "quantifier block not terminated by 0"));
            }
            continue;
        }
        in_clauses = true;
        for tok in content.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| syntax(line, "bad literal"))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut pending));
                continue;
            }
            let Some(&var) = rename.get(&lit.abs()) else {
                return Err(QbfError::Undeclared(lit));
            };
            pending.push(if lit > 0 { var } else { -var });
        }
    }
    let Some((_, m)) = header else {
        return Err(syntax(text.lines().count(), "missing problem line"));
    };
    if !pending.is_empty() {
        return Err(syntax(text.lines().count(), "last clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(syntax(
            text.lines().count(),
            &format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    QbfFormula::new(prefix, clauses)
}

/// Random formula with an alternating prefix starting with `∃`. Each clause
/// draws `width` distinct variables with independent random signs.
pub fn gen_random(n: usize, m: usize, width: usize, seed: u64) -> Result<QbfFormula, QbfError> {
    if n == 0 || m == 0 || width == 0 || width > n {
        return Err(QbfError::InvalidParameters(format!(
            "need n >= 1, m >= 1 and 1 <= width <= n (got n={n}, m={m}, width={width})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prefix = (0..n)
        .map(|i| if i % 2 == 0 { Quantifier::Exists } else { Quantifier::Forall })
        .collect();
    let clauses = (0..m)
        .map(|_| {
            sample(&mut rng, n, width)
                .into_iter()
                .map(|v| {
                    let var = v as i32 + 1;
                    if rng.gen_bool(0.5) {
                        var
                    } else {
                        -var
                    }
                })
                .collect()
        })
        .collect();
    QbfFormula::new(prefix, clauses)
}

/// Builds the clause-challenge game. Vertices, in order: `u1..un`, then
/// `c1T c1F ... cnT cnF`, then `f`, `s` and the target `t`; the initial
/// vertex is `u1`.
pub fn reduce_to_game(f: &QbfFormula) -> ReachGame {
    let n = f.var_count();
    let m = f.clause_count() as u64;
    let mut arena = ParamArena::new();
    let add_v = |arena: &mut ParamArena, name: String| arena.add_vertex(&name).expect("fresh name");
    let u: Vec<_> = (1..=n).map(|i| add_v(&mut arena, format!("u{i}"))).collect();
    let mut check = Vec::with_capacity(n);
    for i in 1..=n {
        let t_side = add_v(&mut arena, format!("c{i}T"));
        let f_side = add_v(&mut arena, format!("c{i}F"));
        check.push([t_side, f_side]);
    }
    let fin = add_v(&mut arena, "f".into());
    let sink = add_v(&mut arena, "s".into());
    let target = add_v(&mut arena, "t".into());

    let act = |arena: &mut ParamArena, name: &str| arena.add_action(name).expect("fresh name");
    let set_true = act(&mut arena, "T");
    let set_false = act(&mut arena, "F");
    let pick = act(&mut arena, "pick");
    let chk = act(&mut arena, "chk");
    let fin_act = act(&mut arena, "fin");
    let stay = act(&mut arena, "loop");

    let all = IntervalSet::full();
    for i in 0..n {
        match f.prefix()[i] {
            Quantifier::Exists => {
                arena.add_edge(u[i], set_true, check[i][0], &all);
                arena.add_edge(u[i], set_false, check[i][1], &all);
            }
            Quantifier::Forall => {
                arena.add_edge(u[i], pick, check[i][0], &all);
                arena.add_edge(u[i], pick, check[i][1], &all);
            }
        }
        let next = if i + 1 < n { u[i + 1] } else { fin };
        for (side, literal) in [(0, i as i32 + 1), (1, -(i as i32 + 1))] {
            let discharged = IntervalSet::from_intervals(
                f.clauses()
                    .iter()
                    .enumerate()
                    .filter(|(_, clause)| clause.contains(&literal))
                    .map(|(c, _)| (c as u64 + 1, Some(c as u64 + 1))),
            );
            arena.add_edge(check[i][side], chk, target, &discharged);
            arena.add_edge(check[i][side], chk, next, &discharged.complement());
        }
    }
    arena.add_edge(fin, fin_act, target, &IntervalSet::greater_than(m));
    arena.add_edge(fin, fin_act, sink, &IntervalSet::range(1, m));
    arena.add_edge(sink, stay, sink, &all);

    ReachGame::new(arena, target).with_initial(u[0])
}

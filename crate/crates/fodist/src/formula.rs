//! First-order formulas over the graph vocabulary: adjacency `E` and
//! equality `=`.
//!
//! The AST is immutable and pure. `And` and `Or` take arbitrarily many
//! children; the empty conjunction is *true* and the empty disjunction is
//! *false*. Variables are 0-based indices internally and display 1-based as
//! `x1, x2, …`. The text form is parenthesized prefix notation, e.g.
//! `(exists x1 (and (not (= x1 x2)) (E x1 x2)))`; the parser accepts exactly
//! what the printer emits, plus `true`/`false` as sugar for `(and)`/`(or)`.
//!
//! Rank and alternation are defined through *nest sequences*: the set of
//! quantifier words read along root-to-leaf paths, with negation flipping
//! every letter along the way. Quantifier rank is the longest such word,
//! alternation number the most letter changes inside one word. Negation
//! normal form preserves the nest-sequence set exactly, hence both measures.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use crate::graph::Graph;

/// A first-order variable; displays 1-based as `x1, x2, …`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub usize);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// A first-order formula over graphs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    /// Adjacency atom `E(u, v)`.
    Adj(Var, Var),
    /// Equality atom `u = v`.
    Eq(Var, Var),
    Not(Box<Formula>),
    /// Conjunction; empty means *true*.
    And(Vec<Formula>),
    /// Disjunction; empty means *false*.
    Or(Vec<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

/// One letter of a nest sequence.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    fn flip(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

impl Formula {
    /// The empty conjunction, i.e. *true*.
    pub fn tru() -> Formula {
        Formula::And(Vec::new())
    }

    /// The empty disjunction, i.e. *false*.
    pub fn fls() -> Formula {
        Formula::Or(Vec::new())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    /// Quantifier rank: deepest nesting of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Adj(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_rank).max().unwrap_or(0)
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    /// The set of nest sequences: quantifier words along root-to-leaf paths,
    /// every letter flipped under each enclosing negation. Quantifier-free
    /// formulas contribute the empty word.
    pub fn nest_sequences(&self) -> BTreeSet<Vec<Quant>> {
        match self {
            Formula::Adj(..) | Formula::Eq(..) => [Vec::new()].into(),
            Formula::Not(f) => f
                .nest_sequences()
                .into_iter()
                .map(|s| s.into_iter().map(Quant::flip).collect())
                .collect(),
            Formula::And(fs) | Formula::Or(fs) => {
                let mut out: BTreeSet<Vec<Quant>> = fs
                    .iter()
                    .flat_map(|f| f.nest_sequences())
                    .collect();
                if out.is_empty() {
                    out.insert(Vec::new());
                }
                out
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => {
                let letter = if matches!(self, Formula::Exists(..)) {
                    Quant::Exists
                } else {
                    Quant::Forall
                };
                f.nest_sequences()
                    .into_iter()
                    .map(|s| {
                        let mut t = Vec::with_capacity(s.len() + 1);
                        t.push(letter);
                        t.extend(s);
                        t
                    })
                    .collect()
            }
        }
    }

    /// Alternation number: the most changes of letter within one nest
    /// sequence. Purely existential (or universal) formulas score 0.
    pub fn alternation_number(&self) -> usize {
        self.nest_sequences()
            .iter()
            .map(|s| s.windows(2).filter(|w| w[0] != w[1]).count())
            .max()
            .unwrap_or(0)
    }

    /// Free variables of the formula.
    pub fn free_variables(&self) -> BTreeSet<Var> {
        match self {
            Formula::Adj(u, v) | Formula::Eq(u, v) => [*u, *v].into(),
            Formula::Not(f) => f.free_variables(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().flat_map(Formula::free_variables).collect()
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let mut s = f.free_variables();
                s.remove(v);
                s
            }
        }
    }

    /// Model checking on a graph. The formula must be a sentence.
    pub fn evaluate(&self, g: &Graph) -> Result<bool, FormulaError> {
        if let Some(&v) = self.free_variables().iter().next() {
            return Err(FormulaError::OpenFormula { var: v });
        }
        let mut env = Vec::new();
        Ok(self.eval_in(g, &mut env))
    }

    fn eval_in(&self, g: &Graph, env: &mut Vec<(Var, usize)>) -> bool {
        // Innermost binding wins, so lookups scan from the back.
        let lookup = |env: &[(Var, usize)], v: Var| -> usize {
            env.iter()
                .rev()
                .find(|(w, _)| *w == v)
                .map(|&(_, a)| a)
                .expect("closedness was checked before evaluation")
        };
        match self {
            Formula::Adj(u, v) => g.has_edge(lookup(env, *u), lookup(env, *v)),
            Formula::Eq(u, v) => lookup(env, *u) == lookup(env, *v),
            Formula::Not(f) => !f.eval_in(g, env),
            Formula::And(fs) => fs.iter().all(|f| f.eval_in(g, env)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_in(g, env)),
            Formula::Exists(v, f) => (0..g.order()).any(|a| {
                env.push((*v, a));
                let r = f.eval_in(g, env);
                env.pop();
                r
            }),
            Formula::Forall(v, f) => (0..g.order()).all(|a| {
                env.push((*v, a));
                let r = f.eval_in(g, env);
                env.pop();
                r
            }),
        }
    }

    /// Negation normal form: negations pushed onto atoms. Preserves the
    /// nest-sequence set, hence quantifier rank and alternation number.
    pub fn to_nnf(&self) -> Formula {
        fn nnf(f: &Formula, neg: bool) -> Formula {
            match (f, neg) {
                (Formula::Adj(..) | Formula::Eq(..), false) => f.clone(),
                (Formula::Adj(..) | Formula::Eq(..), true) => Formula::not(f.clone()),
                (Formula::Not(g), _) => nnf(g, !neg),
                (Formula::And(fs), false) => {
                    Formula::And(fs.iter().map(|g| nnf(g, false)).collect())
                }
                (Formula::And(fs), true) => Formula::Or(fs.iter().map(|g| nnf(g, true)).collect()),
                (Formula::Or(fs), false) => Formula::Or(fs.iter().map(|g| nnf(g, false)).collect()),
                (Formula::Or(fs), true) => Formula::And(fs.iter().map(|g| nnf(g, true)).collect()),
                (Formula::Exists(v, g), false) => Formula::exists(*v, nnf(g, false)),
                (Formula::Exists(v, g), true) => Formula::forall(*v, nnf(g, true)),
                (Formula::Forall(v, g), false) => Formula::forall(*v, nnf(g, false)),
                (Formula::Forall(v, g), true) => Formula::exists(*v, nnf(g, true)),
            }
        }
        nnf(self, false)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Adj(u, v) => write!(f, "(E {u} {v})"),
            Formula::Eq(u, v) => write!(f, "(= {u} {v})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(fs) | Formula::Or(fs) => {
                let op = if matches!(self, Formula::And(_)) { "and" } else { "or" };
                write!(f, "({op}")?;
                for g in fs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

/// Errors from formula evaluation and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("formula is open: variable {var} occurs free")]
    OpenFormula { var: Var },
    #[error("parse error at token {pos}: expected {expected}, found {found:?}")]
    Unexpected { pos: usize, expected: &'static str, found: String },
    #[error("parse error: input ended early, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("parse error: trailing input after formula, starting with {found:?}")]
    TrailingInput { found: String },
    #[error("parse error at token {pos}: {found:?} is not a variable (expected x1, x2, …)")]
    BadVariable { pos: usize, found: String },
}

/// Parses the prefix text form. The grammar is exactly the printer's output:
/// `(E xi xj)`, `(= xi xj)`, `(not F)`, `(and F…)`, `(or F…)`,
/// `(exists xi F)`, `(forall xi F)`, plus bare `true` / `false`.
pub fn parse_formula(input: &str) -> Result<Formula, FormulaError> {
    let tokens = tokenize(input);
    let mut pos = 0;
    let f = parse_expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(FormulaError::TrailingInput { found: tokens[pos].clone() });
    }
    Ok(f)
}

fn tokenize(input: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in input.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_var(tokens: &[String], pos: &mut usize) -> Result<Var, FormulaError> {
    let t = tokens.get(*pos).ok_or(FormulaError::UnexpectedEnd { expected: "variable" })?;
    let idx: Option<usize> = t.strip_prefix('x').and_then(|d| d.parse().ok());
    match idx {
        Some(i) if i >= 1 => {
            *pos += 1;
            Ok(Var(i - 1))
        }
        _ => Err(FormulaError::BadVariable { pos: *pos, found: t.clone() }),
    }
}

fn expect(tokens: &[String], pos: &mut usize, what: &'static str) -> Result<(), FormulaError> {
    match tokens.get(*pos) {
        Some(t) if t == what => {
            *pos += 1;
            Ok(())
        }
        Some(t) => Err(FormulaError::Unexpected { pos: *pos, expected: what, found: t.clone() }),
        None => Err(FormulaError::UnexpectedEnd { expected: what }),
    }
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Formula, FormulaError> {
    let t = tokens.get(*pos).ok_or(FormulaError::UnexpectedEnd { expected: "formula" })?;
    match t.as_str() {
        "true" => {
            *pos += 1;
            Ok(Formula::tru())
        }
        "false" => {
            *pos += 1;
            Ok(Formula::fls())
        }
        "(" => {
            *pos += 1;
            let head =
                tokens.get(*pos).ok_or(FormulaError::UnexpectedEnd { expected: "operator" })?;
            let head_pos = *pos;
            *pos += 1;
            let f = match head.as_str() {
                "E" | "=" => {
                    let u = parse_var(tokens, pos)?;
                    let v = parse_var(tokens, pos)?;
                    if head == "E" {
                        Formula::Adj(u, v)
                    } else {
                        Formula::Eq(u, v)
                    }
                }
                "not" => Formula::not(parse_expr(tokens, pos)?),
                "and" | "or" => {
                    let mut fs = Vec::new();
                    while tokens.get(*pos).map(String::as_str) != Some(")") {
                        if tokens.get(*pos).is_none() {
                            return Err(FormulaError::UnexpectedEnd { expected: ")" });
                        }
                        fs.push(parse_expr(tokens, pos)?);
                    }
                    if head == "and" {
                        Formula::And(fs)
                    } else {
                        Formula::Or(fs)
                    }
                }
                "exists" | "forall" => {
                    let v = parse_var(tokens, pos)?;
                    let body = parse_expr(tokens, pos)?;
                    if head == "exists" {
                        Formula::exists(v, body)
                    } else {
                        Formula::forall(v, body)
                    }
                }
                other => {
                    return Err(FormulaError::Unexpected {
                        pos: head_pos,
                        expected: "operator (E, =, not, and, or, exists, forall)",
                        found: other.to_string(),
                    })
                }
            };
            expect(tokens, pos, ")")?;
            Ok(f)
        }
        other => Err(FormulaError::Unexpected {
            pos: *pos,
            expected: "formula",
            found: other.to_string(),
        }),
    }
}

/// The canonical distinguishing sentence of a graph: `n` existentials naming
/// every vertex, with pairwise distinctness and the full edge/non-edge
/// pattern. Rank `n`; true on the graph, false on every non-isomorphic graph
/// of the same order.
pub fn canonical_distinguishing_formula(g: &Graph) -> Formula {
    let n = g.order();
    Formula::And(vec![body_of(g)])
        .quantify_outer(n)
}

/// The canonical defining sentence: the distinguishing sentence with one more
/// universal quantifier asserting there are no further vertices. Rank `n + 1`;
/// true exactly on graphs isomorphic to the input, at any order.
pub fn canonical_defining_formula(g: &Graph) -> Formula {
    let n = g.order();
    let extra = Var(n);
    let closed = Formula::forall(
        extra,
        Formula::Or((0..n).map(|i| Formula::Eq(extra, Var(i))).collect()),
    );
    Formula::And(vec![body_of(g), closed]).quantify_outer(n)
}

fn body_of(g: &Graph) -> Formula {
    let n = g.order();
    let mut conj = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            conj.push(Formula::not(Formula::Eq(Var(u), Var(v))));
            if g.has_edge(u, v) {
                conj.push(Formula::Adj(Var(u), Var(v)));
            } else {
                conj.push(Formula::not(Formula::Adj(Var(u), Var(v))));
            }
        }
    }
    Formula::And(conj)
}

impl Formula {
    /// Wraps the formula in `∃x1 … ∃xn`, innermost quantifier last.
    fn quantify_outer(self, n: usize) -> Formula {
        let mut f = match self {
            // Unwrap the singleton conjunctions the builders use for grouping.
            Formula::And(mut fs) if fs.len() == 1 => fs.pop().unwrap(),
            other => other,
        };
        for i in (0..n).rev() {
            f = Formula::exists(Var(i), f);
        }
        f
    }
}

/// Renames bound variables so that a sentence of quantifier rank `r` uses
/// only `x1 … xr`, following the inductive scheme behind variable reuse: at
/// each quantifier, the new name is the smallest index not carried by a
/// variable still free in the body. Free variables of live scopes always hold
/// pairwise distinct names, so the renaming is capture-free; along any path
/// the names in scope number at most `r`, which bounds every chosen index by
/// `r`. Structure is untouched, so rank and alternation are preserved.
pub fn reduce_variables(f: &Formula) -> Formula {
    fn go(f: &Formula, env: &[(Var, Var)]) -> Formula {
        let rename = |v: Var| -> Var {
            env.iter().rev().find(|(old, _)| *old == v).map(|&(_, new)| new).unwrap_or(v)
        };
        match f {
            Formula::Adj(u, v) => Formula::Adj(rename(*u), rename(*v)),
            Formula::Eq(u, v) => Formula::Eq(rename(*u), rename(*v)),
            Formula::Not(g) => Formula::not(go(g, env)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| go(g, env)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| go(g, env)).collect()),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let live: BTreeSet<usize> = body
                    .free_variables()
                    .into_iter()
                    .filter(|w| w != v)
                    .map(|w| rename(w).0)
                    .collect();
                let fresh = (0..).find(|i| !live.contains(i)).unwrap();
                let mut env2 = env.to_vec();
                env2.push((*v, Var(fresh)));
                let inner = go(body, &env2);
                if matches!(f, Formula::Exists(..)) {
                    Formula::exists(Var(fresh), inner)
                } else {
                    Formula::forall(Var(fresh), inner)
                }
            }
        }
    }
    go(f, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::graphs_up_to_iso;
    use crate::graph::is_isomorphic;
    use proptest::prelude::*;

    fn parse(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn display_matches_expected_text() {
        let f = Formula::exists(
            Var(0),
            Formula::And(vec![
                Formula::not(Formula::Eq(Var(0), Var(1))),
                Formula::Adj(Var(0), Var(1)),
            ]),
        );
        assert_eq!(f.to_string(), "(exists x1 (and (not (= x1 x2)) (E x1 x2)))");
        assert_eq!(parse(&f.to_string()), f);
    }

    #[test]
    fn parser_handles_sugar_and_errors() {
        assert_eq!(parse("true"), Formula::tru());
        assert_eq!(parse("false"), Formula::fls());
        assert_eq!(parse("(and)"), Formula::tru());
        assert_eq!(parse("(or)"), Formula::fls());
        assert!(parse_formula("(exists y1 true)").is_err());
        assert!(parse_formula("(exists x0 true)").is_err());
        assert!(parse_formula("(and true) junk").is_err());
        assert!(parse_formula("(nand true true)").is_err());
        assert!(parse_formula("(exists x1").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn rank_and_alternation_basics() {
        // ∃x1 ∀x2 ∃x3 E(x1,x3): rank 3, alternations ∃∀∃ = 2.
        let f = parse("(exists x1 (forall x2 (exists x3 (E x1 x3))))");
        assert_eq!(f.quantifier_rank(), 3);
        assert_eq!(f.alternation_number(), 2);
        // Negating flips the letters but not the change count.
        assert_eq!(Formula::not(f.clone()).alternation_number(), 2);
        // Purely existential: alternation 0.
        let g = parse("(exists x1 (exists x2 (E x1 x2)))");
        assert_eq!(g.alternation_number(), 0);
        assert_eq!(Formula::tru().quantifier_rank(), 0);
        // Under negation the branch letters flip: ¬(∃ ∧ ∀) has sequences {∀, ∃}.
        let h = Formula::not(Formula::And(vec![
            parse("(exists x1 (= x1 x1))"),
            parse("(forall x1 (= x1 x1))"),
        ]));
        let seqs = h.nest_sequences();
        assert!(seqs.contains(&vec![Quant::Forall]));
        assert!(seqs.contains(&vec![Quant::Exists]));
    }

    #[test]
    fn evaluate_rejects_open_formulas() {
        let f = parse("(E x1 x2)");
        assert_eq!(
            f.evaluate(&Graph::complete(2)),
            Err(FormulaError::OpenFormula { var: Var(0) })
        );
    }

    #[test]
    fn evaluate_respects_shadowing() {
        // ∃x1 ∀x1 (x1 = x1) — inner binding shadows the outer.
        let f = parse("(exists x1 (forall x1 (= x1 x1)))");
        assert_eq!(f.evaluate(&Graph::complete(2)), Ok(true));
        // ∃x1 (¬E(x1,x1) relative to itself is always false in simple graphs).
        let g = parse("(exists x1 (E x1 x1))");
        assert_eq!(g.evaluate(&Graph::complete(3)), Ok(false));
    }

    #[test]
    fn distinguishing_formula_separates_same_order_pairs() {
        let k3 = Graph::complete(3);
        let p3 = Graph::path(3);
        let f = canonical_distinguishing_formula(&k3);
        assert_eq!(f.quantifier_rank(), 3);
        assert_eq!(f.evaluate(&k3), Ok(true));
        assert_eq!(f.evaluate(&p3), Ok(false));

        let g = Graph::complete(2).disjoint_union(&Graph::empty(2));
        let h = Graph::complete(3).disjoint_union(&Graph::empty(1));
        let fg = canonical_distinguishing_formula(&g);
        assert_eq!(fg.quantifier_rank(), 4);
        assert_eq!(fg.evaluate(&g), Ok(true));
        assert_eq!(fg.evaluate(&h), Ok(false));
    }

    #[test]
    fn distinguishing_formula_exhaustive_small_orders() {
        for n in 0..=4 {
            let gs = graphs_up_to_iso(n);
            for g in gs {
                let f = canonical_distinguishing_formula(g);
                assert_eq!(f.quantifier_rank(), n);
                assert_eq!(f.evaluate(g), Ok(true));
                for h in gs {
                    if is_isomorphic(g, h).is_none() {
                        assert_eq!(f.evaluate(h), Ok(false), "n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn defining_formula_pins_the_isomorphism_class() {
        let k3 = Graph::complete(3);
        let f = canonical_defining_formula(&k3);
        assert_eq!(f.quantifier_rank(), 4);
        assert_eq!(f.evaluate(&k3), Ok(true));
        assert_eq!(f.evaluate(&Graph::complete(4)), Ok(false));

        let e1 = Graph::empty(1);
        let f1 = canonical_defining_formula(&e1);
        assert_eq!(f1.quantifier_rank(), 2);
        assert_eq!(f1.evaluate(&e1), Ok(true));
        assert_eq!(f1.evaluate(&Graph::empty(0)), Ok(false));
        assert_eq!(f1.evaluate(&Graph::empty(2)), Ok(false));
        assert_eq!(f1.evaluate(&Graph::complete(2)), Ok(false));

        let e4 = Graph::empty(4);
        let f4 = canonical_defining_formula(&e4);
        assert_eq!(f4.quantifier_rank(), 5);
        assert_eq!(f4.evaluate(&Graph::empty(5)), Ok(false));
    }

    #[test]
    fn defining_formula_exhaustive_small_orders() {
        for n in 0..=3 {
            for g in graphs_up_to_iso(n) {
                let f = canonical_defining_formula(g);
                assert_eq!(f.evaluate(g), Ok(true));
                for m in 0..=(n + 2).min(5) {
                    for h in graphs_up_to_iso(m) {
                        let expect = is_isomorphic(g, h).is_some();
                        assert_eq!(f.evaluate(h), Ok(expect), "g order {n}, h order {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn reduce_variables_renames_into_rank_window() {
        // Wasteful naming: ∃x5 ∀x9 E(x5,x9) has rank 2, needs only x1, x2.
        let f = parse("(exists x5 (forall x9 (E x5 x9)))");
        let r = reduce_variables(&f);
        assert_eq!(r.to_string(), "(exists x1 (forall x2 (E x1 x2)))");
        assert_eq!(r.quantifier_rank(), f.quantifier_rank());
        // Sibling quantifiers can share a name.
        let g = parse("(and (exists x3 (= x3 x3)) (exists x7 (= x7 x7)))");
        let rg = reduce_variables(&g);
        assert_eq!(rg.to_string(), "(and (exists x1 (= x1 x1)) (exists x1 (= x1 x1)))");
        // Quantifier-free formulas pass through unchanged.
        let qf = parse("(and true false)");
        assert_eq!(reduce_variables(&qf), qf);
    }

    // Random sentences: every atom only mentions variables bound in scope.
    // `depth` bounds both quantifier nesting and connective nesting.
    fn arb_sentence() -> impl Strategy<Value = Formula> {
        fn node(depth: u32, scope: Vec<usize>) -> BoxedStrategy<Formula> {
            let atoms = if scope.is_empty() {
                prop_oneof![Just(Formula::tru()), Just(Formula::fls())].boxed()
            } else {
                let s1 = scope.clone();
                let s2 = scope.clone();
                prop_oneof![
                    (0..s1.len(), 0..s1.len()).prop_map(move |(i, j)| {
                        Formula::Adj(Var(s1[i]), Var(s1[j]))
                    }),
                    (0..s2.len(), 0..s2.len()).prop_map(move |(i, j)| {
                        Formula::Eq(Var(s2[i]), Var(s2[j]))
                    }),
                ]
                .boxed()
            };
            if depth == 0 {
                return atoms;
            }
            let quant = {
                let scope = scope.clone();
                // New name from 0..=max+1 so shadowing genuinely occurs.
                (0..=scope.iter().copied().max().map_or(0, |m| m + 1), any::<bool>())
                    .prop_flat_map(move |(name, is_exists)| {
                        let mut inner = scope.clone();
                        if !inner.contains(&name) {
                            inner.push(name);
                        }
                        node(depth - 1, inner).prop_map(move |body| {
                            if is_exists {
                                Formula::exists(Var(name), body)
                            } else {
                                Formula::forall(Var(name), body)
                            }
                        })
                    })
                    .boxed()
            };
            let junction = {
                let scope = scope.clone();
                (proptest::collection::vec(node(depth - 1, scope), 0..3), any::<bool>())
                    .prop_map(|(fs, is_and)| {
                        if is_and {
                            Formula::And(fs)
                        } else {
                            Formula::Or(fs)
                        }
                    })
                    .boxed()
            };
            let negation = node(depth - 1, scope).prop_map(Formula::not).boxed();
            prop_oneof![2 => atoms, 3 => quant, 2 => junction, 1 => negation].boxed()
        }
        node(3, Vec::new())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_equals_longest_nest_sequence(f in arb_sentence()) {
            let by_seq = f.nest_sequences().iter().map(Vec::len).max().unwrap_or(0);
            prop_assert_eq!(f.quantifier_rank(), by_seq);
        }

        #[test]
        fn nnf_preserves_nest_sequences_and_truth(f in arb_sentence()) {
            let g = f.to_nnf();
            prop_assert_eq!(f.nest_sequences(), g.nest_sequences());
            prop_assert_eq!(f.alternation_number(), g.alternation_number());
            for n in 0..=3 {
                for h in graphs_up_to_iso(n) {
                    prop_assert_eq!(f.evaluate(h), g.evaluate(h));
                }
            }
        }

        #[test]
        fn print_parse_round_trip(f in arb_sentence()) {
            prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn reduce_variables_is_sound(f in arb_sentence()) {
            let r = reduce_variables(&f);
            let rank = f.quantifier_rank();
            prop_assert_eq!(r.quantifier_rank(), rank);
            // Every bound name lies in {x1, …, x_rank} (0-based: < rank).
            fn max_bound(f: &Formula) -> Option<usize> {
                match f {
                    Formula::Adj(..) | Formula::Eq(..) => None,
                    Formula::Not(g) => max_bound(g),
                    Formula::And(fs) | Formula::Or(fs) => {
                        fs.iter().filter_map(max_bound).max()
                    }
                    Formula::Exists(v, g) | Formula::Forall(v, g) => {
                        Some(max_bound(g).map_or(v.0, |m| m.max(v.0)))
                    }
                }
            }
            if let Some(m) = max_bound(&r) {
                prop_assert!(m < rank, "bound name x{} exceeds rank {}", m + 1, rank);
            }
            for n in 0..=4 {
                for h in graphs_up_to_iso(n) {
                    prop_assert_eq!(f.evaluate(h), r.evaluate(h));
                }
            }
        }
    }
}

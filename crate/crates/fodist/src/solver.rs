//! Exact game-theoretic computation of the distinguishability measures:
//! the distinguishing rank `D(G, G′)`, its alternation-bounded variants
//! `D^k`, the pebble number `V(G, G′)`, the identification rank `I(G)`, an
//! optimal-Duplicator reply oracle, and extraction of an optimal
//! distinguishing formula from Spoiler's winning strategy.
//!
//! The round-bounded game: each round Spoiler places a fresh pebble on a
//! vertex of either structure (re-placing an already-pebbled vertex is never
//! useful and is skipped), Duplicator answers with the twin pebble in the
//! other structure, and Duplicator survives as long as the pebbled pairs form
//! a partial isomorphism respecting equalities. `D` is the least number of
//! rounds in which Spoiler can force a violation; `D^k` additionally limits
//! how often Spoiler may switch structures between rounds (the first round
//! sets the structure free of charge). The pebble game allows Spoiler to lift
//! and re-place pebbles with unboundedly many rounds; `V` is the least number
//! of pebbles with which he still wins, computed as a greatest fixpoint.
//!
//! Search keys are canonicalized by similarity classes: permuting vertices
//! inside one similarity class is an automorphism, so two alive
//! configurations whose pebble pairs induce the same multiset of
//! (class-in-G, class-in-G′) pairs have the same game value. The orbit key
//! collapses the bulk of the search space on highly symmetric inputs; a
//! constructor flag disables it for cross-checking.

use std::collections::HashMap;

use thiserror::Error;

use crate::catalog::{graphs_up_to_iso, MAX_CATALOG_ORDER};
use crate::formula::{Formula, Var};
use crate::graph::{is_isomorphic, Graph};
use crate::similarity::similarity_partition;

/// Hard cap on input order: vertex ids and pebble masks are stored compactly.
pub const MAX_SOLVER_ORDER: usize = 62;

/// Largest order for which the identification rank is computed exhaustively.
pub const MAX_IDENTIFICATION_ORDER: usize = 6;

/// The structure Spoiler plays in: left is the first graph, right the second.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// A position of the round-bounded game: the pebbled pairs, which structure
/// Spoiler used last, and how many structure switches he may still afford.
#[derive(Clone, Debug)]
pub struct GameConfig {
    pairs: Vec<(usize, usize)>,
    side_last: Option<Side>,
    alternations_left: Option<usize>,
}

impl GameConfig {
    /// A configuration with the given pebble pairs (`(u in G, u′ in G′)`),
    /// sorted and deduplicated, with unrestricted alternation.
    pub fn new(
        pairs: Vec<(usize, usize)>,
        side_last: Option<Side>,
        alternations_left: Option<usize>,
    ) -> GameConfig {
        let mut pairs = pairs;
        pairs.sort_unstable();
        pairs.dedup();
        GameConfig { pairs, side_last, alternations_left }
    }

    /// The opening position: no pebbles, no structure chosen, no budget spent.
    pub fn empty() -> GameConfig {
        GameConfig { pairs: Vec::new(), side_last: None, alternations_left: None }
    }

    /// The opening position of the `k`-alternation game.
    pub fn empty_with_alternations(k: usize) -> GameConfig {
        GameConfig { pairs: Vec::new(), side_last: None, alternations_left: Some(k) }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Whether the pairing is a partial isomorphism respecting equalities.
    pub fn is_alive(&self, g: &Graph, h: &Graph) -> bool {
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            for &(c, d) in &self.pairs[i + 1..] {
                if (a == c) != (b == d) {
                    return false;
                }
                if a != c && g.has_edge(a, c) != h.has_edge(b, d) {
                    return false;
                }
            }
        }
        true
    }
}

/// Search statistics of one solve.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveStats {
    /// Positions expanded (memo misses).
    pub nodes_expanded: u64,
    /// Distinct memoized positions.
    pub memo_entries: usize,
}

/// Result of a rank computation.
#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Least number of rounds in which Spoiler forces a win.
    pub rank: usize,
    /// Least alternation budget in {0, 1} that still achieves `rank`, when
    /// one of them does; `None` means more than one alternation is needed.
    pub alternations_used: Option<usize>,
    /// A distinguishing formula, when extraction was requested.
    pub formula: Option<Formula>,
    pub stats: SolveStats,
}

/// A round/alternation budget for formula extraction.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub rounds: usize,
    /// `None` is unrestricted.
    pub alternations: Option<usize>,
}

/// Errors from the solver entry points.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("the graphs are isomorphic, so no distinguishing measure exists")]
    IsomorphicInputs,
    #[error("order {order} exceeds the solver cap of {max} vertices")]
    OrderTooLarge { order: usize, max: usize },
    #[error("configuration pair ({u}, {v}) is out of range")]
    InvalidConfig { u: usize, v: usize },
    #[error("Spoiler cannot win within {rounds} rounds and {alternations:?} alternations")]
    BudgetInsufficient { rounds: usize, alternations: Option<usize> },
    #[error(
        "identification rank enumerates all graphs of order {order}; \
         supported only up to order {max}"
    )]
    IdentificationOrderTooLarge { order: usize, max: usize },
}

const SIDE_NONE: u8 = 2;

fn side_code(s: Option<Side>) -> u8 {
    match s {
        Some(Side::Left) => 0,
        Some(Side::Right) => 1,
        None => SIDE_NONE,
    }
}

/// What Duplicator knows about one memoized position: she survives any game
/// of at most `lose_upto` rounds, Spoiler wins any game of at least
/// `win_from` rounds. Monotonicity in the round budget makes the two
/// thresholds exhaustive, and lets iterative deepening reuse entries.
#[derive(Clone, Copy)]
struct Entry {
    lose_upto: u8,
    win_from: u8,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    /// One word per pebble pair: high byte the left label, low byte the
    /// right label (class indices with canonicalization, vertex ids without).
    pairs: Vec<u16>,
    /// `side_last` (2 bits) and the clamped alternation budget.
    meta: u16,
}

/// The memoizing game solver for one fixed pair of graphs.
pub struct GameSolver<'a> {
    g: &'a Graph,
    h: &'a Graph,
    gclass: Vec<u16>,
    hclass: Vec<u16>,
    canonicalize: bool,
    memo: HashMap<Key, Entry>,
    nodes_expanded: u64,
}

impl<'a> GameSolver<'a> {
    /// A solver with similarity-orbit canonicalization enabled.
    pub fn new(g: &'a Graph, h: &'a Graph) -> Result<GameSolver<'a>, SolverError> {
        GameSolver::with_canonicalization(g, h, true)
    }

    /// A solver with the orbit-key optimization explicitly on or off; results
    /// are identical either way (verified by tests), only speed differs.
    pub fn with_canonicalization(
        g: &'a Graph,
        h: &'a Graph,
        canonicalize: bool,
    ) -> Result<GameSolver<'a>, SolverError> {
        for gr in [g, h] {
            if gr.order() > MAX_SOLVER_ORDER {
                return Err(SolverError::OrderTooLarge {
                    order: gr.order(),
                    max: MAX_SOLVER_ORDER,
                });
            }
        }
        let class_vec = |gr: &Graph| -> Vec<u16> {
            let part = similarity_partition(gr);
            (0..gr.order()).map(|v| part.class_index(v) as u16).collect()
        };
        Ok(GameSolver {
            g,
            h,
            gclass: class_vec(g),
            hclass: class_vec(h),
            canonicalize,
            memo: HashMap::new(),
            nodes_expanded: 0,
        })
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats { nodes_expanded: self.nodes_expanded, memo_entries: self.memo.len() }
    }

    fn key(&self, pairs: &[(u8, u8)], side_last: u8, alt: u8) -> Key {
        let mut words: Vec<u16> = pairs
            .iter()
            .map(|&(a, b)| {
                if self.canonicalize {
                    self.gclass[a as usize] << 8 | self.hclass[b as usize]
                } else {
                    (a as u16) << 8 | b as u16
                }
            })
            .collect();
        words.sort_unstable();
        Key { pairs: words, meta: (side_last as u16) << 8 | alt as u16 }
    }

    /// Whether appending the pair `(a, b)` keeps the position alive. Both
    /// vertices are unpebbled on their sides, so only adjacency can break.
    fn extend_alive(&self, pairs: &[(u8, u8)], a: usize, b: usize) -> bool {
        pairs.iter().all(|&(c, d)| {
            self.g.has_edge(a, c as usize) == self.h.has_edge(b, d as usize)
        })
    }

    /// Core search: does Spoiler win within `r` rounds from this alive
    /// position? `pairs` may be in any order; pebble masks mirror it.
    fn solve(
        &mut self,
        pairs: &mut Vec<(u8, u8)>,
        gmask: u64,
        hmask: u64,
        r: u8,
        side_last: u8,
        alt: u8,
    ) -> bool {
        if r == 0 {
            return false;
        }
        // More switches than remaining rounds can never be spent.
        let alt = alt.min(r);
        let key = self.key(pairs, side_last, alt);
        if let Some(e) = self.memo.get(&key) {
            if r <= e.lose_upto {
                return false;
            }
            if r >= e.win_from {
                return true;
            }
        }
        self.nodes_expanded += 1;

        let mut spoiler_wins = false;
        'sides: for side in [0u8, 1u8] {
            let charged = side_last != SIDE_NONE && side_last != side;
            if charged && alt == 0 {
                continue;
            }
            let alt_next = alt - u8::from(charged);
            let (src_n, src_mask, dst_n, dst_mask) = if side == 0 {
                (self.g.order(), gmask, self.h.order(), hmask)
            } else {
                (self.h.order(), hmask, self.g.order(), gmask)
            };
            for v in 0..src_n {
                if src_mask >> v & 1 == 1 {
                    continue;
                }
                // Replying onto a pebbled vertex always violates the equality
                // pattern, so Duplicator's live options are the unpebbled ones.
                let mut some_reply_survives = false;
                for w in 0..dst_n {
                    if dst_mask >> w & 1 == 1 {
                        continue;
                    }
                    let (a, b) = if side == 0 { (v, w) } else { (w, v) };
                    if !self.extend_alive(pairs, a, b) {
                        continue;
                    }
                    pairs.push((a as u8, b as u8));
                    let win = self.solve(
                        pairs,
                        gmask | 1 << a,
                        hmask | 1 << b,
                        r - 1,
                        side,
                        alt_next,
                    );
                    pairs.pop();
                    if !win {
                        some_reply_survives = true;
                        break;
                    }
                }
                if !some_reply_survives {
                    spoiler_wins = true;
                    break 'sides;
                }
            }
        }

        let e = self.memo.entry(key).or_insert(Entry { lose_upto: 0, win_from: u8::MAX });
        if spoiler_wins {
            e.win_from = e.win_from.min(r);
        } else {
            e.lose_upto = e.lose_upto.max(r);
        }
        spoiler_wins
    }

    /// Entry point from a public configuration. Dead configurations are an
    /// immediate Spoiler win regardless of the round budget.
    fn wins_from(&mut self, cfg: &GameConfig, rounds: usize) -> Result<bool, SolverError> {
        for &(u, v) in &cfg.pairs {
            if u >= self.g.order() || v >= self.h.order() {
                return Err(SolverError::InvalidConfig { u, v });
            }
        }
        if !cfg.is_alive(self.g, self.h) {
            return Ok(true);
        }
        let mut pairs: Vec<(u8, u8)> =
            cfg.pairs.iter().map(|&(a, b)| (a as u8, b as u8)).collect();
        let (mut gmask, mut hmask) = (0u64, 0u64);
        for &(a, b) in &pairs {
            gmask |= 1 << a;
            hmask |= 1 << b;
        }
        let r = rounds.min(u8::MAX as usize) as u8;
        let alt = cfg.alternations_left.unwrap_or(usize::MAX).min(u8::MAX as usize - 1) as u8;
        Ok(self.solve(&mut pairs, gmask, hmask, r, side_code(cfg.side_last), alt))
    }
}

/// Whether Spoiler has a winning strategy within `rounds` rounds of the
/// round-bounded game started at `cfg`.
pub fn spoiler_wins(
    g: &Graph,
    h: &Graph,
    cfg: &GameConfig,
    rounds: usize,
) -> Result<bool, SolverError> {
    GameSolver::new(g, h)?.wins_from(cfg, rounds)
}

fn require_non_isomorphic(g: &Graph, h: &Graph) -> Result<(), SolverError> {
    if is_isomorphic(g, h).is_some() {
        return Err(SolverError::IsomorphicInputs);
    }
    Ok(())
}

/// A round budget that always suffices for non-isomorphic inputs: unequal
/// orders are separated by counting min+1 vertices; equal orders by the
/// rank-n canonical distinguishing sentence.
fn deepening_cap(g: &Graph, h: &Graph) -> usize {
    g.order().min(h.order()) + 1
}

fn rank_with_budget(
    g: &Graph,
    h: &Graph,
    alternations: Option<usize>,
) -> Result<SolveResult, SolverError> {
    require_non_isomorphic(g, h)?;
    let mut solver = GameSolver::new(g, h)?;
    let cap = deepening_cap(g, h);
    let mut rank = None;
    for r in 1..=cap {
        let cfg = GameConfig { pairs: Vec::new(), side_last: None, alternations_left: alternations };
        if solver.wins_from(&cfg, r)? {
            rank = Some(r);
            break;
        }
    }
    let rank = rank.expect("non-isomorphic graphs are distinguished within the cap");
    // Least alternation budget in {0, 1} that still wins in `rank` rounds.
    let mut alternations_used = None;
    for j in 0..=1usize {
        if alternations.is_some_and(|k| j > k) {
            break;
        }
        let cfg = GameConfig { pairs: Vec::new(), side_last: None, alternations_left: Some(j) };
        if solver.wins_from(&cfg, rank)? {
            alternations_used = Some(j);
            break;
        }
    }
    if g.order() == h.order() {
        // Same-order non-isomorphic graphs satisfy the general bound.
        assert!(
            rank <= (g.order() + 3) / 2,
            "rank {rank} violates the (n+3)/2 bound at order {}",
            g.order()
        );
    }
    Ok(SolveResult { rank, alternations_used, formula: None, stats: solver.stats() })
}

/// The distinguishing rank `D(G, G′)`: the least `r` such that Spoiler wins
/// the `r`-round game, found by iterative deepening. Errors on isomorphic
/// inputs.
pub fn rank_d(g: &Graph, h: &Graph) -> Result<SolveResult, SolverError> {
    rank_with_budget(g, h, None)
}

/// The `k`-alternation rank `D^k(G, G′)`: as [`rank_d`], but Spoiler may
/// switch structures at most `k` times (the first round is free).
pub fn rank_dk(g: &Graph, h: &Graph, k: usize) -> Result<SolveResult, SolverError> {
    rank_with_budget(g, h, Some(k))
}

/// The pebble number `V(G, G′)`: the least number of pebbles with which
/// Spoiler wins the unbounded-round reuse game. For each candidate count the
/// winner is decided by a greatest fixpoint over all alive positions:
/// positions from which some Spoiler placement (a fresh pebble, or lifting
/// and re-placing one) admits no surviving reply are deleted until stable;
/// Spoiler wins iff the empty position is deleted.
pub fn pebble_v(g: &Graph, h: &Graph) -> Result<usize, SolverError> {
    require_non_isomorphic(g, h)?;
    for gr in [g, h] {
        if gr.order() > MAX_SOLVER_ORDER {
            return Err(SolverError::OrderTooLarge { order: gr.order(), max: MAX_SOLVER_ORDER });
        }
    }
    for l in 1..=deepening_cap(g, h) {
        if pebble_game_spoiler_wins(g, h, l) {
            return Ok(l);
        }
    }
    unreachable!("the pebble number is at most the distinguishing rank");
}

struct PebbleConfig {
    pairs: Vec<(u8, u8)>,
    gmask: u64,
    hmask: u64,
}

fn pebble_game_spoiler_wins(g: &Graph, h: &Graph, l: usize) -> bool {
    // Enumerate every alive position with at most l pairs. Positions are
    // partial bijections (duplicated coordinates violate the equality
    // pattern), stored sorted for indexing.
    let mut configs: Vec<PebbleConfig> = Vec::new();
    let mut index: HashMap<Vec<(u8, u8)>, usize> = HashMap::new();
    fn gen(
        g: &Graph,
        h: &Graph,
        l: usize,
        start_a: usize,
        cur: &mut PebbleConfig,
        configs: &mut Vec<PebbleConfig>,
        index: &mut HashMap<Vec<(u8, u8)>, usize>,
    ) {
        index.insert(cur.pairs.clone(), configs.len());
        configs.push(PebbleConfig {
            pairs: cur.pairs.clone(),
            gmask: cur.gmask,
            hmask: cur.hmask,
        });
        if cur.pairs.len() == l {
            return;
        }
        for a in start_a..g.order() {
            for b in 0..h.order() {
                if cur.hmask >> b & 1 == 1 {
                    continue;
                }
                let consistent = cur.pairs.iter().all(|&(c, d)| {
                    g.has_edge(a, c as usize) == h.has_edge(b, d as usize)
                });
                if !consistent {
                    continue;
                }
                cur.pairs.push((a as u8, b as u8));
                cur.gmask |= 1 << a;
                cur.hmask |= 1 << b;
                gen(g, h, l, a + 1, cur, configs, index);
                cur.gmask &= !(1 << a);
                cur.hmask &= !(1 << b);
                cur.pairs.pop();
            }
        }
    }
    let mut cur = PebbleConfig { pairs: Vec::new(), gmask: 0, hmask: 0 };
    gen(g, h, l, 0, &mut cur, &mut configs, &mut index);

    let mut surviving = vec![true; configs.len()];
    // One Spoiler option: from `base` (the position minus any lifted pebble),
    // place on vertex v of `side`. Duplicator survives if some reply lands in
    // a surviving position.
    let survives_placement = |cfg: &PebbleConfig,
                              lifted: Option<usize>,
                              side: u8,
                              v: usize,
                              surviving: &[bool],
                              index: &HashMap<Vec<(u8, u8)>, usize>|
     -> bool {
        let base: Vec<(u8, u8)> = match lifted {
            Some(i) => {
                let mut p = cfg.pairs.clone();
                p.remove(i);
                p
            }
            None => cfg.pairs.clone(),
        };
        let (dst_n, dst_mask) = if side == 0 {
            (h.order(), base.iter().fold(0u64, |m, &(_, d)| m | 1 << d))
        } else {
            (g.order(), base.iter().fold(0u64, |m, &(c, _)| m | 1 << c))
        };
        for w in 0..dst_n {
            if dst_mask >> w & 1 == 1 {
                continue;
            }
            let (a, b) = if side == 0 { (v, w) } else { (w, v) };
            let alive = base.iter().all(|&(c, d)| {
                g.has_edge(a, c as usize) == h.has_edge(b, d as usize)
            });
            if !alive {
                continue;
            }
            let mut next = base.clone();
            next.push((a as u8, b as u8));
            next.sort_unstable();
            if surviving[index[&next]] {
                return true;
            }
        }
        false
    };

    loop {
        let mut changed = false;
        for ci in 0..configs.len() {
            if !surviving[ci] {
                continue;
            }
            let cfg = &configs[ci];
            let k = cfg.pairs.len();
            let mut killed = false;
            // Slots: a fresh pebble if one is free, or lift any placed pebble.
            'moves: for slot in 0..=k {
                let lifted = if slot == k {
                    if k == l {
                        continue;
                    }
                    None
                } else {
                    Some(slot)
                };
                let (base_gmask, base_hmask) = match lifted {
                    Some(i) => {
                        let (a, b) = cfg.pairs[i];
                        (cfg.gmask & !(1 << a), cfg.hmask & !(1 << b))
                    }
                    None => (cfg.gmask, cfg.hmask),
                };
                for side in [0u8, 1u8] {
                    let (src_n, src_mask) =
                        if side == 0 { (g.order(), base_gmask) } else { (h.order(), base_hmask) };
                    for v in 0..src_n {
                        if src_mask >> v & 1 == 1 {
                            continue;
                        }
                        // Lifting a pebble and putting it straight back on one
                        // of its own endpoints can always be answered by
                        // restoring the position, so it never kills.
                        if let Some(i) = lifted {
                            let (a, b) = cfg.pairs[i];
                            if (side == 0 && v == a as usize) || (side == 1 && v == b as usize) {
                                continue;
                            }
                        }
                        if !survives_placement(cfg, lifted, side, v, &surviving, &index) {
                            killed = true;
                            break 'moves;
                        }
                    }
                }
            }
            if killed {
                surviving[ci] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let empty_idx = index[&Vec::new()];
    !surviving[empty_idx]
}

/// The identification rank `I(G)`: the largest distinguishing rank against
/// any non-isomorphic graph of the same order, by exhaustive enumeration.
/// The order-1 graph has no rival, so its identification rank is 0.
pub fn identification_rank(g: &Graph) -> Result<usize, SolverError> {
    let n = g.order();
    if n > MAX_IDENTIFICATION_ORDER.min(MAX_CATALOG_ORDER) {
        return Err(SolverError::IdentificationOrderTooLarge {
            order: n,
            max: MAX_IDENTIFICATION_ORDER,
        });
    }
    let mut best = 0;
    for h in graphs_up_to_iso(n) {
        if is_isomorphic(g, h).is_some() {
            continue;
        }
        best = best.max(rank_d(g, h)?.rank);
    }
    Ok(best)
}

/// Extracts a distinguishing sentence from Spoiler's winning strategy: true
/// on `g`, false on `h`, in negation normal form, with quantifier rank at
/// most the round budget and alternation number at most the alternation
/// budget. A winning move in `g` becomes `∃x (⋀ over replies)`, a winning
/// move in `h` becomes `∀x (⋁ over counter-moves)`, and a dead position
/// becomes the literal witnessing the mismatch. Errors when Spoiler cannot
/// win within the budget.
pub fn extract_formula(g: &Graph, h: &Graph, budget: Budget) -> Result<Formula, SolverError> {
    let mut solver = GameSolver::new(g, h)?;
    let cfg = GameConfig {
        pairs: Vec::new(),
        side_last: None,
        alternations_left: budget.alternations,
    };
    if !solver.wins_from(&cfg, budget.rounds)? {
        return Err(SolverError::BudgetInsufficient {
            rounds: budget.rounds,
            alternations: budget.alternations,
        });
    }
    let r = budget.rounds.min(u8::MAX as usize) as u8;
    let alt = budget.alternations.unwrap_or(usize::MAX).min(u8::MAX as usize - 1) as u8;
    let mut pairs = Vec::new();
    Ok(extract(&mut solver, &mut pairs, 0, 0, r, SIDE_NONE, alt))
}

/// A literal over the pebbled variables that is true on the `g` tuple and
/// false on the `h` tuple. Exists exactly when the position is dead; pairs
/// are in placement order, so variable `i` is the `i`-th pebble.
fn dead_position_literal(g: &Graph, h: &Graph, pairs: &[(u8, u8)]) -> Option<Formula> {
    for (j, &(c, d)) in pairs.iter().enumerate() {
        for (i, &(a, b)) in pairs.iter().enumerate().take(j) {
            let (a, b, c, d) = (a as usize, b as usize, c as usize, d as usize);
            let (xi, xj) = (Var(i), Var(j));
            if a == c && b != d {
                return Some(Formula::Eq(xi, xj));
            }
            if a != c && b == d {
                return Some(Formula::not(Formula::Eq(xi, xj)));
            }
            if a != c && b != d {
                if g.has_edge(a, c) && !h.has_edge(b, d) {
                    return Some(Formula::Adj(xi, xj));
                }
                if !g.has_edge(a, c) && h.has_edge(b, d) {
                    return Some(Formula::not(Formula::Adj(xi, xj)));
                }
            }
        }
    }
    None
}

/// Recursive extraction from an alive position Spoiler wins within `r`
/// rounds. Pairs stay in placement order so variable indices line up across
/// sibling branches; the memoized solver is only consulted for win checks.
fn extract(
    solver: &mut GameSolver<'_>,
    pairs: &mut Vec<(u8, u8)>,
    gmask: u64,
    hmask: u64,
    r: u8,
    side_last: u8,
    alt: u8,
) -> Formula {
    let var = Var(pairs.len());
    for side in [0u8, 1u8] {
        let charged = side_last != SIDE_NONE && side_last != side;
        if charged && alt == 0 {
            continue;
        }
        let alt_next = alt - u8::from(charged);
        let (g, h) = (solver.g, solver.h);
        let (src_n, src_mask, dst_n, dst_mask) = if side == 0 {
            (g.order(), gmask, h.order(), hmask)
        } else {
            (h.order(), hmask, g.order(), gmask)
        };
        'vertices: for v in 0..src_n {
            if src_mask >> v & 1 == 1 {
                continue;
            }
            // The move must defeat every live reply within r−1 rounds.
            for w in 0..dst_n {
                if dst_mask >> w & 1 == 1 {
                    continue;
                }
                let (a, b) = if side == 0 { (v, w) } else { (w, v) };
                if !solver.extend_alive(pairs, a, b) {
                    continue;
                }
                pairs.push((a as u8, b as u8));
                let win =
                    solver.solve(pairs, gmask | 1 << a, hmask | 1 << b, r - 1, side, alt_next);
                pairs.pop();
                if !win {
                    continue 'vertices;
                }
            }
            // Winning move found: build one subformula per semantically
            // distinct reply, over *all* vertices of the other structure
            // (pebbled replies are dead and contribute literals).
            let mut subs: Vec<Formula> = Vec::new();
            for w in 0..dst_n {
                let (a, b) = if side == 0 { (v, w) } else { (w, v) };
                pairs.push((a as u8, b as u8));
                let sub = match dead_position_literal(g, h, pairs) {
                    Some(lit) => lit,
                    None => extract(
                        solver,
                        pairs,
                        gmask | 1 << a,
                        hmask | 1 << b,
                        r - 1,
                        side,
                        alt_next,
                    ),
                };
                pairs.pop();
                if !subs.contains(&sub) {
                    subs.push(sub);
                }
            }
            return if side == 0 {
                Formula::exists(var, Formula::And(subs))
            } else {
                Formula::forall(var, Formula::Or(subs))
            };
        }
    }
    unreachable!("extraction is only called on positions Spoiler wins");
}

/// An optimal Duplicator for the `rounds`-round game: replies maximize the
/// number of further rounds she provably survives.
pub struct DuplicatorOracle<'a> {
    solver: GameSolver<'a>,
    rounds: usize,
}

/// Builds the reply oracle backed by a memoized solver.
pub fn optimal_duplicator<'a>(
    g: &'a Graph,
    h: &'a Graph,
    rounds: usize,
) -> Result<DuplicatorOracle<'a>, SolverError> {
    Ok(DuplicatorOracle { solver: GameSolver::new(g, h)?, rounds })
}

impl DuplicatorOracle<'_> {
    /// The reply to Spoiler pebbling `vertex` on `side` from `cfg`, assuming
    /// play began at the empty position (so `cfg.pairs().len()` rounds are
    /// already spent). Replies that survive the most remaining rounds win;
    /// ties go to the smallest vertex. `None` only when the replying
    /// structure has no vertices.
    pub fn reply(&mut self, cfg: &GameConfig, side: Side, vertex: usize) -> Option<usize> {
        let (g, h) = (self.solver.g, self.solver.h);
        // Re-pebbling: the only reply that does not lose outright is the twin.
        for &(a, b) in &cfg.pairs {
            match side {
                Side::Left if a == vertex => return Some(b),
                Side::Right if b == vertex => return Some(a),
                _ => {}
            }
        }
        let remaining = self.rounds.saturating_sub(cfg.pairs.len() + 1);
        let dst_n = match side {
            Side::Left => h.order(),
            Side::Right => g.order(),
        };
        let mut best: Option<(usize, usize)> = None; // (depth, reply)
        for w in 0..dst_n {
            let pair = match side {
                Side::Left => (vertex, w),
                Side::Right => (w, vertex),
            };
            let mut pairs = cfg.pairs.clone();
            pairs.push(pair);
            let next = GameConfig {
                pairs,
                side_last: Some(side),
                alternations_left: cfg.alternations_left,
            };
            // Depth counts the current round: a dead reply survives 0 rounds,
            // an alive one 1 plus the largest budget it provably withstands.
            let depth = if !next.is_alive(g, h) {
                0
            } else {
                let mut d = remaining;
                for rr in 1..=remaining {
                    if self.solver.wins_from(&next, rr).expect("validated config") {
                        d = rr - 1;
                        break;
                    }
                }
                1 + d
            };
            if best.is_none() || depth > best.unwrap().0 {
                best = Some((depth, w));
            }
        }
        best.map(|(_, w)| w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use std::collections::BTreeSet;

    fn km_em(k: usize, e: usize) -> Graph {
        Graph::complete(k).disjoint_union(&Graph::empty(e))
    }

    // === independent reference implementations ===

    /// Literal transcription of the round-bounded game: no orbit keys, no
    /// deepening reuse, no move pruning — Spoiler may pebble any vertex and
    /// Duplicator may answer with any vertex.
    fn naive_wins(
        g: &Graph,
        h: &Graph,
        pairs: &BTreeSet<(usize, usize)>,
        r: usize,
        side_last: u8,
        alt: usize,
        memo: &mut HashMap<(Vec<(usize, usize)>, usize, u8, usize), bool>,
    ) -> bool {
        let alive = pairs.iter().all(|&(a, b)| {
            pairs.iter().all(|&(c, d)| {
                ((a == c) == (b == d)) && (a == c || g.has_edge(a, c) == h.has_edge(b, d))
            })
        });
        if !alive {
            return true;
        }
        if r == 0 {
            return false;
        }
        let alt_c = alt.min(r);
        let key = (pairs.iter().copied().collect(), r, side_last, alt_c);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut win = false;
        'sides: for side in [0u8, 1u8] {
            let charged = side_last != 2 && side_last != side;
            if charged && alt_c == 0 {
                continue;
            }
            let alt_next = alt_c - usize::from(charged);
            let (src_n, dst_n) =
                if side == 0 { (g.order(), h.order()) } else { (h.order(), g.order()) };
            for v in 0..src_n {
                let mut all_lose = true;
                for w in 0..dst_n {
                    let pair = if side == 0 { (v, w) } else { (w, v) };
                    let mut next = pairs.clone();
                    next.insert(pair);
                    if !naive_wins(g, h, &next, r - 1, side, alt_next, memo) {
                        all_lose = false;
                        break;
                    }
                }
                if all_lose {
                    win = true;
                    break 'sides;
                }
            }
        }
        memo.insert(key, win);
        win
    }

    fn naive_rank(g: &Graph, h: &Graph, alt: usize) -> usize {
        let mut memo = HashMap::new();
        (1..)
            .find(|&r| naive_wins(g, h, &BTreeSet::new(), r, 2, alt, &mut memo))
            .unwrap()
    }

    /// Literal greatest-fixpoint pebble game over all alive positions, with
    /// no move pruning: stacking and same-spot replacements included.
    fn naive_pebble_wins(g: &Graph, h: &Graph, l: usize) -> bool {
        let all_pairs: Vec<(usize, usize)> = (0..g.order())
            .flat_map(|a| (0..h.order()).map(move |b| (a, b)))
            .collect();
        let alive = |s: &BTreeSet<(usize, usize)>| {
            s.iter().all(|&(a, b)| {
                s.iter().all(|&(c, d)| {
                    ((a == c) == (b == d)) && (a == c || g.has_edge(a, c) == h.has_edge(b, d))
                })
            })
        };
        // All alive subsets of size ≤ l.
        let mut configs: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new()];
        let mut frontier = vec![BTreeSet::new()];
        for _ in 0..l {
            let mut next_frontier = Vec::new();
            for s in &frontier {
                for &p in &all_pairs {
                    if s.contains(&p) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.insert(p);
                    if alive(&t) && !configs.contains(&t) {
                        configs.push(t.clone());
                        next_frontier.push(t);
                    }
                }
            }
            frontier = next_frontier;
        }
        let mut surviving: Vec<bool> = vec![true; configs.len()];
        let idx_of = |s: &BTreeSet<(usize, usize)>, configs: &[BTreeSet<(usize, usize)>]| {
            configs.iter().position(|t| t == s)
        };
        loop {
            let mut changed = false;
            for i in 0..configs.len() {
                if !surviving[i] {
                    continue;
                }
                let s = configs[i].clone();
                let mut killed = false;
                // Slot: None = new pebble (if capacity), Some(p) = lift p.
                let mut slots: Vec<Option<(usize, usize)>> = vec![];
                if s.len() < l {
                    slots.push(None);
                }
                slots.extend(s.iter().map(|&p| Some(p)));
                'outer: for slot in &slots {
                    let mut base = s.clone();
                    if let Some(p) = slot {
                        base.remove(p);
                    }
                    for side in [0u8, 1] {
                        let src_n = if side == 0 { g.order() } else { h.order() };
                        let dst_n = if side == 0 { h.order() } else { g.order() };
                        for v in 0..src_n {
                            let mut answered = false;
                            for w in 0..dst_n {
                                let pair = if side == 0 { (v, w) } else { (w, v) };
                                let mut next = base.clone();
                                next.insert(pair);
                                if !alive(&next) {
                                    continue;
                                }
                                if let Some(j) = idx_of(&next, &configs) {
                                    if surviving[j] {
                                        answered = true;
                                        break;
                                    }
                                }
                            }
                            if !answered {
                                killed = true;
                                break 'outer;
                            }
                        }
                    }
                }
                if killed {
                    surviving[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        !surviving[0]
    }

    // === unit tests ===

    #[test]
    fn spoiler_wins_basics() {
        let k3 = Graph::complete(3);
        let p3 = Graph::path(3);
        assert_eq!(spoiler_wins(&k3, &p3, &GameConfig::empty(), 2), Ok(true));
        assert_eq!(spoiler_wins(&k3, &p3, &GameConfig::empty(), 1), Ok(false));
        // Dead configuration: immediate win even with zero rounds.
        let dead = GameConfig::new(vec![(0, 0), (1, 2)], None, None);
        assert!(!dead.is_alive(&k3, &p3)); // edge {0,1} vs non-edge {0,2}
        assert_eq!(spoiler_wins(&k3, &p3, &dead, 0), Ok(true));
        // Isomorphic structures: Spoiler never wins.
        let k1 = Graph::complete(1);
        assert_eq!(spoiler_wins(&k1, &k1, &GameConfig::empty(), 7), Ok(false));
        // Out-of-range configuration is rejected.
        let bad = GameConfig::new(vec![(9, 0)], None, None);
        assert_eq!(
            spoiler_wins(&k3, &p3, &bad, 1),
            Err(SolverError::InvalidConfig { u: 9, v: 0 })
        );
    }

    #[test]
    fn frozen_example_pairs() {
        // (K_m ⊔ E_m, K_{m+1} ⊔ E_{m−1}): rank m+1, pebble number m.
        // (K_{m+1} ⊔ E_m, K_m ⊔ E_{m+1}): rank and pebble number both m+1.
        for m in 2..=3 {
            let first = (km_em(m, m), km_em(m + 1, m - 1));
            assert_eq!(rank_d(&first.0, &first.1).unwrap().rank, m + 1, "first pair, m={m}");
            assert_eq!(pebble_v(&first.0, &first.1).unwrap(), m, "first pair, m={m}");
            let second = (km_em(m + 1, m), km_em(m, m + 1));
            assert_eq!(rank_d(&second.0, &second.1).unwrap().rank, m + 1, "second pair, m={m}");
            assert_eq!(pebble_v(&second.0, &second.1).unwrap(), m + 1, "second pair, m={m}");
        }
    }

    #[test]
    fn small_rank_examples() {
        assert_eq!(rank_d(&Graph::complete(3), &Graph::path(3)).unwrap().rank, 2);
        assert_eq!(rank_d(&Graph::complete(2), &Graph::empty(2)).unwrap().rank, 2);
        assert_eq!(pebble_v(&Graph::complete(2), &Graph::empty(2)).unwrap(), 2);
        // Unequal orders: counting wins in min+1 rounds at most.
        assert_eq!(rank_d(&Graph::empty(0), &Graph::complete(1)).unwrap().rank, 1);
        assert_eq!(rank_d(&Graph::empty(1), &Graph::empty(2)).unwrap().rank, 2);
    }

    #[test]
    fn isomorphic_inputs_are_rejected() {
        let c5 = Graph::cycle(5);
        let c5p = c5.permute(&[2, 0, 3, 1, 4]);
        assert_eq!(rank_d(&c5, &c5p).unwrap_err(), SolverError::IsomorphicInputs);
        assert_eq!(rank_dk(&c5, &c5p, 1).unwrap_err(), SolverError::IsomorphicInputs);
        assert_eq!(pebble_v(&c5, &c5p).unwrap_err(), SolverError::IsomorphicInputs);
    }

    #[test]
    fn alternation_budgets_are_monotone() {
        for (g, h) in [
            (Graph::complete(3), Graph::path(3)),
            (km_em(2, 2), km_em(3, 1)),
            (Graph::cycle(5), Graph::path(5)),
            (Graph::cycle(6), Graph::cycle(3).disjoint_union(&Graph::cycle(3))),
        ] {
            let d = rank_d(&g, &h).unwrap().rank;
            let d1 = rank_dk(&g, &h, 1).unwrap().rank;
            let d0 = rank_dk(&g, &h, 0).unwrap().rank;
            let v = pebble_v(&g, &h).unwrap();
            assert!(v <= d && d <= d1 && d1 <= d0, "chain failed for {g:?} vs {h:?}");
        }
    }

    #[test]
    fn alternations_used_reporting() {
        // K_3 vs P_3 is won existentially inside P_3 within 2 rounds.
        let r = rank_d(&Graph::complete(3), &Graph::path(3)).unwrap();
        assert_eq!((r.rank, r.alternations_used), (2, Some(0)));
        let r = rank_dk(&Graph::complete(3), &Graph::path(3), 0).unwrap();
        assert_eq!((r.rank, r.alternations_used), (2, Some(0)));
    }

    #[test]
    fn special_extension_pair_rank_matches_formulas() {
        // empty_4 extended inside its (maximal) class: D⁰ = V = σ+1 = 5.
        let g = Graph::empty(4);
        let h = crate::similarity::oplus(&g, 0, 1).unwrap();
        assert_eq!(rank_dk(&g, &h, 0).unwrap().rank, 5);
        assert_eq!(pebble_v(&g, &h).unwrap(), 5);

        // empty_4 ⊔ K_2 extended at an isolated vertex: class not maximal,
        // D = σ+2 = 6 while V stays σ+1 = 5.
        let g = Graph::empty(4).disjoint_union(&Graph::complete(2));
        let h = crate::similarity::oplus(&g, 0, 1).unwrap();
        assert_eq!(rank_d(&g, &h).unwrap().rank, 6);
        assert_eq!(pebble_v(&g, &h).unwrap(), 5);
    }

    #[test]
    fn identification_rank_examples() {
        assert_eq!(identification_rank(&Graph::empty(3)), Ok(2));
        assert_eq!(identification_rank(&Graph::complete(1)), Ok(0));
        assert_eq!(identification_rank(&km_em(2, 2)), Ok(3));
        assert_eq!(
            identification_rank(&Graph::empty(7)),
            Err(SolverError::IdentificationOrderTooLarge { order: 7, max: 6 })
        );
    }

    #[test]
    fn solver_matches_naive_reference_exhaustively() {
        // Every unordered pair of distinct order-3 and order-4 graphs, with
        // the orbit-key optimization both on and off, against the literal
        // transcription of the game — including alternation budgets.
        for n in [3, 4] {
            let gs = graphs_up_to_iso(n);
            for i in 0..gs.len() {
                for j in i + 1..gs.len() {
                    let (g, h) = (&gs[i], &gs[j]);
                    for alt in [usize::MAX, 0, 1] {
                        let expected = naive_rank(g, h, alt);
                        let got = if alt == usize::MAX {
                            rank_d(g, h).unwrap().rank
                        } else {
                            rank_dk(g, h, alt).unwrap().rank
                        };
                        assert_eq!(got, expected, "n={n} i={i} j={j} alt={alt}");
                        // Hook off must agree as well.
                        let mut off = GameSolver::with_canonicalization(g, h, false).unwrap();
                        let cfg = GameConfig {
                            pairs: Vec::new(),
                            side_last: None,
                            alternations_left: if alt == usize::MAX { None } else { Some(alt) },
                        };
                        assert!(off.wins_from(&cfg, expected).unwrap());
                        assert!(!off.wins_from(&cfg, expected - 1).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn pebble_fixpoint_matches_naive_reference() {
        let gs = graphs_up_to_iso(3);
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                let (g, h) = (&gs[i], &gs[j]);
                for l in 1..=3 {
                    assert_eq!(
                        pebble_game_spoiler_wins(g, h, l),
                        naive_pebble_wins(g, h, l),
                        "i={i} j={j} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_is_symmetric_and_complement_invariant() {
        let pairs = [
            (Graph::complete(3), Graph::path(3)),
            (km_em(2, 2), km_em(3, 1)),
            (Graph::cycle(5), Graph::path(5)),
            (Graph::complete_bipartite(2, 3), Graph::path(5)),
        ];
        for (g, h) in &pairs {
            let d = rank_d(g, h).unwrap().rank;
            assert_eq!(rank_d(h, g).unwrap().rank, d);
            assert_eq!(rank_d(&g.complement(), &h.complement()).unwrap().rank, d);
            let d1 = rank_dk(g, h, 1).unwrap().rank;
            assert_eq!(rank_dk(&g.complement(), &h.complement(), 1).unwrap().rank, d1);
        }
    }

    #[test]
    fn extraction_produces_optimal_certificates() {
        let k3 = Graph::complete(3);
        let p3 = Graph::path(3);
        let f = extract_formula(&k3, &p3, Budget { rounds: 2, alternations: None }).unwrap();
        assert_eq!(f.quantifier_rank(), 2);
        assert_eq!(f.evaluate(&k3), Ok(true));
        assert_eq!(f.evaluate(&p3), Ok(false));

        let g = km_em(2, 2);
        let h = km_em(3, 1);
        let f = extract_formula(&g, &h, Budget { rounds: 3, alternations: Some(1) }).unwrap();
        assert_eq!(f.quantifier_rank(), 3);
        assert!(f.alternation_number() <= 1);
        assert_eq!(f.evaluate(&g), Ok(true));
        assert_eq!(f.evaluate(&h), Ok(false));

        assert_eq!(
            extract_formula(&k3, &p3, Budget { rounds: 1, alternations: Some(0) }).unwrap_err(),
            SolverError::BudgetInsufficient { rounds: 1, alternations: Some(0) }
        );
    }

    #[test]
    fn extraction_is_sound_on_all_order_3_pairs() {
        let gs = graphs_up_to_iso(3);
        for i in 0..gs.len() {
            for j in 0..gs.len() {
                if i == j {
                    continue;
                }
                let (g, h) = (&gs[i], &gs[j]);
                let rank = rank_d(g, h).unwrap().rank;
                let f =
                    extract_formula(g, h, Budget { rounds: rank, alternations: None }).unwrap();
                assert_eq!(f.quantifier_rank(), rank, "i={i} j={j}");
                assert_eq!(f.evaluate(g), Ok(true), "i={i} j={j}");
                assert_eq!(f.evaluate(h), Ok(false), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn duplicator_oracle_plays_optimally() {
        // Isomorphic inputs: the oracle survives arbitrarily long games.
        let c5 = Graph::cycle(5);
        let c5p = c5.permute(&[2, 0, 3, 1, 4]);
        let mut oracle = optimal_duplicator(&c5, &c5p, 5).unwrap();
        let mut cfg = GameConfig::empty();
        for v in 0..5 {
            let w = oracle.reply(&cfg, Side::Left, v).unwrap();
            let mut pairs = cfg.pairs().to_vec();
            pairs.push((v, w));
            cfg = GameConfig::new(pairs, Some(Side::Left), None);
            assert!(cfg.is_alive(&c5, &c5p), "round {v}");
        }

        // K_3 vs P_3: she survives a 1-round game but loses the 2-round game
        // to the winning line that pebbles both ends of the path.
        let k3 = Graph::complete(3);
        let p3 = Graph::path(3);
        let mut oracle = optimal_duplicator(&k3, &p3, 1).unwrap();
        let w = oracle.reply(&GameConfig::empty(), Side::Right, 0).unwrap();
        let cfg = GameConfig::new(vec![(w, 0)], Some(Side::Right), None);
        assert!(cfg.is_alive(&k3, &p3));

        let mut oracle = optimal_duplicator(&k3, &p3, 2).unwrap();
        let w1 = oracle.reply(&GameConfig::empty(), Side::Right, 0).unwrap();
        let cfg = GameConfig::new(vec![(w1, 0)], Some(Side::Right), None);
        assert!(cfg.is_alive(&k3, &p3));
        let w2 = oracle.reply(&cfg, Side::Right, 2).unwrap();
        let mut pairs = cfg.pairs().to_vec();
        pairs.push((w2, 2));
        let final_cfg = GameConfig::new(pairs, Some(Side::Right), None);
        assert!(!final_cfg.is_alive(&k3, &p3), "the path's non-edge defeats every reply");
    }

    #[test]
    fn oracle_returns_twin_for_repebbled_vertices() {
        let k3 = Graph::complete(3);
        let p3 = Graph::path(3);
        let mut oracle = optimal_duplicator(&k3, &p3, 3).unwrap();
        let cfg = GameConfig::new(vec![(1, 2)], Some(Side::Left), None);
        assert_eq!(oracle.reply(&cfg, Side::Left, 1), Some(2));
        assert_eq!(oracle.reply(&cfg, Side::Right, 2), Some(1));
    }

    #[test]
    fn stats_are_populated() {
        let r = rank_d(&km_em(2, 2), &km_em(3, 1)).unwrap();
        assert!(r.stats.nodes_expanded > 0);
        assert!(r.stats.memo_entries > 0);
    }

    #[test]
    fn exception_shape_bounds_hold_on_extension_pairs() {
        // For h = g ⊕ lv: the pebble number is at least σ_G(v)+1 and the
        // 1-alternation rank at most σ_G(v)+1+⌈(n+1)/(σ_G(v)+1)⌉, checked on
        // all extension instances of total order ≤ 8.
        for n in 2..=4 {
            for g in graphs_up_to_iso(n) {
                let part = similarity_partition(g);
                let mut done_classes = VertexSet::empty(n);
                for v in 0..n {
                    if done_classes.contains(v) {
                        continue;
                    }
                    done_classes.union_with(part.class_of(v));
                    let s = part.sigma_of(v);
                    if s < 2 {
                        continue;
                    }
                    for l in 1..=(8usize.saturating_sub(2 * n)).max(1).min(2) {
                        if 2 * n + l > 8 {
                            continue;
                        }
                        let h = crate::similarity::oplus(g, v, l).unwrap();
                        let v_count = pebble_v(g, &h).unwrap();
                        let d1 = rank_dk(g, &h, 1).unwrap().rank;
                        assert!(v_count >= s + 1, "g={g:?} v={v} l={l}");
                        assert!(
                            d1 <= s + 1 + (n + 1).div_ceil(s + 1),
                            "g={g:?} v={v} l={l} d1={d1}"
                        );
                    }
                }
            }
        }
    }
}

//! The constructive Spoiler strategy: wins the distinguishing game on any
//! two non-isomorphic graphs within ⌊(n+3)/2⌋ rounds (equal orders) or
//! ⌊(n+5)/2⌋ rounds (unequal orders, excluding class-extension pairs) using
//! at most one structure alternation — without any game-tree search.
//!
//! The strategy is built around neighborhood partitions. For `X ⊆ V(G)`,
//! `C(X)` partitions the remaining vertices by their adjacency pattern into
//! `X`; a set is C-maximal when moving any further vertex into `X` cannot
//! increase the class count. A greedy construction yields a C-maximal `X`
//! with `|C(X)| ≥ |X|+1`, hence `|X| ≤ (n−1)/2`. `Y(X)` collects the
//! singleton classes, `Z(X)` the rest, and `D(X) = C(X ∪ Y)` restricted to
//! `Z` refines the classes down to orbits of pairwise similar vertices.
//!
//! Play proceeds in two phases. Phase 1: Spoiler pebbles `X` in the first
//! graph; Duplicator's replies define a pairing φ. Phase 2: Spoiler inspects
//! how the partition of the second graph under Duplicator's `X′` lines up
//! with his own via φ and exploits the first defect in a fixed cascade —
//! an unmatched class, a singleton matched to a larger class, an adjacency
//! mismatch between matched singletons, an unmatched refined class, a
//! homogeneity mismatch inside or between matched refined classes, or
//! finally a matched refined class of unequal size ("useful" class), where
//! pigeonhole forces a non-conforming reply that one extra same-side move
//! punishes. Non-isomorphic graphs always expose a defect.

use thiserror::Error;

use crate::graph::{is_isomorphic, Graph, VertexSet};
use crate::similarity::{oplus, similarity_partition};
use crate::solver::{DuplicatorOracle, GameConfig, Side};

/// The neighborhood-partition state of one graph for a fixed `X`.
#[derive(Clone, Debug)]
pub struct PartitionState {
    /// The distinguished vertex set `X`.
    pub x: VertexSet,
    /// `C(X)`: classes of the complement of `X` grouped by adjacency pattern
    /// into `X`, ordered by smallest member.
    pub classes: Vec<VertexSet>,
    /// Union of the singleton classes.
    pub y: VertexSet,
    /// Everything outside `X ∪ Y`.
    pub z: VertexSet,
    /// `D(X)`: classes of `Z` grouped by adjacency pattern into `X ∪ Y`,
    /// ordered by smallest member.
    pub dclasses: Vec<VertexSet>,
}

fn pattern(g: &Graph, v: usize, base: &VertexSet) -> VertexSet {
    let mut p = g.neighbors(v);
    p.intersect_with(base);
    p
}

/// Groups the vertices outside `base` by adjacency pattern into `base`,
/// classes ordered by smallest member.
fn group_by_pattern(g: &Graph, base: &VertexSet, domain: &VertexSet) -> Vec<VertexSet> {
    let mut classes: Vec<(VertexSet, VertexSet)> = Vec::new();
    for v in domain.iter() {
        let p = pattern(g, v, base);
        match classes.iter_mut().find(|(q, _)| *q == p) {
            Some((_, members)) => members.insert(v),
            None => {
                let mut members = VertexSet::empty(g.order());
                members.insert(v);
                classes.push((p, members));
            }
        }
    }
    classes.into_iter().map(|(_, m)| m).collect()
}

/// The partition machinery for a given `X`: classes, singleton union `Y`,
/// remainder `Z`, and the refined classes `D(X) = C(X ∪ Y)` on `Z`.
pub fn cx_partition(g: &Graph, x: &VertexSet) -> PartitionState {
    let complement = x.complement();
    let classes = group_by_pattern(g, x, &complement);
    let mut y = VertexSet::empty(g.order());
    for c in &classes {
        if c.len() == 1 {
            y.union_with(c);
        }
    }
    let mut z = complement.clone();
    z.difference_with(&y);
    let mut xy = x.clone();
    xy.union_with(&y);
    let dclasses = group_by_pattern(g, &xy, &z);
    PartitionState { x: x.clone(), classes, y, z, dclasses }
}

/// Greedily builds a C-maximal set `X` with `|C(X)| ≥ |X|+1`: repeatedly
/// move in the lowest-indexed vertex whose move strictly increases the class
/// count. Returns `X` with its partition state.
pub fn c_maximal_set(g: &Graph) -> (VertexSet, PartitionState) {
    assert!(g.order() >= 1, "the partition machinery needs at least one vertex");
    let n = g.order();
    let mut x = VertexSet::empty(n);
    let mut count = cx_partition(g, &x).classes.len();
    loop {
        let mut moved = false;
        for u in 0..n {
            if x.contains(u) {
                continue;
            }
            let mut candidate = x.clone();
            candidate.insert(u);
            let c = cx_partition(g, &candidate).classes.len();
            if c > count {
                x = candidate;
                count = c;
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    let state = cx_partition(g, &x);
    (x, state)
}

/// Errors from strategy construction and matching.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("the graphs are isomorphic; Spoiler has no winning strategy")]
    IsomorphicInputs,
    #[error(
        "the pair is a class extension (the larger graph is the smaller \
         with {extension} extra vertices in one similarity class); the \
         two-phase strategy does not cover it"
    )]
    ExceptionShape { extension: usize },
    #[error("the pairing is not a partial isomorphism")]
    NotPartialIsomorphism,
}

/// Which defect, if any, breaks the class matching.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatchDefect {
    /// A class on `side` with no counterpart of the same φ-pattern.
    Unmatched { side: Side, class_index: usize },
    /// Matched classes where exactly one side is a singleton.
    SingletonMismatch { left_index: usize, right_index: usize },
}

/// The φ-similarity matching between the classes of two partition states.
#[derive(Clone, Debug)]
pub struct PhiMatch {
    /// `pairing[i] = Some(j)`: left class `i` matches right class `j`.
    pub pairing: Vec<Option<usize>>,
    /// Matched pairs with unequal sizes — Spoiler's future leverage.
    pub size_mismatches: Vec<(usize, usize)>,
    /// The first defect in cascade order, when one exists.
    pub defect: Option<MatchDefect>,
}

fn verify_partial_isomorphism(g: &Graph, h: &Graph, phi: &[(usize, usize)]) -> bool {
    for (i, &(a, b)) in phi.iter().enumerate() {
        if a >= g.order() || b >= h.order() {
            return false;
        }
        for &(c, d) in &phi[i + 1..] {
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

/// Whether representatives `v` (left) and `v'` (right) have matching
/// adjacency patterns through φ.
fn phi_similar(g: &Graph, h: &Graph, phi: &[(usize, usize)], v: usize, vp: usize) -> bool {
    phi.iter().all(|&(x, xp)| g.has_edge(v, x) == h.has_edge(vp, xp))
}

/// Matches the classes of the two partitions under φ-similarity and reports
/// the first defect: an unmatched class, or a singleton matched to a larger
/// class. Errors when φ is not a partial isomorphism.
pub fn phi_match(
    g: &Graph,
    state: &PartitionState,
    h: &Graph,
    state_p: &PartitionState,
    phi: &[(usize, usize)],
) -> Result<PhiMatch, StrategyError> {
    if !verify_partial_isomorphism(g, h, phi) {
        return Err(StrategyError::NotPartialIsomorphism);
    }
    let mut pairing: Vec<Option<usize>> = vec![None; state.classes.len()];
    let mut matched_right = vec![false; state_p.classes.len()];
    for (i, c) in state.classes.iter().enumerate() {
        let v = c.first().expect("classes are non-empty");
        for (j, cp) in state_p.classes.iter().enumerate() {
            let vp = cp.first().expect("classes are non-empty");
            if phi_similar(g, h, phi, v, vp) {
                pairing[i] = Some(j);
                matched_right[j] = true;
                break;
            }
        }
    }
    let mut size_mismatches = Vec::new();
    for (i, j) in pairing.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))) {
        if state.classes[i].len() != state_p.classes[j].len() {
            size_mismatches.push((i, j));
        }
    }
    let mut defect = None;
    for (i, j) in pairing.iter().enumerate() {
        if j.is_none() {
            defect = Some(MatchDefect::Unmatched { side: Side::Left, class_index: i });
            break;
        }
    }
    if defect.is_none() {
        for (j, m) in matched_right.iter().enumerate() {
            if !m {
                defect = Some(MatchDefect::Unmatched { side: Side::Right, class_index: j });
                break;
            }
        }
    }
    if defect.is_none() {
        for (i, j) in pairing.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))) {
            if (state.classes[i].len() == 1) != (state_p.classes[j].len() == 1) {
                defect = Some(MatchDefect::SingletonMismatch { left_index: i, right_index: j });
                break;
            }
        }
    }
    Ok(PhiMatch { pairing, size_mismatches, defect })
}

/// One Spoiler placement.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpoilerMove {
    pub side: Side,
    pub vertex: usize,
}

/// What the strategy does next.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpoilerAction {
    Move(SpoilerMove),
    /// The position is already dead: Spoiler has won.
    ClaimWin,
}

/// The two-phase constructive strategy for one match. The plan is immutable;
/// every move is derived from the full history, so the object can be reused
/// across replays.
#[derive(Debug)]
pub struct SpoilerPlan<'a> {
    g: &'a Graph,
    h: &'a Graph,
    /// Phase 1 script: the C-maximal set in greedy insertion order.
    x_order: Vec<usize>,
    state_g: PartitionState,
}

/// The Phase 2 continuation once φ is known: either a fixed script or a
/// pick-and-punish line against a target class.
enum Phase2Line {
    Script { side: Side, moves: Vec<usize> },
    Reactive { side: Side, picks: Vec<usize>, expected: Option<VertexSet> },
}

/// Builds the plan. Errors on isomorphic inputs and, for unequal orders, on
/// class-extension pairs (the strategy's round bound does not cover them).
pub fn spoiler_plan<'a>(g: &'a Graph, h: &'a Graph) -> Result<SpoilerPlan<'a>, StrategyError> {
    if is_isomorphic(g, h).is_some() {
        return Err(StrategyError::IsomorphicInputs);
    }
    let (small, large) = if g.order() <= h.order() { (g, h) } else { (h, g) };
    let extension = large.order() - small.order();
    if extension > 0 && small.order() > 0 {
        let part = similarity_partition(small);
        let mut seen = VertexSet::empty(small.order());
        for v in 0..small.order() {
            if seen.contains(v) {
                continue;
            }
            seen.union_with(part.class_of(v));
            if part.sigma_of(v) < 2 {
                continue;
            }
            let extended = oplus(small, v, extension).expect("class size ≥ 2 admits extension");
            if is_isomorphic(&extended, large).is_some() {
                return Err(StrategyError::ExceptionShape { extension });
            }
        }
    }
    let (x_order, state_g) = if g.order() == 0 {
        (Vec::new(), cx_partition(g, &VertexSet::empty(0)))
    } else {
        let (x, state) = c_maximal_set(g);
        // Recover greedy insertion order by replaying the construction.
        let mut order = Vec::new();
        let mut cur = VertexSet::empty(g.order());
        let mut count = cx_partition(g, &cur).classes.len();
        while cur != x {
            let mut advanced = false;
            for u in 0..g.order() {
                if cur.contains(u) {
                    continue;
                }
                let mut cand = cur.clone();
                cand.insert(u);
                let c = cx_partition(g, &cand).classes.len();
                if c > count {
                    order.push(u);
                    cur = cand;
                    count = c;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "greedy replay reconstructs the same set");
        }
        (order, state)
    };
    Ok(SpoilerPlan { g, h, x_order, state_g })
}

impl SpoilerPlan<'_> {
    /// Round-count annotation: `|X| + max σ over the complement + 2` bounds
    /// the 1-alternation game length from this plan's `X`.
    pub fn predicted_round_bound(&self) -> usize {
        let part = similarity_partition(self.g);
        let max_sigma = (0..self.g.order())
            .filter(|&v| !self.state_g.x.contains(v))
            .map(|v| part.sigma_of(v))
            .max()
            .unwrap_or(0);
        self.x_order.len() + max_sigma + 2
    }

    /// The configuration after the given history (placement order kept).
    fn config_pairs(&self, history: &[(SpoilerMove, usize)]) -> Vec<(usize, usize)> {
        history
            .iter()
            .map(|&(mv, reply)| match mv.side {
                Side::Left => (mv.vertex, reply),
                Side::Right => (reply, mv.vertex),
            })
            .collect()
    }

    fn is_alive(&self, pairs: &[(usize, usize)]) -> bool {
        GameConfig::new(pairs.to_vec(), None, None).is_alive(self.g, self.h)
    }

    /// The next Spoiler action given the match history so far (his moves
    /// paired with Duplicator's replies).
    pub fn next_move(&self, history: &[(SpoilerMove, usize)]) -> SpoilerAction {
        let pairs = self.config_pairs(history);
        if !self.is_alive(&pairs) {
            return SpoilerAction::ClaimWin;
        }
        let s = self.x_order.len();
        if history.len() < s {
            return SpoilerAction::Move(SpoilerMove {
                side: Side::Left,
                vertex: self.x_order[history.len()],
            });
        }
        // Phase 2. φ pairs each Phase-1 pick with its reply.
        let phi: Vec<(usize, usize)> =
            history[..s].iter().map(|&(mv, reply)| (mv.vertex, reply)).collect();
        let phistar_and_line = self.phase2_line(&phi);
        let (phistar, line) = phistar_and_line;
        let made = history.len() - s;
        match line {
            Phase2Line::Script { side, moves } => {
                assert!(
                    made < moves.len(),
                    "the scripted defect line forces a dead position within its moves"
                );
                SpoilerAction::Move(SpoilerMove { side, vertex: moves[made] })
            }
            Phase2Line::Reactive { side, picks, expected } => {
                // Find the first reply that survived but broke φ*-similarity.
                for (k, &(mv, reply)) in history[s..].iter().enumerate() {
                    let conforming = match &expected {
                        Some(class) => class.contains(reply),
                        None => false,
                    };
                    if !conforming {
                        assert_eq!(
                            k + 1,
                            made,
                            "a violation is punished on the very next move"
                        );
                        return SpoilerAction::Move(SpoilerMove {
                            side,
                            vertex: self.punish_vertex(&phistar, side, mv.vertex, reply),
                        });
                    }
                }
                assert!(
                    made < picks.len(),
                    "pigeonhole forces a violation within the scripted picks"
                );
                SpoilerAction::Move(SpoilerMove { side, vertex: picks[made] })
            }
        }
    }

    /// The same-side move completing a mismatch witness: the reply `u`
    /// disagrees with the pick `v` on some singleton-class vertex `w`; the
    /// pebble pair (w, φ*(w)) then kills the position.
    fn punish_vertex(
        &self,
        phistar: &[(usize, usize)],
        side: Side,
        pick: usize,
        reply: usize,
    ) -> usize {
        for &(w, wp) in phistar {
            if !self.state_g.y.contains(w) {
                continue;
            }
            let mismatch = match side {
                Side::Right => self.g.has_edge(reply, w) != self.h.has_edge(pick, wp),
                Side::Left => self.g.has_edge(pick, w) != self.h.has_edge(reply, wp),
            };
            if mismatch {
                return match side {
                    Side::Right => wp,
                    Side::Left => w,
                };
            }
        }
        unreachable!("an alive non-conforming reply always has a singleton witness")
    }

    /// Derives φ* and the Phase-2 line from φ by the defect cascade.
    fn phase2_line(&self, phi: &[(usize, usize)]) -> (Vec<(usize, usize)>, Phase2Line) {
        let (g, h) = (self.g, self.h);
        let state = &self.state_g;
        let mut xp = VertexSet::empty(h.order());
        for &(_, b) in phi {
            xp.insert(b);
        }
        let state_p = cx_partition(h, &xp);
        let m = phi_match(g, state, h, &state_p, phi)
            .expect("an alive Phase 1 yields a partial isomorphism");

        // Case 1: a class with no counterpart — any reply to a vertex in it
        // breaks the X-pattern.
        if let Some(MatchDefect::Unmatched { side, class_index }) = m.defect {
            let class = match side {
                Side::Left => &state.classes[class_index],
                Side::Right => &state_p.classes[class_index],
            };
            return (
                phi.to_vec(),
                Phase2Line::Script { side, moves: vec![class.first().unwrap()] },
            );
        }
        // Case 2: singleton matched to a larger class — two picks in the
        // larger class exhaust the singleton.
        if let Some(MatchDefect::SingletonMismatch { left_index, right_index }) = m.defect {
            let (ls, rs) = (state.classes[left_index].len(), state_p.classes[right_index].len());
            let (side, class) = if ls > rs {
                (Side::Left, &state.classes[left_index])
            } else {
                (Side::Right, &state_p.classes[right_index])
            };
            let picks: Vec<usize> = class.iter().take(2).collect();
            return (phi.to_vec(), Phase2Line::Script { side, moves: picks });
        }

        // φ* extends φ over the matched singletons.
        let mut phistar = phi.to_vec();
        let mut singleton_pairs: Vec<(usize, usize)> = Vec::new();
        for (i, j) in m.pairing.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))) {
            if state.classes[i].len() == 1 {
                let y = state.classes[i].first().unwrap();
                let yp = state_p.classes[j].first().unwrap();
                phistar.push((y, yp));
                singleton_pairs.push((y, yp));
            }
        }
        // Case 3: adjacency mismatch between matched singletons.
        for (a, &(y1, y1p)) in singleton_pairs.iter().enumerate() {
            for &(y2, y2p) in &singleton_pairs[a + 1..] {
                if g.has_edge(y1, y2) != h.has_edge(y1p, y2p) {
                    return (phistar, Phase2Line::Script { side: Side::Left, moves: vec![y1, y2] });
                }
            }
        }

        // Match the refined classes through φ*.
        let dp = &state_p.dclasses;
        let mut dpairing: Vec<Option<usize>> = vec![None; state.dclasses.len()];
        let mut dmatched_right = vec![false; dp.len()];
        for (i, d) in state.dclasses.iter().enumerate() {
            let v = d.first().unwrap();
            for (j, dpj) in dp.iter().enumerate() {
                let vp = dpj.first().unwrap();
                if phi_similar(g, h, &phistar, v, vp) {
                    dpairing[i] = Some(j);
                    dmatched_right[j] = true;
                    break;
                }
            }
        }
        // Case 4: an unmatched refined class — one pick, every surviving
        // reply is non-conforming, one punish move finishes.
        for (i, j) in dpairing.iter().enumerate() {
            if j.is_none() {
                let pick = state.dclasses[i].first().unwrap();
                return (
                    phistar,
                    Phase2Line::Reactive { side: Side::Left, picks: vec![pick], expected: None },
                );
            }
        }
        for (j, matched) in dmatched_right.iter().enumerate() {
            if !matched {
                let pick = dp[j].first().unwrap();
                return (
                    phistar,
                    Phase2Line::Reactive { side: Side::Right, picks: vec![pick], expected: None },
                );
            }
        }

        // Case 5: a matched refined class (or pair of classes) whose
        // adjacency pattern on the right contradicts the uniform pattern on
        // the left. The left side is uniform by C-maximality, so witnesses
        // live on the right.
        let c_class_of = |v: usize| state.classes.iter().find(|c| c.contains(v)).unwrap();
        for (i, j) in dpairing.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))) {
            // Uniform adjacency of the containing class (≥ 2 elements).
            let d = &state.dclasses[i];
            let c = c_class_of(d.first().unwrap());
            let members = c.to_vec();
            let alpha = g.has_edge(members[0], members[1]);
            let dpj = dp[j].to_vec();
            for (a, &u) in dpj.iter().enumerate() {
                for &v in &dpj[a + 1..] {
                    if h.has_edge(u, v) != alpha {
                        return (
                            phistar,
                            Phase2Line::Script { side: Side::Right, moves: vec![u, v] },
                        );
                    }
                }
            }
        }
        let matched: Vec<(usize, usize)> =
            dpairing.iter().enumerate().filter_map(|(i, j)| j.map(|j| (i, j))).collect();
        for (a, &(i1, j1)) in matched.iter().enumerate() {
            for &(i2, j2) in &matched[a + 1..] {
                let u = state.dclasses[i1].first().unwrap();
                let v = state.dclasses[i2].first().unwrap();
                let alpha = g.has_edge(u, v);
                for up in dp[j1].iter() {
                    for vp in dp[j2].iter() {
                        if h.has_edge(up, vp) != alpha {
                            return (
                                phistar,
                                Phase2Line::Script { side: Side::Right, moves: vec![up, vp] },
                            );
                        }
                    }
                }
            }
        }

        // Case 6: a useful class — matched refined classes of unequal size.
        // Target the one with the smallest small side; pick small+1 vertices
        // in the larger side, forcing a non-conforming reply.
        let mut best: Option<(usize, usize, usize)> = None; // (min size, i, j)
        for &(i, j) in &matched {
            let (sz, szp) = (state.dclasses[i].len(), dp[j].len());
            if sz != szp {
                let small = sz.min(szp);
                if best.is_none() || small < best.unwrap().0 {
                    best = Some((small, i, j));
                }
            }
        }
        let (small, i, j) =
            best.expect("non-isomorphic graphs expose a useful class once all else matches");
        let (side, larger, expected) = if state.dclasses[i].len() > dp[j].len() {
            (Side::Left, &state.dclasses[i], dp[j].clone())
        } else {
            (Side::Right, &dp[j], state.dclasses[i].clone())
        };
        let picks: Vec<usize> = larger.iter().take(small + 1).collect();
        (phistar, Phase2Line::Reactive { side, picks, expected: Some(expected) })
    }
}

/// Free-function form of [`SpoilerPlan::next_move`], for callers that pass
/// strategies around as plain functions.
pub fn spoiler_next_move(
    plan: &SpoilerPlan<'_>,
    history: &[(SpoilerMove, usize)],
) -> SpoilerAction {
    plan.next_move(history)
}

/// Any Duplicator implementation a match can be played against.
pub trait DuplicatorStrategy {
    /// The reply to Spoiler pebbling `vertex` on `side` from `cfg`; `None`
    /// when the replying structure has no vertices.
    fn reply(&mut self, cfg: &GameConfig, side: Side, vertex: usize) -> Option<usize>;
}

impl DuplicatorStrategy for DuplicatorOracle<'_> {
    fn reply(&mut self, cfg: &GameConfig, side: Side, vertex: usize) -> Option<usize> {
        DuplicatorOracle::reply(self, cfg, side, vertex)
    }
}

/// Who won a simulated match.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Winner {
    Spoiler,
    Duplicator,
}

/// One completed round of a simulated match.
#[derive(Clone, Copy, Debug)]
pub struct RoundRecord {
    /// 1-based round number.
    pub round: usize,
    pub side: Side,
    pub vertex: usize,
    /// `None` when the replying structure was empty.
    pub reply: Option<usize>,
    /// Whether the position was still a partial isomorphism afterwards.
    pub alive: bool,
}

/// Full transcript of a simulated match.
#[derive(Clone, Debug)]
pub struct MatchTranscript {
    pub winner: Winner,
    /// Rounds actually played.
    pub rounds: usize,
    /// Structure switches between consecutive Spoiler moves.
    pub alternations: usize,
    pub record: Vec<RoundRecord>,
}

/// Plays the constructive Spoiler against the given Duplicator, checking the
/// partial-isomorphism win condition after every round. Reaching `round_cap`
/// without a dead position counts as Duplicator survival.
pub fn simulate_match(
    g: &Graph,
    h: &Graph,
    duplicator: &mut dyn DuplicatorStrategy,
    round_cap: usize,
) -> Result<MatchTranscript, StrategyError> {
    let plan = spoiler_plan(g, h)?;
    let mut history: Vec<(SpoilerMove, usize)> = Vec::new();
    let mut record = Vec::new();
    let mut alternations = 0;
    let mut last_side: Option<Side> = None;
    loop {
        match plan.next_move(&history) {
            SpoilerAction::ClaimWin => {
                return Ok(MatchTranscript {
                    winner: Winner::Spoiler,
                    rounds: history.len(),
                    alternations,
                    record,
                });
            }
            SpoilerAction::Move(mv) => {
                if history.len() == round_cap {
                    return Ok(MatchTranscript {
                        winner: Winner::Duplicator,
                        rounds: history.len(),
                        alternations,
                        record,
                    });
                }
                if last_side.is_some_and(|s| s != mv.side) {
                    alternations += 1;
                }
                last_side = Some(mv.side);
                let cfg = GameConfig::new(
                    plan.config_pairs(&history),
                    last_side,
                    None,
                );
                let reply = duplicator.reply(&cfg, mv.side, mv.vertex);
                let round = history.len() + 1;
                match reply {
                    None => {
                        record.push(RoundRecord {
                            round,
                            side: mv.side,
                            vertex: mv.vertex,
                            reply: None,
                            alive: false,
                        });
                        return Ok(MatchTranscript {
                            winner: Winner::Spoiler,
                            rounds: round,
                            alternations,
                            record,
                        });
                    }
                    Some(r) => {
                        history.push((mv, r));
                        let alive = plan.is_alive(&plan.config_pairs(&history));
                        record.push(RoundRecord {
                            round,
                            side: mv.side,
                            vertex: mv.vertex,
                            reply: Some(r),
                            alive,
                        });
                        if !alive {
                            return Ok(MatchTranscript {
                                winner: Winner::Spoiler,
                                rounds: round,
                                alternations,
                                record,
                            });
                        }
                    }
                }
            }
        }
    }
}

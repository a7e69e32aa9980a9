//! The similarity relation on vertices and everything built directly on it:
//! similarity indices, the exceptional classes of graphs that defy the
//! general defining-rank bound, and the `⊕` class-extension operation.
//!
//! Two vertices are *similar* when swapping them is an automorphism. Each
//! similarity class is a clique or an independent set, and classes are
//! computed in `O(n² log n)` row comparisons: vertices with identical
//! adjacency rows are exactly the non-adjacent similar pairs, vertices with
//! identical rows in the complement are exactly the adjacent ones, and a
//! union–find merge of the two groupings yields the partition. `σ(G)` is the
//! largest class size; `σ_G(v)` the size of `v`'s class.
//!
//! The exceptional classes: a graph is *exceptional* when `σ(G) > (n+3)/2`.
//! With the largest class inclusion-maximal as a homogeneous set the graph is
//! of the first kind (defining rank exactly `σ+1`); with `σ(G) > (n+1)/2` and
//! the largest class not maximal it is of the second kind (defining rank
//! exactly `σ+2`). All threshold comparisons are exact integer arithmetic.

use crate::graph::{Graph, VertexSet};
use thiserror::Error;

/// The partition of a graph's vertices into similarity classes.
#[derive(Clone, Debug)]
pub struct SimilarityPartition {
    classes: Vec<VertexSet>,
    class_index: Vec<usize>,
}

impl SimilarityPartition {
    /// The classes, ordered by smallest member.
    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    /// Index of the class containing `v`.
    pub fn class_index(&self, v: usize) -> usize {
        self.class_index[v]
    }

    /// The class containing `v`.
    pub fn class_of(&self, v: usize) -> &VertexSet {
        &self.classes[self.class_index[v]]
    }

    /// `σ_G(v)`: size of the class containing `v`.
    pub fn sigma_of(&self, v: usize) -> usize {
        self.class_of(v).len()
    }

    /// `σ(G)`: the largest class size; 0 only for the empty graph.
    pub fn graph_sigma(&self) -> usize {
        self.classes.iter().map(VertexSet::len).max().unwrap_or(0)
    }
}

/// Computes the similarity partition by double row-sorting (see module docs).
pub fn similarity_partition(g: &Graph) -> SimilarityPartition {
    let n = g.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let merge_identical_rows = |gr: &Graph, parent: &mut Vec<usize>| {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| gr.row(a).cmp(gr.row(b)));
        for w in idx.windows(2) {
            if gr.row(w[0]) == gr.row(w[1]) {
                let (a, b) = (find(parent, w[0]), find(parent, w[1]));
                parent[a.max(b)] = a.min(b);
            }
        }
    };
    merge_identical_rows(g, &mut parent);
    merge_identical_rows(&g.complement(), &mut parent);

    let mut class_index = vec![usize::MAX; n];
    let mut classes: Vec<VertexSet> = Vec::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        if class_index[root] == usize::MAX {
            class_index[root] = classes.len();
            classes.push(VertexSet::empty(n));
        }
        class_index[v] = class_index[root];
        classes[class_index[v]].insert(v);
    }
    SimilarityPartition { classes, class_index }
}

/// Errors from similarity operations with nonempty/precondition contracts.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error("the empty graph has no similarity index")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error(
        "cannot extend the singleton class of vertex {vertex}: a class of size 1 \
         is both a clique and an independent set, so the extension is ambiguous"
    )]
    AmbiguousExtension { vertex: usize },
    #[error("special-pair precondition violated: {reason}")]
    SpecialPrecondition { reason: String },
}

/// `σ(G)` for a nonempty graph.
pub fn sigma(g: &Graph) -> Result<usize, SimilarityError> {
    if g.order() == 0 {
        return Err(SimilarityError::EmptyGraph);
    }
    Ok(similarity_partition(g).graph_sigma())
}

/// `σ_G(v)` for a nonempty graph.
pub fn sigma_of(g: &Graph, v: usize) -> Result<usize, SimilarityError> {
    if g.order() == 0 {
        return Err(SimilarityError::EmptyGraph);
    }
    if v >= g.order() {
        return Err(SimilarityError::VertexOutOfRange { vertex: v, order: g.order() });
    }
    Ok(similarity_partition(g).sigma_of(v))
}

/// Whether `set` induces a complete graph (vacuously true below two vertices).
pub fn is_clique(g: &Graph, set: &VertexSet) -> bool {
    let vs = set.to_vec();
    vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Whether `set` induces an empty graph (vacuously true below two vertices).
pub fn is_independent_set(g: &Graph, set: &VertexSet) -> bool {
    let vs = set.to_vec();
    vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
}

/// Whether `set` is homogeneous: a clique or an independent set.
pub fn is_homogeneous(g: &Graph, set: &VertexSet) -> bool {
    is_clique(g, set) || is_independent_set(g, set)
}

/// Whether `set` is homogeneous and no single outside vertex can be added
/// while keeping it homogeneous.
pub fn is_maximal_homogeneous(g: &Graph, set: &VertexSet) -> bool {
    if !is_homogeneous(g, set) {
        return false;
    }
    set.complement().iter().all(|w| {
        let mut bigger = set.clone();
        bigger.insert(w);
        !is_homogeneous(g, &bigger)
    })
}

/// Membership in the exceptional classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Membership {
    /// Not exceptional: the general bound applies.
    None,
    /// First kind: largest class maximal homogeneous, defining rank `σ+1`.
    S1,
    /// Second kind: largest class not maximal, defining rank `σ+2`.
    S2,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::None => "none",
            Membership::S1 => "S1",
            Membership::S2 => "S2",
        }
    }
}

/// Exceptional-class report for one graph.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub membership: Membership,
    /// Whether `σ(G) > (n+3)/2`, the threshold of the umbrella exceptional
    /// class. Every such graph lands in the first or second kind, so this is
    /// a flag rather than a `membership` variant.
    pub exceptional: bool,
    pub sigma: usize,
    /// The class that determined the verdict (lowest-indexed among the
    /// largest classes when no candidate qualifies).
    pub largest_class: VertexSet,
    /// Whether `largest_class` is an inclusion-maximal homogeneous set.
    pub maximal_homogeneous: bool,
}

/// Classifies a nonempty graph against the exceptional-class thresholds.
///
/// Ties among equal-size largest classes are resolved per candidate: the
/// verdict is first-kind if any candidate qualifies, else second-kind if any
/// does. (With `σ > (n+1)/2` the largest class is in fact unique, because two
/// disjoint classes of that size would overflow the graph.)
pub fn classify(g: &Graph) -> ClassReport {
    let n = g.order();
    assert!(n >= 1, "classification needs at least one vertex");
    let part = similarity_partition(g);
    let sigma = part.graph_sigma();
    let exceptional = 2 * sigma > n + 3;
    let second_kind_threshold = 2 * sigma > n + 1;
    let candidates: Vec<&VertexSet> =
        part.classes().iter().filter(|c| c.len() == sigma).collect();

    let mut chosen = candidates[0];
    let mut membership = Membership::None;
    for cand in &candidates {
        if exceptional && is_maximal_homogeneous(g, cand) {
            chosen = cand;
            membership = Membership::S1;
            break;
        }
    }
    if membership == Membership::None && second_kind_threshold {
        for cand in &candidates {
            if !is_maximal_homogeneous(g, cand) {
                chosen = cand;
                membership = Membership::S2;
                break;
            }
        }
    }
    let maximal_homogeneous = is_maximal_homogeneous(g, chosen);
    ClassReport {
        membership,
        exceptional,
        sigma,
        largest_class: chosen.clone(),
        maximal_homogeneous,
    }
}

/// `G ⊕ lv`: appends `l` new vertices, each similar to `v`.
///
/// Every new vertex is joined to `Γ(v) ∖ [v]`, and additionally to all of
/// `[v]` and to the other new vertices exactly when `[v]` is a clique. With
/// `l = 0` the graph is returned unchanged; with `l ≥ 1` the class of `v`
/// must have at least two members, otherwise "clique or independent" is
/// ambiguous and the call is rejected.
pub fn oplus(g: &Graph, v: usize, l: usize) -> Result<Graph, SimilarityError> {
    let n = g.order();
    if v >= n {
        return Err(SimilarityError::VertexOutOfRange { vertex: v, order: n });
    }
    if l == 0 {
        return Ok(g.clone());
    }
    let part = similarity_partition(g);
    let class = part.class_of(v);
    if class.len() < 2 {
        return Err(SimilarityError::AmbiguousExtension { vertex: v });
    }
    let clique = is_clique(g, class);
    let mut outside_neighbors = g.neighbors(v);
    outside_neighbors.difference_with(class);

    let mut out = g.disjoint_union(&Graph::empty(l));
    for i in 0..l {
        let new = n + i;
        for w in outside_neighbors.iter() {
            out.add_edge(w, new);
        }
        if clique {
            for w in class.iter() {
                out.add_edge(w, new);
            }
            for j in 0..i {
                out.add_edge(n + j, new);
            }
        }
    }
    Ok(out)
}

/// How the exact rank of a special pair is certified.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RankKind {
    /// The value is the alternation-free rank `D⁰` (hence also `D`).
    AlternationFree,
    /// The value is the unrestricted rank `D`.
    Unrestricted,
}

/// Exact distinguishing measures for a class-extension pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpecialPairRank {
    /// Pebble number `V(G, G ⊕ lv)`.
    pub pebble: usize,
    /// Distinguishing rank of the pair.
    pub rank: usize,
    pub rank_kind: RankKind,
}

/// Exact rank formulas for the pair `(G, G ⊕ lv)` under the special
/// condition `σ(G) ≥ n/2` with `v` in a largest class and `l ≥ 1`:
/// the pebble number is always `σ(G) + 1`; if `[v]` is inclusion-maximal
/// homogeneous the alternation-free rank is `σ(G) + 1`, otherwise the
/// unrestricted rank is `σ(G) + 2`.
pub fn exact_pair_rank_special(
    g: &Graph,
    v: usize,
    l: usize,
) -> Result<SpecialPairRank, SimilarityError> {
    let n = g.order();
    if v >= n {
        return Err(SimilarityError::VertexOutOfRange { vertex: v, order: n });
    }
    if l == 0 {
        return Err(SimilarityError::SpecialPrecondition {
            reason: "the extension count l must be at least 1".into(),
        });
    }
    let part = similarity_partition(g);
    let s = part.graph_sigma();
    if 2 * s < n {
        return Err(SimilarityError::SpecialPrecondition {
            reason: format!("σ(G) = {s} is below n/2 = {n}/2"),
        });
    }
    if part.sigma_of(v) != s {
        return Err(SimilarityError::SpecialPrecondition {
            reason: format!(
                "vertex {v} has class size {} but the largest class has {s}",
                part.sigma_of(v)
            ),
        });
    }
    let class = part.class_of(v);
    if is_maximal_homogeneous(g, class) {
        Ok(SpecialPairRank { pebble: s + 1, rank: s + 1, rank_kind: RankKind::AlternationFree })
    } else {
        Ok(SpecialPairRank { pebble: s + 1, rank: s + 2, rank_kind: RankKind::Unrestricted })
    }
}

/// The defining rank of a graph: either pinned exactly by its exceptional
/// class, or bracketed by a certified interval.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DefiningRank {
    Exact(usize),
    Interval { lower: usize, upper: usize },
}

/// The least quantifier rank of a sentence defining `g` up to isomorphism.
/// Graphs in the first exceptional family have rank exactly `σ(G)+1`, those
/// in the second exactly `σ(G)+2`. All remaining graphs fall under the
/// general `⌊(n+5)/2⌋` upper bound; the lower end of the interval is the
/// exhaustive same-order identification rank when the order admits full
/// enumeration (≤ 6) and the trivial 1 beyond that.
pub fn defining_rank_report(g: &Graph) -> DefiningRank {
    let report = classify(g);
    match report.membership {
        Membership::S1 => DefiningRank::Exact(report.sigma + 1),
        Membership::S2 => DefiningRank::Exact(report.sigma + 2),
        Membership::None => {
            let n = g.order();
            let lower = if n <= crate::solver::MAX_IDENTIFICATION_ORDER {
                crate::solver::identification_rank(g)
                    .expect("identification rank is computable up to order 6")
            } else {
                1
            };
            DefiningRank::Interval { lower, upper: (n + 5) / 2 }
        }
    }
}

//! Hard-instance generation: turns a connected d-regular seed graph H into
//! a pair of non-isomorphic graphs that low-dimensional color refinement
//! cannot tell apart, plus the brute-force separator/expansion machinery
//! that certifies how hard the pair is.
//!
//! The gadget: every seed vertex v becomes 2^{d−1} "middle" vertices, one
//! per even subset S of the d edges at v; every seed edge e becomes a
//! shared pair of vertices tracking e. The middle for (v, S) connects, for
//! each edge e at v, to the pair vertex (e, 1) if e ∈ S and to (e, 0)
//! otherwise — so middles have degree d and pair vertices degree 2^{d−1},
//! and the total order is (d + 2^{d−1})·|H|. The twisted partner swaps the
//! roles of (e*, 0) and (e*, 1) on one side of a single designated edge e*
//! (the lexicographically least, swapped at its lower endpoint). An even
//! number of twists cancels out; one twist cannot, so the two graphs are
//! not isomorphic, yet locally every gadget looks the same.
//!
//! The certification side: the separator size s(H) — the fewest vertices
//! whose removal leaves all components at most half the order — lower
//! bounds the refinement dimension needed to separate the pair. A separator
//! is in turn lower-bounded through the vertex expansion i_v(H) by
//! s ≥ i_v/(3+i_v)·n, and i_v relates to the edge expansion i_e by
//! i_v ≥ i_e/d on d-regular graphs (i_e/2 on cubic ones). Everything here
//! is computed by exhaustive subset scans in exact rational arithmetic.

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{is_isomorphic, Graph, VertexSet};
use crate::wl::{wl_separates_early, WlVariant};

/// Subset scans are exponential; this keeps them interactive.
pub const MAX_EXPANSION_ORDER: usize = 16;
/// Above this order, non-isomorphism is certified by color refinement
/// instead of the backtracking oracle.
const MAX_BRUTE_FORCE_ORDER: usize = 10;
/// Largest refinement dimension tried during certification.
const MAX_CERTIFY_DIMENSION: usize = 3;
/// Attempts before the configuration-model sampler gives up.
const REJECTION_CAP: usize = 500;

/// Errors of instance generation and the brute-force certifiers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CfiError {
    #[error("the seed graph must be regular")]
    NotRegular,
    #[error("the seed graph must be connected")]
    NotConnected,
    #[error("the seed graph must be at least 2-regular, got degree {degree}")]
    DegreeTooSmall { degree: usize },
    #[error("brute-force scans are limited to order {max}, got {order}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("expansion ratios need at least 2 vertices, got {order}")]
    OrderTooSmallForExpansion { order: usize },
    #[error("a {d}-regular graph on {m} vertices needs d·m even")]
    ParityViolation { d: usize, m: usize },
    #[error("a simple {d}-regular graph needs more than {d} vertices, got {m}")]
    OrderTooSmallForDegree { d: usize, m: usize },
    #[error("no simple pairing found within {cap} attempts")]
    RejectionCapExceeded { cap: usize },
}

/// What a vertex of a generated instance stands for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CfiLabel {
    /// Gadget middle for seed vertex `vertex`, selecting the even edge
    /// subset `subset` (edges as sorted endpoint pairs).
    Middle { vertex: usize, subset: Vec<(usize, usize)> },
    /// Copy `bit` of the pair tracking seed edge `edge`.
    EdgePair { edge: (usize, usize), bit: u8 },
}

/// A generated instance: the seed, the pair, the twisted edge, and the
/// meaning of every vertex (shared by both graphs in the pair).
#[derive(Clone, Debug)]
pub struct CfiInstance {
    pub seed: Graph,
    pub degree: usize,
    pub g: Graph,
    pub g_twisted: Graph,
    /// The seed edge whose gadget connection is flipped in `g_twisted`.
    pub twist: (usize, usize),
    /// provenance[i] describes vertex i of both `g` and `g_twisted`.
    pub provenance: Vec<CfiLabel>,
}

/// Builds the instance for a connected d-regular seed (d ≥ 2), asserting
/// the order formula, the degree formula, connectivity for d ≥ 3, and
/// certified non-isomorphism before returning.
pub fn cfi_pair(h: &Graph) -> Result<CfiInstance, CfiError> {
    let n = h.order();
    let degs = h.degrees();
    let d = *degs.first().ok_or(CfiError::NotRegular)?;
    if !h.is_regular(d) {
        return Err(CfiError::NotRegular);
    }
    if !h.is_connected() {
        return Err(CfiError::NotConnected);
    }
    if d < 2 {
        return Err(CfiError::DegreeTooSmall { degree: d });
    }

    let edges = h.edges();
    let incident: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    // Vertex layout: per seed vertex, its even-subset middles in ascending
    // mask order; then for each seed edge its two pair vertices.
    let middles_per_vertex = 1usize << (d - 1);
    let mut provenance = Vec::new();
    let mut middle_base = vec![0usize; n];
    for v in 0..n {
        middle_base[v] = provenance.len();
        for mask in 0..(1u32 << d) {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let subset: Vec<(usize, usize)> = (0..d)
                .filter(|t| mask >> t & 1 == 1)
                .map(|t| edges[incident[v][t]])
                .collect();
            provenance.push(CfiLabel::Middle { vertex: v, subset });
        }
        debug_assert_eq!(provenance.len() - middle_base[v], middles_per_vertex);
    }
    let pair_base = provenance.len();
    for &e in &edges {
        provenance.push(CfiLabel::EdgePair { edge: e, bit: 0 });
        provenance.push(CfiLabel::EdgePair { edge: e, bit: 1 });
    }
    let order = provenance.len();

    let twist = edges[0];
    let twist_side = twist.0;
    let build = |twisted: bool| -> Graph {
        let mut g = Graph::empty(order);
        for v in 0..n {
            let mut middle = middle_base[v];
            for mask in 0..(1u32 << d) {
                if mask.count_ones() % 2 != 0 {
                    continue;
                }
                for (t, &e_idx) in incident[v].iter().enumerate() {
                    let mut bit = mask >> t & 1;
                    if twisted && edges[e_idx] == twist && v == twist_side {
                        bit ^= 1;
                    }
                    g.add_edge(middle, pair_base + 2 * e_idx + bit as usize);
                }
                middle += 1;
            }
        }
        g
    };
    let g = build(false);
    let g_twisted = build(true);

    assert_eq!(g.order(), (d + middles_per_vertex) * n, "order formula");
    assert_eq!(g_twisted.order(), g.order(), "order formula");
    assert_eq!(g.max_degree(), middles_per_vertex, "degree formula");
    assert_eq!(g_twisted.max_degree(), middles_per_vertex, "degree formula");
    if d >= 3 {
        assert!(g.is_connected() && g_twisted.is_connected(), "connectivity at d ≥ 3");
    }
    assert!(certified_nonisomorphic(&g, &g_twisted), "the pair must not be isomorphic");

    Ok(CfiInstance { seed: h.clone(), degree: d, g, g_twisted, twist, provenance })
}

/// Sound non-isomorphism certificate: the backtracking oracle at small
/// orders, otherwise a multiset-refinement separation at some dimension
/// ≤ 3 (separations are always sound).
fn certified_nonisomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() {
        return true;
    }
    if g.order() <= MAX_BRUTE_FORCE_ORDER {
        return is_isomorphic(g, h).is_none();
    }
    (1..=MAX_CERTIFY_DIMENSION)
        .any(|k| wl_separates_early(g, h, k, WlVariant::Multiset))
}

/// The separator size: the minimum number of vertices whose removal leaves
/// every connected component with at most half the original order, with a
/// witness set. Exhaustive over all subsets.
pub fn separator_size(h: &Graph) -> Result<(usize, VertexSet), CfiError> {
    let n = h.order();
    if n > MAX_EXPANSION_ORDER {
        return Err(CfiError::OrderTooLarge { order: n, max: MAX_EXPANSION_ORDER });
    }
    let mut best: Option<(usize, u64)> = None;
    for mask in 0..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|(b, _)| size >= b) {
            continue;
        }
        let keep = VertexSet::from_iter(n, (0..n).filter(|v| mask >> v & 1 == 0));
        let ok = h
            .induced_subgraph(&keep)
            .connected_components()
            .iter()
            .all(|c| 2 * c.len() <= n);
        if ok {
            best = Some((size, mask));
        }
    }
    let (size, mask) = best.expect("removing every vertex always works");
    Ok((size, VertexSet::from_iter(n, (0..n).filter(|v| mask >> v & 1 == 1))))
}

fn expansion_scan(
    h: &Graph,
    cost: impl Fn(&Graph, &VertexSet) -> usize,
) -> Result<(Ratio<u64>, VertexSet), CfiError> {
    let n = h.order();
    if n > MAX_EXPANSION_ORDER {
        return Err(CfiError::OrderTooLarge { order: n, max: MAX_EXPANSION_ORDER });
    }
    if n < 2 {
        return Err(CfiError::OrderTooSmallForExpansion { order: n });
    }
    let mut best: Option<(Ratio<u64>, VertexSet)> = None;
    for mask in 1..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if 2 * size > n {
            continue;
        }
        let a = VertexSet::from_iter(n, (0..n).filter(|v| mask >> v & 1 == 1));
        let ratio = Ratio::new(cost(h, &a) as u64, size as u64);
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            best = Some((ratio, a));
        }
    }
    Ok(best.expect("n ≥ 2 admits a singleton candidate"))
}

/// The vertex expansion i_v: the minimum of |N(A)|/|A| over nonempty sets
/// of at most half the vertices, as an exact rational with a witness.
pub fn vertex_expansion(h: &Graph) -> Result<(Ratio<u64>, VertexSet), CfiError> {
    expansion_scan(h, |g, a| {
        let mut boundary = VertexSet::empty(g.order());
        for v in a.iter() {
            boundary.union_with(&g.neighbors(v));
        }
        boundary.difference_with(a);
        boundary.len()
    })
}

/// The edge expansion (isoperimetric number) i_e: the minimum of
/// e(A, V∖A)/|A| over the same sets.
pub fn edge_expansion(h: &Graph) -> Result<(Ratio<u64>, VertexSet), CfiError> {
    expansion_scan(h, |g, a| {
        a.iter()
            .map(|v| {
                let mut out = g.neighbors(v);
                out.difference_with(a);
                out.len()
            })
            .sum()
    })
}

/// The certified chain from expansion to separators.
#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub i_v: Ratio<u64>,
    pub i_e: Ratio<u64>,
    pub separator: usize,
    /// The certified lower bound i_v/(3+i_v)·n ≤ separator.
    pub certified_lower: Ratio<u64>,
}

/// Computes i_v, i_e, and s exhaustively and asserts the lower-bound chain:
/// s ≥ i_v/(3+i_v)·n always; i_v ≥ i_e/d for d-regular inputs (so i_e/2 on
/// cubic ones).
pub fn lower_bound_certificate(h: &Graph) -> Result<ExpansionReport, CfiError> {
    let (i_v, _) = vertex_expansion(h)?;
    let (i_e, _) = edge_expansion(h)?;
    let (separator, _) = separator_size(h)?;
    let n = Ratio::from_integer(h.order() as u64);
    let certified_lower = i_v / (Ratio::from_integer(3) + i_v) * n;
    assert!(
        Ratio::from_integer(separator as u64) >= certified_lower,
        "separator bound violated on {h:?}"
    );
    let degs = h.degrees();
    if !degs.is_empty() && h.is_regular(degs[0]) && degs[0] > 0 {
        assert!(
            i_v >= i_e / Ratio::from_integer(degs[0] as u64),
            "regular expansion relation violated on {h:?}"
        );
    }
    Ok(ExpansionReport { i_v, i_e, separator, certified_lower })
}

/// A random d-regular simple graph on m vertices via the configuration
/// model: d stubs per vertex, a uniformly random perfect matching of stubs,
/// rejected until loop-free and multiedge-free. Deterministic per seed.
pub fn random_regular(d: usize, m: usize, seed: u64) -> Result<Graph, CfiError> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    if m <= d {
        return Err(CfiError::OrderTooSmallForDegree { d, m });
    }
    if d * m % 2 != 0 {
        return Err(CfiError::ParityViolation { d, m });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_CAP {
        let mut stubs: Vec<usize> = (0..d * m).map(|i| i / d).collect();
        stubs.shuffle(&mut rng);
        let mut g = Graph::empty(m);
        let mut simple = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                simple = false;
                break;
            }
            g.add_edge(u, v);
        }
        if simple {
            debug_assert!(g.is_regular(d));
            return Ok(g);
        }
    }
    Err(CfiError::RejectionCapExceeded { cap: REJECTION_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{connected_graphs, connected_regular_graphs};

    fn prism() -> Graph {
        Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    }

    #[test]
    fn cfi_pair_k4() {
        let inst = cfi_pair(&Graph::complete(4)).unwrap();
        assert_eq!(inst.g.order(), 28);
        assert_eq!(inst.g_twisted.order(), 28);
        assert_eq!(inst.g.max_degree(), 4);
        assert!(inst.g.is_connected());
        assert_eq!(inst.twist, (0, 1));
        // Middles have degree 3, pair vertices degree 4.
        for (i, label) in inst.provenance.iter().enumerate() {
            match label {
                CfiLabel::Middle { .. } => assert_eq!(inst.g.degree(i), 3),
                CfiLabel::EdgePair { .. } => assert_eq!(inst.g.degree(i), 4),
            }
        }
        assert_eq!(
            inst.provenance.iter().filter(|l| matches!(l, CfiLabel::Middle { .. })).count(),
            16
        );
    }

    #[test]
    fn cfi_pair_small_seeds() {
        // C_4 and C_5 at d = 2: order (2+2)·|H|, max degree 2.
        for (seed, order) in [(Graph::cycle(4), 16), (Graph::cycle(5), 20)] {
            let inst = cfi_pair(&seed).unwrap();
            assert_eq!(inst.g.order(), order);
            assert_eq!(inst.g.max_degree(), 2);
            assert_eq!(inst.g_twisted.max_degree(), 2);
        }
    }

    #[test]
    fn cfi_pair_rejects_bad_seeds() {
        assert_eq!(cfi_pair(&Graph::path(3)).unwrap_err(), CfiError::NotRegular);
        assert_eq!(
            cfi_pair(&Graph::complete(3).disjoint_union(&Graph::complete(3))).unwrap_err(),
            CfiError::NotConnected
        );
        assert_eq!(cfi_pair(&Graph::complete(2)).unwrap_err(), CfiError::DegreeTooSmall {
            degree: 1
        });
    }

    #[test]
    fn cfi_pair_larger_cubic_seeds() {
        // Both connected cubic graphs on six vertices: K_{3,3} and the prism.
        for seed in [Graph::complete_bipartite(3, 3), prism()] {
            let inst = cfi_pair(&seed).unwrap();
            assert_eq!(inst.g.order(), 7 * 6);
            assert_eq!(inst.g.max_degree(), 4);
            assert!(inst.g.is_connected() && inst.g_twisted.is_connected());
        }
    }

    #[test]
    fn separator_examples() {
        let (s, witness) = separator_size(&Graph::path(3)).unwrap();
        assert_eq!(s, 1);
        assert!(witness.contains(1));
        assert_eq!(separator_size(&Graph::complete(4)).unwrap().0, 2);
        assert_eq!(separator_size(&Graph::empty(4)).unwrap().0, 0);
        assert_eq!(
            separator_size(&Graph::empty(17)).unwrap_err(),
            CfiError::OrderTooLarge { order: 17, max: 16 }
        );
    }

    #[test]
    fn expansion_examples() {
        let (iv, _) = vertex_expansion(&Graph::complete(4)).unwrap();
        assert_eq!(iv, Ratio::new(1, 1));
        let (ie, _) = edge_expansion(&Graph::complete(4)).unwrap();
        assert_eq!(ie, Ratio::new(2, 1));
        let (iv, _) = vertex_expansion(&Graph::empty(2)).unwrap();
        assert_eq!(iv, Ratio::new(0, 1));
        let (ie, witness) = edge_expansion(&Graph::cycle(4)).unwrap();
        assert_eq!(ie, Ratio::new(1, 1));
        assert_eq!(witness.len(), 2);
        // C_6 by hand: three consecutive vertices have two outside
        // neighbors and two boundary edges.
        let (iv, _) = vertex_expansion(&Graph::cycle(6)).unwrap();
        assert_eq!(iv, Ratio::new(2, 3));
        let (ie, _) = edge_expansion(&Graph::cycle(6)).unwrap();
        assert_eq!(ie, Ratio::new(2, 3));
    }

    #[test]
    fn lower_bound_certificates() {
        let report = lower_bound_certificate(&Graph::complete(4)).unwrap();
        assert_eq!(report.certified_lower, Ratio::new(1, 1));
        assert_eq!(report.separator, 2);
        assert!(report.i_v >= report.i_e / Ratio::from_integer(2));
        let report = lower_bound_certificate(&Graph::cycle(6)).unwrap();
        assert_eq!(report.i_v, Ratio::new(2, 3));
        assert!(Ratio::from_integer(report.separator as u64) >= report.certified_lower);
    }

    #[test]
    fn expansion_lemmas_small() {
        // Separator bound on all connected graphs of order ≤ 5 (full range
        // in the acceptance suite); regular relation where applicable.
        for n in 2..=5 {
            for g in connected_graphs(n) {
                lower_bound_certificate(&g).unwrap();
            }
        }
        // Cubic relation on the order-≤6 connected cubic graphs.
        for n in [4, 6] {
            for g in connected_regular_graphs(n, 3) {
                let report = lower_bound_certificate(&g).unwrap();
                assert!(report.i_v >= report.i_e / Ratio::from_integer(2), "{g:?}");
            }
        }
    }

    #[test]
    fn random_regular_generation() {
        // The unique cubic graph on 4 vertices.
        for seed in 0..5 {
            let g = random_regular(3, 4, seed).unwrap();
            assert!(is_isomorphic(&g, &Graph::complete(4)).is_some());
        }
        assert_eq!(random_regular(3, 5, 0).unwrap_err(), CfiError::ParityViolation {
            d: 3,
            m: 5
        });
        assert_eq!(random_regular(3, 3, 0).unwrap_err(), CfiError::OrderTooSmallForDegree {
            d: 3,
            m: 3
        });
        let g = random_regular(2, 6, 11).unwrap();
        assert!(g.is_regular(2));
        assert_eq!(random_regular(2, 6, 11).unwrap(), g, "deterministic per seed");
    }
}


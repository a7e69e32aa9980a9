//! Exhaustive catalogues of small graphs up to isomorphism.
//!
//! Orders 0 through 7 are enumerated once and cached for the lifetime of the
//! process. Enumeration is by extension: every graph of order `k+1` arises
//! from deleting a vertex, so attaching a new vertex to each representative of
//! order `k` with every possible neighborhood reaches every isomorphism class;
//! duplicates are removed with [`canonical_key`]. Each level is sorted by
//! canonical key, so catalogue indices are stable across runs and platforms.
//!
//! Regular graphs beyond order 7 (needed only for cubic order 8) are
//! enumerated directly by degree-constrained backtracking.

use crate::graph::{canonical_key, Graph};
use std::collections::HashSet;
use std::sync::OnceLock;

/// Largest order for which the full catalogue is built (1044 classes at 7).
pub const MAX_CATALOG_ORDER: usize = 7;

static LEVELS: [OnceLock<Vec<Graph>>; MAX_CATALOG_ORDER + 1] =
    [const { OnceLock::new() }; MAX_CATALOG_ORDER + 1];

/// All graphs of order `n ≤ 7` up to isomorphism, sorted by canonical key.
///
/// Panics if `n` exceeds [`MAX_CATALOG_ORDER`]; exhaustive sweeps are a
/// desk-scale tool and the callers all validate the order first.
pub fn graphs_up_to_iso(n: usize) -> &'static [Graph] {
    assert!(
        n <= MAX_CATALOG_ORDER,
        "catalogue covers orders 0..={MAX_CATALOG_ORDER}, asked for {n}"
    );
    LEVELS[n].get_or_init(|| {
        if n == 0 {
            return vec![Graph::empty(0)];
        }
        let prev = graphs_up_to_iso(n - 1);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in prev {
            for mask in 0u64..1 << (n - 1) {
                let mut h = g.disjoint_union(&Graph::empty(1));
                for v in 0..n - 1 {
                    if mask >> v & 1 == 1 {
                        h.add_edge(v, n - 1);
                    }
                }
                let key = canonical_key(&h);
                if seen.insert(key.clone()) {
                    out.push((key, h));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out.into_iter().map(|(_, g)| g).collect()
    })
}

/// Connected graphs of order `n ≤ 7` up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    graphs_up_to_iso(n).iter().filter(|g| g.is_connected()).cloned().collect()
}

/// Connected `d`-regular graphs of order `n` up to isomorphism, sorted by
/// canonical key. Orders ≤ 7 filter the catalogue; larger orders use direct
/// degree-constrained enumeration (kept within desk scale by the callers).
pub fn connected_regular_graphs(n: usize, d: usize) -> Vec<Graph> {
    if n <= MAX_CATALOG_ORDER {
        return graphs_up_to_iso(n)
            .iter()
            .filter(|g| g.is_regular(d) && g.is_connected())
            .cloned()
            .collect();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in labeled_regular_graphs(n, d) {
        if !g.is_connected() {
            continue;
        }
        let key = canonical_key(&g);
        if seen.insert(key.clone()) {
            out.push((key, g));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}

/// All labeled `d`-regular graphs on `n` vertices. Backtracking: vertices are
/// completed in index order by choosing their still-missing neighbors among
/// higher-indexed vertices with spare degree.
pub fn labeled_regular_graphs(n: usize, d: usize) -> Vec<Graph> {
    if d >= n.max(1) || n * d % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut g = Graph::empty(n);
    let mut rem = vec![d; n];
    complete_vertex(0, &mut g, &mut rem, &mut out);
    out
}

fn complete_vertex(u: usize, g: &mut Graph, rem: &mut [usize], out: &mut Vec<Graph>) {
    let n = rem.len();
    if u == n {
        out.push(g.clone());
        return;
    }
    let need = rem[u];
    if need == 0 {
        complete_vertex(u + 1, g, rem, out);
        return;
    }
    let candidates: Vec<usize> = (u + 1..n).filter(|&v| rem[v] > 0).collect();
    if candidates.len() < need {
        return;
    }
    // Choose `need` of the candidates, in lexicographic order.
    let mut choice = Vec::with_capacity(need);
    choose_neighbors(u, &candidates, 0, need, &mut choice, g, rem, out);
}

#[allow(clippy::too_many_arguments)]
fn choose_neighbors(
    u: usize,
    candidates: &[usize],
    start: usize,
    need: usize,
    choice: &mut Vec<usize>,
    g: &mut Graph,
    rem: &mut [usize],
    out: &mut Vec<Graph>,
) {
    if need == 0 {
        rem[u] = 0;
        complete_vertex(u + 1, g, rem, out);
        rem[u] = choice.len();
        return;
    }
    if candidates.len() - start < need {
        return;
    }
    for i in start..candidates.len() {
        let v = candidates[i];
        g.add_edge(u, v);
        rem[v] -= 1;
        choice.push(v);
        choose_neighbors(u, candidates, i + 1, need - 1, choice, g, rem, out);
        choice.pop();
        rem[v] += 1;
        g.remove_edge(u, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    #[test]
    fn catalogue_counts_match_known_values() {
        // Numbers of graphs up to isomorphism, orders 0..=7.
        let expect = [1usize, 1, 2, 4, 11, 34, 156, 1044];
        for (n, &count) in expect.iter().enumerate() {
            assert_eq!(graphs_up_to_iso(n).len(), count, "order {n}");
        }
    }

    #[test]
    fn connected_counts_match_known_values() {
        // Numbers of connected graphs, orders 1..=7.
        let expect = [1usize, 1, 2, 6, 21, 112, 853];
        for (i, &count) in expect.iter().enumerate() {
            assert_eq!(connected_graphs(i + 1).len(), count, "order {}", i + 1);
        }
    }

    #[test]
    fn catalogue_entries_are_pairwise_non_isomorphic() {
        for n in 0..=5 {
            let gs = graphs_up_to_iso(n);
            for i in 0..gs.len() {
                for j in i + 1..gs.len() {
                    assert!(is_isomorphic(&gs[i], &gs[j]).is_none(), "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn cubic_counts_match_known_values() {
        assert_eq!(connected_regular_graphs(4, 3).len(), 1);
        assert_eq!(connected_regular_graphs(6, 3).len(), 2);
        assert_eq!(connected_regular_graphs(8, 3).len(), 5);
        // Odd order or excessive degree: no regular graphs at all.
        assert!(connected_regular_graphs(5, 3).is_empty());
        assert!(labeled_regular_graphs(4, 4).is_empty());
    }

    #[test]
    fn two_regular_connected_is_the_cycle() {
        for n in 3..=7 {
            let gs = connected_regular_graphs(n, 2);
            assert_eq!(gs.len(), 1, "order {n}");
            assert!(is_isomorphic(&gs[0], &Graph::cycle(n)).is_some());
        }
    }

    #[test]
    fn cubic_order_4_is_k4() {
        let gs = connected_regular_graphs(4, 3);
        assert!(is_isomorphic(&gs[0], &Graph::complete(4)).is_some());
    }
}

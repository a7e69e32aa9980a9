//! The k-dimensional color-refinement (Weisfeiler–Leman) algorithm in its
//! set-based weak form, with the standard multiset form as an opt-in
//! variant.
//!
//! Every ordered k-tuple of vertices starts with its isomorphism type as
//! color (the equality pattern of the tuple plus the adjacency pattern of
//! its distinct entries). A refinement step recolors each tuple `ū` with
//! `(old(ū), { (old(ū^{1,w}), …, old(ū^{k,w})) : w ∈ V })`, where `ū^{i,w}`
//! substitutes `w` at position `i`; the inner collection is a set in the
//! weak variant and a multiset in the standard one. After every step all
//! color values — jointly over both graphs, so ids stay comparable — are
//! sorted lexicographically and replaced by ordinals.
//!
//! Stabilization needs fewer than `|G|^k + |G′|^k` steps; the isomorphism
//! test then compares the sets of diagonal-tuple colors. A "non-isomorphic"
//! answer is always sound; "isomorphic" is reliable once k exceeds the
//! pebble number minus one. Canonization runs a nominal `2|G|^k − 1` steps
//! on one graph; since a stable partition reproduces both its partition and
//! its substitution table verbatim on every later step, the run stops at
//! stability and the remaining steps are implied.
//!
//! Degeneracy at k = 1: under this formulation 1-tuples carry no adjacency
//! information (an isotype of a single vertex is trivial and substitution
//! ranges over all of V, not neighborhoods), so dimension 1 never separates
//! anything. Searches for the optimal dimension therefore effectively start
//! at 2.

use thiserror::Error;

use crate::graph::{is_isomorphic, Graph};

/// Which inner collection a refinement step builds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WlVariant {
    /// The weak form: substituted-tuple color vectors form a set.
    Set,
    /// The standard form: they form a multiset.
    Multiset,
}

/// The isomorphism type of an ordered vertex tuple: `f[i]` is the
/// first-occurrence ordinal (1-based) of the i-th entry among the `s`
/// distinct entries, and `pattern` lists adjacency among the distinct
/// entries in order of first occurrence (upper triangle, row-major).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsoType {
    pub s: usize,
    pub f: Vec<usize>,
    pub pattern: Vec<bool>,
}

impl IsoType {
    /// Canonical integer encoding used as an initial color value.
    fn encode(&self) -> Vec<u32> {
        let mut e = Vec::with_capacity(1 + self.f.len() + self.pattern.len());
        e.push(self.s as u32);
        e.extend(self.f.iter().map(|&x| x as u32));
        e.extend(self.pattern.iter().map(|&b| b as u32));
        e
    }
}

/// The isomorphism type of `tuple` in `g`.
pub fn isotype(g: &Graph, tuple: &[usize]) -> IsoType {
    let mut reps: Vec<usize> = Vec::new();
    let mut f = Vec::with_capacity(tuple.len());
    for &u in tuple {
        assert!(u < g.order(), "tuple entry out of range");
        match reps.iter().position(|&r| r == u) {
            Some(p) => f.push(p + 1),
            None => {
                reps.push(u);
                f.push(reps.len());
            }
        }
    }
    let s = reps.len();
    let mut pattern = Vec::with_capacity(s * s.saturating_sub(1) / 2);
    for a in 0..s {
        for b in a + 1..s {
            pattern.push(g.has_edge(reps[a], reps[b]));
        }
    }
    IsoType { s, f, pattern }
}

/// A joint coloring of the k-tuple spaces of two graphs sharing one
/// renaming table, so equal ids mean equal colors across graphs.
#[derive(Clone, Debug)]
pub struct WlColoring {
    pub k: usize,
    n_left: usize,
    n_right: usize,
    /// Color id of every k-tuple, indexed by the base-n digit expansion of
    /// the tuple (first entry most significant).
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// Number of distinct ids in use.
    pub palette: usize,
}

/// Errors of the isomorphism-test and dimension-search entry points.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WlError {
    #[error("the isomorphism test requires equal orders, got {left} and {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("the graphs are isomorphic; no dimension distinguishes them")]
    IsomorphicInputs,
    #[error(
        "no dimension up to the cap {cap} distinguished the graphs; this \
         would contradict the ⌊(n+1)/2⌋ sufficiency bound for the set variant"
    )]
    DimensionCapExceeded { cap: usize },
}

fn tuple_count(n: usize, k: usize) -> usize {
    n.checked_pow(k as u32).expect("tuple space fits in usize")
}

/// Assigns ordinals to raw color values, jointly and lexicographically.
fn rename(k: usize, n_left: usize, n_right: usize, raw: Vec<Vec<u32>>) -> WlColoring {
    let mut unique: Vec<&Vec<u32>> = raw.iter().collect();
    unique.sort_unstable();
    unique.dedup();
    let palette = unique.len();
    let ids: Vec<u32> = raw
        .iter()
        .map(|v| unique.binary_search(&v).expect("value was collected") as u32)
        .collect();
    let split = tuple_count(n_left, k);
    let (l, r) = ids.split_at(split);
    WlColoring { k, n_left, n_right, left: l.to_vec(), right: r.to_vec(), palette }
}

fn initial_raw(g: &Graph, k: usize) -> Vec<Vec<u32>> {
    let n = g.order();
    let total = tuple_count(n, k);
    let mut raw = Vec::with_capacity(total);
    let mut tuple = vec![0usize; k];
    for idx in 0..total {
        let mut rem = idx;
        for i in (0..k).rev() {
            tuple[i] = rem % n;
            rem /= n;
        }
        raw.push(isotype(g, &tuple).encode());
    }
    raw
}

/// The initial joint coloring: every tuple colored by its isomorphism type,
/// renamed over both graphs together.
pub fn wl_initial_coloring(g: &Graph, h: &Graph, k: usize) -> WlColoring {
    assert!(k >= 1, "dimension must be at least 1");
    let mut raw = initial_raw(g, k);
    raw.extend(initial_raw(h, k));
    rename(k, g.order(), h.order(), raw)
}

fn refine_raw(g: &Graph, k: usize, colors: &[u32], variant: WlVariant) -> Vec<Vec<u32>> {
    let n = g.order();
    let total = tuple_count(n, k);
    debug_assert_eq!(colors.len(), total);
    // strides[i] is the index weight of tuple position i.
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * n;
    }
    let mut raw = Vec::with_capacity(total);
    for idx in 0..total {
        // bases[i] = idx with position i zeroed, so substituting w at i is
        // an addition.
        let bases: Vec<usize> =
            (0..k).map(|i| idx - (idx / strides[i] % n) * strides[i]).collect();
        let mut vectors: Vec<Vec<u32>> = (0..n)
            .map(|w| (0..k).map(|i| colors[bases[i] + w * strides[i]]).collect())
            .collect();
        vectors.sort_unstable();
        if variant == WlVariant::Set {
            vectors.dedup();
        }
        let mut sig = Vec::with_capacity(1 + vectors.len() * k);
        sig.push(colors[idx]);
        for v in vectors {
            sig.extend(v);
        }
        raw.push(sig);
    }
    raw
}

/// One color-refinement step on the joint coloring, followed by the joint
/// lexicographic renaming. The result refines the input partition.
pub fn wl_refine_step(g: &Graph, h: &Graph, c: &WlColoring, variant: WlVariant) -> WlColoring {
    assert_eq!(c.n_left, g.order(), "coloring was built for different graphs");
    assert_eq!(c.n_right, h.order(), "coloring was built for different graphs");
    let mut raw = refine_raw(g, c.k, &c.left, variant);
    raw.extend(refine_raw(h, c.k, &c.right, variant));
    let next = rename(c.k, c.n_left, c.n_right, raw);
    assert!(next.palette >= c.palette, "refinement can only split classes");
    next
}

/// Iterates refinement until the joint partition is stable. Returns the
/// stable coloring and the number `R` of steps after which nothing changed
/// (`R+1` steps are performed); `R < |g|^k + |h|^k` is asserted.
pub fn wl_stabilize(
    g: &Graph,
    h: &Graph,
    k: usize,
    variant: WlVariant,
) -> (WlColoring, usize) {
    let mut current = wl_initial_coloring(g, h, k);
    let mut steps = 0usize;
    loop {
        let next = wl_refine_step(g, h, &current, variant);
        steps += 1;
        // The step embeds the old color, so equal class counts mean the
        // identical partition.
        if next.palette == current.palette {
            let r = steps - 1;
            assert!(
                r < tuple_count(g.order(), k) + tuple_count(h.order(), k),
                "stabilization exceeded the tuple-count bound"
            );
            return (next, r);
        }
        current = next;
    }
}

/// Outcome of the isomorphism test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WlDecision {
    Isomorphic,
    NonIsomorphic,
}

fn diagonal_ids(colors: &[u32], n: usize, k: usize) -> Vec<u32> {
    let mut stride_sum = 0usize;
    let mut weight = 1usize;
    for _ in 0..k {
        stride_sum += weight;
        weight *= n;
    }
    let mut ids: Vec<u32> = (0..n).map(|v| colors[v * stride_sum]).collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Early-exit separation check: refines until the diagonal color sets
/// differ or the partition stabilizes. A separation at any intermediate
/// step persists (each new color embeds the old one), so answering early
/// is sound and much cheaper than full stabilization on large orders.
pub(crate) fn wl_separates_early(g: &Graph, h: &Graph, k: usize, variant: WlVariant) -> bool {
    assert_eq!(g.order(), h.order(), "separation check needs equal orders");
    let n = g.order();
    let mut current = wl_initial_coloring(g, h, k);
    loop {
        if diagonal_ids(&current.left, n, k) != diagonal_ids(&current.right, n, k) {
            return true;
        }
        let next = wl_refine_step(g, h, &current, variant);
        if next.palette == current.palette {
            return false;
        }
        current = next;
    }
}

/// Runs refinement to stability and compares the sets of diagonal-tuple
/// colors. "Non-isomorphic" is always sound; "isomorphic" is reliable once
/// `k ≥ pebble number − 1`.
pub fn wl_iso_test(
    g: &Graph,
    h: &Graph,
    k: usize,
    variant: WlVariant,
) -> Result<WlDecision, WlError> {
    if g.order() != h.order() {
        return Err(WlError::OrderMismatch { left: g.order(), right: h.order() });
    }
    let (stable, _) = wl_stabilize(g, h, k, variant);
    let n = g.order();
    if diagonal_ids(&stable.left, n, k) == diagonal_ids(&stable.right, n, k) {
        Ok(WlDecision::Isomorphic)
    } else {
        Ok(WlDecision::NonIsomorphic)
    }
}

/// A canonization certificate: the per-step substitution tables (each the
/// sorted list of distinct raw color values, which is what the renaming
/// consulted) together with the final sorted diagonal ids. Isomorphic graphs
/// produce equal certificates; the tables make inequality meaningful.
///
/// The nominal run is `2n^k − 1` steps, but a stable step reproduces its
/// table and partition verbatim forever after, so tables are recorded only
/// until stability and the remainder is implied.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WlCertificate {
    pub k: usize,
    /// The nominal step count `2n^k − 1`.
    pub nominal_steps: usize,
    /// Steps actually performed before the partition stabilized.
    pub performed_steps: usize,
    /// Substitution tables: index 0 is the initial-coloring table, then one
    /// per performed refinement step.
    pub tables: Vec<Vec<Vec<u32>>>,
    /// Sorted distinct diagonal-tuple ids of the final coloring.
    pub diagonal: Vec<u32>,
}

/// Canonization mode: single-graph refinement with all substitution tables
/// retained.
pub fn wl_canonical_form(g: &Graph, k: usize, variant: WlVariant) -> WlCertificate {
    assert!(k >= 1, "dimension must be at least 1");
    let n = g.order();
    let nominal = 2 * tuple_count(n, k) - 1;
    let table_of = |raw: &[Vec<u32>]| -> Vec<Vec<u32>> {
        let mut t: Vec<Vec<u32>> = raw.to_vec();
        t.sort_unstable();
        t.dedup();
        t
    };
    let raw = initial_raw(g, k);
    let mut tables = vec![table_of(&raw)];
    let mut colors: Vec<u32> = raw
        .iter()
        .map(|v| tables[0].binary_search(v).expect("value was collected") as u32)
        .collect();
    let mut palette = tables[0].len();
    let mut performed = 0usize;
    while performed < nominal {
        let raw = refine_raw(g, k, &colors, variant);
        let table = table_of(&raw);
        let next: Vec<u32> = raw
            .iter()
            .map(|v| table.binary_search(v).expect("value was collected") as u32)
            .collect();
        let next_palette = table.len();
        tables.push(table);
        colors = next;
        performed += 1;
        if next_palette == palette {
            break;
        }
        palette = next_palette;
    }
    let diagonal = diagonal_ids(&colors, n, k);
    WlCertificate { k, nominal_steps: nominal, performed_steps: performed, tables, diagonal }
}

/// The smallest dimension whose isomorphism test separates the two graphs.
/// The search is capped at `⌊(n+1)/2⌋ + 1`, a dimension proven sufficient
/// for the set variant on equal-order inputs; needing more would mean a
/// bug somewhere, so exceeding the cap is reported as an error.
pub fn wl_optimal_dimension(
    g: &Graph,
    h: &Graph,
    variant: WlVariant,
) -> Result<usize, WlError> {
    if g.order() != h.order() {
        return Err(WlError::OrderMismatch { left: g.order(), right: h.order() });
    }
    if is_isomorphic(g, h).is_some() {
        return Err(WlError::IsomorphicInputs);
    }
    let cap = (g.order() + 1) / 2 + 1;
    for k in 1..=cap {
        if wl_iso_test(g, h, k, variant)? == WlDecision::NonIsomorphic {
            return Ok(k);
        }
    }
    Err(WlError::DimensionCapExceeded { cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::graphs_up_to_iso;
    use crate::solver::pebble_v;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn isotype_examples() {
        let k3 = Graph::complete(3);
        let t = isotype(&k3, &[1, 1, 1]);
        assert_eq!((t.s, t.f.as_slice(), t.pattern.as_slice()), (1, &[1, 1, 1][..], &[][..]));
        let t = isotype(&k3, &[0, 2]);
        assert_eq!((t.s, t.f.as_slice(), t.pattern.as_slice()), (2, &[1, 2][..], &[true][..]));
        let t = isotype(&k3, &[0, 2, 0]);
        assert_eq!((t.s, t.f.as_slice(), t.pattern.as_slice()), (2, &[1, 2, 1][..], &[true][..]));
        // Equality patterns are captured: (u,v,u) and (u,v,v) differ.
        assert_ne!(isotype(&k3, &[0, 2, 0]), isotype(&k3, &[0, 2, 2]));
        let p3 = Graph::path(3);
        let t = isotype(&p3, &[0, 2]);
        assert_eq!(t.pattern, vec![false]);
    }

    #[test]
    fn refine_step_separates_k2_from_e2() {
        let g = Graph::complete(2);
        let h = Graph::empty(2);
        let c0 = wl_initial_coloring(&g, &h, 2);
        // Initially the diagonal tuples agree across graphs.
        assert_eq!(diagonal_ids(&c0.left, 2, 2), diagonal_ids(&c0.right, 2, 2));
        let c1 = wl_refine_step(&g, &h, &c0, WlVariant::Set);
        assert_ne!(diagonal_ids(&c1.left, 2, 2), diagonal_ids(&c1.right, 2, 2));
        // A stable coloring reproduces its own partition.
        let (stable, _) = wl_stabilize(&g, &h, 2, WlVariant::Set);
        let again = wl_refine_step(&g, &h, &stable, WlVariant::Set);
        assert_eq!(again.palette, stable.palette);
    }

    #[test]
    fn stabilization_bound_holds() {
        let (_, r) = wl_stabilize(&Graph::complete(1), &Graph::complete(1), 1, WlVariant::Set);
        assert!(r < 2);
        let (_, r) = wl_stabilize(&Graph::complete(2), &Graph::empty(2), 2, WlVariant::Set);
        assert!(r < 8);
        for n in 2..=4 {
            let gs = graphs_up_to_iso(n);
            for k in 1..=3 {
                for g in gs.iter().take(4) {
                    for h in gs.iter().take(4) {
                        let (_, r) = wl_stabilize(g, h, k, WlVariant::Multiset);
                        assert!(r < 2 * n.pow(k as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn permuted_copies_never_separate() {
        // Colors correspond under the permutation at every step, any k ≤ 3.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for trial in 0..30 {
            let n = 3 + trial % 4;
            let gs = graphs_up_to_iso(n);
            let g = &gs[trial % gs.len()];
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.permute(&perm);
            for k in 1..=3 {
                let mut c = wl_initial_coloring(g, &h, k);
                for _ in 0..3 {
                    let total = n.pow(k as u32);
                    for idx in 0..total {
                        // Image of the tuple under the permutation, digit by
                        // digit (most significant first).
                        let mut rem = idx;
                        let mut digits = vec![0usize; k];
                        for i in (0..k).rev() {
                            digits[i] = rem % n;
                            rem /= n;
                        }
                        let img = digits.iter().fold(0usize, |acc, &d| acc * n + perm[d]);
                        assert_eq!(c.left[idx], c.right[img], "n={n} k={k} idx={idx}");
                    }
                    c = wl_refine_step(g, &h, &c, WlVariant::Set);
                }
                assert_eq!(
                    wl_iso_test(g, &h, k, WlVariant::Set).unwrap(),
                    WlDecision::Isomorphic
                );
            }
        }
    }

    #[test]
    fn iso_test_separates_small_pairs() {
        let g = Graph::complete(2);
        let h = Graph::empty(2);
        assert_eq!(wl_iso_test(&g, &h, 2, WlVariant::Set).unwrap(), WlDecision::NonIsomorphic);
        // k=1 is degenerate under this formulation and cannot separate.
        assert_eq!(wl_iso_test(&g, &h, 1, WlVariant::Set).unwrap(), WlDecision::Isomorphic);
        assert_eq!(
            wl_iso_test(&g, &h, 1, WlVariant::Multiset).unwrap(),
            WlDecision::Isomorphic
        );
        assert_eq!(
            wl_iso_test(&g, &Graph::empty(3), 1, WlVariant::Set).unwrap_err(),
            WlError::OrderMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn optimal_dimension_examples() {
        assert_eq!(
            wl_optimal_dimension(&Graph::complete(2), &Graph::empty(2), WlVariant::Set).unwrap(),
            2
        );
        let g = Graph::complete(2).disjoint_union(&Graph::empty(2));
        let h = Graph::complete(3).disjoint_union(&Graph::empty(1));
        assert_eq!(wl_optimal_dimension(&g, &h, WlVariant::Set).unwrap(), 2);
        assert_eq!(pebble_v(&g, &h).unwrap(), 2);
        let c5 = Graph::cycle(5);
        assert_eq!(
            wl_optimal_dimension(&c5, &c5.permute(&[2, 0, 4, 1, 3]), WlVariant::Set).unwrap_err(),
            WlError::IsomorphicInputs
        );
    }

    #[test]
    fn optimal_dimension_matches_pebble_number_small() {
        // For all non-isomorphic equal-order pairs with n ≤ 4:
        // optimal dimension = max(pebble number − 1, 2).
        for n in 2..=4 {
            let gs = graphs_up_to_iso(n);
            for i in 0..gs.len() {
                for j in i + 1..gs.len() {
                    let (g, h) = (&gs[i], &gs[j]);
                    let dim = wl_optimal_dimension(g, h, WlVariant::Set).unwrap();
                    let v = pebble_v(g, h).unwrap();
                    assert_eq!(dim, (v - 1).max(2), "n={n} i={i} j={j}");
                    assert!(dim <= (n + 1) / 2 + 1);
                }
            }
        }
    }

    #[test]
    fn set_separation_implies_multiset_separation() {
        for n in 2..=4 {
            let gs = graphs_up_to_iso(n);
            for i in 0..gs.len() {
                for j in i + 1..gs.len() {
                    for k in 2..=3 {
                        let set = wl_iso_test(&gs[i], &gs[j], k, WlVariant::Set).unwrap();
                        if set == WlDecision::NonIsomorphic {
                            assert_eq!(
                                wl_iso_test(&gs[i], &gs[j], k, WlVariant::Multiset).unwrap(),
                                WlDecision::NonIsomorphic,
                                "n={n} i={i} j={j} k={k}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nonisomorphic_answers_are_sound() {
        for n in 2..=4 {
            let gs = graphs_up_to_iso(n);
            for i in 0..gs.len() {
                for j in 0..gs.len() {
                    for k in 1..=3 {
                        for variant in [WlVariant::Set, WlVariant::Multiset] {
                            if wl_iso_test(&gs[i], &gs[j], k, variant).unwrap()
                                == WlDecision::NonIsomorphic
                            {
                                assert!(
                                    is_isomorphic(&gs[i], &gs[j]).is_none(),
                                    "false separation at n={n} i={i} j={j} k={k}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_certificates() {
        // Permuted copies yield byte-identical certificates.
        let g = Graph::path(4);
        let h = g.permute(&[2, 0, 3, 1]);
        for k in 1..=2 {
            for variant in [WlVariant::Set, WlVariant::Multiset] {
                assert_eq!(wl_canonical_form(&g, k, variant), wl_canonical_form(&h, k, variant));
            }
        }
        // K_3 vs P_3 at k=2 differ.
        assert_ne!(
            wl_canonical_form(&Graph::complete(3), 2, WlVariant::Set),
            wl_canonical_form(&Graph::path(3), 2, WlVariant::Set)
        );
        // Order-1 graph at k=1: nominal step count 2·1−1 = 1, performed 1.
        let cert = wl_canonical_form(&Graph::complete(1), 1, WlVariant::Set);
        assert_eq!(cert.nominal_steps, 1);
        assert_eq!(cert.performed_steps, 1);
    }
}

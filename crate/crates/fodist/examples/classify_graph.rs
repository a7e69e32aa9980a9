//! Vertex-similarity structure and the exceptional defining-rank classes.
//!
//! Two vertices are similar when swapping them is an automorphism; the
//! similarity classes partition the graph into cliques and independent
//! sets. Graphs whose largest class is big enough relative to the order
//! fall into two exceptional families with exactly known defining rank
//! (`σ+1` when the class is maximal homogeneous, `σ+2` otherwise); all
//! other graphs obey the general `⌊(n+5)/2⌋` bound.
//!
//! Run with `cargo run --example classify_graph`.

use fodist::graph::Graph;
use fodist::similarity::{
    classify, defining_rank_report, exact_pair_rank_special, oplus, similarity_partition,
    DefiningRank,
};

fn show(name: &str, g: &Graph) {
    let part = similarity_partition(g);
    let verdict = classify(g);
    let classes: Vec<Vec<usize>> = part.classes().iter().map(|c| c.to_vec()).collect();
    println!("{name} (order {}):", g.order());
    println!("  similarity classes: {classes:?}");
    println!("  σ = {}, membership = {}", verdict.sigma, verdict.membership.as_str());
    match defining_rank_report(g) {
        DefiningRank::Exact(d) => println!("  defining rank = {d} (exact)"),
        DefiningRank::Interval { lower, upper } => {
            println!("  defining rank ∈ [{lower}, {upper}]")
        }
    }
}

fn main() {
    show("E5 (five isolated vertices)", &Graph::empty(5));
    show("E4 ∪ K2", &Graph::empty(4).disjoint_union(&Graph::complete(2)));
    show("P4 (path)", &Graph::path(4));
    show("K3,3", &Graph::complete_bipartite(3, 3));

    // Extending one similarity class by a near-twin produces a pair whose
    // exact rank and pebble number follow closed formulas: pick a vertex v
    // in a largest class of σ ≥ n/2 and give the new vertex l of v's
    // neighbors-in-class.
    println!("\nclass-extension pairs (G vs G ⊕ lv):");
    for (name, g, v, l) in [
        ("E4 extended at its class", Graph::empty(4), 0usize, 1usize),
        ("K4 extended at its class", Graph::complete(4), 0, 2),
    ] {
        let extended = oplus(&g, v, l).expect("v sits in a class of size ≥ 2");
        let exact = exact_pair_rank_special(&g, v, l).expect("the special condition holds");
        println!(
            "  {name}: |G| = {}, |G ⊕ {l}·{v}| = {}, V = {}, rank = {} ({:?})",
            g.order(),
            extended.order(),
            exact.pebble,
            exact.rank,
            exact.rank_kind,
        );
    }
}

//! Exact distinguishing measures for single pairs of graphs.
//!
//! Computes, for a handful of structured pairs, the quantifier rank `D`
//! (fewest game rounds Spoiler needs), the alternation-bounded ranks `D⁰`
//! and `D¹`, and the pebble number `V` (fewest distinct variables), then
//! extracts an optimal distinguishing sentence and checks it by direct
//! model checking.
//!
//! Run with `cargo run --example rank_pair`.

use fodist::graph::Graph;
use fodist::solver::{extract_formula, pebble_v, rank_d, rank_dk, Budget};

fn main() {
    // The extremal family: a clique next to isolated vertices, against the
    // one-step-larger clique next to one fewer isolated vertex. These pairs
    // attain the worst-case rank over all same-order pairs.
    for m in [2usize, 3] {
        let union = |a: Graph, b: Graph| a.disjoint_union(&b);
        let g1 = union(Graph::complete(m), Graph::empty(m));
        let h1 = union(Graph::complete(m + 1), Graph::empty(m - 1));
        let g2 = union(Graph::complete(m + 1), Graph::empty(m));
        let h2 = union(Graph::complete(m), Graph::empty(m + 1));
        for (name, g, h) in [
            (format!("(K{m} ∪ E{m}, K{} ∪ E{})", m + 1, m - 1), g1, h1),
            (format!("(K{} ∪ E{m}, K{m} ∪ E{})", m + 1, m + 1), g2, h2),
        ] {
            let d = rank_d(&g, &h).expect("the pair is non-isomorphic");
            let v = pebble_v(&g, &h).expect("the pair is non-isomorphic");
            println!(
                "{name}: D = {}, V = {}, least alternations at optimum = {:?}",
                d.rank, v, d.alternations_used
            );
        }
    }

    // Alternation budgets can cost extra rounds: forbidding alternations
    // altogether (D⁰) already needs one more round on the smallest gap
    // pair, a single edge with a spare vertex against the path.
    let g = Graph::complete(2).disjoint_union(&Graph::empty(1));
    let h = Graph::path(3);
    let d = rank_d(&g, &h).unwrap().rank;
    let d1 = rank_dk(&g, &h, 1).unwrap().rank;
    let d0 = rank_dk(&g, &h, 0).unwrap().rank;
    println!("\n(K2 ∪ E1, P3): D = {d}, D¹ = {d1}, D⁰ = {d0}");

    // Extract an optimal sentence. It is true on the first graph, false on
    // the second, and its quantifier rank equals D exactly.
    let g = Graph::complete(3);
    let h = Graph::path(3);
    let d = rank_d(&g, &h).unwrap().rank;
    let f = extract_formula(&g, &h, Budget { rounds: d, alternations: None }).unwrap();
    println!("\n(K3, P3): D = {d}");
    println!("  optimal sentence: {f}");
    println!("  quantifier rank : {}", f.quantifier_rank());
    println!("  alternations    : {}", f.alternation_number());
    println!("  true on K3      : {}", f.evaluate(&g).unwrap());
    println!("  true on P3      : {}", f.evaluate(&h).unwrap());
}

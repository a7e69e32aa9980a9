//! The constructive Spoiler strategy, played out move by move.
//!
//! Instead of searching the game tree, the strategy first pins down a
//! C-maximal vertex set of the left graph (every extension of the induced
//! class partition stays injective), then reads off a defect of the class
//! matching and converts it into at most `⌊(n+3)/2⌋` scripted placements
//! with at most one structure alternation. Here it plays against the
//! exact-optimal Duplicator oracle — the hardest possible opponent — and
//! the transcripts show it still finishes within the bound.
//!
//! Run with `cargo run --example play_strategy`.

use fodist::graph::Graph;
use fodist::solver::{optimal_duplicator, rank_d};
use fodist::strategy::{c_maximal_set, simulate_match, Winner};

fn demo(name: &str, g: &Graph, h: &Graph) {
    let n = g.order().max(h.order());
    let bound = (n + 3) / 2;
    let mut oracle = optimal_duplicator(g, h, bound).expect("solver accepts desk-scale orders");
    let transcript = simulate_match(g, h, &mut oracle, bound).expect("plan applies to this pair");

    let d = rank_d(g, h).unwrap().rank;
    println!("{name}: optimal D = {d}, bound = {bound}");
    println!(
        "  constructive strategy won in {} rounds with {} alternation(s)",
        transcript.rounds, transcript.alternations
    );
    assert_eq!(transcript.winner, Winner::Spoiler);
    for r in &transcript.record {
        println!(
            "    round {}: pebble {:?} vertex {} -> reply {:?} ({})",
            r.round,
            r.side,
            r.vertex,
            r.reply,
            if r.alive { "alive" } else { "dead" }
        );
    }
}

fn main() {
    // The opening book: a C-maximal set and its class partition.
    let g = Graph::path(4);
    let (x, state) = c_maximal_set(&g);
    println!("P4: C-maximal X = {:?}", x.to_vec());
    println!(
        "  classes of the complement under neighborhoods-into-X: {:?}",
        state.classes.iter().map(|c| c.to_vec()).collect::<Vec<_>>()
    );
    println!();

    let union = |a: Graph, b: Graph| a.disjoint_union(&b);
    demo(
        "(K2 ∪ E2, K3 ∪ E1)",
        &union(Graph::complete(2), Graph::empty(2)),
        &union(Graph::complete(3), Graph::empty(1)),
    );
    demo("(K3, P3)", &Graph::complete(3), &Graph::path(3));
    demo("(C6, 2×K3)", &Graph::cycle(6), &union(Graph::complete(3), Graph::complete(3)));
    demo("(C5, P5)", &Graph::cycle(5), &Graph::path(5));

    // Every same-order non-isomorphic pair of order 5 stays within the
    // bound; count the worst case.
    let graphs = fodist::catalog::graphs_up_to_iso(5);
    let mut worst = 0;
    for (i, g) in graphs.iter().enumerate() {
        for h in &graphs[i + 1..] {
            let bound = (5 + 3) / 2;
            let mut oracle = optimal_duplicator(g, h, bound).unwrap();
            let t = simulate_match(g, h, &mut oracle, bound).unwrap();
            assert_eq!(t.winner, Winner::Spoiler);
            assert!(t.alternations <= 1);
            worst = worst.max(t.rounds);
        }
    }
    println!(
        "\nall {} unordered non-isomorphic pairs of order 5: worst rounds = {worst} ≤ 4",
        graphs.len() * (graphs.len() - 1) / 2
    );
}

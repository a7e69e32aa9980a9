//! Batch command-line surface over the library: single-pair rank analyses,
//! exhaustive bound sweeps, similarity classification, Weisfeiler–Leman
//! refinement, lower-bound instance generation, and an interactive play
//! mode.
//!
//! All output is line-delimited JSON, one object per result, summary last;
//! prompts and progress go to stderr so stdout stays machine-readable.
//! Exit codes are stable: 0 success, 2 isomorphic-input contract,
//! 3 parse error, 4 resource cap.

use std::io::{self, BufRead};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use fodist::catalog::graphs_up_to_iso;
use fodist::cfi::{cfi_pair, lower_bound_certificate, random_regular, CfiError, CfiLabel};
use fodist::graph::{write_graph6, Graph, Graph6Error};
use fodist::report::{exit_code, parse_graph_expression, InputError, Report};
use fodist::similarity::{classify, defining_rank_report, similarity_partition, DefiningRank};
use fodist::solver::{
    extract_formula, optimal_duplicator, pebble_v, rank_d, rank_dk, spoiler_wins, Budget,
    GameConfig, Side, SolverError, MAX_SOLVER_ORDER,
};
use fodist::strategy::{spoiler_plan, SpoilerAction, SpoilerMove, StrategyError};
use fodist::wl::{
    wl_canonical_form, wl_iso_test, wl_optimal_dimension, wl_stabilize, WlDecision, WlError,
    WlVariant,
};

/// Exact first-order distinguishability measures for finite graphs.
#[derive(Parser)]
#[command(name = "fodist", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distinguishing measures for one non-isomorphic pair: quantifier rank,
    /// alternation-bounded ranks, pebble number, optimal formula.
    Rank(RankArgs),
    /// Exhaustive rank sweep over every unordered non-isomorphic pair of one
    /// order, with bound checks; one JSON line per pair, summary last.
    Sweep(SweepArgs),
    /// Similarity partition, exceptional-class membership, and defining rank
    /// of a single graph.
    Classify(ClassifyArgs),
    /// Weisfeiler-Leman color refinement: isomorphism test, canonical
    /// certificate, or optimal-dimension search.
    Wl(WlArgs),
    /// Lower-bound instance pair from a connected regular seed, written as
    /// graph6 with a provenance sidecar; optional expansion certificate.
    Cfi(CfiArgs),
    /// Play the pebble-placement game round by round against an engine.
    Play(PlayArgs),
}

/// Alternation budget selector.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AltBudget {
    /// No structure alternations (one-sided quantifier prefix).
    #[value(name = "0")]
    Zero,
    /// At most one alternation.
    #[value(name = "1")]
    One,
    /// Unrestricted.
    #[value(name = "inf")]
    Inf,
}

impl AltBudget {
    fn budget(self) -> Option<usize> {
        match self {
            AltBudget::Zero => Some(0),
            AltBudget::One => Some(1),
            AltBudget::Inf => None,
        }
    }

    /// The result key and, for equal orders `n`, the proven round bound.
    fn key_and_limit(self, n: usize) -> (&'static str, &'static str, usize) {
        match self {
            AltBudget::Zero => ("d0", "rank-bound-alt0", (n + 5) / 2),
            AltBudget::One => ("d1", "rank-bound", (n + 3) / 2),
            AltBudget::Inf => ("d", "rank-bound", (n + 3) / 2),
        }
    }
}

#[derive(Args)]
struct RankArgs {
    /// First graph: graph6 token, @file, builtin name (K5, P4, C6, E3,
    /// K3,3), or a "+" disjoint union of those.
    g: String,
    /// Second graph, same syntax.
    h: String,
    /// Alternation budget for the rank.
    #[arg(long, value_enum, default_value = "inf")]
    alt: AltBudget,
    /// Also compute the pebble number (minimum distinct variables).
    #[arg(long)]
    pebbles: bool,
    /// Also extract an optimal distinguishing formula (true on the first
    /// graph, false on the second).
    #[arg(long)]
    formula: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Order to sweep, between 2 and 7.
    n: usize,
    /// Alternation budget for every pair rank.
    #[arg(long, value_enum, default_value = "inf")]
    alt: AltBudget,
    /// Attach a per-pair bound check to each line (the summary always
    /// counts violations).
    #[arg(long)]
    bound_check: bool,
    /// Worker threads; defaults to the FODIST_JOBS environment variable,
    /// then 1. Output order and content are identical for any value.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Graph to classify.
    g: String,
}

/// Color-refinement flavor.
#[derive(Clone, Copy, ValueEnum)]
enum VariantFlag {
    /// Deduplicated neighborhoods (the weaker, set-based refinement).
    Set,
    /// Full multiset refinement.
    Multiset,
}

impl VariantFlag {
    fn variant(self) -> WlVariant {
        match self {
            VariantFlag::Set => WlVariant::Set,
            VariantFlag::Multiset => WlVariant::Multiset,
        }
    }
}

#[derive(Args)]
struct WlArgs {
    /// First graph.
    g: String,
    /// Second graph (required except with --canon).
    h: Option<String>,
    /// Refinement dimension (tuple length), at least 1.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Refinement flavor.
    #[arg(long, value_enum, default_value = "multiset")]
    variant: VariantFlag,
    /// Emit the canonical certificate (isomorphism-invariant step tables);
    /// with two graphs, also report whether the certificates are equal.
    #[arg(long)]
    canon: bool,
    /// Search the least dimension whose refinement separates the pair.
    #[arg(long)]
    optdim: bool,
}

#[derive(Args)]
struct CfiArgs {
    /// Seed graph expression; must be connected and d-regular with d >= 2.
    /// Omit when --random is given.
    seed: Option<String>,
    /// Generate the seed with the configuration model: degree, order, RNG
    /// seed.
    #[arg(long, num_args = 3, value_names = ["D", "M", "SEED"])]
    random: Option<Vec<u64>>,
    /// Also certify the seed's separator and expansion lower bounds.
    #[arg(long)]
    certify: bool,
    /// Output path prefix: writes PREFIX.g6 (two lines: base, twisted) and
    /// PREFIX.provenance.json.
    #[arg(long, default_value = "cfi")]
    out: String,
}

/// Which side the human plays.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HumanRole {
    Spoiler,
    Duplicator,
}

/// Engine used when the machine plays Spoiler. (The machine's Duplicator is
/// always the exact oracle.)
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineKind {
    /// Exact game-tree search; works on any pair, including isomorphic ones.
    Optimal,
    /// The constructive class-partition strategy; requires non-isomorphic
    /// inputs outside the documented exception shape.
    Constructive,
}

#[derive(Args)]
struct PlayArgs {
    /// Left graph.
    g: String,
    /// Right graph.
    h: String,
    /// Side the human plays.
    #[arg(long = "as", value_enum)]
    side: HumanRole,
    /// Spoiler engine when the machine is Spoiler.
    #[arg(long, value_enum, default_value = "optimal")]
    engine: EngineKind,
    /// Round budget; Duplicator wins by surviving it.
    #[arg(long, default_value_t = 8)]
    rounds: usize,
}

/// A command failure carrying its process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::PARSE, message: message.into() }
    }

    fn isomorphic(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::ISOMORPHIC, message: message.into() }
    }

    fn resource(message: impl Into<String>) -> CliError {
        CliError { code: exit_code::RESOURCE, message: message.into() }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> CliError {
        CliError::parse(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> CliError {
        match e {
            SolverError::IsomorphicInputs => CliError::isomorphic(e.to_string()),
            SolverError::OrderTooLarge { .. } | SolverError::IdentificationOrderTooLarge { .. } => {
                CliError::resource(e.to_string())
            }
            SolverError::InvalidConfig { .. } | SolverError::BudgetInsufficient { .. } => {
                CliError::parse(e.to_string())
            }
        }
    }
}

impl From<WlError> for CliError {
    fn from(e: WlError) -> CliError {
        match e {
            WlError::IsomorphicInputs => CliError::isomorphic(e.to_string()),
            WlError::OrderMismatch { .. } => CliError::parse(e.to_string()),
            WlError::DimensionCapExceeded { .. } => CliError::resource(e.to_string()),
        }
    }
}

impl From<CfiError> for CliError {
    fn from(e: CfiError) -> CliError {
        match e {
            CfiError::OrderTooLarge { .. } | CfiError::RejectionCapExceeded { .. } => {
                CliError::resource(e.to_string())
            }
            _ => CliError::parse(e.to_string()),
        }
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> CliError {
        match e {
            StrategyError::IsomorphicInputs => CliError::isomorphic(e.to_string()),
            _ => CliError::parse(e.to_string()),
        }
    }
}

impl From<Graph6Error> for CliError {
    fn from(e: Graph6Error) -> CliError {
        // Reached only when writing outputs; parse failures arrive as
        // `InputError`.
        CliError::resource(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::resource(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit_code::OK,
                _ => exit_code::PARSE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = match cli.cmd {
        Cmd::Rank(a) => cmd_rank(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Wl(a) => cmd_wl(a),
        Cmd::Cfi(a) => cmd_cfi(a),
        Cmd::Play(a) => cmd_play(a),
    };
    match run {
        Ok(()) => ExitCode::from(exit_code::OK),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn cmd_rank(a: RankArgs) -> Result<(), CliError> {
    let g = parse_graph_expression(&a.g)?;
    let h = parse_graph_expression(&a.h)?;
    let mut report = Report::new("rank");
    report.push_input(&g)?;
    report.push_input(&h)?;

    let (key, bound_name, limit) = a.alt.key_and_limit(g.order());
    let result = match a.alt.budget() {
        Some(k) => rank_dk(&g, &h, k)?,
        None => rank_d(&g, &h)?,
    };
    report.result(key, result.rank);
    if let Some(j) = result.alternations_used {
        report.result("alternations_used", j);
    }
    report.absorb_stats(result.stats);
    if g.order() == h.order() {
        report.bound(bound_name, result.rank, limit);
    }
    if a.pebbles {
        report.result("v", pebble_v(&g, &h)?);
    }
    if a.formula {
        let budget = Budget { rounds: result.rank, alternations: a.alt.budget() };
        let f = extract_formula(&g, &h, budget)?;
        report.result("formula", f.to_string());
        report.result("formula_rank", f.quantifier_rank());
        report.result("formula_alternations", f.alternation_number());
    }
    println!("{}", report.finish());
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), CliError> {
    if !(2..=7).contains(&a.n) {
        return Err(CliError::parse(format!("sweep order {} is outside 2..=7", a.n)));
    }
    let graphs = graphs_up_to_iso(a.n);
    let tokens: Vec<String> =
        graphs.iter().map(write_graph6).collect::<Result<_, _>>().map_err(CliError::from)?;
    let mut pair_indices = Vec::new();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            pair_indices.push((i, j));
        }
    }
    let jobs = a
        .jobs
        .or_else(|| std::env::var("FODIST_JOBS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1);
    let (key, bound_name, limit) = a.alt.key_and_limit(a.n);
    let budget = a.alt.budget();

    // Pairs are solved in parallel but collected back in enumeration order,
    // so output is identical for every job count.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::resource(e.to_string()))?;
    let rows: Vec<Result<(usize, Value), CliError>> = pool.install(|| {
        pair_indices
            .par_iter()
            .map(|&(i, j)| {
                let mut line = Report::new("sweep");
                line.push_input(&graphs[i])?;
                line.push_input(&graphs[j])?;
                let result = match budget {
                    Some(kk) => rank_dk(&graphs[i], &graphs[j], kk)?,
                    None => rank_d(&graphs[i], &graphs[j])?,
                };
                line.result(key, result.rank);
                line.absorb_stats(result.stats);
                if a.bound_check {
                    line.bound(bound_name, result.rank, limit);
                }
                Ok((result.rank, line.finish()))
            })
            .collect()
    });

    let mut max_rank = 0usize;
    let mut argmax = (0usize, 0usize);
    let mut violations = 0usize;
    let mut summary = Report::new("sweep");
    for (row, &(i, j)) in rows.into_iter().zip(&pair_indices) {
        let (rank, line) = row?;
        if rank > max_rank {
            max_rank = rank;
            argmax = (i, j);
        }
        if rank > limit {
            violations += 1;
        }
        summary.absorb_stats(fodist::solver::SolveStats {
            nodes_expanded: line["stats"]["nodes"].as_u64().unwrap_or(0),
            memo_entries: line["stats"]["memo"].as_u64().unwrap_or(0) as usize,
        });
        println!("{line}");
    }
    summary.result("summary", true);
    summary.result("order", a.n);
    summary.result("pairs", pair_indices.len());
    summary.result(&format!("max_{key}"), max_rank);
    summary.result("argmax", json!([tokens[argmax.0], tokens[argmax.1]]));
    summary.result("violations", violations);
    summary.bound(bound_name, max_rank, limit);
    println!("{}", summary.finish());
    Ok(())
}

fn cmd_classify(a: ClassifyArgs) -> Result<(), CliError> {
    let g = parse_graph_expression(&a.g)?;
    if g.order() == 0 {
        return Err(CliError::parse("classification needs at least one vertex"));
    }
    let mut report = Report::new("classify");
    report.push_input(&g)?;
    let part = similarity_partition(&g);
    let verdict = classify(&g);
    let mut sizes: Vec<usize> = part.classes().iter().map(|c| c.len()).collect();
    sizes.sort_unstable_by(|x, y| y.cmp(x));
    report.result("order", g.order());
    report.result("sigma", verdict.sigma);
    report.result("class", verdict.membership.as_str());
    report.result("exceptional", verdict.exceptional);
    report.result("class_sizes", json!(sizes));
    report.result("largest_class", json!(verdict.largest_class.to_vec()));
    report.result("maximal_homogeneous", verdict.maximal_homogeneous);
    match defining_rank_report(&g) {
        DefiningRank::Exact(d) => {
            report.result("defining_rank", d);
        }
        DefiningRank::Interval { lower, upper } => {
            report.result("defining_rank_interval", json!([lower, upper]));
        }
    }
    println!("{}", report.finish());
    Ok(())
}

fn certificate_json(cert: &fodist::wl::WlCertificate) -> Value {
    json!({
        "k": cert.k,
        "nominal_steps": cert.nominal_steps,
        "performed_steps": cert.performed_steps,
        "tables": cert.tables,
        "diagonal": cert.diagonal,
    })
}

fn cmd_wl(a: WlArgs) -> Result<(), CliError> {
    if a.k == 0 {
        return Err(CliError::parse("--k must be at least 1"));
    }
    let g = parse_graph_expression(&a.g)?;
    let h = a.h.as_deref().map(parse_graph_expression).transpose()?;
    let variant = a.variant.variant();
    let mut report = Report::new("wl");
    report.push_input(&g)?;
    if let Some(h) = &h {
        report.push_input(h)?;
    }
    report.result("k", a.k);
    report.result(
        "variant",
        match variant {
            WlVariant::Set => "set",
            WlVariant::Multiset => "multiset",
        },
    );

    if a.canon {
        let cert = wl_canonical_form(&g, a.k, variant);
        report.result("certificate", certificate_json(&cert));
        if let Some(h) = &h {
            let other = wl_canonical_form(h, a.k, variant);
            report.result("certificate_right", certificate_json(&other));
            report.result("certificates_equal", cert == other);
        }
    } else if a.optdim {
        let h = h.ok_or_else(|| CliError::parse("--optdim needs two graphs"))?;
        let dim = wl_optimal_dimension(&g, &h, variant)?;
        let cap = (g.order() + 1) / 2 + 1;
        report.result("optimal_dimension", dim);
        report.bound("dimension-cap", dim, cap);
    } else {
        let h = h.ok_or_else(|| CliError::parse("the isomorphism test needs two graphs"))?;
        let decision = wl_iso_test(&g, &h, a.k, variant)?;
        let (coloring, rounds) = wl_stabilize(&g, &h, a.k, variant);
        report.result(
            "decision",
            match decision {
                WlDecision::Isomorphic => "isomorphic",
                WlDecision::NonIsomorphic => "non-isomorphic",
            },
        );
        report.result("rounds", rounds);
        report.result("palette", coloring.palette);
    }
    println!("{}", report.finish());
    Ok(())
}

fn label_json(label: &CfiLabel) -> Value {
    match label {
        CfiLabel::Middle { vertex, subset } => json!({
            "middle": { "vertex": vertex, "subset": subset }
        }),
        CfiLabel::EdgePair { edge, bit } => json!({
            "pair": { "edge": [edge.0, edge.1], "bit": bit }
        }),
    }
}

fn cmd_cfi(a: CfiArgs) -> Result<(), CliError> {
    let mut report = Report::new("cfi");
    let seed_graph = match (&a.seed, &a.random) {
        (Some(expr), None) => parse_graph_expression(expr)?,
        (None, Some(params)) => {
            let (d, m, seed) = (params[0] as usize, params[1] as usize, params[2]);
            report.set_seed(seed);
            random_regular(d, m, seed)?
        }
        _ => {
            return Err(CliError::parse(
                "give exactly one seed source: a graph expression or --random D M SEED",
            ))
        }
    };
    report.push_input(&seed_graph)?;
    let inst = cfi_pair(&seed_graph)?;
    let base = write_graph6(&inst.g)?;
    let twisted = write_graph6(&inst.g_twisted)?;

    let pair_path = format!("{}.g6", a.out);
    let sidecar_path = format!("{}.provenance.json", a.out);
    std::fs::write(&pair_path, format!("{base}\n{twisted}\n"))?;
    let sidecar = json!({
        "seed": write_graph6(&inst.seed)?,
        "degree": inst.degree,
        "twist": [inst.twist.0, inst.twist.1],
        "labels": inst.provenance.iter().map(label_json).collect::<Vec<_>>(),
    });
    std::fs::write(&sidecar_path, format!("{sidecar}\n"))?;

    report.result("order", inst.g.order());
    report.result("maxdeg", inst.g.max_degree());
    report.result("noniso", true);
    report.result("base", base);
    report.result("twisted", twisted);
    report.result("files", json!([pair_path, sidecar_path]));
    if a.certify {
        let cert = lower_bound_certificate(&seed_graph)?;
        report.result("separator", cert.separator);
        report.result("i_v", cert.i_v.to_string());
        report.result("i_e", cert.i_e.to_string());
        report.result("certified_lower", cert.certified_lower.to_string());
    }
    println!("{}", report.finish());
    Ok(())
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// The cheapest forced-win move within `rounds_left` rounds, if any:
/// smallest winning horizon, then left before right, then smallest vertex.
fn optimal_spoiler_move(
    g: &Graph,
    h: &Graph,
    pairs: &[(usize, usize)],
    rounds_left: usize,
) -> Result<Option<(Side, usize)>, CliError> {
    for horizon in 1..=rounds_left {
        for side in [Side::Left, Side::Right] {
            let (src_n, dst_n) = match side {
                Side::Left => (g.order(), h.order()),
                Side::Right => (h.order(), g.order()),
            };
            for v in 0..src_n {
                let mut wins = true;
                for w in 0..dst_n {
                    let pair = match side {
                        Side::Left => (v, w),
                        Side::Right => (w, v),
                    };
                    let mut next = pairs.to_vec();
                    next.push(pair);
                    let cfg = GameConfig::new(next, Some(side), None);
                    if cfg.is_alive(g, h)
                        && (horizon < 2 || !spoiler_wins(g, h, &cfg, horizon - 1)?)
                    {
                        wins = false;
                        break;
                    }
                }
                if wins {
                    return Ok(Some((side, v)));
                }
            }
        }
    }
    Ok(None)
}

/// A deterministic legal move for positions with no forced win in budget:
/// the smallest unpebbled vertex, preferring the left graph.
fn fallback_spoiler_move(g: &Graph, h: &Graph, pairs: &[(usize, usize)]) -> (Side, usize) {
    let fresh_left = (0..g.order()).find(|&v| pairs.iter().all(|&(u, _)| u != v));
    if let Some(v) = fresh_left {
        return (Side::Left, v);
    }
    if h.order() > 0 {
        let v = (0..h.order()).find(|&v| pairs.iter().all(|&(_, w)| w != v)).unwrap_or(0);
        return (Side::Right, v);
    }
    (Side::Left, 0)
}

/// One human input, or the reasons none arrived.
enum Input<T> {
    Value(T),
    Eof,
}

/// Prompts until the parser accepts a line; illegal input re-prompts
/// without consuming the round.
fn prompt_until<T>(
    lines: &mut impl Iterator<Item = io::Result<String>>,
    prompt: &str,
    mut parse: impl FnMut(&str) -> Result<T, String>,
) -> Result<Input<T>, CliError> {
    loop {
        eprint!("{prompt}");
        match lines.next() {
            None => return Ok(Input::Eof),
            Some(line) => match parse(line?.trim()) {
                Ok(v) => return Ok(Input::Value(v)),
                Err(msg) => eprintln!("{msg}; the round is not consumed, try again"),
            },
        }
    }
}

fn cmd_play(a: PlayArgs) -> Result<(), CliError> {
    let g = parse_graph_expression(&a.g)?;
    let h = parse_graph_expression(&a.h)?;
    for gr in [&g, &h] {
        if gr.order() > MAX_SOLVER_ORDER {
            return Err(CliError::resource(format!(
                "order {} exceeds the interactive cap of {MAX_SOLVER_ORDER}",
                gr.order()
            )));
        }
    }
    if a.rounds == 0 {
        return Err(CliError::parse("--rounds must be at least 1"));
    }
    if g.order() + h.order() == 0 {
        return Err(CliError::parse("play needs at least one vertex somewhere"));
    }

    eprintln!(
        "game: left graph order {}, right graph order {}, {} rounds; you play {}",
        g.order(),
        h.order(),
        a.rounds,
        match a.side {
            HumanRole::Spoiler => "Spoiler",
            HumanRole::Duplicator => "Duplicator",
        }
    );

    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut transcript: Vec<Value> = Vec::new();
    let mut winner: Option<&'static str> = None;
    let mut aborted = false;

    // When the machine is Spoiler, build the requested engine. The
    // constructive plan refuses isomorphic inputs (exit code 2) and the
    // documented exception shape; `--engine optimal` handles any pair.
    let plan = match (a.side, a.engine) {
        (HumanRole::Duplicator, EngineKind::Constructive) => Some(spoiler_plan(&g, &h)?),
        _ => None,
    };
    let mut history: Vec<(SpoilerMove, usize)> = Vec::new();
    let mut oracle = match a.side {
        HumanRole::Spoiler => Some(optimal_duplicator(&g, &h, a.rounds)?),
        HumanRole::Duplicator => None,
    };

    for round in 1..=a.rounds {
        // — Spoiler's placement —
        let (side, vertex) = match a.side {
            HumanRole::Spoiler => {
                let parse = |text: &str| -> Result<(Side, usize), String> {
                    let mut it = text.split_whitespace();
                    let (Some(s), Some(v), None) = (it.next(), it.next(), it.next()) else {
                        return Err(format!("expected `L v` or `R v`, got {text:?}"));
                    };
                    let side = match s {
                        "L" | "l" | "left" => Side::Left,
                        "R" | "r" | "right" => Side::Right,
                        _ => return Err(format!("unknown side {s:?} (use L or R)")),
                    };
                    let order = if side == Side::Left { g.order() } else { h.order() };
                    match v.parse::<usize>() {
                        Ok(v) if v < order => Ok((side, v)),
                        _ => Err(format!("illegal vertex {v:?} (the {} graph has vertices 0..={})",
                            side_name(side), order.saturating_sub(1))),
                    }
                };
                let prompt = format!("round {round}: your placement as `L v` or `R v`: ");
                match prompt_until(&mut lines, &prompt, parse)? {
                    Input::Value(mv) => mv,
                    Input::Eof => {
                        aborted = true;
                        break;
                    }
                }
            }
            HumanRole::Duplicator => match &plan {
                Some(p) => match p.next_move(&history) {
                    SpoilerAction::Move(m) => (m.side, m.vertex),
                    SpoilerAction::ClaimWin => {
                        winner = Some("spoiler");
                        break;
                    }
                },
                None => match optimal_spoiler_move(&g, &h, &pairs, a.rounds - round + 1)? {
                    Some(mv) => mv,
                    None => fallback_spoiler_move(&g, &h, &pairs),
                },
            },
        };
        if a.side == HumanRole::Duplicator {
            eprintln!("round {round}: Spoiler pebbles vertex {vertex} on the {} graph", side_name(side));
        }

        // — Duplicator's reply —
        let reply_order = match side {
            Side::Left => h.order(),
            Side::Right => g.order(),
        };
        let reply: Option<usize> = if reply_order == 0 {
            eprintln!("no vertex is available to reply — Spoiler wins");
            None
        } else {
            match a.side {
                HumanRole::Duplicator => {
                    let parse = |text: &str| -> Result<usize, String> {
                        match text.parse::<usize>() {
                            Ok(w) if w < reply_order => Ok(w),
                            _ => Err(format!(
                                "illegal vertex {text:?} (0..={} expected)",
                                reply_order - 1
                            )),
                        }
                    };
                    let prompt = format!(
                        "round {round}: your reply on the {} graph: ",
                        side_name(match side {
                            Side::Left => Side::Right,
                            Side::Right => Side::Left,
                        })
                    );
                    match prompt_until(&mut lines, &prompt, parse)? {
                        Input::Value(w) => Some(w),
                        Input::Eof => {
                            aborted = true;
                            break;
                        }
                    }
                }
                HumanRole::Spoiler => {
                    let cfg = GameConfig::new(pairs.clone(), None, None);
                    let w = oracle
                        .as_mut()
                        .expect("oracle exists when the human is Spoiler")
                        .reply(&cfg, side, vertex);
                    if let Some(w) = w {
                        eprintln!("engine replies with vertex {w}");
                    }
                    w
                }
            }
        };

        let Some(reply) = reply else {
            transcript.push(json!({
                "round": round, "side": side_name(side), "vertex": vertex,
                "reply": Value::Null, "alive": false,
            }));
            winner = Some("spoiler");
            break;
        };

        pairs.push(match side {
            Side::Left => (vertex, reply),
            Side::Right => (reply, vertex),
        });
        history.push((SpoilerMove { side, vertex }, reply));
        let alive = GameConfig::new(pairs.clone(), Some(side), None).is_alive(&g, &h);
        transcript.push(json!({
            "round": round, "side": side_name(side), "vertex": vertex,
            "reply": reply, "alive": alive,
        }));
        eprintln!(
            "round {round}: the pebbled map {} a partial isomorphism{}",
            if alive { "is" } else { "is NOT" },
            if alive { ", play continues" } else { " — Spoiler wins" }
        );
        if !alive {
            winner = Some("spoiler");
            break;
        }
    }

    if winner.is_none() && !aborted {
        winner = Some("duplicator");
        eprintln!("Duplicator survived all {} rounds", a.rounds);
    }

    // Structure alternations between consecutive Spoiler placements.
    let alternations = transcript
        .windows(2)
        .filter(|w| w[0]["side"] != w[1]["side"])
        .count();

    let mut report = Report::new("play");
    report.push_input(&g)?;
    report.push_input(&h)?;
    report.result(
        "human",
        match a.side {
            HumanRole::Spoiler => "spoiler",
            HumanRole::Duplicator => "duplicator",
        },
    );
    report.result(
        "engine",
        match a.engine {
            EngineKind::Optimal => "optimal",
            EngineKind::Constructive => "constructive",
        },
    );
    report.result("round_cap", a.rounds);
    report.result("rounds_played", transcript.len());
    report.result("alternations", alternations);
    report.result("aborted", aborted);
    match winner {
        Some(w) => report.result("winner", w),
        None => report.result("winner", Value::Null),
    };
    report.result("transcript", Value::Array(transcript));
    println!("{}", report.finish());
    Ok(())
}

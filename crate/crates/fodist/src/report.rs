//! JSON reports and graph-expression parsing for the command-line surface.
//!
//! Every command emits line-delimited JSON, one object per result, of the
//! fixed shape `{bounds, cmd, inputs, results, seed?, stats}` (keys
//! serialize alphabetically, so identical runs produce byte-identical lines
//! except for the wall-clock `stats.millis` field). `inputs` echoes each
//! input graph as a graph6 token, `bounds` lists named
//! `{name, value, limit, pass}` checks computed from exact integers, and
//! `stats` accumulates the search-effort counters of every solve that fed
//! the report.
//!
//! Graph expressions accepted wherever a command takes a graph:
//!
//! * built-in names — `K5`, `P4`, `C6`, `E3`, and `K3,3` / `K{3,3}`;
//! * graph6 tokens — e.g. `Bw` for the triangle;
//! * `@path` file references, holding either a graph6 line or an edge list
//!   (first line the order, then one `u v` edge per line; the two are
//!   distinguished by the leading byte, since graph6 never starts with a
//!   digit);
//! * `+`-joined disjoint unions of any of the above, e.g. `K3+E2`.
//!
//! The bare token `@` is the graph6 form of the one-vertex graph, not a
//! file reference.

use std::time::Instant;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::graph::{
    parse_edge_list, parse_graph6, write_graph6, EdgeListError, Graph, Graph6Error,
};
use crate::solver::SolveStats;

/// Process exit codes shared by every subcommand, stable across versions.
pub mod exit_code {
    /// Success.
    pub const OK: u8 = 0;
    /// A command that requires non-isomorphic inputs received isomorphic
    /// ones.
    pub const ISOMORPHIC: u8 = 2;
    /// Command-line, graph-expression, or input-file parse failure.
    pub const PARSE: u8 = 3;
    /// A documented resource cap was hit (solver order limit, dimension
    /// cap, generator rejection cap, graph6 order limit).
    pub const RESOURCE: u8 = 4;
}

/// Errors from evaluating a graph expression.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("empty graph expression")]
    Empty,
    #[error("cannot read {path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("file {path} is empty")]
    EmptyFile { path: String },
    #[error("bad vertex count in builtin name {name:?}")]
    BadOrder { name: String },
    #[error("{name:?}: cycles need at least 3 vertices")]
    CycleTooShort { name: String },
    #[error("invalid graph6 token {token:?}: {source}")]
    Graph6 { token: String, source: Graph6Error },
    #[error("invalid edge list in {path}: {source}")]
    EdgeList { path: String, source: EdgeListError },
}

/// Evaluates a graph expression: one atom or a `+`-joined disjoint union.
pub fn parse_graph_expression(expr: &str) -> Result<Graph, InputError> {
    let expr = expr.trim();
    if expr.is_empty() {
        return Err(InputError::Empty);
    }
    let mut parts = expr.split('+');
    let mut g = parse_atom(parts.next().expect("split yields at least one part").trim())?;
    for part in parts {
        g = g.disjoint_union(&parse_atom(part.trim())?);
    }
    Ok(g)
}

fn parse_atom(atom: &str) -> Result<Graph, InputError> {
    if atom.is_empty() {
        return Err(InputError::Empty);
    }
    if let Some(path) = atom.strip_prefix('@') {
        // A bare "@" falls through to graph6 (it encodes K_1).
        if !path.is_empty() {
            return parse_file(path);
        }
    }
    if let Some(g) = parse_builtin(atom)? {
        return Ok(g);
    }
    parse_graph6(atom).map_err(|source| InputError::Graph6 { token: atom.into(), source })
}

/// Recognizes the built-in family names. `Ok(None)` means the atom is not a
/// builtin (digits never occur in graph6 bodies, so the two syntaxes are
/// disjoint and the caller may still try graph6).
fn parse_builtin(atom: &str) -> Result<Option<Graph>, InputError> {
    let kind = atom.as_bytes()[0];
    if !matches!(kind, b'K' | b'P' | b'C' | b'E') {
        return Ok(None);
    }
    let body = &atom[1..];
    if kind == b'K' {
        let inner = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')).unwrap_or(body);
        if let Some((a, b)) = inner.split_once(',') {
            let sides = (a.trim().parse(), b.trim().parse());
            return match sides {
                (Ok(a), Ok(b)) => Ok(Some(Graph::complete_bipartite(a, b))),
                _ => Err(InputError::BadOrder { name: atom.into() }),
            };
        }
    }
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(None);
    }
    let n: usize = body.parse().map_err(|_| InputError::BadOrder { name: atom.into() })?;
    Ok(Some(match kind {
        b'K' => Graph::complete(n),
        b'P' => Graph::path(n),
        b'E' => Graph::empty(n),
        b'C' if n >= 3 => Graph::cycle(n),
        b'C' => return Err(InputError::CycleTooShort { name: atom.into() }),
        _ => unreachable!("kind is filtered above"),
    }))
}

fn parse_file(path: &str) -> Result<Graph, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::File { path: path.into(), source })?;
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(InputError::EmptyFile { path: path.into() });
    }
    if trimmed.as_bytes()[0].is_ascii_digit() {
        parse_edge_list(trimmed).map_err(|source| InputError::EdgeList { path: path.into(), source })
    } else {
        let token = trimmed.lines().next().expect("trimmed text is nonempty").trim();
        parse_graph6(token).map_err(|source| InputError::Graph6 { token: token.into(), source })
    }
}

/// Accumulates one report object. Construct with [`Report::new`], fill in
/// inputs / results / bounds / stats, and call [`Report::finish`] for the
/// final `serde_json::Value`.
pub struct Report {
    cmd: &'static str,
    inputs: Vec<Value>,
    results: Map<String, Value>,
    bounds: Vec<Value>,
    nodes: u64,
    memo: u64,
    seed: Option<u64>,
    start: Instant,
}

impl Report {
    pub fn new(cmd: &'static str) -> Report {
        Report {
            cmd,
            inputs: Vec::new(),
            results: Map::new(),
            bounds: Vec::new(),
            nodes: 0,
            memo: 0,
            seed: None,
            start: Instant::now(),
        }
    }

    /// Echoes an input graph as its graph6 token, the canonical identifier.
    pub fn push_input(&mut self, g: &Graph) -> Result<&mut Self, Graph6Error> {
        let token = write_graph6(g)?;
        self.inputs.push(Value::String(token));
        Ok(self)
    }

    /// Inserts one entry into `results`.
    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), value.into());
        self
    }

    /// Records a named `value ≤ limit` check; `pass` is computed here so it
    /// can never drift from the integers it reports.
    pub fn bound(&mut self, name: &str, value: usize, limit: usize) -> &mut Self {
        self.bounds.push(json!({
            "name": name,
            "value": value,
            "limit": limit,
            "pass": value <= limit,
        }));
        self
    }

    /// Whether every recorded bound check passed.
    pub fn all_bounds_pass(&self) -> bool {
        self.bounds.iter().all(|b| b["pass"] == Value::Bool(true))
    }

    /// Folds one solve's search counters into the report totals.
    pub fn absorb_stats(&mut self, stats: SolveStats) -> &mut Self {
        self.nodes += stats.nodes_expanded;
        self.memo += stats.memo_entries as u64;
        self
    }

    pub fn set_seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    /// Finalizes the report object, stamping the elapsed wall-clock time.
    pub fn finish(self) -> Value {
        let mut top = Map::new();
        top.insert("cmd".into(), self.cmd.into());
        top.insert("inputs".into(), Value::Array(self.inputs));
        top.insert("results".into(), Value::Object(self.results));
        top.insert("bounds".into(), Value::Array(self.bounds));
        top.insert(
            "stats".into(),
            json!({
                "nodes": self.nodes,
                "memo": self.memo,
                "millis": self.start.elapsed().as_millis() as u64,
            }),
        );
        if let Some(seed) = self.seed {
            top.insert("seed".into(), seed.into());
        }
        Value::Object(top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::graphs_up_to_iso;

    #[test]
    fn builtin_names() {
        assert_eq!(parse_graph_expression("K4").unwrap(), Graph::complete(4));
        assert_eq!(parse_graph_expression("P3").unwrap(), Graph::path(3));
        assert_eq!(parse_graph_expression("C5").unwrap(), Graph::cycle(5));
        assert_eq!(parse_graph_expression("E4").unwrap(), Graph::empty(4));
        assert_eq!(parse_graph_expression("E0").unwrap(), Graph::empty(0));
        assert_eq!(parse_graph_expression("K3,3").unwrap(), Graph::complete_bipartite(3, 3));
        assert_eq!(parse_graph_expression("K{2,1}").unwrap(), Graph::complete_bipartite(2, 1));
    }

    #[test]
    fn unions_and_graph6_atoms() {
        let u = parse_graph_expression("K3+E2").unwrap();
        assert_eq!(u, Graph::complete(3).disjoint_union(&Graph::empty(2)));
        // Three-part union associates left to right; orders add up.
        assert_eq!(parse_graph_expression("K2+K2+K2").unwrap().order(), 6);
        // "Bw" is the graph6 triangle; "@" alone is the one-vertex graph.
        assert_eq!(parse_graph_expression("Bw").unwrap(), Graph::complete(3));
        assert_eq!(parse_graph_expression("@").unwrap(), Graph::empty(1));
        assert_eq!(parse_graph_expression("Bw+@").unwrap().order(), 4);
    }

    #[test]
    fn file_references() {
        let dir = std::env::temp_dir();
        let g6 = dir.join("fodist-report-test.g6");
        std::fs::write(&g6, "Bw\n").unwrap();
        let path = format!("@{}", g6.display());
        assert_eq!(parse_graph_expression(&path).unwrap(), Graph::complete(3));

        let el = dir.join("fodist-report-test.edges");
        std::fs::write(&el, "4\n0 1\n1 2\n2 3\n").unwrap();
        let path = format!("@{}", el.display());
        assert_eq!(parse_graph_expression(&path).unwrap(), Graph::path(4));
    }

    #[test]
    fn expression_errors() {
        assert!(matches!(parse_graph_expression(""), Err(InputError::Empty)));
        assert!(matches!(parse_graph_expression("K3+"), Err(InputError::Empty)));
        assert!(matches!(
            parse_graph_expression("C2"),
            Err(InputError::CycleTooShort { .. })
        ));
        assert!(matches!(
            parse_graph_expression("K3,x"),
            Err(InputError::BadOrder { .. })
        ));
        assert!(matches!(parse_graph_expression("\u{1}"), Err(InputError::Graph6 { .. })));
        assert!(matches!(
            parse_graph_expression("@/no/such/file"),
            Err(InputError::File { .. })
        ));
    }

    #[test]
    fn graph6_round_trip_through_expressions() {
        for n in 0..=5 {
            for g in graphs_up_to_iso(n) {
                let token = write_graph6(g).unwrap();
                assert_eq!(&parse_graph_expression(&token).unwrap(), g);
            }
        }
    }

    #[test]
    fn report_shape_and_determinism() {
        let build = || {
            let mut r = Report::new("rank");
            r.push_input(&Graph::complete(3)).unwrap();
            r.push_input(&Graph::path(3)).unwrap();
            r.result("d", 2);
            r.bound("rank-bound", 2, 3);
            r.absorb_stats(SolveStats { nodes_expanded: 10, memo_entries: 4 });
            assert!(r.all_bounds_pass());
            r.finish()
        };
        let v = build();
        assert_eq!(v["cmd"], "rank");
        assert_eq!(v["inputs"], json!(["Bw", "Bg"]));
        assert_eq!(v["results"]["d"], 2);
        assert_eq!(v["bounds"][0]["pass"], true);
        assert_eq!(v["stats"]["nodes"], 10);
        assert_eq!(v["stats"]["memo"], 4);
        assert!(v.get("seed").is_none());

        // Byte-identical between runs once the timing field is fixed.
        let mut a = build();
        let mut b = build();
        a["stats"]["millis"] = 0.into();
        b["stats"]["millis"] = 0.into();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

        let mut r = Report::new("cfi");
        r.set_seed(7);
        r.bound("separator", 5, 2);
        assert!(!r.all_bounds_pass());
        assert_eq!(r.finish()["seed"], 7);
    }
}

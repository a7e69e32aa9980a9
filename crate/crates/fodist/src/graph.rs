//! Undirected simple graphs on vertex set `{0, …, n−1}`, stored as bit rows.
//!
//! The adjacency matrix is kept as one dynamic-width bit row per vertex, so
//! neighborhood comparisons, complement, and induced subgraphs are word-level
//! operations. Invariants maintained by every constructor: the matrix is
//! symmetric, the diagonal is zero (no loops), and no bit beyond column `n−1`
//! is set. Vertex labels are plain `usize` indices; "lowest index" is the
//! universal tie-break everywhere in this crate.
//!
//! I/O covers the graph6 short form (byte-exact, orders 0–62) and a plain
//! edge-list text format (`n` on the first line, one `u v` pair per line).

use std::fmt;
use thiserror::Error;

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS).max(1)
}

/// An undirected simple graph with adjacency bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Graph {
        let words = words_for(n);
        Graph { n, words, bits: vec![0; n * words] }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// The path `P_n`: vertices `0–1–…–(n−1)`.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// The cycle `C_n` for `n ≥ 3`: the path plus the closing edge.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0);
        g
    }

    /// The complete bipartite graph `K_{a,b}` with parts `{0..a}` and `{a..a+b}`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from an explicit edge list. Rejects loops and vertices `≥ n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), order: n });
            }
            if u == v {
                return Err(GraphError::LoopEdge { vertex: u });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        let total: u32 = self.bits.iter().map(|w| w.count_ones()).sum();
        total as usize / 2
    }

    /// Inserts the edge `{u, v}`. Idempotent; panics on loops or bad indices.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are not allowed");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.bits[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        self.bits[v * self.words + u / WORD_BITS] |= 1 << (u % WORD_BITS);
    }

    /// Removes the edge `{u, v}` if present.
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.bits[u * self.words + v / WORD_BITS] &= !(1 << (v % WORD_BITS));
        self.bits[v * self.words + u / WORD_BITS] &= !(1 << (u % WORD_BITS));
    }

    /// Whether `u` and `v` are adjacent. Vertices are never adjacent to themselves.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.bits[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    /// Degree of `u`.
    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All degrees, indexed by vertex.
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    /// Maximum degree; 0 for the order-0 graph.
    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// The neighborhood of `u` as a vertex set.
    pub fn neighbors(&self, u: usize) -> VertexSet {
        VertexSet { n: self.n, words: self.row(u).to_vec() }
    }

    /// Iterator over all vertices.
    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Edge list in ascending `(u, v)` order with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The complement graph: edges and non-edges exchanged, no loops introduced.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted up by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }

    /// Induced subgraph on `set`, with vertices renumbered in increasing order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Graph {
        let keep = set.to_vec();
        let mut g = Graph::empty(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels vertices: vertex `u` of `self` becomes `perm[u]` of the result.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Connected components as vertex sets, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n);
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut stack = vec![start];
            comp.insert(start);
            while let Some(u) = stack.pop() {
                for v in self.neighbors(u).iter() {
                    if !comp.contains(v) {
                        comp.insert(v);
                        stack.push(v);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Whether the graph is connected. The order-0 graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// BFS distance between `u` and `v`; `None` if they lie in different components.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.n];
        dist[u] = 0;
        let mut frontier = vec![u];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for y in self.neighbors(x).iter() {
                    if dist[y] == usize::MAX {
                        dist[y] = d;
                        if y == v {
                            return Some(d);
                        }
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        None
    }

    /// Whether every vertex has degree exactly `d`.
    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n).all(|u| self.degree(u) == d)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// A subset of the vertices of a graph of known order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    /// The empty subset of `{0..n}`.
    pub fn empty(n: usize) -> VertexSet {
        VertexSet { n, words: vec![0; words_for(n)] }
    }

    /// The full subset `{0..n}`.
    pub fn full(n: usize) -> VertexSet {
        let mut s = VertexSet::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    /// Builds a set from listed vertices, which must be `< n`.
    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, vs: I) -> VertexSet {
        let mut s = VertexSet::empty(n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    /// Order of the ambient graph (not the cardinality of the set).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex out of range");
        self.words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.n, "vertex out of range");
        self.words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.n);
        self.words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    /// Cardinality of the set.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Complement within the ambient vertex set.
    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet::full(self.n);
        s.difference_with(self);
        s
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD_BITS + b)
                }
            })
        })
    }

    /// Ascending member list.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

/// Errors from explicit graph construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("loop edge at vertex {vertex} not allowed")]
    LoopEdge { vertex: usize },
}

// === graph6 short form ===
//
// Byte layout: one byte `n + 63` (so n ≤ 62 here; the multi-byte long form is
// rejected), then the upper triangle in column order x(0,1), x(0,2), x(1,2),
// x(0,3), x(1,3), x(2,3), …, packed big-endian into 6-bit groups, zero-padded,
// each group offset by 63 into the printable range.

/// Errors from graph6 parsing and writing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 input")]
    Empty,
    #[error("graph6 long form (order > 62) is not supported")]
    LongForm,
    #[error("byte {byte:#04x} at position {pos} outside graph6 range 63..=126")]
    InvalidByte { byte: u8, pos: usize },
    #[error("expected {expected} data bytes for order {order}, found {found}")]
    WrongLength { order: usize, expected: usize, found: usize },
    #[error("nonzero padding bits in final graph6 group")]
    PaddingBits,
    #[error("order {order} exceeds the graph6 short-form maximum of 62")]
    OrderOutOfRange { order: usize },
}

/// Parses a single graph6 token (no surrounding whitespace).
pub fn parse_graph6(s: &str) -> Result<Graph, Graph6Error> {
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if bytes[0] == b'~' {
        return Err(Graph6Error::LongForm);
    }
    if !(63..=126).contains(&bytes[0]) {
        return Err(Graph6Error::InvalidByte { byte: bytes[0], pos: 0 });
    }
    let n = (bytes[0] - 63) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let data = &bytes[1..];
    if data.len() != expected {
        return Err(Graph6Error::WrongLength { order: n, expected, found: data.len() });
    }
    let mut g = Graph::empty(n);
    let mut bit_idx = 0usize;
    let mut pairs = Vec::with_capacity(nbits);
    for v in 1..n {
        for u in 0..v {
            pairs.push((u, v));
        }
    }
    for (pos, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte { byte: b, pos: pos + 1 });
        }
        let group = b - 63;
        for k in 0..6 {
            let bit = group >> (5 - k) & 1;
            if bit_idx < nbits {
                if bit == 1 {
                    let (u, v) = pairs[bit_idx];
                    g.add_edge(u, v);
                }
            } else if bit == 1 {
                return Err(Graph6Error::PaddingBits);
            }
            bit_idx += 1;
        }
    }
    Ok(g)
}

/// Writes the graph6 short form; errors if the order exceeds 62.
pub fn write_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > 62 {
        return Err(Graph6Error::OrderOutOfRange { order: n });
    }
    let mut out = vec![n as u8 + 63];
    let mut group = 0u8;
    let mut filled = 0u8;
    for v in 1..n {
        for u in 0..v {
            group = group << 1 | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
}

// === edge-list text format ===

/// Errors from edge-list parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("missing order line")]
    MissingOrder,
    #[error("line {line}: expected `u v`, got {text:?}")]
    BadLine { line: usize, text: String },
    #[error("line {line}: {source}")]
    BadEdge { line: usize, source: GraphError },
}

/// Parses the edge-list format: first line `n`, then one `u v` pair per line
/// (0-based). Blank lines are ignored.
pub fn parse_edge_list(s: &str) -> Result<Graph, EdgeListError> {
    let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or(EdgeListError::MissingOrder)?;
    let n: usize = first.trim().parse().map_err(|_| EdgeListError::MissingOrder)?;
    let mut edges = Vec::new();
    for (idx, line) in lines {
        let mut it = line.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => {
                let parse = |t: &str| t.parse::<usize>().ok();
                match (parse(a), parse(b)) {
                    (Some(u), Some(v)) => (u, v),
                    _ => return Err(EdgeListError::BadLine { line: idx + 1, text: line.into() }),
                }
            }
            _ => return Err(EdgeListError::BadLine { line: idx + 1, text: line.into() }),
        };
        edges.push((u, v));
    }
    Graph::from_edges(n, &edges).map_err(|source| EdgeListError::BadEdge { line: 0, source })
}

/// Writes the edge-list format with edges in ascending order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

// === isomorphism ===

/// Exact isomorphism test; returns a witness mapping (vertex `u` of `g` maps to
/// `witness[u]` of `h`) or `None`. Backtracking over degree-compatible
/// candidates with neighborhood pruning; exact at any order, and fast for the
/// desk-scale orders (≤ 10) this crate sweeps exhaustively. The witness is
/// re-verified edge-by-edge before it is returned.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.size() != h.size() {
        return None;
    }
    let n = g.order();
    if n == 0 {
        return Some(Vec::new());
    }
    // Per-vertex invariant: (degree, sorted multiset of neighbor degrees).
    let inv = |gr: &Graph| -> Vec<(usize, Vec<usize>)> {
        let degs = gr.degrees();
        (0..n)
            .map(|u| {
                let mut nd: Vec<usize> = gr.neighbors(u).iter().map(|v| degs[v]).collect();
                nd.sort_unstable();
                (degs[u], nd)
            })
            .collect()
    };
    let ig = inv(g);
    let ih = inv(h);
    {
        let mut a = ig.clone();
        let mut b = ih.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }
    // Assign high-degree vertices first; they are the most constrained.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ig[b].0.cmp(&ig[a].0).then(a.cmp(&b)));
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn assign(
        pos: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        ig: &[(usize, Vec<usize>)],
        ih: &[(usize, Vec<usize>)],
        mapping: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let u = order[pos];
        for v in 0..h.order() {
            if used[v] || ig[u] != ih[v] {
                continue;
            }
            let consistent = order[..pos].iter().all(|&w| {
                g.has_edge(u, w) == h.has_edge(v, mapping[w])
            });
            if !consistent {
                continue;
            }
            mapping[u] = v;
            used[v] = true;
            if assign(pos + 1, order, g, h, ig, ih, mapping, used) {
                return true;
            }
            mapping[u] = usize::MAX;
            used[v] = false;
        }
        false
    }

    if !assign(0, &order, g, h, &ig, &ih, &mut mapping, &mut used) {
        return None;
    }
    // Full verification of the witness.
    for u in 0..n {
        for v in u + 1..n {
            assert_eq!(
                g.has_edge(u, v),
                h.has_edge(mapping[u], mapping[v]),
                "isomorphism witness failed verification"
            );
        }
    }
    Some(mapping)
}

/// Canonical key: the lexicographically smallest upper-triangle bit string
/// (graph6 column order) over all relabelings, packed with the order in front.
/// Equal keys ⇔ isomorphic graphs. Branch-and-bound over partial relabelings;
/// intended for the small orders the catalogue enumerates (≤ 10).
pub fn canonical_key(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let nbits = n * n.saturating_sub(1) / 2;
    let mut best: Vec<bool> = Vec::new(); // empty = not yet found
    let mut cur: Vec<bool> = Vec::with_capacity(nbits);
    let mut perm: Vec<usize> = Vec::with_capacity(n); // position -> original vertex
    let mut used = vec![false; n];

    // Extends the current labeling by one vertex and compares the new column
    // against the incumbent; `tight` means the prefix so far equals the
    // incumbent's prefix (only then can a later bit still lose).
    fn place(
        g: &Graph,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        cur: &mut Vec<bool>,
        best: &mut Vec<bool>,
        tight: bool,
    ) {
        let n = g.order();
        let pos = perm.len();
        if pos == n {
            if best.is_empty() || cur[..] < best[..] {
                *best = cur.clone();
            }
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let start = cur.len();
            let mut now_tight = tight;
            let mut worse = false;
            for (i, bit) in perm.iter().map(|&p| g.has_edge(p, v)).enumerate() {
                cur.push(bit);
                if now_tight && !best.is_empty() {
                    let b = best[start + i];
                    if bit != b {
                        if bit {
                            worse = true; // prefix strictly greater: prune
                        } else {
                            now_tight = false; // strictly smaller: free run
                        }
                        if worse {
                            break;
                        }
                    }
                }
            }
            if !worse {
                perm.push(v);
                used[v] = true;
                place(g, perm, used, cur, best, now_tight);
                used[v] = false;
                perm.pop();
            }
            cur.truncate(start);
        }
    }

    place(g, &mut perm, &mut used, &mut cur, &mut best, true);
    if best.is_empty() {
        best = Vec::new(); // order 0 or 1: no triangle bits
    }
    let mut key = vec![n as u64];
    let mut word = 0u64;
    for (i, &b) in best.iter().enumerate() {
        word = word << 1 | u64::from(b);
        if i % 64 == 63 {
            key.push(word);
            word = 0;
        }
    }
    if best.len() % 64 != 0 {
        key.push(word << (64 - best.len() % 64));
    }
    key
}

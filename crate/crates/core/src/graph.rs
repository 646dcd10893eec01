//! Simple undirected graphs and the operations used to assemble the
//! coalescence families: standard graphs, joins and k-coalescences.
//!
//! Vertex ordering is part of the contract. Every constructor documents the
//! order it produces so that closed-form resistance matrices line up with the
//! Laplacian oracle entry by entry.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::linalg::SymMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertices {0:?} do not induce a complete subgraph")]
    NotComplete(Vec<usize>),
    #[error("identification lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("edge list line {line}: {msg}")]
    EdgeListParse { line: usize, msg: String },
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored normalized as `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    labels: Vec<Option<String>>,
}

impl Graph {
    /// Graph on `n >= 1` vertices with the given edges.
    ///
    /// Rejects self-loops, repeated edges (in either orientation) and
    /// endpoints outside `0..n`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::edgeless(n)?;
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn edgeless(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParameter(
                "a graph needs at least one vertex".into(),
            ));
        }
        Ok(Self {
            n,
            edges: BTreeSet::new(),
            labels: vec![None; n],
        })
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.edges.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        Ok(())
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    /// Breadth-first hop distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency_lists();
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// All-pairs hop distances, or `None` if the graph is disconnected.
    pub fn distance_matrix(&self) -> Option<Vec<Vec<usize>>> {
        (0..self.n)
            .map(|s| self.bfs_distances(s).into_iter().collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Relabels vertices so that old vertex `perm[i]` becomes new vertex `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GraphError> {
        check_permutation(perm, self.n)?;
        let mut inverse = vec![0; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mut g = Self::new(self.n, self.edges().map(|(u, v)| (inverse[u], inverse[v])))?;
        g.labels = perm.iter().map(|&old| self.labels[old].clone()).collect();
        Ok(g)
    }

    /// Serializes to the edge-list text format: a header line `n m`, then one
    /// `u v` line per edge with 0-based indices.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.size());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list text format. Text after `#` on any line is ignored,
    /// as are blank lines.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut rows = text.lines().enumerate().filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then_some((i + 1, content))
        });
        let (line, header) = rows.next().ok_or(GraphError::EdgeListParse {
            line: 0,
            msg: "missing `n m` header".into(),
        })?;
        let [n, m] = parse_pair(line, header)?;
        let mut g = Self::edgeless(n).map_err(|e| GraphError::EdgeListParse {
            line,
            msg: e.to_string(),
        })?;
        let mut seen = 0;
        for (line, row) in rows {
            let [u, v] = parse_pair(line, row)?;
            g.insert_edge(u, v).map_err(|e| GraphError::EdgeListParse {
                line,
                msg: e.to_string(),
            })?;
            seen += 1;
        }
        if seen != m {
            return Err(GraphError::EdgeListParse {
                line,
                msg: format!("header declares {m} edges but {seen} were listed"),
            });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, row: &str) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = row.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::EdgeListParse {
            line,
            msg: format!("expected two integers, found `{row}`"),
        });
    }
    let mut out = [0; 2];
    for (slot, tok) in out.iter_mut().zip(&fields) {
        *slot = tok.parse().map_err(|_| GraphError::EdgeListParse {
            line,
            msg: format!("`{tok}` is not a non-negative integer"),
        })?;
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<(), GraphError> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(GraphError::LengthMismatch(perm.len(), n));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(GraphError::InvalidParameter(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

/// The named graphs that serve as coalescence operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// `K_n`, sizes `[n]`.
    Complete,
    /// `P_n` on `n` vertices in path order, sizes `[n]`.
    Path,
    /// `C_n`, sizes `[n]` with `n >= 3`.
    Cycle,
    /// `K_{1,s}`, sizes `[s]`: center is vertex 0, leaves follow.
    Star,
    /// `K_{a,b}`, sizes `[a, b]`: the `a` side comes first.
    CompleteBipartite,
    /// `n` isolated vertices, sizes `[n]`.
    Edgeless,
}

pub fn make_standard(kind: StandardKind, sizes: &[usize]) -> Result<Graph, GraphError> {
    let arity = if kind == StandardKind::CompleteBipartite { 2 } else { 1 };
    if sizes.len() != arity {
        return Err(GraphError::InvalidParameter(format!(
            "{kind:?} takes {arity} size(s), got {}",
            sizes.len()
        )));
    }
    if let Some(pos) = sizes.iter().position(|&s| s == 0) {
        return Err(GraphError::InvalidParameter(format!(
            "{kind:?} size #{pos} must be positive"
        )));
    }
    let n = sizes[0];
    let mut g = match kind {
        StandardKind::Complete => Graph::new(n, clique_edges(0..n))?,
        StandardKind::Path => Graph::new(n, (1..n).map(|i| (i - 1, i)))?,
        StandardKind::Cycle => {
            if n < 3 {
                return Err(GraphError::InvalidParameter(format!(
                    "cycle needs at least 3 vertices, got {n}"
                )));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?
        }
        StandardKind::Star => {
            let mut g = Graph::new(n + 1, (1..=n).map(|leaf| (0, leaf)))?;
            g.set_label(0, "center");
            (1..=n).for_each(|leaf| g.set_label(leaf, "leaf"));
            g
        }
        StandardKind::CompleteBipartite => {
            let (a, b) = (sizes[0], sizes[1]);
            let mut g = Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))?;
            (0..a).for_each(|v| g.set_label(v, "left"));
            (a..a + b).for_each(|v| g.set_label(v, "right"));
            g
        }
        StandardKind::Edgeless => Graph::edgeless(n)?,
    };
    if kind == StandardKind::Path && n > 1 {
        g.set_label(0, "end");
        g.set_label(n - 1, "end");
    }
    Ok(g)
}

pub(crate) fn clique_edges(range: std::ops::Range<usize>) -> impl Iterator<Item = (usize, usize)> {
    let end = range.end;
    range.flat_map(move |u| (u + 1..end).map(move |v| (u, v)))
}

/// `G ∨ H`: disjoint union plus every edge between the two. Vertices of `g`
/// keep their indices; vertices of `h` are shifted by `g.order()`.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let off = g.order();
    let cross = (0..off).flat_map(|u| (0..h.order()).map(move |v| (u, off + v)));
    let edges = g
        .edges()
        .chain(h.edges().map(|(u, v)| (u + off, v + off)))
        .chain(cross);
    let mut out = Graph::new(off + h.order(), edges).expect("join of valid graphs is simple");
    out.labels = g.labels.iter().chain(&h.labels).cloned().collect();
    out
}

/// Identifies the clique `s_g` of `g` with the clique `s_h` of `h`,
/// position by position.
///
/// Output ordering: identified vertices first (in the order of `s_g`), then
/// the remaining vertices of `g` in their original order, then the remaining
/// vertices of `h`. Identified vertices are labelled `"identified"`.
pub fn k_coalescence(g: &Graph, s_g: &[usize], h: &Graph, s_h: &[usize]) -> Result<Graph, GraphError> {
    if s_g.len() != s_h.len() {
        return Err(GraphError::LengthMismatch(s_g.len(), s_h.len()));
    }
    let k = s_g.len();
    if k == 0 {
        return Err(GraphError::InvalidParameter(
            "k-coalescence needs at least one identified vertex".into(),
        ));
    }
    let map_g = identification_map(g, s_g, k)?;
    let map_h = identification_map(h, s_h, g.order())?;

    let n = g.order() + h.order() - k;
    let mut edges = BTreeSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (map_g[u], map_g[v]);
        edges.insert((a.min(b), a.max(b)));
    }
    for (u, v) in h.edges() {
        let (a, b) = (map_h[u], map_h[v]);
        edges.insert((a.min(b), a.max(b)));
    }
    let mut out = Graph::new(n, edges)?;
    for (old, &new) in map_g.iter().enumerate() {
        out.labels[new] = g.labels[old].clone();
    }
    for (old, &new) in map_h.iter().enumerate() {
        if new >= k {
            out.labels[new] = h.labels[old].clone();
        }
    }
    (0..k).for_each(|v| out.set_label(v, "identified"));
    Ok(out)
}

/// Maps old vertex ids to new ones: `set[i] -> i`, every other vertex to
/// `start, start + 1, ..` in its original order.
fn identification_map(g: &Graph, set: &[usize], start: usize) -> Result<Vec<usize>, GraphError> {
    let mut map = vec![usize::MAX; g.order()];
    for (i, &v) in set.iter().enumerate() {
        if v >= g.order() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.order() });
        }
        if map[v] != usize::MAX {
            return Err(GraphError::InvalidParameter(format!(
                "vertex {v} listed twice in the identification set"
            )));
        }
        map[v] = i;
    }
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if !g.has_edge(u, v) {
                return Err(GraphError::NotComplete(set.to_vec()));
            }
        }
    }
    for (next, slot) in (start..).zip(map.iter_mut().filter(|s| **s == usize::MAX)) {
        *slot = next;
    }
    Ok(map)
}

/// `L = D - A`.
pub fn laplacian(g: &Graph) -> SymMatrix {
    let mut m = nalgebra::DMatrix::zeros(g.order(), g.order());
    for (u, v) in g.edges() {
        m[(u, u)] += 1.0;
        m[(v, v)] += 1.0;
        m[(u, v)] -= 1.0;
        m[(v, u)] -= 1.0;
    }
    SymMatrix::new_unchecked(m)
}

//! Simple undirected graphs and the invariants used on incidence graphs:
//! girth, regularity, bipartition, adjacency spectrum, graph6 I/O.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::designs::TripleSystem;
use crate::linalg::{numerical_rank, symmetric_eigenvalues, LinalgError};
use crate::par::{self, Execution};

/// Largest vertex count accepted by the dense spectrum routines.
pub const MAX_SPECTRUM_VERTICES: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("edge {{{0},{1}}} listed twice")]
    MultiEdge(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph6 syntax error: {0}")]
    SyntaxError(String),
    #[error("graph has {0} vertices; dense spectra are limited to {MAX_SPECTRUM_VERTICES}")]
    TooLarge(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A simple undirected graph on vertices `0..n`.
///
/// Equality compares vertex count and edge set; labels are ignored.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], labels: None }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            if g.adj[a].contains(&b) {
                return Err(GraphError::MultiEdge(a.min(b), a.max(b)));
            }
            g.adj[a].push(b);
            g.adj[b].push(a);
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|j| (0..j).map(move |i| (i, j)))).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    /// Attaches one label per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n(), "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in increasing order of `(i, j)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|l| l.len() == d)
    }

    /// Two-coloring by BFS, or `None` when an odd cycle exists. Each
    /// component's lowest vertex goes to the first part.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.n();
        let mut side = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| side[v] == 0);
        Some((a, b))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Length of a shortest cycle.
    pub fn girth(&self) -> Girth {
        self.girth_with(Execution::default())
    }

    /// Shortest cycle via BFS from every vertex, min-reduced over roots.
    pub fn girth_with(&self, exec: Execution) -> Girth {
        let per_root = par::map_range(exec, self.n(), |r| self.shortest_cycle_through(r));
        per_root.into_iter().flatten().min().map_or(Girth::Infinite, Girth::Finite)
    }

    fn shortest_cycle_through(&self, root: usize) -> Option<usize> {
        let n = self.n();
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        let mut best: Option<usize> = None;
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // Any later closure has length at least 2 * dist[u].
                if 2 * dist[u] >= b {
                    break;
                }
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    /// Row-major 0/1 adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let n = self.n();
        let mut a = vec![0.0; n * n];
        for (i, j) in self.edges() {
            a[i * n + j] = 1.0;
            a[j * n + i] = 1.0;
        }
        a
    }

    /// All adjacency eigenvalues, ascending.
    pub fn adjacency_spectrum(&self) -> Result<Vec<f64>, GraphError> {
        let n = self.n();
        if n > MAX_SPECTRUM_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        Ok(symmetric_eigenvalues(&self.adjacency_matrix(), n)?)
    }

    /// Numerical rank of `A - λI`: singular values above `tol · max`.
    pub fn shifted_rank(&self, lambda: f64, tol: f64) -> Result<usize, GraphError> {
        let n = self.n();
        if n > MAX_SPECTRUM_VERTICES {
            return Err(GraphError::TooLarge(n));
        }
        let mut a = self.adjacency_matrix();
        for i in 0..n {
            a[i * n + i] -= lambda;
        }
        // A - λI is symmetric, so its singular values are |eigenvalues|.
        let ev = symmetric_eigenvalues(&a, n)?;
        Ok(numerical_rank(&ev, tol))
    }

    /// graph6 encoding (without header or trailing newline).
    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        encode_size(n, &mut out);
        let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 1..n {
            for i in 0..j {
                bits.push(self.has_edge(i, j));
            }
        }
        for chunk in bits.chunks(6) {
            let mut x = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                if b {
                    x |= 1 << (5 - k);
                }
            }
            out.push((x + 63) as char);
        }
        out
    }

    /// Decodes one graph6 string; a `>>graph6<<` header and surrounding
    /// whitespace are accepted.
    pub fn from_graph6(text: &str) -> Result<Self, GraphError> {
        let s = text.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let syntax = |m: String| GraphError::SyntaxError(m);
        if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
            return Err(syntax(format!(
                "illegal character {:?} at offset {pos}",
                s[pos..].chars().next().unwrap_or('?')
            )));
        }
        let (n, rest) = decode_size(bytes)?;
        let nbits = n * n.saturating_sub(1) / 2;
        let expected = nbits.div_ceil(6);
        if rest.len() != expected {
            return Err(syntax(format!("expected {expected} data bytes for {n} vertices, found {}", rest.len())));
        }
        let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        if (nbits..expected * 6).any(bit) {
            return Err(syntax("nonzero padding bits".into()));
        }
        Self::from_edges(n, edges)
    }

    /// Debug edge list: a `n=<count>` line then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n());
        for (i, j) in self.edges() {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut n = None;
        let mut edges = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("n=") {
                n = Some(
                    rest.trim().parse().map_err(|_| GraphError::SyntaxError(format!("bad vertex count {rest:?}")))?,
                );
                continue;
            }
            let parts: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| GraphError::SyntaxError(format!("bad edge line {line:?}")))?;
            match parts[..] {
                [a, b] => edges.push((a, b)),
                _ => return Err(GraphError::SyntaxError(format!("bad edge line {line:?}"))),
            }
        }
        let n = n.ok_or_else(|| GraphError::SyntaxError("missing n= line".into()))?;
        Self::from_edges(n, edges)
    }
}

fn encode_size(n: usize, out: &mut String) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8]), GraphError> {
    let short = || GraphError::SyntaxError("truncated vertex count".into());
    let word = |b: &[u8]| b.iter().fold(0usize, |acc, &c| (acc << 6) | (c - 63) as usize);
    match bytes {
        [] => Err(GraphError::SyntaxError("empty graph6 string".into())),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(short());
            }
            Ok((word(&rest[..6]), &rest[6..]))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(short());
            }
            Ok((word(&rest[..3]), &rest[3..]))
        }
        [first, rest @ ..] => Ok(((first - 63) as usize, rest)),
    }
}

/// Girth of a graph; forests have infinite girth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Point/triple incidence graph: points `1..=v` become vertices `0..v`, the
/// triples follow as vertices `v..v+b` in stored order.
pub fn incidence_graph(sys: &TripleSystem) -> Graph {
    let v = sys.order();
    let edges = sys.triples().iter().enumerate().flat_map(|(t, tr)| tr.iter().map(move |&p| (p - 1, v + t)));
    let labels = (1..=v).map(|p| format!("p{p}")).chain((1..=sys.num_triples()).map(|t| format!("t{t}"))).collect();
    Graph::from_edges(v + sys.num_triples(), edges).expect("triples have distinct points").with_labels(labels)
}

/// Orbit label of every vertex of [`incidence_graph`] under the
/// automorphisms of the system; each label is the smallest vertex of its orbit.
pub fn incidence_orbits(sys: &TripleSystem) -> Vec<usize> {
    let v = sys.order();
    let index: HashMap<[usize; 3], usize> = sys.triples().iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let n = v + sys.num_triples();
    let mut label: Vec<usize> = (0..n).collect();
    for perm in sys.automorphisms() {
        let image = |x: usize| {
            if x < v {
                perm[x]
            } else {
                let mut t = sys.triples()[x - v].map(|p| perm[p - 1] + 1);
                t.sort_unstable();
                v + index[&t]
            }
        };
        for x in 0..n {
            let (a, b) = (find(&mut label, x), find(&mut label, image(x)));
            label[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|x| find(&mut label, x)).collect()
}

fn find(label: &mut [usize], mut x: usize) -> usize {
    while label[x] != x {
        label[x] = label[label[x]];
        x = label[x];
    }
    x
}

/// Nonzero pattern of a `rows × cols` biadjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitePattern {
    rows: usize,
    cols: usize,
    support: Vec<Vec<usize>>,
}

impl BipartitePattern {
    pub fn new(rows: usize, cols: usize, support: Vec<Vec<usize>>) -> Self {
        assert_eq!(support.len(), rows, "one support list per row");
        let support = support
            .into_iter()
            .map(|mut r| {
                r.sort_unstable();
                r.dedup();
                assert!(r.iter().all(|&c| c < cols), "column out of range");
                r
            })
            .collect();
        Self { rows, cols, support }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted columns of the nonzero entries in row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.support[r]
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.support[r].binary_search(&c).is_ok()
    }

    /// Rows in which both columns are nonzero.
    pub fn shared_rows(&self, c1: usize, c2: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.contains(r, c1) && self.contains(r, c2)).collect()
    }

    /// Rendering with `*` for nonzero and `0` for zero entries.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let row: Vec<&str> = (0..self.cols).map(|c| if self.contains(r, c) { "*" } else { "0" }).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Rows are triples in stored order, columns are points `1..=v` (0-based).
pub fn biadjacency_pattern(sys: &TripleSystem) -> BipartitePattern {
    BipartitePattern::new(
        sys.num_triples(),
        sys.order(),
        sys.triples().iter().map(|t| t.iter().map(|&p| p - 1).collect()).collect(),
    )
}

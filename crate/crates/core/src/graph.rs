//! Simple undirected graphs on `0..n` and seeded G(n, p) sampling.
//!
//! Adjacency is stored as one packed bit row per vertex, so the common
//! neighbourhood of a vertex set is a word-parallel AND of rows. Graphs are
//! immutable once built; mutation-style operations return a new graph.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Geometric;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge {0}-{1} is not present")]
    MissingEdge(Vertex, Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Provenance of one random trial: a master seed shared by a whole run and
/// the index of the trial within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    /// Independent generator for this (master, stream) pair. The stream index
    /// selects a disjoint ChaCha keystream, so trials never share state.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = bitset::words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    /// Cycle `0-1-...-(n-1)-0`. For `n < 3` this degenerates to a path.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert(0, n - 1);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.insert(u - 1, u);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.insert(u, v);
        }
        debug_assert!(g.check_invariants());
        Ok(g)
    }

    /// Samples G(n, p): each of the C(n, 2) pairs is an edge independently
    /// with probability `p`. Pairs are visited in lexicographic order using
    /// geometric skips, so the cost is proportional to the edge count.
    pub fn sample_gnp(n: usize, p: f64, seed: Seed) -> Result<Self, GraphError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::InvalidProbability(p));
        }
        if p == 0.0 || n < 2 {
            return Ok(Graph::empty(n));
        }
        if p == 1.0 {
            return Ok(Graph::complete(n));
        }
        let mut rng = seed.rng();
        let skips = Geometric::new(p).map_err(|_| GraphError::InvalidProbability(p))?;
        let total = (n as u64) * (n as u64 - 1) / 2;
        let mut g = Graph::empty(n);

        // (u, row_start) tracks the first pair index of row u: pairs (u, u+1..n).
        let mut u = 0usize;
        let mut row_start = 0u64;
        let mut row_len = (n - 1) as u64;
        let mut idx = 0u64;
        loop {
            let skip: u64 = rng.sample(skips);
            idx = match idx.checked_add(skip) {
                Some(i) if i < total => i,
                _ => break,
            };
            while idx >= row_start + row_len {
                row_start += row_len;
                row_len -= 1;
                u += 1;
            }
            let v = u + 1 + (idx - row_start) as usize;
            g.insert(u, v);
            idx += 1;
        }
        debug_assert!(g.check_invariants());
        Ok(g)
    }

    #[inline]
    fn insert(&mut self, u: Vertex, v: Vertex) {
        let w = self.words;
        bitset::set(&mut self.rows[u * w..(u + 1) * w], v);
        bitset::set(&mut self.rows[v * w..(v + 1) * w], u);
        self.edges += 1;
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Packed neighbourhood row of `v`.
    #[inline]
    pub(crate) fn row(&self, v: Vertex) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && bitset::test(self.row(u), v)
    }

    pub fn degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(bitset::count(self.row(v)))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        bitset::ones(self.row(v))
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| bitset::count(self.row(v))).min()
    }

    /// First vertex with no neighbours, if any.
    pub fn isolated_vertex(&self) -> Option<Vertex> {
        (0..self.n).find(|&v| bitset::is_empty(self.row(v)))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n).flat_map(move |u| {
            bitset::ones(self.row(u))
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Packed common neighbourhood of `set` (members of `set` excluded).
    pub(crate) fn common_neighbor_bits(&self, set: &[Vertex]) -> Vec<u64> {
        let mut acc = vec![!0u64; self.words];
        if let Some(last) = acc.last_mut() {
            let tail = self.n % bitset::WORD_BITS;
            if tail != 0 {
                *last = (1u64 << tail) - 1;
            }
        }
        for &v in set {
            bitset::and_assign(&mut acc, self.row(v));
        }
        for &v in set {
            bitset::clear(&mut acc, v);
        }
        acc
    }

    /// Vertices adjacent to every member of `set`, excluding the members.
    pub fn common_neighbors(&self, set: &[Vertex]) -> Result<Vec<Vertex>, GraphError> {
        for &v in set {
            self.check_vertex(v)?;
        }
        Ok(bitset::ones(&self.common_neighbor_bits(set)).collect())
    }

    /// Connected-component label for every vertex, numbered in order of
    /// smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut unvisited = vec![0u64; self.words];
        for v in 0..self.n {
            bitset::set(&mut unvisited, v);
        }
        let mut next = 0;
        let mut stack = Vec::new();
        for root in 0..self.n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = next;
            bitset::clear(&mut unvisited, root);
            stack.push(root);
            while let Some(u) = stack.pop() {
                for (wi, (un, nb)) in unvisited.iter_mut().zip(self.row(u)).enumerate() {
                    let mut fresh = *un & *nb;
                    *un &= !fresh;
                    while fresh != 0 {
                        let v = wi * bitset::WORD_BITS + fresh.trailing_zeros() as usize;
                        fresh &= fresh - 1;
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().iter().max().map_or(0, |&m| m + 1)
    }

    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if self.n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(self.component_count() == 1)
    }

    /// Copy of the graph with the edge `u-v` removed.
    pub fn delete_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        let w = self.words;
        bitset::clear(&mut g.rows[u * w..(u + 1) * w], v);
        bitset::clear(&mut g.rows[v * w..(v + 1) * w], u);
        g.edges -= 1;
        debug_assert!(g.check_invariants());
        Ok(g)
    }

    /// Subgraph induced on `vertices`, relabelled `0..vertices.len()` in the
    /// order given.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.insert(i, j);
                }
            }
        }
        g
    }

    /// Symmetry, no self-loops, consistent edge count.
    pub fn check_invariants(&self) -> bool {
        let mut ordered = 0;
        for u in 0..self.n {
            if bitset::test(self.row(u), u) {
                return false;
            }
            for v in self.neighbors(u) {
                if v >= self.n || !bitset::test(self.row(v), u) {
                    return false;
                }
                ordered += 1;
            }
        }
        ordered == 2 * self.edges
    }

    /// Edge-list text: a header line `n m`, then one `u v` line per edge
    /// with `u < v`. The parser skips blank lines and lines starting with `#`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut g = Graph::empty(n);
        for (line, text) in lines {
            let [u, v] = parse_pair(line, text)?;
            let bad = |msg: String| GraphError::Parse { line, msg };
            if u >= n || v >= n {
                return Err(bad(format!("vertex out of range for n = {n}")));
            }
            if u == v {
                return Err(bad(format!("self-loop at {u}")));
            }
            if g.has_edge(u, v) {
                return Err(bad(format!("duplicate edge {u} {v}")));
            }
            g.insert(u, v);
        }
        if g.edges != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", g.edges),
            });
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Parse {
            line,
            msg: format!("expected two integers, found {:?}", text),
        });
    }
    let mut out = [0usize; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("not a non-negative integer: {f:?}"),
        })?;
    }
    Ok(out)
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

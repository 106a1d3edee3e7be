//! Simple undirected graphs with fixed adjacency order, generators, and
//! edge-list file I/O.
//!
//! The adjacency order is frozen at construction time: the "j-th neighbor"
//! query is deterministic for the lifetime of the graph. Each undirected edge
//! is viewed as two directed edges `(v, adjacency[v][j])`; directed edges are
//! numbered contiguously by `(vertex, slot)` so distributions over them can
//! live in flat vectors.

use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

/// Immutable simple undirected graph.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    /// Canonical (min, max) edges in insertion order.
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    /// Prefix sums of degrees; directed edge (v, slot) has id offsets[v] + slot.
    offsets: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range vertex ids.
    pub fn from_edges(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut edge_index = HashMap::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for id in [u, v] {
                if id >= n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
            }
            let key = (u.min(v), u.max(v));
            if edge_index.insert(key, edges.len()).is_some() {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            edges.push(key);
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for adj in &adjacency {
            acc += adj.len();
            offsets.push(acc);
        }
        Ok(Self { adjacency, edges, edge_index, offsets })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index.contains_key(&(u.min(v), u.max(v)))
    }

    /// Canonical (min, max) undirected edges in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of an undirected edge into `edges()`.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Number of directed edges, 2m.
    pub fn directed_edge_count(&self) -> usize {
        2 * self.m()
    }

    /// Flat id of the directed edge leaving `v` through adjacency slot `slot`.
    pub fn directed_id(&self, v: usize, slot: usize) -> usize {
        debug_assert!(slot < self.degree(v));
        self.offsets[v] + slot
    }

    /// Inverse of `directed_id`: the (source, target) pair of a directed id.
    pub fn directed_endpoints(&self, id: usize) -> (usize, usize) {
        let v = match self.offsets.binary_search(&id) {
            Ok(i) => {
                // Skip isolated vertices sharing the same offset.
                let mut i = i;
                while self.adjacency[i].is_empty() {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        (v, self.adjacency[v][id - self.offsets[v]])
    }

    /// All directed edges as (source, target), in flat-id order.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(v, adj)| adj.iter().map(move |&w| (v, w)))
    }

    /// Parses the edge-list text format: first line `n m`, then one `u v`
    /// per line with `0 <= u < v < n`. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "empty file".into(),
        })?;
        let (n, m) = parse_pair(header).ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected header 'n m', got '{header}'"),
        })?;
        let mut edge_list = Vec::with_capacity(m);
        for (line_no, line) in lines {
            let (u, v) = parse_pair(line).ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected edge 'u v', got '{line}'"),
            })?;
            edge_list.push((u, v));
        }
        if edge_list.len() != m {
            return Err(Error::EdgeCountMismatch { declared: m, found: edge_list.len() });
        }
        Self::from_edges(n, &edge_list)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Serializes in the edge-list format with edges sorted, so load/save
    /// round-trips up to line-order normalization.
    pub fn to_edge_list(&self) -> String {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n(), self.m());
        for (u, v) in sorted {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Named graph generators used as the test corpus.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Center 0 joined to `leaves` leaves.
    Star { leaves: usize },
    /// Two adjacent hubs (0, 1), each with `leaves_per_hub` private leaves.
    DoubleStar { leaves_per_hub: usize },
    /// Clique on `clique_size` vertices with a path of `path_len` extra
    /// vertices hanging off vertex 0.
    Lollipop { clique_size: usize, path_len: usize },
    /// Erdos-Renyi G(n, p).
    Gnp { n: usize, p: f64 },
    /// Complete bipartite K_{a,b}.
    CompleteBipartite { a: usize, b: usize },
}

/// Builds the graph described by `spec`; deterministic for a fixed seed.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Graph> {
    match *spec {
        GeneratorSpec::Star { leaves } => {
            if leaves == 0 {
                return Err(Error::InvalidParameter("star needs >= 1 leaf".into()));
            }
            let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
            Graph::from_edges(leaves + 1, &edges)
        }
        GeneratorSpec::DoubleStar { leaves_per_hub } => {
            if leaves_per_hub == 0 {
                return Err(Error::InvalidParameter("double_star needs >= 1 leaf per hub".into()));
            }
            let k = leaves_per_hub;
            let mut edges = vec![(0, 1)];
            edges.extend((0..k).map(|i| (0, 2 + i)));
            edges.extend((0..k).map(|i| (1, 2 + k + i)));
            Graph::from_edges(2 + 2 * k, &edges)
        }
        GeneratorSpec::Lollipop { clique_size, path_len } => {
            if clique_size < 2 {
                return Err(Error::InvalidParameter("lollipop needs clique_size >= 2".into()));
            }
            let mut edges = Vec::new();
            for u in 0..clique_size {
                for v in (u + 1)..clique_size {
                    edges.push((u, v));
                }
            }
            let mut prev = 0;
            for i in 0..path_len {
                let next = clique_size + i;
                edges.push((prev.min(next), prev.max(next)));
                prev = next;
            }
            Graph::from_edges(clique_size + path_len, &edges)
        }
        GeneratorSpec::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("gnp p = {p} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let edges = gnp_edges(n, p, &mut rng);
            Graph::from_edges(n, &edges)
        }
        GeneratorSpec::CompleteBipartite { a, b } => {
            if a == 0 || b == 0 {
                return Err(Error::InvalidParameter("complete_bipartite needs a, b >= 1".into()));
            }
            let mut edges = Vec::with_capacity(a * b);
            for u in 0..a {
                for v in 0..b {
                    edges.push((u, a + v));
                }
            }
            Graph::from_edges(a + b, &edges)
        }
    }
}

/// G(n, p) by geometric skipping over the linearized pair index space;
/// expected O(pn^2) work, so sparse graphs at n = 10^5 stay cheap.
fn gnp_edges(n: usize, p: f64, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let total = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    if p <= 0.0 || total == 0 {
        return edges;
    }
    if p >= 1.0 {
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        return edges;
    }
    let log_q = (1.0 - p).ln();
    let mut idx: usize = 0;
    loop {
        // Geometric(p) gap to the next present pair.
        let u: f64 = rng.random();
        let skip = (u.ln() / log_q).floor() as usize;
        idx = match idx.checked_add(skip) {
            Some(i) if i < total => i,
            _ => break,
        };
        edges.push(pair_from_index(n, idx));
        idx += 1;
        if idx >= total {
            break;
        }
    }
    edges
}

/// Maps a flat index in [0, n(n-1)/2) to the pair (u, v), u < v, in
/// row-major order over the upper triangle.
fn pair_from_index(n: usize, idx: usize) -> (usize, usize) {
    let mut u = 0;
    let mut remaining = idx;
    loop {
        let row = n - 1 - u;
        if remaining < row {
            return (u, u + 1 + remaining);
        }
        remaining -= row;
        u += 1;
    }
}

/// Light/heavy classification against the threshold θ = ⌈√(2·m_est)⌉.
#[derive(Debug, Clone)]
pub struct EdgeClassification {
    theta: usize,
    is_heavy: Vec<bool>,
    d_h: Vec<usize>,
    heavy_neighbors: Vec<Vec<usize>>,
}

impl EdgeClassification {
    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn is_heavy(&self, v: usize) -> bool {
        self.is_heavy[v]
    }

    pub fn is_light(&self, v: usize) -> bool {
        !self.is_heavy[v]
    }

    /// Number of heavy neighbors of `v`.
    pub fn d_h(&self, v: usize) -> usize {
        self.d_h[v]
    }

    /// Heavy neighbors of `v`, preserving adjacency order.
    pub fn heavy_neighbors(&self, v: usize) -> &[usize] {
        &self.heavy_neighbors[v]
    }

    pub fn heavy_vertex_count(&self) -> usize {
        self.is_heavy.iter().filter(|&&h| h).count()
    }
}

/// Classifies vertices as light/heavy for a declared edge count `m_est`
/// (exact or upper bound).
pub fn classify(g: &Graph, m_est: usize) -> Result<EdgeClassification> {
    if m_est == 0 && g.m() > 0 {
        return Err(Error::ZeroEdgeBound { m: g.m() });
    }
    let theta = ceil_sqrt(2 * m_est as u64) as usize;
    let is_heavy: Vec<bool> = (0..g.n()).map(|v| g.degree(v) > theta).collect();
    let heavy_neighbors: Vec<Vec<usize>> = (0..g.n())
        .map(|v| g.neighbors(v).iter().copied().filter(|&w| is_heavy[w]).collect())
        .collect();
    let d_h = heavy_neighbors.iter().map(Vec::len).collect();
    Ok(EdgeClassification { theta, is_heavy, d_h, heavy_neighbors })
}

/// Exact ⌈√x⌉ in integer arithmetic.
fn ceil_sqrt(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut s = (x as f64).sqrt() as u64;
    while s * s < x {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= x {
        s -= 1;
    }
    s
}

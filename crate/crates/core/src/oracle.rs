//! Instrumented standard-model query oracle.
//!
//! The oracle is the only access path the samplers have to a graph: uniform
//! random vertex, degree, j-th neighbor and pair queries. Every call bumps
//! exactly one counter, so query complexity is measured rather than estimated.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Per-kind query tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounters {
    pub random_vertex: u64,
    pub degree: u64,
    pub neighbor: u64,
    pub pair: u64,
}

impl QueryCounters {
    pub fn total(&self) -> u64 {
        self.random_vertex + self.degree + self.neighbor + self.pair
    }
}

/// Access-restricted, query-counting view of a graph.
///
/// Single-threaded per instance; parallel experiments use one oracle per
/// worker over the shared graph.
pub struct QueryOracle<'g> {
    graph: &'g Graph,
    m_est: usize,
    counters: QueryCounters,
    rng: ChaCha8Rng,
}

impl<'g> QueryOracle<'g> {
    /// `m_est` is the declared edge count: exact or an upper bound.
    pub fn new(graph: &'g Graph, m_est: usize, rng: ChaCha8Rng) -> Self {
        Self { graph, m_est, counters: QueryCounters::default(), rng }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m_est(&self) -> usize {
        self.m_est
    }

    pub fn counters(&self) -> QueryCounters {
        self.counters
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.graph.n() {
            return Err(Error::VertexOutOfRange { id: v, n: self.graph.n() });
        }
        Ok(())
    }

    /// Uniform random vertex.
    pub fn random_vertex(&mut self) -> usize {
        self.counters.random_vertex += 1;
        self.rng.random_range(0..self.graph.n())
    }

    pub fn degree(&mut self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        self.counters.degree += 1;
        Ok(self.graph.degree(v))
    }

    /// The j-th neighbor of `v`, 1-indexed; `None` when j > d(v).
    pub fn neighbor(&mut self, v: usize, j: usize) -> Result<Option<usize>> {
        self.check_vertex(v)?;
        if j == 0 {
            return Err(Error::InvalidParameter("neighbor index j is 1-based".into()));
        }
        self.counters.neighbor += 1;
        Ok(self.graph.neighbors(v).get(j - 1).copied())
    }

    /// Whether `u` and `v` are adjacent.
    pub fn pair(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.counters.pair += 1;
        Ok(self.graph.has_edge(u, v))
    }
}

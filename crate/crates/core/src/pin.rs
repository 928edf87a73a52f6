//! Pairwise independent network sources.
//!
//! Every edge `{u, v}` of a multigraph on `[m]` carries independent fair bits,
//! one per unit of multiplicity, seen by both endpoints and nobody else. A set
//! `A` of terminals therefore jointly observes exactly the bits on edges with at
//! least one endpoint in `A`. Since those bits are independent and uniform,
//! `H(X_A)` is the total multiplicity of such edges. For a partition `P`:
//!
//! ```text
//! Σ_{A∈P} H(X_A) - H(X_[m]) = Σ_e mult(e) · (#cells touched by e - 1)
//! ```
//!
//! An edge inside one cell contributes 0 and an edge across two cells
//! contributes 1. So the numerator of `Δ(P)` is the crossing multiplicity
//! `|E(P)|`, and `Δ(P) = |E(P)| / (|P| - 1)`. These are integers and rationals,
//! so everything about a PIN source can be decided exactly.

use alloc::format;
use alloc::vec::Vec;
use core::marker::PhantomData;

use num_bigint::BigInt;

use crate::capacity::CapacityReport;
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition, MAX_ENUMERATION_TERMINALS};
use crate::scalar::{Rational, Scalar};
use crate::source::EntropyOracle;
use crate::terminal::TerminalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinGraph {
    m: usize,
    /// Normalized to `u < v`, sorted, one entry per unordered pair.
    edges: Vec<Edge>,
}

impl PinGraph {
    pub fn new(m: usize, edges: Vec<Edge>) -> Result<Self> {
        if !(2..=TerminalSet::MAX_TERMINALS).contains(&m) {
            return Err(Error::SizeLimit(format!(
                "PIN graphs need 2 <= m <= {}, got {m}",
                TerminalSet::MAX_TERMINALS
            )));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (k, e) in edges.into_iter().enumerate() {
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("edge {k} is a self-loop on {}", e.u)));
            }
            if e.u == 0 || e.v == 0 || e.u > m || e.v > m {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} ({}, {}) has an endpoint outside [1, {m}]",
                    e.u, e.v
                )));
            }
            if e.mult == 0 {
                return Err(Error::InvalidGraph(format!("edge {k} has multiplicity 0")));
            }
            normalized.push(Edge { u: e.u.min(e.v), v: e.u.max(e.v), mult: e.mult });
        }
        normalized.sort();
        if let Some(w) = normalized.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::InvalidGraph(format!("duplicate edge {{{}, {}}}", w[0].u, w[0].v)));
        }
        Ok(PinGraph { m, edges: normalized })
    }

    pub fn terminals(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.edges.iter().map(|e| e.mult).sum()
    }

    /// `|E(P)|`: multiplicity of edges whose endpoints lie in different cells.
    pub fn crossing_count(&self, partition: &Partition) -> u64 {
        let rgs = partition.rgs();
        self.edges
            .iter()
            .filter(|e| rgs[e.u - 1] != rgs[e.v - 1])
            .map(|e| e.mult)
            .sum()
    }

    /// Float-valued oracle view.
    pub fn oracle(&self) -> PinOracle<'_, f64> {
        PinOracle { graph: self, _value: PhantomData }
    }

    /// Exact oracle view.
    pub fn exact_oracle(&self) -> PinOracle<'_, Rational> {
        PinOracle { graph: self, _value: PhantomData }
    }
}

/// `H(X_A)`: total multiplicity of edges with at least one endpoint in `A`.
pub fn pin_entropy(graph: &PinGraph, set: TerminalSet) -> u64 {
    graph
        .edges
        .iter()
        .filter(|e| set.contains(e.u) || set.contains(e.v))
        .map(|e| e.mult)
        .sum()
}

/// `Δ(P) = |E(P)| / (|P| - 1)`.
pub fn pin_delta(graph: &PinGraph, partition: &Partition) -> Result<Rational> {
    if partition.terminals() != graph.m {
        return Err(Error::InvalidPartition(format!(
            "{partition} partitions [{}], the graph has {} vertices",
            partition.terminals(),
            graph.m
        )));
    }
    if partition.len() < 2 {
        return Err(Error::InvalidPartition(format!("Δ needs at least two cells, got {partition}")));
    }
    Ok(Rational::new(BigInt::from(graph.crossing_count(partition)), BigInt::from(partition.len() - 1)))
}

/// Exact capacity with every exactly-tying partition.
pub fn pin_sk_capacity(graph: &PinGraph) -> Result<CapacityReport<Rational>> {
    let m = graph.m;
    if m > MAX_ENUMERATION_TERMINALS {
        return Err(Error::SizeLimit(format!(
            "partition minimization needs m <= {MAX_ENUMERATION_TERMINALS}, got {m}"
        )));
    }
    let mut best: Option<Rational> = None;
    let mut argmin = Vec::new();
    let mut examined = 0;
    for p in enumerate_partitions(m, 2)? {
        let d = pin_delta(graph, &p)?;
        examined += 1;
        match best.as_ref().map(|b| d.cmp(b)) {
            Some(core::cmp::Ordering::Greater) => {}
            Some(core::cmp::Ordering::Equal) => argmin.push(p),
            _ => {
                best = Some(d);
                argmin.clear();
                argmin.push(p);
            }
        }
    }
    Ok(CapacityReport { value: best.expect("m >= 2"), argmin, partitions_examined: examined })
}

/// `K_m` with unit multiplicities.
pub fn complete_graph(m: usize) -> Result<PinGraph> {
    if m < 2 {
        return Err(Error::SizeLimit(format!("complete graphs need m >= 2, got {m}")));
    }
    let edges = (1..=m)
        .flat_map(|u| (u + 1..=m).map(move |v| Edge { u, v, mult: 1 }))
        .collect();
    PinGraph::new(m, edges)
}

/// [`EntropyOracle`] over a PIN graph with integer-valued entropies.
#[derive(Debug)]
pub struct PinOracle<'a, V> {
    graph: &'a PinGraph,
    _value: PhantomData<fn() -> V>,
}

impl<V> Clone for PinOracle<'_, V> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<V> Copy for PinOracle<'_, V> {}

impl<V> PinOracle<'_, V> {
    pub fn graph(&self) -> &PinGraph {
        self.graph
    }
}

impl<V: Scalar> EntropyOracle for PinOracle<'_, V> {
    type Value = V;
    fn terminals(&self) -> usize {
        self.graph.m
    }
    fn entropy(&self, set: TerminalSet) -> V {
        V::from_int(pin_entropy(self.graph, set) as i64)
    }
}

//! The Cai-Fürer-Immerman construction over ordered connected base graphs,
//! with edge twisting.

use std::collections::BTreeSet;

use crate::graph::{ColoredGraph, Vertex};
use crate::{Error, Result};

/// A connected colored graph whose colors are pairwise distinct and ascending
/// with the vertex index, so that the color order is the vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    graph: ColoredGraph,
}

impl BaseGraph {
    /// Validates connectivity and the strictly ascending distinct coloring.
    pub fn new(graph: ColoredGraph) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::NotConnected);
        }
        for v in 1..graph.order() {
            if graph.color(v) <= graph.color(v - 1) {
                return Err(Error::BadBaseColors);
            }
        }
        Ok(BaseGraph { graph })
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        self.graph.edges()
    }
}

/// Validates a colored graph as a CFI base graph.
pub fn validate_base(graph: &ColoredGraph) -> Result<BaseGraph> {
    BaseGraph::new(graph.clone())
}

/// A CFI graph together with its provenance: which base vertex and parity
/// vector each gadget vertex came from, and the twist set it was built with.
#[derive(Debug, Clone)]
pub struct CfiGraph {
    graph: ColoredGraph,
    /// Per CFI vertex: the base vertex and the parity vector (bit `i` is the
    /// entry for the `i+1`-th edge at that base vertex).
    tags: Vec<(Vertex, Vec<u8>)>,
    twist: Vec<(Vertex, Vertex)>,
    base_order: usize,
}

impl CfiGraph {
    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn tags(&self) -> &[(Vertex, Vec<u8>)] {
        &self.tags
    }

    pub fn twist(&self) -> &[(Vertex, Vertex)] {
        &self.twist
    }

    pub fn base_order(&self) -> usize {
        self.base_order
    }

    pub fn into_graph(self) -> ColoredGraph {
        self.graph
    }
}

/// Builds the (twisted) CFI graph over `base`.
///
/// Every base vertex `v` of degree `d >= 1` becomes the independent set of
/// even-parity vectors in `{0,1}^d` (one vertex with the empty vector when
/// `d = 0`), colored with `v`'s base color. For a base edge `{u, v}` that is
/// the `i`-th edge at `u` and the `j`-th at `v` — edges at a vertex ordered
/// by ascending neighbor index — the gadgets are joined on `a_i = b_j`,
/// flipped to `a_i != b_j` exactly when the edge lies in the twist set.
///
/// Gadget vertices are numbered by ascending (base vertex, parity vector read
/// as a big-endian binary number).
pub fn build_cfi(base: &BaseGraph, twist: &[(Vertex, Vertex)]) -> Result<CfiGraph> {
    let g = base.graph();
    let n = g.order();
    let mut twist_set: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for &(u, v) in twist {
        let e = (u.min(v), u.max(v));
        if u >= n || v >= n || !g.adjacent(u, v) {
            return Err(Error::TwistNonEdge(u, v));
        }
        twist_set.insert(e);
    }

    // Gadget vertex lists, ordered by the vector read as a binary number with
    // the first edge position as the most significant bit.
    let mut tags: Vec<(Vertex, Vec<u8>)> = Vec::new();
    let mut gadget_start = vec![0usize; n + 1];
    for v in 0..n {
        gadget_start[v] = tags.len();
        let d = g.degree(v);
        if d == 0 {
            tags.push((v, Vec::new()));
            continue;
        }
        for word in 0u32..(1 << d) {
            if word.count_ones() % 2 != 0 {
                continue;
            }
            // bit position e (0-based edge index at v): most significant first
            let vec: Vec<u8> = (0..d)
                .map(|e| (word >> (d - 1 - e) & 1) as u8)
                .collect();
            tags.push((v, vec));
        }
    }
    gadget_start[n] = tags.len();

    let edge_pos = |v: Vertex, w: Vertex| -> usize {
        g.neighbors(v)
            .iter()
            .position(|&x| x == w)
            .expect("neighbor present")
    };

    let mut edges = Vec::new();
    for &(u, v) in g.edges() {
        let i = edge_pos(u, v);
        let j = edge_pos(v, u);
        let flip = twist_set.contains(&(u, v));
        for a in gadget_start[u]..gadget_start[u + 1] {
            for b in gadget_start[v]..gadget_start[v + 1] {
                let ai = tags[a].1[i];
                let bj = tags[b].1[j];
                if (ai == bj) != flip {
                    edges.push((a, b));
                }
            }
        }
    }

    let colors = tags.iter().map(|&(v, _)| g.color(v)).collect();
    let graph = ColoredGraph::new(tags.len(), &edges, colors)?;
    Ok(CfiGraph {
        graph,
        tags,
        twist: twist_set.into_iter().collect(),
        base_order: n,
    })
}

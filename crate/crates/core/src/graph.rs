//! Colored graphs, the base-graph families, and degree profiles.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Vertex = usize;
pub type ColorId = u32;

/// A finite simple graph with a total vertex coloring.
///
/// Vertices are the indices `0..n`. Colors are non-negative integers and the
/// integer order is the color order. The structure is immutable after
/// construction; all derived views (neighbor lists, adjacency bits) are built
/// once in [`ColoredGraph::new`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    colors: Vec<ColorId>,
    nbrs: Vec<Vec<Vertex>>,
    adj: Vec<u64>,
}

impl std::fmt::Debug for ColoredGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ColoredGraph(n={}, edges={:?}, colors={:?})",
            self.n, self.edges, self.colors
        )
    }
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    colors: Vec<ColorId>,
}

impl ColoredGraph {
    /// Builds a validated graph. Duplicate edges are deduplicated; self-loops,
    /// out-of-range endpoints, and a color list of the wrong length are
    /// rejected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)], colors: Vec<ColorId>) -> Result<Self> {
        if colors.len() != n {
            return Err(Error::ColorCount {
                got: colors.len(),
                want: n,
            });
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(Vertex, Vertex)> = set.into_iter().collect();
        let mut nbrs = vec![Vec::new(); n];
        let words = (n * n + 63) / 64;
        let mut adj = vec![0u64; words];
        for &(u, v) in &edges {
            nbrs[u].push(v);
            nbrs[v].push(u);
            let a = u * n + v;
            let b = v * n + u;
            adj[a / 64] |= 1 << (a % 64);
            adj[b / 64] |= 1 << (b % 64);
        }
        for l in &mut nbrs {
            l.sort_unstable();
        }
        Ok(ColoredGraph {
            n,
            edges,
            colors,
            nbrs,
            adj,
        })
    }

    /// Monochromatic graph with color 0 everywhere.
    pub fn monochromatic(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        ColoredGraph::new(n, edges, vec![0; n])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn color(&self, v: Vertex) -> ColorId {
        self.colors[v]
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        let i = u * self.n + v;
        self.adj[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.nbrs[v].len()
    }

    pub fn max_color(&self) -> Option<ColorId> {
        self.colors.iter().copied().max()
    }

    /// Gives each listed vertex a fresh color, strictly above every existing
    /// color, in list order. Rejects duplicate or out-of-range vertices.
    pub fn individualize(&self, vs: &[Vertex]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &v in vs {
            if v >= self.n {
                return Err(Error::VertexOutOfRange(v, self.n));
            }
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let mut colors = self.colors.clone();
        let mut next = self.max_color().map_or(0, |c| c + 1);
        for &v in vs {
            colors[v] = next;
            next += 1;
        }
        ColoredGraph::new(self.n, &self.edges, colors)
    }

    /// Degree sequence and neighborhood-degree sequence, both as sorted
    /// multisets.
    pub fn degree_profiles(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let mut degs: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut nbhd: Vec<Vec<usize>> = (0..self.n)
            .map(|v| {
                let mut ds: Vec<usize> = self.nbrs[v].iter().map(|&w| self.degree(w)).collect();
                ds.sort_unstable();
                ds
            })
            .collect();
        degs.sort_unstable();
        nbhd.sort();
        (degs, nbhd)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.nbrs[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Connected components as sorted vertex lists, ordered by minimum vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.nbrs[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The disjoint union, with `other`'s vertices shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &ColoredGraph) -> ColoredGraph {
        let n = self.n + other.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        let mut colors = self.colors.clone();
        colors.extend_from_slice(&other.colors);
        ColoredGraph::new(n, &edges, colors).expect("union of valid graphs is valid")
    }

    /// The image of the graph under a vertex permutation: vertex `v` of the
    /// result corresponds to vertex `perm[v]` of `self`.
    pub fn permuted(&self, perm: &[Vertex]) -> ColoredGraph {
        debug_assert_eq!(perm.len(), self.n);
        let mut inv = vec![0; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let edges: Vec<(Vertex, Vertex)> =
            self.edges.iter().map(|&(u, v)| (inv[u], inv[v])).collect();
        let colors: Vec<ColorId> = perm.iter().map(|&old| self.colors[old]).collect();
        ColoredGraph::new(self.n, &edges, colors).expect("permutation preserves validity")
    }

    /// Induced subgraph on the listed vertices (in list order).
    pub fn induced(&self, vs: &[Vertex]) -> ColoredGraph {
        let mut edges = Vec::new();
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    edges.push((i, j));
                }
            }
        }
        let colors = vs.iter().map(|&v| self.colors[v]).collect();
        ColoredGraph::new(vs.len(), &edges, colors).expect("induced subgraph is valid")
    }

    /// Serializes to the JSON wire format `{"n": .., "edges": [[u,v],..], "colors": [..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphWire {
            n: self.n,
            edges: self.edges.clone(),
            colors: self.colors.clone(),
        })
        .expect("serialization cannot fail")
    }

    /// Parses the JSON wire format, validating the graph.
    pub fn from_json(s: &str) -> Result<Self> {
        let wire: GraphWire = serde_json::from_str(s)?;
        ColoredGraph::new(wire.n, &wire.edges, wire.colors)
    }
}

/// The base-graph families used throughout: grids, bridged grids, binary
/// trees of bridged grids, perfect binary trees, complete graphs, and stars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Grid with `h` rows and `l` columns.
    Grid { h: usize, l: usize },
    /// Grid plus one bridge vertex attached to all rows of the two middle
    /// columns.
    BridgedGrid { h: usize, l: usize },
    /// Perfect binary tree of depth `d` whose nodes are bridged `h x l`
    /// grids, adjacent grids connected row-wise (last column of the parent to
    /// the first column of each child).
    TreeOfGrids { d: usize, h: usize, l: usize },
    /// Perfect binary tree with levels `0..=d`, i.e. `2^(d+1) - 1` nodes.
    PerfectBinaryTree { d: usize },
    Complete { n: usize },
    /// One universal vertex of degree `n` plus its `n` leaves.
    Star { n: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Grid { .. } => "grid",
            Family::BridgedGrid { .. } => "bridged_grid",
            Family::TreeOfGrids { .. } => "tree_of_grids",
            Family::PerfectBinaryTree { .. } => "perfect_binary_tree",
            Family::Complete { .. } => "complete",
            Family::Star { .. } => "star",
        }
    }
}

fn grid_edges(h: usize, l: usize, base: usize, edges: &mut Vec<(Vertex, Vertex)>) {
    let at = |i: usize, j: usize| base + i * l + j;
    for i in 0..h {
        for j in 0..l {
            if j + 1 < l {
                edges.push((at(i, j), at(i, j + 1)));
            }
            if i + 1 < h {
                edges.push((at(i, j), at(i + 1, j)));
            }
        }
    }
}

/// Adds the bridged-grid edges for one grid block starting at `base`; the
/// bridge vertex is `base + h*l`. Returns the number of vertices used.
fn bridged_grid_edges(h: usize, l: usize, base: usize, edges: &mut Vec<(Vertex, Vertex)>) -> usize {
    grid_edges(h, l, base, edges);
    let bridge = base + h * l;
    let left = l / 2; // columns are 1-based in the construction; 0-based here
    let at = |i: usize, j: usize| base + i * l + j;
    for i in 0..h {
        edges.push((at(i, left - 1), bridge));
        edges.push((bridge, at(i, left)));
    }
    h * l + 1
}

/// Generates a named family member. The result is monochromatic unless
/// `base_colored` is set, in which case every vertex gets a unique color,
/// ascending by vertex index.
pub fn generate(family: Family, base_colored: bool) -> Result<ColoredGraph> {
    let (n, edges) = match family {
        Family::Grid { h, l } => {
            if h < 1 || l < 1 {
                return Err(Error::FamilyParams("grid needs h, l >= 1".into()));
            }
            let mut edges = Vec::new();
            grid_edges(h, l, 0, &mut edges);
            (h * l, edges)
        }
        Family::BridgedGrid { h, l } => {
            if h < 1 || l < 2 {
                return Err(Error::FamilyParams("bridged grid needs h >= 1, l >= 2".into()));
            }
            let mut edges = Vec::new();
            let n = bridged_grid_edges(h, l, 0, &mut edges);
            (n, edges)
        }
        Family::TreeOfGrids { d, h, l } => {
            if d < 1 || h < 1 || l < 2 {
                return Err(Error::FamilyParams(
                    "tree of grids needs d >= 1, h >= 1, l >= 2".into(),
                ));
            }
            let nodes = (1usize << (d + 1)) - 1;
            let block = h * l + 1;
            let mut edges = Vec::new();
            for t in 0..nodes {
                bridged_grid_edges(h, l, t * block, &mut edges);
            }
            // Parent's last column to each child's first column, row by row.
            for t in 0..nodes {
                for c in [2 * t + 1, 2 * t + 2] {
                    if c >= nodes {
                        continue;
                    }
                    for i in 0..h {
                        let parent = t * block + i * l + (l - 1);
                        let child = c * block + i * l;
                        edges.push((parent, child));
                    }
                }
            }
            (nodes * block, edges)
        }
        Family::PerfectBinaryTree { d } => {
            let n = (1usize << (d + 1)) - 1;
            let mut edges = Vec::new();
            for v in 0..n {
                for c in [2 * v + 1, 2 * v + 2] {
                    if c < n {
                        edges.push((v, c));
                    }
                }
            }
            (n, edges)
        }
        Family::Complete { n } => {
            if n < 1 {
                return Err(Error::FamilyParams("complete graph needs n >= 1".into()));
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            (n, edges)
        }
        Family::Star { n } => {
            if n < 1 {
                return Err(Error::FamilyParams("star needs degree n >= 1".into()));
            }
            let edges: Vec<_> = (1..=n).map(|v| (0, v)).collect();
            (n + 1, edges)
        }
    };
    let colors = if base_colored {
        (0..n as ColorId).collect()
    } else {
        vec![0; n]
    };
    ColoredGraph::new(n, &edges, colors)
}

/// A path on `n` vertices (`grid(1, n)` with plain vertex numbering).
pub fn path(n: usize) -> ColoredGraph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    ColoredGraph::monochromatic(n, &edges).expect("path is valid")
}

/// A cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> ColoredGraph {
    assert!(n >= 3);
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    ColoredGraph::monochromatic(n, &edges).expect("cycle is valid")
}

/// A uniformly random monochromatic graph: each of the `n(n-1)/2` candidate
/// edges is present with probability 1/2.
pub fn random_graph<R: Rng>(n: usize, rng: &mut R) -> ColoredGraph {
    random_colored_graph(n, 1, rng)
}

/// A random graph whose colors are drawn uniformly from `0..max_colors`.
pub fn random_colored_graph<R: Rng>(n: usize, max_colors: u32, rng: &mut R) -> ColoredGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    let colors = (0..n).map(|_| rng.gen_range(0..max_colors)).collect();
    ColoredGraph::new(n, &edges, colors).expect("random graph is valid")
}

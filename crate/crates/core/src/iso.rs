//! Brute-force isomorphism testing with color and degree pruning, canonical
//! forms, and exhaustive enumeration of small graphs.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::graph::{ColorId, ColoredGraph, Vertex};
use crate::{Error, Limits, Result};

/// Searches for a color-, edge-, and non-edge-preserving bijection from `g`
/// to `h` by backtracking over color-and-degree-refined candidate sets in
/// ascending vertex order. Returns the mapping `v ↦ map[v]` if one exists.
///
/// Intended for graphs of order up to roughly 16; the search counts
/// backtracking nodes against `limits.max_nodes` and reports a budget error
/// beyond that.
pub fn find_isomorphism(
    g: &ColoredGraph,
    h: &ColoredGraph,
    limits: &Limits,
) -> Result<Option<Vec<Vertex>>> {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    // Invariant per vertex: (color, degree, sorted neighbor (color, degree) list).
    let sig = |g: &ColoredGraph, v: Vertex| {
        let mut ns: Vec<(ColorId, usize)> = g
            .neighbors(v)
            .iter()
            .map(|&w| (g.color(w), g.degree(w)))
            .collect();
        ns.sort_unstable();
        (g.color(v), g.degree(v), ns)
    };
    let gsig: Vec<_> = (0..n).map(|v| sig(g, v)).collect();
    let hsig: Vec<_> = (0..n).map(|v| sig(h, v)).collect();
    {
        let mut a = gsig.clone();
        let mut b = hsig.clone();
        a.sort();
        b.sort();
        if a != b {
            return Ok(None);
        }
    }
    let candidates: Vec<Vec<Vertex>> = (0..n)
        .map(|v| (0..n).filter(|&w| hsig[w] == gsig[v]).collect())
        .collect();

    let mut map: Vec<Option<Vertex>> = vec![None; n];
    let mut used = vec![false; n];
    let mut nodes: u64 = 0;

    fn dfs(
        g: &ColoredGraph,
        h: &ColoredGraph,
        candidates: &[Vec<Vertex>],
        map: &mut Vec<Option<Vertex>>,
        used: &mut Vec<bool>,
        v: Vertex,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<bool> {
        if v == g.order() {
            return Ok(true);
        }
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::Budget(format!(
                    "isomorphism search exceeded {max_nodes} nodes"
                )));
            }
            let ok = (0..v).all(|u| {
                let mu = map[u].unwrap();
                g.adjacent(u, v) == h.adjacent(mu, w)
            });
            if ok {
                map[v] = Some(w);
                used[w] = true;
                if dfs(g, h, candidates, map, used, v + 1, nodes, max_nodes)? {
                    return Ok(true);
                }
                map[v] = None;
                used[w] = false;
            }
        }
        Ok(false)
    }

    if dfs(
        g,
        h,
        &candidates,
        &mut map,
        &mut used,
        0,
        &mut nodes,
        limits.max_nodes,
    )? {
        Ok(Some(map.into_iter().map(|m| m.unwrap()).collect()))
    } else {
        Ok(None)
    }
}

/// Packs the upper triangle of the adjacency matrix row-major into a u64;
/// usable for graphs of order up to 11.
fn edge_mask(g: &ColoredGraph, perm: &[Vertex]) -> u64 {
    let n = g.order();
    let mut mask = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(perm[i], perm[j]) {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

/// Canonical form of a colored graph: the lexicographically smallest
/// `(colors, adjacency bits)` pair over all vertex permutations. In the
/// result, `perm[i]` is the original vertex placed at position `i`.
pub fn canonical_form(g: &ColoredGraph) -> (Vec<ColorId>, u64) {
    let n = g.order();
    let mut best: Option<(Vec<ColorId>, u64)> = None;
    for perm in permutations(n) {
        let colors: Vec<ColorId> = perm.iter().map(|&v| g.color(v)).collect();
        let key = (colors, edge_mask(g, &perm));
        if best.as_ref().map_or(true, |b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or((Vec::new(), 0))
}

fn from_mask(n: usize, mask: u64, colors: Vec<ColorId>) -> ColoredGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    ColoredGraph::new(n, &edges, colors).expect("mask graph is valid")
}

fn canonical_mask_of(n: usize, mask: u64, perms: &[Vec<usize>]) -> u64 {
    let g = from_mask(n, mask, vec![0; n]);
    perms.iter().map(|p| edge_mask(&g, p)).min().unwrap_or(0)
}

/// All monochromatic graphs on exactly `n` vertices up to isomorphism, in
/// ascending order of their canonical adjacency-matrix encoding. Supported
/// for `n <= 7`; results are cached per process.
pub fn enumerate_graphs(n: usize) -> &'static [ColoredGraph] {
    assert!(n <= 7, "exhaustive enumeration is supported up to 7 vertices");
    static CACHE: OnceLock<Vec<Vec<ColoredGraph>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let mut by_n: Vec<Vec<ColoredGraph>> = Vec::with_capacity(8);
        by_n.push(Vec::new()); // n = 0
        let mut masks_prev: Vec<u64> = vec![0]; // the single graph on 1 vertex
        by_n.push(vec![from_mask(1, 0, vec![0])]);
        for n in 2..=7usize {
            let perms = permutations(n);
            let prev_bits = (n - 1) * (n - 2) / 2;
            let mut canon: BTreeSet<u64> = BTreeSet::new();
            for &pm in &masks_prev {
                for attach in 0u64..(1 << (n - 1)) {
                    // Append vertex n-1 adjacent to the bitset `attach`.
                    // Existing pair (i,j) keeps its bit position; new pairs
                    // (i, n-1) sit at the end of row i's stretch.
                    let mut mask = 0u64;
                    let mut old_bit = 0;
                    let mut new_bit = 0;
                    for i in 0..n - 1 {
                        for j in i + 1..n {
                            if j < n - 1 {
                                if pm >> old_bit & 1 == 1 {
                                    mask |= 1 << new_bit;
                                }
                                old_bit += 1;
                            } else if attach >> i & 1 == 1 {
                                mask |= 1 << new_bit;
                            }
                            new_bit += 1;
                        }
                    }
                    debug_assert_eq!(old_bit, prev_bits);
                    canon.insert(canonical_mask_of(n, mask, &perms));
                }
            }
            masks_prev = canon.iter().copied().collect();
            by_n.push(
                masks_prev
                    .iter()
                    .map(|&m| from_mask(n, m, vec![0; n]))
                    .collect(),
            );
        }
        by_n
    });
    &all[n]
}

/// All colored graphs on exactly `n` vertices up to color-preserving
/// isomorphism, where the coloring is any surjection onto `{0..c-1}` for some
/// `c <= max_colors`. Ordered by canonical form.
pub fn enumerate_colored_graphs(n: usize, max_colors: u32) -> Vec<ColoredGraph> {
    assert!(n <= 5);
    let perms = permutations(n);
    let bits = n * (n - 1) / 2;
    let mut seen: BTreeSet<(Vec<ColorId>, u64)> = BTreeSet::new();
    let mut colorings: Vec<Vec<ColorId>> = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        let used: BTreeSet<u32> = cur.iter().copied().collect();
        let c = *used.iter().max().unwrap() + 1;
        if used.len() as u32 == c && c <= max_colors {
            colorings.push(cur.clone());
        }
        // next tuple over {0..max_colors-1}^n
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            cur[pos] += 1;
            if cur[pos] < max_colors {
                break;
            }
            cur[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    for mask in 0u64..(1 << bits) {
        for coloring in &colorings {
            let g = from_mask(n, mask, coloring.clone());
            let canon = perms
                .iter()
                .map(|p| {
                    let colors: Vec<ColorId> = p.iter().map(|&v| g.color(v)).collect();
                    (colors, edge_mask(&g, p))
                })
                .min()
                .unwrap();
            seen.insert(canon);
        }
    }
    seen.into_iter()
        .map(|(colors, mask)| from_mask(n, mask, colors))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, generate, random_graph, Family};
    use rand::SeedableRng;

    #[test]
    fn iso_identity_and_permuted() {
        let g = generate(Family::Grid { h: 2, l: 3 }, false).unwrap();
        let id = find_isomorphism(&g, &g, &Limits::default()).unwrap().unwrap();
        assert_eq!(id, (0..6).collect::<Vec<_>>());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 1..8 {
            let g = random_graph(n, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rand::Rng::gen_range(&mut rng, 0..=i);
                perm.swap(i, j);
            }
            let h = g.permuted(&perm);
            let m = find_isomorphism(&g, &h, &Limits::default()).unwrap();
            let m = m.expect("permuted copy must be isomorphic");
            for u in 0..n {
                for v in 0..n {
                    assert_eq!(g.adjacent(u, v), h.adjacent(m[u], m[v]));
                }
                assert_eq!(g.color(u), h.color(m[u]));
            }
        }
    }

    #[test]
    fn iso_negative() {
        let c6 = cycle(6);
        let c3c3 = cycle(3).disjoint_union(&cycle(3));
        assert!(find_isomorphism(&c6, &c3c3, &Limits::default())
            .unwrap()
            .is_none());
        // colors matter
        let a = generate(Family::Star { n: 2 }, true).unwrap();
        let b = generate(Family::Star { n: 2 }, false).unwrap();
        assert!(find_isomorphism(&a, &b, &Limits::default()).unwrap().is_none());
    }

    #[test]
    fn budget_error() {
        let g = generate(Family::Complete { n: 9 }, false).unwrap();
        let tight = Limits {
            max_nodes: 5,
            ..Default::default()
        };
        assert!(matches!(
            find_isomorphism(&g, &g, &tight),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn enumeration_counts() {
        // Known counts of graphs up to isomorphism.
        assert_eq!(enumerate_graphs(1).len(), 1);
        assert_eq!(enumerate_graphs(2).len(), 2);
        assert_eq!(enumerate_graphs(3).len(), 4);
        assert_eq!(enumerate_graphs(4).len(), 11);
        assert_eq!(enumerate_graphs(5).len(), 34);
        assert_eq!(enumerate_graphs(6).len(), 156);
    }

    #[test]
    fn enumeration_is_pairwise_noniso() {
        for g in enumerate_graphs(4) {
            for h in enumerate_graphs(4) {
                if g as *const _ != h as *const _ {
                    assert!(find_isomorphism(g, h, &Limits::default()).unwrap().is_none());
                }
            }
        }
    }

    #[test]
    fn colored_enumeration_small() {
        // 1 vertex: only the single graph, 1 color.
        assert_eq!(enumerate_colored_graphs(1, 2).len(), 1);
        // 2 vertices, <=2 colors: edge/non-edge x {mono, 0-1, 1-0 (iso to 0-1
        // only when swapping is color-preserving, which it is not)}.
        // Non-edge: colors (0,0), (0,1) [=(1,0) up to swap] -> 2.
        // Edge: same -> 2.
        assert_eq!(enumerate_colored_graphs(2, 2).len(), 4);
    }
}

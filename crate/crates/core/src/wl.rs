//! Weisfeiler-Leman style refinements: classical `k`-WL, the oblivious
//! `k`-OWL, and the two-parameter oblivious refinement whose non-reusable
//! positions are never varied once assigned.
//!
//! All variants refine a joint coloring over one or two graphs. After each
//! round the nested-multiset color names are renumbered into dense integers
//! by sorting signatures `(previous color, per-position multisets)`, which
//! keeps names small and preserves both the color order and the refinement
//! property.

use crate::assign::{atomic_type, MixedRadix, PartialAssignment};
use crate::graph::ColoredGraph;
use crate::{Error, Limits, Result};

/// A normalized coloring of an assignment domain over one or two graphs.
///
/// Colors are dense integers whose order agrees with the order of the
/// underlying nested-multiset colors. `offsets[s]` is the first index of side
/// `s`; side domains are mixed-radix encoded.
#[derive(Debug, Clone)]
pub struct ColorTable {
    pub k1: usize,
    pub k2: usize,
    pub colors: Vec<u32>,
    sides: Vec<SideInfo>,
}

#[derive(Debug, Clone)]
struct SideInfo {
    n: usize,
    offset: usize,
    indexer: MixedRadix,
}

impl ColorTable {
    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    pub fn side_order(&self, side: usize) -> usize {
        self.sides[side].n
    }

    pub fn side_domain(&self, side: usize) -> std::ops::Range<usize> {
        let s = &self.sides[side];
        s.offset..s.offset + s.indexer.domain_size()
    }

    /// Color of an assignment on the given side.
    pub fn color_of(&self, side: usize, a: &PartialAssignment) -> u32 {
        let s = &self.sides[side];
        self.colors[s.offset + s.indexer.encode(a)]
    }

    pub fn class_count(&self) -> usize {
        self.colors.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// True when some color class has different sizes on the two sides.
    pub fn histogram_differs(&self) -> bool {
        assert_eq!(self.sides.len(), 2);
        let classes = self.class_count();
        let mut counts = vec![[0usize; 2]; classes];
        for side in 0..2 {
            for i in self.side_domain(side) {
                counts[self.colors[i] as usize][side] += 1;
            }
        }
        counts.iter().any(|c| c[0] != c[1])
    }
}

/// A finished refinement run: the stable (or round-budgeted) table, the
/// number of rounds until stabilization, and per-round class counts starting
/// with round 0.
#[derive(Debug, Clone)]
pub struct RefinementResult {
    pub table: ColorTable,
    pub rounds: usize,
    pub class_counts: Vec<usize>,
}

impl RefinementResult {
    /// Empty-assignment color comparison across the two sides of a joint run.
    pub fn distinguishes_empty(&self) -> bool {
        assert_eq!(self.table.side_count(), 2);
        let e0 = PartialAssignment::empty(self.table.k1, self.table.k2);
        self.table.color_of(0, &e0) != self.table.color_of(1, &e0)
    }
}

/// Which refinement rule drives a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// Classical `k`-WL on total tuples: one multiset of replacement-color
    /// tuples for `k >= 2`, the neighbor-multiset rule for `k = 1`.
    WlClassic,
    /// Oblivious `k`-OWL on total tuples: one multiset per position.
    OwlClassic,
    /// `(k1,k2)`-dimensional oblivious refinement on partial assignments:
    /// one multiset per reusable position, one per unassigned non-reusable
    /// position.
    OwlRestricted,
}

struct RefineDomain<'a> {
    graphs: Vec<&'a ColoredGraph>,
    k1: usize,
    k2: usize,
    rule: Rule,
    sides: Vec<SideInfo>,
    total: usize,
}

impl<'a> RefineDomain<'a> {
    fn new(
        graphs: Vec<&'a ColoredGraph>,
        k1: usize,
        k2: usize,
        rule: Rule,
        limits: &Limits,
    ) -> Result<Self> {
        let digits = k1 + k2;
        let mut sides = Vec::new();
        let mut offset = 0;
        for g in &graphs {
            let indexer = match rule {
                Rule::WlClassic | Rule::OwlClassic => MixedRadix::total(digits, g.order()),
                Rule::OwlRestricted => MixedRadix::with_bot(digits, g.order()),
            };
            let size = indexer.domain_size();
            sides.push(SideInfo {
                n: g.order(),
                offset,
                indexer,
            });
            offset += size;
        }
        limits.check_cells(offset, "refinement domain")?;
        Ok(RefineDomain {
            graphs,
            k1,
            k2,
            rule,
            sides,
            total: offset,
        })
    }

    fn initial_colors(&self) -> Vec<u32> {
        let mut keys: Vec<(crate::assign::AtomicType, usize)> = Vec::with_capacity(self.total);
        for (s, info) in self.sides.iter().enumerate() {
            let g = self.graphs[s];
            for local in 0..info.indexer.domain_size() {
                let a = info.indexer.decode(local, self.k1, self.k2);
                keys.push((atomic_type(g, &a), info.offset + local));
            }
        }
        dense_rank(keys, self.total)
    }

    /// One refinement round; returns the renumbered colors.
    fn round(&self, prev: &[u32]) -> Vec<u32> {
        let mut keys: Vec<(Vec<u32>, usize)> = Vec::with_capacity(self.total);
        for (s, info) in self.sides.iter().enumerate() {
            let g = self.graphs[s];
            let n = g.order();
            let idxr = &info.indexer;
            let digits = idxr.digits;
            for local in 0..idxr.domain_size() {
                let global = info.offset + local;
                let mut sig: Vec<u32> = Vec::with_capacity(1 + digits * n);
                sig.push(prev[global]);
                match self.rule {
                    Rule::WlClassic => {
                        if digits == 1 {
                            // neighbor-multiset rule
                            let v = idxr.digit(local, 0);
                            let mut ms: Vec<u32> = g
                                .neighbors(v)
                                .iter()
                                .map(|&u| prev[info.offset + u])
                                .collect();
                            ms.sort_unstable();
                            sig.extend_from_slice(&ms);
                        } else {
                            // multiset over u of the tuple of replacement colors
                            let mut tuples: Vec<Vec<u32>> = (0..n)
                                .map(|u| {
                                    (0..digits)
                                        .map(|pos| {
                                            prev[info.offset + idxr.replace(local, pos, u)]
                                        })
                                        .collect()
                                })
                                .collect();
                            tuples.sort_unstable();
                            for t in tuples {
                                sig.extend_from_slice(&t);
                            }
                        }
                    }
                    Rule::OwlClassic => {
                        for pos in 0..digits {
                            let mut ms: Vec<u32> = (0..n)
                                .map(|u| prev[info.offset + idxr.replace(local, pos, u)])
                                .collect();
                            ms.sort_unstable();
                            sig.extend_from_slice(&ms);
                        }
                    }
                    Rule::OwlRestricted => {
                        let bot = idxr.bot_symbol().expect("restricted domain has ⊥");
                        for pos in 0..self.k1 {
                            let mut ms: Vec<u32> = (0..n)
                                .map(|u| prev[info.offset + idxr.replace(local, pos, u)])
                                .collect();
                            ms.sort_unstable();
                            sig.extend_from_slice(&ms);
                        }
                        for j in 0..self.k2 {
                            let pos = self.k1 + j;
                            if idxr.digit(local, pos) != bot {
                                continue; // assigned non-reusable positions stay fixed
                            }
                            let mut ms: Vec<u32> = (0..n)
                                .map(|u| prev[info.offset + idxr.replace(local, pos, u)])
                                .collect();
                            ms.sort_unstable();
                            sig.extend_from_slice(&ms);
                        }
                    }
                }
                keys.push((sig, global));
            }
        }
        dense_rank(keys, self.total)
    }

    fn run(&self, rounds: Option<usize>) -> RefinementResult {
        let mut colors = self.initial_colors();
        let mut class_counts = vec![count_classes(&colors)];
        let mut r = 0;
        let stable_rounds;
        loop {
            if let Some(budget) = rounds {
                if r >= budget {
                    stable_rounds = r;
                    break;
                }
            }
            let next = self.round(&colors);
            // The signature starts with the previous color, so the new
            // partition refines the old one; equality of class counts then
            // means the partition is unchanged.
            let same = count_classes(&next) == count_classes(&colors);
            if same {
                stable_rounds = r;
                break;
            }
            colors = next;
            class_counts.push(count_classes(&colors));
            r += 1;
        }
        RefinementResult {
            table: ColorTable {
                k1: self.k1,
                k2: self.k2,
                colors,
                sides: self.sides.clone(),
            },
            rounds: stable_rounds,
            class_counts,
        }
    }
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Sorts keyed items and assigns dense ranks in key order.
fn dense_rank<K: Ord>(mut keys: Vec<(K, usize)>, total: usize) -> Vec<u32> {
    keys.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut colors = vec![0u32; total];
    let mut rank = 0u32;
    for i in 0..keys.len() {
        if i > 0 && keys[i].0 != keys[i - 1].0 {
            rank += 1;
        }
        colors[keys[i].1] = rank;
    }
    colors
}

/// Classical `k`-WL on a single graph.
pub fn wl_classic(
    g: &ColoredGraph,
    k: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<RefinementResult> {
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(RefineDomain::new(vec![g], k, 0, Rule::WlClassic, limits)?.run(rounds))
}

/// Classical `k`-WL run jointly on two graphs with one shared normalization.
pub fn wl_classic_joint(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<RefinementResult> {
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(RefineDomain::new(vec![g, h], k, 0, Rule::WlClassic, limits)?.run(rounds))
}

/// Oblivious `k`-OWL on a single graph.
pub fn owl_classic(
    g: &ColoredGraph,
    k: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<RefinementResult> {
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(RefineDomain::new(vec![g], k, 0, Rule::OwlClassic, limits)?.run(rounds))
}

/// Oblivious `k`-OWL run jointly on two graphs.
pub fn owl_classic_joint(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<RefinementResult> {
    if k == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(RefineDomain::new(vec![g, h], k, 0, Rule::OwlClassic, limits)?.run(rounds))
}

/// The `(k1,k2)`-dimensional oblivious refinement over assignments into
/// `V ∪ {⊥}`, run on one graph or jointly on two.
pub fn owl_restricted(
    g: &ColoredGraph,
    h: Option<&ColoredGraph>,
    k1: usize,
    k2: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<RefinementResult> {
    if k1 + k2 == 0 {
        return Err(Error::NoVariables);
    }
    let graphs = match h {
        Some(h) => vec![g, h],
        None => vec![g],
    };
    Ok(RefineDomain::new(graphs, k1, k2, Rule::OwlRestricted, limits)?.run(rounds))
}

/// Decides whether the joint `(k1,k2)` refinement assigns `ᾱ` and `β̄` the
/// same color after `rounds` rounds (`None` = at stabilization).
pub fn equivalent_naive(
    g: &ColoredGraph,
    alpha: &PartialAssignment,
    h: &ColoredGraph,
    beta: &PartialAssignment,
    k1: usize,
    k2: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<bool> {
    if alpha.dom_mask() != beta.dom_mask() {
        return Err(Error::ConfigMismatch);
    }
    alpha.validate_on(g)?;
    beta.validate_on(h)?;
    let run = owl_restricted(g, Some(h), k1, k2, rounds, limits)?;
    Ok(run.table.color_of(0, alpha) == run.table.color_of(1, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::Var;
    use crate::graph::{cycle, generate, path, random_graph, Family};
    use rand::SeedableRng;

    const L: Limits = Limits {
        max_cells: 50_000_000,
        max_nodes: 200_000_000,
    };

    #[test]
    fn one_wl_misses_c6_vs_two_triangles() {
        let c6 = cycle(6);
        let c3c3 = cycle(3).disjoint_union(&cycle(3));
        let joint = wl_classic_joint(&c6, &c3c3, 1, None, &L).unwrap();
        assert!(!joint.table.histogram_differs());
        // 2-WL separates them
        let joint2 = wl_classic_joint(&c6, &c3c3, 2, None, &L).unwrap();
        assert!(joint2.table.histogram_differs());
    }

    #[test]
    fn round_zero_is_atomic_partition() {
        let g = generate(Family::Star { n: 3 }, false).unwrap();
        let r = wl_classic(&g, 2, Some(0), &L).unwrap();
        // atomic types of pairs over a monochromatic star: (v,v), edges,
        // non-edges -> 3 classes
        assert_eq!(r.table.class_count(), 3);
    }

    #[test]
    fn vertex_transitive_single_class() {
        let c5 = cycle(5);
        let r = wl_classic(&c5, 1, None, &L).unwrap();
        assert_eq!(r.table.class_count(), 1);
    }

    #[test]
    fn owl_edgeless_partitions_by_color() {
        let g = ColoredGraph::new(3, &[], vec![0, 0, 1]).unwrap();
        let r = owl_restricted(&g, None, 1, 0, None, &L).unwrap();
        // 1-dimensional domain over V ∪ {⊥}: classes {⊥}, color-0, color-1
        assert_eq!(r.table.class_count(), 3);
    }

    #[test]
    fn joint_run_on_identical_graphs_is_symmetric() {
        let g = generate(Family::Grid { h: 2, l: 2 }, false).unwrap();
        let run = owl_restricted(&g, Some(&g), 1, 1, None, &L).unwrap();
        let m = MixedRadix::with_bot(2, g.order());
        for idx in 0..m.domain_size() {
            let a = m.decode(idx, 1, 1);
            assert_eq!(run.table.color_of(0, &a), run.table.color_of(1, &a));
        }
    }

    #[test]
    fn equivalent_naive_examples() {
        let g = generate(Family::Grid { h: 2, l: 2 }, false).unwrap();
        let e = PartialAssignment::empty(1, 1);
        assert!(equivalent_naive(&g, &e, &g, &e, 1, 1, None, &L).unwrap());

        let star3 = generate(Family::Star { n: 3 }, false).unwrap();
        let p4 = path(4);
        let e02 = PartialAssignment::empty(0, 2);
        assert!(!equivalent_naive(&star3, &e02, &p4, &e02, 0, 2, None, &L).unwrap());

        let c6 = cycle(6);
        let c3c3 = cycle(3).disjoint_union(&cycle(3));
        let e11 = PartialAssignment::empty(1, 1);
        assert!(equivalent_naive(&c6, &e11, &c3c3, &e11, 1, 1, None, &L).unwrap());

        // mismatched configuration domains are rejected
        let a = PartialAssignment::from_pairs(1, 1, &[(Var::X(1), 0)]);
        assert!(matches!(
            equivalent_naive(&c6, &a, &c3c3, &e11, 1, 1, None, &L),
            Err(Error::ConfigMismatch)
        ));
    }

    #[test]
    fn monotone_refinement_and_iteration_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = 1 + rand::Rng::gen_range(&mut rng, 0..6usize);
            let g = random_graph(n, &mut rng);
            let r = owl_restricted(&g, None, 1, 1, None, &L).unwrap();
            for w in r.class_counts.windows(2) {
                assert!(w[0] <= w[1]);
            }
            assert!(r.rounds <= 2 * n - 1, "rounds {} on n={}", r.rounds, n);
        }
    }

    /// (k1,k2) = (k,0) agrees with classical k-OWL on total assignments.
    #[test]
    fn restricted_specializes_to_owl_on_totals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let n = 2 + rand::Rng::gen_range(&mut rng, 0..4usize);
            let g = random_graph(n, &mut rng);
            let k = 2;
            let owl = owl_classic(&g, k, None, &L).unwrap();
            let res = owl_restricted(&g, None, k, 0, None, &L).unwrap();
            // Compare induced partitions over total tuples.
            let m_tot = MixedRadix::total(k, n);
            let mut seen: std::collections::HashMap<(u32, u32), ()> = Default::default();
            let mut classes_match = true;
            let mut by_owl: std::collections::HashMap<u32, u32> = Default::default();
            for idx in 0..m_tot.domain_size() {
                let a = {
                    let mut a = PartialAssignment::empty(k, 0);
                    for pos in 0..k {
                        a = a.with(Var::X(pos + 1), m_tot.digit(idx, pos));
                    }
                    a
                };
                let co = owl.table.color_of(0, &a);
                let cr = res.table.color_of(0, &a);
                match by_owl.get(&co) {
                    None => {
                        by_owl.insert(co, cr);
                    }
                    Some(&prev) => {
                        if prev != cr {
                            classes_match = false;
                        }
                    }
                }
                seen.insert((co, cr), ());
            }
            // injective both ways on realized pairs
            let owl_classes: std::collections::HashSet<u32> =
                seen.keys().map(|&(a, _)| a).collect();
            let res_classes: std::collections::HashSet<u32> =
                seen.keys().map(|&(_, b)| b).collect();
            assert!(classes_match && owl_classes.len() == res_classes.len());
        }
    }

    /// At stability, the empty-assignment criterion and the class-size
    /// histogram criterion agree.
    #[test]
    fn distinguishing_criteria_agree_at_stability() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = 1 + rand::Rng::gen_range(&mut rng, 0..5usize);
            let m = 1 + rand::Rng::gen_range(&mut rng, 0..5usize);
            let g = random_graph(n, &mut rng);
            let h = random_graph(m, &mut rng);
            for (k1, k2) in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)] {
                let run = owl_restricted(&g, Some(&h), k1, k2, None, &L).unwrap();
                assert_eq!(
                    run.distinguishes_empty(),
                    run.table.histogram_differs(),
                    "n={n} m={m} k=({k1},{k2})"
                );
            }
        }
    }

    /// Distinguishing power is monotone in each parameter.
    #[test]
    fn parameter_monotonicity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let n = 1 + rand::Rng::gen_range(&mut rng, 0..5usize);
            let g = random_graph(n, &mut rng);
            let h = random_graph(n, &mut rng);
            for (k1, k2) in [(1, 0), (0, 1), (1, 1), (0, 2)] {
                let e = PartialAssignment::empty(k1, k2);
                if !equivalent_naive(&g, &e, &h, &e, k1, k2, None, &L).unwrap() {
                    let e_up1 = PartialAssignment::empty(k1, k2 + 1);
                    assert!(!equivalent_naive(&g, &e_up1, &h, &e_up1, k1, k2 + 1, None, &L)
                        .unwrap());
                    let e_up2 = PartialAssignment::empty(k1 + 1, k2);
                    assert!(!equivalent_naive(&g, &e_up2, &h, &e_up2, k1 + 1, k2, None, &L)
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = random_graph(6, &mut rand_chacha::ChaCha8Rng::seed_from_u64(0));
        let tiny = Limits {
            max_cells: 10,
            max_nodes: 1000,
        };
        assert!(matches!(
            owl_restricted(&g, None, 2, 1, None, &tiny),
            Err(Error::Budget(_))
        ));
    }
}

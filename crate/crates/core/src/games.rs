//! Exact solvers for the bijective pebble game with non-reusable pebbles and
//! for the cops-and-robber game with place-once cops.
//!
//! Both games are solved by backward induction over the full configuration
//! space. Duplicator's bijection step is never enumerated: for a pebble `z`
//! the bipartite relation of surviving placements is built and Duplicator is
//! viable exactly when it contains a perfect matching. Unbounded games are
//! the limits of the monotone round-bounded win sets, which stabilize over
//! the finite configuration space.

use crate::assign::{MixedRadix, PartialAssignment, Var};
use crate::cfi::BaseGraph;
use crate::graph::{ColoredGraph, Vertex};
use crate::{Error, Limits, Result};

/// A pebble-game position: one partial assignment per graph, with equal
/// domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpConfiguration {
    pub alpha: PartialAssignment,
    pub beta: PartialAssignment,
}

impl BpConfiguration {
    pub fn empty(k1: usize, k2: usize) -> Self {
        BpConfiguration {
            alpha: PartialAssignment::empty(k1, k2),
            beta: PartialAssignment::empty(k1, k2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpWinner {
    Spoiler,
    Duplicator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrWinner {
    Cops,
    Robber,
}

/// Whether the pebbled vertices induce a partial isomorphism: the map
/// `α(z) ↦ β(z)` is well-defined, injective, and preserves adjacency,
/// non-adjacency, and colors.
pub fn partial_iso(g: &ColoredGraph, h: &ColoredGraph, c: &BpConfiguration) -> Result<bool> {
    if c.alpha.dom_mask() != c.beta.dom_mask() {
        return Err(Error::ConfigMismatch);
    }
    c.alpha.validate_on(g)?;
    c.beta.validate_on(h)?;
    let k = c.alpha.len();
    for s in 0..k {
        let (Some(u), Some(v)) = (c.alpha.slot_value(s), c.beta.slot_value(s)) else {
            continue;
        };
        if g.color(u) != h.color(v) {
            return Ok(false);
        }
        for t in 0..s {
            let (Some(u2), Some(v2)) = (c.alpha.slot_value(t), c.beta.slot_value(t)) else {
                continue;
            };
            if (u == u2) != (v == v2) || g.adjacent(u, u2) != h.adjacent(v, v2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Partitions the edges of `g` with respect to the cop placement `gamma`:
/// two edges lie in one class when a path joins them whose interior vertices
/// avoid the image of `gamma` (the endpoints of the two edges themselves may
/// be occupied). Classes come out sorted by their smallest edge.
pub fn edge_components(
    g: &ColoredGraph,
    gamma: &PartialAssignment,
) -> Vec<Vec<(Vertex, Vertex)>> {
    let occupied = gamma.image();
    let edges = g.edges();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    // Every unoccupied vertex merges all edges incident to it.
    for v in 0..g.order() {
        if occupied.contains(&v) {
            continue;
        }
        let incident: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
            .collect();
        for w in incident.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<(Vertex, Vertex)>> = Default::default();
    for i in 0..edges.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(edges[i]);
    }
    let mut out: Vec<Vec<(Vertex, Vertex)>> = classes.into_values().collect();
    out.sort();
    out
}

/// Perfect matching test on a bipartite relation given as per-left-vertex
/// bitmasks over at most 64 right vertices (augmenting paths, ascending
/// vertex order).
fn has_perfect_matching(rows: &[u64], n_right: usize) -> bool {
    if rows.len() != n_right {
        return false;
    }
    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    fn augment(
        v: usize,
        rows: &[u64],
        match_right: &mut Vec<Option<usize>>,
        visited: &mut u64,
    ) -> bool {
        let mut cand = rows[v] & !*visited;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            *visited |= 1 << w;
            match match_right[w] {
                None => {
                    match_right[w] = Some(v);
                    return true;
                }
                Some(prev) => {
                    if augment(prev, rows, match_right, visited) {
                        match_right[w] = Some(v);
                        return true;
                    }
                }
            }
        }
        false
    }
    for v in 0..rows.len() {
        let mut visited = 0u64;
        if !augment(v, rows, &mut match_right, &mut visited) {
            return false;
        }
    }
    true
}

struct BpSolver<'a> {
    g: &'a ColoredGraph,
    h: &'a ColoredGraph,
    k1: usize,
    k2: usize,
    ig: MixedRadix,
    ih: MixedRadix,
    size_h: usize,
    /// Per configuration index: assigned-slot mask when the two patterns
    /// agree and the pebbles induce a partial isomorphism; `None` encodes
    /// "invalid or immediately lost".
    piso: Vec<Option<u32>>,
}

impl<'a> BpSolver<'a> {
    fn new(
        g: &'a ColoredGraph,
        h: &'a ColoredGraph,
        k1: usize,
        k2: usize,
        limits: &Limits,
    ) -> Result<Self> {
        if k1 + k2 == 0 {
            return Err(Error::NoVariables);
        }
        let k = k1 + k2;
        let ig = MixedRadix::with_bot(k, g.order());
        let ih = MixedRadix::with_bot(k, h.order());
        let total = ig.domain_size() * ih.domain_size();
        limits.check_cells(total, "pebble-game configuration space")?;

        let pattern = |idx: &MixedRadix, i: usize| -> u32 {
            let bot = idx.bot_symbol().unwrap();
            let mut m = 0;
            for s in 0..k {
                if idx.digit(i, s) != bot {
                    m |= 1 << s;
                }
            }
            m
        };
        let size_h = ih.domain_size();
        let mut piso = vec![None; total];
        for a in 0..ig.domain_size() {
            let pa = pattern(&ig, a);
            let alpha = ig.decode(a, k1, k2);
            for b in 0..size_h {
                if pattern(&ih, b) != pa {
                    continue;
                }
                let beta = ih.decode(b, k1, k2);
                let ok = partial_iso(
                    g,
                    h,
                    &BpConfiguration {
                        alpha: alpha.clone(),
                        beta,
                    },
                )?;
                if ok {
                    piso[a * size_h + b] = Some(pa);
                }
            }
        }
        Ok(BpSolver {
            g,
            h,
            k1,
            k2,
            ig,
            ih,
            size_h,
            piso,
        })
    }

    fn encode(&self, c: &BpConfiguration) -> usize {
        self.ig.encode(&c.alpha) * self.size_h + self.ih.encode(&c.beta)
    }

    /// Duplicator survives one more round from `ci` (already a partial iso)
    /// when for every pickable pebble the surviving-placement relation has a
    /// perfect matching. With no pickable pebble the game halts and the
    /// winning condition is checked directly.
    fn survives(&self, ci: usize, pat: u32, prev: &[bool]) -> bool {
        let n = self.g.order();
        let m = self.h.order();
        let a = ci / self.size_h;
        let b = ci % self.size_h;
        let k = self.k1 + self.k2;
        for slot in 0..k {
            let pickable = slot < self.k1 || pat & (1 << slot) == 0;
            if !pickable {
                continue;
            }
            if n != m {
                return false; // Duplicator cannot produce a bijection
            }
            let mut rows = vec![0u64; n];
            for (v, row) in rows.iter_mut().enumerate() {
                let a2 = self.ig.replace(a, slot, v) * self.size_h;
                for w in 0..m {
                    let b2 = self.ih.replace(b, slot, w);
                    if prev[a2 + b2] {
                        *row |= 1 << w;
                    }
                }
            }
            if !has_perfect_matching(&rows, m) {
                return false;
            }
        }
        true
    }

    fn round(&self, prev: &[bool], cur: &mut [bool]) {
        for ci in 0..self.piso.len() {
            cur[ci] = match self.piso[ci] {
                Some(pat) => prev[ci] && self.survives(ci, pat, prev),
                None => false,
            };
        }
    }
}

/// Round-indexed Duplicator-win tables for all configurations.
pub struct BpAnalysis {
    k1: usize,
    k2: usize,
    ig: MixedRadix,
    ih: MixedRadix,
    size_h: usize,
    /// `wins_by_round[r][ci]`: Duplicator survives `r` rounds from `ci`.
    pub wins_by_round: Vec<Vec<bool>>,
    /// Index of the first round whose win set equals the unbounded one, when
    /// the run was continued to stabilization.
    pub stable_round: Option<usize>,
}

impl BpAnalysis {
    /// Duplicator-win verdict for a configuration at a round budget
    /// (`None` = unbounded; requires a stabilized analysis).
    pub fn wins(&self, rounds: Option<usize>, c: &BpConfiguration) -> bool {
        let ci = self.ig.encode(&c.alpha) * self.size_h + self.ih.encode(&c.beta);
        match rounds {
            Some(r) => self.wins_by_round[r.min(self.wins_by_round.len() - 1)][ci],
            None => {
                let s = self.stable_round.expect("analysis was round-bounded");
                self.wins_by_round[s][ci]
            }
        }
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }
}

/// Computes Duplicator-win sets for every configuration, round by round.
/// With `max_rounds = None` the iteration continues until the win sets
/// stabilize, which answers the unbounded game.
pub fn bp_analyze(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k1: usize,
    k2: usize,
    max_rounds: Option<usize>,
    limits: &Limits,
) -> Result<BpAnalysis> {
    let solver = BpSolver::new(g, h, k1, k2, limits)?;
    let total = solver.piso.len();
    let win0: Vec<bool> = solver.piso.iter().map(|p| p.is_some()).collect();
    let mut rounds = vec![win0];
    let stable_round;
    loop {
        if let Some(mr) = max_rounds {
            if rounds.len() > mr {
                stable_round = None;
                break;
            }
        }
        let prev = rounds.last().unwrap();
        let mut cur = vec![false; total];
        solver.round(prev, &mut cur);
        if &cur == prev {
            stable_round = Some(rounds.len() - 1);
            break;
        }
        rounds.push(cur);
    }
    Ok(BpAnalysis {
        k1,
        k2,
        ig: solver.ig,
        ih: solver.ih,
        size_h: solver.size_h,
        wins_by_round: rounds,
        stable_round,
    })
}

/// Winner of the bijective `(k1,k2)`-pebble game from `init` under optimal
/// play, with `rounds = None` meaning the unbounded game.
pub fn bp_solve(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k1: usize,
    k2: usize,
    rounds: Option<usize>,
    init: &BpConfiguration,
    limits: &Limits,
) -> Result<BpWinner> {
    if init.alpha.dom_mask() != init.beta.dom_mask() {
        return Err(Error::ConfigMismatch);
    }
    init.alpha.validate_on(g)?;
    init.beta.validate_on(h)?;
    let solver = BpSolver::new(g, h, k1, k2, limits)?;
    let target = solver.encode(init);
    let total = solver.piso.len();
    let mut prev: Vec<bool> = solver.piso.iter().map(|p| p.is_some()).collect();
    if !prev[target] {
        return Ok(BpWinner::Spoiler);
    }
    let mut cur = vec![false; total];
    let mut r = 0;
    loop {
        if let Some(budget) = rounds {
            if r >= budget {
                return Ok(BpWinner::Duplicator);
            }
        }
        solver.round(&prev, &mut cur);
        // Win sets only shrink, so once the target drops it stays out.
        if !cur[target] {
            return Ok(BpWinner::Spoiler);
        }
        if cur == prev {
            return Ok(BpWinner::Duplicator);
        }
        std::mem::swap(&mut prev, &mut cur);
        r += 1;
    }
}

/// When Spoiler wins, a pebble pair whose bijection relation admits no
/// perfect matching at the decisive round; `None` when Duplicator wins.
pub fn bp_first_move(
    g: &ColoredGraph,
    h: &ColoredGraph,
    k1: usize,
    k2: usize,
    rounds: Option<usize>,
    init: &BpConfiguration,
    limits: &Limits,
) -> Result<Option<Var>> {
    let analysis = bp_analyze(g, h, k1, k2, rounds, limits)?;
    if analysis.wins(rounds, init) {
        return Ok(None);
    }
    let solver = BpSolver::new(g, h, k1, k2, limits)?;
    let ci = solver.encode(init);
    let Some(pat) = solver.piso[ci] else {
        // Lost before any move; report the first pickable pebble.
        return Ok(Some(Var::from_slot(0, k1)));
    };
    let last = match rounds {
        Some(r) => r.min(analysis.wins_by_round.len() - 1),
        None => analysis.stable_round.unwrap(),
    };
    let prev = &analysis.wins_by_round[last.saturating_sub(1)];
    let (a, b) = (ci / solver.size_h, ci % solver.size_h);
    for slot in 0..k1 + k2 {
        let pickable = slot < k1 || pat & (1 << slot) == 0;
        if !pickable {
            continue;
        }
        if g.order() != h.order() {
            return Ok(Some(Var::from_slot(slot, k1)));
        }
        let n = g.order();
        let mut rows = vec![0u64; n];
        for (v, row) in rows.iter_mut().enumerate() {
            let a2 = solver.ig.replace(a, slot, v) * solver.size_h;
            for w in 0..n {
                if prev[a2 + solver.ih.replace(b, slot, w)] {
                    *row |= 1 << w;
                }
            }
        }
        if !has_perfect_matching(&rows, n) {
            return Ok(Some(Var::from_slot(slot, k1)));
        }
    }
    // Spoiler wins only later in the game; any pickable pebble is consistent.
    Ok(Some(Var::from_slot(0, k1)))
}

struct CrSolver<'a> {
    base: &'a ColoredGraph,
    k1: usize,
    k2: usize,
    idx: MixedRadix,
    edges: Vec<(Vertex, Vertex)>,
    /// Edge components keyed by the occupied-vertex bitmask.
    comp_cache: std::cell::RefCell<std::collections::HashMap<u64, Vec<u32>>>,
}

impl<'a> CrSolver<'a> {
    fn new(base: &'a BaseGraph, k1: usize, k2: usize, limits: &Limits) -> Result<Self> {
        if k1 + k2 == 0 {
            return Err(Error::NoVariables);
        }
        let g = base.graph();
        let idx = MixedRadix::with_bot(k1 + k2, g.order());
        limits.check_cells(
            idx.domain_size() * g.edge_count().max(1),
            "cops-and-robber position space",
        )?;
        Ok(CrSolver {
            base: g,
            k1,
            k2,
            idx,
            edges: g.edges().to_vec(),
            comp_cache: Default::default(),
        })
    }

    fn occupied_mask(&self, gi: usize) -> u64 {
        let bot = self.idx.bot_symbol().unwrap();
        let mut m = 0u64;
        for s in 0..self.k1 + self.k2 {
            let d = self.idx.digit(gi, s);
            if d != bot {
                m |= 1 << d;
            }
        }
        m
    }

    /// Component id per edge for a given occupied-vertex set.
    fn components(&self, occ: u64) -> Vec<u32> {
        if let Some(c) = self.comp_cache.borrow().get(&occ) {
            return c.clone();
        }
        let ne = self.edges.len();
        let mut parent: Vec<usize> = (0..ne).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for v in 0..self.base.order() {
            if occ >> v & 1 == 1 {
                continue;
            }
            let mut first: Option<usize> = None;
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                if a == v || b == v {
                    match first {
                        None => first = Some(i),
                        Some(f) => {
                            let (x, y) = (find(&mut parent, f), find(&mut parent, i));
                            parent[x] = y;
                        }
                    }
                }
            }
        }
        let ids: Vec<u32> = (0..ne).map(|i| find(&mut parent, i) as u32).collect();
        self.comp_cache.borrow_mut().insert(occ, ids.clone());
        ids
    }

    /// One backward-induction step: the cops pick `(z, w)`, the robber
    /// relocates within the component of the lifted placement, the cop lands,
    /// and the catch is checked before falling back to `prev`.
    fn cops_can_win(&self, gi: usize, e: usize, prev: &[bool]) -> bool {
        let bot = self.idx.bot_symbol().unwrap();
        let k = self.k1 + self.k2;
        let ne = self.edges.len();
        let mut any_pickable = false;
        for slot in 0..k {
            let placed = self.idx.digit(gi, slot) != bot;
            let pickable = slot < self.k1 || !placed;
            if !pickable {
                continue;
            }
            any_pickable = true;
            let lifted = self.idx.replace(gi, slot, bot);
            let comp = self.components(self.occupied_mask(lifted));
            for w in 0..self.base.order() {
                let landed = self.idx.replace(gi, slot, w);
                let occ_after = self.occupied_mask(landed);
                let mut all_answered = true;
                for e2 in 0..ne {
                    if comp[e2] != comp[e] {
                        continue;
                    }
                    let (a, b) = self.edges[e2];
                    let caught = occ_after >> a & 1 == 1 && occ_after >> b & 1 == 1;
                    if !caught && !prev[landed * ne + e2] {
                        all_answered = false;
                        break;
                    }
                }
                if all_answered {
                    return true;
                }
            }
        }
        if !any_pickable {
            // No cop can move; the winning condition is checked directly.
            let occ = self.occupied_mask(gi);
            let (a, b) = self.edges[e];
            return occ >> a & 1 == 1 && occ >> b & 1 == 1;
        }
        false
    }
}

/// Round-indexed cop-win tables over all `(cop placement, robber edge)`
/// positions.
pub struct CrAnalysis {
    idx: MixedRadix,
    ne: usize,
    k1: usize,
    k2: usize,
    /// `cops_win_by_round[r][pos]`: the cops win within `r` rounds.
    pub cops_win_by_round: Vec<Vec<bool>>,
    pub stable_round: Option<usize>,
}

impl CrAnalysis {
    fn table(&self, rounds: Option<usize>) -> &Vec<bool> {
        match rounds {
            Some(r) => &self.cops_win_by_round[r.min(self.cops_win_by_round.len() - 1)],
            None => &self.cops_win_by_round[self.stable_round.expect("round-bounded analysis")],
        }
    }

    /// Winner with the robber choosing the initial edge adversarially.
    pub fn winner(&self, rounds: Option<usize>) -> CrWinner {
        let table = self.table(rounds);
        let empty = self.idx.encode(&PartialAssignment::empty(self.k1, self.k2));
        if (0..self.ne).all(|e| table[empty * self.ne + e]) {
            CrWinner::Cops
        } else {
            CrWinner::Robber
        }
    }

    /// Cop-win verdict for an arbitrary position.
    pub fn cops_win_at(
        &self,
        rounds: Option<usize>,
        gamma: &PartialAssignment,
        edge_index: usize,
    ) -> bool {
        self.table(rounds)[self.idx.encode(gamma) * self.ne + edge_index]
    }
}

/// Backward induction for the cops-and-robber game on a base graph.
pub fn cr_analyze(
    base: &BaseGraph,
    k1: usize,
    k2: usize,
    max_rounds: Option<usize>,
    limits: &Limits,
) -> Result<CrAnalysis> {
    let solver = CrSolver::new(base, k1, k2, limits)?;
    let ne = solver.edges.len();
    let total = solver.idx.domain_size() * ne.max(1);
    let mut rounds: Vec<Vec<bool>> = vec![vec![false; total]];
    let stable_round;
    loop {
        if let Some(mr) = max_rounds {
            if rounds.len() > mr {
                stable_round = None;
                break;
            }
        }
        let prev = rounds.last().unwrap();
        let mut cur = vec![false; total];
        if ne > 0 {
            for gi in 0..solver.idx.domain_size() {
                for e in 0..ne {
                    cur[gi * ne + e] = prev[gi * ne + e] || solver.cops_can_win(gi, e, prev);
                }
            }
        }
        if &cur == prev {
            stable_round = Some(rounds.len() - 1);
            break;
        }
        rounds.push(cur);
    }
    Ok(CrAnalysis {
        idx: solver.idx,
        ne: ne.max(1),
        k1,
        k2,
        cops_win_by_round: rounds,
        stable_round,
    })
}

/// Winner of the `(k1,k2)` cops-and-robber game on `base`, the robber
/// choosing the initial edge; `rounds = None` is the unbounded game.
pub fn cr_solve(
    base: &BaseGraph,
    k1: usize,
    k2: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<CrWinner> {
    if base.graph().edge_count() == 0 {
        // No edge to place the robber on; the cops win vacuously.
        return Ok(CrWinner::Cops);
    }
    Ok(cr_analyze(base, k1, k2, rounds, limits)?.winner(rounds))
}

/// One optimal opening: for winning cops a `(cop, vertex)` declaration that
/// beats every robber edge; for a winning robber a surviving initial edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrFirstMove {
    Cops { cop: Var, vertex: Vertex },
    Robber { edge: (Vertex, Vertex) },
}

pub fn cr_first_move(
    base: &BaseGraph,
    k1: usize,
    k2: usize,
    rounds: Option<usize>,
    limits: &Limits,
) -> Result<CrFirstMove> {
    let analysis = cr_analyze(base, k1, k2, rounds, limits)?;
    let solver = CrSolver::new(base, k1, k2, limits)?;
    let ne = solver.edges.len();
    let empty = PartialAssignment::empty(k1, k2);
    let gi = solver.idx.encode(&empty);
    if analysis.winner(rounds) == CrWinner::Robber {
        let table = analysis.table(rounds);
        let e = (0..ne)
            .find(|&e| !table[gi * ne + e])
            .expect("robber wins, so a surviving edge exists");
        return Ok(CrFirstMove::Robber {
            edge: solver.edges[e],
        });
    }
    let last = match rounds {
        Some(r) => r.min(analysis.cops_win_by_round.len() - 1),
        None => analysis.stable_round.unwrap(),
    };
    let prev = &analysis.cops_win_by_round[last.saturating_sub(1)];
    // The robber relocates before the cop lands, so with no cops placed the
    // opening declaration must answer every edge in the robber's component.
    let comp = solver.components(0);
    for slot in 0..k1 + k2 {
        for w in 0..base.graph().order() {
            let landed = solver.idx.replace(gi, slot, w);
            let occ = solver.occupied_mask(landed);
            let beats_all = (0..ne).all(|e0| {
                (0..ne).filter(|&e2| comp[e2] == comp[e0]).all(|e2| {
                    let (a, b) = solver.edges[e2];
                    (occ >> a & 1 == 1 && occ >> b & 1 == 1) || prev[landed * ne + e2]
                })
            });
            if beats_all {
                return Ok(CrFirstMove::Cops {
                    cop: Var::from_slot(slot, k1),
                    vertex: w,
                });
            }
        }
    }
    // The cops win but need a longer horizon than one lookahead round from
    // `last`; report the first legal declaration.
    Ok(CrFirstMove::Cops {
        cop: Var::from_slot(0, k1),
        vertex: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfi::validate_base;
    use crate::graph::{cycle, generate, path, Family};

    const L: Limits = Limits {
        max_cells: 50_000_000,
        max_nodes: 200_000_000,
    };

    fn base_of(g: &ColoredGraph) -> BaseGraph {
        let vs: Vec<_> = (0..g.order()).collect();
        validate_base(&g.individualize(&vs).unwrap()).unwrap()
    }

    #[test]
    fn partial_iso_examples() {
        let g = path(4);
        let h = cycle(4);
        let empty = BpConfiguration::empty(1, 1);
        assert!(partial_iso(&g, &h, &empty).unwrap());

        // two pebbles on one vertex vs two vertices
        let c = BpConfiguration {
            alpha: PartialAssignment::from_pairs(2, 0, &[(Var::X(1), 0), (Var::X(2), 0)]),
            beta: PartialAssignment::from_pairs(2, 0, &[(Var::X(1), 0), (Var::X(2), 1)]),
        };
        assert!(!partial_iso(&g, &h, &c).unwrap());

        let mismatched = BpConfiguration {
            alpha: PartialAssignment::from_pairs(1, 1, &[(Var::X(1), 0)]),
            beta: PartialAssignment::empty(1, 1),
        };
        assert!(matches!(
            partial_iso(&g, &h, &mismatched),
            Err(Error::ConfigMismatch)
        ));
    }

    /// Equal atomic types and partial isomorphism agree on random
    /// configurations.
    #[test]
    fn partial_iso_matches_atomic_type() {
        use crate::assign::atomic_type;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = 1 + rng.gen_range(0..5usize);
            let m = 1 + rng.gen_range(0..5usize);
            let g = crate::graph::random_graph(n, &mut rng);
            let h = crate::graph::random_graph(m, &mut rng);
            let (k1, k2) = (1, 1);
            let mut alpha = PartialAssignment::empty(k1, k2);
            let mut beta = PartialAssignment::empty(k1, k2);
            for slot in 0..k1 + k2 {
                if rng.gen_bool(0.6) {
                    let z = Var::from_slot(slot, k1);
                    alpha = alpha.with(z, rng.gen_range(0..n));
                    beta = beta.with(z, rng.gen_range(0..m));
                }
            }
            let c = BpConfiguration {
                alpha: alpha.clone(),
                beta: beta.clone(),
            };
            assert_eq!(
                partial_iso(&g, &h, &c).unwrap(),
                atomic_type(&g, &alpha) == atomic_type(&h, &beta)
            );
        }
    }

    #[test]
    fn edge_components_examples() {
        let p4 = path(4); // a-b-c-d = 0-1-2-3
        let free = PartialAssignment::empty(1, 0);
        assert_eq!(edge_components(&p4, &free).len(), 1);

        let on_b = PartialAssignment::from_pairs(1, 0, &[(Var::X(1), 1)]);
        let classes = edge_components(&p4, &on_b);
        assert_eq!(classes, vec![vec![(0, 1)], vec![(1, 2), (2, 3)]]);

        // an edge alone in its class when the connecting interiors are covered
        let p3 = path(3);
        let mid = PartialAssignment::from_pairs(2, 0, &[(Var::X(1), 1)]);
        let classes = edge_components(&p3, &mid);
        assert_eq!(classes, vec![vec![(0, 1)], vec![(1, 2)]]);
    }

    #[test]
    fn bp_identity_duplicator() {
        let g = generate(Family::Grid { h: 2, l: 2 }, false).unwrap();
        let w = bp_solve(&g, &g, 1, 1, None, &BpConfiguration::empty(1, 1), &L).unwrap();
        assert_eq!(w, BpWinner::Duplicator);
    }

    #[test]
    fn bp_degree_examples() {
        let star3 = generate(Family::Star { n: 3 }, false).unwrap();
        let p4 = path(4);
        let w = bp_solve(&star3, &p4, 0, 2, None, &BpConfiguration::empty(0, 2), &L).unwrap();
        assert_eq!(w, BpWinner::Spoiler);

        let c6 = cycle(6);
        let c3c3 = cycle(3).disjoint_union(&cycle(3));
        let w = bp_solve(&c6, &c3c3, 1, 1, None, &BpConfiguration::empty(1, 1), &L).unwrap();
        assert_eq!(w, BpWinner::Duplicator);
        // ... while one more reusable pebble separates them
        let w = bp_solve(&c6, &c3c3, 2, 1, None, &BpConfiguration::empty(2, 1), &L).unwrap();
        assert_eq!(w, BpWinner::Spoiler);
    }

    #[test]
    fn bp_order_mismatch() {
        let g = path(3);
        let h = path(4);
        // Spoiler wins as soon as a bijection is required...
        let w = bp_solve(&g, &h, 0, 1, None, &BpConfiguration::empty(0, 1), &L).unwrap();
        assert_eq!(w, BpWinner::Spoiler);
        // ...but the 0-round game goes to Duplicator on a partial isomorphism.
        let w = bp_solve(&g, &h, 0, 1, Some(0), &BpConfiguration::empty(0, 1), &L).unwrap();
        assert_eq!(w, BpWinner::Duplicator);
    }

    #[test]
    fn bp_round_monotonicity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = 1 + rng.gen_range(0..5usize);
            let g = crate::graph::random_graph(n, &mut rng);
            let h = crate::graph::random_graph(n, &mut rng);
            let analysis = bp_analyze(&g, &h, 1, 1, Some(4), &L).unwrap();
            for r in 1..analysis.wins_by_round.len() {
                for ci in 0..analysis.wins_by_round[r].len() {
                    assert!(!analysis.wins_by_round[r][ci] || analysis.wins_by_round[r - 1][ci]);
                }
            }
        }
    }

    #[test]
    fn cr_complete_graph_capacity() {
        let k3 = base_of(&generate(Family::Complete { n: 3 }, false).unwrap());
        assert_eq!(cr_solve(&k3, 0, 3, None, &L).unwrap(), CrWinner::Cops);
        for (k1, k2) in [(2, 0), (1, 1), (0, 2)] {
            assert_eq!(cr_solve(&k3, k1, k2, None, &L).unwrap(), CrWinner::Robber);
        }
    }

    #[test]
    fn cr_binary_tree_special_case() {
        let b2 = base_of(&generate(Family::PerfectBinaryTree { d: 2 }, false).unwrap());
        assert_eq!(cr_solve(&b2, 1, 1, None, &L).unwrap(), CrWinner::Cops);
        assert_eq!(cr_solve(&b2, 0, 2, None, &L).unwrap(), CrWinner::Robber);
    }

    #[test]
    fn cr_path_reusable_advantage() {
        let p9 = base_of(&path(9));
        assert_eq!(cr_solve(&p9, 2, 0, None, &L).unwrap(), CrWinner::Cops);
        assert_eq!(cr_solve(&p9, 1, 1, None, &L).unwrap(), CrWinner::Robber);
    }

    #[test]
    fn cr_cop_win_sets_grow_with_budget() {
        let b1 = base_of(&generate(Family::PerfectBinaryTree { d: 1 }, false).unwrap());
        let a = cr_analyze(&b1, 1, 1, None, &L).unwrap();
        for r in 1..a.cops_win_by_round.len() {
            for p in 0..a.cops_win_by_round[r].len() {
                assert!(!a.cops_win_by_round[r - 1][p] || a.cops_win_by_round[r][p]);
            }
        }
    }

    #[test]
    fn first_moves() {
        let k3 = base_of(&generate(Family::Complete { n: 3 }, false).unwrap());
        match cr_first_move(&k3, 0, 3, None, &L).unwrap() {
            CrFirstMove::Cops { .. } => {}
            m => panic!("expected a cop move, got {m:?}"),
        }
        match cr_first_move(&k3, 1, 1, None, &L).unwrap() {
            CrFirstMove::Robber { edge } => assert!(k3.graph().adjacent(edge.0, edge.1)),
            m => panic!("expected a robber edge, got {m:?}"),
        }

        let star3 = generate(Family::Star { n: 3 }, false).unwrap();
        let p4 = path(4);
        let mv =
            bp_first_move(&star3, &p4, 0, 2, None, &BpConfiguration::empty(0, 2), &L).unwrap();
        assert!(mv.is_some());
        let mv = bp_first_move(&p4, &p4, 0, 2, None, &BpConfiguration::empty(0, 2), &L).unwrap();
        assert!(mv.is_none());
    }
}

//! Variable assignments over the fixed variable set `x_1..x_k1, y_1..y_k2`
//! and their atomic types.

use std::collections::BTreeSet;
use std::fmt;

use crate::graph::{ColorId, ColoredGraph, Vertex};
use crate::{Error, Result};

/// A variable: reusable `x_i` or non-reusable `y_j`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Y(usize),
}

impl Var {
    /// Flat slot index: `x_1..x_k1` first, then `y_1..y_k2`.
    pub fn slot(self, k1: usize) -> usize {
        match self {
            Var::X(i) => i - 1,
            Var::Y(j) => k1 + j - 1,
        }
    }

    pub fn from_slot(slot: usize, k1: usize) -> Var {
        if slot < k1 {
            Var::X(slot + 1)
        } else {
            Var::Y(slot - k1 + 1)
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(j) => write!(f, "y{j}"),
        }
    }
}

/// A partial map from `[x_k1, y_k2]` to vertices, viewed as a
/// `(k1+k2)`-tuple over `V ∪ {⊥}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialAssignment {
    k1: usize,
    k2: usize,
    slots: Vec<Option<Vertex>>,
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.k1 + self.k2)
            .filter_map(|s| {
                self.slots[s]
                    .map(|v| format!("{}={}", Var::from_slot(s, self.k1), v))
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl PartialAssignment {
    pub fn empty(k1: usize, k2: usize) -> Self {
        PartialAssignment {
            k1,
            k2,
            slots: vec![None; k1 + k2],
        }
    }

    pub fn from_pairs(k1: usize, k2: usize, pairs: &[(Var, Vertex)]) -> Self {
        let mut a = PartialAssignment::empty(k1, k2);
        for &(z, v) in pairs {
            a.slots[z.slot(k1)] = Some(v);
        }
        a
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty_map(&self) -> bool {
        self.slots.iter().all(|s| s.is_none())
    }

    pub fn get(&self, z: Var) -> Option<Vertex> {
        self.slots[z.slot(self.k1)]
    }

    pub fn slot_value(&self, slot: usize) -> Option<Vertex> {
        self.slots[slot]
    }

    pub fn slots(&self) -> &[Option<Vertex>] {
        &self.slots
    }

    /// `α[z/v]`: the assignment with slot `z` replaced by `v`.
    pub fn with(&self, z: Var, v: Vertex) -> Self {
        let mut a = self.clone();
        a.slots[z.slot(self.k1)] = Some(v);
        a
    }

    pub fn without(&self, z: Var) -> Self {
        let mut a = self.clone();
        a.slots[z.slot(self.k1)] = None;
        a
    }

    /// The set of assigned variables.
    pub fn dom(&self) -> Vec<Var> {
        (0..self.slots.len())
            .filter(|&s| self.slots[s].is_some())
            .map(|s| Var::from_slot(s, self.k1))
            .collect()
    }

    pub fn image(&self) -> BTreeSet<Vertex> {
        self.slots.iter().flatten().copied().collect()
    }

    /// `J(α)`: the 1-based indices of unassigned `y`-variables.
    pub fn unassigned_y(&self) -> Vec<usize> {
        (1..=self.k2)
            .filter(|&j| self.slots[self.k1 + j - 1].is_none())
            .collect()
    }

    /// Bitmask over slots with assigned entries; equal masks mean equal
    /// domains.
    pub fn dom_mask(&self) -> u32 {
        let mut m = 0;
        for (s, v) in self.slots.iter().enumerate() {
            if v.is_some() {
                m |= 1 << s;
            }
        }
        m
    }

    /// The `y`-part as a vector of length `k2`.
    pub fn y_part(&self) -> Vec<Option<Vertex>> {
        self.slots[self.k1..].to_vec()
    }

    /// The `x`-part as a vector of length `k1`.
    pub fn x_part(&self) -> Vec<Option<Vertex>> {
        self.slots[..self.k1].to_vec()
    }

    pub fn validate_on(&self, g: &ColoredGraph) -> Result<()> {
        for v in self.slots.iter().flatten() {
            if *v >= g.order() {
                return Err(Error::VertexOutOfRange(*v, g.order()));
            }
        }
        Ok(())
    }
}

/// Mixed-radix index scheme for `k`-tuples over `radix` symbols per
/// position. Partial-assignment domains reserve the top symbol for `⊥`;
/// total-tuple domains have no `⊥` symbol.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    pub digits: usize,
    pub radix: usize,
    bot: Option<usize>,
    pows: Vec<usize>,
}

impl MixedRadix {
    fn build(digits: usize, radix: usize, bot: Option<usize>) -> Self {
        let mut pows = vec![1usize; digits + 1];
        for i in 1..=digits {
            pows[i] = pows[i - 1] * radix;
        }
        MixedRadix {
            digits,
            radix,
            bot,
            pows,
        }
    }

    /// Index scheme over `V ∪ {⊥}` for a graph of order `n`: radix `n + 1`,
    /// symbol `n` standing for `⊥`.
    pub fn with_bot(digits: usize, n: usize) -> Self {
        MixedRadix::build(digits, n + 1, Some(n))
    }

    /// Index scheme over total tuples from a graph of order `n`.
    pub fn total(digits: usize, n: usize) -> Self {
        MixedRadix::build(digits, n, None)
    }

    pub fn domain_size(&self) -> usize {
        self.pows[self.digits]
    }

    pub fn digit(&self, idx: usize, pos: usize) -> usize {
        idx / self.pows[pos] % self.radix
    }

    /// Replaces the digit at `pos` with `sym`.
    pub fn replace(&self, idx: usize, pos: usize, sym: usize) -> usize {
        let old = self.digit(idx, pos);
        idx - old * self.pows[pos] + sym * self.pows[pos]
    }

    /// The symbol standing for `⊥`, if the domain has one.
    pub fn bot_symbol(&self) -> Option<usize> {
        self.bot
    }

    /// Encodes a partial assignment; unassigned slots require a `⊥` symbol.
    pub fn encode(&self, a: &PartialAssignment) -> usize {
        let mut idx = 0;
        for (pos, slot) in a.slots().iter().enumerate() {
            let sym = match slot {
                Some(v) => *v,
                None => self.bot.expect("total domain cannot encode ⊥"),
            };
            idx += sym * self.pows[pos];
        }
        idx
    }

    /// Decodes an index into a partial assignment with the given split.
    pub fn decode(&self, idx: usize, k1: usize, k2: usize) -> PartialAssignment {
        debug_assert_eq!(self.digits, k1 + k2);
        let mut a = PartialAssignment::empty(k1, k2);
        for pos in 0..self.digits {
            let d = self.digit(idx, pos);
            if Some(d) != self.bot {
                a.slots[pos] = Some(d);
            }
        }
        a
    }
}

/// Canonical record of the quantifier-free structure an assignment realizes:
/// the `⊥`-pattern, the equality and adjacency patterns among assigned
/// entries, and the color of each assigned entry.
///
/// Two assignments (possibly over different graphs) receive equal atomic
/// types exactly when `α(z) ↦ β(z)` is a color-, equality-, and
/// adjacency-preserving bijection between their images and the `⊥`-patterns
/// agree. The derived lexicographic order is the canonical atomic-type order
/// used by the table encodings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicType {
    bots: Vec<bool>,
    eq: Vec<bool>,
    adj: Vec<bool>,
    colors: Vec<Option<ColorId>>,
}

/// The atomic type of `α` in `g`.
pub fn atomic_type(g: &ColoredGraph, a: &PartialAssignment) -> AtomicType {
    let k = a.len();
    let mut bots = vec![false; k];
    let mut colors = vec![None; k];
    for s in 0..k {
        match a.slot_value(s) {
            None => bots[s] = true,
            Some(v) => colors[s] = Some(g.color(v)),
        }
    }
    let mut eq = Vec::with_capacity(k * (k - 1) / 2);
    let mut adj = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            match (a.slot_value(i), a.slot_value(j)) {
                (Some(u), Some(v)) => {
                    eq.push(u == v);
                    adj.push(g.adjacent(u, v));
                }
                _ => {
                    eq.push(false);
                    adj.push(false);
                }
            }
        }
    }
    AtomicType {
        bots,
        eq,
        adj,
        colors,
    }
}

//! Counting first-order logic over colored graphs: concrete syntax, parsing,
//! structural analysis (free/bound variables, quantifier rank,
//! requantification), and evaluation.
//!
//! Concrete syntax: `E(z,w)`, `z=w`, `U_<name>(z)` against a color legend
//! (or `U_<integer>` without one), `!`, `&`, `|`, `->`, `exists>=k z`,
//! `exists z`, `forall z`, and parentheses. Variables are `x1..xk1` and
//! `y1..yk2`, declared at parse time.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use crate::assign::{PartialAssignment, Var};
use crate::graph::{ColorId, ColoredGraph};
use crate::{Error, Result};

/// Formula AST. `Exists` and `Forall` are kept as distinct sugar nodes; their
/// semantics are those of `CountExists(1, z, φ)` and
/// `!CountExists(1, z, !φ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Var, Var),
    Edge(Var, Var),
    HasColor(ColorId, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    CountExists(u32, Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    fn quantifier(&self) -> Option<(Var, &Formula)> {
        match self {
            Formula::CountExists(_, z, body) => Some((*z, body)),
            Formula::Exists(z, body) | Formula::Forall(z, body) => Some((*z, body)),
            _ => None,
        }
    }
}

/// Mapping between color names and color ids for `U_<name>` atoms.
#[derive(Debug, Clone, Default)]
pub struct Legend {
    by_name: BTreeMap<String, ColorId>,
    by_id: BTreeMap<ColorId, String>,
}

impl Legend {
    pub fn new(pairs: &[(String, ColorId)]) -> Self {
        let mut l = Legend::default();
        for (name, id) in pairs {
            l.by_name.insert(name.clone(), *id);
            l.by_id.insert(*id, name.clone());
        }
        l
    }

    fn resolve(&self, name: &str) -> Option<ColorId> {
        self.by_name.get(name).copied().or_else(|| name.parse().ok())
    }

    fn render(&self, id: ColorId) -> String {
        self.by_id
            .get(&id)
            .cloned()
            .unwrap_or_else(|| id.to_string())
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    k1: usize,
    k2: usize,
    legend: &'a Legend,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn word(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(std::str::from_utf8(&self.text[start..self.pos]).unwrap())
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a non-negative integer");
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("threshold out of range"))
    }

    fn variable(&mut self) -> Result<Var> {
        let save = self.pos;
        let Some(w) = self.word() else {
            return self.err("expected a variable");
        };
        let var = match w.as_bytes() {
            [b'x', rest @ ..] if !rest.is_empty() => {
                std::str::from_utf8(rest).unwrap().parse().ok().map(Var::X)
            }
            [b'y', rest @ ..] if !rest.is_empty() => {
                std::str::from_utf8(rest).unwrap().parse().ok().map(Var::Y)
            }
            _ => None,
        };
        let in_range = |v: &Var| match v {
            Var::X(i) => *i >= 1 && *i <= self.k1,
            Var::Y(j) => *j >= 1 && *j <= self.k2,
        };
        match var {
            Some(v) if in_range(&v) => Ok(v),
            _ => {
                self.pos = save;
                self.err(format!(
                    "unknown variable `{w}` (declared: x1..x{}, y1..y{})",
                    self.k1, self.k2
                ))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or_level()?;
        if self.eat("->") {
            let rhs = self.formula()?; // right-associative
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or_level(&mut self) -> Result<Formula> {
        let mut f = self.and_level()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.and_level()?;
            f = Formula::Or(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn and_level(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            let body = self.unary()?;
            return Ok(Formula::Not(Box::new(body)));
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        let save = self.pos;
        if let Some(w) = self.word() {
            match w {
                "forall" => {
                    let z = self.variable()?;
                    let body = self.unary()?;
                    return Ok(Formula::Forall(z, Box::new(body)));
                }
                "exists" => {
                    if self.eat(">=") {
                        let k = self.number()?;
                        let z = self.variable()?;
                        let body = self.unary()?;
                        return Ok(Formula::CountExists(k, z, Box::new(body)));
                    }
                    let z = self.variable()?;
                    let body = self.unary()?;
                    return Ok(Formula::Exists(z, Box::new(body)));
                }
                "E" => {
                    self.expect("(")?;
                    let a = self.variable()?;
                    self.expect(",")?;
                    let b = self.variable()?;
                    self.expect(")")?;
                    return Ok(Formula::Edge(a, b));
                }
                _ if w.starts_with("U_") => {
                    let name = &w[2..];
                    let Some(c) = self.legend.resolve(name) else {
                        self.pos = save;
                        return self.err(format!("unknown color `{name}`"));
                    };
                    self.expect("(")?;
                    let z = self.variable()?;
                    self.expect(")")?;
                    return Ok(Formula::HasColor(c, z));
                }
                _ => {
                    // a variable opening an equality atom
                    self.pos = save;
                    let a = self.variable()?;
                    self.expect("=")?;
                    let b = self.variable()?;
                    return Ok(Formula::Eq(a, b));
                }
            }
        }
        self.err("expected a formula")
    }
}

/// Parses a formula over the declared variable budget. `legend` is consulted
/// for `U_<name>` atoms; numeric names always work.
pub fn parse_formula(text: &str, k1: usize, k2: usize, legend: &Legend) -> Result<Formula> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        k1,
        k2,
        legend,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Renders a formula so that parsing the output reproduces the AST exactly:
/// binary operators are parenthesized and quantifier bodies are wrapped
/// unless atomic.
pub fn format_formula(f: &Formula, legend: &Legend) -> String {
    match f {
        Formula::Eq(a, b) => format!("{a}={b}"),
        Formula::Edge(a, b) => format!("E({a},{b})"),
        Formula::HasColor(c, z) => format!("U_{}({z})", legend.render(*c)),
        Formula::Not(body) => format!("!{}", wrap(body, legend)),
        Formula::And(a, b) => format!(
            "({} & {})",
            format_formula(a, legend),
            format_formula(b, legend)
        ),
        Formula::Or(a, b) => format!(
            "({} | {})",
            format_formula(a, legend),
            format_formula(b, legend)
        ),
        Formula::Implies(a, b) => format!(
            "({} -> {})",
            format_formula(a, legend),
            format_formula(b, legend)
        ),
        Formula::CountExists(k, z, body) => {
            format!("exists>={k} {z} {}", wrap(body, legend))
        }
        Formula::Exists(z, body) => format!("exists {z} {}", wrap(body, legend)),
        Formula::Forall(z, body) => format!("forall {z} {}", wrap(body, legend)),
    }
}

fn wrap(f: &Formula, legend: &Legend) -> String {
    match f {
        Formula::Eq(..)
        | Formula::Edge(..)
        | Formula::HasColor(..)
        | Formula::And(..)
        | Formula::Or(..)
        | Formula::Implies(..) => format_formula(f, legend),
        _ => format!("({})", format_formula(f, legend)),
    }
}

/// Structural report: free and bound variables, quantifier rank, the
/// requantified set, and membership in the declared fragment.
#[derive(Debug, Clone, Serialize)]
pub struct FormulaReport {
    pub free: BTreeSet<String>,
    pub bound: BTreeSet<String>,
    pub quantifier_rank: usize,
    pub requantified: BTreeSet<String>,
    /// No `y`-variable is requantified; the formula lies in the declared
    /// fragment.
    pub in_fragment: bool,
}

pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    match f {
        Formula::Eq(a, b) | Formula::Edge(a, b) => [*a, *b].into_iter().collect(),
        Formula::HasColor(_, z) => [*z].into_iter().collect(),
        Formula::Not(body) => free_vars(body),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let mut s = free_vars(a);
            s.extend(free_vars(b));
            s
        }
        _ => {
            let (z, body) = f.quantifier().unwrap();
            let mut s = free_vars(body);
            s.remove(&z);
            s
        }
    }
}

pub fn bound_vars(f: &Formula) -> BTreeSet<Var> {
    match f {
        Formula::Eq(..) | Formula::Edge(..) | Formula::HasColor(..) => BTreeSet::new(),
        Formula::Not(body) => bound_vars(body),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let mut s = bound_vars(a);
            s.extend(bound_vars(b));
            s
        }
        _ => {
            let (z, body) = f.quantifier().unwrap();
            let mut s = bound_vars(body);
            s.insert(z);
            s
        }
    }
}

pub fn quantifier_rank(f: &Formula) -> usize {
    match f {
        Formula::Eq(..) | Formula::Edge(..) | Formula::HasColor(..) => 0,
        Formula::Not(body) => quantifier_rank(body),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            quantifier_rank(a).max(quantifier_rank(b))
        }
        _ => {
            let (_, body) = f.quantifier().unwrap();
            1 + quantifier_rank(body)
        }
    }
}

/// A variable is requantified when it occurs both free and bound, or when a
/// quantification of it contains another quantification of it in its scope.
pub fn requantified(f: &Formula) -> BTreeSet<Var> {
    let mut out: BTreeSet<Var> = free_vars(f).intersection(&bound_vars(f)).copied().collect();
    fn walk(f: &Formula, out: &mut BTreeSet<Var>) {
        match f {
            Formula::Eq(..) | Formula::Edge(..) | Formula::HasColor(..) => {}
            Formula::Not(body) => walk(body, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            _ => {
                let (z, body) = f.quantifier().unwrap();
                if bound_vars(body).contains(&z) {
                    out.insert(z);
                }
                walk(body, out);
            }
        }
    }
    walk(f, &mut out);
    out
}

/// Full structural analysis of a formula.
pub fn analyze(f: &Formula) -> FormulaReport {
    let req = requantified(f);
    let in_fragment = req.iter().all(|v| matches!(v, Var::X(_)));
    let names = |s: BTreeSet<Var>| s.into_iter().map(|v| v.to_string()).collect();
    FormulaReport {
        free: names(free_vars(f)),
        bound: names(bound_vars(f)),
        quantifier_rank: quantifier_rank(f),
        requantified: names(req),
        in_fragment,
    }
}

/// Standard counting-logic semantics; `CountExists(k, z, φ)` holds when at
/// least `k` distinct vertices satisfy `φ`. Every free variable of `f` must
/// be assigned by `alpha`.
pub fn evaluate(g: &ColoredGraph, alpha: &PartialAssignment, f: &Formula) -> Result<bool> {
    alpha.validate_on(g)?;
    for v in free_vars(f) {
        if alpha.get(v).is_none() {
            return Err(Error::UnassignedFree(v.to_string()));
        }
    }
    let mut env: Vec<Option<usize>> = alpha.slots().to_vec();
    let k1 = alpha.k1();
    Ok(eval_rec(g, &mut env, k1, f))
}

fn eval_rec(g: &ColoredGraph, env: &mut Vec<Option<usize>>, k1: usize, f: &Formula) -> bool {
    match f {
        Formula::Eq(a, b) => env[a.slot(k1)].unwrap() == env[b.slot(k1)].unwrap(),
        Formula::Edge(a, b) => {
            let (u, v) = (env[a.slot(k1)].unwrap(), env[b.slot(k1)].unwrap());
            g.adjacent(u, v)
        }
        Formula::HasColor(c, z) => g.color(env[z.slot(k1)].unwrap()) == *c,
        Formula::Not(body) => !eval_rec(g, env, k1, body),
        Formula::And(a, b) => eval_rec(g, env, k1, a) && eval_rec(g, env, k1, b),
        Formula::Or(a, b) => eval_rec(g, env, k1, a) || eval_rec(g, env, k1, b),
        Formula::Implies(a, b) => !eval_rec(g, env, k1, a) || eval_rec(g, env, k1, b),
        Formula::CountExists(k, z, body) => count_witnesses(g, env, k1, *z, body, *k),
        Formula::Exists(z, body) => count_witnesses(g, env, k1, *z, body, 1),
        Formula::Forall(z, body) => {
            let slot = z.slot(k1);
            let saved = env[slot];
            let mut all = true;
            for v in 0..g.order() {
                env[slot] = Some(v);
                if !eval_rec(g, env, k1, body) {
                    all = false;
                    break;
                }
            }
            env[slot] = saved;
            all
        }
    }
}

fn count_witnesses(
    g: &ColoredGraph,
    env: &mut Vec<Option<usize>>,
    k1: usize,
    z: Var,
    body: &Formula,
    threshold: u32,
) -> bool {
    if threshold == 0 {
        return true;
    }
    let slot = z.slot(k1);
    let saved = env[slot];
    let mut count = 0;
    for v in 0..g.order() {
        env[slot] = Some(v);
        if eval_rec(g, env, k1, body) {
            count += 1;
            if count >= threshold {
                break;
            }
        }
    }
    env[slot] = saved;
    count >= threshold
}

/// Options for the random-formula generator used by the property suites.
#[derive(Debug, Clone)]
pub struct GenOpts {
    pub k1: usize,
    pub k2: usize,
    pub max_rank: usize,
    /// Thresholds are drawn from `0..=max_threshold`.
    pub max_threshold: u32,
    pub colors: Vec<ColorId>,
    /// `y`-variables that may occur free (and are then never quantified).
    pub free_y: BTreeSet<usize>,
    /// `x`-variables that may occur free.
    pub free_x: BTreeSet<usize>,
}

/// Generates a random formula of the declared fragment: quantifier rank at
/// most `max_rank`, and no `y`-variable requantified by construction —
/// a `y` is only quantified outside the scope of its own quantifier and
/// never when it is designated free.
pub fn random_formula<R: Rng>(opts: &GenOpts, rng: &mut R) -> Formula {
    let mut scope: Vec<Var> = opts
        .free_x
        .iter()
        .map(|&i| Var::X(i))
        .chain(opts.free_y.iter().map(|&j| Var::Y(j)))
        .collect();
    gen_rec(opts, rng, opts.max_rank, &mut scope)
}

fn gen_rec<R: Rng>(opts: &GenOpts, rng: &mut R, depth: usize, scope: &mut Vec<Var>) -> Formula {
    let quantifiable: Vec<Var> = (1..=opts.k1)
        .map(Var::X)
        .chain(
            (1..=opts.k2)
                .filter(|j| !opts.free_y.contains(j) && !scope.contains(&Var::Y(*j)))
                .map(Var::Y),
        )
        .collect();
    let can_quantify = depth > 0 && !quantifiable.is_empty();
    let can_atom = !scope.is_empty();
    // With no variable in scope the formula must open with a quantifier.
    let choice = if !can_atom {
        debug_assert!(can_quantify, "generator needs a variable budget");
        5
    } else if can_quantify {
        rng.gen_range(0..8)
    } else {
        rng.gen_range(0..5)
    };
    match choice {
        0 => atom(opts, rng, scope),
        1 => Formula::Not(Box::new(gen_rec(opts, rng, depth, scope))),
        2 => Formula::And(
            Box::new(gen_rec(opts, rng, depth, scope)),
            Box::new(gen_rec(opts, rng, depth, scope)),
        ),
        3 => Formula::Or(
            Box::new(gen_rec(opts, rng, depth, scope)),
            Box::new(gen_rec(opts, rng, depth, scope)),
        ),
        4 => Formula::Implies(
            Box::new(gen_rec(opts, rng, depth, scope)),
            Box::new(gen_rec(opts, rng, depth, scope)),
        ),
        _ => {
            let z = quantifiable[rng.gen_range(0..quantifiable.len())];
            let pushed = !scope.contains(&z);
            if pushed {
                scope.push(z);
            }
            let body = gen_rec(opts, rng, depth - 1, scope);
            if pushed {
                let popped = scope.pop();
                debug_assert_eq!(popped, Some(z));
            }
            match rng.gen_range(0..3) {
                0 => Formula::Exists(z, Box::new(body)),
                1 => Formula::Forall(z, Box::new(body)),
                _ => Formula::CountExists(
                    rng.gen_range(0..=opts.max_threshold),
                    z,
                    Box::new(body),
                ),
            }
        }
    }
}

fn atom<R: Rng>(opts: &GenOpts, rng: &mut R, scope: &[Var]) -> Formula {
    let pick = |rng: &mut R| scope[rng.gen_range(0..scope.len())];
    match rng.gen_range(0..3) {
        0 => Formula::Eq(pick(rng), pick(rng)),
        1 => Formula::Edge(pick(rng), pick(rng)),
        _ => {
            if opts.colors.is_empty() {
                Formula::Edge(pick(rng), pick(rng))
            } else {
                let c = opts.colors[rng.gen_range(0..opts.colors.len())];
                Formula::HasColor(c, pick(rng))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;
    use rand::SeedableRng;

    fn legend_rgb() -> Legend {
        Legend::new(&[
            ("red".into(), 0),
            ("green".into(), 1),
            ("blue".into(), 2),
        ])
    }

    #[test]
    fn parse_atoms() {
        let l = Legend::default();
        assert_eq!(
            parse_formula("E(x1,x2)", 2, 0, &l).unwrap(),
            Formula::Edge(Var::X(1), Var::X(2))
        );
        assert_eq!(
            parse_formula("x1=y1", 1, 1, &l).unwrap(),
            Formula::Eq(Var::X(1), Var::Y(1))
        );
        assert_eq!(
            parse_formula("U_3(x1)", 1, 0, &l).unwrap(),
            Formula::HasColor(3, Var::X(1))
        );
        // threshold 0 parses and is always true
        let f = parse_formula("exists>=0 x1 E(x1,x1)", 1, 0, &l).unwrap();
        assert!(evaluate(&path(2), &PartialAssignment::empty(1, 0), &f).unwrap());
        // self-edge atoms parse; they are just always false
        let f = parse_formula("exists>=4 x1 E(x1,x1)", 1, 0, &l).unwrap();
        assert!(!evaluate(&path(5), &PartialAssignment::empty(1, 0), &f).unwrap());
    }

    #[test]
    fn parse_errors() {
        let l = Legend::default();
        assert!(matches!(
            parse_formula("E(x1,x3)", 2, 0, &l),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_formula("E(x1", 2, 0, &l),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_formula("exists>= x1 E(x1,x1)", 1, 0, &l),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_formula("E(x1,x2) E", 2, 0, &l),
            Err(Error::Parse { .. })
        ));
        // the error carries a position
        match parse_formula("E(x1,x9)", 2, 0, &l) {
            Err(Error::Parse { pos, .. }) => assert!(pos >= 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    /// The distance-2 statement: every red vertex has a blue vertex at
    /// distance two.
    #[test]
    fn distance_two_formula() {
        let text =
            "forall x1 (U_red(x1) -> exists x2 (E(x1,x2) & exists x1 (E(x2,x1) & U_blue(x1))))";
        let f = parse_formula(text, 2, 0, &legend_rgb()).unwrap();
        // red - green - blue path
        let g = ColoredGraph::new(3, &[(0, 1), (1, 2)], vec![0, 1, 2]).unwrap();
        let empty = PartialAssignment::empty(2, 0);
        assert!(evaluate(&g, &empty, &f).unwrap());

        // no red vertices: vacuously true
        let h = ColoredGraph::new(3, &[(0, 1), (1, 2)], vec![1, 1, 2]).unwrap();
        assert!(evaluate(&h, &empty, &f).unwrap());

        // red with blue at distance 3 only: false
        let far = ColoredGraph::new(4, &[(0, 1), (1, 2), (2, 3)], vec![0, 1, 1, 2]).unwrap();
        assert!(!evaluate(&far, &empty, &f).unwrap());

        let report = analyze(&f);
        assert_eq!(report.quantifier_rank, 3);
        assert_eq!(report.requantified, ["x1".to_string()].into_iter().collect());
    }

    /// The three-quantifier example with x2 free and bound, x1 nested in its
    /// own scope, and y1 quantified twice in parallel.
    #[test]
    fn requantification_example() {
        let text = "(exists y1 !E(x2,y1)) & exists>=4 x1 (E(x2,x1) & (exists y1 !E(x1,y1)) & forall x2 (!E(x2,x1) -> exists>=3 x1 E(x1,x2)))";
        let f = parse_formula(text, 2, 1, &Legend::default()).unwrap();
        let r = analyze(&f);
        assert_eq!(
            r.requantified,
            ["x1".to_string(), "x2".to_string()].into_iter().collect()
        );
        assert!(r.in_fragment);
        assert_eq!(r.quantifier_rank, 3);
        assert_eq!(r.free, ["x2".to_string()].into_iter().collect());
    }

    #[test]
    fn nested_y_is_requantified() {
        let f = Formula::Exists(
            Var::Y(1),
            Box::new(Formula::Exists(
                Var::Y(1),
                Box::new(Formula::Edge(Var::Y(1), Var::Y(1))),
            )),
        );
        let r = analyze(&f);
        assert_eq!(r.requantified, ["y1".to_string()].into_iter().collect());
        assert!(!r.in_fragment);
    }

    #[test]
    fn quantifier_free_report() {
        let f = parse_formula("x1=x1 & !E(x1,x1)", 1, 0, &Legend::default()).unwrap();
        let r = analyze(&f);
        assert_eq!(r.quantifier_rank, 0);
        assert!(r.requantified.is_empty());
        assert!(r.bound.is_empty());
    }

    #[test]
    fn unassigned_free_variable_is_an_error() {
        let f = parse_formula("E(x1,x2)", 2, 0, &Legend::default()).unwrap();
        let partial = PartialAssignment::from_pairs(2, 0, &[(Var::X(1), 0)]);
        assert!(matches!(
            evaluate(&path(3), &partial, &f),
            Err(Error::UnassignedFree(_))
        ));
    }

    #[test]
    fn format_round_trip_fixed() {
        let l = legend_rgb();
        for text in [
            "E(x1,x2)",
            "forall x1 (U_red(x1) -> exists x2 (E(x1,x2) & exists x1 (E(x2,x1) & U_blue(x1))))",
            "exists>=4 x1 E(x1,x1)",
            "!(x1=x2 | E(x1,x2)) -> U_green(x2)",
        ] {
            let f = parse_formula(text, 2, 0, &l).unwrap();
            let rendered = format_formula(&f, &l);
            let back = parse_formula(&rendered, 2, 0, &l).unwrap();
            assert_eq!(f, back, "through `{rendered}`");
        }
        // sugar is preserved in the rendering
        let f = parse_formula("exists x1 E(x1,x1)", 1, 0, &l).unwrap();
        assert!(format_formula(&f, &l).starts_with("exists x1"));
        let f = parse_formula("forall x1 E(x1,x1)", 1, 0, &l).unwrap();
        assert!(format_formula(&f, &l).starts_with("forall x1"));
    }

    #[test]
    fn random_formulas_stay_in_fragment_and_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let legend = Legend::default();
        for case in 0..300usize {
            let k1 = case % 3;
            let k2 = (case / 3) % 3;
            if k1 + k2 == 0 {
                continue;
            }
            let opts = GenOpts {
                k1,
                k2,
                max_rank: 3,
                max_threshold: 4,
                colors: vec![0, 1],
                free_y: if k2 > 0 && case % 5 == 0 {
                    [1].into_iter().collect()
                } else {
                    BTreeSet::new()
                },
                free_x: if k1 > 0 && case % 7 == 0 {
                    [1].into_iter().collect()
                } else {
                    BTreeSet::new()
                },
            };
            let f = random_formula(&opts, &mut rng);
            let r = analyze(&f);
            assert!(r.in_fragment, "formula {f:?}");
            assert!(r.quantifier_rank <= 3);
            let rendered = format_formula(&f, &legend);
            let back = parse_formula(&rendered, k1, k2, &legend).unwrap();
            assert_eq!(f, back);
        }
    }

    /// Evaluation is invariant under isomorphism.
    #[test]
    fn evaluation_respects_isomorphism() {
        use crate::iso::find_isomorphism;
        use crate::Limits;
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let n = 2 + rng.gen_range(0..4usize);
            let g = crate::graph::random_colored_graph(n, 2, &mut rng);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let h = g.permuted(&perm);
            let iso = find_isomorphism(&g, &h, &Limits::default())
                .unwrap()
                .unwrap();
            let opts = GenOpts {
                k1: 1,
                k2: 1,
                max_rank: 2,
                max_threshold: (n + 1) as u32,
                colors: vec![0, 1],
                free_y: [1].into_iter().collect(),
                free_x: BTreeSet::new(),
            };
            let f = random_formula(&opts, &mut rng);
            let mut alpha = PartialAssignment::empty(1, 1);
            let mut beta = PartialAssignment::empty(1, 1);
            for v in free_vars(&f) {
                let u = rng.gen_range(0..n);
                alpha = alpha.with(v, u);
                beta = beta.with(v, iso[u]);
            }
            assert_eq!(
                evaluate(&g, &alpha, &f).unwrap(),
                evaluate(&h, &beta, &f).unwrap()
            );
        }
    }
}

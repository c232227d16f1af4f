//! Iterated-exponential bound expressions.
//!
//! [`TowerExpr`] is a small expression tree over non-negative integers with
//! `+`, `*`, `^` and the tower `e_k(x)` (k-fold composition of `x ↦ 2^x`).
//! [`eval`] expands exactly up to a bit ceiling and otherwise returns a
//! folded symbolic form; [`compare`] decides orderings of values far beyond
//! any ceiling using interval bounds on iterated logarithms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::error::ParseError;

/// Default ceiling, in bits, for exact expansion.
pub const DEFAULT_BIT_CEILING: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerExpr {
    Const(BigUint),
    Var(String),
    Add(Box<TowerExpr>, Box<TowerExpr>),
    Mul(Box<TowerExpr>, Box<TowerExpr>),
    Pow(Box<TowerExpr>, Box<TowerExpr>),
    /// `e_k(x)`; `e_0(x) = x`.
    Tower(u32, Box<TowerExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("cannot order {0} and {1}: bounds overlap")]
    Undecided(String, String),
    #[error("no catalogue entry named `{0}`")]
    UnknownBound(String),
    #[error("`{name}` takes {expected} argument(s), got {got}")]
    Arity { name: String, expected: usize, got: usize },
}

pub type Bindings = BTreeMap<String, BigUint>;

/// Convenience for building bindings from small integers.
pub fn bindings<'a>(pairs: impl IntoIterator<Item = (&'a str, u64)>) -> Bindings {
    pairs.into_iter().map(|(k, v)| (k.to_string(), BigUint::from(v))).collect()
}

impl TowerExpr {
    pub fn constant(v: u64) -> Self {
        TowerExpr::Const(BigUint::from(v))
    }
    pub fn var(name: &str) -> Self {
        TowerExpr::Var(name.to_string())
    }
    pub fn add(a: TowerExpr, b: TowerExpr) -> Self {
        TowerExpr::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: TowerExpr, b: TowerExpr) -> Self {
        TowerExpr::Mul(Box::new(a), Box::new(b))
    }
    pub fn pow(a: TowerExpr, b: TowerExpr) -> Self {
        TowerExpr::Pow(Box::new(a), Box::new(b))
    }
    pub fn tower(k: u32, x: TowerExpr) -> Self {
        TowerExpr::Tower(k, Box::new(x))
    }

    /// Variables in first-appearance order.
    pub fn variables(&self) -> Vec<String> {
        fn walk(e: &TowerExpr, out: &mut Vec<String>) {
            match e {
                TowerExpr::Const(_) => {}
                TowerExpr::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                TowerExpr::Add(a, b) | TowerExpr::Mul(a, b) | TowerExpr::Pow(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                TowerExpr::Tower(_, x) => walk(x, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Replaces every occurrence of `name` by `by`.
    pub fn substitute(&self, name: &str, by: &TowerExpr) -> TowerExpr {
        match self {
            TowerExpr::Var(v) if v == name => by.clone(),
            TowerExpr::Const(_) | TowerExpr::Var(_) => self.clone(),
            TowerExpr::Add(a, b) => TowerExpr::add(a.substitute(name, by), b.substitute(name, by)),
            TowerExpr::Mul(a, b) => TowerExpr::mul(a.substitute(name, by), b.substitute(name, by)),
            TowerExpr::Pow(a, b) => TowerExpr::pow(a.substitute(name, by), b.substitute(name, by)),
            TowerExpr::Tower(k, x) => TowerExpr::tower(*k, x.substitute(name, by)),
        }
    }
}

impl fmt::Display for TowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerExpr::Const(c) => write!(f, "{c}"),
            TowerExpr::Var(v) => write!(f, "{v}"),
            TowerExpr::Add(a, b) => write!(f, "(+ {a} {b})"),
            TowerExpr::Mul(a, b) => write!(f, "(* {a} {b})"),
            TowerExpr::Pow(a, b) => write!(f, "(^ {a} {b})"),
            TowerExpr::Tower(k, x) => write!(f, "(e {k} {x})"),
        }
    }
}

impl FromStr for TowerExpr {
    type Err = ParseError;

    /// Prefix notation: `(+ a b ..)`, `(* a b ..)`, `(^ a b)`, `(e k x)`,
    /// decimal constants and identifiers.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let spaced = s.replace('(', " ( ").replace(')', " ) ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let e = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ParseError::new(format!("trailing input at `{}`", tokens[pos])));
        }
        Ok(e)
    }
}

fn parse_expr(tokens: &[&str], pos: &mut usize) -> Result<TowerExpr, ParseError> {
    let tok = *tokens.get(*pos).ok_or_else(|| ParseError::new("unexpected end of expression"))?;
    *pos += 1;
    if tok == ")" {
        return Err(ParseError::new("unexpected `)`"));
    }
    if tok != "(" {
        return parse_atom(tok);
    }
    let op = *tokens.get(*pos).ok_or_else(|| ParseError::new("unexpected end after `(`"))?;
    *pos += 1;
    let mut args = Vec::new();
    let k = if op == "e" {
        let k = tokens.get(*pos).and_then(|t| t.parse::<u32>().ok());
        *pos += 1;
        Some(k.ok_or_else(|| ParseError::new("`e` needs a literal height"))?)
    } else {
        None
    };
    while tokens.get(*pos) != Some(&")") {
        if *pos >= tokens.len() {
            return Err(ParseError::new("missing `)`"));
        }
        args.push(parse_expr(tokens, pos)?);
    }
    *pos += 1;
    let arity = |n: usize, args: &Vec<TowerExpr>| {
        if args.len() == n {
            Ok(())
        } else {
            Err(ParseError::new(format!("`{op}` takes {n} operand(s), got {}", args.len())))
        }
    };
    match op {
        "+" | "*" => {
            if args.len() < 2 {
                return Err(ParseError::new(format!("`{op}` needs at least two operands")));
            }
            let mut it = args.into_iter();
            let first = it.next().unwrap();
            Ok(it.fold(first, |acc, x| if op == "+" { TowerExpr::add(acc, x) } else { TowerExpr::mul(acc, x) }))
        }
        "^" => {
            arity(2, &args)?;
            let b = args.pop().unwrap();
            Ok(TowerExpr::pow(args.pop().unwrap(), b))
        }
        "e" => {
            arity(1, &args)?;
            Ok(TowerExpr::tower(k.unwrap(), args.pop().unwrap()))
        }
        _ => Err(ParseError::new(format!("unknown operator `{op}`"))),
    }
}

fn parse_atom(tok: &str) -> Result<TowerExpr, ParseError> {
    if tok.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(TowerExpr::Const(tok.parse().unwrap()));
    }
    let mut chars = tok.chars();
    let ok_start = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if ok_start && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(TowerExpr::Var(tok.to_string()))
    } else {
        Err(ParseError::new(format!("bad token `{tok}`")))
    }
}

/// Result of [`eval`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(BigUint),
    /// The value needs more than `ceiling` bits; `form` is the expression
    /// with variables substituted and every expandable part folded.
    Symbolic { form: TowerExpr, ceiling: u64 },
}

impl Value {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Value::Exact(v) => Some(v),
            Value::Symbolic { .. } => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Symbolic { form, ceiling } => write!(f, "symbolic {form} (exceeds {ceiling}-bit ceiling)"),
        }
    }
}

enum Folded {
    Exact(BigUint),
    Sym(TowerExpr),
}

impl Folded {
    fn into_expr(self) -> TowerExpr {
        match self {
            Folded::Exact(v) => TowerExpr::Const(v),
            Folded::Sym(e) => e,
        }
    }
}

/// Evaluates with all variables bound. Exact when every intermediate value
/// fits in `ceiling` bits.
pub fn eval(expr: &TowerExpr, env: &Bindings, ceiling: u64) -> Result<Value, BoundError> {
    Ok(match fold(expr, env, ceiling)? {
        Folded::Exact(v) => Value::Exact(v),
        Folded::Sym(form) => Value::Symbolic { form, ceiling },
    })
}

fn fits(v: &BigUint, ceiling: u64) -> bool {
    v.bits() <= ceiling
}

fn fold(expr: &TowerExpr, env: &Bindings, ceiling: u64) -> Result<Folded, BoundError> {
    use Folded::*;
    Ok(match expr {
        TowerExpr::Const(c) => Exact(c.clone()),
        TowerExpr::Var(v) => Exact(env.get(v).cloned().ok_or_else(|| BoundError::Unbound(v.clone()))?),
        TowerExpr::Add(a, b) => match (fold(a, env, ceiling)?, fold(b, env, ceiling)?) {
            (Exact(x), Exact(y)) => {
                let s = x + y;
                if fits(&s, ceiling) {
                    Exact(s)
                } else {
                    Sym(collect_sum(TowerExpr::Const(s)))
                }
            }
            (Exact(x), Sym(y)) | (Sym(y), Exact(x)) if x.is_zero() => Sym(y),
            (x, y) => Sym(collect_sum(TowerExpr::add(x.into_expr(), y.into_expr()))),
        },
        TowerExpr::Mul(a, b) => match (fold(a, env, ceiling)?, fold(b, env, ceiling)?) {
            (Exact(x), Exact(y)) => {
                if x.bits() + y.bits() <= ceiling + 1 {
                    let p = x * y;
                    if fits(&p, ceiling) {
                        return Ok(Exact(p));
                    }
                    Sym(TowerExpr::Const(p))
                } else {
                    Sym(TowerExpr::mul(TowerExpr::Const(x), TowerExpr::Const(y)))
                }
            }
            (Exact(x), Sym(_)) | (Sym(_), Exact(x)) if x.is_zero() => Exact(x),
            (Exact(x), Sym(y)) | (Sym(y), Exact(x)) if x.is_one() => Sym(y),
            (x, y) => Sym(TowerExpr::mul(x.into_expr(), y.into_expr())),
        },
        TowerExpr::Pow(a, b) => match (fold(a, env, ceiling)?, fold(b, env, ceiling)?) {
            (_, Exact(y)) if y.is_zero() => Exact(BigUint::one()),
            (Exact(x), _) if x <= BigUint::one() => Exact(x),
            (Exact(x), Exact(y)) => {
                // 2^((bits-1)·y) ≤ x^y
                let lower = y.to_u64().and_then(|y| y.checked_mul(x.bits() - 1));
                match lower {
                    Some(l) if l <= ceiling => {
                        let p = x.pow(y.to_u32().expect("exponent bounded by ceiling"));
                        if fits(&p, ceiling) {
                            Exact(p)
                        } else {
                            Sym(TowerExpr::pow(TowerExpr::Const(x), TowerExpr::Const(y)))
                        }
                    }
                    _ => Sym(TowerExpr::pow(TowerExpr::Const(x), TowerExpr::Const(y))),
                }
            }
            (x, y) => Sym(TowerExpr::pow(x.into_expr(), y.into_expr())),
        },
        TowerExpr::Tower(k, x) => match fold(x, env, ceiling)? {
            Exact(v) => {
                let mut cur = v.clone();
                for _ in 0..*k {
                    match cur.to_u64() {
                        Some(e) if e <= ceiling => cur = BigUint::one() << e,
                        _ => return Ok(Sym(TowerExpr::tower(*k, TowerExpr::Const(v)))),
                    }
                }
                if fits(&cur, ceiling) {
                    Exact(cur)
                } else {
                    Sym(TowerExpr::tower(*k, TowerExpr::Const(v)))
                }
            }
            Sym(e) => Sym(TowerExpr::tower(*k, e)),
        },
    })
}

/// Drops summands common to both sides.
fn cancel_common(a: TowerExpr, b: TowerExpr) -> (TowerExpr, TowerExpr) {
    let (mut ta, mut tb) = (sum_terms(a), sum_terms(b));
    for (ca, t) in ta.iter_mut() {
        if let Some((cb, _)) = tb.iter_mut().find(|(_, u)| u == t) {
            let m = (&*ca).min(&*cb).clone();
            *ca -= &m;
            *cb -= &m;
        }
    }
    (rebuild_sum(ta), rebuild_sum(tb))
}

fn sum_terms(e: TowerExpr) -> Vec<(BigUint, TowerExpr)> {
    fn terms(e: TowerExpr, out: &mut Vec<(BigUint, TowerExpr)>) {
        match e {
            TowerExpr::Add(a, b) => {
                terms(*a, out);
                terms(*b, out);
            }
            TowerExpr::Const(c) => push(out, c, TowerExpr::constant(1)),
            TowerExpr::Mul(a, b) if matches!(*a, TowerExpr::Const(_)) => {
                let TowerExpr::Const(c) = *a else { unreachable!() };
                push(out, c, *b);
            }
            other => push(out, BigUint::one(), other),
        }
    }
    fn push(out: &mut Vec<(BigUint, TowerExpr)>, c: BigUint, t: TowerExpr) {
        match out.iter_mut().find(|(_, u)| *u == t) {
            Some((d, _)) => *d += c,
            None => out.push((c, t)),
        }
    }
    let mut ts = Vec::new();
    terms(e, &mut ts);
    ts
}

fn rebuild_sum(ts: Vec<(BigUint, TowerExpr)>) -> TowerExpr {
    let one = TowerExpr::constant(1);
    ts.into_iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, t)| match (c.is_one(), t == one) {
            (_, true) => TowerExpr::Const(c),
            (true, false) => t,
            (false, false) => TowerExpr::mul(TowerExpr::Const(c), t),
        })
        .reduce(TowerExpr::add)
        .unwrap_or_else(|| TowerExpr::constant(0))
}

/// Merges repeated summands of a sum: `x + x` becomes `(* 2 x)`.
fn collect_sum(e: TowerExpr) -> TowerExpr {
    rebuild_sum(sum_terms(e))
}

/// Orders two expressions at the given bindings. Exact whenever both fit
/// the ceiling; otherwise decided from rigorous bounds on iterated logs.
/// Syntactically equal folded forms compare equal.
pub fn compare(a: &TowerExpr, b: &TowerExpr, env: &Bindings, ceiling: u64) -> Result<Ordering, BoundError> {
    let (fa, fb) = (fold(a, env, ceiling)?, fold(b, env, ceiling)?);
    if let (Folded::Exact(x), Folded::Exact(y)) = (&fa, &fb) {
        return Ok(x.cmp(y));
    }
    let (ea, eb) = cancel_common(fa.into_expr(), fb.into_expr());
    let (ia, ib) = (interval(&ea), interval(&eb));
    if ia.hi.lt(&ib.lo) {
        return Ok(Ordering::Less);
    }
    if ib.hi.lt(&ia.lo) {
        return Ok(Ordering::Greater);
    }
    if ea == eb {
        return Ok(Ordering::Equal);
    }
    Err(BoundError::Undecided(ea.to_string(), eb.to_string()))
}

// ---------------------------------------------------------------------------
// Interval bounds.
//
// A `Level { k, v }` stands for e_k(v). Normalised levels have k = 0 or
// v > LIFT, so e_{k-1}(v) would overflow an f64. Every node of a folded
// symbolic expression is an integer ≥ 1 (folding removes zeros), so all
// bounds below are taken over non-negative reals.

const LIFT: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Down,
    Up,
}

fn round(x: f64, d: Dir) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let slack = x.abs() * 1e-13;
    match d {
        Dir::Down => (x - slack).next_down(),
        Dir::Up => (x + slack).next_up(),
    }
}

#[derive(Clone, Copy, Debug)]
struct Level {
    k: u32,
    v: f64,
}

impl Level {
    fn real(v: f64, d: Dir) -> Level {
        Level { k: 0, v }.norm(d)
    }

    fn norm(mut self, d: Dir) -> Level {
        loop {
            if self.k > 0 && self.v <= LIFT {
                self = Level { k: self.k - 1, v: round(self.v.exp2(), d) };
            } else if self.k == 0 && self.v > LIFT.exp2() {
                self = Level { k: 1, v: round(self.v.log2(), d) };
            } else {
                return self;
            }
        }
    }

    fn exp2(self, d: Dir) -> Level {
        Level { k: self.k + 1, v: self.v }.norm(d)
    }

    fn log2(self, d: Dir) -> Level {
        if self.k > 0 {
            Level { k: self.k - 1, v: self.v }
        } else if self.v <= 0.0 {
            Level { k: 0, v: f64::NEG_INFINITY }
        } else {
            Level { k: 0, v: round(self.v.log2(), d) }
        }
    }

    /// The value rewritten at level `k ≥ self.k`.
    fn at(self, k: u32, d: Dir) -> f64 {
        let mut v = self.v;
        for _ in self.k..k {
            v = if v <= 0.0 { f64::NEG_INFINITY } else { round(v.log2(), d) };
        }
        v
    }

    fn lt(&self, other: &Level) -> bool {
        let k = self.k.max(other.k);
        self.at(k, Dir::Up) < other.at(k, Dir::Down)
    }

    fn add(self, other: Level, d: Dir) -> Level {
        if self.k == 0 && other.k == 0 {
            return Level::real(round(self.v + other.v, d), d);
        }
        let k = self.k.max(other.k);
        let (a, b) = (self.at(k, d), other.at(k, d));
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if k == 1 {
            // log2(2^hi + 2^lo) = hi + log2(1 + 2^(lo - hi))
            let bump = (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2;
            return Level { k, v: round(hi + bump, d) };
        }
        // For k ≥ 2 the sum moves e_{k-1}(hi) by at most 1, which shifts hi
        // by far less than the rounding slack (hi > LIFT).
        Level { k, v: round(hi, d) }
    }

    fn mul(self, other: Level, d: Dir) -> Level {
        if self.k == 0 && other.k == 0 {
            let p = self.v * other.v;
            if p.is_finite() && p <= LIFT.exp2() {
                return Level::real(round(p, d), d);
            }
        }
        let (small, big) = if self.lt(&other) { (self, other) } else { (other, self) };
        if small.k == 0 && small.v < 1.0 {
            // Logs of factors below 1 are negative; fall back to the trivial
            // bounds 0 ≤ ab ≤ b.
            return match d {
                Dir::Down => Level { k: 0, v: 0.0 },
                Dir::Up => big,
            };
        }
        self.log2(d).add(other.log2(d), d).exp2(d)
    }

    fn pow(self, exp: Level, d: Dir) -> Level {
        exp.mul(self.log2(d), d).exp2(d)
    }
}

#[derive(Clone, Copy, Debug)]
struct Interval {
    lo: Level,
    hi: Level,
}

fn exact_interval(v: &BigUint) -> Interval {
    let bits = v.bits();
    if bits <= LIFT as u64 {
        let f = v.to_f64().unwrap();
        return Interval { lo: Level::real(round(f, Dir::Down).max(0.0), Dir::Down), hi: Level::real(round(f, Dir::Up), Dir::Up) };
    }
    // log2 v ∈ [log2 top + shift, log2 (top + 1) + shift)
    let shift = bits - 64;
    let top = (v >> shift).to_u64().unwrap() as f64;
    let lo = round(top.log2() + shift as f64, Dir::Down);
    let hi = round((top + 1.0).log2() + shift as f64, Dir::Up);
    Interval { lo: Level { k: 1, v: lo }, hi: Level { k: 1, v: hi } }
}

/// Bounds for a folded expression (no free variables).
fn interval(e: &TowerExpr) -> Interval {
    match e {
        TowerExpr::Const(c) => exact_interval(c),
        TowerExpr::Var(_) => unreachable!("folded expressions are closed"),
        TowerExpr::Add(a, b) => {
            let (x, y) = (interval(a), interval(b));
            Interval { lo: x.lo.add(y.lo, Dir::Down), hi: x.hi.add(y.hi, Dir::Up) }
        }
        TowerExpr::Mul(a, b) => {
            let (x, y) = (interval(a), interval(b));
            Interval { lo: x.lo.mul(y.lo, Dir::Down), hi: x.hi.mul(y.hi, Dir::Up) }
        }
        TowerExpr::Pow(a, b) => {
            let (x, y) = (interval(a), interval(b));
            Interval { lo: x.lo.pow(y.lo, Dir::Down), hi: x.hi.pow(y.hi, Dir::Up) }
        }
        TowerExpr::Tower(k, x) => {
            let mut i = interval(x);
            for _ in 0..*k {
                i = Interval { lo: i.lo.exp2(Dir::Down), hi: i.hi.exp2(Dir::Up) };
            }
            i
        }
    }
}

// ---------------------------------------------------------------------------
// Catalogue.

/// A named bound formula.
#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub expr: TowerExpr,
    pub about: &'static str,
}

impl CatalogueEntry {
    pub fn bind(&self, args: &[u64]) -> Result<Bindings, BoundError> {
        if args.len() != self.params.len() {
            return Err(BoundError::Arity { name: self.name.to_string(), expected: self.params.len(), got: args.len() });
        }
        Ok(bindings(self.params.iter().copied().zip(args.iter().copied())))
    }

    pub fn eval(&self, args: &[u64], ceiling: u64) -> Result<Value, BoundError> {
        eval(&self.expr, &self.bind(args)?, ceiling)
    }
}

/// Upper bound on the constant of the 3-ball retriangulation bound.
pub const BALL_CONSTANT: u64 = 6_000_000;

const CATALOGUE: &[(&str, &[&str], &str, &str)] = &[
    ("main_bound", &["p", "q"], "(+ (e 6 (* 10 p)) (e 6 (* 10 q)))",
        "moves connecting two triangulations of one manifold with p and q tetrahedra"),
    ("vert_bound", &["t"], "(^ 2 (^ 2 (* 400 (^ t 2))))",
        "moves realising the subdivision along a fundamental surface system"),
    ("T2_moves", &["t"], "(e 4 (* 500 (^ t 2)))",
        "moves from a t-tetrahedron triangulation to the standard singular-fibre model"),
    ("T2_tets", &["t"], "(e 3 (* 500 (^ t 2)))",
        "size of the intermediate triangulation in the singular-fibre argument"),
    ("ball_bound", &["s"], "(* (* 6000000 (^ s 2)) (^ 2 (* 6000000 (^ s 2))))",
        "moves retriangulating a 3-ball with s tetrahedra (constant taken at its upper bound)"),
    ("bundle_bound", &["p", "q"], "(+ (e 2 (* 400 (^ p 2))) (e 2 (* 400 (^ q 2))))",
        "moves connecting two triangulations of a surface bundle"),
    ("lemma_norm_moves", &["n", "t"], "(* 200 (* n t))",
        "moves realising a subdivision along a surface with n normal pieces"),
    ("lemma_norm_tets", &["n", "t"], "(* 20 (+ n t))",
        "tetrahedra in a subdivision along a surface with n normal pieces"),
    ("hass_vertex", &["t"], "(^ 2 (* 7 t))", "largest coordinate of a vertex surface"),
    ("hass_fund", &["t"], "(* (* 7 t) (^ 2 (* 7 t)))", "largest coordinate of a fundamental surface"),
    ("kneser_tori", &["t"], "(* 20 t)", "disjoint non-parallel essential tori"),
    ("singular_fibres", &["t"], "(* 40 t)", "singular fibres of a Seifert fibration"),
    ("betti_bound", &["t"], "(* 6 t)", "first Betti number over the rationals or the 2-element field"),
    ("t2_f", &["t"], "(e 2 (* 400 (^ t 2)))", "auxiliary surface-size function of the singular-fibre argument"),
    ("t2_n", &["t"], "(* (* (* (* 40 t) (* 5 (e 2 (* 400 (^ t 2))))) (* 7 (e 2 (* 400 (^ t 2))))) (^ 2 (* 7 (e 2 (* 400 (^ t 2))))))",
        "auxiliary normal-piece count of the singular-fibre argument"),
];

/// All catalogued bound formulas.
pub fn catalogue() -> Vec<CatalogueEntry> {
    CATALOGUE
        .iter()
        .map(|&(name, params, src, about)| CatalogueEntry {
            name,
            params,
            expr: src.parse().expect("catalogue expressions parse"),
            about,
        })
        .collect()
}

pub fn lookup(name: &str) -> Result<CatalogueEntry, BoundError> {
    catalogue().into_iter().find(|e| e.name == name).ok_or_else(|| BoundError::UnknownBound(name.to_string()))
}

/// Whether a path of `len` moves between triangulations with `p` and `q`
/// tetrahedra respects `main_bound`.
pub fn within_main_bound(len: u64, p: u64, q: u64) -> Result<bool, BoundError> {
    let entry = lookup("main_bound")?;
    let env = entry.bind(&[p, q])?;
    Ok(compare(&TowerExpr::constant(len), &entry.expr, &env, DEFAULT_BIT_CEILING)? != Ordering::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> TowerExpr {
        s.parse().unwrap()
    }

    fn exact(s: &str) -> BigUint {
        eval(&ex(s), &Bindings::new(), DEFAULT_BIT_CEILING).unwrap().exact().cloned().unwrap()
    }

    #[test]
    fn small_towers() {
        assert_eq!(exact("(e 2 3)"), BigUint::from(256u32));
        assert_eq!(exact("(e 0 9)"), BigUint::from(9u32));
        assert_eq!(exact("(e 3 2)"), BigUint::from(65536u32));
        assert_eq!(exact("(+ 1 2 3)"), BigUint::from(6u32));
        assert_eq!(exact("(^ 0 0)"), BigUint::one());
    }

    #[test]
    fn overflow_keeps_the_tower() {
        let v = eval(&ex("(e 6 10)"), &Bindings::new(), DEFAULT_BIT_CEILING).unwrap();
        assert_eq!(v, Value::Symbolic { form: ex("(e 6 10)"), ceiling: DEFAULT_BIT_CEILING });
        let m = lookup("main_bound").unwrap().eval(&[1, 1], DEFAULT_BIT_CEILING).unwrap();
        assert_eq!(m, Value::Symbolic { form: ex("(* 2 (e 6 10))"), ceiling: DEFAULT_BIT_CEILING });
    }

    #[test]
    fn round_trip() {
        for e in catalogue() {
            assert_eq!(e.expr.to_string().parse::<TowerExpr>().unwrap(), e.expr);
        }
        assert!("(e x 3)".parse::<TowerExpr>().is_err());
        assert!("(+ 1)".parse::<TowerExpr>().is_err());
        assert!("(^ 1 2".parse::<TowerExpr>().is_err());
    }

    #[test]
    fn unbound() {
        assert_eq!(eval(&ex("(+ x 1)"), &Bindings::new(), 64), Err(BoundError::Unbound("x".into())));
    }

    #[test]
    fn interval_agrees_with_exact() {
        // Force the interval path with a tiny ceiling, check against exact
        // comparison at a large one.
        let env = Bindings::new();
        let pairs = [
            ("(e 2 3)", "255"),
            ("(^ 3 40)", "(^ 2 63)"),
            ("(* 7 (^ 2 100))", "(^ 2 103)"),
            ("(+ (^ 2 200) (^ 2 200))", "(^ 2 201)"),
            ("(e 3 3)", "(^ 3 161)"),
            ("(^ 10 400)", "(e 2 10)"),
        ];
        for (a, b) in pairs {
            let (a, b) = (ex(a), ex(b));
            let truth = compare(&a, &b, &env, DEFAULT_BIT_CEILING).unwrap();
            match compare(&a, &b, &env, 8) {
                Ok(o) => assert_eq!(o, truth, "{a} vs {b}"),
                Err(BoundError::Undecided(..)) => assert_eq!(truth, Ordering::Equal, "{a} vs {b}"),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn towers_grow_with_height() {
        let env = Bindings::new();
        for x in 1..6u64 {
            for k in 0..8u32 {
                let a = TowerExpr::tower(k, TowerExpr::constant(x));
                let b = TowerExpr::tower(k + 1, TowerExpr::constant(x));
                assert_eq!(compare(&a, &b, &env, DEFAULT_BIT_CEILING), Ok(Ordering::Less), "k={k} x={x}");
            }
        }
    }
}

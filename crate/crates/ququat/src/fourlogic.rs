//! Classical four-valued logic and its compilation to quantum gates.
//!
//! The classical side covers truth tables, the standard connective set
//! (Lukasiewicz negation, cyclic shift, the characteristic functions
//! `I_0..I_3`, min/max conjunction and disjunction, the Webb function
//! `V_4`, and the modal pair box/diamond), algebraic law checking, a
//! disjunctive normal form, and a bounded-depth synthesis search.
//!
//! The quantum side compiles classical gates into trace-preserving
//! transfer matrices acting on the generalized computational states
//! `|x] = (sigma_0 + sigma_x)/2` per ququat: `compile_single` handles all
//! 256 single-argument gates; `min_max_gate` and `sheffer_webb_gate` are
//! the two-argument compilations. Each compiled gate is the unique linear
//! map with the required action, because the 4^k logic states of k
//! ququats form a basis of Liouville space.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::liouville::{comp_state, PauliIndex, PauliVector};
use crate::superop::GateMatrix;
use crate::{Error, RMat, Result};

/// Deepest expression tree `synthesize` will search.
pub const MAX_SYNTH_DEPTH: usize = 8;

/// Work budget for `synthesize`: candidate truth tables constructed
/// before the search gives up with an error.
const SYNTH_BUDGET: usize = 20_000_000;

/// A connective of four-valued logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    /// Lukasiewicz negation `3 - x`.
    Neg,
    /// Cyclic shift `x + 1 mod 4`.
    Shift,
    /// Characteristic function: 3 when `x = i`, else 0.
    Ident(u8),
    /// Possibility: 3 when `x > 0`, else 0.
    Diamond,
    /// Necessity: 3 when `x = 3`, else 0.
    Box,
    /// Conjunction `min(x1, x2)`.
    And,
    /// Disjunction `max(x1, x2)`.
    Or,
    /// Webb function `(max(x1, x2) + 1) mod 4`.
    V4,
}

impl Connective {
    /// Number of arguments the connective takes.
    pub fn arity(self) -> usize {
        match self {
            Connective::And | Connective::Or | Connective::V4 => 2,
            _ => 1,
        }
    }

    /// Canonical lowercase token used by the expression syntax.
    pub fn name(self) -> &'static str {
        match self {
            Connective::Neg => "neg",
            Connective::Shift => "shift",
            Connective::Ident(0) => "i0",
            Connective::Ident(1) => "i1",
            Connective::Ident(2) => "i2",
            Connective::Ident(_) => "i3",
            Connective::Diamond => "diamond",
            Connective::Box => "box",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::V4 => "v4",
        }
    }

    /// Looks up a connective by token, case-insensitively.
    pub fn parse(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "neg" => Some(Connective::Neg),
            "shift" => Some(Connective::Shift),
            "i0" => Some(Connective::Ident(0)),
            "i1" => Some(Connective::Ident(1)),
            "i2" => Some(Connective::Ident(2)),
            "i3" => Some(Connective::Ident(3)),
            "diamond" => Some(Connective::Diamond),
            "box" => Some(Connective::Box),
            "and" => Some(Connective::And),
            "or" => Some(Connective::Or),
            "v4" => Some(Connective::V4),
            _ => None,
        }
    }

    /// Evaluates the connective on arguments already known to be valid.
    fn apply(self, args: &[u8]) -> u8 {
        match self {
            Connective::Neg => 3 - args[0],
            Connective::Shift => (args[0] + 1) % 4,
            Connective::Ident(i) => {
                if args[0] == i {
                    3
                } else {
                    0
                }
            }
            Connective::Diamond => {
                if args[0] > 0 {
                    3
                } else {
                    0
                }
            }
            Connective::Box => {
                if args[0] == 3 {
                    3
                } else {
                    0
                }
            }
            Connective::And => args[0].min(args[1]),
            Connective::Or => args[0].max(args[1]),
            Connective::V4 => (args[0].max(args[1]) + 1) % 4,
        }
    }
}

/// Evaluates a named connective on explicit argument values.
pub fn eval_builtin(name: &str, args: &[u8]) -> Result<u8> {
    let c = Connective::parse(name)
        .ok_or_else(|| Error::UnknownName(format!("connective `{name}`")))?;
    if args.len() != c.arity() {
        return Err(Error::ShapeMismatch(format!(
            "`{}` takes {} argument(s), got {}",
            c.name(),
            c.arity(),
            args.len()
        )));
    }
    check_values(args)?;
    Ok(c.apply(args))
}

fn check_values(values: &[u8]) -> Result<()> {
    for &v in values {
        if v > 3 {
            return Err(Error::OutOfRange(format!("logic value {v} not in 0..=3")));
        }
    }
    Ok(())
}

/// Expression tree over variables `x1, x2, ...`, constants `0..=3`,
/// and the four-valued connectives.
///
/// The textual form is prefix notation: `(or (neg x1) (i2 x2))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogicExpr {
    /// Variable reference; indices are 1-based to match `x1, x2, ...`.
    Var(usize),
    /// Constant in `0..=3`.
    Const(u8),
    /// Connective application; argument count equals the arity.
    Apply(Connective, Vec<LogicExpr>),
}

impl LogicExpr {
    /// Applies a unary connective.
    pub fn unary(c: Connective, arg: LogicExpr) -> Self {
        debug_assert_eq!(c.arity(), 1);
        LogicExpr::Apply(c, vec![arg])
    }

    /// Applies a binary connective.
    pub fn binary(c: Connective, lhs: LogicExpr, rhs: LogicExpr) -> Self {
        debug_assert_eq!(c.arity(), 2);
        LogicExpr::Apply(c, vec![lhs, rhs])
    }

    /// Evaluates on an assignment; `args[0]` is `x1`.
    pub fn eval(&self, args: &[u8]) -> Result<u8> {
        check_values(args)?;
        self.eval_unchecked(args)
    }

    fn eval_unchecked(&self, args: &[u8]) -> Result<u8> {
        match self {
            LogicExpr::Var(i) => args.get(i - 1).copied().ok_or_else(|| {
                Error::OutOfRange(format!("variable x{i} but only {} value(s) given", args.len()))
            }),
            LogicExpr::Const(c) => Ok(*c),
            LogicExpr::Apply(c, children) => {
                let vals: Vec<u8> = children
                    .iter()
                    .map(|e| e.eval_unchecked(args))
                    .collect::<Result<_>>()?;
                Ok(c.apply(&vals))
            }
        }
    }

    /// Largest variable index referenced, i.e. the arity needed to
    /// evaluate the expression; 0 for variable-free expressions.
    pub fn arity(&self) -> usize {
        match self {
            LogicExpr::Var(i) => *i,
            LogicExpr::Const(_) => 0,
            LogicExpr::Apply(_, children) => {
                children.iter().map(LogicExpr::arity).max().unwrap_or(0)
            }
        }
    }

    /// Tree height: leaves are 0, each application adds 1.
    pub fn height(&self) -> usize {
        match self {
            LogicExpr::Var(_) | LogicExpr::Const(_) => 0,
            LogicExpr::Apply(_, children) => {
                1 + children.iter().map(LogicExpr::height).max().unwrap_or(0)
            }
        }
    }
}

impl fmt::Display for LogicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicExpr::Var(i) => write!(f, "x{i}"),
            LogicExpr::Const(c) => write!(f, "{c}"),
            LogicExpr::Apply(c, children) => {
                write!(f, "({}", c.name())?;
                for child in children {
                    write!(f, " {child}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for LogicExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let expr = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input after expression: `{}`",
                tokens[pos..].join(" ")
            )));
        }
        Ok(expr)
    }
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
            }
            c if c.is_ascii_alphanumeric() => word.push(c),
            c => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(tokens)
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<LogicExpr> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
    *pos += 1;
    if tok == ")" {
        return Err(Error::Parse("unexpected `)`".into()));
    }
    if tok != "(" {
        return parse_atom(tok);
    }
    let head = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("missing connective after `(`".into()))?;
    *pos += 1;
    let c = Connective::parse(head)
        .ok_or_else(|| Error::UnknownName(format!("connective `{head}`")))?;
    let mut children = Vec::new();
    loop {
        match tokens.get(*pos) {
            None => return Err(Error::Parse("missing `)`".into())),
            Some(t) if t == ")" => {
                *pos += 1;
                break;
            }
            Some(_) => children.push(parse_expr(tokens, pos)?),
        }
    }
    if children.len() != c.arity() {
        return Err(Error::Parse(format!(
            "`{}` takes {} argument(s), got {}",
            c.name(),
            c.arity(),
            children.len()
        )));
    }
    Ok(LogicExpr::Apply(c, children))
}

fn parse_atom(tok: &str) -> Result<LogicExpr> {
    if let Ok(c) = tok.parse::<u8>() {
        if c > 3 {
            return Err(Error::Parse(format!("constant {c} not in 0..=3")));
        }
        return Ok(LogicExpr::Const(c));
    }
    let lower = tok.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix('x') {
        let i: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad variable `{tok}`")))?;
        if i == 0 {
            return Err(Error::Parse("variables are numbered from x1".into()));
        }
        return Ok(LogicExpr::Var(i));
    }
    Err(Error::Parse(format!("bad atom `{tok}`")))
}

/// A total function `{0,1,2,3}^k -> {0,1,2,3}` stored as a truth table.
///
/// Row index of an assignment is `x1*4^(k-1) + ... + xk`, the first
/// argument being the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalGate {
    arity: usize,
    table: Vec<u8>,
}

impl ClassicalGate {
    /// Builds a gate from an explicit table of length `4^arity`.
    pub fn new(arity: usize, table: Vec<u8>) -> Result<Self> {
        if table.len() != 4usize.pow(arity as u32) {
            return Err(Error::ShapeMismatch(format!(
                "table length {} is not 4^{arity}",
                table.len()
            )));
        }
        check_values(&table)?;
        Ok(Self { arity, table })
    }

    /// Tabulates a function of `arity` arguments.
    pub fn from_fn(arity: usize, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        let size = 4usize.pow(arity as u32);
        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            table.push(f(&assignment(arity, idx)));
        }
        Self::new(arity, table)
    }

    /// Tabulates an expression; the arity is the largest variable used.
    pub fn from_expr(e: &LogicExpr) -> Result<Self> {
        let arity = e.arity();
        let size = 4usize.pow(arity as u32);
        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            table.push(e.eval(&assignment(arity, idx))?);
        }
        Self::new(arity, table)
    }

    /// The truth table of a bare connective.
    pub fn from_connective(c: Connective) -> Self {
        let args: Vec<LogicExpr> = (1..=c.arity()).map(LogicExpr::Var).collect();
        Self::from_expr(&LogicExpr::Apply(c, args)).expect("connectives are total")
    }

    /// Number of arguments.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// The full truth table in row-index order.
    pub fn table(&self) -> &[u8] {
        &self.table
    }

    /// Evaluates the gate on an assignment.
    pub fn eval(&self, args: &[u8]) -> Result<u8> {
        if args.len() != self.arity {
            return Err(Error::ShapeMismatch(format!(
                "gate takes {} argument(s), got {}",
                self.arity,
                args.len()
            )));
        }
        check_values(args)?;
        let mut idx = 0;
        for &a in args {
            idx = idx * 4 + a as usize;
        }
        Ok(self.table[idx])
    }
}

fn assignment(arity: usize, mut idx: usize) -> Vec<u8> {
    let mut args = vec![0u8; arity];
    for slot in (0..arity).rev() {
        args[slot] = (idx % 4) as u8;
        idx /= 4;
    }
    args
}

/// Disjunctive normal form: the disjunction over all assignments `k` of
/// `I_{k_1}(x1) and ... and I_{k_n}(xn) and g(k)`.
///
/// Evaluates identically to `g` on every input: the matching assignment
/// contributes `g(k)` and every other term is 0.
pub fn dnf(g: &ClassicalGate) -> LogicExpr {
    if g.arity == 0 {
        return LogicExpr::Const(g.table[0]);
    }
    let mut terms = Vec::with_capacity(g.table.len());
    for (idx, &out) in g.table.iter().enumerate() {
        let args = assignment(g.arity, idx);
        let mut term: Option<LogicExpr> = None;
        for (slot, &digit) in args.iter().enumerate() {
            let factor = LogicExpr::unary(Connective::Ident(digit), LogicExpr::Var(slot + 1));
            term = Some(match term {
                None => factor,
                Some(t) => LogicExpr::binary(Connective::And, t, factor),
            });
        }
        let term = LogicExpr::binary(Connective::And, term.expect("arity >= 1"), LogicExpr::Const(out));
        terms.push(term);
    }
    let mut expr = terms.remove(0);
    for term in terms {
        expr = LogicExpr::binary(Connective::Or, expr, term);
    }
    expr
}

/// Outcome of the exhaustive algebraic law check.
///
/// The boolean fields record laws that hold over every input tuple; the
/// witness fields carry a counterexample for each identity that fails
/// for the cyclic shift where it holds for Lukasiewicz negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub conjunction_commutative: bool,
    pub disjunction_commutative: bool,
    pub conjunction_associative: bool,
    pub disjunction_associative: bool,
    pub conjunction_distributes: bool,
    pub disjunction_distributes: bool,
    pub double_negation: bool,
    pub de_morgan_negation: bool,
    /// Some `x` with `shift(shift(x)) != x`.
    pub shift_involution_counterexample: Option<u8>,
    /// Some `(x1, x2)` with `shift(min(x1,x2)) != max(shift(x1), shift(x2))`.
    pub shift_de_morgan_counterexample: Option<(u8, u8)>,
}

impl LawReport {
    /// True when every law holds and both non-laws have witnesses.
    pub fn all_confirmed(&self) -> bool {
        self.conjunction_commutative
            && self.disjunction_commutative
            && self.conjunction_associative
            && self.disjunction_associative
            && self.conjunction_distributes
            && self.disjunction_distributes
            && self.double_negation
            && self.de_morgan_negation
            && self.shift_involution_counterexample.is_some()
            && self.shift_de_morgan_counterexample.is_some()
    }
}

/// Exhaustively checks the lattice and negation laws over all inputs.
pub fn check_laws() -> LawReport {
    let vals = [0u8, 1, 2, 3];
    let neg = |x: u8| 3 - x;
    let shift = |x: u8| (x + 1) % 4;

    let mut report = LawReport {
        conjunction_commutative: true,
        disjunction_commutative: true,
        conjunction_associative: true,
        disjunction_associative: true,
        conjunction_distributes: true,
        disjunction_distributes: true,
        double_negation: true,
        de_morgan_negation: true,
        shift_involution_counterexample: None,
        shift_de_morgan_counterexample: None,
    };

    for x in vals {
        report.double_negation &= neg(neg(x)) == x;
        if shift(shift(x)) != x && report.shift_involution_counterexample.is_none() {
            report.shift_involution_counterexample = Some(x);
        }
    }
    for x in vals {
        for y in vals {
            report.conjunction_commutative &= x.min(y) == y.min(x);
            report.disjunction_commutative &= x.max(y) == y.max(x);
            report.de_morgan_negation &= neg(x.min(y)) == neg(x).max(neg(y));
            report.de_morgan_negation &= neg(x.max(y)) == neg(x).min(neg(y));
            if shift(x.min(y)) != shift(x).max(shift(y))
                && report.shift_de_morgan_counterexample.is_none()
            {
                report.shift_de_morgan_counterexample = Some((x, y));
            }
            for z in vals {
                report.conjunction_associative &= x.min(y).min(z) == x.min(y.min(z));
                report.disjunction_associative &= x.max(y).max(z) == x.max(y.max(z));
                report.conjunction_distributes &= x.min(y.max(z)) == x.min(y).max(x.min(z));
                report.disjunction_distributes &= x.max(y.min(z)) == x.max(y).min(x.max(z));
            }
        }
    }
    report
}

/// The generalized computational state `|x_1, ..., x_k]`: the tensor
/// product of one single-ququat computational state per digit.
pub fn logic_state(digits: &[u8]) -> Result<PauliVector> {
    if digits.is_empty() {
        return Err(Error::ShapeMismatch("logic state needs at least one digit".into()));
    }
    check_values(digits)?;
    let mut state: Option<PauliVector> = None;
    for &d in digits {
        let single = comp_state(&PauliIndex::new(1, d as usize)?);
        state = Some(match state {
            None => single,
            Some(s) => s.tensor(&single),
        });
    }
    Ok(state.expect("at least one digit"))
}

/// Compiles a single-argument classical gate to the unique linear
/// trace-preserving transfer matrix with `E|x] = |g(x)]`.
///
/// Column 0 carries `|0) + |g(0))`; column `k > 0` carries `|g(k))` when
/// `g(k) != 0`, minus `|g(0))` when `g(0) != 0` so that the column-0
/// contribution cancels on every computational input. The result is
/// unital exactly when `g(0) = 0`.
pub fn compile_single(g: &ClassicalGate) -> Result<GateMatrix> {
    if g.arity != 1 {
        return Err(Error::ShapeMismatch(format!(
            "single-argument compilation needs arity 1, got {}",
            g.arity
        )));
    }
    let t = &g.table;
    let mut m = RMat::zeros(4, 4);
    m[(0, 0)] = 1.0;
    for k in 1..4 {
        let gk = t[k] as usize;
        if gk != 0 {
            m[(gk, k)] += 1.0;
        }
    }
    let g0 = t[0] as usize;
    if g0 != 0 {
        m[(g0, 0)] += 1.0;
        for nu in 1..4 {
            m[(g0, nu)] -= 1.0;
        }
    }
    GateMatrix::new(1, m)
}

/// The two-ququat gate sorting computational digits descending:
/// `|x1, x2] -> |x1 or x2, x1 and x2]` (disjunction first).
///
/// Unital and trace-preserving. Uniquely determined by the action since
/// the 16 two-digit logic states span Liouville space.
pub fn min_max_gate() -> GateMatrix {
    let idx = |a: usize, b: usize| 4 * a + b;
    let mut m = RMat::zeros(16, 16);
    m[(idx(0, 0), idx(0, 0))] = 1.0;
    for a in 1..4 {
        m[(idx(a, 0), idx(a, 0))] = 1.0;
        m[(idx(a, 0), idx(0, a))] = 1.0;
    }
    for a in 1..4 {
        for b in 1..4 {
            let col = idx(a, b);
            let (hi, lo) = (a.max(b), a.min(b));
            m[(idx(hi, lo), col)] += 1.0;
            m[(idx(0, lo), col)] += 1.0;
            m[(idx(lo, 0), col)] -= 1.0;
        }
    }
    GateMatrix::new(2, m).expect("16x16 gate is well formed")
}

/// The two-ququat Sheffer-Webb gate
/// `|x1, x2] -> |V_4(x1, x2), neg V_4(x1, x2)]`.
///
/// Trace-preserving but not unital. Uniquely determined by the action.
/// Because `V_4` depends only on `max(x1, x2)`, every column is a signed
/// combination of the four output states `s_a` for `a = max`.
pub fn sheffer_webb_gate() -> GateMatrix {
    let out_state = |a: u8| {
        let v = (a + 1) % 4;
        logic_state(&[v, 3 - v]).expect("digits in range")
    };
    let s: Vec<PauliVector> = (0..4).map(out_state).collect();
    let idx = |a: usize, b: usize| 4 * a + b;
    let mut m = RMat::zeros(16, 16);
    for row in 0..16 {
        m[(row, idx(0, 0))] = s[0].coeffs()[row];
    }
    for a in 1..4 {
        for row in 0..16 {
            let delta = s[a].coeffs()[row] - s[0].coeffs()[row];
            m[(row, idx(a, 0))] = delta;
            m[(row, idx(0, a))] = delta;
        }
    }
    for a in 1..4 {
        for b in 1..4 {
            let lo = a.min(b);
            for row in 0..16 {
                m[(row, idx(a, b))] = s[0].coeffs()[row] - s[lo].coeffs()[row];
            }
        }
    }
    GateMatrix::new(2, m).expect("16x16 gate is well formed")
}

/// Searches for an expression over `basis` whose table equals `g`,
/// trying trees of increasing height up to `max_depth` (at most
/// [`MAX_SYNTH_DEPTH`]).
///
/// Candidates are deduplicated by truth table, so the first expression
/// reaching a table is a shallowest one. Returns `Ok(None)` when no tree
/// within the depth bound matches; that is a bounded-search miss, not a
/// proof of inexpressibility. Errors when the work budget is exhausted
/// before the depth bound is reached.
pub fn synthesize(
    g: &ClassicalGate,
    basis: &[Connective],
    max_depth: usize,
) -> Result<Option<LogicExpr>> {
    if max_depth > MAX_SYNTH_DEPTH {
        return Err(Error::OutOfRange(format!(
            "synthesis depth {max_depth} exceeds the supported maximum {MAX_SYNTH_DEPTH}"
        )));
    }
    let arity = g.arity;
    let size = g.table.len();
    let target = &g.table;

    // (table, expression, height), grown layer by layer.
    let mut known: Vec<(Vec<u8>, LogicExpr)> = Vec::new();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut layer_starts = vec![0usize];
    let mut budget = SYNTH_BUDGET;

    let push = |known: &mut Vec<(Vec<u8>, LogicExpr)>,
                    seen: &mut HashSet<Vec<u8>>,
                    table: Vec<u8>,
                    expr: LogicExpr|
     -> Option<LogicExpr> {
        if table == *target {
            return Some(expr);
        }
        if seen.insert(table.clone()) {
            known.push((table, expr));
        }
        None
    };

    for v in 1..=arity {
        let table: Vec<u8> = (0..size).map(|idx| assignment(arity, idx)[v - 1]).collect();
        if let Some(hit) = push(&mut known, &mut seen, table, LogicExpr::Var(v)) {
            return Ok(Some(hit));
        }
    }
    for c in 0..4u8 {
        if let Some(hit) = push(&mut known, &mut seen, vec![c; size], LogicExpr::Const(c)) {
            return Ok(Some(hit));
        }
    }

    for _depth in 1..=max_depth {
        let frontier = *layer_starts.last().expect("seeded") ..known.len();
        if frontier.is_empty() {
            break;
        }
        layer_starts.push(known.len());
        let mut fresh: Vec<(Vec<u8>, LogicExpr)> = Vec::new();
        for &c in basis {
            match c.arity() {
                1 => {
                    for i in frontier.clone() {
                        budget = budget.checked_sub(1).ok_or_else(budget_error)?;
                        let table: Vec<u8> =
                            known[i].0.iter().map(|&v| c.apply(&[v])).collect();
                        let expr = LogicExpr::unary(c, known[i].1.clone());
                        if let Some(hit) = push(&mut fresh, &mut seen, table, expr) {
                            return Ok(Some(hit));
                        }
                    }
                }
                _ => {
                    // Ordered pairs with at least one argument in the
                    // frontier: first argument from the frontier paired
                    // with anything, plus older first arguments paired
                    // with frontier second arguments.
                    let mut pairs: Vec<(usize, usize)> = Vec::new();
                    for i in frontier.clone() {
                        for j in 0..known.len() {
                            pairs.push((i, j));
                        }
                    }
                    for j in 0..frontier.start {
                        for i in frontier.clone() {
                            pairs.push((j, i));
                        }
                    }
                    for (lhs, rhs) in pairs {
                        budget = budget.checked_sub(1).ok_or_else(budget_error)?;
                        let table: Vec<u8> = known[lhs]
                            .0
                            .iter()
                            .zip(&known[rhs].0)
                            .map(|(&x, &y)| c.apply(&[x, y]))
                            .collect();
                        let expr =
                            LogicExpr::binary(c, known[lhs].1.clone(), known[rhs].1.clone());
                        if let Some(hit) = push(&mut fresh, &mut seen, table, expr) {
                            return Ok(Some(hit));
                        }
                    }
                }
            }
        }
        known.extend(fresh);
    }
    Ok(None)
}

fn budget_error() -> Error {
    Error::OutOfRange("synthesis work budget exhausted before the depth bound".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_diff_real;
    use crate::random::rng;
    use crate::superop::{apply, is_trace_preserving, is_unital};
    use rand::Rng;

    fn dyads(entries: &[(usize, usize, f64)]) -> RMat {
        let mut m = RMat::zeros(4, 4);
        for &(row, col, w) in entries {
            m[(row, col)] += w;
        }
        m
    }

    #[test]
    fn builtin_values_match_the_tables() {
        assert_eq!(eval_builtin("neg", &[0]).unwrap(), 3);
        assert_eq!(eval_builtin("neg", &[1]).unwrap(), 2);
        assert_eq!(eval_builtin("v4", &[2, 3]).unwrap(), 0);
        assert_eq!(eval_builtin("v4", &[0, 0]).unwrap(), 1);
        assert_eq!(eval_builtin("and", &[1, 2]).unwrap(), 1);
        assert_eq!(eval_builtin("or", &[1, 2]).unwrap(), 2);
        assert_eq!(eval_builtin("shift", &[3]).unwrap(), 0);
        assert_eq!(eval_builtin("i2", &[2]).unwrap(), 3);
        assert_eq!(eval_builtin("i2", &[1]).unwrap(), 0);
        assert_eq!(eval_builtin("BOX", &[3]).unwrap(), 3);
        assert_eq!(eval_builtin("diamond", &[0]).unwrap(), 0);
        assert!(matches!(eval_builtin("nand", &[0, 0]), Err(Error::UnknownName(_))));
        assert!(matches!(eval_builtin("neg", &[4]), Err(Error::OutOfRange(_))));
        assert!(matches!(eval_builtin("neg", &[0, 1]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn unary_connective_tables_are_correct() {
        let expect = [
            (Connective::Neg, [3, 2, 1, 0]),
            (Connective::Shift, [1, 2, 3, 0]),
            (Connective::Ident(0), [3, 0, 0, 0]),
            (Connective::Ident(1), [0, 3, 0, 0]),
            (Connective::Ident(2), [0, 0, 3, 0]),
            (Connective::Ident(3), [0, 0, 0, 3]),
            (Connective::Diamond, [0, 3, 3, 3]),
            (Connective::Box, [0, 0, 0, 3]),
        ];
        for (c, table) in expect {
            assert_eq!(ClassicalGate::from_connective(c).table(), &table, "{}", c.name());
        }
    }

    #[test]
    fn necessity_is_negated_possibility_of_negation() {
        for x in 0..4u8 {
            let inner = eval_builtin("diamond", &[3 - x]).unwrap();
            assert_eq!(eval_builtin("box", &[x]).unwrap(), 3 - inner);
        }
    }

    #[test]
    fn expressions_parse_evaluate_and_print() {
        let e: LogicExpr = "(or (neg x1) (I2 x2))".parse().unwrap();
        assert_eq!(e.to_string(), "(or (neg x1) (i2 x2))");
        assert_eq!(e.arity(), 2);
        assert_eq!(e.height(), 2);
        assert_eq!(e.eval(&[2, 2]).unwrap(), 3);
        assert_eq!(e.eval(&[0, 0]).unwrap(), 3);
        assert_eq!(e.eval(&[3, 0]).unwrap(), 0);
        let round: LogicExpr = e.to_string().parse().unwrap();
        assert_eq!(round, e);
    }

    #[test]
    fn parser_rejects_malformed_input() {
        for bad in [
            "(and x1)",
            "(foo x1)",
            "(or x1 x2",
            "x0",
            "4",
            "(or x1 x2) junk",
            "",
            ")",
            "(neg x1 x2)",
        ] {
            assert!(bad.parse::<LogicExpr>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn tables_index_with_first_argument_most_significant() {
        let g = ClassicalGate::from_connective(Connective::V4);
        assert_eq!(g.eval(&[2, 3]).unwrap(), 0);
        assert_eq!(g.table()[2 * 4 + 3], 0);
        assert_eq!(g.eval(&[1, 2]).unwrap(), 3);
        assert_eq!(g.table()[1 * 4 + 2], 3);
        assert!(ClassicalGate::new(1, vec![0, 1, 2]).is_err());
        assert!(ClassicalGate::new(1, vec![0, 1, 2, 4]).is_err());
    }

    #[test]
    fn normal_form_reproduces_every_gate() {
        let zero = ClassicalGate::new(1, vec![0; 4]).unwrap();
        assert_eq!(ClassicalGate::from_expr(&dnf(&zero)).unwrap(), zero);

        let neg = ClassicalGate::from_connective(Connective::Neg);
        let neg_dnf = dnf(&neg);
        assert_eq!(ClassicalGate::from_expr(&neg_dnf).unwrap().table(), &[3, 2, 1, 0]);

        let mut r = rng(71);
        for _ in 0..20 {
            let table: Vec<u8> = (0..16).map(|_| r.gen_range(0..4)).collect();
            let g = ClassicalGate::new(2, table).unwrap();
            let e = dnf(&g);
            assert_eq!(ClassicalGate::from_expr(&e).unwrap(), g);
            let reparsed: LogicExpr = e.to_string().parse().unwrap();
            assert_eq!(reparsed, e);
        }
    }

    #[test]
    fn lattice_laws_hold_and_shift_non_laws_are_witnessed() {
        let report = check_laws();
        assert!(report.all_confirmed());
        let x = report.shift_involution_counterexample.unwrap();
        assert_ne!((x + 2) % 4, x);
        let (a, b) = report.shift_de_morgan_counterexample.unwrap();
        assert_ne!((a.min(b) + 1) % 4, ((a + 1) % 4).max((b + 1) % 4));
        assert_eq!(eval_builtin("neg", &[eval_builtin("neg", &[2]).unwrap()]).unwrap(), 2);
    }

    #[test]
    fn logic_states_are_tensor_products_of_computational_states() {
        assert_eq!(logic_state(&[0]).unwrap().coeffs().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(logic_state(&[3]).unwrap().coeffs().as_slice(), &[1.0, 0.0, 0.0, 1.0]);
        let s = logic_state(&[1, 2]).unwrap();
        let mut want = vec![0.0; 16];
        want[0] = 1.0;
        want[2] = 1.0;
        want[4] = 1.0;
        want[6] = 1.0;
        assert_eq!(s.coeffs().as_slice(), want.as_slice());
        assert!(logic_state(&[]).is_err());
        assert!(logic_state(&[4]).is_err());
    }

    #[test]
    fn every_single_argument_gate_compiles_to_its_action() {
        for code in 0..256usize {
            let table: Vec<u8> = (0..4).map(|k| ((code >> (2 * k)) & 3) as u8).collect();
            let g = ClassicalGate::new(1, table.clone()).unwrap();
            let e = compile_single(&g).unwrap();
            assert!(is_trace_preserving(&e), "table {table:?}");
            assert_eq!(is_unital(&e), table[0] == 0, "table {table:?}");
            for alpha in 0..4u8 {
                let out = apply(&e, &logic_state(&[alpha]).unwrap()).unwrap();
                let want = logic_state(&[table[alpha as usize]]).unwrap();
                for (got, want) in out.coeffs().iter().zip(want.coeffs().iter()) {
                    assert!((got - want).abs() < 1e-12, "table {table:?} input {alpha}");
                }
            }
        }
    }

    #[test]
    fn compiled_connectives_match_expected_dyad_forms() {
        let cases: Vec<(ClassicalGate, RMat)> = vec![
            (
                ClassicalGate::from_connective(Connective::Neg),
                dyads(&[
                    (0, 0, 1.0),
                    (1, 2, 1.0),
                    (2, 1, 1.0),
                    (3, 0, 1.0),
                    (3, 1, -1.0),
                    (3, 2, -1.0),
                    (3, 3, -1.0),
                ]),
            ),
            (
                ClassicalGate::from_connective(Connective::Ident(0)),
                dyads(&[(0, 0, 1.0), (3, 0, 1.0), (3, 1, -1.0), (3, 2, -1.0), (3, 3, -1.0)]),
            ),
            (
                ClassicalGate::from_connective(Connective::Ident(1)),
                dyads(&[(0, 0, 1.0), (3, 1, 1.0)]),
            ),
            (
                ClassicalGate::from_connective(Connective::Ident(2)),
                dyads(&[(0, 0, 1.0), (3, 2, 1.0)]),
            ),
            (
                ClassicalGate::from_connective(Connective::Ident(3)),
                dyads(&[(0, 0, 1.0), (3, 3, 1.0)]),
            ),
            (
                ClassicalGate::from_connective(Connective::Shift),
                dyads(&[
                    (0, 0, 1.0),
                    (1, 0, 1.0),
                    (2, 1, 1.0),
                    (3, 2, 1.0),
                    (1, 1, -1.0),
                    (1, 2, -1.0),
                    (1, 3, -1.0),
                ]),
            ),
            (
                ClassicalGate::new(1, vec![0; 4]).unwrap(),
                dyads(&[(0, 0, 1.0)]),
            ),
            (
                ClassicalGate::new(1, vec![2; 4]).unwrap(),
                dyads(&[(0, 0, 1.0), (2, 0, 1.0)]),
            ),
            (
                ClassicalGate::from_connective(Connective::Diamond),
                dyads(&[(0, 0, 1.0), (3, 1, 1.0), (3, 2, 1.0), (3, 3, 1.0)]),
            ),
            (
                ClassicalGate::from_connective(Connective::Box),
                dyads(&[(0, 0, 1.0), (3, 3, 1.0)]),
            ),
        ];
        for (g, want) in cases {
            let e = compile_single(&g).unwrap();
            assert_eq!(e.matrix(), &want, "table {:?}", g.table());
        }
    }

    #[test]
    fn compile_single_requires_arity_one() {
        let g = ClassicalGate::from_connective(Connective::And);
        assert!(matches!(compile_single(&g), Err(Error::ShapeMismatch(_))));
    }

    fn unique_gate_for_action(out_digits: impl Fn(u8, u8) -> [u8; 2]) -> RMat {
        let mut m_in = RMat::zeros(16, 16);
        let mut m_out = RMat::zeros(16, 16);
        for a in 0..4u8 {
            for b in 0..4u8 {
                let col = (a * 4 + b) as usize;
                let input = logic_state(&[a, b]).unwrap();
                let output = logic_state(&out_digits(a, b)).unwrap();
                for row in 0..16 {
                    m_in[(row, col)] = input.coeffs()[row];
                    m_out[(row, col)] = output.coeffs()[row];
                }
            }
        }
        let inv = m_in.try_inverse().expect("logic states form a basis");
        m_out * inv
    }

    #[test]
    fn min_max_gate_sorts_all_sixteen_inputs() {
        let e = min_max_gate();
        assert!(is_trace_preserving(&e));
        assert!(is_unital(&e));
        for a in 0..4u8 {
            for b in 0..4u8 {
                let out = apply(&e, &logic_state(&[a, b]).unwrap()).unwrap();
                let want = logic_state(&[a.max(b), a.min(b)]).unwrap();
                for (got, want) in out.coeffs().iter().zip(want.coeffs().iter()) {
                    assert!((got - want).abs() < 1e-12, "input ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn min_max_gate_is_the_unique_linear_realization() {
        let solved = unique_gate_for_action(|a, b| [a.max(b), a.min(b)]);
        assert!(max_diff_real(min_max_gate().matrix(), &solved) < 1e-12);
    }

    #[test]
    fn sheffer_webb_gate_realizes_the_webb_function() {
        let e = sheffer_webb_gate();
        assert!(is_trace_preserving(&e));
        assert!(!is_unital(&e));
        for a in 0..4u8 {
            for b in 0..4u8 {
                let v = (a.max(b) + 1) % 4;
                let out = apply(&e, &logic_state(&[a, b]).unwrap()).unwrap();
                let want = logic_state(&[v, 3 - v]).unwrap();
                for (got, want) in out.coeffs().iter().zip(want.coeffs().iter()) {
                    assert!((got - want).abs() < 1e-12, "input ({a},{b})");
                }
            }
        }
        let zero = apply(&e, &logic_state(&[0, 0]).unwrap()).unwrap();
        assert_eq!(zero.coeffs(), logic_state(&[1, 2]).unwrap().coeffs());
        let two_three = apply(&e, &logic_state(&[2, 3]).unwrap()).unwrap();
        assert_eq!(two_three.coeffs(), logic_state(&[0, 3]).unwrap().coeffs());
    }

    #[test]
    fn sheffer_webb_gate_is_the_unique_linear_realization() {
        let solved = unique_gate_for_action(|a, b| {
            let v = (a.max(b) + 1) % 4;
            [v, 3 - v]
        });
        assert!(max_diff_real(sheffer_webb_gate().matrix(), &solved) < 1e-12);
    }

    #[test]
    fn synthesis_finds_shallow_expressions() {
        let or_gate = ClassicalGate::from_connective(Connective::Or);
        let found = synthesize(&or_gate, &[Connective::Shift, Connective::Or], 6)
            .unwrap()
            .unwrap();
        assert_eq!(found.height(), 1);
        assert_eq!(ClassicalGate::from_expr(&found).unwrap(), or_gate);

        let shift_gate = ClassicalGate::from_connective(Connective::Shift);
        let found = synthesize(&shift_gate, &[Connective::V4], 6).unwrap().unwrap();
        assert_eq!(found.height(), 1);
        assert_eq!(ClassicalGate::from_expr(&found).unwrap().table(), &[1, 2, 3, 0]);
    }

    #[test]
    fn negation_from_shift_and_disjunction_needs_depth_seven() {
        let neg = ClassicalGate::from_connective(Connective::Neg);
        let basis = [Connective::Shift, Connective::Or];
        assert!(synthesize(&neg, &basis, 6).unwrap().is_none());
        let found = synthesize(&neg, &basis, 7).unwrap().unwrap();
        assert_eq!(found.height(), 7);
        assert_eq!(ClassicalGate::from_expr(&found).unwrap().table(), &[3, 2, 1, 0]);
    }

    #[test]
    fn synthesis_reports_monotone_bases_as_exhausted() {
        let neg = ClassicalGate::from_connective(Connective::Neg);
        let result = synthesize(&neg, &[Connective::And, Connective::Or], 8).unwrap();
        assert!(result.is_none());
    }

    #[test]
    fn synthesis_depth_is_capped() {
        let neg = ClassicalGate::from_connective(Connective::Neg);
        assert!(matches!(
            synthesize(&neg, &[Connective::Or], 9),
            Err(Error::OutOfRange(_))
        ));
    }
}

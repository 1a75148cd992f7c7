//! A tiny guarded-command language and its finite-fragment explorer.
//!
//! Programs are lists of `init` lines (one initial state each) and rules
//! `guard -> var := expr, ...`. All arithmetic is arbitrary precision;
//! exponentials are restricted to base two. Exploration is breadth-first
//! with rules tried in file order, so the produced system is bit-for-bit
//! reproducible.
//!
//! Each explored valuation becomes a state id by zigzagging every
//! variable value into a natural and folding the Cantor pairing over the
//! variables in sorted name order. The pairing is strictly monotone in
//! each argument, so ids grow with variable magnitudes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::relation::{FiniteRelation, TransitionSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(BigInt),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// 2^(e); the only exponential the language admits.
    Pow2(Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub guard: Vec<Comparison>,
    pub assigns: Vec<(usize, Expr)>,
    pub text: String,
}

/// A parsed program over variables sorted by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub vars: Vec<String>,
    pub inits: Vec<Vec<BigInt>>,
    pub rules: Vec<Rule>,
}

/// Result of exploring a program fragment.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub system: TransitionSystem,
    /// Decoded valuation of every explored state id, in variable order.
    pub states: BTreeMap<u64, Vec<BigInt>>,
    pub vars: Vec<String>,
    /// Set when a cap cut the exploration short; every analysis result
    /// is then relative to the explored fragment.
    pub truncated: bool,
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Arrow,
    Assign,
    Le,
    Ge,
    Ne,
    Eq,
    Lt,
    Gt,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Amp,
}

fn lex(line: &str) -> Result<Vec<Tok>> {
    let bytes = line.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push(Tok::Arrow);
                i += 2;
            }
            ':' if bytes.get(i + 1) == Some(&b'=') => {
                toks.push(Tok::Assign);
                i += 2;
            }
            '<' if bytes.get(i + 1) == Some(&b'=') => {
                toks.push(Tok::Le);
                i += 2;
            }
            '>' if bytes.get(i + 1) == Some(&b'=') => {
                toks.push(Tok::Ge);
                i += 2;
            }
            '!' if bytes.get(i + 1) == Some(&b'=') => {
                toks.push(Tok::Ne);
                i += 2;
            }
            '=' if bytes.get(i + 1) == Some(&b'=') => {
                toks.push(Tok::Eq);
                i += 2;
            }
            '=' => {
                toks.push(Tok::Eq);
                i += 1;
            }
            '<' => {
                toks.push(Tok::Lt);
                i += 1;
            }
            '>' => {
                toks.push(Tok::Gt);
                i += 1;
            }
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '&' => {
                toks.push(Tok::Amp);
                i += 1;
                if bytes.get(i) == Some(&b'&') {
                    i += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = line[start..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer in: {line}")))?;
                toks.push(Tok::Int(n));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push(Tok::Ident(line[start..i].to_string()));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character '{c}' in: {line}"
                )))
            }
        }
    }
    Ok(toks)
}

// --------------------------------------------------------------- parser

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    vars: &'a mut Vec<String>,
    line: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            other => Err(Error::Parse(format!(
                "expected {t:?}, found {other:?} in: {}",
                self.line
            ))),
        }
    }

    fn var_index(&mut self, name: &str) -> usize {
        match self.vars.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.vars.push(name.to_string());
                self.vars.len() - 1
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Caret) {
                    if n != BigInt::from(2) {
                        return Err(Error::Parse(format!(
                            "only base-2 exponentials are supported, got {n} in: {}",
                            self.line
                        )));
                    }
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Pow2(Box::new(e)))
                } else {
                    Ok(Expr::Const(n))
                }
            }
            Some(Tok::Ident(name)) => Ok(Expr::Var(self.var_index(&name))),
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.factor()?))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(Error::Parse(format!(
                "expected an expression, found {other:?} in: {}",
                self.line
            ))),
        }
    }

    fn comparison(&mut self) -> Result<Comparison> {
        let lhs = self.expr()?;
        let op = match self.next() {
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            other => {
                return Err(Error::Parse(format!(
                    "expected a comparison operator, found {other:?} in: {}",
                    self.line
                )))
            }
        };
        let rhs = self.expr()?;
        Ok(Comparison { lhs, op, rhs })
    }
}

/// Parses a whole program. Variables are every identifier that appears
/// anywhere; each `init` line must assign all of them.
pub fn parse_program(src: &str) -> Result<Program> {
    let mut vars: Vec<String> = Vec::new();
    let mut raw_inits: Vec<Vec<(String, BigInt)>> = Vec::new();
    type RawRule = (Vec<Comparison>, Vec<(usize, Expr)>, String);
    let mut raw_rules: Vec<RawRule> = Vec::new();

    for raw_line in src.lines() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let toks = lex(line)?;
        if toks.first() == Some(&Tok::Ident("init".to_string())) {
            let mut assigns = Vec::new();
            let mut p = Parser {
                toks: &toks,
                pos: 1,
                vars: &mut vars,
                line,
            };
            while p.peek().is_some() {
                let name = match p.next() {
                    Some(Tok::Ident(n)) => n,
                    other => {
                        return Err(Error::Parse(format!(
                            "expected a variable name, found {other:?} in: {line}"
                        )))
                    }
                };
                p.var_index(&name);
                p.expect(Tok::Eq)?;
                let negative = p.peek() == Some(&Tok::Minus);
                if negative {
                    p.pos += 1;
                }
                let value = match p.next() {
                    Some(Tok::Int(n)) => {
                        if negative {
                            -n
                        } else {
                            n
                        }
                    }
                    other => {
                        return Err(Error::Parse(format!(
                            "expected an integer, found {other:?} in: {line}"
                        )))
                    }
                };
                assigns.push((name, value));
                if p.peek() == Some(&Tok::Comma) {
                    p.pos += 1;
                }
            }
            raw_inits.push(assigns);
        } else if toks.contains(&Tok::Arrow) {
            let mut p = Parser {
                toks: &toks,
                pos: 0,
                vars: &mut vars,
                line,
            };
            let mut guard = vec![p.comparison()?];
            while p.peek() == Some(&Tok::Amp) {
                p.pos += 1;
                guard.push(p.comparison()?);
            }
            p.expect(Tok::Arrow)?;
            let mut assigns = Vec::new();
            loop {
                let name = match p.next() {
                    Some(Tok::Ident(n)) => n,
                    other => {
                        return Err(Error::Parse(format!(
                            "expected a variable name, found {other:?} in: {line}"
                        )))
                    }
                };
                let idx = p.var_index(&name);
                p.expect(Tok::Assign)?;
                assigns.push((idx, p.expr()?));
                match p.next() {
                    Some(Tok::Comma) => continue,
                    None => break,
                    other => {
                        return Err(Error::Parse(format!(
                            "unexpected {other:?} after assignment in: {line}"
                        )))
                    }
                }
            }
            raw_rules.push((guard, assigns, line.to_string()));
        } else {
            return Err(Error::Parse(format!("unrecognized line: {line}")));
        }
    }
    if raw_rules.is_empty() {
        return Err(Error::Parse("program has no rules".into()));
    }
    if raw_inits.is_empty() {
        return Err(Error::Parse("program has no init line".into()));
    }

    // Re-index everything against the sorted variable order.
    let mut sorted = vars.clone();
    sorted.sort_unstable();
    let remap: Vec<usize> = vars
        .iter()
        .map(|v| sorted.iter().position(|s| s == v).unwrap())
        .collect();
    let rules: Vec<Rule> = raw_rules
        .into_iter()
        .map(|(guard, assigns, text)| Rule {
            guard: guard.into_iter().map(|c| remap_cmp(c, &remap)).collect(),
            assigns: assigns
                .into_iter()
                .map(|(i, e)| (remap[i], remap_expr(e, &remap)))
                .collect(),
            text,
        })
        .collect();
    let mut inits = Vec::new();
    for line in raw_inits {
        let mut vals = vec![None; sorted.len()];
        for (name, value) in line {
            let idx = sorted
                .iter()
                .position(|s| *s == name)
                .expect("registered during parsing");
            vals[idx] = Some(value);
        }
        let missing: Vec<&String> = sorted
            .iter()
            .zip(&vals)
            .filter(|(_, v)| v.is_none())
            .map(|(n, _)| n)
            .collect();
        if !missing.is_empty() {
            return Err(Error::Parse(format!(
                "init line must assign every variable; missing {missing:?}"
            )));
        }
        inits.push(vals.into_iter().map(Option::unwrap).collect());
    }
    Ok(Program {
        vars: sorted,
        inits,
        rules,
    })
}

fn remap_expr(e: Expr, remap: &[usize]) -> Expr {
    match e {
        Expr::Const(n) => Expr::Const(n),
        Expr::Var(i) => Expr::Var(remap[i]),
        Expr::Add(a, b) => Expr::Add(
            Box::new(remap_expr(*a, remap)),
            Box::new(remap_expr(*b, remap)),
        ),
        Expr::Sub(a, b) => Expr::Sub(
            Box::new(remap_expr(*a, remap)),
            Box::new(remap_expr(*b, remap)),
        ),
        Expr::Mul(a, b) => Expr::Mul(
            Box::new(remap_expr(*a, remap)),
            Box::new(remap_expr(*b, remap)),
        ),
        Expr::Neg(a) => Expr::Neg(Box::new(remap_expr(*a, remap))),
        Expr::Pow2(a) => Expr::Pow2(Box::new(remap_expr(*a, remap))),
    }
}

fn remap_cmp(c: Comparison, remap: &[usize]) -> Comparison {
    Comparison {
        lhs: remap_expr(c.lhs, remap),
        op: c.op,
        rhs: remap_expr(c.rhs, remap),
    }
}

// ----------------------------------------------------------- evaluation

fn eval(e: &Expr, vals: &[BigInt], max_bits: u64) -> Result<BigInt> {
    let v = match e {
        Expr::Const(n) => n.clone(),
        Expr::Var(i) => vals[*i].clone(),
        Expr::Add(a, b) => eval(a, vals, max_bits)? + eval(b, vals, max_bits)?,
        Expr::Sub(a, b) => eval(a, vals, max_bits)? - eval(b, vals, max_bits)?,
        Expr::Mul(a, b) => eval(a, vals, max_bits)? * eval(b, vals, max_bits)?,
        Expr::Neg(a) => -eval(a, vals, max_bits)?,
        Expr::Pow2(a) => {
            let exp = eval(a, vals, max_bits)?;
            if exp.is_negative() {
                return Err(Error::ArithmeticOverflow(
                    "negative exponent in 2^(..)".into(),
                ));
            }
            let exp_u64 = u64::try_from(exp.magnitude())
                .map_err(|_| Error::ArithmeticOverflow("exponent too large for 2^(..)".into()))?;
            if exp_u64 >= max_bits {
                return Err(Error::ArithmeticOverflow(format!(
                    "2^{exp_u64} exceeds the {max_bits}-bit value budget"
                )));
            }
            BigInt::from(BigUint::from(1u32) << exp_u64)
        }
    };
    if v.magnitude().bits() > max_bits {
        return Err(Error::ArithmeticOverflow(format!(
            "intermediate value exceeds the {max_bits}-bit budget"
        )));
    }
    Ok(v)
}

fn holds(c: &Comparison, vals: &[BigInt], max_bits: u64) -> Result<bool> {
    let l = eval(&c.lhs, vals, max_bits)?;
    let r = eval(&c.rhs, vals, max_bits)?;
    Ok(match c.op {
        CmpOp::Lt => l < r,
        CmpOp::Le => l <= r,
        CmpOp::Gt => l > r,
        CmpOp::Ge => l >= r,
        CmpOp::Eq => l == r,
        CmpOp::Ne => l != r,
    })
}

fn apply_rule(rule: &Rule, vals: &[BigInt], max_bits: u64) -> Result<Option<Vec<BigInt>>> {
    for c in &rule.guard {
        if !holds(c, vals, max_bits)? {
            return Ok(None);
        }
    }
    // Simultaneous assignment: all right-hand sides see the old values.
    let mut next = vals.to_vec();
    for (idx, e) in &rule.assigns {
        next[*idx] = eval(e, vals, max_bits)?;
    }
    Ok(Some(next))
}

// ------------------------------------------------------- state encoding

fn zigzag(n: &BigInt) -> BigUint {
    if n.is_negative() {
        (n.magnitude() * 2u32) - 1u32
    } else {
        n.magnitude() * 2u32
    }
}

fn cantor(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

/// Encodes a valuation into a state id: zigzag each value, then fold the
/// Cantor pairing right-to-left over the variables in sorted name order.
pub fn encode_state(vals: &[BigInt]) -> Result<u64> {
    let mut it = vals.iter().rev();
    let mut acc = zigzag(
        it.next()
            .ok_or_else(|| Error::Parse("no variables".into()))?,
    );
    for v in it {
        acc = cantor(&zigzag(v), &acc);
    }
    u64::try_from(&acc)
        .map_err(|_| Error::ArithmeticOverflow("state id does not fit in 64 bits".into()))
}

/// Renders a valuation for reports: `x=1 y=2`.
pub fn render_valuation(vars: &[String], vals: &[BigInt]) -> String {
    vars.iter()
        .zip(vals)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

// ------------------------------------------------------------- explorer

/// Explores the reachable fragment breadth-first. Stops allocating new
/// states at `state_cap` and stops expanding at `depth_cap`, setting the
/// truncation flag whenever either cap drops a transition.
pub fn simulate_program(
    program: &Program,
    state_cap: usize,
    depth_cap: usize,
    cfg: &RunConfig,
) -> Result<Simulation> {
    if state_cap == 0 || depth_cap == 0 {
        return Err(Error::Parse("exploration caps must be positive".into()));
    }
    let max_bits = cfg.fgh.max_result_bits;
    let mut ids: HashMap<Vec<BigInt>, u64> = HashMap::new();
    let mut states: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    let mut queue: VecDeque<(u64, usize)> = VecDeque::new();
    let mut initial: Vec<u64> = Vec::new();
    let mut truncated = false;

    for vals in &program.inits {
        if ids.contains_key(vals) {
            initial.push(ids[vals]);
            continue;
        }
        if states.len() >= state_cap {
            truncated = true;
            continue;
        }
        let id = encode_state(vals)?;
        if states.contains_key(&id) {
            return Err(Error::InternalInconsistency(
                "state id collision in the pairing".into(),
            ));
        }
        ids.insert(vals.clone(), id);
        states.insert(id, vals.clone());
        initial.push(id);
        queue.push_back((id, 0));
    }

    while let Some((id, depth)) = queue.pop_front() {
        let vals = states[&id].clone();
        if depth >= depth_cap {
            // A dropped expansion only counts as truncation if some rule
            // would actually have fired here.
            for rule in &program.rules {
                if apply_rule(rule, &vals, max_bits)?.is_some() {
                    truncated = true;
                    break;
                }
            }
            continue;
        }
        for rule in &program.rules {
            let Some(next) = apply_rule(rule, &vals, max_bits)? else {
                continue;
            };
            if let Some(&nid) = ids.get(&next) {
                edges.insert((nid, id));
                continue;
            }
            if states.len() >= state_cap {
                truncated = true;
                continue;
            }
            let nid = encode_state(&next)?;
            if states.contains_key(&nid) {
                return Err(Error::InternalInconsistency(
                    "state id collision in the pairing".into(),
                ));
            }
            ids.insert(next.clone(), nid);
            states.insert(nid, next.clone());
            edges.insert((nid, id));
            queue.push_back((nid, depth + 1));
        }
    }

    let relation = FiniteRelation::with_config(states.keys().copied(), edges, cfg)?;
    let system = TransitionSystem::new(relation, initial)?;
    Ok(Simulation {
        system,
        states,
        vars: program.vars.clone(),
        truncated,
    })
}

/// Instantiates a predicate over valuation pairs as a relation on the
/// explored states: edge (a, b) iff `pred(later, earlier)` holds for the
/// decoded valuations. This is how guard-style invariant parts are built
/// over a fragment.
pub fn relation_over_states(
    sim: &Simulation,
    cfg: &RunConfig,
    pred: impl Fn(&[BigInt], &[BigInt]) -> bool,
) -> Result<FiniteRelation> {
    let mut edges = BTreeSet::new();
    for (&a, avals) in &sim.states {
        for (&b, bvals) in &sim.states {
            if pred(avals, bvals) {
                edges.insert((a, b));
            }
        }
    }
    FiniteRelation::with_config(sim.states.keys().copied(), edges, cfg)
}

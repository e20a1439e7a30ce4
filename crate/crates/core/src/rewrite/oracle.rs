//! Boolean expressions compiled to phase oracles `|x⟩ ↦ (−1)^{f(x)} |x⟩`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! or   := xor ('|' xor)*
//! xor  := and ('^' and)*
//! and  := not ('&' not)*
//! not  := '!' not | atom
//! atom := 'x' digits | '(' or ')'
//! ```

use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, QubitId};
use crate::gadgets::{emit_and, reverse_unchecked};

pub const MAX_VARIABLES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("expression uses {0} variables, at most {MAX_VARIABLES} are supported")]
    TooManyVariables(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(u32),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: u64) -> bool {
        match self {
            Expr::Var(k) => (x >> k) & 1 == 1,
            Expr::Not(e) => !e.eval(x),
            Expr::And(l, r) => l.eval(x) && r.eval(x),
            Expr::Or(l, r) => l.eval(x) || r.eval(x),
            Expr::Xor(l, r) => l.eval(x) ^ r.eval(x),
        }
    }

    /// One more than the largest variable index.
    pub fn variable_count(&self) -> usize {
        match self {
            Expr::Var(k) => *k as usize + 1,
            Expr::Not(e) => e.variable_count(),
            Expr::And(l, r) | Expr::Or(l, r) | Expr::Xor(l, r) => l.variable_count().max(r.variable_count()),
        }
    }

    /// Number of binary `&` and `|` nodes.
    pub fn conjunctive_nodes(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Not(e) => e.conjunctive_nodes(),
            Expr::And(l, r) | Expr::Or(l, r) => 1 + l.conjunctive_nodes() + r.conjunctive_nodes(),
            Expr::Xor(l, r) => l.conjunctive_nodes() + r.conjunctive_nodes(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(k) => write!(f, "x{k}"),
            Expr::Not(e) => write!(f, "!{e}"),
            Expr::And(l, r) => write!(f, "({l} & {r})"),
            Expr::Or(l, r) => write!(f, "({l} | {r})"),
            Expr::Xor(l, r) => write!(f, "({l} ^ {r})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> OracleError {
        OracleError::Parse { column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn binary(
        &mut self,
        op: u8,
        next: fn(&mut Self) -> Result<Expr, OracleError>,
        make: fn(Box<Expr>, Box<Expr>) -> Expr,
    ) -> Result<Expr, OracleError> {
        let mut lhs = next(self)?;
        while self.eat(op) {
            let rhs = next(self)?;
            lhs = make(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, OracleError> {
        self.binary(b'|', Self::xor, Expr::Or)
    }

    fn xor(&mut self) -> Result<Expr, OracleError> {
        self.binary(b'^', Self::and, Expr::Xor)
    }

    fn and(&mut self) -> Result<Expr, OracleError> {
        self.binary(b'&', Self::not, Expr::And)
    }

    fn not(&mut self) -> Result<Expr, OracleError> {
        if self.eat(b'!') {
            Ok(Expr::Not(Box::new(self.not()?)))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Expr, OracleError> {
        if self.eat(b'(') {
            let e = self.or()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        if !self.eat(b'x') {
            return Err(self.error("expected a variable `x<k>`, `!` or `(`"));
        }
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|d| d.parse::<u32>().ok())
            .map(Expr::Var)
            .ok_or_else(|| self.error("expected a variable index"))
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, OracleError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.or()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum AndStyle {
    Temporary,
    Toffoli,
}

fn and_into(bld: &mut CircuitBuilder, style: AndStyle, a: QubitId, b: QubitId) -> QubitId {
    match style {
        AndStyle::Temporary => emit_and(bld, a, b),
        AndStyle::Toffoli => {
            let t = bld.alloc_zero();
            bld.ccx(a, b, t);
            t
        }
    }
}

fn copy(bld: &mut CircuitBuilder, q: QubitId) -> QubitId {
    let f = bld.alloc_zero();
    bld.cx(q, f);
    f
}

fn emit(bld: &mut CircuitBuilder, style: AndStyle, x: &[QubitId], e: &Expr) -> QubitId {
    match e {
        Expr::Var(k) => x[*k as usize],
        Expr::Not(inner) => {
            let q = emit(bld, style, x, inner);
            let f = copy(bld, q);
            bld.x(f);
            f
        }
        Expr::Xor(l, r) => {
            let (ql, qr) = (emit(bld, style, x, l), emit(bld, style, x, r));
            let f = copy(bld, ql);
            bld.cx(qr, f);
            f
        }
        Expr::And(l, r) | Expr::Or(l, r) => {
            let ql = emit(bld, style, x, l);
            let mut qr = emit(bld, style, x, r);
            if qr == ql {
                qr = copy(bld, ql);
            }
            let or = matches!(e, Expr::Or(..));
            if or {
                bld.x(ql);
                bld.x(qr);
            }
            let t = and_into(bld, style, ql, qr);
            if or {
                bld.x(ql);
                bld.x(qr);
                bld.x(t);
            }
            t
        }
    }
}

fn compile(text: &str, style: AndStyle) -> Result<Circuit, OracleError> {
    let e = parse_expr(text)?;
    let vars = e.variable_count();
    if vars > MAX_VARIABLES {
        return Err(OracleError::TooManyVariables(vars));
    }
    let mut bld = CircuitBuilder::new();
    let x = bld.input("x", vars);
    let root = emit(&mut bld, style, &x, &e);
    bld.output("x", &x);
    let compute = bld.finish().expect("oracle compute is valid");
    let uncompute = reverse_unchecked(&compute).expect("oracle compute is reversible");

    let mut full = CircuitBuilder::new();
    full.set_registers(compute.inputs.clone(), compute.outputs.clone());
    full.append(&compute);
    full.z(root);
    full.append_with_fresh_bits(&uncompute);
    Ok(full.finish().expect("oracle is valid"))
}

/// Phase oracle with every `&`/`|` node as a temporary AND: 4 T per node.
/// Input and output register `x`.
pub fn compile_oracle(text: &str) -> Result<Circuit, OracleError> {
    compile(text, AndStyle::Temporary)
}

/// The same oracle with Toffoli macros computing and uncomputing each node.
pub fn compile_oracle_toffoli(text: &str) -> Result<Circuit, OracleError> {
    compile(text, AndStyle::Toffoli)
}

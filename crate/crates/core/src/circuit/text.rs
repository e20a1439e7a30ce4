//! Line-oriented text serialization.
//!
//! ```text
//! #qubits 3
//! #cbits 1
//! #input a 0 1
//! #output a 0 1
//! #begin and_compute
//! alloct 2
//! cx 0 2
//! #end and_compute
//! mx 2 -> c0
//! ? c0 : cz 0 1
//! release 2
//! ```
//!
//! Lines starting with `#` that are not one of the directives above are
//! comments. Angles are written in scientific notation with 17 significant
//! digits so that `f64` values round-trip exactly.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, ClassBit, GadgetSpan, GadgetTag, Instruction, Op, QubitId, Register};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

pub fn to_text(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "#qubits {}", c.qubit_count).unwrap();
    writeln!(out, "#cbits {}", c.classbit_count).unwrap();
    for (kw, regs) in [("input", &c.inputs), ("output", &c.outputs)] {
        for r in regs {
            write!(out, "#{kw} {}", r.name).unwrap();
            for q in &r.qubits {
                write!(out, " {q}").unwrap();
            }
            out.push('\n');
        }
    }
    let mut spans = c.gadget_spans.iter().peekable();
    let mut open: Option<&GadgetSpan> = None;
    for (i, ins) in c.instructions.iter().enumerate() {
        if let Some(s) = open {
            if s.end == i {
                writeln!(out, "#end {}", s.tag.keyword()).unwrap();
                open = None;
            }
        }
        if let Some(s) = spans.next_if(|s| s.start == i) {
            writeln!(out, "#begin {}", s.tag.keyword()).unwrap();
            open = Some(s);
        }
        write_instruction(&mut out, ins);
        out.push('\n');
    }
    if let Some(s) = open {
        writeln!(out, "#end {}", s.tag.keyword()).unwrap();
    }
    out
}

fn write_instruction(out: &mut String, ins: &Instruction) {
    if let Some(c) = ins.condition {
        write!(out, "? {c} : ").unwrap();
    }
    out.push_str(ins.op.mnemonic());
    if let Op::Rz(angle) = ins.op {
        write!(out, " {angle:.16e}").unwrap();
    }
    for q in &ins.qubits {
        write!(out, " {q}").unwrap();
    }
    if let Some(c) = ins.op.result() {
        write!(out, " -> {c}").unwrap();
    }
}

pub fn from_text(text: &str) -> Result<Circuit, ParseError> {
    let mut c = Circuit::default();
    let mut declared_qubits = 0usize;
    let mut declared_bits = 0usize;
    let mut open: Option<(usize, GadgetTag, usize)> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let err = |message: String| ParseError { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(directive) = trimmed.strip_prefix('#') {
            let mut words = directive.split_whitespace();
            match words.next() {
                Some("qubits") => declared_qubits = parse_count(words.next(), line)?,
                Some("cbits") => declared_bits = parse_count(words.next(), line)?,
                Some(kw @ ("input" | "output")) => {
                    let name = words.next().ok_or_else(|| err("register needs a name".into()))?;
                    let qubits = words
                        .map(|w| parse_qubit(w, line))
                        .collect::<Result<Vec<_>, _>>()?;
                    let reg = Register::new(name, qubits);
                    if kw == "input" {
                        c.inputs.push(reg);
                    } else {
                        c.outputs.push(reg);
                    }
                }
                Some("begin") => {
                    let tag = parse_tag(words.next(), line)?;
                    if open.is_some() {
                        return Err(err("nested gadget span".into()));
                    }
                    open = Some((c.instructions.len(), tag, line));
                }
                Some("end") => {
                    let tag = parse_tag(words.next(), line)?;
                    match open.take() {
                        Some((start, t, _)) if t == tag => {
                            let end = c.instructions.len();
                            if end == start {
                                return Err(err("empty gadget span".into()));
                            }
                            c.gadget_spans.push(GadgetSpan { start, end, tag });
                        }
                        _ => return Err(err(format!("unmatched #end {}", tag.keyword()))),
                    }
                }
                _ => {}
            }
            continue;
        }
        c.instructions.push(parse_instruction(trimmed, line)?);
    }
    if let Some((_, tag, line)) = open {
        return Err(ParseError { line, message: format!("unterminated #begin {}", tag.keyword()) });
    }

    let mut qubits = declared_qubits;
    let mut bits = declared_bits;
    for ins in &c.instructions {
        for q in &ins.qubits {
            qubits = qubits.max(q.index() + 1);
        }
        for b in ins.op.result().into_iter().chain(ins.condition) {
            bits = bits.max(b.index() + 1);
        }
    }
    for r in c.inputs.iter().chain(&c.outputs) {
        for q in &r.qubits {
            qubits = qubits.max(q.index() + 1);
        }
    }
    c.qubit_count = qubits;
    c.classbit_count = bits;
    Ok(c)
}

fn parse_count(word: Option<&str>, line: usize) -> Result<usize, ParseError> {
    word.and_then(|w| w.parse().ok())
        .ok_or_else(|| ParseError { line, message: "expected a count".into() })
}

fn parse_tag(word: Option<&str>, line: usize) -> Result<GadgetTag, ParseError> {
    word.and_then(GadgetTag::from_keyword)
        .ok_or_else(|| ParseError { line, message: "unknown gadget tag".into() })
}

fn parse_qubit(word: &str, line: usize) -> Result<QubitId, ParseError> {
    word.parse::<u32>()
        .map(QubitId)
        .map_err(|_| ParseError { line, message: format!("bad qubit index `{word}`") })
}

fn parse_bit(word: &str, line: usize) -> Result<ClassBit, ParseError> {
    word.strip_prefix('c')
        .and_then(|d| d.parse::<u32>().ok())
        .map(ClassBit)
        .ok_or_else(|| ParseError { line, message: format!("bad classical bit `{word}`") })
}

fn parse_instruction(text: &str, line: usize) -> Result<Instruction, ParseError> {
    let err = |message: String| ParseError { line, message };
    let (condition, body) = match text.strip_prefix('?') {
        Some(rest) => {
            let (bit, body) = rest
                .split_once(':')
                .ok_or_else(|| err("conditioned form is `? c<k> : <gate>`".into()))?;
            (Some(parse_bit(bit.trim(), line)?), body.trim())
        }
        None => (None, text),
    };

    let (body, result) = match body.split_once("->") {
        Some((lhs, rhs)) => (lhs.trim(), Some(parse_bit(rhs.trim(), line)?)),
        None => (body, None),
    };

    let mut words = body.split_whitespace();
    let mnemonic = words.next().ok_or_else(|| err("missing mnemonic".into()))?;
    let op = match mnemonic {
        "x" => Op::X,
        "y" => Op::Y,
        "z" => Op::Z,
        "h" => Op::H,
        "s" => Op::S,
        "sdg" => Op::Sdg,
        "t" => Op::T,
        "tdg" => Op::Tdg,
        "cx" => Op::Cx,
        "cz" => Op::Cz,
        "ccx" => Op::Ccx,
        "alloc0" => Op::AllocZero,
        "alloct" => Op::AllocT,
        "release" => Op::Release,
        "rz" => {
            let angle = words
                .next()
                .and_then(|w| w.parse::<f64>().ok())
                .ok_or_else(|| err("rz needs an angle".into()))?;
            Op::Rz(angle)
        }
        "mz" | "mx" => {
            let bit = result.ok_or_else(|| err(format!("{mnemonic} needs `-> c<k>`")))?;
            if mnemonic == "mz" {
                Op::MeasureZ(bit)
            } else {
                Op::MeasureX(bit)
            }
        }
        other => return Err(err(format!("unknown instruction `{other}`"))),
    };
    if result.is_some() && !op.is_measurement() {
        return Err(err("only measurements write a classical bit".into()));
    }
    let qubits = words.map(|w| parse_qubit(w, line)).collect::<Result<Vec<_>, _>>()?;
    if qubits.len() != op.arity() {
        return Err(err(format!(
            "`{mnemonic}` takes {} qubit(s), got {}",
            op.arity(),
            qubits.len()
        )));
    }
    Ok(Instruction { op, qubits, condition })
}

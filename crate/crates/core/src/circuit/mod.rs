//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a flat list of [`Instruction`]s over integer qubit and
//! classical-bit identifiers. Allocation and release are explicit
//! instructions, so every ancilla has a well-defined lifetime. Temporary
//! logical-AND compute/uncompute sequences are marked with [`GadgetSpan`]
//! annotations; the simulator executes their contents normally and only the
//! resource counter treats them as single units.

mod builder;
mod dag;
mod text;
mod validate;

use std::fmt;

pub use builder::CircuitBuilder;
pub use dag::{build_dag, Dag, DagNode};
pub use text::{from_text, to_text, ParseError};
pub use validate::{validate, ValidationError, Violation};

/// A qubit wire, identified by its allocation-order index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId(pub u32);

impl QubitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A classical bit written by exactly one measurement.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassBit(pub u32);

impl ClassBit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClassBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Instruction kind.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Op {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cx,
    Cz,
    /// Unlowered Toffoli macro.
    Ccx,
    /// Exact Z rotation `diag(e^{-iθ/2}, e^{iθ/2})`.
    Rz(f64),
    /// Allocate a qubit in |0⟩.
    AllocZero,
    /// Allocate a qubit in the magic state (|0⟩ + e^{iπ/4}|1⟩)/√2.
    AllocT,
    Release,
    MeasureZ(ClassBit),
    MeasureX(ClassBit),
}

impl Op {
    /// Number of qubit operands.
    pub fn arity(&self) -> usize {
        match self {
            Op::Cx | Op::Cz => 2,
            Op::Ccx => 3,
            _ => 1,
        }
    }

    /// Unitary Clifford gates; the only kinds allowed under a classical condition.
    pub fn is_clifford_gate(&self) -> bool {
        matches!(
            self,
            Op::X | Op::Y | Op::Z | Op::H | Op::S | Op::Sdg | Op::Cx | Op::Cz
        )
    }

    /// Instructions that consume one |T⟩ state.
    pub fn is_t_type(&self) -> bool {
        matches!(self, Op::T | Op::Tdg | Op::AllocT)
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Op::MeasureZ(_) | Op::MeasureX(_))
    }

    pub fn is_alloc(&self) -> bool {
        matches!(self, Op::AllocZero | Op::AllocT)
    }

    /// Classical bit written by this instruction, if any.
    pub fn result(&self) -> Option<ClassBit> {
        match self {
            Op::MeasureZ(c) | Op::MeasureX(c) => Some(*c),
            _ => None,
        }
    }

    /// Acts diagonally in the computational basis on every operand.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            Op::Z | Op::S | Op::Sdg | Op::T | Op::Tdg | Op::Cz | Op::Rz(_)
        )
    }

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Op::X => "x",
            Op::Y => "y",
            Op::Z => "z",
            Op::H => "h",
            Op::S => "s",
            Op::Sdg => "sdg",
            Op::T => "t",
            Op::Tdg => "tdg",
            Op::Cx => "cx",
            Op::Cz => "cz",
            Op::Ccx => "ccx",
            Op::Rz(_) => "rz",
            Op::AllocZero => "alloc0",
            Op::AllocT => "alloct",
            Op::Release => "release",
            Op::MeasureZ(_) => "mz",
            Op::MeasureX(_) => "mx",
        }
    }
}

/// One gate, measurement, or lifetime event.
#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub op: Op,
    pub qubits: Vec<QubitId>,
    pub condition: Option<ClassBit>,
}

impl Instruction {
    pub fn new(op: Op, qubits: impl Into<Vec<QubitId>>) -> Self {
        Self { op, qubits: qubits.into(), condition: None }
    }

    pub fn conditioned(mut self, bit: ClassBit) -> Self {
        self.condition = Some(bit);
        self
    }

    /// Whether this instruction may change the computational-basis value of `q`.
    ///
    /// Control operands of `cx`/`ccx` and every operand of a diagonal gate are
    /// read-only in this sense.
    pub fn writes(&self, q: QubitId) -> bool {
        let Some(pos) = self.qubits.iter().position(|&x| x == q) else {
            return false;
        };
        match self.op {
            Op::Cx => pos == 1,
            Op::Ccx => pos == 2,
            op if op.is_diagonal() => false,
            _ => true,
        }
    }
}

/// Gadget annotation tag.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GadgetTag {
    AndCompute,
    AndUncompute,
}

impl GadgetTag {
    pub fn keyword(self) -> &'static str {
        match self {
            GadgetTag::AndCompute => "and_compute",
            GadgetTag::AndUncompute => "and_uncompute",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "and_compute" => Some(GadgetTag::AndCompute),
            "and_uncompute" => Some(GadgetTag::AndUncompute),
            _ => None,
        }
    }
}

/// Half-open instruction range `[start, end)` forming one gadget.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GadgetSpan {
    pub start: usize,
    pub end: usize,
    pub tag: GadgetTag,
}

impl GadgetSpan {
    pub fn contains(&self, index: usize) -> bool {
        (self.start..self.end).contains(&index)
    }
}

/// A named, ordered group of qubits. Bit `i` of the register value is qubit `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub qubits: Vec<QubitId>,
}

impl Register {
    pub fn new(name: impl Into<String>, qubits: Vec<QubitId>) -> Self {
        Self { name: name.into(), qubits }
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub instructions: Vec<Instruction>,
    pub qubit_count: usize,
    pub classbit_count: usize,
    pub gadget_spans: Vec<GadgetSpan>,
    pub inputs: Vec<Register>,
    pub outputs: Vec<Register>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Input qubits in register order; bit `k` of a simulator input index is
    /// the `k`-th qubit of this list.
    pub fn input_qubits(&self) -> Vec<QubitId> {
        self.inputs.iter().flat_map(|r| r.qubits.iter().copied()).collect()
    }

    pub fn output_qubits(&self) -> Vec<QubitId> {
        self.outputs.iter().flat_map(|r| r.qubits.iter().copied()).collect()
    }

    pub fn input(&self, name: &str) -> Option<&Register> {
        self.inputs.iter().find(|r| r.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&Register> {
        self.outputs.iter().find(|r| r.name == name)
    }

    pub fn measurement_count(&self) -> usize {
        self.instructions.iter().filter(|i| i.op.is_measurement()).count()
    }

    /// Index of the span containing instruction `index`, if any.
    pub fn span_of(&self, index: usize) -> Option<usize> {
        self.gadget_spans.iter().position(|s| s.contains(index))
    }

    /// Instructions of one gadget span.
    pub fn span_instructions(&self, span: usize) -> &[Instruction] {
        let s = &self.gadget_spans[span];
        &self.instructions[s.start..s.end]
    }

    /// `self` followed by `other` on the same qubit identifiers, with
    /// `self`'s inputs and `other`'s outputs.
    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut bld = CircuitBuilder::new();
        bld.set_registers(self.inputs.clone(), other.outputs.clone());
        bld.append(self);
        bld.append_with_fresh_bits(other);
        bld.finish_unchecked()
    }
}

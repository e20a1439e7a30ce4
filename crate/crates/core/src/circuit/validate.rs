use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::{Circuit, QubitId};

/// The kind of structural problem found by [`validate`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    UseAfterRelease,
    UseBeforeAlloc,
    ClassbitReadBeforeWrite,
    ClassbitRewritten,
    BadArity,
    DuplicateOperand,
    NonCliffordConditioned,
    OverlappingGadgetSpans,
    EmptyGadgetSpan,
    AllocLive,
    QubitOutOfRange,
    OutputNotLive,
    DuplicateRegisterQubit,
}

impl Violation {
    pub fn code(self) -> &'static str {
        match self {
            Violation::UseAfterRelease => "USE_AFTER_RELEASE",
            Violation::UseBeforeAlloc => "USE_BEFORE_ALLOC",
            Violation::ClassbitReadBeforeWrite => "CLASSBIT_READ_BEFORE_WRITE",
            Violation::ClassbitRewritten => "CLASSBIT_REWRITTEN",
            Violation::BadArity => "BAD_ARITY",
            Violation::DuplicateOperand => "DUPLICATE_OPERAND",
            Violation::NonCliffordConditioned => "NONCLIFFORD_CONDITIONED",
            Violation::OverlappingGadgetSpans => "OVERLAPPING_GADGET_SPANS",
            Violation::EmptyGadgetSpan => "EMPTY_GADGET_SPAN",
            Violation::AllocLive => "ALLOC_LIVE",
            Violation::QubitOutOfRange => "QUBIT_OUT_OF_RANGE",
            Violation::OutputNotLive => "OUTPUT_NOT_LIVE",
            Violation::DuplicateRegisterQubit => "DUPLICATE_REGISTER_QUBIT",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// First violation found, located by instruction index.
///
/// Register-level problems found after the last instruction use
/// `index == circuit.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{violation} at instruction {index}")]
pub struct ValidationError {
    pub index: usize,
    pub violation: Violation,
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Life {
    Unborn,
    Live,
    Released,
}

pub fn validate(c: &Circuit) -> Result<(), ValidationError> {
    let fail = |index, violation| Err(ValidationError { index, violation });

    let mut end = 0;
    for span in &c.gadget_spans {
        if span.start >= span.end || span.end > c.instructions.len() {
            return fail(span.start, Violation::EmptyGadgetSpan);
        }
        if span.start < end {
            return fail(span.start, Violation::OverlappingGadgetSpans);
        }
        end = span.end;
    }

    let mut life = vec![Life::Unborn; c.qubit_count];
    let mut seen = HashSet::new();
    for reg in &c.inputs {
        for &q in &reg.qubits {
            if q.index() >= c.qubit_count {
                return fail(0, Violation::QubitOutOfRange);
            }
            if !seen.insert(q) {
                return fail(0, Violation::DuplicateRegisterQubit);
            }
            life[q.index()] = Life::Live;
        }
    }
    let mut written = vec![false; c.classbit_count];

    for (index, ins) in c.instructions.iter().enumerate() {
        if ins.qubits.len() != ins.op.arity() {
            return fail(index, Violation::BadArity);
        }
        for (k, q) in ins.qubits.iter().enumerate() {
            if q.index() >= c.qubit_count {
                return fail(index, Violation::QubitOutOfRange);
            }
            if ins.qubits[..k].contains(q) {
                return fail(index, Violation::DuplicateOperand);
            }
        }
        if let Some(bit) = ins.condition {
            if !ins.op.is_clifford_gate() {
                return fail(index, Violation::NonCliffordConditioned);
            }
            if !written.get(bit.index()).copied().unwrap_or(false) {
                return fail(index, Violation::ClassbitReadBeforeWrite);
            }
        }
        if ins.op.is_alloc() {
            let q = ins.qubits[0];
            if life[q.index()] == Life::Live {
                return fail(index, Violation::AllocLive);
            }
            life[q.index()] = Life::Live;
            continue;
        }
        for q in &ins.qubits {
            match life[q.index()] {
                Life::Live => {}
                Life::Released => return fail(index, Violation::UseAfterRelease),
                Life::Unborn => return fail(index, Violation::UseBeforeAlloc),
            }
        }
        if let Some(bit) = ins.op.result() {
            match written.get_mut(bit.index()) {
                Some(w) if !*w => *w = true,
                Some(_) => return fail(index, Violation::ClassbitRewritten),
                None => return fail(index, Violation::ClassbitReadBeforeWrite),
            }
        }
        if matches!(ins.op, super::Op::Release) {
            life[ins.qubits[0].index()] = Life::Released;
        }
    }

    let mut out_seen: HashSet<QubitId> = HashSet::new();
    for reg in &c.outputs {
        for &q in &reg.qubits {
            if q.index() >= c.qubit_count {
                return fail(c.len(), Violation::QubitOutOfRange);
            }
            if !out_seen.insert(q) {
                return fail(c.len(), Violation::DuplicateRegisterQubit);
            }
            if life[q.index()] != Life::Live {
                return fail(c.len(), Violation::OutputNotLive);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, GadgetSpan, GadgetTag, Instruction, Op};

    #[test]
    fn empty_circuit_is_valid() {
        assert_eq!(validate(&Circuit::default()), Ok(()));
    }

    #[test]
    fn x_on_released_qubit() {
        let mut b = CircuitBuilder::new();
        let q = b.alloc_zero();
        b.release(q);
        b.x(q);
        let err = b.finish().unwrap_err();
        assert_eq!(err, ValidationError { index: 2, violation: Violation::UseAfterRelease });
    }

    #[test]
    fn use_before_alloc() {
        let mut b = CircuitBuilder::new();
        let q = b.fresh_qubit();
        b.h(q);
        let err = b.finish().unwrap_err();
        assert_eq!(err.violation, Violation::UseBeforeAlloc);
        assert_eq!(err.index, 0);
    }

    #[test]
    fn conditioned_t_rejected() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        let c = b.measure_z(q);
        b.conditioned(c, Op::T, &[q]);
        let err = b.finish().unwrap_err();
        assert_eq!(err, ValidationError { index: 1, violation: Violation::NonCliffordConditioned });
    }

    #[test]
    fn classbit_read_before_write() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        let c = b.fresh_bit();
        b.conditioned(c, Op::Cz, &[q[0], q[1]]);
        b.measure_z(q[0]);
        let err = b.finish().unwrap_err();
        assert_eq!(err.violation, Violation::ClassbitReadBeforeWrite);
    }

    #[test]
    fn bad_arity_and_duplicates() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        b.push(Instruction::new(Op::Cx, vec![q[0]]));
        assert_eq!(b.finish().unwrap_err().violation, Violation::BadArity);

        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        b.cx(q[1], q[1]);
        assert_eq!(b.finish().unwrap_err().violation, Violation::DuplicateOperand);
    }

    #[test]
    fn overlapping_spans() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        for _ in 0..4 {
            b.h(q);
        }
        let mut c = b.finish_unchecked();
        c.gadget_spans.push(GadgetSpan { start: 0, end: 3, tag: GadgetTag::AndCompute });
        c.gadget_spans.push(GadgetSpan { start: 2, end: 4, tag: GadgetTag::AndUncompute });
        let err = validate(&c).unwrap_err();
        assert_eq!(err, ValidationError { index: 2, violation: Violation::OverlappingGadgetSpans });
    }

    #[test]
    fn realloc_after_release_is_fine_but_double_alloc_is_not() {
        let mut b = CircuitBuilder::new();
        let q = b.alloc_zero();
        b.release(q);
        b.realloc_zero(q);
        b.x(q);
        b.output("q", &[q]);
        assert!(b.finish().is_ok());

        let mut b = CircuitBuilder::new();
        let q = b.alloc_zero();
        b.realloc_zero(q);
        assert_eq!(b.finish().unwrap_err().violation, Violation::AllocLive);
    }

    #[test]
    fn outputs_must_be_live() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        b.release(q);
        b.output("q", &[q]);
        let err = b.finish().unwrap_err();
        assert_eq!(err, ValidationError { index: 1, violation: Violation::OutputNotLive });
    }

    #[test]
    fn measurement_result_written_once() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        let c = b.measure_z(q);
        b.push(Instruction::new(Op::MeasureX(c), vec![q]));
        assert_eq!(b.finish().unwrap_err().violation, Violation::ClassbitRewritten);
    }
}

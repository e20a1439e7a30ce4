use super::{emit_and_on, emit_unand, GadgetError};
use crate::circuit::{Circuit, CircuitBuilder, GadgetSpan, GadgetTag, Instruction, Op, QubitId};

/// Operands `(a, b, t)` of an AND gadget span.
fn and_operands(c: &Circuit, span: &GadgetSpan) -> Option<(QubitId, QubitId, QubitId)> {
    let body = &c.instructions[span.start..span.end];
    match span.tag {
        GadgetTag::AndCompute => {
            let t = body.iter().find(|i| i.op == Op::AllocT)?.qubits[0];
            let mut others = Vec::new();
            for q in body.iter().flat_map(|i| i.qubits.iter().copied()) {
                if q != t && !others.contains(&q) {
                    others.push(q);
                }
            }
            (others.len() == 2).then(|| (others[0], others[1], t))
        }
        GadgetTag::AndUncompute => {
            let t = body.iter().find(|i| i.op.is_measurement())?.qubits[0];
            let fix = body.iter().find(|i| i.op == Op::Cz)?;
            Some((fix.qubits[0], fix.qubits[1], t))
        }
    }
}

/// The inverse circuit: instructions in reverse order with each gate
/// inverted, AND compute spans turned into measurement-based uncomputes and
/// vice versa, allocations swapped with releases, and the input and output
/// registers exchanged.
///
/// Measurements, |T⟩ allocations and conditioned gates outside AND spans
/// have no inverse and are rejected.
pub fn reverse(c: &Circuit) -> Result<Circuit, GadgetError> {
    let r = reverse_unchecked(c)?;
    crate::circuit::validate(&r)?;
    Ok(r)
}

/// [`reverse`] without validating the result, for inverting a fragment
/// whose lifetimes only make sense as part of a larger circuit.
pub fn reverse_unchecked(c: &Circuit) -> Result<Circuit, GadgetError> {
    let mut bld = CircuitBuilder::new();
    bld.reserve(c.qubit_count, 0);
    bld.set_registers(c.outputs.clone(), c.inputs.clone());

    let mut i = c.len();
    while i > 0 {
        let last = i - 1;
        if let Some(s) = c.span_of(last) {
            let span = c.gadget_spans[s];
            let (a, b, t) = and_operands(c, &span).ok_or(GadgetError::NotReversible(span.start))?;
            match span.tag {
                GadgetTag::AndCompute => emit_unand(&mut bld, a, b, t),
                GadgetTag::AndUncompute => emit_and_on(&mut bld, a, b, t),
            }
            i = span.start;
            continue;
        }
        let ins = &c.instructions[last];
        if ins.condition.is_some() {
            return Err(GadgetError::NotReversible(last));
        }
        let op = match ins.op {
            Op::S => Op::Sdg,
            Op::Sdg => Op::S,
            Op::T => Op::Tdg,
            Op::Tdg => Op::T,
            Op::Rz(theta) => Op::Rz(-theta),
            Op::AllocZero => Op::Release,
            Op::Release => Op::AllocZero,
            Op::AllocT | Op::MeasureX(_) | Op::MeasureZ(_) => return Err(GadgetError::NotReversible(last)),
            op => op,
        };
        bld.push(Instruction::new(op, ins.qubits.clone()));
        i = last;
    }
    Ok(bld.finish_unchecked())
}

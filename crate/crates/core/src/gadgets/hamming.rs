use std::collections::VecDeque;

use super::{emit_and, reverse, GadgetError};
use crate::circuit::{Circuit, CircuitBuilder, QubitId};

/// Number of bits needed to hold the popcount of `n` qubits, ⌈lg(n+1)⌉.
pub fn hamming_register_len(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

#[derive(Clone, Debug)]
pub struct HammingWeight {
    /// Inputs `x`; outputs `w` (the weight register) and `work`, which holds
    /// every other qubit still live at the end.
    pub circuit: Circuit,
    /// Little-endian weight register.
    pub register: Vec<QubitId>,
}

/// Computes the popcount of an `n`-qubit register.
///
/// Bits are bucketed by weight. The lowest bucket holding at least two bits
/// is reduced first: three bits go through a full-adder block (one AND,
/// the sum is left in place), two through a half adder. Each reduction
/// costs 4 T and there are at most n of them.
pub fn hamming_weight_compute(n: usize) -> Result<HammingWeight, GadgetError> {
    if n == 0 {
        return Err(GadgetError::ZeroWidth);
    }
    let mut bld = CircuitBuilder::new();
    let x = bld.input("x", n);
    let mut levels: Vec<VecDeque<QubitId>> = vec![x.iter().copied().collect()];
    let mut level = 0;
    while level < levels.len() {
        while levels[level].len() >= 2 {
            let z = levels[level][0];
            let carry = if levels[level].len() >= 3 {
                let p = levels[level].remove(1).unwrap();
                let q = levels[level].remove(1).unwrap();
                bld.cx(z, p);
                bld.cx(z, q);
                let t = emit_and(&mut bld, p, q);
                bld.cx(z, t);
                bld.cx(z, p);
                bld.cx(z, q);
                bld.cx(p, z);
                bld.cx(q, z);
                t
            } else {
                let p = levels[level].remove(1).unwrap();
                let t = emit_and(&mut bld, z, p);
                bld.cx(p, z);
                t
            };
            if levels.len() == level + 1 {
                levels.push(VecDeque::new());
            }
            levels[level + 1].push_back(carry);
        }
        level += 1;
    }
    let register: Vec<QubitId> = levels.iter().map(|l| l[0]).collect();
    debug_assert_eq!(register.len(), hamming_register_len(n));

    let mut work: Vec<QubitId> = x.iter().copied().filter(|q| !register.contains(q)).collect();
    let mut c = bld.finish_unchecked();
    for ins in &c.instructions {
        if ins.op.is_alloc() && !register.contains(&ins.qubits[0]) {
            work.push(ins.qubits[0]);
        }
    }
    work.sort();
    c.outputs = vec![
        crate::circuit::Register::new("w", register.clone()),
        crate::circuit::Register::new("work", work),
    ];
    crate::circuit::validate(&c)?;
    Ok(HammingWeight { circuit: c, register })
}

/// T-free inverse of [`hamming_weight_compute`].
pub fn hamming_weight_uncompute(hw: &HammingWeight) -> Result<Circuit, GadgetError> {
    reverse(&hw.circuit)
}

/// Rz(θ) on each of `n` qubits through one rotation per weight bit:
/// Rz(θ·2ᵖ) on bit `p` of the Hamming-weight register. Equal to the direct
/// product up to global phase. Inputs and outputs `x`.
pub fn apply_rz_via_hamming(theta: f64, n: usize) -> Result<Circuit, GadgetError> {
    let hw = hamming_weight_compute(n)?;
    let undo = hamming_weight_uncompute(&hw)?;
    let mut bld = CircuitBuilder::new();
    bld.set_registers(hw.circuit.inputs.clone(), undo.outputs.clone());
    bld.append(&hw.circuit);
    for (p, &q) in hw.register.iter().enumerate() {
        bld.rz(theta * (1u64 << p) as f64, q);
    }
    bld.append_with_fresh_bits(&undo);
    Ok(bld.finish()?)
}

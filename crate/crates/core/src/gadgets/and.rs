use crate::circuit::{Circuit, CircuitBuilder, GadgetTag, Instruction, Op, QubitId};

/// Emits a temporary logical-AND into a fresh ancilla and returns it.
pub fn emit_and(bld: &mut CircuitBuilder, a: QubitId, b: QubitId) -> QubitId {
    let t = bld.fresh_qubit();
    emit_and_on(bld, a, b, t);
    t
}

/// Emits a temporary logical-AND into the (currently unallocated) qubit `t`.
///
/// The ancilla starts in |T⟩, so the sequence consumes one injected state and
/// three T-type gates. No phase is left behind on any input.
pub fn emit_and_on(bld: &mut CircuitBuilder, a: QubitId, b: QubitId, t: QubitId) {
    bld.gadget(GadgetTag::AndCompute, |bld| {
        bld.push(Instruction::new(Op::AllocT, vec![t]));
        bld.cx(a, t);
        bld.cx(b, t);
        bld.cx(t, a);
        bld.cx(t, b);
        bld.tdg(a);
        bld.tdg(b);
        bld.t(t);
        bld.cx(t, a);
        bld.cx(t, b);
        bld.h(t);
        bld.s(t);
    });
}

/// Erases `t = a ∧ b` by X-basis measurement and a CZ fixup.
pub fn emit_unand(bld: &mut CircuitBuilder, a: QubitId, b: QubitId, t: QubitId) {
    bld.gadget(GadgetTag::AndUncompute, |bld| {
        let m = bld.measure_x(t);
        bld.conditioned(m, Op::Cz, &[a, b]);
        bld.release(t);
    });
}

/// Standalone compute fragment: inputs `a`, `b`; outputs `a`, `b`, `and`.
pub fn and_compute() -> (QubitId, Circuit) {
    let mut bld = CircuitBuilder::new();
    let a = bld.input("a", 1)[0];
    let b = bld.input("b", 1)[0];
    let t = emit_and(&mut bld, a, b);
    bld.output("a", &[a]);
    bld.output("b", &[b]);
    bld.output("and", &[t]);
    (t, bld.finish().expect("and_compute is valid"))
}

/// Standalone uncompute fragment: inputs `a`, `b`, `and`; outputs `a`, `b`.
pub fn and_uncompute() -> Circuit {
    let mut bld = CircuitBuilder::new();
    let a = bld.input("a", 1)[0];
    let b = bld.input("b", 1)[0];
    let t = bld.input("and", 1)[0];
    emit_unand(&mut bld, a, b, t);
    bld.output("a", &[a]);
    bld.output("b", &[b]);
    bld.finish().expect("and_uncompute is valid")
}

/// The compute sequence run backwards, for comparison with measurement-based
/// uncomputation.
#[derive(Clone, Debug)]
pub struct ReverseUncompute {
    /// Inputs `a`, `b`, `and`; outputs `a`, `b`. The ancilla is left live in |T⟩.
    pub circuit: Circuit,
    pub recovered_t_states: usize,
}

impl ReverseUncompute {
    /// T-type gates spent minus |T⟩ states handed back.
    pub fn net_t_count(&self) -> usize {
        let gross = self.circuit.instructions.iter().filter(|i| i.op.is_t_type()).count();
        gross - self.recovered_t_states
    }
}

pub fn and_uncompute_reverse() -> ReverseUncompute {
    let mut bld = CircuitBuilder::new();
    let a = bld.input("a", 1)[0];
    let b = bld.input("b", 1)[0];
    let t = bld.input("and", 1)[0];
    bld.sdg(t);
    bld.h(t);
    bld.cx(t, b);
    bld.cx(t, a);
    bld.tdg(t);
    bld.t(b);
    bld.t(a);
    bld.cx(t, b);
    bld.cx(t, a);
    bld.cx(b, t);
    bld.cx(a, t);
    bld.output("a", &[a]);
    bld.output("b", &[b]);
    ReverseUncompute { circuit: bld.finish().expect("reverse uncompute is valid"), recovered_t_states: 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_dag;
    use crate::sim::{enumerate_branches, run, InputState, Outcomes};
    use num_complex::Complex;

    #[test]
    fn truth_table() {
        let (_, c) = and_compute();
        for x in 0..4u64 {
            let r = run::<f64>(&c, &InputState::Basis(x), &Outcomes::Sampled(0)).unwrap();
            let out = r.state.output_amplitudes(&c.output_qubits()).unwrap();
            assert_eq!(out.len(), 1);
            let expected = x | (((x & 1) & (x >> 1)) << 2);
            assert_eq!(out[0].0, expected, "input {x}");
        }
    }

    #[test]
    fn counts() {
        let (_, c) = and_compute();
        assert_eq!(c.instructions.iter().filter(|i| i.op.is_t_type()).count(), 4);
        assert_eq!(c.gadget_spans.len(), 1);
        assert_eq!(build_dag(&c).unwrap().node_count(), 1);
        let u = and_uncompute();
        assert!(u.instructions.iter().all(|i| !i.op.is_t_type()));
        assert_eq!(and_uncompute_reverse().net_t_count(), 2);
    }

    #[test]
    fn uniform_superposition_has_no_phase_error() {
        let (_, c) = and_compute();
        let amp = vec![Complex::new(0.5, 0.0); 4];
        let r = run::<f64>(&c, &InputState::Amplitudes(amp), &Outcomes::Sampled(0)).unwrap();
        let out = r.state.output_amplitudes(&c.output_qubits()).unwrap();
        let ideal = [0u64, 1, 2, 7];
        for (k, (i, a)) in out.iter().enumerate() {
            assert_eq!(*i, ideal[k]);
            assert!((a - out[0].1).norm() < 1e-12);
        }
    }

    #[test]
    fn both_uncompute_branches_agree() {
        let mut bld = CircuitBuilder::new();
        let a = bld.input("a", 1)[0];
        let b = bld.input("b", 1)[0];
        let t = emit_and(&mut bld, a, b);
        emit_unand(&mut bld, a, b, t);
        bld.output("a", &[a]);
        bld.output("b", &[b]);
        let c = bld.finish().unwrap();
        let amp: Vec<Complex<f64>> =
            [(0.1, 0.3), (0.5, -0.2), (-0.4, 0.1), (0.2, 0.6)].iter().map(|&(x, y)| Complex::new(x, y)).collect();
        let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amp: Vec<_> = amp.into_iter().map(|a| a / norm).collect();
        let branches = enumerate_branches(&c, &InputState::Amplitudes(amp.clone()), 4).unwrap();
        assert_eq!(branches.len(), 2);
        for br in &branches {
            let f = crate::sim::fidelity(&br.final_state, &amp.iter().enumerate().map(|(i, a)| (i as u64, *a)).collect::<Vec<_>>());
            assert!(f > 1.0 - 1e-12);
        }
    }
}

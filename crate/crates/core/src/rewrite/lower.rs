use rustc_hash::FxHashSet;

use super::{find_pairs, rebuild};
use crate::circuit::{Circuit, CircuitBuilder, Op, QubitId};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LowerMode {
    /// Exact 7-T decomposition for every Toffoli.
    Textbook7,
    /// 4-T relative-phase Toffoli for both members of each matched pair;
    /// unpaired Toffolis fall back to [`LowerMode::Textbook7`].
    Paired4,
}

fn textbook(bld: &mut CircuitBuilder, a: QubitId, b: QubitId, t: QubitId) {
    bld.h(t);
    bld.cx(b, t);
    bld.tdg(t);
    bld.cx(a, t);
    bld.t(t);
    bld.cx(b, t);
    bld.tdg(t);
    bld.cx(a, t);
    bld.t(b);
    bld.t(t);
    bld.h(t);
    bld.cx(a, b);
    bld.t(a);
    bld.tdg(b);
    bld.cx(a, b);
}

/// Toffoli up to a diagonal phase on the controls and target. The sequence
/// is its own inverse, so a pair of them multiplies out to a plain
/// compute/uncompute.
fn relative_phase(bld: &mut CircuitBuilder, a: QubitId, b: QubitId, t: QubitId) {
    bld.h(t);
    bld.t(t);
    bld.cx(b, t);
    bld.tdg(t);
    bld.cx(a, t);
    bld.t(t);
    bld.cx(b, t);
    bld.tdg(t);
    bld.h(t);
}

/// Expands every Toffoli macro into Clifford+T.
pub fn lower_ccx(c: &Circuit, mode: LowerMode) -> Circuit {
    let paired: FxHashSet<usize> = match mode {
        LowerMode::Textbook7 => FxHashSet::default(),
        LowerMode::Paired4 => find_pairs(c).iter().flat_map(|m| [m.first_index, m.second_index]).collect(),
    };
    rebuild(c, |bld, i, ins| {
        if ins.op != Op::Ccx {
            bld.push(ins.clone());
            return;
        }
        let (a, b, t) = (ins.qubits[0], ins.qubits[1], ins.qubits[2]);
        if paired.contains(&i) {
            relative_phase(bld, a, b, t);
        } else {
            textbook(bld, a, b, t);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources::count;
    use crate::sim::{channel_equiv, EquivOptions, Reference};

    fn single_ccx() -> Circuit {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        b.ccx(q[0], q[1], q[2]);
        b.output("q", &q);
        b.finish().unwrap()
    }

    #[test]
    fn textbook_is_exact_toffoli() {
        let c = lower_ccx(&single_ccx(), LowerMode::Textbook7);
        assert_eq!(count(&c).unwrap().t_count, 7);
        let ccx = Reference::<f64>::permutation(|x| if x & 3 == 3 { x ^ 4 } else { x });
        assert!(channel_equiv(&c, &ccx, &EquivOptions::default()).unwrap().equivalent);
        // Unpaired macros fall back to the exact form.
        assert_eq!(lower_ccx(&single_ccx(), LowerMode::Paired4), c);
    }

    #[test]
    fn relative_phase_is_not_an_exact_toffoli() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        relative_phase(&mut b, q[0], q[1], q[2]);
        b.output("q", &q);
        let c = b.finish().unwrap();
        let ccx = Reference::<f64>::permutation(|x| if x & 3 == 3 { x ^ 4 } else { x });
        let r = channel_equiv(&c, &ccx, &EquivOptions::default()).unwrap();
        assert!(!r.equivalent);
    }
}

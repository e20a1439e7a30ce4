use rustc_hash::{FxHashMap, FxHashSet};

use super::affine::{Affine, Tracker};
use super::rebuild;
use crate::circuit::{Circuit, Op, QubitId};
use crate::gadgets::{emit_and_on, emit_unand};

/// A Toffoli whose effect is undone exactly by a later Toffoli on the same
/// operands.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PairMatch {
    pub first_index: usize,
    pub second_index: usize,
    pub controls: (QubitId, QubitId),
    pub target: QubitId,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum LastTouch {
    AllocZero,
    /// Second Toffoli of a pair; the target is |0⟩ again.
    PairEnd,
    Other,
}

struct Pending {
    first: usize,
    controls: (QubitId, QubitId),
    target_value: Affine,
    control_values: (Affine, Affine),
}

/// Finds Toffoli pairs that can be replaced by a temporary AND and its
/// measurement-based uncompute.
///
/// A pair `(i, j)` is accepted when
/// 1. the instruction touching the target just before `i` is `alloc0` (or
///    the end of an earlier pair), so the target is |0⟩;
/// 2. at `j` the target and both controls hold the same basis values they
///    did right after `i`, as proven by GF(2)-affine value tracking. Between
///    the two, the target may be read, flipped and flipped back, or used in
///    diagonal gates; anything non-affine invalidates the match;
/// 3. the two Toffolis have the same control qubits.
///
/// Every target is then |0⟩ after `j`. Matching is earliest-first and pairs
/// never overlap.
pub fn find_pairs(c: &Circuit) -> Vec<PairMatch> {
    let mut tracker = Tracker::new(c.qubit_count, &c.input_qubits());
    let mut last: Vec<Option<LastTouch>> = vec![None; c.qubit_count];
    let mut pending: FxHashMap<QubitId, Pending> = FxHashMap::default();
    let mut out = Vec::new();
    let value = |t: &Tracker, q: QubitId| t.value(q).cloned().unwrap_or_default();

    for (i, ins) in c.instructions.iter().enumerate() {
        if ins.op == Op::Ccx && ins.condition.is_none() && c.span_of(i).is_none() {
            let (a, b, t) = (ins.qubits[0], ins.qubits[1], ins.qubits[2]);
            if let Some(p) = pending.remove(&t) {
                let same_controls = p.controls == (a, b) || p.controls == (b, a);
                if same_controls
                    && tracker.value(t) == Some(&p.target_value)
                    && value(&tracker, p.controls.0) == p.control_values.0
                    && value(&tracker, p.controls.1) == p.control_values.1
                {
                    out.push(PairMatch { first_index: p.first, second_index: i, controls: p.controls, target: t });
                    tracker.set_zero(t);
                    last[a.index()] = Some(LastTouch::Other);
                    last[b.index()] = Some(LastTouch::Other);
                    last[t.index()] = Some(LastTouch::PairEnd);
                    continue;
                }
            }
            if matches!(last[t.index()], Some(LastTouch::AllocZero | LastTouch::PairEnd)) {
                tracker.apply(ins);
                pending.insert(
                    t,
                    Pending {
                        first: i,
                        controls: (a, b),
                        target_value: value(&tracker, t),
                        control_values: (value(&tracker, a), value(&tracker, b)),
                    },
                );
                for q in [a, b, t] {
                    last[q.index()] = Some(LastTouch::Other);
                }
                continue;
            }
        }
        if ins.op == Op::Release || ins.op.is_measurement() {
            pending.remove(&ins.qubits[0]);
        }
        tracker.apply(ins);
        let touch = if ins.op == Op::AllocZero && c.span_of(i).is_none() {
            LastTouch::AllocZero
        } else {
            LastTouch::Other
        };
        for q in &ins.qubits {
            last[q.index()] = Some(touch);
        }
    }
    out.sort_by_key(|m| m.first_index);
    out
}

/// Replaces every pair from [`find_pairs`]: the first Toffoli becomes an AND
/// compute on the target, the second an X-measurement uncompute. The
/// `alloc0` before the pair and a `release` right after it are absorbed;
/// if the target is used again it is re-allocated in |0⟩.
pub fn replace_pairs(c: &Circuit) -> Circuit {
    let matches = find_pairs(c);
    if matches.is_empty() {
        return c.clone();
    }
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); c.qubit_count];
    for (i, ins) in c.instructions.iter().enumerate() {
        for q in &ins.qubits {
            uses[q.index()].push(i);
        }
    }
    let firsts: FxHashMap<usize, PairMatch> = matches.iter().map(|m| (m.first_index, *m)).collect();
    let seconds: FxHashMap<usize, PairMatch> = matches.iter().map(|m| (m.second_index, *m)).collect();
    let outputs: FxHashSet<QubitId> = c.output_qubits().into_iter().collect();

    let mut dropped: FxHashSet<usize> = FxHashSet::default();
    let mut realloc: FxHashSet<usize> = FxHashSet::default();
    for m in &matches {
        let touches = &uses[m.target.index()];
        let at = touches.partition_point(|&j| j < m.first_index);
        if at > 0 {
            let j = touches[at - 1];
            if c.instructions[j].op == Op::AllocZero {
                dropped.insert(j);
            }
        }
        let after = touches.partition_point(|&j| j <= m.second_index);
        match touches.get(after) {
            Some(&k) if c.instructions[k].op == Op::Release && c.span_of(k).is_none() => {
                dropped.insert(k);
            }
            Some(&k) if firsts.contains_key(&k) => {}
            Some(_) => {
                realloc.insert(m.second_index);
            }
            None if outputs.contains(&m.target) => {
                realloc.insert(m.second_index);
            }
            None => {}
        }
    }

    rebuild(c, |bld, i, ins| {
        if dropped.contains(&i) {
            return;
        }
        if let Some(m) = firsts.get(&i) {
            emit_and_on(bld, m.controls.0, m.controls.1, m.target);
        } else if let Some(m) = seconds.get(&i) {
            emit_unand(bld, m.controls.0, m.controls.1, m.target);
            if realloc.contains(&i) {
                bld.realloc_zero(m.target);
            }
        } else {
            bld.push(ins.clone());
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn canonical(between: impl FnOnce(&mut CircuitBuilder, &[QubitId])) -> Circuit {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        let t = b.alloc_zero();
        b.ccx(q[0], q[1], t);
        b.cx(t, q[2]);
        between(&mut b, &q);
        b.ccx(q[0], q[1], t);
        b.release(t);
        b.output("q", &q);
        b.finish().unwrap()
    }

    #[test]
    fn canonical_pair_matches() {
        let c = canonical(|_, _| {});
        let m = find_pairs(&c);
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].first_index, m[0].second_index), (1, 3));
    }

    #[test]
    fn written_control_blocks_match() {
        let c = canonical(|b, q| b.x(q[0]));
        assert!(find_pairs(&c).is_empty());
        let c = canonical(|b, q| {
            b.x(q[0]);
            b.x(q[0]);
        });
        assert_eq!(find_pairs(&c).len(), 1);
    }

    #[test]
    fn target_not_known_zero() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        b.ccx(q[0], q[1], q[2]);
        b.ccx(q[0], q[1], q[2]);
        b.output("q", &q);
        assert!(find_pairs(&b.finish().unwrap()).is_empty());
    }

    #[test]
    fn replacement_shape() {
        let c = replace_pairs(&canonical(|_, _| {}));
        let bare: Vec<Op> = (0..c.len()).filter(|&i| c.span_of(i).is_none()).map(|i| c.instructions[i].op).collect();
        assert_eq!(bare, vec![Op::Cx]);
        assert_eq!(c.gadget_spans.len(), 2);
        assert_eq!(replace_pairs(&c), c);
    }
}

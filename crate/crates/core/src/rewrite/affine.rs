//! Symbolic computational-basis values as affine forms over GF(2).
//!
//! Each qubit's value on every computational path is tracked as a XOR of
//! opaque symbols plus a constant. Gates that act affinely (X, Y, CX) update
//! the forms exactly; gates that act diagonally leave them alone; any other
//! write replaces the form with a fresh symbol. Equal forms therefore mean
//! equal values on every path.

use crate::circuit::{Instruction, Op, QubitId};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    /// Sorted, duplicate-free symbol ids.
    vars: Vec<u32>,
    constant: bool,
}

impl Affine {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: u32) -> Self {
        Self { vars: vec![s], constant: false }
    }

    fn xor_assign(&mut self, other: &Affine) {
        let mut out = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() || j < other.vars.len() {
            match (self.vars.get(i), other.vars.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    out.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    out.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.vars = out;
        self.constant ^= other.constant;
    }
}

#[derive(Clone, Debug)]
pub struct Tracker {
    values: Vec<Option<Affine>>,
    next_symbol: u32,
}

impl Tracker {
    /// Inputs start as distinct symbols; other qubits are unallocated.
    pub fn new(qubit_count: usize, inputs: &[QubitId]) -> Self {
        let mut t = Self { values: vec![None; qubit_count], next_symbol: 0 };
        for &q in inputs {
            let s = t.fresh();
            t.values[q.index()] = Some(s);
        }
        t
    }

    pub fn fresh(&mut self) -> Affine {
        self.next_symbol += 1;
        Affine::symbol(self.next_symbol - 1)
    }

    pub fn value(&self, q: QubitId) -> Option<&Affine> {
        self.values[q.index()].as_ref()
    }

    /// Records that `q` is known to be |0⟩.
    pub fn set_zero(&mut self, q: QubitId) {
        self.values[q.index()] = Some(Affine::zero());
    }

    fn refresh(&mut self, q: QubitId) {
        let s = self.fresh();
        self.values[q.index()] = Some(s);
    }

    pub fn apply(&mut self, ins: &Instruction) {
        let q = &ins.qubits;
        if ins.condition.is_some() {
            for &w in q {
                if ins.writes(w) {
                    self.refresh(w);
                }
            }
            return;
        }
        match ins.op {
            Op::X | Op::Y => {
                if let Some(v) = &mut self.values[q[0].index()] {
                    v.constant ^= true;
                }
            }
            Op::Cx => {
                let c = self.values[q[0].index()].clone().unwrap_or_default();
                if let Some(v) = &mut self.values[q[1].index()] {
                    v.xor_assign(&c);
                }
            }
            Op::AllocZero => self.values[q[0].index()] = Some(Affine::zero()),
            Op::Release => self.values[q[0].index()] = None,
            op if op.is_diagonal() => {}
            _ => {
                for &w in q {
                    if ins.writes(w) {
                        self.refresh(w);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cx_twice_restores() {
        let q = [QubitId(0), QubitId(1)];
        let mut t = Tracker::new(2, &q);
        let before = t.value(q[1]).cloned();
        t.apply(&Instruction::new(Op::Cx, vec![q[0], q[1]]));
        assert_ne!(t.value(q[1]).cloned(), before);
        t.apply(&Instruction::new(Op::Cx, vec![q[0], q[1]]));
        assert_eq!(t.value(q[1]).cloned(), before);
    }

    #[test]
    fn hadamard_is_opaque() {
        let q = [QubitId(0)];
        let mut t = Tracker::new(1, &q);
        let before = t.value(q[0]).cloned();
        t.apply(&Instruction::new(Op::H, vec![q[0]]));
        t.apply(&Instruction::new(Op::H, vec![q[0]]));
        assert_ne!(t.value(q[0]).cloned(), before);
    }
}

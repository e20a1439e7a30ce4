use super::{emit_and, emit_unand, reverse, AdderSpec, GadgetError};
use crate::circuit::{Circuit, CircuitBuilder, QubitId};

/// How a carry bit is computed and erased.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum CarryStyle {
    /// Temporary logical-AND with measurement-based uncomputation.
    TemporaryAnd,
    /// Toffoli macro into a fresh |0⟩ ancilla, undone by a second Toffoli.
    Toffoli,
}

impl CarryStyle {
    fn compute(self, bld: &mut CircuitBuilder, a: QubitId, b: QubitId) -> QubitId {
        match self {
            CarryStyle::TemporaryAnd => emit_and(bld, a, b),
            CarryStyle::Toffoli => {
                let t = bld.alloc_zero();
                bld.ccx(a, b, t);
                t
            }
        }
    }

    fn uncompute(self, bld: &mut CircuitBuilder, a: QubitId, b: QubitId, t: QubitId) {
        match self {
            CarryStyle::TemporaryAnd => emit_unand(bld, a, b, t),
            CarryStyle::Toffoli => {
                bld.ccx(a, b, t);
                bld.release(t);
            }
        }
    }
}

/// Ripple-carry `b += a (+ c_in)` over little-endian registers.
///
/// `fetch(i)` yields the addend qubit for bit `i` just before it is first
/// needed and `done(i)` runs once that qubit is back to its fetched value.
/// Returns the carry-out qubit when requested.
#[allow(clippy::too_many_arguments)]
fn ripple(
    bld: &mut CircuitBuilder,
    n: usize,
    b: &[QubitId],
    cin: Option<QubitId>,
    carry_out: bool,
    style: CarryStyle,
    fetch: &mut dyn FnMut(&mut CircuitBuilder, usize) -> QubitId,
    done: &mut dyn FnMut(&mut CircuitBuilder, usize, QubitId),
) -> Option<QubitId> {
    let blocks = if carry_out { n } else { n - 1 };
    let mut carries: Vec<Option<QubitId>> = vec![cin];
    let mut a: Vec<QubitId> = Vec::with_capacity(n);
    for i in 0..blocks {
        a.push(fetch(bld, i));
        let c = carries[i];
        if let Some(c) = c {
            bld.cx(c, a[i]);
            bld.cx(c, b[i]);
        }
        let t = style.compute(bld, a[i], b[i]);
        if let Some(c) = c {
            bld.cx(c, t);
        }
        carries.push(Some(t));
    }

    let top = n - 1;
    if carry_out {
        if let Some(c) = carries[top] {
            bld.cx(c, a[top]);
        }
        bld.cx(a[top], b[top]);
    } else {
        a.push(fetch(bld, top));
        if let Some(c) = carries[top] {
            bld.cx(c, b[top]);
        }
        bld.cx(a[top], b[top]);
    }
    done(bld, top, a[top]);

    for i in (0..n - 1).rev() {
        let c = carries[i];
        let t = carries[i + 1].expect("carry computed");
        if let Some(c) = c {
            bld.cx(c, t);
        }
        style.uncompute(bld, a[i], b[i], t);
        if let Some(c) = c {
            bld.cx(c, a[i]);
        }
        bld.cx(a[i], b[i]);
        done(bld, i, a[i]);
    }
    if carry_out {
        carries[n]
    } else {
        None
    }
}

fn inplace(spec: AdderSpec, style: CarryStyle) -> Result<Circuit, GadgetError> {
    spec.check()?;
    let n = spec.n;
    let mut bld = CircuitBuilder::new();
    let a = bld.input("a", n);
    let b = bld.input("b", n);
    let cin = spec.carry_in.then(|| bld.input("cin", 1)[0]);
    let carry = ripple(
        &mut bld,
        n,
        &b,
        cin,
        spec.carry_out,
        style,
        &mut |_, i| a[i],
        &mut |_, _, _| {},
    );
    bld.output("a", &a);
    bld.output("b", &b);
    if let Some(c) = cin {
        bld.output("cin", &[c]);
    }
    if let Some(c) = carry {
        bld.output("carry", &[c]);
    }
    Ok(bld.finish()?)
}

/// In-place adder `b ← a + b mod 2ⁿ` built from temporary ANDs.
///
/// Inputs `a`, `b` (and `cin` with `carry_in`); outputs the same plus
/// `carry` with `carry_out`. Without carry-out: T-count 4n−4, measurement
/// depth 2n−2, at most n−1 ancillae.
pub fn gidney_adder(spec: AdderSpec) -> Result<Circuit, GadgetError> {
    inplace(spec, CarryStyle::TemporaryAnd)
}

/// The same ripple-carry layout with Toffoli macros computing and erasing
/// every carry. 2n−2 Toffolis without carry-out, 2n−1 with.
pub fn cuccaro_adder(spec: AdderSpec) -> Result<Circuit, GadgetError> {
    inplace(spec, CarryStyle::Toffoli)
}

/// One full-adder block on registers `c`, `a`, `b`, leaving `b ← a ⊕ b ⊕ c`.
/// The carry is computed and erased inside the block.
pub fn adder_block() -> Circuit {
    let mut bld = CircuitBuilder::new();
    let c = bld.input("c", 1)[0];
    let a = bld.input("a", 1)[0];
    let b = bld.input("b", 1)[0];
    bld.cx(c, a);
    bld.cx(c, b);
    let t = emit_and(&mut bld, a, b);
    bld.cx(c, t);
    bld.cx(c, t);
    emit_unand(&mut bld, a, b, t);
    bld.cx(c, a);
    bld.cx(a, b);
    bld.output("c", &[c]);
    bld.output("a", &[a]);
    bld.output("b", &[b]);
    bld.finish().expect("adder block is valid")
}

/// Controlled in-place adder: `b ← b + ctrl·a`.
///
/// Each addend bit is replaced by a temporary `ctrl ∧ aᵢ`, so every block
/// costs 8 T. Totals: 8n−4 without carry-out, 8n with; a carry-in adds 4.
/// Inputs `ctrl`, `a`, `b` (, `cin`); outputs the same (, `carry`).
pub fn controlled_adder(spec: AdderSpec) -> Result<Circuit, GadgetError> {
    spec.check()?;
    let n = spec.n;
    let mut bld = CircuitBuilder::new();
    let ctrl = bld.input("ctrl", 1)[0];
    let a = bld.input("a", n);
    let b = bld.input("b", n);
    let cin = spec.carry_in.then(|| bld.input("cin", 1)[0]);
    let c0 = cin.map(|c| emit_and(&mut bld, ctrl, c));
    let carry = ripple(
        &mut bld,
        n,
        &b,
        c0,
        spec.carry_out,
        CarryStyle::TemporaryAnd,
        &mut |bld, i| emit_and(bld, ctrl, a[i]),
        &mut |bld, i, x| emit_unand(bld, ctrl, a[i], x),
    );
    if let (Some(c), Some(t)) = (cin, c0) {
        emit_unand(&mut bld, ctrl, c, t);
    }
    bld.output("ctrl", &[ctrl]);
    bld.output("a", &a);
    bld.output("b", &b);
    if let Some(c) = cin {
        bld.output("cin", &[c]);
    }
    if let Some(c) = carry {
        bld.output("carry", &[c]);
    }
    Ok(bld.finish()?)
}

/// Out-of-place adder `(a, b, 0) ↦ (a, b, a + b)`.
///
/// The sum register `s` is allocated inside the circuit: n+1 bits with
/// carry-out, n bits otherwise. Each carry is one temporary AND, so the
/// T-count is 4n (or 4n−4). Inputs `a`, `b` (, `cin`); outputs the same
/// plus `s`.
pub fn outofplace_adder(spec: AdderSpec) -> Result<Circuit, GadgetError> {
    spec.check()?;
    let n = spec.n;
    let mut bld = CircuitBuilder::new();
    let a = bld.input("a", n);
    let b = bld.input("b", n);
    let cin = spec.carry_in.then(|| bld.input("cin", 1)[0]);
    let s0 = bld.alloc_zero();
    if let Some(c) = cin {
        bld.cx(c, s0);
    }
    let mut s = vec![s0];
    for i in 0..n {
        let c = s[i];
        let carry_known_zero = i == 0 && cin.is_none();
        if i + 1 < n || spec.carry_out {
            if !carry_known_zero {
                bld.cx(c, a[i]);
                bld.cx(c, b[i]);
            }
            let t = emit_and(&mut bld, a[i], b[i]);
            if !carry_known_zero {
                bld.cx(c, t);
                bld.cx(c, a[i]);
                bld.cx(c, b[i]);
            }
            s.push(t);
        }
        bld.cx(a[i], c);
        bld.cx(b[i], c);
    }
    bld.output("a", &a);
    bld.output("b", &b);
    if let Some(c) = cin {
        bld.output("cin", &[c]);
    }
    bld.output("s", &s);
    Ok(bld.finish()?)
}

/// Erases the sum register of [`outofplace_adder`] without any T gates.
/// Inputs `a`, `b` (, `cin`), `s`; outputs `a`, `b` (, `cin`).
pub fn outofplace_adder_inverse(spec: AdderSpec) -> Result<Circuit, GadgetError> {
    reverse(&outofplace_adder(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Op;
    use crate::sim::{enumerate_branches, InputState};

    fn t_count(c: &Circuit) -> usize {
        c.instructions.iter().filter(|i| i.op.is_t_type()).count()
    }

    fn ccx_count(c: &Circuit) -> usize {
        c.instructions.iter().filter(|i| i.op == Op::Ccx).count()
    }

    /// Classical value of every output on a basis input, checking all branches agree.
    fn eval(c: &Circuit, x: u64) -> u64 {
        let branches = enumerate_branches::<f64>(c, &InputState::Basis(x), 16).unwrap();
        let v = branches[0].final_state[0].0;
        for br in &branches {
            assert_eq!(br.final_state.len(), 1);
            assert_eq!(br.final_state[0].0, v);
        }
        v
    }

    #[test]
    fn one_bit_adder_is_a_single_cx() {
        let c = gidney_adder(AdderSpec::new(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.instructions[0].op, Op::Cx);
    }

    #[test]
    fn four_bit_example() {
        let c = gidney_adder(AdderSpec::new(4)).unwrap();
        assert_eq!(eval(&c, 3 | (5 << 4)), 3 | (8 << 4));
    }

    #[test]
    fn t_counts() {
        for n in 1..10 {
            assert_eq!(t_count(&gidney_adder(AdderSpec::new(n)).unwrap()), 4 * n - 4);
            assert_eq!(t_count(&gidney_adder(AdderSpec::new(n).with_carry_out(true)).unwrap()), 4 * n);
            assert_eq!(t_count(&controlled_adder(AdderSpec::new(n)).unwrap()), 8 * n - 4);
            assert_eq!(t_count(&outofplace_adder(AdderSpec::new(n).with_carry_out(true)).unwrap()), 4 * n);
            assert_eq!(t_count(&outofplace_adder_inverse(AdderSpec::new(n)).unwrap()), 0);
            assert_eq!(ccx_count(&cuccaro_adder(AdderSpec::new(n)).unwrap()), 2 * n - 2);
        }
        assert_eq!(t_count(&adder_block()), 4);
    }

    #[test]
    fn carry_in_and_out() {
        let spec = AdderSpec::new(3).with_carry_in(true).with_carry_out(true);
        for style in [gidney_adder, cuccaro_adder] {
            let c = style(spec).unwrap();
            for x in 0..128u64 {
                let (a, b, cin) = (x & 7, (x >> 3) & 7, x >> 6);
                let s = a + b + cin;
                assert_eq!(eval(&c, x), a | ((s & 7) << 3) | (cin << 6) | ((s >> 3) << 7));
            }
        }
    }

    #[test]
    fn controlled_examples() {
        let c = controlled_adder(AdderSpec::new(2)).unwrap();
        assert_eq!(eval(&c, 1 | (1 << 1) | (1 << 3)), 1 | (1 << 1) | (2 << 3));
        assert_eq!(eval(&c, (1 << 1) | (1 << 3)), (1 << 1) | (1 << 3));
    }

    #[test]
    fn outofplace_example() {
        let c = outofplace_adder(AdderSpec::new(3).with_carry_out(true)).unwrap();
        assert_eq!(eval(&c, 2 | (3 << 3)), 2 | (3 << 3) | (5 << 6));
    }
}

use super::{emit_and, emit_unand, GadgetError};
use crate::circuit::{Circuit, CircuitBuilder};

/// NOT on `target` controlled by all `k` qubits of `controls`.
///
/// A ladder of temporary ANDs folds the controls into one ancilla, which
/// drives a CX and is then erased with measurements only: 4k−4 T gates.
/// Inputs `controls`, `target`; outputs the same.
pub fn multi_controlled_x(k: usize) -> Result<Circuit, GadgetError> {
    if k == 0 {
        return Err(GadgetError::ZeroWidth);
    }
    let mut bld = CircuitBuilder::new();
    let controls = bld.input("controls", k);
    let target = bld.input("target", 1)[0];
    let mut ladder = vec![controls[0]];
    for &c in &controls[1..] {
        let top = *ladder.last().unwrap();
        ladder.push(emit_and(&mut bld, top, c));
    }
    bld.cx(*ladder.last().unwrap(), target);
    for i in (1..k).rev() {
        emit_unand(&mut bld, ladder[i - 1], controls[i], ladder[i]);
    }
    bld.output("controls", &controls);
    bld.output("target", &[target]);
    Ok(bld.finish()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{enumerate_branches, InputState};

    #[test]
    fn single_control_is_cx() {
        let c = multi_controlled_x(1).unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn truth_table_k3() {
        let c = multi_controlled_x(3).unwrap();
        for x in 0..16u64 {
            for br in enumerate_branches::<f64>(&c, &InputState::Basis(x), 16).unwrap() {
                let flip = (x & 7 == 7) as u64;
                assert_eq!(br.final_state[0].0, x ^ (flip << 3));
            }
        }
    }
}

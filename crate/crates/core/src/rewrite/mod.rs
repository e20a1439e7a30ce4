//! Toffoli-pair replacement, Toffoli lowering, and the phase-oracle compiler.

mod affine;
mod lower;
mod oracle;
mod pairs;

pub use lower::{lower_ccx, LowerMode};
pub use oracle::{compile_oracle, compile_oracle_toffoli, parse_expr, Expr, OracleError, MAX_VARIABLES};
pub use pairs::{find_pairs, replace_pairs, PairMatch};

use crate::circuit::{Circuit, CircuitBuilder, Instruction};

/// Copies `c` instruction by instruction through `emit`, preserving gadget
/// spans, registers and identifier space. `emit` must leave span contents
/// untouched.
pub(crate) fn rebuild(c: &Circuit, mut emit: impl FnMut(&mut CircuitBuilder, usize, &Instruction)) -> Circuit {
    let mut bld = CircuitBuilder::new();
    bld.reserve(c.qubit_count, c.classbit_count);
    bld.set_registers(c.inputs.clone(), c.outputs.clone());
    let mut spans = c.gadget_spans.iter().peekable();
    let mut open_end = None;
    for (i, ins) in c.instructions.iter().enumerate() {
        if let Some(s) = spans.next_if(|s| s.start == i) {
            bld.begin_gadget(s.tag);
            open_end = Some(s.end);
        }
        emit(&mut bld, i, ins);
        if open_end == Some(i + 1) {
            bld.end_gadget();
            open_end = None;
        }
    }
    bld.finish().expect("rewrite preserves validity")
}

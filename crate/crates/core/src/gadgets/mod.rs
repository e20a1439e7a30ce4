//! Circuit constructions built from the temporary logical-AND.
//!
//! Every emitter returns a validated [`Circuit`] with named input and output
//! registers. Registers are little-endian: bit `k` of a register value is its
//! `k`-th qubit.

mod adders;
mod and;
mod hamming;
mod mcx;
mod phase_gradient;
mod reverse;

use thiserror::Error;

pub use adders::{adder_block, controlled_adder, cuccaro_adder, gidney_adder, outofplace_adder, outofplace_adder_inverse};
pub use and::{
    and_compute, and_uncompute, and_uncompute_reverse, emit_and, emit_and_on, emit_unand, ReverseUncompute,
};
pub use hamming::{apply_rz_via_hamming, hamming_register_len, hamming_weight_compute, hamming_weight_uncompute, HammingWeight};
pub use mcx::multi_controlled_x;
pub use phase_gradient::{gradient_state, phase_gradient_add, GradientRegister};
pub use reverse::{reverse, reverse_unchecked};

use crate::circuit::ValidationError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("bit width must be at least 1")]
    ZeroWidth,
    #[error("gradient register was not marked prepared")]
    GradientNotPrepared,
    #[error("gradient register has {got} qubits, target has {expected}")]
    GradientWidth { expected: usize, got: usize },
    #[error("instruction {0} has no inverse outside a gadget span")]
    NotReversible(usize),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Width and boundary options for the adders.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdderSpec {
    pub n: usize,
    pub carry_out: bool,
    pub carry_in: bool,
}

impl AdderSpec {
    pub fn new(n: usize) -> Self {
        Self { n, carry_out: false, carry_in: false }
    }

    pub fn with_carry_out(mut self, yes: bool) -> Self {
        self.carry_out = yes;
        self
    }

    pub fn with_carry_in(mut self, yes: bool) -> Self {
        self.carry_in = yes;
        self
    }

    fn check(&self) -> Result<(), GadgetError> {
        if self.n == 0 {
            Err(GadgetError::ZeroWidth)
        } else {
            Ok(())
        }
    }
}

/// Resource counts a construction is expected to hit exactly.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GadgetReportExpectation {
    pub t_count: usize,
    pub meas_depth: usize,
    /// Peak number of simultaneously live ancillae.
    pub ancillae: usize,
}

impl GadgetReportExpectation {
    pub fn and_compute() -> Self {
        Self { t_count: 4, meas_depth: 1, ancillae: 1 }
    }

    pub fn and_uncompute() -> Self {
        Self { t_count: 0, meas_depth: 1, ancillae: 0 }
    }

    pub fn adder_block() -> Self {
        Self { t_count: 4, meas_depth: 2, ancillae: 1 }
    }

    pub fn gidney_adder(spec: AdderSpec) -> Self {
        let n = spec.n;
        let ands = n - 1 + spec.carry_out as usize;
        Self { t_count: 4 * ands, meas_depth: ands + (n - 1), ancillae: ands }
    }

    pub fn mcx(k: usize) -> Self {
        Self { t_count: 4 * (k - 1), meas_depth: 2 * (k - 1), ancillae: k - 1 }
    }
}

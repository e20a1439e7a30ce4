//! Named constructions, as reachable from the command line and the corpus.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, CircuitBuilder};
use crate::gadgets::{
    and_compute, and_uncompute, controlled_adder, cuccaro_adder, gidney_adder, hamming_weight_compute,
    hamming_weight_uncompute, multi_controlled_x, outofplace_adder, outofplace_adder_inverse, phase_gradient_add,
    AdderSpec, GadgetError, GradientRegister,
};
use crate::verify::Semantics;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    GidneyAdder,
    CuccaroAdder,
    ControlledAdder,
    OutOfPlaceAdder,
    OutOfPlaceAdderInverse,
    And,
    AndUncompute,
    Mcx,
    Hamming,
    HammingUncompute,
    PhaseGradient,
    ToffoliPair,
}

impl Kind {
    pub const ALL: [Kind; 12] = [
        Kind::GidneyAdder,
        Kind::CuccaroAdder,
        Kind::ControlledAdder,
        Kind::OutOfPlaceAdder,
        Kind::OutOfPlaceAdderInverse,
        Kind::And,
        Kind::AndUncompute,
        Kind::Mcx,
        Kind::Hamming,
        Kind::HammingUncompute,
        Kind::PhaseGradient,
        Kind::ToffoliPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::GidneyAdder => "gidney-adder",
            Kind::CuccaroAdder => "cuccaro-adder",
            Kind::ControlledAdder => "controlled-adder",
            Kind::OutOfPlaceAdder => "out-of-place-adder",
            Kind::OutOfPlaceAdderInverse => "out-of-place-adder-inverse",
            Kind::And => "and",
            Kind::AndUncompute => "and-uncompute",
            Kind::Mcx => "mcx",
            Kind::Hamming => "hamming",
            Kind::HammingUncompute => "hamming-uncompute",
            Kind::PhaseGradient => "phase-gradient",
            Kind::ToffoliPair => "toffoli-pair",
        }
    }

    /// Whether `n` changes the construction.
    pub fn uses_width(self) -> bool {
        !matches!(self, Kind::And | Kind::AndUncompute | Kind::ToffoliPair)
    }

    /// Whether `--carry-out` changes the construction.
    pub fn uses_carry(self) -> bool {
        matches!(
            self,
            Kind::GidneyAdder
                | Kind::CuccaroAdder
                | Kind::ControlledAdder
                | Kind::OutOfPlaceAdder
                | Kind::OutOfPlaceAdderInverse
        )
    }

    pub fn semantics(self, n: usize, carry_out: bool) -> Semantics {
        match self {
            Kind::GidneyAdder | Kind::CuccaroAdder => Semantics::AddInPlace { n, carry_out },
            Kind::PhaseGradient => Semantics::PhaseGradient { n },
            Kind::ControlledAdder => Semantics::AddControlled { n, carry_out },
            Kind::OutOfPlaceAdder => Semantics::AddOutOfPlace { n, carry_out },
            Kind::OutOfPlaceAdderInverse => Semantics::EraseSum { n, carry_out },
            Kind::And => Semantics::And,
            Kind::AndUncompute => Semantics::EraseAnd,
            Kind::Mcx => Semantics::Mcx { k: n },
            Kind::Hamming => Semantics::Popcount { n },
            Kind::HammingUncompute => Semantics::ErasePopcount { n },
            Kind::ToffoliPair => Semantics::Ccx,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kind `{s}`"))
    }
}

/// `alloc0 t; ccx a b t; cx t c; ccx a b t; release t` on inputs `q`.
pub fn toffoli_pair() -> Circuit {
    let mut b = CircuitBuilder::new();
    let q = b.input("q", 3);
    let t = b.alloc_zero();
    b.ccx(q[0], q[1], t);
    b.cx(t, q[2]);
    b.ccx(q[0], q[1], t);
    b.release(t);
    b.output("q", &q);
    b.finish().expect("pair is valid")
}

pub fn build(kind: Kind, n: usize, carry_out: bool) -> Result<Circuit, GadgetError> {
    let spec = AdderSpec::new(n).with_carry_out(carry_out);
    match kind {
        Kind::GidneyAdder => gidney_adder(spec),
        Kind::CuccaroAdder => cuccaro_adder(spec),
        Kind::ControlledAdder => controlled_adder(spec),
        Kind::OutOfPlaceAdder => outofplace_adder(spec),
        Kind::OutOfPlaceAdderInverse => outofplace_adder_inverse(spec),
        Kind::And => Ok(and_compute().1),
        Kind::AndUncompute => Ok(and_uncompute()),
        Kind::Mcx => multi_controlled_x(n),
        Kind::Hamming => Ok(hamming_weight_compute(n)?.circuit),
        Kind::HammingUncompute => hamming_weight_uncompute(&hamming_weight_compute(n)?),
        Kind::PhaseGradient => phase_gradient_add(n, &GradientRegister::new(n).mark_prepared()),
        Kind::ToffoliPair => Ok(toffoli_pair()),
    }
}

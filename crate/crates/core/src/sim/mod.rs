//! Sparse state-vector simulation with mid-circuit measurement, classical
//! feedback, ancilla allocation and release, and exhaustive enumeration of
//! measurement branches. Serves as the correctness oracle for every gadget
//! and rewrite in the crate.

mod equiv;
mod exec;
mod state;

use num_complex::Complex;
use thiserror::Error;

use crate::circuit::{QubitId, ValidationError};
use crate::scalar::Real;

pub use equiv::{
    basis_equiv, channel_equiv, fidelity, random_state, random_superposition, states_equiv, BranchPolicy, EquivOptions, EquivReport, Reference,
};
pub use exec::{
    enumerate_branches, run, BranchResult, Outcomes, RunResult, DEFAULT_BRANCH_BOUND, ZERO_PROBABILITY,
};
pub use state::{SimState, FACTOR_TOLERANCE, RELEASE_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SimError {
    #[error("invalid circuit: {0}")]
    Invalid(#[from] ValidationError),
    #[error("input has {got} qubits, circuit declares {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("released qubit {qubit} is not |0>: weight {weight:e} on |1>")]
    ReleaseEntangled { qubit: QubitId, weight: f64 },
    #[error("{measurements} measurements exceed the branch bound {bound}")]
    TooManyBranches { measurements: usize, bound: usize },
    #[error("qubit {0} is not live")]
    NotLive(QubitId),
    #[error("qubit {0} is already live")]
    AlreadyLive(QubitId),
    #[error("more than 64 live qubits")]
    TooManyQubits,
    #[error("forced outcome has zero probability")]
    ImpossibleOutcome,
    #[error("no forced outcome supplied for measurement {0}")]
    MissingForcedOutcome(usize),
    #[error("classical bit c{0} read before it was written")]
    UnsetClassbit(usize),
    #[error("non-output qubits remain entangled with the outputs")]
    OutputEntangled,
    #[error("reference and circuit disagree on output width ({0} vs {1})")]
    OutputWidthMismatch(usize, usize),
}

/// Initial state over a circuit's declared input qubits.
#[derive(Clone, Debug)]
pub enum InputState<F: Real> {
    /// Computational basis state; bit `k` is the `k`-th declared input qubit.
    Basis(u64),
    /// Dense amplitudes of length `2^inputs`.
    Amplitudes(Vec<Complex<F>>),
}

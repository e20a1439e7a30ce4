use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{InputState, SimError, SimState};
use crate::circuit::{validate, Circuit, Instruction, Op, QubitId};
use crate::scalar::Real;

/// Branch probabilities at or below this are treated as unreachable.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Default cap on measurements for [`enumerate_branches`].
pub const DEFAULT_BRANCH_BOUND: usize = 16;

/// How measurement outcomes are chosen during [`run`].
#[derive(Clone, Debug)]
pub enum Outcomes {
    /// Sample from the Born rule with a seeded generator.
    Sampled(u64),
    /// Use the given outcome for the `k`-th measurement executed.
    Forced(Vec<bool>),
}

/// Final state and classical record of one execution.
#[derive(Clone, Debug)]
pub struct RunResult<F: Real> {
    pub state: SimState<F>,
    pub classbits: Vec<Option<bool>>,
}

/// One reachable assignment of measurement outcomes.
#[derive(Clone, Debug)]
pub struct BranchResult<F: Real> {
    /// Outcomes in execution order, paired with the classical bit written.
    pub outcomes: Vec<(usize, bool)>,
    pub probability: F,
    /// Sparse amplitudes over the circuit's declared output qubits, sorted by index.
    pub final_state: Vec<(u64, Complex<F>)>,
}

impl<F: Real> BranchResult<F> {
    pub fn dense(&self, output_qubits: usize) -> Vec<Complex<F>> {
        let mut v = vec![Complex::default(); 1usize << output_qubits];
        for &(i, a) in &self.final_state {
            v[i as usize] = a;
        }
        v
    }
}

fn gate_matrix<F: Real>(op: Op) -> [[Complex<F>; 2]; 2] {
    let o = Complex::new(F::zero(), F::zero());
    let i = Complex::new(F::zero(), F::one());
    let h = Complex::new(F::FRAC_1_SQRT_2(), F::zero());
    match op {
        Op::H => [[h, h], [h, -h]],
        Op::Y => [[o, -i], [i, o]],
        _ => unreachable!("not a mixing single-qubit gate"),
    }
}

/// Phase applied to |1⟩ by a diagonal single-qubit gate (relative to |0⟩).
pub(crate) fn diagonal_of<F: Real>(op: Op) -> (Complex<F>, Complex<F>) {
    let one = Complex::new(F::one(), F::zero());
    let cis = |theta: F| Complex::new(theta.cos(), theta.sin());
    let quarter = F::FRAC_PI_4();
    match op {
        Op::Z => (one, -one),
        Op::S => (one, Complex::new(F::zero(), F::one())),
        Op::Sdg => (one, Complex::new(F::zero(), -F::one())),
        Op::T => (one, cis(quarter)),
        Op::Tdg => (one, cis(-quarter)),
        Op::Rz(theta) => {
            let half = F::from_f64_lossy(theta) / (F::one() + F::one());
            (cis(-half), cis(half))
        }
        _ => unreachable!("not a diagonal gate"),
    }
}

/// Applies one non-measurement instruction.
pub(crate) fn apply<F: Real>(state: &mut SimState<F>, ins: &Instruction) -> Result<(), SimError> {
    if let Some(bit) = ins.condition {
        match state.classbit(bit.index()) {
            Some(true) => {}
            Some(false) => return Ok(()),
            None => return Err(SimError::UnsetClassbit(bit.index())),
        }
    }
    let q = &ins.qubits;
    match ins.op {
        Op::X => state.apply_controlled_x(&[], q[0]),
        Op::Cx => state.apply_controlled_x(&q[..1], q[1]),
        Op::Ccx => state.apply_controlled_x(&q[..2], q[2]),
        Op::Cz => state.apply_phase(q, -Complex::new(F::one(), F::zero())),
        Op::H | Op::Y => state.apply_1q(q[0], gate_matrix(ins.op)),
        op @ (Op::Z | Op::S | Op::Sdg | Op::T | Op::Tdg | Op::Rz(_)) => {
            let (zero, one) = diagonal_of::<F>(op);
            state.apply_diagonal(q[0], zero, one)
        }
        Op::AllocZero => state.allocate(q[0], false),
        Op::AllocT => state.allocate(q[0], true),
        Op::Release => state.release(q[0]),
        Op::MeasureZ(_) | Op::MeasureX(_) => unreachable!("measurements handled by the driver"),
    }
}

/// Probability of outcome 1 for a measurement instruction, with the basis
/// change already applied for X measurements.
fn prepare_measurement<F: Real>(state: &mut SimState<F>, ins: &Instruction) -> Result<F, SimError> {
    if let Op::MeasureX(_) = ins.op {
        state.apply_1q(ins.qubits[0], gate_matrix(Op::H))?;
    }
    state.probability_one(ins.qubits[0])
}

fn finish_measurement<F: Real>(state: &mut SimState<F>, ins: &Instruction, outcome: bool) -> Result<(), SimError> {
    let q = ins.qubits[0];
    state.project_z(q, outcome)?;
    if let Op::MeasureX(bit) = ins.op {
        state.apply_1q(q, gate_matrix(Op::H))?;
        state.mark_measured_x(q);
        state.set_classbit(bit.index(), outcome);
    } else if let Op::MeasureZ(bit) = ins.op {
        state.set_classbit(bit.index(), outcome);
    }
    Ok(())
}

pub(crate) fn initial_state<F: Real>(c: &Circuit, input: &InputState<F>) -> Result<SimState<F>, SimError> {
    let inputs = c.input_qubits();
    let k = inputs.len();
    match input {
        InputState::Basis(index) => {
            if k < 64 && *index >> k != 0 {
                return Err(SimError::DimensionMismatch { expected: k, got: 64 - index.leading_zeros() as usize });
            }
            SimState::from_amplitudes(
                c.qubit_count,
                c.classbit_count,
                &inputs,
                [(*index, Complex::new(F::one(), F::zero()))],
            )
        }
        InputState::Amplitudes(amps) => {
            if k >= usize::BITS as usize || amps.len() != 1usize << k {
                return Err(SimError::DimensionMismatch { expected: k, got: amps.len().trailing_zeros() as usize });
            }
            SimState::from_amplitudes(
                c.qubit_count,
                c.classbit_count,
                &inputs,
                amps.iter().enumerate().map(|(i, a)| (i as u64, *a)),
            )
        }
    }
}

/// Executes `c` on `input`, choosing measurement outcomes per `outcomes`.
pub fn run<F: Real>(c: &Circuit, input: &InputState<F>, outcomes: &Outcomes) -> Result<RunResult<F>, SimError> {
    validate(c)?;
    let mut state = initial_state(c, input)?;
    let mut rng = match outcomes {
        Outcomes::Sampled(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        Outcomes::Forced(_) => None,
    };
    let mut measured = 0;
    for ins in &c.instructions {
        if !ins.op.is_measurement() {
            apply(&mut state, ins)?;
            continue;
        }
        let p1 = prepare_measurement(&mut state, ins)?.to_f64().unwrap_or(0.0);
        let outcome = match (outcomes, rng.as_mut()) {
            (Outcomes::Forced(list), _) => *list.get(measured).ok_or(SimError::MissingForcedOutcome(measured))?,
            (_, Some(rng)) => rng.random::<f64>() < p1,
            _ => unreachable!(),
        };
        let p = if outcome { p1 } else { 1.0 - p1 };
        if p <= ZERO_PROBABILITY {
            return Err(SimError::ImpossibleOutcome);
        }
        finish_measurement(&mut state, ins, outcome)?;
        measured += 1;
    }
    Ok(RunResult { classbits: state.classbits().to_vec(), state })
}

/// Runs every reachable measurement branch of `c` on `input`.
///
/// Branches are produced in lexicographic order of their outcome sequence
/// (0 before 1), which makes the result independent of scheduling.
pub fn enumerate_branches<F: Real>(
    c: &Circuit,
    input: &InputState<F>,
    max_measurements: usize,
) -> Result<Vec<BranchResult<F>>, SimError> {
    validate(c)?;
    let count = c.measurement_count();
    if count > max_measurements {
        return Err(SimError::TooManyBranches { measurements: count, bound: max_measurements });
    }
    let outputs = c.output_qubits();
    let state = initial_state(c, input)?;
    let mut results = Vec::new();
    explore(c, &outputs, state, 0, &mut Vec::new(), &mut results)?;
    Ok(results)
}

fn explore<F: Real>(
    c: &Circuit,
    outputs: &[QubitId],
    mut state: SimState<F>,
    mut pc: usize,
    outcomes: &mut Vec<(usize, bool)>,
    results: &mut Vec<BranchResult<F>>,
) -> Result<(), SimError> {
    while pc < c.len() {
        let ins = &c.instructions[pc];
        if !ins.op.is_measurement() {
            apply(&mut state, ins)?;
            pc += 1;
            continue;
        }
        let p1 = prepare_measurement(&mut state, ins)?.to_f64().unwrap_or(0.0);
        let bit = ins.op.result().unwrap().index();
        for outcome in [false, true] {
            let p = if outcome { p1 } else { 1.0 - p1 };
            if p <= ZERO_PROBABILITY {
                continue;
            }
            let mut branch = state.clone();
            finish_measurement(&mut branch, ins, outcome)?;
            outcomes.push((bit, outcome));
            explore(c, outputs, branch, pc + 1, outcomes, results)?;
            outcomes.pop();
        }
        return Ok(());
    }
    results.push(BranchResult {
        outcomes: outcomes.clone(),
        probability: state.branch_weight(),
        final_state: state.output_amplitudes(outputs)?,
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn c64(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn forced_projection_after_hadamard() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        b.h(q);
        b.measure_z(q);
        b.output("q", &[q]);
        let c = b.finish().unwrap();
        let r = run::<f64>(&c, &InputState::Basis(0), &Outcomes::Forced(vec![true])).unwrap();
        let out = r.state.output_state(&[q]).unwrap();
        assert!(out[0].norm() < 1e-12);
        assert!((out[1].norm() - 1.0).abs() < 1e-12);
        assert_eq!(r.classbits, vec![Some(true)]);
    }

    #[test]
    fn magic_state_allocation() {
        let mut b = CircuitBuilder::new();
        let q = b.alloc_t();
        b.output("t", &[q]);
        let c = b.finish().unwrap();
        let r = run::<f64>(&c, &InputState::Basis(0), &Outcomes::Sampled(1)).unwrap();
        let out = r.state.output_state(&[q]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let w = c64((std::f64::consts::PI / 4.0).cos(), (std::f64::consts::PI / 4.0).sin());
        assert!((out[0] - c64(h, 0.0)).norm() < 1e-12);
        assert!((out[1] - w * h).norm() < 1e-12);
    }

    #[test]
    fn same_seed_same_outcomes() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 6);
        for &x in &q {
            b.h(x);
            b.measure_z(x);
        }
        b.output("q", &q);
        let c = b.finish().unwrap();
        let r1 = run::<f64>(&c, &InputState::Basis(0), &Outcomes::Sampled(42)).unwrap();
        let r2 = run::<f64>(&c, &InputState::Basis(0), &Outcomes::Sampled(42)).unwrap();
        assert_eq!(r1.classbits, r2.classbits);
        assert_eq!(r1.state.output_state(&q).unwrap(), r2.state.output_state(&q).unwrap());
    }

    #[test]
    fn bell_pair_branches() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        b.h(q[0]);
        b.cx(q[0], q[1]);
        b.measure_z(q[0]);
        b.output("q", &q);
        let c = b.finish().unwrap();
        let branches = enumerate_branches::<f64>(&c, &InputState::Basis(0), 16).unwrap();
        assert_eq!(branches.len(), 2);
        for br in &branches {
            assert!((br.probability - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_free_circuit_has_one_branch() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        b.h(q);
        b.output("q", &[q]);
        let c = b.finish().unwrap();
        let branches = enumerate_branches::<f64>(&c, &InputState::Basis(0), 16).unwrap();
        assert_eq!(branches.len(), 1);
        assert!((branches[0].probability - 1.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_measurement_omits_zero_branch() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        b.measure_z(q);
        b.output("q", &[q]);
        let c = b.finish().unwrap();
        let branches = enumerate_branches::<f64>(&c, &InputState::Basis(1), 16).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].outcomes, vec![(0, true)]);
    }

    #[test]
    fn too_many_branches() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        for _ in 0..3 {
            b.measure_z(q);
        }
        b.output("q", &[q]);
        let c = b.finish().unwrap();
        assert!(matches!(
            enumerate_branches::<f64>(&c, &InputState::Basis(0), 2),
            Err(SimError::TooManyBranches { measurements: 3, bound: 2 })
        ));
    }

    #[test]
    fn release_entangled_rejected() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        let a = b.alloc_zero();
        b.h(q);
        b.cx(q, a);
        b.release(a);
        b.output("q", &[q]);
        let c = b.finish().unwrap();
        let err = run::<f64>(&c, &InputState::Basis(0), &Outcomes::Sampled(0)).unwrap_err();
        assert!(matches!(err, SimError::ReleaseEntangled { .. }));
    }

    #[test]
    fn release_after_measurement_skips_check() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 1)[0];
        let a = b.alloc_zero();
        b.h(a);
        b.cx(a, q);
        b.measure_x(a);
        b.release(a);
        b.output("q", &[q]);
        let c = b.finish().unwrap();
        let branches = enumerate_branches::<f64>(&c, &InputState::Basis(0), 16).unwrap();
        assert_eq!(branches.len(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        b.output("q", &q);
        let c = b.finish().unwrap();
        let bad = InputState::Amplitudes(vec![Complex::new(1.0, 0.0); 3]);
        assert!(matches!(run::<f64>(&c, &bad, &Outcomes::Sampled(0)), Err(SimError::DimensionMismatch { .. })));
        assert!(matches!(
            run::<f64>(&c, &InputState::Basis(4), &Outcomes::Sampled(0)),
            Err(SimError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn norm_preserved_and_single_precision_works() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        b.h(q[0]);
        b.t(q[0]);
        b.ccx(q[0], q[1], q[2]);
        b.h(q[2]);
        b.rz(0.3, q[1]);
        b.output("q", &q);
        let c = b.finish().unwrap();
        let r64 = run::<f64>(&c, &InputState::Basis(2), &Outcomes::Sampled(0)).unwrap();
        assert!((r64.state.norm_sqr() - 1.0).abs() < 1e-12);
        let r32 = run::<f32>(&c, &InputState::Basis(2), &Outcomes::Sampled(0)).unwrap();
        assert!((r32.state.norm_sqr() - 1.0).abs() < 1e-5);
    }
}

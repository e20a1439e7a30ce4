use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{enumerate_branches, run, InputState, Outcomes, SimError, DEFAULT_BRANCH_BOUND};
use crate::circuit::Circuit;
use crate::scalar::Real;

type MonomialMap<'a, F> = Box<dyn Fn(u64) -> (u64, Complex<F>) + Send + Sync + 'a>;

/// The behaviour a circuit is checked against.
pub enum Reference<'a, F: Real> {
    /// Maps input basis state `x` to `phase · |image⟩` over the output qubits.
    /// Permutations, diagonal phases, and classical isometries all fit.
    Monomial(MonomialMap<'a, F>),
    /// Another circuit with the same input and output registers. It is run
    /// once per input with a fixed seed, so it must be outcome-independent.
    Circuit(&'a Circuit),
}

impl<'a, F: Real> Reference<'a, F> {
    pub fn monomial(f: impl Fn(u64) -> (u64, Complex<F>) + Send + Sync + 'a) -> Self {
        Reference::Monomial(Box::new(f))
    }

    pub fn permutation(f: impl Fn(u64) -> u64 + Send + Sync + 'a) -> Self {
        Reference::Monomial(Box::new(move |x| (f(x), Complex::new(F::one(), F::zero()))))
    }

    pub fn phase(f: impl Fn(u64) -> Complex<F> + Send + Sync + 'a) -> Self {
        Reference::Monomial(Box::new(move |x| (x, f(x))))
    }

    pub fn identity() -> Self {
        Self::permutation(|x| x)
    }

    fn apply(&self, input: &[(u64, Complex<F>)], seed: u64) -> Result<Vec<(u64, Complex<F>)>, SimError> {
        match self {
            Reference::Monomial(f) => {
                let mut out: FxHashMap<u64, Complex<F>> = FxHashMap::default();
                for &(x, a) in input {
                    let (y, phase) = f(x);
                    *out.entry(y).or_default() += a * phase;
                }
                let mut v: Vec<_> = out.into_iter().collect();
                v.sort_unstable_by_key(|(i, _)| *i);
                Ok(v)
            }
            Reference::Circuit(c) => {
                let dense = densify(input, c.input_qubits().len());
                let r = run(c, &InputState::Amplitudes(dense), &Outcomes::Sampled(seed))?;
                r.state.output_amplitudes(&c.output_qubits())
            }
        }
    }
}

/// Which measurement branches to examine per input.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BranchPolicy {
    /// Every reachable branch (fails past [`DEFAULT_BRANCH_BOUND`] measurements).
    All,
    /// A fixed number of independently sampled branches.
    Sampled(usize),
    /// All branches when the circuit has at most `bound` measurements,
    /// otherwise `samples` sampled branches.
    Auto { bound: usize, samples: usize },
}

#[derive(Copy, Clone, Debug)]
pub struct EquivOptions {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    pub branches: BranchPolicy,
}

impl Default for EquivOptions {
    fn default() -> Self {
        Self { trials: 20, tol: 1e-10, seed: 0, branches: BranchPolicy::Auto { bound: 8, samples: 4 } }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EquivReport {
    pub equivalent: bool,
    pub worst_fidelity: f64,
    /// Total branches examined across all inputs.
    pub branches: usize,
    pub inputs: usize,
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)` for sparse vectors sorted by index.
pub fn fidelity<F: Real>(a: &[(u64, Complex<F>)], b: &[(u64, Complex<F>)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut overlap = Complex::<F>::default();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                overlap += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    let na = a.iter().fold(F::zero(), |s, (_, x)| s + x.norm_sqr());
    let nb = b.iter().fold(F::zero(), |s, (_, x)| s + x.norm_sqr());
    (overlap.norm_sqr() / (na * nb)).to_f64().unwrap_or(0.0)
}

/// Haar-random pure state of dimension `dim`.
pub fn random_state<F: Real>(dim: usize, rng: &mut impl Rng) -> Vec<Complex<F>> {
    let mut gauss = || {
        let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        (r * theta.cos(), r * theta.sin())
    };
    let raw: Vec<(f64, f64)> = (0..dim).map(|_| gauss()).collect();
    let norm = raw.iter().map(|(x, y)| x * x + y * y).sum::<f64>().sqrt();
    raw.into_iter()
        .map(|(x, y)| Complex::new(F::from_f64_lossy(x / norm), F::from_f64_lossy(y / norm)))
        .collect()
}

fn densify<F: Real>(sparse: &[(u64, Complex<F>)], qubits: usize) -> Vec<Complex<F>> {
    let mut v = vec![Complex::default(); 1usize << qubits];
    for &(i, a) in sparse {
        v[i as usize] = a;
    }
    v
}

fn sparsify<F: Real>(dense: &[Complex<F>]) -> Vec<(u64, Complex<F>)> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > F::zero())
        .map(|(i, a)| (i as u64, *a))
        .collect()
}

fn mix(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Worst fidelity and branch count for one input.
fn check_input<F: Real>(
    c: &Circuit,
    reference: &Reference<'_, F>,
    input: Vec<(u64, Complex<F>)>,
    policy: BranchPolicy,
    seed: u64,
) -> Result<(f64, usize), SimError> {
    let width = c.input_qubits().len();
    let expected = reference.apply(&input, seed)?;
    let dense = InputState::Amplitudes(densify(&input, width));
    let enumerate = match policy {
        BranchPolicy::All => true,
        BranchPolicy::Sampled(_) => false,
        BranchPolicy::Auto { bound, .. } => c.measurement_count() <= bound,
    };
    let finals: Vec<Vec<(u64, Complex<F>)>> = if enumerate || c.measurement_count() == 0 {
        enumerate_branches(c, &dense, DEFAULT_BRANCH_BOUND.max(c.measurement_count().min(20)))?
            .into_iter()
            .map(|b| b.final_state)
            .collect()
    } else {
        let samples = match policy {
            BranchPolicy::Sampled(k) | BranchPolicy::Auto { samples: k, .. } => k.max(1),
            BranchPolicy::All => unreachable!(),
        };
        (0..samples)
            .map(|s| {
                let r = run(c, &dense, &Outcomes::Sampled(mix(seed, s as u64)))?;
                r.state.output_amplitudes(&c.output_qubits())
            })
            .collect::<Result<_, _>>()?
    };
    let worst = finals.iter().map(|f| fidelity(&expected, f)).fold(1.0f64, f64::min);
    Ok((worst, finals.len()))
}

fn summarize(results: Vec<Result<(f64, usize), SimError>>, tol: f64) -> Result<EquivReport, SimError> {
    let mut worst = 1.0f64;
    let mut branches = 0;
    let inputs = results.len();
    for r in results {
        let (f, b) = r?;
        worst = worst.min(f);
        branches += b;
    }
    Ok(EquivReport { equivalent: worst >= 1.0 - tol, worst_fidelity: worst, branches, inputs })
}

/// Checks `c` against `reference` on `opts.trials` Haar-random input states.
pub fn channel_equiv<F: Real>(
    c: &Circuit,
    reference: &Reference<'_, F>,
    opts: &EquivOptions,
) -> Result<EquivReport, SimError> {
    let width = c.input_qubits().len();
    let results = (0..opts.trials)
        .into_par_iter()
        .map(|t| {
            let seed = mix(opts.seed, t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let input = sparsify(&random_state::<F>(1usize << width, &mut rng));
            check_input(c, reference, input, opts.branches, seed)
        })
        .collect();
    summarize(results, opts.tol)
}

/// Checks `c` against `reference` on explicit sparse input states.
pub fn states_equiv<F: Real>(
    c: &Circuit,
    reference: &Reference<'_, F>,
    states: Vec<Vec<(u64, Complex<F>)>>,
    opts: &EquivOptions,
) -> Result<EquivReport, SimError> {
    let results = states
        .into_par_iter()
        .enumerate()
        .map(|(k, input)| check_input(c, reference, input, opts.branches, mix(opts.seed, k as u64)))
        .collect();
    summarize(results, opts.tol)
}

/// Random normalized superposition over the given basis states.
pub fn random_superposition<F: Real>(support: &[u64], rng: &mut impl Rng) -> Vec<(u64, Complex<F>)> {
    let amps = random_state::<F>(support.len(), rng);
    let mut v: Vec<_> = support.iter().copied().zip(amps).collect();
    v.sort_unstable_by_key(|(i, _)| *i);
    v
}

/// Checks `c` against `reference` on each listed computational basis input.
pub fn basis_equiv<F: Real>(
    c: &Circuit,
    reference: &Reference<'_, F>,
    inputs: &[u64],
    opts: &EquivOptions,
) -> Result<EquivReport, SimError> {
    let results = inputs
        .par_iter()
        .map(|&x| {
            let input = vec![(x, Complex::new(F::one(), F::zero()))];
            check_input(c, reference, input, opts.branches, mix(opts.seed, x))
        })
        .collect();
    summarize(results, opts.tol)
}

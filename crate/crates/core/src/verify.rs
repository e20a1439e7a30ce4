//! Simulation-backed checks that a circuit implements a described behaviour.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::{build, Kind};
use crate::circuit::Circuit;
use crate::gadgets::{
    and_compute, and_uncompute, apply_rz_via_hamming, gradient_state, hamming_register_len, hamming_weight_compute,
    outofplace_adder, outofplace_adder_inverse, AdderSpec, GadgetError,
};
use crate::rewrite::{lower_ccx, parse_expr, replace_pairs, Expr, LowerMode, OracleError};
use crate::sim::{
    random_superposition, run, states_equiv, BranchPolicy, EquivOptions, EquivReport, InputState, Outcomes,
    Reference, SimError,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("bad semantics descriptor `{0}`")]
    Descriptor(String),
}

/// Intended behaviour of a circuit, over its declared registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Semantics {
    /// `(a, b) ↦ (a, a + b)`, with the carry appended when `carry_out`.
    AddInPlace { n: usize, carry_out: bool },
    /// `(ctrl, a, b) ↦ (ctrl, a, b + ctrl·a)`.
    AddControlled { n: usize, carry_out: bool },
    /// `(a, b) ↦ (a, b, a + b)`.
    AddOutOfPlace { n: usize, carry_out: bool },
    /// `(a, b, a + b) ↦ (a, b)`, checked on valid inputs only.
    EraseSum { n: usize, carry_out: bool },
    /// `(a, b) ↦ (a, b, a ∧ b)`.
    And,
    /// `(a, b, a ∧ b) ↦ (a, b)`, checked on valid inputs only.
    EraseAnd,
    /// Target flipped when all `k` controls are set.
    Mcx { k: usize },
    /// The `w` output register holds the popcount of the input.
    Popcount { n: usize },
    /// Undoes the popcount construction of width `n`.
    ErasePopcount { n: usize },
    /// `|x⟩ ↦ (−1)^{f(x)} |x⟩`.
    PhaseOracle(String),
    /// `|k⟩|G⟩ ↦ e^{2πik/2ⁿ} |k⟩|G⟩` with `G` the phase-gradient state.
    PhaseGradient { n: usize },
    /// Toffoli on three qubits.
    Ccx,
    Identity,
}

fn carry_suffix(carry_out: bool) -> &'static str {
    if carry_out {
        " carry-out"
    } else {
        ""
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::AddInPlace { n, carry_out } => write!(f, "add-inplace {n}{}", carry_suffix(*carry_out)),
            Semantics::AddControlled { n, carry_out } => write!(f, "add-controlled {n}{}", carry_suffix(*carry_out)),
            Semantics::AddOutOfPlace { n, carry_out } => write!(f, "add-outofplace {n}{}", carry_suffix(*carry_out)),
            Semantics::EraseSum { n, carry_out } => write!(f, "erase-sum {n}{}", carry_suffix(*carry_out)),
            Semantics::And => f.write_str("and"),
            Semantics::EraseAnd => f.write_str("erase-and"),
            Semantics::Mcx { k } => write!(f, "mcx {k}"),
            Semantics::Popcount { n } => write!(f, "popcount {n}"),
            Semantics::ErasePopcount { n } => write!(f, "erase-popcount {n}"),
            Semantics::PhaseOracle(e) => write!(f, "phase-oracle {e}"),
            Semantics::PhaseGradient { n } => write!(f, "phase-gradient {n}"),
            Semantics::Ccx => f.write_str("ccx"),
            Semantics::Identity => f.write_str("identity"),
        }
    }
}

impl FromStr for Semantics {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || VerifyError::Descriptor(s.to_string());
        let (head, rest) = s.split_once(' ').unwrap_or((s, ""));
        if head == "phase-oracle" {
            parse_expr(rest)?;
            return Ok(Semantics::PhaseOracle(rest.trim().to_string()));
        }
        let mut words = rest.split_whitespace();
        let mut width = || words.next().and_then(|w| w.parse::<usize>().ok()).ok_or_else(bad);
        let sem = match head {
            "add-inplace" | "add-controlled" | "add-outofplace" | "erase-sum" => {
                let n = width()?;
                let carry_out = match words.next() {
                    None => false,
                    Some("carry-out") => true,
                    Some(_) => return Err(bad()),
                };
                match head {
                    "add-inplace" => Semantics::AddInPlace { n, carry_out },
                    "add-controlled" => Semantics::AddControlled { n, carry_out },
                    "add-outofplace" => Semantics::AddOutOfPlace { n, carry_out },
                    _ => Semantics::EraseSum { n, carry_out },
                }
            }
            "and" => Semantics::And,
            "erase-and" => Semantics::EraseAnd,
            "mcx" => Semantics::Mcx { k: width()? },
            "popcount" => Semantics::Popcount { n: width()? },
            "erase-popcount" => Semantics::ErasePopcount { n: width()? },
            "phase-gradient" => Semantics::PhaseGradient { n: width()? },
            "ccx" => Semantics::Ccx,
            "identity" => Semantics::Identity,
            _ => return Err(bad()),
        };
        if words.next().is_some() {
            return Err(bad());
        }
        Ok(sem)
    }
}

#[derive(Copy, Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random superposed input states per check.
    pub trials: usize,
    pub tol: f64,
    pub branches: BranchPolicy,
    /// Inputs wider than this many qubits are sampled instead of enumerated.
    pub exhaustive_width: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 20,
            tol: 1e-10,
            branches: BranchPolicy::Auto { bound: 8, samples: 4 },
            exhaustive_width: 12,
        }
    }
}

impl VerifyOptions {
    fn equiv(&self) -> EquivOptions {
        EquivOptions { trials: self.trials, tol: self.tol, seed: self.seed, branches: self.branches }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub worst_fidelity: f64,
    pub branches: usize,
}

impl CheckOutcome {
    fn from_report(name: &str, r: EquivReport) -> Self {
        Self { name: name.to_string(), passed: r.equivalent, worst_fidelity: r.worst_fidelity, branches: r.branches }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} status={} worst_fidelity={:.12} branches={}",
            self.name,
            if self.passed { "pass" } else { "fail" },
            self.worst_fidelity,
            self.branches
        )
    }
}

fn one() -> Complex<f64> {
    Complex::new(1.0, 0.0)
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Basis inputs for a check: all of them when narrow enough, otherwise a
/// seeded sample of `2^exhaustive_width` distinct ones.
fn basis_inputs(width: usize, opts: &VerifyOptions, salt: u64) -> Vec<u64> {
    if width <= opts.exhaustive_width {
        return (0..1u64 << width).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt);
    let mut v: Vec<u64> =
        sample(&mut rng, 1usize << width, 1usize << opts.exhaustive_width).into_iter().map(|i| i as u64).collect();
    v.sort_unstable();
    v
}

/// Basis check on `inputs` and superposition check on random states
/// supported on them.
fn permutation_checks(
    c: &Circuit,
    reference: &Reference<'_, f64>,
    inputs: &[u64],
    opts: &VerifyOptions,
) -> Result<Vec<CheckOutcome>, VerifyError> {
    let basis = inputs.iter().map(|&x| vec![(x, one())]).collect();
    let b = states_equiv(c, reference, basis, &opts.equiv())?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let states = (0..opts.trials).map(|_| random_superposition(inputs, &mut rng)).collect();
    let s = states_equiv(c, reference, states, &opts.equiv())?;
    Ok(vec![CheckOutcome::from_report("basis", b), CheckOutcome::from_report("superposition", s)])
}

fn adder_map(n: usize, carry_out: bool) -> impl Fn(u64, u64) -> (u64, u64) {
    move |a, b| {
        let s = a + b;
        (s & mask(n), if carry_out { s >> n } else { 0 })
    }
}

fn popcount_check(c: &Circuit, n: usize, opts: &VerifyOptions) -> Result<CheckOutcome, VerifyError> {
    let w = c.output("w").map(|r| r.qubits.clone()).ok_or_else(|| VerifyError::Descriptor("no `w` output".into()))?;
    let outputs = c.output_qubits();
    let positions: Vec<usize> = w.iter().map(|q| outputs.iter().position(|o| o == q).unwrap()).collect();
    let mut ok = w.len() == hamming_register_len(n);
    let inputs = basis_inputs(n, opts, 1);
    for &x in &inputs {
        let r = run::<f64>(c, &InputState::Basis(x), &Outcomes::Sampled(opts.seed ^ x))?;
        let out = r.state.output_amplitudes(&outputs)?;
        let value = positions.iter().enumerate().fold(0u64, |v, (k, &p)| v | (((out[0].0 >> p) & 1) << k));
        ok &= out.len() == 1 && value == x.count_ones() as u64;
    }
    Ok(CheckOutcome { name: "popcount".into(), passed: ok, worst_fidelity: ok as u8 as f64, branches: inputs.len() })
}

fn gradient_checks(c: &Circuit, n: usize, opts: &VerifyOptions) -> Result<Vec<CheckOutcome>, VerifyError> {
    let dim = 1u64 << n;
    let grad = gradient_state::<f64>(n);
    let kick = |k: u64| Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / dim as f64);
    let with_gradient = |target: &[(u64, Complex<f64>)]| -> Vec<(u64, Complex<f64>)> {
        let mut v = Vec::new();
        for (j, g) in grad.iter().enumerate() {
            for &(k, a) in target {
                v.push((k | ((j as u64) << n), a * g));
            }
        }
        v.sort_unstable_by_key(|(i, _)| *i);
        v
    };

    // Phase on each basis state, without quotienting global phase.
    let mut worst_err = 0.0f64;
    let mut worst_fid = 1.0f64;
    for k in 0..dim {
        let input = with_gradient(&[(k, one())]);
        let dense: Vec<Complex<f64>> = {
            let mut d = vec![Complex::default(); 1usize << (2 * n)];
            for &(i, a) in &input {
                d[i as usize] = a;
            }
            d
        };
        let r = run::<f64>(c, &InputState::Amplitudes(dense), &Outcomes::Sampled(opts.seed ^ k))?;
        let out = r.state.output_amplitudes(&c.output_qubits())?;
        let overlap = crate::sim::fidelity(&input, &out);
        let lookup: rustc_hash::FxHashMap<u64, Complex<f64>> = out.into_iter().collect();
        let amp: Complex<f64> =
            input.iter().map(|(i, a)| a.conj() * lookup.get(i).copied().unwrap_or_default()).sum();
        worst_err = worst_err.max((amp - kick(k)).norm());
        worst_fid = worst_fid.min(overlap);
    }
    let phase = CheckOutcome {
        name: "phase".into(),
        passed: worst_err <= opts.tol,
        worst_fidelity: worst_fid,
        branches: dim as usize,
    };

    let reference = Reference::phase(move |x| kick(x & (dim - 1)));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let targets: Vec<u64> = (0..dim).collect();
    let states = (0..opts.trials).map(|_| with_gradient(&random_superposition(&targets, &mut rng))).collect();
    let s = states_equiv(c, &reference, states, &opts.equiv())?;
    Ok(vec![phase, CheckOutcome::from_report("superposition", s)])
}

/// Runs every check that applies to `sem` on `c`.
pub fn verify(c: &Circuit, sem: &Semantics, opts: &VerifyOptions) -> Result<Vec<CheckOutcome>, VerifyError> {
    match sem {
        Semantics::AddInPlace { n, carry_out } => {
            let (n, f) = (*n, adder_map(*n, *carry_out));
            let r = Reference::permutation(move |x| {
                let (a, b) = (x & mask(n), (x >> n) & mask(n));
                let (s, c) = f(a, b);
                a | (s << n) | (c << (2 * n))
            });
            permutation_checks(c, &r, &basis_inputs(2 * n, opts, 0), opts)
        }
        Semantics::AddControlled { n, carry_out } => {
            let (n, f) = (*n, adder_map(*n, *carry_out));
            let r = Reference::permutation(move |x| {
                let (ctrl, a, b) = (x & 1, (x >> 1) & mask(n), (x >> (n + 1)) & mask(n));
                let (s, c) = f(ctrl * a, b);
                ctrl | (a << 1) | (s << (n + 1)) | (c << (2 * n + 1))
            });
            permutation_checks(c, &r, &basis_inputs(2 * n + 1, opts, 0), opts)
        }
        Semantics::AddOutOfPlace { n, carry_out } => {
            let (n, w) = (*n, *n + *carry_out as usize);
            let r = Reference::permutation(move |x| {
                let (a, b) = (x & mask(n), x >> n);
                x | (((a + b) & mask(w)) << (2 * n))
            });
            permutation_checks(c, &r, &basis_inputs(2 * n, opts, 0), opts)
        }
        Semantics::EraseSum { n, carry_out } => {
            let (n, w) = (*n, *n + *carry_out as usize);
            let valid: Vec<u64> = basis_inputs(2 * n, opts, 0)
                .into_iter()
                .map(|x| x | (((x & mask(n)) + (x >> n)) & mask(w)) << (2 * n))
                .collect();
            let r = Reference::permutation(move |x| x & mask(2 * n));
            permutation_checks(c, &r, &valid, opts)
        }
        Semantics::And => {
            let r = Reference::permutation(|x| x | ((x & (x >> 1) & 1) << 2));
            permutation_checks(c, &r, &[0, 1, 2, 3], opts)
        }
        Semantics::EraseAnd => {
            let r = Reference::permutation(|x| x & 3);
            permutation_checks(c, &r, &[0, 1, 2, 7], opts)
        }
        Semantics::Mcx { k } => {
            let k = *k;
            let r = Reference::permutation(move |x| x ^ (((x & mask(k)) == mask(k)) as u64) << k);
            permutation_checks(c, &r, &basis_inputs(k + 1, opts, 0), opts)
        }
        Semantics::Popcount { n } => Ok(vec![popcount_check(c, *n, opts)?]),
        Semantics::ErasePopcount { n } => {
            let both = hamming_weight_compute(*n)?.circuit.then(c);
            permutation_checks(&both, &Reference::identity(), &basis_inputs(*n, opts, 0), opts)
        }
        Semantics::PhaseOracle(text) => {
            let e: Expr = parse_expr(text)?;
            let r = Reference::phase(move |x| if e.eval(x) { -one() } else { one() });
            permutation_checks(c, &r, &basis_inputs(c.input_qubits().len(), opts, 0), opts)
        }
        Semantics::PhaseGradient { n } => gradient_checks(c, *n, opts),
        Semantics::Ccx => {
            let r = Reference::permutation(|x| x ^ ((x & (x >> 1) & 1) << 2));
            permutation_checks(c, &r, &(0..8).collect::<Vec<_>>(), opts)
        }
        Semantics::Identity => {
            permutation_checks(c, &Reference::identity(), &basis_inputs(c.input_qubits().len(), opts, 0), opts)
        }
    }
}

fn renamed(mut checks: Vec<CheckOutcome>, prefix: &str) -> Vec<CheckOutcome> {
    for c in &mut checks {
        c.name = format!("{prefix}-{}", c.name);
    }
    checks
}

/// Checks a catalog construction against its semantics, plus the extra
/// round-trip, rewrite and rotation checks that apply to its kind.
pub fn verify_kind(kind: Kind, n: usize, carry_out: bool, opts: &VerifyOptions) -> Result<Vec<CheckOutcome>, VerifyError> {
    let c = build(kind, n, carry_out)?;
    let sem = kind.semantics(n, carry_out);
    let mut out = verify(&c, &sem, opts)?;
    let spec = AdderSpec::new(n).with_carry_out(carry_out);
    let width = |c: &Circuit| c.input_qubits().len();
    match kind {
        Kind::And => {
            let rt = and_compute().1.then(&and_uncompute());
            out.extend(renamed(verify(&rt, &Semantics::Identity, opts)?, "roundtrip"));
        }
        Kind::OutOfPlaceAdder => {
            let rt = outofplace_adder(spec)?.then(&outofplace_adder_inverse(spec)?);
            out.extend(renamed(verify(&rt, &Semantics::Identity, opts)?, "roundtrip"));
        }
        Kind::Hamming => {
            let theta = 0.731_f64;
            let rz = apply_rz_via_hamming(theta, n)?;
            let r = Reference::phase(move |x: u64| {
                let ones = x.count_ones() as f64;
                Complex::from_polar(1.0, theta * (ones - n as f64 / 2.0))
            });
            let inputs = basis_inputs(width(&rz), opts, 0);
            out.extend(renamed(permutation_checks(&rz, &r, &inputs, opts)?, "rz"));
        }
        Kind::CuccaroAdder | Kind::ToffoliPair => {
            let rewritten = replace_pairs(&c);
            out.extend(renamed(verify(&rewritten, &sem, opts)?, "rewrite"));
            let paired = lower_ccx(&c, LowerMode::Paired4);
            out.extend(renamed(verify(&paired, &sem, opts)?, "paired4"));
        }
        _ => {}
    }
    Ok(out)
}

use num_complex::Complex;

use super::{gidney_adder, AdderSpec, GadgetError};
use crate::circuit::{Circuit, Register};
use crate::scalar::Real;

/// Handle for an n-qubit phase-gradient register.
///
/// The register itself is supplied to the simulator as an exact state
/// ([`gradient_state`]); callers must mark it prepared before adding into it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GradientRegister {
    pub n: usize,
    prepared: bool,
}

impl GradientRegister {
    pub fn new(n: usize) -> Self {
        Self { n, prepared: false }
    }

    pub fn mark_prepared(mut self) -> Self {
        self.prepared = true;
        self
    }

    pub fn is_prepared(&self) -> bool {
        self.prepared
    }
}

/// `2^{-n/2} Σ_j e^{-2πij/2ⁿ} |j⟩`.
pub fn gradient_state<F: Real>(n: usize) -> Vec<Complex<F>> {
    let dim = 1usize << n;
    let scale = F::from_f64_lossy((dim as f64).sqrt().recip());
    (0..dim)
        .map(|j| {
            let angle = F::from_f64_lossy(-std::f64::consts::TAU * j as f64 / dim as f64);
            Complex::from_polar(scale, angle)
        })
        .collect()
}

/// Phase `e^{2πik/2ⁿ}` on target basis state `|k⟩`, kicked back by adding
/// the target into a prepared gradient register.
///
/// Inputs and outputs `target`, `gradient`. Costs one n-bit adder.
pub fn phase_gradient_add(n: usize, gradient: &GradientRegister) -> Result<Circuit, GadgetError> {
    if !gradient.is_prepared() {
        return Err(GadgetError::GradientNotPrepared);
    }
    if gradient.n != n {
        return Err(GadgetError::GradientWidth { expected: n, got: gradient.n });
    }
    let mut c = gidney_adder(AdderSpec::new(n))?;
    for regs in [&mut c.inputs, &mut c.outputs] {
        for r in regs.iter_mut() {
            *r = Register::new(if r.name == "a" { "target" } else { "gradient" }, r.qubits.clone());
        }
    }
    Ok(c)
}

use num_complex::Complex;
use rustc_hash::FxHashMap;

use super::SimError;
use crate::circuit::QubitId;
use crate::scalar::Real;

/// Probability mass on |1⟩ tolerated when releasing an unmeasured qubit.
pub const RELEASE_TOLERANCE: f64 = 1e-9;

/// Residual tolerated when factoring non-output qubits out of a final state.
pub const FACTOR_TOLERANCE: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Measured {
    Z,
    X,
}

/// State vector over the live qubits, stored sparsely.
///
/// Each live qubit occupies one bit position of the basis index. Amplitudes
/// whose magnitude falls below [`Real::prune_tolerance`] after a mixing gate
/// are dropped, so computational-basis evolution stays cheap regardless of
/// how many qubits are live.
#[derive(Clone, Debug)]
pub struct SimState<F: Real> {
    amps: FxHashMap<u64, Complex<F>>,
    position: Vec<Option<u8>>,
    occupied: u64,
    measured: Vec<Option<Measured>>,
    classbits: Vec<Option<bool>>,
    branch_weight: F,
}

impl<F: Real> SimState<F> {
    /// A state with `inputs` live at positions `0..inputs.len()`, holding `amplitudes`
    /// (index bit `k` is `inputs[k]`).
    pub fn from_amplitudes(
        qubit_count: usize,
        classbit_count: usize,
        inputs: &[QubitId],
        amplitudes: impl IntoIterator<Item = (u64, Complex<F>)>,
    ) -> Result<Self, SimError> {
        if inputs.len() > 64 {
            return Err(SimError::TooManyQubits);
        }
        let mut position = vec![None; qubit_count];
        for (k, q) in inputs.iter().enumerate() {
            position[q.index()] = Some(k as u8);
        }
        let occupied = if inputs.len() == 64 { u64::MAX } else { (1u64 << inputs.len()) - 1 };
        let mut amps = FxHashMap::default();
        for (i, a) in amplitudes {
            if i & !occupied != 0 {
                return Err(SimError::DimensionMismatch { expected: inputs.len(), got: 64 });
            }
            if a.norm_sqr() > F::zero() {
                amps.insert(i, a);
            }
        }
        let mut s = Self {
            amps,
            position,
            occupied,
            measured: vec![None; qubit_count],
            classbits: vec![None; classbit_count],
            branch_weight: F::one(),
        };
        s.renormalize();
        Ok(s)
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> F {
        self.amps.values().fold(F::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn branch_weight(&self) -> F {
        self.branch_weight
    }

    pub fn classbits(&self) -> &[Option<bool>] {
        &self.classbits
    }

    pub fn classbit(&self, index: usize) -> Option<bool> {
        self.classbits.get(index).copied().flatten()
    }

    pub fn is_live(&self, q: QubitId) -> bool {
        self.position.get(q.index()).copied().flatten().is_some()
    }

    pub fn live_qubits(&self) -> Vec<QubitId> {
        (0..self.position.len())
            .filter(|&i| self.position[i].is_some())
            .map(|i| QubitId(i as u32))
            .collect()
    }

    fn mask(&self, q: QubitId) -> Result<u64, SimError> {
        self.position
            .get(q.index())
            .copied()
            .flatten()
            .map(|p| 1u64 << p)
            .ok_or(SimError::NotLive(q))
    }

    fn touch(&mut self, q: QubitId) {
        self.measured[q.index()] = None;
    }

    fn renormalize(&mut self) {
        let n = self.norm_sqr();
        if n > F::zero() {
            let s = F::one() / n.sqrt();
            for a in self.amps.values_mut() {
                *a *= s;
            }
        }
    }

    pub(crate) fn set_classbit(&mut self, index: usize, value: bool) {
        self.classbits[index] = Some(value);
    }

    /// Applies a 2×2 unitary `[[m00, m01], [m10, m11]]` to `q`.
    pub fn apply_1q(&mut self, q: QubitId, m: [[Complex<F>; 2]; 2]) -> Result<(), SimError> {
        let mask = self.mask(q)?;
        self.touch(q);
        let mut next: FxHashMap<u64, Complex<F>> =
            FxHashMap::with_capacity_and_hasher(self.amps.len() * 2, Default::default());
        for (&i, &a) in &self.amps {
            let bit = usize::from(i & mask != 0);
            let base = i & !mask;
            let lo = m[0][bit] * a;
            let hi = m[1][bit] * a;
            *next.entry(base).or_default() += lo;
            *next.entry(base | mask).or_default() += hi;
        }
        let tol = F::prune_tolerance();
        let tol2 = tol * tol;
        next.retain(|_, a| a.norm_sqr() > tol2);
        self.amps = next;
        Ok(())
    }

    /// Multiplies by `phase` every basis state where all of `qubits` are 1.
    pub fn apply_phase(&mut self, qubits: &[QubitId], phase: Complex<F>) -> Result<(), SimError> {
        let mut mask = 0;
        for &q in qubits {
            mask |= self.mask(q)?;
            self.touch(q);
        }
        for (&i, a) in self.amps.iter_mut() {
            if i & mask == mask {
                *a *= phase;
            }
        }
        Ok(())
    }

    /// Multiplies basis states by `zero` or `one` depending on the value of `q`.
    pub fn apply_diagonal(&mut self, q: QubitId, zero: Complex<F>, one: Complex<F>) -> Result<(), SimError> {
        let mask = self.mask(q)?;
        self.touch(q);
        for (&i, a) in self.amps.iter_mut() {
            *a *= if i & mask != 0 { one } else { zero };
        }
        Ok(())
    }

    /// Flips `target` on every basis state where all `controls` are 1.
    pub fn apply_controlled_x(&mut self, controls: &[QubitId], target: QubitId) -> Result<(), SimError> {
        let mut cmask = 0;
        for &c in controls {
            cmask |= self.mask(c)?;
            self.touch(c);
        }
        let tmask = self.mask(target)?;
        self.touch(target);
        let old = std::mem::take(&mut self.amps);
        self.amps = old
            .into_iter()
            .map(|(i, a)| if i & cmask == cmask { (i ^ tmask, a) } else { (i, a) })
            .collect();
        Ok(())
    }

    /// Probability that measuring `q` in Z yields 1.
    pub fn probability_one(&self, q: QubitId) -> Result<F, SimError> {
        let mask = self.mask(q)?;
        let total = self.norm_sqr();
        let one = self
            .amps
            .iter()
            .filter(|(&i, _)| i & mask != 0)
            .fold(F::zero(), |acc, (_, a)| acc + a.norm_sqr());
        Ok(one / total)
    }

    /// Projects `q` onto Z outcome `value`, renormalizes, and returns the
    /// outcome's probability.
    pub fn project_z(&mut self, q: QubitId, value: bool) -> Result<F, SimError> {
        let p1 = self.probability_one(q)?;
        let p = if value { p1 } else { F::one() - p1 };
        let mask = self.mask(q)?;
        self.amps.retain(|&i, _| (i & mask != 0) == value);
        if self.amps.is_empty() {
            return Err(SimError::ImpossibleOutcome);
        }
        self.renormalize();
        self.branch_weight *= p;
        self.measured[q.index()] = Some(Measured::Z);
        Ok(p)
    }

    pub(crate) fn mark_measured_x(&mut self, q: QubitId) {
        self.measured[q.index()] = Some(Measured::X);
    }

    /// Brings a new qubit `q` to life in |0⟩, or in the magic state when `magic`.
    pub fn allocate(&mut self, q: QubitId, magic: bool) -> Result<(), SimError> {
        if self.is_live(q) {
            return Err(SimError::AlreadyLive(q));
        }
        let free = !self.occupied;
        if free == 0 {
            return Err(SimError::TooManyQubits);
        }
        let pos = free.trailing_zeros() as u8;
        let mask = 1u64 << pos;
        self.occupied |= mask;
        if q.index() >= self.position.len() {
            self.position.resize(q.index() + 1, None);
            self.measured.resize(q.index() + 1, None);
        }
        self.position[q.index()] = Some(pos);
        self.measured[q.index()] = None;
        if magic {
            let h = F::FRAC_1_SQRT_2();
            let quarter = F::FRAC_PI_4();
            let w = Complex::new(quarter.cos(), quarter.sin()) * h;
            let old = std::mem::take(&mut self.amps);
            for (i, a) in old {
                self.amps.insert(i, a * h);
                self.amps.insert(i | mask, a * w);
            }
        }
        Ok(())
    }

    /// Removes `q` from the state.
    ///
    /// A qubit measured since its last gate is known to be separable and is
    /// contracted out directly; otherwise it must be |0⟩ within
    /// [`RELEASE_TOLERANCE`].
    pub fn release(&mut self, q: QubitId) -> Result<(), SimError> {
        let mask = self.mask(q)?;
        match self.measured[q.index()] {
            Some(Measured::Z) => {
                let old = std::mem::take(&mut self.amps);
                self.amps = old.into_iter().map(|(i, a)| (i & !mask, a)).collect();
            }
            Some(Measured::X) => {
                self.amps.retain(|&i, _| i & mask == 0);
                self.renormalize();
            }
            None => {
                let p1 = self.probability_one(q)?;
                if p1.to_f64().unwrap_or(1.0) > RELEASE_TOLERANCE {
                    return Err(SimError::ReleaseEntangled { qubit: q, weight: p1.to_f64().unwrap_or(f64::NAN) });
                }
                self.amps.retain(|&i, _| i & mask == 0);
                self.renormalize();
            }
        }
        self.occupied &= !mask;
        self.position[q.index()] = None;
        self.measured[q.index()] = None;
        Ok(())
    }

    /// Sparse amplitudes over `qubits` (index bit `k` is `qubits[k]`), sorted
    /// by index, after factoring out every other live qubit. Fails if the
    /// remaining qubits are entangled with the requested ones.
    pub fn output_amplitudes(&self, qubits: &[QubitId]) -> Result<Vec<(u64, Complex<F>)>, SimError> {
        let positions: Vec<u64> = qubits.iter().map(|&q| self.mask(q)).collect::<Result<_, _>>()?;
        let out_mask = positions.iter().fold(0, |m, p| m | p);
        let project = |i: u64| -> u64 {
            positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| i & p != 0)
                .fold(0u64, |acc, (k, _)| acc | (1 << k))
        };

        let mut groups: FxHashMap<u64, Vec<(u64, Complex<F>)>> = FxHashMap::default();
        for (&i, &a) in &self.amps {
            groups.entry(i & !out_mask).or_default().push((project(i), a));
        }
        let weight = |g: &[(u64, Complex<F>)]| g.iter().fold(F::zero(), |s, (_, a)| s + a.norm_sqr());
        let mut keys: Vec<u64> = groups.keys().copied().collect();
        keys.sort_unstable();
        let best = keys
            .iter()
            .copied()
            .max_by(|a, b| weight(&groups[a]).partial_cmp(&weight(&groups[b])).unwrap())
            .ok_or(SimError::ImpossibleOutcome)?;

        let mut psi = groups[&best].clone();
        psi.sort_unstable_by_key(|(o, _)| *o);
        let norm = weight(&psi).sqrt();
        for (_, a) in psi.iter_mut() {
            *a /= norm;
        }

        if groups.len() > 1 {
            let lookup: FxHashMap<u64, Complex<F>> = psi.iter().copied().collect();
            let mut residual = F::zero();
            for key in &keys {
                let g = &groups[key];
                let mut overlap = Complex::default();
                for &(o, a) in g {
                    if let Some(p) = lookup.get(&o) {
                        overlap += p.conj() * a;
                    }
                }
                residual = residual + weight(g) - overlap.norm_sqr();
            }
            let total = self.norm_sqr();
            if (residual / total).to_f64().unwrap_or(1.0) > FACTOR_TOLERANCE {
                return Err(SimError::OutputEntangled);
            }
        }
        Ok(psi)
    }

    /// Dense form of [`SimState::output_amplitudes`].
    pub fn output_state(&self, qubits: &[QubitId]) -> Result<Vec<Complex<F>>, SimError> {
        let mut dense = vec![Complex::default(); 1usize << qubits.len()];
        for (i, a) in self.output_amplitudes(qubits)? {
            dense[i as usize] = a;
        }
        Ok(dense)
    }
}

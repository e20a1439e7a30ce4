use std::cmp::Ordering;

use thiserror::Error;

use super::ResourceReport;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("cost model field `{0}` must be positive")]
    NonPositive(&'static str),
    #[error("no crossover within n <= {bound}")]
    NoCrossover { bound: u64 },
}

/// Spacetime constants that convert held ancillae into |T⟩-state units.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CostModel<S> {
    /// Volume of one |T⟩ state.
    pub t_state_volume: S,
    /// Volume of one ancilla held for one measurement-depth layer.
    pub ancilla_volume_per_depth: S,
    /// Divisor applied to idle ancillae (6 for a compact memory layout).
    pub idle_factor: S,
}

impl<S: Scalar> Default for CostModel<S> {
    fn default() -> Self {
        Self {
            t_state_volume: S::from_u64_exact(960),
            ancilla_volume_per_depth: S::from_u64_exact(2),
            idle_factor: S::one(),
        }
    }
}

/// Closed-form adder families.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AdderFamily {
    /// 4n T plus n² ancilla-layers.
    TemporaryAnd,
    /// 8n T with a single ancilla.
    Cuccaro,
}

/// What [`effective_t`] prices.
#[derive(Copy, Clone, Debug)]
pub enum EffectiveInput<'a> {
    ClosedForm(AdderFamily, u64),
    Report(&'a ResourceReport),
}

impl<S: Scalar> CostModel<S> {
    pub fn with_idle_factor(mut self, idle: S) -> Self {
        self.idle_factor = idle;
        self
    }

    pub fn with_t_state_volume(mut self, v: S) -> Self {
        self.t_state_volume = v;
        self
    }

    pub fn validate(&self) -> Result<(), CostError> {
        for (name, v) in [
            ("t_state_volume", self.t_state_volume),
            ("ancilla_volume_per_depth", self.ancilla_volume_per_depth),
            ("idle_factor", self.idle_factor),
        ] {
            if v.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
                return Err(CostError::NonPositive(name));
            }
        }
        Ok(())
    }

    /// |T⟩-state equivalent of one ancilla held for one layer.
    pub fn cost_per_depth(&self) -> S {
        self.ancilla_volume_per_depth / (self.t_state_volume * self.idle_factor)
    }

    pub fn effective_t_report(&self, r: &ResourceReport) -> S {
        S::from_u64_exact(r.t_count as u64) + S::from_u64_exact(r.ancilla_depth as u64) * self.cost_per_depth()
    }

    pub fn effective_t_closed(&self, family: AdderFamily, n: u64) -> S {
        let n = S::from_u64_exact(n);
        match family {
            AdderFamily::TemporaryAnd => n * n * self.cost_per_depth() + S::from_u64_exact(4) * n,
            AdderFamily::Cuccaro => S::from_u64_exact(8) * n,
        }
    }
}

pub fn effective_t<S: Scalar>(input: EffectiveInput<'_>, model: &CostModel<S>) -> S {
    match input {
        EffectiveInput::ClosedForm(family, n) => model.effective_t_closed(family, n),
        EffectiveInput::Report(r) => model.effective_t_report(r),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Cutoff {
    At(u64),
    /// Ancillae are free, so temporary ANDs always win.
    Unbounded,
}

/// Distance `d` from the top of an adder beyond which holding one more carry
/// ancilla (4 T plus 2d layers) costs more than an inline Toffoli pair (8 T).
pub fn hybrid_cutoff<S: Scalar>(model: &CostModel<S>) -> Result<Cutoff, CostError> {
    model.validate()?;
    let cpd = model.cost_per_depth();
    if cpd.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
        return Ok(Cutoff::Unbounded);
    }
    let d = S::from_u64_exact(4) / (S::from_u64_exact(2) * cpd);
    Ok(d.floor_u64().map_or(Cutoff::Unbounded, Cutoff::At))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Crossover {
    /// Smallest n where the first cost strictly exceeds the second.
    pub first_exceeding: u64,
    /// Whether the costs are exactly equal at `first_exceeding - 1`.
    pub tie: bool,
}

impl Crossover {
    /// The tie point when there is one, otherwise the first exceeding n.
    pub fn reported(&self) -> u64 {
        if self.tie {
            self.first_exceeding - 1
        } else {
            self.first_exceeding
        }
    }
}

/// Binary search over `1..=bound` for where `a(n) > b(n)` starts to hold.
/// The predicate must be monotone on that range.
pub fn crossover<S: Scalar>(
    a: impl Fn(u64) -> S,
    b: impl Fn(u64) -> S,
    bound: u64,
) -> Result<Crossover, CostError> {
    let worse = |n: u64| a(n) > b(n);
    if bound == 0 || !worse(bound) {
        return Err(CostError::NoCrossover { bound });
    }
    let (mut lo, mut hi) = (1u64, bound);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if worse(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let tie = lo > 1 && a(lo - 1) == b(lo - 1);
    Ok(Crossover { first_exceeding: lo, tie })
}

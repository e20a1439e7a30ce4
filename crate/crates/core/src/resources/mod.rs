//! T-count, measurement depth, ancilla accounting, and the opportunity-cost
//! model that prices held ancillae in units of |T⟩ states.

mod cost;
mod count;

pub use cost::{
    crossover, effective_t, hybrid_cutoff, AdderFamily, CostError, CostModel, Crossover, Cutoff, EffectiveInput,
};
pub use count::{count, depth_levels, DepthLevels, ResourceReport};

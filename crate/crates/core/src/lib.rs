//! Clifford+T circuit construction, simulation, and resource accounting
//! built around the temporary logical-AND gadget.

pub mod catalog;
pub mod circuit;
pub mod gadgets;
pub mod golden;
pub mod resources;
pub mod rewrite;
pub mod scalar;
pub mod sim;
pub mod verify;

pub use scalar::{Real, Scalar};

pub type SimState64 = sim::SimState<f64>;
pub type SimState32 = sim::SimState<f32>;

pub type CostModel64 = resources::CostModel<f64>;
pub type ExactCostModel = resources::CostModel<num_rational::Ratio<i64>>;

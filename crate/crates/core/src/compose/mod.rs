//! Meta-forecasters built from other estimators.

mod ensemble;
mod pipeline;
mod reduce;

pub use ensemble::EnsembleForecaster;
pub use pipeline::TransformedTargetForecaster;
pub use reduce::{tabularize, LaggedTable, ReducedRegressionForecaster, ReductionStrategy};

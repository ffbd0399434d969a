//! M4 benchmark harness: data loading, model recipes, a parallel runner,
//! comparison with published results and significance reports.

pub mod compare;
pub mod data;
pub mod error;
pub mod num;
pub mod registry;
pub mod runner;
pub mod stats;

pub use data::{load_dataset, load_m4, DatasetSpec, SeriesPair, FREQUENCIES};
pub use error::{BenchError, Result};
pub use registry::{build_model, RecipeConfig, Registry, WindowRule};
pub use runner::{run, RunManifest, SeriesResult};

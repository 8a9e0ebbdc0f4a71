//! The symbolic Green ring engine.

mod cache;
mod context;
mod element;
mod regular;

pub use cache::{CacheEntry, CacheFile, TableKind, ValidationReport, CACHE_VERSION, DEFAULT_SAMPLE_FRACTION, MAX_CACHED_DEGREE};
pub use context::{GreenContext, DEFAULT_DIM_CAP};
pub use element::GreenElement;
pub use regular::orbit_counts;

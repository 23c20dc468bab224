//! Instance file format and seeded instance generation.

mod format;
mod generate;

pub use format::{parse, serialize, ConstraintRecord, InstanceDocument, FORMAT_VERSION};
pub use generate::{generate, GenMode, GenSpec};

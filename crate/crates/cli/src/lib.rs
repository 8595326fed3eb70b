//! Support code for the `dq` binary: result records, the JSON-lines cache,
//! CSV conversion and text rendering.

pub mod cache;
pub mod csv_io;
pub mod record;
pub mod render;

pub use cache::Cache;
pub use record::{PointParams, ResultRecord};

//! Exact bounds, constructions and small-instance values for `D_q(n, d)`,
//! the largest size of a `q`-ary code of length `n` whose words are pairwise
//! at insertion/deletion distance at least `d`.

pub mod bound;
pub mod code;
pub mod combinat;
pub mod error;
pub mod exact_solver;
pub mod isolation;
pub mod lower_bounds;
pub mod lp_bound;
pub mod report;
pub mod rs_construct;
mod serde_rational;
pub mod upper_bounds;
pub mod words;

pub use bound::{Approx, BoundKind, BoundNumber, BoundValue, Params};
pub use combinat::{Integer, Rational};
pub use error::{Error, Result};
pub use words::Word;

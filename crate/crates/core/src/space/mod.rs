//! The Cantor model: signatures, words, points, clopen sets and the metric.

mod clopen;
pub mod metric;
mod point;
mod signature;
mod word;

pub use clopen::{split, ClopenSet};
pub(crate) use clopen::canonicalize;
pub use point::Point;
pub use signature::Signature;
pub use word::{add_at, translation_valuation, Word};

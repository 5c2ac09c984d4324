pub mod error;
pub mod rational;
pub mod space;
pub mod homeo;
pub mod measure;
pub mod topology;

pub use error::{Error, Result};
pub mod synth;
pub mod format;
pub mod generate;
pub mod cli;

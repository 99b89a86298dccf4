pub mod bounds;
pub mod channels;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};

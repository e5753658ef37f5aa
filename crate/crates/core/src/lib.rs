pub mod certificates;
pub mod cli;
pub mod error;
pub mod fiberlab;
pub mod linalg;
pub mod nullcones;
pub mod pointcount;
pub mod polycore;

pub use error::{Error, Result};

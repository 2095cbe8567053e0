pub mod cli;
pub mod complex;
pub mod duality;
pub mod error;
pub mod exactlinalg;
pub mod numtheory;
pub mod polynomial;
pub mod verify;

pub use error::{Error, Result};

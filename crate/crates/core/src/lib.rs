pub mod error;
pub mod numerics;
pub mod apolarity;
pub mod bounds;
pub mod cli;
pub mod decompose;
pub mod poly;
pub mod sample;
pub mod verify;

pub use error::{Result, WaringError};

pub mod abelian;
pub mod config;
pub mod densecheck;
pub mod error;
pub mod exact;
pub mod genfunc;
pub mod groups;
pub mod jordan;
pub mod planner;

pub use error::{Error, Result};

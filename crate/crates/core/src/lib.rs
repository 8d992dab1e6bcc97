pub mod arrangement;
pub mod densities;
pub mod error;
pub mod geom;
pub mod harness;
pub mod profiles;
pub mod samplers;
pub mod tessellation;

pub use error::{Error, Result};

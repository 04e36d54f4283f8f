pub mod amoeba;
pub mod cli;
pub mod cycle;
pub mod error;
pub mod exact;
pub mod period;
pub mod scene;
pub mod series;
pub mod walls;

pub use error::{Error, Result};

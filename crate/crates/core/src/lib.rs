pub mod acceptance;
pub mod analytics;
pub mod architectures;
pub mod clifford;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod replica;
pub mod shadow;

pub use error::{Error, Result};

pub mod bounds;
pub mod canon;
pub mod error;
pub mod gen;
pub mod lower;
pub mod ordinal;
pub mod selftest;
pub mod syntax;
pub mod words;
pub mod wqo;

pub use error::{Error, Result};
pub use ordinal::Ordinal;

//! Natural extensions of one-sided shifts of finite type, the semicrossed
//! and crossed products they generate, and numerical checks of the norm
//! identities relating them.

pub mod algebra;
pub mod catalog;
pub mod dynamics;
pub mod envelope;
pub mod error;
pub mod extension;
pub mod linalg;
pub mod representations;
pub mod sampling;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

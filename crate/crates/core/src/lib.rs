//! Exact and floating scalar domains, sparse operators on tensor-product
//! spaces, exact linear solves and nullspaces, formal power series and
//! Pade resummation.

pub mod dump;
pub mod error;
pub mod field;
pub mod linsolve;
pub mod modular;
pub mod op;
pub mod pade;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod scalar;
pub mod series;

pub use error::CoreError;
pub use rat::Rat;
pub use scalar::{Domain, Scalar};

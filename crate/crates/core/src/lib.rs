pub mod cli;
pub mod error;
pub mod field;
pub mod matrix;
pub mod models;
pub mod moduli;
pub mod monads;
pub mod pencil;
pub mod geometry;
pub mod hilbert;
pub mod invariants;
pub mod jumping;
pub mod poly;
pub mod serial;
pub mod tensor;
pub mod univariate;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use matrix::Matrix;
pub use poly::{Monomial, MultiPoly};
pub use univariate::UniPoly;

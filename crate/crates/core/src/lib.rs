//! Exact eigenstructure of polynomial matrices and its behaviour under a
//! rational change of variable `x = n(y)/d(y)`.
//!
//! The crate works over the rationals and over prime fields. It computes Smith
//! forms with unimodular transformers, finite and infinite elementary
//! divisors, minimal bases of left and right kernels, and checks how all of
//! these transform under `Q(y) = d(y)^g P(n(y)/d(y))`.

pub mod cli;
pub mod eigstructure;
pub mod error;
pub mod factor;
pub mod field;
pub mod fixtures;
pub mod linalg;
pub mod minbasis;
pub mod parse;
pub mod point;
pub mod poly;
pub mod polymat;
pub mod random;
pub mod ratmap;
pub mod report;
pub mod smith;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use poly::Poly;
pub use polymat::PolyMatrix;

//! Exact symbolic verification of Jordanian (h-deformed) quantum algebras,
//! their Inönü–Wigner contractions, duality pairing, Casimirs and universal
//! R-matrices, over truncated power series in `h`.

pub mod algebra;
pub mod builtin;
pub mod cli;
pub mod contraction;
pub mod element;
pub mod error;
pub mod expr;
pub mod hopf;
pub mod invariants;
pub mod pairing;
pub mod presentation;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod series;

pub use element::{AlgebraElement, Element, Letter, TensorElement, Word};
pub use error::{Error, Result};
pub use scalar::{HSubstitution, Monomial, Rational, Ring, Scalar};
pub use series::{apply_series, series_inverse, SeriesFn};

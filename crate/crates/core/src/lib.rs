//! Exact spectral sequences of filtered and bifiltered cochain complexes
//! over the integers, Deligne's shifted filtration, flag filtrations of
//! simplicial complexes, and checkers for the vanishing condition that
//! makes a second filtration agree with the shifted one on cohomology.

pub mod checks;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod filtration;
pub mod flags;
pub mod io;
pub mod linalg;
pub mod spectral;

pub use complex::CochainComplex;
pub use error::{Error, Result};
pub use filtration::{BifilteredComplex, FilteredComplex};
pub use linalg::{AbelianGroup, Coefficients, IntMatrix, Subgroup};
pub use spectral::SpectralSequence;

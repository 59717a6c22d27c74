//! Positive-definite integral quadratic forms: exact representation sets,
//! reduction, equivalence, the search for representation-equal ternary forms,
//! and the algebra of pairs of ternary forms (quartic rings and their cubic
//! resolvents).
//!
//! All arithmetic is exact. Enumeration kernels run on checked `i128` and
//! report [`Error::Overflow`] rather than wrap.

pub mod arith;
pub mod enumerate;
pub mod equiv;
pub mod error;
pub mod families;
pub mod forms;
pub mod matrix;
pub mod pair;
pub mod poly;
pub mod reduce;
pub mod reps;
pub mod search;
pub mod tables;

pub use arith::Rat;
pub use error::{Error, Result};
pub use forms::{FormPair, GroupElement, IntForm, IntMatrix, RatForm};
pub use matrix::RatMatrix;
pub use poly::Poly;

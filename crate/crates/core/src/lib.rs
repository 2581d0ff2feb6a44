//! Exact symbolic engine for homogeneous variational problems on bundles of
//! m-frames: jet coordinates, differential forms, the total-derivative
//! bicomplex and the fundamental form of a Lagrangian.

pub mod checks;
pub mod cli;
pub mod error;
pub mod forms;
pub mod identities;
pub mod multiindex;
pub mod random;
pub mod symbolic;
pub mod variational;
pub mod vvforms;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use symbolic::{JetVar, Poly, RatExpr, Rational};
pub use variational::Lagrangian;

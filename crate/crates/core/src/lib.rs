//! Algebraic restrictions of differential forms to quasi-homogeneous curve
//! germs, and the symplectic classification of the `S_mu` family built on them.
//!
//! The pipeline runs in exact rational arithmetic throughout:
//!
//! * [`exactalg`] supplies scalars, graded polynomials, truncated series and
//!   linear algebra over the rationals.
//! * [`forms`] is the exterior algebra of polynomial differential forms.
//! * [`restriction`] computes the quotient spaces `[Λ^k]_N` degree by degree.
//! * [`symmetry`] turns tangent vector fields into action matrices and
//!   classifies coordinate vectors into normal forms.
//! * [`invariants`] evaluates the discrete symplectic invariants.

pub mod error;
pub mod exactalg;
pub mod forms;
pub mod invariants;
pub mod restriction;
pub mod symmetry;

pub use error::{Error, Result};
pub use exactalg::{Order, Polynomial, PowerSeries, Rational, WeightSystem};
pub use forms::{DiffForm, VectorField};

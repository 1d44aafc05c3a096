//! Exact computation with Donaldson series of simple-type 4-manifolds.
//!
//! A series is stored in exponential-sum form `exp(Q/2) · Σ a_s e^{K_s}` and
//! accessed along integral rays. Forward expansion, the `q_d ↔ C_d` change of
//! variables, integer-root recurrence recovery, multi-ray reconstruction of
//! the basic classes, and the derived genus bounds all use exact rationals.

pub mod catalog;
pub mod error;
pub mod expsum;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod recovery;
pub mod recurrence;
pub mod series;
pub mod table;

pub use catalog::CatalogEntry;
pub use error::{Error, Result};
pub use lattice::{HClass, Lattice, Signature};
pub use rational::Rational;
pub use recovery::{RayOracle, RecoveryConfig};
pub use recurrence::{PronyDecomposition, PronyPair, RecurrenceInfo};
pub use series::{DonaldsonSeries, Parity, RaySequence, Term};
pub use table::MixedInvariantTable;

//! Length filtration invariants of multipartite separable states.
//!
//! * [`lengths`]: the closed form `L_c` and small-length classification.
//! * [`jacobian`]: the Jacobian of `Phi_r` and its generic rank.
//! * [`critical`]: checking that `L_c` is critical.
//! * [`twon`]: the exact `2 x N` determinant identity.
//! * [`gallery`]: fixed example operators.

pub mod cli;
pub mod critical;
pub mod error;
pub mod gallery;
pub mod hilbert;
pub mod io;
pub mod jacobian;
pub mod lengths;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod twon;

pub use critical::{verify_critical, BackendChoice, ConjectureReport, CriticalOptions, Verdict};
pub use error::{Error, Result};
pub use hilbert::{birank, partial_transpose, phi_r, DimensionVector, HermitianOperator, PointMatrix, ProductVector};
pub use jacobian::{build_m, build_mprime, generic_rank, jacobian_rank, RankReport};
pub use lengths::{l_c, small_length_classify, Classification, LengthVerdict};
pub use scalar::{Backend, Exact, Float, Scalar};
pub use twon::{verify_theorem, TheoremReport, TwoNParams};

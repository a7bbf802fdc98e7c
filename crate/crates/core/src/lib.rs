//! Spectral computations and perturbation bounds for positive definite
//! matrices disturbed by a sum of scaled rank-one terms,
//!
//! ```text
//! A = D + sqrt(D) (v_1 v_1^T + ... + v_m v_m^T) sqrt(D),   D = diag(lambda_1 >= ... >= lambda_d > 0)
//! ```
//!
//! The crate is split into four layers:
//!
//! * [`symmat`]: dense symmetric storage, assembly of `A`, and a cyclic
//!   Jacobi eigensolver used as the reference everywhere else.
//! * [`rankone`]: exact eigenpairs for `m = 1` through the secular equation
//!   and the Bunch-Nielsen-Sorensen eigenvector formula, with deflation.
//! * [`bounds`]: eigenvalue intervals and eigenvector coordinate bounds that
//!   depend only on the spectrum of `D` and the vectors `v_k`.
//! * [`harness`]: seeded instances, certification of the bounds against the
//!   oracle, and the condition-number scan with a log-log slope fit.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod rankone;
pub mod symmat;

pub use bounds::{BoundKind, BoundParams, BoundReport};
pub use error::{Error, Result};
pub use harness::{Instance, Recipe, ScanRecord, SlopeFit};
pub use rankone::{RankOneUpdate, SecularSolution};
pub use symmat::{EigenDecomposition, PerturbationSet, Spectrum, SymmetricMatrix};

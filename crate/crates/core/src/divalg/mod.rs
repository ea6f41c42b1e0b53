//! Skew machinery over the division algebras: quaternions, matrices over
//! `R`/`C`/`H` with realification, the kernel skewness test, and the
//! paired-conjugate construction of complex line fibrations.
//!
//! No quaternionic fibration constructor exists here: none is known, and
//! this module only provides the checking machinery for `H`.

mod fibration;
mod fmatrix;
mod quaternion;

pub use fibration::{
    f_tangent_project, fiber_solve_complex, induced_f_fields, realified_system,
    ComplexFibrationMap, IndependenceReport,
};
pub use fmatrix::{f_kernel_check, FMatrix};
pub use quaternion::Quaternion;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivAlgError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
}

//! Floating-point geometry of fibrations of `R^3` by skew oriented lines.
//!
//! A fibration is described by a map `B: R^2 -> R^2` with `B(0) = 0`: the
//! fiber through `y` is the graph of `t -> B(y) t + y`, with the plane of
//! `B` embedded as `{x3 = 0}` and the graph parameter as the third
//! coordinate.  Constructors validate invariants at `1e-12`; sampled
//! predicates use absolute tolerance `1e-9` on unit-scale data.

mod cap;
mod circle;
pub mod export;
mod homotopy;
mod line;
mod map;

pub use cap::{hemisphere_and_circumcenter, SphericalCap};
pub use circle::{central_project, great_circle_to_line, GreatCircle};
pub use homotopy::{homotopy_min_distance_sq, homotopy_to_hopf, surjectivity_bound_check};
pub use line::{
    direction_field, fiber_through_point, induced_circle_field, line_through, min_distance,
    orientation_sign, skew_check, OrientationOutcome, OrientedLine, PairMatrix,
};
pub use map::{FibrationMap, Orientation, TabulatedGrid};

use thiserror::Error;

/// Tolerance for invariants checked at construction time.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for sampled geometric predicates.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid oriented line: {0}")]
    InvalidLine(String),
    #[error("invalid great circle: {0}")]
    InvalidCircle(String),
    #[error("map construction failed: {0}")]
    MapConstruction(String),
    #[error("degenerate pair: determinant vanishes at y={y:?}, z={z:?}")]
    DegeneratePair { y: [f64; 2], z: [f64; 2] },
    #[error("sample set is empty")]
    EmptySample,
    #[error("antipodal directions {a:?} and {b:?} admit no enclosing cap")]
    AntipodalPoints { a: [f64; 3], b: [f64; 3] },
    #[error("circle lies in the equator x4 = 0 and has no line projection")]
    EquatorialCircle,
    #[error("kernel degeneracy: tangent projection vanishes at y={y:?}")]
    KernelDegeneracy { y: [f64; 2] },
    #[error("coverage unverified at x={x:?}: residual {residual} after iteration budget")]
    CoverageUnverified { x: [f64; 3], residual: f64 },
}

pub(crate) mod vec {
    pub fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
        a[0] * b[0] + a[1] * b[1]
    }

    pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
    }

    pub fn norm2(a: [f64; 2]) -> f64 {
        dot2(a, a).sqrt()
    }

    pub fn norm3(a: [f64; 3]) -> f64 {
        dot3(a, a).sqrt()
    }

    pub fn norm4(a: [f64; 4]) -> f64 {
        dot4(a, a).sqrt()
    }

    pub fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn add3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn scale3(a: [f64; 3], s: f64) -> [f64; 3] {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    pub fn dist2_3(a: [f64; 3], b: [f64; 3]) -> f64 {
        let d = sub3(a, b);
        dot3(d, d)
    }
}

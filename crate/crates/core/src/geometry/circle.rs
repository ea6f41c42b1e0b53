//! Great circles of `S^3` and the central-projection correspondence with
//! oriented lines of the tangent `R^3` at the north pole.

use super::line::OrientedLine;
use super::{vec::*, GeomError, CONSTRUCTION_TOL};

/// An oriented great circle of `S^3`, stored as an ordered orthonormal
/// basis `(e, f)` of its plane in `R^4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreatCircle {
    e: [f64; 4],
    f: [f64; 4],
}

impl GreatCircle {
    pub fn new(e: [f64; 4], f: [f64; 4]) -> Result<Self, GeomError> {
        if (norm4(e) - 1.0).abs() > CONSTRUCTION_TOL || (norm4(f) - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(GeomError::InvalidCircle(
                "basis vectors are not unit".into(),
            ));
        }
        let d = dot4(e, f);
        if d.abs() > CONSTRUCTION_TOL {
            return Err(GeomError::InvalidCircle(format!(
                "basis is not orthogonal (e.f = {d})"
            )));
        }
        Ok(GreatCircle { e, f })
    }

    pub fn e(&self) -> [f64; 4] {
        self.e
    }

    pub fn f(&self) -> [f64; 4] {
        self.f
    }

    /// Plucker coordinates of the oriented plane, `e_i f_j - e_j f_i` for
    /// `(i,j) = (0,1), (0,2), (0,3), (1,2), (1,3), (2,3)`.  Two bases span
    /// the same oriented plane exactly when these agree.
    pub fn bivector(&self) -> [f64; 6] {
        let (e, f) = (self.e, self.f);
        [
            e[0] * f[1] - e[1] * f[0],
            e[0] * f[2] - e[2] * f[0],
            e[0] * f[3] - e[3] * f[0],
            e[1] * f[2] - e[2] * f[1],
            e[1] * f[3] - e[3] * f[1],
            e[2] * f[3] - e[3] * f[2],
        ]
    }

    /// Maximum difference of Plucker coordinates against another circle.
    pub fn plane_distance(&self, other: &GreatCircle) -> f64 {
        let a = self.bivector();
        let b = other.bivector();
        (0..6).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// The great circle `S^3 ∩ span{ (u, 0), (v, 1)/sqrt(1+|v|^2) }` traced by a
/// line `(u, v)` under inverse central projection from the north pole.
pub fn central_project(line: &OrientedLine) -> Result<GreatCircle, GeomError> {
    let u = line.direction();
    let v = line.basepoint();
    // revalidate: the circle construction relies on both line invariants
    if (norm3(u) - 1.0).abs() > CONSTRUCTION_TOL
        || dot3(u, v).abs() > CONSTRUCTION_TOL * norm3(v).max(1.0)
    {
        return Err(GeomError::InvalidLine(
            "line invariants violated; cannot project".into(),
        ));
    }
    let e = [u[0], u[1], u[2], 0.0];
    let scale = (1.0 + dot3(v, v)).sqrt().recip();
    let f = [v[0] * scale, v[1] * scale, v[2] * scale, scale];
    GreatCircle::new(e, f)
}

/// Inverse of [`central_project`]: the unique oriented line whose projected
/// circle spans the same oriented plane.  Circles inside the equator
/// `x4 = 0` project to no line.
pub fn great_circle_to_line(circle: &GreatCircle) -> Result<OrientedLine, GeomError> {
    let e = circle.e();
    let f = circle.f();
    let n = (e[3] * e[3] + f[3] * f[3]).sqrt();
    if n < CONSTRUCTION_TOL {
        return Err(GeomError::EquatorialCircle);
    }
    // w: the unit vector of the plane with fourth coordinate zero;
    // g: its complement in the plane, with positive fourth coordinate.
    // The basis (w, g) has the same orientation as (e, f).
    let (alpha, beta) = (f[3] / n, -e[3] / n);
    let w = [
        alpha * e[0] + beta * f[0],
        alpha * e[1] + beta * f[1],
        alpha * e[2] + beta * f[2],
    ];
    let g = [
        (e[3] * e[0] + f[3] * f[0]) / n,
        (e[3] * e[1] + f[3] * f[1]) / n,
        (e[3] * e[2] + f[3] * f[2]) / n,
        n,
    ];
    let u_norm = norm3(w);
    let u = scale3(w, u_norm.recip());
    let mut v = [g[0] / g[3], g[1] / g[3], g[2] / g[3]];
    let drift = dot3(v, u);
    v = sub3(v, scale3(u, drift));
    OrientedLine::new(u, v)
}

//! Oriented lines of a fibration, skewness and the induced fields.

use super::map::FibrationMap;
use super::{vec::*, GeomError, CHECK_TOL, CONSTRUCTION_TOL};

/// An oriented line in `R^3`, stored as its unit direction together with
/// the point of the line closest to the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedLine {
    direction: [f64; 3],
    basepoint: [f64; 3],
}

impl OrientedLine {
    /// `direction` must be unit and `basepoint` orthogonal to it, both
    /// within `1e-12` (the orthogonality tolerance scales with the
    /// basepoint magnitude, since `v.u` cannot round below `|v|` times
    /// machine epsilon for far-away lines).
    pub fn new(direction: [f64; 3], basepoint: [f64; 3]) -> Result<Self, GeomError> {
        let n = norm3(direction);
        if (n - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(GeomError::InvalidLine(format!(
                "direction norm {n} is not 1"
            )));
        }
        let d = dot3(basepoint, direction);
        if d.abs() > CONSTRUCTION_TOL * norm3(basepoint).max(1.0) {
            return Err(GeomError::InvalidLine(format!(
                "basepoint is not orthogonal to direction (v.u = {d})"
            )));
        }
        Ok(OrientedLine {
            direction,
            basepoint,
        })
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn basepoint(&self) -> [f64; 3] {
        self.basepoint
    }

    pub fn point_at(&self, t: f64) -> [f64; 3] {
        add3(self.basepoint, scale3(self.direction, t))
    }

    pub fn distance_to_origin(&self) -> f64 {
        norm3(self.basepoint)
    }
}

/// The 2x2 matrix `A(y)` with columns `B(y)` and `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMatrix {
    b: [f64; 2],
    y: [f64; 2],
}

impl PairMatrix {
    pub fn new(map: &FibrationMap, y: [f64; 2]) -> Self {
        PairMatrix { b: map.eval(y), y }
    }

    pub fn det(&self) -> f64 {
        self.b[0] * self.y[1] - self.y[0] * self.b[1]
    }

    /// `det(self - other)`.
    pub fn det_difference(&self, other: &PairMatrix) -> f64 {
        let db = [self.b[0] - other.b[0], self.b[1] - other.b[1]];
        let dy = [self.y[0] - other.y[0], self.y[1] - other.y[1]];
        db[0] * dy[1] - dy[0] * db[1]
    }
}

/// The fiber through `y`: the graph of `t -> B(y) t + y`, as an oriented
/// line with unit direction `(B1, B2, 1)/sqrt(1+|B|^2)` and basepoint at the
/// parameter `t* = -(y.B)/(1+|B|^2)` closest to the origin.
pub fn line_through(map: &FibrationMap, y: [f64; 2]) -> OrientedLine {
    let b = map.eval(y);
    let denom = 1.0 + dot2(b, b);
    let t_star = -dot2(y, b) / denom;
    let scale = denom.sqrt().recip();
    let direction = [b[0] * scale, b[1] * scale, scale];
    let mut basepoint = [y[0] + t_star * b[0], y[1] + t_star * b[1], t_star];
    // remove the rounding component along the direction
    let drift = dot3(basepoint, direction);
    basepoint = sub3(basepoint, scale3(direction, drift));
    OrientedLine::new(direction, basepoint).expect("closest point construction")
}

/// `det(A(y) - A(z))`: zero iff the fibers through `y` and `z` fail to be
/// skew, and of constant sign on a fibration (its orientation).
pub fn skew_check(map: &FibrationMap, y: [f64; 2], z: [f64; 2]) -> f64 {
    PairMatrix::new(map, y).det_difference(&PairMatrix::new(map, z))
}

/// Distance from the fiber through `y` to the origin:
/// `sqrt(|y|^2 - (y.B)^2 / (1 + |B|^2))`.
pub fn min_distance(map: &FibrationMap, y: [f64; 2]) -> f64 {
    let b = map.eval(y);
    let yb = dot2(y, b);
    (dot2(y, y) - yb * yb / (1.0 + dot2(b, b))).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrientationOutcome {
    Negative,
    Positive,
    /// The first sampled pair whose sign disagrees with the first pair;
    /// such a pair certifies the map is not a skew fibration.
    Inconsistent {
        y: [f64; 2],
        z: [f64; 2],
    },
}

/// Sign of `det(A(y) - A(z))` over the sampled pairs.
pub fn orientation_sign(
    map: &FibrationMap,
    pairs: &[([f64; 2], [f64; 2])],
) -> Result<OrientationOutcome, GeomError> {
    if pairs.is_empty() {
        return Err(GeomError::EmptySample);
    }
    let mut reference = 0.0f64;
    for &(y, z) in pairs {
        let det = skew_check(map, y, z);
        if det.abs() < CONSTRUCTION_TOL {
            return Err(GeomError::DegeneratePair { y, z });
        }
        if reference == 0.0 {
            reference = det.signum();
        } else if det.signum() != reference {
            return Ok(OrientationOutcome::Inconsistent { y, z });
        }
    }
    Ok(if reference < 0.0 {
        OrientationOutcome::Negative
    } else {
        OrientationOutcome::Positive
    })
}

/// Unit direction of the fiber through `y`; always in the open upper
/// hemisphere.
pub fn direction_field(map: &FibrationMap, y: [f64; 2]) -> [f64; 3] {
    let b = map.eval(y);
    let scale = (1.0 + dot2(b, b)).sqrt().recip();
    [b[0] * scale, b[1] * scale, scale]
}

/// Projects `B(y)` onto the tangent line of the circle `|y| = radius` at
/// each of `samples` equally spaced points.  A vanishing projection means
/// the column is radial there and the map cannot be skew.
pub fn induced_circle_field(
    map: &FibrationMap,
    radius: f64,
    samples: usize,
) -> Result<Vec<([f64; 2], f64)>, GeomError> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(GeomError::Domain(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    if samples == 0 {
        return Err(GeomError::EmptySample);
    }
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
        let (sin, cos) = theta.sin_cos();
        let y = [radius * cos, radius * sin];
        let tangent = [-sin, cos];
        let component = dot2(map.eval(y), tangent);
        if component.abs() < CONSTRUCTION_TOL {
            return Err(GeomError::KernelDegeneracy { y });
        }
        out.push((y, component));
    }
    Ok(out)
}

const FIBER_SOLVE_ITERS: usize = 100;

/// The plane coordinate `y` whose fiber passes through `x`, i.e. the
/// solution of `y + x3 B(y) = (x1, x2)`.
///
/// Linear maps are solved exactly; otherwise a damped Newton iteration with
/// finite-difference Jacobian runs until the residual drops below `1e-9`.
/// Failure to converge reports [`GeomError::CoverageUnverified`], which is
/// evidence of nothing beyond the iteration budget.
pub fn fiber_through_point(map: &FibrationMap, x: [f64; 3]) -> Result<[f64; 2], GeomError> {
    let rhs = [x[0], x[1]];
    let t = x[2];
    if let Some(m) = map.linear_matrix() {
        // (I + t M) y = rhs
        let a = [
            [1.0 + t * m[0][0], t * m[0][1]],
            [t * m[1][0], 1.0 + t * m[1][1]],
        ];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() < CONSTRUCTION_TOL {
            return Err(GeomError::CoverageUnverified {
                x,
                residual: f64::INFINITY,
            });
        }
        return Ok([
            (rhs[0] * a[1][1] - rhs[1] * a[0][1]) / det,
            (rhs[1] * a[0][0] - rhs[0] * a[1][0]) / det,
        ]);
    }

    let residual_of = |y: [f64; 2]| -> [f64; 2] {
        let b = map.eval(y);
        [y[0] + t * b[0] - rhs[0], y[1] + t * b[1] - rhs[1]]
    };
    let mut y = rhs;
    let mut r = residual_of(y);
    let mut r_norm = norm2(r);
    for _ in 0..FIBER_SOLVE_ITERS {
        if r_norm <= CHECK_TOL {
            return Ok(y);
        }
        // finite-difference Jacobian of G(y) = y + t B(y) - rhs
        let h = 1e-6;
        let gx = residual_of([y[0] + h, y[1]]);
        let gy = residual_of([y[0], y[1] + h]);
        let j = [
            [(gx[0] - r[0]) / h, (gy[0] - r[0]) / h],
            [(gx[1] - r[1]) / h, (gy[1] - r[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            break;
        }
        let step = [
            (r[0] * j[1][1] - r[1] * j[0][1]) / det,
            (r[1] * j[0][0] - r[0] * j[1][0]) / det,
        ];
        // damping: halve until the residual shrinks
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = [y[0] - lambda * step[0], y[1] - lambda * step[1]];
            let tr = residual_of(trial);
            let tn = norm2(tr);
            if tn < r_norm {
                y = trial;
                r = tr;
                r_norm = tn;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if r_norm <= CHECK_TOL {
        Ok(y)
    } else {
        Err(GeomError::CoverageUnverified {
            x,
            residual: r_norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::map::Orientation;
    use super::*;

    fn close2(a: [f64; 2], b: [f64; 2]) -> bool {
        (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9
    }

    fn close3(a: [f64; 3], b: [f64; 3]) -> bool {
        (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9 && (a[2] - b[2]).abs() < 1e-9
    }

    #[test]
    fn line_constructor_validates() {
        assert!(OrientedLine::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).is_ok());
        assert!(OrientedLine::new([0.0, 0.0, 2.0], [1.0, 0.0, 0.0]).is_err());
        assert!(OrientedLine::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.5]).is_err());
    }

    #[test]
    fn axis_line_through_origin() {
        let hopf = FibrationMap::hopf(Orientation::Negative);
        let line = line_through(&hopf, [0.0, 0.0]);
        assert!(close3(line.direction(), [0.0, 0.0, 1.0]));
        assert!(close3(line.basepoint(), [0.0, 0.0, 0.0]));
    }

    #[test]
    fn hopf_line_at_unit_point() {
        let hopf = FibrationMap::hopf(Orientation::Negative);
        let line = line_through(&hopf, [1.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close3(line.direction(), [0.0, s, s]));
        assert!(close3(line.basepoint(), [1.0, 0.0, 0.0]));
    }

    #[test]
    fn basepoint_is_orthogonal_for_odd_maps() {
        let map = FibrationMap::from_fn("cubic", Orientation::Negative, |y| {
            [-y[1] + 0.1 * y[0] * y[0], y[0]]
        })
        .unwrap();
        for y in [[0.3, -0.7], [2.0, 1.5], [-4.0, 0.1]] {
            let line = line_through(&map, y);
            assert!(dot3(line.basepoint(), line.direction()).abs() < 1e-12);
        }
    }

    #[test]
    fn hopf_determinant_examples() {
        let neg = FibrationMap::hopf(Orientation::Negative);
        assert!((skew_check(&neg, [0.0, 0.0], [1.0, 0.0]) - (-1.0)).abs() < 1e-12);
        assert_eq!(skew_check(&neg, [0.4, -0.2], [0.4, -0.2]), 0.0);
        let pos = FibrationMap::hopf(Orientation::Positive);
        assert!((skew_check(&pos, [0.0, 0.0], [0.0, 2.0]) - 4.0).abs() < 1e-12);
    }

    /// Distance to the origin of the graph line of `y`, by ternary search
    /// over the parameter; independent of the closed-form minimizer.
    fn min_distance_by_search(map: &FibrationMap, y: [f64; 2]) -> f64 {
        let b = map.eval(y);
        let value = |t: f64| {
            let p = [y[0] + t * b[0], y[1] + t * b[1], t];
            dot3(p, p)
        };
        let (mut lo, mut hi) = (-100.0, 100.0);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if value(m1) < value(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        value(0.5 * (lo + hi)).sqrt()
    }

    #[test]
    fn min_distance_examples() {
        let hopf = FibrationMap::hopf(Orientation::Negative);
        assert!((min_distance(&hopf, [3.0, 4.0]) - 5.0).abs() < 1e-12);
        assert_eq!(min_distance(&hopf, [0.0, 0.0]), 0.0);
        // radial map, values pinned by the search oracle:
        // sqrt(1/2) at (1, 0) and sqrt(2/3) at (1, 1)
        let radial = FibrationMap::from_fn("radial", Orientation::Negative, |y| y).unwrap();
        assert!((min_distance(&radial, [1.0, 0.0]) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((min_distance(&radial, [1.0, 1.0]) - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        for y in [[1.0, 0.0], [1.0, 1.0], [3.0, 4.0]] {
            let direct = min_distance(&radial, y);
            let searched = min_distance_by_search(&radial, y);
            assert!((direct - searched).abs() < 1e-9, "y={y:?}");
        }
    }

    #[test]
    fn orientation_outcomes() {
        let pairs: Vec<([f64; 2], [f64; 2])> = vec![
            ([0.0, 0.0], [1.0, 0.0]),
            ([2.0, 1.0], [-1.0, 3.0]),
            ([0.5, 0.5], [0.5, -0.5]),
        ];
        let neg = FibrationMap::hopf(Orientation::Negative);
        assert_eq!(
            orientation_sign(&neg, &pairs).unwrap(),
            OrientationOutcome::Negative
        );
        let pos = FibrationMap::hopf(Orientation::Positive);
        assert_eq!(
            orientation_sign(&pos, &pairs).unwrap(),
            OrientationOutcome::Positive
        );
        // parallel vertical lines: determinant identically zero
        let degenerate =
            FibrationMap::from_fn("flat", Orientation::Negative, |_| [0.0, 0.0]).unwrap();
        assert!(matches!(
            orientation_sign(&degenerate, &pairs),
            Err(GeomError::DegeneratePair { .. })
        ));
    }

    #[test]
    fn orientation_detects_mixed_signs() {
        // B(y) = (y2, y1) gives det(A(y)-A(z)) = w2^2 - w1^2, both signs
        let map = FibrationMap::from_fn("mixed", Orientation::Negative, |y| [y[1], y[0]]).unwrap();
        let pairs = vec![([0.0, 0.0], [0.0, 1.0]), ([0.0, 0.0], [1.0, 0.0])];
        match orientation_sign(&map, &pairs).unwrap() {
            OrientationOutcome::Inconsistent { y, z } => {
                assert_eq!((y, z), ([0.0, 0.0], [1.0, 0.0]));
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn direction_field_stays_in_upper_hemisphere() {
        let hopf = FibrationMap::hopf(Orientation::Negative);
        assert!(close3(direction_field(&hopf, [0.0, 0.0]), [0.0, 0.0, 1.0]));
        for i in 0..50 {
            let y = [i as f64 * 0.3 - 7.0, (i * i % 13) as f64 - 6.0];
            assert!(direction_field(&hopf, y)[2] > 0.0);
        }
        // |y| <= 1 maps into the cap u3 >= 1/sqrt(2)
        let u = direction_field(&hopf, [0.6, -0.8]);
        assert!(u[2] >= std::f64::consts::FRAC_1_SQRT_2 - 1e-12);
    }

    #[test]
    fn circle_field_nonzero_for_hopf() {
        let hopf = FibrationMap::hopf(Orientation::Negative);
        let field = induced_circle_field(&hopf, 0.01, 360).unwrap();
        assert_eq!(field.len(), 360);
        for (_, component) in field {
            assert!((component - 0.01).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_field_flags_radial_map() {
        let radial = FibrationMap::from_fn("radial", Orientation::Negative, |y| y).unwrap();
        assert!(matches!(
            induced_circle_field(&radial, 0.01, 8),
            Err(GeomError::KernelDegeneracy { .. })
        ));
    }

    #[test]
    fn fiber_solve_examples() {
        let hopf = FibrationMap::hopf(Orientation::Negative);
        assert!(close2(
            fiber_through_point(&hopf, [0.0, 0.0, 5.0]).unwrap(),
            [0.0, 0.0]
        ));
        assert!(close2(
            fiber_through_point(&hopf, [0.0, 1.0, 1.0]).unwrap(),
            [0.5, 0.5]
        ));
        assert!(close2(
            fiber_through_point(&hopf, [1.0, 0.0, 0.0]).unwrap(),
            [1.0, 0.0]
        ));
    }

    #[test]
    fn fiber_solve_newton_matches_exact_for_wrapped_linear() {
        // same hopf map, but behind an opaque closure: exercises Newton
        let wrapped =
            FibrationMap::from_fn("opaque", Orientation::Negative, |y| [-y[1], y[0]]).unwrap();
        let exact = FibrationMap::hopf(Orientation::Negative);
        for x in [[0.0, 1.0, 1.0], [2.0, -3.0, 0.7], [-1.0, 4.0, -2.0]] {
            let a = fiber_through_point(&wrapped, x).unwrap();
            let b = fiber_through_point(&exact, x).unwrap();
            assert!(close2(a, b), "mismatch at {x:?}: {a:?} vs {b:?}");
        }
    }
}

//! Smallest enclosing spherical cap of a set of unit directions.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{vec::*, GeomError, CHECK_TOL};

/// A spherical cap `{x : angle(x, center) <= radius}` on `S^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    pub center: [f64; 3],
    /// Angular radius in radians.
    pub radius: f64,
    /// Whether the sample fits inside an open hemisphere
    /// (`radius < pi/2 + 1e-9`).
    pub open_hemisphere: bool,
}

#[derive(Debug, Clone, Copy)]
struct Ball {
    center: [f64; 3],
    r2: f64,
}

impl Ball {
    const NONE: Ball = Ball {
        center: [0.0; 3],
        r2: -1.0,
    };

    fn contains(&self, p: [f64; 3]) -> bool {
        self.r2 >= 0.0 && dist2_3(p, self.center) <= self.r2 + 1e-12
    }
}

fn ball_two(a: [f64; 3], b: [f64; 3]) -> Ball {
    let center = scale3(add3(a, b), 0.5);
    Ball {
        center,
        r2: dist2_3(a, center).max(dist2_3(b, center)),
    }
}

/// Circumscribed ball of three points, with its center in their plane.
fn circumball_three(p: [f64; 3], q: [f64; 3], r: [f64; 3]) -> Option<Ball> {
    let a = sub3(q, p);
    let b = sub3(r, p);
    let aa = dot3(a, a);
    let bb = dot3(b, b);
    let ab = dot3(a, b);
    let det = aa * bb - ab * ab;
    if det.abs() < 1e-20 {
        return None;
    }
    let x = bb * (aa - ab) / (2.0 * det);
    let y = aa * (bb - ab) / (2.0 * det);
    let center = [
        p[0] + x * a[0] + y * b[0],
        p[1] + x * a[1] + y * b[1],
        p[2] + x * a[2] + y * b[2],
    ];
    Some(Ball {
        center,
        r2: dist2_3(p, center),
    })
}

/// Circumscribed sphere of four points.
fn circumball_four(p: [f64; 3], q: [f64; 3], r: [f64; 3], s: [f64; 3]) -> Option<Ball> {
    // (c - p) . (x - p) = |x - p|^2 / 2 for x in {q, r, s}
    let rows = [sub3(q, p), sub3(r, p), sub3(s, p)];
    let rhs = [
        dot3(rows[0], rows[0]) / 2.0,
        dot3(rows[1], rows[1]) / 2.0,
        dot3(rows[2], rows[2]) / 2.0,
    ];
    let det = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
    if det.abs() < 1e-20 {
        return None;
    }
    let mut offset = [0.0; 3];
    for k in 0..3 {
        let mut m = rows;
        for i in 0..3 {
            m[i][k] = rhs[i];
        }
        let dk = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        offset[k] = dk / det;
    }
    let center = add3(p, offset);
    Some(Ball {
        center,
        r2: dist2_3(p, center),
    })
}

fn consider(pts: &[[f64; 3]], best: &mut Option<Ball>, b: Ball) {
    if pts.iter().all(|&p| b.contains(p)) && best.is_none_or(|cur| b.r2 < cur.r2) {
        *best = Some(b);
    }
}

/// Smallest ball containing at most four points, tried from the smallest
/// support upward.
fn ball_of_support(pts: &[[f64; 3]]) -> Ball {
    match pts.len() {
        0 => Ball::NONE,
        1 => Ball {
            center: pts[0],
            r2: 0.0,
        },
        n => {
            let mut best: Option<Ball> = None;
            for i in 0..n {
                for j in i + 1..n {
                    consider(pts, &mut best, ball_two(pts[i], pts[j]));
                }
            }
            if best.is_none() {
                for i in 0..n {
                    for j in i + 1..n {
                        for k in j + 1..n {
                            if let Some(b) = circumball_three(pts[i], pts[j], pts[k]) {
                                consider(pts, &mut best, b);
                            }
                        }
                    }
                }
            }
            if best.is_none() && n == 4 {
                if let Some(b) = circumball_four(pts[0], pts[1], pts[2], pts[3]) {
                    consider(pts, &mut best, b);
                }
            }
            best.unwrap_or(Ball::NONE)
        }
    }
}

/// Welzl's recursion with move-to-front reordering.
fn welzl(pts: &mut [[f64; 3]], end: usize, support: &mut Vec<[f64; 3]>) -> Ball {
    if end == 0 || support.len() == 4 {
        return ball_of_support(support);
    }
    let p = pts[end - 1];
    let ball = welzl(pts, end - 1, support);
    if ball.contains(p) {
        return ball;
    }
    support.push(p);
    let ball = welzl(pts, end - 1, support);
    support.pop();
    // move-to-front keeps frequently violating points early
    pts[..end].rotate_right(1);
    ball
}

fn smallest_enclosing_ball(points: &[[f64; 3]]) -> Ball {
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    pts.shuffle(&mut rng);
    let mut support = Vec::with_capacity(4);
    welzl(&mut pts, points.len(), &mut support)
}

/// Smallest enclosing spherical cap of the given unit directions.
///
/// The cap comes from the smallest enclosing ball of the points in `R^3`:
/// when the sample fits in an open hemisphere the conversion is exact and
/// the cap is minimal; past a hemisphere the returned cap still encloses
/// every direction and the `open_hemisphere` flag is decisive either way.
/// Antipodal directions admit no cap and are rejected.
pub fn hemisphere_and_circumcenter(directions: &[[f64; 3]]) -> Result<SphericalCap, GeomError> {
    if directions.is_empty() {
        return Err(GeomError::EmptySample);
    }
    for (i, &a) in directions.iter().enumerate() {
        for &b in &directions[i + 1..] {
            if norm3(add3(a, b)) < CHECK_TOL {
                return Err(GeomError::AntipodalPoints { a, b });
            }
        }
    }
    let ball = smallest_enclosing_ball(directions);
    let c_norm = norm3(ball.center);
    let center = if c_norm > 1e-12 {
        scale3(ball.center, c_norm.recip())
    } else {
        // ball centered at the origin: no hemisphere fits, any axis gives a
        // valid enclosing cap
        let mut sum = [0.0; 3];
        for &d in directions {
            sum = add3(sum, d);
        }
        let n = norm3(sum);
        if n > 1e-12 {
            scale3(sum, n.recip())
        } else {
            [0.0, 0.0, 1.0]
        }
    };
    let worst = directions
        .iter()
        .map(|&d| dot3(d, center))
        .fold(f64::INFINITY, f64::min);
    let radius = worst.clamp(-1.0, 1.0).acos();
    Ok(SphericalCap {
        center,
        radius,
        open_hemisphere: radius < std::f64::consts::FRAC_PI_2 + CHECK_TOL,
    })
}

//! The straight-line homotopy `B_s = s H + (1-s) B` toward the hopf map of
//! the same orientation.

use super::map::{hopf_matrix, mat_vec, FibrationMap};
use super::{vec::*, GeomError, CHECK_TOL};

fn check_unit_interval(s: f64) -> Result<(), GeomError> {
    if !(0.0..=1.0).contains(&s) || !s.is_finite() {
        return Err(GeomError::Domain(format!("s = {s} is outside [0, 1]")));
    }
    Ok(())
}

/// The blended map `B_s(y) = s H(y) + (1-s) B(y)`; `B_0 = B`, `B_1 = H`.
pub fn homotopy_to_hopf(map: &FibrationMap, s: f64) -> Result<FibrationMap, GeomError> {
    check_unit_interval(s)?;
    if s == 0.0 {
        return Ok(map.clone());
    }
    Ok(map.blend_toward_hopf(s))
}

/// Squared distance from the fiber of `B_s` through `y` to the origin, in
/// the expanded closed form
///
/// ```text
/// |y|^2 - (1-s)^2 (y.B)^2
///         / [ s^2 |y|^2 + (1-s)^2 |B|^2 + 2 s (1-s) (H(y).B) + 1 ]
/// ```
///
/// with `B = B(y)` taken from the *original* map.  This is an independent
/// route to `min_distance(homotopy_to_hopf(map, s), y)^2`.
pub fn homotopy_min_distance_sq(map: &FibrationMap, s: f64, y: [f64; 2]) -> Result<f64, GeomError> {
    check_unit_interval(s)?;
    let b = map.eval(y);
    let h = mat_vec(&hopf_matrix(map.orientation()), y);
    let y_sq = dot2(y, y);
    let numerator = (1.0 - s) * (1.0 - s) * dot2(y, b) * dot2(y, b);
    let denominator =
        s * s * y_sq + (1.0 - s) * (1.0 - s) * dot2(b, b) + 2.0 * s * (1.0 - s) * dot2(h, b) + 1.0;
    Ok(y_sq - numerator / denominator)
}

/// Verifies the surjectivity bound `|B_s(y)|^2 >= s^2 |y|^2` (up to `1e-9`)
/// at every sample; this is the quantitative content of surjectivity of
/// `B_s` for `s > 0`.
pub fn surjectivity_bound_check(
    map: &FibrationMap,
    s: f64,
    samples: &[[f64; 2]],
) -> Result<bool, GeomError> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(GeomError::Domain(format!("s = {s} is outside (0, 1]")));
    }
    let blended = map.blend_toward_hopf(s);
    Ok(samples.iter().all(|&y| {
        let b = blended.eval(y);
        dot2(b, b) >= s * s * dot2(y, y) - CHECK_TOL
    }))
}

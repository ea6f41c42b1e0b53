//! Sampled identities and round trips for the line geometry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewfib::geometry::{
    central_project, direction_field, great_circle_to_line, hemisphere_and_circumcenter,
    homotopy_min_distance_sq, homotopy_to_hopf, line_through, min_distance, orientation_sign,
    skew_check, surjectivity_bound_check, FibrationMap, GreatCircle, Orientation,
    OrientationOutcome, OrientedLine,
};

fn sample_point(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 2] {
    [
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    ]
}

fn dist_sq(y: [f64; 2], z: [f64; 2]) -> f64 {
    (y[0] - z[0]) * (y[0] - z[0]) + (y[1] - z[1]) * (y[1] - z[1])
}

/// The test family: scaled hopf maps plus linear negatively-oriented
/// perturbations of the hopf map.
fn negative_test_family() -> Vec<FibrationMap> {
    let mut family: Vec<FibrationMap> = [0.25, 0.5, 2.0, 4.0]
        .iter()
        .map(|&alpha| FibrationMap::scaled_hopf(alpha).unwrap())
        .collect();
    family.push(
        FibrationMap::from_fn("perturbed-a", Orientation::Negative, |y| {
            [0.2 * y[0] - 1.5 * y[1], 1.0 * y[0] + 0.1 * y[1]]
        })
        .unwrap(),
    );
    family.push(
        FibrationMap::from_fn("perturbed-b", Orientation::Negative, |y| {
            [-0.3 * y[0] - 2.0 * y[1], 0.8 * y[0] - 0.25 * y[1]]
        })
        .unwrap(),
    );
    family
}

#[test]
fn hopf_determinant_identity_over_seeded_pairs() {
    let neg = FibrationMap::hopf(Orientation::Negative);
    let pos = FibrationMap::hopf(Orientation::Positive);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let y = sample_point(&mut rng, 10.0);
        let z = sample_point(&mut rng, 10.0);
        let d = dist_sq(y, z);
        assert!((skew_check(&neg, y, z) + d).abs() <= 1e-9);
        assert!((skew_check(&pos, y, z) - d).abs() <= 1e-9);
    }
}

#[test]
fn homotopy_distance_is_nondecreasing_with_stable_orientation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let samples: Vec<[f64; 2]> = (0..200).map(|_| sample_point(&mut rng, 5.0)).collect();
    let pairs: Vec<([f64; 2], [f64; 2])> = (0..100)
        .map(|_| (sample_point(&mut rng, 5.0), sample_point(&mut rng, 5.0)))
        .filter(|(y, z)| dist_sq(*y, *z) > 1e-6)
        .collect();
    for map in negative_test_family() {
        for &y in &samples {
            let mut previous = -1.0f64;
            for step in 0..=10 {
                let s = step as f64 / 10.0;
                let blended = homotopy_to_hopf(&map, s).unwrap();
                let d = min_distance(&blended, y);
                assert!(
                    d >= previous - 1e-9,
                    "{}: distance decreased at s={s}, y={y:?}",
                    map.name()
                );
                // closed form agrees with the direct route
                let closed = homotopy_min_distance_sq(&map, s, y).unwrap();
                assert!(
                    (closed - d * d).abs() <= 1e-9 * (1.0 + d * d),
                    "{}: closed form mismatch at s={s}, y={y:?}",
                    map.name()
                );
                previous = d;
            }
        }
        for step in 0..=10 {
            let s = step as f64 / 10.0;
            let blended = homotopy_to_hopf(&map, s).unwrap();
            assert_eq!(
                orientation_sign(&blended, &pairs).unwrap(),
                OrientationOutcome::Negative,
                "{} at s={s}",
                map.name()
            );
        }
    }
}

#[test]
fn surjectivity_bound_along_the_homotopy() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let samples: Vec<[f64; 2]> = (0..500).map(|_| sample_point(&mut rng, 8.0)).collect();
    for map in negative_test_family() {
        for step in 1..=10 {
            let s = step as f64 / 10.0;
            assert!(
                surjectivity_bound_check(&map, s, &samples).unwrap(),
                "{} at s={s}",
                map.name()
            );
        }
    }
}

#[test]
fn projection_round_trip_from_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let hopf = FibrationMap::hopf(Orientation::Negative);
    for _ in 0..1000 {
        let y = sample_point(&mut rng, 10.0);
        let line = line_through(&hopf, y);
        let back = great_circle_to_line(&central_project(&line).unwrap()).unwrap();
        for i in 0..3 {
            assert!((line.direction()[i] - back.direction()[i]).abs() <= 1e-9);
            assert!((line.basepoint()[i] - back.basepoint()[i]).abs() <= 1e-9);
        }
    }
}

fn random_circle(rng: &mut ChaCha8Rng) -> Option<GreatCircle> {
    let mut raw = [[0.0f64; 4]; 2];
    for v in raw.iter_mut() {
        for x in v.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
    }
    // Gram-Schmidt
    let norm = |v: [f64; 4]| (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let n0 = norm(raw[0]);
    if n0 < 1e-3 {
        return None;
    }
    let e: [f64; 4] = std::array::from_fn(|i| raw[0][i] / n0);
    let d: f64 = (0..4).map(|i| e[i] * raw[1][i]).sum();
    let mut f: [f64; 4] = std::array::from_fn(|i| raw[1][i] - d * e[i]);
    let nf = norm(f);
    if nf < 1e-3 {
        return None;
    }
    for x in f.iter_mut() {
        *x /= nf;
    }
    // keep clearly away from the equator
    if e[3].abs().max(f[3].abs()) < 1e-3 {
        return None;
    }
    Some(GreatCircle::new(e, f).unwrap())
}

#[test]
fn projection_round_trip_survives_far_lines() {
    let hopf = FibrationMap::hopf(Orientation::Negative);
    for y in [[1e4, 0.0], [3e4, -4e4], [-2e5, 7e4]] {
        let line = line_through(&hopf, y);
        let back = great_circle_to_line(&central_project(&line).unwrap()).unwrap();
        let scale = line.distance_to_origin().max(1.0);
        for i in 0..3 {
            assert!((line.direction()[i] - back.direction()[i]).abs() <= 1e-9);
            assert!((line.basepoint()[i] - back.basepoint()[i]).abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn projection_round_trip_from_circles() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut count = 0;
    while count < 1000 {
        let Some(circle) = random_circle(&mut rng) else {
            continue;
        };
        count += 1;
        let line = great_circle_to_line(&circle).unwrap();
        let forward = central_project(&line).unwrap();
        assert!(
            circle.plane_distance(&forward) <= 1e-9,
            "plane mismatch: {:?}",
            circle
        );
    }
}

#[test]
fn basepoint_is_the_distance_minimizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let maps = [
        FibrationMap::hopf(Orientation::Negative),
        FibrationMap::from_fn("cubic", Orientation::Negative, |y| {
            [-y[1] + 0.05 * y[0].powi(3), y[0]]
        })
        .unwrap(),
    ];
    for map in &maps {
        for _ in 0..20 {
            let y = sample_point(&mut rng, 5.0);
            let b = map.eval(y);
            let line = line_through(map, y);
            let best = line.distance_to_origin();
            assert!((best - min_distance(map, y)).abs() <= 1e-9);
            for _ in 0..100 {
                let t = rng.random_range(-50.0..50.0);
                let p = [y[0] + t * b[0], y[1] + t * b[1], t];
                let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                assert!(norm + 1e-9 >= best);
            }
        }
    }
}

#[test]
fn hopf_direction_caps_grow_toward_a_hemisphere() {
    let hopf = FibrationMap::hopf(Orientation::Negative);
    for radius in [1.0f64, 5.0, 20.0] {
        let mut dirs = Vec::new();
        for ring in 1..=6 {
            let r = radius * ring as f64 / 6.0;
            for k in 0..48 {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 48.0;
                dirs.push(direction_field(&hopf, [r * theta.cos(), r * theta.sin()]));
            }
        }
        dirs.push(direction_field(&hopf, [0.0, 0.0]));
        let cap = hemisphere_and_circumcenter(&dirs).unwrap();
        assert!(cap.open_hemisphere);
        let expected = (1.0 / (1.0 + radius * radius)).sqrt().acos();
        assert!(
            (cap.radius - expected).abs() <= 1e-6,
            "radius {radius}: cap {} vs expected {expected}",
            cap.radius
        );
        assert!((cap.center[2] - 1.0).abs() <= 1e-6);
        assert!(cap.radius < std::f64::consts::FRAC_PI_2);
    }
}

#[test]
fn direction_field_image_is_strictly_upper() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for map in negative_test_family() {
        for _ in 0..500 {
            let y = sample_point(&mut rng, 50.0);
            assert!(direction_field(&map, y)[2] > 0.0);
        }
    }
}

#[test]
fn exported_records_have_the_documented_schema() {
    use skewfib::geometry::export::{CircleSample, LineSample, CSV_HEADER};
    let hopf = FibrationMap::hopf(Orientation::Negative);
    let line = line_through(&hopf, [1.0, 0.0]);
    let sample = LineSample::new([1.0, 0.0], &line);
    let json: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&sample).unwrap()).unwrap();
    assert_eq!(json["y"].as_array().unwrap().len(), 2);
    assert_eq!(json["u"].as_array().unwrap().len(), 3);
    assert_eq!(json["v"].as_array().unwrap().len(), 3);
    assert_eq!(CSV_HEADER.split(',').count(), 8);
    assert_eq!(sample.csv_row().split(',').count(), 8);

    let circle = central_project(&line).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&CircleSample::new(&circle)).unwrap()).unwrap();
    assert_eq!(json["e"].as_array().unwrap().len(), 4);
    assert_eq!(json["f"].as_array().unwrap().len(), 4);
}

#[test]
fn oriented_line_rejects_bad_invariants() {
    assert!(OrientedLine::new([0.6, 0.8, 0.0], [0.0, 0.0, 1.0]).is_ok());
    assert!(OrientedLine::new([0.6, 0.8, 0.1], [0.0, 0.0, 1.0]).is_err());
}

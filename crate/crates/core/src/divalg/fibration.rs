//! The paired-conjugate construction of complex line fibrations, its
//! realified linear system, and the induced tangent fields.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

use super::fmatrix::FMatrix;
use super::quaternion::Quaternion;
use super::DivAlgError;
use crate::Field;

/// The map `(y1, y2, ..., y_{n-1}, y_n) -> (conj y2, -conj y1, ...,
/// conj y_n, -conj y_{n-1})` on `C^n` for even `n`.  The fiber through `y`
/// is the graph of `t -> B(y) t + y` with `t` ranging over `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexFibrationMap {
    n: usize,
}

impl ComplexFibrationMap {
    pub fn new(n: usize) -> Result<Self, DivAlgError> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(DivAlgError::Domain(format!(
                "the paired-conjugate map needs even positive n, got {n}"
            )));
        }
        Ok(ComplexFibrationMap { n })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `B(y)`; an exact isometry, `|B(y)| = |y|`.
    pub fn eval(&self, y: &[Complex64]) -> Result<Vec<Complex64>, DivAlgError> {
        if y.len() != self.n {
            return Err(DivAlgError::Shape(format!(
                "expected a vector in C^{}, got length {}",
                self.n,
                y.len()
            )));
        }
        let mut out = Vec::with_capacity(self.n);
        for pair in y.chunks_exact(2) {
            out.push(pair[1].conj());
            out.push(-pair[0].conj());
        }
        Ok(out)
    }

    /// The `n x 2` matrix `A(y)` with columns `B(y)` and `y`.
    pub fn pair_matrix(&self, y: &[Complex64]) -> Result<FMatrix, DivAlgError> {
        let b = self.eval(y)?;
        let mut data = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            data.push(Quaternion::from_complex(b[i]));
            data.push(Quaternion::from_complex(y[i]));
        }
        FMatrix::new(Field::C, self.n, 2, data)
    }
}

/// The real `2n x 2n` matrix of `y -> B(y) t + y` in the coordinates
/// `(Re y1, Im y1, Re y2, Im y2, ...)`: a block-diagonal matrix with one
/// `4x4` block per conjugate pair.  Its determinant is `(1 + |t|^2)^n`.
pub fn realified_system(n: usize, t: Complex64) -> Result<DMatrix<f64>, DivAlgError> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(DivAlgError::Domain(format!("n must be even, got {n}")));
    }
    let (re, im) = (t.re, t.im);
    let block = [
        [1.0, 0.0, re, im],
        [0.0, 1.0, im, -re],
        [-re, -im, 1.0, 0.0],
        [-im, re, 0.0, 1.0],
    ];
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for p in 0..n / 2 {
        for i in 0..4 {
            for j in 0..4 {
                out[(4 * p + i, 4 * p + j)] = block[i][j];
            }
        }
    }
    Ok(out)
}

/// Solves for the unique `y` whose fiber passes through `(t, eta)`:
/// `B(y) t + y = eta`.  The realified system is nonsingular for every `t`.
pub fn fiber_solve_complex(
    n: usize,
    t: Complex64,
    eta: &[Complex64],
) -> Result<Vec<Complex64>, DivAlgError> {
    if eta.len() != n {
        return Err(DivAlgError::Shape(format!(
            "expected eta in C^{n}, got length {}",
            eta.len()
        )));
    }
    let system = realified_system(n, t)?;
    let mut rhs = DVector::zeros(2 * n);
    for (i, e) in eta.iter().enumerate() {
        rhs[2 * i] = e.re;
        rhs[2 * i + 1] = e.im;
    }
    let solution = system
        .lu()
        .solve(&rhs)
        .expect("system is nonsingular for every t");
    Ok((0..n)
        .map(|i| Complex64::new(solution[2 * i], solution[2 * i + 1]))
        .collect())
}

fn real_dot_q(a: &[Quaternion], b: &[Quaternion]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.w * y.w + x.x * y.x + x.y * y.y + x.z * y.z)
        .sum()
}

/// Projects `w` onto the `F`-tangent space at the unit vector `y`: the real
/// span of `y` and `iy` (and `jy`, `ky` over `H`) is subtracted.  Those
/// vectors are real-orthonormal for unit `y`, so plain projection suffices.
pub fn f_tangent_project(
    field: Field,
    y: &[Quaternion],
    w: &[Quaternion],
) -> Result<Vec<Quaternion>, DivAlgError> {
    if y.len() != w.len() {
        return Err(DivAlgError::Shape(format!(
            "length mismatch: {} vs {}",
            y.len(),
            w.len()
        )));
    }
    let norm = real_dot_q(y, y).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(DivAlgError::Domain(format!(
            "y must be a unit vector, |y| = {norm}"
        )));
    }
    let units: &[Quaternion] = match field {
        Field::R => &[Quaternion::ONE],
        Field::C => &[Quaternion::ONE, Quaternion::I],
        Field::H => &[Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K],
    };
    let mut out = w.to_vec();
    for &unit in units {
        let basis: Vec<Quaternion> = y.iter().map(|&c| unit * c).collect();
        let coefficient = real_dot_q(&out, &basis);
        for (o, b) in out.iter_mut().zip(&basis) {
            *o = *o - b.scale(coefficient);
        }
    }
    Ok(out)
}

fn to_quat_vec(v: &[Complex64]) -> Vec<Quaternion> {
    v.iter().map(|&c| Quaternion::from_complex(c)).collect()
}

fn mul_i(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|&c| Complex64::new(0.0, 1.0) * c).collect()
}

fn real_dot_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

fn gram_det(vectors: &[Vec<Complex64>]) -> f64 {
    let k = vectors.len();
    let gram = DMatrix::from_fn(k, k, |i, j| real_dot_c(&vectors[i], &vectors[j]));
    gram.determinant()
}

/// Independence of the real tangent fields induced by a complex column map
/// on the unit sphere.
#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub samples: usize,
    /// Gram determinant of the two real fields spanned by the projected
    /// column (`proj` and `i proj`), minimized over samples.
    pub min_gram_columns: f64,
    /// Gram determinant including the field `iy` (normal times `i`),
    /// minimized over samples.
    pub min_gram_with_normal: f64,
    /// The sample attaining the column minimum.
    pub worst_sample: Option<Vec<Complex64>>,
}

impl IndependenceReport {
    /// Independence at every sample requires the Gram determinants to stay
    /// above `1e-9`.
    pub fn independent(&self) -> bool {
        self.min_gram_columns > 1e-9 && self.min_gram_with_normal > 1e-9
    }
}

/// Projects the column `B(y)` to the complex tangent space at each unit
/// sample `y` and reports the minimal Gram determinants of the induced real
/// fields, with and without the multiply-by-`i` normal field.
pub fn induced_f_fields<F>(
    map: F,
    samples: &[Vec<Complex64>],
) -> Result<IndependenceReport, DivAlgError>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if samples.is_empty() {
        return Err(DivAlgError::Domain("no samples".into()));
    }
    let mut report = IndependenceReport {
        samples: samples.len(),
        min_gram_columns: f64::INFINITY,
        min_gram_with_normal: f64::INFINITY,
        worst_sample: None,
    };
    for y in samples {
        let column = map(y);
        let projected = f_tangent_project(Field::C, &to_quat_vec(y), &to_quat_vec(&column))?;
        let proj: Vec<Complex64> = projected.iter().map(|q| q.to_complex()).collect();
        let fields = vec![proj.clone(), mul_i(&proj)];
        let g2 = gram_det(&fields);
        let mut with_normal = fields;
        with_normal.push(mul_i(y));
        let g3 = gram_det(&with_normal);
        if g2 < report.min_gram_columns {
            report.min_gram_columns = g2;
            report.worst_sample = Some(y.clone());
        }
        report.min_gram_with_normal = report.min_gram_with_normal.min(g3);
    }
    Ok(report)
}

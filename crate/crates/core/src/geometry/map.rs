//! Fibration maps `B: R^2 -> R^2` with `B(0) = 0`.

use std::fmt;
use std::sync::Arc;

use super::{vec::*, GeomError, CHECK_TOL};

pub(crate) type Mat2 = [[f64; 2]; 2];

pub(crate) fn mat_vec(m: &Mat2, y: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * y[0] + m[0][1] * y[1],
        m[1][0] * y[0] + m[1][1] * y[1],
    ]
}

pub(crate) fn hopf_matrix(orientation: Orientation) -> Mat2 {
    match orientation {
        // y -> i y = (-y2, y1)
        Orientation::Negative => [[0.0, -1.0], [1.0, 0.0]],
        // y -> -i y = (y2, -y1)
        Orientation::Positive => [[0.0, 1.0], [-1.0, 0.0]],
    }
}

/// Orientation class of a fibration: the constant sign of
/// `det(A(y) - A(z))` off the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Negative,
    Positive,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Negative => -1.0,
            Orientation::Positive => 1.0,
        }
    }
}

#[derive(Clone)]
enum MapKind {
    Linear(Mat2),
    /// `s * hopf + (1 - s) * inner`, toward the hopf map of the same
    /// orientation.
    Blend {
        s: f64,
        target: Mat2,
        inner: Box<MapKind>,
    },
    Tabulated(Arc<TabulatedGrid>),
    Custom(Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>),
}

impl MapKind {
    fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        match self {
            MapKind::Linear(m) => mat_vec(m, y),
            MapKind::Blend { s, target, inner } => {
                let h = mat_vec(target, y);
                let b = inner.eval(y);
                [s * h[0] + (1.0 - s) * b[0], s * h[1] + (1.0 - s) * b[1]]
            }
            MapKind::Tabulated(grid) => grid.eval(y),
            MapKind::Custom(f) => f(y),
        }
    }

    fn linear_matrix(&self) -> Option<Mat2> {
        match self {
            MapKind::Linear(m) => Some(*m),
            MapKind::Blend { s, target, inner } => {
                let m = inner.linear_matrix()?;
                let mut out = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = s * target[i][j] + (1.0 - s) * m[i][j];
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }
}

/// An evaluatable fibration map with its metadata.  Evaluation is pure and
/// safe to call from many threads.
#[derive(Clone)]
pub struct FibrationMap {
    name: String,
    orientation: Orientation,
    kind: MapKind,
}

impl fmt::Debug for FibrationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FibrationMap")
            .field("name", &self.name)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl FibrationMap {
    /// The hopf map of the given orientation: `y -> iy` (negative) or
    /// `y -> -iy` (positive).
    pub fn hopf(orientation: Orientation) -> Self {
        let name = match orientation {
            Orientation::Negative => "hopf-neg",
            Orientation::Positive => "hopf-pos",
        };
        FibrationMap {
            name: name.to_string(),
            orientation,
            kind: MapKind::Linear(hopf_matrix(orientation)),
        }
    }

    /// `alpha * H` for `alpha > 0`, a negatively-oriented fibration map.
    pub fn scaled_hopf(alpha: f64) -> Result<Self, GeomError> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(GeomError::Domain(format!(
                "scaled hopf needs alpha > 0, got {alpha}"
            )));
        }
        let h = hopf_matrix(Orientation::Negative);
        Ok(FibrationMap {
            name: format!("scaled:{alpha}"),
            orientation: Orientation::Negative,
            kind: MapKind::Linear([
                [alpha * h[0][0], alpha * h[0][1]],
                [alpha * h[1][0], alpha * h[1][1]],
            ]),
        })
    }

    /// The hopf map shifted by a constant and re-based so that `B(0) = 0`,
    /// i.e. `y -> H(y + c) - H(c)`.  Parallel translating a fibration
    /// re-bases its map this way; for the linear hopf map the fold is the
    /// hopf map again, which the evaluation path realizes numerically.
    pub fn hopf_offset_folded(orientation: Orientation, offset: [f64; 2]) -> Self {
        let h = hopf_matrix(orientation);
        let shift = mat_vec(&h, offset);
        FibrationMap {
            name: format!("hopf-offset({},{})", offset[0], offset[1]),
            orientation,
            kind: MapKind::Custom(Arc::new(move |y| {
                let m = mat_vec(&h, [y[0] + offset[0], y[1] + offset[1]]);
                [m[0] - shift[0], m[1] - shift[1]]
            })),
        }
    }

    /// Wraps an arbitrary evaluation function.  Fails unless `B(0) = 0`
    /// within `1e-9`.
    pub fn from_fn<F>(name: &str, orientation: Orientation, f: F) -> Result<Self, GeomError>
    where
        F: Fn([f64; 2]) -> [f64; 2] + Send + Sync + 'static,
    {
        let at_zero = f([0.0, 0.0]);
        if norm2(at_zero) > CHECK_TOL {
            return Err(GeomError::MapConstruction(format!(
                "B(0) = {at_zero:?} is not zero"
            )));
        }
        Ok(FibrationMap {
            name: name.to_string(),
            orientation,
            kind: MapKind::Custom(Arc::new(f)),
        })
    }

    /// A map sampled on a rectangular grid, evaluated by bilinear
    /// interpolation.  Verification-only: interpolation is approximate and
    /// the domain is clamped to the grid box.
    pub fn from_table(name: &str, grid: TabulatedGrid) -> Result<Self, GeomError> {
        let at_zero = grid.eval([0.0, 0.0]);
        if norm2(at_zero) > CHECK_TOL {
            return Err(GeomError::MapConstruction(format!(
                "interpolated B(0) = {at_zero:?} is not zero"
            )));
        }
        // orientation metadata from a probe pair near the origin
        let (lo, hi) = grid.bounds();
        let h = 0.25 * (hi[0] - lo[0]).min(hi[1] - lo[1]);
        let probe = grid.eval([h, 0.0]);
        let det = probe[0] * 0.0 - h * probe[1];
        let orientation = if det > 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        };
        Ok(FibrationMap {
            name: name.to_string(),
            orientation,
            kind: MapKind::Tabulated(Arc::new(grid)),
        })
    }

    pub(crate) fn blend_toward_hopf(&self, s: f64) -> Self {
        FibrationMap {
            name: format!("homotopy(s={s}, {})", self.name),
            orientation: self.orientation,
            kind: MapKind::Blend {
                s,
                target: hopf_matrix(self.orientation),
                inner: Box::new(self.kind.clone()),
            },
        }
    }

    pub fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        self.kind.eval(y)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The claimed orientation sign.
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The matrix of the map when it is exactly linear, used for exact
    /// fiber solves.
    pub fn linear_matrix(&self) -> Option<Mat2> {
        self.kind.linear_matrix()
    }

    /// The rectangle on which the map is trustworthy, for tabulated maps.
    pub fn domain_bounds(&self) -> Option<([f64; 2], [f64; 2])> {
        match &self.kind {
            MapKind::Tabulated(grid) => Some(grid.bounds()),
            _ => None,
        }
    }
}

/// Samples of a map on a rectangular grid.
#[derive(Debug, Clone)]
pub struct TabulatedGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // values[ix * ys.len() + iy]
    values: Vec<[f64; 2]>,
}

impl TabulatedGrid {
    /// Builds a grid from `(y, B(y))` records covering a full cartesian
    /// product of coordinates.
    pub fn from_points(points: &[([f64; 2], [f64; 2])]) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::MapConstruction("empty table".into()));
        }
        let mut xs: Vec<f64> = points.iter().map(|(y, _)| y[0]).collect();
        let mut ys: Vec<f64> = points.iter().map(|(y, _)| y[1]).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        if xs.len() < 2 || ys.len() < 2 {
            return Err(GeomError::MapConstruction(
                "grid needs at least two distinct coordinates per axis".into(),
            ));
        }
        if points.len() != xs.len() * ys.len() {
            return Err(GeomError::MapConstruction(format!(
                "expected {} grid points, found {}",
                xs.len() * ys.len(),
                points.len()
            )));
        }
        let mut values = vec![None; xs.len() * ys.len()];
        for (y, b) in points {
            let ix = xs
                .binary_search_by(|x| x.total_cmp(&y[0]))
                .map_err(|_| GeomError::MapConstruction(format!("coordinate {} off-grid", y[0])))?;
            let iy = ys
                .binary_search_by(|x| x.total_cmp(&y[1]))
                .map_err(|_| GeomError::MapConstruction(format!("coordinate {} off-grid", y[1])))?;
            values[ix * ys.len() + iy] = Some(*b);
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GeomError::MapConstruction("grid has missing cells".into()))?;
        Ok(TabulatedGrid { xs, ys, values })
    }

    /// Parses TSV rows `y1 <tab> y2 <tab> B1 <tab> B2`; blank lines and
    /// `#` comments are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, GeomError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| GeomError::MapConstruction(format!("line {}: {e}", lineno + 1)))?;
            if fields.len() != 4 {
                return Err(GeomError::MapConstruction(format!(
                    "line {}: expected 4 columns, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            points.push(([fields[0], fields[1]], [fields[2], fields[3]]));
        }
        Self::from_points(&points)
    }

    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        (
            [self.xs[0], self.ys[0]],
            [*self.xs.last().unwrap(), *self.ys.last().unwrap()],
        )
    }

    fn axis_cell(axis: &[f64], v: f64) -> (usize, f64) {
        let n = axis.len();
        if v <= axis[0] {
            return (0, 0.0);
        }
        if v >= axis[n - 1] {
            return (n - 2, 1.0);
        }
        let hi = axis.partition_point(|x| *x <= v).min(n - 1);
        let lo = hi - 1;
        (lo, (v - axis[lo]) / (axis[hi] - axis[lo]))
    }

    pub fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        let (ix, fx) = Self::axis_cell(&self.xs, y[0]);
        let (iy, fy) = Self::axis_cell(&self.ys, y[1]);
        let ny = self.ys.len();
        let v00 = self.values[ix * ny + iy];
        let v10 = self.values[(ix + 1) * ny + iy];
        let v01 = self.values[ix * ny + iy + 1];
        let v11 = self.values[(ix + 1) * ny + iy + 1];
        let mut out = [0.0; 2];
        for k in 0..2 {
            let a = v00[k] * (1.0 - fx) + v10[k] * fx;
            let b = v01[k] * (1.0 - fx) + v11[k] * fx;
            out[k] = a * (1.0 - fy) + b * fy;
        }
        out
    }
}

//! Serializable sample records for lines and great circles.
//!
//! JSON records are `{"y": [..2], "u": [..3], "v": [..3]}` for lines and
//! `{"e": [..4], "f": [..4]}` for great circles; CSV uses the header
//! `y1,y2,u1,u2,u3,v1,v2,v3`.

use serde::Serialize;

use super::circle::GreatCircle;
use super::line::OrientedLine;

pub const CSV_HEADER: &str = "y1,y2,u1,u2,u3,v1,v2,v3";

#[derive(Debug, Clone, Serialize)]
pub struct LineSample {
    pub y: [f64; 2],
    pub u: [f64; 3],
    pub v: [f64; 3],
}

impl LineSample {
    pub fn new(y: [f64; 2], line: &OrientedLine) -> Self {
        LineSample {
            y,
            u: line.direction(),
            v: line.basepoint(),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.y[0], self.y[1], self.u[0], self.u[1], self.u[2], self.v[0], self.v[1], self.v[2]
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleSample {
    pub e: [f64; 4],
    pub f: [f64; 4],
}

impl CircleSample {
    pub fn new(circle: &GreatCircle) -> Self {
        CircleSample {
            e: circle.e(),
            f: circle.f(),
        }
    }
}

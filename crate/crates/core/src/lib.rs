//! Skew fibrations of `R^n`, `C^n` and `H^n`: exact existence obstructions
//! and explicit line geometry.
//!
//! A fibration of `F^n` by oriented affine copies of `F^p` is *skew* if no
//! two fibers intersect or contain parallel directions.  Whether such a
//! fibration can exist depends only on `p` and `q = n - p`:
//!
//! * over `R`, existence is governed by the Hurwitz-Radon function
//!   ([`integrality::hurwitz_radon`]);
//! * over `C` and `H`, a necessary condition is that certain power-series
//!   coefficients are integers for the exponent `q`.  The minimal admissible
//!   period of `q` is computed exactly in [`integrality`], on top of the
//!   exact rational series arithmetic in [`series`] and [`sympow`].
//!
//! The geometric side lives in [`geometry`] (fibrations of `R^3` by skew
//! oriented lines, their projections to great-circle fibrations of `S^3`)
//! and [`divalg`] (the complex-conjugate construction on `C^n`, kernel
//! skewness tests over `R`, `C`, `H`).
//!
//! All symbolic computation is exact: coefficients are arbitrary-precision
//! rationals and no value is ever rounded.  The floating-point geometry
//! validates its invariants at `1e-12` and runs its sampled checks at
//! `1e-9`.

pub mod divalg;
pub mod geometry;
pub mod integrality;
pub mod series;
pub mod sympow;

use std::fmt;

/// One of the three real division algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    /// Dimension over `R`.
    pub fn dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::R => write!(f, "R"),
            Field::C => write!(f, "C"),
            Field::H => write!(f, "H"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            other => Err(format!("unknown field {other:?}, expected R, C or H")),
        }
    }
}

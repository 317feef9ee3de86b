use std::fmt;

use thiserror::Error;

/// Principal axis of the ellipsoid frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Axis> {
        Axis::ALL.get(i).copied()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::Domain(format!("unknown axis label {other:?}"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The permittivity sits exactly on a lossless plasmon resonance, where
    /// the quasistatic polarizability is infinite.
    #[error("resonance singularity on the {axis} axis: eps = {eps} equals the principal permittivity")]
    ResonanceSingularity { axis: Axis, eps: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid material table: {0}")]
    Validation(String),

    #[error("wavelength {lambda} nm outside table range [{min}, {max}] nm")]
    Range { lambda: f64, min: f64, max: f64 },

    #[error("infeasible design targets: l1 + l2 = {sum} >= 1 (l1 = {l1}, l2 = {l2})")]
    Infeasible { l1: f64, l2: f64, sum: f64 },

    #[error("no convergence after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A finite-difference oracle was asked to straddle the particle surface.
    #[error("precision error: {0}")]
    Precision(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Rate maps over a coordinate plane, with CSV and 16-bit PGM output.
//!
//! Grid node `(i, j)` sits at `u_i = u_min + i·(u_max−u_min)/(n₁−1)` and
//! `v_j` likewise. The in-plane axes are `(y, z)` for an `x = const` plane,
//! `(x, z)` for `y = const` and `(x, y)` for `z = const`.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::decay::radiative_rate;
use crate::error::{Axis, Error, Result};
use crate::geometry::{Ellipsoid, Region};
use crate::source_field::DipoleSource;

/// Default colour-scale bounds, in decades.
pub const DEFAULT_LOG_RANGE: (f64, f64) = (-2.0, 5.0);

#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    /// Normal of the sampled plane.
    pub normal: Axis,
    pub offset: f64,
    /// `[u_min, u_max, v_min, v_max]` in nm.
    pub extent: [f64; 4],
    pub resolution: (usize, usize),
    /// Unit dipole orientation.
    pub orientation: [f64; 3],
    pub eps: Complex64,
    pub ellipsoid: Ellipsoid,
}

impl MapSpec {
    pub fn new(
        ellipsoid: Ellipsoid,
        eps: Complex64,
        normal: Axis,
        offset: f64,
        extent: [f64; 4],
        resolution: (usize, usize),
        orientation: [f64; 3],
    ) -> Result<Self> {
        if resolution.0 < 2 || resolution.1 < 2 {
            return Err(Error::Domain(format!("map resolution must be at least 2x2, got {resolution:?}")));
        }
        if extent.iter().any(|v| !v.is_finite()) || extent[0] >= extent[1] || extent[2] >= extent[3] {
            return Err(Error::Domain(format!("map extent needs min < max on both axes, got {extent:?}")));
        }
        if !offset.is_finite() {
            return Err(Error::Domain("plane offset must be finite".into()));
        }
        let len = orientation.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::Domain(format!("dipole orientation must be a non-zero vector, got {orientation:?}")));
        }
        Ok(Self { normal, offset, extent, resolution, orientation: orientation.map(|v| v / len), eps, ellipsoid })
    }

    /// In-plane axes `(u, v)`.
    pub fn plane_axes(&self) -> (Axis, Axis) {
        match self.normal {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn u(&self, i: usize) -> f64 {
        let [u0, u1, _, _] = self.extent;
        u0 + i as f64 * (u1 - u0) / (self.resolution.0 - 1) as f64
    }

    pub fn v(&self, j: usize) -> f64 {
        let [_, _, v0, v1] = self.extent;
        v0 + j as f64 * (v1 - v0) / (self.resolution.1 - 1) as f64
    }

    /// Cartesian position of node `(i, j)`.
    pub fn position(&self, i: usize, j: usize) -> [f64; 3] {
        let (ua, va) = self.plane_axes();
        let mut p = [0.0; 3];
        p[self.normal.index()] = self.offset;
        p[ua.index()] = self.u(i);
        p[va.index()] = self.v(j);
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateMap {
    pub spec: MapSpec,
    /// Row-major, index `i·n₂ + j`.
    pub values: Vec<f64>,
    pub regions: Vec<Region>,
}

impl RateMap {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.resolution.1 + j]
    }

    pub fn region(&self, i: usize, j: usize) -> Region {
        self.regions[i * self.spec.resolution.1 + j]
    }

    /// `(rate, region)` pairs of every node.
    pub fn cells(&self) -> impl Iterator<Item = (f64, Region)> + '_ {
        self.values.iter().copied().zip(self.regions.iter().copied())
    }

    pub fn exterior_max(&self) -> Option<f64> {
        self.cells().filter(|c| c.1 == Region::Outside).map(|c| c.0).reduce(f64::max)
    }

    /// The common rate of interior (and surface) nodes, if any exist.
    pub fn interior_value(&self) -> Option<f64> {
        self.cells().find(|c| c.1.is_interior()).map(|c| c.0)
    }
}

/// Evaluates the radiative rate at every node. Nodes are computed in
/// parallel on the current rayon pool; the result does not depend on the
/// thread count.
pub fn compute_map(spec: &MapSpec) -> Result<RateMap> {
    let (n1, n2) = spec.resolution;
    let moment = spec.orientation.map(|v| Complex64::new(v, 0.0));
    let nodes: Vec<(f64, Region)> = (0..n1 * n2)
        .into_par_iter()
        .map(|k| {
            let source = DipoleSource::new(spec.position(k / n2, k % n2), moment)?;
            let r = radiative_rate(&spec.ellipsoid, spec.eps, &source)?;
            Ok((r.ratio, r.region.region))
        })
        .collect::<Result<_>>()?;
    let (values, regions) = nodes.into_iter().unzip();
    Ok(RateMap { spec: spec.clone(), values, regions })
}

/// CSV with header `u_nm,v_nm,rate,region`, one row per node in row-major
/// order, LF line endings, rates with 17 significant digits.
pub fn write_csv(map: &RateMap, sink: &mut impl Write) -> io::Result<()> {
    let (n1, n2) = map.spec.resolution;
    let mut out = io::BufWriter::new(sink);
    out.write_all(b"u_nm,v_nm,rate,region\n")?;
    for i in 0..n1 {
        for j in 0..n2 {
            writeln!(out, "{},{},{:.16e},{}", map.spec.u(i), map.spec.v(j), map.get(i, j), map.region(i, j))?;
        }
    }
    out.flush()
}

/// Gray level of a rate on a log₁₀ scale spanning `[log_floor, log_ceil]`.
pub fn gray_level(rate: f64, log_floor: f64, log_ceil: f64) -> u16 {
    let t = (rate.log10() - log_floor) / (log_ceil - log_floor);
    if t.is_nan() {
        return 0;
    }
    (65535.0 * t).round().clamp(0.0, 65535.0) as u16
}

/// Binary 16-bit PGM (`P5`, maxval 65535, big-endian samples). The image
/// is `n₁` wide and `n₂` tall with `u` increasing to the right and `v`
/// increasing upwards.
pub fn write_pgm(map: &RateMap, sink: &mut impl Write, log_floor: f64, log_ceil: f64) -> io::Result<()> {
    if !(log_floor < log_ceil) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidInput,
            format!("log range needs floor < ceil, got [{log_floor}, {log_ceil}]"),
        ));
    }
    let (n1, n2) = map.spec.resolution;
    let mut out = io::BufWriter::new(sink);
    write!(out, "P5\n{n1} {n2}\n65535\n")?;
    for j in (0..n2).rev() {
        for i in 0..n1 {
            out.write_all(&gray_level(map.get(i, j), log_floor, log_ceil).to_be_bytes())?;
        }
    }
    out.flush()
}

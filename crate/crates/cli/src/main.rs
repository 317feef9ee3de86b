use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use nanoellipsoid::map::{MapSpec, DEFAULT_LOG_RANGE};
use nanoellipsoid::material::parse_material_csv_named;
use nanoellipsoid::{
    compute_map, depolarization_factors, design_ellipsoid, radiative_rate, resonance_wavelengths, write_csv, write_pgm,
    Axis, DipoleSource, Ellipsoid, Error, MaterialTable,
};
use num_complex::Complex64;
use serde_json::json;

/// Quasistatic radiative decay rates near a triaxial nanoellipsoid.
///
/// Lengths are in nm; semiaxes a, b, c lie along x, y, z.
#[derive(Parser)]
#[command(name = "nanoellipsoid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative radiative rate of one dipole, printed as a JSON line.
    Rate {
        #[arg(long, value_parser = triple)]
        semiaxes: [f64; 3],
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        eps: Complex64,
        #[arg(long, value_parser = triple, allow_hyphen_values = true)]
        pos: [f64; 3],
        /// dx,dy,dz or dx,dy,dz,ix,iy,iz for a complex moment.
        #[arg(long, value_parser = moment, allow_hyphen_values = true)]
        moment: [Complex64; 3],
    },
    /// Rate map over a plane normal to a principal axis, written as CSV.
    Map {
        #[arg(long, value_parser = triple)]
        semiaxes: [f64; 3],
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        eps: Complex64,
        /// Plane as axis=offset, e.g. x=0.
        #[arg(long, value_parser = plane, allow_hyphen_values = true)]
        plane: (Axis, f64),
        /// umin,umax,vmin,vmax in nm [default: ±2c on both axes].
        #[arg(long, value_parser = quad, allow_hyphen_values = true)]
        extent: Option<[f64; 4]>,
        /// Nodes along u and v.
        #[arg(long, value_parser = resolution, default_value = "201,201")]
        res: (usize, usize),
        /// Real dipole orientation.
        #[arg(long, value_parser = triple, allow_hyphen_values = true, default_value = "0,1,0")]
        orient: [f64; 3],
        #[arg(long)]
        out: PathBuf,
        /// Also write a 16-bit PGM on a log10 scale.
        #[arg(long)]
        pgm: Option<PathBuf>,
        /// lo,hi decades for the PGM gray scale [default: -2,5].
        #[arg(long, value_parser = pair, allow_hyphen_values = true)]
        log_range: Option<(f64, f64)>,
        /// Worker threads [default: all cores].
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Principal plasmon resonance wavelengths for a tabulated material.
    Resonances {
        #[arg(long, value_parser = triple)]
        semiaxes: [f64; 3],
        /// CSV with columns wavelength_nm, eps_re, eps_im.
        #[arg(long)]
        material: PathBuf,
    },
    /// Aspect ratios a/c, b/c that put two resonances at given wavelengths.
    Design {
        /// Target wavelengths l1,l2 in nm.
        #[arg(long, value_parser = pair)]
        targets: (f64, f64),
        #[arg(long)]
        material: PathBuf,
        /// Axes carrying l1 and l2.
        #[arg(long, value_parser = axis_pair, default_value = "y,z")]
        axes: (Axis, Axis),
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. }
            | Error::NoConvergence { .. }
            | Error::ResonanceSingularity { .. }
            | Error::Precision(_) => Failure::Numerical(e.to_string()),
            Error::Domain(_) | Error::Parse { .. } | Error::Validation(_) | Error::Range { .. } => {
                Failure::Input(e.to_string())
            }
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn numbers(s: &str, n: &[usize]) -> Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|t| f64::from_str(t.trim()).map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if !n.contains(&v.len()) {
        return Err(format!("expected {} comma-separated numbers, got {}", n[0], v.len()));
    }
    Ok(v)
}

fn triple(s: &str) -> Result<[f64; 3], String> {
    let v = numbers(s, &[3])?;
    Ok([v[0], v[1], v[2]])
}

fn quad(s: &str) -> Result<[f64; 4], String> {
    let v = numbers(s, &[4])?;
    Ok([v[0], v[1], v[2], v[3]])
}

fn pair(s: &str) -> Result<(f64, f64), String> {
    let v = numbers(s, &[2])?;
    Ok((v[0], v[1]))
}

fn complex(s: &str) -> Result<Complex64, String> {
    pair(s).map(|(re, im)| Complex64::new(re, im))
}

fn moment(s: &str) -> Result<[Complex64; 3], String> {
    let v = numbers(s, &[3, 6])?;
    let im = |i: usize| if v.len() == 6 { v[i + 3] } else { 0.0 };
    Ok([0, 1, 2].map(|i| Complex64::new(v[i], im(i))))
}

fn resolution(s: &str) -> Result<(usize, usize), String> {
    let v = s
        .split(',')
        .map(|t| usize::from_str(t.trim()).map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match v[..] {
        [n1, n2] => Ok((n1, n2)),
        _ => Err(format!("expected n1,n2, got {} values", v.len())),
    }
}

fn plane(s: &str) -> Result<(Axis, f64), String> {
    let (axis, offset) = s.split_once('=').ok_or_else(|| format!("expected axis=offset, got '{s}'"))?;
    let axis = Axis::from_str(axis.trim()).map_err(|e| e.to_string())?;
    let offset = f64::from_str(offset.trim()).map_err(|e| format!("'{offset}': {e}"))?;
    Ok((axis, offset))
}

fn axis_pair(s: &str) -> Result<(Axis, Axis), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two axes like y,z, got '{s}'"))?;
    let parse = |t: &str| Axis::from_str(t.trim()).map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

fn c_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn load_material(path: &Path) -> Result<MaterialTable, Failure> {
    let bytes = std::fs::read(path).map_err(|e| io_failure(path, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(parse_material_csv_named(&bytes, &name)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    match cli.command {
        Command::Rate { semiaxes, eps, pos, moment } => {
            let e = Ellipsoid::new(semiaxes[0], semiaxes[1], semiaxes[2])?;
            let r = radiative_rate(&e, eps, &DipoleSource::new(pos, moment)?)?;
            let line = json!({
                "ratio": r.ratio,
                "induced": r.induced.map(c_json),
                "region": r.region.region.as_str(),
                "zeta": r.region.zeta,
            });
            writeln!(stdout.lock(), "{line}").map_err(|e| Failure::Input(e.to_string()))?;
        }
        Command::Map { semiaxes, eps, plane, extent, res, orient, out, pgm, log_range, threads } => {
            let e = Ellipsoid::new(semiaxes[0], semiaxes[1], semiaxes[2])?;
            let c = e.c();
            let extent = extent.unwrap_or([-2.0 * c, 2.0 * c, -2.0 * c, 2.0 * c]);
            let spec = MapSpec::new(e, eps, plane.0, plane.1, extent, res, orient)?;
            let (lo, hi) = log_range.unwrap_or(DEFAULT_LOG_RANGE);
            if pgm.is_some() && !(lo < hi) {
                return Err(Failure::Input(format!("--log-range needs lo < hi, got {lo},{hi}")));
            }
            let map = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Failure::Input(e.to_string()))?
                    .install(|| compute_map(&spec))?,
                None => compute_map(&spec)?,
            };
            let mut file = File::create(&out).map_err(|e| io_failure(&out, e))?;
            write_csv(&map, &mut file).map_err(|e| io_failure(&out, e))?;
            if let Some(path) = pgm {
                let mut file = File::create(&path).map_err(|e| io_failure(&path, e))?;
                write_pgm(&map, &mut file, lo, hi).map_err(|e| io_failure(&path, e))?;
            }
        }
        Command::Resonances { semiaxes, material } => {
            let e = Ellipsoid::new(semiaxes[0], semiaxes[1], semiaxes[2])?;
            let table = load_material(&material)?;
            let report = resonance_wavelengths(&e, &table);
            let l = depolarization_factors(&e);
            let mut out = stdout.lock();
            for ax in &report.axes {
                for &lambda in &ax.wavelengths {
                    if e.max_semiaxis() > lambda / 10.0 {
                        eprintln!(
                            "warning: max semiaxis {} nm exceeds lambda/10 at the {} resonance ({lambda:.2} nm); \
                             the quasistatic approximation is doubtful",
                            e.max_semiaxis(),
                            ax.axis
                        );
                    }
                }
                let line = json!({
                    "axis": ax.axis.to_string(),
                    "depolarization": l.get(ax.axis),
                    "eps_ii": ax.eps_ii,
                    "wavelengths_nm": ax.wavelengths,
                });
                writeln!(out, "{line}").map_err(|e| Failure::Input(e.to_string()))?;
            }
        }
        Command::Design { targets, material, axes } => {
            let table = load_material(&material)?;
            let s = design_ellipsoid(targets.0, targets.1, &table, axes)?;
            let line = json!({
                "a_over_c": s.aspect_a,
                "b_over_c": s.aspect_b,
                "axes": [s.axes.0.to_string(), s.axes.1.to_string()],
                "wavelengths_nm": [s.wavelengths.0, s.wavelengths.1],
                "residual": s.residual,
                "iterations": s.iterations,
            });
            writeln!(stdout.lock(), "{line}").map_err(|e| Failure::Input(e.to_string()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

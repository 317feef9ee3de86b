//! Tabulated complex permittivity ε(λ) with piecewise-linear interpolation.
//!
//! Material files are plain CSV: one `wavelength_nm,eps_real,eps_imag`
//! sample per line, `.` as decimal point, LF or CRLF line endings, an
//! optional non-numeric header line and `#` comments (whole-line or
//! trailing).

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialTable {
    name: String,
    wavelengths: Vec<f64>,
    eps: Vec<Complex64>,
}

impl MaterialTable {
    /// Builds a table from `(wavelength_nm, eps)` samples, sorting by
    /// wavelength.
    pub fn new(name: impl Into<String>, mut samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Validation(format!("fewer than 2 samples ({})", samples.len())));
        }
        for (lambda, eps) in &samples {
            if !lambda.is_finite() || *lambda <= 0.0 {
                return Err(Error::Validation(format!("wavelength {lambda} is not a positive number")));
            }
            if !eps.re.is_finite() || !eps.im.is_finite() {
                return Err(Error::Validation(format!("non-finite permittivity at {lambda} nm")));
            }
            if eps.im < 0.0 {
                return Err(Error::Validation(format!(
                    "negative Im(eps) = {} at {lambda} nm (passive media need Im(eps) >= 0)",
                    eps.im
                )));
            }
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = samples.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Validation(format!("duplicate wavelength {} nm", w[0].0)));
        }
        let (wavelengths, eps) = samples.into_iter().unzip();
        Ok(Self { name: name.into(), wavelengths, eps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.wavelengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths.is_empty()
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.wavelengths.iter().copied().zip(self.eps.iter().copied())
    }

    /// `(min, max)` wavelength in nm.
    pub fn range(&self) -> (f64, f64) {
        (self.wavelengths[0], self.wavelengths[self.wavelengths.len() - 1])
    }

    /// Linearly interpolated permittivity; real and imaginary parts are
    /// interpolated independently. No extrapolation.
    pub fn permittivity_at(&self, lambda: f64) -> Result<Complex64> {
        let (min, max) = self.range();
        if !(lambda >= min && lambda <= max) {
            return Err(Error::Range { lambda, min, max });
        }
        // first node strictly greater than lambda
        let hi = self.wavelengths.partition_point(|&w| w <= lambda);
        if hi == 0 {
            return Ok(self.eps[0]);
        }
        let lo = hi - 1;
        if self.wavelengths[lo] == lambda || hi == self.len() {
            return Ok(self.eps[lo]);
        }
        let (w0, w1) = (self.wavelengths[lo], self.wavelengths[hi]);
        let t = (lambda - w0) / (w1 - w0);
        let (e0, e1) = (self.eps[lo], self.eps[hi]);
        Ok(Complex64::new(e0.re + t * (e1.re - e0.re), e0.im + t * (e1.im - e0.im)))
    }

    pub(crate) fn segment(&self, i: usize) -> ((f64, Complex64), (f64, Complex64)) {
        ((self.wavelengths[i], self.eps[i]), (self.wavelengths[i + 1], self.eps[i + 1]))
    }
}

/// Parses a material CSV document. The table name is left empty; use
/// [`parse_material_csv_named`] to set one.
pub fn parse_material_csv(text: &[u8]) -> Result<MaterialTable> {
    parse_material_csv_named(text, "")
}

pub fn parse_material_csv_named(text: &[u8], name: &str) -> Result<MaterialTable> {
    let text =
        std::str::from_utf8(text).map_err(|e| Error::Parse { line: 0, message: format!("input is not UTF-8: {e}") })?;

    let mut samples = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let first_content = !seen_content;
        seen_content = true;

        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 3 => samples.push((v[0], Complex64::new(v[1], v[2]))),
            Ok(v) => {
                return Err(Error::Parse { line: line_no, message: format!("expected 3 fields, found {}", v.len()) })
            }
            // a non-numeric first line is the optional header
            Err(_) if first_content && fields.len() == 3 => {}
            Err(e) => return Err(Error::Parse { line: line_no, message: format!("malformed sample {line:?}: {e}") }),
        }
    }
    MaterialTable::new(name, samples)
}

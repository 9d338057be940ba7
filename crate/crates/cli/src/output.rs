//! Byte-stable writers for CSV tables, binary PGM rasters and text reports.

use std::fs;
use std::path::Path;

use cpo_slm_core::raster::RasterGrid;

use crate::error::CliError;

pub const CSV_DIGITS: usize = 12;

/// `printf("%.{digits}g")` formatting: shortest of fixed or scientific
/// notation, trailing zeros removed, two-digit minimum exponent.
pub fn format_g(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific formatting has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV text with a header line and 12-significant-digit numbers.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String, CliError> {
    if header.is_empty() || header.iter().any(|h| h.is_empty()) {
        return Err(CliError::config("csv", "column names must be non-empty"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_g(v, CSV_DIGITS)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_table_csv(header: &[&str], rows: &[Vec<f64>], path: &Path) -> Result<(), CliError> {
    write_bytes(path, table_csv(header, rows)?.as_bytes())
}

/// How raster values are mapped to grey levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PgmMapping {
    /// Linear from the raster's own minimum and maximum.
    Auto,
    /// Linear from a fixed range; values outside it are clipped.
    Range(f64, f64),
    /// Values must be 0 or 1 and map to 0 and 255.
    Binary,
}

/// Binary PGM (`P5`) bytes; the comment line records the mapped range.
pub fn raster_pgm(raster: &RasterGrid, mapping: PgmMapping) -> Result<Vec<u8>, CliError> {
    if raster.values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::config("raster", "values must be finite"));
    }
    let (lo, hi) = match mapping {
        PgmMapping::Auto => (raster.min(), raster.max()),
        PgmMapping::Range(lo, hi) => (lo, hi),
        PgmMapping::Binary => {
            if raster.values.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(CliError::config(
                    "raster",
                    "binary mapping needs values in {0, 1}",
                ));
            }
            (0.0, 1.0)
        }
    };
    let flat = hi <= lo;
    let mut comment = format!(
        "# min={} max={}",
        format_g(lo, CSV_DIGITS),
        format_g(hi, CSV_DIGITS)
    );
    if flat {
        comment.push_str(" flat-field");
    }
    let mut out = format!(
        "P5\n{comment}\n{} {}\n255\n",
        raster.width(),
        raster.height()
    )
    .into_bytes();
    out.extend(raster.values.iter().map(|&v| {
        if flat {
            0
        } else {
            let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
            (t * 255.0).round() as u8
        }
    }));
    Ok(out)
}

pub fn write_raster_pgm(
    raster: &RasterGrid,
    path: &Path,
    mapping: PgmMapping,
) -> Result<(), CliError> {
    write_bytes(path, &raster_pgm(raster, mapping)?)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

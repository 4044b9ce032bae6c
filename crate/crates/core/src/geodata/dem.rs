//! ESRI ASCII grid DEMs.
//!
//! Row 0 is the northernmost row. The center of cell `(r, c)` sits at
//! `(xll + (c + 0.5) * cellsize, yll + (nrows - r - 0.5) * cellsize)`.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::LocalCoord;

pub const DEFAULT_NODATA: f64 = -9999.0;

/// Errors raised while reading an ASCII grid.
#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("line {line}: missing header key `{key}`")]
    MissingHeaderKey { key: &'static str, line: usize },
    #[error("line {line}: non-numeric token `{token}`")]
    NonNumericToken { token: String, line: usize },
    #[error("expected {expected} values ({nrows}x{ncols}), found {found}")]
    ValueCountMismatch {
        expected: usize,
        found: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("line {line}: invalid header: {reason}")]
    InvalidHeader { reason: String, line: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("point ({x}, {y}) lies outside the DEM extent")]
    OutOfExtent { x: f64, y: f64 },
    #[error("point ({x}, {y}) touches a NoData cell")]
    NoDataNeighborhood { x: f64, y: f64 },
}

/// Georeferencing of a grid, as carried by the ASCII grid header.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridHeader {
    pub ncols: usize,
    pub nrows: usize,
    pub xllcorner: f64,
    pub yllcorner: f64,
    pub cellsize: f64,
    pub nodata_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extent {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Extent {
    pub fn contains(&self, p: LocalCoord) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }
}

/// A row-major elevation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Dem {
    header: GridHeader,
    values: Vec<f64>,
}

impl Dem {
    /// Builds a DEM from a header and row-major values (row 0 = north).
    pub fn new(header: GridHeader, values: Vec<f64>) -> Result<Self, GridError> {
        let invalid = |reason: String| GridError::InvalidHeader { reason, line: 0 };
        validate_header(&header).map_err(invalid)?;
        let expected = header.nrows * header.ncols;
        if values.len() != expected {
            return Err(GridError::ValueCountMismatch {
                expected,
                found: values.len(),
                nrows: header.nrows,
                ncols: header.ncols,
            });
        }
        if let Some(bad) = values
            .iter()
            .find(|v| !v.is_finite() && v.to_bits() != header.nodata_value.to_bits())
        {
            return Err(invalid(format!("non-finite elevation {bad}")));
        }
        Ok(Self { header, values })
    }

    pub fn header(&self) -> &GridHeader {
        &self.header
    }

    pub fn nrows(&self) -> usize {
        self.header.nrows
    }

    pub fn ncols(&self) -> usize {
        self.header.ncols
    }

    pub fn cellsize(&self) -> f64 {
        self.header.cellsize
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw values including NoData sentinels.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.header.ncols + col
    }

    #[inline]
    pub fn is_nodata_value(&self, v: f64) -> bool {
        v == self.header.nodata_value || (v.is_nan() && self.header.nodata_value.is_nan())
    }

    /// Elevation at `(row, col)`, `None` for NoData. Panics when out of bounds.
    #[inline]
    pub fn elevation(&self, row: usize, col: usize) -> Option<f64> {
        let v = self.values[self.index(row, col)];
        (!self.is_nodata_value(v)).then_some(v)
    }

    pub fn in_bounds(&self, row: usize, col: usize) -> bool {
        row < self.header.nrows && col < self.header.ncols
    }

    pub fn valid_cell_count(&self) -> usize {
        self.values
            .iter()
            .filter(|v| !self.is_nodata_value(**v))
            .count()
    }

    pub fn cell_center(&self, row: usize, col: usize) -> LocalCoord {
        let h = &self.header;
        LocalCoord {
            x: h.xllcorner + (col as f64 + 0.5) * h.cellsize,
            y: h.yllcorner + ((h.nrows - row) as f64 - 0.5) * h.cellsize,
        }
    }

    /// Full outer extent of the grid (cell edges, not centers).
    pub fn extent(&self) -> Extent {
        let h = &self.header;
        Extent {
            xmin: h.xllcorner,
            ymin: h.yllcorner,
            xmax: h.xllcorner + h.ncols as f64 * h.cellsize,
            ymax: h.yllcorner + h.nrows as f64 * h.cellsize,
        }
    }

    /// The cell whose footprint contains `p`. Points on the far edges map to
    /// the last row/column.
    pub fn containing_cell(&self, p: LocalCoord) -> Option<(usize, usize)> {
        if !self.extent().contains(p) {
            return None;
        }
        let h = &self.header;
        let col = ((p.x - h.xllcorner) / h.cellsize).floor() as usize;
        let row = ((h.yllcorner + h.nrows as f64 * h.cellsize - p.y) / h.cellsize).floor() as usize;
        Some((row.min(h.nrows - 1), col.min(h.ncols - 1)))
    }

    /// Bilinear interpolation between the surrounding cell centers.
    ///
    /// Points in the half-cell margin between the outermost centers and the
    /// grid edge are clamped onto the outermost centers. Neighbours that
    /// carry zero weight are ignored, so a valid cell center always samples
    /// to its stored value even next to NoData.
    pub fn sample_elevation(&self, p: LocalCoord) -> Result<f64, SampleError> {
        if !p.x.is_finite() || !p.y.is_finite() || !self.extent().contains(p) {
            return Err(SampleError::OutOfExtent { x: p.x, y: p.y });
        }
        let h = &self.header;
        // Continuous grid coordinates where integers are cell centers.
        let fc = snap((p.x - h.xllcorner) / h.cellsize - 0.5).clamp(0.0, (h.ncols - 1) as f64);
        let top = h.yllcorner + h.nrows as f64 * h.cellsize;
        let fr = snap((top - p.y) / h.cellsize - 0.5).clamp(0.0, (h.nrows - 1) as f64);

        let c0 = (fc.floor() as usize).min(h.ncols - 2);
        let r0 = (fr.floor() as usize).min(h.nrows - 2);
        let tc = fc - c0 as f64;
        let tr = fr - r0 as f64;

        let corners = [
            (r0, c0, (1.0 - tr) * (1.0 - tc)),
            (r0, c0 + 1, (1.0 - tr) * tc),
            (r0 + 1, c0, tr * (1.0 - tc)),
            (r0 + 1, c0 + 1, tr * tc),
        ];
        let mut acc = 0.0;
        for (r, c, w) in corners {
            if w == 0.0 {
                continue;
            }
            match self.elevation(r, c) {
                Some(z) if w == 1.0 => return Ok(z),
                Some(z) => acc += w * z,
                None => return Err(SampleError::NoDataNeighborhood { x: p.x, y: p.y }),
            }
        }
        Ok(acc)
    }

    /// Serializes back to ESRI ASCII grid text. Header numbers use the
    /// shortest representation that parses back to the same `f64`.
    pub fn to_ascii_grid(&self) -> String {
        let h = &self.header;
        let mut out = String::with_capacity(self.values.len() * 8 + 128);
        let _ = writeln!(out, "ncols {}", h.ncols);
        let _ = writeln!(out, "nrows {}", h.nrows);
        let _ = writeln!(out, "xllcorner {}", h.xllcorner);
        let _ = writeln!(out, "yllcorner {}", h.yllcorner);
        let _ = writeln!(out, "cellsize {}", h.cellsize);
        let _ = writeln!(out, "NODATA_value {}", h.nodata_value);
        for row in self.values.chunks(h.ncols) {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r
    } else {
        v
    }
}

fn validate_header(h: &GridHeader) -> Result<(), String> {
    if h.ncols < 2 || h.nrows < 2 {
        return Err(format!(
            "grid must be at least 2x2, got {}x{}",
            h.nrows, h.ncols
        ));
    }
    if !(h.cellsize.is_finite() && h.cellsize > 0.0) {
        return Err(format!("cellsize must be positive, got {}", h.cellsize));
    }
    if !h.xllcorner.is_finite() || !h.yllcorner.is_finite() {
        return Err("corner coordinates must be finite".into());
    }
    Ok(())
}

const HEADER_KEYS: [&str; 8] = [
    "ncols",
    "nrows",
    "xllcorner",
    "yllcorner",
    "xllcenter",
    "yllcenter",
    "cellsize",
    "nodata_value",
];

/// Parses an ESRI ASCII grid.
///
/// Header keys are case-insensitive. `xllcenter`/`yllcenter` are accepted
/// and converted to corner coordinates. A missing `nodata_value` defaults
/// to -9999.
pub fn parse_ascii_grid(text: &str) -> Result<Dem, GridError> {
    let mut ncols = None;
    let mut nrows = None;
    let mut xll = None;
    let mut yll = None;
    let mut x_is_center = false;
    let mut y_is_center = false;
    let mut cellsize = None;
    let mut nodata = None;

    let mut lines = text.lines().enumerate().peekable();
    let mut header_end_line = 1;
    while let Some(&(idx, line)) = lines.peek() {
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else {
            lines.next();
            continue;
        };
        let key_lc = key.to_ascii_lowercase();
        if !HEADER_KEYS.contains(&key_lc.as_str()) {
            break;
        }
        let line_no = idx + 1;
        let token = parts.next().ok_or_else(|| GridError::InvalidHeader {
            reason: format!("key `{key}` has no value"),
            line: line_no,
        })?;
        let num: f64 = parse_number(token, line_no)?;
        match key_lc.as_str() {
            "ncols" => ncols = Some(parse_dim(token, num, line_no)?),
            "nrows" => nrows = Some(parse_dim(token, num, line_no)?),
            "xllcorner" => xll = Some(num),
            "yllcorner" => yll = Some(num),
            "xllcenter" => {
                xll = Some(num);
                x_is_center = true;
            }
            "yllcenter" => {
                yll = Some(num);
                y_is_center = true;
            }
            "cellsize" => cellsize = Some(num),
            "nodata_value" => nodata = Some(num),
            _ => unreachable!(),
        }
        lines.next();
        header_end_line = line_no + 1;
    }

    let missing = |key| GridError::MissingHeaderKey {
        key,
        line: header_end_line,
    };
    let ncols = ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = nrows.ok_or_else(|| missing("nrows"))?;
    let mut xll = xll.ok_or_else(|| missing("xllcorner"))?;
    let mut yll = yll.ok_or_else(|| missing("yllcorner"))?;
    let cellsize = cellsize.ok_or_else(|| missing("cellsize"))?;
    if x_is_center {
        xll -= cellsize / 2.0;
    }
    if y_is_center {
        yll -= cellsize / 2.0;
    }
    let header = GridHeader {
        ncols,
        nrows,
        xllcorner: xll,
        yllcorner: yll,
        cellsize,
        nodata_value: nodata.unwrap_or(DEFAULT_NODATA),
    };
    validate_header(&header).map_err(|reason| GridError::InvalidHeader {
        reason,
        line: header_end_line,
    })?;

    let expected = nrows
        .checked_mul(ncols)
        .ok_or_else(|| GridError::InvalidHeader {
            reason: "grid dimensions overflow".into(),
            line: header_end_line,
        })?;
    let mut values = Vec::with_capacity(expected);
    for (idx, line) in lines {
        for token in line.split_whitespace() {
            let v = parse_number(token, idx + 1)?;
            if !v.is_finite() && v.to_bits() != header.nodata_value.to_bits() {
                return Err(GridError::NonNumericToken {
                    token: token.to_string(),
                    line: idx + 1,
                });
            }
            values.push(v);
        }
    }
    if values.len() != expected {
        return Err(GridError::ValueCountMismatch {
            expected,
            found: values.len(),
            nrows,
            ncols,
        });
    }
    Ok(Dem { header, values })
}

fn parse_number(token: &str, line: usize) -> Result<f64, GridError> {
    token
        .parse::<f64>()
        .map_err(|_| GridError::NonNumericToken {
            token: token.to_string(),
            line,
        })
}

fn parse_dim(token: &str, num: f64, line: usize) -> Result<usize, GridError> {
    if num.fract() != 0.0 || num < 0.0 || !num.is_finite() {
        return Err(GridError::InvalidHeader {
            reason: format!("dimension `{token}` is not a non-negative integer"),
            line,
        });
    }
    Ok(num as usize)
}

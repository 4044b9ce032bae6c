//! Sea-level projection curve and the 80-step year timeline.

use serde::Serialize;
use thiserror::Error;

pub const START_YEAR: i32 = 2021;
pub const END_YEAR: i32 = 2100;
pub const STEP_COUNT: usize = 80;

const _: () = assert!((END_YEAR - START_YEAR + 1) as usize == STEP_COUNT);

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("line {line}: year {year} appears more than once")]
    DuplicateYear { year: i32, line: usize },
    #[error("curve spans {first}..={last}, which does not cover {START_YEAR}..={END_YEAR}")]
    CoverageGap { first: i32, last: i32 },
    #[error("line {line}: non-numeric field `{field}`")]
    NonNumericField { field: String, line: usize },
    #[error("line {line}: expected `year,level_m`")]
    MalformedLine { line: usize },
    #[error("curve needs at least two anchors, found {0}")]
    TooFewAnchors(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum TimelineError {
    #[error("slider index {0} outside 0..={max}", max = STEP_COUNT - 1)]
    IndexOutOfRange(i64),
    #[error("year {0} outside {START_YEAR}..={END_YEAR}")]
    YearOutOfRange(i64),
}

/// The fixed timeline: one slider position per calendar year, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimelineSpec {
    pub start_year: i32,
    pub end_year: i32,
    pub step_count: usize,
}

pub const TIMELINE: TimelineSpec = TimelineSpec {
    start_year: START_YEAR,
    end_year: END_YEAR,
    step_count: STEP_COUNT,
};

pub fn year_for_slider(index: i64) -> Result<i32, TimelineError> {
    if (0..STEP_COUNT as i64).contains(&index) {
        Ok(START_YEAR + index as i32)
    } else {
        Err(TimelineError::IndexOutOfRange(index))
    }
}

pub fn slider_for_year(year: i64) -> Result<usize, TimelineError> {
    if (START_YEAR as i64..=END_YEAR as i64).contains(&year) {
        Ok((year - START_YEAR as i64) as usize)
    } else {
        Err(TimelineError::YearOutOfRange(year))
    }
}

/// A year anchor of the projection curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anchor {
    pub year: i32,
    /// Meters relative to the 2021 datum.
    pub level: f64,
}

/// Piecewise-linear sea-level projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SeaLevelCurve {
    anchors: Vec<Anchor>,
}

impl SeaLevelCurve {
    /// Anchors in any order; they are sorted and validated.
    pub fn new(mut anchors: Vec<Anchor>) -> Result<Self, CurveError> {
        anchors.sort_by_key(|a| a.year);
        if let Some(w) = anchors.windows(2).find(|w| w[0].year == w[1].year) {
            return Err(CurveError::DuplicateYear {
                year: w[0].year,
                line: 0,
            });
        }
        Self::from_sorted(anchors)
    }

    fn from_sorted(anchors: Vec<Anchor>) -> Result<Self, CurveError> {
        if anchors.len() < 2 {
            return Err(CurveError::TooFewAnchors(anchors.len()));
        }
        let first = anchors[0].year;
        let last = anchors[anchors.len() - 1].year;
        if first > START_YEAR || last < END_YEAR {
            return Err(CurveError::CoverageGap { first, last });
        }
        Ok(Self { anchors })
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    /// Linear interpolation between bracketing anchors, clamped at the ends.
    pub fn level_for_year(&self, year: f64) -> f64 {
        let a = &self.anchors;
        let first = a[0];
        let last = a[a.len() - 1];
        if year.is_nan() || year <= first.year as f64 {
            return first.level;
        }
        if year >= last.year as f64 {
            return last.level;
        }
        // First anchor strictly after `year`; always in 1..len here.
        let hi = a.partition_point(|p| (p.year as f64) <= year);
        let (p0, p1) = (a[hi - 1], a[hi]);
        if year == p0.year as f64 {
            return p0.level;
        }
        let t = (year - p0.year as f64) / (p1.year - p0.year) as f64;
        p0.level + t * (p1.level - p0.level)
    }

    /// Level at a slider position.
    pub fn level_for_slider(&self, index: i64) -> Result<f64, TimelineError> {
        Ok(self.level_for_year(year_for_slider(index)? as f64))
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.anchors.windows(2).all(|w| w[0].level <= w[1].level)
    }
}

/// Parses `year,level_m` CSV. Blank lines and `#` comments are skipped, and
/// a `year,level...` header row is tolerated.
pub fn parse_curve(text: &str) -> Result<SeaLevelCurve, CurveError> {
    let mut anchors: Vec<(Anchor, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let (Some(y), Some(l), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CurveError::MalformedLine { line: line_no });
        };
        if anchors.is_empty() && y.eq_ignore_ascii_case("year") {
            continue;
        }
        let year: i32 = y.parse().map_err(|_| CurveError::NonNumericField {
            field: y.to_string(),
            line: line_no,
        })?;
        let level: f64 = l
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| CurveError::NonNumericField {
                field: l.to_string(),
                line: line_no,
            })?;
        if anchors.iter().any(|(a, _)| a.year == year) {
            return Err(CurveError::DuplicateYear {
                year,
                line: line_no,
            });
        }
        anchors.push((Anchor { year, level }, line_no));
    }
    let mut anchors: Vec<Anchor> = anchors.into_iter().map(|(a, _)| a).collect();
    anchors.sort_by_key(|a| a.year);
    SeaLevelCurve::from_sorted(anchors)
}

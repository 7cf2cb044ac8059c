//! Data loading, min-max scaling, calendar features and train/test splits.

use chrono::{Datelike, NaiveDateTime, Timelike};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};

/// Default timestamp format: day-first, e.g. `01/01/2010 00:00:00`.
pub const DEFAULT_TIMESTAMP_FORMAT: &str = "%d/%m/%Y %H:%M:%S";

/// A column-named feature matrix with an aligned target vector and optional
/// per-row timestamps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dataset {
    pub timestamps: Option<Vec<NaiveDateTime>>,
    pub feature_names: Vec<String>,
    /// N×d feature matrix, one row per observation.
    pub features: DMatrix<f64>,
    /// Length-N target vector; absent for unlabeled prediction sets.
    pub targets: Option<DVector<f64>>,
}

impl Dataset {
    /// Builds a dataset, validating shape agreement and finiteness.
    pub fn new(
        feature_names: Vec<String>,
        features: DMatrix<f64>,
        targets: Option<DVector<f64>>,
        timestamps: Option<Vec<NaiveDateTime>>,
    ) -> Result<Self> {
        if feature_names.len() != features.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.ncols()
            )));
        }
        if let Some(t) = &targets {
            if t.len() != features.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "{} targets for {} rows",
                    t.len(),
                    features.nrows()
                )));
            }
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numeric("non-finite target value".into()));
            }
        }
        if let Some(ts) = &timestamps {
            if ts.len() != features.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "{} timestamps for {} rows",
                    ts.len(),
                    features.nrows()
                )));
            }
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite feature value".into()));
        }
        Ok(Self {
            timestamps,
            feature_names,
            features,
            targets,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn feature_row(&self, i: usize) -> Vec<f64> {
        self.features.row(i).iter().copied().collect()
    }

    /// Targets, or an error when the dataset is unlabeled.
    pub fn require_targets(&self) -> Result<&DVector<f64>> {
        self.targets
            .as_ref()
            .ok_or_else(|| Error::EmptyData("dataset has no target column".into()))
    }

    /// Row subset in the given index order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let d = self.n_features();
        let mut features = DMatrix::zeros(indices.len(), d);
        for (r, &i) in indices.iter().enumerate() {
            features.set_row(r, &self.features.row(i));
        }
        let targets = self
            .targets
            .as_ref()
            .map(|t| DVector::from_iterator(indices.len(), indices.iter().map(|&i| t[i])));
        let timestamps = self
            .timestamps
            .as_ref()
            .map(|ts| indices.iter().map(|&i| ts[i]).collect());
        Dataset {
            timestamps,
            feature_names: self.feature_names.clone(),
            features,
            targets,
        }
    }
}

/// Per-column min/max plus the target scale constant `C`.
///
/// Features map to `[0, 1]`; the target maps to `[0, C]`. A degenerate
/// (constant) column scales to 0 by definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub feature_ranges: Vec<(f64, f64)>,
    pub target_range: (f64, f64),
    /// Output scale constant `C`: `10·d` for clustering, 1 for regression.
    pub target_scale: f64,
}

fn scale_value(x: f64, (lo, hi): (f64, f64), scale: f64) -> f64 {
    if hi > lo {
        scale * (x - lo) / (hi - lo)
    } else {
        0.0
    }
}

fn unscale_value(s: f64, (lo, hi): (f64, f64), scale: f64) -> f64 {
    if hi > lo {
        lo + s * (hi - lo) / scale
    } else {
        lo
    }
}

impl ScalingSpec {
    /// Fits column minima/maxima on the training rows. `c` is the target
    /// scale constant (must be ≥ 1).
    pub fn fit(ds: &Dataset, c: f64) -> Result<Self> {
        if ds.n_rows() == 0 {
            return Err(Error::EmptyData("cannot fit scaling on zero rows".into()));
        }
        if !(c >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "target scale constant must be >= 1, got {c}"
            )));
        }
        let targets = ds.require_targets()?;
        let feature_ranges = (0..ds.n_features())
            .map(|j| {
                let col = ds.features.column(j);
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect();
        let t_lo = targets.iter().copied().fold(f64::INFINITY, f64::min);
        let t_hi = targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            feature_ranges,
            target_range: (t_lo, t_hi),
            target_scale: c,
        })
    }

    pub fn n_features(&self) -> usize {
        self.feature_ranges.len()
    }

    /// True when feature column `j` was constant on the training rows.
    pub fn is_degenerate(&self, j: usize) -> bool {
        self.feature_ranges[j].1 <= self.feature_ranges[j].0
    }

    pub fn apply_features(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.feature_ranges.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns, scaling expects {}",
                x.ncols(),
                self.feature_ranges.len()
            )));
        }
        let mut out = x.clone();
        for j in 0..x.ncols() {
            let range = self.feature_ranges[j];
            for i in 0..x.nrows() {
                out[(i, j)] = scale_value(x[(i, j)], range, 1.0);
            }
        }
        Ok(out)
    }

    pub fn apply_features_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.feature_ranges.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values, scaling expects {}",
                x.len(),
                self.feature_ranges.len()
            )));
        }
        Ok(x.iter()
            .zip(&self.feature_ranges)
            .map(|(&v, &r)| scale_value(v, r, 1.0))
            .collect())
    }

    pub fn invert_features(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.feature_ranges.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} columns, scaling expects {}",
                x.ncols(),
                self.feature_ranges.len()
            )));
        }
        let mut out = x.clone();
        for j in 0..x.ncols() {
            let range = self.feature_ranges[j];
            for i in 0..x.nrows() {
                out[(i, j)] = unscale_value(x[(i, j)], range, 1.0);
            }
        }
        Ok(out)
    }

    pub fn apply_target(&self, y: &DVector<f64>) -> DVector<f64> {
        y.map(|v| scale_value(v, self.target_range, self.target_scale))
    }

    pub fn invert_target(&self, y: &DVector<f64>) -> DVector<f64> {
        y.map(|v| unscale_value(v, self.target_range, self.target_scale))
    }

    pub fn apply_target_value(&self, y: f64) -> f64 {
        scale_value(y, self.target_range, self.target_scale)
    }

    pub fn invert_target_value(&self, y: f64) -> f64 {
        unscale_value(y, self.target_range, self.target_scale)
    }
}

/// Calendar pseudo-features derived from a timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalendarFeatures {
    /// 0–23.
    pub hour: u32,
    /// 0–6, Monday = 0.
    pub day_of_week: u32,
    /// 1–4.
    pub quarter: u32,
    /// 1–12.
    pub month: u32,
    pub year: i32,
    /// 1–366.
    pub day_of_year: u32,
    /// 1–31.
    pub day_of_month: u32,
    /// ISO-8601 week number, 1–53.
    pub week_of_year: u32,
}

/// Column names matching [`CalendarFeatures::to_vec`] order.
pub const CALENDAR_FEATURE_NAMES: [&str; 8] = [
    "hour",
    "day_of_week",
    "quarter",
    "month",
    "year",
    "day_of_year",
    "day_of_month",
    "week_of_year",
];

impl CalendarFeatures {
    pub fn to_vec(self) -> Vec<f64> {
        vec![
            self.hour as f64,
            self.day_of_week as f64,
            self.quarter as f64,
            self.month as f64,
            self.year as f64,
            self.day_of_year as f64,
            self.day_of_month as f64,
            self.week_of_year as f64,
        ]
    }
}

/// The eight calendar pseudo-features of a timestamp.
pub fn calendar_features(t: NaiveDateTime) -> CalendarFeatures {
    let date = t.date();
    CalendarFeatures {
        hour: t.hour(),
        day_of_week: date.weekday().num_days_from_monday(),
        quarter: (date.month() - 1) / 3 + 1,
        month: date.month(),
        year: date.year(),
        day_of_year: date.ordinal(),
        day_of_month: date.day(),
        week_of_year: date.iso_week().week(),
    }
}

/// CSV parsing options.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsvLoadOptions {
    /// chrono format string for the timestamp column.
    pub timestamp_format: String,
}

impl Default for CsvLoadOptions {
    fn default() -> Self {
        Self {
            timestamp_format: DEFAULT_TIMESTAMP_FORMAT.to_string(),
        }
    }
}

/// Loads a UTF-8, comma-separated, header-row CSV into a [`Dataset`].
///
/// All columns other than `target_column` and the optional timestamp column
/// become features, in header order. Row numbers in errors are 1-based data
/// rows (the header is row 0).
pub fn load_csv(
    path: impl AsRef<Path>,
    target_column: &str,
    timestamp_column: Option<&str>,
    options: &CsvLoadOptions,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path.as_ref())?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if headers.is_empty() {
        return Err(Error::EmptyData("CSV has no header row".into()));
    }
    let target_idx = headers
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| Error::MissingColumn(target_column.to_string()))?;
    let ts_idx = match timestamp_column {
        Some(name) => Some(
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))?,
        ),
        None => None,
    };
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&j| j != target_idx && Some(j) != ts_idx)
        .collect();
    let feature_names: Vec<String> = feature_cols.iter().map(|&j| headers[j].clone()).collect();

    let parse_number = |cell: &str, row: usize, col: usize| -> Result<f64> {
        let v: f64 = cell.trim().parse().map_err(|_| Error::BadCell {
            row,
            column: headers[col].clone(),
            message: format!("cannot parse '{cell}' as a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::BadCell {
                row,
                column: headers[col].clone(),
                message: format!("non-finite value '{cell}'"),
            });
        }
        Ok(v)
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut targets: Vec<f64> = Vec::new();
    let mut timestamps: Vec<NaiveDateTime> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        if record.len() != headers.len() {
            return Err(Error::BadCell {
                row,
                column: String::new(),
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        let mut feats = Vec::with_capacity(feature_cols.len());
        for &j in &feature_cols {
            feats.push(parse_number(&record[j], row, j)?);
        }
        rows.push(feats);
        targets.push(parse_number(&record[target_idx], row, target_idx)?);
        if let Some(j) = ts_idx {
            let cell = record[j].trim();
            let t = NaiveDateTime::parse_from_str(cell, &options.timestamp_format).map_err(
                |e| Error::BadCell {
                    row,
                    column: headers[j].clone(),
                    message: format!("cannot parse timestamp '{cell}': {e}"),
                },
            )?;
            timestamps.push(t);
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyData("CSV has no data rows".into()));
    }
    let n = rows.len();
    let d = feature_cols.len();
    let features = DMatrix::from_fn(n, d, |i, j| rows[i][j]);
    Dataset::new(
        feature_names,
        features,
        Some(DVector::from_vec(targets)),
        ts_idx.map(|_| timestamps),
    )
}

/// Writes a dataset back out as CSV (timestamp column first when present,
/// then features, then the target).
pub fn write_csv(
    ds: &Dataset,
    path: impl AsRef<Path>,
    target_name: &str,
    timestamp_name: &str,
    options: &CsvLoadOptions,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    let mut header: Vec<String> = Vec::new();
    if ds.timestamps.is_some() {
        header.push(timestamp_name.to_string());
    }
    header.extend(ds.feature_names.iter().cloned());
    if ds.targets.is_some() {
        header.push(target_name.to_string());
    }
    writer.write_record(&header)?;
    for i in 0..ds.n_rows() {
        let mut record: Vec<String> = Vec::new();
        if let Some(ts) = &ds.timestamps {
            record.push(ts[i].format(&options.timestamp_format).to_string());
        }
        for j in 0..ds.n_features() {
            record.push(format_float(ds.features[(i, j)]));
        }
        if let Some(t) = &ds.targets {
            record.push(format_float(t[i]));
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

fn format_float(v: f64) -> String {
    // Shortest representation that round-trips exactly.
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Train/test split policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    Chronological,
    Random { seed: u64 },
}

/// Splits into (first, second) parts; the first receives
/// `floor(N · fraction)` rows. Both sides must be non-empty.
pub fn split(ds: &Dataset, fraction: f64, mode: SplitMode) -> Result<(Dataset, Dataset)> {
    let n = ds.n_rows();
    if n < 2 {
        return Err(Error::EmptyData("need at least 2 rows to split".into()));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "split fraction must be in (0, 1), got {fraction}"
        )));
    }
    let n_first = (n as f64 * fraction).floor() as usize;
    if n_first == 0 || n_first == n {
        return Err(Error::InvalidConfig(format!(
            "fraction {fraction} leaves an empty side for N={n}"
        )));
    }
    let (first_idx, second_idx): (Vec<usize>, Vec<usize>) = match mode {
        SplitMode::Chronological => ((0..n_first).collect(), (n_first..n).collect()),
        SplitMode::Random { seed } => {
            let mut order: Vec<usize> = (0..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
            let mut first: Vec<usize> = order[..n_first].to_vec();
            let mut second: Vec<usize> = order[n_first..].to_vec();
            // Keep row order within each side.
            first.sort_unstable();
            second.sort_unstable();
            (first, second)
        }
    };
    Ok((ds.subset(&first_idx), ds.subset(&second_idx)))
}

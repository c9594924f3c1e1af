//! Verification reports and their CSV / JSON forms.
//!
//! Floats are written in shortest round-trip form, so emit → parse → emit is
//! byte-identical in both formats. Counts and dilations are exact strings.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{format_rational, parse_rational};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "t",
    "count",
    "main_term",
    "discrepancy",
    "bound_total",
    "bound_valid",
    "ratio",
    "elapsed_ms",
];

/// One dilation of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub t: BigRational,
    #[serde(serialize_with = "ser_bigint", deserialize_with = "de_bigint")]
    pub count: BigInt,
    #[serde(with = "float_repr")]
    pub main_term: f64,
    #[serde(with = "float_repr")]
    pub discrepancy: f64,
    #[serde(with = "float_repr")]
    pub bound_total: f64,
    pub bound_valid: bool,
    /// `|discrepancy| / bound_total`.
    #[serde(with = "float_repr")]
    pub ratio: f64,
    pub elapsed_ms: f64,
}

/// Aggregates over the rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    /// Largest ratio among certified rows; `None` when no row is certified.
    pub max_ratio_in_validity_range: Option<f64>,
    /// Dilations of certified rows with ratio above 1.
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    pub violations: Vec<BigRational>,
    pub total_runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rows: Vec<VerificationRow>,
    pub summary: ReportSummary,
}

/// Output format of [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Parse(format!("unknown report format {other:?}"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

impl VerificationRow {
    pub fn new(
        t: BigRational,
        count: BigInt,
        main_term: f64,
        discrepancy: f64,
        bound_total: f64,
        bound_valid: bool,
        elapsed_ms: f64,
    ) -> Self {
        let ratio = discrepancy.abs() / bound_total;
        VerificationRow { t, count, main_term, discrepancy, bound_total, bound_valid, ratio, elapsed_ms }
    }

    pub fn is_violation(&self) -> bool {
        self.bound_valid && !(self.ratio <= 1.0)
    }
}

impl VerificationReport {
    /// Builds the summary from rows already sorted by `t`.
    pub fn from_rows(rows: Vec<VerificationRow>, total_runtime_ms: f64) -> Self {
        let max_ratio_in_validity_range = rows
            .iter()
            .filter(|r| r.bound_valid)
            .map(|r| r.ratio)
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
        let violations = rows.iter().filter(|r| r.is_violation()).map(|r| r.t.clone()).collect();
        VerificationReport {
            rows,
            summary: ReportSummary { max_ratio_in_validity_range, violations, total_runtime_ms },
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(CSV_HEADER)?;
        for r in &self.rows {
            writer.write_record([
                format_rational(&r.t),
                r.count.to_string(),
                r.main_term.to_string(),
                r.discrepancy.to_string(),
                r.bound_total.to_string(),
                r.bound_valid.to_string(),
                r.ratio.to_string(),
                format!("{:.3}", r.elapsed_ms),
            ])?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV fields are ASCII"))
    }

    /// Parses [`VerificationReport::to_csv`] output. The runtime total is
    /// rebuilt from the elapsed column.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
        if header != CSV_HEADER {
            return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let field = |i: usize| record.get(i).expect("header checked");
            let float = |i: usize| -> Result<f64> {
                field(i).parse().map_err(|_| Error::Parse(format!("bad number {:?}", field(i))))
            };
            rows.push(VerificationRow {
                t: parse_rational(field(0))?,
                count: field(1).parse().map_err(|_| Error::Parse(format!("bad count {:?}", field(1))))?,
                main_term: float(2)?,
                discrepancy: float(3)?,
                bound_total: float(4)?,
                bound_valid: field(5).parse().map_err(|_| Error::Parse(format!("bad flag {:?}", field(5))))?,
                ratio: float(6)?,
                elapsed_ms: float(7)?,
            });
        }
        let total = rows.iter().map(|r| r.elapsed_ms).sum();
        Ok(VerificationReport::from_rows(rows, total))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }
}

/// Writes the report to `path` in the given format.
pub fn emit_report(report: &VerificationReport, format: ReportFormat, path: &Path) -> Result<()> {
    fs::write(path, report.render(format)?)?;
    Ok(())
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    let text = String::deserialize(d)?;
    parse_rational(&text).map_err(serde::de::Error::custom)
}

fn ser_rationals<S: Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}

fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
        .collect()
}

fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn de_bigint<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
}

/// Finite floats as JSON numbers, non-finite ones as `"inf"`, `"-inf"`, `"NaN"`.
mod float_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

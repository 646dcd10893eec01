//! Flat, deterministic report records and their CSV, JSON and text writers.
//!
//! Floats are rounded to 12 significant digits (ties to even) before they are
//! written, so identical inputs give byte-identical output.

use std::io::{self, Write};

use serde::Serialize;

use crate::family::FamilySpec;
use crate::indices::{IndexError, VerificationReport, VerifyTarget};

pub const SIG_DIGITS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Formats `x` with 12 significant digits, `%g` style: plain decimal for
/// moderate exponents, scientific otherwise, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

fn rounded(x: &Option<f64>) -> Option<f64> {
    x.map(round_sig)
}

/// One verification outcome as a flat record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub family: String,
    /// `name=value` pairs joined by `;`.
    pub params: String,
    pub index: String,
    pub formula_value: Option<f64>,
    pub oracle_value: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    pub tol: f64,
    /// `match`, `mismatch` or `error`.
    pub verdict: String,
    pub note: String,
}

fn params_field(spec: &FamilySpec) -> String {
    let mut parts: Vec<String> = spec
        .family()
        .param_names()
        .iter()
        .zip(spec.params())
        .map(|(name, v)| format!("{name}={v}"))
        .collect();
    if let Some(g) = spec.graph_param() {
        parts.push(format!("g={}", crate::family::graph_token(g)));
    }
    parts.join(";")
}

impl ReportRecord {
    pub fn from_report(r: &VerificationReport) -> Self {
        Self {
            family: r.spec.family().name().to_string(),
            params: params_field(&r.spec),
            index: r.target.name().to_string(),
            formula_value: rounded(&Some(r.formula_value)),
            oracle_value: rounded(&Some(r.oracle_value)),
            abs_diff: rounded(&Some(r.abs_diff)),
            rel_diff: rounded(&Some(r.rel_diff)),
            tol: r.tol,
            verdict: r.verdict.name().to_string(),
            note: r.note.clone().unwrap_or_default(),
        }
    }

    /// A row for a tuple whose comparison could not be carried out.
    pub fn from_error(spec: &FamilySpec, target: VerifyTarget, tol: f64, err: &IndexError) -> Self {
        Self {
            family: spec.family().name().to_string(),
            params: params_field(spec),
            index: target.name().to_string(),
            formula_value: None,
            oracle_value: None,
            abs_diff: None,
            rel_diff: None,
            tol,
            verdict: "error".to_string(),
            note: err.to_string(),
        }
    }

    pub fn from_result(
        spec: &FamilySpec,
        target: VerifyTarget,
        tol: f64,
        result: &Result<VerificationReport, IndexError>,
    ) -> Self {
        match result {
            Ok(r) => Self::from_report(r),
            Err(e) => Self::from_error(spec, target, tol, e),
        }
    }
}

/// Verdict counts over a batch of records.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub errors: usize,
    pub max_abs_diff: f64,
}

impl Summary {
    pub fn of(records: &[ReportRecord]) -> Self {
        let mut s = Summary { total: records.len(), ..Default::default() };
        for r in records {
            match r.verdict.as_str() {
                "match" => s.matches += 1,
                "mismatch" => s.mismatches += 1,
                _ => s.errors += 1,
            }
            if let Some(d) = r.abs_diff {
                s.max_abs_diff = s.max_abs_diff.max(d);
            }
        }
        s
    }

    pub fn line(&self) -> String {
        format!(
            "total={} match={} mismatch={} error={} max_abs_diff={}",
            self.total,
            self.matches,
            self.mismatches,
            self.errors,
            fmt_sig(self.max_abs_diff)
        )
    }
}

/// Writes rows as CSV with a header row and LF line endings.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes rows as a pretty-printed JSON array followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, rows: &[T]) -> Result<(), ReportError> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Writes records as aligned whitespace-separated columns.
pub fn write_text<W: Write>(mut out: W, records: &[ReportRecord]) -> Result<(), ReportError> {
    let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), fmt_sig);
    let header = ["family", "params", "index", "formula", "oracle", "abs_diff", "rel_diff", "verdict", "note"];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.family.clone(),
                r.params.clone(),
                r.index.clone(),
                opt(r.formula_value),
                opt(r.oracle_value),
                opt(r.abs_diff),
                opt(r.rel_diff),
                r.verdict.clone(),
                r.note.clone(),
            ]
        })
        .collect();
    write_table(&mut out, &header, &rows)
}

/// Writes a left-aligned table with two spaces between columns.
pub fn write_table<W: Write>(mut out: W, header: &[&str], rows: &[Vec<String>]) -> Result<(), ReportError> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut line = |cells: Vec<&str>| -> io::Result<()> {
        let joined: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", joined.join("  ").trim_end())
    };
    line(header.to_vec())?;
    for row in rows {
        line(row.iter().map(String::as_str).collect())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::{verify, IndexKind};

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(28.0 / 3.0), "9.33333333333");
        assert_eq!(fmt_sig(19.0 / 3.0), "6.33333333333");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_sig(4.0), "4");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1e-20), "1e-20");
        assert_eq!(fmt_sig(1.5e-12), "1.5e-12");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_sig(0.00012), "0.00012");
        assert_eq!(fmt_sig(f64::NAN), "NaN");
    }

    #[test]
    fn ties_round_to_even() {
        // Exact integers with a 5 in the 13th significant digit.
        assert_eq!(fmt_sig(1000000000005.0), "1e12");
        assert_eq!(fmt_sig(1000000000015.0), "1.00000000002e12");
        assert_eq!(fmt_sig(0.5 + 2f64.powi(-40)), "0.500000000001");
    }

    #[test]
    fn csv_and_json_are_stable() {
        let spec = "pineapple:p=3,q=1".parse().unwrap();
        let rep = verify(VerifyTarget::Index(IndexKind::Kirchhoff), &spec, 1e-9).unwrap();
        let rec = ReportRecord::from_report(&rep);
        assert_eq!(rec.params, "p=3;q=1");
        let mut csv_out = Vec::new();
        write_csv(&mut csv_out, std::slice::from_ref(&rec)).unwrap();
        let text = String::from_utf8(csv_out).unwrap();
        assert_eq!(
            text,
            "family,params,index,formula_value,oracle_value,abs_diff,rel_diff,tol,verdict,note\n\
             pineapple,p=3;q=1,kirchhoff,9.66666666667,6.33333333333,3.33333333333,0.526315789474,1e-9,mismatch,\n"
        );
        let mut json_out = Vec::new();
        write_json(&mut json_out, std::slice::from_ref(&rec)).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json_out).unwrap();
        assert_eq!(v[0]["formula_value"], serde_json::json!(9.66666666667));
        assert_eq!(v[0]["verdict"], "mismatch");
    }

    #[test]
    fn summary_counts() {
        let spec: FamilySpec = "kcoal:p1=3,p2=2,k=1".parse().unwrap();
        let ok = verify(VerifyTarget::Resistance, &spec, 1e-9).unwrap();
        let bad = verify(VerifyTarget::Index(IndexKind::Kirchhoff), &spec, 1e-9).unwrap();
        let err = ReportRecord::from_error(&spec, VerifyTarget::Resistance, 1e-9, &IndexError::NoEdges);
        let recs = vec![ReportRecord::from_report(&ok), ReportRecord::from_report(&bad), err];
        let s = Summary::of(&recs);
        assert_eq!((s.total, s.matches, s.mismatches, s.errors), (3, 1, 1, 1));
        assert_eq!(s.max_abs_diff, 1.0);
    }
}

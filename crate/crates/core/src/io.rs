//! File formats: quadrature-rule and grid dumps, sample CSV files,
//! coefficient JSON, verification reports and frame decompositions.
//!
//! Every float is written with 17 significant digits (`{:.16e}`) and every
//! collection in canonical order, so identical inputs give identical bytes.
//! Ring indices `k` in files are one-based, azimuth indices `j` zero-based.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frames::{Decomposition, FrameCoefficients};
use crate::grid::{SampleVector, SphericalGrid};
use crate::harmonics::{coeff_len, HarmonicIndex};
use crate::legendre::QuadratureRule;
use crate::transform::CoeffVector;

/// 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_string(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// `k,lambda,weight`.
pub fn rule_csv(rule: &QuadratureRule) -> String {
    csv_string(
        &["k", "lambda", "weight"],
        rule.nodes()
            .iter()
            .zip(rule.weights())
            .enumerate()
            .map(|(k, (x, w))| vec![(k + 1).to_string(), format_f64(*x), format_f64(*w)]),
    )
}

/// `k,j,theta,phi,weight` in canonical node order.
pub fn grid_csv(grid: &SphericalGrid) -> String {
    csv_string(
        &["k", "j", "theta", "phi", "weight"],
        (0..grid.len()).map(|i| {
            let (ring, j) = grid.node_position(i);
            vec![
                (ring + 1).to_string(),
                j.to_string(),
                format_f64(grid.thetas()[ring]),
                format_f64(grid.phis()[j]),
                format_f64(grid.weight(i)),
            ]
        }),
    )
}

fn node_value_rows<'a>(ring_len: usize, values: &'a [Complex64]) -> impl Iterator<Item = Vec<String>> + 'a {
    values.iter().enumerate().map(move |(i, v)| {
        vec![
            (i / ring_len + 1).to_string(),
            (i % ring_len).to_string(),
            format_f64(v.re),
            format_f64(v.im),
        ]
    })
}

/// `k,j,re,im` in canonical node order.
pub fn samples_csv(samples: &SampleVector) -> String {
    let ring_len = 2 * samples.grid_degree() + 1;
    csv_string(&["k", "j", "re", "im"], node_value_rows(ring_len, samples.values()))
}

/// Parses a `k,j,re,im` file for a degree-`n` grid. Rows may come in any
/// order but every node must appear exactly once.
pub fn parse_samples_csv(text: &str, n: usize) -> Result<SampleVector> {
    let ring_len = 2 * n + 1;
    let total = n * ring_len;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != ["k", "j", "re", "im"] {
        return Err(Error::Parse(format!(
            "expected header k,j,re,im, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut values: Vec<Option<Complex64>> = vec![None; total];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |i: usize| {
            record
                .get(i)
                .ok_or_else(|| Error::Parse(format!("row {}: missing column {i}", line + 1)))
        };
        let k: usize = field(0)?
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad k", line + 1)))?;
        let j: usize = field(1)?
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad j", line + 1)))?;
        let re: f64 = field(2)?
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad re", line + 1)))?;
        let im: f64 = field(3)?
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad im", line + 1)))?;
        if k == 0 || k > n || j >= ring_len {
            return Err(Error::Parse(format!(
                "row {}: node ({k}, {j}) outside the degree-{n} grid",
                line + 1
            )));
        }
        let slot = &mut values[(k - 1) * ring_len + j];
        if slot.is_some() {
            return Err(Error::Parse(format!("duplicate node ({k}, {j})")));
        }
        *slot = Some(Complex64::new(re, im));
    }
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::Parse(format!("{missing} of {total} nodes missing")));
    }
    SampleVector::new(n, values.into_iter().map(|v| v.expect("checked")).collect())
}

/// `{"max_degree": m, "entries": [[n, k, re, im], ...]}` in flat order.
pub fn coeffs_json(coeffs: &CoeffVector) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"max_degree\": {},\n  \"entries\": [", coeffs.max_degree());
    for (flat, value) in coeffs.entries().iter().enumerate() {
        let idx = HarmonicIndex::from_flat(flat);
        let sep = if flat == 0 { "" } else { "," };
        let _ = write!(
            out,
            "{sep}\n    [{}, {}, {}, {}]",
            idx.degree(),
            idx.order(),
            format_f64(value.re),
            format_f64(value.im)
        );
    }
    out.push_str("\n  ]\n}\n");
    out
}

/// Parses a coefficient file; entries must be in flat order without gaps
/// or duplicates.
pub fn parse_coeffs_json(text: &str) -> Result<CoeffVector> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let max_degree = root
        .get("max_degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer max_degree".into()))? as usize;
    let entries = root
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing entries array".into()))?;
    if entries.len() != coeff_len(max_degree) {
        return Err(Error::Parse(format!(
            "expected {} entries for max_degree {max_degree}, found {}",
            coeff_len(max_degree),
            entries.len()
        )));
    }
    let mut values = Vec::with_capacity(entries.len());
    for (flat, entry) in entries.iter().enumerate() {
        let row = entry
            .as_array()
            .filter(|r| r.len() == 4)
            .ok_or_else(|| Error::Parse(format!("entry {flat} is not [n, k, re, im]")))?;
        let n = row[0]
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("entry {flat}: bad n")))? as usize;
        let k = row[1]
            .as_i64()
            .ok_or_else(|| Error::Parse(format!("entry {flat}: bad k")))?;
        let idx = HarmonicIndex::new(n, k).map_err(|e| Error::Parse(format!("entry {flat}: {e}")))?;
        if idx.flat() != flat {
            return Err(Error::Parse(format!(
                "entry {flat} is ({n}, {k}); entries must be sorted by flat index without gaps or duplicates"
            )));
        }
        let re = row[2]
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("entry {flat}: bad re")))?;
        let im = row[3]
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("entry {flat}: bad im")))?;
        values.push(Complex64::new(re, im));
    }
    CoeffVector::new(max_degree, values)
}

/// Gram-identity verification summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub grid_degree: usize,
    pub max_degree: usize,
    pub gram_residual: f64,
    pub roundtrip_error: f64,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"N\": {}, \"m\": {}, \"gram_residual\": {}, \"roundtrip_error\": {}}}\n",
            self.grid_degree,
            self.max_degree,
            format_f64(self.gram_residual),
            format_f64(self.roundtrip_error)
        )
    }

    pub fn to_csv(&self) -> String {
        csv_string(
            &["N", "m", "gram_residual", "roundtrip_error"],
            std::iter::once(vec![
                self.grid_degree.to_string(),
                self.max_degree.to_string(),
                format_f64(self.gram_residual),
                format_f64(self.roundtrip_error),
            ]),
        )
    }
}

fn frame_values_json(out: &mut String, coeffs: &FrameCoefficients) {
    let ring_len = 2 * coeffs.grid_degree() + 1;
    out.push('[');
    for (i, row) in node_value_rows(ring_len, coeffs.values()).enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(out, "{sep}\n        [{}, {}, {}, {}]", row[0], row[1], row[2], row[3]);
    }
    out.push_str("\n      ]");
}

/// `{"levels": [{"j", "m_j", "frame_coeffs", "wavelet_coeffs"?}, ...],
/// "residual_norm", "reconstruction_error", "telescoping_error"}`.
pub fn decomposition_json(decomposition: &Decomposition) -> String {
    let mut out = String::from("{\n  \"levels\": [");
    for (i, level) in decomposition.levels.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(
            out,
            "{sep}\n    {{\n      \"j\": {},\n      \"m_j\": {},\n      \"frame_coeffs\": ",
            level.level, level.cutoff
        );
        frame_values_json(&mut out, &level.scaling);
        if let Some(wavelet) = &level.wavelet {
            out.push_str(",\n      \"wavelet_coeffs\": ");
            frame_values_json(&mut out, wavelet);
        }
        out.push_str("\n    }");
    }
    let _ = write!(
        out,
        "\n  ],\n  \"residual_norm\": {},\n  \"reconstruction_error\": {},\n  \"telescoping_error\": {}\n}}\n",
        format_f64(decomposition.residual_norm),
        format_f64(decomposition.reconstruction_error),
        format_f64(decomposition.telescoping_error)
    );
    out
}

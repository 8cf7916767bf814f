//! Line-oriented field files.
//!
//! ```text
//! # comment
//! lambda 1.5
//! kind sharp_deformation
//! 0 0
//! 0.375 0.25
//! ...
//! ```
//!
//! The body lists knot/value pairs: piece starts and values for a sharp
//! `H`, knots and values for a sharp `h`, nodes and samples for grid
//! fields. Numbers are written in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::regularized::{DiscreteField, FieldKind};
use crate::sharp::{PiecewiseConstantField, PiecewiseLinearField};

#[derive(Debug, Clone, PartialEq)]
pub enum FieldFile {
    SharpStretch(PiecewiseConstantField),
    SharpDeformation(PiecewiseLinearField),
    Grid(DiscreteField),
}

impl FieldFile {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FieldFile::SharpStretch(_) => "sharp_stretch",
            FieldFile::SharpDeformation(_) => "sharp_deformation",
            FieldFile::Grid(f) => match f.kind() {
                FieldKind::InverseStretch => "inverse_stretch",
                FieldKind::InverseDeformation => "inverse_deformation",
            },
        }
    }

    pub fn domain_length(&self) -> f64 {
        match self {
            FieldFile::SharpStretch(f) => f.domain_length(),
            FieldFile::SharpDeformation(f) => f.domain_length(),
            FieldFile::Grid(f) => f.domain_length(),
        }
    }

    fn pairs(&self) -> Vec<(f64, f64)> {
        match self {
            FieldFile::SharpStretch(f) => std::iter::once(0.0)
                .chain(f.breakpoints().iter().copied())
                .zip(f.values().iter().copied())
                .collect(),
            FieldFile::SharpDeformation(f) => f
                .knots()
                .iter()
                .copied()
                .zip(f.knot_values().iter().copied())
                .collect(),
            FieldFile::Grid(f) => (0..f.values().len()).map(|j| (f.node(j), f.values()[j])).collect(),
        }
    }
}

pub fn render_field(field: &FieldFile) -> String {
    let mut out = String::new();
    writeln!(out, "lambda {}", field.domain_length()).unwrap();
    writeln!(out, "kind {}", field.kind_name()).unwrap();
    for (y, v) in field.pairs() {
        writeln!(out, "{y} {v}").unwrap();
    }
    out
}

pub fn write_field(path: &Path, field: &FieldFile) -> Result<()> {
    std::fs::write(path, render_field(field))?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<FieldFile> {
    parse_field(&std::fs::read_to_string(path)?)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_err(line, format!("expected a finite number, got {token:?}")))
}

pub fn parse_field(text: &str) -> Result<FieldFile> {
    let mut lambda = None;
    let mut kind = None;
    let mut knots = Vec::new();
    let mut values = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["lambda", v] => {
                if lambda.is_some() {
                    return Err(parse_err(line, "duplicate lambda"));
                }
                lambda = Some(number(v, line)?);
            }
            ["kind", k] => {
                if kind.is_some() {
                    return Err(parse_err(line, "duplicate kind"));
                }
                kind = Some((k.to_string(), line));
            }
            [y, v] => {
                if lambda.is_none() || kind.is_none() {
                    return Err(parse_err(line, "data before the lambda/kind header"));
                }
                knots.push(number(y, line)?);
                values.push(number(v, line)?);
            }
            _ => return Err(parse_err(line, format!("expected two fields, got {content:?}"))),
        }
    }
    let lambda = lambda.ok_or_else(|| parse_err(last_line, "missing lambda"))?;
    let (kind, kind_line) = kind.ok_or_else(|| parse_err(last_line, "missing kind"))?;
    let wrap = |e: Error| match e {
        Error::Domain(m) => parse_err(kind_line, m),
        other => other,
    };
    match kind.as_str() {
        "sharp_stretch" => {
            if knots.first() != Some(&0.0) {
                return Err(parse_err(kind_line, "a sharp stretch must start at 0"));
            }
            let field = PiecewiseConstantField::new(lambda, knots[1..].to_vec(), values).map_err(wrap)?;
            Ok(FieldFile::SharpStretch(field))
        }
        "sharp_deformation" => {
            let field = PiecewiseLinearField::new(knots, values).map_err(wrap)?;
            if (field.domain_length() - lambda).abs() > 1e-12 * lambda {
                return Err(parse_err(kind_line, "last knot does not match lambda"));
            }
            Ok(FieldFile::SharpDeformation(field))
        }
        "inverse_stretch" | "inverse_deformation" => {
            let field_kind = if kind == "inverse_stretch" {
                FieldKind::InverseStretch
            } else {
                FieldKind::InverseDeformation
            };
            let n = knots.len().saturating_sub(1).max(1);
            let dy = lambda / n as f64;
            for (j, y) in knots.iter().enumerate() {
                if (y - j as f64 * dy).abs() > 1e-9 * lambda {
                    return Err(parse_err(kind_line, format!("node {j} at {y} is off the uniform grid")));
                }
            }
            Ok(FieldFile::Grid(DiscreteField::new(field_kind, lambda, values).map_err(wrap)?))
        }
        other => Err(parse_err(kind_line, format!("unknown field kind {other:?}"))),
    }
}

//! Plain-text serialization of joint distributions.
//!
//! A file is a header line `axes: label:role:cardinality,...` followed by one
//! probability per line in canonical (row-major) state order. Blank lines and
//! lines starting with `#` are skipped anywhere.

use std::fmt::Write as _;

use crate::dist::JointDistribution;
use crate::error::{DistError, Result};
use crate::space::{Axis, ProductSpace, Role};

/// How strictly parsed input is validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// Entries must be strictly positive and sum to 1 within 1e-9.
    Strict,
    /// Nonnegative entries are floored at 1e-12 and the vector is rescaled.
    Renormalize,
}

/// Sum slack accepted by [`ParseMode::Strict`]; looser than the construction
/// tolerance because the text round trip itself rounds.
const STRICT_SUM_TOL: f64 = 1e-9;

fn parse_err(line: usize, msg: impl Into<String>) -> DistError {
    DistError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_axis(line_no: usize, field: &str) -> Result<Axis> {
    let parts: Vec<&str> = field.split(':').collect();
    if parts.len() != 3 {
        return Err(parse_err(
            line_no,
            format!("axis `{field}` is not label:role:cardinality"),
        ));
    }
    let label = parts[0].trim();
    if label.is_empty() {
        return Err(parse_err(line_no, "empty axis label"));
    }
    let role = Role::parse(parts[1].trim())
        .ok_or_else(|| parse_err(line_no, format!("unknown role `{}`", parts[1].trim())))?;
    let card: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, format!("bad cardinality `{}`", parts[2].trim())))?;
    Ok(Axis::new(label, role, card))
}

/// Parses a distribution from text. Line numbers in errors are 1-based and
/// count every physical line, comments included.
pub fn parse_distribution(text: &str, mode: ParseMode) -> Result<JointDistribution> {
    let mut space: Option<ProductSpace> = None;
    let mut probs: Vec<f64> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match &space {
            None => {
                let rest = line
                    .strip_prefix("axes:")
                    .ok_or_else(|| parse_err(line_no, "expected `axes:` header"))?;
                let axes = rest
                    .split(',')
                    .map(|f| parse_axis(line_no, f.trim()))
                    .collect::<Result<Vec<_>>>()?;
                space = Some(ProductSpace::new(axes)?);
                probs.reserve(space.as_ref().unwrap().len());
            }
            Some(sp) => {
                if probs.len() == sp.len() {
                    return Err(parse_err(
                        line_no,
                        format!("more than {} probability lines", sp.len()),
                    ));
                }
                let v: f64 = line
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad probability `{line}`")))?;
                if !v.is_finite() {
                    return Err(parse_err(line_no, format!("non-finite probability `{line}`")));
                }
                probs.push(v);
            }
        }
    }
    let space = space.ok_or_else(|| parse_err(last_line + 1, "missing `axes:` header"))?;
    if probs.len() != space.len() {
        return Err(parse_err(
            last_line + 1,
            format!("expected {} probability lines, got {}", space.len(), probs.len()),
        ));
    }
    match mode {
        ParseMode::Strict => {
            let sum: f64 = probs.iter().sum();
            if (sum - 1.0).abs() > STRICT_SUM_TOL {
                return Err(DistError::NotNormalized { sum });
            }
            JointDistribution::new_normalized(space, probs)
        }
        ParseMode::Renormalize => JointDistribution::with_floor(space, probs),
    }
}

/// Formats a distribution in the text format. Probabilities are printed as
/// shortest round-trip decimals, so parse(format(p)) reproduces p exactly.
pub fn format_distribution(p: &JointDistribution) -> String {
    let mut out = String::new();
    let header: Vec<String> = p
        .space()
        .axes()
        .iter()
        .map(|a| format!("{}:{}:{}", a.label, a.role.as_str(), a.card))
        .collect();
    let _ = writeln!(out, "axes: {}", header.join(","));
    for &v in p.probs() {
        let _ = writeln!(out, "{v}");
    }
    out
}

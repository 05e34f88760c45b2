use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use ising_gen::preset_weights;

use crate::error::{CliError, Result};

/// Weighted system source: a named preset or an explicit coupling matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Preset(String),
    Matrix(Vec<Vec<f64>>),
}

/// Measure columns a run can fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MeasureTag {
    I,
    Si,
    G,
    Cii,
    Cis,
    T,
}

impl MeasureTag {
    fn parse(token: &str) -> Option<MeasureTag> {
        match token.to_ascii_uppercase().as_str() {
            "I" => Some(MeasureTag::I),
            "SI" => Some(MeasureTag::Si),
            "G" => Some(MeasureTag::G),
            "CII" => Some(MeasureTag::Cii),
            "CIS" => Some(MeasureTag::Cis),
            "T" => Some(MeasureTag::T),
            _ => None,
        }
    }
}

/// Settings for one run, read from a flat `key = value` file. Coupling
/// matrices appear as comma-separated rows under a `V:` line.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: Option<SystemSpec>,
    pub beta_grid: Vec<f64>,
    pub measures: BTreeSet<MeasureTag>,
    /// Latent cardinalities, kept sorted so warm starts can grow upward.
    pub w_sizes: Vec<usize>,
    pub restarts: usize,
    pub samples: usize,
    pub seed: u64,
    pub output_path: Option<String>,
    pub ground_truth: Option<String>,
    pub em_tolerance: f64,
    pub em_max_iterations: usize,
    pub ips_tolerance: f64,
    pub ips_max_cycles: usize,
    pub cis_inner_tolerance: f64,
    pub cis_max_inner_iterations: usize,
    pub cis_multi_starts: usize,
    pub cis_residual_tolerance: f64,
    pub stationary_tolerance: f64,
    pub stationary_max_iterations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            system: None,
            beta_grid: Vec::new(),
            measures: BTreeSet::new(),
            w_sizes: Vec::new(),
            restarts: 20,
            samples: 500,
            seed: 0,
            output_path: None,
            ground_truth: None,
            em_tolerance: 1e-10,
            em_max_iterations: 10_000,
            ips_tolerance: 1e-12,
            ips_max_cycles: 50_000,
            cis_inner_tolerance: 1e-9,
            cis_max_inner_iterations: 4000,
            cis_multi_starts: 20,
            cis_residual_tolerance: 1e-7,
            stationary_tolerance: 1e-12,
            stationary_max_iterations: 1_000_000,
        }
    }
}

fn line_error(line: usize, message: &str) -> CliError {
    CliError::Config(format!("line {line}: {message}"))
}

fn parse_number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| line_error(line, &format!("{key}: cannot read '{value}'")))
}

fn split_list(value: &str) -> Vec<&str> {
    value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_float_row(line: &str) -> Option<Vec<f64>> {
    let mut row = Vec::new();
    for token in split_list(line) {
        row.push(token.parse().ok()?);
    }
    if row.is_empty() {
        None
    } else {
        Some(row)
    }
}

fn spaced_grid(start: f64, stop: f64, count: usize, spacing: &str) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(CliError::Config("beta_count: at least 1".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let steps = (count - 1) as f64;
    let mut grid: Vec<f64> = match spacing {
        "linear" => (0..count)
            .map(|k| start + (stop - start) * k as f64 / steps)
            .collect(),
        "log" => {
            if start <= 0.0 || stop <= 0.0 {
                return Err(CliError::Config(
                    "beta_spacing = log needs positive endpoints".into(),
                ));
            }
            let ratio = (stop / start).powf(1.0 / steps);
            (0..count).map(|k| start * ratio.powi(k as i32)).collect()
        }
        other => {
            return Err(CliError::Config(format!(
                "beta_spacing: '{other}' is not linear or log"
            )))
        }
    };
    *grid.last_mut().expect("count >= 2") = stop;
    Ok(grid)
}

/// Default grid per preset, spanning the range where its curves have their
/// structure.
fn preset_grid(name: &str) -> Vec<f64> {
    let pinned = match name {
        "paper-n2" => Some((0.1, 30.0, 40)),
        "paper-n3" => Some((0.1, 3.0, 40)),
        "paper-n5" => Some((0.2, 3.5, 30)),
        _ => None,
    };
    match pinned {
        Some((start, stop, count)) => {
            spaced_grid(start, stop, count, "linear").expect("pinned grid")
        }
        None => Vec::new(),
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        ExperimentConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::default();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut preset: Option<String> = None;
        let mut matrix: Option<Vec<Vec<f64>>> = None;
        let mut in_matrix = false;
        let mut grid: Option<Vec<f64>> = None;
        let mut start: Option<f64> = None;
        let mut stop: Option<f64> = None;
        let mut count: Option<usize> = None;
        let mut spacing: Option<String> = None;

        for (index, raw) in text.lines().enumerate() {
            let n = index + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if in_matrix {
                if let Some(row) = parse_float_row(line) {
                    matrix.as_mut().expect("matrix mode").push(row);
                    continue;
                }
                in_matrix = false;
            }
            if line == "V:" {
                if matrix.is_some() {
                    return Err(line_error(n, "V: given twice"));
                }
                matrix = Some(Vec::new());
                in_matrix = true;
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(line_error(n, "expected key = value"));
            };
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(line_error(n, &format!("duplicate key '{key}'")));
            }
            match key {
                "preset" => preset = Some(value.to_string()),
                "beta_grid" => {
                    let mut points = Vec::new();
                    for token in split_list(value) {
                        points.push(parse_number::<f64>(n, key, token)?);
                    }
                    grid = Some(points);
                }
                "beta_start" => start = Some(parse_number(n, key, value)?),
                "beta_stop" => stop = Some(parse_number(n, key, value)?),
                "beta_count" => count = Some(parse_number(n, key, value)?),
                "beta_spacing" => spacing = Some(value.to_string()),
                "measures" => {
                    for token in split_list(value) {
                        let tag = MeasureTag::parse(token).ok_or_else(|| {
                            line_error(
                                n,
                                &format!("measures: '{token}' is not one of I, SI, G, CII, CIS, T"),
                            )
                        })?;
                        config.measures.insert(tag);
                    }
                }
                "w_sizes" => {
                    for token in split_list(value) {
                        config.w_sizes.push(parse_number(n, key, token)?);
                    }
                }
                "restarts" => config.restarts = parse_number(n, key, value)?,
                "samples" => config.samples = parse_number(n, key, value)?,
                "seed" => config.seed = parse_number(n, key, value)?,
                "output_path" => config.output_path = Some(value.to_string()),
                "ground_truth" => config.ground_truth = Some(value.to_string()),
                "em_tolerance" => config.em_tolerance = parse_number(n, key, value)?,
                "em_max_iterations" => config.em_max_iterations = parse_number(n, key, value)?,
                "ips_tolerance" => config.ips_tolerance = parse_number(n, key, value)?,
                "ips_max_cycles" => config.ips_max_cycles = parse_number(n, key, value)?,
                "cis_inner_tolerance" => config.cis_inner_tolerance = parse_number(n, key, value)?,
                "cis_max_inner_iterations" => {
                    config.cis_max_inner_iterations = parse_number(n, key, value)?
                }
                "cis_multi_starts" => config.cis_multi_starts = parse_number(n, key, value)?,
                "cis_residual_tolerance" => {
                    config.cis_residual_tolerance = parse_number(n, key, value)?
                }
                "stationary_tolerance" => {
                    config.stationary_tolerance = parse_number(n, key, value)?
                }
                "stationary_max_iterations" => {
                    config.stationary_max_iterations = parse_number(n, key, value)?
                }
                _ => return Err(line_error(n, &format!("unknown key '{key}'"))),
            }
        }

        config.system = match (preset, matrix) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either preset or a V: block, not both".into(),
                ))
            }
            (Some(name), None) => {
                preset_weights(&name).map_err(|e| CliError::Config(e.to_string()))?;
                Some(SystemSpec::Preset(name))
            }
            (None, Some(rows)) => {
                validate_matrix(&rows)?;
                Some(SystemSpec::Matrix(rows))
            }
            (None, None) => None,
        };

        let spaced = start.is_some() || stop.is_some() || count.is_some() || spacing.is_some();
        config.beta_grid = match (grid, spaced) {
            (Some(_), true) => {
                return Err(CliError::Config(
                    "beta_grid conflicts with beta_start/beta_stop/beta_count".into(),
                ))
            }
            (Some(points), false) => {
                if points.iter().any(|b| !b.is_finite()) {
                    return Err(CliError::Config("beta_grid: every point must be finite".into()));
                }
                points
            }
            (None, true) => {
                let (Some(a), Some(b), Some(c)) = (start, stop, count) else {
                    return Err(CliError::Config(
                        "beta_start, beta_stop and beta_count go together".into(),
                    ));
                };
                if !a.is_finite() || !b.is_finite() {
                    return Err(CliError::Config("beta endpoints must be finite".into()));
                }
                spaced_grid(a, b, c, spacing.as_deref().unwrap_or("linear"))?
            }
            (None, false) => match &config.system {
                Some(SystemSpec::Preset(name)) => preset_grid(name),
                _ => Vec::new(),
            },
        };

        config.w_sizes.sort_unstable();
        if config.w_sizes.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("w_sizes: duplicate entry".into()));
        }
        if config.w_sizes.first() == Some(&0) {
            return Err(CliError::Config("w_sizes: every size must be at least 1".into()));
        }
        Ok(config)
    }

    /// Coupling matrix of the configured system.
    pub fn system_weights(&self) -> Result<Vec<Vec<f64>>> {
        match &self.system {
            Some(SystemSpec::Preset(name)) => {
                preset_weights(name).map_err(|e| CliError::Config(e.to_string()))
            }
            Some(SystemSpec::Matrix(rows)) => Ok(rows.clone()),
            None => Err(CliError::Config(
                "a system is required: give preset or a V: block".into(),
            )),
        }
    }
}

fn validate_matrix(rows: &[Vec<f64>]) -> Result<()> {
    if rows.is_empty() {
        return Err(CliError::Config("V: block holds no rows".into()));
    }
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CliError::Config(format!(
                "V: row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("V: row {} has a non-finite entry", i + 1)));
        }
    }
    Ok(())
}

/// Splits one configured seed into independent per-job streams.
pub(crate) fn mix_seed(seed: u64, domain: u64, index: u64) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for v in [domain, index] {
        h ^= v.wrapping_mul(0xD1B5_4A32_D192_ED03);
        h = h.rotate_left(29).wrapping_mul(0x94D0_49BB_1331_11EB);
    }
    h
}

/// CSV cell format: 17 significant digits, reproducible byte-for-byte.
pub(crate) fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

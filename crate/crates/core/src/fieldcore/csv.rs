//! Grid CSV interchange.
//!
//! ```text
//! # grid n1=<int> n2=<int> x1=[<f>,<f>] x2=[<f>,<f>]
//! # <optional annotation lines>
//! i,j,value          (n1·n2 rows, i outer)
//! ```

use std::fmt::Write as _;

use ndarray::Array2;

use super::{FieldError, Grid2, ScalarField2};

/// Shortest decimal that round-trips to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCsv {
    pub field: ScalarField2,
    /// Comment lines after the grid header, without the leading `# `.
    pub annotations: Vec<String>,
}

pub fn write_grid_csv(field: &ScalarField2, annotations: &[String]) -> String {
    let g = field.grid();
    let mut out = String::new();
    writeln!(
        out,
        "# grid n1={} n2={} x1=[{},{}] x2=[{},{}]",
        g.n1,
        g.n2,
        format_value(g.x1_min),
        format_value(g.x1_max),
        format_value(g.x2_min),
        format_value(g.x2_max)
    )
    .unwrap();
    for a in annotations {
        writeln!(out, "# {a}").unwrap();
    }
    for ((i, j), v) in field.values().indexed_iter() {
        writeln!(out, "{i},{j},{}", format_value(*v)).unwrap();
    }
    out
}

fn csv_err(line: usize, msg: impl std::fmt::Display) -> FieldError {
    FieldError::Csv(format!("line {line}: {msg}"))
}

fn parse_header(line: &str) -> Result<Grid2, FieldError> {
    let rest = line.strip_prefix("# grid ").ok_or_else(|| csv_err(1, "missing `# grid` header"))?;
    let mut n1 = None;
    let mut n2 = None;
    let mut x1 = None;
    let mut x2 = None;
    for tok in rest.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| csv_err(1, format!("bad token `{tok}`")))?;
        let range = || -> Result<(f64, f64), FieldError> {
            let inner = val
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| csv_err(1, format!("bad range `{val}`")))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| csv_err(1, format!("bad range `{val}`")))?;
            let p = |t: &str| t.trim().parse::<f64>().map_err(|e| csv_err(1, e));
            Ok((p(a)?, p(b)?))
        };
        match key {
            "n1" => n1 = Some(val.parse::<usize>().map_err(|e| csv_err(1, e))?),
            "n2" => n2 = Some(val.parse::<usize>().map_err(|e| csv_err(1, e))?),
            "x1" => x1 = Some(range()?),
            "x2" => x2 = Some(range()?),
            other => return Err(csv_err(1, format!("unknown header key `{other}`"))),
        }
    }
    match (n1, n2, x1, x2) {
        (Some(n1), Some(n2), Some((a1, b1)), Some((a2, b2))) => Grid2::new((a1, b1, n1), (a2, b2, n2)),
        _ => Err(csv_err(1, "header needs n1, n2, x1 and x2")),
    }
}

pub fn read_grid_csv(text: &str) -> Result<GridCsv, FieldError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, header) = lines.next().ok_or_else(|| csv_err(1, "empty file"))?;
    let grid = parse_header(header.trim_end())?;
    let mut annotations = Vec::new();
    let mut values = Array2::from_elem(grid.shape(), f64::NAN);
    let mut expected = 0usize;
    for (ln, line) in lines {
        let line = line.trim_end();
        if let Some(a) = line.strip_prefix('#') {
            if expected > 0 {
                return Err(csv_err(ln, "comment after data rows"));
            }
            annotations.push(a.trim_start().to_string());
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let mut next = || parts.next().ok_or_else(|| csv_err(ln, "expected `i,j,value`"));
        let i: usize = next()?.trim().parse().map_err(|e| csv_err(ln, e))?;
        let j: usize = next()?.trim().parse().map_err(|e| csv_err(ln, e))?;
        let v: f64 = next()?.trim().parse().map_err(|e| csv_err(ln, e))?;
        if parts.next().is_some() {
            return Err(csv_err(ln, "too many columns"));
        }
        let (ei, ej) = (expected / grid.n2, expected % grid.n2);
        if expected >= grid.node_count() || (i, j) != (ei, ej) {
            return Err(csv_err(ln, format!("expected node ({ei},{ej}) in row-major order, got ({i},{j})")));
        }
        values[[i, j]] = v;
        expected += 1;
    }
    if expected != grid.node_count() {
        return Err(csv_err(0, format!("expected {} rows, found {expected}", grid.node_count())));
    }
    Ok(GridCsv { field: ScalarField2::new(grid, values)?, annotations })
}

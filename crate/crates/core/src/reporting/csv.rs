//! Time-series CSV output and the matching reader used by the plot command.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::{Means, PopulationMeans, TimeSeries};
use crate::scenarios::{CellResult, ResultSet};

use super::ReportError;

pub const TIMESERIES_HEADER: &str = "scenario,cell,tolerance,tv_fraction,wise_fraction,turn,mean_welfare,mean_security,tv_welfare,tv_security,wa_welfare,wa_security,wz_welfare,wz_security";

fn push_means(row: &mut String, m: Option<Means>) {
    match m {
        Some(m) => {
            let _ = write!(row, ",{:.6},{:.6}", m.welfare, m.security);
        }
        None => row.push_str(",,"),
    }
}

fn push_comment(out: &mut String, comment: Option<&str>) {
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
}

fn push_cell_rows(out: &mut String, scenario: &str, index: usize, cell: &CellResult) {
    let cfg = &cell.config;
    for (turn, s) in cell.aggregated.samples.iter().enumerate() {
        let _ = write!(
            out,
            "{scenario},{index},{:.6},{:.6},{:.6},{turn}",
            cfg.tolerance, cfg.tv_fraction, cfg.wise_fraction
        );
        push_means(out, Some(s.population));
        for r in s.by_role {
            push_means(out, r);
        }
        out.push('\n');
    }
}

/// Renders the aggregated series of every cell. `comment` lines, if given,
/// are emitted first with a `# ` prefix.
pub fn timeseries_csv(result: &ResultSet, comment: Option<&str>) -> String {
    let mut out = String::new();
    push_comment(&mut out, comment);
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for (index, cell) in result.cells.iter().enumerate() {
        push_cell_rows(&mut out, &result.name, index, cell);
    }
    out
}

/// Same layout as [`timeseries_csv`] restricted to cell `index`.
pub fn cell_timeseries_csv(result: &ResultSet, index: usize, comment: Option<&str>) -> Option<String> {
    let cell = result.cells.get(index)?;
    let mut out = String::new();
    push_comment(&mut out, comment);
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    push_cell_rows(&mut out, &result.name, index, cell);
    Some(out)
}

pub fn write_timeseries_csv(result: &ResultSet, path: &Path, comment: Option<&str>) -> Result<(), ReportError> {
    super::write_file(path, timeseries_csv(result, comment).as_bytes())
}

/// One cell's series as read back from a time-series CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvCell {
    pub scenario: String,
    pub cell: usize,
    pub tolerance: f64,
    pub tv_fraction: f64,
    pub wise_fraction: f64,
    pub series: TimeSeries,
}

fn field_f64(fields: &[&str], i: usize, line: usize) -> Result<Option<f64>, ReportError> {
    let f = fields[i];
    if f.is_empty() {
        return Ok(None);
    }
    f.parse()
        .map(Some)
        .map_err(|_| ReportError::Csv(format!("line {line}: bad number `{f}` in column {}", i + 1)))
}

fn pair(fields: &[&str], i: usize, line: usize) -> Result<Option<Means>, ReportError> {
    match (field_f64(fields, i, line)?, field_f64(fields, i + 1, line)?) {
        (Some(welfare), Some(security)) => Ok(Some(Means { welfare, security })),
        (None, None) => Ok(None),
        _ => Err(ReportError::Csv(format!("line {line}: half-empty column pair at {}", i + 1))),
    }
}

/// Parses a file produced by [`timeseries_csv`], grouping rows by cell.
pub fn read_timeseries_csv(text: &str) -> Result<Vec<CsvCell>, ReportError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h.trim_end() == TIMESERIES_HEADER => {}
        _ => return Err(ReportError::Csv("missing or unexpected header".into())),
    }
    let columns = TIMESERIES_HEADER.split(',').count();
    let mut cells: Vec<CsvCell> = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        let fields: Vec<&str> = raw.trim_end().split(',').collect();
        if fields.len() != columns {
            return Err(ReportError::Csv(format!(
                "line {line}: expected {columns} fields, found {}",
                fields.len()
            )));
        }
        let bad = |what: &str| ReportError::Csv(format!("line {line}: bad {what}"));
        let cell: usize = fields[1].parse().map_err(|_| bad("cell"))?;
        let num = |i| field_f64(&fields, i, line)?.ok_or_else(|| bad("number"));
        let sample = PopulationMeans {
            population: pair(&fields, 6, line)?.ok_or_else(|| bad("population means"))?,
            by_role: [pair(&fields, 8, line)?, pair(&fields, 10, line)?, pair(&fields, 12, line)?],
        };
        match cells.last_mut() {
            Some(c) if c.cell == cell && c.scenario == fields[0] => c.series.samples.push(sample),
            _ => cells.push(CsvCell {
                scenario: fields[0].to_string(),
                cell,
                tolerance: num(2)?,
                tv_fraction: num(3)?,
                wise_fraction: num(4)?,
                series: TimeSeries { samples: vec![sample] },
            }),
        }
    }
    Ok(cells)
}

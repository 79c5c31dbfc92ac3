use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenarios::ResultSet;

use super::ReportError;

/// Final-turn aggregated means of one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: String,
    pub tolerance: f64,
    pub tv_fraction: f64,
    pub wise_fraction: f64,
    pub white_fraction: f64,
    pub final_mean_welfare: f64,
    pub final_mean_security: f64,
    /// Mean welfare ended above mean security.
    pub inversion: bool,
}

impl SummaryRow {
    pub fn new(
        scenario: &str,
        tolerance: f64,
        tv_fraction: f64,
        wise_fraction: f64,
        final_mean_welfare: f64,
        final_mean_security: f64,
    ) -> Self {
        Self {
            scenario: scenario.to_string(),
            tolerance,
            tv_fraction,
            wise_fraction,
            white_fraction: (1.0 - tv_fraction - wise_fraction).max(0.0),
            final_mean_welfare,
            final_mean_security,
            inversion: final_mean_welfare > final_mean_security,
        }
    }
}

pub fn summarize(result: &ResultSet) -> Vec<SummaryRow> {
    result
        .cells
        .iter()
        .filter_map(|cell| {
            let last = cell.aggregated.last()?;
            let c = &cell.config;
            Some(SummaryRow::new(
                &result.name,
                c.tolerance,
                c.tv_fraction,
                c.wise_fraction,
                last.population.welfare,
                last.population.security,
            ))
        })
        .collect()
}

/// Smallest wise fraction at `tolerance` whose final welfare mean exceeds
/// the final security mean.
pub fn smallest_inverting_wise_fraction(rows: &[SummaryRow], tolerance: f64) -> Option<f64> {
    rows.iter()
        .filter(|r| (r.tolerance - tolerance).abs() < 1e-9 && r.inversion)
        .map(|r| r.wise_fraction)
        .min_by(f64::total_cmp)
}

pub fn summary_json(rows: &[SummaryRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("summary rows serialize");
    s.push('\n');
    s
}

pub fn write_summary_json(rows: &[SummaryRow], path: &Path) -> Result<(), ReportError> {
    super::write_file(path, summary_json(rows).as_bytes())
}

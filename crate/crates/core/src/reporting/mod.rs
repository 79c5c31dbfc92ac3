//! Config files, CSV/JSON result files and SVG charts.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

mod config;
mod csv;
mod plot;
mod summary;

pub use self::config::{parse_config, serialize_config, ParseError, CONFIG_KEYS};
pub use self::csv::{cell_timeseries_csv, read_timeseries_csv, timeseries_csv, write_timeseries_csv, CsvCell, TIMESERIES_HEADER};
pub use self::plot::{emit_plot, render_svg, Plot, PlotSeries};
pub use self::summary::{smallest_inverting_wise_fraction, summarize, summary_json, write_summary_json, SummaryRow};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("nothing to plot")]
    EmptyPlot,
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    fs::write(path, bytes).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Single-line provenance note for result files.
pub fn provenance_line(tool: &str, version: &str, seed: u64, config_text: &str) -> String {
    format!("{tool} {version} seed={seed} config_hash={}", config_hash(config_text))
}

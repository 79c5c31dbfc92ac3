use std::fs;
use std::path::{Path, PathBuf};

use opinion_core::graph::{degree_exponent_estimate, generate_scale_free, GraphError, GraphParams};
use opinion_core::reporting::{
    cell_timeseries_csv, emit_plot, parse_config, provenance_line, read_timeseries_csv, serialize_config, summarize,
    summary_json, timeseries_csv, Plot, ReportError,
};
use opinion_core::scenarios::{run_sweep, scenario_grid, ResultSet, SweepError, SweepGrid};
use opinion_core::{Means, ScenarioConfig};
use thiserror::Error;

const TOOL: &str = "opinion-sim";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Sweep(SweepError::Config { .. }) => 2,
            CliError::Report(ReportError::Csv(_)) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err(path))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(io_err(path))
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
    let text = read_text(path)?;
    let mut cfg = parse_config(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(seed) = seed {
        cfg.base_seed = seed;
    }
    Ok(cfg)
}

fn default_out(label: &str, seed: u64) -> PathBuf {
    PathBuf::from("results").join(format!("{label}-{seed}"))
}

fn grid_provenance(grid: &SweepGrid, seed: u64) -> String {
    let text: String = grid.cells.iter().map(serialize_config).collect::<Vec<_>>().join("\n");
    provenance_line(TOOL, VERSION, seed, &text)
}

/// Common outputs: summary.json, provenance.txt.
fn write_summary(out: &Path, result: &ResultSet, provenance: &str) -> Result<(), CliError> {
    write_text(&out.join("summary.json"), &summary_json(&summarize(result)))?;
    write_text(&out.join("provenance.txt"), &format!("{provenance}\n"))
}

fn final_means(result: &ResultSet, tolerance: f64, x: impl Fn(&ScenarioConfig) -> f64) -> Vec<(f64, Means)> {
    result
        .cells
        .iter()
        .filter(|c| (c.config.tolerance - tolerance).abs() < 1e-9)
        .filter_map(|c| Some((x(&c.config), c.aggregated.last()?.population)))
        .collect()
}

fn tolerances(result: &ResultSet) -> Vec<f64> {
    let mut ts: Vec<f64> = result.cells.iter().map(|c| c.config.tolerance).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// One chart per tolerance: final means against a swept fraction.
fn plot_per_tolerance(
    out: &Path,
    result: &ResultSet,
    x_label: &str,
    x: impl Fn(&ScenarioConfig) -> f64 + Copy,
) -> Result<(), CliError> {
    for t in tolerances(result) {
        let cells = final_means(result, t, x);
        let plot = Plot::from_final_means(format!("{} tolerance {t:.1}", result.name), x_label, &cells);
        emit_plot(&plot, &out.join(format!("tolerance_{t:.1}.svg")))?;
    }
    Ok(())
}

pub fn run(config: &Path, out: Option<PathBuf>, seed: Option<u64>, jobs: usize) -> Result<(), CliError> {
    let cfg = load_config(config, seed)?;
    let name = config
        .file_stem()
        .map(|s| s.to_string_lossy().replace(',', "_"))
        .unwrap_or_else(|| "run".into());
    let out = out.unwrap_or_else(|| default_out(&name, cfg.base_seed));
    let grid = SweepGrid {
        name,
        cells: vec![cfg],
    };
    let result = run_sweep(&grid, jobs)?;
    let provenance = provenance_line(TOOL, VERSION, cfg.base_seed, &serialize_config(&cfg));

    create_dir(&out)?;
    write_text(&out.join("timeseries.csv"), &timeseries_csv(&result, Some(&provenance)))?;
    write_summary(&out, &result, &provenance)?;
    let plot = Plot::from_time_series(format!("{} population means", result.name), &result.cells[0].aggregated);
    emit_plot(&plot, &out.join("means.svg"))?;
    println!("wrote {}", out.display());
    Ok(())
}

pub fn scenario(id: u8, out: Option<PathBuf>, seed: u64, jobs: usize) -> Result<(), CliError> {
    let grid = scenario_grid(id, seed).ok_or_else(|| CliError::Config(format!("unknown scenario {id}")))?;
    let out = out.unwrap_or_else(|| default_out(&grid.name, seed));
    let result = run_sweep(&grid, jobs)?;
    let provenance = grid_provenance(&grid, seed);

    let cells_dir = out.join("cells");
    create_dir(&cells_dir)?;
    for i in 0..result.cells.len() {
        let csv = cell_timeseries_csv(&result, i, Some(&provenance)).expect("index in range");
        write_text(&cells_dir.join(format!("cell_{i:03}.csv")), &csv)?;
    }
    write_summary(&out, &result, &provenance)?;

    match id {
        1 => {
            for cell in &result.cells {
                let t = cell.config.tolerance;
                let plot = Plot::from_time_series(format!("{} tolerance {t:.1}", result.name), &cell.aggregated);
                emit_plot(&plot, &out.join(format!("tolerance_{t:.1}.svg")))?;
            }
        }
        2 => plot_per_tolerance(&out, &result, "media reach (tv_fraction)", |c| c.tv_fraction)?,
        _ => plot_per_tolerance(&out, &result, "experts reach (wise_fraction)", |c| c.wise_fraction)?,
    }
    println!("{}: {} cells -> {}", result.name, result.cells.len(), out.display());
    Ok(())
}

pub fn sweep(
    config: &Path,
    tolerances: &[f64],
    tv_fractions: &[f64],
    out: Option<PathBuf>,
    seed: Option<u64>,
    jobs: usize,
) -> Result<(), CliError> {
    let cfg = load_config(config, seed)?;
    let tv = if tv_fractions.is_empty() {
        vec![cfg.tv_fraction]
    } else {
        tv_fractions.to_vec()
    };
    let grid = SweepGrid::custom("sweep", cfg, tolerances, &tv);
    // validate every cell before touching the filesystem
    for (i, c) in grid.cells.iter().enumerate() {
        c.validate()
            .map_err(|e| CliError::Config(format!("cell {i}: {e}")))?;
    }
    let out = out.unwrap_or_else(|| default_out("sweep", cfg.base_seed));
    let result = run_sweep(&grid, jobs)?;
    let provenance = grid_provenance(&grid, cfg.base_seed);

    create_dir(&out)?;
    write_text(&out.join("timeseries.csv"), &timeseries_csv(&result, Some(&provenance)))?;
    write_summary(&out, &result, &provenance)?;
    plot_per_tolerance(&out, &result, "media reach (tv_fraction)", |c| c.tv_fraction)?;
    println!("sweep: {} cells -> {}", result.cells.len(), out.display());
    Ok(())
}

pub fn net_stats(n: usize, m: usize, seed: u64, k_min: usize, edges: Option<PathBuf>) -> Result<(), CliError> {
    let params = GraphParams::new(n, m, seed);
    let g = generate_scale_free(params).map_err(|e| CliError::Config(e.to_string()))?;
    let degrees = g.degrees();
    let min = degrees.iter().min().copied().unwrap_or(0);
    let max = degrees.iter().max().copied().unwrap_or(0);
    let mean = degrees.iter().sum::<usize>() as f64 / n as f64;
    println!("nodes: {}", g.node_count());
    println!("edges: {}", g.edge_count());
    println!("min_degree: {min}");
    println!("max_degree: {max}");
    println!("mean_degree: {mean:.6}");
    println!("connected: {}", g.is_connected());
    match degree_exponent_estimate(&g, k_min) {
        Ok(y) => println!("tail_exponent(k_min={k_min}): {y:.6}"),
        Err(GraphError::InsufficientTail { found, .. }) => {
            println!("tail_exponent(k_min={k_min}): n/a ({found} nodes in tail)")
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    }
    if let Some(path) = edges {
        write_text(&path, &g.to_edge_list())?;
    }
    Ok(())
}

pub fn plot(csv: &Path, out: &Path) -> Result<(), CliError> {
    let cells = read_timeseries_csv(&read_text(csv)?)?;
    if cells.is_empty() {
        return Err(ReportError::EmptyPlot.into());
    }
    let title = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let plot = if let [only] = cells.as_slice() {
        Plot::from_time_series(title, &only.series)
    } else {
        let mut plot = Plot::new(title, "turn");
        for c in &cells {
            let pts = |f: fn(&Means) -> f64| -> Vec<(f64, f64)> {
                c.series
                    .samples
                    .iter()
                    .enumerate()
                    .map(|(t, s)| (t as f64, f(&s.population)))
                    .collect()
            };
            plot = plot
                .with_series(format!("cell {} welfare", c.cell), pts(|m| m.welfare))
                .with_series(format!("cell {} security", c.cell), pts(|m| m.security));
        }
        plot
    };
    emit_plot(&plot, out)?;
    Ok(())
}

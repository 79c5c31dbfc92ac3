//! The four experiment batteries as sweep grids, and the sweep runner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Message;
use crate::engine::{aggregate, run_replication, AggregateError, ConfigError, ScenarioConfig, TimeSeries};
use crate::seed::mix_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("cell {cell}: {source}")]
    Config {
        cell: usize,
        #[source]
        source: ConfigError,
    },
    #[error("cell {cell}: {source}")]
    Aggregate {
        cell: usize,
        #[source]
        source: AggregateError,
    },
    #[error("max_parallel must be positive")]
    ZeroParallelism,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Named list of simulation cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub name: String,
    pub cells: Vec<ScenarioConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub config: ScenarioConfig,
    pub aggregated: TimeSeries,
    pub replications: Vec<TimeSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub name: String,
    pub cells: Vec<CellResult>,
}

/// `k / 10` for `k` in `range`, computed from integers so that grid values
/// are the nearest doubles to the decimal fractions.
fn tenths(range: std::ops::RangeInclusive<u32>) -> impl Iterator<Item = f64> {
    range.map(|k| f64::from(k) / 10.0)
}

const PAIRED_TOLERANCES: [f64; 3] = [0.2, 0.5, 0.8];

impl SweepGrid {
    /// Builds a grid from `(tv, wise, tolerance)` triples, giving each cell a
    /// base seed of `mix_seed(base_seed, cell_index)`.
    fn build(name: &str, base_seed: u64, template: ScenarioConfig, points: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        let cells = points
            .into_iter()
            .enumerate()
            .map(|(i, (tv, wise, tolerance))| ScenarioConfig {
                tv_fraction: tv,
                wise_fraction: wise,
                tolerance,
                base_seed: mix_seed(base_seed, i as u64),
                ..template
            })
            .collect();
        Self {
            name: name.to_string(),
            cells,
        }
    }

    /// Cross product of `tolerances` x `tv_fractions` over a template config.
    /// Wise fraction stays at the template's value.
    pub fn custom(name: &str, template: ScenarioConfig, tolerances: &[f64], tv_fractions: &[f64]) -> Self {
        let points = tolerances
            .iter()
            .flat_map(|&t| tv_fractions.iter().map(move |&tv| (tv, template.wise_fraction, t)))
            .collect::<Vec<_>>();
        Self::build(name, template.base_seed, template, points)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

fn paper_template() -> ScenarioConfig {
    ScenarioConfig {
        n_agents: 100,
        turns: 100,
        replications: 10,
        media_message: Message::MEDIA,
        expert_message: Message::EXPERT,
        ..ScenarioConfig::default()
    }
}

/// Gossip only: tolerance 0.1..=0.9, no media, no experts.
pub fn scenario1_grid(base_seed: u64) -> SweepGrid {
    SweepGrid::build("scenario1", base_seed, paper_template(), tenths(1..=9).map(|t| (0.0, 0.0, t)))
}

/// Media reach 0%..=100% for every tolerance 0.1..=0.9; tolerance-major order.
pub fn scenario2_grid(base_seed: u64) -> SweepGrid {
    let points = tenths(1..=9).flat_map(|t| tenths(0..=10).map(move |tv| (tv, 0.0, t)));
    SweepGrid::build("scenario2", base_seed, paper_template(), points.collect::<Vec<_>>())
}

/// Media vs experts, everyone reached by one of the two.
pub fn scenario3_grid(base_seed: u64) -> SweepGrid {
    let points = PAIRED_TOLERANCES
        .iter()
        .flat_map(|&t| (0..=10u32).map(move |k| (f64::from(k) / 10.0, f64::from(10 - k) / 10.0, t)));
    SweepGrid::build("scenario3", base_seed, paper_template(), points.collect::<Vec<_>>())
}

/// Media vs experts with a fixed 30% white zone.
pub fn scenario4_grid(base_seed: u64) -> SweepGrid {
    let points = PAIRED_TOLERANCES
        .iter()
        .flat_map(|&t| (0..=7u32).map(move |k| (f64::from(k) / 10.0, f64::from(7 - k) / 10.0, t)));
    SweepGrid::build("scenario4", base_seed, paper_template(), points.collect::<Vec<_>>())
}

/// Grid for scenario `id` in `1..=4`.
pub fn scenario_grid(id: u8, base_seed: u64) -> Option<SweepGrid> {
    match id {
        1 => Some(scenario1_grid(base_seed)),
        2 => Some(scenario2_grid(base_seed)),
        3 => Some(scenario3_grid(base_seed)),
        4 => Some(scenario4_grid(base_seed)),
        _ => None,
    }
}

/// Runs every replication of every cell on up to `max_parallel` threads and
/// aggregates per cell. Results are ordered by cell and replication index, so
/// the output does not depend on `max_parallel`.
pub fn run_sweep(grid: &SweepGrid, max_parallel: usize) -> Result<ResultSet, SweepError> {
    if max_parallel == 0 {
        return Err(SweepError::ZeroParallelism);
    }
    for (cell, config) in grid.cells.iter().enumerate() {
        config
            .validate()
            .map_err(|source| SweepError::Config { cell, source })?;
    }

    let jobs: Vec<(usize, usize)> = grid
        .cells
        .iter()
        .enumerate()
        .flat_map(|(c, cfg)| (0..cfg.replications).map(move |r| (c, r)))
        .collect();

    let run = |&(c, r): &(usize, usize)| {
        run_replication(&grid.cells[c], r).map_err(|source| SweepError::Config { cell: c, source })
    };
    let series: Vec<TimeSeries> = if max_parallel == 1 {
        jobs.iter().map(run).collect::<Result<_, _>>()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(max_parallel)
            .build()
            .map_err(|e| SweepError::ThreadPool(e.to_string()))?
            .install(|| jobs.par_iter().map(run).collect::<Result<_, _>>())?
    };

    let mut series = series.into_iter();
    let cells = grid
        .cells
        .iter()
        .enumerate()
        .map(|(c, config)| {
            let replications: Vec<TimeSeries> = series.by_ref().take(config.replications).collect();
            let aggregated = aggregate(&replications).map_err(|source| SweepError::Aggregate { cell: c, source })?;
            Ok(CellResult {
                config: *config,
                aggregated,
                replications,
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    Ok(ResultSet {
        name: grid.name.clone(),
        cells,
    })
}

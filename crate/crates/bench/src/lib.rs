//! Fixtures shared by the criterion benchmarks.

use opinion_core::{Message, ScenarioConfig};

/// One cell at the default experiment scale: 100 agents, 100 turns.
pub fn desk_cell(tv_fraction: f64, wise_fraction: f64, tolerance: f64) -> ScenarioConfig {
    ScenarioConfig {
        tv_fraction,
        wise_fraction,
        tolerance,
        media_message: Message::MEDIA,
        expert_message: Message::EXPERT,
        base_seed: 7,
        ..ScenarioConfig::default()
    }
}

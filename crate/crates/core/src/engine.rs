//! Simulation driver: population setup, turn execution, replications and
//! time-series aggregation.
//!
//! A turn has two phases. In the broadcast phase every TeleViewer receives the
//! media message through the tolerance gate and every WiseAgent receives the
//! expert message without it. In the gossip phase agents are visited in a
//! fresh random order; each one picks a random neighbor and moves toward the
//! neighbor's current opinion (only the receiver changes).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    self, expert_update, media_update, peer_update, Agent, Message, OpinionPair, Role, UpdateParams,
};
use crate::graph::{generate_scale_free, Graph, GraphError, GraphParams};
use crate::seed::{mix_seed, stream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ConfigError {
    fn invalid(key: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key,
            reason: reason.into(),
        }
    }

    /// Name of the offending key, when there is one.
    pub fn key(&self) -> Option<&'static str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            ConfigError::Graph(_) => Some("m_attach"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AggregateError {
    #[error("cannot aggregate an empty list of series")]
    Empty,
    #[error("series {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
}

/// Full parameterization of one simulation cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n_agents: usize,
    pub tv_fraction: f64,
    pub wise_fraction: f64,
    pub tolerance: f64,
    pub convergence: f64,
    pub media_message: Message,
    pub expert_message: Message,
    pub turns: usize,
    pub replications: usize,
    pub base_seed: u64,
    pub m_attach: usize,
    /// Neighbor exchanges per agent in each gossip phase.
    pub gossip_exchanges: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_agents: 100,
            tv_fraction: 0.0,
            wise_fraction: 0.0,
            tolerance: 0.5,
            convergence: UpdateParams::DEFAULT_CONVERGENCE,
            media_message: Message::MEDIA,
            expert_message: Message::EXPERT,
            turns: 100,
            replications: 10,
            base_seed: 0,
            m_attach: GraphParams::DEFAULT_M_ATTACH,
            gossip_exchanges: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_agents == 0 {
            return Err(ConfigError::invalid("n_agents", "must be positive"));
        }
        let unit = |key, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::invalid(key, format!("{v} is outside [0, 1]")))
            }
        };
        unit("tv_fraction", self.tv_fraction)?;
        unit("wise_fraction", self.wise_fraction)?;
        unit("tolerance", self.tolerance)?;
        unit("media_welfare", self.media_message.welfare)?;
        unit("media_security", self.media_message.security)?;
        unit("expert_welfare", self.expert_message.welfare)?;
        unit("expert_security", self.expert_message.security)?;
        if self.tv_fraction + self.wise_fraction > 1.0 + 1e-9 {
            return Err(ConfigError::invalid(
                "wise_fraction",
                format!(
                    "tv_fraction + wise_fraction = {} exceeds 1",
                    self.tv_fraction + self.wise_fraction
                ),
            ));
        }
        dynamics::check_convergence(self.convergence)
            .map_err(|_| ConfigError::invalid("convergence", format!("{} is outside (0, 0.5]", self.convergence)))?;
        if self.turns == 0 {
            return Err(ConfigError::invalid("turns", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(ConfigError::invalid("replications", "must be at least 1"));
        }
        if self.gossip_exchanges == 0 {
            return Err(ConfigError::invalid("gossip_exchanges", "must be at least 1"));
        }
        if self.n_agents > 1 {
            self.graph_params(0).validate()?;
        } else if self.m_attach == 0 {
            return Err(ConfigError::invalid("m_attach", "must be positive"));
        }
        Ok(())
    }

    pub fn update_params(&self) -> UpdateParams {
        UpdateParams {
            tolerance: self.tolerance,
            convergence: self.convergence,
        }
    }

    /// Graph parameters with `n` forced to the population size.
    pub fn graph_params(&self, seed: u64) -> GraphParams {
        GraphParams::new(self.n_agents, self.m_attach, seed)
    }

    /// Number of agents in each role, in [`Role::ALL`] order.
    pub fn role_counts(&self) -> [usize; 3] {
        let n = self.n_agents;
        let tv = ((n as f64 * self.tv_fraction).round() as usize).min(n);
        let wa = ((n as f64 * self.wise_fraction).round() as usize).min(n - tv);
        [tv, wa, n - tv - wa]
    }

    pub fn white_fraction(&self) -> f64 {
        (1.0 - self.tv_fraction - self.wise_fraction).max(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct SimulationState {
    pub graph: Graph,
    /// Indexed by node id.
    pub agents: Vec<Agent>,
    pub turn: usize,
}

/// Mean welfare and security over some group of agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Means {
    pub welfare: f64,
    pub security: f64,
}

/// Population means plus per-role means (`None` for empty roles).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationMeans {
    pub population: Means,
    pub by_role: [Option<Means>; 3],
}

impl PopulationMeans {
    pub fn role(&self, role: Role) -> Option<Means> {
        self.by_role[role.index()]
    }
}

/// One [`PopulationMeans`] sample per turn; index 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub samples: Vec<PopulationMeans>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&PopulationMeans> {
        self.samples.last()
    }
}

/// Builds the graph and population for one replication seed.
///
/// The graph uses stream `mix_seed(seed, GRAPH)`. Opinions are then drawn
/// uniformly in node order (welfare, then security) from stream
/// `mix_seed(seed, INIT)`, followed by a uniform shuffle of node ids whose
/// prefix becomes TeleViewers, the next block WiseAgents, the rest WhiteZone.
pub fn init_state(config: &ScenarioConfig, seed: u64) -> Result<SimulationState, ConfigError> {
    let n = config.n_agents;
    let graph = if n == 1 {
        Graph::empty(1)
    } else {
        generate_scale_free(config.graph_params(mix_seed(seed, stream::GRAPH)))?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, stream::INIT));

    let mut agents: Vec<Agent> = (0..n)
        .map(|id| {
            let welfare = rng.random::<f64>();
            let security = rng.random::<f64>();
            Agent {
                id,
                role: Role::WhiteZone,
                opinions: OpinionPair { welfare, security },
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let [tv, wa, _] = config.role_counts();
    for (rank, &id) in order.iter().enumerate() {
        agents[id].role = if rank < tv {
            Role::TeleViewer
        } else if rank < tv + wa {
            Role::WiseAgent
        } else {
            Role::WhiteZone
        };
    }

    Ok(SimulationState {
        graph,
        agents,
        turn: 0,
    })
}

/// Advances the state by one turn (broadcast phase, then gossip phase).
pub fn step<R: Rng + ?Sized>(state: &mut SimulationState, config: &ScenarioConfig, rng: &mut R) {
    let params = config.update_params();

    for agent in &mut state.agents {
        agent.opinions = match agent.role {
            Role::TeleViewer => media_update(agent.opinions, config.media_message, params),
            Role::WiseAgent => expert_update(agent.opinions, config.expert_message, config.convergence),
            Role::WhiteZone => agent.opinions,
        };
    }

    let mut order: Vec<usize> = (0..state.agents.len()).collect();
    order.shuffle(rng);
    for receiver in order {
        let neighbors = &state.graph.neighbors(receiver).expect("agent ids match graph nodes");
        if neighbors.is_empty() {
            continue;
        }
        for _ in 0..config.gossip_exchanges {
            let sender = neighbors[rng.random_range(0..neighbors.len())];
            let heard = state.agents[sender].opinions;
            let own = &mut state.agents[receiver].opinions;
            *own = peer_update(*own, heard, params);
        }
    }

    state.turn += 1;
}

/// Arithmetic means over all agents and within each role.
pub fn population_means(state: &SimulationState) -> PopulationMeans {
    let mut total = [0.0f64; 2];
    let mut role_sum = [[0.0f64; 2]; 3];
    let mut role_count = [0usize; 3];
    for agent in &state.agents {
        let OpinionPair { welfare, security } = agent.opinions;
        total[0] += welfare;
        total[1] += security;
        let r = agent.role.index();
        role_sum[r][0] += welfare;
        role_sum[r][1] += security;
        role_count[r] += 1;
    }
    let n = state.agents.len() as f64;
    let mut by_role = [None; 3];
    for r in 0..3 {
        if role_count[r] > 0 {
            let c = role_count[r] as f64;
            by_role[r] = Some(Means {
                welfare: role_sum[r][0] / c,
                security: role_sum[r][1] / c,
            });
        }
    }
    PopulationMeans {
        population: Means {
            welfare: total[0] / n,
            security: total[1] / n,
        },
        by_role,
    }
}

/// Seed of replication `index` under `base_seed`.
pub fn replication_seed(base_seed: u64, index: usize) -> u64 {
    mix_seed(base_seed, index as u64)
}

/// Runs one replication: `init_state` with seed
/// `mix_seed(base_seed, replication_index)`, then `config.turns` steps driven
/// by the stream `mix_seed(seed, STEP)`. Means are recorded after
/// initialization and after every step.
pub fn run_replication(config: &ScenarioConfig, replication_index: usize) -> Result<TimeSeries, ConfigError> {
    let seed = replication_seed(config.base_seed, replication_index);
    let mut state = init_state(config, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, stream::STEP));
    let mut samples = Vec::with_capacity(config.turns + 1);
    samples.push(population_means(&state));
    for _ in 0..config.turns {
        step(&mut state, config, &mut rng);
        samples.push(population_means(&state));
    }
    Ok(TimeSeries { samples })
}

fn mean_of(values: impl Iterator<Item = Option<Means>>) -> Option<Means> {
    let (mut w, mut s, mut c) = (0.0, 0.0, 0usize);
    for m in values.flatten() {
        w += m.welfare;
        s += m.security;
        c += 1;
    }
    (c > 0).then(|| Means {
        welfare: w / c as f64,
        security: s / c as f64,
    })
}

/// Pointwise arithmetic mean of every recorded statistic. A role mean is
/// averaged over the series in which that role is present.
pub fn aggregate(series: &[TimeSeries]) -> Result<TimeSeries, AggregateError> {
    let first = series.first().ok_or(AggregateError::Empty)?;
    let len = first.len();
    if let Some((index, s)) = series.iter().enumerate().find(|(_, s)| s.len() != len) {
        return Err(AggregateError::LengthMismatch {
            index,
            expected: len,
            found: s.len(),
        });
    }
    let samples = (0..len)
        .map(|t| {
            let population = mean_of(series.iter().map(|s| Some(s.samples[t].population)))
                .expect("at least one series");
            let mut by_role = [None; 3];
            for (r, slot) in by_role.iter_mut().enumerate() {
                *slot = mean_of(series.iter().map(|s| s.samples[t].by_role[r]));
            }
            PopulationMeans { population, by_role }
        })
        .collect();
    Ok(TimeSeries { samples })
}

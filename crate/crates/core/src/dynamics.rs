//! Opinion state and the three update rules: gated peer exchange, gated
//! media reception and ungated expert reception.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfUnitInterval { name: &'static str, value: f64 },
    #[error("convergence = {0} is outside (0, 0.5]")]
    InvalidConvergence(f64),
}

fn check_unit(name: &'static str, value: f64) -> Result<f64, DynamicsError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(DynamicsError::OutOfUnitInterval { name, value })
    }
}

/// An agent's beliefs about how important welfare and security are.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpinionPair {
    pub welfare: f64,
    pub security: f64,
}

impl OpinionPair {
    pub fn new(welfare: f64, security: f64) -> Result<Self, DynamicsError> {
        Ok(Self {
            welfare: check_unit("welfare", welfare)?,
            security: check_unit("security", security)?,
        })
    }
}

/// Values reported by an external source (media or experts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub welfare: f64,
    pub security: f64,
}

impl Message {
    /// Broadcast media message: security over welfare.
    pub const MEDIA: Message = Message { welfare: 0.3, security: 0.8 };
    /// Expert message: welfare over security.
    pub const EXPERT: Message = Message { welfare: 0.8, security: 0.3 };

    pub fn new(welfare: f64, security: f64) -> Result<Self, DynamicsError> {
        Ok(Self {
            welfare: check_unit("welfare", welfare)?,
            security: check_unit("security", security)?,
        })
    }

    fn as_pair(self) -> OpinionPair {
        OpinionPair {
            welfare: self.welfare,
            security: self.security,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateParams {
    /// Largest distance at which a received value is still taken into account.
    pub tolerance: f64,
    /// Fraction of the distance closed on acceptance, in (0, 0.5].
    pub convergence: f64,
}

impl UpdateParams {
    pub const DEFAULT_CONVERGENCE: f64 = 0.5;

    pub fn new(tolerance: f64, convergence: f64) -> Result<Self, DynamicsError> {
        check_unit("tolerance", tolerance)?;
        check_convergence(convergence)?;
        Ok(Self {
            tolerance,
            convergence,
        })
    }
}

pub(crate) fn check_convergence(convergence: f64) -> Result<f64, DynamicsError> {
    if convergence > 0.0 && convergence <= 0.5 {
        Ok(convergence)
    } else {
        Err(DynamicsError::InvalidConvergence(convergence))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    /// Reached by the broadcast media.
    TeleViewer,
    /// Reached by the experts.
    WiseAgent,
    /// Reached by neither source; informed only by neighbors.
    WhiteZone,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::TeleViewer, Role::WiseAgent, Role::WhiteZone];

    pub fn index(self) -> usize {
        match self {
            Role::TeleViewer => 0,
            Role::WiseAgent => 1,
            Role::WhiteZone => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agent {
    pub id: NodeId,
    pub role: Role,
    pub opinions: OpinionPair,
}

#[inline]
fn step_toward(x: f64, target: f64, convergence: f64) -> f64 {
    x + convergence * (target - x)
}

/// Bounded-confidence step on one dimension: move `x` toward `y` only when
/// `|x - y| <= tolerance`.
#[inline]
pub fn bcm_update_scalar(x: f64, y: f64, params: UpdateParams) -> f64 {
    if (x - y).abs() <= params.tolerance {
        step_toward(x, y, params.convergence)
    } else {
        x
    }
}

/// Receiver-side exchange with a neighbor. Each dimension is gated on its own.
pub fn peer_update(receiver: OpinionPair, sender: OpinionPair, params: UpdateParams) -> OpinionPair {
    OpinionPair {
        welfare: bcm_update_scalar(receiver.welfare, sender.welfare, params),
        security: bcm_update_scalar(receiver.security, sender.security, params),
    }
}

/// A TeleViewer processes the media message exactly like a peer's opinion.
pub fn media_update(opinions: OpinionPair, message: Message, params: UpdateParams) -> OpinionPair {
    peer_update(opinions, message.as_pair(), params)
}

/// A WiseAgent trusts the experts: no tolerance gate.
pub fn expert_update(opinions: OpinionPair, message: Message, convergence: f64) -> OpinionPair {
    OpinionPair {
        welfare: step_toward(opinions.welfare, message.welfare, convergence),
        security: step_toward(opinions.security, message.security, convergence),
    }
}

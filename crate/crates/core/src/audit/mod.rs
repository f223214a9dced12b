//! Checks of every quantitative property of the strategy's execution.
//!
//! Per-turn invariants are evaluated by the game runner and collected here
//! as [`Violation`]s. Structural audits (expansion, connectivity, pair
//! counts) run at booster turns. Log-level audits (potential traces, turn
//! accounting, Hamilton verification) replay a finished [`GameLog`](crate::GameLog).

mod accounting;
mod expansion;
mod hamilton;
mod potential;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use accounting::{turn_accounting, BoundCheck, TurnAccounting};
pub use expansion::{connectivity_audit, expansion_audit, ConnectivityReport, ExpansionFailure, ExpansionReport};
pub use hamilton::{verify_hamilton, HamiltonVerdict};
pub use potential::{potential_trace, PotentialStep, PotentialTrace};

use crate::board::{GameState, Player};
use crate::error::{GameError, SimError};
use crate::log::{GameLog, MoveRecord};

/// Invariant identifiers used in [`Violation::id`].
pub mod ids {
    pub const CASE_EXCLUSION: &str = "case_exclusion";
    pub const D_PLUS_QUOTA: &str = "d_plus_quota";
    pub const SERVE_TAIL_TROUBLESOME: &str = "serve_tail_troublesome";
    pub const PHASE1_CAP: &str = "phase1_cap";
    pub const PARTITION: &str = "partition";
    pub const INTERIOR_DEGREE: &str = "interior_degree";
    pub const INTERIOR_ABSORPTION: &str = "interior_absorption";
    pub const GROWTH_BOUND: &str = "growth_bound";
    pub const HEAD_PLACEMENT: &str = "head_placement";
    pub const DEGREE_SPLIT: &str = "degree_split";
    pub const COUNTERS: &str = "counters";
    pub const PATH_EDGES: &str = "path_edges";
    pub const TRACKED_PATH: &str = "tracked_path";
    pub const TRACKED_MONOTONE: &str = "tracked_monotone";
    pub const ONSET_ORDER: &str = "onset_order";

    /// The invariants that must never fail.
    pub const HARD: [&str; 8] = [
        CASE_EXCLUSION,
        D_PLUS_QUOTA,
        SERVE_TAIL_TROUBLESOME,
        PHASE1_CAP,
        PARTITION,
        INTERIOR_DEGREE,
        INTERIOR_ABSORPTION,
        GROWTH_BOUND,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub id: String,
    pub turn: u32,
    pub detail: String,
}

/// Endpoint-pair count at a booster turn against the scaled threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCountReport {
    pub turn: u32,
    pub count: usize,
    pub threshold: f64,
    /// False when the closure budget truncated the count (it is then a lower bound).
    pub exhaustive: bool,
    pub pass: bool,
}

pub fn pair_count_audit(turn: u32, count: usize, exhaustive: bool, threshold: f64) -> PairCountReport {
    PairCountReport {
        turn,
        count,
        threshold,
        exhaustive,
        pass: count as f64 >= threshold,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    /// Number of evaluations per invariant id.
    pub checks: BTreeMap<String, u64>,
    pub expansion: Vec<ExpansionReport>,
    pub connectivity: Vec<ConnectivityReport>,
    pub pairs: Vec<PairCountReport>,
    pub accounting: Option<TurnAccounting>,
    /// `None` when the log could not support reconstruction.
    pub potential: Option<Vec<PotentialTrace>>,
    pub hamilton: Option<HamiltonVerdict>,
}

impl AuditReport {
    /// Record one evaluation of `id`, and a violation when `failure` is set.
    pub fn check(&mut self, id: &str, turn: u32, failure: Option<String>) {
        *self.checks.entry(id.to_string()).or_default() += 1;
        if let Some(detail) = failure {
            self.violations.push(Violation {
                id: id.to_string(),
                turn,
                detail,
            });
        }
    }

    pub fn violations_of(&self, id: &str) -> usize {
        self.violations.iter().filter(|v| v.id == id).count()
    }

    pub fn hard_violations(&self) -> usize {
        self.violations.iter().filter(|v| ids::HARD.contains(&v.id.as_str())).count()
    }

    /// Fraction of all checked subsets, over every expansion audit of the game, that expand.
    pub fn expansion_pass_rate(&self) -> Option<f64> {
        let checked: u64 = self.expansion.iter().map(|e| e.checked()).sum();
        let failed: u64 = self.expansion.iter().map(|e| e.failure_count).sum();
        (checked > 0).then(|| 1.0 - failed as f64 / checked as f64)
    }

    /// Fraction of expansion audits with no failing subset at all.
    pub fn expansion_clean_rate(&self) -> Option<f64> {
        rate(self.expansion.iter().map(|e| e.pass))
    }

    pub fn connectivity_pass_rate(&self) -> Option<f64> {
        rate(self.connectivity.iter().map(|c| c.pass))
    }

    pub fn pair_pass_rate(&self) -> Option<f64> {
        rate(self.pairs.iter().map(|p| p.pass))
    }

    /// Whether every potential step and aggregate bound held; `None` if unavailable.
    pub fn potential_ok(&self) -> Option<bool> {
        self.potential.as_ref().map(|ts| ts.iter().all(|t| t.holds()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn rate(it: impl Iterator<Item = bool>) -> Option<f64> {
    let (mut pass, mut total) = (0usize, 0usize);
    for ok in it {
        total += 1;
        pass += ok as usize;
    }
    (total > 0).then(|| pass as f64 / total as f64)
}

/// Apply one logged half-move to `state`, including the troublesome refresh
/// after a Breaker move.
pub fn apply_move(state: &mut GameState, rec: &MoveRecord) -> Result<(), GameError> {
    match rec.player {
        Player::Breaker => {
            for e in &rec.edges {
                state.claim_edge(Player::Breaker, e.0, e.1)?;
            }
            state.end_breaker_move()?;
            state.refresh_troublesome();
        }
        Player::Maker => {
            for e in &rec.edges {
                state.claim_edge(Player::Maker, e.tail(), e.head())?;
            }
        }
    }
    Ok(())
}

/// Fresh board for a logged game.
pub fn board_for(log: &GameLog) -> Result<GameState, SimError> {
    let (config, _, _) = log.header().ok_or_else(|| SimError::Log("missing header".into()))?;
    Ok(GameState::new(config)?)
}

/// Rebuild the final board of a logged game.
pub fn replay_board(log: &GameLog) -> Result<GameState, SimError> {
    let mut state = board_for(log)?;
    for rec in log.moves() {
        apply_move(&mut state, rec).map_err(|e| SimError::Log(format!("turn {}: {e}", rec.turn)))?;
    }
    Ok(state)
}

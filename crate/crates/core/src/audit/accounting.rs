use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{apply_move, board_for};
use crate::board::Player;
use crate::config::scale;
use crate::error::SimError;
use crate::log::{Case, GameLog, LogLine};
use crate::paths::PathSystem;

/// A measured quantity against its scaled-constant bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnAccounting {
    pub maker_turns: u32,
    pub per_case: BTreeMap<String, u32>,
    pub serve_turns: u32,
    pub booster_turns: u32,
    pub i_star: Option<u32>,
    pub max_s: usize,
    pub f_at_i_star: Option<usize>,
    /// Largest number of paths at or after the phase transition.
    pub max_f_phase2: usize,
    pub troublesome: usize,
    pub breaker_edges: usize,
    pub growth_events: u32,
    /// First turn where growth events exceeded `|S_i| + 3|F_i|`, with both sides.
    pub growth_violation: Option<(u32, u32, usize)>,
    pub bounds: Vec<BoundCheck>,
}

impl TurnAccounting {
    pub fn growth_ok(&self) -> bool {
        self.growth_violation.is_none()
    }
}

/// Replay the path system and board from the log and tally turns, set sizes
/// and growth events of the tracked path.
pub fn turn_accounting(log: &GameLog) -> Result<TurnAccounting, SimError> {
    let (config, _, s0) = log.header().ok_or_else(|| SimError::Log("audit unavailable: log has no header".into()))?;
    let config = config.clone();
    let n = config.n;
    let mut ps = PathSystem::new(n, s0).map_err(|e| SimError::Log(e.to_string()))?;
    let mut state = board_for(log)?;
    let mut acc = TurnAccounting {
        maker_turns: 0,
        per_case: BTreeMap::new(),
        serve_turns: 0,
        booster_turns: 0,
        i_star: None,
        max_s: ps.s_len(),
        f_at_i_star: None,
        max_f_phase2: 0,
        troublesome: 0,
        breaker_edges: 0,
        growth_events: 0,
        growth_violation: None,
        bounds: Vec::new(),
    };
    let mut last_len: Option<u32> = None;
    for line in &log.lines {
        let LogLine::Move(rec) = line else { continue };
        apply_move(&mut state, rec).map_err(|e| SimError::Log(format!("turn {}: {e}", rec.turn)))?;
        match rec.player {
            Player::Breaker => {
                for &v in &rec.promoted {
                    ps.absorb_vertex(v);
                }
            }
            Player::Maker => {
                acc.maker_turns += 1;
                let Some(label) = rec.case else {
                    return Err(SimError::Log(format!("turn {}: Maker move without case label", rec.turn)));
                };
                *acc.per_case.entry(label.to_string()).or_default() += 1;
                if label.phase == 2 && acc.i_star.is_none() {
                    acc.i_star = Some(rec.turn - 1);
                    acc.f_at_i_star = Some(ps.path_count());
                }
                match label.case {
                    Case::Serve => acc.serve_turns += 1,
                    Case::Booster => acc.booster_turns += 1,
                    Case::Join if label.phase == 1 => {
                        let e = rec.edges[0];
                        ps.join_paths(e.tail(), e.head())
                            .map_err(|e| SimError::Log(format!("turn {}: {e}", rec.turn)))?;
                    }
                    _ => {}
                }
                for &v in &rec.promoted {
                    ps.absorb_vertex(v);
                }
                if let Some(len) = rec.path_len {
                    if last_len.is_some_and(|l| len > l) {
                        acc.growth_events += 1;
                    }
                    last_len = Some(len);
                    let bound = ps.s_len() + 3 * ps.path_count();
                    if acc.growth_violation.is_none() && acc.growth_events as usize > bound {
                        acc.growth_violation = Some((rec.turn, acc.growth_events, bound));
                    }
                }
            }
        }
        acc.max_s = acc.max_s.max(ps.s_len());
        if acc.i_star.is_some() {
            acc.max_f_phase2 = acc.max_f_phase2.max(ps.path_count());
        }
    }
    acc.troublesome = state.troublesome().len();
    acc.breaker_edges = state.breaker_edges().len();

    let unit = scale(n);
    let p = &config.audit;
    let mut bound = |name: &str, value: f64, bound: f64| {
        acc.bounds.push(BoundCheck {
            name: name.to_string(),
            value,
            bound,
            ok: value <= bound,
        })
    };
    bound("total_turns", acc.maker_turns as f64, n as f64 + p.total_turn_coeff * unit);
    bound("max_s", acc.max_s as f64, config.s0_size as f64 + p.s_extra_coeff * unit);
    if let Some(f) = acc.f_at_i_star {
        bound("f_at_i_star", f as f64, p.f_coeff * unit);
    }
    bound("troublesome", acc.troublesome as f64, 2.0 * acc.breaker_edges as f64 / config.tau as f64);
    Ok(acc)
}

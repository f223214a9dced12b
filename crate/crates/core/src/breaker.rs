//! Breaker adversaries. Each claims `min(b, unclaimed)` edges per turn
//! (a script claims exactly what it lists).

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::board::{pair_from_index, Edge, GameState, Owner, Player};
use crate::error::GameError;
use crate::log::MoveRecord;
use crate::maker::{MakerState, Phase};
use crate::paths::PathSystem;
use crate::rotation;
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakerKind {
    /// Uniform unclaimed pairs without replacement.
    Random,
    /// Claims every edge at one target vertex, retargeting when it is dead.
    Isolator,
    /// Piles edges onto the vertex of highest danger that Maker must still serve.
    MaxDanger,
    /// Claims endpoint pairs of Maker's tracked path in Phase 2.
    PairKiller,
    /// Replays a fixed list of edges per turn.
    Scripted,
}

impl BreakerKind {
    pub const ALL_ADAPTIVE: [BreakerKind; 4] = [BreakerKind::Random, BreakerKind::Isolator, BreakerKind::MaxDanger, BreakerKind::PairKiller];

    pub fn name(self) -> &'static str {
        match self {
            BreakerKind::Random => "random",
            BreakerKind::Isolator => "isolator",
            BreakerKind::MaxDanger => "max_danger",
            BreakerKind::PairKiller => "pair_killer",
            BreakerKind::Scripted => "scripted",
        }
    }
}

impl fmt::Display for BreakerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BreakerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "random" => Ok(BreakerKind::Random),
            "isolator" => Ok(BreakerKind::Isolator),
            "max_danger" | "maxdanger" => Ok(BreakerKind::MaxDanger),
            "pair_killer" | "pairkiller" => Ok(BreakerKind::PairKiller),
            "scripted" => Ok(BreakerKind::Scripted),
            _ => Err(format!("unknown breaker `{s}`")),
        }
    }
}

/// What Breaker may look at besides the board.
#[derive(Clone, Copy)]
pub struct BreakerView<'a> {
    pub ps: &'a PathSystem,
    pub maker: &'a MakerState,
}

#[derive(Debug, Clone)]
pub struct BreakerPolicy {
    kind: BreakerKind,
    target: Option<Vertex>,
    /// Unclaimed neighbours of the isolator target, in claim order.
    queue: Vec<Vertex>,
    script: Vec<Vec<(Vertex, Vertex)>>,
}

impl BreakerPolicy {
    pub fn new(kind: BreakerKind) -> BreakerPolicy {
        BreakerPolicy {
            kind,
            target: None,
            queue: Vec::new(),
            script: Vec::new(),
        }
    }

    /// Turn `t` (1-based) claims `script[t - 1]`; turns past the end claim nothing.
    pub fn scripted(script: Vec<Vec<(Vertex, Vertex)>>) -> BreakerPolicy {
        BreakerPolicy {
            script,
            ..BreakerPolicy::new(BreakerKind::Scripted)
        }
    }

    pub fn kind(&self) -> BreakerKind {
        self.kind
    }

    /// Breaker's half-move. Leaves the board with Maker to move.
    pub fn breaker_turn(&mut self, state: &mut GameState, view: BreakerView<'_>, rng: &mut impl Rng) -> Result<MoveRecord, GameError> {
        let turn = state.turn();
        let quota = state.b().min(state.unclaimed_count());
        let mut edges = Vec::with_capacity(quota);
        match self.kind {
            BreakerKind::Random => random_claims(state, quota, rng, &mut edges)?,
            BreakerKind::Isolator => self.isolator(state, quota, rng, &mut edges)?,
            BreakerKind::MaxDanger => max_danger(state, quota, view.maker.quota(), &mut edges)?,
            BreakerKind::PairKiller => {
                pair_killer(state, view, quota, &mut edges)?;
                let rest = quota - edges.len();
                random_claims(state, rest, rng, &mut edges)?;
            }
            BreakerKind::Scripted => {
                let list = self.script.get(turn as usize - 1).cloned().unwrap_or_default();
                for (u, v) in list {
                    match state.claim_edge(Player::Breaker, u, v) {
                        Ok(e) => edges.push(e),
                        Err(e) => return Err(GameError::ReplayConflict { turn, detail: e.to_string() }),
                    }
                }
            }
        }
        state.end_breaker_move()?;
        Ok(MoveRecord {
            turn,
            player: Player::Breaker,
            edges,
            case: None,
            promoted: Vec::new(),
            path_len: None,
        })
    }

    fn isolator(&mut self, state: &mut GameState, quota: usize, rng: &mut impl Rng, edges: &mut Vec<Edge>) -> Result<(), GameError> {
        while edges.len() < quota {
            let alive = self.target.is_some_and(|t| state.d_m(t) < 2 && state.free_degree(t) > 0);
            if !alive {
                let Some(t) = isolator_target(state) else { break };
                self.target = Some(t);
                self.queue = (0..state.n() as Vertex).filter(|&w| w != t && state.is_unclaimed(t, w)).collect();
                self.queue.shuffle(rng);
            }
            let t = self.target.unwrap();
            while let Some(w) = self.queue.pop() {
                if state.is_unclaimed(t, w) {
                    edges.push(state.claim_edge(Player::Breaker, t, w)?);
                    break;
                }
            }
            if self.queue.is_empty() && state.free_degree(t) > 0 {
                // Maker may have taken queued pairs; rebuild on the next pass
                self.target = None;
            }
        }
        if edges.len() < quota {
            random_claims(state, quota - edges.len(), rng, edges)?;
        }
        Ok(())
    }
}

/// Minimum `d_M`, then most unclaimed incident pairs, then lowest index, among
/// vertices Maker has not yet secured with two edges.
fn isolator_target(state: &GameState) -> Option<Vertex> {
    (0..state.n() as Vertex)
        .filter(|&v| state.d_m(v) < 2 && state.free_degree(v) > 0)
        .min_by_key(|&v| (state.d_m(v), Reverse(state.free_degree(v)), v))
}

fn random_claims(state: &mut GameState, count: usize, rng: &mut impl Rng, edges: &mut Vec<Edge>) -> Result<(), GameError> {
    if count == 0 {
        return Ok(());
    }
    let total = state.pair_count();
    let free = state.unclaimed_count();
    if free * 8 >= total {
        let mut taken = 0;
        while taken < count {
            let idx = rng.gen_range(0..total);
            if state.owner_at(idx) == Owner::Unclaimed {
                let (u, v) = pair_from_index(idx);
                edges.push(state.claim_edge(Player::Breaker, u, v)?);
                taken += 1;
            }
        }
    } else {
        let pool: Vec<usize> = (0..total).filter(|&i| state.owner_at(i) == Owner::Unclaimed).collect();
        let chosen = rand::seq::index::sample(rng, pool.len(), count.min(pool.len()));
        for i in chosen.into_iter() {
            let (u, v) = pair_from_index(pool[i]);
            edges.push(state.claim_edge(Player::Breaker, u, v)?);
        }
    }
    Ok(())
}

fn max_danger(state: &mut GameState, quota: usize, k: u32, edges: &mut Vec<Edge>) -> Result<(), GameError> {
    let n = state.n() as Vertex;
    let mut live: BTreeSet<(i64, Reverse<Vertex>)> = (0..n)
        .filter(|&v| state.d_plus(v) < k && state.free_degree(v) > 0)
        .map(|v| (state.danger(v), Reverse(v)))
        .collect();
    while edges.len() < quota {
        let Some(&(dv, Reverse(v))) = live.last() else { break };
        let partner = live
            .iter()
            .rev()
            .map(|&(_, Reverse(w))| w)
            .find(|&w| w != v && state.is_unclaimed(v, w))
            .or_else(|| (0..n).find(|&w| w != v && state.is_unclaimed(v, w)));
        let Some(w) = partner else {
            live.remove(&(dv, Reverse(v)));
            continue;
        };
        let dw = state.danger(w);
        let w_live = live.remove(&(dw, Reverse(w)));
        live.remove(&(dv, Reverse(v)));
        edges.push(state.claim_edge(Player::Breaker, v, w)?);
        if state.free_degree(v) > 0 {
            live.insert((state.danger(v), Reverse(v)));
        }
        if w_live && state.free_degree(w) > 0 {
            live.insert((state.danger(w), Reverse(w)));
        }
    }
    if edges.len() < quota {
        // nothing left to pressure: take the lowest unclaimed pairs
        let total = state.pair_count();
        let mut idx = 0;
        while edges.len() < quota && idx < total {
            if state.owner_at(idx) == Owner::Unclaimed {
                let (u, v) = pair_from_index(idx);
                edges.push(state.claim_edge(Player::Breaker, u, v)?);
            }
            idx += 1;
        }
    }
    Ok(())
}

/// Unclaimed endpoint pairs of Maker's tracked path, `S_0`-pairs first.
fn pair_killer(state: &mut GameState, view: BreakerView<'_>, quota: usize, edges: &mut Vec<Edge>) -> Result<(), GameError> {
    if view.maker.phase() != Phase::Two {
        return Ok(());
    }
    let Some(tracked) = view.maker.tracked() else { return Ok(()) };
    let Ok(pairs) = rotation::endpoint_pairs(state, view.ps, &tracked.path, view.maker.params()) else {
        return Ok(());
    };
    let (mut core, mut rest): (Vec<_>, Vec<_>) = pairs
        .iter()
        .filter(|&(a, b)| state.owner(a, b) == Owner::Unclaimed)
        .partition(|&(a, b)| view.ps.in_s0(a) && view.ps.in_s0(b));
    core.append(&mut rest);
    for (a, b) in core.into_iter().take(quota) {
        edges.push(state.claim_edge(Player::Breaker, a, b)?);
    }
    Ok(())
}

//! Maker's two-phase strategy.
//!
//! Phase 1 builds the skeleton: troublesome vertices are served first, then
//! every vertex of `S` is topped up to `K` out-edges into `S_0`, then
//! available paths are joined. When nothing applies Maker moves to Phase 2 in
//! the same turn. Phase 2 tops up `S` and path endpoints, then adds boosters
//! that close a cycle on the tracked path until it is a Hamilton cycle.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::board::{GameState, Player};
use crate::config::GameConfig;
use crate::error::GameError;
use crate::log::{Case, CaseLabel, MoveRecord, Outcome};
use crate::paths::PathSystem;
use crate::rotation::{self, RotationParams, RotationRule, TrackedPath};
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    One,
    Two,
}

impl Phase {
    pub fn number(self) -> u8 {
        match self {
            Phase::One => 1,
            Phase::Two => 2,
        }
    }
}

/// Statistics from the most recent booster search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSearch {
    pub turn: u32,
    pub pairs: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone)]
pub struct MakerState {
    s0: Vec<Vertex>,
    phase: Phase,
    i_star: Option<u32>,
    tracked: Option<TrackedPath>,
    rng: ChaCha8Rng,
    quota: u32,
    params: RotationParams,
    /// Largest `d'_M` over all vertices at the moment Phase 1 ended.
    pub phase1_end_max_out: Option<u32>,
    pub last_search: Option<PairSearch>,
}

/// What Maker did on her half-move.
#[derive(Debug, Clone)]
pub enum MakerMove {
    /// One edge claimed; `end` is set when that edge completed a Hamilton cycle.
    Claimed { record: MoveRecord, end: Option<Outcome> },
    /// No edge claimed; the game is over.
    Finished(Outcome),
}

/// Sorted uniform sample of `size` vertices out of `0..n`.
pub fn choose_skeleton(n: usize, size: usize, rng: &mut impl Rng) -> Vec<Vertex> {
    let mut s0: Vec<Vertex> = sample(rng, n, size).into_iter().map(|v| v as Vertex).collect();
    s0.sort_unstable();
    s0
}

fn fail(state: &GameState, reason: impl Into<String>) -> MakerMove {
    MakerMove::Finished(Outcome::StrategyFailure {
        turn: state.turn(),
        reason: reason.into(),
    })
}

impl MakerState {
    pub fn new(config: &GameConfig, s0: Vec<Vertex>, rng: ChaCha8Rng) -> MakerState {
        let rule = if config.limited_only {
            RotationRule::Limited
        } else {
            RotationRule::Unrestricted
        };
        MakerState {
            s0,
            phase: Phase::One,
            i_star: None,
            tracked: None,
            rng,
            quota: config.quota,
            params: RotationParams {
                rule,
                max_states: config.rotation_budget,
            },
            phase1_end_max_out: None,
            last_search: None,
        }
    }

    pub fn s0(&self) -> &[Vertex] {
        &self.s0
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn i_star(&self) -> Option<u32> {
        self.i_star
    }
    pub fn tracked(&self) -> Option<&TrackedPath> {
        self.tracked.as_ref()
    }
    pub fn quota(&self) -> u32 {
        self.quota
    }
    pub fn params(&self) -> RotationParams {
        self.params
    }

    /// Troublesome vertex with `d_plus < K` of maximum danger, lowest index on ties.
    pub fn serve_target(&self, state: &GameState) -> Option<Vertex> {
        state
            .troublesome()
            .iter()
            .copied()
            .filter(|&v| state.d_plus(v) < self.quota)
            .max_by_key(|&v| (state.danger(v), std::cmp::Reverse(v)))
    }

    /// Case 2: claim `v -> w` for the most dangerous under-served vertex `v`
    /// and the least `w` outside `S`, then absorb `w`.
    fn serve_troublesome(&mut self, state: &mut GameState, ps: &mut PathSystem, v: Vertex, label: CaseLabel) -> Result<MakerMove, GameError> {
        let turn = state.turn();
        let w = (0..state.n() as Vertex).find(|&w| w != v && !ps.in_s(w) && state.is_unclaimed(v, w));
        let Some(w) = w else {
            return Ok(fail(state, "troublesome service exhausted"));
        };
        let e = state.claim_edge(Player::Maker, v, w)?;
        ps.absorb_vertex(w);
        Ok(MakerMove::Claimed {
            record: MoveRecord {
                turn,
                player: Player::Maker,
                edges: vec![e],
                case: Some(label),
                promoted: vec![w],
                path_len: None,
            },
            end: None,
        })
    }

    /// Claim `v -> w*` with `w*` uniform over `S_0` minus `v` and minus pairs already claimed.
    fn top_up(&mut self, state: &mut GameState, v: Vertex, label: CaseLabel) -> Result<MakerMove, GameError> {
        let turn = state.turn();
        let cands: Vec<Vertex> = self.s0.iter().copied().filter(|&w| w != v && state.is_unclaimed(v, w)).collect();
        if cands.is_empty() {
            return Ok(fail(state, format!("S_0 saturated for {v}")));
        }
        let w = cands[self.rng.gen_range(0..cands.len())];
        let e = state.claim_edge(Player::Maker, v, w)?;
        Ok(MakerMove::Claimed {
            record: MoveRecord {
                turn,
                player: Player::Maker,
                edges: vec![e],
                case: Some(label),
                promoted: Vec::new(),
                path_len: self.tracked.as_ref().map(|t| t.len() as u32),
            },
            end: None,
        })
    }

    fn top_up_target_s(&self, state: &GameState, ps: &PathSystem) -> Option<Vertex> {
        ps.s().find(|&v| state.d_out(v) < self.quota)
    }

    /// Maker's half-move. Troublesome vertices must already be refreshed and absorbed.
    pub fn maker_turn(&mut self, state: &mut GameState, ps: &mut PathSystem) -> Result<MakerMove, GameError> {
        if state.mover() != Player::Maker {
            return Err(GameError::WrongMover {
                expected: state.mover(),
                got: Player::Maker,
            });
        }
        match self.phase {
            Phase::One => self.phase_one(state, ps),
            Phase::Two => self.phase_two(state, ps, false),
        }
    }

    fn phase_one(&mut self, state: &mut GameState, ps: &mut PathSystem) -> Result<MakerMove, GameError> {
        if let Some(v) = self.serve_target(state) {
            return self.serve_troublesome(state, ps, v, CaseLabel::new(1, Case::Serve));
        }
        if let Some(v) = self.top_up_target_s(state, ps) {
            return self.top_up(state, v, CaseLabel::new(1, Case::TopUp));
        }
        if let Some((u, v)) = ps.find_uv_available(state) {
            let turn = state.turn();
            let e = state.claim_edge(Player::Maker, u, v)?;
            ps.join_paths(u, v)?;
            return Ok(MakerMove::Claimed {
                record: MoveRecord {
                    turn,
                    player: Player::Maker,
                    edges: vec![e],
                    case: Some(CaseLabel::new(1, Case::Join)),
                    promoted: Vec::new(),
                    path_len: None,
                },
                end: None,
            });
        }
        self.phase = Phase::Two;
        self.i_star = Some(state.turn() - 1);
        self.phase1_end_max_out = (0..state.n() as Vertex).map(|v| state.d_out(v)).max();
        self.tracked = Some(rotation::initial_tracked_path(state, ps, state.turn(), self.params));
        self.phase_two(state, ps, true)
    }

    fn phase_two(&mut self, state: &mut GameState, ps: &mut PathSystem, transition: bool) -> Result<MakerMove, GameError> {
        let label = |case| CaseLabel { phase: 2, case, transition };
        if let Some(v) = self.serve_target(state) {
            let mv = self.serve_troublesome(state, ps, v, label(Case::Serve))?;
            return Ok(self.with_path_len(mv));
        }
        if let Some(v) = self.top_up_target_s(state, ps) {
            return self.top_up(state, v, label(Case::TopUp));
        }
        if let Some(v) = ps.path_ends().into_iter().find(|&v| state.d_out(v) < self.quota) {
            return self.top_up(state, v, label(Case::Join));
        }
        self.structural(state, ps, label(Case::Booster))
    }

    fn with_path_len(&self, mut mv: MakerMove) -> MakerMove {
        if let MakerMove::Claimed { record, .. } = &mut mv {
            record.path_len = self.tracked.as_ref().map(|t| t.len() as u32);
        }
        mv
    }

    /// Phase 2 Case 1.2b: grow the tracked path, then claim a booster or end the game.
    fn structural(&mut self, state: &mut GameState, ps: &mut PathSystem, label: CaseLabel) -> Result<MakerMove, GameError> {
        let n = state.n();
        let turn = state.turn();
        let mut tracked = self.tracked.take().expect("tracked path exists in phase 2");
        // a Maker-owned endpoint pair is a cycle Maker already has; at most
        // one per vertex can be consumed before the path must grow
        for _ in 0..=n {
            tracked = rotation::advance_tracked_path(state, ps, &tracked, turn, self.params);
            if tracked.cycle_closed {
                self.tracked = Some(tracked);
                let t = self.tracked.as_ref().unwrap();
                if t.len() == n {
                    return Ok(MakerMove::Finished(Outcome::MakerWin { cycle: t.path.clone() }));
                }
                return Ok(fail(state, "stalled with closed cycle"));
            }
            let path = match rotation::normalize_endpoints(state, ps, &tracked.path) {
                Ok(p) => p,
                Err(e) => {
                    self.tracked = Some(tracked);
                    return Ok(fail(state, format!("endpoint normalization: {e}")));
                }
            };
            let quota = self.quota;
            let eligible = |a: Vertex, b: Vertex| can_take_out_edge(state, quota, a) || can_take_out_edge(state, quota, b);
            let search = match rotation::find_booster(state, ps, &path, self.params, eligible) {
                Ok(s) => s,
                Err(e) => {
                    self.tracked = Some(tracked);
                    return Ok(fail(state, format!("booster search: {e}")));
                }
            };
            self.last_search = Some(PairSearch {
                turn,
                pairs: search.pairs.len(),
                exhaustive: search.pairs.exhaustive,
            });
            if let Some((_, _, cyc)) = search.owned_pair {
                tracked = TrackedPath {
                    path: cyc,
                    generation: turn,
                    cycle_closed: true,
                };
                if tracked.len() == n {
                    self.tracked = Some(tracked.clone());
                    return Ok(MakerMove::Finished(Outcome::MakerWin { cycle: tracked.path }));
                }
                tracked.cycle_closed = false;
                continue;
            }
            let Some((tail, head, cyc)) = search.booster else {
                self.tracked = Some(tracked);
                return Ok(fail(state, "phase 2 ended without Hamilton cycle"));
            };
            let (tail, head) = self.orient(state, tail, head);
            let e = state.claim_edge(Player::Maker, tail, head)?;
            let spanning = cyc.len() == n;
            self.tracked = Some(TrackedPath {
                path: cyc,
                generation: turn,
                cycle_closed: true,
            });
            let end = spanning.then(|| Outcome::MakerWin {
                cycle: self.tracked.as_ref().unwrap().path.clone(),
            });
            return Ok(MakerMove::Claimed {
                record: MoveRecord {
                    turn,
                    player: Player::Maker,
                    edges: vec![e],
                    case: Some(label),
                    promoted: Vec::new(),
                    path_len: Some(self.tracked.as_ref().unwrap().len() as u32),
                },
                end,
            });
        }
        self.tracked = Some(tracked);
        Ok(fail(state, "booster search did not settle"))
    }

    fn orient(&self, state: &GameState, a: Vertex, b: Vertex) -> (Vertex, Vertex) {
        if can_take_out_edge(state, self.quota, a) {
            (a, b)
        } else {
            (b, a)
        }
    }
}

fn can_take_out_edge(state: &GameState, quota: u32, v: Vertex) -> bool {
    !state.is_troublesome(v) || state.d_plus(v) < quota
}

//! Game runner: alternates Breaker and Maker half-moves, logs every move and
//! evaluates the per-turn invariants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::audit::{self, ids, AuditReport};
use crate::board::{GameState, Player};
use crate::breaker::{BreakerPolicy, BreakerView};
use crate::config::{AuditLevel, GameConfig};
use crate::error::SimError;
use crate::log::{Case, Frame, GameLog, LogLine, MoveRecord, Outcome};
use crate::maker::{choose_skeleton, MakerMove, MakerState, Phase};
use crate::paths::{Absorb, PathSystem};
use crate::rotation::validate_path;
use crate::Vertex;

/// Everything a finished game produced.
#[derive(Debug, Clone)]
pub struct GameRun {
    pub log: GameLog,
    pub outcome: Outcome,
    pub report: AuditReport,
    pub state: GameState,
    pub maker_turns: u32,
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream `stream` of a game seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}

pub const SKELETON_STREAM: u64 = 1;
pub const MAKER_STREAM: u64 = 2;
pub const BREAKER_STREAM: u64 = 3;
pub const AUDIT_STREAM: u64 = 4;

struct Checker {
    level: AuditLevel,
    report: AuditReport,
    on_path: Vec<bool>,
    on_count: usize,
    tracked_gen: Option<(u32, usize)>,
    rng: ChaCha8Rng,
}

impl Checker {
    fn enabled(&self) -> bool {
        self.level != AuditLevel::Off
    }

    #[allow(clippy::too_many_arguments)]
    fn after_maker(
        &mut self,
        state: &GameState,
        ps: &PathSystem,
        maker: &MakerState,
        rec: &MoveRecord,
        expect_serve: bool,
        phase_before: Phase,
        cfg: &GameConfig,
    ) {
        let turn = rec.turn;
        let k = cfg.quota;
        let label = rec.case.expect("Maker moves carry a label");
        let e = rec.edges[0];
        let (t, h) = (e.tail(), e.head());
        let r = &mut self.report;
        r.check(
            ids::CASE_EXCLUSION,
            turn,
            (label.is_serve() != expect_serve).then(|| format!("label {label} but under-served troublesome vertex present: {expect_serve}")),
        );
        r.check(
            ids::D_PLUS_QUOTA,
            turn,
            (state.d_plus(t) > k).then(|| format!("d_plus({t}) = {} > {k}", state.d_plus(t))),
        );
        if label.is_serve() {
            r.check(
                ids::SERVE_TAIL_TROUBLESOME,
                turn,
                (!state.is_troublesome(t)).then(|| format!("serve tail {t} not troublesome")),
            );
        }
        let head_ok = match label.case {
            Case::TopUp => ps.in_s0(h),
            Case::Join if label.phase == 2 => ps.in_s0(h),
            Case::Serve => ps.in_s(h),
            _ => true,
        };
        r.check(
            ids::HEAD_PLACEMENT,
            turn,
            (!head_ok).then(|| format!("{label} edge {t}->{h} has misplaced head")),
        );
        r.check(ids::DEGREE_SPLIT, turn, state.split_mismatch(t));
        if phase_before == Phase::One && maker.phase() == Phase::Two {
            let max_out = maker.phase1_end_max_out.unwrap_or(0);
            r.check(
                ids::PHASE1_CAP,
                turn,
                (max_out > 2 * k).then(|| format!("max d'_M at phase 1 end is {max_out} > {}", 2 * k)),
            );
        }
        r.check(ids::PARTITION, turn, ps.partition_violation());
        r.check(ids::INTERIOR_DEGREE, turn, ps.interior_degree_violation(state));
        r.check(ids::PATH_EDGES, turn, ps.path_edge_violation(state));
        if self.level == AuditLevel::Full {
            r.check(ids::COUNTERS, turn, state.recount_mismatch());
        }
        self.tracked(state, ps, maker, turn);
    }

    fn tracked(&mut self, state: &GameState, ps: &PathSystem, maker: &MakerState, turn: u32) {
        let Some(tp) = maker.tracked() else { return };
        let key = (tp.generation, tp.len());
        if self.tracked_gen == Some(key) {
            return;
        }
        self.tracked_gen = Some(key);
        let r = &mut self.report;
        r.check(ids::TRACKED_PATH, turn, validate_path(state, &tp.path).err().map(|e| e.to_string()));
        let kept = tp.path.iter().filter(|&&v| self.on_path[v as usize]).count();
        r.check(
            ids::TRACKED_MONOTONE,
            turn,
            (kept != self.on_count).then(|| format!("tracked path lost {} vertices", self.on_count - kept)),
        );
        let mut fresh: Vec<Vertex> = Vec::new();
        for &v in &tp.path {
            if !self.on_path[v as usize] {
                fresh.push(v);
            }
        }
        for &v in &fresh {
            self.on_path[v as usize] = true;
        }
        self.on_count += fresh.len();
        let mut absorbed_ok = None;
        for &v in &fresh {
            if !ps.is_interior(v) {
                continue;
            }
            let q = ps.path(ps.path_of(v).unwrap()).unwrap();
            if let Some(&miss) = q.iter().skip(1).take(q.len() - 2).find(|&&x| !self.on_path[x as usize]) {
                absorbed_ok = Some(format!(
                    "interior vertex {v} entered the tracked path without interior vertex {miss} of its path"
                ));
                break;
            }
        }
        r.check(ids::INTERIOR_ABSORPTION, turn, absorbed_ok);
    }

    fn structural_audits(&mut self, state: &GameState, ps: &PathSystem, maker: &MakerState, cfg: &GameConfig, turn: u32) {
        let p = &cfg.audit;
        if let Some(search) = maker.last_search.filter(|s| s.turn == turn) {
            let unit = crate::config::scale(cfg.n);
            let threshold = p.pair_coeff * (cfg.n as f64) * unit;
            self.report
                .pairs
                .push(audit::pair_count_audit(turn, search.pairs, search.exhaustive, threshold));
        }
        let exp = audit::expansion_audit(state, ps, p, p.expansion_samples, &mut self.rng);
        self.report.expansion.push(exp);
        self.report.connectivity.push(audit::connectivity_audit(state, ps));
    }
}

fn game_err(turn: u32) -> impl Fn(crate::error::GameError) -> SimError {
    move |source| SimError::Game { turn, source }
}

/// Play one game with the given Breaker.
pub fn run_game(config: &GameConfig, breaker: BreakerPolicy) -> Result<GameRun, SimError> {
    let name = breaker.kind().name().to_string();
    run_game_labelled(config, breaker, &name)
}

/// Re-run a logged game with Breaker's logged moves as a script. Maker's
/// choices depend only on the seed and the board, so the log comes out identical.
pub fn replay_game(log: &GameLog) -> Result<GameRun, SimError> {
    let (config, name, _) = log.header().ok_or_else(|| SimError::Log("missing header".into()))?;
    let script: Vec<Vec<(Vertex, Vertex)>> = log
        .moves()
        .filter(|m| m.player == Player::Breaker)
        .map(|m| m.edges.iter().map(|e| (e.0, e.1)).collect())
        .collect();
    let config = config.clone();
    let name = name.to_string();
    run_game_labelled(&config, BreakerPolicy::scripted(script), &name)
}

/// Rebuild the final board from a log and check it against the digest on the outcome line.
pub fn replay_state(log: &GameLog) -> Result<GameState, SimError> {
    let state = audit::replay_board(log)?;
    let recorded = log.lines.iter().rev().find_map(|l| match l {
        LogLine::Outcome { digest, .. } => Some(digest.clone()),
        _ => None,
    });
    if let Some(d) = recorded {
        if d != state.digest() {
            return Err(SimError::Log(format!("replayed digest {} differs from logged {d}", state.digest())));
        }
    }
    Ok(state)
}

fn run_game_labelled(config: &GameConfig, mut breaker: BreakerPolicy, breaker_name: &str) -> Result<GameRun, SimError> {
    config.validate()?;
    let n = config.n;
    let mut state = GameState::new(config)?;
    let s0 = choose_skeleton(n, config.s0_size, &mut stream_rng(config.seed, SKELETON_STREAM));
    let mut ps = PathSystem::new(n, &s0).map_err(game_err(0))?;
    let mut maker = MakerState::new(config, s0.clone(), stream_rng(config.seed, MAKER_STREAM));
    let mut brng = stream_rng(config.seed, BREAKER_STREAM);
    let mut checker = Checker {
        level: config.audit_level,
        report: AuditReport::default(),
        on_path: vec![false; n],
        on_count: 0,
        tracked_gen: None,
        rng: stream_rng(config.seed, AUDIT_STREAM),
    };
    let mut log = GameLog::new();
    log.push(LogLine::Header {
        config: config.clone(),
        breaker: breaker_name.to_string(),
        s0,
    });
    let mut maker_turns: u32 = 0;
    let outcome = loop {
        if maker_turns as usize >= config.max_turns {
            break Outcome::Timeout { turn: state.turn() };
        }
        let turn = state.turn();
        let mut rec = breaker
            .breaker_turn(&mut state, BreakerView { ps: &ps, maker: &maker }, &mut brng)
            .map_err(game_err(turn))?;
        for v in state.refresh_troublesome() {
            if ps.absorb_vertex(v) == Absorb::Absorbed {
                rec.promoted.push(v);
            }
        }
        log.push(LogLine::Move(rec));

        let expect_serve = maker.serve_target(&state).is_some();
        let phase_before = maker.phase();
        match maker.maker_turn(&mut state, &mut ps).map_err(game_err(turn))? {
            MakerMove::Finished(o) => {
                if checker.enabled() && maker.phase() == Phase::Two {
                    checker.structural_audits(&state, &ps, &maker, config, turn);
                }
                break o;
            }
            MakerMove::Claimed { record, end } => {
                maker_turns += 1;
                if checker.enabled() {
                    checker.after_maker(&state, &ps, &maker, &record, expect_serve, phase_before, config);
                    if record.case.is_some_and(|c| c.case == Case::Booster) {
                        checker.structural_audits(&state, &ps, &maker, config, turn);
                    }
                }
                log.push(LogLine::Move(record));
                if config.audit_level == AuditLevel::Full {
                    log.push(LogLine::Frame(Frame {
                        turn,
                        s: ps.s().collect(),
                        paths: ps.paths().map(|(_, p)| p.iter().copied().collect()).collect(),
                        tracked: maker.tracked().map(|t| t.path.clone()).unwrap_or_default(),
                        digest: state.digest(),
                    }));
                }
                if let Some(o) = end {
                    break o;
                }
            }
        }
    };
    log.push(LogLine::Outcome {
        outcome: outcome.clone(),
        maker_turns,
        digest: state.digest(),
    });

    let mut report = checker.report;
    if config.audit_level != AuditLevel::Off {
        let acc = audit::turn_accounting(&log)?;
        report.check(
            ids::GROWTH_BOUND,
            state.turn(),
            acc.growth_violation.map(|(t, g, b)| format!("turn {t}: {g} growth events > |S|+3|F| = {b}")),
        );
        report.accounting = Some(acc);
        report.potential = audit::potential_trace(&log).ok();
        if outcome.is_win() {
            report.hamilton = Some(audit::verify_hamilton(&log));
        }
    }
    Ok(GameRun {
        log,
        outcome,
        report,
        state,
        maker_turns,
    })
}

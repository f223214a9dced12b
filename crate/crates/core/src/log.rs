//! JSON-lines game log: a header, one record per half-move, optional audit
//! frames, and a closing outcome line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{Edge, Player};
use crate::config::GameConfig;
use crate::error::SimError;
use crate::Vertex;

/// Which branch of Maker's decision tree produced a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Top up a vertex of `S` (both phases).
    TopUp,
    /// Phase 1: join two available paths. Phase 2: top up a path endpoint.
    Join,
    /// Phase 2 booster closing a cycle on the tracked path.
    Booster,
    /// Serve a troublesome vertex.
    Serve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseLabel {
    pub phase: u8,
    pub case: Case,
    /// The move that ended Phase 1 in the same turn.
    pub transition: bool,
}

impl CaseLabel {
    pub const fn new(phase: u8, case: Case) -> CaseLabel {
        CaseLabel {
            phase,
            case,
            transition: false,
        }
    }

    pub fn is_serve(self) -> bool {
        self.case == Case::Serve
    }
}

const TRANSITION_PREFIX: &str = "P1.C1.2b+";

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.transition {
            f.write_str(TRANSITION_PREFIX)?;
        }
        let c = match self.case {
            Case::TopUp => "C1.1",
            Case::Join => "C1.2a",
            Case::Booster => "C1.2b(i)",
            Case::Serve => "C2",
        };
        write!(f, "P{}.{}", self.phase, c)
    }
}

impl FromStr for CaseLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (transition, rest) = match s.strip_prefix(TRANSITION_PREFIX) {
            Some(r) => (true, r),
            None => (false, s),
        };
        let (phase, case) = match rest {
            "P1.C1.1" => (1, Case::TopUp),
            "P1.C1.2a" => (1, Case::Join),
            "P1.C2" => (1, Case::Serve),
            "P2.C1.1" => (2, Case::TopUp),
            "P2.C1.2a" => (2, Case::Join),
            "P2.C1.2b(i)" => (2, Case::Booster),
            "P2.C2" => (2, Case::Serve),
            _ => return Err(format!("unknown case label `{s}`")),
        };
        if transition && phase != 2 {
            return Err(format!("transition label must continue in phase 2: `{s}`"));
        }
        Ok(CaseLabel { phase, case, transition })
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CaseLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One half-move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub turn: u32,
    pub player: Player,
    /// Maker edges are `[tail, head]`; Breaker edges are `[min, max]`.
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseLabel>,
    /// Vertices moved into `S` during this half-move.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub promoted: Vec<Vertex>,
    /// Length of Maker's tracked path after her move (Phase 2 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_len: Option<u32>,
}

/// Path-system snapshot written at full audit level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub turn: u32,
    pub s: Vec<Vertex>,
    pub paths: Vec<Vec<Vertex>>,
    pub tracked: Vec<Vertex>,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Outcome {
    /// Hamilton cycle certificate: consecutive vertices plus the closing edge.
    MakerWin {
        cycle: Vec<Vertex>,
    },
    StrategyFailure {
        turn: u32,
        reason: String,
    },
    Timeout {
        turn: u32,
    },
}

impl Outcome {
    pub fn is_win(&self) -> bool {
        matches!(self, Outcome::MakerWin { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Outcome::MakerWin { .. } => "maker_win",
            Outcome::StrategyFailure { .. } => "strategy_failure",
            Outcome::Timeout { .. } => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogLine {
    Header { config: GameConfig, breaker: String, s0: Vec<Vertex> },
    Move(MoveRecord),
    Frame(Frame),
    Outcome { outcome: Outcome, maker_turns: u32, digest: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GameLog {
    pub lines: Vec<LogLine>,
}

impl GameLog {
    pub fn new() -> GameLog {
        GameLog::default()
    }

    pub fn push(&mut self, line: LogLine) {
        self.lines.push(line);
    }

    pub fn header(&self) -> Option<(&GameConfig, &str, &[Vertex])> {
        self.lines.iter().find_map(|l| match l {
            LogLine::Header { config, breaker, s0 } => Some((config, breaker.as_str(), s0.as_slice())),
            _ => None,
        })
    }

    pub fn moves(&self) -> impl Iterator<Item = &MoveRecord> + '_ {
        self.lines.iter().filter_map(|l| match l {
            LogLine::Move(m) => Some(m),
            _ => None,
        })
    }

    pub fn maker_moves(&self) -> impl Iterator<Item = &MoveRecord> + '_ {
        self.moves().filter(|m| m.player == Player::Maker)
    }

    pub fn frames(&self) -> impl Iterator<Item = &Frame> + '_ {
        self.lines.iter().filter_map(|l| match l {
            LogLine::Frame(f) => Some(f),
            _ => None,
        })
    }

    pub fn outcome(&self) -> Option<&Outcome> {
        self.lines.iter().rev().find_map(|l| match l {
            LogLine::Outcome { outcome, .. } => Some(outcome),
            _ => None,
        })
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&serde_json::to_string(line).expect("log lines serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<GameLog, SimError> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let line = serde_json::from_str(raw).map_err(|e| SimError::Log(format!("line {}: {e}", i + 1)))?;
            lines.push(line);
        }
        Ok(GameLog { lines })
    }

    pub fn write_to(&self, path: &std::path::Path) -> Result<(), SimError> {
        std::fs::write(path, self.to_jsonl())?;
        Ok(())
    }

    pub fn read_from(path: &std::path::Path) -> Result<GameLog, SimError> {
        GameLog::from_jsonl(&std::fs::read_to_string(path)?)
    }
}

use thiserror::Error;

use crate::board::{Owner, Player};
use crate::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("n = {0} is too small (need n >= 3)")]
    TooFewVertices(usize),
    #[error("bias b = {b} out of range 1..={max} (b <= n - 2)")]
    Bias { b: usize, max: usize },
    #[error("troublesome threshold tau = {tau} out of range (0 < tau < n = {n})")]
    Tau { tau: u32, n: usize },
    #[error("quota K must be at least 1")]
    Quota,
    #[error("initial skeleton size {s0} out of range (0 < s0 < n = {n})")]
    SkeletonSize { s0: usize, n: usize },
    #[error("max_turns = {max_turns} must be at least n = {n}")]
    MaxTurns { max_turns: usize, n: usize },
    #[error("invalid parameter: {0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("vertex {0} is not on the board")]
    NoSuchVertex(Vertex),
    #[error("loop edge at vertex {0}")]
    Loop(Vertex),
    #[error("edge {{{0},{1}}} already owned by {2:?}")]
    IllegalMove(Vertex, Vertex, Owner),
    #[error("it is {expected:?}'s half-move, not {got:?}'s")]
    WrongMover { expected: Player, got: Player },
    #[error("Breaker already claimed {0} edges this half-move")]
    BiasExceeded(usize),
    #[error("scripted Breaker conflict at turn {turn}: {detail}")]
    ReplayConflict { turn: u32, detail: String },
    #[error("internal strategy error: {0}")]
    Strategy(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("not a Maker path: {0}")]
    NotMakerPath(String),
    #[error("path contains no vertex of S")]
    NoSkeletonVertex,
    #[error("could not move both endpoints into S': {0}")]
    NormalizationFailed(String),
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("internal invariant violation at turn {turn}: {detail} (seed {seed})")]
    Internal { turn: u32, seed: u64, detail: String },
    #[error("turn {turn}: {source}")]
    Game { turn: u32, source: GameError },
    #[error("log error: {0}")]
    Log(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

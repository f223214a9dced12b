//! Simulator for the biased Maker-Breaker Hamilton cycle game on the complete graph.
//!
//! Breaker claims `b` edges per turn, Maker claims one, Breaker moves first.
//! Maker plays a two-phase strategy: she first builds a skeleton (a set `S`
//! of well-connected vertices plus a family of vertex-disjoint paths covering
//! the rest), then repeatedly closes cycles on a tracked long path with
//! "booster" edges until the path is spanning and closed into a Hamilton cycle.
//!
//! Every quantitative claim about that execution is checked by the [`audit`]
//! layer, and games are fully reproducible from `(config, seed, breaker)`.

pub mod audit;
pub mod board;
pub mod breaker;
pub mod config;
pub mod error;
pub mod log;
pub mod maker;
pub mod paths;
pub mod rotation;
pub mod sim;
pub mod sweep;

pub use board::{Edge, GameState, Owner, Player};
pub use breaker::{BreakerKind, BreakerPolicy};
pub use config::{AuditLevel, AuditParams, GameConfig, StrategyCoeffs};
pub use error::{ConfigError, GameError, RotationError, SimError};
pub use log::{CaseLabel, GameLog, LogLine, MoveRecord, Outcome};
pub use maker::{MakerState, Phase};
pub use paths::PathSystem;
pub use rotation::{RotationClosure, RotationParams, RotationRule, TrackedPath};
pub use sim::{run_game, GameRun};

/// Vertex index on the board `0..n`.
pub type Vertex = u32;

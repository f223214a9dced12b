use serde::{Deserialize, Serialize};

use super::replay_board;
use crate::log::{GameLog, Outcome};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonVerdict {
    pub pass: bool,
    pub detail: String,
}

/// Check the win certificate against Maker's edges rebuilt from the log.
pub fn verify_hamilton(log: &GameLog) -> HamiltonVerdict {
    let verdict = |pass: bool, detail: String| HamiltonVerdict { pass, detail };
    let Some(Outcome::MakerWin { cycle }) = log.outcome() else {
        return verdict(false, "log does not claim a Maker win".into());
    };
    let state = match replay_board(log) {
        Ok(s) => s,
        Err(e) => return verdict(false, format!("replay failed: {e}")),
    };
    let n = state.n();
    if cycle.len() != n {
        return verdict(false, format!("certificate has {} vertices, board has {n}", cycle.len()));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return verdict(false, format!("vertex {v} repeated or out of range"));
        }
    }
    for i in 0..n {
        let (u, v) = (cycle[i], cycle[(i + 1) % n]);
        if !state.is_maker(u, v) {
            return verdict(false, format!("certificate edge {u}-{v} is not Maker's"));
        }
    }
    verdict(true, format!("spanning cycle on {n} vertices"))
}

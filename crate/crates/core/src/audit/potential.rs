use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{apply_move, board_for};
use crate::board::{GameState, Owner, Player};
use crate::error::SimError;
use crate::log::{GameLog, LogLine};
use crate::Vertex;

/// One serve turn inside a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialStep {
    pub turn: u32,
    /// Vertex served this turn (`a_j`).
    pub tail: Vertex,
    /// `|A_j|`, the distinct vertices served from this turn to the end of the run.
    pub set_size: usize,
    /// `Σ_{x ∈ A_j} (d_B(x) - |N_B(x) ∩ A_j| - b·d⁺(x))` at Maker's decision time.
    pub sum: i64,
    pub value: f64,
    /// `p(j) + b/|A_j| + 2 - p(j+1)`; absent on the last step.
    pub margin: Option<f64>,
    pub step_ok: bool,
}

/// A maximal run of consecutive serve turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialTrace {
    pub start_turn: u32,
    pub end_turn: u32,
    pub steps: Vec<PotentialStep>,
    /// `p(1) + 2|A_1| + b·H_{|A_1|}`.
    pub aggregate_bound: f64,
    /// `aggregate_bound - p(k)`.
    pub aggregate_margin: f64,
    pub aggregate_ok: bool,
}

impl PotentialTrace {
    pub fn holds(&self) -> bool {
        self.aggregate_ok && self.steps.iter().all(|s| s.step_ok)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn set_sum(state: &GameState, set: &[Vertex]) -> i64 {
    let b = state.b() as i64;
    set.iter()
        .map(|&x| {
            let inside = set.iter().filter(|&&y| y != x && state.owner(x, y) == Owner::Breaker).count() as i64;
            state.d_b(x) as i64 - inside - b * state.d_plus(x) as i64
        })
        .sum()
}

fn ratio(num: i64, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Potential traces of every maximal run of serve turns in `log`.
pub fn potential_trace(log: &GameLog) -> Result<Vec<PotentialTrace>, SimError> {
    if log.header().is_none() {
        return Err(SimError::Log("audit unavailable: log has no header".into()));
    }
    // runs of consecutive serve turns, as (line index, turn, tail)
    let mut runs: Vec<Vec<(usize, u32, Vertex)>> = Vec::new();
    let mut open = false;
    for (i, line) in log.lines.iter().enumerate() {
        let LogLine::Move(rec) = line else { continue };
        if rec.player != Player::Maker {
            continue;
        }
        let serve = rec.case.is_some_and(|c| c.is_serve());
        if serve {
            let tail = rec
                .edges
                .first()
                .ok_or_else(|| SimError::Log(format!("turn {}: empty Maker move", rec.turn)))?
                .tail();
            if !open {
                runs.push(Vec::new());
            }
            runs.last_mut().unwrap().push((i, rec.turn, tail));
        }
        open = serve;
    }
    // A_j for every step, keyed by line index
    let mut at_line: HashMap<usize, (usize, usize, Vec<Vertex>)> = HashMap::new();
    for (r, run) in runs.iter().enumerate() {
        let mut suffix: BTreeSet<Vertex> = BTreeSet::new();
        for (j, &(line, _, tail)) in run.iter().enumerate().rev() {
            suffix.insert(tail);
            at_line.insert(line, (r, j, suffix.iter().copied().collect()));
        }
    }
    let mut sums: Vec<Vec<(i64, usize)>> = runs.iter().map(|r| vec![(0, 0); r.len()]).collect();
    let mut state = board_for(log)?;
    for (i, line) in log.lines.iter().enumerate() {
        let LogLine::Move(rec) = line else { continue };
        if let Some((r, j, set)) = at_line.get(&i) {
            sums[*r][*j] = (set_sum(&state, set), set.len());
        }
        apply_move(&mut state, rec).map_err(|e| SimError::Log(format!("turn {}: {e}", rec.turn)))?;
    }

    let b = state.b() as i64;
    let mut traces = Vec::with_capacity(runs.len());
    for (run, sums) in runs.iter().zip(&sums) {
        let k = run.len();
        let mut steps = Vec::with_capacity(k);
        for j in 0..k {
            let (s, m) = sums[j];
            let (margin, step_ok) = if j + 1 < k {
                let (s1, m1) = sums[j + 1];
                // p(j+1) <= p(j) + b/|A_j| + 2, cleared of denominators
                let lhs = s1 as i128 * m as i128;
                let rhs = (s + b + 2 * m as i64) as i128 * m1 as i128;
                let margin = (s + b + 2 * m as i64) as f64 / m as f64 - s1 as f64 / m1 as f64;
                (Some(margin), lhs <= rhs)
            } else {
                (None, true)
            };
            steps.push(PotentialStep {
                turn: run[j].1,
                tail: run[j].2,
                set_size: m,
                sum: s,
                value: s as f64 / m as f64,
                margin,
                step_ok,
            });
        }
        let (s1, m1) = sums[0];
        let (sk, mk) = sums[k - 1];
        let mut harmonic = BigRational::from_integer(BigInt::from(0));
        for r in 1..=m1 {
            harmonic += ratio(1, r);
        }
        let bound = ratio(s1, m1) + BigRational::from_integer(BigInt::from(2 * m1 as i64)) + harmonic * BigInt::from(b);
        let pk = ratio(sk, mk);
        let margin = &bound - &pk;
        traces.push(PotentialTrace {
            start_turn: run[0].1,
            end_turn: run[k - 1].1,
            steps,
            aggregate_bound: bound.to_f64().unwrap_or(f64::NAN),
            aggregate_margin: margin.to_f64().unwrap_or(f64::NAN),
            aggregate_ok: pk <= bound,
        });
    }
    Ok(traces)
}

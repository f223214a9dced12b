//! Seeded `(n, b)` sweeps with a fixed-column CSV summary.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::breaker::{BreakerKind, BreakerPolicy};
use crate::config::{bias_from_beta, scale, AuditLevel, AuditParams, GameConfig, StrategyCoeffs};
use crate::error::SimError;
use crate::sim::{run_game, splitmix64, GameRun};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasRule {
    Absolute(usize),
    /// `b = floor(beta * n / ln n)`.
    Beta(f64),
}

impl BiasRule {
    pub fn bias(self, n: usize) -> usize {
        match self {
            BiasRule::Absolute(b) => b,
            BiasRule::Beta(beta) => bias_from_beta(n, beta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub ns: Vec<usize>,
    pub bias: BiasRule,
    pub breaker: BreakerKind,
    pub seeds: u64,
    pub master_seed: u64,
    pub coeffs: StrategyCoeffs,
    pub audit_level: AuditLevel,
    pub audit: AuditParams,
    pub rotation_budget: usize,
    pub limited_only: bool,
    /// Max Maker turns as a multiple of `n`.
    pub max_turn_factor: usize,
    pub out_dir: Option<PathBuf>,
    /// Write every game's JSONL log under `out_dir/logs`.
    pub write_logs: bool,
    /// 0 means one worker per available core.
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(ns: Vec<usize>, bias: BiasRule, breaker: BreakerKind, seeds: u64) -> SweepSpec {
        SweepSpec {
            ns,
            bias,
            breaker,
            seeds,
            master_seed: 0,
            coeffs: StrategyCoeffs::default(),
            audit_level: AuditLevel::Cheap,
            audit: AuditParams::default(),
            rotation_budget: 512,
            limited_only: true,
            max_turn_factor: 4,
            out_dir: None,
            write_logs: false,
            workers: 0,
        }
    }

    /// Cells in spec order: every seed of the first `n`, then the next `n`.
    pub fn cells(&self) -> Vec<(usize, usize, u64)> {
        self.ns.iter().flat_map(|&n| (0..self.seeds).map(move |i| (n, self.bias.bias(n), i))).collect()
    }

    pub fn config(&self, n: usize, b: usize, index: u64) -> GameConfig {
        let mut c = GameConfig::scaled(n, b, self.coeffs, cell_seed(self.master_seed, n, b, index));
        c.audit_level = self.audit_level;
        c.audit = self.audit;
        c.rotation_budget = self.rotation_budget;
        c.limited_only = self.limited_only;
        c.max_turns = self.max_turn_factor * n;
        c
    }
}

/// Seed of cell `(n, b, index)`: splitmix64 folded over the master seed and the three coordinates.
pub fn cell_seed(master: u64, n: usize, b: usize, index: u64) -> u64 {
    let mut h = splitmix64(master);
    for x in [n as u64, b as u64, index] {
        h = splitmix64(h ^ x);
    }
    h
}

/// One CSV row. Column order is the field order and only ever grows at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub b: usize,
    pub seed_index: u64,
    pub seed: u64,
    pub breaker: String,
    pub outcome: String,
    pub maker_turns: u32,
    pub overhead: i64,
    pub overhead_scaled: f64,
    pub max_s: usize,
    pub max_f: usize,
    pub troublesome: usize,
    pub serve_turns: u32,
    pub booster_turns: u32,
    pub hard_violations: usize,
    pub expansion_pass_rate: Option<f64>,
    pub connectivity_pass_rate: Option<f64>,
    pub pair_pass_rate: Option<f64>,
    pub potential_ok: Option<bool>,
    pub hamilton_ok: Option<bool>,
    pub expansion_clean_rate: Option<f64>,
}

impl SweepRow {
    pub fn from_run(n: usize, b: usize, index: u64, seed: u64, breaker: BreakerKind, run: &GameRun) -> SweepRow {
        let acc = run.report.accounting.as_ref();
        let overhead = run.maker_turns as i64 - n as i64;
        SweepRow {
            n,
            b,
            seed_index: index,
            seed,
            breaker: breaker.name().to_string(),
            outcome: run.outcome.name().to_string(),
            maker_turns: run.maker_turns,
            overhead,
            overhead_scaled: overhead as f64 / scale(n),
            max_s: acc.map_or(0, |a| a.max_s),
            max_f: acc.map_or(0, |a| a.max_f_phase2),
            troublesome: run.state.troublesome().len(),
            serve_turns: acc.map_or(0, |a| a.serve_turns),
            booster_turns: acc.map_or(0, |a| a.booster_turns),
            hard_violations: run.report.hard_violations(),
            expansion_pass_rate: run.report.expansion_pass_rate(),
            connectivity_pass_rate: run.report.connectivity_pass_rate(),
            pair_pass_rate: run.report.pair_pass_rate(),
            potential_ok: run.report.potential_ok(),
            hamilton_ok: run.report.hamilton.as_ref().map(|h| h.pass),
            expansion_clean_rate: run.report.expansion_clean_rate(),
        }
    }

    pub fn won(&self) -> bool {
        self.outcome == "maker_win"
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Full runs, only kept when requested.
    pub runs: Vec<GameRun>,
}

type Slot = Mutex<Option<Result<(SweepRow, Option<GameRun>), SimError>>>;

/// Run every cell of the spec. Cells run on `workers` threads; results are
/// folded in spec order, so the output does not depend on scheduling.
pub fn sweep(spec: &SweepSpec, keep_runs: bool) -> Result<SweepResult, SimError> {
    if let Some(dir) = &spec.out_dir {
        std::fs::create_dir_all(dir)?;
        if spec.write_logs {
            std::fs::create_dir_all(dir.join("logs"))?;
        }
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(spec)?)?;
    }
    let cells = spec.cells();
    let workers = match spec.workers {
        0 => std::thread::available_parallelism().map_or(1, |w| w.get()),
        w => w,
    }
    .min(cells.len().max(1));
    let slots: Vec<Slot> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let (n, b, index) = cells[i];
                let result = run_cell(spec, n, b, index).map(|run| {
                    let row = SweepRow::from_run(n, b, index, run.log.header().map_or(0, |h| h.0.seed), spec.breaker, &run);
                    (row, keep_runs.then_some(run))
                });
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });
    let mut rows = Vec::with_capacity(cells.len());
    let mut runs = Vec::new();
    for slot in slots {
        let (row, run) = slot.into_inner().unwrap().expect("every cell ran")?;
        rows.push(row);
        runs.extend(run);
    }
    if let Some(dir) = &spec.out_dir {
        write_csv(&dir.join("summary.csv"), &rows)?;
    }
    Ok(SweepResult { rows, runs })
}

fn run_cell(spec: &SweepSpec, n: usize, b: usize, index: u64) -> Result<GameRun, SimError> {
    let config = spec.config(n, b, index);
    let run = run_game(&config, BreakerPolicy::new(spec.breaker))?;
    if let Some(dir) = &spec.out_dir {
        if spec.write_logs {
            run.log.write_to(&dir.join("logs").join(format!("n{n}_b{b}_s{index}.jsonl")))?;
        }
        archive_witnesses(dir, n, b, index, &run)?;
    }
    Ok(run)
}

/// Failing audit witnesses of one game, written to `witnesses/` when there are any.
fn archive_witnesses(dir: &Path, n: usize, b: usize, index: u64, run: &GameRun) -> Result<(), SimError> {
    let r = &run.report;
    let exp: Vec<_> = r.expansion.iter().filter(|e| !e.pass).collect();
    let conn: Vec<_> = r.connectivity.iter().filter(|c| !c.pass).collect();
    if exp.is_empty() && conn.is_empty() && r.violations.is_empty() {
        return Ok(());
    }
    let wdir = dir.join("witnesses");
    std::fs::create_dir_all(&wdir)?;
    let body = serde_json::json!({
        "n": n,
        "b": b,
        "seed_index": index,
        "seed": run.log.header().map(|h| h.0.seed),
        "violations": r.violations,
        "expansion": exp,
        "connectivity": conn,
    });
    std::fs::write(wdir.join(format!("n{n}_b{b}_s{index}.json")), serde_json::to_string_pretty(&body)?)?;
    Ok(())
}

pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<(), SimError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// CSV text of `rows`, header included.
pub fn csv_string(rows: &[SweepRow]) -> Result<String, SimError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| SimError::Log(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// Least-squares `c` in `overhead ≈ c · n / sqrt(ln n)` over the rows.
pub fn fitted_coefficient(rows: &[SweepRow]) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for r in rows {
        let x = scale(r.n);
        num += r.overhead as f64 * x;
        den += x * x;
    }
    (den > 0.0).then(|| num / den)
}

/// Median of `overhead_scaled` per `n`, in the order the `n` values first appear.
pub fn median_overhead_by_n(rows: &[SweepRow]) -> Vec<(usize, f64)> {
    let mut ns: Vec<usize> = Vec::new();
    for r in rows {
        if !ns.contains(&r.n) {
            ns.push(r.n);
        }
    }
    ns.into_iter()
        .map(|n| {
            let mut v: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.overhead_scaled).collect();
            v.sort_by(f64::total_cmp);
            let m = v.len();
            let med = if m % 2 == 1 { v[m / 2] } else { (v[m / 2 - 1] + v[m / 2]) / 2.0 };
            (n, med)
        })
        .collect()
}

pub fn win_rate(rows: &[SweepRow]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    rows.iter().filter(|r| r.won()).count() as f64 / rows.len() as f64
}

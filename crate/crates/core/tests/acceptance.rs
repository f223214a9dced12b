//! Acceptance run: one PASS/FAIL line per criterion, with the measured
//! numbers behind it. Criteria marked "reported" never fail the run.

mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use common::{e, is_maker_path, oracle_closure, oracle_pairs, random_instance};
use hamgame::audit::ids;
use hamgame::config::{bias_from_beta, StrategyCoeffs};
use hamgame::rotation::{endpoint_pairs, limited_rotation_closure, validate_path, AdjGraph, SetSkeleton};
use hamgame::sim::{replay_game, replay_state};
use hamgame::sweep::{fitted_coefficient, median_overhead_by_n, sweep, win_rate, BiasRule, SweepRow, SweepSpec};
use hamgame::{run_game, BreakerKind, BreakerPolicy, GameConfig, GameLog, GameRun, RotationParams, RotationRule, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BETA: f64 = 0.25;

struct Verdict {
    pass: bool,
    reported: bool,
    lines: Vec<String>,
}

impl Verdict {
    fn new(pass: bool) -> Verdict {
        Verdict {
            pass,
            reported: false,
            lines: Vec::new(),
        }
    }

    fn note(mut self, s: impl Into<String>) -> Verdict {
        self.lines.push(s.into());
        self
    }
}

fn config(n: usize, seed: u64) -> GameConfig {
    GameConfig::scaled(n, bias_from_beta(n, BETA), StrategyCoeffs::default(), seed)
}

fn play(cfg: &GameConfig, kind: BreakerKind) -> GameRun {
    run_game(cfg, BreakerPolicy::new(kind)).unwrap_or_else(|err| panic!("n={} seed={} {kind}: {err}", cfg.n, cfg.seed))
}

fn replay_determinism() -> Verdict {
    let mut bad = Vec::new();
    for seed in 0..200u64 {
        let kind = BreakerKind::ALL_ADAPTIVE[seed as usize % 4];
        let cfg = config(1000, seed);
        let run = play(&cfg, kind);
        let text = run.log.to_jsonl();
        let rerun = play(&cfg, kind).log.to_jsonl();
        let parsed = GameLog::from_jsonl(&text).unwrap();
        let replayed = replay_game(&parsed).map(|r| (r.log.to_jsonl(), r.state.digest()));
        let state = replay_state(&parsed).map(|s| s.digest());
        let ok = rerun == text
            && replayed.as_ref().is_ok_and(|(t, d)| *t == text && *d == run.state.digest())
            && state.as_ref().is_ok_and(|d| *d == run.state.digest());
        if !ok {
            bad.push(format!("seed {seed} ({kind})"));
        }
    }
    Verdict::new(bad.is_empty()).note(format!(
        "200 games at n=1000, policies cycled; mismatches: {}",
        if bad.is_empty() { "none".into() } else { bad.join(", ") }
    ))
}

fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    let mut first = None;
    for graph in 0..500 {
        let inst = random_instance(&mut rng, 10);
        let edges: Vec<(Vertex, Vertex)> = inst.maker.iter().copied().collect();
        let g = AdjGraph::with_edges(inst.n, &edges);
        let sk = SetSkeleton::new(inst.n, &inst.s, &inst.extra);
        let in_s = |x: Vertex| inst.s.contains(&x);
        let in_sp = |x: Vertex| in_s(x) || inst.extra.contains(&x);
        let params = RotationParams::exact(RotationRule::Limited);
        let closure = limited_rotation_closure(&g, &sk, &inst.path, params).unwrap();
        let pairs = endpoint_pairs(&g, &sk, &inst.path, params).unwrap();
        let mut ok =
            closure.endpoint_set() == oracle_closure(&inst.maker, &inst.path, &in_s) && pairs.set() == oracle_pairs(&inst.maker, &inst.path, &in_s, &in_sp);
        for &w in &closure.endpoints {
            let q = closure.witness(w).unwrap();
            ok &= is_maker_path(&inst.maker, &q) && q.len() == inst.path.len() && q[0] == inst.path[0] && q[q.len() - 1] == w;
        }
        for (a, b) in pairs.iter() {
            let q = pairs.witness(a, b).unwrap();
            ok &= validate_path(&g, &q).is_ok() && q.len() == inst.path.len() && e(q[0], q[q.len() - 1]) == (a, b);
        }
        if !ok {
            mismatches += 1;
            first.get_or_insert(graph);
        }
    }
    Verdict::new(mismatches == 0).note(format!(
        "500 graphs with n <= 10, closure and endpoint pairs vs enumeration; mismatches: {mismatches}{}",
        first.map_or(String::new(), |g| format!(" (first at graph {g})"))
    ))
}

struct PolicyRuns {
    kind: BreakerKind,
    wins: usize,
    violations: BTreeMap<String, usize>,
    runs_total: usize,
    potential_runs: usize,
    step_failures: usize,
    aggregate_failures: usize,
    potential_missing: usize,
    first_step_failure: Option<String>,
    win_checked: usize,
    win_failed: usize,
}

fn policy_runs(kind: BreakerKind, games: u64) -> PolicyRuns {
    let mut r = PolicyRuns {
        kind,
        wins: 0,
        violations: BTreeMap::new(),
        runs_total: 0,
        potential_runs: 0,
        step_failures: 0,
        aggregate_failures: 0,
        potential_missing: 0,
        first_step_failure: None,
        win_checked: 0,
        win_failed: 0,
    };
    for seed in 0..games {
        let run = play(&config(1000, 1000 + seed), kind);
        r.runs_total += 1;
        for v in &run.report.violations {
            if ids::HARD.contains(&v.id.as_str()) {
                *r.violations.entry(v.id.clone()).or_default() += 1;
            }
        }
        match &run.report.potential {
            None => r.potential_missing += 1,
            Some(traces) => {
                for t in traces {
                    r.potential_runs += 1;
                    if !t.aggregate_ok {
                        r.aggregate_failures += 1;
                    }
                    for s in t.steps.iter().filter(|s| !s.step_ok) {
                        r.step_failures += 1;
                        r.first_step_failure
                            .get_or_insert_with(|| format!("seed {} turn {} margin {:.3}", 1000 + seed, s.turn, s.margin.unwrap_or(f64::NAN)));
                    }
                }
            }
        }
        if run.outcome.is_win() {
            r.wins += 1;
            r.win_checked += 1;
            if !run.report.hamilton.as_ref().is_some_and(|h| h.pass) {
                r.win_failed += 1;
            }
        }
    }
    r
}

fn strategy_invariants(all: &[PolicyRuns]) -> Verdict {
    let total: usize = all.iter().map(|r| r.violations.values().sum::<usize>()).sum();
    let mut v = Verdict::new(total == 0);
    for r in all {
        let list = if r.violations.is_empty() {
            "none".to_string()
        } else {
            format!("{:?}", r.violations)
        };
        v = v.note(format!("{}: {} games, {} wins, hard violations: {list}", r.kind, r.runs_total, r.wins));
    }
    v
}

fn potential_check(all: &[PolicyRuns]) -> Verdict {
    let bad: usize = all.iter().map(|r| r.step_failures + r.aggregate_failures + r.potential_missing).sum();
    let mut v = Verdict::new(bad == 0);
    for r in all {
        v = v.note(format!(
            "{}: {} serve runs, step failures {}, aggregate failures {}, unavailable {}{}",
            r.kind,
            r.potential_runs,
            r.step_failures,
            r.aggregate_failures,
            r.potential_missing,
            r.first_step_failure.as_ref().map_or(String::new(), |s| format!(" (first: {s})"))
        ));
    }
    v
}

fn win_verification(all: &[PolicyRuns], trend: &[SweepRow], smoke: &[SweepRow]) -> Verdict {
    let rows = trend.iter().chain(smoke).filter(|r| r.won());
    let (mut checked, mut failed) = (0, 0);
    for r in rows {
        checked += 1;
        if r.hamilton_ok != Some(true) {
            failed += 1;
        }
    }
    for r in all {
        checked += r.win_checked;
        failed += r.win_failed;
    }
    Verdict::new(failed == 0 && checked > 0).note(format!("{checked} Maker wins checked, {failed} certificates rejected"))
}

fn sweep_rows(kind: BreakerKind, ns: Vec<usize>, seeds: u64, samples: usize, tag: &str) -> (Vec<SweepRow>, PathBuf) {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(tag);
    let _ = std::fs::remove_dir_all(&dir);
    let mut spec = SweepSpec::new(ns, BiasRule::Beta(BETA), kind, seeds);
    spec.master_seed = 2024;
    spec.audit.expansion_samples = samples;
    spec.out_dir = Some(dir.clone());
    (sweep(&spec, false).expect("sweep runs").rows, dir)
}

fn theorem_trend(rows: &[SweepRow]) -> Verdict {
    let mut ok = true;
    let mut v = Verdict::new(true);
    for n in [500, 1000, 2000, 4000] {
        let cell: Vec<SweepRow> = rows.iter().filter(|r| r.n == n).cloned().collect();
        let rate = win_rate(&cell);
        ok &= rate >= 0.95;
        v = v.note(format!("n={n} b={}: win rate {:.1}% over {} seeds", cell[0].b, 100.0 * rate, cell.len()));
    }
    let medians = median_overhead_by_n(rows);
    let monotone = medians.windows(2).all(|w| w[1].1 <= w[0].1);
    ok &= monotone;
    let shown: Vec<String> = medians.iter().map(|(n, m)| format!("{n}: {m:.4}")).collect();
    v = v.note(format!(
        "median overhead / (n/sqrt(ln n)): {} ({})",
        shown.join(", "),
        if monotone { "non-increasing" } else { "increases" }
    ));
    v = v.note(format!(
        "fitted c in overhead = c n/sqrt(ln n): {:.4}",
        fitted_coefficient(rows).unwrap_or(f64::NAN)
    ));
    v.pass = ok;
    v
}

fn lemma_rates(rows: &[SweepRow], dir: &std::path::Path) -> Verdict {
    let games = rows.len();
    let good_exp = rows.iter().filter(|r| r.expansion_pass_rate.is_none_or(|x| x >= 0.99)).count();
    let good_conn = rows.iter().filter(|r| r.connectivity_pass_rate.is_none_or(|x| x >= 0.99)).count();
    let clean = rows.iter().filter(|r| r.expansion_clean_rate.is_none_or(|x| x >= 0.99)).count();
    let audited = rows.iter().filter(|r| r.expansion_pass_rate.is_some()).count();
    let min_exp = rows.iter().filter_map(|r| r.expansion_pass_rate).fold(1.0, f64::min);
    let min_conn = rows.iter().filter_map(|r| r.connectivity_pass_rate).fold(1.0, f64::min);
    let witnesses = std::fs::read_dir(dir.join("witnesses")).map_or(0, |d| d.count());
    let mut v = Verdict::new(good_exp == games && good_conn == games)
        .note(format!("{audited} of {games} games ran structural audits"))
        .note(format!("subset-level expansion >= 99%: {good_exp}/{games} games (min {min_exp:.4})"))
        .note(format!("connectivity >= 99%: {good_conn}/{games} games (min {min_conn:.4})"))
        .note(format!("audits with no failing subset >= 99%: {clean}/{games} games"))
        .note(format!("witness files archived: {witnesses} under {}", dir.display()));
    v.reported = true;
    v
}

fn adversarial_smoke(rows: &[SweepRow]) -> Verdict {
    let games = rows.len();
    let served = rows.iter().filter(|r| r.serve_turns > 0).count();
    let mut outcomes: BTreeMap<&str, usize> = BTreeMap::new();
    for r in rows {
        *outcomes.entry(r.outcome.as_str()).or_default() += 1;
    }
    Verdict::new(served as f64 >= 0.9 * games as f64)
        .note(format!(
            "Isolator, n=2000, b={}: win rate {:.1}%, outcomes {outcomes:?}",
            rows[0].b,
            100.0 * win_rate(rows)
        ))
        .note(format!("games with serve turns: {served}/{games}"))
}

/// Prints the verdict; true when it should fail the run.
fn report(id: usize, name: &str, v: &Verdict, secs: f64) -> bool {
    let status = if v.pass { "PASS" } else { "FAIL" };
    let tag = if v.reported { " (reported)" } else { "" };
    println!("criterion {id} {name}: {status}{tag} [{secs:.1}s]");
    for l in &v.lines {
        println!("    {l}");
    }
    !v.pass && !v.reported
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

fn main() {
    let mut failed = false;
    let (v1, t1) = timed(replay_determinism);
    failed |= report(1, "replay determinism", &v1, t1);
    let (v2, t2) = timed(oracle_equivalence);
    failed |= report(2, "rotation oracle equivalence", &v2, t2);

    let (policies, t3) = timed(|| BreakerKind::ALL_ADAPTIVE.iter().map(|&k| policy_runs(k, 100)).collect::<Vec<_>>());
    failed |= report(3, "strategy invariants", &strategy_invariants(&policies), t3);
    failed |= report(4, "potential inequalities", &potential_check(&policies), 0.0);

    let ((trend, dir), t6) = timed(|| sweep_rows(BreakerKind::Random, vec![500, 1000, 2000, 4000], 50, 10_000, "trend"));
    let ((smoke, _), t8) = timed(|| sweep_rows(BreakerKind::Isolator, vec![2000], 50, 1000, "isolator"));
    failed |= report(5, "win verification", &win_verification(&policies, &trend, &smoke), 0.0);
    failed |= report(6, "scaled trend vs Random", &theorem_trend(&trend), t6);
    failed |= report(7, "expansion and connectivity rates", &lemma_rates(&trend, &dir), 0.0);
    failed |= report(8, "adversarial smoke vs Isolator", &adversarial_smoke(&smoke), t8);
    if failed {
        std::process::exit(1);
    }
}

use hamgame::audit::verify_hamilton;
use hamgame::config::StrategyCoeffs;
use hamgame::sim::{replay_game, replay_state};
use hamgame::sweep::{csv_string, sweep, BiasRule, SweepSpec};
use hamgame::{run_game, AuditLevel, BreakerKind, BreakerPolicy, GameConfig, GameLog, Outcome};

fn config(n: usize, b: usize, seed: u64) -> GameConfig {
    GameConfig::scaled(n, b, StrategyCoeffs::default(), seed)
}

#[test]
fn small_game_terminates_and_replays() {
    let cfg = config(50, 1, 3);
    let run = run_game(&cfg, BreakerPolicy::new(BreakerKind::Random)).unwrap();
    assert!(run.maker_turns as usize <= cfg.max_turns);
    let text = run.log.to_jsonl();
    let parsed = GameLog::from_jsonl(&text).unwrap();
    assert_eq!(parsed, run.log);
    let st = replay_state(&parsed).unwrap();
    assert_eq!(st.digest(), run.state.digest());
    assert_eq!(replay_game(&parsed).unwrap().log.to_jsonl(), text);
}

#[test]
fn winning_game_carries_a_valid_certificate() {
    let run = run_game(&config(200, 2, 1), BreakerPolicy::new(BreakerKind::Random)).unwrap();
    assert!(run.outcome.is_win(), "{:?}", run.outcome);
    assert!(verify_hamilton(&run.log).pass);
    assert_eq!(run.report.hard_violations(), 0, "{:?}", run.report.violations);
}

#[test]
fn turn_limit_gives_timeout() {
    let mut cfg = config(200, 2, 1);
    cfg.max_turns = 200;
    let run = run_game(&cfg, BreakerPolicy::new(BreakerKind::Random)).unwrap();
    assert_eq!(run.outcome, Outcome::Timeout { turn: 201 });
    assert_eq!(run.maker_turns, 200);
}

#[test]
fn full_audit_level_writes_frames_and_replays() {
    let mut cfg = config(120, 2, 8);
    cfg.audit_level = AuditLevel::Full;
    let run = run_game(&cfg, BreakerPolicy::new(BreakerKind::Isolator)).unwrap();
    assert!(run.log.frames().count() > 0);
    let again = replay_game(&run.log).unwrap();
    assert_eq!(again.log.to_jsonl(), run.log.to_jsonl());
    assert_eq!(again.state.digest(), run.state.digest());
}

#[test]
fn tampered_log_is_rejected() {
    let run = run_game(&config(60, 1, 2), BreakerPolicy::new(BreakerKind::Random)).unwrap();
    let text = run.log.to_jsonl();
    // drop one Breaker move: the digest no longer matches
    let mut lines: Vec<&str> = text.lines().collect();
    let i = lines
        .iter()
        .position(|l| l.contains("\"player\":\"breaker\"") && !l.contains("\"edges\":[]"))
        .unwrap();
    lines.remove(i);
    let broken = GameLog::from_jsonl(&lines.join("\n")).unwrap();
    assert!(replay_state(&broken).is_err());
}

fn spec(ns: Vec<usize>, workers: usize) -> SweepSpec {
    let mut s = SweepSpec::new(ns, BiasRule::Beta(0.05), BreakerKind::Random, 3);
    s.master_seed = 17;
    s.workers = workers;
    s
}

#[test]
fn sweep_rows_are_reproducible() {
    let a = sweep(&spec(vec![100, 150], 2), false).unwrap();
    assert_eq!(a.rows.len(), 6);
    for r in &a.rows {
        assert_eq!(r.overhead, r.maker_turns as i64 - r.n as i64);
    }
    let b = sweep(&spec(vec![100, 150], 2), false).unwrap();
    assert_eq!(csv_string(&a.rows).unwrap(), csv_string(&b.rows).unwrap());
}

#[test]
fn sweep_does_not_depend_on_order_or_workers() {
    let a = sweep(&spec(vec![100, 150], 1), false).unwrap();
    let b = sweep(&spec(vec![150, 100], 4), false).unwrap();
    let key = |r: &hamgame::sweep::SweepRow| (r.n, r.seed_index);
    let mut x = a.rows.clone();
    let mut y = b.rows.clone();
    x.sort_by_key(key);
    y.sort_by_key(key);
    assert_eq!(csv_string(&x).unwrap(), csv_string(&y).unwrap());
}

#[test]
fn sweep_writes_csv_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_path_buf();
    let mut s = spec(vec![80], 2);
    s.seeds = 2;
    s.out_dir = Some(dir.clone());
    s.write_logs = true;
    let res = sweep(&s, false).unwrap();
    let csv = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert_eq!(csv, csv_string(&res.rows).unwrap());
    assert!(csv.starts_with("n,b,seed_index,seed,breaker,outcome,maker_turns,overhead"));
    assert!(dir.join("manifest.json").exists());
    assert_eq!(std::fs::read_dir(dir.join("logs")).unwrap().count(), 2);
}

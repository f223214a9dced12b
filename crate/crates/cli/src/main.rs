//! `hamilton-sim`: run, sweep, replay and audit Maker-Breaker Hamilton cycle games.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use hamgame::audit;
use hamgame::config::bias_from_beta;
use hamgame::sim::{replay_game, replay_state};
use hamgame::sweep::{fitted_coefficient, median_overhead_by_n, sweep, win_rate, BiasRule, SweepSpec};
use hamgame::{AuditLevel, BreakerKind, BreakerPolicy, GameConfig, GameLog, StrategyCoeffs};

#[derive(Parser)]
#[command(name = "hamilton-sim", version, about = "Biased Maker-Breaker Hamilton cycle game simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write its log and audit report.
    Run(Opts),
    /// Play every (n, seed) cell and write a CSV summary.
    Sweep(Opts),
    /// Check that a log replays to its recorded final state and re-runs byte-identically.
    Replay { log: PathBuf },
    /// Run the log-level audits on a saved game.
    Audit { log: PathBuf },
}

/// Every option may also come from a TOML file given with `--config`; flags win.
#[derive(Args, Deserialize, Default, Clone)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Opts {
    /// TOML file with the same keys as the long flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Vertex count; a comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    n: Vec<usize>,
    /// Breaker bias (edges per turn).
    #[arg(long, conflicts_with = "beta")]
    b: Option<usize>,
    /// Bias as `floor(beta * n / ln n)`.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    breaker: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seeds per n (sweep).
    #[arg(long)]
    seeds: Option<u64>,
    /// Maker's service quota K.
    #[arg(long)]
    quota: Option<u32>,
    #[arg(long)]
    tau_coeff: Option<f64>,
    #[arg(long)]
    s0_coeff: Option<f64>,
    /// off, cheap or full.
    #[arg(long)]
    audit_level: Option<String>,
    /// Maker turn limit (run) or a multiple of n (sweep).
    #[arg(long)]
    max_turns: Option<usize>,
    #[arg(long)]
    limited_only: Option<bool>,
    #[arg(long)]
    rotation_budget: Option<usize>,
    #[arg(long)]
    expansion_samples: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Write per-game logs during a sweep.
    #[arg(long)]
    write_logs: Option<bool>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    fn merged(self) -> Result<Opts> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let file: Opts = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(Opts {
            config: self.config,
            n: if self.n.is_empty() { file.n } else { self.n },
            b: self.b.or(if self.beta.is_some() { None } else { file.b }),
            beta: self.beta.or(if self.b.is_some() { None } else { file.beta }),
            breaker: self.breaker.or(file.breaker),
            seed: self.seed.or(file.seed),
            seeds: self.seeds.or(file.seeds),
            quota: self.quota.or(file.quota),
            tau_coeff: self.tau_coeff.or(file.tau_coeff),
            s0_coeff: self.s0_coeff.or(file.s0_coeff),
            audit_level: self.audit_level.or(file.audit_level),
            max_turns: self.max_turns.or(file.max_turns),
            limited_only: self.limited_only.or(file.limited_only),
            rotation_budget: self.rotation_budget.or(file.rotation_budget),
            expansion_samples: self.expansion_samples.or(file.expansion_samples),
            workers: self.workers.or(file.workers),
            write_logs: self.write_logs.or(file.write_logs),
            out: self.out.or(file.out),
        })
    }

    fn coeffs(&self) -> StrategyCoeffs {
        let d = StrategyCoeffs::default();
        StrategyCoeffs {
            quota: self.quota.unwrap_or(d.quota),
            tau_coeff: self.tau_coeff.unwrap_or(d.tau_coeff),
            s0_coeff: self.s0_coeff.unwrap_or(d.s0_coeff),
        }
    }

    fn bias_rule(&self) -> BiasRule {
        match (self.b, self.beta) {
            (Some(b), _) => BiasRule::Absolute(b),
            (None, Some(beta)) => BiasRule::Beta(beta),
            (None, None) => BiasRule::Beta(0.25),
        }
    }

    fn breaker(&self) -> Result<BreakerKind> {
        let kind: BreakerKind = self.breaker.as_deref().unwrap_or("random").parse().map_err(anyhow::Error::msg)?;
        if kind == BreakerKind::Scripted {
            bail!("the scripted breaker is only used by `replay`");
        }
        Ok(kind)
    }

    fn audit_level(&self) -> Result<AuditLevel> {
        Ok(self.audit_level.as_deref().unwrap_or("cheap").parse()?)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(opts) => run(opts.merged()?),
        Command::Sweep(opts) => run_sweep(opts.merged()?),
        Command::Replay { log } => replay(&log),
        Command::Audit { log } => audit_log(&log),
    }
}

fn run(opts: Opts) -> Result<()> {
    let &[n] = opts.n.as_slice() else { bail!("`run` needs exactly one --n") };
    let b = match opts.bias_rule() {
        BiasRule::Absolute(b) => b,
        BiasRule::Beta(beta) => bias_from_beta(n, beta),
    };
    let mut config = GameConfig::scaled(n, b, opts.coeffs(), opts.seed.unwrap_or(0));
    config.audit_level = opts.audit_level()?;
    if let Some(m) = opts.max_turns {
        config.max_turns = m;
    }
    if let Some(l) = opts.limited_only {
        config.limited_only = l;
    }
    if let Some(r) = opts.rotation_budget {
        config.rotation_budget = r;
    }
    if let Some(s) = opts.expansion_samples {
        config.audit.expansion_samples = s;
    }
    let kind = opts.breaker()?;
    let game = hamgame::run_game(&config, BreakerPolicy::new(kind))?;
    println!(
        "n={n} b={b} breaker={kind} seed={} outcome={} maker_turns={} violations={}",
        config.seed,
        game.outcome.name(),
        game.maker_turns,
        game.report.violations.len()
    );
    if let Some(dir) = &opts.out {
        std::fs::create_dir_all(dir)?;
        game.log.write_to(&dir.join("game.jsonl"))?;
        std::fs::write(dir.join("report.json"), game.report.to_json())?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}

fn run_sweep(opts: Opts) -> Result<()> {
    if opts.n.is_empty() {
        bail!("`sweep` needs --n");
    }
    let mut spec = SweepSpec::new(opts.n.clone(), opts.bias_rule(), opts.breaker()?, opts.seeds.unwrap_or(10));
    spec.master_seed = opts.seed.unwrap_or(0);
    spec.coeffs = opts.coeffs();
    spec.audit_level = opts.audit_level()?;
    spec.out_dir = opts.out.clone();
    spec.write_logs = opts.write_logs.unwrap_or(false);
    spec.workers = opts.workers.unwrap_or(0);
    if let Some(m) = opts.max_turns {
        spec.max_turn_factor = m;
    }
    if let Some(l) = opts.limited_only {
        spec.limited_only = l;
    }
    if let Some(r) = opts.rotation_budget {
        spec.rotation_budget = r;
    }
    if let Some(s) = opts.expansion_samples {
        spec.audit.expansion_samples = s;
    }
    let result = sweep(&spec, false)?;
    println!("games={} maker_win_rate={:.3}", result.rows.len(), win_rate(&result.rows));
    for (n, med) in median_overhead_by_n(&result.rows) {
        let rows: Vec<_> = result.rows.iter().filter(|r| r.n == n).cloned().collect();
        println!("n={n} win_rate={:.3} median_overhead_scaled={med:.4}", win_rate(&rows));
    }
    if let Some(c) = fitted_coefficient(&result.rows) {
        println!("fitted overhead coefficient c = {c:.4} (overhead ~ c * n / sqrt(ln n))");
    }
    if let Some(dir) = &spec.out_dir {
        println!("wrote {}", dir.join("summary.csv").display());
    }
    Ok(())
}

fn read_log(path: &Path) -> Result<(String, GameLog)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let log = GameLog::from_jsonl(&text)?;
    Ok((text, log))
}

fn replay(path: &Path) -> Result<()> {
    let (text, log) = read_log(path)?;
    if log.to_jsonl() != text {
        bail!("log does not round-trip byte-for-byte through the parser");
    }
    let state = replay_state(&log)?;
    println!("final state digest {} matches the log", state.digest());
    let rerun = replay_game(&log)?;
    if rerun.log.to_jsonl() != text {
        bail!("re-running with the logged Breaker moves produced a different log");
    }
    println!("re-run with logged Breaker moves reproduces the log byte-for-byte");
    Ok(())
}

fn audit_log(path: &Path) -> Result<()> {
    let (_, log) = read_log(path)?;
    let acc = audit::turn_accounting(&log)?;
    let traces = audit::potential_trace(&log)?;
    let hamilton = log.outcome().filter(|o| o.is_win()).map(|_| audit::verify_hamilton(&log));
    let out = serde_json::json!({
        "accounting": acc,
        "potential_runs": traces.len(),
        "potential_violations": traces.iter().filter(|t| !t.holds()).count(),
        "potential": traces,
        "hamilton": hamilton,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

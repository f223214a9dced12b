use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::board::GameState;
use crate::config::AuditParams;
use crate::paths::PathSystem;
use crate::Vertex;

const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionFailure {
    pub set: Vec<Vertex>,
    pub n_prime: usize,
    /// `"expand"` for `|N'(S)| <= 2|S|`, `"nonempty"` for `N'(S) = ∅`.
    pub rule: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub turn: u32,
    pub s_prime: usize,
    /// Largest `|S|` for which `|N'(S)| > 2|S|` is required.
    pub expand_limit: usize,
    pub exact_sets: u64,
    pub samples: u64,
    pub failure_count: u64,
    /// Up to a handful of failing sets, for replay.
    pub failures: Vec<ExpansionFailure>,
    pub pass: bool,
}

impl ExpansionReport {
    pub fn checked(&self) -> u64 {
        self.exact_sets + self.samples
    }
}

struct Ctx {
    /// Heads in `S_i` of Maker edges out of each `S'` vertex, indexed like `members`.
    out: Vec<Vec<Vertex>>,
    members: Vec<Vertex>,
    expand_limit: usize,
    nonempty_limit: usize,
}

impl Ctx {
    fn n_prime(&self, set: &[usize], scratch: &mut Vec<Vertex>) -> usize {
        scratch.clear();
        for &i in set {
            scratch.extend_from_slice(&self.out[i]);
        }
        scratch.sort_unstable();
        scratch.dedup();
        scratch.iter().filter(|&&v| !set.iter().any(|&i| self.members[i] == v)).count()
    }

    /// Rule violated by a set of this size with this `|N'|`, if any.
    fn verdict(&self, size: usize, n_prime: usize) -> Option<&'static str> {
        if size <= self.expand_limit && n_prime <= 2 * size {
            Some("expand")
        } else if size <= self.nonempty_limit && n_prime == 0 {
            Some("nonempty")
        } else {
            None
        }
    }
}

/// `N'(S)` audit over subsets `S` of `S'`: every subset with `|S| <= 3` is
/// checked exactly and `samples` more are drawn at random.
pub fn expansion_audit(state: &GameState, ps: &PathSystem, params: &AuditParams, samples: usize, rng: &mut impl Rng) -> ExpansionReport {
    let members = ps.s_prime();
    let m = members.len();
    let out: Vec<Vec<Vertex>> = members
        .iter()
        .map(|&u| {
            let mut h: Vec<Vertex> = state.maker_out(u).iter().copied().filter(|&v| ps.in_s(v)).collect();
            h.sort_unstable();
            h.dedup();
            h
        })
        .collect();
    let ctx = Ctx {
        out,
        members,
        expand_limit: (params.expansion_fraction * m as f64).floor() as usize,
        nonempty_limit: m / 2,
    };
    let mut report = ExpansionReport {
        turn: state.turn(),
        s_prime: m,
        expand_limit: ctx.expand_limit,
        exact_sets: 0,
        samples: 0,
        failure_count: 0,
        failures: Vec::new(),
        pass: true,
    };
    let record = |report: &mut ExpansionReport, set: &[usize], n_prime: usize, rule: &str| {
        report.failure_count += 1;
        if report.failures.len() < MAX_WITNESSES {
            report.failures.push(ExpansionFailure {
                set: set.iter().map(|&i| ctx.members[i]).collect(),
                n_prime,
                rule: rule.to_string(),
            });
        }
    };
    let mut scratch = Vec::new();

    // exact pass, |S| <= 3
    let reach = |i: usize| ctx.out[i].len();
    for a in 0..m {
        report.exact_sets += 1;
        let np = ctx.n_prime(&[a], &mut scratch);
        if let Some(rule) = ctx.verdict(1, np) {
            record(&mut report, &[a], np, rule);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            report.exact_sets += 1;
            let np = ctx.n_prime(&[a, b], &mut scratch);
            if let Some(rule) = ctx.verdict(2, np) {
                record(&mut report, &[a, b], np, rule);
            }
            // adding c removes at most one vertex from N'({a,b})
            if np >= 8 || reach(a) >= 9 || reach(b) >= 9 {
                continue;
            }
            for c in b + 1..m {
                report.exact_sets += 1;
                let np3 = ctx.n_prime(&[a, b, c], &mut scratch);
                if let Some(rule) = ctx.verdict(3, np3) {
                    record(&mut report, &[a, b, c], np3, rule);
                }
            }
        }
    }
    // triples containing no "small" pair are passing by the pruning bound;
    // count them so exact_sets reflects all subsets of size 3
    let all_triples = if m >= 3 { (m * (m - 1) * (m - 2) / 6) as u64 } else { 0 };
    let pairs = (m * m.saturating_sub(1) / 2) as u64;
    report.exact_sets = m as u64 + pairs + all_triples;

    // sampled pass
    if m >= 2 {
        for i in 0..samples {
            let hi = if i % 2 == 0 { ctx.expand_limit.max(1) } else { ctx.nonempty_limit.max(1) };
            let size = rng.gen_range(1..=hi.min(m));
            let set: Vec<usize> = sample(rng, m, size).into_iter().collect();
            report.samples += 1;
            let np = ctx.n_prime(&set, &mut scratch);
            if let Some(rule) = ctx.verdict(size, np) {
                let mut sorted = set.clone();
                sorted.sort_unstable();
                record(&mut report, &sorted, np, rule);
            }
        }
    }
    report.pass = report.failure_count == 0;
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub turn: u32,
    pub s_size: usize,
    pub components: usize,
    pub pass: bool,
}

/// Whether Maker's edges inside `S` connect `S`.
pub fn connectivity_audit(state: &GameState, ps: &PathSystem) -> ConnectivityReport {
    let n = state.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = ps.s_len();
    for e in state.maker_edges() {
        if ps.in_s(e.0) && ps.in_s(e.1) {
            let (a, b) = (find(&mut parent, e.0 as usize), find(&mut parent, e.1 as usize));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }
    ConnectivityReport {
        turn: state.turn(),
        s_size: ps.s_len(),
        components,
        pass: components <= 1,
    }
}

//! Rotation-extension machinery on Maker's graph.
//!
//! A rotation of a path `Q` with fixed end `v` and free end `w` uses a Maker
//! edge `wx` (`x` on `Q`, `x != v`, `wx` not on `Q`) and replaces the path
//! edge `xy` (the one leaving `x` toward `w`) with `wx`; `y` becomes the new
//! free end. It is *limited* when the pivot `x` is in `S`.
//!
//! Closures are breadth-first searches over whole path states, so at small
//! sizes they are exact. At game scale a state budget bounds the work; states
//! that reach a new endpoint are expanded first. Vertices outside `S` with no
//! Maker neighbour in `S` never take part in a limited rotation, so maximal
//! runs of them are collapsed into rigid blocks before the search.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::board::{GameState, Owner};
use crate::error::RotationError;
use crate::paths::PathSystem;
use crate::Vertex;

/// Read access to Maker's (undirected) graph.
pub trait MakerGraph {
    fn vertex_count(&self) -> usize;
    fn neighbors(&self, v: Vertex) -> &[Vertex];
    fn has_edge(&self, u: Vertex, v: Vertex) -> bool;
}

/// Membership in `S`, `S'` and `S_0`.
pub trait Skeleton {
    fn in_s(&self, v: Vertex) -> bool;
    fn in_s_prime(&self, v: Vertex) -> bool;
    fn in_s0(&self, v: Vertex) -> bool;
}

impl MakerGraph for GameState {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.maker_neighbors(v)
    }
    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.is_maker(u, v)
    }
}

impl Skeleton for PathSystem {
    fn in_s(&self, v: Vertex) -> bool {
        PathSystem::in_s(self, v)
    }
    fn in_s_prime(&self, v: Vertex) -> bool {
        PathSystem::in_s_prime(self, v)
    }
    fn in_s0(&self, v: Vertex) -> bool {
        PathSystem::in_s0(self, v)
    }
}

/// Plain adjacency-list graph, for building small instances directly.
#[derive(Debug, Clone, Default)]
pub struct AdjGraph {
    adj: Vec<Vec<Vertex>>,
    edges: HashSet<(Vertex, Vertex)>,
}

impl AdjGraph {
    pub fn new(n: usize) -> AdjGraph {
        AdjGraph {
            adj: vec![Vec::new(); n],
            edges: HashSet::new(),
        }
    }

    pub fn with_edges(n: usize, edges: &[(Vertex, Vertex)]) -> AdjGraph {
        let mut g = AdjGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert_ne!(u, v);
        if self.edges.insert((u.min(v), u.max(v))) {
            self.adj[u as usize].push(v);
            self.adj[v as usize].push(u);
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }
}

impl MakerGraph for AdjGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }
    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }
    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Explicit vertex-set skeleton.
#[derive(Debug, Clone)]
pub struct SetSkeleton {
    pub s: Vec<bool>,
    pub s_prime: Vec<bool>,
    pub s0: Vec<bool>,
}

impl SetSkeleton {
    /// `S_0 = S` and `S' = S ∪ extra_ends`.
    pub fn new(n: usize, s: &[Vertex], extra_ends: &[Vertex]) -> SetSkeleton {
        let mut sk = SetSkeleton {
            s: vec![false; n],
            s_prime: vec![false; n],
            s0: vec![false; n],
        };
        for &v in s {
            sk.s[v as usize] = true;
            sk.s0[v as usize] = true;
            sk.s_prime[v as usize] = true;
        }
        for &v in extra_ends {
            sk.s_prime[v as usize] = true;
        }
        sk
    }
}

impl Skeleton for SetSkeleton {
    fn in_s(&self, v: Vertex) -> bool {
        self.s[v as usize]
    }
    fn in_s_prime(&self, v: Vertex) -> bool {
        self.s_prime[v as usize]
    }
    fn in_s0(&self, v: Vertex) -> bool {
        self.s0[v as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationRule {
    /// Pivot must lie in `S`.
    Limited,
    /// Any pivot.
    Unrestricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotationParams {
    pub rule: RotationRule,
    /// Maximum path states expanded per closure.
    pub max_states: usize,
}

impl RotationParams {
    pub fn limited(max_states: usize) -> RotationParams {
        RotationParams {
            rule: RotationRule::Limited,
            max_states,
        }
    }
    pub fn exact(rule: RotationRule) -> RotationParams {
        RotationParams { rule, max_states: usize::MAX }
    }
}

/// Maker's tracked long path `P_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedPath {
    pub path: Vec<Vertex>,
    pub generation: u32,
    /// Maker owns the edge joining the two ends, so she has a cycle on exactly `V(P_i)`.
    pub cycle_closed: bool,
}

impl TrackedPath {
    pub fn len(&self) -> usize {
        self.path.len()
    }
    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

/// Check that `path` is a simple path of Maker edges.
pub fn validate_path<G: MakerGraph>(g: &G, path: &[Vertex]) -> Result<(), RotationError> {
    let n = g.vertex_count();
    if path.is_empty() {
        return Err(RotationError::NotMakerPath("empty path".into()));
    }
    let mut seen = vec![false; n];
    for &v in path {
        if v as usize >= n {
            return Err(RotationError::NotMakerPath(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(RotationError::NotMakerPath(format!("vertex {v} repeated")));
        }
    }
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(RotationError::NotMakerPath(format!("{}-{} is not a Maker edge", w[0], w[1])));
        }
    }
    Ok(())
}

/// Rigid runs keyed by the kept vertices around them, in original order.
type RunTable = HashMap<(Vertex, Vertex), Vec<Vertex>>;

/// Collapse runs of frozen interior vertices. Vertices for which `keep`
/// holds are never collapsed.
fn compress<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, path: &[Vertex], rule: RotationRule, keep: impl Fn(Vertex) -> bool) -> (Vec<Vertex>, RunTable) {
    let mut runs = RunTable::new();
    if rule == RotationRule::Unrestricted || path.len() <= 2 {
        return (path.to_vec(), runs);
    }
    let frozen = |v: Vertex| !sk.in_s(v) && !g.neighbors(v).iter().any(|&x| sk.in_s(x));
    let last = path.len() - 1;
    let mut seq = Vec::with_capacity(path.len());
    let mut run: Vec<Vertex> = Vec::new();
    for (i, &v) in path.iter().enumerate() {
        if i != 0 && i != last && !keep(v) && frozen(v) {
            run.push(v);
            continue;
        }
        if !run.is_empty() {
            let a = *seq.last().unwrap();
            runs.insert((a, v), std::mem::take(&mut run));
        }
        seq.push(v);
    }
    (seq, runs)
}

fn expand(seq: &[Vertex], runs: &RunTable) -> Vec<Vertex> {
    if runs.is_empty() {
        return seq.to_vec();
    }
    let mut out = Vec::with_capacity(seq.len());
    out.push(seq[0]);
    for w in seq.windows(2) {
        let (a, b) = (w[0], w[1]);
        if let Some(r) = runs.get(&(a, b)) {
            out.extend_from_slice(r);
        } else if let Some(r) = runs.get(&(b, a)) {
            out.extend(r.iter().rev());
        }
        out.push(b);
    }
    out
}

/// Breadth-first search over compressed path states. Every state is rotated
/// at its last vertex with its first vertex fixed; states that reach a new
/// `(first, last)` pair are expanded before the others.
struct Search {
    states: Vec<Rc<[Vertex]>>,
    /// First state reaching each `(fixed, end)` pair, in discovery order.
    first: HashMap<(Vertex, Vertex), usize>,
    keys: Vec<(Vertex, Vertex)>,
    expanded: usize,
    exhaustive: bool,
}

fn search<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, seeds: Vec<Rc<[Vertex]>>, rule: RotationRule, max_states: usize) -> Search {
    let mut out = Search {
        states: Vec::new(),
        first: HashMap::new(),
        keys: Vec::new(),
        expanded: 0,
        exhaustive: true,
    };
    let mut visited: HashSet<Rc<[Vertex]>> = HashSet::new();
    let mut fresh: VecDeque<usize> = VecDeque::new();
    let mut stale: VecDeque<usize> = VecDeque::new();
    let mut admit = |out: &mut Search, st: Rc<[Vertex]>, fresh: &mut VecDeque<usize>, stale: &mut VecDeque<usize>| {
        if st.len() < 2 || !visited.insert(st.clone()) {
            return;
        }
        let slot = out.states.len();
        let key = (st[0], st[st.len() - 1]);
        if let std::collections::hash_map::Entry::Vacant(e) = out.first.entry(key) {
            e.insert(slot);
            out.keys.push(key);
            fresh.push_back(slot);
        } else {
            stale.push_back(slot);
        }
        out.states.push(st);
    };
    for st in seeds {
        admit(&mut out, st, &mut fresh, &mut stale);
    }
    let pivot_ok = |x: Vertex| rule == RotationRule::Unrestricted || sk.in_s(x);
    let mut pos: HashMap<Vertex, usize> = HashMap::new();
    while let Some(idx) = fresh.pop_front().or_else(|| stale.pop_front()) {
        if out.expanded >= max_states {
            out.exhaustive = false;
            break;
        }
        out.expanded += 1;
        let cur = out.states[idx].clone();
        let len = cur.len();
        let w = cur[len - 1];
        let prev = cur[len - 2];
        pos.clear();
        pos.extend(cur.iter().enumerate().map(|(i, &v)| (v, i)));
        for &x in g.neighbors(w) {
            let Some(&i) = pos.get(&x) else { continue };
            if i == 0 || x == prev || !pivot_ok(x) {
                continue;
            }
            let mut next = Vec::with_capacity(len);
            next.extend_from_slice(&cur[..=i]);
            next.extend(cur[i + 1..].iter().rev());
            admit(&mut out, next.into(), &mut fresh, &mut stale);
        }
    }
    out
}

/// Endpoints reachable from a path by rotations at its free end.
#[derive(Debug, Clone)]
pub struct RotationClosure {
    pub fixed: Vertex,
    /// Reachable free ends in discovery order; the first is the original free end.
    pub endpoints: Vec<Vertex>,
    witness: HashMap<Vertex, usize>,
    states: Vec<Rc<[Vertex]>>,
    runs: Rc<RunTable>,
    pub states_expanded: usize,
    /// False when the state budget cut the search short.
    pub exhaustive: bool,
}

impl RotationClosure {
    pub fn contains(&self, w: Vertex) -> bool {
        self.witness.contains_key(&w)
    }

    pub fn endpoint_set(&self) -> BTreeSet<Vertex> {
        self.endpoints.iter().copied().collect()
    }

    /// A path on the same vertex set running from the fixed end to `w`.
    pub fn witness(&self, w: Vertex) -> Option<Vec<Vertex>> {
        self.witness.get(&w).map(|&i| expand(&self.states[i], &self.runs))
    }
}

/// Breadth-first closure under rotations at the free end `path.last()`,
/// keeping `path[0]` fixed.
pub fn limited_rotation_closure<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, path: &[Vertex], params: RotationParams) -> Result<RotationClosure, RotationError> {
    validate_path(g, path)?;
    Ok(closure_unchecked(g, sk, path, params))
}

fn closure_unchecked<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, path: &[Vertex], params: RotationParams) -> RotationClosure {
    let (start, runs) = compress(g, sk, path, params.rule, |_| false);
    let s = search(g, sk, vec![start.into()], params.rule, params.max_states);
    RotationClosure {
        fixed: path[0],
        endpoints: s.keys.iter().map(|k| k.1).collect(),
        witness: s.keys.iter().map(|k| (k.1, s.first[k])).collect(),
        states: s.states,
        runs: Rc::new(runs),
        states_expanded: s.expanded,
        exhaustive: s.exhaustive,
    }
}

/// Expansion budget of the second level of [`endpoint_pairs`], as a multiple of `max_states`.
pub const SECOND_LEVEL_FACTOR: usize = 8;

/// Pairs `{u, w}` that are the two ends of some path on `V(P)` reachable by
/// two levels of rotations: first at `P`'s last vertex with `P[0]` fixed, then,
/// starting from every path reached that way, at the other end with its new
/// end `u` fixed. When the ends of `P` are adjacent, every path obtained by
/// deleting an `S'`–`S'` edge of that cycle is a starting path as well.
#[derive(Debug, Clone, Default)]
pub struct EndpointPairs {
    /// Unordered pairs `(min, max)`, mapped to the first state reaching them.
    pairs: BTreeMap<(Vertex, Vertex), usize>,
    states: Vec<Rc<[Vertex]>>,
    runs: Rc<RunTable>,
    pub exhaustive: bool,
}

impl EndpointPairs {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
    pub fn contains(&self, a: Vertex, b: Vertex) -> bool {
        self.pairs.contains_key(&(a.min(b), a.max(b)))
    }
    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.pairs.keys().copied()
    }
    pub fn set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.iter().collect()
    }
    /// A path on `V(P)` running from `a` to `b`.
    pub fn witness(&self, a: Vertex, b: Vertex) -> Option<Vec<Vertex>> {
        let &i = self.pairs.get(&(a.min(b), a.max(b)))?;
        let mut p = expand(&self.states[i], &self.runs);
        if p[0] != a {
            p.reverse();
        }
        Some(p)
    }
}

pub fn endpoint_pairs<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, path: &[Vertex], params: RotationParams) -> Result<EndpointPairs, RotationError> {
    validate_path(g, path)?;
    if path.len() < 2 {
        return Ok(EndpointPairs {
            exhaustive: true,
            ..EndpointPairs::default()
        });
    }
    // A cycle on V(P) is also entered at every S'-S' edge, so opening it
    // there gives a starting path of its own.
    let cyclic = path.len() >= 3 && g.has_edge(path[0], path[path.len() - 1]);
    let (start, runs) = compress(g, sk, path, params.rule, |v| cyclic && sk.in_s_prime(v));
    let mut seeds: Vec<Rc<[Vertex]>> = Vec::new();
    if cyclic {
        for i in 0..start.len() - 1 {
            let (c, d) = (start[i], start[i + 1]);
            if sk.in_s_prime(c) && sk.in_s_prime(d) && !runs.contains_key(&(c, d)) {
                seeds.push(start[i + 1..].iter().chain(&start[..=i]).copied().collect());
            }
        }
    }
    seeds.insert(0, start.into());
    let first = search(g, sk, seeds, params.rule, params.max_states);
    let seeds: Vec<Rc<[Vertex]>> = first.states.iter().map(|st| st.iter().rev().copied().collect::<Vec<_>>().into()).collect();
    let budget = params.max_states.saturating_mul(SECOND_LEVEL_FACTOR);
    let second = search(g, sk, seeds, params.rule, budget);
    let mut pairs = BTreeMap::new();
    for &(u, w) in &second.keys {
        pairs.entry((u.min(w), u.max(w))).or_insert(second.first[&(u, w)]);
    }
    Ok(EndpointPairs {
        pairs,
        states: second.states,
        runs: Rc::new(runs),
        exhaustive: first.exhaustive && second.exhaustive,
    })
}

/// Re-arrange `path` into a path on the same vertex set whose two ends are
/// both in `S'`.
///
/// An end `w` outside `S'` is interior to an `F`-path, so both of its Maker
/// neighbours lie on the path. If one of them is the other end, the path
/// closes into a cycle that is opened at an `S'`–`S'` edge; otherwise the
/// edge `wx` to an interior vertex `x` is exchanged for the edge `xy` toward
/// `w`, making `y` the new end.
pub fn normalize_endpoints<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, path: &[Vertex]) -> Result<Vec<Vertex>, RotationError> {
    validate_path(g, path)?;
    if !path.iter().any(|&v| sk.in_s(v)) {
        return Err(RotationError::NoSkeletonVertex);
    }
    let mut p = path.to_vec();
    let len = p.len();
    let mut tried: HashSet<Vec<Vertex>> = HashSet::new();
    loop {
        let (a, z) = (p[0], p[len - 1]);
        if sk.in_s_prime(a) && sk.in_s_prime(z) {
            return Ok(p);
        }
        if len < 2 {
            return Err(RotationError::NormalizationFailed("single vertex outside S'".into()));
        }
        if !tried.insert(p.clone()) {
            return Err(RotationError::NormalizationFailed("exchange moves cycle".into()));
        }
        if sk.in_s_prime(z) {
            p.reverse();
        }
        let w = p[len - 1];
        let prev = p[len - 2];
        if len >= 3 && g.has_edge(w, p[0]) {
            // cycle on V(P): open it at an S'-S' edge
            for i in 0..len {
                let (c, d) = (p[i], p[(i + 1) % len]);
                if sk.in_s_prime(c) && sk.in_s_prime(d) {
                    let mut q = Vec::with_capacity(len);
                    q.extend_from_slice(&p[i + 1..]);
                    q.extend_from_slice(&p[..=i]);
                    return Ok(q);
                }
            }
            return Err(RotationError::NormalizationFailed(format!("cycle through {w} has no S'-S' edge")));
        }
        let pos: HashMap<Vertex, usize> = p.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut choice: Option<usize> = None;
        for &x in g.neighbors(w) {
            let Some(&i) = pos.get(&x) else { continue };
            if x == prev || i == 0 {
                continue;
            }
            let better = choice.is_none() || (sk.in_s_prime(p[i + 1]) && !sk.in_s_prime(p[choice.unwrap() + 1]));
            if better {
                choice = Some(i);
            }
        }
        let Some(i) = choice else {
            return Err(RotationError::NormalizationFailed(format!("end {w} has no chord into the path")));
        };
        p[i + 1..].reverse();
    }
}

/// Outcome of searching for a booster on the tracked path.
#[derive(Debug, Clone)]
pub struct BoosterSearch {
    pub pairs: EndpointPairs,
    /// `(u, v, path)` with `u < v`, both in `S_0`, `uv` unclaimed, and `path`
    /// a Maker path on `V(P)` from `u` to `v`.
    pub booster: Option<(Vertex, Vertex, Vec<Vertex>)>,
    /// A pair already owned by Maker: a cycle on `V(P)` exists.
    pub owned_pair: Option<(Vertex, Vertex, Vec<Vertex>)>,
}

/// Lexicographically least unclaimed `S_0`-pair among the endpoint pairs of
/// `path` that also satisfies `eligible`.
pub fn find_booster(
    state: &GameState,
    ps: &PathSystem,
    path: &[Vertex],
    params: RotationParams,
    eligible: impl Fn(Vertex, Vertex) -> bool,
) -> Result<BoosterSearch, RotationError> {
    let pairs = endpoint_pairs(state, ps, path, params)?;
    let mut booster = None;
    let mut owned_pair = None;
    if path.len() >= 3 {
        for (a, b) in pairs.iter() {
            if owned_pair.is_none() && state.owner(a, b) == Owner::Maker {
                owned_pair = pairs.witness(a, b).map(|p| (a, b, p));
            }
            if booster.is_none() && ps.in_s0(a) && ps.in_s0(b) && state.owner(a, b) == Owner::Unclaimed && eligible(a, b) {
                booster = pairs.witness(a, b).map(|p| (a, b, p));
            }
            if booster.is_some() && owned_pair.is_some() {
                break;
            }
        }
    }
    Ok(BoosterSearch { pairs, booster, owned_pair })
}

fn ends_adjacent<G: MakerGraph>(g: &G, p: &[Vertex]) -> bool {
    p.len() >= 3 && g.has_edge(p[0], p[p.len() - 1])
}

/// Outside neighbour of `v` with the fewest outside neighbours of its own.
fn pick_extension<G: MakerGraph>(g: &G, on: &[bool], v: Vertex) -> Option<Vertex> {
    g.neighbors(v).iter().copied().filter(|&x| !on[x as usize]).min_by_key(|&x| {
        let free = g.neighbors(x).iter().filter(|&&y| !on[y as usize]).count();
        (free, x)
    })
}

fn extend_greedy<G: MakerGraph>(g: &G, p: &mut Vec<Vertex>, on: &mut [bool]) -> bool {
    let start = p.len();
    loop {
        let before = p.len();
        for _ in 0..2 {
            while let Some(x) = pick_extension(g, on, *p.last().unwrap()) {
                on[x as usize] = true;
                p.push(x);
            }
            p.reverse();
        }
        if p.len() == before {
            break;
        }
    }
    p.len() > start
}

/// Open a cycle on `V(p)` at a vertex with an outside neighbour and step out.
fn open_cycle<G: MakerGraph>(g: &G, p: &[Vertex], on: &mut [bool]) -> Option<Vec<Vertex>> {
    let len = p.len();
    for i in 0..len {
        if let Some(x) = pick_extension(g, on, p[i]) {
            let mut q = Vec::with_capacity(len + 1);
            q.extend_from_slice(&p[i + 1..]);
            q.extend_from_slice(&p[..=i]);
            on[x as usize] = true;
            q.push(x);
            return Some(q);
        }
    }
    None
}

/// Grow `p` by greedy extension, rotations and cycle opening until none applies.
/// The vertex set only ever grows.
pub fn grow_path<G: MakerGraph, K: Skeleton>(g: &G, sk: &K, mut p: Vec<Vertex>, params: RotationParams) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut on = vec![false; n];
    for &v in &p {
        on[v as usize] = true;
    }
    'outer: loop {
        extend_greedy(g, &mut p, &mut on);
        if p.len() == n || p.len() < 2 {
            break;
        }
        if ends_adjacent(g, &p) {
            if let Some(q) = open_cycle(g, &p, &mut on) {
                p = q;
                continue;
            }
        }
        for flip in [false, true] {
            let oriented: Vec<Vertex> = if flip { p.iter().rev().copied().collect() } else { p.clone() };
            let c = closure_unchecked(g, sk, &oriented, params);
            for &w in c.endpoints.iter().skip(1) {
                if g.neighbors(w).iter().any(|&x| !on[x as usize]) {
                    p = c.witness(w).unwrap();
                    continue 'outer;
                }
            }
            for &w in &c.endpoints {
                if w != c.fixed && g.has_edge(w, c.fixed) {
                    let cyc = c.witness(w).unwrap();
                    if let Some(q) = open_cycle(g, &cyc, &mut on) {
                        p = q;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    p
}

/// First tracked path: grown from the least vertex of `S`.
pub fn initial_tracked_path<G: MakerGraph>(g: &G, ps: &PathSystem, turn: u32, params: RotationParams) -> TrackedPath {
    let start = ps.s().next().expect("S is never empty");
    let path = grow_path(g, ps, vec![start], params);
    let cycle_closed = ends_adjacent(g, &path);
    TrackedPath {
        path,
        generation: turn,
        cycle_closed,
    }
}

/// `P_i` from `P_{i-1}`: a Maker path containing every vertex of the previous
/// one, grown as far as the search reaches. A closed cycle that can be left
/// through a Maker edge is always opened, so a grown path resets the flag.
pub fn advance_tracked_path<G: MakerGraph>(g: &G, ps: &PathSystem, tracked: &TrackedPath, turn: u32, params: RotationParams) -> TrackedPath {
    if tracked.len() == g.vertex_count() {
        let mut t = tracked.clone();
        t.cycle_closed |= ends_adjacent(g, &t.path);
        return t;
    }
    let path = grow_path(g, ps, tracked.path.clone(), params);
    if path.len() > tracked.len() {
        let cycle_closed = ends_adjacent(g, &path);
        TrackedPath {
            path,
            generation: turn,
            cycle_closed,
        }
    } else {
        let mut t = tracked.clone();
        t.cycle_closed = tracked.cycle_closed || ends_adjacent(g, &t.path);
        t
    }
}

// Independent brute-force oracles. Paths are handled as edge sets, never as
// vertex sequences, so nothing here shares logic with the engine.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use hamgame::board::{GameState, Player};
use hamgame::Vertex;
use rand::seq::SliceRandom;
use rand::Rng;

pub type E = (Vertex, Vertex);

pub fn e(a: Vertex, b: Vertex) -> E {
    (a.min(b), a.max(b))
}

pub fn path_edges(p: &[Vertex]) -> BTreeSet<E> {
    p.windows(2).map(|w| e(w[0], w[1])).collect()
}

/// Distinct vertices joined consecutively by edges of `maker`.
pub fn is_maker_path(maker: &BTreeSet<E>, p: &[Vertex]) -> bool {
    let distinct: BTreeSet<Vertex> = p.iter().copied().collect();
    distinct.len() == p.len() && p.windows(2).all(|w| maker.contains(&e(w[0], w[1])))
}

/// If `edges` form a Hamilton path on `verts` with `v` as one end, the other end.
pub fn ham_path_end(edges: &BTreeSet<E>, verts: &BTreeSet<Vertex>, v: Vertex) -> Option<Vertex> {
    if verts.len() < 2 || edges.len() != verts.len() - 1 {
        return None;
    }
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(a, b) in edges {
        if !verts.contains(&a) || !verts.contains(&b) {
            return None;
        }
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|nb| nb.len() > 2) || adj.get(&v).map_or(0, |nb| nb.len()) != 1 {
        return None;
    }
    let (mut prev, mut cur, mut seen) = (v, adj[&v][0], 2);
    while let Some(&nx) = adj[&cur].iter().find(|&&x| x != prev) {
        prev = cur;
        cur = nx;
        seen += 1;
    }
    (seen == verts.len()).then_some(cur)
}

/// Bit of the pair `{a, b}` in a `u64` edge mask (vertices below 11).
fn bit(a: Vertex, b: Vertex) -> u64 {
    let (a, b) = (a.min(b) as u64, a.max(b) as u64);
    1 << (b * (b - 1) / 2 + a)
}

fn mask_of(edges: &BTreeSet<E>) -> u64 {
    edges.iter().map(|&(a, b)| bit(a, b)).fold(0, |m, x| m | x)
}

/// Far end of the edge mask `m` if it is a Hamilton path on `verts` starting at `v`.
fn mask_path_end(m: u64, verts: &[Vertex], v: Vertex) -> Option<Vertex> {
    if m.count_ones() as usize != verts.len() - 1 {
        return None;
    }
    let nb = |x: Vertex| verts.iter().copied().filter(move |&y| y != x && m & bit(x, y) != 0);
    if verts.iter().any(|&x| nb(x).count() > 2) || nb(v).count() != 1 {
        return None;
    }
    let (mut prev, mut cur, mut seen) = (v, nb(v).next().unwrap(), 2);
    while let Some(nx) = nb(cur).find(|&x| x != prev) {
        prev = cur;
        cur = nx;
        seen += 1;
    }
    (seen == verts.len()).then_some(cur)
}

/// Sorted vertex set spanned by an edge set.
fn span(edges: &BTreeSet<E>) -> Vec<Vertex> {
    let verts: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect::<BTreeSet<_>>().into_iter().collect();
    assert!(verts.iter().all(|&x| x < 11));
    verts
}

/// Every `(edge mask, fixed end, far end)` reachable from `seeds` by rotations
/// `E + wx - e` at the far end `w`, with `x` a pivot allowed by `pivot` and
/// `e` a path edge at `x`. States are shared across seeds, so each path with
/// a given fixed end is expanded once.
fn explore(all: u64, verts: &[Vertex], seeds: &[(u64, Vertex)], pivot: &dyn Fn(Vertex) -> bool) -> Vec<(u64, Vertex, Vertex)> {
    let mut seen: HashSet<(u64, Vertex)> = HashSet::new();
    let mut queue = VecDeque::new();
    for &(m, v) in seeds {
        let end = mask_path_end(m, verts, v).expect("seed is a path with end v");
        if seen.insert((m, v)) {
            queue.push_back((m, v, end));
        }
    }
    let mut out = Vec::new();
    while let Some((q, v, w)) = queue.pop_front() {
        for &x in verts {
            if x == v || x == w || !pivot(x) || all & bit(w, x) == 0 || q & bit(w, x) != 0 {
                continue;
            }
            for &y in verts {
                if y == x || q & bit(x, y) == 0 {
                    continue;
                }
                let next = (q & !bit(x, y)) | bit(w, x);
                if let Some(end) = mask_path_end(next, verts, v) {
                    if seen.insert((next, v)) {
                        queue.push_back((next, v, end));
                    }
                }
            }
        }
        out.push((q, v, w));
    }
    out
}

fn unmask(m: u64, verts: &[Vertex]) -> BTreeSet<E> {
    let mut s = BTreeSet::new();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            if m & bit(a, b) != 0 {
                s.insert(e(a, b));
            }
        }
    }
    s
}

/// Every edge-set path reachable from `start` (fixed end `v`) by rotations.
/// Edge sets are kept as bit masks, so vertices must be below 11.
pub fn rotation_family(maker: &BTreeSet<E>, start: &BTreeSet<E>, v: Vertex, pivot: &dyn Fn(Vertex) -> bool) -> Vec<(BTreeSet<E>, Vertex)> {
    let verts = span(start);
    explore(mask_of(maker), &verts, &[(mask_of(start), v)], pivot)
        .into_iter()
        .map(|(m, _, w)| (unmask(m, &verts), w))
        .collect()
}

pub fn oracle_closure(maker: &BTreeSet<E>, path: &[Vertex], pivot: &dyn Fn(Vertex) -> bool) -> BTreeSet<Vertex> {
    rotation_family(maker, &path_edges(path), path[0], pivot).into_iter().map(|(_, w)| w).collect()
}

/// Two levels: rotate at the far end with `path[0]` fixed, then from every
/// path reached, fix its new far end `u` and rotate at the other one. If the
/// ends of `path` are adjacent, each deletion of a cycle edge with both ends
/// in `S'` also starts the search (oriented along `path`).
pub fn oracle_pairs(maker: &BTreeSet<E>, path: &[Vertex], pivot: &dyn Fn(Vertex) -> bool, s_prime: &dyn Fn(Vertex) -> bool) -> BTreeSet<E> {
    let len = path.len();
    let mut starts = vec![path.to_vec()];
    if len >= 3 && maker.contains(&e(path[0], path[len - 1])) {
        for i in 0..len - 1 {
            if s_prime(path[i]) && s_prime(path[i + 1]) {
                starts.push(path[i + 1..].iter().chain(&path[..=i]).copied().collect());
            }
        }
    }
    let verts = span(&path_edges(path));
    let all = mask_of(maker);
    let seeds: Vec<(u64, Vertex)> = starts.iter().map(|p| (mask_of(&path_edges(p)), p[0])).collect();
    let first: Vec<(u64, Vertex)> = explore(all, &verts, &seeds, pivot).into_iter().map(|(m, _, u)| (m, u)).collect();
    explore(all, &verts, &first, pivot).into_iter().map(|(_, u, w)| e(u, w)).collect()
}

/// All Hamilton paths of the graph `maker` on `verts`, as ordered sequences.
pub fn hamilton_paths(maker: &BTreeSet<E>, verts: &BTreeSet<Vertex>) -> Vec<Vec<Vertex>> {
    fn go(maker: &BTreeSet<E>, verts: &BTreeSet<Vertex>, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == verts.len() {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().unwrap();
        for &x in verts {
            if !cur.contains(&x) && maker.contains(&e(last, x)) {
                cur.push(x);
                go(maker, verts, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for &s in verts {
        go(maker, verts, &mut vec![s], &mut out);
    }
    out
}

/// Vertex count of the longest path in `maker` containing every vertex of
/// `required`, by subset dynamic programming. For `n <= 16`.
pub fn longest_path_through(n: usize, maker: &BTreeSet<E>, required: &[Vertex]) -> usize {
    assert!(n <= 16);
    let need: u32 = required.iter().map(|&v| 1u32 << v).sum();
    let full = 1usize << n;
    let mut reach = vec![0u16; full];
    for v in 0..n {
        reach[1 << v] |= 1 << v;
    }
    let mut best = if need.count_ones() <= 1 { 1 } else { 0 };
    for mask in 1..full {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        if mask as u32 & need == need {
            best = best.max((mask as u32).count_ones() as usize);
        }
        for v in 0..n {
            if ends & (1 << v) == 0 {
                continue;
            }
            for x in 0..n {
                if mask & (1 << x) == 0 && maker.contains(&e(v as Vertex, x as Vertex)) {
                    reach[mask | (1 << x)] |= 1 << x;
                }
            }
        }
    }
    best
}

/// Board on which Maker owns exactly `maker` (directed as given) and Breaker
/// owns `breaker`, at most `b` Breaker edges per round. Left at Maker's
/// half-move, troublesome flags refreshed after every Breaker move.
pub fn board(n: usize, b: usize, tau: u32, maker: &[(Vertex, Vertex)], breaker: &[(Vertex, Vertex)]) -> GameState {
    let mut st = GameState::empty(n, b, tau);
    let mut pending = breaker.iter().copied();
    let mut rounds = maker.iter();
    loop {
        for (x, y) in pending.by_ref().take(b) {
            st.claim_edge(Player::Breaker, x, y).unwrap();
        }
        st.end_breaker_move().unwrap();
        st.refresh_troublesome();
        match rounds.next() {
            Some(&(t, h)) => {
                st.claim_edge(Player::Maker, t, h).unwrap();
            }
            None => break,
        }
    }
    assert!(pending.next().is_none(), "more Breaker edges than rounds");
    st
}

/// Random small rotation instance: a Maker path through a random subset of
/// the vertices plus random chords, a random `S`, and random extra members
/// of `S'`.
pub struct Instance {
    pub n: usize,
    pub path: Vec<Vertex>,
    pub maker: BTreeSet<E>,
    pub s: Vec<Vertex>,
    pub extra: Vec<Vertex>,
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize) -> Instance {
    let n = rng.gen_range(3..=max_n);
    let mut verts: Vec<Vertex> = (0..n as Vertex).collect();
    verts.shuffle(rng);
    let len = rng.gen_range(2..=n);
    let path: Vec<Vertex> = verts[..len].to_vec();
    let mut maker = path_edges(&path);
    let density: f64 = rng.gen_range(0.1..0.7);
    for a in 0..n as Vertex {
        for c in a + 1..n as Vertex {
            if rng.gen_bool(density) {
                maker.insert((a, c));
            }
        }
    }
    let p_s: f64 = rng.gen_range(0.2..0.9);
    let s: Vec<Vertex> = (0..n as Vertex).filter(|_| rng.gen_bool(p_s)).collect();
    let extra: Vec<Vertex> = (0..n as Vertex).filter(|v| !s.contains(v) && rng.gen_bool(0.3)).collect();
    Instance { n, path, maker, s, extra }
}

//! The growing vertex set `S` and the family `F` of vertex-disjoint paths
//! partitioning `V - S`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::board::GameState;
use crate::error::GameError;
use crate::Vertex;

pub type PathId = u32;

const IN_S: PathId = PathId::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absorb {
    Absorbed,
    /// The vertex was already in `S` (e.g. promoted earlier in the same round).
    AlreadyInS,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSystem {
    n: usize,
    s0: Vec<Vertex>,
    in_s0: Vec<bool>,
    s: BTreeSet<Vertex>,
    paths: BTreeMap<PathId, VecDeque<Vertex>>,
    /// `IN_S` for members of `S`, otherwise the id of the containing path.
    locator: Vec<PathId>,
    next_id: PathId,
}

impl PathSystem {
    /// `S = S_0` and one singleton path per vertex of `V - S_0`, ids in vertex order.
    pub fn new(n: usize, s0: &[Vertex]) -> Result<PathSystem, GameError> {
        let mut in_s0 = vec![false; n];
        for &v in s0 {
            if v as usize >= n {
                return Err(GameError::NoSuchVertex(v));
            }
            in_s0[v as usize] = true;
        }
        let mut s0: Vec<Vertex> = s0.to_vec();
        s0.sort_unstable();
        s0.dedup();
        if s0.is_empty() || s0.len() >= n {
            return Err(GameError::Strategy(format!("|S_0| = {} must satisfy 0 < |S_0| < n = {n}", s0.len())));
        }
        let mut locator = vec![IN_S; n];
        let mut paths = BTreeMap::new();
        let mut next_id = 0;
        for v in 0..n as Vertex {
            if !in_s0[v as usize] {
                locator[v as usize] = next_id;
                paths.insert(next_id, VecDeque::from([v]));
                next_id += 1;
            }
        }
        Ok(PathSystem {
            n,
            s: s0.iter().copied().collect(),
            s0,
            in_s0,
            paths,
            locator,
            next_id,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn s0(&self) -> &[Vertex] {
        &self.s0
    }
    pub fn in_s0(&self, v: Vertex) -> bool {
        self.in_s0[v as usize]
    }
    pub fn in_s(&self, v: Vertex) -> bool {
        self.locator[v as usize] == IN_S
    }
    /// `S` in increasing order.
    pub fn s(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.s.iter().copied()
    }
    pub fn s_len(&self) -> usize {
        self.s.len()
    }
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }
    pub fn path_of(&self, v: Vertex) -> Option<PathId> {
        let id = self.locator[v as usize];
        (id != IN_S).then_some(id)
    }
    pub fn path(&self, id: PathId) -> Option<&VecDeque<Vertex>> {
        self.paths.get(&id)
    }
    /// Paths in increasing id order.
    pub fn paths(&self) -> impl Iterator<Item = (PathId, &VecDeque<Vertex>)> {
        self.paths.iter().map(|(id, p)| (*id, p))
    }

    /// The two ends of a path (equal for a singleton), smaller first.
    pub fn ends(&self, id: PathId) -> Option<(Vertex, Vertex)> {
        let p = self.paths.get(&id)?;
        let (a, b) = (*p.front()?, *p.back()?);
        Some((a.min(b), a.max(b)))
    }

    pub fn is_path_end(&self, v: Vertex) -> bool {
        match self.path_of(v) {
            Some(id) => {
                let p = &self.paths[&id];
                p.front() == Some(&v) || p.back() == Some(&v)
            }
            None => false,
        }
    }

    /// Interior vertex of some `F`-path.
    pub fn is_interior(&self, v: Vertex) -> bool {
        self.path_of(v).is_some() && !self.is_path_end(v)
    }

    /// `S' = S ∪ {endpoints of F-paths}`.
    pub fn in_s_prime(&self, v: Vertex) -> bool {
        self.in_s(v) || self.is_path_end(v)
    }

    /// `S'` in increasing order.
    pub fn s_prime(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.s.iter().copied().collect();
        for p in self.paths.values() {
            out.push(*p.front().unwrap());
            if p.len() > 1 {
                out.push(*p.back().unwrap());
            }
        }
        out.sort_unstable();
        out
    }

    /// All path endpoints, in increasing vertex order.
    pub fn path_ends(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(2 * self.paths.len());
        for p in self.paths.values() {
            out.push(*p.front().unwrap());
            if p.len() > 1 {
                out.push(*p.back().unwrap());
            }
        }
        out.sort_unstable();
        out
    }

    /// Move `v` into `S`, splitting its path into the components of `P - v`.
    pub fn absorb_vertex(&mut self, v: Vertex) -> Absorb {
        let Some(id) = self.path_of(v) else {
            return Absorb::AlreadyInS;
        };
        let mut p = self.paths.remove(&id).expect("locator points at a live path");
        let pos = p.iter().position(|&x| x == v).expect("vertex on its path");
        let right = p.split_off(pos + 1);
        p.pop_back();
        self.locator[v as usize] = IN_S;
        self.s.insert(v);
        // left part keeps the id, right part gets a fresh one unless it is alone
        match (p.is_empty(), right.is_empty()) {
            (true, true) => {}
            (true, false) => {
                self.paths.insert(id, right);
            }
            (false, true) => {
                self.paths.insert(id, p);
            }
            (false, false) => {
                self.paths.insert(id, p);
                let rid = self.next_id;
                self.next_id += 1;
                for &x in &right {
                    self.locator[x as usize] = rid;
                }
                self.paths.insert(rid, right);
            }
        }
        Absorb::Absorbed
    }

    /// First pair `(u, v)` of endpoints of two distinct paths with
    /// `d_M(u), d_M(v) <= 1` and `uv` not Breaker's, scanning by lowest path
    /// id, then lowest endpoint.
    pub fn find_uv_available(&self, state: &GameState) -> Option<(Vertex, Vertex)> {
        let mut live: Vec<(PathId, Vertex)> = Vec::new();
        for (&id, p) in &self.paths {
            let a = *p.front().unwrap();
            let b = *p.back().unwrap();
            let (lo, hi) = (a.min(b), a.max(b));
            if state.d_m(lo) <= 1 {
                live.push((id, lo));
            }
            if hi != lo && state.d_m(hi) <= 1 {
                live.push((id, hi));
            }
        }
        for (i, &(pid, u)) in live.iter().enumerate() {
            for &(qid, v) in &live[i + 1..] {
                if qid != pid && state.owner(u, v) != crate::board::Owner::Breaker {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Replace the paths ending at `u` and `v` with their concatenation through `uv`.
    pub fn join_paths(&mut self, u: Vertex, v: Vertex) -> Result<PathId, GameError> {
        let (Some(pu), Some(pv)) = (self.path_of(u), self.path_of(v)) else {
            return Err(GameError::Strategy(format!("join {u}-{v}: endpoint in S")));
        };
        if pu == pv {
            return Err(GameError::Strategy(format!("join {u}-{v}: same path")));
        }
        if !self.is_path_end(u) || !self.is_path_end(v) {
            return Err(GameError::Strategy(format!("join {u}-{v}: not both endpoints")));
        }
        let mut a = self.paths.remove(&pu).unwrap();
        let mut b = self.paths.remove(&pv).unwrap();
        // orient a to end at u and b to start at v
        if a.back() != Some(&u) {
            a.make_contiguous().reverse();
        }
        if b.front() != Some(&v) {
            b.make_contiguous().reverse();
        }
        let id = pu.min(pv);
        let moved = if pu == id { &b } else { &a };
        for &x in moved {
            self.locator[x as usize] = id;
        }
        let joined = if a.len() >= b.len() {
            a.extend(b);
            a
        } else {
            for &x in a.iter().rev() {
                b.push_front(x);
            }
            b
        };
        self.paths.insert(id, joined);
        Ok(id)
    }

    /// Partition invariant: paths are disjoint, cover exactly `V - S`, and the
    /// locator agrees with both. Returns the first violation found.
    pub fn partition_violation(&self) -> Option<String> {
        let mut seen = vec![false; self.n];
        for &v in &self.s {
            if self.locator[v as usize] != IN_S {
                return Some(format!("vertex {v} in S but located on a path"));
            }
            seen[v as usize] = true;
        }
        for (&id, p) in &self.paths {
            if p.is_empty() {
                return Some(format!("path {id} is empty"));
            }
            for &v in p {
                if seen[v as usize] {
                    return Some(format!("vertex {v} covered twice"));
                }
                seen[v as usize] = true;
                if self.locator[v as usize] != id {
                    return Some(format!("vertex {v} on path {id} but located elsewhere"));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Some(format!("vertex {v} not covered"));
        }
        if let Some(v) = self.s0.iter().find(|v| !self.s.contains(v)) {
            return Some(format!("S_0 vertex {v} left S"));
        }
        None
    }

    /// Every interior vertex of every path has `d_M <= 2`.
    pub fn interior_degree_violation(&self, state: &GameState) -> Option<String> {
        for (&id, p) in &self.paths {
            if p.len() <= 2 {
                continue;
            }
            for &v in p.iter().skip(1).take(p.len() - 2) {
                if state.d_m(v) > 2 {
                    return Some(format!("interior vertex {v} of path {id} has d_M = {}", state.d_m(v)));
                }
            }
        }
        None
    }

    /// Consecutive path vertices are joined by Maker edges.
    pub fn path_edge_violation(&self, state: &GameState) -> Option<String> {
        for (&id, p) in &self.paths {
            for (a, b) in p.iter().zip(p.iter().skip(1)) {
                if !state.is_maker(*a, *b) {
                    return Some(format!("path {id} uses non-Maker pair {a}-{b}"));
                }
            }
        }
        None
    }
}

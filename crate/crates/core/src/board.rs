//! Board state of the game on `K_n`: edge ownership, Maker's directed edges,
//! degree and danger bookkeeping, troublesome-vertex detection.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::GameConfig;
use crate::error::{ConfigError, GameError};
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[repr(u8)]
pub enum Owner {
    #[default]
    Unclaimed = 0,
    Maker = 1,
    Breaker = 2,
}

/// A claimed edge, serialized as `[tail, head]`. Breaker edges carry no
/// meaningful direction and are stored with `tail < head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn tail(self) -> Vertex {
        self.0
    }
    pub fn head(self) -> Vertex {
        self.1
    }
    pub fn key(self) -> (Vertex, Vertex) {
        (self.0.min(self.1), self.0.max(self.1))
    }
}

#[inline]
fn tri(u: Vertex, v: Vertex) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    let b = b as usize;
    b * (b - 1) / 2 + a as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    n: usize,
    b: usize,
    tau: u32,
    owner: Vec<Owner>,
    maker_out: Vec<Vec<Vertex>>,
    maker_adj: Vec<Vec<Vertex>>,
    maker_edges: Vec<Edge>,
    breaker_edges: Vec<Edge>,
    d_b: Vec<u32>,
    d_m: Vec<u32>,
    d_out: Vec<u32>,
    d_minus: Vec<u32>,
    d_plus: Vec<u32>,
    /// Turn at which the vertex became troublesome.
    onset: Vec<Option<u32>>,
    troublesome: Vec<Vertex>,
    turn: u32,
    mover: Player,
    claims_this_move: usize,
    touched: Vec<Vertex>,
}

impl GameState {
    pub fn new(config: &GameConfig) -> Result<GameState, ConfigError> {
        config.validate()?;
        Ok(Self::empty(config.n, config.b, config.tau))
    }

    /// Board without config validation, used by tests and oracles that
    /// build small graphs directly.
    pub fn empty(n: usize, b: usize, tau: u32) -> GameState {
        GameState {
            n,
            b,
            tau,
            owner: vec![Owner::Unclaimed; n * n.saturating_sub(1) / 2],
            maker_out: vec![Vec::new(); n],
            maker_adj: vec![Vec::new(); n],
            maker_edges: Vec::new(),
            breaker_edges: Vec::new(),
            d_b: vec![0; n],
            d_m: vec![0; n],
            d_out: vec![0; n],
            d_minus: vec![0; n],
            d_plus: vec![0; n],
            onset: vec![None; n],
            troublesome: Vec::new(),
            turn: 1,
            mover: Player::Breaker,
            claims_this_move: 0,
            touched: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn b(&self) -> usize {
        self.b
    }
    pub fn tau(&self) -> u32 {
        self.tau
    }
    pub fn turn(&self) -> u32 {
        self.turn
    }
    pub fn mover(&self) -> Player {
        self.mover
    }
    pub fn pair_count(&self) -> usize {
        self.owner.len()
    }
    pub fn unclaimed_count(&self) -> usize {
        self.owner.len() - self.maker_edges.len() - self.breaker_edges.len()
    }

    pub fn owner(&self, u: Vertex, v: Vertex) -> Owner {
        debug_assert!(u != v);
        self.owner[tri(u, v)]
    }

    /// Owner by triangular pair index, for samplers.
    pub fn owner_at(&self, idx: usize) -> Owner {
        self.owner[idx]
    }

    pub fn is_maker(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.owner(u, v) == Owner::Maker
    }
    pub fn is_unclaimed(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.owner(u, v) == Owner::Unclaimed
    }

    pub fn maker_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.maker_adj[v as usize]
    }
    pub fn maker_out(&self, v: Vertex) -> &[Vertex] {
        &self.maker_out[v as usize]
    }
    pub fn maker_edges(&self) -> &[Edge] {
        &self.maker_edges
    }
    pub fn breaker_edges(&self) -> &[Edge] {
        &self.breaker_edges
    }

    pub fn d_b(&self, v: Vertex) -> u32 {
        self.d_b[v as usize]
    }
    pub fn d_m(&self, v: Vertex) -> u32 {
        self.d_m[v as usize]
    }
    /// `d'_M`: out-degree in Maker's directed graph.
    pub fn d_out(&self, v: Vertex) -> u32 {
        self.d_out[v as usize]
    }
    pub fn d_minus(&self, v: Vertex) -> u32 {
        self.d_minus[v as usize]
    }
    pub fn d_plus(&self, v: Vertex) -> u32 {
        self.d_plus[v as usize]
    }
    /// Unclaimed pairs at `v`.
    pub fn free_degree(&self, v: Vertex) -> u32 {
        (self.n as u32 - 1) - self.d_b(v) - self.d_m(v)
    }

    pub fn is_troublesome(&self, v: Vertex) -> bool {
        self.onset[v as usize].is_some()
    }
    pub fn onset(&self, v: Vertex) -> Option<u32> {
        self.onset[v as usize]
    }
    /// Troublesome vertices in order of onset.
    pub fn troublesome(&self) -> &[Vertex] {
        &self.troublesome
    }

    /// `∂(v) = d_B(v) - b * d⁺_M(v)`.
    pub fn danger(&self, v: Vertex) -> i64 {
        self.d_b(v) as i64 - self.b as i64 * self.d_plus(v) as i64
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GameError> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(GameError::NoSuchVertex(v))
        }
    }

    /// Claim `{tail, head}` for `player`. For Maker the edge is directed
    /// `tail -> head`; a Maker claim ends her half-move and the round.
    pub fn claim_edge(&mut self, player: Player, tail: Vertex, head: Vertex) -> Result<Edge, GameError> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if tail == head {
            return Err(GameError::Loop(tail));
        }
        if player != self.mover {
            return Err(GameError::WrongMover {
                expected: self.mover,
                got: player,
            });
        }
        let idx = tri(tail, head);
        let prior = self.owner[idx];
        if prior != Owner::Unclaimed {
            return Err(GameError::IllegalMove(tail, head, prior));
        }
        match player {
            Player::Breaker => {
                if self.claims_this_move >= self.b {
                    return Err(GameError::BiasExceeded(self.b));
                }
                self.claims_this_move += 1;
                self.owner[idx] = Owner::Breaker;
                self.d_b[tail as usize] += 1;
                self.d_b[head as usize] += 1;
                self.touched.push(tail);
                self.touched.push(head);
                let e = Edge(tail.min(head), tail.max(head));
                self.breaker_edges.push(e);
                Ok(e)
            }
            Player::Maker => {
                self.owner[idx] = Owner::Maker;
                let (t, h) = (tail as usize, head as usize);
                self.maker_out[t].push(head);
                self.maker_adj[t].push(head);
                self.maker_adj[h].push(tail);
                self.d_m[t] += 1;
                self.d_m[h] += 1;
                self.d_out[t] += 1;
                if self.onset[t].is_some() {
                    self.d_plus[t] += 1;
                } else {
                    self.d_minus[t] += 1;
                }
                let e = Edge(tail, head);
                self.maker_edges.push(e);
                self.mover = Player::Breaker;
                self.turn += 1;
                Ok(e)
            }
        }
    }

    /// Close Breaker's half-move (possibly with fewer than `b` claims when the
    /// board is exhausted).
    pub fn end_breaker_move(&mut self) -> Result<(), GameError> {
        if self.mover != Player::Breaker {
            return Err(GameError::WrongMover {
                expected: self.mover,
                got: Player::Breaker,
            });
        }
        self.claims_this_move = 0;
        self.mover = Player::Maker;
        Ok(())
    }

    /// Flag every vertex with `d_B > tau` that is not yet troublesome.
    /// Returns the new ones in increasing vertex order.
    pub fn refresh_troublesome(&mut self) -> Vec<Vertex> {
        let mut touched = std::mem::take(&mut self.touched);
        touched.sort_unstable();
        touched.dedup();
        let mut fresh = Vec::new();
        for v in touched {
            let i = v as usize;
            if self.onset[i].is_none() && self.d_b[i] > self.tau {
                self.onset[i] = Some(self.turn);
                fresh.push(v);
            }
        }
        self.troublesome.extend_from_slice(&fresh);
        fresh
    }

    /// Recompute every counter from the edge lists and compare with the
    /// incremental ones. Returns a description of the first mismatch.
    pub fn recount_mismatch(&self) -> Option<String> {
        let n = self.n;
        let mut d_b = vec![0u32; n];
        let mut d_m = vec![0u32; n];
        let mut d_out = vec![0u32; n];
        let mut owned = 0usize;
        for e in &self.breaker_edges {
            d_b[e.0 as usize] += 1;
            d_b[e.1 as usize] += 1;
            if self.owner(e.0, e.1) != Owner::Breaker {
                return Some(format!("breaker edge {e:?} not owned by Breaker"));
            }
            owned += 1;
        }
        for e in &self.maker_edges {
            d_m[e.0 as usize] += 1;
            d_m[e.1 as usize] += 1;
            d_out[e.0 as usize] += 1;
            if self.owner(e.0, e.1) != Owner::Maker {
                return Some(format!("maker edge {e:?} not owned by Maker"));
            }
            owned += 1;
        }
        let claimed = self.owner.iter().filter(|o| **o != Owner::Unclaimed).count();
        if claimed != owned {
            return Some(format!("{claimed} owned pairs but {owned} recorded edges"));
        }
        for v in 0..n {
            if d_b[v] != self.d_b[v] {
                return Some(format!("d_B({v}) = {} but recount {}", self.d_b[v], d_b[v]));
            }
            if d_m[v] != self.d_m[v] {
                return Some(format!("d_M({v}) = {} but recount {}", self.d_m[v], d_m[v]));
            }
            if d_out[v] != self.d_out[v] || self.maker_out[v].len() as u32 != d_out[v] {
                return Some(format!("d'_M({v}) = {} but recount {}", self.d_out[v], d_out[v]));
            }
            if let Some(msg) = self.split_mismatch(v as Vertex) {
                return Some(msg);
            }
        }
        None
    }

    /// `d'_M = d⁻_M + d⁺_M` and `d⁺_M = 0` off troublesome vertices.
    pub fn split_mismatch(&self, v: Vertex) -> Option<String> {
        let i = v as usize;
        if self.d_out[i] != self.d_minus[i] + self.d_plus[i] {
            return Some(format!("d'_M({v}) != d-({v}) + d+({v})"));
        }
        if self.onset[i].is_none() && self.d_plus[i] != 0 {
            return Some(format!("d+({v}) > 0 on a non-troublesome vertex"));
        }
        None
    }

    /// SHA-256 over the full board state, hex encoded.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        h.update((self.b as u64).to_le_bytes());
        h.update(self.tau.to_le_bytes());
        h.update(self.turn.to_le_bytes());
        h.update([self.mover as u8]);
        let bytes: Vec<u8> = self.owner.iter().map(|o| *o as u8).collect();
        h.update(&bytes);
        for e in &self.maker_edges {
            h.update(e.0.to_le_bytes());
            h.update(e.1.to_le_bytes());
        }
        for v in 0..self.n {
            for c in [self.d_b[v], self.d_m[v], self.d_out[v], self.d_minus[v], self.d_plus[v]] {
                h.update(c.to_le_bytes());
            }
            h.update(self.onset[v].map_or(u32::MAX, |t| t).to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Decode a triangular pair index back to `(u, v)` with `u < v`.
pub fn pair_from_index(idx: usize) -> (Vertex, Vertex) {
    // largest v with v(v-1)/2 <= idx
    let mut v = ((((8 * idx + 1) as f64).sqrt() + 1.0) / 2.0).floor() as usize;
    while v * (v - 1) / 2 > idx {
        v -= 1;
    }
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    let u = idx - v * (v - 1) / 2;
    (u as Vertex, v as Vertex)
}

pub fn pair_index(u: Vertex, v: Vertex) -> usize {
    tri(u, v)
}

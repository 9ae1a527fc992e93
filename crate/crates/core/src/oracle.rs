//! Brute-force sub-k-tree enumeration.
//!
//! A sub-k-tree of a k-tree is always an induced subgraph, so it is
//! identified with its vertex set. The oracle walks vertex subsets (only
//! supersets of the target in local scopes), rejects by edge count, and
//! confirms each survivor by peeling simplicial degree-k vertices. It is the
//! ground truth the recursions in [`crate::recurse`] are tested against.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ktree::{KClique, KTreeInstance, Vertex};
use crate::stats::{Scope, SubtreeStats};

/// Default bound on `n - k`.
pub const DEFAULT_BUDGET: usize = 22;

/// Subsets per parallel work unit.
const CHUNK_BITS: u32 = 12;

/// A vertex subset of an instance with at most 64 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: Vertex) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        })
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn from_vertices(vertices: &[Vertex]) -> Self {
        VertexSet(vertices.iter().fold(0, |m, &v| m | 1 << v))
    }
}

/// Adjacency bitmasks of an instance.
#[derive(Clone, Debug)]
pub struct MaskGraph {
    k: usize,
    adj: Vec<u64>,
}

impl MaskGraph {
    pub fn new(t: &KTreeInstance) -> Result<Self> {
        if t.n() > 64 {
            return Err(Error::BudgetExceeded(format!(
                "brute force supports at most 64 vertices, instance has {}",
                t.n()
            )));
        }
        let adj = (0..t.n())
            .map(|v| t.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        Ok(MaskGraph { k: t.k(), adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Whether the subgraph induced by `set` is a k-tree.
    pub fn is_sub_ktree(&self, set: u64) -> bool {
        let k = self.k as u32;
        let size = set.count_ones();
        if size < k {
            return false;
        }
        let twice_edges: u32 = VertexSet(set)
            .iter()
            .map(|v| (self.adj[v] & set).count_ones())
            .sum();
        if twice_edges != 2 * k * size - k * (k + 1) {
            return false;
        }
        let mut rest = set;
        let mut size = size;
        while size > k {
            let Some(v) = VertexSet(rest).iter().find(|&v| {
                let nb = self.adj[v] & rest;
                nb.count_ones() == k
                    && VertexSet(nb)
                        .iter()
                        .all(|u| self.adj[u] & nb == nb & !(1 << u))
            }) else {
                return false;
            };
            rest &= !(1 << v);
            size -= 1;
        }
        true
    }
}

fn check_budget(t: &KTreeInstance, budget: usize) -> Result<()> {
    let excess = t.n() - t.k();
    if excess > budget {
        return Err(Error::BudgetExceeded(format!(
            "n - k = {excess} exceeds the enumeration budget {budget}"
        )));
    }
    if t.n() > 40 {
        return Err(Error::BudgetExceeded(format!(
            "brute force over {} vertices is not feasible",
            t.n()
        )));
    }
    Ok(())
}

/// Spreads the `free` bits of `x` (low bits first) into the positions of `free`.
fn deposit(mut x: u64, free: &[Vertex]) -> u64 {
    let mut out = 0;
    for &v in free {
        if x == 0 {
            break;
        }
        out |= (x & 1) << v;
        x >>= 1;
    }
    out
}

/// Lazily enumerates all sub-k-trees as vertex sets, in subset order.
pub struct SubKTrees {
    graph: MaskGraph,
    next: u64,
    end: u64,
}

impl Iterator for SubKTrees {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        while self.next < self.end {
            let set = self.next;
            self.next += 1;
            if self.graph.is_sub_ktree(set) {
                return Some(VertexSet(set));
            }
        }
        None
    }
}

pub fn enumerate_sub_ktrees(t: &KTreeInstance, budget: usize) -> Result<SubKTrees> {
    check_budget(t, budget)?;
    Ok(SubKTrees {
        graph: MaskGraph::new(t)?,
        next: 1,
        end: 1u64 << t.n(),
    })
}

#[derive(Clone, Copy, Default)]
struct Tally {
    count: u128,
    order_sum: u128,
}

impl Tally {
    fn add(self, other: Tally) -> Tally {
        Tally {
            count: self.count + other.count,
            order_sum: self.order_sum + other.order_sum,
        }
    }
}

/// Tallies sub-k-trees among `required ∪ S` for every subset `S` of `free`.
fn tally_supersets(graph: &MaskGraph, required: u64, free: &[Vertex]) -> Tally {
    let total = 1u64 << free.len();
    let chunk = 1u64 << CHUNK_BITS.min(free.len() as u32);
    (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = Tally::default();
            for x in c * chunk..(c + 1) * chunk {
                let set = required | deposit(x, free);
                if graph.is_sub_ktree(set) {
                    acc.count += 1;
                    acc.order_sum += set.count_ones() as u128;
                }
            }
            acc
        })
        .reduce(Tally::default, Tally::add)
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

/// Exact statistics by enumeration.
pub fn stats(t: &KTreeInstance, scope: &Scope, budget: usize) -> Result<SubtreeStats> {
    check_budget(t, budget)?;
    let graph = MaskGraph::new(t)?;
    let all: Vec<Vertex> = (0..t.n()).collect();
    let global = tally_supersets(&graph, 0, &all);
    let required = match scope {
        Scope::Global => {
            return Ok(SubtreeStats::global(
                big(global.count),
                big(global.order_sum),
            ));
        }
        Scope::AtClique(c) => {
            t.k_clique(c.vertices())?;
            VertexSet::from_vertices(c.vertices()).0
        }
        Scope::AtVertex(v) => {
            if *v >= t.n() {
                return Err(Error::VertexOutOfRange(*v));
            }
            1u64 << v
        }
    };
    let free: Vec<Vertex> = (0..t.n()).filter(|&v| required >> v & 1 == 0).collect();
    let local = tally_supersets(&graph, required, &free);
    let (n, r) = (big(local.count), big(local.order_sum));
    let (nbar, rbar) = (
        big(global.count - local.count),
        big(global.order_sum - local.order_sum),
    );
    Ok(match scope {
        Scope::AtClique(_) => SubtreeStats::at_clique(t.k(), n, r, nbar, rbar),
        _ => SubtreeStats::at_vertex(n, r, nbar, rbar),
    })
}

/// Global, per-clique and per-vertex statistics from a single pass over all
/// sub-k-trees.
#[derive(Clone, Debug)]
pub struct Profile {
    pub global: SubtreeStats,
    pub cliques: Vec<(KClique, usize, SubtreeStats)>,
    pub vertices: Vec<SubtreeStats>,
}

pub fn profile(t: &KTreeInstance, budget: usize) -> Result<Profile> {
    check_budget(t, budget)?;
    let graph = MaskGraph::new(t)?;
    let n = t.n();
    let cliques = t.k_cliques_with_degree();
    let masks: Vec<u64> = cliques
        .iter()
        .map(|(c, _)| VertexSet::from_vertices(c.vertices()).0)
        .collect();
    let slots = 1 + cliques.len() + n;
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let tallies = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Tally::default(); slots];
            for set in c * chunk..(c + 1) * chunk {
                if !graph.is_sub_ktree(set) {
                    continue;
                }
                let size = set.count_ones() as u128;
                let mut bump = |i: usize| {
                    acc[i].count += 1;
                    acc[i].order_sum += size;
                };
                bump(0);
                for (i, &m) in masks.iter().enumerate() {
                    if set & m == m {
                        bump(1 + i);
                    }
                }
                for v in VertexSet(set).iter() {
                    bump(1 + masks.len() + v);
                }
            }
            acc
        })
        .reduce(
            || vec![Tally::default(); slots],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.add(y)).collect(),
        );
    let g = tallies[0];
    let split = |local: Tally, clique_k: Option<usize>| {
        let (cn, cr) = (big(local.count), big(local.order_sum));
        let (an, ar) = (
            big(g.count - local.count),
            big(g.order_sum - local.order_sum),
        );
        match clique_k {
            Some(k) => SubtreeStats::at_clique(k, cn, cr, an, ar),
            None => SubtreeStats::at_vertex(cn, cr, an, ar),
        }
    };
    Ok(Profile {
        global: SubtreeStats::global(big(g.count), big(g.order_sum)),
        cliques: cliques
            .into_iter()
            .enumerate()
            .map(|(i, (c, d))| (c, d, split(tallies[1 + i], Some(t.k()))))
            .collect(),
        vertices: (0..n)
            .map(|v| split(tallies[1 + masks.len() + v], None))
            .collect(),
    })
}

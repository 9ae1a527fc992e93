//! Canonical codes for isomorphism rejection.
//!
//! The code of a graph is the smallest upper-triangle adjacency bit string
//! over all labelings reachable by individualization and color refinement,
//! starting from the degree partition. Refinement and cell choice depend
//! only on the graph structure, so isomorphic graphs explore the same set of
//! bit strings. Branches that differ by swapping two twins (vertices with
//! the same neighborhood apart from each other) are explored once.

use std::fmt;

use crate::ktree::KTreeInstance;

/// Vertex count followed by the packed adjacency bits of the canonical labeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl KTreeInstance {
    pub fn canonical_code(&self) -> CanonicalCode {
        canonical_code_graph(self.adjacency())
    }
}

/// Canonical code of a simple graph given by sorted neighbor lists.
pub fn canonical_code_graph(adjacency: &[Vec<usize>]) -> CanonicalCode {
    let n = adjacency.len();
    let mut matrix = vec![false; n * n];
    for (u, list) in adjacency.iter().enumerate() {
        for &v in list {
            matrix[u * n + v] = true;
        }
    }
    let graph = Graph {
        n,
        adjacency,
        matrix,
    };
    let degrees: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let colors = rank_by(&degrees);
    let mut best: Option<Vec<u8>> = None;
    graph.search(colors, &mut best);
    let mut code = (n as u32).to_be_bytes().to_vec();
    code.extend(best.unwrap_or_default());
    CanonicalCode(code)
}

struct Graph<'a> {
    n: usize,
    adjacency: &'a [Vec<usize>],
    matrix: Vec<bool>,
}

impl Graph<'_> {
    fn search(&self, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
        let colors = self.refine(colors);
        let cells = cell_count(&colors);
        if cells == self.n {
            let bits = self.bits(&colors);
            if best.as_ref().is_none_or(|b| bits < *b) {
                *best = Some(bits);
            }
            return;
        }
        // First cell of minimum size > 1.
        let mut sizes = vec![0usize; cells];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..cells)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete partition has a non-singleton cell");
        let members: Vec<usize> = (0..self.n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let keys: Vec<(usize, bool)> = (0..self.n).map(|u| (colors[u], u != v)).collect();
            self.search(rank_by(&keys), best);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let a = self.adjacency[u].iter().filter(|&&w| w != v);
        let b = self.adjacency[v].iter().filter(|&&w| w != u);
        a.eq(b)
    }

    /// Color refinement to the coarsest equitable partition below `colors`.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut count = cell_count(&colors);
        loop {
            let signatures: Vec<(usize, Vec<usize>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<usize> = self.adjacency[v].iter().map(|&u| colors[u]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank_by(&signatures);
            let next_count = cell_count(&next);
            colors = next;
            if next_count == count {
                return colors;
            }
            count = next_count;
        }
    }

    /// Upper triangle of the adjacency matrix under the discrete labeling.
    fn bits(&self, colors: &[usize]) -> Vec<u8> {
        let mut at = vec![0usize; self.n];
        for (v, &c) in colors.iter().enumerate() {
            at[c] = v;
        }
        let total = self.n * self.n.saturating_sub(1) / 2;
        let mut out = vec![0u8; total.div_ceil(8)];
        let mut pos = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.matrix[at[i] * self.n + at[j]] {
                    out[pos / 8] |= 0x80 >> (pos % 8);
                }
                pos += 1;
            }
        }
        out
    }
}

/// Dense ranks of `keys` in sorted order.
fn rank_by<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn cell_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&m| m + 1)
}

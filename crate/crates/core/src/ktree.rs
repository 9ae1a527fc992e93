//! The k-tree data model.
//!
//! A [`KTreeInstance`] is stored the way it was built: a base clique on
//! vertices `0..k` followed by an attachment sequence, where vertex `k + t`
//! is joined to the k-clique `attachments[t]`. Adjacency is derived once at
//! construction and kept as sorted neighbor lists.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A k-clique, stored as a strictly increasing vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClique(Vec<Vertex>);

impl KClique {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        KClique(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl fmt::Display for KClique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A k-tree given by its attachment sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KTreeInstance {
    k: usize,
    attachments: Vec<Vec<Vertex>>,
    adjacency: Vec<Vec<Vertex>>,
}

impl KTreeInstance {
    /// The complete graph `K_k`.
    pub fn base(k: usize) -> Result<Self> {
        Self::new(k, Vec::new())
    }

    /// Builds and validates an instance. Entry `t` of `attachments` is the
    /// clique vertex `k + t` is joined to; every id must be `< k + t`.
    ///
    /// Line numbers in errors refer to the serialized `.ktc` layout, where
    /// attachment `t` sits on line `t + 2`.
    pub fn new(k: usize, attachments: Vec<Vec<Vertex>>) -> Result<Self> {
        Self::build(k, attachments, |t| t + 2)
    }

    pub(crate) fn build(
        k: usize,
        attachments: Vec<Vec<Vertex>>,
        line_of: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        let n = k + attachments.len();
        let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (u, row) in adjacency.iter_mut().enumerate().take(k) {
            row.extend((0..k).filter(|&v| v != u));
        }
        let mut normalized = Vec::with_capacity(attachments.len());
        for (t, set) in attachments.into_iter().enumerate() {
            let v = k + t;
            let mut set = set;
            set.sort_unstable();
            if set.len() != k || set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "attachment of vertex {v} must name {k} distinct vertices, got {set:?}"
                )));
            }
            if let Some(&bad) = set.iter().find(|&&u| u >= v) {
                return Err(Error::ForwardReference {
                    line: line_of(t),
                    vertex: bad,
                });
            }
            for (i, &a) in set.iter().enumerate() {
                for &b in &set[i + 1..] {
                    if adjacency[a].binary_search(&b).is_err() {
                        return Err(Error::NotAClique {
                            line: line_of(t),
                            set,
                        });
                    }
                }
            }
            for &u in &set {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
            // Every `u < v`, so appending keeps each neighbor list sorted.
            normalized.push(set);
        }
        Ok(KTreeInstance {
            k,
            attachments: normalized,
            adjacency,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn attachments(&self) -> &[Vec<Vertex>] {
        &self.attachments
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<Vertex>] {
        &self.adjacency
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices.iter().all(|&v| v < self.n())
            && vertices.iter().enumerate().all(|(i, &a)| {
                vertices[i + 1..]
                    .iter()
                    .all(|&b| a != b && self.is_adjacent(a, b))
            })
    }

    /// Returns the clique as a [`KClique`] if it is a k-clique of this instance.
    pub fn k_clique(&self, vertices: &[Vertex]) -> Result<KClique> {
        let clique = KClique::new(vertices.to_vec());
        if clique.len() != self.k || vertices.len() != self.k || !self.is_clique(clique.vertices())
        {
            return Err(Error::NotAKClique(vertices.to_vec()));
        }
        Ok(clique)
    }

    pub fn base_clique(&self) -> KClique {
        KClique((0..self.k).collect())
    }

    /// A new instance with one more vertex joined to `clique`.
    pub fn with_attached(&self, clique: &[Vertex]) -> Result<Self> {
        let mut attachments = self.attachments.clone();
        attachments.push(clique.to_vec());
        Self::new(self.k, attachments)
    }

    /// The (k+1)-cliques, one per attached vertex.
    pub fn blocks(&self) -> Vec<Vec<Vertex>> {
        self.attachments
            .iter()
            .enumerate()
            .map(|(t, set)| {
                let mut b = set.clone();
                b.push(self.k + t);
                b
            })
            .collect()
    }

    /// Every k-clique exactly once together with the number of
    /// (k+1)-cliques containing it, sorted by vertex list.
    pub fn k_cliques_with_degree(&self) -> Vec<(KClique, usize)> {
        if self.n() == self.k {
            return vec![(self.base_clique(), 0)];
        }
        let mut degree: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for block in self.blocks() {
            for skip in 0..block.len() {
                let mut face: Vec<Vertex> = block
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                face.sort_unstable();
                *degree.entry(face).or_insert(0) += 1;
            }
        }
        let mut out: Vec<(KClique, usize)> =
            degree.into_iter().map(|(c, d)| (KClique(c), d)).collect();
        out.sort();
        out
    }

    /// Vertices of degree exactly k. Empty for `K_k`.
    pub fn k_leaves(&self) -> Vec<Vertex> {
        if self.n() == self.k {
            return Vec::new();
        }
        (0..self.n())
            .filter(|&v| self.degree(v) == self.k)
            .collect()
    }

    /// A k-clique is simplicial when it contains a k-leaf; the lone clique of
    /// `K_k` counts as simplicial.
    pub fn is_simplicial_clique(&self, clique: &KClique) -> bool {
        self.n() == self.k || clique.vertices().iter().any(|&v| self.degree(v) == self.k)
    }

    /// `K_k`, `K_{k+1}`, or exactly two k-leaves.
    pub fn is_path_type(&self) -> bool {
        self.n() <= self.k + 1 || self.k_leaves().len() == 2
    }

    /// No k-clique of degree 2.
    pub fn is_series_reduced(&self) -> bool {
        self.k_cliques_with_degree().iter().all(|&(_, d)| d != 2)
    }

    /// Every vertex outside `clique` is adjacent to all of `clique`.
    pub fn is_star_base(&self, clique: &KClique) -> bool {
        (0..self.n())
            .filter(|&v| !clique.contains(v))
            .all(|v| clique.vertices().iter().all(|&c| self.is_adjacent(v, c)))
    }

    pub fn is_k_star(&self) -> bool {
        self.n() <= self.k + 1
            || self
                .k_cliques_with_degree()
                .iter()
                .any(|(c, d)| *d == self.n() - self.k && self.is_star_base(c))
    }

    /// Sizes of the connected components left after deleting `removed`.
    pub fn component_sizes_without(&self, removed: &[Vertex]) -> Vec<usize> {
        let n = self.n();
        let mut gone = vec![false; n];
        for &v in removed {
            gone[v] = true;
        }
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if gone[start] {
                continue;
            }
            gone[start] = true;
            queue.push_back(start);
            let mut size = 0;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &w in &self.adjacency[u] {
                    if !gone[w] {
                        gone[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    /// Rebuilds a k-tree from an arbitrary labeled graph, relabeling it into
    /// construction order (base clique first).
    pub fn from_graph(n: usize, edges: &[(Vertex, Vertex)], k: usize) -> Result<Self> {
        let adjacency = simple_adjacency(n, edges)?;
        let Some(elim) = eliminate(&adjacency, k) else {
            return Err(Error::InvalidParameter(format!(
                "graph on {n} vertices is not a {k}-tree"
            )));
        };
        let mut label = vec![usize::MAX; n];
        for (i, &v) in elim.base.iter().enumerate() {
            label[v] = i;
        }
        let mut attachments = Vec::with_capacity(elim.removed.len());
        for (i, (v, nbrs)) in elim.removed.iter().rev().enumerate() {
            label[*v] = k + i;
            attachments.push(nbrs.iter().map(|&u| label[u]).collect());
        }
        Self::new(k, attachments)
    }
}

fn simple_adjacency(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Vec<Vec<Vertex>>> {
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::MalformedGraph(format!(
                "edge ({u}, {v}) leaves the vertex range 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::MalformedGraph(format!("self-loop at vertex {u}")));
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for (v, list) in adjacency.iter_mut().enumerate() {
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedGraph(format!(
                "repeated edge ({v}, {})",
                w[0]
            )));
        }
    }
    Ok(adjacency)
}

struct Elimination {
    /// Removed vertices in removal order, each with its neighbors at removal time.
    removed: Vec<(Vertex, Vec<Vertex>)>,
    /// The k vertices left at the end, sorted.
    base: Vec<Vertex>,
}

/// Repeatedly strips a degree-k vertex whose neighborhood is a clique.
fn eliminate(adjacency: &[Vec<Vertex>], k: usize) -> Option<Elimination> {
    let n = adjacency.len();
    if k == 0 || n < k {
        return None;
    }
    let edges: usize = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    if edges != k * n - k * (k + 1) / 2 {
        return None;
    }
    let sets: Vec<std::collections::HashSet<Vertex>> = adjacency
        .iter()
        .map(|l| l.iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| degree[v] == k).collect();
    let mut queued: Vec<bool> = degree.iter().map(|&d| d == k).collect();
    let mut removed = Vec::with_capacity(n - k);
    let mut remaining = n;
    // A degree-k vertex whose neighborhood is not a clique can never become
    // removable: its neighborhood only shrinks, and then its degree drops.
    while remaining > k {
        let v = queue.pop_front()?;
        queued[v] = false;
        if !alive[v] || degree[v] != k {
            continue;
        }
        let nbrs: Vec<Vertex> = adjacency[v].iter().copied().filter(|&u| alive[u]).collect();
        let is_clique = nbrs
            .iter()
            .enumerate()
            .all(|(i, a)| nbrs[i + 1..].iter().all(|b| sets[*a].contains(b)));
        if !is_clique {
            continue;
        }
        alive[v] = false;
        remaining -= 1;
        for &u in &nbrs {
            degree[u] -= 1;
            if degree[u] == k && !queued[u] {
                queued[u] = true;
                queue.push_back(u);
            }
        }
        removed.push((v, nbrs));
    }
    let base: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    Some(Elimination { removed, base })
}

/// Decides whether a simple graph is a k-tree.
///
/// On success returns a perfect elimination order: the vertices in removal
/// order followed by the final k-clique, i.e. a construction order reversed.
/// Self-loops, repeated edges and out-of-range ids are rejected as malformed.
pub fn recognize_ktree(
    n: usize,
    edges: &[(Vertex, Vertex)],
    k: usize,
) -> Result<Option<Vec<Vertex>>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let adjacency = simple_adjacency(n, edges)?;
    Ok(eliminate(&adjacency, k).map(|e| {
        let mut order: Vec<Vertex> = e.removed.into_iter().map(|(v, _)| v).collect();
        order.extend(e.base);
        order
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_minus_edge() -> KTreeInstance {
        KTreeInstance::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap()
    }

    #[test]
    fn triangle_is_a_2tree_and_a_3tree() {
        let tri = [(0, 1), (1, 2), (0, 2)];
        assert!(recognize_ktree(3, &tri, 2).unwrap().is_some());
        assert!(recognize_ktree(3, &tri, 3).unwrap().is_some());
    }

    #[test]
    fn four_cycle_is_not_a_2tree() {
        let c4 = [(0, 1), (1, 2), (2, 3), (3, 0)];
        assert_eq!(recognize_ktree(4, &c4, 2).unwrap(), None);
        // Right edge count, still no simplicial degree-2 vertex.
        let c4_pendant = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)];
        assert_eq!(recognize_ktree(5, &c4_pendant, 2).unwrap(), None);
    }

    #[test]
    fn elimination_order_is_reverse_construction() {
        let t = k4_minus_edge();
        let order = recognize_ktree(t.n(), &t.edges(), 2).unwrap().unwrap();
        assert_eq!(order.len(), 4);
        let (removed, base) = order.split_at(2);
        let mut base = base.to_vec();
        base.sort();
        assert!(t.is_clique(&base));
        // The two removed vertices are the non-adjacent pair.
        let mut removed = removed.to_vec();
        removed.sort();
        assert_eq!(removed, vec![2, 3]);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matches!(
            recognize_ktree(3, &[(0, 0)], 2),
            Err(Error::MalformedGraph(_))
        ));
        assert!(matches!(
            recognize_ktree(3, &[(0, 1), (1, 0)], 2),
            Err(Error::MalformedGraph(_))
        ));
        assert!(matches!(
            recognize_ktree(2, &[(0, 5)], 1),
            Err(Error::MalformedGraph(_))
        ));
    }

    #[test]
    fn construction_validates_attachments() {
        assert!(matches!(
            KTreeInstance::new(2, vec![vec![0, 1], vec![0, 3]]),
            Err(Error::ForwardReference { vertex: 3, .. })
        ));
        // {2, 3} is not an edge of K_4 minus {2,3}.
        assert!(matches!(
            KTreeInstance::new(2, vec![vec![0, 1], vec![0, 1], vec![2, 3]]),
            Err(Error::NotAClique { .. })
        ));
    }

    #[test]
    fn clique_inventory_small_cases() {
        let kk = KTreeInstance::base(3).unwrap();
        assert_eq!(
            kk.k_cliques_with_degree(),
            vec![(KClique::new(vec![0, 1, 2]), 0)]
        );

        let tri = KTreeInstance::new(2, vec![vec![0, 1]]).unwrap();
        let cl = tri.k_cliques_with_degree();
        assert_eq!(cl.len(), 3);
        assert!(cl.iter().all(|&(_, d)| d == 1));

        let t = k4_minus_edge();
        let expected: Vec<(KClique, usize)> = vec![
            (KClique::new(vec![0, 1]), 2),
            (KClique::new(vec![0, 2]), 1),
            (KClique::new(vec![0, 3]), 1),
            (KClique::new(vec![1, 2]), 1),
            (KClique::new(vec![1, 3]), 1),
        ];
        assert_eq!(t.k_cliques_with_degree(), expected);
        // Brute force over edges agrees.
        for (u, v) in t.edges() {
            let deg = (0..t.n())
                .filter(|&w| w != u && w != v && t.is_adjacent(u, w) && t.is_adjacent(v, w))
                .count();
            let found = expected
                .iter()
                .find(|(c, _)| c.vertices() == [u, v])
                .unwrap();
            assert_eq!(found.1, deg);
        }
    }

    #[test]
    fn from_graph_relabels_into_construction_order() {
        // 2-path 0..5 written with scrambled labels.
        let perm = [3, 0, 4, 1, 5, 2];
        let mut edges = Vec::new();
        for v in 2..6 {
            edges.push((perm[v], perm[v - 1]));
            edges.push((perm[v], perm[v - 2]));
        }
        edges.push((perm[0], perm[1]));
        let t = KTreeInstance::from_graph(6, &edges, 2).unwrap();
        assert_eq!(t.n(), 6);
        assert_eq!(t.k_leaves().len(), 2);
        assert!(t.is_path_type());
    }

    #[test]
    fn predicates() {
        let t = k4_minus_edge();
        assert!(t.is_path_type());
        assert!(!t.is_series_reduced());
        assert!(t.is_k_star());
        assert!(t.is_star_base(&KClique::new(vec![0, 1])));
        assert!(!t.is_simplicial_clique(&KClique::new(vec![0, 1])));
        assert!(t.is_simplicial_clique(&KClique::new(vec![0, 2])));
        assert_eq!(t.component_sizes_without(&[0, 1, 2]), vec![1]);
    }
}

//! Exact statistics through clique decomposition.
//!
//! Rooting a k-tree at a k-clique `C` turns it into a tree of k-cliques:
//! each clique `Q` owns the apexes `v` joined to it on the side away from
//! `C`, and each apex contributes the k faces of `Q ∪ {v}` other than `Q` as
//! child cliques. For a clique `Q` with subtree `T_Q`, a sub-k-tree containing
//! `Q` either skips an apex or keeps it and then extends independently into
//! each of its k child subtrees, so
//!
//! ```text
//! N(T_Q; Q) = prod over apexes (1 + prod over children N_child)
//! ```
//!
//! The mean is carried as `Rb = N * (mu - k)` so the update stays integral:
//! an apex with children `(N_j, Rb_j)` has `p = prod N_j` extensions through
//! it, whose reduced orders sum to `e = p + p * sum Rb_j / N_j`, and folding
//! the apex into a running `(n, rb)` gives `(n (1 + p), rb (1 + p) + e n)`.
//!
//! Sub-k-trees avoiding `Q` live entirely in one child subtree (they cannot
//! use the whole of `Q` and the cut through `Q` separates the children), so
//! the complement counts add up the children's local and complement counts.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{frac, int};
use crate::ktree::{KClique, KTreeInstance, Vertex};
use crate::stats::SubtreeStats;

const NO_PARENT: usize = usize::MAX;

#[derive(Clone, Debug)]
struct CliqueNode {
    vertices: Vec<Vertex>,
    /// Apex that created this clique (`NO_PARENT` for the root).
    creator: usize,
    /// `(apex, child clique node ids)` in discovery order.
    apexes: Vec<(Vertex, Vec<usize>)>,
}

/// The k-clique tree of an instance rooted at one of its k-cliques.
#[derive(Clone, Debug)]
pub struct RootedCliqueTree {
    k: usize,
    nodes: Vec<CliqueNode>,
    /// Apexes in discovery order.
    apex_order: Vec<Vertex>,
    /// Node whose apex list holds each vertex outside the root.
    owner: Vec<usize>,
}

/// Local and complement counts of one clique within its subtree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeCounts {
    pub count: BigUint,
    /// `R - k N`: summed orders beyond the clique itself.
    pub reduced_sum: BigUint,
    pub count_avoiding: BigUint,
    pub order_sum_avoiding: BigUint,
}

impl NodeCounts {
    pub fn order_sum(&self, k: usize) -> BigUint {
        &self.count * k + &self.reduced_sum
    }
}

fn common_neighbors(t: &KTreeInstance, clique: &[Vertex]) -> Vec<Vertex> {
    let (first, rest) = clique.split_first().expect("clique is nonempty");
    t.neighbors(*first)
        .iter()
        .copied()
        .filter(|&u| !clique.contains(&u) && rest.iter().all(|&c| t.is_adjacent(u, c)))
        .collect()
}

impl RootedCliqueTree {
    pub fn new(t: &KTreeInstance, c: &KClique) -> Result<Self> {
        let c = t.k_clique(c.vertices())?;
        let n = t.n();
        let mut placed = vec![false; n];
        for &v in c.vertices() {
            placed[v] = true;
        }
        let mut owner = vec![NO_PARENT; n];
        let mut apex_order = Vec::with_capacity(n - t.k());
        let mut nodes = vec![CliqueNode {
            vertices: c.into_vec(),
            creator: NO_PARENT,
            apexes: Vec::new(),
        }];
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            let parent = nodes[q].vertices.clone();
            for u in common_neighbors(t, &parent) {
                if placed[u] {
                    continue;
                }
                placed[u] = true;
                owner[u] = q;
                apex_order.push(u);
                let mut children = Vec::with_capacity(parent.len());
                for skip in 0..parent.len() {
                    let mut face: Vec<Vertex> = parent
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .chain(std::iter::once(u))
                        .collect();
                    face.sort_unstable();
                    children.push(nodes.len());
                    queue.push_back(nodes.len());
                    nodes.push(CliqueNode {
                        vertices: face,
                        creator: u,
                        apexes: Vec::new(),
                    });
                }
                children.sort_by(|&a, &b| nodes[a].vertices.cmp(&nodes[b].vertices));
                nodes[q].apexes.push((u, children));
            }
        }
        debug_assert_eq!(apex_order.len(), n - t.k());
        Ok(RootedCliqueTree {
            k: t.k(),
            nodes,
            apex_order,
            owner,
        })
    }

    pub fn root(&self) -> KClique {
        KClique::new(self.nodes[0].vertices.clone())
    }

    /// Counts for every clique node, bottom-up. Index 0 is the root.
    pub fn counts(&self) -> Vec<NodeCounts> {
        let k = self.k;
        let mut out: Vec<Option<NodeCounts>> = vec![None; self.nodes.len()];
        // Children always have larger ids than their parent.
        for q in (0..self.nodes.len()).rev() {
            let mut n = BigUint::one();
            let mut rb = BigUint::zero();
            let mut nbar = BigUint::zero();
            let mut rbar = BigUint::zero();
            for (_, children) in &self.nodes[q].apexes {
                let mut p = BigUint::one();
                let mut s = BigUint::zero();
                for &c in children {
                    let cc = out[c].as_ref().expect("child processed first");
                    s = s * &cc.count + &cc.reduced_sum * &p;
                    p *= &cc.count;
                    nbar += &cc.count + &cc.count_avoiding;
                    rbar += cc.order_sum(k) + &cc.order_sum_avoiding;
                }
                let e = &p + s;
                let grow = BigUint::one() + &p;
                rb = rb * &grow + e * &n;
                n *= grow;
            }
            out[q] = Some(NodeCounts {
                count: n,
                reduced_sum: rb,
                count_avoiding: nbar,
                order_sum_avoiding: rbar,
            });
        }
        out.into_iter()
            .map(|c| c.expect("all nodes visited"))
            .collect()
    }

    /// Vertex set of the subtree hanging from clique node `q`.
    fn subtree_vertices(&self, q: usize) -> Vec<Vertex> {
        let mut out = self.nodes[q].vertices.clone();
        let mut stack = vec![q];
        while let Some(x) = stack.pop() {
            for (apex, children) in &self.nodes[x].apexes {
                out.push(*apex);
                stack.extend(children);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Characteristic-tree parent of each apex: the apex that created the
    /// clique it hangs from, or `None` when it hangs from the root.
    fn apex_parent(&self, v: Vertex) -> Option<Vertex> {
        let creator = self.nodes[self.owner[v]].creator;
        (creator != NO_PARENT).then_some(creator)
    }
}

/// One child `C_{i,j}` of a branch with the vertex set of `T_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchChild {
    pub clique: KClique,
    pub vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub apex: Vertex,
    /// `C ∪ {apex}`, sorted.
    pub block: Vec<Vertex>,
    pub children: Vec<BranchChild>,
}

/// The branches of a k-tree at a k-clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub center: KClique,
    pub branches: Vec<Branch>,
}

pub fn decompose(t: &KTreeInstance, c: &KClique) -> Result<Decomposition> {
    let tree = RootedCliqueTree::new(t, c)?;
    let center = tree.root();
    let branches = tree.nodes[0]
        .apexes
        .iter()
        .map(|(apex, children)| {
            let mut block = center.vertices().to_vec();
            block.push(*apex);
            block.sort_unstable();
            Branch {
                apex: *apex,
                block,
                children: children
                    .iter()
                    .map(|&q| BranchChild {
                        clique: KClique::new(tree.nodes[q].vertices.clone()),
                        vertices: tree.subtree_vertices(q),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(Decomposition { center, branches })
}

/// `(N(T;C), R(T;C))`.
pub fn local_counts_recursive(t: &KTreeInstance, c: &KClique) -> Result<(BigUint, BigUint)> {
    let tree = RootedCliqueTree::new(t, c)?;
    let root = tree.counts().swap_remove(0);
    let r = root.order_sum(t.k());
    Ok((root.count, r))
}

/// `(N̄(T;C), R̄(T;C))`.
pub fn complement_counts_recursive(t: &KTreeInstance, c: &KClique) -> Result<(BigUint, BigUint)> {
    let tree = RootedCliqueTree::new(t, c)?;
    let root = tree.counts().swap_remove(0);
    Ok((root.count_avoiding, root.order_sum_avoiding))
}

/// Clique-scope statistics in one pass.
pub fn clique_stats_fast(t: &KTreeInstance, c: &KClique) -> Result<SubtreeStats> {
    let tree = RootedCliqueTree::new(t, c)?;
    let root = tree.counts().swap_remove(0);
    let r = root.order_sum(t.k());
    Ok(SubtreeStats::at_clique(
        t.k(),
        root.count,
        r,
        root.count_avoiding,
        root.order_sum_avoiding,
    ))
}

/// Global statistics from the decomposition at `c`.
pub fn global_stats_from(t: &KTreeInstance, c: &KClique) -> Result<SubtreeStats> {
    let local = clique_stats_fast(t, c)?;
    let (n, r) = local.totals();
    Ok(SubtreeStats::global(n, r))
}

pub fn global_stats_fast(t: &KTreeInstance) -> SubtreeStats {
    global_stats_from(t, &t.base_clique()).expect("the base clique is a k-clique")
}

/// `N(T; C_{i,j})` from the counts of the decomposition at `c`:
/// `N_{i,j} + prod_l N_{i,l} * prod_{i' != i} (1 + prod_l N_{i',l})`.
pub fn adjacent_clique_count(
    t: &KTreeInstance,
    c: &KClique,
    branch: usize,
    child: usize,
) -> Result<BigUint> {
    let tree = RootedCliqueTree::new(t, c)?;
    let counts = tree.counts();
    let apexes = &tree.nodes[0].apexes;
    let Some((_, children)) = apexes.get(branch) else {
        return Err(Error::InvalidParameter(format!("no branch {branch}")));
    };
    let Some(&target) = children.get(child) else {
        return Err(Error::InvalidParameter(format!(
            "no child {child} in branch {branch}"
        )));
    };
    let product = |kids: &[usize]| -> BigUint { kids.iter().map(|&q| &counts[q].count).product() };
    let mut through = product(children);
    for (i, (_, other)) in apexes.iter().enumerate() {
        if i != branch {
            through *= BigUint::one() + product(other);
        }
    }
    Ok(&counts[target].count + through)
}

/// The 1-characteristic tree of a k-tree at a k-clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicTree {
    /// Host vertex of node `i + 1`; node 0 is the clique.
    pub vertices: Vec<Vertex>,
    /// Parent node of node `i + 1`, always smaller.
    pub parents: Vec<usize>,
}

impl CharacteristicTree {
    pub fn node_count(&self) -> usize {
        self.vertices.len() + 1
    }

    /// Edges `(parent, child)` in node ids.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i + 1))
            .collect()
    }

    pub fn node_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v).map(|i| i + 1)
    }

    /// Edges with the non-root nodes named by host vertex.
    pub fn host_edges(&self) -> Vec<(Option<Vertex>, Vertex)> {
        self.parents
            .iter()
            .zip(&self.vertices)
            .map(|(&p, &v)| ((p > 0).then(|| self.vertices[p - 1]), v))
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for (p, c) in self.edges() {
            deg[p] += 1;
            deg[c] += 1;
        }
        deg
    }

    /// No node of degree 2.
    pub fn is_series_reduced(&self) -> bool {
        self.degrees().iter().all(|&d| d != 2)
    }

    /// A path leaving the root whose far end carries only leaves: a broom
    /// rooted at the end of its handle.
    pub fn is_rooted_broom(&self) -> bool {
        let mut children = vec![Vec::new(); self.node_count()];
        for (p, c) in self.edges() {
            children[p].push(c);
        }
        let mut at = 0;
        while children[at].len() == 1 {
            at = children[at][0];
        }
        children[at].iter().all(|&c| children[c].is_empty())
    }

    /// The tree as a 1-tree whose node ids are preserved, rooted at node 0.
    pub fn to_one_tree(&self) -> KTreeInstance {
        let attachments = self.parents.iter().map(|&p| vec![p]).collect();
        KTreeInstance::new(1, attachments).expect("parents precede children")
    }

    pub fn to_dot(&self, clique: &KClique) -> String {
        let mut out = String::from("graph characteristic {\n");
        let _ = writeln!(out, "  0 [label=\"C {clique}\"];");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  {} [label=\"{v}\"];", i + 1);
        }
        for (p, c) in self.edges() {
            let _ = writeln!(out, "  {p} -- {c};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn characteristic_tree(t: &KTreeInstance, c: &KClique) -> Result<CharacteristicTree> {
    let tree = RootedCliqueTree::new(t, c)?;
    let mut node = vec![0usize; t.n()];
    for (i, &v) in tree.apex_order.iter().enumerate() {
        node[v] = i + 1;
    }
    let parents = tree
        .apex_order
        .iter()
        .map(|&v| tree.apex_parent(v).map_or(0, |p| node[p]))
        .collect();
    Ok(CharacteristicTree {
        vertices: tree.apex_order.clone(),
        parents,
    })
}

/// Local mean at a degree-1 clique of a path-type k-tree whose block splits
/// the rest into sides of `a` and `b` vertices:
/// `(n + k + 1)/2 - (n - k + 1) / (2((a+1)(b+1) + 1))`.
pub fn path_type_local_mean_closed_form(
    k: usize,
    n: usize,
    a: usize,
    b: usize,
) -> Result<BigRational> {
    if k == 0 || n < k + 1 || a + b != n - k - 1 {
        return Err(Error::InvalidParameter(format!(
            "need a + b = n - k - 1, got k = {k}, n = {n}, a = {a}, b = {b}"
        )));
    }
    let (n, k) = (n as i64, k as i64);
    let g = ((a + 1) * (b + 1) + 1) as i64;
    Ok(frac(n + k + 1, 2) - frac(n - k + 1, 2 * g))
}

/// The two sides `(a, b)` left by deleting the block of a degree-1 clique,
/// smaller first; `None` for cliques of other degrees or more than two sides.
pub fn path_type_sides(t: &KTreeInstance, c: &KClique) -> Result<Option<(usize, usize)>> {
    let d = decompose(t, c)?;
    if d.branches.len() != 1 {
        return Ok(None);
    }
    let mut sizes = t.component_sizes_without(&d.branches[0].block);
    if sizes.len() > 2 {
        return Ok(None);
    }
    sizes.resize(2, 0);
    sizes.sort_unstable();
    Ok(Some((sizes[0], sizes[1])))
}

/// Mean order of the base `K_k`: `k`.
pub fn trivial_mean(k: usize) -> BigRational {
    int(k as i64)
}

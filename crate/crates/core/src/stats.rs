use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::{int, ratio};
use crate::ktree::{KClique, Vertex};

/// Which sub-k-trees are counted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    Global,
    /// Sub-k-trees containing every vertex of the clique.
    AtClique(KClique),
    /// Sub-k-trees containing the vertex.
    AtVertex(Vertex),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Global => write!(f, "global"),
            Scope::AtClique(c) => {
                let ids: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
                write!(f, "clique={}", ids.join(","))
            }
            Scope::AtVertex(v) => write!(f, "vertex={v}"),
        }
    }
}

/// Exact sub-k-tree counts and means for one scope.
///
/// `count_containing`/`order_sum_containing` are N and R restricted to the
/// scope (the totals in global scope); the `avoiding` pair counts the
/// sub-k-trees outside the scope and is zero in global scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeStats {
    pub count_containing: BigUint,
    pub order_sum_containing: BigUint,
    pub count_avoiding: BigUint,
    pub order_sum_avoiding: BigUint,
    pub mean: BigRational,
    /// Mean minus k, clique scope only.
    pub reduced_mean: Option<BigRational>,
}

impl SubtreeStats {
    pub fn global(count: BigUint, order_sum: BigUint) -> Self {
        Self::assemble(count, order_sum, BigUint::zero(), BigUint::zero(), None)
    }

    pub fn at_clique(
        k: usize,
        count: BigUint,
        order_sum: BigUint,
        count_avoiding: BigUint,
        order_sum_avoiding: BigUint,
    ) -> Self {
        Self::assemble(
            count,
            order_sum,
            count_avoiding,
            order_sum_avoiding,
            Some(k),
        )
    }

    pub fn at_vertex(
        count: BigUint,
        order_sum: BigUint,
        count_avoiding: BigUint,
        order_sum_avoiding: BigUint,
    ) -> Self {
        Self::assemble(count, order_sum, count_avoiding, order_sum_avoiding, None)
    }

    fn assemble(
        count: BigUint,
        order_sum: BigUint,
        count_avoiding: BigUint,
        order_sum_avoiding: BigUint,
        clique_k: Option<usize>,
    ) -> Self {
        assert!(
            !count.is_zero(),
            "every scope contains at least one sub-k-tree"
        );
        let mean = ratio(&order_sum, &count);
        let reduced_mean = clique_k.map(|k| &mean - int(k as i64));
        SubtreeStats {
            count_containing: count,
            order_sum_containing: order_sum,
            count_avoiding,
            order_sum_avoiding,
            mean,
            reduced_mean,
        }
    }

    /// Totals over all sub-k-trees (containing plus avoiding).
    pub fn totals(&self) -> (BigUint, BigUint) {
        (
            &self.count_containing + &self.count_avoiding,
            &self.order_sum_containing + &self.order_sum_avoiding,
        )
    }
}

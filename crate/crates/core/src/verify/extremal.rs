use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{generate_all_ktrees_with_budget, make_k_broom};
use crate::ktree::{KClique, KTreeInstance};
use crate::recurse::{clique_stats_fast, global_stats_fast};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    MinGlobal,
    MaxGlobal,
    MaxLocal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    All,
    SeriesReduced,
    PathType,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-global" => Ok(Objective::MinGlobal),
            "max-global" => Ok(Objective::MaxGlobal),
            "max-local" => Ok(Objective::MaxLocal),
            other => Err(Error::InvalidParameter(format!(
                "unknown objective '{other}'"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::MinGlobal => "min-global",
            Objective::MaxGlobal => "max-global",
            Objective::MaxLocal => "max-local",
        })
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "series-reduced" => Ok(Filter::SeriesReduced),
            "path-type" => Ok(Filter::PathType),
            other => Err(Error::InvalidParameter(format!("unknown filter '{other}'"))),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Filter::All => "all",
            Filter::SeriesReduced => "series-reduced",
            Filter::PathType => "path-type",
        })
    }
}

impl Filter {
    pub fn accepts(&self, t: &KTreeInstance) -> bool {
        match self {
            Filter::All => true,
            Filter::SeriesReduced => t.is_series_reduced(),
            Filter::PathType => t.is_path_type(),
        }
    }
}

/// One isomorphism class with its objective value. Classes with equal value
/// share a rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedClass {
    pub rank: usize,
    pub instance: KTreeInstance,
    pub code: String,
    pub value: BigRational,
    /// Cliques attaining the value for the local objective.
    pub cliques: Vec<KClique>,
}

fn evaluate(t: &KTreeInstance, objective: Objective) -> (BigRational, Vec<KClique>) {
    match objective {
        Objective::MinGlobal | Objective::MaxGlobal => (global_stats_fast(t).mean, Vec::new()),
        Objective::MaxLocal => {
            let means: Vec<(KClique, BigRational)> = t
                .k_cliques_with_degree()
                .into_iter()
                .map(|(c, _)| {
                    let mu = clique_stats_fast(t, &c)
                        .expect("clique of the instance")
                        .mean;
                    (c, mu)
                })
                .collect();
            let best = means
                .iter()
                .map(|(_, m)| m)
                .max()
                .expect("a clique exists")
                .clone();
            let at = means
                .into_iter()
                .filter(|(_, m)| *m == best)
                .map(|(c, _)| c)
                .collect();
            (best, at)
        }
    }
}

/// Every class of k-trees on `n` vertices passing `filter`, best first.
pub fn find_extremal(
    k: usize,
    n: usize,
    objective: Objective,
    filter: Filter,
    class_budget: usize,
) -> Result<Vec<RankedClass>> {
    let classes = generate_all_ktrees_with_budget(k, n, class_budget)?;
    let mut scored: Vec<RankedClass> = classes
        .into_par_iter()
        .filter(|t| filter.accepts(t))
        .map(|t| {
            let (value, cliques) = evaluate(&t, objective);
            RankedClass {
                rank: 0,
                code: t.canonical_code().to_hex(),
                instance: t,
                value,
                cliques,
            }
        })
        .collect();
    scored.sort_by(|a, b| {
        let by_value = match objective {
            Objective::MinGlobal => a.value.cmp(&b.value),
            _ => b.value.cmp(&a.value),
        };
        by_value.then_with(|| a.code.cmp(&b.code))
    });
    for i in 0..scored.len() {
        scored[i].rank = if i > 0 && scored[i].value == scored[i - 1].value {
            scored[i - 1].rank
        } else {
            i + 1
        };
    }
    Ok(scored)
}

/// The classes sharing the best value.
pub fn top_ties(ranked: &[RankedClass]) -> &[RankedClass] {
    let end = ranked.iter().take_while(|r| r.rank == 1).count();
    &ranked[..end]
}

/// Whether `t` is isomorphic to some k-broom (a k-path with extra leaves on
/// an end clique).
pub fn is_k_broom(t: &KTreeInstance) -> bool {
    let (k, n) = (t.k(), t.n());
    let code = t.canonical_code();
    (0..=n - k).any(|m| make_k_broom(k, n - m, m).is_ok_and(|b| b.canonical_code() == code))
}

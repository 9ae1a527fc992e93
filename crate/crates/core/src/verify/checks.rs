//! Per-instance checks, decided in exact arithmetic.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exact::{binomial, cmp_cube_over_quartic_root, cmp_log2, frac, int, ratio, to_int};
use crate::ktc::serialize_ktc;
use crate::ktree::{KClique, KTreeInstance};
use crate::oracle;
use crate::recurse::{characteristic_tree, clique_stats_fast};
use crate::stats::SubtreeStats;

use super::report::{CheckRecord, Outcome, VerificationReport};

/// Everything the checks need about one instance, computed once.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub instance: KTreeInstance,
    pub code: String,
    pub global: SubtreeStats,
    /// Every k-clique with its degree and local statistics.
    pub cliques: Vec<(KClique, usize, SubtreeStats)>,
    /// Vertex-scope statistics, present when enumeration fits the budget.
    pub vertices: Option<Vec<SubtreeStats>>,
}

impl Analysis {
    /// Clique statistics come from the recursion; vertex statistics from
    /// enumeration when `n - k <= vertex_budget`.
    pub fn new(t: &KTreeInstance, vertex_budget: usize) -> Result<Self> {
        let cliques = t
            .k_cliques_with_degree()
            .into_iter()
            .map(|(c, d)| {
                let s = clique_stats_fast(t, &c)?;
                Ok((c, d, s))
            })
            .collect::<Result<Vec<_>>>()?;
        let (n, r) = cliques[0].2.totals();
        let vertices = if t.n() - t.k() <= vertex_budget {
            Some(oracle::profile(t, vertex_budget)?.vertices)
        } else {
            None
        };
        Ok(Analysis {
            instance: t.clone(),
            code: t.canonical_code().to_hex(),
            global: SubtreeStats::global(n, r),
            cliques,
            vertices,
        })
    }

    pub fn k(&self) -> usize {
        self.instance.k()
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    fn record(
        &self,
        check: &str,
        claim: &str,
        outcome: Outcome,
        margin: Option<BigRational>,
        witness: String,
    ) -> CheckRecord {
        let witness = if outcome == Outcome::Fail {
            format!("{witness}\n{}", serialize_ktc(&self.instance))
        } else {
            witness
        };
        CheckRecord {
            check: check.into(),
            claim: claim.into(),
            instance: self.code.clone(),
            k: self.k(),
            n: self.n(),
            outcome,
            margin,
            witness,
        }
    }

    fn decide(
        &self,
        report: &mut VerificationReport,
        check: &str,
        claim: &str,
        holds: bool,
        margin: Option<BigRational>,
        witness: String,
    ) {
        let outcome = if holds { Outcome::Pass } else { Outcome::Fail };
        report.push(self.record(check, claim, outcome, margin, witness));
    }

    fn skip(&self, report: &mut VerificationReport, check: &str, claim: &str, why: &str) {
        report.push(self.record(check, claim, Outcome::Skip, None, why.into()));
    }
}

fn cliques_text<'a>(cs: impl IntoIterator<Item = &'a KClique>) -> String {
    cs.into_iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Maximum local mean sits on a degree-1 clique (all means equal `k + 1` at
/// `n = k + 2`), and vertex-local means stay below clique-local ones.
pub fn check_max_local(a: &Analysis) -> VerificationReport {
    let mut report = VerificationReport::new();
    let (k, n) = (a.k(), a.n());
    let best = a
        .cliques
        .iter()
        .map(|(_, _, s)| &s.mean)
        .max()
        .expect("a clique exists");
    let argmax: Vec<&KClique> = a
        .cliques
        .iter()
        .filter(|(_, _, s)| &s.mean == best)
        .map(|(c, _, _)| c)
        .collect();
    a.decide(
        &mut report,
        "max_local",
        "argmax",
        true,
        Some(best.clone()),
        cliques_text(argmax.iter().copied()),
    );

    if k < 2 {
        a.skip(&mut report, "max_local", "degree_one", "claim needs k >= 2");
    } else if n == k + 2 {
        let target = int(k as i64 + 1);
        let off = a.cliques.iter().find(|(_, _, s)| s.mean != target);
        a.decide(
            &mut report,
            "max_local",
            "all_equal_k_plus_one",
            off.is_none(),
            None,
            off.map_or_else(String::new, |(c, _, _)| c.to_string()),
        );
    } else {
        let bad: Vec<&KClique> = a
            .cliques
            .iter()
            .filter(|(_, d, s)| &s.mean == best && *d != 1 && n > k)
            .map(|(c, _, _)| c)
            .collect();
        // Slack between the best degree-1 clique and the best other clique.
        let best_other = a
            .cliques
            .iter()
            .filter(|(_, d, _)| *d != 1)
            .map(|(_, _, s)| &s.mean)
            .max();
        let margin = match best_other {
            Some(o) if n > k => Some(best - o),
            _ => None,
        };
        a.decide(
            &mut report,
            "max_local",
            "degree_one",
            bad.is_empty(),
            margin,
            cliques_text(bad),
        );
    }

    match &a.vertices {
        _ if k < 2 => a.skip(
            &mut report,
            "max_local",
            "vertex_below_clique",
            "claim needs k >= 2",
        ),
        _ if n == k => a.skip(
            &mut report,
            "max_local",
            "vertex_below_clique",
            "K_k: the means coincide",
        ),
        None => a.skip(
            &mut report,
            "max_local",
            "vertex_below_clique",
            "vertex scope over budget",
        ),
        Some(vs) => {
            let mut margin: Option<BigRational> = None;
            let mut witness = String::new();
            for (c, _, s) in &a.cliques {
                for &v in c.vertices() {
                    let gap = &s.mean - &vs[v].mean;
                    if margin.as_ref().is_none_or(|m| &gap < m) {
                        witness = format!("clique={c} vertex={v}");
                        margin = Some(gap);
                    }
                }
            }
            let holds = margin.as_ref().is_some_and(|m| m.is_positive());
            a.decide(
                &mut report,
                "max_local",
                "vertex_below_clique",
                holds,
                margin,
                witness,
            );
        }
    }
    report
}

/// Every local mean is below twice the global mean.
pub fn check_double_bound(a: &Analysis) -> VerificationReport {
    let mut report = VerificationReport::new();
    let twice = &a.global.mean * int(2);
    let (c, _, s) = a
        .cliques
        .iter()
        .max_by(|x, y| x.2.mean.cmp(&y.2.mean))
        .expect("a clique exists");
    let margin = &twice - &s.mean;
    a.decide(
        &mut report,
        "double_bound",
        "local_below_twice_global",
        margin.is_positive(),
        Some(margin),
        c.to_string(),
    );
    report
}

/// Bounds for k-trees without degree-2 cliques.
pub fn check_series_reduced(a: &Analysis) -> VerificationReport {
    let mut report = VerificationReport::new();
    let (k, n) = (a.k(), a.n());
    const CLAIMS: [&str; 5] = ["upper", "lower", "leaf_count", "char_tree", "near_global"];
    if a.cliques.iter().any(|(_, d, _)| *d == 2) {
        for claim in CLAIMS {
            a.skip(
                &mut report,
                "series_reduced",
                claim,
                "has a degree-2 clique",
            );
        }
        return report;
    }
    let mu = &a.global.mean;
    let e = (n - k) as u64;
    if n < k + 2 {
        // K_k and K_{k+1} sit above (3n + k - 3)/4; the band is for larger n.
        a.skip(&mut report, "series_reduced", "upper", "n <= k + 1");
        a.skip(&mut report, "series_reduced", "lower", "n <= k + 1");
    } else {
        let upper = frac(3 * n as i64 + k as i64 - 3, 4);
        let margin = &upper - mu;
        a.decide(
            &mut report,
            "series_reduced",
            "upper",
            margin.is_positive(),
            Some(margin),
            String::new(),
        );
        // mu > (n + k)/2 - 1/10 - n^3 / 2^((n-k)/4)
        let slack = mu - frac(n as i64 + k as i64, 2) + frac(1, 10);
        let holds = cmp_cube_over_quartic_root(&-&slack, n as u64, e) == Ordering::Less;
        a.decide(
            &mut report,
            "series_reduced",
            "lower",
            holds,
            Some(slack),
            String::new(),
        );
    }

    let leaves = a.instance.k_leaves().len();
    if n == k {
        a.skip(
            &mut report,
            "series_reduced",
            "leaf_count",
            "K_k has no k-leaves",
        );
    } else {
        let margin = int(leaves as i64) - frac(n as i64 - k as i64 + 3, 2);
        a.decide(
            &mut report,
            "series_reduced",
            "leaf_count",
            !margin.is_negative(),
            Some(margin),
            format!("leaves={leaves}"),
        );
    }

    let bad = a.cliques.iter().find(|(c, _, _)| {
        !characteristic_tree(&a.instance, c)
            .expect("clique of the instance")
            .is_series_reduced()
    });
    a.decide(
        &mut report,
        "series_reduced",
        "char_tree",
        bad.is_none(),
        None,
        bad.map_or_else(String::new, |(c, _, _)| c.to_string()),
    );

    let (c, _, s) = a
        .cliques
        .iter()
        .min_by(|x, y| x.2.mean.cmp(&y.2.mean))
        .expect("a clique exists");
    let gap = &s.mean - mu;
    let holds = cmp_cube_over_quartic_root(&gap, n as u64, e) != Ordering::Greater;
    a.decide(
        &mut report,
        "series_reduced",
        "near_global",
        holds,
        Some(gap),
        c.to_string(),
    );
    report
}

/// Centroid block, the R-vs-N and mean-vs-N bounds with their equality
/// cases, R(T;C) > N̄(T;C), simplicial counts, monotonicity of local over
/// global mean and the path-type global minimum.
pub fn check_structural(a: &Analysis) -> VerificationReport {
    let mut report = VerificationReport::new();
    let t = &a.instance;
    let (k, n) = (a.k(), a.n());

    if n < k + 1 {
        a.skip(&mut report, "structural", "centroid", "n = k");
    } else {
        let limit = (n - k - 1).div_ceil(2);
        let best = t
            .blocks()
            .into_iter()
            .map(|b| {
                let worst = t.component_sizes_without(&b).into_iter().max().unwrap_or(0);
                (worst, b)
            })
            .min()
            .expect("n > k has a block");
        a.decide(
            &mut report,
            "structural",
            "centroid",
            best.0 <= limit,
            Some(int(limit as i64 - best.0 as i64)),
            format!("{:?}", best.1),
        );
    }

    let path_type = t.is_path_type();
    let series_reduced = a.cliques.iter().all(|(_, d, _)| *d != 2);
    let kk = BigUint::from(k);
    let mut r_bound = Vec::new();
    let mut mu_upper = Vec::new();
    let mut mu_lower = Vec::new();
    let mut r_vs_nbar = Vec::new();
    let mut simplicial = Vec::new();
    let mut monotone = Vec::new();
    for (c, _, s) in &a.cliques {
        let nn = &s.count_containing;
        let r = &s.order_sum_containing;
        let extreme = path_type && t.is_simplicial_clique(c);
        // 2R <= N^2 + (2k - 1)N
        let twice_r = to_int(r) * 2;
        let cap = to_int(&(nn * nn + nn * (&kk * 2u32) - nn));
        let ok = twice_r <= cap && ((twice_r == cap) == extreme);
        r_bound.push((ok, BigRational::new(cap - twice_r, 2.into()), c));

        // mu <= (N + 2k - 1)/2
        let top = BigRational::from_integer(to_int(nn) + to_int(&kk) * 2 - 1) / int(2);
        let gap = &top - &s.mean;
        mu_upper.push((!gap.is_negative() && (gap.is_zero() == extreme), gap, c));

        // k + log2(N)/2 <= mu, equality exactly at the base of a k-star
        let reduced = (&s.mean - int(k as i64)) * int(2);
        let cmp = cmp_log2(nn, &reduced);
        let star = t.is_star_base(c);
        mu_lower.push((
            cmp != Ordering::Greater && (cmp == Ordering::Equal) == star,
            reduced,
            c,
        ));

        let nbar = &s.count_avoiding;
        r_vs_nbar.push((
            r > nbar,
            BigRational::from_integer(to_int(r) - to_int(nbar)),
            c,
        ));

        if series_reduced {
            let outside = t.k_leaves().into_iter().filter(|&v| !c.contains(v)).count();
            let margin = int(outside as i64) - frac(n as i64 - k as i64, 2);
            simplicial.push((!margin.is_negative(), margin, c));
        }

        let gap = &s.mean - &a.global.mean;
        monotone.push((!gap.is_negative() && (gap.is_zero() == (n == k)), gap, c));
    }
    for (claim, rows) in [
        ("r_bound", r_bound),
        ("mean_upper", mu_upper),
        ("mean_lower", mu_lower),
        ("r_exceeds_avoiding", r_vs_nbar),
        ("monotone", monotone),
    ] {
        decide_rows(a, &mut report, claim, rows);
    }
    if series_reduced {
        decide_rows(a, &mut report, "simplicial_outside", simplicial);
    } else {
        a.skip(
            &mut report,
            "structural",
            "simplicial_outside",
            "has a degree-2 clique",
        );
    }

    // mu(T) >= C(e+2, 3) / (C(e+1, 2) + e k + 1) + k, equality iff path-type
    let e = (n - k) as u64;
    let num = binomial(e + 2, 3);
    let den = binomial(e + 1, 2) + BigUint::from(e * k as u64 + 1);
    let floor = ratio(&num, &den) + int(k as i64);
    let gap = &a.global.mean - &floor;
    a.decide(
        &mut report,
        "structural",
        "path_type_minimum",
        !gap.is_negative() && (gap.is_zero() == path_type),
        Some(gap),
        format!("path_type={path_type}"),
    );
    report
}

/// One record per claim: the worst clique's margin, failing if any clique fails.
fn decide_rows(
    a: &Analysis,
    report: &mut VerificationReport,
    claim: &str,
    rows: Vec<(bool, BigRational, &KClique)>,
) {
    let failing = rows.iter().find(|(ok, _, _)| !ok);
    let worst = rows.iter().min_by(|x, y| x.1.cmp(&y.1));
    let (holds, margin, witness) = match (failing, worst) {
        (Some((_, m, c)), _) => (false, m.clone(), c.to_string()),
        (None, Some((_, m, c))) => (true, m.clone(), c.to_string()),
        (None, None) => (true, BigRational::zero(), String::new()),
    };
    a.decide(report, "structural", claim, holds, Some(margin), witness);
}

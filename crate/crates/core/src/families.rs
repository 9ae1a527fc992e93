//! Named k-tree families and the exhaustive isomorph-free generator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::canon::CanonicalCode;
use crate::error::{Error, Result};
use crate::ktree::{KTreeInstance, Vertex};

/// Default cap on the number of classes held in one generation level.
pub const DEFAULT_CLASS_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Star,
    Path,
    Broom,
    Caterpillar,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Family::Star),
            "path" => Ok(Family::Path),
            "broom" => Ok(Family::Broom),
            "caterpillar" => Ok(Family::Caterpillar),
            other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Star => "star",
            Family::Path => "path",
            Family::Broom => "broom",
            Family::Caterpillar => "caterpillar",
        })
    }
}

/// A family member with its size parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Star {
        k: usize,
        n: usize,
    },
    Path {
        k: usize,
        n: usize,
    },
    /// `s` handle vertices plus `m` leaves.
    Broom {
        k: usize,
        s: usize,
        m: usize,
    },
    /// Stem of `s` vertices.
    Caterpillar {
        k: usize,
        s: usize,
    },
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::Star { .. } => Family::Star,
            FamilySpec::Path { .. } => Family::Path,
            FamilySpec::Broom { .. } => Family::Broom,
            FamilySpec::Caterpillar { .. } => Family::Caterpillar,
        }
    }

    pub fn build(&self) -> Result<KTreeInstance> {
        match *self {
            FamilySpec::Star { k, n } => make_k_star(k, n),
            FamilySpec::Path { k, n } => make_k_path(k, n),
            FamilySpec::Broom { k, s, m } => make_k_broom(k, s, m),
            FamilySpec::Caterpillar { k, s } => make_k_caterpillar(k, s),
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    Ok(())
}

fn check_order(k: usize, n: usize) -> Result<()> {
    check_k(k)?;
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "need n >= k, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// Every vertex joined to the base clique.
pub fn make_k_star(k: usize, n: usize) -> Result<KTreeInstance> {
    check_order(k, n)?;
    let base: Vec<Vertex> = (0..k).collect();
    KTreeInstance::new(k, vec![base; n - k])
}

fn path_attachments(k: usize, n: usize) -> Vec<Vec<Vertex>> {
    (0..n - k).map(|t| (t..t + k).collect()).collect()
}

/// Each vertex joined to the k most recent ones.
pub fn make_k_path(k: usize, n: usize) -> Result<KTreeInstance> {
    check_order(k, n)?;
    KTreeInstance::new(k, path_attachments(k, n))
}

/// A k-path on `s` vertices with `m` leaves on its last k vertices.
pub fn make_k_broom(k: usize, s: usize, m: usize) -> Result<KTreeInstance> {
    check_order(k, s)?;
    let mut attachments = path_attachments(k, s);
    attachments.extend(std::iter::repeat_n((s - k..s).collect(), m));
    KTreeInstance::new(k, attachments)
}

/// A k-path stem on `s` vertices, one leaf on every window of k consecutive
/// stem vertices, and one more leaf on each end window. `n = 2s + 3 - k`.
pub fn make_k_caterpillar(k: usize, s: usize) -> Result<KTreeInstance> {
    check_k(k)?;
    if s <= k {
        return Err(Error::InvalidParameter(format!(
            "caterpillar stem needs s > k, got s = {s}, k = {k}"
        )));
    }
    let mut attachments = path_attachments(k, s);
    for i in 0..=s - k {
        attachments.push((i..i + k).collect());
    }
    attachments.push((0..k).collect());
    attachments.push((s - k..s).collect());
    KTreeInstance::new(k, attachments)
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `(N, R)` of the k-star on `n` vertices in closed form:
/// `N = 2^(n-k) + (n-k)k` and `R = (n+k) 2^(n-k-1) + k^2 (n-k)`.
pub fn star_global_counts(k: usize, n: usize) -> Result<(BigUint, BigUint)> {
    check_order(k, n)?;
    if n == k {
        return Ok((BigUint::one(), BigUint::from(k)));
    }
    let e = n - k;
    let count = pow2(e) + BigUint::from(e * k);
    let order_sum = BigUint::from(n + k) * pow2(e - 1) + BigUint::from(k * k * e);
    Ok((count, order_sum))
}

/// `(N, R)` of [`make_k_caterpillar`] by summing over how many stem vertices
/// a sub-k-tree keeps (with `l = s - k + 1` stem windows).
pub fn caterpillar_global_counts(k: usize, s: usize) -> Result<(BigUint, BigUint)> {
    check_k(k)?;
    if s <= k {
        return Err(Error::InvalidParameter(format!(
            "caterpillar stem needs s > k, got s = {s}, k = {k}"
        )));
    }
    let l = s - k + 1;
    let n = 2 * s + 3 - k;
    let b = BigUint::from;
    // Simplicial k-cliques outside the stem windows: single k-cliques.
    let singles = k * (n - k) + 1 - l;
    let mut count = b(singles) + pow2(l + 2);
    // Order sums are accumulated doubled to keep the halves integral.
    let mut twice = b(2 * singles * k) + pow2(l + 2) * b(2 * s + l + 2);
    for i in 2..=l {
        count += pow2(i) * 2u32;
        twice += pow2(i) * b(2 * (2 * (k + i - 2) + i));
    }
    for i in 3..=l {
        let w = pow2(l + 1 - i) * b(i - 2);
        count += &w;
        twice += w * b(2 * (s + 1 - i) + (l + 1 - i));
    }
    debug_assert!((&twice % 2u32).is_zero());
    Ok((count, twice / 2u32))
}

/// Breadth-first generator of k-trees up to isomorphism, one level per order.
pub struct ClassLevels {
    k: usize,
    class_budget: usize,
    level: Option<Vec<KTreeInstance>>,
}

impl ClassLevels {
    pub fn new(k: usize, class_budget: usize) -> Result<Self> {
        check_k(k)?;
        Ok(ClassLevels {
            k,
            class_budget,
            level: None,
        })
    }
}

impl Iterator for ClassLevels {
    /// `(n, representatives)` sorted by canonical code.
    type Item = Result<(usize, Vec<KTreeInstance>)>;

    fn next(&mut self) -> Option<Self::Item> {
        let next = match self.level.take() {
            None => KTreeInstance::base(self.k).map(|t| vec![t]),
            Some(parents) => extend_level(&parents, self.class_budget),
        };
        match next {
            Ok(level) => {
                let n = level.first().map_or(self.k, KTreeInstance::n);
                self.level = Some(level.clone());
                Some(Ok((n, level)))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

fn prefer(a: KTreeInstance, b: KTreeInstance) -> KTreeInstance {
    if b.attachments() < a.attachments() {
        b
    } else {
        a
    }
}

fn extend_level(parents: &[KTreeInstance], class_budget: usize) -> Result<Vec<KTreeInstance>> {
    let merged: BTreeMap<CanonicalCode, KTreeInstance> = parents
        .par_iter()
        .map(|p| {
            let mut seen = BTreeMap::new();
            for (clique, _) in p.k_cliques_with_degree() {
                let child = p
                    .with_attached(clique.vertices())
                    .expect("a k-clique of a k-tree accepts a new vertex");
                let code = child.canonical_code();
                match seen.remove(&code) {
                    Some(old) => seen.insert(code, prefer(old, child)),
                    None => seen.insert(code, child),
                };
            }
            seen
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (code, t) in b {
                let t = match a.remove(&code) {
                    Some(old) => prefer(old, t),
                    None => t,
                };
                a.insert(code, t);
            }
            a
        });
    if merged.len() > class_budget {
        return Err(Error::BudgetExceeded(format!(
            "{} classes exceed the class budget {class_budget}",
            merged.len()
        )));
    }
    Ok(merged.into_values().collect())
}

/// One representative per isomorphism class of k-trees on `n` vertices.
pub fn generate_all_ktrees(k: usize, n: usize) -> Result<Vec<KTreeInstance>> {
    generate_all_ktrees_with_budget(k, n, DEFAULT_CLASS_BUDGET)
}

pub fn generate_all_ktrees_with_budget(
    k: usize,
    n: usize,
    class_budget: usize,
) -> Result<Vec<KTreeInstance>> {
    check_order(k, n)?;
    for level in ClassLevels::new(k, class_budget)? {
        let (order, classes) = level?;
        if order == n {
            return Ok(classes);
        }
    }
    unreachable!("the level iterator never ends")
}

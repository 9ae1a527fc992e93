//! Grid and sample checks of the two auxiliary inequalities behind the
//! degree-1 argument.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{cmp_log2, fmt_ratio, frac, int, log2_lower_bound};

use super::report::{CheckRecord, Outcome, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGrid {
    pub seed: u64,
    /// Number of sampled vectors for the sum-versus-product inequality.
    pub samples: usize,
    pub max_len: usize,
    /// Entries are drawn from `[1, max_entry]`.
    pub max_entry: u32,
    pub k_min: usize,
    pub k_max: usize,
    /// `1 <= y <= z <= yz_max`.
    pub yz_max: usize,
}

impl Default for AuxGrid {
    fn default() -> Self {
        AuxGrid {
            seed: 0,
            samples: 10_000,
            max_len: 8,
            max_entry: 100,
            k_min: 2,
            k_max: 6,
            yz_max: 50,
        }
    }
}

/// `(sum - (P + n - 1), equality expected)` for reals `x_i >= 1`.
pub fn sum_product_gap(xs: &[BigRational]) -> (BigRational, bool) {
    let one = BigRational::one();
    let product: BigRational = xs.iter().product();
    let sum: BigRational = xs.iter().sum();
    let gap = sum - product - int(xs.len() as i64 - 1);
    let non_unit = xs.iter().filter(|x| **x != one).count();
    (gap, non_unit <= 1)
}

fn sample_vector(rng: &mut ChaCha8Rng, grid: &AuxGrid) -> Vec<BigRational> {
    let len = rng.random_range(1..=grid.max_len);
    let mut xs: Vec<BigRational> = (0..len)
        .map(|_| {
            if rng.random_ratio(1, 3) {
                return BigRational::one();
            }
            let den: i64 = rng.random_range(1..=12);
            let num: i64 = rng.random_range(den..=den * grid.max_entry as i64);
            frac(num, den)
        })
        .collect();
    // Every fifth vector is forced into the equality configuration.
    if rng.random_ratio(1, 5) {
        let keep = rng.random_range(0..len);
        let p: BigRational = xs.iter().product();
        for (i, x) in xs.iter_mut().enumerate() {
            *x = if i == keep {
                p.clone()
            } else {
                BigRational::one()
            };
        }
    }
    xs
}

fn vector_text(xs: &[BigRational]) -> String {
    xs.iter().map(fmt_ratio).collect::<Vec<_>>().join(",")
}

/// Both sides of the two-branch inequality at `(k, y, z)`, with the left
/// side given as `A * (1 + (k/2) log2 y)` through its coefficient `A`.
pub fn two_branch_sides(k: usize, y: u64, z: u64) -> (BigRational, BigRational) {
    let big = |v: u64| BigInt::from(v);
    let yk1 = num_traits::pow(big(y), k - 1);
    let yk = &yk1 * big(y);
    let a = BigRational::new(BigInt::one() - big(y) + &yk1 * big(z), BigInt::one() + yk);
    let b = BigRational::new(big(z), BigInt::one() + yk1 * big(z))
        * (int(1)
            + (BigRational::from_integer(big((k as u64 - 1) * y + z)) - int(k as i64)) / int(2));
    (a, b)
}

/// Decides `A (1 + (k/2) log2 y) >= B` exactly; the margin uses a rational
/// lower bound on `log2 y`.
pub fn two_branch_holds(k: usize, y: u64, z: u64) -> (bool, BigRational) {
    let (a, b) = two_branch_sides(k, y, z);
    let kk = int(k as i64);
    if y == 1 {
        return (a >= b, a - b);
    }
    // log2 y >= 2 (B/A - 1) / k
    let needed = (&b / &a - int(1)) * int(2) / &kk;
    let holds = cmp_log2(&BigUint::from(y), &needed) != Ordering::Less;
    let lower = log2_lower_bound(&BigUint::from(y), 64);
    let margin = &a * (int(1) + &kk / int(2) * lower) - &b;
    (holds, margin)
}

pub fn check_aux_inequalities(grid: &AuxGrid) -> VerificationReport {
    let mut report = VerificationReport::new();
    let record = |claim: &str, outcome, margin, witness: String| CheckRecord {
        check: "aux".into(),
        claim: claim.into(),
        instance: String::new(),
        k: 0,
        n: 0,
        outcome,
        margin,
        witness,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut worst: Option<BigRational> = None;
    let mut equalities = 0usize;
    let mut failures = Vec::new();
    for _ in 0..grid.samples {
        let xs = sample_vector(&mut rng, grid);
        let (gap, expect_equal) = sum_product_gap(&xs);
        if gap.is_positive() || gap.is_zero() != expect_equal {
            failures.push(vector_text(&xs));
        }
        if gap.is_zero() {
            equalities += 1;
        } else if worst.as_ref().is_none_or(|w| -&gap < *w) {
            worst = Some(-gap);
        }
    }
    let summary = format!(
        "samples={} equalities={equalities} seed={}",
        grid.samples, grid.seed
    );
    if failures.is_empty() {
        report.push(record("sum_at_most_product", Outcome::Pass, worst, summary));
    } else {
        for f in failures {
            report.push(record("sum_at_most_product", Outcome::Fail, None, f));
        }
    }

    let mut worst: Option<(BigRational, String)> = None;
    let mut failures = Vec::new();
    for k in grid.k_min..=grid.k_max {
        for y in 1..=grid.yz_max as u64 {
            for z in y..=grid.yz_max as u64 {
                let (holds, margin) = two_branch_holds(k, y, z);
                let at = format!("k={k} y={y} z={z}");
                if !holds {
                    failures.push(at);
                } else if y > 1 && worst.as_ref().is_none_or(|(w, _)| &margin < w) {
                    worst = Some((margin, at));
                }
            }
        }
    }
    if failures.is_empty() {
        let (margin, at) = worst.map_or((None, String::new()), |(m, a)| (Some(m), a));
        report.push(record("two_branch", Outcome::Pass, margin, at));
    } else {
        for f in failures {
            report.push(record("two_branch", Outcome::Fail, None, f));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_configuration() {
        let xs = vec![int(7), int(1), int(1)];
        let (gap, eq) = sum_product_gap(&xs);
        assert!(gap.is_zero() && eq);
        let xs = vec![frac(3, 2), frac(3, 2)];
        let (gap, eq) = sum_product_gap(&xs);
        assert_eq!(gap, frac(-1, 4));
        assert!(!eq);
    }

    #[test]
    fn unit_y_is_an_identity() {
        for z in 1..20 {
            let (a, b) = two_branch_sides(2, 1, z);
            assert_eq!(a, frac(z as i64, 2));
            assert_eq!(b, frac(z as i64, 2));
            assert!(two_branch_holds(2, 1, z).0);
        }
    }

    #[test]
    fn direct_evaluation() {
        // (1 - 2 + 2*3)/(1 + 4) = 1, times 1 + log2 2 = 2; right side
        // 3/7 * (1 + (2 + 3 - 2)/2) = 15/14.
        let (a, b) = two_branch_sides(2, 2, 3);
        assert_eq!(a * int(2), int(2));
        assert_eq!(b, frac(15, 14));
        let (holds, margin) = two_branch_holds(2, 2, 3);
        assert!(holds);
        assert_eq!(margin, frac(13, 14));
    }

    #[test]
    fn small_grid_passes() {
        let grid = AuxGrid {
            samples: 500,
            yz_max: 12,
            ..AuxGrid::default()
        };
        let r = check_aux_inequalities(&grid);
        assert!(!r.has_failures(), "{r:?}");
        assert_eq!(r.records.len(), 2);
    }
}

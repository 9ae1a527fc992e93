//! Exact-arithmetic helpers shared by the statistics and the checks.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(to_int(num), to_int(den))
}

pub fn to_int(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &BigRational) -> f64 {
    // Scale down huge operands so the conversion does not overflow to inf/inf.
    let (n, d) = (q.numer(), q.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = n >> shift;
    let d = d >> shift;
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if b != 0.0 => a / b,
        _ => f64::NAN,
    }
}

/// `num/den` form used in every emitted table.
pub fn fmt_ratio(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_ratio(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(a.trim().parse().ok()?, den))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

/// Compares `log2(n)` with `x` exactly, for `n >= 1`.
pub fn cmp_log2(n: &BigUint, x: &BigRational) -> Ordering {
    assert!(!n.is_zero(), "log2 of zero");
    let bits = n.bits();
    let is_power = n.count_ones() == 1;
    if is_power {
        return int(bits as i64 - 1).cmp(x);
    }
    // log2(n) lies strictly inside (bits - 1, bits).
    if x <= &int(bits as i64 - 1) {
        return Ordering::Greater;
    }
    if x >= &int(bits as i64) {
        return Ordering::Less;
    }
    // Here x > 0. log2 n vs p/q  <=>  n^q vs 2^p, when the powers are small.
    let (p, q) = (x.numer(), x.denom());
    if let (Some(p), Some(q)) = (p.to_u64(), q.to_u64()) {
        if q.saturating_mul(bits) <= 1 << 16 {
            let lhs = num_traits::pow(n.clone(), q as usize);
            let rhs = BigUint::one() << p;
            return lhs.cmp(&rhs);
        }
    }
    // log2 n is irrational here, so a fine enough bracket decides.
    let mut digits = 64;
    loop {
        let (lo, hi) = log2_bracket(n, digits);
        if x <= &lo {
            return Ordering::Greater;
        }
        if x >= &hi {
            return Ordering::Less;
        }
        digits *= 4;
        assert!(digits <= 1 << 22, "log2 comparison did not separate");
    }
}

/// Rational bounds `lo < log2 n < hi` from up to `digits` binary digits,
/// computed by repeated squaring with outward-rounded fixed point.
pub fn log2_bracket(n: &BigUint, digits: u64) -> (BigRational, BigRational) {
    let e = n.bits() - 1;
    let prec = digits + 64;
    let one = BigUint::one() << prec;
    let two = BigUint::one() << (prec + 1);
    // y in [lo, hi], scaled by 2^prec, with 1 <= y < 2.
    let mut lo = (n << prec) >> e;
    let mut hi = if (&lo << e) == (n << prec) {
        lo.clone()
    } else {
        &lo + 1u32
    };
    let mut acc = BigUint::zero();
    let mut taken = 0u64;
    while taken < digits {
        let next_lo = (&lo * &lo) >> prec;
        let sq = &hi * &hi;
        let mut next_hi = &sq >> prec;
        if (&next_hi << prec) != sq {
            next_hi += 1u32;
        }
        let bit = if next_lo >= two {
            lo = next_lo >> 1;
            hi = (next_hi + 1u32) >> 1;
            1u32
        } else if next_hi < two {
            lo = next_lo;
            hi = next_hi;
            0
        } else {
            break;
        };
        acc = (acc << 1) + bit;
        taken += 1;
        debug_assert!(lo >= one);
    }
    let scale = BigInt::one() << taken;
    let base = BigInt::from(e) * &scale + to_int(&acc);
    (
        BigRational::new(base.clone(), scale.clone()),
        BigRational::new(base + 1, scale),
    )
}

/// `floor(log2 n)` as a rational lower bound on `log2 n` with `m` fractional
/// steps.
pub fn log2_lower_bound(n: &BigUint, m: u64) -> BigRational {
    let floor = num_traits::pow(n.clone(), m as usize).bits() - 1;
    BigRational::new(BigInt::from(floor), BigInt::from(m))
}

/// Compares `d` with `n^3 / 2^(e/4)` exactly (`d` may be negative).
pub fn cmp_cube_over_quartic_root(d: &BigRational, n: u64, e: u64) -> Ordering {
    if !d.is_positive() {
        return Ordering::Less;
    }
    let d4 = num_traits::pow(d.clone(), 4);
    let lhs = d4 * BigRational::from_integer(BigInt::one() << e);
    let rhs = BigRational::from_integer(num_traits::pow(BigInt::from(n), 12));
    lhs.cmp(&rhs)
}

pub fn le_cube_over_quartic_root(d: &BigRational, n: u64, e: u64) -> bool {
    cmp_cube_over_quartic_root(d, n, e) != Ordering::Greater
}

pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

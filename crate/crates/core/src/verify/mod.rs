//! Exact verification sweeps, extremal search and inequality grids.

pub mod aux;
pub mod checks;
pub mod extremal;
pub mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use aux::{check_aux_inequalities, AuxGrid};
pub use checks::{
    check_double_bound, check_max_local, check_series_reduced, check_structural, Analysis,
};
pub use extremal::{find_extremal, is_k_broom, top_ties, Filter, Objective, RankedClass};
pub use report::{CheckRecord, Outcome, Tally, VerificationReport};

use crate::error::{Error, Result};
use crate::families::ClassLevels;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    MaxLocal,
    DoubleBound,
    SeriesReduced,
    Structural,
    Aux,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::MaxLocal,
        Check::DoubleBound,
        Check::SeriesReduced,
        Check::Structural,
        Check::Aux,
    ];

    pub fn run(&self, a: &Analysis) -> VerificationReport {
        match self {
            Check::MaxLocal => check_max_local(a),
            Check::DoubleBound => check_double_bound(a),
            Check::SeriesReduced => check_series_reduced(a),
            Check::Structural => check_structural(a),
            Check::Aux => VerificationReport::new(),
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-local" => Ok(Check::MaxLocal),
            "double-bound" => Ok(Check::DoubleBound),
            "series-reduced" => Ok(Check::SeriesReduced),
            "structural" => Ok(Check::Structural),
            "aux" => Ok(Check::Aux),
            other => Err(Error::InvalidParameter(format!("unknown check '{other}'"))),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::MaxLocal => "max-local",
            Check::DoubleBound => "double-bound",
            Check::SeriesReduced => "series-reduced",
            Check::Structural => "structural",
            Check::Aux => "aux",
        })
    }
}

/// `all` or a comma-separated list of check names.
pub fn parse_checks(list: &str) -> Result<Vec<Check>> {
    if list.trim() == "all" {
        return Ok(Check::ALL.to_vec());
    }
    let mut checks = list
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<Check>>>()?;
    checks.sort();
    checks.dedup();
    Ok(checks)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub k: usize,
    pub n_max: usize,
    pub checks: Vec<Check>,
    pub class_budget: usize,
    /// Bound on `n - k` for vertex-scope enumeration.
    pub vertex_budget: usize,
    /// Stop after the first order that produced a failure.
    pub fail_fast: bool,
    /// Keep passing and skipped records (counters are always kept).
    pub keep_passing: bool,
    pub aux: AuxGrid,
}

impl SweepConfig {
    pub fn new(k: usize, n_max: usize) -> Self {
        SweepConfig {
            k,
            n_max,
            checks: Check::ALL.to_vec(),
            class_budget: crate::families::DEFAULT_CLASS_BUDGET,
            vertex_budget: crate::oracle::DEFAULT_BUDGET,
            fail_fast: false,
            keep_passing: true,
            aux: AuxGrid::default(),
        }
    }
}

/// Runs the selected checks on every class with `k <= n <= n_max`, one
/// order at a time.
pub fn sweep(config: &SweepConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    if config.checks.contains(&Check::Aux) {
        report = report.merge(check_aux_inequalities(&config.aux));
    }
    let instance_checks: Vec<Check> = config
        .checks
        .iter()
        .copied()
        .filter(|c| *c != Check::Aux)
        .collect();
    if instance_checks.is_empty() {
        return Ok(report);
    }
    for level in ClassLevels::new(config.k, config.class_budget)? {
        let (n, classes) = level?;
        if n > config.n_max {
            break;
        }
        let level_report = classes
            .par_iter()
            .map(|t| {
                let a = Analysis::new(t, config.vertex_budget)?;
                let mut r = VerificationReport::new();
                for c in &instance_checks {
                    r = r.merge(c.run(&a));
                }
                if !config.keep_passing {
                    r.retain_failures();
                }
                Ok(r)
            })
            .try_reduce(VerificationReport::new, |a, b| Ok(a.merge(b)))?;
        report = report.merge(level_report);
        if config.fail_fast && report.has_failures() {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("all").unwrap().len(), 5);
        assert_eq!(
            parse_checks("structural,max-local,structural").unwrap(),
            vec![Check::MaxLocal, Check::Structural]
        );
        assert!(parse_checks("max-local,bogus").is_err());
    }

    #[test]
    fn small_sweep_is_clean() {
        let mut config = SweepConfig::new(2, 7);
        config.aux.samples = 200;
        config.aux.yz_max = 8;
        let report = sweep(&config).unwrap();
        assert!(
            !report.has_failures(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert!(report.totals().pass > 0);
    }
}

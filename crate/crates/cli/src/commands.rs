use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ktree_core::exact::ratio;
use ktree_core::families::{
    caterpillar_global_counts, star_global_counts, ClassLevels, FamilySpec,
};
use ktree_core::ktc::{parse_ktc, serialize_ktc};
use ktree_core::recurse::{characteristic_tree, clique_stats_fast, global_stats_fast};
use ktree_core::verify::{
    find_extremal, is_k_broom, parse_checks, sweep, Filter, Objective, SweepConfig,
};
use ktree_core::{oracle, BigRational, Family, KTreeInstance, Scope, SubtreeStats};
use serde_json::json;

use crate::emit::{csv_err, io_failure, rational_fields, read, sink, write_err};
use crate::{Failure, RunConfig};

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(path: &Path) -> Result<KTreeInstance, Failure> {
    parse_ktc(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_ids(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad vertex id '{s}'")))
        })
        .collect()
}

pub fn gen(run: &RunConfig, k: usize, n: usize, out: Option<&Path>) -> Result<(), Failure> {
    if n < k {
        return Err(usage(format!("n = {n} is below k = {k}")));
    }
    let mut w = sink(out)?;
    for level in ClassLevels::new(k, run.class_budget)? {
        let (order, classes) = level?;
        if order < n {
            continue;
        }
        for (i, t) in classes.iter().enumerate() {
            if i > 0 {
                writeln!(w).map_err(write_err)?;
            }
            w.write_all(serialize_ktc(t).as_bytes())
                .map_err(write_err)?;
        }
        break;
    }
    w.flush().map_err(write_err)
}

pub fn family(
    name: &str,
    k: usize,
    n: Option<usize>,
    s: Option<usize>,
    m: Option<usize>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let need =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| usage(format!("{name} needs --{flag}")));
    let spec = match name.parse::<Family>()? {
        Family::Star => FamilySpec::Star {
            k,
            n: need(n, "n")?,
        },
        Family::Path => FamilySpec::Path {
            k,
            n: need(n, "n")?,
        },
        Family::Broom => FamilySpec::Broom {
            k,
            s: need(s, "s")?,
            m: need(m, "m")?,
        },
        Family::Caterpillar => FamilySpec::Caterpillar {
            k,
            s: need(s, "s")?,
        },
    };
    let t = spec.build()?;
    let mut w = sink(out)?;
    w.write_all(serialize_ktc(&t).as_bytes())
        .map_err(write_err)?;
    w.flush().map_err(write_err)
}

fn parse_scope(t: &KTreeInstance, text: &str) -> Result<Scope, Failure> {
    if text == "global" {
        return Ok(Scope::Global);
    }
    if let Some(ids) = text.strip_prefix("clique=") {
        return Ok(Scope::AtClique(t.k_clique(&parse_ids(ids)?)?));
    }
    if let Some(v) = text.strip_prefix("vertex=") {
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad vertex '{v}'")))?;
        if v >= t.n() {
            return Err(usage(format!("vertex {v} is out of range")));
        }
        return Ok(Scope::AtVertex(v));
    }
    Err(usage(format!("unknown scope '{text}'")))
}

fn recursive_stats(t: &KTreeInstance, scope: &Scope) -> Result<SubtreeStats, Failure> {
    match scope {
        Scope::Global => Ok(global_stats_fast(t)),
        Scope::AtClique(c) => Ok(clique_stats_fast(t, c)?),
        Scope::AtVertex(_) => Err(usage(
            "the recursive engine has no vertex scope; use --engine oracle",
        )),
    }
}

pub fn stats(
    run: &RunConfig,
    input: &Path,
    scope: &str,
    engines: &[String],
    out: Option<&Path>,
) -> Result<(), Failure> {
    let t = load(input)?;
    let scope = parse_scope(&t, scope)?;
    let mut rows = Vec::new();
    for engine in engines {
        let s = match engine.as_str() {
            "oracle" => oracle::stats(&t, &scope, run.budget as usize)?,
            "recursive" => recursive_stats(&t, &scope)?,
            other => return Err(usage(format!("unknown engine '{other}'"))),
        };
        rows.push((engine.clone(), s));
    }
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record([
        "k",
        "n",
        "scope",
        "engine",
        "N",
        "R",
        "Nbar",
        "Rbar",
        "mu_num",
        "mu_den",
        "mu_approx",
    ])
    .map_err(csv_err)?;
    for (engine, s) in rows {
        let [num, den, approx] = rational_fields(&s.mean);
        w.write_record([
            t.k().to_string(),
            t.n().to_string(),
            scope.to_string(),
            engine,
            s.count_containing.to_string(),
            s.order_sum_containing.to_string(),
            s.count_avoiding.to_string(),
            s.order_sum_avoiding.to_string(),
            num,
            den,
            approx,
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(write_err)
}

pub fn char_tree(input: &Path, clique: Option<&str>, dot: Option<&Path>) -> Result<(), Failure> {
    let t = load(input)?;
    let c = match clique {
        Some(ids) => t.k_clique(&parse_ids(ids)?)?,
        None => t.base_clique(),
    };
    let tree = characteristic_tree(&t, &c)?;
    let mut w = sink(dot)?;
    w.write_all(tree.to_dot(&c).as_bytes()).map_err(write_err)?;
    w.flush().map_err(write_err)
}

pub struct VerifyOptions {
    pub k: usize,
    pub n_max: usize,
    pub checks: String,
    pub json: Option<PathBuf>,
    pub fail_fast: bool,
    pub failures_only: bool,
    pub seed: u64,
    pub timestamp: bool,
}

pub fn verify(run: &RunConfig, opts: &VerifyOptions) -> Result<(), Failure> {
    if opts.n_max < opts.k {
        return Err(usage(format!(
            "--n-max {} is below k = {}",
            opts.n_max, opts.k
        )));
    }
    let mut config = SweepConfig::new(opts.k, opts.n_max);
    config.checks = parse_checks(&opts.checks)?;
    config.class_budget = run.class_budget;
    config.vertex_budget = run.budget as usize;
    config.fail_fast = opts.fail_fast;
    config.keep_passing = !opts.failures_only;
    config.aux.seed = opts.seed;
    let report = sweep(&config)?;
    let totals = report.totals();

    if let Some(path) = &opts.json {
        let mut doc = json!({
            "k": opts.k,
            "n_max": opts.n_max,
            "checks": config.checks.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "seed": opts.seed,
            "budget": run.budget,
            "class_budget": run.class_budget,
            "totals": totals,
            "tally": report.tally,
            "records": report.records,
        });
        if opts.timestamp {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs());
            doc["timestamp"] = json!(secs);
        }
        let mut w = sink(Some(path))?;
        serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| io_failure(path, e.into()))?;
        writeln!(w)
            .and_then(|_| w.flush())
            .map_err(|e| io_failure(path, e))?;
    }

    let mut w = sink(None)?;
    writeln!(w, "claim,pass,fail,skip").map_err(write_err)?;
    for (claim, t) in &report.tally {
        writeln!(w, "{claim},{},{},{}", t.pass, t.fail, t.skip).map_err(write_err)?;
    }
    writeln!(w, "total,{},{},{}", totals.pass, totals.fail, totals.skip).map_err(write_err)?;
    for r in report.failures() {
        writeln!(
            w,
            "FAIL {}/{} k={} n={} {}",
            r.check, r.claim, r.k, r.n, r.instance
        )
        .map_err(write_err)?;
    }
    w.flush().map_err(write_err)?;
    if totals.fail > 0 {
        return Err(Failure::ChecksFailed(totals.fail));
    }
    Ok(())
}

pub fn extremal(
    run: &RunConfig,
    k: usize,
    n: usize,
    objective: &str,
    filter: &str,
    top: usize,
    csv_out: Option<&Path>,
) -> Result<(), Failure> {
    let objective: Objective = objective.parse()?;
    let filter: Filter = filter.parse()?;
    let ranked = find_extremal(k, n, objective, filter, run.class_budget)?;
    let mut w = csv::Writer::from_writer(sink(csv_out)?);
    w.write_record([
        "rank",
        "k",
        "n",
        "objective",
        "value_num",
        "value_den",
        "value_approx",
        "path_type",
        "series_reduced",
        "k_star",
        "k_broom",
        "cliques",
        "attachments",
        "code",
    ])
    .map_err(csv_err)?;
    for r in ranked.iter().take(top) {
        let t = &r.instance;
        let [num, den, approx] = rational_fields(&r.value);
        let cliques: Vec<String> = r.cliques.iter().map(|c| c.to_string()).collect();
        let attachments: Vec<String> = t
            .attachments()
            .iter()
            .map(|a| {
                a.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        w.write_record([
            r.rank.to_string(),
            k.to_string(),
            n.to_string(),
            objective.to_string(),
            num,
            den,
            approx,
            t.is_path_type().to_string(),
            t.is_series_reduced().to_string(),
            t.is_k_star().to_string(),
            is_k_broom(t).to_string(),
            cliques.join(" "),
            attachments.join(";"),
            r.code.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(write_err)
}

pub fn plot_data(k: usize, n_max: usize, out: Option<&Path>) -> Result<(), Failure> {
    let mut rows: Vec<(&str, usize, BigRational)> = Vec::new();
    for n in k + 1..=n_max {
        let (count, sum) = star_global_counts(k, n)?;
        rows.push(("star", n, ratio(&sum, &count)));
    }
    for s in k + 1.. {
        let n = 2 * s + 3 - k;
        if n > n_max {
            break;
        }
        let (count, sum) = caterpillar_global_counts(k, s)?;
        rows.push(("caterpillar", n, ratio(&sum, &count)));
    }
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record([
        "family",
        "k",
        "n",
        "mu_num",
        "mu_den",
        "mu_approx",
        "lower_num",
        "lower_den",
        "lower_approx",
        "upper_num",
        "upper_den",
        "upper_approx",
    ])
    .map_err(csv_err)?;
    for (family, n, mu) in rows {
        let lower = BigRational::new((n as i64 + k as i64).into(), 2.into());
        let upper = BigRational::new((3 * n as i64 + k as i64 - 3).into(), 4.into());
        let mut record = vec![family.to_string(), k.to_string(), n.to_string()];
        for q in [&mu, &lower, &upper] {
            record.extend(rational_fields(q));
        }
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().map_err(write_err)
}

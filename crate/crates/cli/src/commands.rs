use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use binlab::analysis::{
    ab_sweep, adversarial_check, behavior_diff, crossover, exact_period, growing_curve, output, run_battery,
    threshold_scan, DiffSummary,
};
use binlab::generate::{gen_battery, SeedPolicy};
use binlab::DistributionSpec;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Settings;

fn spec(s: &Settings) -> DistributionSpec {
    DistributionSpec::new(s.dist.clone(), s.cap, s.n_items.unwrap_or(1))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_csv(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<PathBuf> {
    let mut out = create(dir, name)?;
    write(&mut out).with_context(|| format!("cannot write {name}"))?;
    out.flush()?;
    Ok(dir.join(name))
}

/// `<kind>_summary.json`, collected later by `report`.
fn write_summary(s: &Settings, summary: impl Serialize) -> Result<()> {
    let doc = json!({
        "experiment": s.kind.name(),
        "config": serde_json::from_str::<Value>(&s.provenance())?,
        "summary": summary,
    });
    let mut out = create(&s.out, &format!("{}_summary.json", s.kind))?;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn gen(s: &Settings, json: bool) -> Result<()> {
    let instances = gen_battery(&spec(s), s.instances, s.seed)?;
    for (i, inst) in instances.iter().enumerate() {
        let mut out = create(&s.out, &format!("instance_{i:04}.txt"))?;
        out.write_all(inst.to_text().as_bytes())?;
        out.flush()?;
        if json {
            let mut out = create(&s.out, &format!("instance_{i:04}.json"))?;
            writeln!(out, "{}", inst.to_json())?;
            out.flush()?;
        }
    }
    println!(
        "wrote {} instance(s) of {} to {} (stream seeds from master {})",
        instances.len(),
        spec(s),
        s.out.display(),
        s.seed
    );
    if let Some(first) = instances.first() {
        println!("instance 0 stream seed {:#018x}", SeedPolicy::new(s.seed, 0).stream_seed());
        debug_assert_eq!(first.seed, SeedPolicy::new(s.seed, 0).stream_seed());
    }
    Ok(())
}

pub fn run(s: &Settings) -> Result<()> {
    let results = run_battery(&spec(s), &s.heuristics, s.instances, s.seed)?;
    let config = s.provenance();
    let path = write_csv(&s.out, "battery.csv", |w| output::write_battery_csv(&results, w, Some(&config)))?;
    println!("{} instances of {}", s.instances, spec(s));
    println!(
        "{:<28} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "heuristic", "mean", "median", "q1", "q3", "aggregate"
    );
    for r in &results {
        let m = &r.summary;
        println!(
            "{:<28} {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>9.6}",
            r.heuristic.to_string(),
            m.mean,
            m.median,
            m.q1,
            m.q3,
            m.aggregate_ratio
        );
    }
    let summary: Vec<Value> = results
        .iter()
        .map(|r| json!({"heuristic": r.heuristic, "ratio": r.summary}))
        .collect();
    write_summary(s, summary)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn sweep(s: &Settings) -> Result<()> {
    let result = ab_sweep(
        &spec(s),
        s.baseline,
        s.variant,
        s.a_range.clone(),
        s.b_range.clone(),
        s.instances,
        s.seed,
    )?;
    let config = s.provenance();
    let path = write_csv(&s.out, "sweep.csv", |w| output::write_sweep_csv(&result, w, Some(&config)))?;
    let best = result.best;
    println!(
        "ab-{} ({}) over {} cells on {} instances of {}",
        s.baseline.short_name(),
        s.variant.name(),
        result.cells.len(),
        s.instances,
        spec(s)
    );
    println!("argmin a={} b={} mean_ratio={:.6}", best.a, best.b, best.mean_ratio);
    write_summary(
        s,
        json!({"baseline": s.baseline, "variant": s.variant, "cells": result.cells.len(), "best": best}),
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn curve(s: &Settings) -> Result<()> {
    let curves = s
        .heuristics
        .iter()
        .map(|h| Ok((*h, growing_curve(&spec(s), h, &s.grid, s.instances, s.seed)?)))
        .collect::<Result<Vec<_>>>()?;
    let config = s.provenance();
    let path = write_csv(&s.out, "curve.csv", |w| output::write_curve_csv(&curves, w, Some(&config)))?;
    let mut summary = Vec::new();
    for (h, points) in &curves {
        println!("{h}");
        for p in points {
            println!("  n={:<5} mean_ratio={:.6}", p.n_items, p.mean_ratio);
        }
        let cross = crossover(points);
        match cross {
            Some(n) => println!("  crosses below 1 at n={n:.1}"),
            None => println!("  never crosses below 1"),
        }
        summary.push(json!({"heuristic": h, "points": points, "crossover": cross}));
    }
    write_summary(s, summary)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Returns whether the impossibility check failed.
pub fn diff(s: &Settings) -> Result<bool> {
    let instances = gen_battery(&spec(s), s.instances, s.seed)?;
    let mut total = DiffSummary::default();
    for (i, inst) in instances.iter().enumerate() {
        let d = behavior_diff(inst, &s.driver, &s.shadow).with_context(|| format!("instance {i}"))?;
        total.merge(d);
    }
    let scan = threshold_scan(&total);
    let config = s.provenance();
    let path = write_csv(&s.out, "diff.csv", |w| output::write_diff_csv(&total, w, Some(&config)))?;
    let events = write_csv(&s.out, "diff_events.csv", |w| {
        output::write_diff_events_csv(&total, w, Some(&config))
    })?;
    println!("driver {} vs shadow {} on {} instance(s) of {}", s.driver, s.shadow, s.instances, spec(s));
    for c in binlab::analysis::DiffCategory::ALL {
        println!("  {:<14} {}", c.name(), total.count(c));
    }
    match scan.max_remaining_after {
        Some(max) => println!(
            "  a_new_b_old events: {}, max remaining_after {}, share <= 22: {:.6}",
            scan.n_events,
            max,
            scan.fraction_at_most(22)
        ),
        None => println!("  no a_new_b_old events"),
    }
    let violated = total.b_new_a_old > 0;
    write_summary(
        s,
        json!({
            "counts": {
                "both_new": total.both_new,
                "same_old": total.same_old,
                "different_old": total.different_old,
                "a_new_b_old": total.a_new_b_old,
                "b_new_a_old": total.b_new_a_old,
            },
            "threshold_scan": {
                "n_events": scan.n_events,
                "max_remaining_after": scan.max_remaining_after,
                "fraction_at_most_22": scan.fraction_at_most(22),
            },
        }),
    )?;
    println!("wrote {} and {}", path.display(), events.display());
    Ok(s.assert_impossible && violated)
}

pub fn adversarial(s: &Settings) -> Result<()> {
    let reports = s
        .cases
        .iter()
        .map(|c| {
            let n = s.n_items.unwrap_or_else(|| exact_period(c.c, c.b, c.s));
            adversarial_check(c.c, c.a, c.b, c.s, n, s.baseline).with_context(|| format!("case {c}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let config = s.provenance();
    let path = write_csv(&s.out, "adversarial.csv", |w| {
        output::write_adversarial_csv(&reports, w, Some(&config))
    })?;
    for r in &reports {
        println!(
            "c={} a={} b={} s={} n={}: m={} fill_matches={} ratio={:.6} (closed form {:.6}) vs volume bound {:.6}, c/(c-b)={:.6}",
            r.capacity,
            r.a,
            r.b,
            r.s,
            r.n_items,
            r.predicted_fill,
            r.fill_matches,
            r.measured_ratio,
            r.predicted_ratio,
            r.ratio_vs_volume_bound,
            r.degradation_bound
        );
    }
    write_summary(s, &reports)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Collects every `*_summary.json` in `dir` into `report.json`.
pub fn report(dir: &Path) -> Result<()> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with("_summary.json")))
        .collect();
    entries.sort();
    if entries.is_empty() {
        bail!("no *_summary.json files in {}", dir.display());
    }
    let mut combined = serde_json::Map::new();
    for path in &entries {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let doc: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
        let key = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_suffix("_summary.json"))
            .unwrap_or_default()
            .to_string();
        combined.insert(key, doc);
    }
    let text = serde_json::to_string_pretty(&Value::Object(combined))?;
    let mut out = create(dir, "report.json")?;
    writeln!(out, "{text}")?;
    out.flush()?;
    println!("{text}");
    Ok(())
}

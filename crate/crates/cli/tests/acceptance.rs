//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use binlab::analysis::{
    ab_sweep_on, adversarial_check, behavior_diff, chebyshev, crossover, dead_branch_audit, default_grid,
    default_ranges, exact_period, growing_curve, run_battery_on, threshold_scan, SweepResult,
};
use binlab::generate::{gen_battery, stream_rng};
use binlab::heuristics::{argmax, eoh_math_form};
use binlab::packing::PackingState;
use binlab::{AbVariant, Baseline, DistributionSpec, HeuristicSpec, Instance};
use rand::Rng;

const SEED: u64 = 1;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn outcome(id: &'static str, pass: bool, detail: String) -> Outcome {
    let line = format!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    println!("{line}");
    Outcome { id, pass, detail }
}

fn uniform_a1() -> DistributionSpec {
    DistributionSpec::uniform(20, 100, 150, 500)
}

fn weibull_a4(n_items: usize) -> DistributionSpec {
    DistributionSpec::weibull(3.0, 45.0, 100, n_items)
}

/// A1, A2 and A8 share the Fig 2 battery.
fn a1_a2_a8(out: &mut Vec<Outcome>) {
    let spec = uniform_a1();
    let start = Instant::now();
    let instances = gen_battery(&spec, 1000, SEED).unwrap();
    let c12 = run_battery_on(&spec, &instances, &[HeuristicSpec::C12]).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let m = c12[0].summary.mean;
    out.push(outcome(
        "A1",
        (m - 0.980).abs() <= 0.005 && elapsed < 60.0,
        format!("c12 mean ratio {m:.6} (target 0.980 +/- 0.005), runtime {elapsed:.1}s (< 60s)"),
    ));

    let smooth = run_battery_on(&spec, &instances, &[HeuristicSpec::SmoothC12]).unwrap();
    let s = smooth[0].summary.mean;
    let gap = (s - m).abs() * 100.0;
    out.push(outcome(
        "A2",
        gap < 0.3,
        format!("smooth-c12 mean {s:.6} vs c12 {m:.6}: {gap:.4} pp (< 0.3 pp)"),
    ));

    let audit = dead_branch_audit(&instances).unwrap();
    let tiers: Vec<String> = audit.counts.iter().map(ToString::to_string).collect();
    out.push(outcome(
        "A8",
        audit.mid_band_selections() == 0,
        format!(
            "c12 selections in tiers 0.9/0.95/0.97/0.98: {} of {}; per-branch counts [{}]",
            audit.mid_band_selections(),
            audit.total(),
            tiers.join(", ")
        ),
    ));
}

fn a3(out: &mut Vec<Outcome>) {
    let grid = default_grid();
    let points = growing_curve(&uniform_a1(), &HeuristicSpec::C12, &grid, 1000, SEED).unwrap();
    let at = |n: usize| points.iter().find(|p| p.n_items == n).unwrap().mean_ratio;
    let (r50, r500) = (at(50), at(500));
    let cross = crossover(&points);
    let pass = r50 > 1.0 && r500 < 0.99 && cross.is_some_and(|c| (60.0..=140.0).contains(&c));
    out.push(outcome(
        "A3",
        pass,
        format!(
            "c12 curve: n=50 {r50:.6} (> 1), n=500 {r500:.6} (< 0.99), crossover {} (in [60, 140])",
            cross.map_or("none".to_string(), |c| format!("{c:.1}"))
        ),
    ));
}

fn a4(out: &mut Vec<Outcome>) {
    let spec = weibull_a4(5000);
    let instances = gen_battery(&spec, 100, SEED).unwrap();
    let r = run_battery_on(&spec, &instances, &[HeuristicSpec::C14, HeuristicSpec::EoH]).unwrap();
    let gain_c14 = (1.0 - r[0].summary.mean) * 100.0;
    let gain_eoh = (1.0 - r[1].summary.mean) * 100.0;
    out.push(outcome(
        "A4",
        (gain_c14 - 3.3).abs() <= 0.5 && (gain_eoh - 3.2).abs() <= 0.5,
        format!(
            "100 instances: c14 gain {gain_c14:.3}% (3.3 +/- 0.5), EoH gain {gain_eoh:.3}% (3.2 +/- 0.5)"
        ),
    ));
}

fn sweep(instances: &[Instance], baseline: Baseline, variant: AbVariant) -> SweepResult {
    let (a, b) = default_ranges();
    ab_sweep_on(instances, baseline, variant, a, b).unwrap()
}

fn a5(out: &mut Vec<Outcome>) {
    let instances = gen_battery(&uniform_a1(), 100, SEED).unwrap();
    let r = sweep(&instances, Baseline::FirstFit, AbVariant::Faithful);
    let best = r.best;
    let d = chebyshev(&best, 5, 24);
    out.push(outcome(
        "A5",
        (best.mean_ratio - 0.979).abs() <= 0.005 && d <= 2,
        format!(
            "ab-ff sweep over {} cells: argmin ({}, {}) ratio {:.6} (0.979 +/- 0.005), Chebyshev distance to (5,24) {d} (<= 2)",
            r.cells.len(),
            best.a,
            best.b,
            best.mean_ratio
        ),
    ));
}

fn a6(out: &mut Vec<Outcome>) {
    let instances = gen_battery(&weibull_a4(5000), 100, SEED).unwrap();
    let faithful = sweep(&instances, Baseline::WorstFit, AbVariant::Faithful);
    let verbatim = sweep(&instances, Baseline::WorstFit, AbVariant::Verbatim);
    let near = |r: &SweepResult| chebyshev(&r.best, 1, 21).min(chebyshev(&r.best, 1, 22));
    let hits = |r: &SweepResult| (r.best.mean_ratio - 0.967).abs() <= 0.010 && near(r) <= 2;
    let reproduces = match (hits(&faithful), hits(&verbatim)) {
        (true, false) => "faithful",
        (false, true) => "verbatim",
        (true, true) => "both",
        (false, false) => "neither",
    };
    out.push(outcome(
        "A6",
        hits(&faithful),
        format!(
            "ab-wf faithful argmin ({}, {}) ratio {:.6} (0.967 +/- 0.010, distance {} to (1,21)/(1,22)); \
             verbatim argmin ({}, {}) ratio {:.6}; variant reaching the target: {reproduces}",
            faithful.best.a,
            faithful.best.b,
            faithful.best.mean_ratio,
            near(&faithful),
            verbatim.best.a,
            verbatim.best.b,
            verbatim.best.mean_ratio
        ),
    ));
}

fn a7(out: &mut Vec<Outcome>) {
    let inst = &gen_battery(&weibull_a4(50_000), 1, SEED).unwrap()[0];
    let d = behavior_diff(inst, &HeuristicSpec::C14, &HeuristicSpec::WorstFit).unwrap();
    let scan = threshold_scan(&d);
    let share = scan.fraction_at_most(22);
    out.push(outcome(
        "A7",
        d.b_new_a_old == 0 && d.a_new_b_old > 0 && share >= 0.99,
        format!(
            "c14 vs WorstFit on 50000 items: b_new_a_old {}, a_new_b_old {}, share with remaining_after <= 22 {share:.6} (>= 0.99), max remaining_after {:?}",
            d.b_new_a_old, d.a_new_b_old, scan.max_remaining_after
        ),
    ));
}

fn a9(out: &mut Vec<Outcome>) {
    const CHECKS: usize = 100_000;
    let mut rng = stream_rng(SEED);
    let cap = 150u32;

    // arbitrary feasible candidate lists with a perfect fit inserted at a random slot
    let mut c14_missed = 0;
    let mut unit_checks = 0;
    let mut unit_missed = 0;
    for _ in 0..CHECKS {
        let item = rng.random_range(1..=cap);
        let n = rng.random_range(0..30);
        let mut cands: Vec<u32> = (0..n).map(|_| rng.random_range(item..=cap)).collect();
        let slot = rng.random_range(0..=cands.len());
        cands.insert(slot, item);
        let pick = argmax(&HeuristicSpec::C14.scores(item, &cands, cap).0).unwrap();
        let hit = cands[pick] == item;
        if item == 1 {
            unit_checks += 1;
            unit_missed += usize::from(!hit);
        } else {
            c14_missed += usize::from(!hit);
        }
    }
    let arbitrary = CHECKS - unit_checks;

    // candidate lists c14 actually faces while packing Weibull(3,45) streams
    let mut reachable = 0;
    let mut reachable_missed = 0;
    let spec = weibull_a4(5000);
    'outer: for inst in gen_battery(&spec, 50, SEED).unwrap() {
        let mut state = PackingState::for_instance(&inst);
        for &item in &inst.items {
            let used: Vec<u32> = state.remaining().iter().copied().filter(|&r| r > 0 && r < inst.capacity).collect();
            if !used.is_empty() {
                let probe = used[rng.random_range(0..used.len())];
                let cands: Vec<u32> = state.remaining().iter().copied().filter(|&r| r >= probe).collect();
                let pick = argmax(&HeuristicSpec::C14.scores(probe, &cands, inst.capacity).0).unwrap();
                reachable += 1;
                reachable_missed += usize::from(cands[pick] != probe);
                if reachable == CHECKS {
                    break 'outer;
                }
            }
            let bin = state.select(item, &HeuristicSpec::C14).unwrap();
            state.commit(item, bin);
        }
    }

    let mut eoh_mismatch = 0;
    for _ in 0..CHECKS {
        let item = rng.random_range(1..=cap);
        let n = rng.random_range(1..30);
        let cands: Vec<u32> = (0..n).map(|_| rng.random_range(item..=cap)).collect();
        let listing = HeuristicSpec::EoH.scores(item, &cands, cap).0;
        let math: Vec<f64> = cands.iter().map(|&b| eoh_math_form(item, b)).collect();
        // the two forms tie exactly on some pairs (s=60 with bins 108 and 135), and
        // rounding then splits the tie differently, so each argmax only has to be
        // a maximizer of the other form
        let (i, j) = (argmax(&listing).unwrap(), argmax(&math).unwrap());
        let agree = (math[i] - math[j]).abs() <= 1e-9 && (listing[i] - listing[j]).abs() <= 1e-9;
        eoh_mismatch += usize::from(!agree);
    }

    out.push(outcome(
        "A9",
        c14_missed == 0 && reachable == CHECKS && reachable_missed == 0 && eoh_mismatch == 0,
        format!(
            "c14 perfect fit missed {c14_missed} of {arbitrary} random sets with item >= 2 and {reachable_missed} of {reachable} reachable pool states; \
             EoH argmax mismatches {eoh_mismatch} of {CHECKS}; note: item size 1 breaks the property ({unit_missed} of {unit_checks} random sets)"
        ),
    ));
}

fn a10(out: &mut Vec<Outcome>) {
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, a, b, s) in [(150, 5, 24, 42), (150, 5, 24, 10), (100, 1, 21, 15)] {
        let n = exact_period(c, b, s);
        let r = adversarial_check(c, a, b, s, n, Baseline::FirstFit).unwrap();
        let exact = r.fill_matches && r.fills.iter().all(|&f| f == r.predicted_fill);
        let applies = (r.predicted_fill as u32) * s <= c - b;
        let bound_ok = !applies || r.ratio_vs_volume_bound >= r.degradation_bound - 1e-6;
        pass &= exact && bound_ok;
        parts.push(format!(
            "({c},{b},{s}) m={} fill exact {exact}, ratio vs volume bound {:.6} >= c/(c-b) {:.6}: {bound_ok}, ratio vs optimum {:.6}",
            r.predicted_fill, r.ratio_vs_volume_bound, r.degradation_bound, r.measured_ratio
        ));
    }
    out.push(outcome("A10", pass, parts.join("; ")));
}

fn run_cli(dir: &Path, threads: &str, args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_binlab"))
        .args(args)
        .args(["--seed", "5", "--threads", threads, "--out"])
        .arg(dir)
        .stdout(std::process::Stdio::null())
        .status()
        .expect("binlab runs");
    assert!(status.success(), "binlab {args:?} failed");
}

fn a11(out: &mut Vec<Outcome>) {
    let commands: [&[&str]; 6] = [
        &["gen", "--instances", "3", "--n-items", "200"],
        &["run", "--instances", "40", "--heuristics", "bestfit,c12,c14,eoh,ab-wf(a=1,b=21)"],
        &["sweep", "--instances", "10", "--a-range", "0..=4", "--b-range", "18..=26"],
        &["curve", "--instances", "30", "--grid", "20,50,100", "--heuristics", "c12,smooth-c12"],
        &["diff", "--n-items", "5000", "--instances", "2"],
        &["adversarial"],
    ];
    let root = tempfile::tempdir().unwrap();
    let mut compared = 0;
    let mut differing = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let dirs: Vec<_> = ["1", "2", "2"]
            .iter()
            .enumerate()
            .map(|(k, threads)| {
                let dir = root.path().join(format!("{i}_{k}"));
                run_cli(&dir, threads, args);
                dir
            })
            .collect();
        let mut names: Vec<_> = std::fs::read_dir(&dirs[0])
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .filter(|n| !n.to_string_lossy().ends_with(".json"))
            .collect();
        names.sort();
        for name in names {
            let first = std::fs::read(dirs[0].join(&name)).unwrap();
            for other in &dirs[1..] {
                compared += 1;
                if std::fs::read(other.join(&name)).ok().as_ref() != Some(&first) {
                    differing.push(format!("{}/{}", args[0], name.to_string_lossy()));
                }
            }
        }
    }
    out.push(outcome(
        "A11",
        differing.is_empty() && compared > 0,
        format!(
            "{compared} output comparisons across reruns with 1 and 2 threads, {} differing {:?}",
            differing.len(),
            differing
        ),
    ));
}

fn a12(out: &mut Vec<Outcome>) {
    let spec = DistributionSpec::weibull(7.0, 75.0, 500, 5000);
    let instances = gen_battery(&spec, 50, SEED).unwrap();
    let c14 = run_battery_on(&spec, &instances, &[HeuristicSpec::C14]).unwrap()[0].summary.mean;
    let ab = sweep(&instances, Baseline::WorstFit, AbVariant::Faithful);
    out.push(outcome(
        "A12",
        c14 > 1.02 && ab.best.mean_ratio < 1.0,
        format!(
            "Weibull(7,75) cap 500, 50 instances: c14 mean {c14:.6} (> 1.02); best faithful ab-wf cell ({}, {}) {:.6} (< 1.0)",
            ab.best.a, ab.best.b, ab.best.mean_ratio
        ),
    ));
}

fn main() {
    // libtest flags such as --list or a name filter are not meaningful here
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let start = Instant::now();
    let mut out = Vec::new();
    a1_a2_a8(&mut out);
    a3(&mut out);
    a4(&mut out);
    a5(&mut out);
    a6(&mut out);
    a7(&mut out);
    a9(&mut out);
    a10(&mut out);
    a11(&mut out);
    a12(&mut out);
    out.sort_by_key(|o| o.id.trim_start_matches('A').parse::<u32>().unwrap());
    println!("\nsummary ({:.0}s):", start.elapsed().as_secs_f64());
    for o in &out {
        println!("  {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.detail);
    }
    let failed: Vec<&str> = out.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {}", failed.join(", "));
        std::process::exit(1);
    }
}

//! CSV tables. Floats are written with six decimals. An optional first line
//! `# config: {...}` records the settings that produced the table.

use std::io::{self, Write};

use super::adversarial::AdversarialReport;
use super::battery::BatteryResult;
use super::curve::CurvePoint;
use super::diff::{DiffCategory, DiffSummary};
use super::sweep::SweepResult;
use crate::heuristics::HeuristicSpec;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.6}")
}

fn open<W: Write>(mut out: W, config: Option<&str>, header: &[&str]) -> io::Result<csv::Writer<W>> {
    if let Some(config) = config {
        writeln!(out, "# config: {config}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

/// `distribution,heuristic,instance_id,bins_used,bestfit_bins,ratio`
pub fn write_battery_csv<W: Write>(results: &[BatteryResult], out: W, config: Option<&str>) -> io::Result<()> {
    let mut w = open(
        out,
        config,
        &["distribution", "heuristic", "instance_id", "bins_used", "bestfit_bins", "ratio"],
    )?;
    for r in results {
        let dist = r.distribution.dist.tag();
        let name = r.heuristic.to_string();
        for row in &r.per_instance {
            w.write_record([
                dist.as_str(),
                name.as_str(),
                row.instance_id.as_str(),
                &row.bins_used.to_string(),
                &row.bins_used_bestfit.to_string(),
                &fmt_f64(row.ratio),
            ])?;
        }
    }
    w.flush()
}

/// `heuristic,n_items,mean_ratio,n_instances`
pub fn write_curve_csv<W: Write>(
    curves: &[(HeuristicSpec, Vec<CurvePoint>)],
    out: W,
    config: Option<&str>,
) -> io::Result<()> {
    let mut w = open(out, config, &["heuristic", "n_items", "mean_ratio", "n_instances"])?;
    for (h, points) in curves {
        let name = h.to_string();
        for p in points {
            w.write_record([
                name.as_str(),
                &p.n_items.to_string(),
                &fmt_f64(p.mean_ratio),
                &p.n_instances.to_string(),
            ])?;
        }
    }
    w.flush()
}

/// `a,b,mean_ratio`
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W, config: Option<&str>) -> io::Result<()> {
    let mut w = open(out, config, &["a", "b", "mean_ratio"])?;
    for c in &result.cells {
        w.write_record([c.a.to_string(), c.b.to_string(), fmt_f64(c.mean_ratio)])?;
    }
    w.flush()
}

/// `category,count`
pub fn write_diff_csv<W: Write>(diff: &DiffSummary, out: W, config: Option<&str>) -> io::Result<()> {
    let mut w = open(out, config, &["category", "count"])?;
    for c in DiffCategory::ALL {
        w.write_record([c.name().to_string(), diff.count(c).to_string()])?;
    }
    w.flush()
}

/// `item_index,item_size,remaining_after,remaining_before`
pub fn write_diff_events_csv<W: Write>(diff: &DiffSummary, out: W, config: Option<&str>) -> io::Result<()> {
    let mut w = open(
        out,
        config,
        &["item_index", "item_size", "remaining_after", "remaining_before"],
    )?;
    for e in &diff.events {
        w.write_record([
            e.item_index.to_string(),
            e.item_size.to_string(),
            e.remaining_after.to_string(),
            e.remaining_before.to_string(),
        ])?;
    }
    w.flush()
}

/// `c,a,b,s,m,measured_ratio`
pub fn write_adversarial_csv<W: Write>(
    reports: &[AdversarialReport],
    out: W,
    config: Option<&str>,
) -> io::Result<()> {
    let mut w = open(out, config, &["c", "a", "b", "s", "m", "measured_ratio"])?;
    for r in reports {
        w.write_record([
            r.capacity.to_string(),
            r.a.to_string(),
            r.b.to_string(),
            r.s.to_string(),
            r.predicted_fill.to_string(),
            fmt_f64(r.measured_ratio),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::diff::DiffEvent;

    #[test]
    fn diff_tables() {
        let diff = DiffSummary {
            both_new: 3,
            a_new_b_old: 1,
            events: vec![DiffEvent {
                item_index: 4,
                item_size: 30,
                remaining_after: 2,
                remaining_before: 32,
            }],
            ..Default::default()
        };
        let mut buf = Vec::new();
        write_diff_csv(&diff, &mut buf, Some("{\"seed\":1}")).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# config: {\"seed\":1}\ncategory,count\nboth_new,3\nsame_old,0\n\
             different_old,0\na_new_b_old,1\nb_new_a_old,0\n"
        );
        let mut buf = Vec::new();
        write_diff_events_csv(&diff, &mut buf, None).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "item_index,item_size,remaining_after,remaining_before\n4,30,2,32\n"
        );
    }

    #[test]
    fn floats_have_six_decimals() {
        assert_eq!(fmt_f64(1.0), "1.000000");
        assert_eq!(fmt_f64(0.9876543), "0.987654");
    }
}

//! CSV tables (header row, RFC quoting) and JSON mirrors.

use std::path::Path;

use serde::Serialize;

use super::{format_exact, format_sig};
use crate::error::Result;
use crate::limits::{ScanReport, SweepReport};
use crate::regularized::DiscreteField;
use crate::sharp::{DeformationGraph, SharpMinimizer};

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

/// Sweep table preceded by `# key=value` metadata lines.
pub fn sweep_csv(report: &SweepReport) -> Result<String> {
    let m = &report.metadata;
    let mut out = String::new();
    let meta: [(&str, String); 12] = [
        ("functional", m.functional.to_string()),
        ("lambda", format_exact(m.lambda)),
        ("mu", format_exact(m.mu)),
        ("model", m.model.clone()),
        ("intervals", m.intervals.to_string()),
        ("seed", m.seed.to_string()),
        ("tolerance", format_exact(m.tolerance)),
        ("max_iterations", m.max_iterations.to_string()),
        ("random_starts", m.random_starts.to_string()),
        ("c_wstar", format_sig(m.c_wstar)),
        ("limit_energy", format_sig(m.limit_energy)),
        ("candidates", m.candidates.join(";")),
    ];
    for (k, v) in meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "epsilon",
        "energy",
        "rescaled_energy",
        "transition_count",
        "l1_distance_to_sharp",
        "h1_seminorm_distance",
        "sup_distance",
        "nearest_candidate",
        "lower_bound",
        "upper_bound",
        "converged",
        "iterations",
        "start",
        "suspect",
    ])?;
    for r in &report.rows {
        w.write_record([
            format_sig(r.epsilon),
            format_sig(r.energy),
            format_sig(r.rescaled_energy),
            r.transition_count.to_string(),
            format_sig(r.l1_distance_to_sharp),
            opt(r.h1_seminorm_distance),
            opt(r.sup_distance),
            r.nearest_candidate.clone(),
            format_sig(r.lower_bound),
            format_sig(r.upper_bound),
            r.converged.to_string(),
            r.iterations.to_string(),
            r.start.clone(),
            r.suspect.to_string(),
        ])?;
    }
    out.push_str(&finish(w)?);
    Ok(out)
}

pub fn scan_csv(report: &ScanReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda", "mu", "n", "V_n", "x", "crack_positions"])?;
    for r in &report.rows {
        let positions: Vec<String> = r.crack_positions.iter().map(|&p| format_sig(p)).collect();
        w.write_record([
            format_sig(r.lambda),
            format_sig(report.metadata.mu),
            r.n.to_string(),
            format_sig(r.v_n),
            format_sig(r.x),
            positions.join(";"),
        ])?;
    }
    finish(w)
}

/// One row per variant: load, stiffness, count, energy and bracket argument.
pub fn sharp_summary_csv(lambda: f64, mu: f64, x: f64, minimizers: &[SharpMinimizer]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda", "mu", "n", "V_n", "x", "variant", "segment_length", "total_opening"])?;
    for m in minimizers {
        w.write_record([
            format_sig(lambda),
            format_sig(mu),
            m.n.to_string(),
            format_sig(m.energy),
            format_sig(x),
            m.variant.to_string(),
            format_sig(m.segment_length),
            format_sig(m.total_opening()),
        ])?;
    }
    finish(w)
}

pub fn crack_table_csv(minimizers: &[SharpMinimizer]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["variant", "index", "position", "opening"])?;
    for m in minimizers {
        for (i, c) in m.cracks.iter().enumerate() {
            w.write_record([
                m.variant.to_string(),
                i.to_string(),
                format_sig(c.position),
                format_sig(c.opening),
            ])?;
        }
    }
    finish(w)
}

/// Continuous pieces `(x_start, x_end, f_start, f_end)` followed by jumps
/// `(x, x, lower, upper)`.
pub fn graph_csv(graph: &DeformationGraph) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "x_start", "x_end", "f_start", "f_end"])?;
    for p in &graph.pieces {
        w.write_record([
            "piece".to_string(),
            format_sig(p.x_start),
            format_sig(p.x_end),
            format_sig(p.f_start),
            format_sig(p.f_end),
        ])?;
    }
    for j in &graph.jumps {
        w.write_record([
            "jump".to_string(),
            format_sig(j.x),
            format_sig(j.x),
            format_sig(j.lower),
            format_sig(j.upper),
        ])?;
    }
    finish(w)
}

/// `(y, value)` samples in shortest round-trip form.
pub fn minimizer_csv(field: &DiscreteField) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["y", "value"])?;
    for (j, v) in field.values().iter().enumerate() {
        w.write_record([format_exact(field.node(j)), format_exact(*v)])?;
    }
    finish(w)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::crack_scan;
    use crate::material::builtin_lj;
    use crate::sharp::{build_sharp_minimizer, reconstruct_deformation, Variant};

    const C: f64 = 0.3771236166328254;

    #[test]
    fn scan_table_has_header_and_rows() {
        let report = crack_scan(1.1, 1.5, 0.1, 200.0, &builtin_lj()).unwrap();
        let text = scan_csv(&report).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(
            reader.headers().unwrap().iter().collect::<Vec<_>>(),
            ["lambda", "mu", "n", "V_n", "x", "crack_positions"]
        );
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 5);
        assert_eq!(&rows[4][0], "1.5");
        assert_eq!(&rows[4][2], "4");
        assert_eq!(&rows[4][3], "2.02932779986");
    }

    #[test]
    fn sharp_tables() {
        let ms: Vec<_> = Variant::BOTH
            .iter()
            .map(|&v| build_sharp_minimizer(4, 1.5, v, C, 200.0).unwrap())
            .collect();
        let summary = sharp_summary_csv(1.5, 200.0, 3.5355, &ms).unwrap();
        assert_eq!(summary.lines().count(), 3);
        let cracks = crack_table_csv(&ms).unwrap();
        // 2 cracks for A, 3 for B
        assert_eq!(cracks.lines().count(), 1 + 2 + 3);
        let graph = reconstruct_deformation(&ms[0].field).unwrap();
        let text = graph_csv(&graph).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("jump")).count(), 2);
    }

    #[test]
    fn minimizer_samples_are_exact() {
        let f = DiscreteField::from_fn(crate::regularized::FieldKind::InverseStretch, 1.4, 10, |y| y / 3.0).unwrap();
        let text = minimizer_csv(&f).unwrap();
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        for (j, rec) in reader.records().enumerate() {
            let v: f64 = rec.unwrap()[1].parse().unwrap();
            assert_eq!(v, f.values()[j]);
        }
    }
}

//! Text exports of run metrics, comparisons and trajectories.

use std::fmt::Write;

use crate::num::{fmt_sig, Real};

use super::{Aggregate, ComparisonReport, RunMetrics, TrajectoryRow};

/// `step,active,evacuated,avg_force_N`, values at full precision.
pub fn metrics_csv<T: Real>(m: &RunMetrics<T>) -> String {
    let mut out = String::from("step,active,evacuated,avg_force_N\n");
    for i in 0..m.steps() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            m.active_series[i],
            m.evacuated_count_series[i],
            m.avg_force_series[i]
        )
        .unwrap();
    }
    out
}

/// `step,avg_force_<a>_N,avg_force_<b>_N` with zero padding.
pub fn comparison_csv<T: Real>(report: &ComparisonReport<T>, label_a: &str, label_b: &str) -> String {
    let mut out = format!("step,avg_force_{label_a}_N,avg_force_{label_b}_N\n");
    for (step, a, b) in &report.aligned {
        writeln!(out, "{step},{a},{b}").unwrap();
    }
    out
}

/// Two-column whitespace-separated series for gnuplot.
pub fn gnuplot_series<T: Real>(m: &RunMetrics<T>, label: &str) -> String {
    let mut out = format!("# {label}\n# step avg_force_N\n");
    for (i, f) in m.avg_force_series.iter().enumerate() {
        writeln!(out, "{} {}", i + 1, f).unwrap();
    }
    out
}

/// `step,agent_id,x,y,vx,vy`.
pub fn trajectories_csv<T: Real>(rows: &[TrajectoryRow<T>]) -> String {
    let mut out = String::from("step,agent_id,x,y,vx,vy\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.step, r.agent_id, r.position.x, r.position.y, r.velocity.x, r.velocity.y
        )
        .unwrap();
    }
    out
}

fn te<T: Real>(v: Option<T>) -> String {
    v.map_or_else(|| "incomplete".to_owned(), |x| fmt_sig(x.to_f64_lossy()))
}

/// Plain-text summary for a pair of aggregates (`a` against `b`).
pub fn summary<T: Real>(label_a: &str, a: &Aggregate<T>, label_b: &str, b: &Aggregate<T>) -> String {
    let mut out = String::new();
    for (label, agg) in [(label_a, a), (label_b, b)] {
        writeln!(
            out,
            "{label}: runs={} t_e={} mean_F_a={} N peak_F_a={} N",
            agg.runs,
            te(agg.mean_evacuation_steps),
            fmt_sig(agg.mean_force.to_f64_lossy()),
            fmt_sig(agg.mean_peak_force.to_f64_lossy()),
        )
        .unwrap();
    }
    let fa_ratio = a.mean_force / b.mean_force;
    writeln!(
        out,
        "mean_F_a ratio ({label_a}/{label_b}) = {}",
        fmt_sig(fa_ratio.to_f64_lossy())
    )
    .unwrap();
    match (a.mean_evacuation_steps, b.mean_evacuation_steps) {
        (Some(x), Some(y)) => {
            writeln!(
                out,
                "t_e ratio ({label_a}/{label_b}) = {}",
                fmt_sig((x / y).to_f64_lossy())
            )
            .unwrap();
        }
        _ => writeln!(out, "t_e ratio: incomparable (a run did not complete)").unwrap(),
    }
    out
}

use crate::num::Real;

use super::RunMetrics;

/// Side-by-side summary of two runs; ratios are `a / b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<T> {
    pub evacuation_steps: (Option<usize>, Option<usize>),
    pub mean_force: (T, T),
    pub peak_force: (T, T),
    pub mean_force_ratio: T,
    pub peak_force_ratio: T,
    pub evacuation_ratio: Option<T>,
    /// Both runs completed.
    pub comparable: bool,
    /// The series had different lengths and the shorter one was zero-padded.
    pub padded: bool,
    /// `(step, force_a, force_b)` for plotting.
    pub aligned: Vec<(usize, T, T)>,
}

fn ratio<T: Real>(a: T, b: T) -> T {
    if a == b {
        T::one()
    } else {
        a / b
    }
}

pub fn compare<T: Real>(a: &RunMetrics<T>, b: &RunMetrics<T>) -> ComparisonReport<T> {
    let len = a.steps().max(b.steps());
    let at = |m: &RunMetrics<T>, i: usize| m.avg_force_series.get(i).copied().unwrap_or_else(T::zero);
    let aligned = (0..len).map(|i| (i + 1, at(a, i), at(b, i))).collect();
    let evacuation_ratio = match (a.evacuation_steps, b.evacuation_steps) {
        (Some(x), Some(y)) => Some(ratio(T::lit(x as f64), T::lit(y as f64))),
        _ => None,
    };
    ComparisonReport {
        evacuation_steps: (a.evacuation_steps, b.evacuation_steps),
        mean_force: (a.mean_force(), b.mean_force()),
        peak_force: (a.peak_force(), b.peak_force()),
        mean_force_ratio: ratio(a.mean_force(), b.mean_force()),
        peak_force_ratio: ratio(a.peak_force(), b.peak_force()),
        evacuation_ratio,
        comparable: a.completed && b.completed,
        padded: a.steps() != b.steps(),
        aligned,
    }
}

/// Averages over replicated runs of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate<T> {
    pub runs: usize,
    pub all_completed: bool,
    /// Mean t_e over runs, when every run completed.
    pub mean_evacuation_steps: Option<T>,
    pub mean_force: T,
    pub mean_peak_force: T,
}

pub fn aggregate<T: Real>(runs: &[RunMetrics<T>]) -> Aggregate<T> {
    let n = T::lit(runs.len().max(1) as f64);
    let all_completed = runs.iter().all(|m| m.completed);
    let mean = |f: &dyn Fn(&RunMetrics<T>) -> T| runs.iter().map(f).fold(T::zero(), |acc, v| acc + v) / n;
    Aggregate {
        runs: runs.len(),
        all_completed,
        mean_evacuation_steps: (all_completed && !runs.is_empty())
            .then(|| mean(&|m| T::lit(m.evacuation_steps.unwrap_or(0) as f64))),
        mean_force: mean(&|m| m.mean_force()),
        mean_peak_force: mean(&|m| m.peak_force()),
    }
}

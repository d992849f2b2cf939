//! Distribution summaries and strategy comparisons over metric samples.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Unit {
    BitsPerSecond,
    Seconds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub samples: Vec<f64>,
    pub unit: Unit,
    pub scenario: String,
    pub strategy: String,
    pub seed: Option<u64>,
}

impl MetricSeries {
    pub fn new(samples: Vec<f64>, unit: Unit, scenario: &str, strategy: &str, seed: Option<u64>) -> Self {
        MetricSeries {
            samples,
            unit,
            scenario: scenario.to_owned(),
            strategy: strategy.to_owned(),
            seed,
        }
    }

    pub fn mean(&self) -> Result<f64> {
        non_empty(&self.samples)?;
        Ok(self.samples.iter().sum::<f64>() / self.samples.len() as f64)
    }

    pub fn percentile(&self, p: f64) -> Result<f64> {
        percentile(&self.samples, p)
    }
}

/// Right-continuous step function given by its jump points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    /// `(x, F(x))` at each distinct sample value, ascending in `x`.
    pub points: Vec<(f64, f64)>,
    /// Value left of the first jump.
    pub left_limit: f64,
}

impl StepFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&(v, _)| v <= x);
        if k == 0 {
            self.left_limit
        } else {
            self.points[k - 1].1
        }
    }

    pub fn write_csv(&self, mut w: impl Write, header: (&str, &str)) -> Result<()> {
        writeln!(w, "{},{}", header.0, header.1)?;
        for (x, y) in &self.points {
            writeln!(w, "{x},{y}")?;
        }
        Ok(())
    }
}

fn non_empty(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::domain("empty series"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("series contains NaN"));
    }
    Ok(())
}

fn sorted(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Distinct values with the count of samples `<=` each.
fn cumulative_counts(samples: &[f64]) -> Vec<(f64, usize)> {
    let v = sorted(samples);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (i, x) in v.iter().enumerate() {
        match out.last_mut() {
            Some(last) if last.0 == *x => last.1 = i + 1,
            _ => out.push((*x, i + 1)),
        }
    }
    out
}

/// `F(x)`: fraction of samples `<= x`.
pub fn cdf(samples: &[f64]) -> Result<StepFunction> {
    non_empty(samples)?;
    let n = samples.len() as f64;
    Ok(StepFunction {
        points: cumulative_counts(samples)
            .into_iter()
            .map(|(x, c)| (x, c as f64 / n))
            .collect(),
        left_limit: 0.0,
    })
}

/// `F'(x)`: fraction of samples strictly greater than `x`.
pub fn ccdf(samples: &[f64]) -> Result<StepFunction> {
    non_empty(samples)?;
    let n = samples.len();
    Ok(StepFunction {
        points: cumulative_counts(samples)
            .into_iter()
            .map(|(x, c)| (x, (n - c) as f64 / n as f64))
            .collect(),
        left_limit: 1.0,
    })
}

/// Nearest-rank percentile: the smallest sample `v` with `F(v) >= p`.
pub fn percentile(samples: &[f64], p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("percentile rank {p} outside (0, 1)")));
    }
    non_empty(samples)?;
    let v = sorted(samples);
    let n = v.len();
    // smallest k with k / n >= p, guarding against rounding in p * n
    let mut k = (p * n as f64).ceil() as usize;
    while k > 1 && (k - 1) as f64 / n as f64 >= p {
        k -= 1;
    }
    while (k as f64) / (n as f64) < p {
        k += 1;
    }
    Ok(v[k.clamp(1, n) - 1])
}

/// Relative difference of the `p` percentiles; positive when `treatment` is larger.
pub fn gain(treatment: &[f64], baseline: &[f64], p: f64) -> Result<f64> {
    let t = percentile(treatment, p)?;
    let b = percentile(baseline, p)?;
    if b == 0.0 {
        return Err(Error::UndefinedGain);
    }
    Ok((t - b) / b)
}

/// One mean per run, ordered by seed (runs without a seed keep their place at the end).
pub fn aggregate_runs(runs: &[MetricSeries]) -> Result<MetricSeries> {
    let first = runs
        .first()
        .ok_or_else(|| Error::domain("no runs to aggregate"))?;
    let mut ordered: Vec<&MetricSeries> = runs.iter().collect();
    ordered.sort_by_key(|r| r.seed.unwrap_or(u64::MAX));
    let samples = ordered.iter().map(|r| r.mean()).collect::<Result<Vec<_>>>()?;
    Ok(MetricSeries {
        samples,
        unit: first.unit,
        scenario: first.scenario.clone(),
        strategy: first.strategy.clone(),
        seed: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub strategy: String,
    pub metric: String,
    pub percentile: f64,
    pub value: f64,
    /// Improvement over the baseline; for delays a reduction counts as positive.
    pub gain_vs_baseline: Option<f64>,
}

pub fn write_report_csv(rows: &[ReportRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "strategy,metric,percentile,value,gain_vs_baseline")?;
    for r in rows {
        let gain = r.gain_vs_baseline.map(|g| g.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{},{}", r.strategy, r.metric, r.percentile, r.value, gain)?;
    }
    Ok(())
}

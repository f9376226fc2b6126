//! Order-statistics helpers. Summaries are computed from the sorted sample
//! vector, so they do not depend on the order samples were produced in.

use serde::{Deserialize, Serialize};

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Mean accumulated as offsets from the minimum. A constant vector yields its
/// value exactly.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    min + compensated_sum(values.iter().map(|v| v - min)) / values.len() as f64
}

/// Sample standard deviation (n - 1 denominator); zero below two values.
pub fn sample_sd(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (ss / (values.len() - 1) as f64).sqrt()
}

/// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let (a, b) = (sorted[lo], sorted[hi]);
    if a == b {
        a
    } else {
        a + (h - lo as f64) * (b - a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn from_sorted(sorted: &[f64], bins: usize) -> Self {
        let (min, max) = match (sorted.first(), sorted.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                return Histogram {
                    edges: Vec::new(),
                    counts: Vec::new(),
                }
            }
        };
        if min == max || bins <= 1 {
            return Histogram {
                edges: vec![min, max],
                counts: vec![sorted.len() as u64],
            };
        }
        let width = (max - min) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { max } else { min + width * i as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        for &v in sorted {
            let i = (((v - min) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Histogram { edges, counts }
    }
}

/// Summary of a sampled quantity (kg CO2e for effects).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub p05: f64,
    pub p50: f64,
    pub p95: f64,
    pub max: f64,
    pub histogram: Histogram,
}

pub const DEFAULT_BINS: usize = 30;

impl DistributionSummary {
    pub fn from_samples(mut values: Vec<f64>, bins: usize) -> Self {
        values.sort_by(f64::total_cmp);
        let mean = mean(&values);
        DistributionSummary {
            n: values.len(),
            mean,
            sd: sample_sd(&values, mean),
            min: values[0],
            p05: quantile_sorted(&values, 0.05),
            p50: quantile_sorted(&values, 0.50),
            p95: quantile_sorted(&values, 0.95),
            max: values[values.len() - 1],
            histogram: Histogram::from_sorted(&values, bins),
        }
    }
}

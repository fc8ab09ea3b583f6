// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Distribution analytics for centrality samples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::centrality::csv_error;
use crate::error::{Error, Result};

/// Skewness above which a distribution is classified as real-network-like.
pub const SKEWNESS_THRESHOLD: f64 = 1.0;

pub const WEIBULL_MIN_SAMPLE: usize = 10;
pub const WEIBULL_TOLERANCE: f64 = 1e-8;
pub const WEIBULL_MAX_ITER: usize = 200;

/// Pearson's moment coefficient of skewness with population (1/n) moments.
pub fn skewness(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::DegenerateSample(format!(
            "skewness needs at least 2 values, got {}",
            values.len()
        )));
    }
    check_finite(values)?;
    let (min, max) = min_max(values);
    if min == max {
        return Err(Error::DegenerateSample("zero variance".into()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &x in values {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    Ok(m3 / m2.powf(1.5))
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::InvalidParameter(format!("non-finite value at index {i}"))),
        None => Ok(()),
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RealLike,
    ArtificialLike,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::RealLike => "real-like",
            Verdict::ArtificialLike => "artificial-like",
        })
    }
}

/// Strict threshold rule on the skewness.
pub fn classify(skewness: f64) -> Verdict {
    if skewness > SKEWNESS_THRESHOLD {
        Verdict::RealLike
    } else {
        Verdict::ArtificialLike
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullFit {
    pub shape: f64,
    pub scale: f64,
    pub log_likelihood: f64,
    pub iterations: usize,
}

impl WeibullFit {
    pub fn quantile(&self, q: f64) -> f64 {
        self.scale * (-(-q).ln_1p()).powf(1.0 / self.shape)
    }
}

pub fn weibull_log_likelihood(values: &[f64], shape: f64, scale: f64) -> f64 {
    let n = values.len() as f64;
    let sum_log: f64 = values.iter().map(|x| x.ln()).sum();
    let sum_pow: f64 = values.iter().map(|x| (x / scale).powf(shape)).sum();
    n * shape.ln() - n * shape * scale.ln() + (shape - 1.0) * sum_log - sum_pow
}

/// Two-parameter Weibull maximum likelihood fit.
///
/// The scale is profiled out (`scale^k = mean(x^k)`), leaving the shape
/// equation
///
/// ```text
/// g(k) = 1/k + mean(ln x) - sum(x^k ln x) / sum(x^k) = 0
/// ```
///
/// which is strictly decreasing in `k`. It is solved by Newton steps kept
/// inside a sign-change bracket, on data rescaled by its maximum so that
/// `x^k` cannot overflow.
pub fn weibull_mle(values: &[f64]) -> Result<WeibullFit> {
    if values.len() < WEIBULL_MIN_SAMPLE {
        return Err(Error::DegenerateSample(format!(
            "Weibull fit needs at least {WEIBULL_MIN_SAMPLE} values, got {}",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "Weibull fit needs positive values, found {bad}"
        )));
    }
    let (min, max) = min_max(values);
    if min == max {
        return Err(Error::DegenerateSample(
            "constant sample has no finite Weibull shape".into(),
        ));
    }

    let n = values.len() as f64;
    let logs: Vec<f64> = values.iter().map(|x| (x / max).ln()).collect();
    let mean_log = logs.iter().sum::<f64>() / n;

    // (g, g') at shape k
    let equation = |k: f64| -> (f64, f64) {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &l in &logs {
            let w = (k * l).exp();
            s0 += w;
            s1 += w * l;
            s2 += w * l * l;
        }
        let ratio = s1 / s0;
        let g = 1.0 / k + mean_log - ratio;
        let dg = -1.0 / (k * k) - (s2 / s0 - ratio * ratio);
        (g, dg)
    };

    // Gumbel moment estimate on ln x as a starting point
    let var_log = logs.iter().map(|l| (l - mean_log).powi(2)).sum::<f64>() / n;
    let mut k = (std::f64::consts::PI / (6.0 * var_log).sqrt()).clamp(1e-3, 1e3);

    let (mut lo, mut hi) = (k, k);
    while equation(lo).0 <= 0.0 {
        lo /= 2.0;
        if lo < 1e-12 {
            return Err(Error::NonConvergence {
                iterations: 0,
                residual: equation(lo).0,
            });
        }
    }
    while equation(hi).0 >= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NonConvergence {
                iterations: 0,
                residual: equation(hi).0,
            });
        }
    }

    let mut residual = f64::INFINITY;
    for iteration in 1..=WEIBULL_MAX_ITER {
        let (g, dg) = equation(k);
        residual = g;
        if g.abs() <= WEIBULL_TOLERANCE {
            let s0: f64 = logs.iter().map(|l| (k * l).exp()).sum();
            let scale = max * (s0 / n).powf(1.0 / k);
            return Ok(WeibullFit {
                shape: k,
                scale,
                log_likelihood: weibull_log_likelihood(values, k, scale),
                iterations: iteration,
            });
        }
        if g > 0.0 {
            lo = k;
        } else {
            hi = k;
        }
        let newton = k - g / dg;
        k = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NonConvergence {
        iterations: WEIBULL_MAX_ITER,
        residual,
    })
}

/// `(theoretical, empirical)` quantile pairs at plotting positions
/// `(i - 0.5) / n` of the sorted sample.
pub fn qq_pairs(values: &[f64], shape: f64, scale: f64) -> Vec<(f64, f64)> {
    let fit = WeibullFit {
        shape,
        scale,
        log_likelihood: f64::NAN,
        iterations: 0,
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, x)| (fit.quantile((i as f64 + 0.5) / n), x))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "linear fit needs two equally long series of length >= 2".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateSample("all x values equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` strictly increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over `[min, max]`; the last bin is closed.
    pub fn new(values: &[f64], bins: usize) -> Result<Histogram> {
        if bins == 0 || values.is_empty() {
            return Err(Error::InvalidParameter(
                "histogram needs values and at least one bin".into(),
            ));
        }
        check_finite(values)?;
        let (mut min, mut max) = min_max(values);
        if min == max {
            min -= 0.5;
            max += 0.5;
        }
        let width = (max - min) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|b| if b == bins { max } else { min + b as f64 * width })
            .collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let idx = (((v - min) / width).floor() as usize).min(bins - 1);
            counts[idx] += 1;
        }
        Ok(Histogram { edges, counts })
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_left", "bin_right", "center", "count"])
            .map_err(csv_error)?;
        for (i, c) in self.counts.iter().enumerate() {
            let center = 0.5 * (self.edges[i] + self.edges[i + 1]);
            w.write_record([
                self.edges[i].to_string(),
                self.edges[i + 1].to_string(),
                center.to_string(),
                c.to_string(),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sturges' bin count, `ceil(log2 n) + 1`.
pub fn sturges_bins(sample_size: usize) -> usize {
    (sample_size.max(1) as f64).log2().ceil() as usize + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `exp(mean(ln x))`; bins centered beyond it are the tail.
    pub tail_point: f64,
    /// `mean(ln x)` itself.
    pub mean_log: f64,
    /// Index of the modal bin, where the fit window starts.
    pub first_bin: usize,
    pub bins_used: usize,
}

/// Fits `ln(count)` against bin center over the non-empty bins from the modal
/// bin up to the tail point.
pub fn log_histogram_fit(values: &[f64], bins: usize) -> Result<LogLinearFit> {
    if bins < 5 || values.len() < bins {
        return Err(Error::InvalidParameter(format!(
            "log-histogram fit needs size >= bins >= 5, got size {} and {bins} bins",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "tail point needs positive values, found {bad}"
        )));
    }
    let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    let tail_point = mean_log.exp();
    let hist = Histogram::new(values, bins)?;
    // The decay starts at the modal bin; a rising flank left of it is not part of the line.
    let mode = (0..bins)
        .max_by_key(|&b| (hist.counts[b], std::cmp::Reverse(b)))
        .unwrap_or(0);
    let (xs, ys): (Vec<f64>, Vec<f64>) = hist
        .centers()
        .into_iter()
        .zip(&hist.counts)
        .skip(mode)
        .filter(|&(c, &count)| count > 0 && c <= tail_point)
        .map(|(c, &count)| (c, (count as f64).ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::DegenerateSample(format!(
            "only {} non-empty bins left of the tail point {tail_point}",
            xs.len()
        )));
    }
    let line = linear_fit(&xs, &ys)?;
    Ok(LogLinearFit {
        slope: line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
        tail_point,
        mean_log,
        first_bin: mode,
        bins_used: xs.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SummaryOptions {
    /// Histogram bins; Sturges' rule when `None`.
    pub bins: Option<usize>,
    /// Fit the Weibull to `x - 1` (the capability shift), dropping values
    /// that become non-positive.
    pub shift: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub sample_size: usize,
    pub mean: f64,
    /// `None` for a constant sample.
    pub skewness: Option<f64>,
    pub verdict: Option<Verdict>,
    pub weibull: Option<WeibullFit>,
    pub weibull_shift: f64,
    /// Values left out of the Weibull fit because the shift made them non-positive.
    pub weibull_excluded: usize,
    pub histogram: Histogram,
    pub qq_pairs: Vec<(f64, f64)>,
    pub loglinear: Option<LogLinearFit>,
    pub tail_point: Option<f64>,
    pub mean_log: Option<f64>,
    /// Why optional parts are missing.
    pub notes: Vec<String>,
}

impl DistributionSummary {
    pub fn compute(values: &[f64], opts: &SummaryOptions) -> Result<DistributionSummary> {
        if values.is_empty() {
            return Err(Error::DegenerateSample("empty sample".into()));
        }
        check_finite(values)?;
        let mut notes = Vec::new();
        let bins = opts.bins.unwrap_or_else(|| sturges_bins(values.len()));
        let histogram = Histogram::new(values, bins)?;
        let mean = values.iter().sum::<f64>() / values.len() as f64;

        let skewness = match skewness(values) {
            Ok(s) => Some(s),
            Err(e) => {
                notes.push(format!("skewness: {e}"));
                None
            }
        };

        let weibull_shift = if opts.shift { 1.0 } else { 0.0 };
        let fit_values: Vec<f64> = values.iter().map(|v| v - weibull_shift).filter(|v| *v > 0.0).collect();
        let weibull_excluded = values.len() - fit_values.len();
        let weibull = match weibull_mle(&fit_values) {
            Ok(w) => Some(w),
            Err(e) => {
                notes.push(format!("weibull: {e}"));
                None
            }
        };
        let qq_pairs = weibull
            .map(|w| qq_pairs(&fit_values, w.shape, w.scale))
            .unwrap_or_default();

        let loglinear = match log_histogram_fit(values, bins) {
            Ok(fit) => Some(fit),
            Err(e) => {
                notes.push(format!("log-linear fit: {e}"));
                None
            }
        };
        let positive = values.iter().all(|v| *v > 0.0);
        let mean_log = positive.then(|| values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64);

        Ok(DistributionSummary {
            sample_size: values.len(),
            mean,
            skewness,
            verdict: skewness.map(classify),
            weibull,
            weibull_shift,
            weibull_excluded,
            histogram,
            qq_pairs,
            loglinear,
            tail_point: mean_log.map(f64::exp),
            mean_log,
            notes,
        })
    }

    pub fn write_qq_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theoretical", "empirical"]).map_err(csv_error)?;
        for (t, e) in &self.qq_pairs {
            w.write_record([t.to_string(), e.to_string()]).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Histogram bins with `ln(count)`, whether the bin is in the log-linear
    /// fit window, and the fitted line (blank when there is no fit).
    pub fn write_loglinear_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "bin_left",
            "bin_right",
            "center",
            "count",
            "ln_count",
            "in_window",
            "fitted",
        ])
        .map_err(csv_error)?;
        let h = &self.histogram;
        for (b, center) in h.centers().into_iter().enumerate() {
            let count = h.counts[b];
            let ln_count = if count > 0 {
                (count as f64).ln().to_string()
            } else {
                String::new()
            };
            let (in_window, fitted) = match &self.loglinear {
                Some(f) => (
                    b >= f.first_bin && count > 0 && center <= f.tail_point,
                    (f.intercept + f.slope * center).to_string(),
                ),
                None => (false, String::new()),
            };
            w.write_record([
                h.edges[b].to_string(),
                h.edges[b + 1].to_string(),
                center.to_string(),
                count.to_string(),
                ln_count,
                in_window.to_string(),
                fitted,
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

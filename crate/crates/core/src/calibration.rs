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

//! Calibration of the Barabasi-Albert attachment parameter from the average
//! normalized ksi coefficient.
//!
//! For BA graphs grown from a star, the average normalized ksi depends on the
//! ratio `m/n` only and grows monotonically with it. A curve is sampled on an
//! `m` grid, fitted with a non-negative sum of five beta CDFs, and inverted
//! by bisection to turn an observed coefficient into an `m` for a network of
//! any size.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::checked_beta_reg;

use crate::centrality::average_normalized_ksi;
use crate::er_theory::Estimate;
use crate::error::{Error, Result};
use crate::generators::{barabasi_albert, derive_seed};

pub const DEFAULT_REPS: usize = 20;
pub const DEFAULT_GRID_POINTS: usize = 15;
pub const BETA_COMPONENTS: usize = 5;
pub const INVERSION_TOLERANCE: f64 = 1e-10;

/// Sampled mean can drop by at most this many combined standard errors
/// between consecutive grid points.
pub const MONOTONE_SLACK_SE: f64 = 2.0;

/// Mean and standard error of the average normalized ksi over `reps`
/// independent BA(n, m) graphs.
pub fn sample_xi_hat(n: usize, m: usize, reps: usize, seed: u64) -> Result<Estimate> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    let values: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| barabasi_albert(n, m, rep_seed(seed, m, r)).map(|g| average_normalized_ksi(&g)))
        .collect::<Result<_>>()?;
    Ok(Estimate::from_samples(&values))
}

fn rep_seed(seed: u64, m: usize, rep: u64) -> u64 {
    derive_seed(derive_seed(seed, m as u64), rep)
}

/// `points` log-spaced values of `m` from 1 to `n - 1`.
///
/// Values that would round onto the same integer are pushed apart, so the
/// grid has `min(points, n - 1)` distinct entries.
pub fn default_m_grid(n: usize, points: usize) -> Vec<usize> {
    if n < 2 || points == 0 {
        return Vec::new();
    }
    let top = n - 1;
    if points >= top {
        return (1..=top).collect();
    }
    let mut grid: Vec<usize> = (0..points)
        .map(|k| {
            let t = if points > 1 {
                k as f64 / (points - 1) as f64
            } else {
                1.0
            };
            ((top as f64).ln() * t).exp().round() as usize
        })
        .collect();
    for k in 1..points {
        grid[k] = grid[k].max(grid[k - 1] + 1);
    }
    grid[points - 1] = top;
    for k in (0..points - 1).rev() {
        grid[k] = grid[k].min(grid[k + 1] - 1);
    }
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub m: usize,
    pub m_over_n: f64,
    pub xi_hat_mean: f64,
    pub xi_hat_stderr: f64,
    pub n_used: usize,
    pub reps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaComponent {
    pub weight: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `base + sum_k weight_k * I_x(alpha_k, beta_k)` with non-negative weights;
/// non-decreasing on `[0, 1]` by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaCdfSum {
    pub base: f64,
    pub components: Vec<BetaComponent>,
}

// keeps the incomplete beta function in its well-conditioned range
const LOG_SHAPE_BOUND: f64 = 7.0;

impl BetaCdfSum {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        self.base
            + self
                .components
                .iter()
                .map(|c| c.weight * checked_beta_reg(c.alpha, c.beta, x).unwrap_or(f64::NAN))
                .sum::<f64>()
    }

    /// Total rise `f(1) - f(0)`.
    pub fn range(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    fn from_params(theta: &[f64]) -> BetaCdfSum {
        let components = theta[1..]
            .chunks(3)
            .map(|c| BetaComponent {
                weight: c[0].exp(),
                alpha: c[1].clamp(-LOG_SHAPE_BOUND, LOG_SHAPE_BOUND).exp(),
                beta: c[2].clamp(-LOG_SHAPE_BOUND, LOG_SHAPE_BOUND).exp(),
            })
            .collect();
        BetaCdfSum {
            base: theta[0],
            components,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    pub function: BetaCdfSum,
    pub rmse: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn sum_squares(xs: &[f64], ys: &[f64], theta: &[f64]) -> f64 {
    let f = BetaCdfSum::from_params(theta);
    xs.iter().zip(ys).map(|(&x, &y)| (f.eval(x) - y).powi(2)).sum()
}

fn residuals(xs: &[f64], ys: &[f64], theta: &[f64]) -> DVector<f64> {
    let f = BetaCdfSum::from_params(theta);
    DVector::from_iterator(xs.len(), xs.iter().zip(ys).map(|(&x, &y)| f.eval(x) - y))
}

/// Levenberg-Marquardt on log-parameterized weights and shapes.
fn levenberg_marquardt(xs: &[f64], ys: &[f64], start: Vec<f64>, max_iter: usize) -> (Vec<f64>, f64, bool, usize) {
    let p = start.len();
    let mut theta = start;
    let mut r = residuals(xs, ys, &theta);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    for iteration in 1..=max_iter {
        let mut jac = DMatrix::<f64>::zeros(xs.len(), p);
        for k in 0..p {
            let h = 1e-7 * theta[k].abs().max(1.0);
            let mut shifted = theta.clone();
            shifted[k] += h;
            let rk = residuals(xs, ys, &shifted);
            jac.set_column(k, &((rk - &r) / h));
        }
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        if grad.amax() < 1e-15 || cost < 1e-24 {
            return (theta, cost, true, iteration);
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for d in 0..p {
                lhs[(d, d)] += mu * (jtj[(d, d)] + 1e-9);
            }
            let Some(step) = lhs.cholesky().map(|c| c.solve(&(-&grad))) else {
                mu *= 4.0;
                continue;
            };
            let candidate: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
            let candidate_cost = sum_squares(xs, ys, &candidate);
            if candidate_cost.is_finite() && candidate_cost < cost {
                let relative = (cost - candidate_cost) / cost.max(1e-300);
                theta = candidate;
                r = residuals(xs, ys, &theta);
                cost = candidate_cost;
                mu = (mu / 3.0).max(1e-12);
                improved = true;
                if relative < 1e-12 {
                    return (theta, cost, true, iteration);
                }
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            // no descent direction left at any damping
            return (theta, cost, true, iteration);
        }
    }
    (theta, cost, false, max_iter)
}

/// Least-squares fit of a five-term beta-CDF sum to `(x, y)` pairs.
///
/// Several starting configurations are tried and the lowest residual kept.
pub fn fit_beta_cdf_sum(xs: &[f64], ys: &[f64]) -> Result<FitOutcome> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::InvalidParameter("fit needs matching, non-empty x and y".into()));
    }
    let (y_lo, y_hi) = (ys[0], ys[ys.len() - 1]);
    let (x_lo, x_hi) = (xs[0].max(1e-6), xs[xs.len() - 1].min(1.0 - 1e-6));
    let rise = (y_hi - y_lo).max(1e-3);
    let mut best: Option<(Vec<f64>, f64, bool, usize)> = None;
    for &concentration in &[4.0, 12.0, 40.0] {
        for &log_spaced in &[true, false] {
            let mut theta = vec![y_lo - 0.05 * rise];
            for k in 0..BETA_COMPONENTS {
                let t = (k as f64 + 0.5) / BETA_COMPONENTS as f64;
                let center = if log_spaced && x_hi > x_lo {
                    (x_lo.ln() + t * (x_hi.ln() - x_lo.ln())).exp()
                } else {
                    x_lo + t * (x_hi - x_lo)
                };
                let center = center.clamp(1e-4, 1.0 - 1e-4);
                theta.push((1.1 * rise / BETA_COMPONENTS as f64).ln());
                theta.push((center * concentration).ln());
                theta.push(((1.0 - center) * concentration).ln());
            }
            let run = levenberg_marquardt(xs, ys, theta, 3000);
            if best.as_ref().is_none_or(|b| run.1 < b.1) {
                best = Some(run);
            }
        }
    }
    let (theta, cost, converged, iterations) = best.expect("at least one start");
    Ok(FitOutcome {
        function: BetaCdfSum::from_params(&theta),
        rmse: (cost / xs.len() as f64).sqrt(),
        converged: converged && cost.is_finite(),
        iterations,
    })
}

/// Pool-adjacent-violators: the closest non-decreasing sequence in least squares.
fn isotonic(ys: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::new();
    for &y in ys {
        blocks.push((y, 1));
        while blocks.len() > 1 {
            let (b_mean, b_len) = blocks[blocks.len() - 1];
            let (a_mean, a_len) = blocks[blocks.len() - 2];
            if a_mean <= b_mean {
                break;
            }
            blocks.pop();
            let len = a_len + b_len;
            *blocks.last_mut().unwrap() = ((a_mean * a_len as f64 + b_mean * b_len as f64) / len as f64, len);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(mean, len)| std::iter::repeat_n(mean, len))
        .collect()
}

/// Non-decreasing piecewise-linear interpolant, constant beyond its knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn monotone(xs: &[f64], ys: &[f64]) -> PiecewiseLinear {
        PiecewiseLinear {
            xs: xs.to_vec(),
            ys: isotonic(ys),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[last] {
            return self.ys[last];
        }
        let hi = self.xs.partition_point(|&k| k < x);
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.ys[lo] + t * (self.ys[hi] - self.ys[lo])
    }
}

/// Leave-one-out error of linear interpolation over the interior knots.
fn interpolant_loo_rmse(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 3 {
        return None;
    }
    let errors: Vec<f64> = (1..xs.len() - 1)
        .map(|i| {
            let t = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let guess = ys[i - 1] + t * (ys[i + 1] - ys[i - 1]);
            (guess - ys[i]).powi(2)
        })
        .collect();
    Some((errors.iter().sum::<f64>() / errors.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backbone {
    BetaCdfSum,
    PiecewiseLinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCurve {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub points: Vec<CalibrationPoint>,
    pub fit: FitOutcome,
    pub interpolant: PiecewiseLinear,
    /// Leave-one-out RMSE of the interpolant, the baseline for `fit.rmse`.
    pub interpolant_loo_rmse: Option<f64>,
    /// Function used by [`CalibrationCurve::invert`].
    pub backbone: Backbone,
}

/// Samples the curve at every `m` in the grid and fits it.
pub fn build_curve(n: usize, m_grid: &[usize], reps: usize, seed: u64) -> Result<CalibrationCurve> {
    if m_grid.is_empty() {
        return Err(Error::InvalidParameter("empty m grid".into()));
    }
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("m grid must be strictly increasing".into()));
    }
    if let Some(&bad) = m_grid.iter().find(|&&m| m == 0 || m >= n) {
        return Err(Error::InvalidParameter(format!(
            "m = {bad} outside [1, n-1] for n = {n}"
        )));
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }

    let tasks: Vec<(usize, u64)> = m_grid
        .iter()
        .flat_map(|&m| (0..reps as u64).map(move |r| (m, r)))
        .collect();
    let samples: Vec<f64> = tasks
        .par_iter()
        .map(|&(m, r)| barabasi_albert(n, m, rep_seed(seed, m, r)).map(|g| average_normalized_ksi(&g)))
        .collect::<Result<_>>()?;

    let points: Vec<CalibrationPoint> = m_grid
        .iter()
        .zip(samples.chunks(reps))
        .map(|(&m, chunk)| {
            let e = Estimate::from_samples(chunk);
            CalibrationPoint {
                m,
                m_over_n: m as f64 / n as f64,
                xi_hat_mean: e.mean,
                xi_hat_stderr: e.stderr,
                n_used: n,
                reps,
            }
        })
        .collect();

    for w in points.windows(2) {
        let drop = w[0].xi_hat_mean - w[1].xi_hat_mean;
        let noise = (w[0].xi_hat_stderr.powi(2) + w[1].xi_hat_stderr.powi(2)).sqrt();
        if drop > MONOTONE_SLACK_SE * noise {
            return Err(Error::Calibration(format!(
                "mean falls from {:.6} at m={} to {:.6} at m={} (beyond {MONOTONE_SLACK_SE} standard errors)",
                w[0].xi_hat_mean, w[0].m, w[1].xi_hat_mean, w[1].m
            )));
        }
    }

    let xs: Vec<f64> = points.iter().map(|p| p.m_over_n).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.xi_hat_mean).collect();
    let fit = fit_beta_cdf_sum(&xs, &ys)?;
    let interpolant = PiecewiseLinear::monotone(&xs, &ys);
    let loo = interpolant_loo_rmse(&xs, &ys);
    let backbone = choose_backbone(&fit, &points);
    Ok(CalibrationCurve {
        n,
        reps,
        seed,
        points,
        fit,
        interpolant,
        interpolant_loo_rmse: loo,
        backbone,
    })
}

/// The beta fit drives inversion when it converged and passes within two
/// standard errors (plus a 1e-4 floor) of every sampled mean.
fn choose_backbone(fit: &FitOutcome, points: &[CalibrationPoint]) -> Backbone {
    let usable = fit.converged
        && points.iter().all(|p| {
            let r = (fit.function.eval(p.m_over_n) - p.xi_hat_mean).abs();
            r.is_finite() && r <= 2.0 * p.xi_hat_stderr + 1e-4
        });
    if usable {
        Backbone::BetaCdfSum
    } else {
        Backbone::PiecewiseLinear
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub m: usize,
    pub m_over_n: f64,
    pub n_target: usize,
    pub xi_hat: f64,
    pub backbone: Backbone,
}

impl CalibrationCurve {
    pub fn eval(&self, m_over_n: f64) -> f64 {
        match self.backbone {
            Backbone::BetaCdfSum => self.fit.function.eval(m_over_n),
            Backbone::PiecewiseLinear => self.interpolant.eval(m_over_n),
        }
    }

    /// Sampled range of the average normalized ksi.
    pub fn range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.xi_hat_mean), hi.max(p.xi_hat_mean))
            })
    }

    /// Smallest `m/n` whose curve value reaches `xi_hat`, by bisection.
    pub fn invert_ratio(&self, xi_hat: f64) -> Result<f64> {
        let (low, high) = self.range();
        if !(xi_hat >= low && xi_hat <= high) {
            return Err(Error::OutOfRange {
                target: xi_hat,
                low,
                high,
            });
        }
        let (mut a, mut b) = match self.backbone {
            Backbone::BetaCdfSum => (0.0, 1.0),
            Backbone::PiecewiseLinear => (self.points[0].m_over_n, self.points[self.points.len() - 1].m_over_n),
        };
        if self.eval(a) >= xi_hat {
            return Ok(a);
        }
        if self.eval(b) < xi_hat {
            return Ok(b);
        }
        while b - a > INVERSION_TOLERANCE {
            let mid = 0.5 * (a + b);
            if self.eval(mid) >= xi_hat {
                b = mid;
            } else {
                a = mid;
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Attachment parameter for a BA model of `n_target` nodes whose average
    /// normalized ksi is `xi_hat`. Rounds half up, clamps to `[1, n_target-1]`.
    pub fn invert(&self, xi_hat: f64, n_target: usize) -> Result<Inversion> {
        if n_target < 2 {
            return Err(Error::InvalidParameter("n_target must be at least 2".into()));
        }
        let ratio = self.invert_ratio(xi_hat)?;
        let m = ((n_target as f64 * ratio + 0.5).floor() as usize).clamp(1, n_target - 1);
        Ok(Inversion {
            m,
            m_over_n: ratio,
            n_target,
            xi_hat,
            backbone: self.backbone,
        })
    }
}

/// Largest vertical distance between two sampled curves, each point compared
/// with the other curve's interpolant inside its sampled `m/n` span.
pub fn max_vertical_gap(a: &CalibrationCurve, b: &CalibrationCurve) -> f64 {
    let one_way = |from: &CalibrationCurve, to: &CalibrationCurve| -> f64 {
        let lo = to.points[0].m_over_n;
        let hi = to.points[to.points.len() - 1].m_over_n;
        from.points
            .iter()
            .filter(|p| p.m_over_n >= lo && p.m_over_n <= hi)
            .map(|p| (p.xi_hat_mean - to.interpolant.eval(p.m_over_n)).abs())
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_log_spaced_and_unique() {
        let g = default_m_grid(500, 15);
        assert_eq!(g[0], 1);
        assert_eq!(*g.last().unwrap(), 499);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.len(), 15);
        assert_eq!(default_m_grid(5, 15), vec![1, 2, 3, 4]);
        assert_eq!(default_m_grid(200, 15).len(), 15);
    }

    #[test]
    fn isotonic_pools_violators() {
        assert_eq!(isotonic(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(isotonic(&[1.0, 2.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn piecewise_linear_eval() {
        let f = PiecewiseLinear::monotone(&[0.0, 1.0, 3.0], &[0.0, 1.0, 2.0]);
        assert_eq!(f.eval(-1.0), 0.0);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(2.0), 1.5);
        assert_eq!(f.eval(9.0), 2.0);
    }

    #[test]
    fn beta_fit_recovers_a_beta_mixture() {
        let truth = BetaCdfSum {
            base: 0.1,
            components: vec![
                BetaComponent {
                    weight: 0.5,
                    alpha: 2.0,
                    beta: 8.0,
                },
                BetaComponent {
                    weight: 0.3,
                    alpha: 5.0,
                    beta: 2.0,
                },
            ],
        };
        let xs: Vec<f64> = (1..30).map(|i| i as f64 / 30.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| truth.eval(x)).collect();
        let fit = fit_beta_cdf_sum(&xs, &ys).unwrap();
        assert!(fit.rmse < 1e-3, "{fit:?}");
        // monotone on a fine grid
        let grid: Vec<f64> = (0..=10_000).map(|i| fit.function.eval(i as f64 / 10_000.0)).collect();
        assert!(grid.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn star_limit_samples_exactly_one() {
        let e = sample_xi_hat(9, 8, 5, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn dense_ba_stays_in_unit_interval() {
        let e = sample_xi_hat(200, 100, 20, 2).unwrap();
        assert!(e.mean > 0.0 && e.mean <= 1.0, "{e:?}");
    }

    #[test]
    fn larger_m_means_larger_coefficient() {
        let small = sample_xi_hat(500, 5, 20, 3).unwrap();
        let large = sample_xi_hat(500, 50, 20, 3).unwrap();
        assert!(large.mean > small.mean, "{small:?} vs {large:?}");
    }

    #[test]
    fn single_point_curve() {
        let curve = build_curve(60, &[59], 3, 4).unwrap();
        assert_eq!(curve.points[0].xi_hat_mean, 1.0);
        let inv = curve.invert(1.0, 60).unwrap();
        assert_eq!(inv.m, 59);
    }

    #[test]
    fn build_rejects_bad_grids() {
        assert!(build_curve(50, &[], 3, 0).is_err());
        assert!(build_curve(50, &[3, 3], 3, 0).is_err());
        assert!(build_curve(50, &[5, 2], 3, 0).is_err());
        assert!(build_curve(50, &[50], 3, 0).is_err());
        assert!(build_curve(50, &[5], 0, 0).is_err());
    }

    #[test]
    fn small_curve_roundtrip_and_range() {
        let n = 120;
        let grid = default_m_grid(n, 8);
        let curve = build_curve(n, &grid, 6, 9).unwrap();
        for p in &curve.points {
            let inv = curve.invert(p.xi_hat_mean, n).unwrap();
            let tolerance = 1usize.max((0.05 * p.m as f64) as usize);
            assert!(
                inv.m.abs_diff(p.m) <= tolerance,
                "m={} -> {inv:?} ({:?})",
                p.m,
                curve.backbone
            );
        }
        let (low, high) = curve.range();
        assert!(matches!(curve.invert(low - 1e-3, n), Err(Error::OutOfRange { .. })));
        assert!(matches!(curve.invert(high + 1e-3, n), Err(Error::OutOfRange { .. })));
        assert_eq!(high, 1.0);
        let top = curve.invert(1.0, n).unwrap();
        assert!(top.m >= n - 2, "{top:?}");
    }

    #[test]
    fn curve_is_deterministic() {
        let a = build_curve(80, &[1, 4, 16, 79], 4, 11).unwrap();
        let b = build_curve(80, &[1, 4, 16, 79], 4, 11).unwrap();
        assert_eq!(a, b);
    }
}

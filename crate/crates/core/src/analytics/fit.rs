//! Power-law exponent estimation.
//!
//! Two routes: ordinary least squares on the log-log degree pmf (the visual
//! "straight line" check made quantitative) and a discrete maximum-likelihood
//! estimate with a Kolmogorov-Smirnov goodness statistic as a cross-check.

use serde::{Deserialize, Serialize};

use super::DegreeHistogram;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    LoglogLsq,
    DiscreteMle,
}

/// Outcome of a power-law fit.
///
/// For the LSQ route `exponent` is the fitted slope (negative for decaying
/// distributions) and `intercept`/`r_squared` are set. For the MLE route
/// `exponent` is the estimated alpha (positive) and `ks_distance` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub method: FitMethod,
    pub exponent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intercept: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_distance: Option<f64>,
    /// `[lo, hi]` degree range the fit used.
    pub range: (u32, u32),
    /// Points (LSQ) or samples (MLE) behind the fit.
    pub points: usize,
}

/// Least squares of `log10 p` on `log10 d` over the points with `d` inside
/// `range` and `p > 0`. Needs at least three distinct degrees.
pub fn loglog_fit_points(points: &[(u32, f64)], range: (u32, u32)) -> Result<FitResult> {
    let (lo, hi) = range;
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(d, p)| d >= lo.max(1) && d <= hi && p > 0.0)
        .map(|&(d, p)| (f64::from(d).log10(), p.log10()))
        .collect();
    if kept.len() < 3 {
        return Err(Error::InsufficientSupport {
            needed: 3,
            got: kept.len(),
        });
    }
    let n = kept.len() as f64;
    let mean_x = kept.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = kept.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = kept
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = kept
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = kept.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res.abs() < 1e-30 {
        1.0
    } else {
        0.0
    };
    Ok(FitResult {
        method: FitMethod::LoglogLsq,
        exponent: slope,
        intercept: Some(intercept),
        r_squared: Some(r_squared),
        ks_distance: None,
        range,
        points: kept.len(),
    })
}

/// LSQ fit of a histogram's pmf; see [`loglog_fit_points`].
pub fn loglog_lsq_fit(hist: &DegreeHistogram, range: (u32, u32)) -> Result<FitResult> {
    loglog_fit_points(&hist.pmf_points(), range)
}

/// Continuous-approximation MLE for the exponent of a discrete power law:
/// `alpha = 1 + n / sum(ln(x_i / (x_min - 0.5)))` over samples `>= x_min`,
/// with the Kolmogorov-Smirnov distance between the empirical and fitted
/// complementary CDFs.
pub fn mle_powerlaw_fit(samples: &[u32], x_min: u32) -> Result<FitResult> {
    let x_min = x_min.max(1);
    let mut kept: Vec<u32> = samples.iter().copied().filter(|&x| x >= x_min).collect();
    if kept.len() < 10 {
        return Err(Error::InsufficientSupport {
            needed: 10,
            got: kept.len(),
        });
    }
    kept.sort_unstable();
    if kept[0] == kept[kept.len() - 1] {
        return Err(Error::DegenerateSample);
    }
    let n = kept.len() as f64;
    let shift = f64::from(x_min) - 0.5;
    let log_sum: f64 = kept.iter().map(|&x| (f64::from(x) / shift).ln()).sum();
    let alpha = 1.0 + n / log_sum;

    // KS distance at each observed value, using the matching continuous
    // approximation ccdf ((x - 0.5) / (x_min - 0.5))^(1 - alpha).
    let mut ks: f64 = 0.0;
    let mut idx = 0usize;
    while idx < kept.len() {
        let x = kept[idx];
        let at_least_x = (kept.len() - idx) as f64 / n;
        let fitted = ((f64::from(x) - 0.5) / shift).powf(1.0 - alpha);
        ks = ks.max((at_least_x - fitted).abs());
        while idx < kept.len() && kept[idx] == x {
            idx += 1;
        }
    }
    Ok(FitResult {
        method: FitMethod::DiscreteMle,
        exponent: alpha,
        intercept: None,
        r_squared: None,
        ks_distance: Some(ks),
        range: (x_min, kept[kept.len() - 1]),
        points: kept.len(),
    })
}

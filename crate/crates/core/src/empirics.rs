//! Empirical moments, tails and rearrangements for finite samples.
//!
//! A sample with weights summing to 1 is an exact discrete distribution on
//! a probability space — equivalently a step function on `(0, 1]` whose
//! step widths are the weights. Everything here is computed exactly for
//! such step data: weighted `L_p` norms, moment profiles, Grand Lebesgue
//! norms, natural functions, tail functions, decreasing rearrangements and
//! the tail-moment identity.

use serde::{Deserialize, Serialize};

use crate::error::{GlsError, Result};
use crate::psi::GeneratingFunction;

/// A weighted finite sample treated as an exact discrete distribution.
/// Weights are positive and sum to 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl EmpiricalSample {
    /// Sample with uniform weights `1/n`.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(GlsError::InvalidSample("sample must contain at least one value".into()));
        }
        let w = 1.0 / n as f64;
        Self::weighted(values, vec![w; n])
    }

    /// Sample with explicit probability weights (must sum to 1 within
    /// `1e-12`); see [`EmpiricalSample::weighted_normalized`] for raw
    /// weights.
    pub fn weighted(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GlsError::InvalidSample("sample must contain at least one value".into()));
        }
        if values.len() != weights.len() {
            return Err(GlsError::InvalidSample("values and weights differ in length".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GlsError::InvalidSample("values must be finite".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(GlsError::InvalidSample("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(GlsError::InvalidSample(format!("weights sum to {total}, expected 1")));
        }
        Ok(EmpiricalSample { values, weights })
    }

    /// Sample from raw positive weights, rescaled to sum to 1.
    pub fn weighted_normalized(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(GlsError::InvalidSample("weights must have a positive finite sum".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Self::weighted(values, weights)
    }

    /// Parse one value per line, with an optional second comma-separated
    /// weight column. Raw weights are rescaled to sum to 1. Lines that are
    /// empty or start with `#` are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut weights = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let v: f64 = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|_| GlsError::Parse(format!("line {}: bad value `{line}`", i + 1)))?;
            values.push(v);
            if let Some(wtext) = parts.next() {
                let w: f64 = wtext
                    .parse()
                    .map_err(|_| GlsError::Parse(format!("line {}: bad weight `{wtext}`", i + 1)))?;
                weights.push(w);
            }
            if parts.next().is_some() {
                return Err(GlsError::Parse(format!("line {}: expected at most 2 columns", i + 1)));
            }
        }
        if weights.is_empty() {
            Self::uniform(values)
        } else if weights.len() == values.len() {
            Self::weighted_normalized(values, weights)
        } else {
            Err(GlsError::Parse("weight column must be present on every line or none".into()))
        }
    }

    /// Parse a JSON array of numbers; weights are uniform.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let values: Vec<f64> =
            serde_json::from_str(text).map_err(|e| GlsError::Parse(e.to_string()))?;
        Self::uniform(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Weighted `L_p` norm `(sum_i w_i |x_i|^p)^(1/p)`, `p >= 1`.
    ///
    /// Computed against the scaled values `|x|/max|x|`, which keeps the
    /// power sums inside f64 range for large `p`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(GlsError::ParameterOutOfRange {
                name: "p",
                constraint: "L_p norms require p >= 1".into(),
            });
        }
        let max = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max == 0.0 {
            return Ok(0.0);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| w * (v.abs() / max).powf(p))
            .sum();
        Ok(max * sum.powf(1.0 / p))
    }

    /// Tabulate `p -> |f|_p` on a grid.
    pub fn moment_profile(&self, grid: &[f64]) -> Result<MomentProfile> {
        let norms = grid.iter().map(|&p| self.lp_norm(p)).collect::<Result<Vec<_>>>()?;
        MomentProfile::new(grid.to_vec(), norms)
    }

    /// Tail function `T_f(y) = max(mu(f >= y), mu(f <= -y))`, `y >= 0`.
    /// Ties at `y` are included on both sides.
    pub fn tail(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(GlsError::ParameterOutOfRange {
                name: "y",
                constraint: "tail function requires y >= 0".into(),
            });
        }
        let mut upper = 0.0;
        let mut lower = 0.0;
        for (v, w) in self.values.iter().zip(&self.weights) {
            if *v >= y {
                upper += w;
            }
            if *v <= -y {
                lower += w;
            }
        }
        Ok(upper.max(lower).min(1.0))
    }

    /// Pointwise difference of two samples on the same probability grid
    /// (same length, same weights).
    pub fn pointwise_difference(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(GlsError::InvalidSample("samples differ in length".into()));
        }
        if self
            .weights
            .iter()
            .zip(&other.weights)
            .any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(GlsError::InvalidSample("samples carry different weights".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(EmpiricalSample { values, weights: self.weights.clone() })
    }
}

/// Tabulated `p -> |f|_p` on an increasing grid. On a probability space
/// the map is nondecreasing in `p` (Lyapunov), which the constructor
/// checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentProfile {
    grid: Vec<f64>,
    norms: Vec<f64>,
}

impl MomentProfile {
    pub fn new(grid: Vec<f64>, norms: Vec<f64>) -> Result<Self> {
        if grid.is_empty() || grid.len() != norms.len() {
            return Err(GlsError::InvalidSample(
                "profile grid and norms must be nonempty and equal in length".into(),
            ));
        }
        if !(grid[0] >= 1.0 && grid.windows(2).all(|w| w[0] < w[1])) {
            return Err(GlsError::InvalidSample(
                "profile grid must be strictly increasing with nodes >= 1".into(),
            ));
        }
        if norms.iter().any(|n| !(*n >= 0.0) || !n.is_finite()) {
            return Err(GlsError::InvalidSample("profile norms must be finite and >= 0".into()));
        }
        if norms.windows(2).any(|w| w[1] < w[0] * (1.0 - 1e-9)) {
            return Err(GlsError::InvalidSample(
                "profile norms must be nondecreasing in p (Lyapunov)".into(),
            ));
        }
        Ok(MomentProfile { grid, norms })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// Rescale every norm by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(GlsError::ParameterOutOfRange {
                name: "c",
                constraint: "scale must be positive and finite".into(),
            });
        }
        Ok(MomentProfile {
            grid: self.grid.clone(),
            norms: self.norms.iter().map(|n| n * c).collect(),
        })
    }
}

/// Result of a Grand Lebesgue norm evaluation: the grid supremum of
/// `|f|_p / psi(p)`, the node attaining it, and whether it sat at the last
/// grid node (signalling possible truncation bias for unbounded supports).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlsNorm {
    pub value: f64,
    pub attained_p: f64,
    pub at_grid_edge: bool,
}

/// Grid lower bound of `sup_p |f|_p / psi(p)`; grid density controls the
/// gap to the true supremum.
pub fn gls_norm(profile: &MomentProfile, psi: &GeneratingFunction) -> Result<GlsNorm> {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, (&p, &norm)) in profile.grid.iter().zip(&profile.norms).enumerate() {
        let ratio = norm / psi.evaluate(p)?;
        if ratio > best.1 {
            best = (i, ratio);
        }
    }
    Ok(GlsNorm {
        value: best.1.max(0.0),
        attained_p: profile.grid[best.0],
        at_grid_edge: best.0 + 1 == profile.grid.len(),
    })
}

/// Natural function of a family of moment profiles: the pointwise
/// supremum `p -> sup_i |f_i|_p`, returned as a normalized tabulated
/// generating function together with the divisor that was removed.
///
/// Against the unnormalized envelope every member profile has Grand
/// Lebesgue norm at most 1, with equality attained along the envelope.
pub fn natural_function(profiles: &[MomentProfile]) -> Result<(GeneratingFunction, f64)> {
    let first = profiles
        .first()
        .ok_or_else(|| GlsError::InvalidSample("need at least one profile".into()))?;
    for p in profiles {
        if p.grid.len() != first.grid.len()
            || p.grid.iter().zip(&first.grid).any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(GlsError::IncompatibleGrids);
        }
    }
    let mut envelope = first.norms.clone();
    for p in &profiles[1..] {
        for (e, n) in envelope.iter_mut().zip(&p.norms) {
            *e = e.max(*n);
        }
    }
    if envelope.iter().any(|e| !(*e > 0.0)) {
        return Err(GlsError::InvalidFunction(
            "the envelope vanishes somewhere; it cannot generate a space".into(),
        ));
    }
    let inf = envelope.iter().cloned().fold(f64::INFINITY, f64::min);
    let normalized = envelope.iter().map(|e| e / inf).collect();
    Ok((GeneratingFunction::tabulated(first.grid.clone(), normalized)?, inf))
}

/// Decreasing rearrangement of a sample viewed as a step function on
/// `(0, 1]`: `f°` is the nonincreasing sort of `|values|` spread over step
/// widths equal to the weights, and `f°°(t) = (1/t) * int_0^t f°` is its
/// running average, computed by exact piecewise integration.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementPair {
    /// Cumulative step boundaries `0 < c_1 < ... < c_k = 1`.
    breakpoints: Vec<f64>,
    /// Step values, nonincreasing.
    values: Vec<f64>,
    /// Cumulative integrals of `f°` up to each breakpoint.
    integrals: Vec<f64>,
}

impl RearrangementPair {
    fn block(&self, t: f64) -> Result<usize> {
        if !(t > 0.0 && t <= 1.0 + 1e-12) {
            return Err(GlsError::ParameterOutOfRange {
                name: "t",
                constraint: "rearrangements are defined on (0, 1]".into(),
            });
        }
        Ok(self.breakpoints.partition_point(|c| *c < t).min(self.values.len() - 1))
    }

    /// `f°(t)`, `t in (0, 1]`; undefined at `t = 0` (the essential sup).
    pub fn decreasing(&self, t: f64) -> Result<f64> {
        Ok(self.values[self.block(t)?])
    }

    /// `f°°(t) = (1/t) * int_0^t f°(s) ds`, `t in (0, 1]`.
    pub fn running_average(&self, t: f64) -> Result<f64> {
        let k = self.block(t)?;
        let below = if k == 0 { 0.0 } else { self.integrals[k - 1] };
        let left = if k == 0 { 0.0 } else { self.breakpoints[k - 1] };
        Ok((below + self.values[k] * (t - left)) / t)
    }

    /// `|f°|_p`, which equals `|f|_p` by equimeasurability.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        let widths: Vec<f64> = self
            .breakpoints
            .iter()
            .scan(0.0, |prev, c| {
                let w = c - *prev;
                *prev = *c;
                Some(w)
            })
            .collect();
        EmpiricalSample::weighted_normalized(self.values.clone(), widths)?.lp_norm(p)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn step_values(&self) -> &[f64] {
        &self.values
    }
}

/// Compute the decreasing rearrangement pair `(f°, f°°)` of a sample.
pub fn rearrange(sample: &EmpiricalSample) -> RearrangementPair {
    let mut order: Vec<usize> = (0..sample.len()).collect();
    order.sort_by(|&i, &j| {
        sample.values[j]
            .abs()
            .partial_cmp(&sample.values[i].abs())
            .unwrap()
            .then(i.cmp(&j))
    });
    let mut breakpoints = Vec::with_capacity(order.len());
    let mut values = Vec::with_capacity(order.len());
    let mut integrals = Vec::with_capacity(order.len());
    let mut cum = 0.0;
    let mut int = 0.0;
    for &i in &order {
        let w = sample.weights[i];
        let v = sample.values[i].abs();
        cum += w;
        int += v * w;
        breakpoints.push(cum);
        values.push(v);
        integrals.push(int);
    }
    *breakpoints.last_mut().unwrap() = 1.0;
    RearrangementPair { breakpoints, values, integrals }
}

/// Relative difference between `|f|_p^p` and `p * int_0^inf y^(p-1) *
/// mu(|f| >= y) dy`, evaluated by exact piecewise power integration of the
/// step tail. For finite samples the two sides agree to machine precision.
///
/// Note the identity holds for the survival function of `|f|`; the
/// two-sided tail `max(mu(f >= y), mu(f <= -y))` of
/// [`EmpiricalSample::tail`] undercounts when both signs carry mass.
pub fn tail_moment_identity_residual(sample: &EmpiricalSample, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(GlsError::ParameterOutOfRange {
            name: "p",
            constraint: "the identity is stated for p >= 1".into(),
        });
    }
    let lhs: f64 = sample
        .values
        .iter()
        .zip(&sample.weights)
        .map(|(v, w)| w * v.abs().powf(p))
        .sum();

    // distinct positive levels with survival masses mu(|f| >= level)
    let mut pairs: Vec<(f64, f64)> = sample
        .values
        .iter()
        .zip(&sample.weights)
        .filter(|(v, _)| v.abs() > 0.0)
        .map(|(v, w)| (v.abs(), *w))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut rhs = 0.0;
    let mut survival: f64 = pairs.iter().map(|(_, w)| w).sum();
    let mut prev_level = 0.0f64;
    let mut i = 0;
    while i < pairs.len() {
        let level = pairs[i].0;
        rhs += survival * (level.powf(p) - prev_level.powf(p));
        let mut mass = 0.0;
        while i < pairs.len() && pairs[i].0 == level {
            mass += pairs[i].1;
            i += 1;
        }
        survival -= mass;
        prev_level = level;
    }
    let denom = lhs.max(rhs).max(1e-300);
    Ok((lhs - rhs).abs() / denom)
}

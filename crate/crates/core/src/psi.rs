//! Generating functions `psi` for Grand Lebesgue Spaces.
//!
//! A generating function is positive and continuous on a half-open support
//! `[1, b)`, `b in (1, inf]`, and normalized so that its infimum equals 1.
//! The named families implemented here:
//!
//! * `psi_m(p) = p^(1/m)` on `[1, inf)` — exponential-moment scale; `m = 2`
//!   is the subgaussian case;
//! * `psi_m_l(p) = p^(1/m) * L(p^((m-1)^2/m))^(-1/(m-1))` — the same scale
//!   modulated by a slowly varying `L`;
//! * `degenerate(r) = 1` on `[1, r]` — recovers the ordinary `L_r` norm as
//!   an extremal Grand Lebesgue Space;
//! * `psi_b_beta(p) = ((b-p)/(b-1))^(-beta)` on `[1, b)` — bounded support
//!   with a power blow-up at `b`;
//! * `psi_b_gamma_l(p) = C * (b-p)^(-(gamma+1)/b) * L(1/(b-p))^(1/b)` —
//!   bounded support matching tails `y^-b (ln y)^gamma L(ln y)`; the
//!   constant `C` is pinned by the normalization `inf psi = 1`;
//! * tabulated functions with linear interpolation between nodes and no
//!   extrapolation.

use serde::{Deserialize, Serialize};

use crate::error::{GlsError, Result};
use crate::grid::{evaluation_grid, GridSettings};
use crate::opt::golden_min;

/// Slowly varying modulators `L` supported by the parametric families.
///
/// Only the log-power case `L(y) = ln^r(y + e)` and constants are exposed:
/// these are the shapes whose slow-variation property is known a priori,
/// so it is never tested at runtime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlowlyVarying {
    /// `L(y) = ln^r(y + e)`.
    LogPower { r: f64 },
    /// `L(y) = value`.
    Constant { value: f64 },
}

impl SlowlyVarying {
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            SlowlyVarying::LogPower { r } => (y + std::f64::consts::E).ln().powf(*r),
            SlowlyVarying::Constant { value } => *value,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SlowlyVarying::LogPower { r } if !r.is_finite() => Err(GlsError::ParameterOutOfRange {
                name: "L.r",
                constraint: "log-power exponent must be finite".into(),
            }),
            SlowlyVarying::Constant { value } if !(*value > 0.0 && value.is_finite()) => {
                Err(GlsError::ParameterOutOfRange {
                    name: "L.value",
                    constraint: "constant L must be positive and finite".into(),
                })
            }
            _ => Ok(()),
        }
    }
}

/// Family descriptor: the serializable identity of a generating function.
///
/// JSON shape (tagged by `family`):
/// `{"family":"psi_m","m":2.0}`, `{"family":"degenerate","r":2.0}`,
/// `{"family":"psi_b_beta","b":3.0,"beta":1.0}`,
/// `{"family":"psi_b_gamma_l","b":2.0,"gamma":0.0,"L":{"kind":"log_power","r":1.0}}`,
/// `{"family":"psi_m_l","m":2.0,"L":{...}}`,
/// `{"family":"tabulated","grid":[...],"values":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyDescriptor {
    PsiM { m: f64 },
    #[serde(rename = "psi_m_l")]
    PsiML {
        m: f64,
        #[serde(rename = "L")]
        l: SlowlyVarying,
    },
    PsiBGammaL {
        b: f64,
        gamma: f64,
        #[serde(rename = "L")]
        l: SlowlyVarying,
    },
    Degenerate { r: f64 },
    PsiBBeta { b: f64, beta: f64 },
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

/// A generating function: family data, support bound and a positive scale
/// multiplier. `evaluate(p) = scale * family(p)`.
///
/// Instances are immutable; every operation is pure and safe to call from
/// any number of threads.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction {
    family: FamilyDescriptor,
    b: f64,
    scale: f64,
}

fn check_param(ok: bool, name: &'static str, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(GlsError::ParameterOutOfRange { name, constraint: constraint.into() })
    }
}

impl GeneratingFunction {
    /// Build a generating function from a family descriptor.
    ///
    /// Parameters are validated (`m > 0`, `r > 1`, `b > 1`, `gamma > -1`,
    /// `beta > 0`, `m > 1` for the `L`-modulated family). The parametric
    /// families are normalized at construction: `psi_m_l` and
    /// `psi_b_gamma_l` carry an internal scale that pins the infimum to 1
    /// (the other named families already have infimum 1 at `p = 1`).
    /// Tabulated functions are kept verbatim; call [`normalize`] to rescale
    /// them.
    ///
    /// [`normalize`]: GeneratingFunction::normalize
    pub fn make(family: FamilyDescriptor) -> Result<Self> {
        match &family {
            FamilyDescriptor::PsiM { m } => {
                check_param(*m > 0.0 && m.is_finite(), "m", "requires m > 0")?;
                Ok(Self { family, b: f64::INFINITY, scale: 1.0 })
            }
            FamilyDescriptor::PsiML { m, l } => {
                check_param(*m > 1.0 && m.is_finite(), "m", "the L-modulated family requires m > 1")?;
                l.validate()?;
                let mut f = Self { family, b: f64::INFINITY, scale: 1.0 };
                f.scale = 1.0 / f.grid_inf(&GridSettings::default()).1;
                Ok(f)
            }
            FamilyDescriptor::PsiBGammaL { b, gamma, l } => {
                check_param(*b > 1.0 && b.is_finite(), "b", "requires b > 1")?;
                check_param(*gamma > -1.0 && gamma.is_finite(), "gamma", "requires gamma > -1")?;
                l.validate()?;
                let bb = *b;
                let mut f = Self { family, b: bb, scale: 1.0 };
                f.scale = 1.0 / f.grid_inf(&GridSettings::default()).1;
                Ok(f)
            }
            FamilyDescriptor::Degenerate { r } => {
                check_param(*r > 1.0 && r.is_finite(), "r", "requires r > 1")?;
                Ok(Self { b: *r, family, scale: 1.0 })
            }
            FamilyDescriptor::PsiBBeta { b, beta } => {
                check_param(*b > 1.0 && b.is_finite(), "b", "requires b > 1")?;
                check_param(*beta > 0.0 && beta.is_finite(), "beta", "requires beta > 0")?;
                Ok(Self { b: *b, family, scale: 1.0 })
            }
            FamilyDescriptor::Tabulated { grid, values } => {
                check_param(grid.len() >= 2, "grid", "needs at least two nodes")?;
                check_param(grid.len() == values.len(), "values", "must match the grid length")?;
                check_param(
                    grid.windows(2).all(|w| w[0] < w[1]) && grid[0] >= 1.0,
                    "grid",
                    "must be strictly increasing and start at p >= 1",
                )?;
                check_param(
                    values.iter().all(|v| *v > 0.0 && v.is_finite()),
                    "values",
                    "must be positive and finite",
                )?;
                Ok(Self { b: *grid.last().unwrap(), family, scale: 1.0 })
            }
        }
    }

    pub fn psi_m(m: f64) -> Result<Self> {
        Self::make(FamilyDescriptor::PsiM { m })
    }

    pub fn psi_m_l(m: f64, l: SlowlyVarying) -> Result<Self> {
        Self::make(FamilyDescriptor::PsiML { m, l })
    }

    pub fn psi_b_gamma_l(b: f64, gamma: f64, l: SlowlyVarying) -> Result<Self> {
        Self::make(FamilyDescriptor::PsiBGammaL { b, gamma, l })
    }

    pub fn degenerate(r: f64) -> Result<Self> {
        Self::make(FamilyDescriptor::Degenerate { r })
    }

    pub fn psi_b_beta(b: f64, beta: f64) -> Result<Self> {
        Self::make(FamilyDescriptor::PsiBBeta { b, beta })
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::make(FamilyDescriptor::Tabulated { grid, values })
    }

    /// Multiply the function by a positive constant (leaves the family
    /// data untouched; only the scale changes).
    pub fn scaled(mut self, c: f64) -> Result<Self> {
        check_param(c > 0.0 && c.is_finite(), "scale", "requires a positive finite factor")?;
        self.scale *= c;
        Ok(self)
    }

    pub fn family(&self) -> &FamilyDescriptor {
        &self.family
    }

    /// Support bound `b`; `+inf` for the unbounded families.
    pub fn support_bound(&self) -> f64 {
        self.b
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Left end of the evaluable domain (1 for every parametric family;
    /// the first grid node for tabulated data).
    pub fn domain_start(&self) -> f64 {
        match &self.family {
            FamilyDescriptor::Tabulated { grid, .. } => grid[0],
            _ => 1.0,
        }
    }

    /// True when the function stays finite at `p = b` (degenerate and
    /// tabulated families), so the support is the closed interval `[1, b]`.
    fn closed_at_b(&self) -> bool {
        matches!(
            self.family,
            FamilyDescriptor::Degenerate { .. } | FamilyDescriptor::Tabulated { .. }
        )
    }

    fn in_domain(&self, p: f64) -> bool {
        if !(p.is_finite() && p >= self.domain_start()) {
            return false;
        }
        if self.closed_at_b() {
            p <= self.b
        } else {
            p < self.b
        }
    }

    /// Evaluate at `p`. Errors outside the support: `[1, b)` for the
    /// families diverging at `b`, `[1, b]` for the degenerate family and
    /// for tabulated data (which never extrapolate).
    pub fn evaluate(&self, p: f64) -> Result<f64> {
        if !self.in_domain(p) {
            return Err(GlsError::OutOfSupport { p, b: self.b });
        }
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: f64) -> f64 {
        self.scale * self.raw(p)
    }

    fn raw(&self, p: f64) -> f64 {
        match &self.family {
            FamilyDescriptor::PsiM { m } => p.powf(1.0 / m),
            FamilyDescriptor::PsiML { m, l } => {
                let arg = p.powf((m - 1.0) * (m - 1.0) / m);
                p.powf(1.0 / m) * l.eval(arg).powf(-1.0 / (m - 1.0))
            }
            FamilyDescriptor::PsiBGammaL { b, gamma, l } => {
                let gap = b - p;
                gap.powf(-(gamma + 1.0) / b) * l.eval(1.0 / gap).powf(1.0 / b)
            }
            FamilyDescriptor::Degenerate { .. } => 1.0,
            FamilyDescriptor::PsiBBeta { b, beta } => ((b - p) / (b - 1.0)).powf(-beta),
            FamilyDescriptor::Tabulated { grid, values } => {
                let k = grid.partition_point(|g| *g <= p).min(grid.len() - 1);
                if k == 0 {
                    return values[0];
                }
                let (g0, g1) = (grid[k - 1], grid[k]);
                let t = (p - g0) / (g1 - g0);
                values[k - 1] + t * (values[k] - values[k - 1])
            }
        }
    }

    /// `v(p) = p * ln(psi(p))`; zero wherever `psi(p) = 1`.
    pub fn v_function(&self, p: f64) -> Result<f64> {
        Ok(p * self.evaluate(p)?.ln())
    }

    /// Grid infimum of the function over `[domain_start, min(b, p_max)]`,
    /// sharpened by a golden-section pass around the best node.
    /// Returns `(arg_inf, inf)`.
    pub(crate) fn grid_inf(&self, settings: &GridSettings) -> (f64, f64) {
        let grid = self.domain_grid(settings);
        let mut best = (grid[0], self.eval_unchecked(grid[0]));
        for &p in &grid {
            let v = self.eval_unchecked(p);
            if v < best.1 {
                best = (p, v);
            }
        }
        let i = grid.partition_point(|g| *g < best.0);
        let lo = if i == 0 { grid[0] } else { grid[i - 1] };
        let hi = if i + 1 >= grid.len() { *grid.last().unwrap() } else { grid[i + 1] };
        let (x, v) = golden_min(|p| self.eval_unchecked(p), lo, hi, 1e-12, 120);
        if v < best.1 {
            (x, v)
        } else {
            best
        }
    }

    /// Evaluation grid clipped to this function's domain.
    pub(crate) fn domain_grid(&self, settings: &GridSettings) -> Vec<f64> {
        let lo = self.domain_start();
        let mut grid: Vec<f64> = evaluation_grid(self.b, settings)
            .into_iter()
            .filter(|p| *p >= lo)
            .collect();
        if grid.is_empty() || grid[0] > lo {
            grid.insert(0, lo);
        }
        if self.closed_at_b() {
            grid.push(self.b);
        }
        grid
    }

    /// Rescale so the grid infimum equals 1. Returns the normalized
    /// function together with the divisor that was removed.
    ///
    /// Exact for the degenerate family (all values equal); for the other
    /// families the infimum is resolved to grid tolerance.
    pub fn normalize(&self, settings: &GridSettings) -> Result<(Self, f64)> {
        let (_, inf) = self.grid_inf(settings);
        if !(inf > 0.0 && inf.is_finite()) {
            return Err(GlsError::InvalidFunction(format!(
                "infimum {inf} is not a positive finite number"
            )));
        }
        let mut out = self.clone();
        out.scale /= inf;
        Ok((out, inf))
    }

    /// Numerical proxy for the domination order `self << nu`, i.e.
    /// `psi(p)/nu(p) -> 0` as `p -> b` (or as `p -> inf` for unbounded
    /// support, probed up to the truncation cap).
    ///
    /// The ratio is sampled on a geometric grid approaching the right
    /// endpoint; the test passes iff the ratio is eventually nonincreasing,
    /// strictly drops over that trailing run, and falls below `tolerance`
    /// at the final node. This is a grid certificate, not a proof of the
    /// limit.
    pub fn dominates(&self, nu: &Self, tolerance: f64, settings: &GridSettings) -> Result<bool> {
        if self.b != nu.b {
            return Err(GlsError::IncompatibleSupport { left: self.b, right: nu.b });
        }
        let n = settings.nodes.clamp(32, 4096);
        let grid: Vec<f64> = if self.b.is_finite() {
            let span = self.b - 1.0;
            (0..n)
                .map(|i| {
                    let v = 0.25 * (4e-9_f64).powf(i as f64 / (n - 1) as f64);
                    self.b - span * v
                })
                .collect()
        } else {
            let hi = settings.p_max;
            (0..n).map(|i| 2.0 * (hi / 2.0).powf(i as f64 / (n - 1) as f64)).collect()
        };
        let lo = self.domain_start().max(nu.domain_start());
        let ratios: Vec<f64> = grid
            .iter()
            .filter(|p| **p >= lo && self.in_domain(**p) && nu.in_domain(**p))
            .map(|&p| self.eval_unchecked(p) / nu.eval_unchecked(p))
            .collect();
        if ratios.len() < 4 {
            return Err(GlsError::InvalidFunction(
                "domination grid too small inside the common domain".into(),
            ));
        }
        // trailing nonincreasing run
        let mut start = ratios.len() - 1;
        while start > 0 && ratios[start - 1] >= ratios[start] * (1.0 - 1e-12) {
            start -= 1;
        }
        let last = *ratios.last().unwrap();
        let run_covers_tail = start + 3 <= ratios.len();
        let strictly_dropped = last < ratios[start] * (1.0 - 1e-9);
        Ok(run_covers_tail && strictly_dropped && last <= tolerance)
    }

    /// Short human-readable label, used in report target-space fields.
    pub fn describe(&self) -> String {
        let base = match &self.family {
            FamilyDescriptor::PsiM { m } => format!("psi_m(m={m})"),
            FamilyDescriptor::PsiML { m, .. } => format!("psi_m_l(m={m})"),
            FamilyDescriptor::PsiBGammaL { b, gamma, .. } => {
                format!("psi_b_gamma_l(b={b}, gamma={gamma})")
            }
            FamilyDescriptor::Degenerate { r } => format!("degenerate(r={r})"),
            FamilyDescriptor::PsiBBeta { b, beta } => format!("psi_b_beta(b={b}, beta={beta})"),
            FamilyDescriptor::Tabulated { grid, .. } => {
                format!("tabulated({} nodes on [{}, {}])", grid.len(), grid[0], self.b)
            }
        };
        if (self.scale - 1.0).abs() > 1e-12 {
            format!("{base} * {:.6}", self.scale)
        } else {
            base
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> GridSettings {
        GridSettings::default()
    }

    #[test]
    fn psi_m_evaluates_to_power() {
        let psi = GeneratingFunction::psi_m(2.0).unwrap();
        assert_eq!(psi.evaluate(4.0).unwrap(), 2.0);
        assert_eq!(psi.support_bound(), f64::INFINITY);
    }

    #[test]
    fn degenerate_is_one_on_support() {
        let psi = GeneratingFunction::degenerate(3.0).unwrap();
        assert_eq!(psi.evaluate(2.5).unwrap(), 1.0);
        assert_eq!(psi.evaluate(3.0).unwrap(), 1.0);
        assert!(psi.evaluate(3.1).is_err());
        assert_eq!(psi.support_bound(), 3.0);
    }

    #[test]
    fn psi_b_beta_examples() {
        let psi = GeneratingFunction::psi_b_beta(3.0, 1.0).unwrap();
        assert!((psi.evaluate(2.0).unwrap() - 2.0).abs() < 1e-15);
        let psi = GeneratingFunction::psi_b_beta(2.0, 1.0).unwrap();
        assert!((psi.evaluate(1.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(psi.evaluate(2.0).is_err());
    }

    #[test]
    fn parameters_out_of_range_are_rejected() {
        assert!(GeneratingFunction::psi_m(0.0).is_err());
        assert!(GeneratingFunction::psi_m(-2.0).is_err());
        assert!(GeneratingFunction::degenerate(1.0).is_err());
        assert!(GeneratingFunction::psi_b_beta(1.0, 1.0).is_err());
        assert!(GeneratingFunction::psi_b_beta(2.0, 0.0).is_err());
        assert!(GeneratingFunction::psi_b_gamma_l(2.0, -1.0, SlowlyVarying::Constant { value: 1.0 })
            .is_err());
        assert!(GeneratingFunction::psi_m_l(1.0, SlowlyVarying::LogPower { r: 1.0 }).is_err());
        assert!(GeneratingFunction::tabulated(vec![1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(GeneratingFunction::tabulated(vec![1.0, 2.0], vec![1.0, -2.0]).is_err());
    }

    #[test]
    fn out_of_domain_identifies_bound() {
        let psi = GeneratingFunction::psi_b_beta(2.0, 1.0).unwrap();
        match psi.evaluate(2.5) {
            Err(GlsError::OutOfSupport { b, .. }) => assert_eq!(b, 2.0),
            other => panic!("expected OutOfSupport, got {other:?}"),
        }
        assert!(psi.evaluate(0.5).is_err());
    }

    #[test]
    fn v_function_values() {
        let psi1 = GeneratingFunction::psi_m(1.0).unwrap();
        let e = std::f64::consts::E;
        assert!((psi1.v_function(e).unwrap() - e).abs() < 1e-14);
        let deg = GeneratingFunction::degenerate(5.0).unwrap();
        assert_eq!(deg.v_function(3.0).unwrap(), 0.0);
        let psi2 = GeneratingFunction::psi_m(2.0).unwrap();
        assert!((psi2.v_function(4.0).unwrap() - 4.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn normalize_divides_out_scale() {
        let psi = GeneratingFunction::psi_m(2.0).unwrap().scaled(2.0).unwrap();
        let (norm, divisor) = psi.normalize(&settings()).unwrap();
        assert!((divisor - 2.0).abs() < 1e-12);
        assert!((norm.evaluate(4.0).unwrap() - 2.0).abs() < 1e-12);

        let already = GeneratingFunction::psi_m(2.0).unwrap();
        let (same, divisor) = already.normalize(&settings()).unwrap();
        assert_eq!(divisor, 1.0);
        assert_eq!(same.evaluate(9.0).unwrap(), 3.0);
    }

    #[test]
    fn normalize_tabulated() {
        let psi =
            GeneratingFunction::tabulated(vec![1.0, 2.0, 3.0], vec![1.5, 2.0, 3.0]).unwrap();
        let (norm, divisor) = psi.normalize(&settings()).unwrap();
        assert!((divisor - 1.5).abs() < 1e-12);
        assert!((norm.evaluate(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((norm.evaluate(2.0).unwrap() - 2.0 / 1.5).abs() < 1e-12);
        assert!((norm.evaluate(3.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tabulated_interpolates_linearly_and_never_extrapolates() {
        let psi = GeneratingFunction::tabulated(vec![1.0, 2.0, 4.0], vec![1.0, 2.0, 4.0]).unwrap();
        assert!((psi.evaluate(1.5).unwrap() - 1.5).abs() < 1e-15);
        assert!((psi.evaluate(3.0).unwrap() - 3.0).abs() < 1e-15);
        assert!(psi.evaluate(4.5).is_err());
    }

    #[test]
    fn named_families_positive_and_finite_on_grid() {
        let l = SlowlyVarying::LogPower { r: 1.0 };
        let functions = vec![
            GeneratingFunction::psi_m(0.5).unwrap(),
            GeneratingFunction::psi_m(2.0).unwrap(),
            GeneratingFunction::psi_m_l(2.0, l.clone()).unwrap(),
            GeneratingFunction::psi_b_gamma_l(2.0, 0.0, l).unwrap(),
            GeneratingFunction::degenerate(2.0).unwrap(),
            GeneratingFunction::psi_b_beta(3.0, 1.0).unwrap(),
        ];
        for psi in &functions {
            for p in psi.domain_grid(&settings()) {
                let v = psi.evaluate(p).unwrap();
                assert!(v > 0.0 && v.is_finite(), "{} at p={p} gave {v}", psi.describe());
            }
        }
    }

    #[test]
    fn named_families_are_normalized_after_construction() {
        let l = SlowlyVarying::LogPower { r: 1.5 };
        let functions = vec![
            GeneratingFunction::psi_m(2.0).unwrap(),
            GeneratingFunction::psi_m_l(3.0, l.clone()).unwrap(),
            GeneratingFunction::psi_b_gamma_l(2.5, 0.5, l).unwrap(),
            GeneratingFunction::degenerate(2.0).unwrap(),
            GeneratingFunction::psi_b_beta(3.0, 0.5).unwrap(),
        ];
        for psi in &functions {
            let (_, inf) = psi.grid_inf(&settings());
            assert!((inf - 1.0).abs() < 1e-9, "{}: inf = {inf}", psi.describe());
        }
    }

    #[test]
    fn continuity_on_the_grid() {
        let l = SlowlyVarying::LogPower { r: 1.0 };
        let functions = vec![
            GeneratingFunction::psi_m(2.0).unwrap(),
            GeneratingFunction::psi_m_l(2.0, l.clone()).unwrap(),
            GeneratingFunction::psi_b_gamma_l(3.0, 0.0, l).unwrap(),
            GeneratingFunction::psi_b_beta(2.0, 1.0).unwrap(),
            GeneratingFunction::degenerate(4.0).unwrap(),
        ];
        for psi in &functions {
            let grid = psi.domain_grid(&settings());
            for w in grid.windows(2) {
                let a = psi.evaluate(w[0]).unwrap();
                let b = psi.evaluate(w[1]).unwrap();
                let jump = (b / a).max(a / b);
                assert!(jump < 2.0, "{}: jump {jump} at p={}", psi.describe(), w[0]);
            }
        }
    }

    #[test]
    fn psi_m_large_m_tends_to_one() {
        let psi = GeneratingFunction::psi_m(1e6).unwrap();
        for p in [1.0, 2.0, 10.0, 100.0] {
            let v = psi.evaluate(p).unwrap();
            assert!((1.0..=1.0001).contains(&v));
        }
    }

    #[test]
    fn dominates_examples() {
        let s = settings();
        let psi2 = GeneratingFunction::psi_m(2.0).unwrap();
        let psi1 = GeneratingFunction::psi_m(1.0).unwrap();
        assert!(psi2.dominates(&psi1, 0.05, &s).unwrap());
        assert!(!psi2.dominates(&psi2.clone(), 0.05, &s).unwrap());
        let half = GeneratingFunction::psi_b_beta(2.0, 0.5).unwrap();
        let one = GeneratingFunction::psi_b_beta(2.0, 1.0).unwrap();
        assert!(half.dominates(&one, 0.05, &s).unwrap());
        assert!(!one.dominates(&half, 0.05, &s).unwrap());
    }

    #[test]
    fn dominates_rejects_mismatched_support() {
        let s = settings();
        let psi2 = GeneratingFunction::psi_m(2.0).unwrap();
        let deg = GeneratingFunction::degenerate(2.0).unwrap();
        assert!(matches!(
            psi2.dominates(&deg, 0.05, &s),
            Err(GlsError::IncompatibleSupport { .. })
        ));
    }

    #[test]
    fn dominates_is_a_strict_partial_order_on_family_instances() {
        let s = settings();
        let chain = vec![
            GeneratingFunction::psi_m(4.0).unwrap(),
            GeneratingFunction::psi_m(2.0).unwrap(),
            GeneratingFunction::psi_m(1.0).unwrap(),
        ];
        for psi in &chain {
            assert!(!psi.dominates(psi, 0.05, &s).unwrap(), "irreflexive");
        }
        assert!(chain[0].dominates(&chain[1], 0.05, &s).unwrap());
        assert!(chain[1].dominates(&chain[2], 0.05, &s).unwrap());
        assert!(chain[0].dominates(&chain[2], 0.05, &s).unwrap(), "transitive");
        let bounded = vec![
            GeneratingFunction::psi_b_beta(2.0, 0.25).unwrap(),
            GeneratingFunction::psi_b_beta(2.0, 0.5).unwrap(),
            GeneratingFunction::psi_b_beta(2.0, 1.0).unwrap(),
        ];
        assert!(bounded[0].dominates(&bounded[1], 0.05, &s).unwrap());
        assert!(bounded[1].dominates(&bounded[2], 0.05, &s).unwrap());
        assert!(bounded[0].dominates(&bounded[2], 0.05, &s).unwrap());
        assert!(!bounded[2].dominates(&bounded[0], 0.05, &s).unwrap(), "asymmetric");
    }

    #[test]
    fn descriptor_json_round_trip() {
        let cases = vec![
            r#"{"family":"psi_m","m":2.0}"#,
            r#"{"family":"degenerate","r":2.0}"#,
            r#"{"family":"psi_b_beta","b":3.0,"beta":1.0}"#,
            r#"{"family":"psi_b_gamma_l","b":2.0,"gamma":0.0,"L":{"kind":"log_power","r":1.0}}"#,
            r#"{"family":"psi_m_l","m":2.0,"L":{"kind":"constant","value":1.0}}"#,
            r#"{"family":"tabulated","grid":[1.0,2.0],"values":[1.0,2.0]}"#,
        ];
        for text in cases {
            let desc: FamilyDescriptor = serde_json::from_str(text).unwrap();
            let psi = GeneratingFunction::make(desc.clone()).unwrap();
            let back: FamilyDescriptor =
                serde_json::from_str(&serde_json::to_string(psi.family()).unwrap()).unwrap();
            assert_eq!(&back, psi.family());
            assert_eq!(back, desc);
        }
    }

    #[test]
    fn v_is_zero_at_one_when_psi_is_one_there() {
        for psi in [
            GeneratingFunction::psi_m(3.0).unwrap(),
            GeneratingFunction::degenerate(2.0).unwrap(),
            GeneratingFunction::psi_b_beta(2.0, 1.0).unwrap(),
        ] {
            assert_eq!(psi.v_function(1.0).unwrap(), 0.0);
        }
    }
}

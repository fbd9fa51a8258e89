//! Young-Fenchel conjugation and the moment/tail dictionary.
//!
//! For a generating function `psi` let `v(p) = p * ln(psi(p))`. The convex
//! conjugate `v*(u) = sup_p (p*u - v(p))` converts moment growth into
//! exponential tail decay: a function with Grand Lebesgue norm `N`
//! satisfies `T_f(y) <= exp(-v*(ln(y/N)))` for `y >= e*N`. Conversely a
//! tail envelope yields moment bounds `|f|_p^p <= p * int y^(p-1) B(y) dy`
//! and hence a norm bound, realizing the reverse implication with an
//! explicit constant. The exponential Orlicz function `M(y) =
//! exp(v*(ln|y|))` generates a space with norm equivalent (up to
//! constants) to the Grand Lebesgue one.

use crate::empirics::EmpiricalSample;
use crate::error::{GlsError, Result};
use crate::grid::GridSettings;
use crate::opt::golden_max;
use crate::psi::GeneratingFunction;

/// A convex function tabulated on an increasing grid, interpreted as its
/// piecewise-linear extension. Construction checks discrete convexity
/// (nondecreasing chord slopes).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexGridFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl ConvexGridFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(GlsError::InvalidFunction(
                "need at least two nodes and matching value count".into(),
            ));
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(GlsError::InvalidFunction("grid must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GlsError::InvalidFunction("values must be finite".into()));
        }
        let slope = |i: usize| (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
        for i in 0..grid.len() - 2 {
            let (a, b) = (slope(i), slope(i + 1));
            if b < a - 1e-9 * a.abs().max(b.abs()).max(1.0) {
                return Err(GlsError::InvalidFunction(format!(
                    "not convex: chord slope drops from {a} to {b} near x = {}",
                    grid[i + 1]
                )));
            }
        }
        Ok(ConvexGridFunction { grid, values })
    }

    pub fn from_fn(f: impl Fn(f64) -> f64, grid: Vec<f64>) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    fn interp(&self, x: f64) -> f64 {
        let k = self.grid.partition_point(|g| *g <= x).clamp(1, self.grid.len() - 1);
        let t = (x - self.grid[k - 1]) / (self.grid[k] - self.grid[k - 1]);
        self.values[k - 1] + t * (self.values[k] - self.values[k - 1])
    }
}

/// Conjugate `f*(u) = sup_x (x*u - f(x))` over the compact grid domain:
/// the node maximum refined by one golden-section pass on the bracketing
/// interval around the best node. Finite for every `u`.
pub fn fenchel(f: &ConvexGridFunction, u: f64) -> f64 {
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, (&x, &v)) in f.grid.iter().zip(&f.values).enumerate() {
        let obj = x * u - v;
        if obj > best.1 {
            best = (i, obj);
        }
    }
    let lo = f.grid[best.0.saturating_sub(1)];
    let hi = f.grid[(best.0 + 1).min(f.grid.len() - 1)];
    let (_, refined) = golden_max(|x| x * u - f.interp(x), lo, hi, 1e-10, 80);
    best.1.max(refined)
}

/// Conjugate values on a whole increasing `u`-grid in one sweep.
///
/// For a convex piecewise-linear `f` the maximizing node index is
/// nondecreasing in `u`, so a two-pointer pass computes the exact node
/// maxima in `O(n + m)`. The result is itself convex.
pub fn conjugate_profile(f: &ConvexGridFunction, us: &[f64]) -> Result<ConvexGridFunction> {
    if us.len() < 2 || !us.windows(2).all(|w| w[0] < w[1]) {
        return Err(GlsError::InvalidFunction("u-grid must be strictly increasing".into()));
    }
    let n = f.grid.len();
    let mut j = 0usize;
    let mut out = Vec::with_capacity(us.len());
    for &u in us {
        while j + 1 < n && f.grid[j + 1] * u - f.values[j + 1] >= f.grid[j] * u - f.values[j] {
            j += 1;
        }
        out.push(f.grid[j] * u - f.values[j]);
    }
    ConvexGridFunction::new(us.to_vec(), out)
}

/// `v*(u) = sup_p (p*u - p*ln(psi(p)))` with the supremum taken over the
/// function's domain truncated at `p_max`; grid argmax refined by a
/// golden-section pass against the exact evaluator.
pub fn conjugate_v(psi: &GeneratingFunction, u: f64, settings: &GridSettings) -> f64 {
    let grid = psi.domain_grid(settings);
    let obj = |p: f64| p * u - p * psi.eval_unchecked(p).ln();
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &p) in grid.iter().enumerate() {
        let o = obj(p);
        if o > best.1 {
            best = (i, o);
        }
    }
    let lo = grid[best.0.saturating_sub(1)];
    let hi = grid[(best.0 + 1).min(grid.len() - 1)];
    let (_, refined) = golden_max(obj, lo, hi, 1e-10, 120);
    best.1.max(refined)
}

/// Moment-to-tail direction: for `||f|| = gls_norm` in `G(psi)`,
/// `T_f(y) <= exp(-v*(ln(y/gls_norm)))`, valid for `y >= e * gls_norm`.
pub fn tail_bound(
    psi: &GeneratingFunction,
    gls_norm: f64,
    y: f64,
    settings: &GridSettings,
) -> Result<f64> {
    if !(gls_norm > 0.0 && gls_norm.is_finite()) {
        return Err(GlsError::ParameterOutOfRange {
            name: "gls_norm",
            constraint: "requires a positive finite norm".into(),
        });
    }
    let threshold = std::f64::consts::E * gls_norm;
    if !(y >= threshold) {
        return Err(GlsError::OutOfValidity { y, threshold });
    }
    let u = (y / gls_norm).ln();
    Ok((-conjugate_v(psi, u, settings)).exp().min(1.0))
}

/// Exponential Orlicz function `M(y) = exp(v*(ln|y|))` for `|y| >= e`,
/// glued to the quadratic `C*y^2` below `e` with `C` fixed by continuity.
/// Even in `y` and nondecreasing in `|y|`.
pub fn orlicz_m(psi: &GeneratingFunction, y: f64, settings: &GridSettings) -> f64 {
    let a = y.abs();
    let e = std::f64::consts::E;
    if a >= e {
        conjugate_v(psi, a.ln(), settings).exp()
    } else {
        let c = conjugate_v(psi, 1.0, settings).exp() / (e * e);
        c * a * a
    }
}

/// Upper envelope of a tail function: `eval(y)` bounds `T_f(y)` for
/// `y >= y_min`; nothing is asserted below `y_min`, where the trivial
/// bound 1 applies. Evaluations are clamped to `[0, 1]` and checked to be
/// nonincreasing on a probe grid at construction.
pub struct TailEnvelope {
    y_min: f64,
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl TailEnvelope {
    pub fn from_fn(
        y_min: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(y_min >= 0.0 && y_min.is_finite()) {
            return Err(GlsError::ParameterOutOfRange {
                name: "y_min",
                constraint: "validity threshold must be finite and >= 0".into(),
            });
        }
        let lo = y_min.max(1e-9);
        let mut prev = f64::INFINITY;
        for i in 0..=96 {
            let y = lo * (1e12f64).powf(i as f64 / 96.0);
            let v = f(y);
            if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(GlsError::InvalidFunction(format!(
                    "envelope value {v} at y = {y} outside [0, 1]"
                )));
            }
            if v > prev + 1e-9 {
                return Err(GlsError::InvalidFunction(format!(
                    "envelope increases at y = {y}"
                )));
            }
            prev = v;
        }
        Ok(TailEnvelope { y_min, eval: Box::new(f) })
    }

    /// The canonical envelope `y -> exp(-v*(ln(y/norm)))` produced by
    /// [`tail_bound`], with validity threshold `e * norm`. The conjugate is
    /// precomputed on a `u`-table and interpolated (extended linearly with
    /// its final slope beyond the table).
    pub fn from_psi(
        psi: &GeneratingFunction,
        norm: f64,
        settings: &GridSettings,
    ) -> Result<Self> {
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(GlsError::ParameterOutOfRange {
                name: "norm",
                constraint: "requires a positive finite norm".into(),
            });
        }
        let us: Vec<f64> = (0..=1200).map(|i| 1.0 + i as f64 * 0.05).collect();
        let vs: Vec<f64> = us.iter().map(|&u| conjugate_v(psi, u, settings)).collect();
        let n = us.len();
        let slope = (vs[n - 1] - vs[n - 2]) / (us[n - 1] - us[n - 2]);
        let (u_last, v_last) = (us[n - 1], vs[n - 1]);
        let table = ConvexGridFunction::new(us, vs)?;
        let y_min = std::f64::consts::E * norm;
        let eval = move |y: f64| {
            let u = (y / norm).ln();
            let v = if u <= u_last { table.interp(u) } else { v_last + slope * (u - u_last) };
            (-v).exp()
        };
        Ok(TailEnvelope { y_min, eval: Box::new(eval) })
    }

    /// Empirical survival envelope `y -> max(mu(f >= y), mu(f <= -y))` of
    /// a finite sample, valid from `y_min = 0`.
    pub fn from_sample(sample: &EmpiricalSample) -> Self {
        let mut upper: Vec<(f64, f64)> =
            sample.values().iter().copied().zip(sample.weights().iter().copied()).collect();
        upper.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        // suffix sums of weights over sorted values
        let mut suffix = vec![0.0; upper.len() + 1];
        for i in (0..upper.len()).rev() {
            suffix[i] = suffix[i + 1] + upper[i].1;
        }
        let sorted: Vec<f64> = upper.iter().map(|p| p.0).collect();
        let eval = move |y: f64| {
            let i = sorted.partition_point(|v| *v < y);
            let up = suffix[i];
            let j = sorted.partition_point(|v| *v <= -y);
            let down: f64 = suffix[0] - suffix[j];
            up.max(down)
        };
        TailEnvelope { y_min: 0.0, eval: Box::new(eval) }
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn eval(&self, y: f64) -> f64 {
        (self.eval)(y).clamp(0.0, 1.0)
    }
}

impl std::fmt::Debug for TailEnvelope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TailEnvelope").field("y_min", &self.y_min).finish_non_exhaustive()
    }
}

/// Tail-to-moment direction: a certified upper bound on the Grand
/// Lebesgue norm of any function whose tail is dominated by `envelope`
/// (caller-asserted). For each grid `p` the moment bound
/// `|f|_p^p <= y_min^p + p * int_{y_min}^inf y^(p-1) B(y) dy` is evaluated
/// by scaled adaptive quadrature with a doubling upper limit (stopping
/// once the remaining tail contributes below `1e-12` relative); the output
/// is the supremum of the p-th roots over `psi(p)`.
///
/// `k` is the asserted scale constant of the envelope (the `K` in
/// `T(y) <= exp(-v*(ln(y/K)))`); it seeds the quadrature scale, and the
/// returned bound realizes `C(psi) * k` constructively.
pub fn norm_bound_from_tail(
    envelope: &TailEnvelope,
    psi: &GeneratingFunction,
    k: f64,
    settings: &GridSettings,
) -> Result<f64> {
    if psi.support_bound().is_finite() {
        return Err(GlsError::ParameterOutOfRange {
            name: "psi",
            constraint: "tail-to-norm conversion requires unbounded support with psi -> inf".into(),
        });
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(GlsError::ParameterOutOfRange {
            name: "k",
            constraint: "envelope scale must be positive and finite".into(),
        });
    }
    let grid = psi.domain_grid(settings);
    let mut best = 0.0f64;
    for &p in &grid {
        let moment = moment_from_envelope(envelope, p, k)?;
        best = best.max(moment / psi.eval_unchecked(p));
    }
    Ok(best)
}

/// Upper bound on `|f|_p` from a tail envelope; see
/// [`norm_bound_from_tail`].
fn moment_from_envelope(envelope: &TailEnvelope, p: f64, k: f64) -> Result<f64> {
    let y_min = envelope.y_min();
    let start = y_min.max(1e-6 * k.max(1.0));

    // Octave scan of g(y) = p ln y + ln B(y), the log of the mass an
    // octave at y contributes. Quadrature stops where g has decayed 60
    // nats below its peak; if that never happens the integral cannot be
    // certified finite.
    let mut g_max = f64::NEG_INFINITY;
    let mut y_peak = start;
    let mut y_stop = None;
    let mut y = start;
    while y < 1e300 {
        let b = envelope.eval(y);
        if b > 0.0 {
            let g = p * y.ln() + b.ln();
            if g > g_max {
                g_max = g;
                y_peak = y;
            }
            if g < g_max - 60.0 && y > 2.0 * y_peak {
                y_stop = Some(y);
                break;
            }
        } else if g_max.is_finite() && y > 2.0 * y_peak {
            y_stop = Some(y);
            break;
        }
        y *= 2.0;
    }
    let y_stop = match y_stop {
        Some(ys) => ys,
        None if g_max == f64::NEG_INFINITY => {
            // envelope vanishes everywhere past y_min: only the head remains
            return Ok(y_min);
        }
        None => return Err(GlsError::UnboundedMoment { p }),
    };

    let s = y_peak;
    let integrand = |y: f64| {
        let b = envelope.eval(y);
        if b == 0.0 {
            return 0.0;
        }
        let power = if p == 1.0 {
            1.0
        } else {
            let e = (p - 1.0) * (y / s).ln();
            if e < -745.0 {
                return 0.0;
            }
            e.exp()
        };
        p * power * b / s
    };
    let mut total = 0.0;
    let mut lo = if y_min > 0.0 { y_min } else { 0.0 };
    let mut hi = start.max(lo * 2.0).max(1e-12);
    while lo < y_stop {
        let hi_clip = hi.min(y_stop);
        if hi_clip > lo {
            total += simpson_adaptive(&integrand, lo, hi_clip, 1e-11);
        }
        lo = hi_clip;
        hi *= 2.0;
    }
    let head = if y_min > 0.0 {
        let e = p * (y_min / s).ln();
        if e < -745.0 {
            0.0
        } else {
            e.exp()
        }
    } else {
        0.0
    };
    Ok(s * (head + total).powf(1.0 / p))
}

fn simpson_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
        }
    }
    if !(b > a) {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    let eps = rel_tol * whole.abs().max(1e-300);
    recurse(f, a, b, fa, fm, fb, whole, eps, 28)
}

//! Operator-norm constants and norm propagation.
//!
//! An operator `Q` of type `(lambda, nu)` satisfies
//! `|Q[f]|_p <= Z * p^lambda / (p-1)^nu * |f|_p` on `(1, b)`. For
//! `f in G(psi)` the singular `(p-1)^-lambda` factor near `p = 1` is
//! removed by the two-branch construction `tilde_psi` (Lyapunov's
//! inequality caps the small-p moments by the value at a pivot `q`), and
//! optimizing the pivot yields the operator-norm constant
//!
//! ```text
//! K_lambda[psi, b] = inf_{q in (1,b)} q^lambda * psi(q) / (q-1)^lambda
//! ```
//!
//! with `||Q[f]|| <= Z * K_lambda[psi,b] * ||f||` in the equal-power case.
//! Unequal powers (`lambda > nu`) land in the enlarged space generated by
//! `zeta(p) = p^(lambda-nu) * psi(p)`; for finite `b` a same-space bound
//! with the constant inflated by `b^(lambda-nu)` is also available. The
//! `upsilon` construction handles a general weight `W(p)` in place of the
//! power ratio.

use serde::{Deserialize, Serialize};

use crate::error::{GlsError, Result};
use crate::grid::{evaluation_grid, q_grid, GridSettings};
use crate::opt::golden_min;
use crate::psi::{FamilyDescriptor, GeneratingFunction};

/// JSON cannot carry IEEE infinities, so unbounded supports serialize as
/// the string `"inf"`.
mod support_bound_serde {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str("inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct BoundVisitor;
        impl Visitor<'_> for BoundVisitor {
            type Value = f64;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v.trim().to_ascii_lowercase().as_str() {
                    "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                    other => other.parse().map_err(|_| E::custom("bad support bound")),
                }
            }
        }
        d.deserialize_any(BoundVisitor)
    }
}

/// The type data `(lambda, nu, Z)` of an operator together with the
/// support bound `b` of the interval on which its moment inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorTypeSpec {
    pub lambda: f64,
    pub nu: f64,
    pub z: f64,
    #[serde(with = "support_bound_serde")]
    pub b: f64,
}

impl OperatorTypeSpec {
    pub fn new(lambda: f64, nu: f64, z: f64, b: f64) -> Result<Self> {
        if !(lambda >= nu && nu >= 0.0 && lambda.is_finite()) {
            return Err(GlsError::ParameterOutOfRange {
                name: "lambda/nu",
                constraint: "requires lambda >= nu >= 0".into(),
            });
        }
        if !(z > 0.0 && z.is_finite()) {
            return Err(GlsError::ParameterOutOfRange {
                name: "Z",
                constraint: "requires Z > 0".into(),
            });
        }
        if !(b > 1.0) {
            return Err(GlsError::ParameterOutOfRange {
                name: "b",
                constraint: "requires b > 1".into(),
            });
        }
        Ok(OperatorTypeSpec { lambda, nu, z, b })
    }

    pub fn delta(&self) -> f64 {
        self.lambda - self.nu
    }
}

/// How a reported constant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "grid+golden")]
    GridGolden,
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "simple-upper")]
    SimpleUpper,
}

/// Result of a K-constant or propagation computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub argmin_q: f64,
    pub method: Method,
    pub target_space: String,
    pub flags: Vec<String>,
    /// Same-space alternative for the unequal-power, finite-support case.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub same_space: Option<Box<BoundReport>>,
}

/// Closed-form reference value; `upper_bound_only` marks constants that
/// bound the infimum from above without attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormK {
    pub value: f64,
    pub upper_bound_only: bool,
}

/// The two-branch generating function that removes the `(p-1)^-lambda`
/// singularity at `p = 1`:
///
/// ```text
/// tilde(p) = (q/(q-1))^lambda * psi(q)   for p in [1, q]
///            (p/(p-1))^lambda * psi(p)   for p in (q, b)
/// ```
///
/// Continuous at `p = q` by construction.
pub fn tilde_psi(psi: &GeneratingFunction, q: f64, lambda: f64, p: f64) -> Result<f64> {
    let b = psi.support_bound();
    if !(q > 1.0 && q < b) {
        return Err(GlsError::OutOfSupport { p: q, b });
    }
    if !(lambda >= 0.0) {
        return Err(GlsError::ParameterOutOfRange {
            name: "lambda",
            constraint: "requires lambda >= 0".into(),
        });
    }
    if p <= q {
        // validate p against the domain even on the flat branch
        psi.evaluate(p.max(psi.domain_start()))?;
        Ok((q / (q - 1.0)).powf(lambda) * psi.evaluate(q)?)
    } else {
        Ok((p / (p - 1.0)).powf(lambda) * psi.evaluate(p)?)
    }
}

/// Grid minimization of an arbitrary positive functional over `(1, b)`
/// with golden-section refinement. Returns `(argmin, value, boundary)`.
fn minimize_over_q(
    f: impl Fn(f64) -> f64,
    b: f64,
    settings: &GridSettings,
) -> Result<(f64, f64, bool)> {
    let grid = q_grid(b, settings);
    let mut best: Option<(usize, f64)> = None;
    for (i, &q) in grid.iter().enumerate() {
        let v = f(q);
        if v.is_finite() && best.map_or(true, |(_, bv)| v < bv) {
            best = Some((i, v));
        }
    }
    let (i, grid_val) = best.ok_or(GlsError::NoFiniteValue)?;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let guarded = |q: f64| {
        let v = f(q);
        if v.is_finite() {
            v
        } else {
            f64::MAX
        }
    };
    let (x, refined) = golden_min(guarded, lo, hi, 1e-10, 160);
    let boundary = i == 0 || i + 1 == grid.len();
    if refined < grid_val {
        Ok((x, refined, boundary))
    } else {
        Ok((grid[i], grid_val, boundary))
    }
}

/// `K_lambda[psi, b] = inf_{q in (1,b)} (q/(q-1))^lambda * psi(q)` for a
/// normalized `psi`, by geometric grid scan plus golden-section
/// refinement. Always at least 1; boundary-attained infima (such as the
/// degenerate family's `q -> b`) are reported with the argmin at the last
/// grid node and a `boundary_attained` flag.
pub fn k_constant(
    psi: &GeneratingFunction,
    lambda: f64,
    settings: &GridSettings,
) -> Result<BoundReport> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(GlsError::ParameterOutOfRange {
            name: "lambda",
            constraint: "requires lambda >= 0".into(),
        });
    }
    let (_, inf) = psi.grid_inf(settings);
    if inf < 1.0 - 1e-6 {
        return Err(GlsError::InvalidFunction(format!(
            "generating function must be normalized (inf = 1); found inf = {inf}"
        )));
    }
    let b = psi.support_bound();
    let f = |q: f64| match psi.evaluate(q) {
        Ok(v) => (q / (q - 1.0)).powf(lambda) * v,
        Err(_) => f64::INFINITY,
    };
    let (argmin, value, boundary) = minimize_over_q(f, b, settings)?;
    let mut flags = Vec::new();
    if boundary {
        flags.push("boundary_attained".to_string());
    }
    Ok(BoundReport {
        value,
        argmin_q: argmin,
        method: Method::GridGolden,
        target_space: format!("G[{}]", psi.describe()),
        flags,
        same_space: None,
    })
}

/// Closed-form constants for the families that admit one:
///
/// * `psi_m`: `K_m(lambda) = m^(1/m) * (lambda + 1/m)^(lambda + 1/m) *
///   lambda^-lambda` (exact; 1 at `lambda = 0`);
/// * `degenerate(r)`: `(r/(r-1))^lambda` (exact, attained as `q -> r`);
/// * `psi_b_beta`: the stationary evaluation
///   `(lambda*b + beta)^lambda * (lambda + beta)^beta /
///   (lambda^lambda * beta^beta * (b-1)^lambda)`, an upper bound only.
///   (The underlying minimization is carried out for the unnormalized
///   profile `(b-q)^-beta`; the `(b-1)^beta` normalization of the family
///   is folded in so the value bounds `K_lambda[psi_b_beta, b]`.)
pub fn k_reference(family: &FamilyDescriptor, lambda: f64) -> Result<ClosedFormK> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(GlsError::ParameterOutOfRange {
            name: "lambda",
            constraint: "requires lambda >= 0".into(),
        });
    }
    match family {
        FamilyDescriptor::PsiM { m } => {
            let value = if lambda == 0.0 {
                1.0
            } else {
                m.powf(1.0 / m)
                    * (lambda + 1.0 / m).powf(lambda + 1.0 / m)
                    * lambda.powf(-lambda)
            };
            Ok(ClosedFormK { value, upper_bound_only: false })
        }
        FamilyDescriptor::Degenerate { r } => {
            Ok(ClosedFormK { value: (r / (r - 1.0)).powf(lambda), upper_bound_only: false })
        }
        FamilyDescriptor::PsiBBeta { b, beta } => {
            let value = (lambda * b + beta).powf(lambda) * (lambda + beta).powf(*beta)
                / (lambda.powf(lambda) * beta.powf(*beta) * (b - 1.0).powf(lambda));
            Ok(ClosedFormK { value, upper_bound_only: true })
        }
        _ => Err(GlsError::NoClosedForm),
    }
}

/// The cheap pivot choice `q = 2` when `b > 2` and `q = (b+1)/2` when
/// `b in (1, 2]`, giving `K_lambda[psi,b] <= (q/(q-1))^lambda * psi(q)`.
pub fn k_simple_upper(psi: &GeneratingFunction, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(GlsError::ParameterOutOfRange {
            name: "lambda",
            constraint: "requires lambda >= 0".into(),
        });
    }
    let b = psi.support_bound();
    let q = if b > 2.0 { 2.0 } else { (b + 1.0) / 2.0 };
    Ok((q / (q - 1.0)).powf(lambda) * psi.evaluate(q)?)
}

/// Outcome of a propagation: the certified bound and the generating
/// function of the space in which it holds.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub report: BoundReport,
    /// Target space: `psi` itself in the equal-power case, the normalized
    /// `zeta(p) = p^delta * psi(p)` (tabulated on the standard grid)
    /// otherwise.
    pub target: GeneratingFunction,
}

/// Propagate a Grand Lebesgue norm through an operator of the given type.
///
/// * `lambda = nu`: output lands in the same space,
///   `bound = Z * K_lambda[psi,b] * input_norm`.
/// * `lambda > nu`: output lands in `G(zeta)`, `zeta = p^delta * psi(p)`
///   renormalized to infimum 1 with the removed scale folded into the
///   bound. For finite `b` the report additionally carries the same-space
///   bound `Z * b^delta * K_nu[b^delta psi, b] * input_norm`.
pub fn propagate(
    spec: &OperatorTypeSpec,
    psi: &GeneratingFunction,
    input_norm: f64,
    settings: &GridSettings,
) -> Result<Propagation> {
    let b = psi.support_bound();
    if !(spec.b == b || (spec.b.is_finite() && b.is_finite() && (spec.b - b).abs() < 1e-12)) {
        return Err(GlsError::IncompatibleSupport { left: spec.b, right: b });
    }
    if !(input_norm >= 0.0 && input_norm.is_finite()) {
        return Err(GlsError::ParameterOutOfRange {
            name: "input_norm",
            constraint: "requires a finite nonnegative norm".into(),
        });
    }
    let delta = spec.delta();
    if delta == 0.0 {
        let k = k_constant(psi, spec.lambda, settings)?;
        return Ok(Propagation {
            report: BoundReport { value: spec.z * k.value * input_norm, ..k },
            target: psi.clone(),
        });
    }

    // zeta(p) = p^delta * psi(p), renormalized; K computed on the exact
    // unnormalized profile, then transported.
    let zeta_raw = |p: f64| p.powf(delta) * psi.eval_unchecked(p);
    let grid = evaluation_grid(b, settings);
    let mut iota = f64::INFINITY;
    for &p in &grid {
        if psi.evaluate(p).is_ok() {
            iota = iota.min(zeta_raw(p));
        }
    }
    let (arg_ref, refined, _) = {
        // sharpen the infimum of zeta around its best node
        let guarded = |p: f64| match psi.evaluate(p) {
            Ok(_) => zeta_raw(p),
            Err(_) => f64::INFINITY,
        };
        let lo = psi.domain_start();
        let hi = *grid.last().unwrap();
        let (x, v) = golden_min(guarded, lo, hi, 1e-12, 120);
        (x, v, false)
    };
    let _ = arg_ref;
    iota = iota.min(refined);

    let f = |q: f64| match psi.evaluate(q) {
        Ok(v) => (q / (q - 1.0)).powf(spec.nu) * q.powf(delta) * v,
        Err(_) => f64::INFINITY,
    };
    let (argmin, k_raw, boundary) = minimize_over_q(f, b, settings)?;

    let mut values = Vec::with_capacity(grid.len());
    let mut nodes = Vec::with_capacity(grid.len());
    for &p in &grid {
        if psi.evaluate(p).is_ok() {
            nodes.push(p);
            values.push(zeta_raw(p) / iota);
        }
    }
    let target = GeneratingFunction::tabulated(nodes, values)?;

    let mut flags = vec!["target_tabulated".to_string()];
    if boundary {
        flags.push("boundary_attained".to_string());
    }
    let same_space = if b.is_finite() {
        let scale = b.powf(delta);
        let f2 = |q: f64| match psi.evaluate(q) {
            Ok(v) => (q / (q - 1.0)).powf(spec.nu) * scale * v,
            Err(_) => f64::INFINITY,
        };
        let (argmin2, k2, boundary2) = minimize_over_q(f2, b, settings)?;
        let mut flags2 = vec!["same_space_variant".to_string()];
        if boundary2 {
            flags2.push("boundary_attained".to_string());
        }
        Some(Box::new(BoundReport {
            value: spec.z * scale * k2 * input_norm,
            argmin_q: argmin2,
            method: Method::GridGolden,
            target_space: format!("G[{}]", psi.describe()),
            flags: flags2,
            same_space: None,
        }))
    } else {
        None
    };

    Ok(Propagation {
        report: BoundReport {
            value: spec.z * iota * k_raw * input_norm,
            argmin_q: argmin,
            method: Method::GridGolden,
            target_space: format!("G[zeta: p^{delta} * {}, normalized]", psi.describe()),
            flags,
            same_space,
        },
        target,
    })
}

/// Weight functions accepted by [`upsilon`]. Tabulated weights are step
/// functions (value of the node at or before `q`), honoring
/// discontinuities without smoothing; they are not evaluable outside
/// their grid hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `W(q) = (q/(q-1))^lambda`.
    PowerRatio { lambda: f64 },
    Constant { value: f64 },
    Tabulated { grid: Vec<f64>, values: Vec<f64> },
}

impl Weight {
    /// Evaluate; returns `inf` where the weight is undefined or infinite.
    fn eval(&self, q: f64) -> f64 {
        match self {
            Weight::PowerRatio { lambda } => {
                if q <= 1.0 {
                    f64::INFINITY
                } else {
                    (q / (q - 1.0)).powf(*lambda)
                }
            }
            Weight::Constant { value } => *value,
            Weight::Tabulated { grid, values } => {
                if q < grid[0] || q > *grid.last().unwrap() {
                    return f64::INFINITY;
                }
                let k = grid.partition_point(|g| *g <= q);
                values[k.saturating_sub(1)]
            }
        }
    }
}

/// The generalized two-branch infimum for an arbitrary weight `W`:
///
/// ```text
/// upsilon(p) = min( inf_{q >= p} W(q)*psi(q),  W(p)*psi(p) )
/// ```
///
/// The left branch relies on Lyapunov's inequality `|g|_p <= |g|_q` for
/// `p <= q`; any `q < p` reduces to the plain `W(p)*psi(p)` bound. With
/// `W(q) = (q/(q-1))^lambda` this is exactly the pointwise minimum of the
/// [`tilde_psi`] family over the pivot.
pub fn upsilon(
    w: &Weight,
    psi: &GeneratingFunction,
    p: f64,
    settings: &GridSettings,
) -> Result<f64> {
    psi.evaluate(p)?;
    let b = psi.support_bound();
    let mut best = f64::INFINITY;
    for q in q_grid(b, settings) {
        if q < p {
            continue;
        }
        if let Ok(v) = psi.evaluate(q) {
            let cand = w.eval(q) * v;
            if cand.is_finite() && cand < best {
                best = cand;
            }
        }
    }
    let right = w.eval(p) * psi.eval_unchecked(p);
    if right.is_finite() && right < best {
        best = right;
    }
    if !best.is_finite() {
        return Err(GlsError::NoFiniteValue);
    }
    Ok(best)
}

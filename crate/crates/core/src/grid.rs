//! Shared p-grid policy.
//!
//! Generating functions live on a half-open interval `[1, b)` whose right
//! endpoint is singular for the bounded families (the function blows up as
//! `p -> b`) while the interesting structure of the `(q-1)^-lambda` factors
//! sits at the left endpoint. All grid scans therefore use geometric
//! spacing that accumulates at the endpoints instead of uniform steps.

/// Grid construction knobs shared by every module.
///
/// `p_max` truncates unbounded supports: a function with `b = inf` is
/// scanned on `[1, p_max]`. Suprema attained at the cap are flagged by the
/// callers that care (see [`crate::empirics::GlsNorm::at_grid_edge`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSettings {
    /// Number of grid nodes (default 512).
    pub nodes: usize,
    /// Truncation cap for unbounded supports (default 2^10).
    pub p_max: f64,
}

impl Default for GridSettings {
    fn default() -> Self {
        GridSettings { nodes: 512, p_max: 1024.0 }
    }
}

impl GridSettings {
    pub fn with_nodes(nodes: usize) -> Self {
        GridSettings { nodes, ..Self::default() }
    }
}

/// Relative distance of the closest grid node to a singular endpoint.
const EDGE_REL: f64 = 1e-9;
/// Relative offset of the first node after p = 1 on evaluation grids.
const LO_REL: f64 = 1e-6;

fn geometric(from: f64, to: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![from];
    }
    let ratio = (to / from).powf(1.0 / (n - 1) as f64);
    let mut v = Vec::with_capacity(n);
    let mut x = from;
    for _ in 0..n {
        v.push(x);
        x *= ratio;
    }
    *v.last_mut().unwrap() = to;
    v
}

fn finish(mut nodes: Vec<f64>) -> Vec<f64> {
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup_by(|a, b| (*a - *b).abs() <= f64::EPSILON * a.abs().max(1.0));
    nodes
}

/// Evaluation grid for a generating function of support bound `b`:
/// `[1, min(b, p_max)]` with p = 1 as an exact node. For finite `b` the
/// grid accumulates geometrically at both endpoints, stopping a relative
/// distance `1e-9` short of `b`.
pub fn evaluation_grid(b: f64, settings: &GridSettings) -> Vec<f64> {
    let n = settings.nodes.max(8);
    let hi = if b.is_finite() { b.min(settings.p_max) } else { settings.p_max };
    let span = hi - 1.0;
    let singular_hi = b.is_finite() && b <= settings.p_max;
    let mut nodes = vec![1.0];
    if singular_hi {
        let half = (n - 1) / 2;
        for u in geometric(LO_REL, 0.5, half) {
            nodes.push(1.0 + span * u);
        }
        for v in geometric(0.5, EDGE_REL, n - 1 - half) {
            nodes.push(b - span * v);
        }
    } else {
        for u in geometric(LO_REL, 1.0, n - 1) {
            nodes.push(1.0 + span * u);
        }
    }
    finish(nodes)
}

/// Search grid on the open interval `(1, min(b, p_max))`, accumulating at
/// `q = 1` (where `(q-1)^-lambda` blows up) and, for finite `b`, at the
/// right endpoint (where boundary infima such as the degenerate family's
/// live).
pub fn q_grid(b: f64, settings: &GridSettings) -> Vec<f64> {
    let n = settings.nodes.max(8);
    let hi = if b.is_finite() { b.min(settings.p_max) } else { settings.p_max };
    let span = hi - 1.0;
    let singular_hi = b.is_finite() && b <= settings.p_max;
    let mut nodes = Vec::with_capacity(n);
    if singular_hi {
        let half = n / 2;
        for u in geometric(EDGE_REL, 0.5, half) {
            nodes.push(1.0 + span * u);
        }
        for v in geometric(0.5, EDGE_REL, n - half) {
            nodes.push(b - span * v);
        }
    } else {
        for u in geometric(EDGE_REL, 1.0, n) {
            nodes.push(1.0 + span * u);
        }
    }
    finish(nodes)
}

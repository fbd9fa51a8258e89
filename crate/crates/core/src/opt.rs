//! One-dimensional golden-section search used by the grid minimizers.

const INV_PHI2: f64 = 0.381_966_011_250_105_2; // 2 - phi

/// Golden-section minimization of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`. The interval shrinks by the golden ratio per
/// evaluation until its width falls below `rel_tol * max(1, |x|)` or
/// `max_evals` evaluations have been spent.
pub(crate) fn golden_min(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
    max_evals: usize,
) -> (f64, f64) {
    if !(a < b) {
        return (a, f(a));
    }
    let mut x1 = a + INV_PHI2 * (b - a);
    let mut x2 = b - INV_PHI2 * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;
    while evals < max_evals && (b - a) > rel_tol * a.abs().max(1.0) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_PHI2 * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_PHI2 * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Golden-section maximization; see [`golden_min`].
pub(crate) fn golden_max(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_evals: usize,
) -> (f64, f64) {
    let (x, neg) = golden_min(|x| -f(x), a, b, rel_tol, max_evals);
    (x, -neg)
}

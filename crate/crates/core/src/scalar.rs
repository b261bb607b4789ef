//! Safeguarded Newton root finding for strictly decreasing scalar functions.
//!
//! Every constrained-minimization step in this crate reduces to a scalar
//! equation in a Lagrange multiplier (simplex prox, FTRL leader, density
//! prox after eigendecomposition) or to a monotone derivative condition
//! (exact line search in the comparators). All of them are strictly
//! decreasing in the unknown, so one solver covers them: Newton steps
//! are taken while they stay inside a maintained sign-change bracket and
//! bisection takes over whenever they do not.

/// Outcome of a successful root solve.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RootReport {
    pub root: f64,
    pub iterations: usize,
    /// `|f(root)|` at the returned point.
    pub residual: f64,
}

/// Failure payload: iterations spent and the best residual seen.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RootFailure {
    pub iterations: usize,
    pub residual: f64,
}

/// Finds the root of a strictly decreasing function `f` on `[lo, hi]`.
///
/// `eval` returns `(f(x), f'(x))`. The caller must supply a valid bracket:
/// `f(lo) >= 0 >= f(hi)`. `eval` may return `-inf` (with arbitrary
/// derivative) to signal that `x` is beyond the domain of `f`; such points
/// are treated as being on the negative side of the root.
///
/// Returns once `|f(x)| <= tol`. When the bracket collapses to adjacent
/// floating-point numbers before the tolerance is met (the root is not
/// representable to that accuracy, e.g. a multiplier near 1e9 where one
/// ulp exceeds the tolerance), the best point seen is returned with its
/// achieved residual; callers that need a guarantee must check `residual`.
/// Fails after `max_iter` evaluations, or if the bracket collapsed without
/// ever seeing a finite function value.
pub(crate) fn decreasing_root(
    mut eval: impl FnMut(f64) -> (f64, f64),
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RootReport, RootFailure> {
    debug_assert!(lo <= hi);
    let mut x = hi;
    let mut best_x = hi;
    let mut best = f64::INFINITY;
    for it in 1..=max_iter {
        let (f, df) = eval(x);
        if f.abs() <= tol {
            return Ok(RootReport { root: x, iterations: it, residual: f.abs() });
        }
        if f.abs() < best {
            best = f.abs();
            best_x = x;
        }
        if f > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        // Newton candidate; fall back to bisection when it leaves the
        // bracket or the derivative is unusable.
        let newton = x - f / df;
        let cand = if df < 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if !(cand > lo && cand < hi) {
            // No representable point strictly inside the bracket: the
            // solve has reached floating-point resolution.
            if best.is_finite() {
                return Ok(RootReport { root: best_x, iterations: it, residual: best });
            }
            return Err(RootFailure { iterations: it, residual: best });
        }
        x = cand;
    }
    Err(RootFailure { iterations: max_iter, residual: best })
}

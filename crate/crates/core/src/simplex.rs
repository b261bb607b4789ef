//! Probability-simplex geometry: validated points, the entropy and
//! log-barrier prox steps, and the FTRL leader computation.
//!
//! The log-barrier prox and the FTRL leader both reduce to the same scalar
//! multiplier equation
//!
//! ```text
//! sum_i 1 / (c_i + lambda) = 1,        lambda > -min_i c_i,
//! ```
//!
//! solved by [`inverse_sum_newton`] with a safeguarded Newton iteration.
//! The density-matrix prox in [`crate::quantum`] reuses the same solver on
//! eigenvalues, so there is exactly one tested root-finding path.

use serde::Serialize;

use crate::omd::{MirrorMap, ProxStep};
use crate::scalar;
use crate::{all_finite, Error, Result};

/// Sum tolerance accepted by [`SimplexPoint::new`].
pub const SIMPLEX_SUM_TOL: f64 = 1e-9;

/// Residual demanded of the multiplier equation (`|sum_i x_i - 1|`).
const MULTIPLIER_RESIDUAL_TOL: f64 = 1e-13;
const MULTIPLIER_MAX_ITER: usize = 200;

/// Worst multiplier residual still accepted when the root is not
/// representable to [`MULTIPLIER_RESIDUAL_TOL`] (gradients of order 1e9
/// put the multiplier where one ulp exceeds the tolerance). The returned
/// coordinates are renormalized, so only the multiplier equation itself —
/// not the simplex constraint — carries this residual.
const MULTIPLIER_RESIDUAL_CEILING: f64 = 1e-6;

/// Above this value of `||eta*g||_inf` the prox problem is considered badly
/// conditioned and a warning is logged (the solve still proceeds).
const CONDITIONING_WARN_THRESHOLD: f64 = 1e6;

/// Diagnostics of one multiplier solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NewtonSolveReport {
    /// The multiplier `lambda` at the root.
    pub lambda: f64,
    /// Function evaluations performed.
    pub iterations: usize,
    /// `|sum_i x_i(lambda) - 1|` at the returned multiplier.
    pub residual: f64,
}

/// A point of the probability simplex: nonnegative coordinates summing to 1
/// within [`SIMPLEX_SUM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("simplex point must have dimension >= 1".into()));
        }
        if !all_finite(&coords) {
            return Err(Error::NonFinite("simplex coordinates"));
        }
        if let Some(&bad) = coords.iter().find(|&&x| x < 0.0) {
            return Err(Error::Invalid(format!("negative simplex coordinate {bad}")));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::Invalid(format!(
                "simplex coordinates sum to {sum}, outside 1 +/- {SIMPLEX_SUM_TOL}"
            )));
        }
        Ok(Self(coords))
    }

    /// The barycenter `e/d`.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("simplex point must have dimension >= 1".into()));
        }
        Ok(Self(vec![1.0 / d as f64; d]))
    }

    /// Trusted constructor for solver outputs that already satisfy the
    /// invariants to well below the public tolerance.
    pub(crate) fn from_solver(coords: Vec<f64>) -> Self {
        debug_assert!(all_finite(&coords));
        debug_assert!(coords.iter().all(|&x| x > 0.0));
        debug_assert!((coords.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_SUM_TOL);
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn min_coord(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Strict positivity of every coordinate.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&x| x > 0.0)
    }
}

impl AsRef<[f64]> for SimplexPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn validate_prox_inputs(x: &SimplexPoint, g: &[f64], eta: f64) -> Result<()> {
    if g.len() != x.dim() {
        return Err(Error::LengthMismatch { expected: x.dim(), got: g.len() });
    }
    if !all_finite(g) {
        return Err(Error::NonFinite("loss gradient"));
    }
    if !x.is_interior() {
        return Err(Error::Degenerate("prox center is on the simplex boundary".into()));
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Invalid(format!("step size must be positive and finite, got {eta}")));
    }
    Ok(())
}

/// Solves `sum_i 1/(c_i + lambda) = 1` for the unique root with all
/// denominators positive, returning `x_i = 1/(c_i + lambda)` and solver
/// diagnostics.
///
/// The function is strictly decreasing in `lambda` on its domain, so the
/// root is bracketed by `lambda_lo = -min(c) + 1/2` (where the smallest
/// denominator alone contributes 2 to the sum) and
/// `lambda_hi = max(0, -min(c) + d)` (where every denominator is at least
/// `max(d, min(c))`, putting the sum at or below 1).
pub(crate) fn inverse_sum_newton(c: &[f64]) -> Result<(Vec<f64>, NewtonSolveReport)> {
    if c.is_empty() {
        return Err(Error::Invalid("multiplier equation needs dimension >= 1".into()));
    }
    if !all_finite(c) {
        return Err(Error::NonFinite("multiplier equation coefficients"));
    }
    let d = c.len() as f64;
    let c_min = c.iter().cloned().fold(f64::INFINITY, f64::min);
    let lo = -c_min + 0.5;
    let hi = (d - c_min).max(0.0);
    let eval = |lam: f64| {
        let mut f = -1.0;
        let mut df = 0.0;
        for &ci in c {
            let den = ci + lam;
            if den <= 0.0 {
                // Rounding pushed us below the domain: treat as the
                // positive (left) side of the root.
                return (f64::INFINITY, -1.0);
            }
            f += 1.0 / den;
            df -= 1.0 / (den * den);
        }
        (f, df)
    };
    let rep = scalar::decreasing_root(eval, lo, hi, MULTIPLIER_RESIDUAL_TOL, MULTIPLIER_MAX_ITER)
        .map_err(|e| Error::NewtonNonConvergence { iterations: e.iterations, residual: e.residual })?;
    if rep.residual > MULTIPLIER_RESIDUAL_CEILING {
        return Err(Error::NewtonNonConvergence {
            iterations: rep.iterations,
            residual: rep.residual,
        });
    }
    let mut x: Vec<f64> = c.iter().map(|&ci| 1.0 / (ci + rep.root)).collect();
    // Divide out the residual so the simplex-sum invariant holds exactly
    // even when the multiplier is only resolution-limited accurate.
    let s: f64 = x.iter().sum();
    for xi in &mut x {
        *xi /= s;
    }
    Ok((x, NewtonSolveReport { lambda: rep.root, iterations: rep.iterations, residual: rep.residual }))
}

/// Entropy prox step: `x'_i` proportional to `x_i * exp(-eta * g_i)`,
/// computed with max-subtraction so the largest weight is exactly 1.
pub fn entropy_prox(x: &SimplexPoint, g: &[f64], eta: f64) -> Result<SimplexPoint> {
    validate_prox_inputs(x, g, eta)?;
    let w: Vec<f64> = x.coords().iter().zip(g).map(|(&xi, &gi)| xi.ln() - eta * gi).collect();
    let m = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ex: Vec<f64> = w.iter().map(|&wi| (wi - m).exp()).collect();
    let s: f64 = ex.iter().sum();
    let out: Vec<f64> = ex.iter().map(|&e| e / s).collect();
    if out.contains(&0.0) {
        return Err(Error::Degenerate(
            "entropy update underflowed to the simplex boundary".into(),
        ));
    }
    Ok(SimplexPoint::from_solver(out))
}

/// Log-barrier prox step: minimizes `eta*<g, y> + D_h(y, x)` over the
/// simplex for `h(y) = -sum_i ln y_i`. The minimizer is
/// `y_i = 1/(1/x_i + eta*g_i + lambda)` with `lambda` from the multiplier
/// equation.
pub fn logbarrier_prox(
    x: &SimplexPoint,
    g: &[f64],
    eta: f64,
) -> Result<(SimplexPoint, NewtonSolveReport)> {
    validate_prox_inputs(x, g, eta)?;
    let spread = g.iter().map(|&gi| (eta * gi).abs()).fold(0.0, f64::max);
    if spread > CONDITIONING_WARN_THRESHOLD {
        log::warn!(
            "log-barrier prox with ||eta*g||_inf = {spread:.3e}: badly conditioned multiplier equation"
        );
    }
    let c: Vec<f64> = x.coords().iter().zip(g).map(|(&xi, &gi)| 1.0 / xi + eta * gi).collect();
    let (y, rep) = inverse_sum_newton(&c)?;
    Ok((SimplexPoint::from_solver(y), rep))
}

/// Leader of linearized-loss FTRL with the log-barrier regularizer:
/// minimizes `eta*<cum_grad, y> - sum_i ln y_i` over the simplex, i.e.
/// `y_i = 1/(eta*cum_grad_i + lambda)`.
pub fn lbftrl_leader(cum_grad: &[f64], eta: f64) -> Result<(SimplexPoint, NewtonSolveReport)> {
    if cum_grad.is_empty() {
        return Err(Error::Invalid("cumulative gradient must have dimension >= 1".into()));
    }
    if !all_finite(cum_grad) {
        return Err(Error::NonFinite("cumulative gradient"));
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Invalid(format!("step size must be positive and finite, got {eta}")));
    }
    let c: Vec<f64> = cum_grad.iter().map(|&gi| eta * gi).collect();
    let (y, rep) = inverse_sum_newton(&c)?;
    Ok((SimplexPoint::from_solver(y), rep))
}

/// Negative-entropy mirror map `h(x) = sum_i x_i ln x_i - sum_i x_i` on the
/// simplex. Its Bregman divergence between simplex points is the KL
/// divergence and its prox step is the closed-form entropy update.
#[derive(Debug, Clone, Copy, Default)]
pub struct EntropyMap;

/// Log-barrier mirror map `h(x) = -sum_i ln x_i` on the simplex.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogBarrierMap;

impl MirrorMap for EntropyMap {
    type Point = SimplexPoint;
    type Gradient = Vec<f64>;

    fn is_interior(&self, x: &SimplexPoint) -> bool {
        x.is_interior()
    }

    fn gradient_finite(&self, g: &Vec<f64>) -> bool {
        all_finite(g)
    }

    fn grad_h(&self, x: &SimplexPoint) -> Vec<f64> {
        x.coords().iter().map(|&xi| xi.ln()).collect()
    }

    fn bregman(&self, x: &SimplexPoint, from: &SimplexPoint) -> f64 {
        // KL(x || from), with the convention 0*ln(0) = 0.
        x.coords()
            .iter()
            .zip(from.coords())
            .map(|(&xi, &yi)| if xi == 0.0 { 0.0 } else { xi * (xi / yi).ln() })
            .sum()
    }

    fn prox(&self, x: &SimplexPoint, g: &Vec<f64>, eta: f64) -> Result<ProxStep<SimplexPoint>> {
        entropy_prox(x, g, eta).map(|point| ProxStep { point, newton: None })
    }
}

impl MirrorMap for LogBarrierMap {
    type Point = SimplexPoint;
    type Gradient = Vec<f64>;

    fn is_interior(&self, x: &SimplexPoint) -> bool {
        x.is_interior()
    }

    fn gradient_finite(&self, g: &Vec<f64>) -> bool {
        all_finite(g)
    }

    fn grad_h(&self, x: &SimplexPoint) -> Vec<f64> {
        x.coords().iter().map(|&xi| -1.0 / xi).collect()
    }

    fn bregman(&self, x: &SimplexPoint, from: &SimplexPoint) -> f64 {
        // sum_i (x_i/y_i - ln(x_i/y_i) - 1); +inf if x touches the boundary.
        x.coords()
            .iter()
            .zip(from.coords())
            .map(|(&xi, &yi)| {
                let r = xi / yi;
                r - r.ln() - 1.0
            })
            .sum()
    }

    fn prox(&self, x: &SimplexPoint, g: &Vec<f64>, eta: f64) -> Result<ProxStep<SimplexPoint>> {
        logbarrier_prox(x, g, eta).map(|(point, rep)| ProxStep { point, newton: Some(rep) })
    }
}

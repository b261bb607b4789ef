//! Offline best-fixed-action solvers: the best constant-rebalanced
//! portfolio and the best fixed density matrix, each with a certified
//! optimality gap, plus the small-dimension brute-force oracles the test
//! suites compare them against.
//!
//! Both problems maximize a concave log-wealth objective over a compact
//! convex set whose linear minimization oracle is exact (a simplex vertex,
//! or a rank-one projector from a top eigenvector), so conditional
//! gradient with away steps is the natural solver: its duality gap is a
//! free optimality certificate, and optima on the boundary (single-asset
//! portfolios, pure states) are reached exactly. Step sizes come from an
//! exact line search on the one-dimensional concave restriction, reusing
//! the crate's safeguarded scalar Newton solver.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::ops::PriceRelatives;
use crate::quantum::{hermitian_eigen, trace_product, CMatrix, DensityMatrix, Observable};
use crate::scalar;
use crate::simplex::SimplexPoint;
use crate::{Error, Result};

/// Conditional-gradient gap below which the solvers stop by default (nats).
pub const DEFAULT_GAP_TOL: f64 = 1e-6;
/// Iteration budget before [`Error::IterationBudget`] is returned.
pub const ITER_BUDGET: usize = 100_000;

/// A certified solution of an offline best-fixed-action problem.
///
/// `objective` is the total loss `sum_t f_t` at `point`; conditional-
/// gradient duality guarantees the true minimum lies in
/// `[objective - gap, objective]`.
#[derive(Debug, Clone)]
pub struct ComparatorResult<P> {
    pub point: P,
    pub objective: f64,
    /// Certified suboptimality bound, recomputed at the returned point.
    pub gap: f64,
    pub iterations: usize,
}

fn validate_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Invalid(format!("gap tolerance must be positive and finite, got {tol}")));
    }
    Ok(())
}

/// Maximizes `phi(gamma) = sum_t ln(c_t + gamma*b_t)` over `[0, gamma_max]`.
///
/// `phi` is concave with `phi'(0) > 0` expected (an ascent direction); the
/// maximizer is `gamma_max` when `phi'` stays nonnegative there, else the
/// root of the strictly decreasing `phi'`. Evaluations beyond the domain
/// (some `c_t + gamma*b_t <= 0`) count as negative side, which keeps the
/// objective finite at the returned step.
fn exact_line_search(c: &[f64], b: &[f64], gamma_max: f64) -> Result<f64> {
    debug_assert_eq!(c.len(), b.len());
    debug_assert!(gamma_max > 0.0 && gamma_max.is_finite());
    let eval = |gamma: f64| {
        let mut f = 0.0;
        let mut df = 0.0;
        for (&ct, &bt) in c.iter().zip(b) {
            let den = ct + gamma * bt;
            if den <= 0.0 {
                return (f64::NEG_INFINITY, -1.0);
            }
            let r = bt / den;
            f += r;
            df -= r * r;
        }
        (f, df)
    };
    let (f_hi, _) = eval(gamma_max);
    if f_hi >= 0.0 {
        return Ok(gamma_max);
    }
    let (f_lo, _) = eval(0.0);
    if !(f_lo > 0.0) {
        // Not an ascent direction up to rounding; report a null step and
        // let the caller's gap test decide.
        return Ok(0.0);
    }
    let tol = 1e-12 * (1.0 + f_lo);
    scalar::decreasing_root(eval, 0.0, gamma_max, tol, 200)
        .map(|rep| rep.root)
        .map_err(|e| {
            Error::Degenerate(format!(
                "exact line search stalled (best derivative residual {:.3e})",
                e.residual
            ))
        })
}

fn argmax(v: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &x) in v.iter().enumerate() {
        if x > best.1 {
            best = (i, x);
        }
    }
    best
}

/// Best constant-rebalanced portfolio: minimizes
/// `sum_t -ln<a_t, x>` over the simplex, stopping once the certified gap
/// is at most `tol`.
pub fn best_crp(days: &[PriceRelatives], tol: f64) -> Result<ComparatorResult<SimplexPoint>> {
    crp_solve(days, tol, ITER_BUDGET)
}

fn crp_solve(
    days: &[PriceRelatives],
    tol: f64,
    budget: usize,
) -> Result<ComparatorResult<SimplexPoint>> {
    validate_tol(tol)?;
    let Some(first) = days.first() else {
        return Err(Error::Invalid("comparator needs at least one round".into()));
    };
    let d = first.dim();
    if let Some(bad) = days.iter().find(|a| a.dim() != d) {
        return Err(Error::LengthMismatch { expected: d, got: bad.dim() });
    }
    let tt = days.len();
    let mut x = vec![1.0 / d as f64; d];
    let mut c = vec![0.0; tt];
    let mut b = vec![0.0; tt];
    let mut iterations = 0usize;
    loop {
        // Keep the simplex sum exact, then certify from scratch at this
        // iterate so the returned gap refers to the returned point.
        let s: f64 = x.iter().sum();
        for xi in &mut x {
            *xi /= s;
        }
        for (ct, a) in c.iter_mut().zip(days) {
            *ct = a.values().iter().zip(&x).map(|(ai, xi)| ai * xi).sum();
            if *ct <= 0.0 {
                return Err(Error::Degenerate(
                    "comparator objective is infinite at the current iterate".into(),
                ));
            }
        }
        let mut grad = vec![0.0; d];
        for (a, &ct) in days.iter().zip(&c) {
            for (gi, &ai) in grad.iter_mut().zip(a.values()) {
                *gi += ai / ct;
            }
        }
        let gx: f64 = grad.iter().zip(&x).map(|(gi, xi)| gi * xi).sum();
        let (i_star, g_max) = argmax(&grad);
        let gap = g_max - gx;
        if gap <= tol {
            let objective = -c.iter().map(|&ct| ct.ln()).sum::<f64>();
            return Ok(ComparatorResult {
                point: SimplexPoint::new(x)?,
                objective,
                gap: gap.max(0.0),
                iterations,
            });
        }
        if iterations >= budget {
            return Err(Error::IterationBudget { budget, gap });
        }
        iterations += 1;

        // Worst in-support vertex for the away direction.
        let mut away = None;
        for (j, &xj) in x.iter().enumerate() {
            if xj > 0.0 && away.is_none_or(|(_, gj)| grad[j] < gj) {
                away = Some((j, grad[j]));
            }
        }
        let (j_star, g_min) = away.expect("simplex point has nonempty support");
        let away_gap = gx - g_min;

        if gap >= away_gap {
            // Toward vertex i*: b_t = a_t[i*] - c_t, step limit 1.
            for ((bt, a), &ct) in b.iter_mut().zip(days).zip(&c) {
                *bt = a.values()[i_star] - ct;
            }
            let gamma = exact_line_search(&c, &b, 1.0)?;
            if gamma <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "conditional gradient stalled at gap {gap:.3e}"
                )));
            }
            for xi in &mut x {
                *xi *= 1.0 - gamma;
            }
            x[i_star] += gamma;
        } else {
            // Away from vertex j*: b_t = c_t - a_t[j*], step limit
            // x_j/(1-x_j) (the weight of e_j in x).
            let xj = x[j_star];
            let gamma_max = if xj < 1.0 { (xj / (1.0 - xj)).min(1e16) } else { 1e16 };
            for ((bt, a), &ct) in b.iter_mut().zip(days).zip(&c) {
                *bt = ct - a.values()[j_star];
            }
            let gamma = exact_line_search(&c, &b, gamma_max)?;
            if gamma <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "conditional gradient stalled at gap {gap:.3e}"
                )));
            }
            let scale = 1.0 + gamma;
            for xi in &mut x {
                *xi *= scale;
            }
            x[j_star] -= gamma;
            if gamma >= gamma_max || x[j_star] < 0.0 {
                x[j_star] = 0.0; // drop step: vertex leaves the support
            }
        }
    }
}

/// Best fixed density matrix: minimizes `sum_t -ln tr(A_t rho)` over
/// density matrices, stopping once the certified gap is at most `tol`.
pub fn best_fixed_state(
    rounds: &[Observable],
    tol: f64,
) -> Result<ComparatorResult<DensityMatrix>> {
    state_solve(rounds, tol, ITER_BUDGET)
}

fn state_solve(
    rounds: &[Observable],
    tol: f64,
    budget: usize,
) -> Result<ComparatorResult<DensityMatrix>> {
    validate_tol(tol)?;
    let Some(first) = rounds.first() else {
        return Err(Error::Invalid("comparator needs at least one round".into()));
    };
    let d = first.dim();
    if let Some(bad) = rounds.iter().find(|a| a.dim() != d) {
        return Err(Error::LengthMismatch { expected: d, got: bad.dim() });
    }
    let tt = rounds.len();
    // rho = sum_k w_k u_k u_k^H, maintained as weighted unit vectors; the
    // starting point I/d is the standard basis with uniform weights.
    let mut weights: Vec<f64> = vec![1.0 / d as f64; d];
    let mut atoms: Vec<DVector<Complex64>> = (0..d)
        .map(|k| DVector::from_fn(d, |i, _| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0)))
        .collect();
    let mut c = vec![0.0; tt];
    let mut b = vec![0.0; tt];
    let mut iterations = 0usize;

    let assemble = |weights: &[f64], atoms: &[DVector<Complex64>]| -> CMatrix {
        let mut rho = CMatrix::zeros(d, d);
        for (w, u) in weights.iter().zip(atoms) {
            rho.gerc(Complex64::new(*w, 0.0), u, u, Complex64::new(1.0, 0.0));
        }
        rho
    };

    loop {
        let s: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= s;
        }
        let rho = assemble(&weights, &atoms);
        for (ct, a) in c.iter_mut().zip(rounds) {
            *ct = trace_product(a.matrix(), &rho);
            if *ct <= 0.0 {
                return Err(Error::Degenerate(
                    "comparator objective is infinite at the current iterate".into(),
                ));
            }
        }
        let mut grad = CMatrix::zeros(d, d);
        for (a, &ct) in rounds.iter().zip(&c) {
            for i in 0..d {
                for j in 0..d {
                    grad[(i, j)] += a.matrix()[(i, j)] / ct;
                }
            }
        }
        let (eigvals, eigvecs) = hermitian_eigen(&grad)?;
        let (top, lam_max) = {
            let mut best = (0, f64::NEG_INFINITY);
            for (i, &v) in eigvals.iter().enumerate() {
                if v > best.1 {
                    best = (i, v);
                }
            }
            best
        };
        let g_rho = trace_product(&grad, &rho);
        let gap = lam_max - g_rho;
        if gap <= tol {
            let objective = -c.iter().map(|&ct| ct.ln()).sum::<f64>();
            return Ok(ComparatorResult {
                point: DensityMatrix::new(rho)?,
                objective,
                gap: gap.max(0.0),
                iterations,
            });
        }
        if iterations >= budget {
            return Err(Error::IterationBudget { budget, gap });
        }
        iterations += 1;

        let mut away = None;
        for (k, u) in atoms.iter().enumerate() {
            if weights[k] > 0.0 {
                let q = u.dotc(&(&grad * u)).re;
                if away.is_none_or(|(_, qj)| q < qj) {
                    away = Some((k, q));
                }
            }
        }
        let (j_star, q_min) = away.expect("state has nonempty support");
        let away_gap = g_rho - q_min;

        if gap >= away_gap {
            // Toward the projector on the gradient's top eigenvector.
            let v: DVector<Complex64> = eigvecs.column(top).into();
            for ((bt, a), &ct) in b.iter_mut().zip(rounds).zip(&c) {
                *bt = v.dotc(&(a.matrix() * &v)).re - ct;
            }
            let gamma = exact_line_search(&c, &b, 1.0)?;
            if gamma <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "conditional gradient stalled at gap {gap:.3e}"
                )));
            }
            for w in &mut weights {
                *w *= 1.0 - gamma;
            }
            // Merge with an existing atom when the projectors coincide
            // (the same top eigenvector recurs near convergence); the
            // certificate is immune to this since it is recomputed from
            // the actual atoms each round.
            let merged = atoms.iter().position(|u| {
                let overlap = u.dotc(&v).norm_sqr();
                overlap >= 1.0 - 1e-14
            });
            match merged {
                Some(k) => weights[k] += gamma,
                None => {
                    atoms.push(v);
                    weights.push(gamma);
                }
            }
        } else {
            let wj = weights[j_star];
            let gamma_max = if wj < 1.0 { (wj / (1.0 - wj)).min(1e16) } else { 1e16 };
            let u = atoms[j_star].clone();
            for ((bt, a), &ct) in b.iter_mut().zip(rounds).zip(&c) {
                *bt = ct - u.dotc(&(a.matrix() * &u)).re;
            }
            let gamma = exact_line_search(&c, &b, gamma_max)?;
            if gamma <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "conditional gradient stalled at gap {gap:.3e}"
                )));
            }
            let scale = 1.0 + gamma;
            for w in &mut weights {
                *w *= scale;
            }
            weights[j_star] -= gamma;
            if gamma >= gamma_max || weights[j_star] < 0.0 {
                weights[j_star] = 0.0;
            }
        }
        // Retire dropped atoms so the away scan stays short.
        if weights.contains(&0.0) {
            let mut kept_w = Vec::with_capacity(weights.len());
            let mut kept_a = Vec::with_capacity(atoms.len());
            for (w, u) in weights.drain(..).zip(atoms.drain(..)) {
                if w > 0.0 {
                    kept_w.push(w);
                    kept_a.push(u);
                }
            }
            weights = kept_w;
            atoms = kept_a;
        }
    }
}

/// Brute-force minimizer of `f` over the 2-simplex: scans `x_1` on a
/// uniform grid of the given step and returns the best point and value.
/// Intended as an independent oracle for tests at small resolutions.
pub fn grid_min_simplex2(
    step: f64,
    mut f: impl FnMut(&SimplexPoint) -> f64,
) -> Result<(SimplexPoint, f64)> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::Invalid(format!("grid step must be in (0,1), got {step}")));
    }
    let n = (1.0 / step).round() as usize;
    let mut best: Option<(SimplexPoint, f64)> = None;
    for i in 0..=n {
        let x1 = (i as f64 / n as f64).min(1.0);
        let p = SimplexPoint::new(vec![x1, 1.0 - x1])?;
        let v = f(&p);
        if v.is_finite() && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((p, v));
        }
    }
    best.ok_or_else(|| Error::Degenerate("objective was infinite on the whole grid".into()))
}

/// Brute-force minimizer of `f` over the 3-simplex, refined hierarchically:
/// a coarse scan at resolution ~1/50 followed by window refinements down
/// to `step`.
pub fn grid_min_simplex3(
    step: f64,
    mut f: impl FnMut(&SimplexPoint) -> f64,
) -> Result<(SimplexPoint, f64)> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::Invalid(format!("grid step must be in (0,1), got {step}")));
    }
    let mut center: [f64; 2] = [1.0 / 3.0, 1.0 / 3.0];
    let mut radius: f64 = 1.0;
    let mut h: f64 = 0.02;
    let mut best: Option<(SimplexPoint, f64)> = None;
    loop {
        let lo = [(center[0] - radius).max(0.0), (center[1] - radius).max(0.0)];
        let hi = [(center[0] + radius).min(1.0), (center[1] + radius).min(1.0)];
        let steps0 = ((hi[0] - lo[0]) / h).ceil() as usize;
        let steps1 = ((hi[1] - lo[1]) / h).ceil() as usize;
        for i in 0..=steps0 {
            let x1 = (lo[0] + i as f64 * h).min(hi[0]);
            for j in 0..=steps1 {
                let x2 = (lo[1] + j as f64 * h).min(hi[1]);
                let x3: f64 = 1.0 - x1 - x2;
                if x3 < 0.0 {
                    continue;
                }
                let p = SimplexPoint::new(vec![x1, x2, x3.max(0.0)])?;
                let v = f(&p);
                if v.is_finite() && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                    best = Some((p, v));
                }
            }
        }
        let Some((ref bp, _)) = best else {
            return Err(Error::Degenerate("objective was infinite on the whole grid".into()));
        };
        if h <= step {
            break;
        }
        center = [bp.coords()[0], bp.coords()[1]];
        radius = 2.5 * h;
        h = (h / 10.0).max(step);
    }
    Ok(best.expect("loop established a best point"))
}

/// Brute-force minimizer of `f` over qubit density matrices via the Bloch
/// ball: a coarse scan followed by window refinements down to `step`
/// resolution in the Bloch coordinates.
pub fn grid_min_bloch2(
    step: f64,
    mut f: impl FnMut(&DensityMatrix) -> f64,
) -> Result<(DensityMatrix, f64)> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::Invalid(format!("grid step must be in (0,1), got {step}")));
    }
    let mut center = [0.0f64; 3];
    let mut radius = 1.0;
    let mut h = 0.05;
    let mut best: Option<([f64; 3], f64)> = None;
    loop {
        let axis = |c: f64| {
            let lo = (c - radius).max(-1.0);
            let hi = (c + radius).min(1.0);
            let n = ((hi - lo) / h).ceil() as usize;
            (lo, hi, n)
        };
        let (lo0, hi0, n0) = axis(center[0]);
        let (lo1, hi1, n1) = axis(center[1]);
        let (lo2, hi2, n2) = axis(center[2]);
        for i in 0..=n0 {
            let rx = (lo0 + i as f64 * h).min(hi0);
            for j in 0..=n1 {
                let ry = (lo1 + j as f64 * h).min(hi1);
                for k in 0..=n2 {
                    let rz = (lo2 + k as f64 * h).min(hi2);
                    if rx * rx + ry * ry + rz * rz > 1.0 {
                        continue;
                    }
                    let rho = DensityMatrix::bloch([rx, ry, rz])?;
                    let v = f(&rho);
                    if v.is_finite() && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                        best = Some(([rx, ry, rz], v));
                    }
                }
            }
        }
        let Some((br, bv)) = best else {
            return Err(Error::Degenerate("objective was infinite on the whole grid".into()));
        };
        if h <= step {
            return Ok((DensityMatrix::bloch(br)?, bv));
        }
        center = br;
        radius = 2.5 * h;
        h = (h / 5.0).max(step);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::ops_loss;
    use crate::quantum::quantum_loss;
    use nalgebra::DMatrix;

    fn days_of(row: &[f64], n: usize) -> Vec<PriceRelatives> {
        (0..n).map(|_| PriceRelatives::new(row.to_vec()).unwrap()).collect()
    }

    #[test]
    fn constant_days_terminate_immediately_at_uniform() {
        let ds = days_of(&[1.0, 1.0, 1.0], 5);
        let res = best_crp(&ds, 1e-8).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.objective.abs() < 1e-9);
        for &xi in res.point.coords() {
            assert!((xi - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dominant_asset_reaches_the_vertex_exactly() {
        let ds = days_of(&[1.0, 0.5], 10);
        let res = best_crp(&ds, 1e-8).unwrap();
        assert_eq!(res.point.coords(), &[1.0, 0.0]);
        assert!(res.objective.abs() < 1e-12);
        assert!(res.gap <= 1e-8);
    }

    #[test]
    fn interior_optimum_matches_closed_form() {
        // 10 days of (1, 0.3) and 10 of (0.2, 1): the stationarity condition
        // 0.7/(0.3+0.7x) = 0.8/(1-0.8x) gives x* = 0.46/1.12.
        let mut ds = days_of(&[1.0, 0.3], 10);
        ds.extend(days_of(&[0.2, 1.0], 10));
        let res = best_crp(&ds, 1e-10).unwrap();
        let x_star = 0.46 / 1.12;
        assert!((res.point.coords()[0] - x_star).abs() < 1e-4, "x = {:?}", res.point.coords());
        let obj_star = -10.0 * ((0.3 + 0.7 * x_star).ln() + (1.0 - 0.8 * x_star).ln());
        assert!((res.objective - obj_star).abs() < 1e-9);
        assert!(res.gap <= 1e-10);
        // The certificate brackets the truth.
        assert!(res.objective >= obj_star - 1e-12);
        assert!(res.objective - res.gap <= obj_star + 1e-12);
    }

    #[test]
    fn objective_equals_recomputed_losses_at_the_point() {
        let mut ds = days_of(&[1.0, 0.4, 0.8], 7);
        ds.extend(days_of(&[0.3, 1.0, 0.5], 9));
        let res = best_crp(&ds, 1e-9).unwrap();
        let direct: f64 = ds.iter().map(|a| ops_loss(a, &res.point).unwrap()).sum();
        assert!((res.objective - direct).abs() < 1e-10);
    }

    #[test]
    fn iteration_budget_is_reported() {
        // In d=2 one exact line search can solve the problem outright (the
        // search direction spans the feasible segment), so a d=3 instance
        // whose optimum sits off every single search chord is needed to
        // exhaust a small budget.
        let mut ds = days_of(&[1.0, 0.2, 0.3], 10);
        ds.extend(days_of(&[0.2, 1.0, 0.3], 10));
        ds.extend(days_of(&[0.3, 0.2, 1.0], 10));
        match crp_solve(&ds, 1e-12, 2) {
            Err(Error::IterationBudget { budget: 2, gap }) => assert!(gap > 0.0),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn grid_oracle_confirms_the_crp_solver() {
        let mut ds = days_of(&[1.0, 0.3], 10);
        ds.extend(days_of(&[0.2, 1.0], 10));
        let res = best_crp(&ds, 1e-9).unwrap();
        let (_, oracle) = grid_min_simplex2(1e-5, |x| {
            ds.iter().map(|a| ops_loss(a, x).map_or(f64::INFINITY, |l| l)).sum()
        })
        .unwrap();
        // Solver must be at least as good as the grid, up to grid curvature.
        assert!(res.objective <= oracle + 1e-6);
        assert!(res.objective >= oracle - 1e-6);
    }

    #[test]
    fn identity_observables_terminate_immediately_at_mixed_state() {
        let a = Observable::new(CMatrix::identity(3, 3)).unwrap();
        let rounds = vec![a; 4];
        let res = best_fixed_state(&rounds, 1e-8).unwrap();
        assert_eq!(res.iterations, 0);
        assert!(res.objective.abs() < 1e-9);
        assert!((res.point.min_eigenvalue() - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn repeated_projector_drives_the_state_to_it() {
        // A_t = |+><+| every round: optimum is the pure state |+><+| with
        // objective 0.
        let half = Complex64::new(0.5, 0.0);
        let proj = DMatrix::from_row_slice(2, 2, &[half, half, half, half]);
        let rounds = vec![Observable::new(proj.clone()).unwrap(); 6];
        let res = best_fixed_state(&rounds, 1e-9).unwrap();
        assert!(res.objective >= -1e-12);
        assert!(res.objective <= 1e-6, "objective {}", res.objective);
        assert!(res.gap <= 1e-9);
        let overlap = trace_product(&proj, res.point.matrix());
        assert!((overlap - 1.0).abs() < 1e-6);
    }

    #[test]
    fn diagonal_observables_match_the_classical_solver() {
        let mk = |a: f64, b: f64| {
            Observable::new(DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(a, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(b, 0.0),
                ],
            ))
            .unwrap()
        };
        let mut rounds = vec![mk(1.0, 0.3); 10];
        rounds.extend(vec![mk(0.2, 1.0); 10]);
        let res_q = best_fixed_state(&rounds, 1e-9).unwrap();

        let mut ds = days_of(&[1.0, 0.3], 10);
        ds.extend(days_of(&[0.2, 1.0], 10));
        let res_c = best_crp(&ds, 1e-9).unwrap();
        assert!(
            (res_q.objective - res_c.objective).abs() < 1e-6,
            "quantum {} vs classical {}",
            res_q.objective,
            res_c.objective
        );
        let direct: f64 =
            rounds.iter().map(|a| quantum_loss(&res_q.point, a).unwrap()).sum();
        assert!((res_q.objective - direct).abs() < 1e-10);
    }

    #[test]
    fn quantum_budget_error_and_validation() {
        // Unevenly weighted non-commuting projectors: the first
        // conditional-gradient chord points along the top eigenvector of
        // 2|+><+| + |0><0|, while the optimum sits at a different Bloch
        // angle, so one step cannot finish.
        let half = Complex64::new(0.5, 0.0);
        let plus = DMatrix::from_row_slice(2, 2, &[half, half, half, half]);
        let zero = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        );
        let mut rounds = vec![Observable::new(plus).unwrap(); 6];
        rounds.extend(vec![Observable::new(zero).unwrap(); 3]);
        assert!(matches!(
            state_solve(&rounds, 1e-12, 1),
            Err(Error::IterationBudget { budget: 1, .. })
        ));
        assert!(best_fixed_state(&[], 1e-6).is_err());
        assert!(best_crp(&days_of(&[1.0, 0.5], 1), 0.0).is_err());
    }

    #[test]
    fn simplex3_grid_oracle_refines_to_a_known_minimum() {
        // f(x) = ||x - (0.5, 0.3, 0.2)||^2 has its simplex minimum at the
        // target point.
        let target = [0.5, 0.3, 0.2];
        let (p, v) = grid_min_simplex3(1e-4, |x| {
            x.coords().iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum()
        })
        .unwrap();
        assert!(v < 1e-7);
        for (a, b) in p.coords().iter().zip(&target) {
            assert!((a - b).abs() < 5e-4);
        }
    }

    #[test]
    fn bloch_grid_oracle_refines_to_a_known_minimum() {
        // Distance to the state with Bloch vector (0.3, -0.2, 0.4).
        let target = DensityMatrix::bloch([0.3, -0.2, 0.4]).unwrap();
        let (rho, v) = grid_min_bloch2(1e-3, |r| {
            let diff = r.matrix() - target.matrix();
            diff.iter().map(|z| z.norm_sqr()).sum()
        })
        .unwrap();
        assert!(v < 1e-5, "best value {v}");
        let diff = rho.matrix() - target.matrix();
        assert!(diff.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1e-5);
    }
}

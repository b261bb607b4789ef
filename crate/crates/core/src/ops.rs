//! Online portfolio selection: log losses over price-relative streams and
//! the three round-based learners (smoothed EG, log-barrier OMD, and
//! log-barrier FTRL with linearized losses).
//!
//! A market round is a vector of *price relatives* `a` (per-asset ratio of
//! closing to opening price). Playing portfolio `x` multiplies wealth by
//! `<a, x>`, so the round's loss is `f(x) = -ln <a, x>` and cumulative loss
//! is the negative log wealth ratio.

use crate::omd::EgSchedule;
use crate::simplex::{
    entropy_prox, lbftrl_leader, logbarrier_prox, NewtonSolveReport, SimplexPoint,
};
use crate::{all_finite, Error, Result};

/// One round of price relatives, normalized at ingestion so the largest
/// entry is exactly 1 (losses shift by a constant under positive scaling,
/// gradients and regret are unchanged).
#[derive(Debug, Clone, PartialEq)]
pub struct PriceRelatives(Vec<f64>);

impl PriceRelatives {
    /// Validates (finite, nonnegative, not identically zero) and rescales
    /// by the maximum entry.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Invalid("price relatives must have dimension >= 1".into()));
        }
        if !all_finite(&raw) {
            return Err(Error::NonFinite("price relatives"));
        }
        if let Some(&bad) = raw.iter().find(|&&v| v < 0.0) {
            return Err(Error::Invalid(format!("negative price relative {bad}")));
        }
        let max = raw.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return Err(Error::Invalid("price relatives are identically zero".into()));
        }
        let scaled = if max == 1.0 { raw } else { raw.iter().map(|v| v / max).collect() };
        Ok(Self(scaled))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `<a, x>`, the round's wealth factor at portfolio `x`.
    pub fn dot(&self, x: &SimplexPoint) -> f64 {
        self.0.iter().zip(x.coords()).map(|(a, b)| a * b).sum()
    }

    /// Spread `max_{i,j} a_i/a_j`; infinite when some entry is zero.
    pub fn max_ratio(&self) -> f64 {
        let min = self.0.iter().cloned().fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            f64::INFINITY
        } else {
            1.0 / min
        }
    }
}

fn check_dims(a: &PriceRelatives, x: &SimplexPoint) -> Result<()> {
    if a.dim() != x.dim() {
        return Err(Error::LengthMismatch { expected: x.dim(), got: a.dim() });
    }
    Ok(())
}

/// Round loss `-ln <a, x>`; fails when the wealth factor is not positive
/// (only possible when `x` sits on the boundary orthogonal to `a`).
pub fn ops_loss(a: &PriceRelatives, x: &SimplexPoint) -> Result<f64> {
    check_dims(a, x)?;
    let v = a.dot(x);
    if v <= 0.0 {
        return Err(Error::Degenerate(format!("<a, x> = {v}, log loss is infinite")));
    }
    Ok(-v.ln())
}

/// Loss gradient `-a / <a, x>`.
pub fn ops_gradient(a: &PriceRelatives, x: &SimplexPoint) -> Result<Vec<f64>> {
    check_dims(a, x)?;
    let v = a.dot(x);
    if v <= 0.0 {
        return Err(Error::Degenerate(format!("<a, x> = {v}, gradient is undefined")));
    }
    Ok(a.values().iter().map(|&ai| -ai / v).collect())
}

/// Squared local dual norm of the loss gradient at `x`:
/// `sum_i a_i^2 x_i^2 / <a, x>^2`. Always at most 1.
pub fn dual_norm_sq(a: &PriceRelatives, x: &SimplexPoint) -> Result<f64> {
    check_dims(a, x)?;
    let v = a.dot(x);
    if v <= 0.0 {
        return Err(Error::Degenerate(format!("<a, x> = {v}, dual norm is undefined")));
    }
    Ok(a.values().iter().zip(x.coords()).map(|(&ai, &xi)| (ai * xi / v).powi(2)).sum())
}

/// Local-norm distance `|<a, x - y>| / <a, x>` between portfolios, measured
/// in the Hessian norm of the round's loss at `x`.
pub fn local_step_norm(a: &PriceRelatives, x: &SimplexPoint, y: &SimplexPoint) -> f64 {
    let num: f64 = a.values().iter().zip(x.coords().iter().zip(y.coords())).map(|(&ai, (&xi, &yi))| ai * (xi - yi)).sum();
    (num / a.dot(x)).abs()
}

/// Mixes price relatives toward the all-ones vector:
/// `a_hat = (1 - gamma/d) a + (gamma/d) 1`. Entries land in `[gamma/d, 1]`,
/// so the spread of `a_hat` is at most `d/gamma`.
pub fn smooth_price_relatives(a: &PriceRelatives, gamma: f64) -> Result<PriceRelatives> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Invalid(format!("mixing weight must be in (0,1), got {gamma}")));
    }
    let d = a.dim() as f64;
    let w = gamma / d;
    PriceRelatives::new(a.values().iter().map(|&ai| (1.0 - w) * ai + w).collect())
}

/// State of the smoothed-EG learner: the played portfolio `x_t`, the
/// internal entropy-mirror-descent iterate `x_hat_t`, and the schedule.
/// The invariant `x_t = (1 - gamma) x_hat_t + (gamma/d) e` holds at all
/// times.
#[derive(Debug, Clone)]
pub struct EgState {
    x: SimplexPoint,
    x_hat: SimplexPoint,
    gamma: f64,
    eta: f64,
    round: usize,
}

impl EgState {
    /// Fresh state at the barycenter. Requires `gamma` in (0,1) and
    /// `eta` in (0, gamma/d]; the horizon-tuned [`crate::omd::eg_schedule`]
    /// always satisfies this strictly.
    pub fn new(d: usize, schedule: EgSchedule) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid(format!("dimension must be >= 2, got {d}")));
        }
        let EgSchedule { gamma, eta } = schedule;
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::Invalid(format!("mixing weight must be in (0,1), got {gamma}")));
        }
        if !(eta > 0.0 && eta <= gamma / d as f64) {
            return Err(Error::Invalid(format!(
                "step size must be in (0, gamma/d] = (0, {}], got {eta}",
                gamma / d as f64
            )));
        }
        let u = SimplexPoint::uniform(d)?;
        Ok(Self { x: u.clone(), x_hat: u, gamma, eta, round: 0 })
    }

    /// The portfolio played this round.
    pub fn play(&self) -> &SimplexPoint {
        &self.x
    }

    /// The internal mirror-descent iterate.
    pub fn hat(&self) -> &SimplexPoint {
        &self.x_hat
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn round(&self) -> usize {
        self.round
    }
}

/// One smoothed-EG round. Besides the loss actually suffered (at the mixed
/// iterate, on the raw prices), the surrogate sequence's diagnostics are
/// reported: its loss, its look-ahead loss, and its local-norm step length,
/// all with respect to the smoothed prices.
#[derive(Debug, Clone)]
pub struct EgRound {
    pub state: EgState,
    pub loss: f64,
    pub hat_loss: f64,
    pub hat_lookahead_loss: f64,
    pub hat_step_norm: f64,
}

/// Plays one round of smoothed EG: suffer `-ln <a_t, x_t>`, take an entropy
/// prox step on the smoothed loss at `x_hat_t`, and mix the new internal
/// iterate back toward the barycenter.
pub fn eg_round(state: EgState, a: &PriceRelatives) -> Result<EgRound> {
    check_dims(a, &state.x)?;
    let d = state.x.dim();
    let a_hat = smooth_price_relatives(a, state.gamma)?;
    let loss = ops_loss(a, &state.x)?;
    let hat_loss = ops_loss(&a_hat, &state.x_hat)?;
    let g = ops_gradient(&a_hat, &state.x_hat)?;
    let x_hat_next = entropy_prox(&state.x_hat, &g, state.eta)?;
    let hat_lookahead_loss = ops_loss(&a_hat, &x_hat_next)?;
    let hat_step_norm = local_step_norm(&a_hat, &state.x_hat, &x_hat_next);
    let w = state.gamma / d as f64;
    let x_next = SimplexPoint::new(
        x_hat_next.coords().iter().map(|&xi| (1.0 - state.gamma) * xi + w).collect(),
    )?;
    Ok(EgRound {
        state: EgState {
            x: x_next,
            x_hat: x_hat_next,
            gamma: state.gamma,
            eta: state.eta,
            round: state.round + 1,
        },
        loss,
        hat_loss,
        hat_lookahead_loss,
        hat_step_norm,
    })
}

/// One log-barrier OMD round.
#[derive(Debug, Clone)]
pub struct LbOmdRound {
    pub next: SimplexPoint,
    pub loss: f64,
    /// `||x_t - x_{t+1}||` in the loss-Hessian norm at `x_t`.
    pub r_t: f64,
    /// `f_t(x_{t+1})`, the loss of the next iterate on this round.
    pub lookahead_loss: f64,
    pub newton: NewtonSolveReport,
}

/// Plays one round of OMD with the log-barrier mirror map: suffer
/// `-ln <a_t, x_t>`, then prox along the exact loss gradient.
pub fn lbomd_round(x: &SimplexPoint, a: &PriceRelatives, eta: f64) -> Result<LbOmdRound> {
    let loss = ops_loss(a, x)?;
    let g = ops_gradient(a, x)?;
    let (next, newton) = logbarrier_prox(x, &g, eta)?;
    let r_t = local_step_norm(a, x, &next);
    let lookahead_loss = ops_loss(a, &next)?;
    Ok(LbOmdRound { next, loss, r_t, lookahead_loss, newton })
}

/// State of log-barrier FTRL with linearized losses: the current play and
/// the running sum of loss gradients at the played points.
#[derive(Debug, Clone)]
pub struct LbFtrlState {
    x: SimplexPoint,
    cum_grad: Vec<f64>,
    round: usize,
}

impl LbFtrlState {
    /// Fresh state: the first play is the barycenter, the minimizer of the
    /// log-barrier regularizer.
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self { x: SimplexPoint::uniform(d)?, cum_grad: vec![0.0; d], round: 0 })
    }

    pub fn play(&self) -> &SimplexPoint {
        &self.x
    }

    pub fn cum_grad(&self) -> &[f64] {
        &self.cum_grad
    }

    pub fn round(&self) -> usize {
        self.round
    }
}

/// One log-barrier FTRL round.
#[derive(Debug, Clone)]
pub struct LbFtrlRound {
    pub state: LbFtrlState,
    pub loss: f64,
    /// Squared local dual norm of this round's gradient at the played point.
    pub dual_norm_sq: f64,
    /// `f_t(x_{t+1})`.
    pub lookahead_loss: f64,
    pub newton: NewtonSolveReport,
}

/// Plays one FTRL round: suffer the loss, add the gradient at the played
/// point to the running sum, and move to the regularized leader.
pub fn lbftrl_round(state: LbFtrlState, a: &PriceRelatives, eta: f64) -> Result<LbFtrlRound> {
    check_dims(a, &state.x)?;
    let loss = ops_loss(a, &state.x)?;
    let g = ops_gradient(a, &state.x)?;
    let dn = dual_norm_sq(a, &state.x)?;
    let mut cum = state.cum_grad;
    for (c, gi) in cum.iter_mut().zip(&g) {
        *c += gi;
    }
    let (next, newton) = lbftrl_leader(&cum, eta)?;
    let lookahead_loss = ops_loss(a, &next)?;
    Ok(LbFtrlRound {
        state: LbFtrlState { x: next, cum_grad: cum, round: state.round + 1 },
        loss,
        dual_norm_sq: dn,
        lookahead_loss,
        newton,
    })
}

/// Default FTRL step size `min(1/4, sqrt(d ln T / (2T)))`: the unconstrained
/// minimizer of the regret guarantee, capped at the validity threshold 1/4.
pub fn lbftrl_default_eta(t: usize, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Invalid(format!("dimension must be >= 2, got {d}")));
    }
    if t < 2 {
        return Err(Error::Invalid(format!("horizon must be >= 2, got {t}")));
    }
    let (tf, df) = (t as f64, d as f64);
    Ok((df * tf.ln() / (2.0 * tf)).sqrt().min(0.25))
}

/// Regret guarantee of smoothed EG under its horizon-tuned schedule:
/// `2^{5/3} T^{2/3} d^{1/3} (ln d)^{2/3} + 2^{-2/3} T^{1/3} d^{2/3} (ln d)^{4/3}`.
pub fn eg_regret_bound(t: usize, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Invalid(format!("dimension must be >= 2, got {d}")));
    }
    let (tf, df) = (t as f64, d as f64);
    let ln_d = df.ln();
    if !(tf * ln_d > 4.0 * df) {
        return Err(Error::Invalid(format!(
            "horizon {t} too short for the EG guarantee with d = {d}"
        )));
    }
    Ok(2f64.powf(5.0 / 3.0) * tf.powf(2.0 / 3.0) * df.powf(1.0 / 3.0) * ln_d.powf(2.0 / 3.0)
        + 2f64.powf(-2.0 / 3.0) * tf.powf(1.0 / 3.0) * df.powf(2.0 / 3.0) * ln_d.powf(4.0 / 3.0))
}

/// Regret guarantee of the log-barrier learners under [`crate::omd::lb_schedule`]:
/// `2 sqrt(T d ln T) + d ln T + 2`, for `T > d`.
pub fn lb_regret_bound(t: usize, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Invalid(format!("dimension must be >= 2, got {d}")));
    }
    if t <= d {
        return Err(Error::Invalid(format!("guarantee needs T > d, got T = {t}, d = {d}")));
    }
    let (tf, df) = (t as f64, d as f64);
    Ok(2.0 * (tf * df * tf.ln()).sqrt() + df * tf.ln() + 2.0)
}

/// Regret guarantee of log-barrier FTRL with linearized losses:
/// `d ln T / eta + 2 eta T + 2`, valid for `0 < eta <= 1/4`.
pub fn lbftrl_regret_bound(t: usize, d: usize, eta: f64) -> Result<f64> {
    if d < 2 || t < 2 {
        return Err(Error::Invalid(format!("need d >= 2 and T >= 2, got d = {d}, T = {t}")));
    }
    if !(eta > 0.0 && eta <= 0.25) {
        return Err(Error::Invalid(format!("guarantee needs 0 < eta <= 1/4, got {eta}")));
    }
    let (tf, df) = (t as f64, d as f64);
    Ok(df * tf.ln() / eta + 2.0 * eta * tf + 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn price_relatives_normalize_to_unit_max() {
        let a = PriceRelatives::new(vec![2.0, 1.0, 0.5]).unwrap();
        assert_eq!(a.values(), &[1.0, 0.5, 0.25]);
        assert_eq!(a.values().iter().cloned().fold(0.0, f64::max), 1.0);
        assert!(close(a.max_ratio(), 4.0, 1e-15));

        assert!(PriceRelatives::new(vec![]).is_err());
        assert!(PriceRelatives::new(vec![0.0, 0.0]).is_err());
        assert!(PriceRelatives::new(vec![-1.0, 2.0]).is_err());
        assert!(PriceRelatives::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn loss_and_gradient_small_cases() {
        let x = SimplexPoint::uniform(2).unwrap();
        let ones = PriceRelatives::new(vec![1.0, 1.0]).unwrap();
        assert!(close(ops_loss(&ones, &x).unwrap(), 0.0, 1e-15));
        let g = ops_gradient(&ones, &x).unwrap();
        assert!(close(g[0], -1.0, 1e-15) && close(g[1], -1.0, 1e-15));

        let a = PriceRelatives::new(vec![1.0, 0.5]).unwrap();
        // <a, x> = 0.75.
        assert!(close(ops_loss(&a, &x).unwrap(), -(0.75f64.ln()), 1e-15));
        let g = ops_gradient(&a, &x).unwrap();
        assert!(close(g[0], -1.0 / 0.75, 1e-15) && close(g[1], -0.5 / 0.75, 1e-15));
    }

    #[test]
    fn degenerate_inner_product_is_an_error() {
        let a = PriceRelatives::new(vec![1.0, 0.0]).unwrap();
        let x = SimplexPoint::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(ops_loss(&a, &x), Err(Error::Degenerate(_))));
        assert!(matches!(ops_gradient(&a, &x), Err(Error::Degenerate(_))));
    }

    #[test]
    fn dual_norm_is_one_for_single_asset_days() {
        let a = PriceRelatives::new(vec![1.0, 0.0, 0.0]).unwrap();
        let x = SimplexPoint::new(vec![0.3, 0.3, 0.4]).unwrap();
        assert!(close(dual_norm_sq(&a, &x).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn smoothing_bounds_the_spread() {
        let a = PriceRelatives::new(vec![1.0, 1e-12, 0.0]).unwrap();
        let gamma = 0.3;
        let s = smooth_price_relatives(&a, gamma).unwrap();
        let d = 3.0;
        for &v in s.values() {
            assert!(v >= gamma / d - 1e-12 && v <= 1.0);
        }
        assert!(s.max_ratio() <= d / gamma + 1e-6);
    }

    #[test]
    fn eg_round_preserves_mixing_identity_exactly() {
        let sched = EgSchedule { gamma: 0.2, eta: 0.05 };
        let mut state = EgState::new(3, sched).unwrap();
        let days = [vec![1.0, 0.4, 0.7], vec![0.2, 1.0, 0.9], vec![0.6, 0.6, 1.0]];
        for day in &days {
            let a = PriceRelatives::new(day.clone()).unwrap();
            let out = eg_round(state, &a).unwrap();
            state = out.state;
            let w = state.gamma() / 3.0;
            for (xi, hi) in state.play().coords().iter().zip(state.hat().coords()) {
                let expect = (1.0 - state.gamma()) * hi + w;
                assert!((xi - expect).abs() <= 1e-15);
                assert!(*xi >= w * (1.0 - state.gamma()));
            }
        }
        assert_eq!(state.round(), 3);
    }

    #[test]
    fn eg_round_matches_two_step_hand_computation() {
        // d = 2, gamma = 0.2, eta = 0.1 (= gamma/d, the inclusive edge of
        // the admissible window). All quantities recomputed inline from the
        // update formulas, independently of the library code paths.
        let gamma = 0.2;
        let eta = 0.1;
        let a1 = PriceRelatives::new(vec![1.0, 0.5]).unwrap();
        let a2 = PriceRelatives::new(vec![0.5, 1.0]).unwrap();

        let state = EgState::new(2, EgSchedule { gamma, eta }).unwrap();
        let out1 = eg_round(state, &a1).unwrap();
        let out2 = eg_round(out1.state.clone(), &a2).unwrap();

        // Hand computation, round 1.
        let w = gamma / 2.0;
        let ah1 = [(1.0 - w) * 1.0 + w, (1.0 - w) * 0.5 + w]; // (1.0, 0.55)
        let dot1 = 0.5 * ah1[0] + 0.5 * ah1[1];
        let e1 = [0.5 * (eta * ah1[0] / dot1).exp(), 0.5 * (eta * ah1[1] / dot1).exp()];
        let s1 = e1[0] + e1[1];
        let xh2 = [e1[0] / s1, e1[1] / s1];
        let x2 = [(1.0 - gamma) * xh2[0] + w, (1.0 - gamma) * xh2[1] + w];
        assert!(close(out1.loss, -(0.75f64.ln()), 1e-14));
        assert!(close(out1.hat_loss, -dot1.ln(), 1e-14));
        for i in 0..2 {
            assert!(close(out1.state.hat().coords()[i], xh2[i], 1e-14));
            assert!(close(out1.state.play().coords()[i], x2[i], 1e-14));
        }

        // Hand computation, round 2.
        let ah2 = [(1.0 - w) * 0.5 + w, (1.0 - w) * 1.0 + w]; // (0.55, 1.0)
        let dot2 = ah2[0] * xh2[0] + ah2[1] * xh2[1];
        let e2 = [xh2[0] * (eta * ah2[0] / dot2).exp(), xh2[1] * (eta * ah2[1] / dot2).exp()];
        let s2 = e2[0] + e2[1];
        let xh3 = [e2[0] / s2, e2[1] / s2];
        let x3 = [(1.0 - gamma) * xh3[0] + w, (1.0 - gamma) * xh3[1] + w];
        assert!(close(out2.loss, -(0.5 * x2[0] + 1.0 * x2[1]).ln(), 1e-14));
        for i in 0..2 {
            assert!(close(out2.state.hat().coords()[i], xh3[i], 1e-14));
            assert!(close(out2.state.play().coords()[i], x3[i], 1e-14));
        }
    }

    #[test]
    fn eg_state_validates_schedule_window() {
        assert!(EgState::new(2, EgSchedule { gamma: 0.2, eta: 0.1 }).is_ok()); // eta = gamma/d
        assert!(EgState::new(2, EgSchedule { gamma: 0.2, eta: 0.11 }).is_err());
        assert!(EgState::new(2, EgSchedule { gamma: 1.0, eta: 0.1 }).is_err());
        assert!(EgState::new(2, EgSchedule { gamma: 0.2, eta: 0.0 }).is_err());
        assert!(EgState::new(1, EgSchedule { gamma: 0.2, eta: 0.05 }).is_err());
    }

    #[test]
    fn lbomd_round_reports_consistent_diagnostics() {
        let x = SimplexPoint::uniform(2).unwrap();
        let a = PriceRelatives::new(vec![1.0, 0.5]).unwrap();
        let out = lbomd_round(&x, &a, 0.3).unwrap();
        assert!(close(out.loss, -(0.75f64.ln()), 1e-15));
        assert!(out.next.is_interior());
        // The update moves toward the better asset.
        assert!(out.next.coords()[0] > 0.5);
        let r = local_step_norm(&a, &x, &out.next);
        assert!(close(out.r_t, r, 0.0));
        assert!(close(out.lookahead_loss, ops_loss(&a, &out.next).unwrap(), 0.0));
        assert!(out.newton.residual <= 1e-12);
    }

    #[test]
    fn lbftrl_first_play_is_uniform_and_round_advances() {
        let state = LbFtrlState::new(4).unwrap();
        assert_eq!(state.play().coords(), &[0.25; 4]);
        let a = PriceRelatives::new(vec![1.0, 0.2, 0.2, 0.2]).unwrap();
        let out = lbftrl_round(state, &a, 0.1).unwrap();
        // Leader tilts toward the winning asset.
        assert!(out.state.play().coords()[0] > 0.25);
        assert!(out.dual_norm_sq <= 1.0 + 1e-10);
        assert_eq!(out.state.round(), 1);
        // Cumulative gradient is the single round's gradient.
        let g = ops_gradient(&a, &SimplexPoint::uniform(4).unwrap()).unwrap();
        for (c, gi) in out.state.cum_grad().iter().zip(&g) {
            assert!(close(*c, *gi, 1e-15));
        }
    }

    #[test]
    fn default_ftrl_eta_caps_at_quarter() {
        // Long horizon: interior value sqrt(d lnT / 2T) < 1/4.
        let eta = lbftrl_default_eta(2000, 5).unwrap();
        assert!(close(eta, (5.0 * 2000f64.ln() / 4000.0).sqrt(), 1e-15));
        // Short horizon: capped.
        assert!(close(lbftrl_default_eta(2, 10).unwrap(), 0.25, 0.0));
    }

    #[test]
    fn bound_formulas_and_domains() {
        let b = lb_regret_bound(2000, 5).unwrap();
        let expect = 2.0 * (2000.0 * 5.0 * 2000f64.ln()).sqrt() + 5.0 * 2000f64.ln() + 2.0;
        assert!(close(b, expect, 1e-12));
        assert!(lb_regret_bound(5, 5).is_err());

        let b = eg_regret_bound(5000, 10).unwrap();
        let (tf, df) = (5000f64, 10f64);
        let expect = 2f64.powf(5.0 / 3.0)
            * tf.powf(2.0 / 3.0)
            * df.powf(1.0 / 3.0)
            * df.ln().powf(2.0 / 3.0)
            + 2f64.powf(-2.0 / 3.0) * tf.powf(1.0 / 3.0) * df.powf(2.0 / 3.0) * df.ln().powf(4.0 / 3.0);
        assert!(close(b, expect, 1e-12));
        assert!(eg_regret_bound(17, 10).is_err());

        let b = lbftrl_regret_bound(2000, 5, 0.1).unwrap();
        assert!(close(b, 5.0 * 2000f64.ln() / 0.1 + 0.2 * 2000.0 + 2.0, 1e-12));
        assert!(lbftrl_regret_bound(2000, 5, 0.3).is_err());
        assert!(lbftrl_regret_bound(2000, 5, 0.0).is_err());
    }
}

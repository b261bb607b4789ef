//! Generic online mirror descent: the mirror-map abstraction, the one-round
//! update, step-size schedules, and run recording.
//!
//! The engine is deliberately loss-agnostic: a round consumes the loss
//! *gradient* at the current iterate, so any loss family can drive it. The
//! regret guarantee `R_T <= D_h(x, x_1)/eta + T L eta / (1 - L eta)`
//! (see [`omd_regret_bound`]) applies whenever the losses are 1-self-concordant
//! barriers that are `L`-smooth relative to the mirror map `h`; the
//! [`crate::verify`] module checks those properties numerically.

use serde::{Deserialize, Serialize};

use crate::simplex::NewtonSolveReport;
use crate::{Error, Result};

/// A mirror map `h`: the strictly convex reference function whose Bregman
/// divergence regularizes each update, together with the constrained prox
/// step it induces on its domain.
pub trait MirrorMap {
    /// Decision variable (simplex point, density matrix, ...).
    type Point: Clone;
    /// Loss-gradient representation paired with `Point`.
    type Gradient;

    /// Is `x` in the interior of the feasible set (where `h` is smooth)?
    fn is_interior(&self, x: &Self::Point) -> bool;

    /// Are all entries of `g` finite?
    fn gradient_finite(&self, g: &Self::Gradient) -> bool;

    /// Gradient of the mirror map at an interior point.
    fn grad_h(&self, x: &Self::Point) -> Self::Gradient;

    /// Bregman divergence `D_h(x, from)`; may be `+inf` on the boundary.
    fn bregman(&self, x: &Self::Point, from: &Self::Point) -> f64;

    /// Solves `argmin_y eta*<g, y> + D_h(y, x)` over the feasible set.
    fn prox(&self, x: &Self::Point, g: &Self::Gradient, eta: f64) -> Result<ProxStep<Self::Point>>;
}

/// Result of one prox step, with solver diagnostics when a multiplier
/// equation was solved (entropy steps are closed-form and carry none).
#[derive(Debug, Clone)]
pub struct ProxStep<P> {
    pub point: P,
    pub newton: Option<NewtonSolveReport>,
}

/// Mirror-descent state: current iterate, step size, and round counter.
///
/// `smoothness` is the relative-smoothness constant `L` the step size was
/// chosen against; construction enforces `0 < eta < 1/L`, the validity
/// window of the regret guarantee.
#[derive(Debug, Clone)]
pub struct OmdState<P> {
    pub iterate: P,
    pub eta: f64,
    /// Number of completed rounds (0 before the first update).
    pub round: usize,
    pub smoothness: f64,
}

impl<P> OmdState<P> {
    pub fn new(iterate: P, eta: f64, smoothness: f64) -> Result<Self> {
        if !(smoothness > 0.0) || !smoothness.is_finite() {
            return Err(Error::Invalid(format!(
                "relative-smoothness constant must be positive and finite, got {smoothness}"
            )));
        }
        if !(eta > 0.0 && eta < 1.0 / smoothness) {
            return Err(Error::Invalid(format!(
                "step size must satisfy 0 < eta < 1/L = {}, got {eta}",
                1.0 / smoothness
            )));
        }
        Ok(Self { iterate, eta, round: 0, smoothness })
    }
}

/// One round of mirror descent together with prox diagnostics.
#[derive(Debug, Clone)]
pub struct OmdRound<P> {
    pub state: OmdState<P>,
    pub newton: Option<NewtonSolveReport>,
}

/// Plays one round: `x_{t+1} = argmin_x eta*<g_t, x> + D_h(x, x_t)`.
///
/// `grad` must be the loss gradient evaluated at `state.iterate`. Fails if
/// the gradient has non-finite entries or the iterate has left the interior
/// of the feasible set.
pub fn omd_round<M: MirrorMap>(
    map: &M,
    state: OmdState<M::Point>,
    grad: &M::Gradient,
) -> Result<OmdRound<M::Point>> {
    if !map.gradient_finite(grad) {
        return Err(Error::NonFinite("loss gradient"));
    }
    if !map.is_interior(&state.iterate) {
        return Err(Error::Degenerate(
            "current iterate is not in the interior of the feasible set".into(),
        ));
    }
    let step = map.prox(&state.iterate, grad, state.eta)?;
    Ok(OmdRound {
        state: OmdState {
            iterate: step.point,
            eta: state.eta,
            round: state.round + 1,
            smoothness: state.smoothness,
        },
        newton: step.newton,
    })
}

/// Regret guarantee of mirror descent after `t` rounds:
/// `d_h/eta + t * l * eta / (1 - l * eta)`, valid for `0 < eta < 1/l`,
/// where `d_h` bounds the Bregman divergence from the first iterate to the
/// comparator and `l` is the relative-smoothness constant of the losses.
pub fn omd_regret_bound(d_h: f64, l: f64, eta: f64, t: usize) -> Result<f64> {
    if !(d_h >= 0.0) || !d_h.is_finite() {
        return Err(Error::Invalid(format!("Bregman radius must be nonnegative, got {d_h}")));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Invalid(format!("smoothness constant must be positive, got {l}")));
    }
    if !(eta > 0.0 && eta < 1.0 / l) {
        return Err(Error::Invalid(format!("step size {eta} outside (0, 1/L) = (0, {})", 1.0 / l)));
    }
    Ok(d_h / eta + t as f64 * l * eta / (1.0 - l * eta))
}

/// Which numerator the smoothed-EG step size uses. The two published forms
/// of the schedule differ in this factor; `SqrtLogDim` is the one consistent
/// with the derivation of the regret bound and is the default everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EgEtaVariant {
    /// `eta = gamma*sqrt(ln d) / (sqrt(T d gamma) + d*sqrt(ln d))`
    #[default]
    SqrtLogDim,
    /// `eta = gamma*sqrt(d) / (sqrt(T d gamma) + d*sqrt(ln d))`
    SqrtDim,
}

/// Mixing weight and step size for the smoothed-EG learner.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EgSchedule {
    pub gamma: f64,
    pub eta: f64,
}

/// Horizon-tuned schedule for smoothed EG:
/// `gamma = 2^{2/3} d^{1/3} / (T ln d)^{1/3}` with `eta` per `variant`.
///
/// Requires `d >= 2` and `T ln d > 4 d` (equivalently `gamma < 1`).
pub fn eg_schedule(t: usize, d: usize, variant: EgEtaVariant) -> Result<EgSchedule> {
    if d < 2 {
        return Err(Error::Invalid(format!("dimension must be >= 2, got {d}")));
    }
    let (tf, df) = (t as f64, d as f64);
    let ln_d = df.ln();
    if !(tf * ln_d > 4.0 * df) {
        return Err(Error::Invalid(format!(
            "horizon {t} too short for the EG schedule with d = {d}: need T > 4d/ln d = {:.2}",
            4.0 * df / ln_d
        )));
    }
    let gamma = 2f64.powf(2.0 / 3.0) * df.powf(1.0 / 3.0) / (tf * ln_d).powf(1.0 / 3.0);
    debug_assert!(gamma > 0.0 && gamma < 1.0);
    let numerator = match variant {
        EgEtaVariant::SqrtLogDim => gamma * ln_d.sqrt(),
        EgEtaVariant::SqrtDim => gamma * df.sqrt(),
    };
    let eta = numerator / ((tf * df * gamma).sqrt() + df * ln_d.sqrt());
    // The update is a mirror-descent step on losses that are (d/gamma)-smooth
    // relative to entropy, so eta must stay below gamma/d. This holds
    // unconditionally for SqrtLogDim; the SqrtDim form can violate it near
    // the minimum admissible horizon.
    if !(eta > 0.0 && eta < gamma / df) {
        return Err(Error::Invalid(format!(
            "schedule variant produced eta = {eta} outside (0, gamma/d) = (0, {}); \
             use a longer horizon or the SqrtLogDim variant",
            gamma / df
        )));
    }
    Ok(EgSchedule { gamma, eta })
}

/// Horizon-tuned step size for the log-barrier learners:
/// `eta = sqrt(d ln T) / (sqrt(T) + sqrt(d ln T))`, requiring `T > d >= 2`.
pub fn lb_schedule(t: usize, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Invalid(format!("dimension must be >= 2, got {d}")));
    }
    if t <= d {
        return Err(Error::Invalid(format!(
            "horizon {t} too short for the log-barrier schedule: need T > d = {d}"
        )));
    }
    let (tf, df) = (t as f64, d as f64);
    let root = (df * tf.ln()).sqrt();
    let eta = root / (tf.sqrt() + root);
    debug_assert!(eta > 0.0 && eta < 1.0);
    Ok(eta)
}

/// Per-round record of a run. `r_t` is the local-norm step length
/// `||x_t - x_{t+1}||_{x_t}` measured in the Hessian norm of the round's
/// loss; `lookahead_loss` is `f_t(x_{t+1})`; `dual_norm_sq` is the squared
/// local dual norm of the loss gradient. All three are optional diagnostics
/// used by the verification suites.
#[derive(Debug, Clone, Serialize)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    pub loss: f64,
    pub cum_loss: f64,
    pub r_t: Option<f64>,
    pub lookahead_loss: Option<f64>,
    pub dual_norm_sq: Option<f64>,
}

/// Compensated or plain running sum. Losses are always accumulated in
/// ascending round order; Kahan compensation is an opt-in for long runs.
#[derive(Debug, Clone, Copy)]
struct Accumulator {
    sum: f64,
    comp: f64,
    kahan: bool,
}

impl Accumulator {
    fn new(kahan: bool) -> Self {
        Self { sum: 0.0, comp: 0.0, kahan }
    }

    fn add(&mut self, v: f64) {
        if self.kahan {
            let y = v - self.comp;
            let t = self.sum + y;
            self.comp = (t - self.sum) - y;
            self.sum = t;
        } else {
            self.sum += v;
        }
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Recorded run: per-round losses and diagnostics, plus (once computed)
/// the per-round losses of the offline comparator the regret is measured
/// against.
#[derive(Debug, Clone)]
pub struct ExperimentLog {
    records: Vec<RoundRecord>,
    acc: Accumulator,
    comparator_losses: Option<Vec<f64>>,
}

impl Default for ExperimentLog {
    fn default() -> Self {
        Self::new()
    }
}

impl ExperimentLog {
    /// Plain 64-bit accumulation in ascending round order.
    pub fn new() -> Self {
        Self { records: Vec::new(), acc: Accumulator::new(false), comparator_losses: None }
    }

    /// Kahan-compensated accumulation (same round order).
    pub fn with_kahan() -> Self {
        Self { records: Vec::new(), acc: Accumulator::new(true), comparator_losses: None }
    }

    pub fn push(&mut self, loss: f64) -> Result<()> {
        self.push_detailed(loss, None, None, None)
    }

    pub fn push_detailed(
        &mut self,
        loss: f64,
        r_t: Option<f64>,
        lookahead_loss: Option<f64>,
        dual_norm_sq: Option<f64>,
    ) -> Result<()> {
        if !loss.is_finite() {
            return Err(Error::NonFinite("recorded loss"));
        }
        self.acc.add(loss);
        self.records.push(RoundRecord {
            round: self.records.len() + 1,
            loss,
            cum_loss: self.acc.value(),
            r_t,
            lookahead_loss,
            dual_norm_sq,
        });
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        self.records.len()
    }

    pub fn records(&self) -> &[RoundRecord] {
        &self.records
    }

    pub fn cumulative_loss(&self) -> f64 {
        self.acc.value()
    }

    /// Stores the comparator's per-round losses; must match the number of
    /// recorded rounds.
    pub fn set_comparator_losses(&mut self, losses: Vec<f64>) -> Result<()> {
        if losses.len() != self.records.len() {
            return Err(Error::LengthMismatch { expected: self.records.len(), got: losses.len() });
        }
        if !crate::all_finite(&losses) {
            return Err(Error::NonFinite("comparator losses"));
        }
        self.comparator_losses = Some(losses);
        Ok(())
    }

    pub fn comparator_losses(&self) -> Option<&[f64]> {
        self.comparator_losses.as_deref()
    }

    /// Total comparator loss, accumulated in the same mode as the run.
    pub fn comparator_value(&self) -> Option<f64> {
        self.comparator_losses.as_ref().map(|ls| {
            let mut acc = Accumulator::new(self.acc.kahan);
            for &l in ls {
                acc.add(l);
            }
            acc.value()
        })
    }

    /// Regret after each round: cumulative loss minus the comparator's
    /// cumulative loss through the same round. Not monotone in general.
    pub fn regret_trace(&self) -> Result<Vec<f64>> {
        let cmp = self
            .comparator_losses
            .as_ref()
            .ok_or_else(|| Error::Invalid("comparator losses not set".into()))?;
        let mut acc = Accumulator::new(self.acc.kahan);
        Ok(self
            .records
            .iter()
            .zip(cmp)
            .map(|(rec, &l)| {
                acc.add(l);
                rec.cum_loss - acc.value()
            })
            .collect())
    }

    pub fn final_regret(&self) -> Result<f64> {
        self.regret_trace().map(|tr| tr.last().copied().unwrap_or(0.0))
    }
}

//! Numerical property checks for the portfolio and quantum log losses and
//! their mirror maps.
//!
//! Each check evaluates one inequality on a stream of samples — seeded
//! random interior points plus a few crafted near-extremal instances — and
//! reports the worst signed violation against a tolerance. The constants in
//! the inequalities can be rescaled to build negative controls: cutting a
//! constant below its true tight value must flip the check to failing,
//! which is how the test suite demonstrates the checks have teeth.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::comparator;
use crate::omd::{eg_schedule, lb_schedule, EgEtaVariant, ExperimentLog, MirrorMap};
use crate::ops::{
    eg_round, lbftrl_default_eta, lbftrl_round, lbomd_round, ops_loss, smooth_price_relatives,
    EgState, LbFtrlState, PriceRelatives,
};
use crate::quantum::{
    self, qlbomd_round, quantum_loss, trace_product, CMatrix, DensityMatrix, LogDetMap, Observable,
};
use crate::simplex::{EntropyMap, LogBarrierMap, SimplexPoint};
use crate::{Error, Result};

/// Tolerance for the gradient-pair and Hessian relative-smoothness checks.
pub const SMOOTHNESS_TOL: f64 = 1e-8;
/// Tolerance (relative) for the third-derivative control check.
pub const SELF_CONCORDANCE_TOL: f64 = 1e-8;
/// Tolerance (relative) for the barrier inequality, which is an exact
/// identity for these losses.
pub const BARRIER_TOL: f64 = 1e-10;
/// Tolerance for the strengthened gradient-monotonicity check.
pub const MONOTONICITY_TOL: f64 = 1e-8;
/// Tolerance for per-round step-length bounds.
pub const STEP_NORM_TOL: f64 = 1e-8;
/// Tolerance for the per-round squared dual-norm bound.
pub const DUAL_NORM_TOL: f64 = 1e-10;
/// Tolerance for the prefix look-ahead regret bound.
pub const LOOKAHEAD_TOL: f64 = 1e-8;

/// Outcome of one property check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    /// Maximum of `lhs - rhs` over all samples of the checked
    /// `lhs <= rhs` inequality; negative means the inequality held with
    /// margin everywhere.
    pub worst_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    /// Builds a report from per-sample violations. A check that saw no
    /// samples fails: it verified nothing. A NaN violation also fails.
    pub fn from_violations(
        name: impl Into<String>,
        tolerance: f64,
        violations: impl IntoIterator<Item = f64>,
    ) -> Self {
        let mut samples = 0usize;
        let mut worst = f64::NEG_INFINITY;
        for v in violations {
            samples += 1;
            if worst.is_nan() {
                continue;
            }
            if v.is_nan() || v > worst {
                worst = v;
            }
        }
        let pass = samples > 0 && worst <= tolerance;
        CheckReport { name: name.into(), samples, worst_violation: worst, tolerance, pass }
    }

    fn empty(name: String, tolerance: f64) -> Self {
        CheckReport { name, samples: 0, worst_violation: f64::NAN, tolerance, pass: false }
    }
}

/// Sampling plan shared by the property checks.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleCfg {
    /// Dimension of the simplex points / density matrices exercised.
    pub d: usize,
    /// Number of random samples per check; crafted instances are appended
    /// on top of these.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SampleCfg {
    fn default() -> Self {
        Self { d: 5, samples: 1000, seed: 17 }
    }
}

/// Which (loss, mirror map) pair a relative-smoothness check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionPair {
    /// Portfolio loss against the log barrier; canonical constant 1.
    OpsLogBarrier,
    /// Portfolio loss against negative entropy; the canonical constant is
    /// the largest ratio between two prices in the round's vector.
    OpsEntropy,
    /// Quantum log loss against the log-det barrier; canonical constant 1.
    QuantumLogDet,
}

impl FunctionPair {
    fn label(self) -> &'static str {
        match self {
            FunctionPair::OpsLogBarrier => "ops_vs_logbarrier",
            FunctionPair::OpsEntropy => "ops_vs_entropy",
            FunctionPair::QuantumLogDet => "quantum_vs_logdet",
        }
    }
}

/// Which loss family a derivative check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Ops,
    Quantum,
}

impl LossKind {
    fn label(self) -> &'static str {
        match self {
            LossKind::Ops => "ops",
            LossKind::Quantum => "quantum",
        }
    }
}

fn scaled_name(base: &str, scale: f64) -> String {
    if scale == 1.0 {
        base.to_string()
    } else {
        format!("{base}@{scale}x")
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform (Dirichlet(1,..,1)) sample pulled 10% toward the barycenter so
/// local norms stay finite while skewed points are still exercised.
fn sample_simplex_interior<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SimplexPoint {
    let mut v: Vec<f64> = (0..d)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let s: f64 = v.iter().sum();
    let center = 1.0 / d as f64;
    if s > 0.0 {
        for vi in &mut v {
            *vi = 0.9 * *vi / s + 0.1 * center;
        }
    } else {
        v.fill(center);
    }
    SimplexPoint::new(v).expect("mixed Dirichlet sample lies on the simplex")
}

/// Price relatives with entries in [0.05, 1]; the constructor rescales the
/// largest entry to exactly 1.
fn sample_prices<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PriceRelatives {
    PriceRelatives::new((0..d).map(|_| rng.random_range(0.05..=1.0)).collect())
        .expect("positive bounded prices are valid")
}

/// Random unit direction in the simplex tangent space (entries sum to 0).
fn sample_tangent<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut u: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let mean = u.iter().sum::<f64>() / d as f64;
        for ui in &mut u {
            *ui -= mean;
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            for ui in &mut u {
                *ui /= norm;
            }
            return u;
        }
    }
}

/// Random unit direction with no tangency constraint.
fn sample_ambient<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return u.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Full-rank random state pulled 10% toward the maximally mixed state.
fn sample_density_interior<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    quantum::random_density_gram(d, rng)
        .and_then(|rho| rho.mix_with_identity(0.1))
        .expect("mixed Gram state is a density matrix")
}

/// Random traceless Hermitian direction (tangent to the unit-trace slice).
fn sample_traceless<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let mut v = quantum::random_hermitian(d, rng);
    let tr = v.diagonal().iter().map(|z| z.re).sum::<f64>() / d as f64;
    for i in 0..d {
        v[(i, i)] -= Complex64::new(tr, 0.0);
    }
    v
}

/// Random Hermitian direction with no trace constraint, unit Frobenius
/// scale not enforced (the checked inequalities are scale-invariant).
fn sample_hermitian_ambient<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    quantum::random_hermitian(d, rng)
}

/// Random full-rank observable (Gram matrix, largest eigenvalue scaled
/// to 1 by the constructor).
fn sample_observable<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Observable {
    let g = quantum::random_gaussian_matrix(d, rng);
    Observable::new(&g * g.adjoint()).expect("Gram matrix is a valid observable")
}

// ---------------------------------------------------------------------------
// Crafted instances
// ---------------------------------------------------------------------------

/// `(p, (1-p)/(d-1), ..., (1-p)/(d-1))`.
fn concentrated(d: usize, p: f64) -> SimplexPoint {
    let rest = (1.0 - p) / (d - 1) as f64;
    let mut v = vec![rest; d];
    v[0] = p;
    SimplexPoint::new(v).expect("concentrated point lies on the simplex")
}

/// `(1, rest, ..., rest)`.
fn spiked_prices(d: usize, rest: f64) -> PriceRelatives {
    let mut v = vec![rest; d];
    v[0] = 1.0;
    PriceRelatives::new(v).expect("spiked prices are valid")
}

fn diag_density(coords: &SimplexPoint) -> DensityMatrix {
    let d = coords.dim();
    let c = coords.coords().to_vec();
    DensityMatrix::new(CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(c[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
    .expect("diagonal simplex point is a density matrix")
}

/// `diag(1, rest, ..., rest)` as an observable.
fn spiked_observable(d: usize, rest: f64) -> Observable {
    Observable::new(CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(if i == 0 { 1.0 } else { rest }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
    .expect("spiked diagonal matrix is a valid observable")
}

fn diag_direction(d: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(entries.get(i).copied().unwrap_or(0.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

// ---------------------------------------------------------------------------
// Closed-form building blocks
// ---------------------------------------------------------------------------

/// `<grad f(y) - grad f(x), y - x>` for `f = -ln<a, .>`; equals
/// `(<a,y> - <a,x>)^2 / (<a,x><a,y>)`.
fn ops_pair_form(a: &PriceRelatives, x: &SimplexPoint, y: &SimplexPoint) -> f64 {
    let vx = a.dot(x);
    let vy = a.dot(y);
    (vy - vx) * (vy - vx) / (vx * vy)
}

fn entropy_pair_form(x: &SimplexPoint, y: &SimplexPoint) -> f64 {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(&xi, &yi)| (yi.ln() - xi.ln()) * (yi - xi))
        .sum()
}

fn logbarrier_pair_form(x: &SimplexPoint, y: &SimplexPoint) -> f64 {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(&xi, &yi)| (yi - xi) * (yi - xi) / (xi * yi))
        .sum()
}

fn quantum_pair_form(a: &Observable, x: &DensityMatrix, y: &DensityMatrix) -> f64 {
    let vx = trace_product(a.matrix(), x.matrix());
    let vy = trace_product(a.matrix(), y.matrix());
    (vy - vx) * (vy - vx) / (vx * vy)
}

fn logdet_pair_form(x: &DensityMatrix, y: &DensityMatrix) -> f64 {
    let gx = LogDetMap.grad_h(x);
    let gy = LogDetMap.grad_h(y);
    let diff_g = gy.matrix() - gx.matrix();
    let diff_p = y.matrix() - x.matrix();
    trace_product(&diff_g, &diff_p)
}

/// `<u, Hess f(x) u>` for the portfolio loss: `(<a,u> / <a,x>)^2`.
fn ops_hessian_form(a: &PriceRelatives, x: &SimplexPoint, u: &[f64]) -> f64 {
    let r = ops_direction_ratio(a, x, u);
    r * r
}

fn entropy_hessian_form(x: &SimplexPoint, u: &[f64]) -> f64 {
    x.coords().iter().zip(u).map(|(&xi, &ui)| ui * ui / xi).sum()
}

fn logbarrier_hessian_form(x: &SimplexPoint, u: &[f64]) -> f64 {
    x.coords().iter().zip(u).map(|(&xi, &ui)| ui * ui / (xi * xi)).sum()
}

fn quantum_hessian_form(a: &Observable, x: &DensityMatrix, v: &CMatrix) -> f64 {
    let r = quantum_direction_ratio(a, x, v);
    r * r
}

/// `<V, Hess h(x) V> = tr((x^{-1} V)^2)` for the log-det barrier.
fn logdet_hessian_form(x: &DensityMatrix, v: &CMatrix) -> f64 {
    let inv = -LogDetMap.grad_h(x).into_matrix();
    let m = &inv * v;
    trace_product(&m, &m)
}

/// `<a,u> / <a,x>`, the signed local slope of the portfolio loss along `u`.
fn ops_direction_ratio(a: &PriceRelatives, x: &SimplexPoint, u: &[f64]) -> f64 {
    let au: f64 = a.values().iter().zip(u).map(|(&ai, &ui)| ai * ui).sum();
    au / a.dot(x)
}

/// `tr(A V) / tr(A x)`, the signed local slope of the quantum loss.
fn quantum_direction_ratio(a: &Observable, x: &DensityMatrix, v: &CMatrix) -> f64 {
    trace_product(a.matrix(), v) / trace_product(a.matrix(), x.matrix())
}

// ---------------------------------------------------------------------------
// Function-class checks
// ---------------------------------------------------------------------------

/// Checks `<grad f(y) - grad f(x), y - x> <= L <grad h(y) - grad h(x), y - x>`
/// on interior pairs, with `L = l_scale` times the pair's canonical
/// constant.
///
/// For the entropy pair the tight constant over pairs of simplex points is
/// roughly a quarter of the canonical per-round price ratio, so a negative
/// control must cut the constant below that (an eighth works); halving is
/// enough for the two barrier pairs, whose tight constant is the canonical
/// one.
pub fn check_relative_smoothness_gradient(
    pair: FunctionPair,
    l_scale: f64,
    cfg: &SampleCfg,
) -> CheckReport {
    let mut rng = seeded(cfg.seed);
    let d = cfg.d.max(2);
    let mut violations = Vec::with_capacity(cfg.samples + 2);
    match pair {
        FunctionPair::OpsLogBarrier => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let y = sample_simplex_interior(d, &mut rng);
                violations
                    .push(ops_pair_form(&a, &x, &y) - l_scale * logbarrier_pair_form(&x, &y));
            }
            // Tight family: a single priced asset and a pair of points
            // nearly orthogonal to it, where the barrier terms of the other
            // coordinates contribute almost nothing.
            let a = spiked_prices(d, 0.0);
            let (x, y) = (concentrated(d, 0.01), concentrated(d, 0.02));
            violations.push(ops_pair_form(&a, &x, &y) - l_scale * logbarrier_pair_form(&x, &y));
        }
        FunctionPair::OpsEntropy => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let y = sample_simplex_interior(d, &mut rng);
                let l = l_scale * a.max_ratio();
                violations.push(ops_pair_form(&a, &x, &y) - l * entropy_pair_form(&x, &y));
            }
            // Near-tight family: one dominant price and a pair straddling
            // the curvature maximizer of the dominant coordinate.
            let eps = 0.01;
            let a = spiked_prices(d, eps);
            let p = eps / (1.0 + 2.0 * eps);
            let (x, y) = (concentrated(d, p), concentrated(d, 1.3 * p));
            violations
                .push(ops_pair_form(&a, &x, &y) - l_scale * a.max_ratio() * entropy_pair_form(&x, &y));
            // Uniform prices: the loss is constant, the left side vanishes.
            let ones = PriceRelatives::new(vec![1.0; d]).expect("uniform prices are valid");
            let (x, y) = (concentrated(d, 0.3), concentrated(d, 0.7));
            violations
                .push(ops_pair_form(&ones, &x, &y) - l_scale * entropy_pair_form(&x, &y));
        }
        FunctionPair::QuantumLogDet => {
            for _ in 0..cfg.samples {
                let a = sample_observable(d, &mut rng);
                let x = sample_density_interior(d, &mut rng);
                let y = sample_density_interior(d, &mut rng);
                violations.push(quantum_pair_form(&a, &x, &y) - l_scale * logdet_pair_form(&x, &y));
            }
            // Commuting analogue of the classical tight family.
            let a = spiked_observable(d, 0.0);
            let x = diag_density(&concentrated(d, 0.01));
            let y = diag_density(&concentrated(d, 0.02));
            violations.push(quantum_pair_form(&a, &x, &y) - l_scale * logdet_pair_form(&x, &y));
        }
    }
    CheckReport::from_violations(
        scaled_name(&format!("relative_smoothness_gradient/{}", pair.label()), l_scale),
        SMOOTHNESS_TOL,
        violations,
    )
}

/// Checks the Hessian-order version of relative smoothness,
/// `<u, Hess f(x) u> <= L <u, Hess h(x) u>`, on unconstrained directions
/// `u`. The quadratic-form comparison holds for arbitrary directions, which
/// is also what makes halved constants detectable for the entropy pair.
pub fn check_relative_smoothness_hessian(
    pair: FunctionPair,
    l_scale: f64,
    cfg: &SampleCfg,
) -> CheckReport {
    let mut rng = seeded(cfg.seed.wrapping_add(1));
    let d = cfg.d.max(2);
    let mut violations = Vec::with_capacity(cfg.samples + 1);
    match pair {
        FunctionPair::OpsLogBarrier => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let u = sample_ambient(d, &mut rng);
                violations
                    .push(ops_hessian_form(&a, &x, &u) - l_scale * logbarrier_hessian_form(&x, &u));
            }
            // Equality case: a single priced asset probed along its own
            // coordinate axis.
            let a = spiked_prices(d, 0.0);
            let x = concentrated(d, 0.05);
            let mut e1 = vec![0.0; d];
            e1[0] = 1.0;
            violations
                .push(ops_hessian_form(&a, &x, &e1) - l_scale * logbarrier_hessian_form(&x, &e1));
        }
        FunctionPair::OpsEntropy => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let u = sample_ambient(d, &mut rng);
                let l = l_scale * a.max_ratio();
                violations.push(ops_hessian_form(&a, &x, &u) - l * entropy_hessian_form(&x, &u));
            }
            // Curvature-ratio maximizer for prices (1, 0.6, ..): the form
            // ratio peaks at (1+G)^2/(4G) along u_i = a_i x_i, above half
            // the canonical constant but below the constant itself.
            let a = spiked_prices(d, 0.6);
            let x = concentrated(d, 0.375);
            let u: Vec<f64> =
                a.values().iter().zip(x.coords()).map(|(&ai, &xi)| ai * xi).collect();
            violations.push(
                ops_hessian_form(&a, &x, &u) - l_scale * a.max_ratio() * entropy_hessian_form(&x, &u),
            );
        }
        FunctionPair::QuantumLogDet => {
            for _ in 0..cfg.samples {
                let a = sample_observable(d, &mut rng);
                let x = sample_density_interior(d, &mut rng);
                let v = sample_hermitian_ambient(d, &mut rng);
                violations
                    .push(quantum_hessian_form(&a, &x, &v) - l_scale * logdet_hessian_form(&x, &v));
            }
            // Commuting equality case mirroring the classical one.
            let a = spiked_observable(d, 0.0);
            let x = diag_density(&concentrated(d, 0.05));
            let v = diag_direction(d, &[1.0]);
            violations
                .push(quantum_hessian_form(&a, &x, &v) - l_scale * logdet_hessian_form(&x, &v));
        }
    }
    CheckReport::from_violations(
        scaled_name(&format!("relative_smoothness_hessian/{}", pair.label()), l_scale),
        SMOOTHNESS_TOL,
        violations,
    )
}

/// Checks `|D^3 f(x)[u,u,u]| <= 2 m (D^2 f(x)[u,u])^{3/2}` with `m =
/// m_scale` along domain directions. Both losses are `-ln` of an affine
/// functional, so the derivatives are exact powers of one scalar slope and
/// the inequality is an identity at `m = 1`. Violations are normalized by
/// `1 + (D^2)^{3/2}`.
pub fn check_self_concordance(kind: LossKind, m_scale: f64, cfg: &SampleCfg) -> CheckReport {
    let mut rng = seeded(cfg.seed.wrapping_add(2));
    let d = cfg.d.max(2);
    let mut violations = Vec::with_capacity(cfg.samples + 2);
    let violation = |s: f64| {
        let d2 = s * s;
        let d3_abs = 2.0 * d2 * s.abs();
        (d3_abs - 2.0 * m_scale * d2.powf(1.5)) / (1.0 + d2.powf(1.5))
    };
    match kind {
        LossKind::Ops => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let u = sample_tangent(d, &mut rng);
                violations.push(violation(ops_direction_ratio(&a, &x, &u)));
            }
            // Uniform prices are orthogonal to every tangent direction:
            // both sides vanish.
            let ones = PriceRelatives::new(vec![1.0; d]).expect("uniform prices are valid");
            let x = concentrated(d, 0.3);
            let mut u = vec![0.0; d];
            u[0] = 1.0;
            u[1] = -1.0;
            violations.push(violation(ops_direction_ratio(&ones, &x, &u)));
            // Large slope: dominant asset probed at a point nearly
            // orthogonal to it.
            let a = spiked_prices(d, 0.01);
            let x = concentrated(d, 0.05);
            violations.push(violation(ops_direction_ratio(&a, &x, &u)));
        }
        LossKind::Quantum => {
            for _ in 0..cfg.samples {
                let a = sample_observable(d, &mut rng);
                let x = sample_density_interior(d, &mut rng);
                let v = sample_traceless(d, &mut rng);
                violations.push(violation(quantum_direction_ratio(&a, &x, &v)));
            }
            // The identity observable has zero slope along traceless
            // directions.
            let id = Observable::new(CMatrix::identity(d, d)).expect("identity is an observable");
            let x = diag_density(&concentrated(d, 0.3));
            let mut dir = vec![0.0; d];
            dir[0] = 1.0;
            dir[1] = -1.0;
            let v = diag_direction(d, &dir);
            violations.push(violation(quantum_direction_ratio(&id, &x, &v)));
            let a = spiked_observable(d, 0.01);
            let x = diag_density(&concentrated(d, 0.05));
            violations.push(violation(quantum_direction_ratio(&a, &x, &v)));
        }
    }
    CheckReport::from_violations(
        scaled_name(&format!("self_concordance/{}", kind.label()), m_scale),
        SELF_CONCORDANCE_TOL,
        violations,
    )
}

/// Checks the barrier inequality `<grad f(x), u>^2 <= nu <u, Hess f(x) u>`.
/// For these losses both sides equal the squared local slope, so the check
/// is an identity at `nu = 1`. Violations are normalized by `1 + lhs`.
pub fn check_barrier(kind: LossKind, nu: f64, cfg: &SampleCfg) -> CheckReport {
    let mut rng = seeded(cfg.seed.wrapping_add(3));
    let d = cfg.d.max(2);
    let mut violations = Vec::with_capacity(cfg.samples + 1);
    let violation = |s: f64| {
        let lhs = s * s;
        let rhs = nu * s * s;
        (lhs - rhs) / (1.0 + lhs)
    };
    match kind {
        LossKind::Ops => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let u = sample_tangent(d, &mut rng);
                violations.push(violation(ops_direction_ratio(&a, &x, &u)));
            }
            let a = spiked_prices(d, 0.01);
            let x = concentrated(d, 0.05);
            let mut u = vec![0.0; d];
            u[0] = 1.0;
            u[1] = -1.0;
            violations.push(violation(ops_direction_ratio(&a, &x, &u)));
        }
        LossKind::Quantum => {
            for _ in 0..cfg.samples {
                let a = sample_observable(d, &mut rng);
                let x = sample_density_interior(d, &mut rng);
                let v = sample_traceless(d, &mut rng);
                violations.push(violation(quantum_direction_ratio(&a, &x, &v)));
            }
            let a = spiked_observable(d, 0.01);
            let x = diag_density(&concentrated(d, 0.05));
            let mut dir = vec![0.0; d];
            dir[0] = 1.0;
            dir[1] = -1.0;
            violations.push(violation(quantum_direction_ratio(&a, &x, &diag_direction(d, &dir))));
        }
    }
    CheckReport::from_violations(
        scaled_name(&format!("barrier/{}", kind.label()), nu),
        BARRIER_TOL,
        violations,
    )
}

/// Checks the strengthened gradient monotonicity
/// `<grad f(y) - grad f(x), y - x> >= scale * r^2/(1 + r)` with `r` the
/// local norm of `y - x` at `x`. At `scale = 1` the two sides agree exactly
/// when the loss grows from `x` to `y` and the left side dominates
/// otherwise; doubling the right side breaks it on every growing pair.
pub fn check_self_concordance_monotonicity(
    kind: LossKind,
    rhs_scale: f64,
    cfg: &SampleCfg,
) -> CheckReport {
    let mut rng = seeded(cfg.seed.wrapping_add(4));
    let d = cfg.d.max(2);
    let mut violations = Vec::with_capacity(cfg.samples + 2);
    let violation = |pair_form: f64, r: f64| rhs_scale * r * r / (1.0 + r) - pair_form;
    match kind {
        LossKind::Ops => {
            for _ in 0..cfg.samples {
                let a = sample_prices(d, &mut rng);
                let x = sample_simplex_interior(d, &mut rng);
                let y = sample_simplex_interior(d, &mut rng);
                let r = (a.dot(&y) - a.dot(&x)).abs() / a.dot(&x);
                violations.push(violation(ops_pair_form(&a, &x, &y), r));
            }
            // A pair with growing loss value, where the bound is met with
            // equality at the canonical scale.
            let a = spiked_prices(d, 0.01);
            let (x, y) = (concentrated(d, 0.3), concentrated(d, 0.6));
            let r = (a.dot(&y) - a.dot(&x)).abs() / a.dot(&x);
            violations.push(violation(ops_pair_form(&a, &x, &y), r));
            // x = y: both sides vanish.
            violations.push(violation(ops_pair_form(&a, &x, &x), 0.0));
        }
        LossKind::Quantum => {
            for _ in 0..cfg.samples {
                let a = sample_observable(d, &mut rng);
                let x = sample_density_interior(d, &mut rng);
                let y = sample_density_interior(d, &mut rng);
                let vx = trace_product(a.matrix(), x.matrix());
                let vy = trace_product(a.matrix(), y.matrix());
                let r = (vy - vx).abs() / vx;
                violations.push(violation(quantum_pair_form(&a, &x, &y), r));
            }
            let a = spiked_observable(d, 0.01);
            let x = diag_density(&concentrated(d, 0.3));
            let y = diag_density(&concentrated(d, 0.6));
            let vx = trace_product(a.matrix(), x.matrix());
            let vy = trace_product(a.matrix(), y.matrix());
            let r = (vy - vx).abs() / vx;
            violations.push(violation(quantum_pair_form(&a, &x, &y), r));
            violations.push(violation(quantum_pair_form(&a, &x, &x), 0.0));
        }
    }
    CheckReport::from_violations(
        scaled_name(&format!("self_concordance_monotonicity/{}", kind.label()), rhs_scale),
        MONOTONICITY_TOL,
        violations,
    )
}

// ---------------------------------------------------------------------------
// Run-based checks
// ---------------------------------------------------------------------------

/// Checks every recorded step length against
/// `bound_scale * L eta / (1 - L eta)`. Rounds that did not record a step
/// length are skipped; a log without any fails.
pub fn check_stepsize_bound(
    log: &ExperimentLog,
    l: f64,
    eta: f64,
    bound_scale: f64,
) -> CheckReport {
    let name = scaled_name("stepsize_bound", bound_scale);
    let le = l * eta;
    if !(le > 0.0 && le < 1.0) {
        return CheckReport::empty(name, STEP_NORM_TOL);
    }
    let bound = bound_scale * le / (1.0 - le);
    CheckReport::from_violations(name, STEP_NORM_TOL, step_violations(log, bound))
}

fn step_violations(log: &ExperimentLog, bound: f64) -> Vec<f64> {
    log.records().iter().filter_map(|r| r.r_t).map(|r| r - bound).collect()
}

/// Checks every recorded squared dual norm against `bound` (canonically 1).
pub fn check_dual_norm_bound(log: &ExperimentLog, bound: f64) -> CheckReport {
    CheckReport::from_violations(
        scaled_name("dual_norm_bound", bound),
        DUAL_NORM_TOL,
        dual_norm_violations(log, bound),
    )
}

fn dual_norm_violations(log: &ExperimentLog, bound: f64) -> Vec<f64> {
    log.records().iter().filter_map(|r| r.dual_norm_sq).map(|v| v - bound).collect()
}

/// Checks the prefix look-ahead inequality: for every prefix length `k`,
/// `sum_{t<=k} f_t(x_{t+1}) - sum_{t<=k} f_t(x*) <= bound_scale * d_h / eta`,
/// where `f_t(x*)` are the supplied per-round losses of a fixed interior
/// comparator (clip boundary comparators first) and `d_h` is its Bregman
/// divergence from the first iterate. Fails if any round lacks a recorded
/// look-ahead loss or the comparator losses do not align with the log.
pub fn check_lookahead_regret(
    log: &ExperimentLog,
    comparator_losses: &[f64],
    d_h: f64,
    eta: f64,
    bound_scale: f64,
) -> CheckReport {
    let name = scaled_name("lookahead_regret", bound_scale);
    match lookahead_violations(log, comparator_losses, bound_scale * d_h / eta) {
        Some(v) => CheckReport::from_violations(name, LOOKAHEAD_TOL, v),
        None => CheckReport::empty(name, LOOKAHEAD_TOL),
    }
}

fn lookahead_violations(log: &ExperimentLog, cmp: &[f64], bound: f64) -> Option<Vec<f64>> {
    let recs = log.records();
    if recs.len() != cmp.len() {
        return None;
    }
    let mut out = Vec::with_capacity(recs.len());
    let mut diff = 0.0;
    for (rec, &c) in recs.iter().zip(cmp) {
        diff += rec.lookahead_loss? - c;
        out.push(diff - bound);
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// All function-class checks. With `weakened` the constants are cut so that
/// every report must fail: halving where the canonical constant is tight,
/// an eighth for the entropy gradient pair (its tight constant is about a
/// quarter of the canonical one), and doubling for the monotonicity lower
/// bound.
pub fn function_class_suite(cfg: &SampleCfg, weakened: bool) -> Vec<CheckReport> {
    let l = if weakened { 0.5 } else { 1.0 };
    let entropy_pair = if weakened { 0.125 } else { 1.0 };
    let mono = if weakened { 2.0 } else { 1.0 };
    let nu = if weakened { 0.5 } else { 1.0 };
    vec![
        check_relative_smoothness_gradient(FunctionPair::OpsLogBarrier, l, cfg),
        check_relative_smoothness_gradient(FunctionPair::OpsEntropy, entropy_pair, cfg),
        check_relative_smoothness_gradient(FunctionPair::QuantumLogDet, l, cfg),
        check_relative_smoothness_hessian(FunctionPair::OpsLogBarrier, l, cfg),
        check_relative_smoothness_hessian(FunctionPair::OpsEntropy, l, cfg),
        check_relative_smoothness_hessian(FunctionPair::QuantumLogDet, l, cfg),
        check_self_concordance(LossKind::Ops, l, cfg),
        check_self_concordance(LossKind::Quantum, l, cfg),
        check_barrier(LossKind::Ops, nu, cfg),
        check_barrier(LossKind::Quantum, nu, cfg),
        check_self_concordance_monotonicity(LossKind::Ops, mono, cfg),
        check_self_concordance_monotonicity(LossKind::Quantum, mono, cfg),
    ]
}

fn run_lbomd(market: &[PriceRelatives], eta: f64) -> Result<ExperimentLog> {
    let d = market.first().map(|a| a.dim()).unwrap_or(2);
    let mut x = SimplexPoint::uniform(d)?;
    let mut log = ExperimentLog::new();
    for a in market {
        let round = lbomd_round(&x, a, eta)?;
        log.push_detailed(round.loss, Some(round.r_t), Some(round.lookahead_loss), None)?;
        x = round.next;
    }
    Ok(log)
}

fn run_lbftrl(market: &[PriceRelatives], eta: f64) -> Result<ExperimentLog> {
    let d = market.first().map(|a| a.dim()).unwrap_or(2);
    let mut state = LbFtrlState::new(d)?;
    let mut log = ExperimentLog::new();
    for a in market {
        let round = lbftrl_round(state, a, eta)?;
        log.push_detailed(round.loss, None, Some(round.lookahead_loss), Some(round.dual_norm_sq))?;
        state = round.state;
    }
    Ok(log)
}

/// Moves a (possibly boundary) comparator a `1/t` step toward the
/// barycenter so barrier divergences from it stay finite.
fn clip_simplex(x: &SimplexPoint, t: usize) -> SimplexPoint {
    let d = x.dim();
    let w = 1.0 / t as f64;
    let add = w / d as f64;
    SimplexPoint::new(x.coords().iter().map(|&xi| (1.0 - w) * xi + add).collect())
        .expect("clipped point stays on the simplex")
}

fn missing_lookahead() -> Error {
    Error::Invalid("run is missing look-ahead losses".into())
}

/// Run-derived checks (step length, dual norm, look-ahead regret) over a
/// pool of recorded runs: seeded i.i.d. markets and observable streams for
/// coverage, plus crafted runs that push each inequality near its cap so
/// the `weakened` variants reliably fail.
pub fn run_based_suite(cfg: &SampleCfg, weakened: bool) -> Result<Vec<CheckReport>> {
    let scale = if weakened { 0.5 } else { 1.0 };
    let d = cfg.d.max(2);
    let t = cfg.samples.max(d + 2).max(32);
    let mut rng = seeded(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let uniform = SimplexPoint::uniform(d)?;

    let mut step_v: Vec<f64> = Vec::new();
    let mut dual_v: Vec<f64> = Vec::new();
    let mut look_v: Vec<f64> = Vec::new();

    // Portfolio OMD on an i.i.d. market, with a clipped best-fixed-portfolio
    // comparator for the look-ahead bound.
    let market: Vec<PriceRelatives> = (0..t).map(|_| sample_prices(d, &mut rng)).collect();
    let eta = lb_schedule(t, d)?;
    let lb_log = run_lbomd(&market, eta)?;
    step_v.extend(step_violations(&lb_log, scale * eta / (1.0 - eta)));
    let best = comparator::best_crp(&market, 1e-7)?;
    let xbar = clip_simplex(&best.point, t);
    let cmp: Vec<f64> = market.iter().map(|a| ops_loss(a, &xbar)).collect::<Result<_>>()?;
    let d_h = LogBarrierMap.bregman(&xbar, &uniform);
    look_v.extend(
        lookahead_violations(&lb_log, &cmp, scale * d_h / eta).ok_or_else(missing_lookahead)?,
    );

    // Smoothed multiplicative-weights run: the look-ahead bound holds for
    // the internal iterates against the smoothed losses, with the entropy
    // divergence in the numerator.
    let eg_sched = eg_schedule(t, d, EgEtaVariant::SqrtLogDim)?;
    let mut eg_state = EgState::new(d, eg_sched)?;
    let gamma = eg_state.gamma();
    let eg_eta = eg_state.eta();
    let mut eg_log = ExperimentLog::new();
    for a in &market {
        let round = eg_round(eg_state, a)?;
        eg_log.push_detailed(round.hat_loss, None, Some(round.hat_lookahead_loss), None)?;
        eg_state = round.state;
    }
    let smoothed: Vec<PriceRelatives> =
        market.iter().map(|a| smooth_price_relatives(a, gamma)).collect::<Result<_>>()?;
    let best_hat = comparator::best_crp(&smoothed, 1e-7)?;
    let xbar_hat = clip_simplex(&best_hat.point, t);
    let cmp_hat: Vec<f64> =
        smoothed.iter().map(|a| ops_loss(a, &xbar_hat)).collect::<Result<_>>()?;
    let d_ent = EntropyMap.bregman(&xbar_hat, &uniform);
    look_v.extend(
        lookahead_violations(&eg_log, &cmp_hat, scale * d_ent / eg_eta)
            .ok_or_else(missing_lookahead)?,
    );

    // FTRL for the dual-norm bound: an i.i.d. market plus a single-asset
    // market on which the squared dual norm is exactly 1 every round.
    let ftrl_log = run_lbftrl(&market, lbftrl_default_eta(t, d)?)?;
    dual_v.extend(dual_norm_violations(&ftrl_log, scale));
    let e1_market: Vec<PriceRelatives> = (0..64).map(|_| spiked_prices(d, 0.0)).collect();
    let e1_log = run_lbftrl(&e1_market, lbftrl_default_eta(64, d)?)?;
    dual_v.extend(dual_norm_violations(&e1_log, scale));

    // Density-matrix OMD on a random observable stream.
    let tq = t.min(200).max(d + 2);
    let eta_q = lb_schedule(tq, d)?;
    let stream: Vec<Observable> = (0..tq).map(|_| sample_observable(d, &mut rng)).collect();
    let mut rho = DensityMatrix::maximally_mixed(d)?;
    let mut q_log = ExperimentLog::new();
    for a in &stream {
        let round = qlbomd_round(&rho, a, eta_q)?;
        q_log.push_detailed(round.loss, Some(round.r_t), Some(round.lookahead_loss), None)?;
        rho = round.next;
    }
    step_v.extend(step_violations(&q_log, scale * eta_q / (1.0 - eta_q)));
    // A loose certificate is fine: the look-ahead inequality holds against
    // any fixed comparator, and the gap only shifts which one is used.
    let best_state = comparator::best_fixed_state(&stream, 1e-3)?;
    let rho_bar = quantum::clipped_comparator(&best_state.point, tq, d)?;
    let cmp_q: Vec<f64> =
        stream.iter().map(|a| quantum_loss(&rho_bar, a)).collect::<Result<_>>()?;
    let d_q = quantum::logdet_bregman(&rho_bar, &DensityMatrix::maximally_mixed(d)?);
    look_v.extend(
        lookahead_violations(&q_log, &cmp_q, scale * d_q / eta_q).ok_or_else(missing_lookahead)?,
    );

    // Crafted run that drives the step length close to its cap: a few
    // rounds pushing the iterate toward the second asset, then a reversal
    // while the first coordinate is small.
    let mut teeth_market = Vec::with_capacity(10);
    for _ in 0..5 {
        teeth_market.push(PriceRelatives::new(vec![1e-3, 1.0])?);
    }
    for _ in 0..5 {
        teeth_market.push(PriceRelatives::new(vec![1.0, 1e-3])?);
    }
    let teeth_eta = 0.45;
    let teeth_log = run_lbomd(&teeth_market, teeth_eta)?;
    step_v.extend(step_violations(&teeth_log, scale * teeth_eta / (1.0 - teeth_eta)));

    // Crafted run that nearly saturates the look-ahead bound: one asset
    // carries all value and the step size is close to its upper limit.
    let la_market: Vec<PriceRelatives> =
        (0..5).map(|_| PriceRelatives::new(vec![1.0, 0.0])).collect::<Result<_>>()?;
    let la_eta = 0.9;
    let la_log = run_lbomd(&la_market, la_eta)?;
    let la_bar = clip_simplex(&SimplexPoint::new(vec![1.0, 0.0])?, la_market.len());
    let la_cmp: Vec<f64> =
        la_market.iter().map(|a| ops_loss(a, &la_bar)).collect::<Result<_>>()?;
    let la_dh = LogBarrierMap.bregman(&la_bar, &SimplexPoint::uniform(2)?);
    look_v.extend(
        lookahead_violations(&la_log, &la_cmp, scale * la_dh / la_eta)
            .ok_or_else(missing_lookahead)?,
    );

    Ok(vec![
        CheckReport::from_violations(scaled_name("stepsize_bound", scale), STEP_NORM_TOL, step_v),
        CheckReport::from_violations(scaled_name("dual_norm_bound", scale), DUAL_NORM_TOL, dual_v),
        CheckReport::from_violations(scaled_name("lookahead_regret", scale), LOOKAHEAD_TOL, look_v),
    ])
}

/// Every check in one list: function-class inequalities plus run-derived
/// bounds. With `weakened` all constants are cut and every report must
/// fail.
pub fn full_suite(cfg: &SampleCfg, weakened: bool) -> Result<Vec<CheckReport>> {
    let mut out = function_class_suite(cfg, weakened);
    out.extend(run_based_suite(cfg, weakened)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SampleCfg {
        SampleCfg { d: 3, samples: 200, seed: 99 }
    }

    #[test]
    fn identical_function_pair_has_zero_violation() {
        // With f = h the gradient-pair inequality at L = 1 is an identity.
        let mut rng = seeded(5);
        for _ in 0..50 {
            let x = sample_simplex_interior(4, &mut rng);
            let y = sample_simplex_interior(4, &mut rng);
            let form = logbarrier_pair_form(&x, &y);
            assert_eq!(form - form, 0.0);
            assert!(form >= 0.0);
        }
    }

    #[test]
    fn uniform_prices_have_no_tangent_slope() {
        let ones = PriceRelatives::new(vec![1.0; 4]).unwrap();
        let mut rng = seeded(6);
        let x = sample_simplex_interior(4, &mut rng);
        let u = sample_tangent(4, &mut rng);
        let s = ops_direction_ratio(&ones, &x, &u);
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn function_class_suite_passes_at_canonical_constants() {
        for report in function_class_suite(&small_cfg(), false) {
            assert!(
                report.pass,
                "{} failed: worst violation {:.3e} over {} samples",
                report.name, report.worst_violation, report.samples
            );
            assert!(report.samples >= 200);
        }
    }

    #[test]
    fn function_class_suite_fails_with_cut_constants() {
        for report in function_class_suite(&small_cfg(), true) {
            assert!(
                !report.pass,
                "{} should fail with a cut constant, worst violation {:.3e}",
                report.name, report.worst_violation
            );
        }
    }

    #[test]
    fn run_based_suite_passes_and_weakened_fails() {
        let cfg = small_cfg();
        for report in run_based_suite(&cfg, false).unwrap() {
            assert!(
                report.pass,
                "{} failed: worst violation {:.3e} over {} samples",
                report.name, report.worst_violation, report.samples
            );
        }
        for report in run_based_suite(&cfg, true).unwrap() {
            assert!(
                !report.pass,
                "{} should fail when the bound is halved, worst violation {:.3e}",
                report.name, report.worst_violation
            );
        }
    }

    #[test]
    fn stepsize_check_flags_a_recorded_violation() {
        let mut log = ExperimentLog::new();
        log.push_detailed(0.1, Some(2.0), None, None).unwrap();
        let report = check_stepsize_bound(&log, 1.0, 0.5, 1.0);
        assert!(!report.pass);
        assert!((report.worst_violation - 1.0).abs() < 1e-12);

        let mut ok_log = ExperimentLog::new();
        ok_log.push_detailed(0.1, Some(0.5), None, None).unwrap();
        assert!(check_stepsize_bound(&ok_log, 1.0, 0.5, 1.0).pass);
    }

    #[test]
    fn invalid_step_bound_parameters_fail_closed() {
        let mut log = ExperimentLog::new();
        log.push_detailed(0.1, Some(0.0), None, None).unwrap();
        assert!(!check_stepsize_bound(&log, 1.0, 1.0, 1.0).pass);
        assert!(!check_stepsize_bound(&log, 2.0, 0.6, 1.0).pass);
    }

    #[test]
    fn empty_logs_fail_run_checks() {
        let log = ExperimentLog::new();
        assert!(!check_dual_norm_bound(&log, 1.0).pass);
        assert!(!check_stepsize_bound(&log, 1.0, 0.1, 1.0).pass);
        assert!(!check_lookahead_regret(&log, &[], 1.0, 0.1, 1.0).pass);
    }

    #[test]
    fn single_asset_dual_norm_is_exactly_one() {
        let market: Vec<PriceRelatives> = (0..16).map(|_| spiked_prices(3, 0.0)).collect();
        let log = run_lbftrl(&market, 0.25).unwrap();
        let report = check_dual_norm_bound(&log, 1.0);
        assert!(report.pass);
        assert_eq!(report.worst_violation, 0.0);
        assert_eq!(report.samples, 16);
    }

    #[test]
    fn one_round_lookahead_is_within_bound() {
        let market = vec![PriceRelatives::new(vec![1.0, 0.4]).unwrap()];
        let eta = 0.5;
        let log = run_lbomd(&market, eta).unwrap();
        let xbar = clip_simplex(&SimplexPoint::new(vec![1.0, 0.0]).unwrap(), 2);
        let cmp = vec![ops_loss(&market[0], &xbar).unwrap()];
        let d_h = LogBarrierMap.bregman(&xbar, &SimplexPoint::uniform(2).unwrap());
        let report = check_lookahead_regret(&log, &cmp, d_h, eta, 1.0);
        assert!(report.pass, "worst violation {:.3e}", report.worst_violation);
        assert_eq!(report.samples, 1);
    }

    #[test]
    fn mismatched_comparator_losses_fail_closed() {
        let market = vec![PriceRelatives::new(vec![1.0, 0.4]).unwrap(); 3];
        let log = run_lbomd(&market, 0.5).unwrap();
        let report = check_lookahead_regret(&log, &[0.1, 0.1], 1.0, 0.5, 1.0);
        assert!(!report.pass);
        assert_eq!(report.samples, 0);
    }

    #[test]
    fn reports_serialize_with_all_fields() {
        let report = CheckReport::from_violations("demo", 1e-8, [0.0, -1.0]);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"name\":\"demo\""));
        assert!(json.contains("\"samples\":2"));
        assert!(json.contains("\"pass\":true"));
    }

    #[test]
    fn weakened_names_are_tagged_with_the_scale() {
        let cfg = SampleCfg { d: 2, samples: 1, seed: 1 };
        let canonical = check_barrier(LossKind::Ops, 1.0, &cfg);
        let weakened = check_barrier(LossKind::Ops, 0.5, &cfg);
        assert_eq!(canonical.name, "barrier/ops");
        assert_eq!(weakened.name, "barrier/ops@0.5x");
    }
}

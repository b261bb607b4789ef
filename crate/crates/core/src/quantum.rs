//! Density-matrix decision space: validated Hermitian types, the log-det
//! mirror map with its eigendecomposition-based prox, the density-matrix
//! analogue of the log-barrier learner, and POVM measurement sampling.
//!
//! The prox step diagonalizes `M = rho^{-1} + eta*G` once and then solves
//! the same scalar multiplier equation as the simplex solver on the
//! eigenvalues of `M`; no matrix exponentials or logarithms are ever
//! formed. Inverses are always taken in an eigenbasis (reciprocal
//! eigenvalues), never by general-purpose inversion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::omd::{MirrorMap, ProxStep};
use crate::simplex::{inverse_sum_newton, NewtonSolveReport};
use crate::{Error, Result};

/// Dense complex matrix, the storage type for all operators here.
pub type CMatrix = DMatrix<Complex64>;

/// Trace tolerance accepted by [`DensityMatrix::new`].
pub const TRACE_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted as "positive semidefinite".
pub const PSD_EIG_TOL: f64 = -1e-10;
/// Entrywise tolerance for POVM completeness (`sum_k M_k = I`).
pub const POVM_SUM_TOL: f64 = 1e-9;

const HERMITIAN_ASYM_TOL: f64 = 1e-8;

fn entries_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Averages `m` with its conjugate transpose, making it exactly Hermitian
/// (real diagonal included).
fn symmetrize(mut m: CMatrix) -> CMatrix {
    let d = m.nrows();
    for i in 0..d {
        for j in (i + 1)..d {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    m
}

pub(crate) fn hermitian_eigen(m: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Degenerate("Hermitian eigendecomposition did not converge".into()))?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// Rebuilds `U diag(vals) U^H` from a (complex) eigenbasis and real spectrum.
fn from_spectrum(u: &CMatrix, vals: &[f64]) -> CMatrix {
    let diag =
        DVector::from_iterator(vals.len(), vals.iter().map(|&v| Complex64::new(v, 0.0)));
    symmetrize(u * DMatrix::from_diagonal(&diag) * u.adjoint())
}

/// A square complex matrix equal to its conjugate transpose. Construction
/// symmetrizes roundoff-level asymmetry away; inputs that are not Hermitian
/// beyond roundoff are rejected rather than silently altered.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Invalid(format!(
                "Hermitian matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !entries_finite(&m) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let d = m.nrows();
        let mut asym = 0.0f64;
        for i in 0..d {
            asym = asym.max(m[(i, i)].im.abs());
            for j in (i + 1)..d {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if asym > HERMITIAN_ASYM_TOL * (1.0 + max_abs(&m)) {
            return Err(Error::Invalid(format!(
                "matrix is not Hermitian (max asymmetry {asym:.3e})"
            )));
        }
        Ok(Self { m: symmetrize(m) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Real trace (the diagonal is exactly real after symmetrization).
    pub fn trace(&self) -> f64 {
        self.m.diagonal().iter().map(|z| z.re).sum()
    }
}

/// A quantum state: Hermitian, positive semidefinite (eigenvalues above
/// `-1e-10`), unit trace within `1e-9`. Interior states (all eigenvalues
/// strictly positive) are the only valid mirror-descent iterates; boundary
/// states are legal data (true states, comparators).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    h: HermitianMatrix,
    eigvals: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let tr = h.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Invalid(format!(
                "density matrix trace is {tr}, outside 1 +/- {TRACE_TOL}"
            )));
        }
        let (vals, _) = hermitian_eigen(h.matrix())?;
        let min = vals.min();
        if min < PSD_EIG_TOL {
            return Err(Error::Invalid(format!(
                "matrix is not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { h, eigvals: vals.iter().cloned().collect() })
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Invalid("density matrix must have dimension >= 1".into()));
        }
        let m = CMatrix::identity(d, d).scale(1.0 / d as f64);
        Ok(Self { h: HermitianMatrix { m }, eigvals: vec![1.0 / d as f64; d] })
    }

    /// Trusted constructor for prox outputs: `U diag(vals) U^H` with a known
    /// positive spectrum summing to 1 well within the public tolerance.
    pub(crate) fn from_eigen(u: &CMatrix, vals: &[f64]) -> Self {
        debug_assert_eq!(u.nrows(), vals.len());
        debug_assert!(vals.iter().all(|&v| v > 0.0));
        debug_assert!((vals.iter().sum::<f64>() - 1.0).abs() <= TRACE_TOL);
        Self { h: HermitianMatrix { m: from_spectrum(u, vals) }, eigvals: vals.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.h.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.h
    }

    /// Eigenvalues in the order produced at construction (unsorted).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigvals.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn trace(&self) -> f64 {
        self.h.trace()
    }

    pub fn is_interior(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }

    /// The qubit state with Bloch vector `r`:
    /// `rho = (I + r_x X + r_y Y + r_z Z)/2`, requiring `|r| <= 1`.
    /// Eigenvalues are `(1 +/- |r|)/2`, so no eigendecomposition is needed;
    /// this makes dense Bloch-ball scans cheap for the test oracles.
    pub fn bloch(r: [f64; 3]) -> Result<Self> {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::Invalid(format!("Bloch vector norm {norm} exceeds 1")));
        }
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new((1.0 + r[2]) / 2.0, 0.0),
                Complex64::new(r[0] / 2.0, -r[1] / 2.0),
                Complex64::new(r[0] / 2.0, r[1] / 2.0),
                Complex64::new((1.0 - r[2]) / 2.0, 0.0),
            ],
        );
        let eigvals = vec![(1.0 + norm) / 2.0, ((1.0 - norm) / 2.0).max(0.0)];
        Ok(Self { h: HermitianMatrix { m }, eigvals })
    }

    /// `(1-w) rho + (w/d) I`: shrinks toward the maximally mixed state.
    /// The spectrum transforms affinely, so no fresh eigendecomposition is
    /// needed and the output's minimum eigenvalue is at least `w/d`.
    pub fn mix_with_identity(&self, w: f64) -> Result<Self> {
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::Invalid(format!("mixing weight must be in (0, 1], got {w}")));
        }
        let d = self.dim() as f64;
        let m = self.matrix().scale(1.0 - w) + CMatrix::identity(self.dim(), self.dim()).scale(w / d);
        let eigvals = self.eigvals.iter().map(|&p| (1.0 - w) * p + w / d).collect();
        Ok(Self { h: HermitianMatrix { m }, eigvals })
    }
}

/// A measurement outcome's operator: Hermitian, positive semidefinite, and
/// scaled at ingestion so its largest eigenvalue is exactly 1 (the matrix
/// analogue of sup-norm normalization of price relatives). Zero operators
/// are rejected.
#[derive(Debug, Clone)]
pub struct Observable {
    h: HermitianMatrix,
}

impl Observable {
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let (vals, _) = hermitian_eigen(h.matrix())?;
        let min = vals.min();
        let max = vals.max();
        if min < PSD_EIG_TOL {
            return Err(Error::Invalid(format!(
                "observable is not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        if max <= 1e-12 {
            return Err(Error::Invalid("observable is numerically zero".into()));
        }
        let m = h.into_matrix().map(|z| z / max);
        Ok(Self { h: HermitianMatrix { m } })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.h.matrix()
    }
}

/// A positive operator-valued measure: PSD elements summing to the identity
/// within [`POVM_SUM_TOL`] entrywise.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::Invalid("POVM must have at least one element".into()));
        }
        let d = mats[0].nrows();
        let mut elements = Vec::with_capacity(mats.len());
        let mut sum = CMatrix::zeros(d, d);
        for (k, m) in mats.into_iter().enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::Invalid(format!(
                    "POVM element {k} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let h = HermitianMatrix::new(m)?;
            let (vals, _) = hermitian_eigen(h.matrix())?;
            if vals.min() < PSD_EIG_TOL {
                return Err(Error::Invalid(format!(
                    "POVM element {k} is not positive semidefinite (min eigenvalue {:.3e})",
                    vals.min()
                )));
            }
            sum += h.matrix();
            elements.push(h);
        }
        let residual = max_abs(&(sum - CMatrix::identity(d, d)));
        if residual > POVM_SUM_TOL {
            return Err(Error::Invalid(format!(
                "POVM elements do not sum to the identity (max residual {residual:.3e})"
            )));
        }
        Ok(Self { elements })
    }

    /// The projective measurement whose outcomes are the columns of a
    /// unitary: element `k` is the rank-one projector onto column `k`.
    pub fn projective(u: &CMatrix) -> Result<Self> {
        let d = u.nrows();
        if d == 0 || u.ncols() != d {
            return Err(Error::Invalid("projective POVM needs a square unitary".into()));
        }
        let residual = max_abs(&(u.adjoint() * u - CMatrix::identity(d, d)));
        if residual > 1e-8 {
            return Err(Error::Invalid(format!(
                "matrix is not unitary (max residual {residual:.3e})"
            )));
        }
        Self::new((0..d).map(|k| u.column(k) * u.column(k).adjoint()).collect())
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &HermitianMatrix {
        &self.elements[k]
    }
}

/// `Re tr(AB)` without forming the product matrix. For Hermitian `A`, `B`
/// the trace is real, so this is the Hilbert-Schmidt inner product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.nrows(), b.nrows());
    debug_assert_eq!(a.ncols(), b.nrows());
    let d = a.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

fn check_quantum_dims(rho: &DensityMatrix, a: &Observable) -> Result<()> {
    if a.dim() != rho.dim() {
        return Err(Error::LengthMismatch { expected: rho.dim(), got: a.dim() });
    }
    Ok(())
}

/// Round loss `-ln tr(A rho)`; fails when the outcome probability is not
/// positive.
pub fn quantum_loss(rho: &DensityMatrix, a: &Observable) -> Result<f64> {
    check_quantum_dims(rho, a)?;
    let v = trace_product(a.matrix(), rho.matrix());
    if v <= 0.0 {
        return Err(Error::Degenerate(format!("tr(A rho) = {v}, log loss is infinite")));
    }
    Ok(-v.ln())
}

/// Loss gradient `-A / tr(A rho)`.
pub fn quantum_gradient(rho: &DensityMatrix, a: &Observable) -> Result<HermitianMatrix> {
    check_quantum_dims(rho, a)?;
    let v = trace_product(a.matrix(), rho.matrix());
    if v <= 0.0 {
        return Err(Error::Degenerate(format!("tr(A rho) = {v}, gradient is undefined")));
    }
    let m = a.matrix().map(|z| -z / v);
    if !entries_finite(&m) {
        return Err(Error::NonFinite("loss gradient"));
    }
    Ok(HermitianMatrix { m })
}

/// Bregman divergence of `h = -ln det`:
/// `D_h(rho, sigma) = tr(sigma^{-1} rho) - ln det(sigma^{-1} rho) - d`.
/// Returns `+inf` when either argument is singular.
pub fn logdet_bregman(rho: &DensityMatrix, from: &DensityMatrix) -> f64 {
    debug_assert_eq!(rho.dim(), from.dim());
    if rho.min_eigenvalue() <= 0.0 || from.min_eigenvalue() <= 0.0 {
        return f64::INFINITY;
    }
    let Ok((s, v)) = hermitian_eigen(from.matrix()) else {
        return f64::INFINITY;
    };
    if s.min() <= 0.0 {
        return f64::INFINITY;
    }
    let inv = from_spectrum(&v, &s.iter().map(|&si| 1.0 / si).collect::<Vec<_>>());
    let tr_term = trace_product(&inv, rho.matrix());
    let ln_det_rho: f64 = rho.eigenvalues().iter().map(|&p| p.ln()).sum();
    let ln_det_from: f64 = s.iter().map(|&si| si.ln()).sum();
    tr_term - ln_det_rho + ln_det_from - rho.dim() as f64
}

/// Log-det prox step: minimizes `eta*<G, rho> + D_h(rho, rho_t)` over
/// density matrices. Diagonalizes `M = rho_t^{-1} + eta*G = U diag(mu) U^H`
/// once; the minimizer is `U diag(1/(mu_i + lambda)) U^H` with `lambda`
/// solving the same multiplier equation as the simplex prox, here on the
/// eigenvalues `mu`.
pub fn logdet_prox(
    rho: &DensityMatrix,
    g: &HermitianMatrix,
    eta: f64,
) -> Result<(DensityMatrix, NewtonSolveReport)> {
    if g.dim() != rho.dim() {
        return Err(Error::LengthMismatch { expected: rho.dim(), got: g.dim() });
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Invalid(format!("step size must be positive and finite, got {eta}")));
    }
    if !rho.is_interior() {
        return Err(Error::Degenerate(
            "prox center is a boundary density matrix (singular state)".into(),
        ));
    }
    let (p, v) = hermitian_eigen(rho.matrix())?;
    if p.min() <= 0.0 {
        return Err(Error::Degenerate(format!(
            "prox center is numerically singular (min eigenvalue {:.3e})",
            p.min()
        )));
    }
    let rho_inv = from_spectrum(&v, &p.iter().map(|&pi| 1.0 / pi).collect::<Vec<_>>());
    let m = symmetrize(rho_inv + g.matrix().scale(eta));
    let (mu, u) = hermitian_eigen(&m)?;
    let (vals, report) = inverse_sum_newton(mu.as_slice())?;
    let next = DensityMatrix::from_eigen(&u, &vals);
    let tr_residual = (next.trace() - 1.0).abs();
    if tr_residual > 1e-10 {
        return Err(Error::Degenerate(format!(
            "prox output trace residual {tr_residual:.3e} exceeds 1e-10"
        )));
    }
    Ok((next, report))
}

/// One round of the density-matrix log-barrier learner.
#[derive(Debug, Clone)]
pub struct QlbomdRound {
    pub next: DensityMatrix,
    pub loss: f64,
    /// `||rho_t - rho_{t+1}||` in the loss-Hessian norm at `rho_t`:
    /// `|tr(A (rho_t - rho_{t+1}))| / tr(A rho_t)`.
    pub r_t: f64,
    /// `f_t(rho_{t+1})`.
    pub lookahead_loss: f64,
    pub newton: NewtonSolveReport,
}

/// Plays one round: suffer `-ln tr(A_t rho_t)`, then take a log-det prox
/// step along the exact loss gradient.
pub fn qlbomd_round(rho: &DensityMatrix, a: &Observable, eta: f64) -> Result<QlbomdRound> {
    let loss = quantum_loss(rho, a)?;
    let g = quantum_gradient(rho, a)?;
    let (next, newton) = logdet_prox(rho, &g, eta)?;
    let v = trace_product(a.matrix(), rho.matrix());
    let v_next = trace_product(a.matrix(), next.matrix());
    let r_t = ((v - v_next) / v).abs();
    let lookahead_loss = quantum_loss(&next, a)?;
    Ok(QlbomdRound { next, loss, r_t, lookahead_loss, newton })
}

/// Shrinks a comparator state toward the maximally mixed state:
/// `(1 - 1/T) rho + I/(T d)`. The output is interior with minimum
/// eigenvalue at least `1/(T d)` and its Bregman divergence from `I/d`
/// under the log-det map is at most `d ln T`, at the price of at most 2
/// nats of comparator loss over `T` rounds.
pub fn clipped_comparator(rho: &DensityMatrix, t: usize, d: usize) -> Result<DensityMatrix> {
    if t < 2 {
        return Err(Error::Invalid(format!("horizon must be >= 2, got {t}")));
    }
    if d != rho.dim() {
        return Err(Error::LengthMismatch { expected: rho.dim(), got: d });
    }
    let clipped = rho.mix_with_identity(1.0 / t as f64)?;
    debug_assert!(clipped.min_eigenvalue() >= 1.0 / (t as f64 * d as f64) - 1e-12);
    Ok(clipped)
}

/// Samples a measurement outcome: index `k` with probability
/// `tr(M_k rho_true)`, plus the drawn element normalized as an
/// [`Observable`]. Deterministic given the generator state.
pub fn sample_measurement<R: Rng + ?Sized>(
    rho_true: &DensityMatrix,
    povm: &Povm,
    rng: &mut R,
) -> Result<(usize, Observable)> {
    if povm.dim() != rho_true.dim() {
        return Err(Error::LengthMismatch { expected: rho_true.dim(), got: povm.dim() });
    }
    let mut probs = Vec::with_capacity(povm.len());
    for (k, el) in povm.elements().iter().enumerate() {
        let p = trace_product(el.matrix(), rho_true.matrix());
        if p < -1e-8 {
            return Err(Error::Invalid(format!("outcome {k} has negative probability {p:.3e}")));
        }
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Invalid(format!(
            "outcome probabilities sum to {total}, outside 1 +/- 1e-8"
        )));
    }
    let draw = rng.random::<f64>() * total;
    let mut cum = 0.0;
    let mut chosen = None;
    for (k, &p) in probs.iter().enumerate() {
        cum += p;
        if draw < cum {
            chosen = Some(k);
            break;
        }
    }
    let k = match chosen {
        Some(k) => k,
        // Rounding pushed the cumulative sum below the draw: take the last
        // outcome that actually has mass.
        None => probs
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("probabilities sum to 1, so some outcome has mass"),
    };
    let a = Observable::new(povm.element(k).matrix().clone())?;
    Ok((k, a))
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with
/// the phase convention fixed from R's diagonal.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::Invalid("unitary must have dimension >= 1".into()));
    }
    let g = random_gaussian_matrix(d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_gaussian_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random Hermitian matrix `(G + G^H)/2` for complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = random_gaussian_matrix(d, rng);
    symmetrize(g)
}

/// Full-rank random state `G G^H / tr(G G^H)` (almost surely interior).
pub fn random_density_gram<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = random_gaussian_matrix(d, rng);
    let w = &g * g.adjoint();
    let tr: f64 = w.diagonal().iter().map(|z| z.re).sum();
    if !(tr > 0.0) {
        return Err(Error::Degenerate("Gram matrix has nonpositive trace".into()));
    }
    DensityMatrix::new(w.map(|z| z / tr))
}

/// Random pure state `u u^H` for a Haar-ish random unit vector `u`.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::Invalid("state must have dimension >= 1".into()));
    }
    let u = DVector::from_fn(d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = u.norm();
    if !(norm > 0.0) {
        return Err(Error::Degenerate("random state vector is zero".into()));
    }
    let u = u.map(|z| z / Complex64::new(norm, 0.0));
    DensityMatrix::new(&u * u.adjoint())
}

/// Log-det mirror map `h(rho) = -ln det rho` on density matrices.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogDetMap;

impl MirrorMap for LogDetMap {
    type Point = DensityMatrix;
    type Gradient = HermitianMatrix;

    fn is_interior(&self, x: &DensityMatrix) -> bool {
        x.is_interior()
    }

    fn gradient_finite(&self, g: &HermitianMatrix) -> bool {
        entries_finite(g.matrix())
    }

    /// `-rho^{-1}`, computed in the eigenbasis. A failed eigendecomposition
    /// (or singular point) yields a NaN matrix, which downstream
    /// finiteness checks reject.
    fn grad_h(&self, x: &DensityMatrix) -> HermitianMatrix {
        let nan = || HermitianMatrix {
            m: CMatrix::from_element(x.dim(), x.dim(), Complex64::new(f64::NAN, 0.0)),
        };
        match hermitian_eigen(x.matrix()) {
            Ok((vals, vecs)) if vals.min() > 0.0 => {
                let inv_neg: Vec<f64> = vals.iter().map(|&v| -1.0 / v).collect();
                HermitianMatrix { m: from_spectrum(&vecs, &inv_neg) }
            }
            _ => nan(),
        }
    }

    fn bregman(&self, x: &DensityMatrix, from: &DensityMatrix) -> f64 {
        logdet_bregman(x, from)
    }

    fn prox(
        &self,
        x: &DensityMatrix,
        g: &HermitianMatrix,
        eta: f64,
    ) -> Result<ProxStep<DensityMatrix>> {
        logdet_prox(x, g, eta).map(|(point, rep)| ProxStep { point, newton: Some(rep) })
    }
}

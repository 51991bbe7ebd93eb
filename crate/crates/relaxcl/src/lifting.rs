//! Lifting data sets `{A, T', R, Q}` and everything derived from them.
//!
//! A data set consists of a contraction `A: H → H'`, a contraction `T'` on
//! `H'`, and maps `R, Q: H₀ → H` with `T'AR = AQ` and `R*R ≤ Q*Q`. The
//! derived quantities are the defect operators `D_A`, `D_T'`, `D∘`, the
//! isometry-like map `ω`, and the kernels of `Q*` and `R*`, all expressed in
//! orthonormal coordinates so that later stages work with plain matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::*;
use crate::nehari::{self, NehariProblem};
use crate::report::{all_pass, Residual};

/// Default strictness margin: `‖A‖ ≤ 1 - δ` and `σ_min(R) ≥ δ`.
pub const DEFAULT_DELTA: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingDataSet {
    pub a: CMatrix,
    pub t_prime: CMatrix,
    pub r: CMatrix,
    pub q: CMatrix,
}

impl LiftingDataSet {
    pub fn new(a: CMatrix, t_prime: CMatrix, r: CMatrix, q: CMatrix) -> Result<Self> {
        let ds = Self { a, t_prime, r, q };
        ds.check_dims()?;
        Ok(ds)
    }

    /// Dimension of `H'`.
    pub fn h_prime(&self) -> usize {
        self.a.nrows()
    }

    /// Dimension of `H`.
    pub fn h(&self) -> usize {
        self.a.ncols()
    }

    /// Dimension of `H₀`.
    pub fn h0(&self) -> usize {
        self.r.ncols()
    }

    pub fn check_dims(&self) -> Result<()> {
        let (hp, h, h0) = (self.h_prime(), self.h(), self.h0());
        let mut problems = Vec::new();
        if self.t_prime.shape() != (hp, hp) {
            problems.push(format!("T' is {:?}, expected {:?}", self.t_prime.shape(), (hp, hp)));
        }
        if self.r.nrows() != h {
            problems.push(format!("R has {} rows, expected {h}", self.r.nrows()));
        }
        if self.q.shape() != (h, h0) {
            problems.push(format!("Q is {:?}, expected {:?}", self.q.shape(), (h, h0)));
        }
        for (name, m) in [("A", &self.a), ("T'", &self.t_prime), ("R", &self.r), ("Q", &self.q)] {
            if !is_finite(m) {
                problems.push(format!("{name} has non-finite entries"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictnessReport {
    pub norm_a: f64,
    /// `None` when `H₀ = 0`, where left invertibility of `R` is vacuous.
    pub sigma_min_r: Option<f64>,
    pub delta: f64,
    pub strict_ok: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub norm_a: f64,
    pub norm_t_prime: f64,
    pub residuals: Vec<Residual>,
    pub strictness: StrictnessReport,
}

impl ValidationReport {
    /// True when `{A, T', R, Q}` is a lifting data set within tolerance.
    pub fn is_valid(&self) -> bool {
        all_pass(&self.residuals)
    }
}

/// Checks the lifting hypotheses and the strictness hypothesis.
pub fn validate(ds: &LiftingDataSet, tol: f64) -> Result<ValidationReport> {
    validate_with_delta(ds, tol, DEFAULT_DELTA)
}

pub fn validate_with_delta(ds: &LiftingDataSet, tol: f64, delta: f64) -> Result<ValidationReport> {
    ds.check_dims()?;
    let norm_a = operator_norm(&ds.a);
    let norm_t = operator_norm(&ds.t_prime);
    let inter = operator_norm(&(&ds.t_prime * &ds.a * &ds.r - &ds.a * &ds.q));
    let qq = ds.q.adjoint() * &ds.q;
    let gap = &qq - ds.r.adjoint() * &ds.r;
    let gap_min = min_eigenvalue(&hermitian_part(&gap))?;
    let gap_min = if gap_min.is_finite() { gap_min } else { 0.0 };
    let residuals = vec![
        Residual::at_most("‖A‖ ≤ 1", norm_a, 1.0 + tol),
        Residual::at_most("‖T'‖ ≤ 1", norm_t, 1.0 + tol),
        Residual::at_most("‖T'AR − AQ‖", inter, tol * (1.0 + norm_a)),
        Residual::at_least("λ_min(Q*Q − R*R)", gap_min, -tol * operator_norm(&qq).max(1.0)),
    ];
    let strictness = strictness(ds, norm_a, delta)?;
    Ok(ValidationReport { norm_a, norm_t_prime: norm_t, residuals, strictness })
}

fn strictness(ds: &LiftingDataSet, norm_a: f64, delta: f64) -> Result<StrictnessReport> {
    let sigma_min_r = sigma_min_cols(&ds.r)?;
    let mut reason = None;
    if norm_a > 1.0 - delta {
        reason = Some(format!("‖A‖ = {norm_a:.6e} exceeds 1 − δ"));
    } else if let Some(s) = sigma_min_r.filter(|s| *s < delta) {
        reason = Some(format!("σ_min(R) = {s:.6e} is below δ"));
    } else {
        let d2 = identity(ds.h()) - ds.a.adjoint() * &ds.a;
        for (name, m) in [("Q*D_A²Q", &ds.q), ("R*D_A²R", &ds.r)] {
            let g = hermitian_part(&(m.adjoint() * &d2 * m));
            if g.nrows() > 0 && min_eigenvalue(&g)? <= 0.0 {
                reason = Some(format!("{name} is not positive definite"));
            }
        }
    }
    Ok(StrictnessReport { norm_a, sigma_min_r, delta, strict_ok: reason.is_none(), reason })
}

/// Defect operators, subspace bases and `ω` for a data set.
///
/// `D_T'` and `D∘` are kept both as full operators and through orthonormal
/// bases of their ranges; "coords" accessors return the operator followed by
/// the co-isometry onto those coordinates.
#[derive(Debug, Clone)]
pub struct DerivedData {
    pub data: LiftingDataSet,
    pub d_a: CMatrix,
    d_a_inv: Option<CMatrix>,
    d_a_sq_inv: Option<CMatrix>,
    pub d_t_prime: CMatrix,
    pub d_t_prime_embedding: SubspaceEmbedding,
    pub d_circ: CMatrix,
    pub d_circ_embedding: SubspaceEmbedding,
    /// `J = [D∘; D_T'AR]` as a map `H₀ → D∘ ⊕ D_T'` in coordinates.
    pub j: CMatrix,
    /// Closure of the range of `D_A Q` inside `H`.
    pub f_embedding: SubspaceEmbedding,
    /// `ω` on `F` (in `f_embedding` coordinates) into `D_T' ⊕ H`, with the
    /// `D_T'` part in coordinates.
    pub omega: CMatrix,
    pub ker_q_star: SubspaceEmbedding,
    pub ker_r_star: SubspaceEmbedding,
    pub strict: bool,
}

/// Computes the derived quantities.
///
/// The data set is not validated here. Every formula downstream is algebraic
/// in `{A, T', R, Q}`, so callers may deliberately feed data that violates the
/// intertwining relation (as the classical-shape cross-checks do). Call
/// [`validate`] first when the lifting hypotheses matter.
pub fn derive(ds: &LiftingDataSet) -> Result<DerivedData> {
    derive_with_delta(ds, DEFAULT_DELTA)
}

pub fn derive_with_delta(ds: &LiftingDataSet, delta: f64) -> Result<DerivedData> {
    ds.check_dims()?;
    let (h, hp) = (ds.h(), ds.h_prime());
    let ata = ds.a.adjoint() * &ds.a;
    let d_a = psd_sqrt_scaled(&(identity(h) - &ata), 1.0)?;
    let norm_a = operator_norm(&ds.a);
    let strict_a = norm_a <= 1.0 - delta;
    let (d_a_inv, d_a_sq_inv) = if strict_a {
        let sq_inv = hpd_inverse(&(identity(h) - &ata))?;
        (Some(psd_sqrt(&sq_inv)?), Some(sq_inv))
    } else {
        (None, None)
    };

    let d_t_prime = psd_sqrt_scaled(&(identity(hp) - ds.t_prime.adjoint() * &ds.t_prime), 1.0)?;
    let d_t_prime_embedding = range_embedding(&d_t_prime)?;

    let qq = ds.q.adjoint() * &ds.q;
    let rr = ds.r.adjoint() * &ds.r;
    let gap_scale = operator_norm(&qq).max(operator_norm(&rr)).max(1.0);
    let d_circ = psd_sqrt_scaled(&hermitian_part(&(&qq - &rr)), gap_scale)?;
    let d_circ_embedding = range_embedding(&d_circ)?;

    let dt_ar = d_t_prime_embedding.coords() * &d_t_prime * &ds.a * &ds.r;
    let j = vstack(&[&(d_circ_embedding.coords() * &d_circ), &dt_ar]);

    let daq = &d_a * &ds.q;
    let f_embedding = range_embedding(&daq)?;
    let lifted = vstack(&[&dt_ar, &(&d_a * &ds.r)]);
    let omega = lifted * pseudo_inverse(&daq)? * f_embedding.embed();

    let ker_q_star = kernel_embedding(&ds.q)?;
    let ker_r_star = kernel_embedding(&ds.r)?;
    let report = strictness(ds, norm_a, delta)?;

    Ok(DerivedData {
        data: ds.clone(),
        d_a,
        d_a_inv,
        d_a_sq_inv,
        d_t_prime,
        d_t_prime_embedding,
        d_circ,
        d_circ_embedding,
        j,
        f_embedding,
        omega,
        ker_q_star,
        ker_r_star,
        strict: report.strict_ok,
    })
}

impl DerivedData {
    fn require_strict(&self, what: &str) -> Result<()> {
        if self.strict {
            Ok(())
        } else {
            Err(Error::NotStrict(format!("{what} needs ‖A‖ < 1 and R left invertible")))
        }
    }

    pub fn d_a_inv(&self) -> Result<&CMatrix> {
        self.d_a_inv.as_ref().ok_or_else(|| Error::NotStrict("D_A is not invertible".into()))
    }

    /// `D_A^{-2} = (I - A*A)^{-1}`.
    pub fn d_a_sq_inv(&self) -> Result<&CMatrix> {
        self.d_a_sq_inv.as_ref().ok_or_else(|| Error::NotStrict("D_A is not invertible".into()))
    }

    /// `D_A²`.
    pub fn d_a_sq(&self) -> CMatrix {
        &self.d_a * &self.d_a
    }

    pub fn dim_d_t_prime(&self) -> usize {
        self.d_t_prime_embedding.dim()
    }

    pub fn dim_d_circ(&self) -> usize {
        self.d_circ_embedding.dim()
    }

    /// `D_T'` as a map `H' → D_T'` in coordinates.
    pub fn d_t_prime_coords(&self) -> CMatrix {
        self.d_t_prime_embedding.coords() * &self.d_t_prime
    }

    /// `D_T' A R : H₀ → D_T'` in coordinates.
    pub fn d_t_prime_ar(&self) -> CMatrix {
        self.d_t_prime_coords() * &self.data.a * &self.data.r
    }

    /// `Q* D_A² Q`.
    pub fn gram_q(&self) -> CMatrix {
        hermitian_part(&(self.data.q.adjoint() * self.d_a_sq() * &self.data.q))
    }

    /// `R* D_A² R`.
    pub fn gram_r(&self) -> CMatrix {
        hermitian_part(&(self.data.r.adjoint() * self.d_a_sq() * &self.data.r))
    }

    /// Left inverse `(Q*D_A²Q)^{-1} Q* D_A` of `D_A Q`.
    pub fn left_inverse_daq(&self) -> Result<CMatrix> {
        self.require_strict("the left inverse of D_A Q")?;
        solve_hpd(&self.gram_q(), &(self.data.q.adjoint() * &self.d_a))
    }

    /// Left inverse `(R*D_A²R)^{-1} R* D_A` of `D_A R`.
    pub fn left_inverse_dar(&self) -> Result<CMatrix> {
        self.require_strict("the left inverse of D_A R")?;
        solve_hpd(&self.gram_r(), &(self.data.r.adjoint() * &self.d_a))
    }

    /// `ωΠ_F : H → D_T' ⊕ H`.
    pub fn omega_on_h(&self) -> CMatrix {
        &self.omega * self.f_embedding.coords()
    }

    /// `‖Q*D_A²Q − (D∘² + R*A*D_T'²AR + R*D_A²R)‖`.
    pub fn gram_identity_residual(&self) -> f64 {
        let ds = &self.data;
        let dt2 = &self.d_t_prime * &self.d_t_prime;
        let rhs = &self.d_circ * &self.d_circ
            + ds.r.adjoint() * ds.a.adjoint() * dt2 * &ds.a * &ds.r
            + self.gram_r();
        operator_norm(&(self.gram_q() - rhs))
    }

    /// `‖ω*ω − I_F‖`. Zero exactly when `ω` is an isometry.
    pub fn omega_isometry_defect(&self) -> f64 {
        let n = self.omega.ncols();
        operator_norm(&(self.omega.adjoint() * &self.omega - identity(n)))
    }
}

/// Truncated Sz.-Nagy–Schäffer isometric lifting of `T'`.
///
/// The matrix acts on `H' ⊕ D_T'^{deg+1}` by
/// `(h, d₀, …, d_deg) ↦ (T'h, D_T'h, d₀, …, d_{deg−1})`; the last component
/// shifts out of the window.
pub fn sznagy_schaffer_truncated(t_prime: &CMatrix, deg: usize) -> Result<CMatrix> {
    ensure_square(t_prime, "T'")?;
    let hp = t_prime.nrows();
    let d = psd_sqrt_scaled(&(identity(hp) - t_prime.adjoint() * t_prime), 1.0)?;
    let emb = range_embedding(&d)?;
    let dt = emb.dim();
    let n = hp + dt * (deg + 1);
    let mut u = zeros(n, n);
    u.view_mut((0, 0), (hp, hp)).copy_from(t_prime);
    u.view_mut((hp, 0), (dt, hp)).copy_from(&(emb.coords() * d));
    for k in 0..deg {
        let (r0, c0) = (hp + dt * (k + 1), hp + dt * k);
        u.view_mut((r0, c0), (dt, dt)).copy_from(&identity(dt));
    }
    Ok(u)
}

/// Families of random lifting data used by the generators and the tests.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceKind {
    /// Random `R = SQ` with `S` a contraction (a unitary when `isometric`, so
    /// that `R*R = Q*Q`), random `T'`, and `A` drawn from the solution space
    /// of `T'AR = AQ`.
    Generic { h_prime: usize, h: usize, h0: usize, isometric: bool },
    /// Hankel data of a random relaxed Nehari problem.
    NehariLike { n_window: usize, u_dim: usize, y_dim: usize, taps: usize },
    /// `R = I`, `Q` unitary, and `T'` sharing unimodular eigenvalues with `Q`
    /// so that `T'A = AQ` has nonzero solutions.
    Classical { h_prime: usize, h: usize },
    /// The algebraic shape of classical data (`R = I`, `Q` unitary, `T'` a
    /// strict contraction, `‖A‖ < 1`) without the intertwining relation.
    /// Only meaningful for identities that never use `T'AR = AQ`.
    ClassicalShape { h_prime: usize, h: usize },
}

/// Random data set of the given kind with `‖A‖ = target_norm_a`.
pub fn generate_random(kind: &InstanceKind, target_norm_a: f64, seed: u64) -> Result<LiftingDataSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        InstanceKind::Generic { h_prime, h, h0, isometric } => {
            let q = random_with_norm(&mut rng, h, h0, 1.0);
            let s = if isometric {
                random_unitary(&mut rng, h)
            } else {
                let norm = rng.random_range(0.3..0.95);
                random_with_norm(&mut rng, h, h, norm)
            };
            let r = s * &q;
            let t_norm = rng.random_range(0.5..0.98);
            let t_prime = random_with_norm(&mut rng, h_prime, h_prime, t_norm);
            let a = intertwining_solution(&mut rng, &t_prime, &r, &q, target_norm_a)?;
            LiftingDataSet::new(a, t_prime, r, q)
        }
        InstanceKind::NehariLike { n_window, u_dim, y_dim, taps } => {
            let p = NehariProblem::random(&mut rng, n_window, u_dim, y_dim, taps, target_norm_a);
            Ok(nehari::lifting_data(&p))
        }
        InstanceKind::Classical { h_prime, h } => {
            let w = random_unitary(&mut rng, h);
            let thetas: Vec<f64> = (0..h).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            let q = &w * CMatrix::from_fn(h, h, |i, j| if i == j { unit(thetas[i]) } else { C64::default() })
                * w.adjoint();
            let shared = h_prime.min(h).min(2).max(1);
            let mut core = zeros(h_prime, h_prime);
            for k in 0..shared.min(h_prime) {
                core[(k, k)] = unit(thetas[k]);
            }
            if h_prime > shared {
                let rest = h_prime - shared;
                let c0 = random_with_norm(&mut rng, rest, rest, 0.8);
                core.view_mut((shared, shared), (rest, rest)).copy_from(&c0);
            }
            let v = random_unitary(&mut rng, h_prime);
            let t_prime = &v * core * v.adjoint();
            let r = identity(h);
            let a = intertwining_solution(&mut rng, &t_prime, &r, &q, target_norm_a)?;
            LiftingDataSet::new(a, t_prime, r, q)
        }
        InstanceKind::ClassicalShape { h_prime, h } => {
            let q = random_unitary(&mut rng, h);
            let t_norm = rng.random_range(0.3..0.9);
            let t_prime = random_with_norm(&mut rng, h_prime, h_prime, t_norm);
            let a = random_with_norm(&mut rng, h_prime, h, target_norm_a);
            LiftingDataSet::new(a, t_prime, identity(h), q)
        }
    }
}

/// Random element of `{A : T'AR = AQ}` rescaled to norm `target`.
fn intertwining_solution<G: Rng>(
    rng: &mut G,
    t_prime: &CMatrix,
    r: &CMatrix,
    q: &CMatrix,
    target: f64,
) -> Result<CMatrix> {
    let (hp, h) = (t_prime.nrows(), r.nrows());
    // vec(T'AR − AQ) = (Rᵀ ⊗ T' − Qᵀ ⊗ I) vec(A) with column-major vec.
    let l = r.transpose().kronecker(t_prime) - q.transpose().kronecker(&identity(hp));
    let null = kernel_embedding(&l.adjoint())?;
    if null.dim() == 0 {
        return Err(Error::EmptySolutionSpace);
    }
    let coeffs = random_gaussian(rng, null.dim(), 1);
    let v = null.embed() * coeffs;
    let a = CMatrix::from_column_slice(hp, h, v.as_slice());
    let n = operator_norm(&a);
    if n < 1e-12 {
        return Err(Error::EmptySolutionSpace);
    }
    Ok(scale(&a, real(target / n)))
}

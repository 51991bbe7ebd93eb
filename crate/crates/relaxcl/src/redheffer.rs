//! State-space description of all solutions of a relaxed lifting problem.
//!
//! For a strict data set the solutions `B = [A; Γ]` are exactly
//!
//! ```text
//! Γ(λ) = Φ₂₂(λ) + Φ₂₁(λ) V(λ) (I − Φ₁₁(λ) V(λ))⁻¹ Φ₁₂(λ)
//! ```
//!
//! with `V` a Schur-class function from `Ker Q*` into
//! `W = D∘ ⊕ D_T' ⊕ Ker R*`, and the four `Φ`s are the blocks of the transfer
//! function of a single system with state space `H`:
//!
//! ```text
//! Φ₁₁ = λX₃(I − λX₁)⁻¹X₂      Φ₁₂ = X₃(I − λX₁)⁻¹
//! Φ₂₁ = X₅ + λX₄(I − λX₁)⁻¹X₂ Φ₂₂ = X₄(I − λX₁)⁻¹
//! ```
//!
//! The system conjugated by `D_A` is a contraction, which is what makes the
//! series computed here converge and lets the tail bounds kick in.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{observability_matrix, observability_series, tail_from, toeplitz, SystemRealization, TaylorSeries};
use crate::lifting::DerivedData;
use crate::matrix::*;
use crate::schur::SchurParameter;

/// The five operators `X₁, …, X₅` of the realization of the `Φ`s.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiRealization {
    pub x1: CMatrix,
    pub x2: CMatrix,
    pub x3: CMatrix,
    pub x4: CMatrix,
    pub x5: CMatrix,
}

/// Values of the four `Φ` functions at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiValues {
    pub phi11: CMatrix,
    pub phi12: CMatrix,
    pub phi21: CMatrix,
    pub phi22: CMatrix,
}

/// Taylor expansions of the four `Φ` functions.
#[derive(Debug, Clone)]
pub struct PhiSeries {
    pub phi11: TaylorSeries,
    pub phi12: TaylorSeries,
    pub phi21: TaylorSeries,
    pub phi22: TaylorSeries,
}

impl PhiRealization {
    pub fn state_dim(&self) -> usize {
        self.x1.nrows()
    }

    /// Dimension of the space `V` maps into.
    pub fn w_dim(&self) -> usize {
        self.x2.ncols()
    }

    /// Dimension of the space `V` maps from.
    pub fn v_in_dim(&self) -> usize {
        self.x3.nrows()
    }

    pub fn out_dim(&self) -> usize {
        self.x4.nrows()
    }

    pub fn eval(&self, lambda: C64) -> Result<PhiValues> {
        let n = self.state_dim();
        let res = inverse(&(identity(n) - scale(&self.x1, lambda))).map_err(|_| Error::ResolventSingular(lambda))?;
        let x3r = &self.x3 * &res;
        let x4r = &self.x4 * &res;
        Ok(PhiValues {
            phi11: scale(&(&x3r * &self.x2), lambda),
            phi21: &self.x5 + scale(&(&x4r * &self.x2), lambda),
            phi12: x3r,
            phi22: x4r,
        })
    }

    /// Conjugates the state space by `s`: `X₁ ↦ sX₁s⁻¹`, `X₂ ↦ sX₂`,
    /// `X₃ ↦ X₃s⁻¹`, `X₄ ↦ X₄s⁻¹`. The `Φ`s with a state-space input then pick
    /// up a factor `s⁻¹` on the right.
    pub fn similar(&self, s: &CMatrix, s_inv: &CMatrix) -> PhiRealization {
        PhiRealization {
            x1: s * &self.x1 * s_inv,
            x2: s * &self.x2,
            x3: &self.x3 * s_inv,
            x4: &self.x4 * s_inv,
            x5: self.x5.clone(),
        }
    }

    /// Taylor coefficients of the four functions from powers of `X₁`.
    pub fn series(&self, deg: usize) -> PhiSeries {
        let obs3 = observability_series(&self.x1, &self.x3, deg);
        let obs4 = observability_series(&self.x1, &self.x4, deg);
        let x2n = operator_norm(&self.x2).powi(2);
        let through = |obs: &TaylorSeries, constant: CMatrix, prefix: &CMatrix| {
            let mut coeffs = vec![constant];
            coeffs.extend(obs.coeffs.iter().take(deg).map(|c0| c0 * &self.x2));
            let tail = tail_from(&self.x1, prefix, deg).map(|t| t * x2n);
            TaylorSeries::new(obs.rows, self.w_dim(), coeffs, tail)
        };
        PhiSeries {
            phi11: through(&obs3, zeros(self.v_in_dim(), self.w_dim()), &self.x3),
            phi21: through(&obs4, self.x5.clone(), &self.x4),
            phi12: obs3,
            phi22: obs4,
        }
    }

    /// State and output matrices of the loop closed through `V`.
    ///
    /// With `V = d + λc(I − λa)⁻¹b` the composite state `(s, η)` obeys
    /// `(s, η) = (h, 0) + λ A_cl (s, η)` and `Γh = C_cl (s, η)`.
    pub fn closed_loop(&self, v: &SystemRealization) -> (CMatrix, CMatrix) {
        let dx3 = &v.d * &self.x3;
        let a_cl = vstack(&[
            &hstack(&[&(&self.x1 + &self.x2 * &dx3), &(&self.x2 * &v.c)]),
            &hstack(&[&(&v.b * &self.x3), &v.a]),
        ]);
        let c_cl = hstack(&[&(&self.x4 + &self.x5 * &dx3), &(&self.x5 * &v.c)]);
        (a_cl, c_cl)
    }

    /// Taylor coefficients of `Γ(λ)·right`, where `right` maps into the state
    /// space, from the closed-loop realization.
    pub fn gamma_series(&self, v: &SchurParameter, deg: usize, right: &CMatrix) -> Result<TaylorSeries> {
        v.check_dims(self.v_in_dim(), self.w_dim())?;
        let sys = v.realization();
        let (a_cl, c_cl) = self.closed_loop(&sys);
        let init = vstack(&[right, &zeros(sys.state_dim(), right.ncols())]);
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut state = init;
        for _ in 0..=deg {
            coeffs.push(&c_cl * &state);
            state = &a_cl * state;
        }
        let tail = tail_from(&a_cl, &c_cl, deg + 1).map(|t| t * operator_norm(right).powi(2));
        Ok(TaylorSeries::new(self.out_dim(), right.ncols(), coeffs, tail))
    }
}

impl PhiSeries {
    /// `Φ₂₂ + Φ₂₁V(I − Φ₁₁V)⁻¹Φ₁₂` by power-series arithmetic.
    pub fn compose(&self, v: &TaylorSeries) -> Result<TaylorSeries> {
        let p = self.phi11.mul(v);
        let inv = p.inverse_of_identity_minus()?;
        let tail = self.phi21.mul(v).mul(&inv).mul(&self.phi12);
        Ok(self.phi22.add(&tail))
    }
}

/// `Φ₂₂ + Φ₂₁V(I − Φ₁₁V)⁻¹Φ₁₂` at one point.
pub fn lft_eval(phi: &PhiValues, v: &CMatrix) -> Result<CMatrix> {
    let k = phi.phi11.nrows();
    let inner = solve(&(identity(k) - &phi.phi11 * v), &phi.phi12)?;
    Ok(&phi.phi22 + &phi.phi21 * v * inner)
}

/// Block sizes of `W = D∘ ⊕ D_T' ⊕ Ker R*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InputSplit {
    pub d_circ: usize,
    pub d_t_prime: usize,
    pub ker_r_star: usize,
}

impl InputSplit {
    pub fn total(&self) -> usize {
        self.d_circ + self.d_t_prime + self.ker_r_star
    }
}

#[derive(Debug, Clone)]
pub struct RedhefferCoefficients {
    pub x: PhiRealization,
    pub delta_q: CMatrix,
    pub delta_r: CMatrix,
    pub delta_omega: CMatrix,
    pub r_spec_x1: f64,
    pub input_split: InputSplit,
    pub a: CMatrix,
    pub d_a: CMatrix,
    pub d_a_inv: CMatrix,
}

/// Builds `X₁, …, X₅` and the positive operators `Δ_Q`, `Δ_R`, `Δ_Ω`.
pub fn build_coefficients(dd: &DerivedData) -> Result<RedhefferCoefficients> {
    if !dd.strict {
        return Err(Error::NotStrict("the Redheffer coefficients need a strict data set".into()));
    }
    let ds = &dd.data;
    let da2 = dd.d_a_sq();
    let da2_inv = dd.d_a_sq_inv()?.clone();
    let gq = dd.gram_q();
    let gr = dd.gram_r();
    let pi_q = dd.ker_q_star.coords();
    let pi_r = dd.ker_r_star.coords();

    let q_left = solve_hpd(&gq, &(ds.q.adjoint() * &da2))?;
    let x1 = &ds.r * &q_left;

    let delta_q = hermitian_part(&(&pi_q * &da2_inv * pi_q.adjoint()));
    let delta_r = hermitian_part(&(&pi_r * &da2_inv * pi_r.adjoint()));
    let gr_jt = solve_hpd(&gr, &dd.j.adjoint())?;
    let delta_omega = hermitian_part(&(identity(dd.j.nrows()) + &dd.j * &gr_jt));

    let dq_is = psd_inv_sqrt(&delta_q)?;
    let dr_is = psd_inv_sqrt(&delta_r)?;
    let dom_is = psd_inv_sqrt(&delta_omega)?;

    let split = InputSplit {
        d_circ: dd.dim_d_circ(),
        d_t_prime: dd.dim_d_t_prime(),
        ker_r_star: dd.ker_r_star.dim(),
    };
    let x2 = hstack(&[
        &(-(&ds.r * &gr_jt * &dom_is)),
        &(-(&da2_inv * pi_r.adjoint() * &dr_is)),
    ]);
    let x3 = &dq_is * &pi_q;
    let x4 = dd.d_t_prime_ar() * &q_left;
    let dom_is_dt = block(&dom_is, split.d_circ, 0, split.d_t_prime, split.d_circ + split.d_t_prime);
    let x5 = hstack(&[&dom_is_dt, &zeros(split.d_t_prime, split.ker_r_star)]);
    let r_spec_x1 = spectral_radius(&x1)?;

    Ok(RedhefferCoefficients {
        x: PhiRealization { x1, x2, x3, x4, x5 },
        delta_q,
        delta_r,
        delta_omega,
        r_spec_x1,
        input_split: split,
        a: ds.a.clone(),
        d_a: dd.d_a.clone(),
        d_a_inv: dd.d_a_inv()?.clone(),
    })
}

impl RedhefferCoefficients {
    /// Realization conjugated by `D_A`, which is a contraction.
    pub fn tilde(&self) -> PhiRealization {
        self.x.similar(&self.d_a, &self.d_a_inv)
    }

    /// `[[X̃₁, X̃₂], [X̃₃, 0], [X̃₄, X̃₅]]` from `H ⊕ W` to `H ⊕ Ker Q* ⊕ D_T'`.
    pub fn xtilde_matrix(&self) -> CMatrix {
        let t = self.tilde();
        let zero = zeros(t.v_in_dim(), t.w_dim());
        vstack(&[
            &hstack(&[&t.x1, &t.x2]),
            &hstack(&[&t.x3, &zero]),
            &hstack(&[&t.x4, &t.x5]),
        ])
    }

    pub fn v_in_dim(&self) -> usize {
        self.x.v_in_dim()
    }

    pub fn w_dim(&self) -> usize {
        self.x.w_dim()
    }
}

pub fn phi_eval(rc: &RedhefferCoefficients, lambda: C64) -> Result<PhiValues> {
    rc.x.eval(lambda)
}

/// `Γ(λ)` for a Schur parameter, straight from the `Φ` values.
pub fn gamma_eval(rc: &RedhefferCoefficients, v: &SchurParameter, lambda: C64) -> Result<CMatrix> {
    v.check_dims(rc.v_in_dim(), rc.w_dim())?;
    lft_eval(&phi_eval(rc, lambda)?, &v.eval(lambda)?)
}

/// `Z(λ) = [X₄D_A⁻¹; D_AX₁D_A⁻¹] + [X₅; D_AX₂] V(λ) X₃D_A⁻¹`, mapping `D_A`
/// into `D_T' ⊕ D_A`.
pub fn z_from_v(dd: &DerivedData, rc: &RedhefferCoefficients, v: &SchurParameter, lambda: C64) -> Result<CMatrix> {
    v.check_dims(rc.v_in_dim(), rc.w_dim())?;
    let d_a_inv = dd.d_a_inv()?;
    let x = &rc.x;
    let base = vstack(&[&(&x.x4 * d_a_inv), &(&dd.d_a * &x.x1 * d_a_inv)]);
    let col = vstack(&[&x.x5, &(&dd.d_a * &x.x2)]);
    Ok(base + col * v.eval(lambda)? * &x.x3 * d_a_inv)
}

/// `Π_{D_T'} Z(λ) (I − λ Π_{D_A} Z(λ))⁻¹ D_A`, which equals `Γ(λ)`.
pub fn gamma_from_z(z: &CMatrix, d_t_prime_dim: usize, d_a: &CMatrix, lambda: C64) -> Result<CMatrix> {
    let h = z.ncols();
    let top = block(z, 0, 0, d_t_prime_dim, h);
    let bottom = block(z, d_t_prime_dim, 0, h, h);
    let inner = solve(&(identity(h) - scale(&bottom, lambda)), d_a).map_err(|_| Error::ResolventSingular(lambda))?;
    Ok(top * inner)
}

/// A solution `B = [A; Γ]` in Taylor form.
#[derive(Debug, Clone)]
pub struct SolutionTaylor {
    pub a_part: CMatrix,
    pub gamma: TaylorSeries,
}

/// Taylor coefficients of `Γ` for the parameter `v`.
///
/// The coefficients come from the closed-loop realization of `Φ` with `V`; the
/// loop is built on the `D_A`-conjugated system so that its state matrix is a
/// contraction and the tail bound is informative.
pub fn solution_taylor(rc: &RedhefferCoefficients, v: &SchurParameter, deg: usize) -> Result<SolutionTaylor> {
    let gamma = rc.tilde().gamma_series(v, deg, &rc.d_a)?;
    Ok(SolutionTaylor { a_part: rc.a.clone(), gamma })
}

/// Same coefficients by composing the Taylor series of `Φ` and `V`. Kept as
/// an independent route for cross-checks; no tail bound is attached.
pub fn solution_taylor_by_series(rc: &RedhefferCoefficients, v: &SchurParameter, deg: usize) -> Result<SolutionTaylor> {
    v.check_dims(rc.v_in_dim(), rc.w_dim())?;
    let phis = rc.x.series(deg);
    let gamma = phis.compose(&v.taylor(deg))?;
    Ok(SolutionTaylor { a_part: rc.a.clone(), gamma })
}

/// Finite section of `M = [[0, A], [M_Φ₁₁, Γ_Φ₁₂], [M_Φ₂₁, Γ_Φ₂₂]]`.
#[derive(Debug, Clone)]
pub struct TruncatedM {
    pub matrix: CMatrix,
    pub degree: usize,
    /// Bound on `‖M*M − M_t*M_t‖` over the kept columns, when available.
    pub slack: Option<f64>,
}

/// Keeps `deg + 1` input blocks of `H²(W)` and `2·deg + 1` output blocks of
/// each Hardy space.
pub fn assemble_m(rc: &RedhefferCoefficients, deg: usize) -> TruncatedM {
    let s = rc.tilde().series(2 * deg);
    let phi12 = s.phi12.right_mul(&rc.d_a);
    let phi22 = s.phi22.right_mul(&rc.d_a);
    truncated_m(&rc.a, &s.phi11, &phi12, &s.phi21, &phi22, deg)
}

/// Finite section of `[[0, top], [M_{φ₁₁}, Γ_{φ₁₂}], [M_{φ₂₁}, Γ_{φ₂₂}]]`.
///
/// The series must reach degree `2·deg`. The slack bounds the squared norm of
/// the discarded rows restricted to the kept columns, which is exactly how
/// far the truncated Gram can be from the true one.
pub fn truncated_m(
    top: &CMatrix,
    phi11: &TaylorSeries,
    phi12: &TaylorSeries,
    phi21: &TaylorSeries,
    phi22: &TaylorSeries,
    deg: usize,
) -> TruncatedM {
    let out_deg = 2 * deg;
    let w = phi11.cols;
    let first = hstack(&[&zeros(top.nrows(), (deg + 1) * w), top]);
    let mid = hstack(&[&toeplitz(phi11, out_deg + 1, deg + 1), &observability_matrix(phi12)]);
    let bot = hstack(&[&toeplitz(phi21, out_deg + 1, deg + 1), &observability_matrix(phi22)]);
    let matrix = vstack(&[&first, &mid, &bot]);

    let slack = (|| {
        let mut total = phi12.tail_bound? + phi22.tail_bound?;
        for series in [phi11, phi21] {
            let tail = series.tail_bound?;
            for j in 0..=deg {
                let dropped_from = out_deg - j + 1;
                let partial: f64 = series.coeffs[dropped_from..].iter().map(|c0| operator_norm(c0).powi(2)).sum();
                total += partial + tail;
            }
        }
        Some(total)
    })();
    TruncatedM { matrix, degree: deg, slack }
}

impl TruncatedM {
    pub fn sigma_max(&self) -> f64 {
        sigma_max_via_gram(&self.matrix)
    }

    /// `‖M_t*M_t − I‖`.
    pub fn isometry_residual(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        match hermitian_eigen(&hermitian_part(&g)) {
            Ok((vals, _)) => vals.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max),
            Err(_) => operator_norm(&(g - identity(self.matrix.ncols()))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct YGramReport {
    pub residual: f64,
    pub sigma_min_y_star: f64,
}

/// Builds `Y` and compares `Y*Y` with `D²_{ω*} = I − ωΠ_F(ωΠ_F)*`.
pub fn y_gram_check(dd: &DerivedData) -> Result<YGramReport> {
    if !dd.strict {
        return Err(Error::NotStrict("the Y-Gram check needs a strict data set".into()));
    }
    let (dc, dt, h) = (dd.dim_d_circ(), dd.dim_d_t_prime(), dd.data.h());
    let delta_omega = hermitian_part(&(identity(dc + dt) + &dd.j * solve_hpd(&dd.gram_r(), &dd.j.adjoint())?));
    let dom_is = psd_inv_sqrt(&delta_omega)?;
    let embed_dt = vstack(&[&zeros(dc, dt), &identity(dt)]);
    let ker = kernel_embedding(&(&dd.d_a * &dd.data.r))?;
    let y = vstack(&[
        &hstack(&[&(&dom_is * embed_dt), &(-(&dom_is * &dd.j * dd.left_inverse_dar()?))]),
        &hstack(&[&zeros(ker.dim(), dt), &(-ker.coords())]),
    ]);
    let w = dd.omega_on_h();
    let defect = identity(dt + h) - &w * w.adjoint();
    let residual = operator_norm(&(y.adjoint() * &y - defect));
    let sigma_min_y_star = sigma_min_cols(&y.adjoint())?.unwrap_or(f64::INFINITY);
    Ok(YGramReport { residual, sigma_min_y_star })
}

/// Residuals of `P_{Ker N*D_A} = D_A⁻¹Π*Δ_N⁻¹ΠD_A⁻¹` for `N = Q` and `N = R`,
/// against projections computed from an SVD.
pub fn projection_identity_check(dd: &DerivedData) -> Result<(f64, f64)> {
    let d_a_inv = dd.d_a_inv()?;
    let da2_inv = dd.d_a_sq_inv()?;
    let one = |n: &CMatrix, emb: &SubspaceEmbedding| -> Result<f64> {
        let exact = kernel_embedding(&(&dd.d_a * n))?.projector();
        let pi = emb.coords();
        let delta = hermitian_part(&(&pi * da2_inv * pi.adjoint()));
        let formula = d_a_inv * pi.adjoint() * hpd_inverse(&delta)? * &pi * d_a_inv;
        Ok(operator_norm(&(exact - formula)))
    };
    Ok((one(&dd.data.q, &dd.ker_q_star)?, one(&dd.data.r, &dd.ker_r_star)?))
}

/// `‖Δ_Ω⁻¹ − (I − J(Q*D_A²Q)⁻¹J*)‖`.
pub fn delta_omega_inverse_residual(dd: &DerivedData, rc: &RedhefferCoefficients) -> Result<f64> {
    let lhs = hpd_inverse(&rc.delta_omega)?;
    let rhs = identity(dd.j.nrows()) - &dd.j * solve_hpd(&dd.gram_q(), &dd.j.adjoint())?;
    Ok(operator_norm(&(lhs - rhs)))
}

/// The two readings of the classical closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentReading {
    /// `Δ_Q = ΠD_A⁻¹Π*`, and `D_A⁻¹` in the resolvent term of `Φ₂₁`.
    AsPrinted,
    /// `D_A⁻²` in both places, as in the general formulas.
    Corrected,
}

impl ExponentReading {
    pub const ALL: [ExponentReading; 2] = [ExponentReading::AsPrinted, ExponentReading::Corrected];

    pub fn name(self) -> &'static str {
        match self {
            ExponentReading::AsPrinted => "as-printed",
            ExponentReading::Corrected => "corrected",
        }
    }
}

const CLASSICAL_SHAPE_TOL: f64 = 1e-10;

/// Closed forms of the `Φ`s when `R = I`, `Q` is an isometry and `‖A‖ < 1`:
///
/// ```text
/// Φ₁₁ = −λΔ_Q^{-1/2}Π(I − λT_A)⁻¹D_A⁻²A*D_T'Δ_Ω^{-1/2}
/// Φ₁₂ = Δ_Q^{-1/2}Π(I − λT_A)⁻¹
/// Φ₂₁ = Δ_Ω^{1/2} − D_T'A(I − λT_A)⁻¹D_A^{-k}A*D_T'Δ_Ω^{-1/2}
/// Φ₂₂ = D_T'A(I − λT_A)⁻¹T_A
/// ```
///
/// with `T_A = D_{AQ}⁻²Q*D_A²`, `Δ_Ω = I + D_T'AD_A⁻²A*D_T'`, and
/// `Δ_Q = ΠD_A^{-k}Π*`, where `k` is 1 or 2 depending on the reading.
pub fn classical_phi_eval(dd: &DerivedData, lambda: C64, reading: ExponentReading) -> Result<PhiValues> {
    let ds = &dd.data;
    let h = ds.h();
    if ds.h0() != h || operator_norm(&(&ds.r - identity(h))) > CLASSICAL_SHAPE_TOL {
        return Err(Error::NotClassicalShape("R must be the identity on H".into()));
    }
    if operator_norm(&(ds.q.adjoint() * &ds.q - identity(h))) > CLASSICAL_SHAPE_TOL {
        return Err(Error::NotClassicalShape("Q must be an isometry".into()));
    }
    let d_a_inv = dd.d_a_inv()?;
    let da2_inv = dd.d_a_sq_inv()?;
    let weight = match reading {
        ExponentReading::AsPrinted => d_a_inv,
        ExponentReading::Corrected => da2_inv,
    };
    let aq = &ds.a * &ds.q;
    let d_aq2 = hermitian_part(&(identity(h) - aq.adjoint() * &aq));
    let t_a = solve_hpd(&d_aq2, &(ds.q.adjoint() * dd.d_a_sq()))?;
    let pi = dd.ker_q_star.coords();
    let delta_q = hermitian_part(&(&pi * weight * pi.adjoint()));
    let dta = dd.d_t_prime_coords() * &ds.a;
    let dt = dta.nrows();
    let delta_omega = hermitian_part(&(identity(dt) + &dta * da2_inv * dta.adjoint()));
    let dq_is = psd_inv_sqrt(&delta_q)?;
    let dom_is = psd_inv_sqrt(&delta_omega)?;
    let dom_half = psd_sqrt(&delta_omega)?;
    let res = inverse(&(identity(h) - scale(&t_a, lambda))).map_err(|_| Error::ResolventSingular(lambda))?;
    Ok(PhiValues {
        phi11: scale(&(&dq_is * &pi * &res * da2_inv * dta.adjoint() * &dom_is), -lambda),
        phi12: &dq_is * &pi * &res,
        phi21: dom_half - &dta * &res * weight * dta.adjoint() * &dom_is,
        phi22: &dta * &res * t_a,
    })
}

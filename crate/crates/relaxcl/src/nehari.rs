//! The relaxed Nehari extension problem.
//!
//! Given taps `F₋₁, …, F₋K : U → Y` and a window `N ≥ 1`, find `H₀, H₁, …`
//! such that the operator `U^N → ℓ²(Y)` whose column `j` holds the sequence
//! `X_{m−j}` (with `X_n = H_n` for `n ≥ 0` and `X_n = F_n` for `n < 0`) has
//! norm at most one. The problem is a relaxed lifting problem for the
//! `N`-truncated Hankel operator, and everything below is the specialization
//! of the general Redheffer parameterization to that data.
//!
//! Row convention for Hankel-type matrices: block row `i − 1` of the matrix is
//! the row labelled `−i`, so the matrix lists rows from the bottom of the
//! display upwards.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{SystemRealization, TaylorSeries};
use crate::lifting::LiftingDataSet;
use crate::matrix::*;
use crate::redheffer::{truncated_m, PhiRealization, PhiValues, TruncatedM};
use crate::schur::SchurParameter;

/// Smallest eigenvalue of `Λ = I − A*A` accepted as strict.
pub const STRICT_MIN_EIG: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct NehariProblem {
    pub n_window: usize,
    pub u_dim: usize,
    pub y_dim: usize,
    /// `[F₋₁, …, F₋K]`; later taps are zero.
    pub taps: Vec<CMatrix>,
}

impl NehariProblem {
    pub fn new(n_window: usize, u_dim: usize, y_dim: usize, taps: Vec<CMatrix>) -> Result<Self> {
        if n_window == 0 {
            return Err(Error::Invalid("the window N must be at least 1".into()));
        }
        for (k, t) in taps.iter().enumerate() {
            if t.shape() != (y_dim, u_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "tap F_-{} is {}x{}, expected {y_dim}x{u_dim}",
                    k + 1,
                    t.nrows(),
                    t.ncols()
                )));
            }
            if !is_finite(t) {
                return Err(Error::Invalid(format!("tap F_-{} has non-finite entries", k + 1)));
            }
        }
        Ok(Self { n_window, u_dim, y_dim, taps })
    }

    /// Problem with `K` Gaussian taps rescaled so that `‖A‖ = target_norm`.
    pub fn random<G: Rng + ?Sized>(
        rng: &mut G,
        n_window: usize,
        u_dim: usize,
        y_dim: usize,
        k: usize,
        target_norm: f64,
    ) -> Self {
        let taps: Vec<CMatrix> = (0..k).map(|_| random_gaussian(rng, y_dim, u_dim)).collect();
        let mut p = Self { n_window, u_dim, y_dim, taps };
        let n = operator_norm(&hankel(&p, p.hankel_rows()));
        if n > 0.0 {
            for t in &mut p.taps {
                *t = scale(t, real(target_norm / n));
            }
        }
        p
    }

    /// Problem with all taps zero.
    pub fn zero_taps(n_window: usize, u_dim: usize, y_dim: usize) -> Self {
        Self { n_window, u_dim, y_dim, taps: Vec::new() }
    }

    pub fn num_taps(&self) -> usize {
        self.taps.len()
    }

    /// `F₋ₙ` for `n ≥ 1`.
    pub fn tap(&self, n: usize) -> CMatrix {
        debug_assert!(n >= 1);
        self.taps.get(n - 1).cloned().unwrap_or_else(|| zeros(self.y_dim, self.u_dim))
    }

    /// Number of rows that carry every nonzero tap (at least one, so that the
    /// truncated backward shift keeps its defect space).
    pub fn hankel_rows(&self) -> usize {
        self.num_taps().max(1)
    }
}

/// Block row `i − 1` is `[F₋ᵢ, F₋ᵢ₋₁, …, F₋ᵢ₋ₙ₊₁]` for `i = 1, …, rows`.
pub fn hankel(p: &NehariProblem, rows: usize) -> CMatrix {
    let (y, u, n) = (p.y_dim, p.u_dim, p.n_window);
    let mut a = zeros(rows * y, n * u);
    for i in 1..=rows {
        for j in 0..n {
            let idx = i + j;
            if idx <= p.num_taps() {
                a.view_mut(((i - 1) * y, j * u), (y, u)).copy_from(&p.taps[idx - 1]);
            }
        }
    }
    a
}

/// `Λ = D_A²` from the finite sums `Λᵢⱼ = δᵢⱼI − Σ_{n≥i} F₋ₙ*F₋ₙ₊ᵢ₋ⱼ`.
pub fn gram(p: &NehariProblem) -> CMatrix {
    let (u, n) = (p.u_dim, p.n_window);
    let mut lambda = identity(n * u);
    for i in 1..=n {
        for j in 1..=n {
            let mut acc = zeros(u, u);
            // F₋ₘ₋ⱼ₊ᵢ vanishes once m − i + j > K.
            let last = p.num_taps() + i;
            for m in i..=last {
                let other = m + j - i;
                if other >= 1 && m <= p.num_taps() && other <= p.num_taps() {
                    acc += p.tap(m).adjoint() * p.tap(other);
                }
            }
            let mut view = lambda.view_mut(((i - 1) * u, (j - 1) * u), (u, u));
            view -= acc;
        }
    }
    lambda
}

/// `Λ× = Λ⁻¹`.
pub fn lambda_cross(p: &NehariProblem) -> Result<CMatrix> {
    let lambda = gram(p);
    let min = min_eigenvalue(&lambda)?;
    if min < STRICT_MIN_EIG {
        return Err(Error::HankelNotStrict { min_eig: min });
    }
    hpd_inverse(&lambda)
}

/// Solves `Λ_{corner} [G₁*; …; G_{N−1}*] = [F₋₁*; …; F₋ₙ₊₁*]`, with
/// `Λ_{corner}` the leading `(N−1)`-block corner of `Λ`.
pub fn solve_g(p: &NehariProblem) -> Result<Vec<CMatrix>> {
    let (u, y, n) = (p.u_dim, p.y_dim, p.n_window);
    if n == 1 {
        return Ok(Vec::new());
    }
    let m = (n - 1) * u;
    let corner = block(&gram(p), 0, 0, m, m);
    let rhs_parts: Vec<CMatrix> = (1..n).map(|k| p.tap(k).adjoint()).collect();
    let refs: Vec<&CMatrix> = rhs_parts.iter().collect();
    let rhs = vstack(&refs);
    let g_star = solve_hpd(&corner, &rhs).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::CornerNotPd,
        other => other,
    })?;
    Ok((0..n - 1).map(|k| block(&g_star, k * u, 0, u, y).adjoint()).collect())
}

#[derive(Debug, Clone)]
pub struct NehariCoefficients {
    pub problem: NehariProblem,
    pub lambda: CMatrix,
    pub lambda_cross: CMatrix,
    pub g_row: Vec<CMatrix>,
    pub t_state: CMatrix,
    pub e_n: CMatrix,
    pub c1: CMatrix,
    pub c2: CMatrix,
    pub f_row: CMatrix,
    pub g_big: CMatrix,
    pub i_plus_fg: CMatrix,
    pub i_plus_fg_half: CMatrix,
    pub i_plus_fg_neg_half: CMatrix,
    pub lx11_neg_half: CMatrix,
    pub r_spec_t_state: f64,
}

pub fn coefficients(p: &NehariProblem) -> Result<NehariCoefficients> {
    let (u, y, n) = (p.u_dim, p.y_dim, p.n_window);
    let lambda = gram(p);
    let lx = lambda_cross(p)?;
    let g_row = solve_g(p)?;
    let lx_block = |i: usize, j: usize| block(&lx, (i - 1) * u, (j - 1) * u, u, u);
    let lx11 = lx_block(1, 1);
    let lx11_inv = hpd_inverse(&lx11)?;

    let mut t_state = zeros(n * u, n * u);
    let mut c1 = zeros(n * u, u);
    for i in 1..n {
        let col = lx_block(i + 1, 1) * &lx11_inv;
        c1.view_mut(((i - 1) * u, 0), (u, u)).copy_from(&col);
        t_state.view_mut(((i - 1) * u, 0), (u, u)).copy_from(&(-col));
        t_state.view_mut(((i - 1) * u, i * u), (u, u)).copy_from(&identity(u));
    }
    let e_n = vstack(&[&identity(u), &zeros((n - 1) * u, u)]);
    let lx_nn = lx_block(n, n);
    let c2 = block(&lx, 0, (n - 1) * u, n * u, u) * psd_inv_sqrt(&lx_nn)?;

    let f_parts: Vec<CMatrix> = (1..=n).map(|k| p.tap(k)).collect();
    let f_refs: Vec<&CMatrix> = f_parts.iter().collect();
    let f_row = hstack(&f_refs);
    let mut g_parts = g_row.clone();
    g_parts.push(zeros(y, u));
    let g_refs: Vec<&CMatrix> = g_parts.iter().collect();
    let g_big = hstack(&g_refs);

    let i_plus_fg = hermitian_part(&(identity(y) + &f_row * g_big.adjoint()));
    let i_plus_fg_half = psd_sqrt(&i_plus_fg)?;
    let i_plus_fg_neg_half = psd_inv_sqrt(&i_plus_fg)?;
    let lx11_neg_half = psd_inv_sqrt(&lx11)?;
    let r_spec_t_state = spectral_radius(&t_state)?;

    Ok(NehariCoefficients {
        problem: p.clone(),
        lambda,
        lambda_cross: lx,
        g_row,
        t_state,
        e_n,
        c1,
        c2,
        f_row,
        g_big,
        i_plus_fg,
        i_plus_fg_half,
        i_plus_fg_neg_half,
        lx11_neg_half,
        r_spec_t_state,
    })
}

impl NehariCoefficients {
    /// `[G*(I + FG*)^{-1/2}, C₂] : Y ⊕ U → U^N`.
    pub fn input_map(&self) -> CMatrix {
        hstack(&[&(self.g_big.adjoint() * &self.i_plus_fg_neg_half), &self.c2])
    }

    /// The realization `X₁ = T_state`, `X₂ = −[G*(I+FG*)^{-1/2}, C₂]`,
    /// `X₃ = (Λ×₁₁)^{-1/2}E_N*`, `X₄ = F T_state`,
    /// `X₅ = [(I+FG*)^{-1/2}, 0]`. With it, `Φ̂₁₁ = Φ₁₁`, `Φ̂₂₁ = Φ₂₁`,
    /// `Φ̂₁₂ = Φ₁₂E_N` and `Φ̂₂₂ = Φ₂₂E_N`.
    pub fn realization(&self) -> PhiRealization {
        let p = &self.problem;
        PhiRealization {
            x1: self.t_state.clone(),
            x2: -self.input_map(),
            x3: &self.lx11_neg_half * self.e_n.adjoint(),
            x4: &self.f_row * &self.t_state,
            x5: hstack(&[&self.i_plus_fg_neg_half, &zeros(p.y_dim, p.u_dim)]),
        }
    }

    /// The realization conjugated by `Λ^{1/2} = D_A`, together with
    /// `Λ^{1/2}E_N`, the input map that goes with it.
    fn balanced(&self) -> Result<(PhiRealization, CMatrix)> {
        let half = psd_sqrt(&self.lambda)?;
        let neg_half = psd_sqrt(&self.lambda_cross)?;
        let right = &half * &self.e_n;
        Ok((self.realization().similar(&half, &neg_half), right))
    }
}

/// `Φ̂₁₁, Φ̂₁₂, Φ̂₂₁, Φ̂₂₂` at `λ`, from their closed forms.
pub fn phi_hat_eval(nc: &NehariCoefficients, lambda: C64) -> Result<PhiValues> {
    let n = nc.t_state.nrows();
    let res = inverse(&(identity(n) - scale(&nc.t_state, lambda))).map_err(|_| Error::ResolventSingular(lambda))?;
    let bx = nc.input_map();
    let head = &nc.lx11_neg_half * nc.e_n.adjoint() * &res;
    let lead = hstack(&[&nc.i_plus_fg_half, &(&nc.f_row * &nc.c2)]);
    Ok(PhiValues {
        phi11: scale(&(&head * &bx), -lambda),
        phi12: &nc.lx11_neg_half - scale(&(&head * &nc.c1), lambda),
        phi21: lead - &nc.f_row * &res * &bx,
        phi22: -(&nc.f_row * &res * &nc.c1),
    })
}

/// Taylor coefficients `H₀, …, H_deg` of
/// `Φ̂₂₂ + Φ̂₂₁V(I − Φ̂₁₁V)⁻¹Φ̂₁₂`.
pub fn solve_h(nc: &NehariCoefficients, v: &SchurParameter, deg: usize) -> Result<TaylorSeries> {
    let p = &nc.problem;
    v.check_dims(p.u_dim, p.y_dim + p.u_dim)?;
    let (sys, right) = nc.balanced()?;
    sys.gamma_series(v, deg, &right)
}

/// Norm of the finite section of the extension operator.
#[derive(Debug, Clone, Serialize)]
pub struct LReport {
    pub sigma_max: f64,
    /// Bound on how much the discarded coefficients can add to the norm.
    pub tail_slack: Option<f64>,
}

impl LReport {
    pub fn accepts(&self, tol: f64) -> bool {
        self.sigma_max <= 1.0 + tol + self.tail_slack.unwrap_or(0.0)
    }
}

/// The extension operator restricted to rows `−K, …, deg + N − 1`, listed
/// from the top.
///
/// Entry `(m, j)` is `F_{m−j}` for `m − j < 0` and `H_{m−j}` otherwise.
pub fn l_matrix(p: &NehariProblem, h: &TaylorSeries) -> CMatrix {
    let (y, u, n) = (p.y_dim, p.u_dim, p.n_window);
    let k = p.num_taps() as i64;
    let deg = h.degree() as i64;
    let first = -k;
    let last = deg + n as i64 - 1;
    let rows = (last - first + 1) as usize;
    let mut out = zeros(rows * y, n * u);
    for (r, m) in (first..=last).enumerate() {
        for j in 0..n {
            let idx = m - j as i64;
            let entry = if idx < 0 {
                if -idx <= k {
                    Some(p.taps[(-idx - 1) as usize].clone())
                } else {
                    None
                }
            } else {
                h.coeffs.get(idx as usize).cloned()
            };
            if let Some(e) = entry {
                out.view_mut((r * y, j * u), (y, u)).copy_from(&e);
            }
        }
    }
    out
}

/// Largest singular value of [`l_matrix`] and the slack `sqrt(N · tail)`.
pub fn assemble_l(p: &NehariProblem, h: &TaylorSeries) -> LReport {
    let l = l_matrix(p, h);
    LReport {
        sigma_max: sigma_max_via_gram(&l),
        tail_slack: h.tail_bound.map(|t| (p.n_window as f64 * t).sqrt()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HatMReport {
    pub degree: usize,
    pub residual: f64,
    pub slack: Option<f64>,
}

/// Finite section of `M̂ = [[0, Γ̃₋], [M_Φ̂₁₁, Γ_Φ̂₁₂], [M_Φ̂₂₁, Γ_Φ̂₂₂]]`.
pub fn assemble_hat_m(nc: &NehariCoefficients, deg: usize) -> Result<TruncatedM> {
    let p = &nc.problem;
    let (sys, right) = nc.balanced()?;
    let s = sys.series(2 * deg);
    let phi12 = s.phi12.right_mul(&right);
    let phi22 = s.phi22.right_mul(&right);
    // Γ̃₋ lists F₋K, …, F₋₁ from the top.
    let parts: Vec<CMatrix> = (1..=p.num_taps()).rev().map(|k| p.tap(k)).collect();
    let refs: Vec<&CMatrix> = parts.iter().collect();
    let gamma_minus = if refs.is_empty() { zeros(0, p.u_dim) } else { vstack(&refs) };
    Ok(truncated_m(&gamma_minus, &s.phi11, &phi12, &s.phi21, &phi22, deg))
}

/// `‖M̂_t*M̂_t − I‖` for the truncation at `deg`, with its slack.
pub fn hat_m_check(nc: &NehariCoefficients, deg: usize) -> Result<HatMReport> {
    let m = assemble_hat_m(nc, deg)?;
    Ok(HatMReport { degree: deg, residual: m.isometry_residual(), slack: m.slack })
}

/// The lifting data set `{A, T', R, Q}` of the problem: `A` the truncated
/// Hankel matrix, `T'` the backward shift on its rows, `R = [I; 0]`, and
/// `Q = [0; I]` on `U^{N−1} → U^N`.
pub fn lifting_data(p: &NehariProblem) -> LiftingDataSet {
    let (y, u, n) = (p.y_dim, p.u_dim, p.n_window);
    let rows = p.hankel_rows();
    let a = hankel(p, rows);
    let mut t_prime = zeros(rows * y, rows * y);
    for r in 0..rows.saturating_sub(1) {
        t_prime.view_mut((r * y, (r + 1) * y), (y, y)).copy_from(&identity(y));
    }
    let m = (n - 1) * u;
    let r = vstack(&[&identity(m), &zeros(u, m)]);
    let q = vstack(&[&zeros(u, m), &identity(m)]);
    LiftingDataSet { a, t_prime, r, q }
}

/// `V ↦ [Π_Y V; −Π_U V]`. An involution on Schur parameters `U → Y ⊕ U`.
pub fn bridge(v: &SchurParameter, y_dim: usize) -> SchurParameter {
    let flip = |m: &CMatrix| {
        let mut out = m.clone();
        let rows = out.nrows();
        for i in y_dim..rows {
            for j in 0..out.ncols() {
                out[(i, j)] = -out[(i, j)];
            }
        }
        out
    };
    match v {
        SchurParameter::Zero { .. } => v.clone(),
        SchurParameter::Constant(m) => SchurParameter::Constant(flip(m)),
        SchurParameter::Transfer(s) => SchurParameter::Transfer(
            SystemRealization::new(s.a.clone(), s.b.clone(), flip(&s.c), flip(&s.d)).expect("same shapes"),
        ),
    }
}

/// `Π_Y V (I − λ^shift Π_U V)⁻¹ · right` by series arithmetic.
fn selector_form(v: &SchurParameter, y_dim: usize, u_dim: usize, shift: usize, right: &CMatrix, deg: usize) -> Result<TaylorSeries> {
    let vs = v.taylor(deg);
    let top: Vec<CMatrix> = vs.coeffs.iter().map(|c0| block(c0, 0, 0, y_dim, u_dim)).collect();
    let mut bottom: Vec<CMatrix> = vec![zeros(u_dim, u_dim); shift.min(deg + 1)];
    bottom.extend(vs.coeffs.iter().take((deg + 1).saturating_sub(shift)).map(|c0| block(c0, y_dim, 0, u_dim, u_dim)));
    let vy = TaylorSeries::new(y_dim, u_dim, top, None);
    let p = TaylorSeries::new(u_dim, u_dim, bottom, None);
    let inv = p.inverse_of_identity_minus()?;
    let mut h = vy.mul(&inv).right_mul(right);
    h.tail_bound = None;
    Ok(h)
}

/// Closed form for `N = 1`: `H = Π_Y V (I − λΠ_U V)⁻¹ D_A`.
pub fn special_n1(p: &NehariProblem, v: &SchurParameter, deg: usize) -> Result<TaylorSeries> {
    if p.n_window != 1 {
        return Err(Error::Invalid(format!("special_n1 needs N = 1, got N = {}", p.n_window)));
    }
    v.check_dims(p.u_dim, p.y_dim + p.u_dim)?;
    let lambda = gram(p);
    let min = min_eigenvalue(&lambda)?;
    if min < STRICT_MIN_EIG {
        return Err(Error::HankelNotStrict { min_eig: min });
    }
    let d_a = psd_sqrt(&lambda)?;
    selector_form(v, p.y_dim, p.u_dim, 1, &d_a, deg)
}

/// Closed form for all taps zero: `H = Π_Y V (I − λᴺ Π_U V)⁻¹`.
pub fn special_f0(n_window: usize, u_dim: usize, y_dim: usize, v: &SchurParameter, deg: usize) -> Result<TaylorSeries> {
    v.check_dims(u_dim, y_dim + u_dim)?;
    selector_form(v, y_dim, u_dim, n_window, &identity(u_dim), deg)
}

/// Second companion matrix of `L(λ) = Σ_{k=0}^{N} a_k λ^k` with `a_N`
/// invertible: identity blocks on the subdiagonal and last block column
/// `−[a₀; …; a_{N−1}] a_N⁻¹`.
pub fn second_companion(coeffs: &[CMatrix]) -> Result<CMatrix> {
    let n = coeffs.len() - 1;
    let u = coeffs[0].nrows();
    let lead_inv = inverse(&coeffs[n])?;
    let mut out = zeros(n * u, n * u);
    for i in 0..n {
        if i > 0 {
            out.view_mut((i * u, (i - 1) * u), (u, u)).copy_from(&identity(u));
        }
        out.view_mut((i * u, (n - 1) * u), (u, u)).copy_from(&(-(&coeffs[i] * &lead_inv)));
    }
    Ok(out)
}

/// The flip-over operator `(u₁, …, u_N) ↦ (u_N, …, u₁)` on `U^N`.
pub fn flip_over(n: usize, u: usize) -> CMatrix {
    let mut e = zeros(n * u, n * u);
    for i in 0..n {
        e.view_mut((i * u, (n - 1 - i) * u), (u, u)).copy_from(&identity(u));
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{derive, validate};
    use crate::redheffer::{build_coefficients, solution_taylor};
    use crate::schur::{random_constant, random_schur};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_example() -> NehariProblem {
        NehariProblem::new(2, 1, 1, vec![CMatrix::from_element(1, 1, real(0.5))]).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).norm() <= tol
    }

    fn rows(r: usize, c0: usize, v: &[f64]) -> CMatrix {
        CMatrix::from_row_slice(r, c0, &v.iter().map(|x| real(*x)).collect::<Vec<_>>())
    }

    #[test]
    fn scalar_hankel_gram_and_g() {
        let p = scalar_example();
        assert_eq!(hankel(&p, 1), rows(1, 2, &[0.5, 0.0]));
        assert!(close(&gram(&p), &diag_real(&[0.75, 1.0]), 1e-15));
        assert!(close(&lambda_cross(&p).unwrap(), &diag_real(&[4.0 / 3.0, 1.0]), 1e-14));
        let g = solve_g(&p).unwrap();
        assert!((g[0][(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_coefficients() {
        let nc = coefficients(&scalar_example()).unwrap();
        assert!(close(&nc.t_state, &rows(2, 2, &[0.0, 1.0, 0.0, 0.0]), 1e-14));
        assert!(close(&nc.c1, &zeros(2, 1), 1e-14));
        assert!(close(&nc.c2, &rows(2, 1, &[0.0, 1.0]), 1e-14));
        assert!(close(&nc.f_row, &rows(1, 2, &[0.5, 0.0]), 0.0));
        assert!(close(&nc.g_big, &rows(1, 2, &[2.0 / 3.0, 0.0]), 1e-14));
        assert!((nc.i_plus_fg[(0, 0)].re - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn n1_shapes() {
        let p = NehariProblem::new(1, 2, 1, vec![rows(1, 2, &[0.3, 0.1])]).unwrap();
        let a = hankel(&p, 1);
        assert_eq!(a, p.taps[0]);
        let nc = coefficients(&p).unwrap();
        assert_eq!(nc.t_state, zeros(2, 2));
        assert!(close(&nc.c2, &psd_sqrt(&nc.lambda_cross).unwrap(), 1e-12));
        assert!(solve_g(&p).unwrap().is_empty());
    }

    #[test]
    fn zero_taps() {
        let p = NehariProblem::zero_taps(3, 2, 1);
        assert_eq!(gram(&p), identity(6));
        let nc = coefficients(&p).unwrap();
        let mut shift = zeros(6, 6);
        shift.view_mut((0, 2), (4, 4)).copy_from(&identity(4));
        assert_eq!(nc.t_state, shift);
        assert_eq!(nc.c1, zeros(6, 2));
        assert_eq!(nc.c2, vstack(&[&zeros(4, 2), &identity(2)]));
        let lam = c(0.3, 0.4);
        let phi = phi_hat_eval(&nc, lam).unwrap();
        let mut expect11 = zeros(2, 3);
        expect11.view_mut((0, 1), (2, 2)).copy_from(&scale(&identity(2), -lam.powu(3)));
        assert!(close(&phi.phi11, &expect11, 1e-14));
        assert!(close(&phi.phi12, &identity(2), 1e-14));
        assert!(close(&phi.phi21, &hstack(&[&identity(1), &zeros(1, 2)]), 1e-14));
        assert!(close(&phi.phi22, &zeros(1, 2), 1e-14));
    }

    #[test]
    fn gram_matches_hankel_defect() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let p = NehariProblem::random(&mut rng, 3, 2, 2, 4, 0.8);
            let a = hankel(&p, p.hankel_rows());
            let direct = identity(a.ncols()) - a.adjoint() * &a;
            assert!(close(&gram(&p), &direct, 1e-10));
        }
    }

    #[test]
    fn lifting_data_is_valid_and_matches_redheffer() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=4 {
            let p = NehariProblem::random(&mut rng, n, 2, 2, 3, 0.7);
            let ds = lifting_data(&p);
            let rep = validate(&ds, 1e-10).unwrap();
            assert!(rep.is_valid() && rep.strictness.strict_ok, "{rep:?}");
            let rc = build_coefficients(&derive(&ds).unwrap()).unwrap();
            let nc = coefficients(&p).unwrap();
            let x = nc.realization();
            assert!(close(&rc.x.x1, &x.x1, 1e-8), "N = {n}");
            assert!(close(&rc.x.x2, &x.x2, 1e-8), "N = {n}");
            assert!(close(&rc.x.x3, &x.x3, 1e-8), "N = {n}");
            assert!(close(&rc.x.x4, &x.x4, 1e-8), "N = {n}");
            assert!(close(&rc.x.x5, &x.x5, 1e-8), "N = {n}");
            assert!(close(&rc.delta_q, &block(&nc.lambda_cross, 0, 0, 2, 2), 1e-8));
            assert!(close(&rc.delta_omega, &nc.i_plus_fg, 1e-8));
        }
    }

    #[test]
    fn phi_hat_matches_realization() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = NehariProblem::random(&mut rng, 3, 1, 2, 4, 0.85);
        let nc = coefficients(&p).unwrap();
        let lam = c(-0.2, 0.6);
        let closed = phi_hat_eval(&nc, lam).unwrap();
        let via = nc.realization().eval(lam).unwrap();
        assert!(close(&closed.phi11, &via.phi11, 1e-12));
        assert!(close(&closed.phi21, &via.phi21, 1e-12));
        assert!(close(&closed.phi12, &(&via.phi12 * &nc.e_n), 1e-12));
        assert!(close(&closed.phi22, &(&via.phi22 * &nc.e_n), 1e-12));
    }

    #[test]
    fn solve_h_matches_lifting_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = NehariProblem::random(&mut rng, 2, 2, 1, 2, 0.6);
        let nc = coefficients(&p).unwrap();
        let rc = build_coefficients(&derive(&lifting_data(&p)).unwrap()).unwrap();
        let v = random_schur(2, 3, 2, 9);
        let h = solve_h(&nc, &v, 12).unwrap();
        let g = solution_taylor(&rc, &v, 12).unwrap();
        for k in 0..=12 {
            assert!(close(&h.coeffs[k], &(&g.gamma.coeffs[k] * &nc.e_n), 1e-10));
        }
    }

    #[test]
    fn scalar_central_solution_and_l() {
        let p = scalar_example();
        let nc = coefficients(&p).unwrap();
        let h = solve_h(&nc, &SchurParameter::zero(1, 2), 8).unwrap();
        assert!(h.coeffs.iter().all(|c0| c0.norm() < 1e-15));
        let rep = assemble_l(&p, &h);
        assert!((rep.sigma_max - 0.5).abs() < 1e-12);
        let mut bad = h.clone();
        bad.coeffs[0] = CMatrix::from_element(1, 1, real(2.0));
        assert!(assemble_l(&p, &bad).sigma_max >= 2.0);
    }

    #[test]
    fn special_forms_via_bridge() {
        for seed in 0..5 {
            let v = random_schur(1, 3, 2, seed);
            let f0 = special_f0(3, 1, 2, &v, 10).unwrap();
            let nc = coefficients(&NehariProblem::zero_taps(3, 1, 2)).unwrap();
            let h = solve_h(&nc, &bridge(&v, 2), 10).unwrap();
            for k in 0..=10 {
                assert!(close(&f0.coeffs[k], &h.coeffs[k], 1e-10));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = NehariProblem::random(&mut rng, 1, 2, 1, 3, 0.7);
        let nc = coefficients(&p).unwrap();
        let v = random_constant(2, 3, 1.0, 4);
        let n1 = special_n1(&p, &v, 10).unwrap();
        let h = solve_h(&nc, &bridge(&v, 1), 10).unwrap();
        for k in 0..=10 {
            assert!(close(&n1.coeffs[k], &h.coeffs[k], 1e-10));
        }
    }

    #[test]
    fn special_f0_scalar_inner() {
        let v = SchurParameter::constant(rows(2, 1, &[1.0, 0.0])).unwrap();
        let h = special_f0(2, 1, 1, &v, 4).unwrap();
        assert!((h.coeffs[0][(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(h.coeffs[1..].iter().all(|c0| c0.norm() == 0.0));
        let l = l_matrix(&NehariProblem::zero_taps(2, 1, 1), &h);
        assert!((l.adjoint() * &l - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn companion_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = NehariProblem::random(&mut rng, 4, 2, 1, 5, 0.8);
        let nc = coefficients(&p).unwrap();
        let u = p.u_dim;
        let n = p.n_window;
        // K(λ) = λ Σ_{k=0}^{N−1} λ^k Λ×_{N−k,1}: a₀ = 0 and a_k = Λ×_{N−k+1,1}.
        let lx = |i: usize| block(&nc.lambda_cross, (i - 1) * u, 0, u, u);
        let mut coeffs = vec![zeros(u, u)];
        coeffs.extend((1..=n).map(|k| lx(n - k + 1)));
        let comp = second_companion(&coeffs).unwrap();
        let e = flip_over(n, u);
        assert!(close(&(&e * &nc.t_state * &e), &comp, 1e-12));
    }

    #[test]
    fn schur_complement_corner_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = NehariProblem::random(&mut rng, 3, 2, 2, 3, 0.75);
        let lx = lambda_cross(&p).unwrap();
        let u = p.u_dim;
        let m = (p.n_window - 1) * u;
        let direct = hpd_inverse(&block(&gram(&p), 0, 0, m, m)).unwrap();
        let lnn = block(&lx, m, m, u, u);
        let col = block(&lx, 0, m, m, u);
        let shortcut = block(&lx, 0, 0, m, m) - &col * inverse(&lnn).unwrap() * col.adjoint();
        assert!(close(&direct, &shortcut, 1e-10));
    }

    #[test]
    fn non_strict_is_rejected() {
        let p = NehariProblem::new(1, 1, 1, vec![CMatrix::from_element(1, 1, real(1.0))]).unwrap();
        assert!(matches!(coefficients(&p), Err(Error::HankelNotStrict { .. })));
    }
}

//! Finite truncations of Hardy-space objects.
//!
//! Operator-valued functions analytic on the unit disc appear here through
//! their Taylor coefficients. Multiplication operators become lower block
//! Toeplitz matrices and observability maps become block columns. Each series
//! carries a bound on the squared norm of the coefficients it drops, so that a
//! finite computation can state how far it may be from the infinite one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lifting::{sznagy_schaffer_truncated, LiftingDataSet};
use crate::matrix::*;
use crate::redheffer::SolutionTaylor;
use crate::report::{all_pass, Residual};

/// Contraction factor the tail estimate waits for.
const TAIL_RHO: f64 = 0.9;
/// Largest power tried when looking for `‖x^m‖ ≤ TAIL_RHO`.
const TAIL_MAX_POWER: usize = 64;
/// Slack allowed on `‖K‖ ≤ 1` for a realization to count as contractive.
pub const CONTRACTIVE_TOL: f64 = 1e-9;

/// State-space realization `F(λ) = D + λC(I − λA)^{-1}B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemRealization {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    contractive: bool,
}

impl SystemRealization {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.nrows() != n || c.ncols() != n || d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "realization blocks A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        let mut sys = Self { a, b, c, d, contractive: false };
        sys.contractive = operator_norm(&sys.system_matrix()) <= 1.0 + CONTRACTIVE_TOL;
        Ok(sys)
    }

    /// Realization of a constant function.
    pub fn constant(d: CMatrix) -> Self {
        let (p, m) = d.shape();
        Self::new(zeros(0, 0), zeros(0, m), zeros(p, 0), d).expect("constant realization")
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn in_dim(&self) -> usize {
        self.b.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.c.nrows()
    }

    /// `[[A, B], [C, D]]`.
    pub fn system_matrix(&self) -> CMatrix {
        vstack(&[&hstack(&[&self.a, &self.b]), &hstack(&[&self.c, &self.d])])
    }

    /// True when the system matrix is a contraction, which certifies that the
    /// transfer function is in the Schur class.
    pub fn contractive_certified(&self) -> bool {
        self.contractive
    }

    pub fn eval(&self, lambda: C64) -> Result<CMatrix> {
        if self.state_dim() == 0 {
            return Ok(self.d.clone());
        }
        let n = self.state_dim();
        let res = solve(&(identity(n) - scale(&self.a, lambda)), &self.b)
            .map_err(|_| Error::ResolventSingular(lambda))?;
        Ok(&self.d + scale(&(&self.c * res), lambda))
    }
}

/// Truncated Taylor expansion `Σ_{k≤deg} coeffs[k] λ^k` with an optional bound
/// on `Σ_{k>deg} ‖coeff_k‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    pub rows: usize,
    pub cols: usize,
    pub coeffs: Vec<CMatrix>,
    pub tail_bound: Option<f64>,
}

impl TaylorSeries {
    pub fn new(rows: usize, cols: usize, coeffs: Vec<CMatrix>, tail_bound: Option<f64>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)));
        Self { rows, cols, coeffs, tail_bound }
    }

    pub fn zero(rows: usize, cols: usize, deg: usize) -> Self {
        Self::new(rows, cols, vec![zeros(rows, cols); deg + 1], Some(0.0))
    }

    /// A polynomial, padded with zeros up to `deg`.
    pub fn polynomial(coeffs: &[CMatrix], deg: usize) -> Self {
        let (rows, cols) = coeffs[0].shape();
        let mut all: Vec<CMatrix> = coeffs.iter().take(deg + 1).cloned().collect();
        while all.len() <= deg {
            all.push(zeros(rows, cols));
        }
        let dropped: f64 = coeffs.iter().skip(deg + 1).map(|c| operator_norm(c).powi(2)).sum();
        Self::new(rows, cols, all, Some(dropped))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Partial sum at `λ` by Horner's rule.
    pub fn eval(&self, lambda: C64) -> CMatrix {
        let mut acc = zeros(self.rows, self.cols);
        for c0 in self.coeffs.iter().rev() {
            acc = scale(&acc, lambda) + c0;
        }
        acc
    }

    /// Cauchy product truncated to the smaller of the two degrees.
    pub fn mul(&self, other: &TaylorSeries) -> TaylorSeries {
        assert_eq!(self.cols, other.rows, "series product: inner dimension");
        let deg = self.degree().min(other.degree());
        let coeffs = (0..=deg)
            .map(|n| {
                let mut acc = zeros(self.rows, other.cols);
                for k in 0..=n {
                    acc += &self.coeffs[k] * &other.coeffs[n - k];
                }
                acc
            })
            .collect();
        TaylorSeries::new(self.rows, other.cols, coeffs, None)
    }

    pub fn add(&self, other: &TaylorSeries) -> TaylorSeries {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "series sum: shape");
        let deg = self.degree().min(other.degree());
        let coeffs = (0..=deg).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        TaylorSeries::new(self.rows, self.cols, coeffs, None)
    }

    /// `self · λ`, keeping the degree.
    pub fn shifted(&self) -> TaylorSeries {
        let mut coeffs = vec![zeros(self.rows, self.cols)];
        coeffs.extend(self.coeffs.iter().take(self.degree()).cloned());
        TaylorSeries::new(self.rows, self.cols, coeffs, None)
    }

    /// `(I − self)^{-1}` for a square series with `I − coeffs[0]` invertible.
    pub fn inverse_of_identity_minus(&self) -> Result<TaylorSeries> {
        assert_eq!(self.rows, self.cols, "series inverse: square");
        let n = self.rows;
        let inv0 = inverse(&(identity(n) - &self.coeffs[0]))?;
        let mut out: Vec<CMatrix> = vec![inv0.clone()];
        for k in 1..=self.degree() {
            let mut acc = zeros(n, n);
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(&inv0 * acc);
        }
        Ok(TaylorSeries::new(n, n, out, None))
    }

    /// Applies a constant matrix on the right of every coefficient.
    pub fn right_mul(&self, m: &CMatrix) -> TaylorSeries {
        let coeffs = self.coeffs.iter().map(|c0| c0 * m).collect();
        let tail = self.tail_bound.map(|t| t * operator_norm(m).powi(2));
        TaylorSeries::new(self.rows, m.ncols(), coeffs, tail)
    }
}

/// Upper bound on `Σ_{k≥first} ‖prefix · x^k‖²`; see [`tail_bound`].
pub fn tail_from(x: &CMatrix, prefix: &CMatrix, first: usize) -> Option<f64> {
    if prefix.is_empty() || x.is_empty() {
        return Some(0.0);
    }
    let n = x.nrows();
    let mut power = identity(n);
    let mut found = None;
    for m in 1..=TAIL_MAX_POWER {
        power = &power * x;
        let rho = operator_norm(&power);
        if rho <= TAIL_RHO {
            found = Some((m, rho));
            break;
        }
    }
    let (m, rho) = found?;
    let mut y = prefix.clone();
    for _ in 0..first {
        y = &y * x;
    }
    let mut sum = 0.0;
    for _ in 0..m {
        sum += operator_norm(&y).powi(2);
        y = &y * x;
    }
    Some(sum / (1.0 - rho * rho))
}

/// Upper bound on `Σ_{k>deg} ‖prefix · x^k‖²`.
///
/// Looks for the first `m ≤ 64` with `ρ = ‖x^m‖ ≤ 0.9` and sums the next `m`
/// terms geometrically. Returns `None` when no such `m` exists.
pub fn tail_bound(x: &CMatrix, prefix: &CMatrix, deg: usize) -> Option<f64> {
    tail_from(x, prefix, deg + 1)
}

/// Taylor coefficients of `D + λC(I − λA)^{-1}B`.
pub fn transfer_taylor(sys: &SystemRealization, deg: usize) -> TaylorSeries {
    let mut coeffs = vec![sys.d.clone()];
    let mut cak = sys.c.clone();
    for _ in 1..=deg {
        coeffs.push(&cak * &sys.b);
        cak = &cak * &sys.a;
    }
    let b2 = operator_norm(&sys.b).powi(2);
    let tail = tail_from(&sys.a, &sys.c, deg).map(|t| t * b2);
    TaylorSeries::new(sys.out_dim(), sys.in_dim(), coeffs, tail)
}

/// Taylor coefficients `C A^k` of `C(I − λA)^{-1}`.
pub fn observability_taylor(sys: &SystemRealization, deg: usize) -> TaylorSeries {
    observability_series(&sys.a, &sys.c, deg)
}

pub fn observability_series(a: &CMatrix, c0: &CMatrix, deg: usize) -> TaylorSeries {
    let mut coeffs = Vec::with_capacity(deg + 1);
    let mut cak = c0.clone();
    for _ in 0..=deg {
        coeffs.push(cak.clone());
        cak = &cak * a;
    }
    TaylorSeries::new(c0.nrows(), a.ncols(), coeffs, tail_bound(a, c0, deg))
}

/// Lower block Toeplitz compression of the multiplication operator with
/// `out_blocks` block rows and `in_blocks` block columns. Coefficients beyond
/// the series degree are taken as zero.
pub fn toeplitz(h: &TaylorSeries, out_blocks: usize, in_blocks: usize) -> CMatrix {
    let (p, m) = (h.rows, h.cols);
    let mut out = zeros(p * out_blocks, m * in_blocks);
    for i in 0..out_blocks {
        for j in 0..in_blocks.min(i + 1) {
            if let Some(c0) = h.coeffs.get(i - j) {
                out.view_mut((i * p, j * m), (p, m)).copy_from(c0);
            }
        }
    }
    out
}

/// Square `(deg+1)`-block truncation of the multiplication operator.
pub fn mult_matrix(h: &TaylorSeries, deg: usize) -> CMatrix {
    toeplitz(h, deg + 1, deg + 1)
}

/// Block column `[G₀; G₁; …; G_deg]`.
pub fn observability_matrix(g: &TaylorSeries) -> CMatrix {
    let refs: Vec<&CMatrix> = g.coeffs.iter().collect();
    vstack(&refs)
}

/// Verdict of [`verify_interpolant`].
#[derive(Debug, Clone, Serialize)]
pub struct InterpolantReport {
    pub degree: usize,
    pub a_residual: f64,
    pub intertwining_residual: f64,
    /// Norm of the truncated block column `[A; Γ₀; …; Γ_deg]`.
    pub sigma_max: f64,
    /// Bound on the norm of the full column, when the tail is controlled.
    pub sigma_upper: Option<f64>,
    pub tail_bound: Option<f64>,
    pub residuals: Vec<Residual>,
    pub pass: bool,
}

/// Checks that `B = [A; Γ]` is a contractive interpolant.
///
/// The three checks are `Π_{H'}B = A`, `U'BR = BQ` against the truncated
/// Sz.-Nagy–Schäffer lifting, and `‖B‖ ≤ 1` with the tail bound as slack.
pub fn verify_interpolant(
    ds: &LiftingDataSet,
    sol: &SolutionTaylor,
    deg: usize,
    tol: f64,
) -> Result<InterpolantReport> {
    let deg = deg.min(sol.gamma.degree());
    let blocks: Vec<&CMatrix> = std::iter::once(&sol.a_part).chain(sol.gamma.coeffs.iter().take(deg + 1)).collect();
    let b = vstack(&blocks);
    let u = sznagy_schaffer_truncated(&ds.t_prime, deg)?;
    if u.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "interpolant has {} rows, lifting acts on {}",
            b.nrows(),
            u.ncols()
        )));
    }
    let a_residual = operator_norm(&(&sol.a_part - &ds.a));
    let intertwining_residual = operator_norm(&(&u * &b * &ds.r - &b * &ds.q));
    let sigma_max = sigma_max_via_gram(&b);
    let tail = if deg == sol.gamma.degree() {
        sol.gamma.tail_bound
    } else {
        let dropped: f64 = sol.gamma.coeffs[deg + 1..].iter().map(|c0| operator_norm(c0).powi(2)).sum();
        sol.gamma.tail_bound.map(|t| t + dropped)
    };
    let sigma_upper = tail.map(|t| (sigma_max * sigma_max + t).sqrt());
    let slack = tail.map_or(0.0, |t| (sigma_max * sigma_max + t).sqrt() - sigma_max);
    let residuals = vec![
        Residual::at_most("‖Π_H'B − A‖", a_residual, tol),
        Residual::at_most("‖U'BR − BQ‖ (truncated)", intertwining_residual, tol),
        Residual::at_most("‖B‖ − 1 (truncated)", sigma_max - 1.0, tol + slack),
    ];
    let pass = all_pass(&residuals);
    Ok(InterpolantReport {
        degree: deg,
        a_residual,
        intertwining_residual,
        sigma_max,
        sigma_upper,
        tail_bound: tail,
        residuals,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_element(1, 1, real(x))
    }

    #[test]
    fn tail_of_geometric_scalar() {
        let t = tail_bound(&scalar(0.5), &scalar(1.0), 10).unwrap();
        assert!((t - 0.25f64.powi(11) / 0.75).abs() < 1e-18);
    }

    #[test]
    fn tail_absent_for_unimodular() {
        assert!(tail_bound(&scalar(1.0), &scalar(1.0), 3).is_none());
    }

    #[test]
    fn tail_of_nilpotent_vanishes() {
        let x = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(0.0), real(0.0)]);
        assert_eq!(tail_bound(&x, &identity(2), 1).unwrap(), 0.0);
    }

    #[test]
    fn transfer_of_geometric() {
        let sys = SystemRealization::new(scalar(0.5), scalar(1.0), scalar(1.0), scalar(0.0)).unwrap();
        let s = transfer_taylor(&sys, 5);
        for (k, c0) in s.coeffs.iter().enumerate() {
            let expect = if k == 0 { 0.0 } else { 0.5f64.powi(k as i32 - 1) };
            assert!((c0[(0, 0)].re - expect).abs() < 1e-15);
        }
        let lam = real(0.3);
        let exact = sys.eval(lam).unwrap()[(0, 0)];
        assert!((s.eval(lam)[(0, 0)] - exact).norm() < 1e-4);
    }

    #[test]
    fn toeplitz_layout() {
        let h = TaylorSeries::polynomial(&[scalar(1.0), scalar(2.0)], 2);
        let m = mult_matrix(&h, 2);
        let expect = CMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 2.0, 1.0].map(real),
        );
        assert_eq!(m, expect);
    }

    #[test]
    fn series_inverse_matches_geometric() {
        let p = TaylorSeries::polynomial(&[scalar(0.0), scalar(0.5)], 6);
        let inv = p.inverse_of_identity_minus().unwrap();
        for (k, c0) in inv.coeffs.iter().enumerate() {
            assert!((c0[(0, 0)].re - 0.5f64.powi(k as i32)).abs() < 1e-15);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn tail_is_monotone_and_bounds_the_sum(seed in any::<u64>(), n in 1usize..5, norm in 0.1f64..0.95) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x = random_with_norm(&mut rng, n, n, norm);
                let p = random_gaussian(&mut rng, 2, n);
                let mut prev = f64::INFINITY;
                for deg in 0..12 {
                    let t = tail_bound(&x, &p, deg).unwrap();
                    prop_assert!(t <= prev * (1.0 + 1e-12) + 1e-300);
                    prev = t;
                    let mut y = p.clone();
                    for _ in 0..=deg { y = &y * &x; }
                    let mut direct = 0.0;
                    for _ in 0..400 { direct += operator_norm(&y).powi(2); y = &y * &x; }
                    prop_assert!(direct <= t * (1.0 + 1e-9) + 1e-300);
                }
            }

            #[test]
            fn toeplitz_of_product_is_product_of_toeplitz(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let f: Vec<CMatrix> = (0..4).map(|_| random_gaussian(&mut rng, 2, 3)).collect();
                let g: Vec<CMatrix> = (0..4).map(|_| random_gaussian(&mut rng, 3, 2)).collect();
                let fs = TaylorSeries::polynomial(&f, 5);
                let gs = TaylorSeries::polynomial(&g, 5);
                let lhs = mult_matrix(&fs.mul(&gs), 5);
                let rhs = mult_matrix(&fs, 5) * mult_matrix(&gs, 5);
                prop_assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }
}

//! Dense complex linear algebra on top of `nalgebra`.
//!
//! Everything in the crate works with [`CMatrix`], a dynamically sized complex
//! matrix. Zero-sized matrices are legal everywhere: a 0×n or n×0 matrix stands
//! for a map to or from the zero space, and every routine here treats that case
//! explicitly instead of handing it to a decomposition.

use nalgebra::{DMatrix, SymmetricEigen, LU};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Relative asymmetry tolerated by the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Negative eigenvalues down to `-PSD_CLAMP * ‖m‖` are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Singular values below `RANK_TOL * σ_max` are treated as zero.
pub const RANK_TOL: f64 = 1e-10;
/// Absolute floor for rank decisions on operators of order one.
const RANK_FLOOR: f64 = 1e-13;
/// Eigenvalues below this fraction of the scale are rounding noise.
const EIG_NOISE: f64 = 1e-14;
/// Entries this close to 0 or 1 count as exact when snapping a projector.
const SNAP_TOL: f64 = 1e-12;

const EIG_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 10_000;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Builds a real diagonal matrix.
pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { real(values[i]) } else { C64::default() })
}

/// Scalar multiple `s * m`.
pub fn scale(m: &CMatrix, s: C64) -> CMatrix {
    m.map(|x| x * s)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

/// Concatenates matrices left to right. Panics on row mismatch.
pub fn hstack(parts: &[&CMatrix]) -> CMatrix {
    let rows = parts.first().map_or(0, |p| p.nrows());
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        assert_eq!(p.nrows(), rows, "hstack: row mismatch");
        out.view_mut((0, at), (rows, p.ncols())).copy_from(*p);
        at += p.ncols();
    }
    out
}

/// Concatenates matrices top to bottom. Panics on column mismatch.
pub fn vstack(parts: &[&CMatrix]) -> CMatrix {
    let cols = parts.first().map_or(0, |p| p.ncols());
    let rows: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        assert_eq!(p.ncols(), cols, "vstack: column mismatch");
        out.view_mut((at, 0), (p.nrows(), cols)).copy_from(*p);
        at += p.nrows();
    }
    out
}

/// Block diagonal matrix `diag(parts)`.
pub fn block_diag(parts: &[&CMatrix]) -> CMatrix {
    let rows: usize = parts.iter().map(|p| p.nrows()).sum();
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut c0) = (0, 0);
    for p in parts {
        out.view_mut((r, c0), (p.nrows(), p.ncols())).copy_from(*p);
        r += p.nrows();
        c0 += p.ncols();
    }
    out
}

/// Copy of the `rows × cols` block starting at `(r0, c0)`.
pub fn block(m: &CMatrix, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
    m.view((r0, c0), (rows, cols)).into_owned()
}

pub fn ensure_square(m: &CMatrix, what: &str) -> Result<()> {
    if m.nrows() == m.ncols() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Thin singular value decomposition from the Hermitian dilation
/// `[[0, m], [m*, 0]]`, whose eigenpairs are `±σᵢ` with eigenvectors
/// `[uᵢ; ±vᵢ] / √2`.
///
/// Returns all `min(r, c)` singular values in descending order and the
/// singular vectors of those above `cut`.
struct ThinSvd {
    values: Vec<f64>,
    u: CMatrix,
    v: CMatrix,
}

fn thin_svd(m: &CMatrix, cut: Option<f64>) -> Result<ThinSvd> {
    let (r, cols) = m.shape();
    let n = r + cols;
    let mut dil = zeros(n, n);
    dil.view_mut((0, r), (r, cols)).copy_from(m);
    dil.view_mut((r, 0), (cols, r)).copy_from(&m.adjoint());
    let eig = SymmetricEigen::try_new(dil, EIG_EPS, MAX_SWEEPS).ok_or(Error::EigenNoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
    let p = r.min(cols);
    let values: Vec<f64> = order.iter().take(p).map(|&k| eig.eigenvalues[k].max(0.0)).collect();
    let cut = cut.unwrap_or_else(|| rank_cut(values.first().copied().unwrap_or(0.0)));
    let keep: Vec<usize> = order.iter().take(p).copied().filter(|&k| eig.eigenvalues[k] > cut).collect();
    let root2 = real(std::f64::consts::SQRT_2);
    let mut u = zeros(r, keep.len());
    let mut v = zeros(cols, keep.len());
    for (j, &k) in keep.iter().enumerate() {
        let col = eig.eigenvectors.column(k);
        u.set_column(j, &(col.rows(0, r) * root2));
        v.set_column(j, &(col.rows(r, cols) * root2));
    }
    Ok(ThinSvd { values, u, v })
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    Ok(thin_svd(m, Some(f64::INFINITY))?.values)
}

/// Largest singular value; zero for an empty matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    sigma_max_via_gram(m)
}

/// Largest singular value through the smaller of the two Gram matrices.
///
/// Cheaper than a full SVD for tall or wide matrices. The accuracy loss is in
/// the smallest singular values, which this does not report.
pub fn sigma_max_via_gram(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = if m.nrows() >= m.ncols() { m.adjoint() * m } else { m * m.adjoint() };
    match hermitian_eigen(&gram) {
        Ok((vals, _)) => vals.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => gram.norm().sqrt(),
    }
}

/// Smallest singular value of `m` viewed as a map on its column space.
///
/// Returns zero when `m` has more columns than rows, and `None` when `m` has
/// no columns at all (a map from the zero space is vacuously left invertible).
pub fn sigma_min_cols(m: &CMatrix) -> Result<Option<f64>> {
    if m.ncols() == 0 {
        return Ok(None);
    }
    if m.ncols() > m.nrows() {
        return Ok(Some(0.0));
    }
    let sv = singular_values(m)?;
    Ok(sv.last().copied())
}

fn asymmetry(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    ensure_square(m, "Hermitian input")?;
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let asym = asymmetry(m);
    if asym > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), zeros(0, 0)));
    }
    let sym = (m + m.adjoint()).map(|x| x * 0.5);
    let eig = SymmetricEigen::try_new(sym, EIG_EPS, MAX_SWEEPS).ok_or(Error::EigenNoConvergence)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((vals, vecs))
}

/// Smallest eigenvalue of a Hermitian matrix; `+∞` for the empty matrix.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m)?;
    Ok(vals.first().copied().unwrap_or(f64::INFINITY))
}

fn spectral_apply(vecs: &CMatrix, vals: &[f64]) -> CMatrix {
    let mut scaled = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*v);
    }
    scaled * vecs.adjoint()
}

/// Positive square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    psd_sqrt_scaled(m, m.norm())
}

/// Positive square root with clamping measured against `scale`.
///
/// Use this when `m` is a difference of two matrices of size `scale`, so that
/// cancellation noise in `m` is judged against the operands and not against
/// the (possibly tiny) result.
pub fn psd_sqrt_scaled(m: &CMatrix, scale: f64) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let mut roots = Vec::with_capacity(vals.len());
    for v in vals {
        if v < -PSD_CLAMP * scale {
            return Err(Error::NegativeEigenvalue { value: v });
        }
        roots.push(if v <= EIG_NOISE * scale { 0.0 } else { v.sqrt() });
    }
    Ok(spectral_apply(&vecs, &roots))
}

/// `m^{-1/2}` for a positive definite `m`, taken as the square root of the
/// explicitly inverted matrix.
pub fn psd_inv_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let inv = hpd_inverse(m)?;
    psd_sqrt(&hermitian_part(&inv))
}

/// `(m + m*)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|x| x * 0.5)
}

fn check_pd(m: &CMatrix) -> Result<()> {
    let min = min_eigenvalue(m)?;
    let scale = m.norm().max(1.0);
    if min <= 1e-13 * scale {
        return Err(Error::NotPositiveDefinite { min_eig: min });
    }
    Ok(())
}

/// Solves `m x = rhs` for a Hermitian positive definite `m`.
pub fn solve_hpd(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    check_hermitian(m)?;
    if m.nrows() != rhs.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve_hpd: {}x{} system with {} right-hand rows",
            m.nrows(),
            m.ncols(),
            rhs.nrows()
        )));
    }
    if m.nrows() == 0 {
        return Ok(zeros(0, rhs.ncols()));
    }
    check_pd(m)?;
    let chol = hermitian_part(m).cholesky().ok_or(Error::NotPositiveDefinite { min_eig: 0.0 })?;
    Ok(chol.solve(rhs))
}

/// Inverse of a Hermitian positive definite matrix.
pub fn hpd_inverse(m: &CMatrix) -> Result<CMatrix> {
    let inv = solve_hpd(m, &identity(m.nrows()))?;
    Ok(hermitian_part(&inv))
}

/// Solves `m x = rhs` for a general square `m` by LU.
pub fn solve(m: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    ensure_square(m, "solve")?;
    if m.nrows() != rhs.nrows() {
        return Err(Error::DimensionMismatch("solve: right-hand side rows".into()));
    }
    if m.nrows() == 0 {
        return Ok(zeros(0, rhs.ncols()));
    }
    let lu = LU::new(m.clone());
    let x = lu.solve(rhs).ok_or(Error::Singular)?;
    if !is_finite(&x) {
        return Err(Error::Singular);
    }
    Ok(x)
}

pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    solve(m, &identity(m.nrows()))
}

/// Moore-Penrose pseudo-inverse with the crate's rank threshold.
pub fn pseudo_inverse(m: &CMatrix) -> Result<CMatrix> {
    if m.is_empty() {
        return Ok(zeros(m.ncols(), m.nrows()));
    }
    let svd = thin_svd(m, None)?;
    let mut out = zeros(m.ncols(), m.nrows());
    for k in 0..svd.u.ncols() {
        out += svd.v.column(k) * svd.u.column(k).adjoint() * real(1.0 / svd.values[k]);
    }
    Ok(out)
}

fn rank_cut(smax: f64) -> f64 {
    (RANK_TOL * smax).max(RANK_FLOOR)
}

/// Numerical rank.
pub fn rank(m: &CMatrix) -> Result<usize> {
    let sv = singular_values(m)?;
    let smax = sv.first().copied().unwrap_or(0.0);
    let cut = rank_cut(smax);
    Ok(sv.iter().filter(|s| **s > cut).count())
}

/// Spectral radius of a square matrix, read off a complex Schur form.
pub fn spectral_radius(m: &CMatrix) -> Result<f64> {
    ensure_square(m, "spectral_radius")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(m[(0, 0)].norm());
    }
    let schur = nalgebra::Schur::try_new(m.clone(), EIG_EPS, MAX_SWEEPS * n)
        .ok_or(Error::EigenNoConvergence)?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)].norm()).fold(0.0, f64::max))
}

/// Orthonormal basis of a subspace of `C^ambient`, stored as the columns of
/// an `ambient × dim` isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceEmbedding {
    basis: CMatrix,
}

impl SubspaceEmbedding {
    pub fn from_basis(basis: CMatrix) -> Self {
        Self { basis }
    }

    /// The whole space with its standard basis.
    pub fn full(ambient: usize) -> Self {
        Self { basis: identity(ambient) }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { basis: zeros(ambient, 0) }
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// The isometry `Π*` taking coordinates into the ambient space.
    pub fn embed(&self) -> &CMatrix {
        &self.basis
    }

    /// The co-isometry `Π` taking ambient vectors to coordinates.
    pub fn coords(&self) -> CMatrix {
        self.basis.adjoint()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Replaces the basis by standard coordinate vectors when the subspace is
    /// spanned by coordinate axes, so that embeddings of coordinate-aligned
    /// subspaces are exactly `0/1` matrices.
    fn snapped(self) -> Self {
        let p = self.projector();
        let n = p.nrows();
        let mut axes = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = p[(i, j)];
                let target = if i == j && (x.re - 1.0).abs() < SNAP_TOL { 1.0 } else { 0.0 };
                if (x - real(target)).norm() > SNAP_TOL {
                    return self;
                }
            }
            if (p[(i, i)].re - 1.0).abs() < SNAP_TOL {
                axes.push(i);
            }
        }
        if axes.len() != self.dim() {
            return self;
        }
        let mut basis = zeros(n, axes.len());
        for (k, &i) in axes.iter().enumerate() {
            basis[(i, k)] = real(1.0);
        }
        Self { basis }
    }
}

/// Orthonormal basis of the numerical range of `m` and its complement.
fn range_and_complement(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let r = m.nrows();
    let range = thin_svd(m, None)?.u;
    let k = range.ncols();
    if k == 0 {
        return Ok((range, identity(r)));
    }
    let full = range_completion(&range);
    Ok((range, block(&full, 0, k, r, r - k)))
}

/// Unitary matrix whose leading columns span the range of the orthonormal
/// columns `basis`.
fn range_completion(basis: &CMatrix) -> CMatrix {
    let r = basis.nrows();
    let padded = hstack(&[basis, &identity(r)]);
    let mut out = padded.qr().q();
    let k = basis.ncols();
    out.view_mut((0, 0), (r, k)).copy_from(basis);
    out
}

/// Orthonormal basis of `Ker m*`, the orthogonal complement of the range.
pub fn kernel_embedding(m: &CMatrix) -> Result<SubspaceEmbedding> {
    let r = m.nrows();
    if r == 0 {
        return Ok(SubspaceEmbedding::zero(0));
    }
    if m.ncols() == 0 {
        return Ok(SubspaceEmbedding::full(r));
    }
    let (_, basis) = range_and_complement(m)?;
    Ok(SubspaceEmbedding::from_basis(basis).snapped())
}

/// Orthonormal basis of the closure of the range of `m`.
pub fn range_embedding(m: &CMatrix) -> Result<SubspaceEmbedding> {
    let r = m.nrows();
    if r == 0 || m.ncols() == 0 {
        return Ok(SubspaceEmbedding::zero(r));
    }
    let basis = thin_svd(m, None)?.u;
    Ok(SubspaceEmbedding::from_basis(basis).snapped())
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * s, im * s)
    })
}

/// Haar-distributed unitary matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    if n == 0 {
        return zeros(0, 0);
    }
    let g = random_gaussian(rng, n, n);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { real(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random matrix rescaled to the given operator norm.
pub fn random_with_norm<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, norm: f64) -> CMatrix {
    let g = random_gaussian(rng, rows, cols);
    let n = operator_norm(&g);
    if n == 0.0 {
        g
    } else {
        scale(&g, real(norm / n))
    }
}

/// `e^{iθ}`.
pub fn unit(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_of_diag() {
        let m = diag_real(&[4.0, 9.0]);
        let s = psd_sqrt(&m).unwrap();
        assert!((s - diag_real(&[2.0, 3.0])).norm() < 1e-12);
    }

    #[test]
    fn sqrt_of_projection_is_itself() {
        let m = CMatrix::from_row_slice(2, 2, &[real(0.5), real(0.5), real(0.5), real(0.5)]);
        let s = psd_sqrt(&m).unwrap();
        assert!((s - &m).norm() < 1e-12);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let m = diag_real(&[1.0, -1.0]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn sqrt_clamps_tiny_negative() {
        let m = diag_real(&[1.0, -1e-13]);
        let s = psd_sqrt(&m).unwrap();
        assert!((s - diag_real(&[1.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn sqrt_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[real(1.0), real(1.0), real(0.0), real(1.0)]);
        assert!(matches!(psd_sqrt(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn empty_matrices() {
        assert_eq!(operator_norm(&zeros(0, 3)), 0.0);
        assert_eq!(spectral_radius(&zeros(0, 0)).unwrap(), 0.0);
        assert_eq!(psd_sqrt(&zeros(0, 0)).unwrap().nrows(), 0);
        assert_eq!(kernel_embedding(&zeros(3, 0)).unwrap().dim(), 3);
        assert_eq!(range_embedding(&zeros(3, 0)).unwrap().dim(), 0);
        assert_eq!(solve_hpd(&zeros(0, 0), &zeros(0, 2)).unwrap().ncols(), 2);
        assert_eq!(sigma_min_cols(&zeros(2, 0)).unwrap(), None);
    }

    #[test]
    fn norm_of_jordan_block() {
        let m = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(0.0), real(0.0)]);
        assert!((operator_norm(&m) - 1.0).abs() < 1e-12);
        assert!(spectral_radius(&m).unwrap() < 1e-8);
    }

    #[test]
    fn spectral_radius_of_rotation() {
        let m = CMatrix::from_row_slice(2, 2, &[real(0.0), real(-1.0), real(1.0), real(0.0)]);
        assert!((spectral_radius(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_snaps_to_axes() {
        let m = vstack(&[&identity(2), &zeros(1, 2)]);
        let k = kernel_embedding(&m).unwrap();
        assert_eq!(k.embed(), &CMatrix::from_row_slice(3, 1, &[real(0.0), real(0.0), real(1.0)]));
    }

    #[test]
    fn kernel_of_generic_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_gaussian(&mut rng, 5, 2);
        let k = kernel_embedding(&m).unwrap();
        assert_eq!(k.dim(), 3);
        assert!((k.coords() * &m).norm() < 1e-12);
        assert!((k.coords() * k.embed() - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn pinv_of_tall_matrix_is_left_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = random_gaussian(&mut rng, 4, 2);
        let p = pseudo_inverse(&m).unwrap();
        assert!((p * &m - identity(2)).norm() < 1e-10);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(&mut rng, 4);
        assert!((u.adjoint() * &u - identity(4)).norm() < 1e-12);
    }

    #[test]
    fn hpd_solve_matches_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = random_gaussian(&mut rng, 3, 3);
        let m = &g * g.adjoint() + identity(3);
        let b = random_gaussian(&mut rng, 3, 2);
        let x1 = solve_hpd(&m, &b).unwrap();
        let x2 = solve(&m, &b).unwrap();
        assert!((x1 - x2).norm() < 1e-10);
    }

    #[test]
    fn hpd_rejects_singular() {
        assert!(matches!(solve_hpd(&diag_real(&[1.0, 0.0]), &identity(2)), Err(Error::NotPositiveDefinite { .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn psd_from_seed(seed: u64, n: usize, rank: usize) -> CMatrix {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_gaussian(&mut rng, n, rank);
            &g * g.adjoint()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn sqrt_squares_back(seed in any::<u64>(), n in 1usize..7, r in 0usize..7) {
                let m = psd_from_seed(seed, n, r.min(n));
                let s = psd_sqrt(&m).unwrap();
                let scale = m.norm().max(1e-300);
                prop_assert!((&s * &s - &m).norm() <= 1e-9 * scale.max(1.0));
                prop_assert!((&s - s.adjoint()).norm() <= 1e-12 * s.norm().max(1.0));
                prop_assert!(min_eigenvalue(&s).unwrap() >= -1e-12);
            }

            #[test]
            fn inv_sqrt_inverts(seed in any::<u64>(), n in 1usize..6) {
                let m = psd_from_seed(seed, n, n) + identity(n);
                let s = psd_inv_sqrt(&m).unwrap();
                prop_assert!((&s * &m * &s - identity(n)).norm() < 1e-9);
            }

            #[test]
            fn range_and_kernel_are_complementary(seed in any::<u64>(), r in 1usize..7, c0 in 0usize..5) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let m = random_gaussian(&mut rng, r, c0);
                let k = kernel_embedding(&m).unwrap();
                let rg = range_embedding(&m).unwrap();
                prop_assert_eq!(k.dim() + rg.dim(), r);
                prop_assert!((k.projector() + rg.projector() - identity(r)).norm() < 1e-9);
            }
        }
    }
}

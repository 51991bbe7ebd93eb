//! Schur-class free parameters `V`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::{transfer_taylor, SystemRealization, TaylorSeries};
use crate::matrix::*;

/// Slack on `‖V(λ)‖ ≤ 1` accepted by the grid check.
pub const GRID_TOL: f64 = 1e-6;

/// A contractive analytic function `V: D → L(in, out)` in one of three
/// finite representations.
#[derive(Debug, Clone, PartialEq)]
pub enum SchurParameter {
    /// `V ≡ 0`, which yields the central solution.
    Zero { in_dim: usize, out_dim: usize },
    /// A constant contraction.
    Constant(CMatrix),
    /// A transfer function with a contractive system matrix.
    Transfer(SystemRealization),
}

impl SchurParameter {
    pub fn zero(in_dim: usize, out_dim: usize) -> Self {
        Self::Zero { in_dim, out_dim }
    }

    /// Constant parameter; the matrix must be a contraction.
    pub fn constant(m: CMatrix) -> Result<Self> {
        let n = operator_norm(&m);
        if n > 1.0 + crate::hardy::CONTRACTIVE_TOL {
            return Err(Error::Invalid(format!("constant parameter has norm {n:.6e} > 1")));
        }
        Ok(Self::Constant(m))
    }

    /// Transfer-function parameter; the system matrix must be a contraction.
    pub fn transfer(sys: SystemRealization) -> Result<Self> {
        if !sys.contractive_certified() {
            return Err(Error::Invalid("realization is not contractive".into()));
        }
        Ok(Self::Transfer(sys))
    }

    pub fn in_dim(&self) -> usize {
        match self {
            Self::Zero { in_dim, .. } => *in_dim,
            Self::Constant(m) => m.ncols(),
            Self::Transfer(s) => s.in_dim(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            Self::Zero { out_dim, .. } => *out_dim,
            Self::Constant(m) => m.nrows(),
            Self::Transfer(s) => s.out_dim(),
        }
    }

    /// The parameter as a realization; constants have zero-dimensional state.
    pub fn realization(&self) -> SystemRealization {
        match self {
            Self::Zero { in_dim, out_dim } => SystemRealization::constant(zeros(*out_dim, *in_dim)),
            Self::Constant(m) => SystemRealization::constant(m.clone()),
            Self::Transfer(s) => s.clone(),
        }
    }

    pub fn eval(&self, lambda: C64) -> Result<CMatrix> {
        match self {
            Self::Zero { in_dim, out_dim } => Ok(zeros(*out_dim, *in_dim)),
            Self::Constant(m) => Ok(m.clone()),
            Self::Transfer(s) => s.eval(lambda),
        }
    }

    pub fn taylor(&self, deg: usize) -> TaylorSeries {
        transfer_taylor(&self.realization(), deg)
    }

    pub fn check_dims(&self, in_dim: usize, out_dim: usize) -> Result<()> {
        if self.in_dim() == in_dim && self.out_dim() == out_dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "Schur parameter maps {} → {}, expected {in_dim} → {out_dim}",
                self.in_dim(),
                self.out_dim()
            )))
        }
    }
}

/// Random transfer-function parameter with a contractive system matrix.
///
/// The system matrix is a Gaussian matrix divided by `max(1, σ_max)`, so it
/// is a contraction by construction and usually has norm exactly one.
pub fn random_schur(in_dim: usize, out_dim: usize, state_dim: usize, seed: u64) -> SchurParameter {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = random_gaussian(&mut rng, state_dim + out_dim, state_dim + in_dim);
    let s = operator_norm(&k).max(1.0);
    let k = scale(&k, real(1.0 / s));
    let n = state_dim;
    let sys = SystemRealization::new(
        block(&k, 0, 0, n, n),
        block(&k, 0, n, n, in_dim),
        block(&k, n, 0, out_dim, n),
        block(&k, n, n, out_dim, in_dim),
    )
    .expect("random realization dimensions");
    SchurParameter::Transfer(sys)
}

/// Random constant contraction, scaled to norm at most `max_norm`.
pub fn random_constant(in_dim: usize, out_dim: usize, max_norm: f64, seed: u64) -> SchurParameter {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_gaussian(&mut rng, out_dim, in_dim);
    let s = operator_norm(&g);
    let target = max_norm * rand::Rng::random_range(&mut rng, 0.2..1.0);
    let m = if s > 0.0 { scale(&g, real(target / s)) } else { g };
    SchurParameter::Constant(m)
}

/// Outcome of sampling `‖V(λ)‖` on a circle.
#[derive(Debug, Clone, Serialize)]
pub struct GridCertificate {
    pub points: usize,
    pub radius: f64,
    pub max_norm: f64,
    pub pass: bool,
}

/// Samples `‖V(λ)‖` at `n` equally spaced points of radius `r` and checks
/// that it stays below `1 + 1e-6`.
pub fn grid_certify(v: &SchurParameter, n: usize, r: f64) -> Result<GridCertificate> {
    let mut max_norm: f64 = 0.0;
    for k in 0..n {
        let lam = unit(std::f64::consts::TAU * k as f64 / n as f64) * r;
        max_norm = max_norm.max(operator_norm(&v.eval(lam)?));
    }
    Ok(GridCertificate { points: n, radius: r, max_norm, pass: max_norm <= 1.0 + GRID_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_parameters_are_certified() {
        for seed in 0..20 {
            let v = random_schur(2, 3, 2, seed);
            match &v {
                SchurParameter::Transfer(s) => assert!(s.contractive_certified()),
                _ => unreachable!(),
            }
            assert!(grid_certify(&v, 64, 0.999).unwrap().pass);
        }
    }

    #[test]
    fn zero_parameter_evaluates_to_zero() {
        let v = SchurParameter::zero(2, 1);
        assert_eq!(v.eval(real(0.4)).unwrap(), zeros(1, 2));
        assert_eq!(v.taylor(3).coeffs.len(), 4);
    }

    #[test]
    fn constant_rejects_expansive_matrix() {
        assert!(SchurParameter::constant(diag_real(&[1.5])).is_err());
    }

    #[test]
    fn taylor_matches_eval() {
        let v = random_schur(1, 2, 3, 9);
        let t = v.taylor(80);
        let lam = c(0.2, -0.3);
        assert!((t.eval(lam) - v.eval(lam).unwrap()).norm() < 1e-10);
    }
}

//! Build the Redheffer coefficients of a strict instance, solve for a random
//! Schur parameter and verify the resulting interpolant.

use anyhow::{bail, Result};
use relaxcl::hardy::verify_interpolant;
use relaxcl::lifting::{derive, generate_random, InstanceKind};
use relaxcl::matrix::*;
use relaxcl::redheffer::{build_coefficients, gamma_eval, phi_eval, solution_taylor};
use relaxcl::schur::{random_schur, SchurParameter};

fn main() -> Result<()> {
    let kind = InstanceKind::Generic { h_prime: 3, h: 4, h0: 2, isometric: true };
    let ds = generate_random(&kind, 0.7, 3)?;
    let dd = derive(&ds)?;
    if !dd.strict {
        bail!("instance is not strict");
    }
    let rc = build_coefficients(&dd)?;
    println!("r_spec(X₁) = {:.6}", rc.r_spec_x1);

    let lam = c(0.3, -0.4);
    let phi = phi_eval(&rc, lam)?;
    println!("‖Φ₁₁(λ)‖ = {:.6}, ‖Φ₂₁(λ)‖ = {:.6} at λ = {lam}", operator_norm(&phi.phi11), operator_norm(&phi.phi21));

    for (name, v) in [
        ("central", SchurParameter::zero(rc.v_in_dim(), rc.w_dim())),
        ("random", random_schur(rc.v_in_dim(), rc.w_dim(), 2, 11)),
    ] {
        println!("{name} parameter: ‖Γ(λ)‖ = {:.6}", operator_norm(&gamma_eval(&rc, &v, lam)?));
        let sol = solution_taylor(&rc, &v, 64)?;
        for deg in [16, 64] {
            let rep = verify_interpolant(&ds, &sol, deg, 1e-6)?;
            println!(
                "  degree {deg:>3}: σ_max = {:.9}, upper = {:?}, pass = {}",
                rep.sigma_max, rep.sigma_upper, rep.pass
            );
        }
    }
    Ok(())
}

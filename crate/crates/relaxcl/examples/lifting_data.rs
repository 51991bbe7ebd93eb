//! Generate a lifting data set, check the constraints and print the derived
//! defect quantities.

use anyhow::Result;
use relaxcl::lifting::{derive, generate_random, validate, InstanceKind};
use relaxcl::matrix::operator_norm;

fn main() -> Result<()> {
    let kind = InstanceKind::Generic { h_prime: 3, h: 4, h0: 2, isometric: false };
    let ds = generate_random(&kind, 0.8, 7)?;
    println!("dims: h' = {}, h = {}, h0 = {}", ds.h_prime(), ds.h(), ds.h0());

    let report = validate(&ds, 1e-9)?;
    for r in &report.residuals {
        println!("  {:<40} {:.3e}  {}", r.identity, r.value, if r.pass { "ok" } else { "FAIL" });
    }
    println!("strict: {}", report.strictness.reason.is_none());

    let dd = derive(&ds)?;
    println!("‖A‖ = {:.6}", operator_norm(&ds.a));
    println!("dim D_T' = {}, dim D∘ = {}", dd.dim_d_t_prime(), dd.dim_d_circ());
    println!("Gram identity residual = {:.3e}", dd.gram_identity_residual());
    println!("‖ω‖ = {:.12}, ‖ω*ω − I‖ = {:.3e}", operator_norm(&dd.omega), dd.omega_isometry_defect());
    Ok(())
}

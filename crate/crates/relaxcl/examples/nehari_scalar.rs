//! The scalar Nehari problem with one tap `F₋₁ = 1/2` and window `N = 2`.

use anyhow::Result;
use relaxcl::matrix::*;
use relaxcl::nehari::{assemble_l, coefficients, hat_m_check, phi_hat_eval, solve_h, NehariProblem};
use relaxcl::schur::{random_schur, SchurParameter};

fn show(name: &str, m: &CMatrix) {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| r.iter().map(|x| format!("{:+.6}", x.re)).collect::<Vec<_>>().join(" "))
        .collect();
    println!("{name} = [{}]", rows.join("; "));
}

fn main() -> Result<()> {
    let p = NehariProblem::new(2, 1, 1, vec![CMatrix::from_element(1, 1, real(0.5))])?;
    let nc = coefficients(&p)?;
    show("Λ", &nc.lambda);
    show("Λ×", &nc.lambda_cross);
    show("G", &hstack(&nc.g_row.iter().collect::<Vec<_>>()));
    show("T_state", &nc.t_state);

    let phi = phi_hat_eval(&nc, real(0.5))?;
    show("Φ̂₁₁(1/2)", &phi.phi11);
    show("Φ̂₂₁(1/2)", &phi.phi21);

    let central = solve_h(&nc, &SchurParameter::zero(1, 2), 64)?;
    println!("central solution: σ_max(L) = {:.12}", assemble_l(&p, &central).sigma_max);
    let h = solve_h(&nc, &random_schur(1, 2, 2, 5), 64)?;
    let rep = assemble_l(&p, &h);
    println!("random parameter: σ_max(L) = {:.12}, slack = {:?}", rep.sigma_max, rep.tail_slack);
    let m = hat_m_check(&nc, 64)?;
    println!("‖M̂_t*M̂_t − I‖ = {:.3e} at degree {}", m.residual, m.degree);
    Ok(())
}

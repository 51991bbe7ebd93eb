//! Random Schur-class parameters: grid certification and Taylor expansion.

use anyhow::Result;
use relaxcl::matrix::*;
use relaxcl::schur::{grid_certify, random_constant, random_schur};

fn main() -> Result<()> {
    for (name, v) in [("constant", random_constant(2, 3, 1.0, 1)), ("transfer", random_schur(2, 3, 3, 1))] {
        let cert = grid_certify(&v, 256, 0.999)?;
        let t = v.taylor(40);
        let lam = unit(1.1) * 0.5;
        let gap = operator_norm(&(t.eval(lam) - v.eval(lam)?));
        println!(
            "{name}: sup on the grid = {:.9} ({}), Taylor gap at |λ| = 0.5 is {gap:.2e}, tail bound {:?}",
            cert.max_norm,
            if cert.pass { "certified" } else { "rejected" },
            t.tail_bound
        );
    }
    Ok(())
}

//! Compare the two readings of the classical closed form with the general
//! pipeline on data of classical shape.

use anyhow::Result;
use relaxcl::lifting::{derive, generate_random, InstanceKind};
use relaxcl::matrix::*;
use relaxcl::redheffer::{build_coefficients, classical_phi_eval, phi_eval, ExponentReading};

fn main() -> Result<()> {
    let ds = generate_random(&InstanceKind::ClassicalShape { h_prime: 2, h: 3 }, 0.7, 2)?;
    let dd = derive(&ds)?;
    let rc = build_coefficients(&dd)?;
    for reading in ExponentReading::ALL {
        let mut worst: f64 = 0.0;
        for k in 0..16 {
            let lam = unit(0.4 * k as f64) * (0.2 + 0.05 * k as f64);
            let a = classical_phi_eval(&dd, lam, reading)?;
            let b = phi_eval(&rc, lam)?;
            for (x, y) in [(&a.phi11, &b.phi11), (&a.phi12, &b.phi12), (&a.phi21, &b.phi21), (&a.phi22, &b.phi22)] {
                worst = worst.max(operator_norm(&(x - y)));
            }
        }
        println!("{:<11} reading: max deviation {worst:.3e}", reading.name());
    }
    Ok(())
}

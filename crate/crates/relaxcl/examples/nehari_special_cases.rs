//! The closed forms for `N = 1` and for vanishing taps, compared with the
//! general solution after the bridging reparameterization.

use anyhow::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relaxcl::nehari::{assemble_l, bridge, coefficients, solve_h, special_f0, special_n1, NehariProblem};
use relaxcl::schur::random_schur;

fn max_gap(a: &relaxcl::hardy::TaylorSeries, b: &relaxcl::hardy::TaylorSeries) -> f64 {
    a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (u, y) = (2, 1);
    let p = NehariProblem::random(&mut rng, 1, u, y, 3, 0.7);
    let v = random_schur(u, y + u, 2, 8);
    let closed = special_n1(&p, &v, 32)?;
    let general = solve_h(&coefficients(&p)?, &bridge(&v, y), 32)?;
    println!("N = 1: max coefficient gap = {:.2e}", max_gap(&closed, &general));
    println!("       σ_max(L) = {:.9}", assemble_l(&p, &closed).sigma_max);

    let n = 3;
    let zero = NehariProblem::zero_taps(n, u, y);
    let closed = special_f0(n, u, y, &v, 32)?;
    let general = solve_h(&coefficients(&zero)?, &bridge(&v, y), 32)?;
    println!("zero taps, N = {n}: max coefficient gap = {:.2e}", max_gap(&closed, &general));
    println!("       σ_max(L) = {:.9}", assemble_l(&zero, &closed).sigma_max);
    Ok(())
}

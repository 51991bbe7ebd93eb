use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaxcl::hardy::TaylorSeries;
use relaxcl::matrix::*;
use relaxcl::nehari::*;
use relaxcl::schur::{random_constant, random_schur, SchurParameter};

fn scalar_problem() -> NehariProblem {
    NehariProblem::new(2, 1, 1, vec![CMatrix::from_element(1, 1, real(0.5))]).unwrap()
}

fn col(v: &[f64]) -> CMatrix {
    CMatrix::from_column_slice(v.len(), 1, &v.iter().map(|x| real(*x)).collect::<Vec<_>>())
}

#[test]
fn n1_constant_parameter_gives_constant_contractive_h() {
    let p = NehariProblem::new(1, 1, 1, vec![CMatrix::from_element(1, 1, real(0.5))]).unwrap();
    let v = SchurParameter::constant(col(&[0.6, 0.0])).unwrap();
    let h = special_n1(&p, &v, 12).unwrap();
    // Π_U V = 0, so H = 0.6 · D_A with D_A = sqrt(3)/2.
    let expected = 0.6 * 3f64.sqrt() / 2.0;
    assert!((h.coeffs[0][(0, 0)] - real(expected)).norm() < 1e-12);
    assert!(h.coeffs[1..].iter().all(|c0| c0.norm() < 1e-14));
    let rep = assemble_l(&p, &h);
    assert!(rep.sigma_max <= 1.0 + 1e-12);
    // L is [1/2; H₀; 0; …], whose norm is sqrt(1/4 + H₀²).
    assert!((rep.sigma_max - (0.25 + expected * expected).sqrt()).abs() < 1e-12);
}

#[test]
fn zero_parameter_gives_zero_h_in_both_special_forms() {
    let p = NehariProblem::new(1, 2, 1, vec![random_with_norm(&mut ChaCha8Rng::seed_from_u64(3), 1, 2, 0.7)]).unwrap();
    let h = special_n1(&p, &SchurParameter::zero(2, 3), 10).unwrap();
    assert!(h.coeffs.iter().all(|c0| c0.norm() == 0.0));
    let h = special_f0(3, 2, 2, &SchurParameter::zero(2, 4), 10).unwrap();
    assert!(h.coeffs.iter().all(|c0| c0.norm() == 0.0));
}

#[test]
fn f0_with_inner_selector_gives_unit_h_and_isometric_toeplitz() {
    let v = SchurParameter::constant(col(&[1.0, 0.0])).unwrap();
    let deg = 8;
    let h = special_f0(1, 1, 1, &v, deg).unwrap();
    assert!((h.coeffs[0][(0, 0)] - real(1.0)).norm() < 1e-14);
    assert!(h.coeffs[1..].iter().all(|c0| c0.norm() < 1e-14));
    let p = NehariProblem::zero_taps(1, 1, 1);
    let l = l_matrix(&p, &h);
    let gram = l.adjoint() * &l;
    assert!((gram - identity(l.ncols())).norm() < 1e-14);
}

#[test]
fn f0_for_n1_is_n1_with_identity_defect() {
    let p = NehariProblem::zero_taps(1, 2, 1);
    for seed in 0..5 {
        let v = random_schur(2, 3, 2, seed);
        let a = special_f0(1, 2, 1, &v, 16).unwrap();
        let b = special_n1(&p, &v, 16).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn central_scalar_solution_is_zero() {
    let nc = coefficients(&scalar_problem()).unwrap();
    let h = solve_h(&nc, &SchurParameter::zero(1, 2), 32).unwrap();
    assert!(h.coeffs.iter().all(|c0| c0.norm() < 1e-14));
    // The extension matrix reduces to [1/2 0; 0 1/2], with norm 1/2.
    let rep = assemble_l(&scalar_problem(), &h);
    assert!((rep.sigma_max - 0.5).abs() < 1e-12);
}

#[test]
fn scalar_hat_m_residual_is_tiny_and_monotone_in_degree() {
    let nc = coefficients(&scalar_problem()).unwrap();
    let at64 = hat_m_check(&nc, 64).unwrap();
    assert!(at64.residual <= 1e-8, "residual {}", at64.residual);
    let mut last = f64::INFINITY;
    for deg in [2, 4, 8, 16, 32, 64] {
        let r = hat_m_check(&nc, deg).unwrap().residual;
        assert!(r <= last + 1e-12, "residual rose from {last} to {r} at degree {deg}");
        last = r;
    }
}

#[test]
fn hat_m_residual_is_nonincreasing_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..5 {
        let p = NehariProblem::random(&mut rng, 2, 2, 1, 2, 0.7);
        let nc = coefficients(&p).unwrap();
        let mut last = f64::INFINITY;
        for deg in [4, 8, 16, 32] {
            let r = hat_m_check(&nc, deg).unwrap().residual;
            assert!(r <= last + 1e-10);
            last = r;
        }
    }
}

/// Scalar `N = 1`, one tap `a`: the extension `[a; h₀; h₁; …]` with one column
/// is a contraction iff `|a|² + Σ|h_k|² ≤ 1`, which gives an exact oracle.
#[test]
fn parrott_oracle_on_one_column_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let deg = 6;
    for trial in 0..1000u64 {
        let a = rng.random_range(0.05..0.9);
        let p = NehariProblem::new(1, 1, 1, vec![CMatrix::from_element(1, 1, real(a))]).unwrap();
        let nc = coefficients(&p).unwrap();
        let v = if trial % 2 == 0 { random_schur(1, 2, 2, trial) } else { random_constant(1, 2, 1.0, trial) };
        let h = solve_h(&nc, &v, deg).unwrap();
        let energy = a * a + h.coeffs.iter().map(|c0| c0[(0, 0)].norm_sqr()).sum::<f64>();
        let slack = h.tail_bound.unwrap_or(0.0);
        assert!(energy <= 1.0 + 1e-9 + slack, "trial {trial}: energy {energy}");
        let rep = assemble_l(&p, &h);
        assert!((rep.sigma_max - energy.sqrt()).abs() < 1e-9);
    }
}

/// With `N = 2` a grid search over perturbations of the central solution:
/// anything the direct contractivity test accepts is a feasible extension, and
/// steps larger than the distance to the boundary are rejected.
#[test]
fn parrott_oracle_perturbations_of_the_central_solution() {
    let p = scalar_problem();
    let nc = coefficients(&p).unwrap();
    let deg = 6;
    let central = solve_h(&nc, &SchurParameter::zero(1, 2), deg).unwrap();
    let base = assemble_l(&p, &central).sigma_max;
    assert!(base < 1.0);
    let perturbed = |k: usize, e: C64| {
        let mut h = central.clone();
        h.coeffs[k][(0, 0)] += e;
        assemble_l(&p, &h).sigma_max
    };
    for k in 0..=deg {
        for step in [0.1, 0.3, 0.6] {
            for theta in [0.0, 1.3, 2.9] {
                let e = unit(theta) * step;
                let s = perturbed(k, e);
                // ‖L + E‖ ≤ ‖L‖ + ‖E‖, so small steps stay feasible.
                if base + step <= 1.0 {
                    assert!(s <= 1.0 + 1e-12);
                }
            }
        }
        // ‖L + E‖ ≥ ‖E‖ − ‖L‖ once the step dominates.
        assert!(perturbed(k, real(1.0 + base + 0.1)) > 1.0);
    }
    for seed in 0..200 {
        let v = random_schur(1, 2, 2, seed);
        let h = solve_h(&nc, &v, deg).unwrap();
        let rep = assemble_l(&p, &h);
        assert!(rep.accepts(1e-9), "seed {seed}: sigma_max {}", rep.sigma_max);
    }
}

#[test]
fn companion_conjugation_holds_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let n = rng.random_range(1..=4);
        let u = rng.random_range(1..=3);
        let y = rng.random_range(1..=3);
        let p = NehariProblem::random(&mut rng, n, u, y, 3, 0.8);
        let nc = coefficients(&p).unwrap();
        let e = flip_over(n, u);
        let lx = &nc.lambda_cross;
        // K(λ) = λ Σ_k λ^k Λ×_{N−k,1} has a zero constant term.
        let mut coeffs = vec![zeros(u, u)];
        for k in 0..n {
            coeffs.push(block(lx, (n - 1 - k) * u, 0, u, u));
        }
        let companion = second_companion(&coeffs).unwrap();
        let conj = &e * &nc.t_state * &e;
        assert!((conj - companion).norm() < 1e-9);
    }
}

#[test]
fn truncated_solutions_extend_consistently() {
    let nc = coefficients(&scalar_problem()).unwrap();
    let v = random_schur(1, 2, 3, 9);
    let short: TaylorSeries = solve_h(&nc, &v, 8).unwrap();
    let long = solve_h(&nc, &v, 24).unwrap();
    for (a, b) in short.coeffs.iter().zip(&long.coeffs) {
        assert!((a - b).norm() < 1e-13);
    }
}

use super::*;
use crate::recurrence::assemble_polynomial_solution;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn params(gamma_sq: f64, a: f64, b: f64) -> RadialParameters {
    RadialParameters::new(gamma_sq, a, b).unwrap()
}

#[test]
fn grid_validation() {
    assert!(GridSpec::new(10.0, 4000).is_ok());
    assert!(matches!(
        GridSpec::new(4.0, 4000),
        Err(OracleError::InvalidGrid { .. })
    ));
    assert!(matches!(
        GridSpec::new(10.0, 50),
        Err(OracleError::InvalidGrid { .. })
    ));
}

#[test]
fn default_grid_widens_for_strong_negative_slope() {
    assert_eq!(GridSpec::for_params(&params(0.0, 0.0, 0.0)).x_max(), 10.0);
    assert_eq!(GridSpec::for_params(&params(0.0, 0.0, -7.0)).x_max(), 14.0);
}

#[test]
fn oscillator_ground_state() {
    let grid = GridSpec::new(10.0, 4000).unwrap();
    let w = fd_spectrum(&params(0.0, 0.0, 0.0), &grid, 3).unwrap();
    assert!((w[0] - 2.0).abs() < 1e-5, "W_0 = {}", w[0]);
    assert!((w[1] - 6.0).abs() < 2e-5, "W_1 = {}", w[1]);
    assert!((w[2] - 10.0).abs() < 4e-5, "W_2 = {}", w[2]);
}

#[test]
fn second_order_convergence_on_oscillator() {
    let coarse = fd_spectrum(
        &params(0.0, 0.0, 0.0),
        &GridSpec::new(10.0, 2000).unwrap(),
        1,
    )
    .unwrap()[0];
    let fine = fd_spectrum(
        &params(0.0, 0.0, 0.0),
        &GridSpec::new(10.0, 4001).unwrap(),
        1,
    )
    .unwrap()[0];
    let ratio = (coarse - 2.0).abs() / (fine - 2.0).abs();
    assert!(
        (3.5..=4.5).contains(&ratio),
        "halving h should quarter the error, got ratio {ratio}"
    );
}

#[test]
fn truncation_eigenvalue_recovered() {
    let grid = GridSpec::new(10.0, 4000).unwrap();
    let w = fd_spectrum(&params(0.0, SQRT_2, 0.0), &grid, 1).unwrap();
    assert!((w[0] - 4.0).abs() < 1e-4, "W_0 = {}", w[0]);
}

#[test]
fn checked_spectrum_richardson_gate() {
    let grid = GridSpec::new(10.0, 2000).unwrap();
    let fine = fd_spectrum_checked(&params(0.0, 0.0, 1.0), &grid, 2, 1e-3).unwrap();
    assert_eq!(fine.len(), 2);
    // an absurdly tight tolerance must trip the gate
    assert!(matches!(
        fd_spectrum_checked(&params(0.0, 0.0, 1.0), &grid, 2, 1e-14),
        Err(OracleError::GridTooCoarse { .. })
    ));
}

#[test]
fn levels_guard() {
    let grid = GridSpec::new(10.0, 400).unwrap();
    assert!(matches!(
        fd_spectrum(&params(0.0, 0.0, 0.0), &grid, 101),
        Err(OracleError::LevelsTooLarge { .. })
    ));
}

// ── ODE residual ──

#[test]
fn exact_gaussian_residual_is_rounding_noise() {
    let sol = assemble_polynomial_solution(0, 1, 0.0, 0.0).unwrap();
    let res = ode_residual(&sol, &residual_sample());
    assert!(res < 1e-14, "residual {res}");
}

#[test]
fn first_excited_residual() {
    let sol = assemble_polynomial_solution(1, 2, 0.0, 0.0).unwrap();
    let res = ode_residual(&sol, &residual_sample());
    assert!(res < 1e-12, "residual {res}");
}

#[test]
fn residual_detects_wrong_eigenvalue() {
    let mut sol = assemble_polynomial_solution(1, 2, 0.0, 0.0).unwrap();
    sol.w += 1e-3;
    let res = ode_residual(&sol, &residual_sample());
    assert!(res > 1e-4, "perturbed residual too small: {res}");
}

#[test]
fn residual_with_fractional_exponent_and_slope() {
    let sol = assemble_polynomial_solution(2, 1, 0.5, 1.5).unwrap();
    let res = ode_residual(&sol, &residual_sample());
    assert!(res < 1e-10, "residual {res}");
}

// ── norms ──

#[test]
fn gaussian_norm() {
    let sol = assemble_polynomial_solution(0, 1, 0.0, 0.0).unwrap();
    let norm = norm_check_solution(&sol).unwrap();
    assert!((norm - 0.5).abs() < 1e-14);
}

#[test]
fn polynomial_norm_moment_expansion() {
    // psi = (1 + sqrt(2) x) e^{-x^2/2}: M(1) + 2 sqrt2 M(2) + 2 M(3)
    let sol = assemble_polynomial_solution(1, 2, 0.0, 0.0).unwrap();
    let want = 0.5 + SQRT_2 * std::f64::consts::PI.sqrt() / 2.0 + 1.0;
    let norm = norm_check_solution(&sol).unwrap();
    assert!((norm - want).abs() < 1e-12, "{norm} vs {want}");
}

#[test]
fn quadrature_norm_matches_moments_in_b_to_zero_limit() {
    // same state but evaluated through the quadrature path at small |b|
    let sol_b0 = assemble_polynomial_solution(1, 2, 0.0, 0.0).unwrap();
    let sol_near = assemble_polynomial_solution(1, 2, 0.0, 1e-9).unwrap();
    let n0 = norm_check_solution(&sol_b0).unwrap();
    let n1 = norm_check_solution(&sol_near).unwrap();
    assert!(
        ((n0 - n1) / n0).abs() < 1e-5,
        "quadrature {n1} vs closed form {n0}"
    );
}

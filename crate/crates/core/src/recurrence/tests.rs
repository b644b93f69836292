use super::*;
use crate::model::RadialParameters;
use proptest::prelude::*;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn params(gamma_sq: f64, a: f64, b: f64) -> RadialParameters {
    RadialParameters::new(gamma_sq, a, b).unwrap()
}

/// Paper forms of the first four truncation conditions, built term by term.
pub(crate) fn paper_polynomial(n: u32) -> RationalPolynomial {
    let t = |da, db, ds, c: i64| RationalPolynomial::term(da, db, ds, integer(c));
    match n {
        // 2a + b(2s+1)
        0 => t(1, 0, 0, 2).add(&t(0, 1, 1, 2)).add(&t(0, 1, 0, 1)),
        // 4a^2 + 8ab(s+1) + b^2(2s+1)(2s+3) - 8(2s+1)
        1 => t(2, 0, 0, 4)
            .add(&t(1, 1, 1, 8))
            .add(&t(1, 1, 0, 8))
            .add(&t(0, 2, 2, 4))
            .add(&t(0, 2, 1, 8))
            .add(&t(0, 2, 0, 3))
            .add(&t(0, 0, 1, -16))
            .add(&t(0, 0, 0, -8)),
        // 8a^3 + 12a^2 b(2s+3) + 2ab^2(12s^2+36s+23) - 32a(4s+3)
        //   + b^3(2s+1)(2s+3)(2s+5) - 16b(2s+1)(4s+7)
        2 => t(3, 0, 0, 8)
            .add(&t(2, 1, 1, 24))
            .add(&t(2, 1, 0, 36))
            .add(&t(1, 2, 2, 24))
            .add(&t(1, 2, 1, 72))
            .add(&t(1, 2, 0, 46))
            .add(&t(1, 0, 1, -128))
            .add(&t(1, 0, 0, -96))
            .add(&t(0, 3, 3, 8))
            .add(&t(0, 3, 2, 36))
            .add(&t(0, 3, 1, 46))
            .add(&t(0, 3, 0, 15))
            .add(&t(0, 1, 2, -128))
            .add(&t(0, 1, 1, -288))
            .add(&t(0, 1, 0, -112)),
        // 16a^4 + 64a^3 b(s+2) + 8a^2 b^2(12s^2+48s+43) - 640a^2(s+1)
        //   + 16ab^3(4s^3+24s^2+43s+22) - 128ab(10s^2+30s+17)
        //   + b^4(2s+1)(2s+3)(2s+5)(2s+7) - 32b^2(2s+1)(10s^2+45s+47)
        //   + 576(2s+1)(2s+3)
        3 => t(4, 0, 0, 16)
            .add(&t(3, 1, 1, 64))
            .add(&t(3, 1, 0, 128))
            .add(&t(2, 2, 2, 96))
            .add(&t(2, 2, 1, 384))
            .add(&t(2, 2, 0, 344))
            .add(&t(2, 0, 1, -640))
            .add(&t(2, 0, 0, -640))
            .add(&t(1, 3, 3, 64))
            .add(&t(1, 3, 2, 384))
            .add(&t(1, 3, 1, 688))
            .add(&t(1, 3, 0, 352))
            .add(&t(1, 1, 2, -1280))
            .add(&t(1, 1, 1, -3840))
            .add(&t(1, 1, 0, -2176))
            .add(&t(0, 4, 4, 16))
            .add(&t(0, 4, 3, 128))
            .add(&t(0, 4, 2, 344))
            .add(&t(0, 4, 1, 352))
            .add(&t(0, 4, 0, 105))
            .add(&t(0, 2, 3, -640))
            .add(&t(0, 2, 2, -3200))
            .add(&t(0, 2, 1, -4448))
            .add(&t(0, 2, 0, -1504))
            .add(&t(0, 0, 2, 2304))
            .add(&t(0, 0, 1, 4608))
            .add(&t(0, 0, 0, 1728)),
        _ => panic!("paper prints n <= 3 only"),
    }
}

// ── recurrence coefficients ──

#[test]
fn a_minus_one_matches_hand_value() {
    let (a_j, _) = recurrence_coefficients(-1, 0.0, 1.0, 0.0, 0.0);
    assert_eq!(a_j, 1.0);
}

#[test]
fn b_zero_vanishes_at_ground_truncation() {
    let (_, b_j) = recurrence_coefficients(0, 0.0, 0.0, 0.0, 2.0);
    assert_eq!(b_j, 0.0);
}

#[test]
fn b_j_matches_simplified_form_at_truncation_energy() {
    // W = W_0^(1) = 4, b = 0: B_0 = 2(0-1)/(2*2) = -1/2
    let (_, b_j) = recurrence_coefficients(0, 0.0, 0.0, 0.0, 4.0);
    assert_eq!(b_j, -0.5);
    // general check of the simplified form across j, n, s
    for n in 0..6u32 {
        for j in -1..6i64 {
            for &s in &[0.0, 0.5, 1.0, 2.5] {
                let w = truncation_energy(n, s, 0.0);
                let (_, b_j) = recurrence_coefficients(j, s, 0.7, 0.0, w);
                let jf = j as f64;
                let simple =
                    2.0 * (jf - n as f64) / ((jf + 2.0) * (jf + 2.0 * (s + 1.0)));
                assert!(
                    (b_j - simple).abs() < 1e-14,
                    "Eq.(9) mismatch at n={n} j={j} s={s}"
                );
            }
        }
    }
}

// ── series coefficients ──

#[test]
fn ground_state_series_terminates() {
    let c = series_coefficients(&params(0.0, 0.0, 0.0), 2.0, 3);
    assert_eq!(c, vec![1.0, 0.0, 0.0]);
}

#[test]
fn first_excited_polynomial_series() {
    let c = series_coefficients(&params(0.0, SQRT_2, 0.0), 4.0, 4);
    assert!((c[0] - 1.0).abs() < 1e-15);
    assert!((c[1] - SQRT_2).abs() < 1e-15);
    assert!(c[2].abs() < 1e-15, "c2 = {}", c[2]);
    assert!(c[3].abs() < 1e-15, "c3 = {}", c[3]);
}

#[test]
fn non_truncating_series() {
    let c = series_coefficients(&params(0.0, 0.0, 0.0), 0.0, 3);
    assert_eq!(c, vec![1.0, 0.0, 0.5]);
}

// ── truncation energy ──

#[test]
fn truncation_energy_values() {
    assert_eq!(truncation_energy(0, 0.0, 0.0), 2.0);
    assert_eq!(truncation_energy(8, 0.0, 1.0), 17.75);
    assert_eq!(truncation_energy(3, 2.0, 2.0), 11.0);
}

// ── exact polynomial construction ──

#[test]
fn canonical_polynomials_match_paper_forms() {
    for n in 0..=3u32 {
        let built = truncation_polynomial(n).unwrap();
        let paper = paper_polynomial(n);
        assert_eq!(built, paper, "c_{}(a,b;s) differs from the printed form", n + 1);
    }
}

#[test]
fn quartic_slice_at_s0_b0() {
    let s0 = integer(0);
    let b0 = integer(0);
    let slice = build_truncation_polynomial(3, &s0)
        .unwrap()
        .substitute_b(&b0);
    let uni = slice.univariate_in_a().unwrap();
    assert_eq!(
        uni,
        vec![integer(1728), integer(0), integer(-640), integer(0), integer(16)]
    );
}

#[test]
fn degrees_are_n_plus_one() {
    for n in 0..=10u32 {
        let p = truncation_polynomial(n).unwrap();
        assert_eq!(p.degree_a(), n + 1);
        assert_eq!(p.degree_b(), n + 1);
    }
}

#[test]
fn level_guard() {
    assert!(matches!(
        truncation_polynomial(MAX_TRUNCATION_LEVEL + 1),
        Err(RecurrenceError::LevelTooLarge { .. })
    ));
}

// ── root isolation ──

#[test]
fn linear_root() {
    let roots = truncation_roots(0, 0.0, 2.0).unwrap();
    assert_eq!(roots, vec![-1.0]);
}

#[test]
fn quadratic_roots() {
    let roots = truncation_roots(1, 0.0, 0.0).unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0] + SQRT_2).abs() < 1e-12);
    assert!((roots[1] - SQRT_2).abs() < 1e-12);
}

#[test]
fn quartic_roots() {
    // a^2 = 20 +- sqrt(292)
    let outer = (20.0 + 292.0f64.sqrt()).sqrt();
    let inner = (20.0 - 292.0f64.sqrt()).sqrt();
    let roots = truncation_roots(3, 0.0, 0.0).unwrap();
    assert_eq!(roots.len(), 4);
    for (got, want) in roots.iter().zip([-outer, -inner, inner, outer]) {
        assert!((got - want).abs() < 1e-10, "root {got} vs {want}");
    }
}

#[test]
fn negative_s_rejected() {
    assert!(matches!(
        truncation_roots(1, -0.5, 0.0),
        Err(RecurrenceError::BadParameter { name: "s", .. })
    ));
}

// ── assembly ──

#[test]
fn assemble_ground_state() {
    let sol = assemble_polynomial_solution(0, 1, 0.0, 0.0).unwrap();
    assert_eq!(sol.a_root, 0.0);
    assert_eq!(sol.w, 2.0);
    assert_eq!(sol.coeffs, vec![1.0]);
    assert!(sol.truncation_defect < 1e-14);
}

#[test]
fn assemble_first_excited() {
    let sol = assemble_polynomial_solution(1, 2, 0.0, 0.0).unwrap();
    assert!((sol.a_root - SQRT_2).abs() < 1e-13);
    assert_eq!(sol.w, 4.0);
    assert!((sol.coeffs[1] - SQRT_2).abs() < 1e-13);
    assert!(sol.truncation_defect < TRUNCATION_TOL);
}

#[test]
fn assemble_quartic_outer_root() {
    let sol = assemble_polynomial_solution(3, 4, 0.0, 0.0).unwrap();
    assert!((sol.a_root - 6.089_992_404_809_308).abs() < 1e-9);
    assert_eq!(sol.w, 8.0);
    assert_eq!(sol.coeffs.len(), 4);
    assert!(sol.truncation_defect < TRUNCATION_TOL);
}

#[test]
fn assemble_rejects_bad_index() {
    assert!(matches!(
        assemble_polynomial_solution(1, 3, 0.0, 0.0),
        Err(RecurrenceError::RootIndexOutOfRange { i: 3, count: 2 })
    ));
    assert!(matches!(
        assemble_polynomial_solution(1, 0, 0.0, 0.0),
        Err(RecurrenceError::RootIndexOutOfRange { .. })
    ));
}

// ── sweeps ──

#[test]
fn linear_branch_is_minus_half_b() {
    let sweep = curve_sweep(0, 0.0, &[0.0, 1.0, 2.0]).unwrap();
    let branch: Vec<f64> = sweep.rows.iter().map(|r| r.roots[0]).collect();
    assert_eq!(branch, vec![0.0, -0.5, -1.0]);
}

#[test]
fn sweep_rows_keep_branch_count() {
    let grid: Vec<f64> = (0..=16).map(|k| -4.0 + 0.5 * k as f64).collect();
    let sweep = curve_sweep(3, 0.0, &grid).unwrap();
    for row in &sweep.rows {
        assert_eq!(row.roots.len(), 4);
        assert!(row.roots.windows(2).all(|w| w[0] <= w[1]));
    }
}

// ── series consistency: exact polynomial vs floating recurrence ──

#[test]
fn exact_polynomial_proportional_to_float_series() {
    // both vanish on the same locus; away from it, the ratio
    // canonical/(float c_{n+1}) must be a/b-independent
    for n in 0..=6u32 {
        let poly = truncation_polynomial(n).unwrap();
        let s = 0.5;
        let w = truncation_energy(n, s, 0.75);
        let mut ratio_ref: Option<f64> = None;
        for &(a, b) in &[(1.5, 0.75), (-2.25, 0.75)] {
            let exact = eval_truncation_polynomial(&poly, a, b, s).unwrap();
            let series =
                series_coefficients(&params(s * s, a, b), w, n as usize + 2)[n as usize + 1];
            let ratio = exact / series;
            if let Some(r) = ratio_ref {
                assert!(
                    ((ratio - r) / r).abs() < 1e-12,
                    "n={n}: scale factor drifts: {ratio} vs {r}"
                );
            } else {
                ratio_ref = Some(ratio);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Real-rootedness: every slice yields exactly n+1 certified real roots.
    #[test]
    fn all_roots_real_on_random_slices(
        n in 0u32..=6,
        s_half in 0u8..=6,
        b in -4.0f64..4.0,
    ) {
        let s = f64::from(s_half) * 0.5;
        let roots = truncation_roots(n, s, b).unwrap();
        prop_assert_eq!(roots.len(), n as usize + 1);
        prop_assert!(roots.windows(2).all(|w| w[0] <= w[1]));
    }

    /// The assembled solution's eigenfunction decays and its series truncates.
    #[test]
    fn assembled_solutions_certify(
        n in 0u32..=5,
        b in -2.0f64..2.0,
    ) {
        let sol = assemble_polynomial_solution(n, 1, 0.0, b).unwrap();
        prop_assert!(sol.truncation_defect <= TRUNCATION_TOL);
        prop_assert!(sol.eval_psi(30.0).abs() < 1e-40);
    }
}

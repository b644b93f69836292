//! Frobenius ansatz machinery: the three-term recurrence, exact truncation
//! polynomials, certified roots and closed-form eigenfunction assembly.
//!
//! With `psi = x^s exp(-bx/2 - x^2/2) H(x)`, `H = sum c_j x^j`, the
//! coefficients obey
//!
//! ```text
//! c_{j+2} = A_j c_{j+1} + B_j c_j,   c_{-1} = 0, c_0 = 1,
//! A_j = [2a + b(2j+2s+3)] / (2(j+2)(j+2s+2)),
//! B_j = [4(2j+2s-W+2) - b^2] / (4(j+2)(j+2s+2)).
//! ```
//!
//! Killing `c_{n+1}` and `c_{n+2}` forces the series to a degree-`n`
//! polynomial; that happens exactly at `W = 2(n+s+1) - b^2/4` together with
//! the polynomial condition `c_{n+1}(a, b) = 0`, whose canonicalized integer
//! form this module constructs exactly. The `n+1` roots in `a` are all real;
//! the isolation here certifies that count per instance instead of assuming
//! it.

mod poly;
mod sturm;

pub use poly::{Rational, RationalPolynomial};

use crate::model::RadialParameters;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Exact construction is guarded to keep coefficient growth sane.
pub const MAX_TRUNCATION_LEVEL: u32 = 24;

/// Relative tolerance on `|c_{n+1}|, |c_{n+2}|` for a certified solution.
pub const TRUNCATION_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum RecurrenceError {
    /// Fewer real roots than the provable `n+1`: an arithmetic bug, not input.
    #[error("expected {expected} real roots (with multiplicity), isolated {found}")]
    RootCountMismatch { expected: usize, found: usize },
    #[error("truncation level n = {n} exceeds the supported maximum {max}")]
    LevelTooLarge { n: u32, max: u32 },
    #[error("root index i = {i} outside 1..={count}")]
    RootIndexOutOfRange { i: usize, count: usize },
    #[error("parameter `{name}` = {value} is not finite or out of range")]
    BadParameter { name: &'static str, value: f64 },
}

/// A certified closed-form solution: level `n`, root index `i` (1-based),
/// the root `a` value, eigenvalue `W` and the polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationSolution {
    pub n: u32,
    pub i: usize,
    pub s: f64,
    pub b: f64,
    pub a_root: f64,
    pub w: f64,
    /// `c_0 .. c_n`, with `c_0 = 1`.
    pub coeffs: Vec<f64>,
    /// `max(|c_{n+1}|, |c_{n+2}|) / max_j |c_j|` evaluated at the root.
    pub truncation_defect: f64,
}

impl TruncationSolution {
    /// Evaluate `psi(x) = x^s exp(-bx/2 - x^2/2) sum c_j x^j`.
    pub fn eval_psi(&self, x: f64) -> f64 {
        let mut h = 0.0;
        for c in self.coeffs.iter().rev() {
            h = h * x + c;
        }
        x.powf(self.s) * (-0.5 * self.b * x - 0.5 * x * x).exp() * h
    }
}

/// `(A_j, B_j)` of the three-term recurrence.
pub fn recurrence_coefficients(j: i64, s: f64, a: f64, b: f64, w: f64) -> (f64, f64) {
    assert!(j >= -1, "recurrence index starts at j = -1");
    let jf = j as f64;
    let den = (jf + 2.0) * (jf + 2.0 * (s + 1.0));
    let a_j = (2.0 * a + b * (2.0 * jf + 2.0 * s + 3.0)) / (2.0 * den);
    let b_j = (4.0 * (2.0 * jf + 2.0 * s - w + 2.0) - b * b) / (4.0 * den);
    (a_j, b_j)
}

/// `c_0 .. c_{count-1}` from `c_{-1} = 0`, `c_0 = 1`.
pub fn series_coefficients(params: &RadialParameters, w: f64, count: usize) -> Vec<f64> {
    series_coefficients_raw(params.s(), params.a(), params.b(), w, count)
}

fn series_coefficients_raw(s: f64, a: f64, b: f64, w: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1);
    let mut coeffs = Vec::with_capacity(count);
    let mut prev = 0.0; // c_{-1}
    let mut curr = 1.0; // c_0
    coeffs.push(curr);
    for j in -1..count as i64 - 2 {
        let (a_j, b_j) = recurrence_coefficients(j, s, a, b, w);
        let next = a_j * curr + b_j * prev;
        prev = curr;
        curr = next;
        coeffs.push(curr);
    }
    coeffs
}

/// Truncation eigenvalue `W_s^(n) = 2(n+s+1) - b^2/4`.
pub fn truncation_energy(n: u32, s: f64, b: f64) -> f64 {
    2.0 * (n as f64 + s + 1.0) - b * b / 4.0
}

/// The canonical truncation polynomial `c_{n+1}(a, b; s)`, exact and
/// symbolic in all three of `a`, `b`, `s`.
///
/// The raw recurrence value is scaled step by step so everything stays
/// polynomial: with `q_j = (j+2)(j+2s+2)` and `P_j = c_j * prod q`,
///
/// ```text
/// P_{j+2} = [a + b(j+s+3/2)] P_{j+1} + 2(j-n)(j+1)(j+2s+1) P_j,
/// ```
///
/// and the accumulated product is positive for `s >= 0`, so `P_{n+1}` has the
/// same zero set as `c_{n+1}`. Canonicalization then yields the unique
/// integer-content-1 form with positive leading `a` coefficient.
pub fn truncation_polynomial(n: u32) -> Result<RationalPolynomial, RecurrenceError> {
    if n > MAX_TRUNCATION_LEVEL {
        return Err(RecurrenceError::LevelTooLarge {
            n,
            max: MAX_TRUNCATION_LEVEL,
        });
    }
    let mut p_prev = RationalPolynomial::zero(); // P_{-1}
    let mut p_curr = RationalPolynomial::one(); // P_0
    for j in -1..=(n as i64 - 1) {
        // a + b (j + 3/2) + b s
        let lin = RationalPolynomial::term(1, 0, 0, poly::integer(1))
            .add(&RationalPolynomial::term(0, 1, 0, poly::rational(2 * j + 3, 2)))
            .add(&RationalPolynomial::term(0, 1, 1, poly::integer(1)));
        // 2 (j - n)(j + 1) [(j + 1) + 2 s]
        let f = 2 * (j - n as i64) * (j + 1);
        let scal = RationalPolynomial::term(0, 0, 0, poly::integer(f * (j + 1)))
            .add(&RationalPolynomial::term(0, 0, 1, poly::integer(2 * f)));
        let p_next = lin.mul(&p_curr).add(&scal.mul(&p_prev));
        p_prev = p_curr;
        p_curr = p_next;
    }
    Ok(p_curr.canonicalized())
}

/// The truncation polynomial with `s` substituted exactly; the bivariate
/// slice of [`truncation_polynomial`] without re-canonicalization.
pub fn build_truncation_polynomial(
    n: u32,
    s: &Rational,
) -> Result<RationalPolynomial, RecurrenceError> {
    Ok(truncation_polynomial(n)?.substitute_s(s))
}

fn finite_rational(name: &'static str, value: f64) -> Result<Rational, RecurrenceError> {
    Rational::from_float(value).ok_or(RecurrenceError::BadParameter { name, value })
}

/// All `n+1` real roots `a^(n,i)(b)` of `c_{n+1}(a, b) = 0`, ascending,
/// repeated according to multiplicity. The count is certified by the Sturm
/// isolation; a shortfall is reported, never papered over.
pub fn truncation_roots(n: u32, s: f64, b: f64) -> Result<Vec<f64>, RecurrenceError> {
    if !(s >= 0.0) {
        return Err(RecurrenceError::BadParameter { name: "s", value: s });
    }
    let s_rat = finite_rational("s", s)?;
    let b_rat = finite_rational("b", b)?;
    let slice = build_truncation_polynomial(n, &s_rat)?.substitute_b(&b_rat);
    roots_of_slice(&slice, n)
}

fn roots_of_slice(slice: &RationalPolynomial, n: u32) -> Result<Vec<f64>, RecurrenceError> {
    let coeffs = slice
        .univariate_in_a()
        .expect("b and s substituted out");
    let expected = n as usize + 1;
    debug_assert_eq!(coeffs.len(), expected + 1, "deg_a c_(n+1) = n+1");
    let isolated = sturm::certified_real_roots(&coeffs);
    let found: usize = isolated.iter().map(|(_, m)| m).sum();
    if found != expected {
        return Err(RecurrenceError::RootCountMismatch { expected, found });
    }
    let mut roots = Vec::with_capacity(expected);
    for (value, mult) in isolated {
        for _ in 0..mult {
            roots.push(value);
        }
    }
    Ok(roots)
}

/// Assemble the certified closed-form solution for root index `i` (1-based).
pub fn assemble_polynomial_solution(
    n: u32,
    i: usize,
    s: f64,
    b: f64,
) -> Result<TruncationSolution, RecurrenceError> {
    let roots = truncation_roots(n, s, b)?;
    if i == 0 || i > roots.len() {
        return Err(RecurrenceError::RootIndexOutOfRange {
            i,
            count: roots.len(),
        });
    }
    let a_root = roots[i - 1];
    let w = truncation_energy(n, s, b);
    let count = n as usize + 3;
    let series = series_coefficients_raw(s, a_root, b, w, count);
    let scale = series[..=n as usize]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let defect = series[n as usize + 1]
        .abs()
        .max(series[n as usize + 2].abs())
        / scale;
    debug_assert!(
        defect <= TRUNCATION_TOL,
        "truncation defect {defect:.3e} exceeds tolerance at (n={n}, i={i}, s={s}, b={b})"
    );
    Ok(TruncationSolution {
        n,
        i,
        s,
        b,
        a_root,
        w,
        coeffs: series[..=n as usize].to_vec(),
        truncation_defect: defect,
    })
}

/// One row of a root-curve sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub b: f64,
    /// Branch values `a^(n,1) .. a^(n,n+1)`, matched across rows.
    pub roots: Vec<f64>,
    /// Two branches approached within the matching tolerance at this `b`.
    pub branch_crossing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveSweep {
    pub n: u32,
    pub s: f64,
    pub rows: Vec<CurveRow>,
}

/// Matching tolerance for flagging branch collisions.
const BRANCH_TOL: f64 = 1e-6;

/// Root curves `a^(n,i)(b)` over a `b` grid with branch continuity.
///
/// Roots are real and returned sorted per row; for sorted lists the
/// order-preserving assignment minimizes total displacement, so branch `i`
/// continues through the `i`-th sorted root. Rows where two branches come
/// within [`BRANCH_TOL`] are flagged, not failed.
pub fn curve_sweep(n: u32, s: f64, b_grid: &[f64]) -> Result<CurveSweep, RecurrenceError> {
    if !(s >= 0.0) {
        return Err(RecurrenceError::BadParameter { name: "s", value: s });
    }
    let s_rat = finite_rational("s", s)?;
    let poly_ab = build_truncation_polynomial(n, &s_rat)?;
    let mut rows = Vec::with_capacity(b_grid.len());
    for &b in b_grid {
        let b_rat = finite_rational("b", b)?;
        let slice = poly_ab.substitute_b(&b_rat);
        let roots = roots_of_slice(&slice, n)?;
        let branch_crossing = roots.windows(2).any(|w| (w[1] - w[0]).abs() < BRANCH_TOL);
        rows.push(CurveRow {
            b,
            roots,
            branch_crossing,
        });
    }
    Ok(CurveSweep { n, s, rows })
}

/// Exact evaluation used by the series-consistency checks: the canonical
/// polynomial at numeric `(a, b, s)` as `f64`.
pub fn eval_truncation_polynomial(
    poly: &RationalPolynomial,
    a: f64,
    b: f64,
    s: f64,
) -> Result<f64, RecurrenceError> {
    let a = finite_rational("a", a)?;
    let b = finite_rational("b", b)?;
    let s = finite_rational("s", s)?;
    Ok(sturm::rational_to_f64(&poly.eval(&a, &b, &s)))
}

pub(crate) use poly::{integer, rational};

#[cfg(test)]
mod tests;

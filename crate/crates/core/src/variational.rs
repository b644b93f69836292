//! Rayleigh–Ritz upper-bound solver over the non-orthogonal Gaussian basis
//! `phi_k(x) = x^{s+k} exp(-x^2/2)`, `k = 0..N-1`.
//!
//! All matrix elements reduce to the moments `M(p) = Gamma((p+1)/2)/2` of the
//! weight `x dx`; the symmetric (weak) form
//!
//! ```text
//! <phi, H psi> = Int phi' psi' x dx
//!             + Int (gamma^2/x^2 + a/x + b x + x^2) phi psi x dx
//! ```
//!
//! absorbs the `psi'/x` term exactly and keeps `H` symmetric. A moment whose
//! multiplying coefficient vanishes identically is never evaluated, which is
//! what keeps the would-be `M(-1)` at `s = 0, k = l = 0` out of the picture.
//!
//! The monomial Gram matrix is brutally ill conditioned (2-norm condition
//! ~1e33 at `N = 30` even after diagonal normalization), so the generalized
//! problem `H v = W S v` is reduced in double-double arithmetic: Cholesky of
//! the normalized overlap, congruence transform, then an `f64` symmetric
//! eigensolve of the well-conditioned reduced matrix, followed by a
//! double-double Rayleigh-quotient polish. Eigenvalues come out ascending and
//! reproducible to well below 1e-10; eigenvectors are `S`-normalized.

use crate::ddouble::Dd;
use crate::model::RadialParameters;
use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_BASIS_SIZE: usize = 30;
pub const MIN_BASIS_SIZE: usize = 12;
/// Basis-size step when retrying after an ill-conditioned factorization.
pub const RETRY_STEP: usize = 4;
/// Ceiling on the overlap condition estimate before the solve refuses.
pub const DEFAULT_CONDITION_CEILING: f64 = 1e36;
/// Default central-difference step for Hellmann-Feynman checks.
pub const DEFAULT_HF_STEP: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum VariationalError {
    #[error("moment integral diverges: p = {p} but p > -1 is required")]
    MomentDivergent { p: f64 },
    #[error(
        "overlap factorization failed at basis size {n_basis} \
         (condition estimate {condition_estimate:.3e}); reduce the basis"
    )]
    IllConditioned {
        n_basis: usize,
        condition_estimate: f64,
    },
    #[error("invalid basis: {reason}")]
    BadBasis { reason: String },
}

/// The basis `phi_k(x) = x^{s+k} e^{-x^2/2}`, `k = 0..N-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisSpec {
    s: f64,
    n_basis: usize,
}

impl BasisSpec {
    pub fn new(s: f64, n_basis: usize) -> Result<Self, VariationalError> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(VariationalError::BadBasis {
                reason: format!("leading exponent s = {s} must be finite and >= 0"),
            });
        }
        if n_basis < 1 {
            return Err(VariationalError::BadBasis {
                reason: "basis needs at least one function".into(),
            });
        }
        Ok(Self { s, n_basis })
    }

    /// Default-size basis matching the parameters' exponent.
    pub fn for_params(params: &RadialParameters) -> Self {
        Self {
            s: params.s(),
            n_basis: DEFAULT_BASIS_SIZE,
        }
    }

    pub fn with_size(&self, n_basis: usize) -> Result<Self, VariationalError> {
        Self::new(self.s, n_basis)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn size(&self) -> usize {
        self.n_basis
    }

    /// Evaluate `phi_k(x)`.
    pub fn eval(&self, k: usize, x: f64) -> f64 {
        debug_assert!(k < self.n_basis);
        x.powf(self.s + k as f64) * (-0.5 * x * x).exp()
    }
}

/// `M(p) = Int_0^inf x^p e^{-x^2} dx = Gamma((p+1)/2) / 2`.
pub fn moment(p: f64) -> Result<f64, VariationalError> {
    if !(p > -1.0) {
        return Err(VariationalError::MomentDivergent { p });
    }
    Ok(0.5 * libm::tgamma(0.5 * (p + 1.0)))
}

/// Double-double moment table: entry `t + 1` holds `M(2s + t)`,
/// `t = -1 ..= t_max`.
///
/// Seeds come from the `f64` gamma; the upward ladder
/// `M(p+2) = ((p+1)/2) M(p)` runs in double-double, so each parity class is
/// internally coherent to ~1e-31. A relative seed error then acts as an exact
/// rescaling of the two moment classes, which perturbs the pencil only like a
/// ~1e-16 relative change of `a` and `b` — far below every tolerance in play.
fn moment_table(s: f64, t_max: usize) -> Vec<Dd> {
    let mut m = vec![Dd::ZERO; t_max + 2];
    if s > 0.0 {
        let g = Dd::from_f64(0.5 * libm::tgamma(s)); // M(2s - 1)
        m[0] = g;
        m[2] = g.mul_f64(s); // M(2s + 1) = s M(2s - 1)
    } else {
        // M(-1) diverges and is never read: the skip rule guards it.
        m[0] = Dd::ZERO;
        m[2] = Dd::from_f64(0.5); // M(1) = 1/2 exactly
    }
    m[1] = Dd::from_f64(0.5 * libm::tgamma(s + 0.5)); // M(2s)
    let two_s = Dd::from_f64(2.0 * s);
    for t in 2..=t_max as i64 {
        let half_p_plus_1 = two_s.add_f64((t - 1) as f64).mul_f64(0.5);
        m[(t + 1) as usize] = m[(t - 1) as usize].mul(half_p_plus_1);
    }
    m
}

/// Raw (unnormalized) `H` and `S` in `f64`, mostly for inspection and tests;
/// the solver itself assembles in double-double.
pub fn assemble_matrices(
    params: &RadialParameters,
    basis: &BasisSpec,
) -> Result<(DMatrix<f64>, DMatrix<f64>), VariationalError> {
    let n = basis.size();
    let dd = assemble_dd(params, basis.s(), n, false);
    let h = DMatrix::from_fn(n, n, |k, l| dd.h[k * n + l].to_f64());
    let s = DMatrix::from_fn(n, n, |k, l| dd.s_mat[k * n + l].to_f64());
    Ok((h, s))
}

struct DdPencil {
    n: usize,
    h: Vec<Dd>,
    s_mat: Vec<Dd>,
    /// Diagonal normalizers `d_k = 1/sqrt(S_kk)` (ones when not normalizing).
    norm: Vec<Dd>,
}

fn assemble_dd(params: &RadialParameters, s: f64, n: usize, normalize: bool) -> DdPencil {
    let g2 = params.gamma_sq();
    let a = params.a();
    let b = params.b();
    let t_max = 2 * n + 3;
    let m = moment_table(s, t_max);
    let mom = |t: i64| m[(t + 1) as usize];
    let s_dd = Dd::from_f64(s);
    let norm: Vec<Dd> = if normalize {
        (0..n).map(|k| Dd::ONE.div(mom(2 * k as i64 + 1).sqrt())).collect()
    } else {
        vec![Dd::ONE; n]
    };
    let mut h = vec![Dd::ZERO; n * n];
    let mut s_mat = vec![Dd::ZERO; n * n];
    for k in 0..n {
        for l in k..n {
            let t = (k + l) as i64;
            // ((s+k)(s+l) + gamma^2) M(t-1), skipped when identically zero
            let c_sing = s_dd
                .add_f64(k as f64)
                .mul(s_dd.add_f64(l as f64))
                .add(Dd::from_f64(g2));
            let mut acc = Dd::ZERO;
            if !(c_sing.hi == 0.0 && c_sing.lo == 0.0) {
                acc = acc.add(c_sing.mul(mom(t - 1)));
            }
            let c_mid = Dd::from_f64(2.0 * s).add_f64(t as f64).neg();
            acc = acc.add(c_mid.mul(mom(t + 1)));
            if a != 0.0 {
                acc = acc.add(mom(t).mul_f64(a));
            }
            if b != 0.0 {
                acc = acc.add(mom(t + 2).mul_f64(b));
            }
            acc = acc.add(mom(t + 3).mul_f64(2.0));
            let scale = norm[k].mul(norm[l]);
            let h_kl = acc.mul(scale);
            let s_kl = mom(t + 1).mul(scale);
            h[k * n + l] = h_kl;
            h[l * n + k] = h_kl;
            s_mat[k * n + l] = s_kl;
            s_mat[l * n + k] = s_kl;
        }
    }
    DdPencil { n, h, s_mat, norm }
}

/// Lower Cholesky factor in double-double; `None` on pivot breakdown.
fn cholesky_dd(s_mat: &[Dd], n: usize) -> Option<(Vec<Dd>, f64)> {
    let mut l = vec![Dd::ZERO; n * n];
    let mut diag_min = f64::INFINITY;
    let mut diag_max = 0.0f64;
    for j in 0..n {
        let mut d = s_mat[j * n + j];
        for k in 0..j {
            let v = l[j * n + k];
            d = d.sub(v.mul(v));
        }
        if !(d.hi > 0.0) || !d.is_finite() {
            return None;
        }
        let piv = d.sqrt();
        l[j * n + j] = piv;
        diag_min = diag_min.min(piv.hi);
        diag_max = diag_max.max(piv.hi);
        for i in j + 1..n {
            let mut acc = s_mat[i * n + j];
            for k in 0..j {
                acc = acc.sub(l[i * n + k].mul(l[j * n + k]));
            }
            l[i * n + j] = acc.div(piv);
        }
    }
    let cond_estimate = (diag_max / diag_min).powi(2);
    Some((l, cond_estimate))
}

/// `A = L^-1 H L^-T` via two triangular solves.
fn reduce_dd(h: &[Dd], l: &[Dd], n: usize) -> Vec<Dd> {
    // X = L^-1 H, column by column
    let mut x = vec![Dd::ZERO; n * n];
    for col in 0..n {
        for i in 0..n {
            let mut acc = h[i * n + col];
            for k in 0..i {
                acc = acc.sub(l[i * n + k].mul(x[k * n + col]));
            }
            x[i * n + col] = acc.div(l[i * n + i]);
        }
    }
    // A L^T = X, row by row
    let mut a = vec![Dd::ZERO; n * n];
    for row in 0..n {
        for j in 0..n {
            let mut acc = x[row * n + j];
            for k in 0..j {
                acc = acc.sub(a[row * n + k].mul(l[j * n + k]));
            }
            a[row * n + j] = acc.div(l[j * n + j]);
        }
    }
    a
}

/// Spectrum with `S`-normalized eigenvectors in the raw `phi` basis.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub params: RadialParameters,
    pub basis: BasisSpec,
    /// Ascending `W_0 <= W_1 <= ...`, all `N` Ritz values.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[j]` are the coefficients of state `j` in the raw basis.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `(max Cholesky pivot / min pivot)^2` of the normalized overlap.
    pub condition_estimate: f64,
}

/// Solve `H v = W S v` at the given basis.
pub fn solve(
    params: &RadialParameters,
    basis: &BasisSpec,
) -> Result<SpectrumResult, VariationalError> {
    solve_with_ceiling(params, basis, DEFAULT_CONDITION_CEILING)
}

fn solve_with_ceiling(
    params: &RadialParameters,
    basis: &BasisSpec,
    ceiling: f64,
) -> Result<SpectrumResult, VariationalError> {
    let n = basis.size();
    let pencil = assemble_dd(params, basis.s(), n, true);
    let (l, condition_estimate) =
        cholesky_dd(&pencil.s_mat, n).ok_or(VariationalError::IllConditioned {
            n_basis: n,
            condition_estimate: f64::INFINITY,
        })?;
    if condition_estimate > ceiling {
        return Err(VariationalError::IllConditioned {
            n_basis: n,
            condition_estimate,
        });
    }
    let a_dd = reduce_dd(&pencil.h, &l, n);
    let a_f = DMatrix::from_fn(n, n, |i, j| {
        0.5 * (a_dd[i * n + j].to_f64() + a_dd[j * n + i].to_f64())
    });
    let eig = a_f.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .expect("finite eigenvalues")
    });
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    for &idx in &order {
        let u: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        // double-double Rayleigh quotient: removes the f64 rounding of A
        let u_dd: Vec<Dd> = u.iter().map(|&v| Dd::from_f64(v)).collect();
        let mut num = Dd::ZERO;
        let mut den = Dd::ZERO;
        for i in 0..n {
            let mut row = Dd::ZERO;
            for j in 0..n {
                row = row.add(a_dd[i * n + j].mul(u_dd[j]));
            }
            num = num.add(u_dd[i].mul(row));
            den = den.add(u_dd[i].mul(u_dd[i]));
        }
        pairs.push((num.div(den).to_f64(), u));
    }
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for (w, u) in pairs {
        // back-transform: solve L^T v = u, then S-normalize, then un-scale
        let mut v = vec![Dd::ZERO; n];
        for i in (0..n).rev() {
            let mut acc = Dd::from_f64(u[i]);
            for k in i + 1..n {
                acc = acc.sub(l[k * n + i].mul(v[k]));
            }
            v[i] = acc.div(l[i * n + i]);
        }
        let mut norm_sq = Dd::ZERO;
        for i in 0..n {
            let mut row = Dd::ZERO;
            for j in 0..n {
                row = row.add(pencil.s_mat[i * n + j].mul(v[j]));
            }
            norm_sq = norm_sq.add(v[i].mul(row));
        }
        let inv_norm = Dd::ONE.div(norm_sq.sqrt());
        let mut raw: Vec<f64> = (0..n)
            .map(|i| v[i].mul(inv_norm).mul(pencil.norm[i]).to_f64())
            .collect();
        let lead = raw
            .iter()
            .cloned()
            .max_by(|x, y| x.abs().partial_cmp(&y.abs()).expect("finite"))
            .unwrap_or(0.0);
        if lead < 0.0 {
            for c in &mut raw {
                *c = -*c;
            }
        }
        eigenvalues.push(w);
        eigenvectors.push(raw);
    }
    Ok(SpectrumResult {
        params: *params,
        basis: *basis,
        eigenvalues,
        eigenvectors,
        condition_estimate,
    })
}

/// Configuration for [`solve_with_retry`].
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub n_basis: usize,
    pub condition_ceiling: f64,
    pub retry_step: usize,
    pub min_basis: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            n_basis: DEFAULT_BASIS_SIZE,
            condition_ceiling: DEFAULT_CONDITION_CEILING,
            retry_step: RETRY_STEP,
            min_basis: MIN_BASIS_SIZE,
        }
    }
}

/// Solve, stepping the basis size down on ill-conditioned factorizations.
pub fn solve_with_retry(
    params: &RadialParameters,
    config: &SolveConfig,
) -> Result<SpectrumResult, VariationalError> {
    let mut n = config.n_basis;
    loop {
        let basis = BasisSpec::new(params.s(), n)?;
        match solve_with_ceiling(params, &basis, config.condition_ceiling) {
            Ok(result) => return Ok(result),
            Err(err @ VariationalError::IllConditioned { .. }) => {
                if n <= config.min_basis || n <= config.retry_step {
                    return Err(err);
                }
                n = (n - config.retry_step).max(config.min_basis);
            }
            Err(err) => return Err(err),
        }
    }
}

/// `<1/x>` for state `j`: `v^T M^(-1) v` with `M^(-1)_kl = M(2s+k+l)`.
pub fn expectation_inverse_x(result: &SpectrumResult, level: usize) -> f64 {
    expectation_moment_shift(result, level, 0)
}

/// `<x>` for state `j`: `v^T M^(+1) v` with `M^(+1)_kl = M(2s+k+l+2)`.
pub fn expectation_x(result: &SpectrumResult, level: usize) -> f64 {
    expectation_moment_shift(result, level, 2)
}

fn expectation_moment_shift(result: &SpectrumResult, level: usize, shift: i64) -> f64 {
    assert!(level < result.eigenvalues.len(), "level out of range");
    let n = result.basis.size();
    let m = moment_table(result.basis.s(), 2 * n + 3);
    let mom = |t: i64| m[(t + 1) as usize];
    let v: Vec<Dd> = result.eigenvectors[level]
        .iter()
        .map(|&c| Dd::from_f64(c))
        .collect();
    let mut acc = Dd::ZERO;
    for k in 0..n {
        let mut row = Dd::ZERO;
        for l in 0..n {
            row = row.add(mom((k + l) as i64 + shift).mul(v[l]));
        }
        acc = acc.add(v[k].mul(row));
    }
    acc.to_f64()
}

/// `v^T S v` in the raw basis; 1 for states straight out of [`solve`].
pub fn overlap_norm(result: &SpectrumResult, level: usize) -> f64 {
    assert!(level < result.eigenvalues.len(), "level out of range");
    let n = result.basis.size();
    let m = moment_table(result.basis.s(), 2 * n + 3);
    let v: Vec<Dd> = result.eigenvectors[level]
        .iter()
        .map(|&c| Dd::from_f64(c))
        .collect();
    let mut acc = Dd::ZERO;
    for k in 0..n {
        let mut row = Dd::ZERO;
        for l in 0..n {
            row = row.add(m[k + l + 2].mul(v[l]));
        }
        acc = acc.add(v[k].mul(row));
    }
    acc.to_f64()
}

/// Hellmann-Feynman diagnostics at one parameter point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HellmannFeynmanReport {
    pub dw_da_fd: f64,
    pub mean_inv_x: f64,
    pub defect_a: f64,
    pub dw_db_fd: f64,
    pub mean_x: f64,
    pub defect_b: f64,
}

/// Central finite differences of `W_j` in `a` and `b` against `<1/x>`, `<x>`.
///
/// The step is `h * max(1, |a|)` (resp. `b`), balancing truncation against
/// cancellation at double precision.
pub fn hellmann_feynman_check(
    params: &RadialParameters,
    basis: &BasisSpec,
    level: usize,
    step: f64,
) -> Result<HellmannFeynmanReport, VariationalError> {
    assert!(step > 0.0, "finite-difference step must be positive");
    let center = solve(params, basis)?;
    let mean_inv_x = expectation_inverse_x(&center, level);
    let mean_x = expectation_x(&center, level);
    let shifted = |da: f64, db: f64| -> Result<f64, VariationalError> {
        let p = RadialParameters::new(params.gamma_sq(), params.a() + da, params.b() + db)
            .expect("finite shift of valid parameters");
        Ok(solve(&p, basis)?.eigenvalues[level])
    };
    let ha = step * params.a().abs().max(1.0);
    let hb = step * params.b().abs().max(1.0);
    let dw_da_fd = (shifted(ha, 0.0)? - shifted(-ha, 0.0)?) / (2.0 * ha);
    let dw_db_fd = (shifted(0.0, hb)? - shifted(0.0, -hb)?) / (2.0 * hb);
    Ok(HellmannFeynmanReport {
        dw_da_fd,
        mean_inv_x,
        defect_a: (dw_da_fd - mean_inv_x).abs(),
        dw_db_fd,
        mean_x,
        defect_b: (dw_db_fd - mean_x).abs(),
    })
}

/// One row of an `a`-sweep at fixed `b`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub a: f64,
    /// Lowest `levels` eigenvalues, empty when the point failed.
    pub w: Vec<f64>,
    pub ill_conditioned: bool,
}

/// Eigenvalue curves `W_j(a)` over a grid, per-point failures flagged.
pub fn spectrum_sweep(
    s: f64,
    b: f64,
    a_grid: &[f64],
    levels: usize,
    n_basis: usize,
) -> Result<Vec<SweepRow>, VariationalError> {
    let basis = BasisSpec::new(s, n_basis)?;
    let mut rows = Vec::with_capacity(a_grid.len());
    for &a in a_grid {
        let params = RadialParameters::new(s * s, a, b)
            .expect("sweep grid must be finite; s^2 >= 0");
        match solve(&params, &basis) {
            Ok(res) => rows.push(SweepRow {
                a,
                w: res.eigenvalues[..levels.min(n_basis)].to_vec(),
                ill_conditioned: false,
            }),
            Err(VariationalError::IllConditioned { .. }) => rows.push(SweepRow {
                a,
                w: vec![],
                ill_conditioned: true,
            }),
            Err(err) => return Err(err),
        }
    }
    Ok(rows)
}

//! Solvers for the singular radial oscillator eigenproblem
//!
//! ```text
//! psi''(x) + psi'(x)/x - (gamma^2/x^2) psi - (a/x) psi - b x psi - x^2 psi + W psi = 0,
//! integral |psi|^2 x dx < infinity,
//! ```
//!
//! a conditionally (quasi-exactly) solvable problem: the Frobenius ansatz
//! `psi = x^s exp(-bx/2 - x^2/2) H(x)` truncates to a polynomial only on
//! special manifolds of the parameter plane `(a, b)`, while the true spectrum
//! `W_j(a, b)` exists for every real `a`, `b` and is continuous there.
//!
//! The crate provides
//!
//! * [`recurrence`] — exact construction of the truncation polynomials
//!   `c_{n+1}(a, b)` over the rationals, certified real-root isolation, and
//!   assembly of closed-form polynomial eigenfunctions;
//! * [`variational`] — a Rayleigh–Ritz solver over the non-orthogonal basis
//!   `x^{s+k} e^{-x^2/2}` producing the continuous eigenvalue surfaces,
//!   expectation values and Hellmann–Feynman diagnostics;
//! * [`oracle`] — an independent finite-difference Sturm–Liouville eigensolver
//!   and a closed-form ODE-residual evaluator used to cross-certify both of
//!   the above;
//! * [`physics`] — the two Dirac-oscillator scenarios with Coulomb-type
//!   couplings mapped onto the generic problem, including relativistic
//!   energy solves and frequency scans;
//! * [`cli`] — the `singosc` command-line surface emitting CSV/JSON/SVG
//!   figure data and a machine-readable verification report.

pub mod cli;
mod ddouble;
pub mod model;
pub mod oracle;
pub mod output;
pub mod physics;
pub mod recurrence;
pub mod report;
pub mod variational;

pub use model::{RadialParameters, SpectralPoint};
pub use recurrence::TruncationSolution;
pub use variational::{BasisSpec, SpectrumResult};

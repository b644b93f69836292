//! Certified real-root isolation for exact univariate polynomials.
//!
//! Sturm sequences give exact root counts per interval; Yun's square-free
//! decomposition recovers multiplicities; bisection refines each isolated
//! root far enough that its `f64` rounding is essentially exact. Everything
//! up to the final conversion runs in `BigRational`, so root counts are
//! certificates, not heuristics.

use super::poly::Rational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative interval width at which bisection stops.
const REFINE_REL: f64 = 1e-15;
const MAX_BISECTIONS: usize = 256;

/// Univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn leading(&self) -> &Rational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(vec![]);
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i as i64 + 1)))
                .collect(),
        )
    }

    /// Primitive part with positive leading coefficient; scales by a positive
    /// rational only, so Sturm sign structure is preserved up to the sign fix.
    fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()).abs());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading().is_negative() {
            factor = -factor;
        }
        UniPoly::new(self.coeffs.iter().map(|c| c * &factor).collect())
    }

    fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dn = divisor.coeffs.len();
        if rem.len() < dn {
            return (UniPoly::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dn - 1] / divisor.leading();
            if q.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    fn divide_exact(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Cauchy bound: all real roots lie in (-B, B).
    fn root_bound(&self) -> Rational {
        let lead = self.leading().abs();
        let mut max = Rational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let ratio = c.abs() / &lead;
            if ratio > max {
                max = ratio;
            }
        }
        max + Rational::from_integer(BigInt::from(2))
    }
}

fn gcd(p: &UniPoly, q: &UniPoly) -> UniPoly {
    let mut a = p.primitive();
    let mut b = q.primitive();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.primitive();
    }
    a
}

/// Yun's algorithm: `p = prod f_i^i` with the `f_i` square-free and coprime.
pub(crate) fn squarefree_decomposition(p: &UniPoly) -> Vec<(UniPoly, usize)> {
    let p = p.primitive();
    let dp = p.derivative();
    let g = gcd(&p, &dp);
    if g.degree() == 0 {
        return vec![(p, 1)];
    }
    let mut out = Vec::new();
    let mut w = p.divide_exact(&g).primitive();
    let y = dp.divide_exact(&g);
    let mut z = y.add_scaled(&w.derivative(), -1);
    let mut mult = 1;
    while w.degree() > 0 {
        let gi = gcd(&w, &z);
        if gi.degree() > 0 {
            out.push((gi.clone(), mult));
        }
        w = w.divide_exact(&gi).primitive();
        let y = z.divide_exact(&gi);
        z = y.add_scaled(&w.derivative(), -1);
        mult += 1;
    }
    out
}

impl UniPoly {
    fn add_scaled(&self, other: &UniPoly, factor: i64) -> UniPoly {
        let f = Rational::from_integer(BigInt::from(factor));
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c * &f;
        }
        UniPoly::new(coeffs)
    }
}

struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    fn build(p: &UniPoly) -> Self {
        let mut seq = vec![p.primitive(), p.derivative().primitive()];
        loop {
            let k = seq.len();
            if seq[k - 1].is_zero() {
                seq.pop();
                break;
            }
            if seq[k - 1].degree() == 0 {
                break;
            }
            let (_, r) = seq[k - 2].div_rem(&seq[k - 1]);
            if r.is_zero() {
                break;
            }
            let mut next = r.primitive();
            // primitive() fixed the sign to +lead; restore the negated remainder
            if !r.leading().is_negative() {
                next = UniPoly::new(next.coeffs.iter().map(|c| -c).collect());
            }
            seq.push(next);
        }
        Self { seq }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in `(lo, hi]`.
    fn count_in(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo) - self.variations_at(hi)
    }
}

/// A refined simple root of a square-free factor.
struct IsolatedRoot {
    value: Rational,
}

fn isolate_squarefree(p: &UniPoly) -> Vec<IsolatedRoot> {
    if p.degree() == 0 {
        return vec![];
    }
    let chain = SturmChain::build(p);
    let bound = p.root_bound();
    let lo = -bound.clone();
    let mut stack = vec![(lo.clone(), bound.clone())];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let count = chain.count_in(&lo, &hi);
        match count {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    let mut out: Vec<IsolatedRoot> = isolated
        .into_iter()
        .map(|(lo, hi)| refine(p, &chain, lo, hi))
        .collect();
    out.sort_by(|x, y| x.value.cmp(&y.value));
    out
}

fn refine(p: &UniPoly, chain: &SturmChain, mut lo: Rational, mut hi: Rational) -> IsolatedRoot {
    let two = Rational::from_integer(BigInt::from(2));
    // tolerance: REFINE_REL * max(1, |interval center|)
    let tol_of = |lo: &Rational, hi: &Rational| {
        let center = (lo.abs() + hi.abs()) / &two;
        let scale = if center > Rational::one() {
            center
        } else {
            Rational::one()
        };
        scale * Rational::from_float(REFINE_REL).expect("constant is finite")
    };
    if p.sign_at(&hi) == 0 {
        return IsolatedRoot { value: hi };
    }
    let mut sign_lo = p.sign_at(&lo);
    let sign_hi = p.sign_at(&hi);
    for _ in 0..MAX_BISECTIONS {
        if (&hi - &lo) <= tol_of(&lo, &hi) {
            break;
        }
        let mid = (&lo + &hi) / &two;
        let sign_mid = p.sign_at(&mid);
        if sign_mid == 0 {
            return IsolatedRoot { value: mid };
        }
        if sign_lo != 0 && sign_lo != sign_hi {
            // ordinary sign bisection
            if sign_mid == sign_lo {
                lo = mid;
                sign_lo = sign_mid;
            } else {
                hi = mid;
            }
        } else {
            // endpoint sits on a root of another factor: fall back to counts
            if chain.count_in(&lo, &mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
                sign_lo = sign_mid;
            }
        }
    }
    IsolatedRoot {
        value: (&lo + &hi) / &two,
    }
}

/// All real roots of the polynomial with the given ascending coefficients,
/// as `(value, multiplicity)` sorted ascending.
pub(crate) fn certified_real_roots(coeffs: &[Rational]) -> Vec<(f64, usize)> {
    let p = UniPoly::new(coeffs.to_vec());
    assert!(p.degree() >= 1, "root isolation needs degree >= 1");
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    for (factor, mult) in squarefree_decomposition(&p) {
        for r in isolate_squarefree(&factor) {
            roots.push((r.value, mult));
        }
    }
    roots.sort_by(|x, y| x.0.cmp(&y.0));
    roots
        .into_iter()
        .map(|(v, m)| (rational_to_f64(&v), m))
        .collect()
}

/// Conversion that stays accurate for ratios of huge integers (the built-in
/// `to_f64` overflows to `inf/inf` there).
pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs().to_biguint().expect("abs is non-negative");
    let den = r.denom().abs().to_biguint().expect("denominator positive");
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let take = 96i64;
    let (num_red, num_shift) = reduce_bits(&num, nb, take);
    let (den_red, den_shift) = reduce_bits(&den, db, take);
    let ratio = num_red / den_red;
    let exp = num_shift - den_shift;
    if exp > 1023 {
        return sign * f64::INFINITY;
    }
    if exp < -1074 {
        return 0.0;
    }
    sign * ratio * f64::powi(2.0, exp as i32)
}

fn reduce_bits(v: &BigUint, bits: i64, take: i64) -> (f64, i64) {
    if bits <= take {
        (v.to_f64().expect("small BigUint converts"), 0)
    } else {
        let shift = (bits - take) as u64;
        let top = v >> shift;
        (top.to_f64().expect("reduced BigUint converts"), shift as i64)
    }
}

//! Double-double arithmetic: unevaluated sums `hi + lo` of two `f64`s giving
//! roughly 31 significant digits.
//!
//! The overlap matrix of the monomial Gaussian basis is a Hankel-type Gram
//! matrix whose 2-norm condition number reaches ~1e33 at basis size 30, far
//! beyond what `f64` factorizations survive. The Ritz reduction therefore
//! runs in this type; the classic error-free transformations (Dekker split,
//! two-sum/two-prod) below are enough to carry it. No FMA is used, so results
//! are bit-identical across targets.

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Dekker split: a = hi + lo with hi holding the top 26 bits.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a; // 2^27 + 1
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * rhs);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi, lo }
    }

    /// Long division: three quotient corrections give a fully accurate result.
    #[inline]
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add_f64(q3)
    }

    /// One double-double Newton correction on the `f64` square root.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let err = self.sub(Dd::from_f64(ax).mul(Dd::from_f64(ax)));
        let (hi, lo) = quick_two_sum(ax, err.to_f64() * (x * 0.5));
        Dd { hi, lo }
    }

    #[inline]
    pub fn is_sign_positive(self) -> bool {
        self.hi > 0.0 || (self.hi == 0.0 && self.lo > 0.0)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_preserves_small_terms() {
        let x = Dd::from_f64(1e16).add(Dd::from_f64(1.0));
        let y = x.sub(Dd::from_f64(1e16));
        assert_eq!(y.to_f64(), 1.0);
    }

    #[test]
    fn mul_is_nearly_exact() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60, representable only in dd
        let e = (0.5f64).powi(30);
        let x = Dd::from_f64(1.0).add_f64(e);
        let sq = x.mul(x);
        let expect_lo = (0.5f64).powi(60);
        assert_eq!(sq.hi, 1.0 + (0.5f64).powi(29));
        assert!((sq.lo - expect_lo).abs() < 1e-34);
    }

    #[test]
    fn div_round_trip() {
        let third = Dd::ONE.div(Dd::from_f64(3.0));
        let one = third.mul_f64(3.0);
        assert!((one.sub(Dd::ONE).to_f64()).abs() < 1e-31);
    }

    #[test]
    fn sqrt_squares_back() {
        for v in [2.0, 3.0, 0.7, 1e10, 1e-12] {
            let r = Dd::from_f64(v).sqrt();
            let back = r.mul(r).sub(Dd::from_f64(v));
            assert!(
                back.to_f64().abs() < 1e-29 * v,
                "sqrt({v}) round trip error {}",
                back.to_f64()
            );
        }
    }

    #[test]
    fn comparisons() {
        assert!(Dd::from_f64(2.0).is_sign_positive());
        assert!(!Dd::from_f64(-2.0).is_sign_positive());
        assert!(Dd { hi: 0.0, lo: 1e-40 }.is_sign_positive());
    }
}

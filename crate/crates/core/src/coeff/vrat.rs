//! Rational functions in `v` kept in reduced canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use super::rat::Rat;
use super::vpoly::{dense_divrem, dense_gcd, from_dense, to_dense, VPoly};
use crate::error::{Error, Result};

/// `num / den` with `den` monic (leading coefficient 1), lowest exponent
/// zero, and coprime to `num`. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VRat {
    num: VPoly,
    den: VPoly,
}

impl VRat {
    pub fn zero() -> VRat {
        VRat { num: VPoly::zero(), den: VPoly::one() }
    }

    pub fn one() -> VRat {
        VRat::from_poly(VPoly::one())
    }

    pub fn from_int(n: i64) -> VRat {
        VRat::from_poly(VPoly::from_int(n))
    }

    pub fn from_rat(r: Rat) -> VRat {
        VRat::from_poly(VPoly::constant(r))
    }

    pub fn from_poly(p: VPoly) -> VRat {
        VRat { num: p, den: VPoly::one() }
    }

    /// `v^k`.
    pub fn v_pow(k: i64) -> VRat {
        VRat::from_poly(VPoly::v_pow(k))
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> VRat {
        VRat::from_poly(VPoly::q_pow(k))
    }

    pub fn new(num: VPoly, den: VPoly) -> Result<VRat> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(reduce(num, den))
    }

    pub fn numer(&self) -> &VPoly {
        &self.num
    }

    pub fn denom(&self) -> &VPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a Laurent polynomial, if it is one.
    pub fn as_poly(&self) -> Option<&VPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn checked_div(&self, other: &VRat) -> Result<VRat> {
        if other.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(reduce(&self.num * &other.den, &self.den * &other.num))
    }

    pub fn recip(&self) -> Result<VRat> {
        VRat::one().checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<VRat> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        Ok(VRat {
            num: base.num.pow(e.unsigned_abs() as u32),
            den: base.den.pow(e.unsigned_abs() as u32),
        }
        .renormalized())
    }

    pub fn mul_poly(&self, p: &VPoly) -> VRat {
        if self.den.is_one() {
            return VRat::from_poly(&self.num * p);
        }
        reduce(&self.num * p, self.den.clone())
    }

    /// Evaluates at a rational `v`; `None` if the denominator vanishes or a
    /// fractional power of `v` occurs.
    pub fn eval_v(&self, v: &Rat) -> Option<Rat> {
        let d = self.den.eval_v(v)?;
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval_v(v)? / &d)
    }

    // A product of reduced fractions whose factors were already coprime
    // only needs its leading coefficient and lowest exponent fixed up.
    fn renormalized(self) -> VRat {
        normalize_den(self.num, self.den)
    }
}

fn normalize_den(num: VPoly, den: VPoly) -> VRat {
    let shift = den.min_units().unwrap_or(0);
    let lc = den.leading_coeff().cloned().unwrap_or_else(Rat::one);
    let inv = lc.recip();
    VRat {
        num: num.shift(-shift).scale(&inv),
        den: den.shift(-shift).scale(&inv),
    }
}

fn reduce(num: VPoly, den: VPoly) -> VRat {
    if num.is_zero() {
        return VRat::zero();
    }
    if den.is_monomial() {
        return normalize_den(num, den);
    }
    let nmin = num.min_units().unwrap();
    let dmin = den.min_units().unwrap();
    let n0 = num.shift(-nmin);
    let d0 = den.shift(-dmin);
    // gcd(P(s^g), Q(s^g)) = G(s^g), so compress by the common exponent gcd.
    let mut stride = 0i64;
    for (e, _) in n0.terms().iter().chain(d0.terms()) {
        stride = num_integer::gcd(stride, *e);
    }
    let stride = stride.max(1);
    let nd = to_dense(&n0, stride);
    let dd = to_dense(&d0, stride);
    let g = dense_gcd(&nd, &dd);
    let (n1, d1) = if g.len() > 1 {
        (dense_divrem(&nd, &g).0, dense_divrem(&dd, &g).0)
    } else {
        (nd, dd)
    };
    normalize_den(from_dense(&n1, stride).shift(nmin - dmin), from_dense(&d1, stride))
}

fn add_impl(a: &VRat, b: &VRat) -> VRat {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        let num = &a.num + &b.num;
        if a.den.is_one() {
            return VRat::from_poly(num);
        }
        return reduce(num, a.den.clone());
    }
    reduce(&(&a.num * &b.den) + &(&b.num * &a.den), &a.den * &b.den)
}

fn sub_impl(a: &VRat, b: &VRat) -> VRat {
    add_impl(a, &-b)
}

fn mul_impl(a: &VRat, b: &VRat) -> VRat {
    if a.is_zero() || b.is_zero() {
        return VRat::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return VRat::from_poly(&a.num * &b.num);
    }
    // a monomial factor is a unit, so the other fraction stays reduced
    if b.den.is_one() && b.num.is_monomial() {
        return VRat { num: &a.num * &b.num, den: a.den.clone() };
    }
    if a.den.is_one() && a.num.is_monomial() {
        return VRat { num: &a.num * &b.num, den: b.den.clone() };
    }
    reduce(&a.num * &b.num, &a.den * &b.den)
}

fn div_impl(a: &VRat, b: &VRat) -> VRat {
    a.checked_div(b).expect("division by zero VRat")
}

macro_rules! forward_ops {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&VRat> for &VRat {
            type Output = VRat;
            fn $method(self, rhs: &VRat) -> VRat {
                $imp(self, rhs)
            }
        }
        impl $trait<VRat> for VRat {
            type Output = VRat;
            fn $method(self, rhs: VRat) -> VRat {
                $imp(&self, &rhs)
            }
        }
    };
}

forward_ops!(Add, add, add_impl);
forward_ops!(Sub, sub, sub_impl);
forward_ops!(Mul, mul, mul_impl);
forward_ops!(Div, div, div_impl);

impl Neg for &VRat {
    type Output = VRat;
    fn neg(self) -> VRat {
        VRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for VRat {
    type Output = VRat;
    fn neg(self) -> VRat {
        -&self
    }
}

impl From<VPoly> for VRat {
    fn from(p: VPoly) -> VRat {
        VRat::from_poly(p)
    }
}

impl From<i64> for VRat {
    fn from(n: i64) -> VRat {
        VRat::from_int(n)
    }
}

impl fmt::Display for VRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &VPoly| {
            if p.is_monomial() {
                p.to_string()
            } else {
                format!("({})", p)
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for VRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for VRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: i64) -> VRat {
        VRat::v_pow(k)
    }

    #[test]
    fn difference_of_squares() {
        let a = &v(1) - &v(-1);
        let b = &v(1) + &v(-1);
        assert_eq!(&a * &b, &v(2) - &v(-2));
    }

    #[test]
    fn quotient_reduces_to_laurent() {
        let num = &VRat::q_pow(1) - &VRat::q_pow(-1);
        let den = &v(1) - &v(-1);
        let r = &num / &den;
        assert_eq!(r, &v(1) + &v(-1));
        assert!(r.as_poly().is_some());
    }

    #[test]
    fn zero_plus_x() {
        let z = &VRat::zero() / &(&v(1) + &VRat::one());
        let x = &v(3) / &(&v(1) + &VRat::one());
        assert_eq!(&z + &x, x);
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        assert!(matches!(VRat::one().checked_div(&VRat::zero()), Err(Error::Domain(_))));
        assert!(VRat::new(VPoly::one(), VPoly::zero()).is_err());
    }

    #[test]
    fn canonical_denominator() {
        // (2v^3 + 2v) / (4v^5) -> (1/2 v^-2 + 1/2 v^-4) / 1
        let r = VRat::new(
            &VPoly::monomial(Rat::from_int(2), 12) + &VPoly::monomial(Rat::from_int(2), 4),
            VPoly::monomial(Rat::from_int(4), 20),
        )
        .unwrap();
        assert!(r.denom().is_one());
        // 1/(2v - 2) has monic denominator v - 1
        let s = VRat::new(VPoly::one(), &VPoly::monomial(Rat::from_int(2), 4) - &VPoly::from_int(2)).unwrap();
        assert_eq!(s.denom().leading_coeff(), Some(&Rat::one()));
        assert_eq!(s.denom().min_units(), Some(0));
        assert_eq!(s.to_string(), "1/2/(v - 1)");
    }

    #[test]
    fn eval_matches_rational_arithmetic() {
        let a = &(&v(2) - &VRat::one()) / &(&v(1) + &VRat::from_int(3));
        let b = &v(-1) / &(&v(1) - &VRat::from_int(7));
        for p in [2, 3, 5] {
            let x = Rat::from_int(p);
            let lhs = (&a * &b).eval_v(&x).unwrap();
            let rhs = &a.eval_v(&x).unwrap() * &b.eval_v(&x).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

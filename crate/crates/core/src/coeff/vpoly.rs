//! Laurent polynomials in `v = q^{1/2}` with rational coefficients.
//!
//! Exponents are stored in units of `q^{1/8}` (a quarter of a `v`-power).
//! The realization only ever produces `q^{k/4}` from the oscillator currents
//! and `q^{grade}` with `grade` in `(1/8)Z` from the grading operator, so this
//! unit is fine enough for every coefficient that occurs. Printing still uses
//! `v`, with fractional exponents when needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rat::Rat;

/// Number of stored exponent units per power of `v`.
pub const UNITS_PER_V: i64 = 4;
/// Number of stored exponent units per power of `q`.
pub const UNITS_PER_Q: i64 = 8;

/// Sparse Laurent polynomial. Terms are sorted by exponent, with no zero
/// coefficients, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VPoly {
    terms: Vec<(i64, Rat)>,
}

impl VPoly {
    pub fn zero() -> VPoly {
        VPoly { terms: Vec::new() }
    }

    pub fn one() -> VPoly {
        VPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> VPoly {
        VPoly::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> VPoly {
        VPoly::constant(Rat::from_int(n))
    }

    /// `c * t^units` where `t = q^{1/8}`.
    pub fn monomial(c: Rat, units: i64) -> VPoly {
        if c.is_zero() {
            VPoly::zero()
        } else {
            VPoly { terms: vec![(units, c)] }
        }
    }

    /// `v^k`.
    pub fn v_pow(k: i64) -> VPoly {
        VPoly::monomial(Rat::one(), k * UNITS_PER_V)
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> VPoly {
        VPoly::monomial(Rat::one(), k * UNITS_PER_Q)
    }

    /// `q^{e/8}`, i.e. a raw power of the storage unit.
    pub fn unit_pow(e: i64) -> VPoly {
        VPoly::monomial(Rat::one(), e)
    }

    /// Builds from `(units, coeff)` pairs in any order; duplicates are summed.
    pub fn from_terms(mut terms: Vec<(i64, Rat)>) -> VPoly {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, Rat)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        VPoly { terms: out }
    }

    pub fn terms(&self) -> &[(i64, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The constant value if the polynomial has no `v`-dependence.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn min_units(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_units(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn scale(&self, c: &Rat) -> VPoly {
        if c.is_zero() {
            return VPoly::zero();
        }
        VPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplies by `t^units`.
    pub fn shift(&self, units: i64) -> VPoly {
        VPoly {
            terms: self.terms.iter().map(|(e, x)| (e + units, x.clone())).collect(),
        }
    }

    /// Substitutes `t -> t^{-1}`.
    pub fn bar(&self) -> VPoly {
        let mut terms: Vec<(i64, Rat)> = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        terms.reverse();
        VPoly { terms }
    }

    pub fn pow(&self, e: u32) -> VPoly {
        let mut acc = VPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at `t = q^{1/8}`; `t` must be nonzero.
    pub fn eval_unit(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                t.pow(*e as u32)
            } else {
                t.recip().pow((-e) as u32)
            };
            acc += &(c * &p);
        }
        acc
    }

    /// Evaluates at a rational `v`; fails if a fractional `v`-power occurs.
    pub fn eval_v(&self, v: &Rat) -> Option<Rat> {
        if self.terms.iter().any(|(e, _)| e % UNITS_PER_V != 0) {
            return None;
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let k = e / UNITS_PER_V;
            let p = if k >= 0 { v.pow(k as u32) } else { v.recip().pow((-k) as u32) };
            acc += &(c * &p);
        }
        Some(acc)
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &VPoly, c: &Rat) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let s = &a[i].1 + &(&b[j].1 * c);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        self.terms = out;
    }
}

fn add_impl(a: &VPoly, b: &VPoly) -> VPoly {
    let mut r = a.clone();
    r.add_scaled_assign(b, &Rat::one());
    r
}

fn sub_impl(a: &VPoly, b: &VPoly) -> VPoly {
    let mut r = a.clone();
    r.add_scaled_assign(b, &-Rat::one());
    r
}

fn mul_impl(a: &VPoly, b: &VPoly) -> VPoly {
    if a.is_zero() || b.is_zero() {
        return VPoly::zero();
    }
    if b.terms.len() == 1 {
        let (e, c) = &b.terms[0];
        return VPoly {
            terms: a.terms.iter().map(|(x, y)| (x + e, y * c)).collect(),
        };
    }
    if a.terms.len() == 1 {
        return mul_impl(b, a);
    }
    let mut prods = Vec::with_capacity(a.terms.len() * b.terms.len());
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            prods.push((ea + eb, ca * cb));
        }
    }
    VPoly::from_terms(prods)
}

macro_rules! forward_ops {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&VPoly> for &VPoly {
            type Output = VPoly;
            fn $method(self, rhs: &VPoly) -> VPoly {
                $imp(self, rhs)
            }
        }
        impl $trait<VPoly> for VPoly {
            type Output = VPoly;
            fn $method(self, rhs: VPoly) -> VPoly {
                $imp(&self, &rhs)
            }
        }
    };
}

forward_ops!(Add, add, add_impl);
forward_ops!(Sub, sub, sub_impl);
forward_ops!(Mul, mul, mul_impl);

impl Neg for &VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        VPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for VPoly {
    type Output = VPoly;
    fn neg(self) -> VPoly {
        -&self
    }
}

/// Formats `v^{units/4}` with a reduced fractional exponent.
pub(crate) fn fmt_v_exponent(units: i64) -> String {
    let g = num_integer::gcd(units, UNITS_PER_V);
    let (n, d) = (units / g, UNITS_PER_V / g);
    if d == 1 {
        format!("{}", n)
    } else {
        format!("{}/{}", n, d)
    }
}

impl fmt::Display for VPoly {
    /// Canonical text form, highest power first, e.g. `v^2 - 1/2*v^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if *e == UNITS_PER_V {
                    write!(f, "v")?;
                } else {
                    write!(f, "v^{}", fmt_v_exponent(*e))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---- dense helpers used by the rational-function layer -------------------

/// Dense polynomial over the rationals, index = exponent.
pub(crate) type Dense = Vec<Rat>;

fn trim(p: &mut Dense) {
    while matches!(p.last(), Some(c) if c.is_zero()) {
        p.pop();
    }
}

/// Converts a polynomial with nonnegative exponents to dense form in
/// `s = t^stride`. Every exponent must be divisible by `stride`.
pub(crate) fn to_dense(p: &VPoly, stride: i64) -> Dense {
    let max = p.max_units().unwrap_or(0);
    let mut d = vec![Rat::zero(); (max / stride + 1) as usize];
    for (e, c) in p.terms() {
        debug_assert!(*e >= 0 && e % stride == 0);
        d[(e / stride) as usize] = c.clone();
    }
    trim(&mut d);
    d
}

pub(crate) fn from_dense(d: &Dense, stride: i64) -> VPoly {
    VPoly::from_terms(
        d.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 * stride, c.clone()))
            .collect(),
    )
}

/// Polynomial division with remainder. `b` must be nonzero.
pub(crate) fn dense_divrem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            let t = &coef * bc;
            r[shift + i] -= &t;
        }
        q[shift] = coef;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Monic gcd over the rationals.
pub(crate) fn dense_gcd(a: &Dense, b: &Dense) -> Dense {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = dense_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_canonical() {
        let p = &VPoly::v_pow(2) - &VPoly::v_pow(-2);
        assert_eq!(p.to_string(), "v^2 - v^-2");
        let h = VPoly::monomial(Rat::new(-1, 2), 2);
        assert_eq!(h.to_string(), "-1/2*v^1/2");
        assert_eq!(VPoly::v_pow(1).to_string(), "v");
    }

    #[test]
    fn gcd_of_products() {
        // (s - 1)(s + 2) and (s - 1)(s - 3)
        let a: Dense = vec![Rat::from_int(-2), Rat::from_int(1), Rat::from_int(1)];
        let b: Dense = vec![Rat::from_int(3), Rat::from_int(-4), Rat::from_int(1)];
        let g = dense_gcd(&a, &b);
        assert_eq!(g, vec![Rat::from_int(-1), Rat::from_int(1)]);
    }
}

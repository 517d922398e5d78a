//! Polynomial identities behind the Serre relations, checked by expansion.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::coeff::VRat;

/// Variables `z1, z2, z3, w, a`; only `a` may carry negative exponents.
pub const VARS: [&str; 5] = ["z1", "z2", "z3", "w", "a"];
pub const A: usize = 4;
pub const W: usize = 3;

pub type Exps = [i32; 5];

/// Sparse polynomial over `ℚ(v)` in [`VARS`], sorted by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, VRat>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn constant(c: VRat) -> MPoly {
        MPoly::monomial(c, [0; 5])
    }

    pub fn int(n: i64) -> MPoly {
        MPoly::constant(VRat::from_int(n))
    }

    pub fn monomial(c: VRat, e: Exps) -> MPoly {
        let mut p = MPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn var(i: usize) -> MPoly {
        let mut e = [0; 5];
        e[i] = 1;
        MPoly::monomial(VRat::one(), e)
    }

    pub fn z(i: usize) -> MPoly {
        MPoly::var(i - 1)
    }

    pub fn w() -> MPoly {
        MPoly::var(W)
    }

    /// `a^k`.
    pub fn a_pow(k: i32) -> MPoly {
        let mut e = [0; 5];
        e[A] = k;
        MPoly::monomial(VRat::one(), e)
    }

    fn add_term(&mut self, e: Exps, c: VRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &VRat)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &VRat) -> MPoly {
        let mut out = MPoly::zero();
        for (e, x) in &self.terms {
            out.add_term(*e, x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::int(1), |acc, _| &acc * self)
    }

    /// `σ.z_i = z_{σ(i)}`, with `sigma` a permutation of `0..3`.
    pub fn permute(&self, sigma: [usize; 3]) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut f = *e;
            for i in 0..3 {
                f[sigma[i]] = e[i];
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Substitutes `a ↦ c`.
    pub fn subst_a(&self, c: &VRat) -> MPoly {
        let mut out = MPoly::zero();
        for (e, x) in &self.terms {
            let mut f = *e;
            f[A] = 0;
            out.add_term(f, x * &c.pow(e[A] as i64).expect("nonzero substitution"));
        }
        out
    }

    /// Coefficient of `w^k` as a polynomial in the remaining variables.
    pub fn w_part(&self, k: i32) -> MPoly {
        let mut out = MPoly::zero();
        for (e, x) in self.terms.iter().filter(|(e, _)| e[W] == k) {
            out.add_term(*e, x.clone());
        }
        out
    }

    /// Remainder modulo `a^2 + a + 1`. Since `a^3 ≡ 1`, Laurent exponents
    /// reduce mod 3 before the quadratic step.
    pub fn mod_cyclotomic3(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (e, x) in &self.terms {
            let mut f = *e;
            match e[A].rem_euclid(3) {
                0 | 1 => {
                    f[A] = e[A].rem_euclid(3);
                    out.add_term(f, x.clone());
                }
                _ => {
                    f[A] = 1;
                    out.add_term(f, -x);
                    f[A] = 0;
                    out.add_term(f, -x);
                }
            }
        }
        out
    }
}

impl From<VRat> for MPoly {
    fn from(c: VRat) -> MPoly {
        MPoly::constant(c)
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &-rhs
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&VRat::from_int(-1))
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                let mut g = *e;
                for i in 0..5 {
                    g[i] += f[i];
                }
                out.add_term(g, c * d);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, "*{}", VARS[i])?,
                    _ => write!(f, "*{}^{x}", VARS[i])?,
                }
            }
        }
        Ok(())
    }
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(x - c·y)`.
fn lin(x: &MPoly, c: &MPoly, y: &MPoly) -> MPoly {
    x - &(c * y)
}

pub const S3_PERMS: [([usize; 3], i64); 6] =
    [([0, 1, 2], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 2, 0], 1), ([2, 0, 1], 1)];

/// `Σ_σ sgn(σ) σ.p`.
pub fn antisymmetrize(p: &MPoly) -> MPoly {
    S3_PERMS.iter().fold(MPoly::zero(), |acc, (s, sg)| &acc + &p.permute(*s).scale(&VRat::from_int(*sg)))
}

/// Left minus right side of the two-variable identity, as a polynomial in
/// `z1, z2, w` and the Laurent variable `a`.
pub fn s2_difference() -> MPoly {
    let (z1, z2, w, a) = (MPoly::z(1), MPoly::z(2), MPoly::w(), MPoly::a_pow(1));
    let a_inv = MPoly::a_pow(-1);
    let lhs = &(&lin(&z1, &a, &w) * &lin(&z2, &a, &w)) + &(&(&(&a + &a_inv) * &lin(&z1, &a, &w)) * &lin(&w, &a, &z2));
    let lhs = &lhs + &(&lin(&w, &a, &z1) * &lin(&w, &a, &z2));
    let rhs = &(&(&a_inv - &a) * &w) * &lin(&z1, &a.pow(2), &z2);
    &lhs - &rhs
}

/// `Σ_σ sgn(σ) σ.(z1 - c z2 + a^3 z3) ∏_{i<j}(a z_i - z_j)` with `a` formal.
pub fn s3_polynomial(c: &MPoly) -> MPoly {
    let a = MPoly::a_pow(1);
    let z: Vec<MPoly> = (1..=3).map(MPoly::z).collect();
    let lin3 = &(&z[0] - &(c * &z[1])) + &(&a.pow(3) * &z[2]);
    let mut vdm = MPoly::int(1);
    for i in 0..3 {
        for j in i + 1..3 {
            vdm = &vdm * &(&(&a * &z[i]) - &z[j]);
        }
    }
    antisymmetrize(&(&lin3 * &vdm))
}

/// `a + a^2`, the coefficient in the antisymmetrized identity.
pub fn s3_coefficient() -> MPoly {
    &MPoly::a_pow(1) + &MPoly::a_pow(2)
}

/// `a + a^{-1}`, the coefficient in the simplified bracket.
pub fn bracket_coefficient() -> MPoly {
    &MPoly::a_pow(1) + &MPoly::a_pow(-1)
}

/// `[3]_{a^{1/2}} = a + 1 + a^{-1}`.
fn three() -> MPoly {
    &bracket_coefficient() + &MPoly::int(1)
}

/// The four-term bracket of the `A_ij = -2` Serre computation, with `a = q`.
pub fn cubic_bracket() -> MPoly {
    let a = MPoly::a_pow(1);
    let w = MPoly::w();
    let zq: Vec<MPoly> = (1..=3).map(|i| lin(&MPoly::z(i), &a, &w)).collect();
    let wq: Vec<MPoly> = (1..=3).map(|i| lin(&w, &a, &MPoly::z(i))).collect();
    let t = three();
    let mut out = &(&zq[0] * &zq[1]) * &zq[2];
    out = &out + &(&(&t * &zq[0]) * &(&zq[1] * &wq[2]));
    out = &out + &(&(&t * &zq[0]) * &(&wq[1] * &wq[2]));
    &out + &(&(&wq[0] * &wq[1]) * &wq[2])
}

/// `(a^{-1} - a)(w^2(z1 - c z2 + a^3 z3) + w(z1 z2 - c z1 z3 + a^3 z2 z3))`.
pub fn claimed_simplification(c: &MPoly) -> MPoly {
    let a3 = MPoly::a_pow(3);
    let (z1, z2, z3, w) = (MPoly::z(1), MPoly::z(2), MPoly::z(3), MPoly::w());
    let quad = &(&z1 - &(c * &z2)) + &(&a3 * &z3);
    let lin_ = &(&(&z1 * &z2) - &(&(c * &z1) * &z3)) + &(&(&a3 * &z2) * &z3);
    let inner = &(&w.pow(2) * &quad) + &(&w * &lin_);
    &(&MPoly::a_pow(-1) - &MPoly::a_pow(1)) * &inner
}

/// Outcome of one polynomial identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// Left minus right side; zero when the identity holds.
    pub difference: MPoly,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, difference: MPoly) -> IdentityCheck {
        IdentityCheck { name: name.into(), holds: difference.is_zero(), difference }
    }
}

/// The two-variable identity, generically in `a` and at `a = 1, q^{1/2}, q^{-1}`.
pub fn verify_s2() -> Vec<IdentityCheck> {
    let d = s2_difference();
    vec![
        IdentityCheck::new("S2 generic a", d.clone()),
        IdentityCheck::new("S2 a=1", d.subst_a(&VRat::one())),
        IdentityCheck::new("S2 a=q^1/2", d.subst_a(&VRat::v_pow(1))),
        IdentityCheck::new("S2 a=q^-1", d.subst_a(&VRat::q_pow(-1))),
    ]
}

/// The antisymmetrized cubic identity with `q = a` formal, at `q = 1`, with
/// `q` generic in `ℚ(v)`, and modulo `q^2 + q + 1`.
pub fn verify_s3() -> Vec<IdentityCheck> {
    let p = s3_polynomial(&s3_coefficient());
    vec![
        IdentityCheck::new("S3 generic q", p.clone()),
        IdentityCheck::new("S3 q=1", p.subst_a(&VRat::one())),
        IdentityCheck::new("S3 q in Q(v)", p.subst_a(&VRat::q_pow(1))),
        IdentityCheck::new("S3 mod q^2+q+1", p.mod_cyclotomic3()),
    ]
}

/// Expansion of the four-term bracket against its reference simplification.
#[derive(Clone, Debug, Serialize)]
pub struct CubicReport {
    pub bracket: MPoly,
    /// Bracket minus the reference form with `q + q^{-1}`.
    pub discrepancy_reference: MPoly,
    /// Bracket minus the reference form with `q + q^2`.
    pub discrepancy_s3_coefficient: MPoly,
    pub reference_matches: bool,
    pub s3_coefficient_matches: bool,
    /// `w^0` and `w^3` parts of the bracket vanish.
    pub extreme_w_parts_vanish: bool,
    /// The antisymmetrized identity with `q + q^{-1}` in place of `q + q^2`.
    pub s3_with_reference_coefficient: IdentityCheck,
    pub bracket_at_q1: MPoly,
}

pub fn verify_cubic_simplification() -> CubicReport {
    let b = cubic_bracket();
    let d1 = &b - &claimed_simplification(&bracket_coefficient());
    let d2 = &b - &claimed_simplification(&s3_coefficient());
    CubicReport {
        extreme_w_parts_vanish: b.w_part(0).is_zero() && b.w_part(3).is_zero(),
        bracket_at_q1: b.subst_a(&VRat::one()),
        reference_matches: d1.is_zero(),
        s3_coefficient_matches: d2.is_zero(),
        discrepancy_reference: d1,
        discrepancy_s3_coefficient: d2,
        s3_with_reference_coefficient: IdentityCheck::new("S3 with q+q^-1", s3_polynomial(&bracket_coefficient())),
        bracket: b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_signs_sum_to_zero() {
        assert_eq!(S3_PERMS.iter().map(|p| p.1).sum::<i64>(), 0);
        assert!(antisymmetrize(&MPoly::int(1)).is_zero());
    }

    #[test]
    fn vandermonde_is_antisymmetric() {
        let z: Vec<MPoly> = (1..=3).map(MPoly::z).collect();
        let v = &(&(&z[0] - &z[1]) * &(&z[0] - &z[2])) * &(&z[1] - &z[2]);
        assert_eq!(antisymmetrize(&v), v.scale(&VRat::from_int(6)));
    }

    #[test]
    fn cyclotomic_reduction() {
        // a^2 + a + 1 ≡ 0, a^3 ≡ 1, a^-1 ≡ a^2
        let p = &(&MPoly::a_pow(2) + &MPoly::a_pow(1)) + &MPoly::int(1);
        assert!(p.mod_cyclotomic3().is_zero());
        assert_eq!(MPoly::a_pow(3).mod_cyclotomic3(), MPoly::int(1));
        assert_eq!(MPoly::a_pow(-1).mod_cyclotomic3(), MPoly::a_pow(2).mod_cyclotomic3());
    }

    #[test]
    fn s2_at_one_both_sides_vanish() {
        let (z1, z2, w, one) = (MPoly::z(1), MPoly::z(2), MPoly::w(), MPoly::int(1));
        let lhs = &(&lin(&z1, &one, &w) * &lin(&z2, &one, &w)) + &(&MPoly::int(2) * &(&lin(&z1, &one, &w) * &lin(&w, &one, &z2)));
        let lhs = &lhs + &(&lin(&w, &one, &z1) * &lin(&w, &one, &z2));
        assert!(lhs.is_zero());
    }
}

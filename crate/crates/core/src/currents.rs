//! The currents `Y`, `Z`, `X_{iε}^±` and the assembled `X_i^±(z)`.

use std::fmt;

use serde::Serialize;

use crate::coeff::{q_diff, v_int, VPoly, VRat, UNITS_PER_V};
use crate::error::{Error, Result};
use crate::roots::RootDatum;
use crate::vertex::{CurrentSpec, Factor, FieldKind};

/// `Y_i^±(z)` or `Z_i^±(z)` as a one-factor spec.
pub fn build_current(kind: FieldKind, i: usize, sign: i8) -> CurrentSpec {
    CurrentSpec::new(vec![Factor::new(kind, i, sign, 0)])
}

fn y(i: usize, sign: i8) -> Factor {
    Factor::new(FieldKind::Y, i, sign, 0)
}

fn z(i: usize, sign: i8, shift2: i64) -> Factor {
    Factor::new(FieldKind::Z, i, sign, shift2)
}

/// Argument shifts (in units of `q^{1/2}`) of the two `Z_n^+` factors of
/// `X_{nε}^+`: `q_ε^{1+ε}` and `q_ε^{-1+ε}` with `q_± = q^{1/2}`, `q_0 = q`.
pub fn xn_plus_shifts(eps: i8) -> (i64, i64) {
    match eps {
        1 => (2, 0),
        -1 => (0, -2),
        _ => (2, -2),
    }
}

/// The normal-ordered product `X_{iε}^±(z)`.
///
/// For `(i, sign) = (n, -)` the `ε` label is ignored and the product
/// `:Z_n^-(q^{1/2}z) Z_n^-(q^{-1/2}z) Y_n^-(z):` is returned without its
/// `1/[2]_v` prefactor.
pub fn build_eps_current(datum: &RootDatum, i: usize, sign: i8, eps: i8) -> Result<CurrentSpec> {
    let n = datum.rank();
    if i == 0 || i > n {
        return Err(Error::domain(format!("node {i} outside 1..{n}")));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::domain("sign must be ±1"));
    }
    if !(-1..=1).contains(&eps) {
        return Err(Error::domain("ε must be one of +, 0, -"));
    }
    if eps == 0 && !(i == n && sign == 1) {
        return Err(Error::domain("ε = 0 is only allowed for X_n^+"));
    }
    let e = eps as i64;
    let factors = match (i < n, sign) {
        (true, 1) => vec![z(i, 1, e), z(i + 1, -1, 0), y(i, 1)],
        (true, _) => vec![z(i, -1, 0), z(i + 1, 1, e), y(i, -1)],
        (false, 1) => {
            let (a, b) = xn_plus_shifts(eps);
            vec![z(n, 1, a), z(n, 1, b), y(n, 1)]
        }
        (false, _) => vec![z(n, -1, 1), z(n, -1, -1), y(n, -1)],
    };
    Ok(CurrentSpec::new(factors))
}

/// One summand `coef · z^{zpow} · spec(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    #[serde(serialize_with = "ser_display")]
    pub coef: VPoly,
    pub zpow: i64,
    pub spec: CurrentSpec,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `prefactor · Σ coef · z^{zpow} · spec(z)`.
///
/// The prefactor is kept apart so that summands stay Laurent in `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurrentCombination {
    pub prefactor: VRat,
    pub terms: Vec<Summand>,
}

impl CurrentCombination {
    pub fn single(spec: CurrentSpec) -> CurrentCombination {
        CurrentCombination {
            prefactor: VRat::one(),
            terms: vec![Summand { coef: VPoly::one(), zpow: 0, spec }],
        }
    }

    /// Exponent `e` such that mode `k` of the summand is `[z^e] spec`.
    pub fn spec_exponent(term: &Summand, k: i64) -> i64 {
        -k - 1 - term.zpow
    }
}

impl fmt::Display for CurrentCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * [", self.prefactor)?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) z^{} {}", t.coef, t.zpow, t.spec)?;
        }
        write!(f, "]")
    }
}

/// `X_i^±(z)` as a combination of `X_{iε}^±`.
pub fn assemble_x(datum: &RootDatum, i: usize, sign: i8) -> Result<CurrentCombination> {
    let n = datum.rank();
    let v1 = q_diff(1, UNITS_PER_V);
    let q1 = q_diff(2, UNITS_PER_V);
    let eps = |e: i8| build_eps_current(datum, i, sign, e);
    if i < n {
        let pre = VRat::new(VPoly::one(), v1)?;
        return Ok(CurrentCombination {
            prefactor: pre,
            terms: vec![
                Summand { coef: VPoly::one(), zpow: -1, spec: eps(1)? },
                Summand { coef: VPoly::from_int(-1), zpow: -1, spec: eps(-1)? },
            ],
        });
    }
    if sign == 1 {
        let pre = VRat::new(VPoly::from_int(-1), &q1 * &v1)?;
        return Ok(CurrentCombination {
            prefactor: pre,
            terms: vec![
                Summand { coef: VPoly::v_pow(1), zpow: -2, spec: eps(1)? },
                Summand { coef: VPoly::v_pow(-1), zpow: -2, spec: eps(-1)? },
                Summand { coef: -v_int(2), zpow: -2, spec: eps(0)? },
            ],
        });
    }
    Ok(CurrentCombination {
        prefactor: VRat::new(VPoly::one(), v_int(2))?,
        terms: vec![Summand { coef: VPoly::one(), zpow: 0, spec: eps(1)? }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(n: usize) -> RootDatum {
        RootDatum::new(n).unwrap()
    }

    #[test]
    fn xn_plus_argument_shifts() {
        let d = datum(2);
        let s = build_eps_current(&d, 2, 1, 1).unwrap();
        assert_eq!((s.factors[0].shift2, s.factors[1].shift2), (2, 0));
        let s = build_eps_current(&d, 2, 1, 0).unwrap();
        assert_eq!((s.factors[0].shift2, s.factors[1].shift2), (2, -2));
    }

    #[test]
    fn x1_minus_plus() {
        let d = datum(2);
        let s = build_eps_current(&d, 1, -1, 1).unwrap();
        assert_eq!(s.to_string(), ":Z1-(z) Z2+(q^1/2z) Y1-(z):");
    }

    #[test]
    fn invalid_eps_is_domain_error() {
        let d = datum(2);
        assert!(build_eps_current(&d, 1, 1, 0).is_err());
        assert!(build_eps_current(&d, 2, -1, 0).is_err());
        assert!(build_eps_current(&d, 3, 1, 1).is_err());
    }

    #[test]
    fn summand_counts_and_scalars() {
        let d = datum(2);
        assert_eq!(assemble_x(&d, 1, 1).unwrap().terms.len(), 2);
        let xn = assemble_x(&d, 2, 1).unwrap();
        assert_eq!(xn.terms.len(), 3);
        // -(v X_+ + v^-1 X_- - [2]_v X_0) over the common denominator
        let coefs: Vec<VRat> = xn.terms.iter().map(|t| &xn.prefactor * &VRat::from_poly(t.coef.clone())).collect();
        let common = &(&VRat::q_pow(1) - &VRat::q_pow(-1)) * &(&VRat::v_pow(1) - &VRat::v_pow(-1));
        assert_eq!(&coefs[0] * &common, -VRat::v_pow(1));
        assert_eq!(&coefs[1] * &common, -VRat::v_pow(-1));
        assert_eq!(&coefs[2] * &common, &VRat::v_pow(1) + &VRat::v_pow(-1));
        assert_eq!(assemble_x(&d, 2, -1).unwrap().terms.len(), 1);
    }

    #[test]
    fn lattice_shift_of_x() {
        let d = datum(2);
        let s = build_eps_current(&d, 2, -1, 1).unwrap();
        assert_eq!(s.lattice_shift(2), (vec![0, -1], vec![0, -2]));
        let s = build_eps_current(&d, 1, 1, -1).unwrap();
        assert_eq!(s.lattice_shift(2), (vec![1, 0], vec![1, -1]));
    }
}

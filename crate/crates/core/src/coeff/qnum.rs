//! Quantum integers, brackets and Gaussian binomials.

use super::rat::Rat;
use super::vpoly::{VPoly, UNITS_PER_Q, UNITS_PER_V};
use super::vrat::VRat;
use crate::error::{Error, Result};
use crate::roots::RootDatum;

/// Storage units of `q^x` when `x` has denominator dividing 8.
pub fn q_units(x: &Rat) -> Option<i64> {
    let y = x * &Rat::from_int(UNITS_PER_Q);
    y.to_i64()
}

/// `[k]` in the base `b = t^step`, i.e. `(b^k - b^-k)/(b - b^-1)`, which is
/// a Laurent polynomial for every integer `k`.
pub fn q_int(k: i64, step: i64) -> VPoly {
    if k < 0 {
        return -q_int(-k, step);
    }
    VPoly::from_terms((0..k).map(|j| (step * (k - 1 - 2 * j), Rat::one())).collect())
}

/// `[k]_v`.
pub fn v_int(k: i64) -> VPoly {
    q_int(k, UNITS_PER_V)
}

/// `b^k - b^-k` for `b = t^step`.
pub fn q_diff(k: i64, step: i64) -> VPoly {
    &VPoly::unit_pow(k * step) - &VPoly::unit_pow(-k * step)
}

/// `[x]_i = (q_i^x - q_i^-x)/(q_i - q_i^-1)` for half-integral `x`.
///
/// Fails unless `q_i^x` is an integral power of `v`.
pub fn q_bracket(x: &Rat, i: usize, datum: &RootDatum) -> Result<VRat> {
    let d2 = datum.d2(i);
    let ev = x * &Rat::from_int(d2);
    let ev = ev
        .to_i64()
        .ok_or_else(|| Error::domain(format!("q_{i}^({x}) is not an integral power of v")))?;
    let num = q_diff(ev, UNITS_PER_V);
    let den = q_diff(d2, UNITS_PER_V);
    VRat::new(num, den)
}

/// Gaussian binomial `[m r]_i` in `q_i`, symmetric in `r ↔ m - r`.
pub fn q_binomial(m: u32, r: u32, i: usize, datum: &RootDatum) -> Result<VRat> {
    if r > m {
        return Err(Error::domain(format!("binomial with r = {r} > m = {m}")));
    }
    Ok(VRat::from_poly(gauss_binomial(m, r, datum.d2(i) * UNITS_PER_V)))
}

/// `[m r]` in the base `b = t^step`, by the q-Pascal rule
/// `[m r] = b^(m-r) [m-1 r-1] + b^-r [m-1 r]`.
pub fn gauss_binomial(m: u32, r: u32, step: i64) -> VPoly {
    let mut row = vec![VPoly::one()];
    for mm in 1..=m {
        let mut next = Vec::with_capacity(mm as usize + 1);
        for rr in 0..=mm {
            let mut c = VPoly::zero();
            if rr >= 1 {
                c = &c + &row[rr as usize - 1].shift(step * (mm - rr) as i64);
            }
            if rr < mm {
                c = &c + &row[rr as usize].shift(-step * rr as i64);
            }
            next.push(c);
        }
        row = next;
    }
    row[r as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: i64) -> VPoly {
        VPoly::v_pow(k)
    }

    #[test]
    fn bracket_two() {
        let d = RootDatum::new(2).unwrap();
        let two = Rat::from_int(2);
        assert_eq!(q_bracket(&two, 1, &d).unwrap(), VRat::from_poly(&v(1) + &v(-1)));
        assert_eq!(q_bracket(&two, 2, &d).unwrap(), VRat::from_poly(&v(2) + &v(-2)));
    }

    #[test]
    fn bracket_half_integer() {
        let d = RootDatum::new(2).unwrap();
        let x = Rat::new(-3, 2);
        let expected = VRat::new(-&(&v(3) - &v(-3)), &v(2) - &v(-2)).unwrap();
        assert_eq!(q_bracket(&x, 2, &d).unwrap(), expected);
        // q_1^(1/4) = v^(1/4) is not an integral power of v
        assert!(matches!(q_bracket(&Rat::new(1, 4), 1, &d), Err(Error::Domain(_))));
    }

    #[test]
    fn binomials() {
        let d = RootDatum::new(2).unwrap();
        assert_eq!(q_binomial(2, 1, 1, &d).unwrap(), VRat::from_poly(&v(1) + &v(-1)));
        assert_eq!(q_binomial(3, 0, 2, &d).unwrap(), VRat::one());
        let three = &(&v(2) + &VPoly::one()) + &v(-2);
        assert_eq!(q_binomial(3, 1, 1, &d).unwrap(), VRat::from_poly(three));
        assert!(q_binomial(2, 3, 1, &d).is_err());
        for m in 0..6 {
            for r in 0..=m {
                assert_eq!(q_binomial(m, r, 2, &d).unwrap(), q_binomial(m, m - r, 2, &d).unwrap());
            }
        }
    }

    #[test]
    fn q_int_matches_quotient() {
        for k in -4..=4 {
            let lhs = VRat::from_poly(q_int(k, 4));
            let rhs = VRat::new(q_diff(k, 4), q_diff(1, 4)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

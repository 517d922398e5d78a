//! Root data of type C_n^(1): Cartan matrix, weight lattice and bilinear form.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::coeff::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootDatum {
    n: usize,
    cartan: Vec<Vec<i64>>,
    /// `2 d_i` for `i = 0..=n`.
    d2: Vec<i64>,
}

/// Builds the generalized Cartan matrix of type C_n^(1) on nodes `0..=n`.
pub fn cartan_matrix(n: usize) -> Result<RootDatum> {
    RootDatum::new(n)
}

impl RootDatum {
    pub fn new(n: usize) -> Result<RootDatum> {
        if n < 1 {
            return Err(Error::domain("rank must be at least 1"));
        }
        let m = n + 1;
        let mut a = vec![vec![0i64; m]; m];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for i in 0..n {
            a[i][i + 1] -= 1;
            a[i + 1][i] -= 1;
        }
        a[1][0] -= 1;
        a[n - 1][n] -= 1;
        let mut d2 = vec![1i64; m];
        d2[0] = 2;
        d2[n] = 2;
        Ok(RootDatum { n, cartan: a, d2 })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    /// `d_i` as a rational.
    pub fn d(&self, i: usize) -> Rat {
        Rat::new(self.d2[i], 2)
    }

    /// `2 d_i`, the exponent of `v` in `q_i`.
    pub fn d2(&self, i: usize) -> i64 {
        self.d2[i]
    }

    /// Simple root `α_i`, `1 <= i <= n`.
    pub fn alpha(&self, i: usize) -> WeightVec {
        assert!((1..=self.n).contains(&i), "node out of range");
        let mut w = WeightVec::zero(self.n);
        if i < self.n {
            w.0[i - 1] = 2;
            w.0[i] = -2;
        } else {
            w.0[i - 1] = 4;
        }
        w
    }

    /// `ε_i`, `1 <= i <= n`.
    pub fn epsilon(&self, i: usize) -> WeightVec {
        let mut w = WeightVec::zero(self.n);
        w.0[i - 1] = 2;
        w
    }

    /// Fundamental weight `λ_i = ε_1 + ... + ε_i`.
    pub fn lambda(&self, i: usize) -> WeightVec {
        let mut w = WeightVec::zero(self.n);
        for k in 0..i {
            w.0[k] = 2;
        }
        w
    }

    /// `(α_i|α_j)` as a rational, via the form.
    pub fn alpha_pair(&self, i: usize, j: usize) -> Rat {
        bilinear(&self.alpha(i), &self.alpha(j))
    }

    /// `i ↦ (α_i|α)` for `i = 1..=n` (index 0 of the result is node 1).
    pub fn classical_weight(&self, alpha: &WeightVec) -> Vec<Rat> {
        (1..=self.n).map(|i| bilinear(&self.alpha(i), alpha)).collect()
    }
}

/// A vector in the ε-basis, stored with every coordinate doubled.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightVec(pub Vec<i64>);

impl WeightVec {
    pub fn zero(n: usize) -> WeightVec {
        WeightVec(vec![0; n])
    }

    /// From integer ε-coordinates.
    pub fn from_coords(c: &[i64]) -> WeightVec {
        WeightVec(c.iter().map(|x| 2 * x).collect())
    }

    pub fn doubled(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, k: i64) -> WeightVec {
        WeightVec(self.0.iter().map(|x| x * k).collect())
    }

    /// Halves the vector; fails on odd doubled coordinates.
    pub fn half(&self) -> Option<WeightVec> {
        if self.0.iter().all(|x| x % 2 == 0) {
            Some(WeightVec(self.0.iter().map(|x| x / 2).collect()))
        } else {
            None
        }
    }

    /// Integer ε-coordinates, when the vector lies in `P`.
    pub fn coords(&self) -> Option<Vec<i64>> {
        if self.in_p() {
            Some(self.0.iter().map(|x| x / 2).collect())
        } else {
            None
        }
    }

    pub fn in_p(&self) -> bool {
        self.0.iter().all(|x| x % 2 == 0)
    }

    /// Membership in `P + (Z/2) λ_n`: all coordinates integral, or all
    /// strictly half-integral.
    pub fn in_extended_p(&self) -> bool {
        self.in_p() || self.0.iter().all(|x| x.rem_euclid(2) == 1)
    }

    /// Membership in the root lattice `Q` (integral with even sum).
    pub fn in_q(&self) -> bool {
        self.in_p() && (self.0.iter().sum::<i64>() / 2) % 2 == 0
    }
}

/// `(u|w)` with `(ε_i|ε_j) = δ_ij / 2`.
pub fn bilinear(u: &WeightVec, w: &WeightVec) -> Rat {
    let s: i64 = u.0.iter().zip(&w.0).map(|(a, b)| a * b).sum();
    Rat::new(s, 8)
}

impl Add for &WeightVec {
    type Output = WeightVec;
    fn add(self, o: &WeightVec) -> WeightVec {
        WeightVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &WeightVec {
    type Output = WeightVec;
    fn sub(self, o: &WeightVec) -> WeightVec {
        WeightVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &WeightVec {
    type Output = WeightVec;
    fn neg(self) -> WeightVec {
        WeightVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for WeightVec {
    /// ε-coordinates, e.g. `(1, -1/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if x % 2 == 0 {
                write!(f, "{}", x / 2)?;
            } else {
                write!(f, "{}/2", x)?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Σ c_i Λ_i + c_δ δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineWeight {
    pub lambda: Vec<Rat>,
    pub delta: Rat,
}

impl AffineWeight {
    /// Value on the canonical central element; the dual Kac labels of
    /// C_n^(1) are all 1.
    pub fn level(&self) -> Rat {
        self.lambda.iter().fold(Rat::zero(), |acc, c| &acc + c)
    }

    /// The expected `K_i` exponent `(α_i|α) = d_i ⟨μ, α_i^∨⟩`, for `i = 1..=n`.
    pub fn k_exponents(&self, datum: &RootDatum) -> Vec<Rat> {
        (1..=datum.rank()).map(|i| &datum.d(i) * &self.lambda[i]).collect()
    }

    /// The four highest weights `μ_1..μ_4` at level -1/2.
    pub fn highest_weight(index: usize, n: usize) -> Result<AffineWeight> {
        let mut lambda = vec![Rat::zero(); n + 1];
        let delta;
        match index {
            1 => {
                lambda[0] = Rat::new(-1, 2);
                delta = Rat::zero();
            }
            2 => {
                lambda[0] = Rat::new(-3, 2);
                lambda[1] = &lambda[1] + &Rat::one();
                delta = Rat::new(-1, 2);
            }
            3 => {
                lambda[n] = Rat::new(-1, 2);
                delta = Rat::new(n as i64, 8);
            }
            4 => {
                lambda[n - 1] = &lambda[n - 1] + &Rat::one();
                lambda[n] = &lambda[n] + &Rat::new(-3, 2);
                delta = Rat::new(n as i64, 8);
            }
            _ => return Err(Error::domain("highest weight index must be 1..4")),
        }
        Ok(AffineWeight { lambda, delta })
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.lambda.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})L{}", c, i)?;
            first = false;
        }
        if !self.delta.is_zero() || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})d", self.delta)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_rank_two() {
        let d = RootDatum::new(2).unwrap();
        assert_eq!(d.cartan(), &[vec![2, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]]);
    }

    #[test]
    fn cartan_rank_one() {
        let d = RootDatum::new(1).unwrap();
        assert_eq!(d.cartan(), &[vec![2, -2], vec![-2, 2]]);
        assert_eq!(d.d(1), Rat::one());
    }

    #[test]
    fn rank_zero_rejected() {
        assert!(matches!(RootDatum::new(0), Err(Error::Domain(_))));
    }

    #[test]
    fn symmetrizable() {
        for n in 1..=5 {
            let d = RootDatum::new(n).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    assert_eq!(
                        &d.d(i) * &Rat::from_int(d.a(i, j)),
                        &d.d(j) * &Rat::from_int(d.a(j, i))
                    );
                }
            }
        }
    }

    #[test]
    fn form_matches_cartan() {
        for n in 1..=4 {
            let d = RootDatum::new(n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    assert_eq!(d.alpha_pair(i, j), &d.d(i) * &Rat::from_int(d.a(i, j)));
                }
                let expected = if i < n { 1 } else { 2 };
                assert_eq!(d.alpha_pair(i, i), Rat::from_int(expected));
            }
        }
    }

    #[test]
    fn form_values() {
        let d = RootDatum::new(2).unwrap();
        assert_eq!(bilinear(&d.epsilon(1), &d.epsilon(1)), Rat::new(1, 2));
        assert_eq!(d.alpha_pair(1, 2), Rat::from_int(-1));
        for n in 1..=4 {
            let d = RootDatum::new(n).unwrap();
            assert_eq!(bilinear(&d.lambda(n), &d.lambda(n)), Rat::new(n as i64, 2));
        }
    }

    #[test]
    fn classical_weights() {
        let d = RootDatum::new(3).unwrap();
        assert!(d.classical_weight(&WeightVec::zero(3)).iter().all(Rat::is_zero));
        assert_eq!(d.classical_weight(&d.lambda(1))[0], Rat::new(1, 2));
        let half = WeightVec(vec![-1, -1, -1]);
        assert_eq!(d.classical_weight(&half)[2], Rat::new(-1, 2));
    }

    #[test]
    fn highest_weight_levels() {
        for n in 1..=4 {
            for idx in 1..=4 {
                let mu = AffineWeight::highest_weight(idx, n).unwrap();
                assert_eq!(mu.level(), Rat::new(-1, 2), "mu_{idx} at n={n}");
            }
        }
    }
}

//! Truncated two-variable Laurent expansions of contraction factors.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::vrat::VRat;

/// Coefficients of a Laurent series in a few named variables, known only
/// inside a box of exponents. Inside the box, absent keys are zero.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct LaurentWindow {
    vars: Vec<String>,
    bounds: Vec<(i64, i64)>,
    coeffs: BTreeMap<Vec<i64>, VRat>,
}

impl LaurentWindow {
    pub fn new(vars: &[&str], bounds: Vec<(i64, i64)>) -> LaurentWindow {
        assert_eq!(vars.len(), bounds.len());
        LaurentWindow {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            bounds,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.bounds
    }

    pub fn in_window(&self, exps: &[i64]) -> bool {
        exps.len() == self.bounds.len()
            && exps.iter().zip(&self.bounds).all(|(e, (lo, hi))| lo <= e && e <= hi)
    }

    /// The coefficient at `exps`, or `None` outside the window.
    pub fn get(&self, exps: &[i64]) -> Option<VRat> {
        if !self.in_window(exps) {
            return None;
        }
        Some(self.coeffs.get(exps).cloned().unwrap_or_else(VRat::zero))
    }

    /// Adds `c` at `exps`; entries outside the window are dropped.
    pub fn add(&mut self, exps: Vec<i64>, c: &VRat) {
        if c.is_zero() || !self.in_window(&exps) {
            return;
        }
        let slot = self.coeffs.entry(exps.clone()).or_insert_with(VRat::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.coeffs.remove(&exps);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<i64>, &VRat)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &VRat) -> LaurentWindow {
        let mut out = LaurentWindow { coeffs: BTreeMap::new(), ..self.clone() };
        for (k, x) in &self.coeffs {
            out.add(k.clone(), &(x * c));
        }
        out
    }
}

impl fmt::Display for LaurentWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (idx, (exps, c)) in self.coeffs.iter().rev().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            for (v, e) in self.vars.iter().zip(exps) {
                if *e != 0 {
                    write!(f, "*{}^{}", v, e)?;
                }
            }
        }
        write!(f, " [window")?;
        for (v, (lo, hi)) in self.vars.iter().zip(&self.bounds) {
            write!(f, " {}:{}..{}", v, lo, hi)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LaurentWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binomial coefficient `C(a, k)` for integer `a` (possibly negative).
fn gen_binomial(a: i64, k: i64) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..k {
        num *= (a - j) as i128;
        den *= (j + 1) as i128;
    }
    (num / den) as i64
}

/// Expands `Π (z - c w)^e` as a series in `w/z`.
///
/// Each factor is written `z^e (1 - c w/z)^e`; negative powers are expanded
/// geometrically. The result is known up to `(w/z)^order`, or exactly when
/// every exponent is positive.
pub fn expand_contraction(factors: &[(VRat, i64)], order: usize) -> LaurentWindow {
    expand_contraction_scaled(&VRat::one(), factors, order)
}

/// `scalar * Π (z - c w)^e`, expanded as in [`expand_contraction`].
pub fn expand_contraction_scaled(scalar: &VRat, factors: &[(VRat, i64)], order: usize) -> LaurentWindow {
    let total: i64 = factors.iter().map(|f| f.1).sum();
    let exact = factors.iter().all(|f| f.1 >= 0);
    let top = if exact {
        factors.iter().map(|f| f.1).sum::<i64>() as usize
    } else {
        order
    };
    // series in u = w/z
    let mut series = vec![VRat::zero(); top + 1];
    series[0] = scalar.clone();
    for (c, e) in factors {
        let terms = if *e >= 0 { (*e as usize).min(top) } else { top };
        let mut f = Vec::with_capacity(terms + 1);
        let mut cpow = VRat::one();
        for k in 0..=terms {
            let b = gen_binomial(*e, k as i64) * if k % 2 == 0 { 1 } else { -1 };
            f.push(&cpow * &VRat::from_int(b));
            cpow = &cpow * c;
        }
        let mut next = vec![VRat::zero(); top + 1];
        for (i, a) in series.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in f.iter().enumerate() {
                if i + j > top {
                    break;
                }
                next[i + j] = &next[i + j] + &(a * b);
            }
        }
        series = next;
    }
    let top = top as i64;
    let mut w = LaurentWindow::new(&["z", "w"], vec![(total - top, total), (0, top)]);
    for (j, c) in series.iter().enumerate() {
        let j = j as i64;
        w.add(vec![total - j, j], c);
    }
    w
}

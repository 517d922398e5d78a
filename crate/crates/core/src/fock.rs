//! Charge sectors, oscillator basis states and the grading.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::coeff::{Rat, VPoly, VRat};
use crate::error::{Error, Result};
use crate::roots::{bilinear, RootDatum, WeightVec};

/// The lattice labels `(α, β)` of a vacuum `|α, β⟩`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChargeSector {
    pub alpha: WeightVec,
    pub beta: WeightVec,
}

impl ChargeSector {
    pub fn new(alpha: WeightVec, beta: WeightVec) -> Result<ChargeSector> {
        if alpha.len() != beta.len() {
            return Err(Error::domain("α and β have different ranks"));
        }
        if !alpha.in_extended_p() {
            return Err(Error::domain(format!("α = {alpha} is not in P + (Z/2)λ_n")));
        }
        if !beta.in_p() {
            return Err(Error::domain(format!("β = {beta} is not in P")));
        }
        Ok(ChargeSector { alpha, beta })
    }

    pub fn origin(n: usize) -> ChargeSector {
        ChargeSector { alpha: WeightVec::zero(n), beta: WeightVec::zero(n) }
    }

    pub fn rank(&self) -> usize {
        self.alpha.len()
    }

    /// Eigenvalue `(α_i|α)` of `a_i(0)`.
    pub fn a0(&self, datum: &RootDatum, i: usize) -> Rat {
        bilinear(&datum.alpha(i), &self.alpha)
    }

    /// Eigenvalue `(2ε_i|β)` of `b_i(0)`; always an integer.
    pub fn b0(&self, i: usize) -> i64 {
        self.beta.0[i - 1] / 2
    }

    /// `(α|α) - (β|β - λ_n)`.
    pub fn vacuum_grade(&self) -> Rat {
        let n = self.rank();
        let lam = WeightVec(vec![2; n]);
        &bilinear(&self.alpha, &self.alpha) - &bilinear(&self.beta, &(&self.beta - &lam))
    }

    pub fn shifted(&self, d_alpha: &WeightVec, d_beta: &WeightVec) -> ChargeSector {
        ChargeSector { alpha: &self.alpha + d_alpha, beta: &self.beta + d_beta }
    }
}

impl fmt::Display for ChargeSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}, {}>", self.alpha, self.beta)
    }
}

impl fmt::Debug for ChargeSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
}

/// A creation oscillator `a_i(-m)` or `b_i(-m)`, packed so that sorting the
/// codes gives the basis order: `a` before `b`, node ascending, mode
/// descending.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Osc(u32);

impl Osc {
    pub fn new(family: Family, node: usize, mode: u32) -> Osc {
        assert!(mode >= 1 && mode < 0xFFFF && node < 128);
        let f = (family as u32) * 128 + node as u32;
        Osc((f << 16) | (0xFFFF - mode))
    }

    pub fn a(node: usize, mode: u32) -> Osc {
        Osc::new(Family::A, node, mode)
    }

    pub fn b(node: usize, mode: u32) -> Osc {
        Osc::new(Family::B, node, mode)
    }

    pub fn family(self) -> Family {
        if (self.0 >> 16) >= 128 {
            Family::B
        } else {
            Family::A
        }
    }

    pub fn node(self) -> usize {
        ((self.0 >> 16) % 128) as usize
    }

    pub fn mode(self) -> u32 {
        0xFFFF - (self.0 & 0xFFFF)
    }

    /// The `(family, node)` pair as a single key.
    pub fn slot(self) -> u32 {
        self.0 >> 16
    }
}

impl fmt::Display for Osc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family() {
            Family::A => 'a',
            Family::B => 'b',
        };
        write!(f, "{}{}(-{})", c, self.node(), self.mode())
    }
}

impl fmt::Debug for Osc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A sorted multiset of creation oscillators.
pub type Mono = Vec<Osc>;

pub fn mono_degree(m: &[Osc]) -> u32 {
    m.iter().map(|o| o.mode()).sum()
}

/// Product of two sorted multisets.
pub fn mono_mul(a: &[Osc], b: &[Osc]) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A PBW monomial of creation oscillators applied to a vacuum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasisState {
    pub sector: ChargeSector,
    pub modes: Mono,
}

impl FockBasisState {
    pub fn vacuum(sector: ChargeSector) -> FockBasisState {
        FockBasisState { sector, modes: Vec::new() }
    }

    pub fn new(sector: ChargeSector, mut modes: Mono) -> FockBasisState {
        modes.sort();
        FockBasisState { sector, modes }
    }

    pub fn degree(&self) -> u32 {
        mono_degree(&self.modes)
    }

    pub fn with(&self, osc: Osc) -> FockBasisState {
        FockBasisState { sector: self.sector.clone(), modes: mono_mul(&self.modes, &[osc]) }
    }

    fn modes_of(&self, family: Family, node: usize) -> Vec<u32> {
        self.modes
            .iter()
            .filter(|o| o.family() == family && o.node() == node)
            .map(|o| o.mode())
            .collect()
    }

    /// Modes `m` of the `a_i(-m)` factors, descending.
    pub fn a_modes(&self, node: usize) -> Vec<u32> {
        self.modes_of(Family::A, node)
    }

    /// Modes `m` of the `b_i(-m)` factors, descending.
    pub fn b_modes(&self, node: usize) -> Vec<u32> {
        self.modes_of(Family::B, node)
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.modes {
            write!(f, "{} ", o)?;
        }
        write!(f, "{}", self.sector)
    }
}

impl fmt::Debug for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for FockBasisState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `d` eigenvalue of a basis state.
pub fn grade(state: &FockBasisState) -> Rat {
    &state.sector.vacuum_grade() - &Rat::from_int(state.degree() as i64)
}

/// All monomials of exact degree `deg` in the given oscillator slots.
pub fn monomials_of_degree(slots: &[(Family, usize)], deg: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(slots, 0, deg, deg, &mut cur, &mut out);
    for m in out.iter_mut() {
        m.sort();
    }
    out.sort();
    out
}

// Chooses partitions slot by slot: modes within a slot are non-increasing.
fn fill(slots: &[(Family, usize)], slot: usize, left: u32, cap: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    if slot == slots.len() {
        return;
    }
    fill(slots, slot + 1, left, left.max(1), cur, out);
    let (fam, node) = slots[slot];
    for m in (1..=cap.min(left)).rev() {
        cur.push(Osc::new(fam, node, m));
        let next_left = left - m;
        if next_left == 0 {
            out.push(cur.clone());
        } else {
            fill(slots, slot, next_left, m, cur, out);
        }
        cur.pop();
    }
}

/// All `2n` oscillator slots.
pub fn all_slots(n: usize) -> Vec<(Family, usize)> {
    let mut v: Vec<_> = (1..=n).map(|i| (Family::A, i)).collect();
    v.extend((1..=n).map(|i| (Family::B, i)));
    v
}

/// Basis states of degree exactly `deg` in `sector`.
pub fn basis_of_degree(sector: &ChargeSector, deg: u32) -> Vec<FockBasisState> {
    monomials_of_degree(&all_slots(sector.rank()), deg)
        .into_iter()
        .map(|m| FockBasisState { sector: sector.clone(), modes: m })
        .collect()
}

/// All basis states of degree `<= max_degree`, in sorted order.
pub fn enumerate_basis(sector: &ChargeSector, max_degree: u32) -> Vec<FockBasisState> {
    let mut v: Vec<FockBasisState> = (0..=max_degree).flat_map(|d| basis_of_degree(sector, d)).collect();
    v.sort();
    v
}

/// Ring operations needed by [`Vector`].
pub trait Coeff: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl Coeff for VRat {
    fn zero() -> Self {
        VRat::zero()
    }
    fn one() -> Self {
        VRat::one()
    }
    fn is_zero(&self) -> bool {
        VRat::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Coeff for VPoly {
    fn zero() -> Self {
        VPoly::zero()
    }
    fn one() -> Self {
        VPoly::one()
    }
    fn is_zero(&self) -> bool {
        VPoly::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// A finite linear combination of basis states. No zero coefficients are
/// stored, so structural equality is value equality.
#[derive(Clone, PartialEq)]
pub struct Vector<C> {
    terms: BTreeMap<FockBasisState, C>,
}

pub type FockVector = Vector<VRat>;

impl<C: Coeff> Default for Vector<C> {
    fn default() -> Self {
        Vector { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> Vector<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: FockBasisState) -> Self {
        Self::singleton(state, C::one())
    }

    pub fn singleton(state: FockBasisState, c: C) -> Self {
        let mut v = Self::zero();
        v.add_term(state, &c);
        v
    }

    pub fn add_term(&mut self, state: FockBasisState, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&state) {
            Some(x) => {
                let s = x.add_ref(c);
                if s.is_zero() {
                    self.terms.remove(&state);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(state, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Vector<C>, c: &C) {
        if c.is_zero() {
            return;
        }
        for (s, x) in &other.terms {
            self.add_term(s.clone(), &x.mul_ref(c));
        }
    }

    pub fn add_vec(&mut self, other: &Vector<C>) {
        for (s, x) in &other.terms {
            self.add_term(s.clone(), x);
        }
    }

    pub fn sub_vec(&mut self, other: &Vector<C>) {
        for (s, x) in &other.terms {
            self.add_term(s.clone(), &x.neg_ref());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut v = Self::zero();
        v.add_scaled(self, c);
        v
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

    pub fn get(&self, s: &FockBasisState) -> Option<&C> {
        self.terms.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockBasisState, &C)> {
        self.terms.iter()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Vector<D> {
        let mut v = Vector::<D>::zero();
        for (s, x) in &self.terms {
            v.add_term(s.clone(), &f(x));
        }
        v
    }
}

impl<C: Coeff> fmt::Display for Vector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", c, s)?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Vector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sector of the highest weight vector `|μ_index⟩`.
pub fn hw_sector(index: usize, datum: &RootDatum) -> Result<ChargeSector> {
    let n = datum.rank();
    let half_lam = WeightVec(vec![-1; n]);
    let (alpha, beta) = match index {
        1 => (WeightVec::zero(n), WeightVec::zero(n)),
        2 => (datum.lambda(1), datum.lambda(1)),
        3 => (half_lam, WeightVec::zero(n)),
        4 => (&half_lam - &datum.epsilon(n), -&datum.epsilon(n)),
        _ => return Err(Error::domain("highest weight index must be 1..4")),
    };
    ChargeSector::new(alpha, beta)
}

/// The highest weight vector `|μ_index⟩`.
pub fn hw_vector(index: usize, datum: &RootDatum) -> Result<FockVector> {
    let sector = hw_sector(index, datum)?;
    let state = if index == 2 {
        FockBasisState::new(sector, vec![Osc::b(1, 1)])
    } else {
        FockBasisState::vacuum(sector)
    };
    Ok(FockVector::basis(state))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partitions(k: usize) -> u64 {
        let mut p = vec![0u64; k + 1];
        p[0] = 1;
        for part in 1..=k {
            for s in part..=k {
                p[s] += p[s - part];
            }
        }
        p[k]
    }

    // coefficient count of the 2n-fold product of partition series
    fn expected_count(n: usize, d: usize) -> u64 {
        let mut series = vec![0u64; d + 1];
        series[0] = 1;
        for _ in 0..2 * n {
            let mut next = vec![0u64; d + 1];
            for (i, a) in series.iter().enumerate() {
                for j in 0..=d - i {
                    next[i + j] += a * partitions(j);
                }
            }
            series = next;
        }
        series.iter().sum()
    }

    #[test]
    fn basis_counts() {
        let s1 = ChargeSector::origin(1);
        assert_eq!(enumerate_basis(&s1, 0).len(), 1);
        assert_eq!(enumerate_basis(&s1, 2).len(), 8);
        assert_eq!(enumerate_basis(&ChargeSector::origin(2), 1).len(), 5);
        for n in 1..=3 {
            for d in 0..=4 {
                let b = enumerate_basis(&ChargeSector::origin(n), d as u32);
                assert_eq!(b.len() as u64, expected_count(n, d), "n={n} d={d}");
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn grades() {
        let d = RootDatum::new(3).unwrap();
        assert_eq!(grade(&FockBasisState::vacuum(ChargeSector::origin(3))), Rat::zero());
        let s3 = hw_sector(3, &d).unwrap();
        assert_eq!(grade(&FockBasisState::vacuum(s3)), Rat::new(3, 8));
        let s2 = hw_sector(2, &d).unwrap();
        let st = FockBasisState::new(s2, vec![Osc::b(1, 1)]);
        assert_eq!(grade(&st), Rat::new(-1, 2));
        let s4 = hw_sector(4, &d).unwrap();
        assert_eq!(grade(&FockBasisState::vacuum(s4)), Rat::new(3, 8));
    }

    #[test]
    fn hw_vectors() {
        let d = RootDatum::new(2).unwrap();
        let v4 = hw_vector(4, &d).unwrap();
        let (s, c) = v4.iter().next().unwrap();
        assert!(c.is_one());
        assert_eq!(s.sector.alpha, WeightVec(vec![-1, -3]));
        assert_eq!(s.sector.beta, WeightVec(vec![0, -2]));
        let v2 = hw_vector(2, &d).unwrap();
        assert_eq!(v2.iter().next().unwrap().0.b_modes(1), vec![1]);
    }

    #[test]
    fn osc_packing() {
        let o = Osc::b(3, 7);
        assert_eq!((o.family(), o.node(), o.mode()), (Family::B, 3, 7));
        let mut v = vec![Osc::b(1, 1), Osc::a(2, 1), Osc::a(1, 1), Osc::a(1, 3)];
        v.sort();
        assert_eq!(v, vec![Osc::a(1, 3), Osc::a(1, 1), Osc::a(2, 1), Osc::b(1, 1)]);
    }
}

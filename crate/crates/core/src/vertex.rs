//! Exact mode extraction for normal-ordered products of vertex operators.
//!
//! The engine works in the rescaled basis `â_i(-k) = c_i(k) a_i(-k)` with
//! `c_i(k) = (q_i - q_i^{-1}) / (q^{-k/2} - q^{k/2})`. In that basis every
//! coefficient of `Y_i^±`, `Z_i^±`, `ψ_i` and `φ_i` is a Laurent polynomial,
//! so mode operators never need rational-function arithmetic. The `b`
//! oscillators are not rescaled.
//!
//! A normal-ordered product acts on a monomial state as
//! `creation · substitution · lattice shift · zero modes`: the annihilation
//! exponential replaces each `ô(-k)` by `ô(-k) + T x^{-k}`, and the creation
//! exponential contributes its homogeneous parts `E_j`. Both are finite on
//! any fixed state, so coefficients are exact with no truncation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use dashmap::DashMap;
use serde::Serialize;

use crate::coeff::{q_diff, q_int, q_units, Rat, VPoly, VRat, UNITS_PER_V};
use crate::error::{Error, Result};
use crate::fock::{mono_mul, ChargeSector, Family, FockBasisState, Mono, Osc, Vector};
use crate::roots::{RootDatum, WeightVec};

/// Vector with Laurent coefficients in the rescaled basis.
pub type LVec = Vector<VPoly>;

/// Polynomial in commuting creation oscillators.
type Poly = BTreeMap<Mono, VPoly>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FieldKind {
    /// `Y_i^±`, built from `a_i`.
    Y,
    /// `Z_i^±`, built from `b_i`.
    Z,
    /// `ψ_i(x) = K_i exp((q_i - q_i^{-1}) Σ a_i(k) x^{-k})`.
    Psi,
    /// `φ_i(x) = K_i^{-1} exp(-(q_i - q_i^{-1}) Σ a_i(-k) x^k)`.
    Phi,
}

/// One exponential factor evaluated at `q^{shift2/2} x_var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Factor {
    pub kind: FieldKind,
    pub node: usize,
    pub sign: i8,
    pub shift2: i64,
    pub var: usize,
}

impl Factor {
    pub fn new(kind: FieldKind, node: usize, sign: i8, shift2: i64) -> Factor {
        Factor { kind, node, sign, shift2, var: 0 }
    }

    pub fn at(self, var: usize) -> Factor {
        Factor { var, ..self }
    }

    pub fn shifted(self, extra2: i64) -> Factor {
        Factor { shift2: self.shift2 + extra2, ..self }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FieldKind::Y => "Y",
            FieldKind::Z => "Z",
            FieldKind::Psi => "psi",
            FieldKind::Phi => "phi",
        };
        let sign = match (self.kind, self.sign) {
            (FieldKind::Psi | FieldKind::Phi, _) => "",
            (_, s) if s > 0 => "+",
            _ => "-",
        };
        let var = ["z", "w", "u", "x", "y"].get(self.var).copied().unwrap_or("t");
        if self.shift2 == 0 {
            write!(f, "{name}{}{sign}({var})", self.node)
        } else if self.shift2 % 2 == 0 {
            write!(f, "{name}{}{sign}(q^{}{var})", self.node, self.shift2 / 2)
        } else {
            write!(f, "{name}{}{sign}(q^{}/2{var})", self.node, self.shift2)
        }
    }
}

/// A normal-ordered product of factors times a Laurent scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurrentSpec {
    pub factors: Vec<Factor>,
    #[serde(serialize_with = "ser_display")]
    pub scalar: VPoly,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl CurrentSpec {
    pub fn new(factors: Vec<Factor>) -> CurrentSpec {
        CurrentSpec { factors, scalar: VPoly::one() }
    }

    pub fn scaled(mut self, c: &VPoly) -> CurrentSpec {
        self.scalar = &self.scalar * c;
        self
    }

    /// Normal-ordered product `:self other:`.
    pub fn times(&self, other: &CurrentSpec) -> CurrentSpec {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        CurrentSpec { factors, scalar: &self.scalar * &other.scalar }
    }

    /// Moves every factor to variable `var` and multiplies its argument by
    /// `q^{extra2/2}`.
    pub fn placed(&self, var: usize, extra2: i64) -> CurrentSpec {
        CurrentSpec {
            factors: self.factors.iter().map(|f| f.at(var).shifted(extra2)).collect(),
            scalar: self.scalar.clone(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.factors.iter().map(|f| f.var + 1).max().unwrap_or(1)
    }

    /// Lattice shift as `(Σ c_i α_i coefficients, β shift in ε-coordinates)`.
    pub fn lattice_shift(&self, n: usize) -> (Vec<i64>, Vec<i64>) {
        let mut a = vec![0; n];
        let mut b = vec![0; n];
        for f in &self.factors {
            match f.kind {
                FieldKind::Y => a[f.node - 1] += f.sign as i64,
                FieldKind::Z => b[f.node - 1] += f.sign as i64,
                _ => {}
            }
        }
        (a, b)
    }

    /// Lattice shift as weight vectors `(Δα, Δβ)`.
    pub fn shift_vectors(&self, datum: &RootDatum) -> (WeightVec, WeightVec) {
        let n = datum.rank();
        let (a, b) = self.lattice_shift(n);
        let mut da = WeightVec::zero(n);
        for (i, c) in a.iter().enumerate() {
            da = &da + &datum.alpha(i + 1).scale(*c);
        }
        (da, WeightVec::from_coords(&b))
    }
}

impl fmt::Display for CurrentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scalar.is_one() {
            write!(f, "({}) ", self.scalar)?;
        }
        write!(f, ":")?;
        for (k, x) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ":")
    }
}

/// Bimultiplicative sign `(-1)^{Δ^T M λ}` attached to lattice shifts.
///
/// `Δ` lists the shift in the generators `(α_1..α_n, ε_1..ε_n)` and `λ` the
/// input sector as `(2α, β)` in ε-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocycle {
    matrix: Vec<Vec<u8>>,
}

impl Cocycle {
    pub fn trivial(n: usize) -> Cocycle {
        Cocycle { matrix: vec![vec![0; 2 * n]; 2 * n] }
    }

    pub fn from_matrix(n: usize, m: Vec<Vec<i64>>) -> Result<Cocycle> {
        if m.len() != 2 * n || m.iter().any(|r| r.len() != 2 * n) {
            return Err(Error::Config(format!("cocycle matrix must be {0}x{0}", 2 * n)));
        }
        Ok(Cocycle {
            matrix: m.into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(2) as u8).collect()).collect(),
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|x| *x == 0))
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    /// True when the sign is `-1`.
    pub fn negative(&self, delta: &[i64], sector: &ChargeSector) -> bool {
        if self.is_trivial() {
            return false;
        }
        let lam: Vec<i64> = sector.alpha.0.iter().copied().chain(sector.beta.0.iter().map(|b| b / 2)).collect();
        let mut s = 0i64;
        for (r, d) in delta.iter().enumerate() {
            if d.rem_euclid(2) == 0 {
                continue;
            }
            for (c, l) in lam.iter().enumerate() {
                s += (self.matrix[r][c] as i64) * l;
            }
        }
        s.rem_euclid(2) == 1
    }
}

/// Cache statistics, for reports.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EngineStats {
    pub specs: usize,
    pub cached_results: usize,
}

pub struct Engine {
    datum: RootDatum,
    cocycle: Cocycle,
    ids: DashMap<CurrentSpec, usize>,
    specs: RwLock<Vec<Arc<CurrentSpec>>>,
    etables: DashMap<(usize, usize), Arc<Vec<Poly>>>,
    results: DashMap<(usize, Vec<i64>, FockBasisState), Arc<LVec>>,
}

impl Engine {
    pub fn new(datum: RootDatum, cocycle: Cocycle) -> Engine {
        Engine {
            datum,
            cocycle,
            ids: DashMap::new(),
            specs: RwLock::new(Vec::new()),
            etables: DashMap::new(),
            results: DashMap::new(),
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats { specs: self.specs.read().unwrap().len(), cached_results: self.results.len() }
    }

    /// Drops all cached mode actions.
    pub fn clear_cache(&self) {
        self.results.clear();
    }

    /// Interns a spec and returns its id.
    pub fn intern(&self, spec: &CurrentSpec) -> usize {
        if let Some(id) = self.ids.get(spec) {
            return *id;
        }
        let mut specs = self.specs.write().unwrap();
        if let Some(id) = self.ids.get(spec) {
            return *id;
        }
        let id = specs.len();
        specs.push(Arc::new(spec.clone()));
        self.ids.insert(spec.clone(), id);
        id
    }

    pub fn spec(&self, id: usize) -> Arc<CurrentSpec> {
        self.specs.read().unwrap()[id].clone()
    }

    /// Coefficient of `x_v^k ô(-k)` in the creation exponent of `f`.
    fn creation_coeff(&self, f: &Factor, slot: (Family, usize), k: i64) -> Option<VPoly> {
        let shift_units = UNITS_PER_V * f.shift2 * k;
        let s = f.sign as i64;
        match (f.kind, slot.0) {
            (FieldKind::Y, Family::A) if slot.1 == f.node => {
                // σ q^{σk/4} q^{sk}
                Some(VPoly::monomial(Rat::from_int(s), 2 * s * k + shift_units))
            }
            (FieldKind::Z, Family::B) if slot.1 == f.node => Some(VPoly::monomial(Rat::new(s, k), shift_units)),
            (FieldKind::Phi, Family::A) if slot.1 == f.node => {
                // q^{k/2} - q^{-k/2}
                Some(q_diff(k, UNITS_PER_V).shift(shift_units))
            }
            _ => None,
        }
    }

    /// Substitution value `T` with `ô(-k) ↦ ô(-k) + T x_v^{-k}` caused by the
    /// annihilation exponential of `f`.
    fn subst_coeff(&self, f: &Factor, slot: (Family, usize), k: i64) -> Option<VPoly> {
        let shift_units = -UNITS_PER_V * f.shift2 * k;
        let s = f.sign as i64;
        match (f.kind, slot.0) {
            (FieldKind::Y, Family::A) => {
                let b = self.datum.alpha_pair(f.node, slot.1);
                if b.is_zero() {
                    return None;
                }
                let two_b = (&b * &Rat::from_int(2)).to_i64().unwrap();
                // σ q^{σk/4 - sk} (q^{kb} - q^{-kb}) / (k (q^{k/2} - q^{-k/2}))
                let ratio = q_int(two_b, UNITS_PER_V * k);
                Some(ratio.shift(2 * s * k + shift_units).scale(&Rat::new(s, k)))
            }
            (FieldKind::Z, Family::B) if slot.1 == f.node => {
                Some(VPoly::monomial(Rat::from_int(-s), shift_units))
            }
            (FieldKind::Psi, Family::A) => {
                let b = self.datum.alpha_pair(f.node, slot.1);
                if b.is_zero() {
                    return None;
                }
                let u = q_units(&(&b * &Rat::from_int(k))).unwrap();
                Some(q_diff(u, 1).shift(shift_units).scale(&Rat::new(1, k)))
            }
            _ => None,
        }
    }

    /// `(z-exponent, q-scalar units)` of the zero-mode part of `f` on `sector`.
    fn zero_mode(&self, f: &Factor, sector: &ChargeSector) -> (i64, i64) {
        let s = f.sign as i64;
        match f.kind {
            FieldKind::Y => {
                let a0 = sector.a0(&self.datum, f.node);
                let two_a0 = (&a0 * &Rat::from_int(2)).to_i64().expect("half-integral a_i(0)");
                // (q^{shift2/2} x)^{-2σ a0}
                (-s * two_a0, -s * UNITS_PER_V * f.shift2 * two_a0)
            }
            FieldKind::Z => {
                let b0 = sector.b0(f.node);
                (s * b0, s * UNITS_PER_V * f.shift2 * b0)
            }
            FieldKind::Psi => (0, q_units(&sector.a0(&self.datum, f.node)).unwrap()),
            FieldKind::Phi => (0, -q_units(&sector.a0(&self.datum, f.node)).unwrap()),
        }
    }

    fn slots(&self) -> Vec<(Family, usize)> {
        crate::fock::all_slots(self.datum.rank())
    }

    /// Homogeneous parts `E_0..E_len` of the creation exponential on `var`.
    fn etable(&self, id: usize, var: usize, len: usize) -> Arc<Vec<Poly>> {
        if let Some(t) = self.etables.get(&(id, var)) {
            if t.len() > len {
                return t.clone();
            }
        }
        let spec = self.spec(id);
        let target = len + 4;
        let slots = self.slots();
        // C_k as a list of (oscillator, coefficient)
        let mut ck: Vec<Vec<(Osc, VPoly)>> = vec![Vec::new(); target + 1];
        for (k, entry) in ck.iter_mut().enumerate().skip(1) {
            for slot in &slots {
                let mut c = VPoly::zero();
                for f in spec.factors.iter().filter(|f| f.var == var) {
                    if let Some(x) = self.creation_coeff(f, *slot, k as i64) {
                        c = &c + &x;
                    }
                }
                if !c.is_zero() {
                    entry.push((Osc::new(slot.0, slot.1, k as u32), c));
                }
            }
        }
        let mut e: Vec<Poly> = Vec::with_capacity(target + 1);
        let mut e0 = Poly::new();
        e0.insert(Vec::new(), VPoly::one());
        e.push(e0);
        for j in 1..=target {
            let mut acc = Poly::new();
            for k in 1..=j {
                if ck[k].is_empty() {
                    continue;
                }
                for (mono, c) in &e[j - k] {
                    for (osc, x) in &ck[k] {
                        let m = mono_mul(mono, &[*osc]);
                        let coef = (c * x).scale(&Rat::from_int(k as i64));
                        add_poly_term(&mut acc, m, &coef);
                    }
                }
            }
            let inv = Rat::new(1, j as i64);
            for v in acc.values_mut() {
                *v = v.scale(&inv);
            }
            e.push(acc);
        }
        let t = Arc::new(e);
        self.etables.insert((id, var), t.clone());
        t
    }

    /// The lowest power of `x_var` that can occur when spec `id` acts on
    /// `state` (single-variable specs).
    pub fn min_exponent(&self, id: usize, state: &FockBasisState) -> i64 {
        let spec = self.spec(id);
        let mut l = 0;
        for f in &spec.factors {
            l += self.zero_mode(f, &state.sector).0;
        }
        let mut m = 0;
        for o in &state.modes {
            let slot = (o.family(), o.node());
            if spec.factors.iter().any(|f| self.subst_coeff(f, slot, o.mode() as i64).is_some()) {
                m += o.mode() as i64;
            }
        }
        l - m
    }

    /// Coefficient of `Π x_v^{exps[v]}` of spec `id` applied to a basis state.
    pub fn apply(&self, id: usize, exps: &[i64], state: &FockBasisState) -> Arc<LVec> {
        let key = (id, exps.to_vec(), state.clone());
        if let Some(r) = self.results.get(&key) {
            return r.clone();
        }
        let r = Arc::new(self.compute(id, exps, state));
        self.results.insert(key, r.clone());
        r
    }

    fn compute(&self, id: usize, exps: &[i64], state: &FockBasisState) -> LVec {
        let spec = self.spec(id);
        let nv = exps.len();
        let n = self.datum.rank();
        // zero modes read the input sector
        let mut l = vec![0i64; nv];
        let mut units = 0i64;
        for f in &spec.factors {
            let (ze, qu) = self.zero_mode(f, &state.sector);
            l[f.var] += ze;
            units += qu;
        }
        let (da, db) = spec.shift_vectors(&self.datum);
        let target = state.sector.shifted(&da, &db);
        let (ca, cb) = spec.lattice_shift(n);
        let delta: Vec<i64> = ca.into_iter().chain(cb).collect();
        let mut scalar = spec.scalar.shift(units);
        if self.cocycle.negative(&delta, &state.sector) {
            scalar = -scalar;
        }

        // substitution expansion: (powers of x_v^{-1}, kept monomial) -> coeff
        let mut p: BTreeMap<(Vec<i64>, Mono), VPoly> = BTreeMap::new();
        p.insert((vec![0; nv], Vec::new()), VPoly::one());
        let modes = &state.modes;
        let mut idx = 0;
        while idx < modes.len() {
            let osc = modes[idx];
            let mut e = 0usize;
            while idx + e < modes.len() && modes[idx + e] == osc {
                e += 1;
            }
            idx += e;
            let k = osc.mode() as i64;
            let slot = (osc.family(), osc.node());
            let mut t: Vec<VPoly> = vec![VPoly::zero(); nv];
            for f in &spec.factors {
                if let Some(x) = self.subst_coeff(f, slot, k) {
                    t[f.var] = &t[f.var] + &x;
                }
            }
            let choices = distribute(e, &t, k);
            let mut next: BTreeMap<(Vec<i64>, Mono), VPoly> = BTreeMap::new();
            for ((m, mono), c) in &p {
                for (keep, shifts, coef) in &choices {
                    let mut m2 = m.clone();
                    for v in 0..nv {
                        m2[v] += shifts[v];
                    }
                    let mut mono2 = mono.clone();
                    mono2.extend(std::iter::repeat(osc).take(*keep));
                    let val = c * coef;
                    let slot = next.entry((m2, mono2)).or_insert_with(VPoly::zero);
                    *slot = &*slot + &val;
                }
            }
            next.retain(|_, v| !v.is_zero());
            p = next;
        }

        let mut out = LVec::zero();
        let mut tables: Vec<Option<Arc<Vec<Poly>>>> = vec![None; nv];
        for ((m, kept), c) in &p {
            // creation degree per variable
            let mut js = Vec::with_capacity(nv);
            let mut ok = true;
            for v in 0..nv {
                let j = exps[v] - l[v] + m[v];
                if j < 0 {
                    ok = false;
                    break;
                }
                js.push(j as usize);
            }
            if !ok {
                continue;
            }
            for v in 0..nv {
                if tables[v].as_ref().map_or(true, |t| t.len() <= js[v]) {
                    tables[v] = Some(self.etable(id, v, js[v]));
                }
            }
            let mut acc: Vec<(Mono, VPoly)> = vec![(kept.clone(), &scalar * c)];
            for v in 0..nv {
                let ev = &tables[v].as_ref().unwrap()[js[v]];
                let mut next = Vec::with_capacity(acc.len() * ev.len());
                for (mono, x) in &acc {
                    for (em, ex) in ev {
                        next.push((mono_mul(mono, em), x * ex));
                    }
                }
                acc = next;
            }
            for (mono, x) in acc {
                out.add_term(FockBasisState { sector: target.clone(), modes: mono }, &x);
            }
        }
        out
    }

    /// Applies a spec coefficient to a whole vector.
    pub fn apply_vec(&self, id: usize, exps: &[i64], v: &LVec) -> LVec {
        let mut out = LVec::zero();
        for (s, c) in v.iter() {
            out.add_scaled(&self.apply(id, exps, s), c);
        }
        out
    }

    /// Scale factor `Π c_i(k)` of the `a`-oscillators in a monomial; a state
    /// `|s⟩` of the ordinary PBW basis equals `|ŝ⟩ / scale(s)`.
    pub fn rescaling(&self, state: &FockBasisState) -> VRat {
        let mut acc = VRat::one();
        for o in &state.modes {
            if o.family() == Family::A {
                acc = &acc * &rescale_factor(&self.datum, o.node(), o.mode() as i64);
            }
        }
        acc
    }

    /// Converts a rescaled-basis vector to the ordinary PBW basis.
    pub fn to_standard(&self, v: &LVec) -> Vector<VRat> {
        let mut out = Vector::<VRat>::zero();
        for (s, c) in v.iter() {
            out.add_term(s.clone(), &(&VRat::from_poly(c.clone()) * &self.rescaling(s)));
        }
        out
    }

    /// Converts an ordinary-basis vector into rescaled coordinates.
    pub fn from_standard(&self, v: &Vector<VRat>) -> Vector<VRat> {
        let mut out = Vector::<VRat>::zero();
        for (s, c) in v.iter() {
            out.add_term(s.clone(), &(c / &self.rescaling(s)));
        }
        out
    }
}

/// `c_i(k) = (q_i - q_i^{-1}) / (q^{-k/2} - q^{k/2})`.
pub fn rescale_factor(datum: &RootDatum, i: usize, k: i64) -> VRat {
    VRat::new(q_diff(datum.d2(i), UNITS_PER_V), q_diff(k, -UNITS_PER_V)).expect("k != 0")
}

fn add_poly_term(p: &mut Poly, m: Mono, c: &VPoly) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&m) {
        Some(x) => {
            let s = &*x + c;
            if s.is_zero() {
                p.remove(&m);
            } else {
                *x = s;
            }
        }
        None => {
            p.insert(m, c.clone());
        }
    }
}

/// Expands `(ô + Σ_v t_v x_v^{-k})^e` into `(kept count, x-exponent shifts,
/// coefficient)` triples.
fn distribute(e: usize, t: &[VPoly], k: i64) -> Vec<(usize, Vec<i64>, VPoly)> {
    let nv = t.len();
    let active: Vec<usize> = (0..nv).filter(|v| !t[*v].is_zero()).collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; nv];
    fn rec(
        pos: usize,
        left: usize,
        active: &[usize],
        counts: &mut Vec<usize>,
        e: usize,
        t: &[VPoly],
        k: i64,
        out: &mut Vec<(usize, Vec<i64>, VPoly)>,
    ) {
        if pos == active.len() {
            let keep = left;
            // multinomial e! / (keep! Π j_v!)
            let mut coef = Rat::one();
            let fact = |x: usize| (1..=x as i64).fold(Rat::one(), |a, b| &a * &Rat::from_int(b));
            let mut denom = fact(keep);
            for v in active {
                denom = &denom * &fact(counts[*v]);
            }
            coef = &(&coef * &fact(e)) / &denom;
            let mut c = VPoly::constant(coef);
            let mut shifts = vec![0i64; t.len()];
            for v in active {
                c = &c * &t[*v].pow(counts[*v] as u32);
                shifts[*v] = k * counts[*v] as i64;
            }
            out.push((keep, shifts, c));
            return;
        }
        let v = active[pos];
        for j in 0..=left {
            counts[v] = j;
            rec(pos + 1, left - j, active, counts, e, t, k, out);
        }
        counts[v] = 0;
    }
    rec(0, e, &active, &mut counts, e, t, k, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(n: usize) -> Engine {
        let d = RootDatum::new(n).unwrap();
        Engine::new(d, Cocycle::trivial(n))
    }

    fn z(node: usize, sign: i8) -> CurrentSpec {
        CurrentSpec::new(vec![Factor::new(FieldKind::Z, node, sign, 0)])
    }

    #[test]
    fn z_minus_on_vacuum_has_no_residue() {
        let e = engine(1);
        let id = e.intern(&z(1, -1));
        let vac = FockBasisState::vacuum(ChargeSector::origin(1));
        assert!(e.apply(id, &[-1], &vac).is_zero());
        // z^0 coefficient is the shifted vacuum
        let r = e.apply(id, &[0], &vac);
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn z_minus_first_creation_coefficient() {
        let e = engine(1);
        let id = e.intern(&z(1, -1));
        let vac = FockBasisState::vacuum(ChargeSector::origin(1));
        let r = e.apply(id, &[1], &vac);
        let (s, c) = r.iter().next().unwrap();
        assert_eq!(s.b_modes(1), vec![1]);
        assert_eq!(*c, VPoly::from_int(-1));
    }

    #[test]
    fn zero_mode_powers() {
        let e = engine(2);
        let d = e.datum().clone();
        // Y_1^+ on a sector with (α_1|α) = 1/2 carries z^{-1}
        let sec = ChargeSector::new(d.lambda(1), WeightVec::zero(2)).unwrap();
        let y = CurrentSpec::new(vec![Factor::new(FieldKind::Y, 1, 1, 0)]);
        let id = e.intern(&y);
        assert_eq!(e.min_exponent(id, &FockBasisState::vacuum(sec)), -1);
        // Z_1^+ on β = ε_1 carries z^{+1}
        let sec = ChargeSector::new(WeightVec::zero(2), d.epsilon(1)).unwrap();
        let id = e.intern(&z(1, 1));
        assert_eq!(e.min_exponent(id, &FockBasisState::vacuum(sec)), 1);
    }

    #[test]
    fn distribute_counts() {
        let t = vec![VPoly::from_int(2), VPoly::from_int(3)];
        let d = distribute(2, &t, 1);
        // (o + 2x + 3y)^2 has 6 terms
        assert_eq!(d.len(), 6);
        let total: Rat = d
            .iter()
            .map(|(_, _, c)| c.as_constant().unwrap())
            .fold(Rat::zero(), |a, b| &a + &b);
        assert_eq!(total, Rat::from_int(1 + 2 * 2 + 2 * 3 + 4 + 2 * 6 + 9));
    }
}

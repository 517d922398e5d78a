//! Mode operators of the realization and exact evaluation of operator words.
//!
//! Every operator is a scalar prefactor in `ℚ(v)` times a map whose matrix in
//! the rescaled basis of [`crate::vertex`] is Laurent in `v`. Words are
//! evaluated right to left on basis states and cached by suffix.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use serde::Serialize;

use crate::coeff::{q_int, q_units, Rat, VPoly, VRat, UNITS_PER_V};
use crate::currents::{assemble_x, CurrentCombination};
use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, grade, ChargeSector, Family, FockBasisState, FockVector, Osc};
use crate::roots::RootDatum;
use crate::vertex::{rescale_factor, Cocycle, CurrentSpec, Engine, Factor, FieldKind, LVec};

/// A single operator on the Fock space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Op {
    /// `x^±_{i,k}`, the coefficient of `z^{-k-1}` in `X_i^±(z)`.
    X { node: usize, sign: i8, k: i64 },
    /// `ψ_{i,m}`, `m >= 0`.
    Psi { node: usize, m: i64 },
    /// `φ_{i,-m}`, `m >= 0`.
    Phi { node: usize, m: i64 },
    /// `a_i(k)`.
    A { node: usize, k: i64 },
    /// `b_i(k)`.
    B { node: usize, k: i64 },
    /// `K_i^power`.
    K { node: usize, power: i64 },
    /// `q^{power·d}`.
    Qd { power: i64 },
    /// Coefficient of `z^e` in an interned single-variable spec.
    Raw { id: usize, e: i64 },
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::X { node, sign, k } => write!(f, "x{}{}[{}]", node, if sign > 0 { "+" } else { "-" }, k),
            Op::Psi { node, m } => write!(f, "psi{node}[{m}]"),
            Op::Phi { node, m } => write!(f, "phi{node}[-{m}]"),
            Op::A { node, k } => write!(f, "a{node}({k})"),
            Op::B { node, k } => write!(f, "b{node}({k})"),
            Op::K { node, power } => write!(f, "K{node}^{power}"),
            Op::Qd { power } => write!(f, "q^({power}d)"),
            Op::Raw { id, e } => write!(f, "spec{id}[z^{e}]"),
        }
    }
}

/// A scalar times a word of operators; the rightmost operator acts first.
pub type Term = (VRat, Vec<Op>);

struct Compiled {
    prefactor: VRat,
    terms: Vec<(VPoly, i64, usize)>,
}

/// The realization on the Fock space together with its caches.
pub struct Realization {
    engine: Engine,
    combos: Vec<[CurrentCombination; 2]>,
    compiled: Vec<[Compiled; 2]>,
    psi: Vec<usize>,
    phi: Vec<usize>,
    op_cache: DashMap<(Op, FockBasisState), Arc<LVec>>,
    word_cache: DashMap<(Vec<Op>, FockBasisState), Arc<LVec>>,
}

fn sign_slot(sign: i8) -> usize {
    if sign > 0 {
        0
    } else {
        1
    }
}

impl Realization {
    pub fn new(datum: RootDatum, cocycle: Cocycle) -> Result<Realization> {
        let n = datum.rank();
        let engine = Engine::new(datum.clone(), cocycle);
        let mut combos = Vec::with_capacity(n);
        let mut compiled = Vec::with_capacity(n);
        let mut psi = Vec::with_capacity(n);
        let mut phi = Vec::with_capacity(n);
        for i in 1..=n {
            let pair = [assemble_x(&datum, i, 1)?, assemble_x(&datum, i, -1)?];
            let comp = [compile(&engine, &pair[0]), compile(&engine, &pair[1])];
            combos.push(pair);
            compiled.push(comp);
            psi.push(engine.intern(&CurrentSpec::new(vec![Factor::new(FieldKind::Psi, i, 1, 0)])));
            phi.push(engine.intern(&CurrentSpec::new(vec![Factor::new(FieldKind::Phi, i, 1, 0)])));
        }
        Ok(Realization {
            engine,
            combos,
            compiled,
            psi,
            phi,
            op_cache: DashMap::new(),
            word_cache: DashMap::new(),
        })
    }

    pub fn trivial(n: usize) -> Result<Realization> {
        Realization::new(RootDatum::new(n)?, Cocycle::trivial(n))
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn datum(&self) -> &RootDatum {
        self.engine.datum()
    }

    pub fn rank(&self) -> usize {
        self.datum().rank()
    }

    pub fn x_combination(&self, i: usize, sign: i8) -> &CurrentCombination {
        &self.combos[i - 1][sign_slot(sign)]
    }

    /// Interns a spec for use with [`Op::Raw`].
    pub fn raw(&self, spec: &CurrentSpec, e: i64) -> Op {
        Op::Raw { id: self.engine.intern(spec), e }
    }

    /// Scalar that multiplies the Laurent part of `op`.
    pub fn prefactor(&self, op: &Op) -> VRat {
        match *op {
            Op::X { node, sign, .. } => self.compiled[node - 1][sign_slot(sign)].prefactor.clone(),
            Op::A { node, k } if k < 0 => {
                rescale_factor(self.datum(), node, -k).recip().expect("nonzero rescaling")
            }
            _ => VRat::one(),
        }
    }

    /// Laurent part of `op` applied to a basis state of the rescaled basis.
    pub fn act(&self, op: &Op, state: &FockBasisState) -> Arc<LVec> {
        let key = (*op, state.clone());
        if let Some(r) = self.op_cache.get(&key) {
            return r.clone();
        }
        let r = Arc::new(self.compute(op, state));
        self.op_cache.insert(key, r.clone());
        r
    }

    fn compute(&self, op: &Op, state: &FockBasisState) -> LVec {
        let datum = self.datum();
        match *op {
            Op::X { node, sign, k } => {
                let c = &self.compiled[node - 1][sign_slot(sign)];
                let mut out = LVec::zero();
                for (coef, zpow, id) in &c.terms {
                    let v = self.engine.apply(*id, &[-k - 1 - zpow], state);
                    out.add_scaled(&v, coef);
                }
                out
            }
            Op::Psi { node, m } => (*self.engine.apply(self.psi[node - 1], &[-m], state)).clone(),
            Op::Phi { node, m } => (*self.engine.apply(self.phi[node - 1], &[m], state)).clone(),
            Op::Raw { id, e } => (*self.engine.apply(id, &[e], state)).clone(),
            Op::A { node, k } => {
                if k < 0 {
                    return LVec::basis(state.with(Osc::a(node, (-k) as u32)));
                }
                if k == 0 {
                    return LVec::singleton(state.clone(), VPoly::constant(state.sector.a0(datum, node)));
                }
                let step = UNITS_PER_V * datum.d2(node);
                annihilate(state, Family::A, k, |j| {
                    q_int(k * datum.a(node, j), step).scale(&Rat::new(1, k))
                })
            }
            Op::B { node, k } => {
                if k < 0 {
                    return LVec::basis(state.with(Osc::b(node, (-k) as u32)));
                }
                if k == 0 {
                    return LVec::singleton(state.clone(), VPoly::from_int(state.sector.b0(node)));
                }
                annihilate(state, Family::B, k, |j| if j == node { VPoly::from_int(k) } else { VPoly::zero() })
            }
            Op::K { node, power } => {
                let u = q_units(&state.sector.a0(datum, node)).expect("K eigenvalue");
                LVec::singleton(state.clone(), VPoly::unit_pow(power * u))
            }
            Op::Qd { power } => {
                let u = q_units(&grade(state)).expect("grade in (1/8)Z");
                LVec::singleton(state.clone(), VPoly::unit_pow(power * u))
            }
        }
    }

    pub fn act_vec(&self, op: &Op, v: &LVec) -> LVec {
        let mut out = LVec::zero();
        for (s, c) in v.iter() {
            out.add_scaled(&self.act(op, s), c);
        }
        out
    }

    /// Laurent part of a word applied to a basis state.
    pub fn apply_word(&self, word: &[Op], state: &FockBasisState) -> Arc<LVec> {
        match word.len() {
            0 => Arc::new(LVec::basis(state.clone())),
            1 => self.act(&word[0], state),
            _ => {
                let key = (word.to_vec(), state.clone());
                if let Some(r) = self.word_cache.get(&key) {
                    return r.clone();
                }
                let inner = self.apply_word(&word[1..], state);
                let r = Arc::new(self.act_vec(&word[0], &inner));
                self.word_cache.insert(key, r.clone());
                r
            }
        }
    }

    /// Full scalar of a term: its coefficient times every prefactor.
    pub fn term_scalar(&self, term: &Term) -> VRat {
        term.1.iter().fold(term.0.clone(), |acc, op| &acc * &self.prefactor(op))
    }

    /// `Σ terms` applied to a rescaled basis state, as a rescaled vector.
    ///
    /// Terms with equal scalars are summed in Laurent arithmetic first.
    pub fn eval(&self, terms: &[Term], state: &FockBasisState) -> FockVector {
        let mut groups: Vec<(VRat, LVec)> = Vec::new();
        for t in terms {
            let s = self.term_scalar(t);
            if s.is_zero() {
                continue;
            }
            let v = self.apply_word(&t.1, state);
            match groups.iter_mut().find(|g| g.0 == s) {
                Some(g) => g.1.add_vec(&v),
                None => groups.push((s, (*v).clone())),
            }
        }
        let mut out = FockVector::zero();
        for (s, v) in &groups {
            for (st, c) in v.iter() {
                out.add_term(st.clone(), &(s * &VRat::from_poly(c.clone())));
            }
        }
        out
    }

    /// Converts the image of `|ŝ⟩` into the image of the ordinary `|s⟩`.
    pub fn standardize(&self, v: &FockVector, input: &FockBasisState) -> FockVector {
        let c_in = self.engine.rescaling(input);
        let mut out = FockVector::zero();
        for (t, c) in v.iter() {
            out.add_term(t.clone(), &(&(c * &self.engine.rescaling(t)) / &c_in));
        }
        out
    }

    /// Clears the operator, word and engine caches.
    pub fn clear_caches(&self) {
        self.op_cache.clear();
        self.word_cache.clear();
        self.engine.clear_cache();
    }
}

fn compile(engine: &Engine, c: &CurrentCombination) -> Compiled {
    Compiled {
        prefactor: c.prefactor.clone(),
        terms: c.terms.iter().map(|t| (t.coef.clone(), t.zpow, engine.intern(&t.spec))).collect(),
    }
}

/// Applies an annihilation mode `k > 0` whose bracket with `o_j(-k)` of
/// `family` is `coef(j)`.
fn annihilate(state: &FockBasisState, family: Family, k: i64, coef: impl Fn(usize) -> VPoly) -> LVec {
    let mut out = LVec::zero();
    let mut seen = BTreeSet::new();
    for (idx, o) in state.modes.iter().enumerate() {
        if o.family() != family || o.mode() as i64 != k || !seen.insert(*o) {
            continue;
        }
        let mult = state.modes.iter().filter(|x| *x == o).count() as i64;
        let c = coef(o.node());
        if c.is_zero() {
            continue;
        }
        let mut modes = state.modes.clone();
        modes.remove(idx);
        out.add_term(FockBasisState { sector: state.sector.clone(), modes }, &c.scale(&Rat::from_int(mult)));
    }
    out
}

/// Exact matrix of one mode operator between truncated charge sectors, in the
/// ordinary PBW basis.
#[derive(Clone, Debug, Serialize)]
pub struct GradedOperator {
    pub op: Op,
    pub source: ChargeSector,
    pub target: ChargeSector,
    pub mode: i64,
    /// Change of the `d` eigenvalue.
    pub grade_shift: Rat,
    pub source_basis: Vec<FockBasisState>,
    pub target_basis: Vec<FockBasisState>,
    /// `matrix[t][s]`.
    pub matrix: Vec<Vec<VRat>>,
}

impl GradedOperator {
    pub fn entry(&self, t: usize, s: usize) -> &VRat {
        &self.matrix[t][s]
    }

    /// True when every nonzero entry shifts the grade by `grade_shift`.
    pub fn respects_grading(&self) -> bool {
        for (t, row) in self.matrix.iter().enumerate() {
            for (s, c) in row.iter().enumerate() {
                if !c.is_zero() && &grade(&self.target_basis[t]) - &grade(&self.source_basis[s]) != self.grade_shift {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }
}

/// Lattice shift `(Δα, Δβ)` of `x^±_i`.
pub fn x_charge_shift(real: &Realization, i: usize, sign: i8) -> (crate::roots::WeightVec, crate::roots::WeightVec) {
    real.x_combination(i, sign).terms[0].spec.shift_vectors(real.datum())
}

/// The operator `op` restricted to `sector` with boson degree `<= cutoff`.
///
/// The target basis lists every state of the target sector up to the
/// largest degree the image reaches.
pub fn extract_op(real: &Realization, op: Op, sector: &ChargeSector, cutoff: u32) -> Result<GradedOperator> {
    let source_basis = enumerate_basis(sector, cutoff);
    let images: Vec<FockVector> = source_basis
        .iter()
        .map(|s| {
            let scal = real.prefactor(&op);
            let lv = real.act(&op, s);
            let v = lv.map_coeffs(|c| &scal * &VRat::from_poly(c.clone()));
            real.standardize(&v, s)
        })
        .collect();
    let (target, mode, shift) = op_shape(real, &op, sector)?;
    let top = images.iter().flat_map(|v| v.iter().map(|(s, _)| s.degree())).max().unwrap_or(0);
    let target_basis = enumerate_basis(&target, top);
    let mut matrix = vec![vec![VRat::zero(); source_basis.len()]; target_basis.len()];
    for (si, img) in images.iter().enumerate() {
        for (st, c) in img.iter() {
            let ti = target_basis
                .binary_search(st)
                .map_err(|_| Error::domain(format!("{op} leaves the target sector")))?;
            matrix[ti][si] = c.clone();
        }
    }
    Ok(GradedOperator { op, source: sector.clone(), target, mode, grade_shift: shift, source_basis, target_basis, matrix })
}

/// `x^±_{i,k}` on `(sector, <= cutoff)`.
pub fn extract_mode(real: &Realization, i: usize, sign: i8, k: i64, sector: &ChargeSector, cutoff: u32) -> Result<GradedOperator> {
    extract_op(real, Op::X { node: i, sign, k }, sector, cutoff)
}

/// `(target sector, mode number, expected grade shift)` of an operator.
fn op_shape(real: &Realization, op: &Op, sector: &ChargeSector) -> Result<(ChargeSector, i64, Rat)> {
    let datum = real.datum();
    Ok(match *op {
        Op::X { node, sign, k } => {
            let (da, db) = x_charge_shift(real, node, sign);
            (sector.shifted(&da, &db), k, Rat::from_int(k))
        }
        Op::Psi { m, .. } => (sector.clone(), m, Rat::from_int(m)),
        Op::Phi { m, .. } => (sector.clone(), -m, Rat::from_int(-m)),
        Op::A { k, .. } | Op::B { k, .. } => (sector.clone(), k, Rat::from_int(k)),
        Op::K { .. } | Op::Qd { .. } => (sector.clone(), 0, Rat::zero()),
        Op::Raw { id, e } => {
            let spec = real.engine().spec(id);
            let (da, db) = spec.shift_vectors(datum);
            let target = sector.shifted(&da, &db);
            // [z^e] raises the boson degree by e - L, L the zero-mode power
            let l = real.engine().min_exponent(id, &FockBasisState::vacuum(sector.clone()));
            let shift = &(&target.vacuum_grade() - &sector.vacuum_grade()) - &Rat::from_int(e - l);
            (target, e, shift)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin(n: usize) -> FockBasisState {
        FockBasisState::vacuum(ChargeSector::origin(n))
    }

    #[test]
    fn a_bracket_in_rescaled_basis() {
        let r = Realization::trivial(2).unwrap();
        // a_2(1) a_2(-1)|0> = -[2]_q/[2]_v |0>
        let terms = vec![(VRat::one(), vec![Op::A { node: 2, k: 1 }, Op::A { node: 2, k: -1 }])];
        let v = r.eval(&terms, &origin(2));
        let (_, c) = v.iter().next().unwrap();
        let expected = -(&(&VRat::q_pow(1) + &VRat::q_pow(-1)) / &(&VRat::v_pow(1) + &VRat::v_pow(-1)));
        assert_eq!(*c, expected);
    }

    #[test]
    fn x_modes_respect_grading() {
        let r = Realization::trivial(2).unwrap();
        let sec = ChargeSector::origin(2);
        for (i, sign) in [(1, 1), (1, -1), (2, 1), (2, -1)] {
            for k in -2..=1 {
                let g = extract_mode(&r, i, sign, k, &sec, 2).unwrap();
                assert!(g.respects_grading(), "x{i}{sign}[{k}]");
            }
        }
    }

    #[test]
    fn x_plus_lands_in_shifted_sector() {
        let r = Realization::trivial(2).unwrap();
        let g = extract_mode(&r, 1, 1, -1, &ChargeSector::origin(2), 1).unwrap();
        let d = r.datum();
        assert_eq!(g.target.alpha, d.alpha(1));
        assert_eq!(g.target.beta, &d.epsilon(1) - &d.epsilon(2));
        let g = extract_mode(&r, 2, -1, 0, &ChargeSector::origin(2), 0).unwrap();
        assert_eq!(g.target.alpha, -&d.alpha(2));
        assert_eq!(g.target.beta, d.epsilon(2).scale(-2));
    }
}

//! Heisenberg generators, zero modes, lattice shifts, `K_i` and `q^d` acting
//! on Fock vectors in the PBW basis of creation oscillators.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{q_diff, q_units, Rat, VPoly, VRat, UNITS_PER_V};
use crate::fock::{enumerate_basis, grade, ChargeSector, Family, FockBasisState, FockVector, Osc};
use crate::roots::{RootDatum, WeightVec};

/// One generator acting on the Fock space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModeOp {
    /// `a_i(m)`.
    A { node: usize, mode: i64 },
    /// `b_i(m)`.
    B { node: usize, mode: i64 },
    /// `e^{±a_i}`.
    ExpA { node: usize, sign: i8 },
    /// `e^{±b_i}`.
    ExpB { node: usize, sign: i8 },
    /// `K_i = q^{a_i(0)}`.
    K { node: usize },
    /// `q^d`.
    QD,
}

/// `[a_i(m), a_j(-m)]` at `γ = q^{-1/2}`, for `m >= 1`:
/// `[m A_ij]_i / m · (q^{-m/2} - q^{m/2}) / (q_j - q_j^{-1})`.
pub fn a_pairing(datum: &RootDatum, i: usize, j: usize, m: i64) -> VRat {
    let b = datum.alpha_pair(i, j);
    // q^{mb} with b in (1/2)Z
    let units = q_units(&(&b * &Rat::from_int(m))).expect("half-integral pairing");
    let top = &q_diff(units, 1) * &q_diff(m, -UNITS_PER_V);
    let bottom = (&q_diff(datum.d2(i), UNITS_PER_V) * &q_diff(datum.d2(j), UNITS_PER_V))
        .scale(&Rat::from_int(m));
    VRat::new(top, bottom).expect("nonzero")
}

/// Table of the oscillator pairings used by [`apply_mode`].
#[derive(Clone, Debug, Serialize)]
pub struct OscillatorGram {
    n: usize,
    max_mode: i64,
    // index [(i-1)*n + (j-1)][m-1]
    a: Vec<Vec<VRat>>,
}

impl OscillatorGram {
    pub fn new(datum: &RootDatum, max_mode: i64) -> OscillatorGram {
        let n = datum.rank();
        let mut a = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                a.push((1..=max_mode).map(|m| a_pairing(datum, i, j, m)).collect());
            }
        }
        OscillatorGram { n, max_mode, a }
    }

    /// `[a_i(m), a_j(-m)]`.
    pub fn a(&self, i: usize, j: usize, m: i64) -> VRat {
        if m > self.max_mode {
            panic!("pairing table too small for mode {m}");
        }
        self.a[(i - 1) * self.n + (j - 1)][(m - 1) as usize].clone()
    }

    /// `[b_i(m), b_j(-m)]`.
    pub fn b(&self, i: usize, j: usize, m: i64) -> VRat {
        if i == j {
            VRat::from_int(m)
        } else {
            VRat::zero()
        }
    }
}

/// Applies one generator to a vector.
pub fn apply_mode(op: &ModeOp, v: &FockVector, datum: &RootDatum, gram: &OscillatorGram) -> FockVector {
    let mut out = FockVector::zero();
    for (s, c) in v.iter() {
        apply_to_state(op, s, c, datum, gram, &mut out);
    }
    out
}

fn apply_to_state(
    op: &ModeOp,
    s: &FockBasisState,
    c: &VRat,
    datum: &RootDatum,
    gram: &OscillatorGram,
    out: &mut FockVector,
) {
    match *op {
        ModeOp::A { node, mode } => oscillator(Family::A, node, mode, s, c, datum, gram, out),
        ModeOp::B { node, mode } => oscillator(Family::B, node, mode, s, c, datum, gram, out),
        ModeOp::ExpA { node, sign } => {
            let d = datum.alpha(node).scale(sign as i64);
            let sector = s.sector.shifted(&d, &WeightVec::zero(datum.rank()));
            out.add_term(FockBasisState { sector, modes: s.modes.clone() }, c);
        }
        ModeOp::ExpB { node, sign } => {
            let d = datum.epsilon(node).scale(sign as i64);
            let sector = s.sector.shifted(&WeightVec::zero(datum.rank()), &d);
            out.add_term(FockBasisState { sector, modes: s.modes.clone() }, c);
        }
        ModeOp::K { node } => {
            let u = q_units(&s.sector.a0(datum, node)).expect("half-integral");
            out.add_term(s.clone(), &c.mul_poly(&VPoly::unit_pow(u)));
        }
        ModeOp::QD => {
            let u = q_units(&grade(s)).expect("grade in (1/8)Z");
            out.add_term(s.clone(), &c.mul_poly(&VPoly::unit_pow(u)));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn oscillator(
    fam: Family,
    node: usize,
    mode: i64,
    s: &FockBasisState,
    c: &VRat,
    datum: &RootDatum,
    gram: &OscillatorGram,
    out: &mut FockVector,
) {
    if mode < 0 {
        out.add_term(s.with(Osc::new(fam, node, (-mode) as u32)), c);
        return;
    }
    if mode == 0 {
        let ev = match fam {
            Family::A => s.sector.a0(datum, node),
            Family::B => Rat::from_int(s.sector.b0(node)),
        };
        out.add_term(s.clone(), &(c * &VRat::from_rat(ev)));
        return;
    }
    // annihilator: a derivation pairing with each matching creation factor
    for (pos, o) in s.modes.iter().enumerate() {
        if o.family() != fam || o.mode() as i64 != mode {
            continue;
        }
        let p = match fam {
            Family::A => gram.a(node, o.node(), mode),
            Family::B => gram.b(node, o.node(), mode),
        };
        if p.is_zero() {
            continue;
        }
        let mut modes = s.modes.clone();
        modes.remove(pos);
        out.add_term(FockBasisState { sector: s.sector.clone(), modes }, &(c * &p));
    }
}

/// One failed bracket check.
#[derive(Clone, Debug, Serialize)]
pub struct OscResidual {
    pub left: ModeOp,
    pub right: ModeOp,
    pub state: FockBasisState,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OscReport {
    pub rank: usize,
    pub cutoff: u32,
    pub window: i64,
    pub checks: usize,
    pub residuals: Vec<OscResidual>,
    pub pass: bool,
}

/// Checks every bracket among `a_i(m)`, `b_i(m)` with `|m| <= window` on
/// all basis states of degree `<= cutoff` in `sectors`, and the diagonal and
/// shift identities of `K_i`, `q^d` and the lattice operators.
pub fn verify_oscillator_relations(
    datum: &RootDatum,
    cutoff: u32,
    window: i64,
    sectors: &[ChargeSector],
) -> OscReport {
    let n = datum.rank();
    let gram = OscillatorGram::new(datum, window.max(1));
    let states: Vec<FockBasisState> = sectors.iter().flat_map(|s| enumerate_basis(s, cutoff)).collect();
    let mut ops = Vec::new();
    for node in 1..=n {
        for mode in -window..=window {
            ops.push(ModeOp::A { node, mode });
            ops.push(ModeOp::B { node, mode });
        }
    }
    let mut pairs = Vec::new();
    for x in &ops {
        for y in &ops {
            pairs.push((*x, *y));
        }
    }
    let expected = |x: &ModeOp, y: &ModeOp| -> VRat {
        match (x, y) {
            (ModeOp::A { node: i, mode: m }, ModeOp::A { node: j, mode: l }) if m + l == 0 && *m != 0 => {
                if *m > 0 {
                    gram.a(*i, *j, *m)
                } else {
                    -gram.a(*j, *i, *l)
                }
            }
            (ModeOp::B { node: i, mode: m }, ModeOp::B { node: j, mode: l }) if m + l == 0 && i == j => {
                VRat::from_int(*m)
            }
            _ => VRat::zero(),
        }
    };
    let residuals: Vec<OscResidual> = pairs
        .par_iter()
        .flat_map_iter(|(x, y)| {
            let e = expected(x, y);
            let mut res = Vec::new();
            for s in &states {
                let v = FockVector::basis(s.clone());
                let mut lhs = apply_mode(x, &apply_mode(y, &v, datum, &gram), datum, &gram);
                lhs.sub_vec(&apply_mode(y, &apply_mode(x, &v, datum, &gram), datum, &gram));
                lhs.sub_vec(&v.scale(&e));
                if !lhs.is_zero() {
                    res.push(OscResidual { left: *x, right: *y, state: s.clone(), residual: lhs.to_string() });
                }
            }
            res
        })
        .collect();
    let mut residuals = residuals;
    let mut checks = pairs.len() * states.len();

    // K_i e^{±a_j} = q^{±(α_i|α_j)} e^{±a_j} K_i, e^{b} commutes with K, and
    // q^d a_i(m) q^{-d} = q^m a_i(m).
    for s in &states {
        let v = FockVector::basis(s.clone());
        for i in 1..=n {
            for j in 1..=n {
                for sign in [1i8, -1] {
                    let e = ModeOp::ExpA { node: j, sign };
                    let k = ModeOp::K { node: i };
                    let lhs = apply_mode(&k, &apply_mode(&e, &v, datum, &gram), datum, &gram);
                    let u = q_units(&(&datum.alpha_pair(i, j) * &Rat::from_int(sign as i64))).unwrap();
                    let rhs = apply_mode(&e, &apply_mode(&k, &v, datum, &gram), datum, &gram)
                        .scale(&VRat::from_poly(VPoly::unit_pow(u)));
                    checks += 1;
                    if lhs != rhs {
                        residuals.push(OscResidual { left: k, right: e, state: s.clone(), residual: format!("{lhs} vs {rhs}") });
                    }
                    let eb = ModeOp::ExpB { node: j, sign };
                    let lhs = apply_mode(&k, &apply_mode(&eb, &v, datum, &gram), datum, &gram);
                    let rhs = apply_mode(&eb, &apply_mode(&k, &v, datum, &gram), datum, &gram);
                    checks += 1;
                    if lhs != rhs {
                        residuals.push(OscResidual { left: k, right: eb, state: s.clone(), residual: format!("{lhs} vs {rhs}") });
                    }
                }
            }
            for mode in -window..=window {
                if mode == 0 {
                    continue;
                }
                let a = ModeOp::A { node: i, mode };
                let lhs = apply_mode(&ModeOp::QD, &apply_mode(&a, &v, datum, &gram), datum, &gram);
                let rhs = apply_mode(&a, &apply_mode(&ModeOp::QD, &v, datum, &gram), datum, &gram)
                    .scale(&VRat::q_pow(mode));
                checks += 1;
                if lhs != rhs {
                    residuals.push(OscResidual { left: ModeOp::QD, right: a, state: s.clone(), residual: format!("{lhs} vs {rhs}") });
                }
            }
        }
    }
    OscReport { rank: n, cutoff, window, checks, pass: residuals.is_empty(), residuals }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: usize) -> (RootDatum, OscillatorGram) {
        let d = RootDatum::new(n).unwrap();
        let g = OscillatorGram::new(&d, 4);
        (d, g)
    }

    fn vac(n: usize) -> FockBasisState {
        FockBasisState::vacuum(ChargeSector::origin(n))
    }

    #[test]
    fn a_pairing_long_root() {
        let (d, g) = setup(2);
        let v = FockVector::basis(vac(2).with(Osc::a(2, 1)));
        let out = apply_mode(&ModeOp::A { node: 2, mode: 1 }, &v, &d, &g);
        let two_q = VRat::from_poly(&VPoly::q_pow(1) + &VPoly::q_pow(-1));
        let two_v = VRat::from_poly(&VPoly::v_pow(1) + &VPoly::v_pow(-1));
        let expected = -(&two_q / &two_v);
        assert_eq!(out, FockVector::singleton(vac(2), expected));
    }

    #[test]
    fn b_pairing_and_mixed() {
        let (d, g) = setup(1);
        let v = FockVector::basis(vac(1).with(Osc::b(1, 2)));
        let out = apply_mode(&ModeOp::B { node: 1, mode: 2 }, &v, &d, &g);
        assert_eq!(out, FockVector::singleton(vac(1), VRat::from_int(2)));
        let w = FockVector::basis(vac(1).with(Osc::b(1, 1)));
        assert!(apply_mode(&ModeOp::A { node: 1, mode: 1 }, &w, &d, &g).is_zero());
    }

    #[test]
    fn gram_is_symmetric() {
        for n in 1..=4 {
            let (d, g) = setup(n);
            for i in 1..=n {
                for j in 1..=n {
                    for m in 1..=4 {
                        assert_eq!(g.a(i, j, m), g.a(j, i, m));
                    }
                }
            }
            let _ = d;
        }
    }

    #[test]
    fn relations_small() {
        let d = RootDatum::new(1).unwrap();
        let r = verify_oscillator_relations(&d, 2, 2, &[ChargeSector::origin(1)]);
        assert!(r.pass, "{:?}", r.residuals.first());
    }
}

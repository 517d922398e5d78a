//! Contraction factors of products of currents.
//!
//! A factor is a monomial scalar times `Π (z - c w)^e` with `c` a power of
//! `q^{1/2}`. The table-based factor composes pairwise contractions of the
//! `Y` and `Z` exponentials; the engine-based one is read off vacuum matrix
//! elements, independently of the table.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::coeff::{expand_contraction_scaled, LaurentWindow, Rat, VRat};
use crate::currents::build_eps_current;
use crate::error::{Error, Result};
use crate::fock::{ChargeSector, FockBasisState, FockVector};
use crate::roots::RootDatum;
use crate::vertex::{CurrentSpec, Engine, Factor, FieldKind, LVec};

/// `q^{scalar/2} Π (z - q^{h/2} w)^{e}`, keyed by `h`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ContractionFactor {
    pub scalar_half: i64,
    pub factors: BTreeMap<i64, i64>,
}

impl ContractionFactor {
    pub fn one() -> ContractionFactor {
        ContractionFactor::default()
    }

    /// Builds a factor from `(h, e)` pairs.
    pub fn new(scalar_half: i64, factors: &[(i64, i64)]) -> ContractionFactor {
        let mut out = ContractionFactor { scalar_half, factors: BTreeMap::new() };
        for &(h, e) in factors {
            out.push(h, e);
        }
        out
    }

    fn push(&mut self, h: i64, e: i64) {
        let x = self.factors.entry(h).or_insert(0);
        *x += e;
        if *x == 0 {
            self.factors.remove(&h);
        }
    }

    pub fn mul(&self, other: &ContractionFactor) -> ContractionFactor {
        let mut out = self.clone();
        out.scalar_half += other.scalar_half;
        for (&h, &e) in &other.factors {
            out.push(h, e);
        }
        out
    }

    /// `(q^{s/2} z - q^{h/2} q^{s'/2} w)^e` pulled back to the unshifted form.
    fn shifted(h: i64, e: i64, s: i64, s2: i64) -> ContractionFactor {
        ContractionFactor::new(s * e, &[(h + s2 - s, e)])
    }

    /// Total `z`-degree.
    pub fn degree(&self) -> i64 {
        self.factors.values().sum()
    }

    /// Expansion in `w/z` up to `(w/z)^order`.
    pub fn expand(&self, order: usize) -> LaurentWindow {
        let f: Vec<(VRat, i64)> = self.factors.iter().map(|(h, e)| (VRat::v_pow(*h), *e)).collect();
        expand_contraction_scaled(&VRat::v_pow(self.scalar_half), &f, order)
    }
}

fn half(h: i64) -> String {
    if h % 2 == 0 {
        format!("q^{}", h / 2)
    } else {
        format!("q^{}/2", h)
    }
}

impl fmt::Display for ContractionFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.scalar_half != 0 {
            parts.push(half(self.scalar_half));
        }
        for (&h, &e) in &self.factors {
            let w = if h == 0 { "w".to_string() } else { format!("{}w", half(h)) };
            if e == 1 {
                parts.push(format!("(z-{w})"));
            } else {
                parts.push(format!("(z-{w})^{e}"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

fn pairing2(datum: &RootDatum, i: usize, j: usize) -> i64 {
    (&datum.alpha_pair(i, j) * &Rat::from_int(2)).to_i64().expect("half-integral pairing")
}

/// Contraction of `Y_i^σ(z) Y_j^τ(w)` in `(h, e)` form.
fn y_table(p2: i64, same: bool, sigma: i64) -> Vec<(i64, i64)> {
    match (p2, same) {
        (0, _) => vec![],
        (-1, true) => vec![(sigma, 1)],
        (-1, false) => vec![(0, -1)],
        (2 | -2, true) => {
            let p = p2 / 2;
            vec![(2 * sigma, -p), (0, -p)]
        }
        (2 | -2, false) => {
            let p = p2 / 2;
            vec![(-1, p), (1, p)]
        }
        (4, true) => vec![(0, -1), (2, -1), (-2, -1), (4 * sigma, -1)],
        (4, false) => vec![(-1, 1), (1, 1), (-3, 1), (3, 1)],
        _ => unreachable!("pairing {p2}/2 does not occur in type C"),
    }
}

/// Pairwise contraction of one factor at `z` with one at `w`.
pub fn pair_contraction(datum: &RootDatum, left: &Factor, right: &Factor) -> ContractionFactor {
    let (s, s2) = (left.shift2, right.shift2);
    let (sl, sr) = (left.sign as i64, right.sign as i64);
    match (left.kind, right.kind) {
        (FieldKind::Z, FieldKind::Z) if left.node == right.node => ContractionFactor::shifted(0, sl * sr, s, s2),
        (FieldKind::Y, FieldKind::Y) => {
            let p2 = pairing2(datum, left.node, right.node);
            y_table(p2, sl == sr, sl)
                .into_iter()
                .fold(ContractionFactor::one(), |acc, (h, e)| acc.mul(&ContractionFactor::shifted(h, e, s, s2)))
        }
        _ => ContractionFactor::one(),
    }
}

/// Contraction factor of `A(z) B(w)` composed from the pairwise table.
pub fn spec_contraction(datum: &RootDatum, a: &CurrentSpec, b: &CurrentSpec) -> ContractionFactor {
    let mut out = ContractionFactor::one();
    for fa in &a.factors {
        for fb in &b.factors {
            out = out.mul(&pair_contraction(datum, fa, fb));
        }
    }
    out
}

/// An `X_{iε}^±` current; `eps` is ignored for `X_n^-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct XLabel {
    pub node: usize,
    pub sign: i8,
    pub eps: i8,
}

impl XLabel {
    pub fn new(node: usize, sign: i8, eps: i8) -> XLabel {
        XLabel { node, sign, eps }
    }

    pub fn spec(&self, datum: &RootDatum) -> Result<CurrentSpec> {
        build_eps_current(datum, self.node, self.sign, self.eps)
    }
}

impl fmt::Display for XLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        let e = match self.eps {
            1 => "+",
            -1 => "-",
            _ => "0",
        };
        write!(f, "X{s}[{},{e}]", self.node)
    }
}

/// Table-based contraction factor of `left(z) right(w)`.
pub fn ope_contraction(datum: &RootDatum, left: XLabel, right: XLabel) -> Result<ContractionFactor> {
    Ok(spec_contraction(datum, &left.spec(datum)?, &right.spec(datum)?))
}

/// [`ope_contraction`] expanded in `w/z` to order `order`.
pub fn ope_factor(datum: &RootDatum, left: XLabel, right: XLabel, order: usize) -> Result<LaurentWindow> {
    Ok(ope_contraction(datum, left, right)?.expand(order))
}

fn vacuum_coeff(engine: &Engine, id: usize, exps: &[i64], state: &FockBasisState, target: &FockBasisState) -> VRat {
    engine.apply(id, exps, state).get(target).map(|p| VRat::from_poly(p.clone())).unwrap_or_else(VRat::zero)
}

/// Contraction factor of `A(z) B(w)` read off the engine: the ratio of the
/// vacuum-to-vacuum coefficients of `A(z)B(w)` and `:A(z)B(w):`.
pub fn engine_contraction(
    engine: &Engine,
    a: &CurrentSpec,
    b: &CurrentSpec,
    sector: &ChargeSector,
    order: usize,
) -> Result<LaurentWindow> {
    let datum = engine.datum();
    let vac = FockBasisState::vacuum(sector.clone());
    let (ia, ib) = (engine.intern(a), engine.intern(b));
    let joint = engine.intern(&a.placed(0, 0).times(&b.placed(1, 0)));
    let la = engine.min_exponent(ia, &vac);
    let lb = engine.min_exponent(ib, &vac);
    let (da, db) = b.shift_vectors(datum);
    let mid = FockBasisState::vacuum(sector.shifted(&da, &db));
    let (ea, eb) = a.shift_vectors(datum);
    let out = FockBasisState::vacuum(mid.sector.shifted(&ea, &eb));
    let norm = vacuum_coeff(engine, joint, &[la, lb], &vac, &out);
    if norm.is_zero() {
        return Err(Error::domain("normal-ordered product vanishes on the vacuum"));
    }
    let deg = engine.min_exponent(ia, &mid) - la;
    let top = order as i64;
    let mut w = LaurentWindow::new(&["z", "w"], vec![(deg - top, deg), (0, top)]);
    for j in 0..=top {
        let bv = engine.apply(ib, &[lb + j], &vac);
        let mut acc = VRat::zero();
        for (s, c) in bv.iter() {
            let x = vacuum_coeff(engine, ia, &[la + deg - j], s, &out);
            if !x.is_zero() {
                acc = &acc + &(&x * &VRat::from_poly(c.clone()));
            }
        }
        w.add(vec![deg - j, j], &acc.checked_div(&norm)?);
    }
    Ok(w)
}

/// True when the windows agree wherever both are known.
pub fn windows_agree(a: &LaurentWindow, b: &LaurentWindow) -> bool {
    let keys: Vec<&Vec<i64>> = a.entries().map(|e| e.0).chain(b.entries().map(|e| e.0)).collect();
    keys.into_iter().all(|k| match (a.get(k), b.get(k)) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    })
}

/// A reference contraction factor to be reproduced.
#[derive(Clone, Debug, Serialize)]
pub struct OpeTarget {
    pub name: String,
    pub left: XLabel,
    pub right: XLabel,
    pub reference: ContractionFactor,
}

const EPS: [i8; 2] = [1, -1];

/// Reference factors for every `X_{iε} X_{jε'}` product with a closed form,
/// at nodes available in rank `n`.
pub fn reference_opes(n: usize) -> Vec<OpeTarget> {
    let mut out = Vec::new();
    let mut add = |name: String, left: XLabel, right: XLabel, reference: ContractionFactor| {
        out.push(OpeTarget { name, left, right, reference });
    };
    for i in 1..n {
        for e in EPS {
            for f in EPS {
                let (e1, f1) = (e as i64, f as i64);
                for s in EPS {
                    add(
                        format!("same-node {} i={i}", if s > 0 { '+' } else { '-' }),
                        XLabel::new(i, s, e),
                        XLabel::new(i, s, f),
                        ContractionFactor::new(e1, &[(f1 - e1, 1), (2 * s as i64, -1)]),
                    );
                }
                add(
                    format!("plus-minus i={i}"),
                    XLabel::new(i, 1, e),
                    XLabel::new(i, -1, f),
                    ContractionFactor::new(-e1, &[(-e1, -1), (-f1, 1)]),
                );
                add(
                    format!("minus-plus i={i}"),
                    XLabel::new(i, -1, e),
                    XLabel::new(i, 1, f),
                    ContractionFactor::new(-f1, &[(-e1, 1), (-f1, -1)]),
                );
                if i + 1 < n {
                    add(
                        format!("plus-plus next i={i}"),
                        XLabel::new(i, 1, e),
                        XLabel::new(i + 1, 1, f),
                        ContractionFactor::new(0, &[(f1, -1), (1, 1)]),
                    );
                    add(
                        format!("minus-minus next i={i}"),
                        XLabel::new(i, -1, e),
                        XLabel::new(i + 1, -1, f),
                        ContractionFactor::new(-e1, &[(-e1, -1), (-1, 1)]),
                    );
                    add(
                        format!("plus-minus next i={i}"),
                        XLabel::new(i, 1, e),
                        XLabel::new(i + 1, -1, f),
                        ContractionFactor::one(),
                    );
                    add(
                        format!("plus next-minus i={i}"),
                        XLabel::new(i + 1, 1, e),
                        XLabel::new(i, -1, f),
                        ContractionFactor::new(e1, &[(f1 - e1, 1), (0, -1)]),
                    );
                    add(
                        format!("plus next-plus i={i}"),
                        XLabel::new(i + 1, 1, e),
                        XLabel::new(i, 1, f),
                        ContractionFactor::new(0, &[(e1, -1), (1, 1)]),
                    );
                }
            }
        }
    }
    for e in [1i8, 0, -1] {
        let e1 = e as i64;
        let reference = if e == 0 {
            ContractionFactor::one()
        } else {
            // q^{-3ε/2} (z - q^{3/2} w) / (q^{-ε/2} z - w)
            ContractionFactor::new(-2 * e1, &[(3, 1), (e1, -1)])
        };
        add(format!("long root eps={e}"), XLabel::new(n, 1, e), XLabel::new(n, -1, 1), reference);
    }
    out
}

/// Outcome of one reference comparison.
#[derive(Clone, Debug, Serialize)]
pub struct WickEntry {
    pub name: String,
    pub left: String,
    pub right: String,
    pub reference: String,
    pub derived: String,
    pub engine_agrees: bool,
    pub reference_agrees: bool,
}

/// Reference OPE comparisons at rank `n`.
#[derive(Clone, Debug, Serialize)]
pub struct WickReport {
    pub rank: usize,
    pub order: usize,
    pub entries: Vec<WickEntry>,
    /// Every table factor matches the engine.
    pub pass: bool,
    /// Names of reference factors that differ from the derived ones.
    pub reference_mismatches: Vec<String>,
}

/// Compares the table, the engine and the reference factors.
pub fn wick_check(engine: &Engine, order: usize) -> Result<WickReport> {
    let datum = engine.datum();
    let n = datum.rank();
    let sector = ChargeSector::origin(n);
    let mut entries = Vec::new();
    for t in reference_opes(n) {
        let (a, b) = (t.left.spec(datum)?, t.right.spec(datum)?);
        let derived = spec_contraction(datum, &a, &b);
        let from_engine = engine_contraction(engine, &a, &b, &sector, order)?;
        let engine_agrees =
            derived.degree() == from_engine.bounds()[0].1 && windows_agree(&derived.expand(order), &from_engine);
        entries.push(WickEntry {
            name: t.name,
            left: t.left.to_string(),
            right: t.right.to_string(),
            reference: t.reference.to_string(),
            derived: derived.to_string(),
            engine_agrees,
            reference_agrees: t.reference == derived,
        });
    }
    let pass = entries.iter().all(|e| e.engine_agrees);
    let reference_mismatches = entries.iter().filter(|e| !e.reference_agrees).map(|e| e.name.clone()).collect();
    Ok(WickReport { rank: n, order, entries, pass, reference_mismatches })
}

fn to_field(v: &LVec) -> FockVector {
    v.map_coeffs(|c| VRat::from_poly(c.clone()))
}

fn apply_field(engine: &Engine, id: usize, e: i64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (s, c) in v.iter() {
        out.add_scaled(&to_field(&engine.apply(id, &[e], s)), c);
    }
    out
}

/// `[z^x w^y] A(z)B(w)` on `state`, computed twice: by composing the modes
/// of `B` and then `A`, and by expanding `:A(z)B(w):` against the
/// table-based contraction factor. Returns `(composed, expanded)`.
pub fn product_two_ways(
    engine: &Engine,
    a: &CurrentSpec,
    b: &CurrentSpec,
    x: i64,
    y: i64,
    state: &FockBasisState,
) -> (FockVector, FockVector) {
    let (ia, ib) = (engine.intern(a), engine.intern(b));
    let composed = apply_field(engine, ia, x, &to_field(&engine.apply(ib, &[y], state)));
    let joint = engine.intern(&a.placed(0, 0).times(&b.placed(1, 0)));
    let f = spec_contraction(engine.datum(), a, b);
    let d = f.degree();
    // :AB: has no w-powers below the B lower bound on `state`
    let top = y - engine.min_exponent(ib, state);
    let mut expanded = FockVector::zero();
    if top >= 0 {
        let series = f.expand(top as usize);
        for j in 0..=top {
            // polynomial factors are exact, so entries past their degree vanish
            let c = series.get(&[d - j, j]).unwrap_or_else(VRat::zero);
            if c.is_zero() {
                continue;
            }
            let v = engine.apply(joint, &[x - d + j, y - j], state);
            expanded.add_scaled(&to_field(&v), &c);
        }
    }
    (composed, expanded)
}

/// `[z^e]` of `∂Z_i^+(z) Z_{i+1}^-(z) Y_i^+(z)` on `state`, by convolving
/// the separately extracted modes of the three factors, where
/// `∂f(z) = (f(q^{1/2}z) - f(q^{-1/2}z)) / ((q^{1/2} - q^{-1/2}) z)`.
pub fn q_difference_product(engine: &Engine, i: usize, e: i64, state: &FockBasisState) -> FockVector {
    let zi = engine.intern(&crate::currents::build_current(FieldKind::Z, i, 1));
    let zj = engine.intern(&crate::currents::build_current(FieldKind::Z, i + 1, -1));
    let y = engine.intern(&crate::currents::build_current(FieldKind::Y, i, 1));
    // the three factors act on disjoint oscillators, so each lower bound
    // only depends on the input state
    let (mz, mj, my) =
        (engine.min_exponent(zi, state) - 1, engine.min_exponent(zj, state), engine.min_exponent(y, state));
    let mut out = FockVector::zero();
    let start = to_field(&LVec::basis(state.clone()));
    for e3 in my..=e - mz - mj {
        let v3 = apply_field(engine, y, e3, &start);
        if v3.is_zero() {
            continue;
        }
        for e2 in mj..=e - mz - e3 {
            let v2 = apply_field(engine, zj, e2, &v3);
            if v2.is_zero() {
                continue;
            }
            let e1 = e - e2 - e3;
            let scale = VRat::from_poly(crate::coeff::v_int(e1 + 1));
            out.add_scaled(&apply_field(engine, zi, e1 + 1, &v2), &scale);
        }
    }
    out
}

/// `[z^e]` of the ε-combination `(X_{i+}^+ - X_{i-}^+) / ((q^{1/2} - q^{-1/2}) z)`.
pub fn eps_combination(engine: &Engine, i: usize, e: i64, state: &FockBasisState) -> Result<FockVector> {
    let datum = engine.datum();
    let plus = engine.intern(&build_eps_current(datum, i, 1, 1)?);
    let minus = engine.intern(&build_eps_current(datum, i, 1, -1)?);
    let mut v = to_field(&engine.apply(plus, &[e + 1], state));
    v.sub_vec(&to_field(&engine.apply(minus, &[e + 1], state)));
    let den = VRat::from_poly(crate::coeff::q_diff(1, crate::coeff::UNITS_PER_V));
    Ok(v.scale(&den.recip()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(n: usize) -> RootDatum {
        RootDatum::new(n).unwrap()
    }

    #[test]
    fn z_pair_is_geometric() {
        let d = datum(2);
        let zp = Factor::new(FieldKind::Z, 1, 1, 0);
        let zm = Factor::new(FieldKind::Z, 1, -1, 0);
        assert_eq!(pair_contraction(&d, &zp, &zm), ContractionFactor::new(0, &[(0, -1)]));
        let other = Factor::new(FieldKind::Z, 2, -1, 0);
        assert_eq!(pair_contraction(&d, &zp, &other), ContractionFactor::one());
    }

    #[test]
    fn shifted_pair_pulls_out_scalar() {
        let d = datum(2);
        // Z_1^+(q^{1/2} z) Z_1^-(w) = (q^{1/2} z - w)^{-1}
        let zp = Factor::new(FieldKind::Z, 1, 1, 1);
        let zm = Factor::new(FieldKind::Z, 1, -1, 0);
        assert_eq!(pair_contraction(&d, &zp, &zm), ContractionFactor::new(-1, &[(-1, -1)]));
    }

    #[test]
    fn plus_minus_first_node() {
        let d = datum(2);
        let f = ope_contraction(&d, XLabel::new(1, 1, 1), XLabel::new(1, -1, -1)).unwrap();
        assert_eq!(f, ContractionFactor::new(-1, &[(-1, -1), (1, 1)]));
        assert_eq!(f.to_string(), "q^-1/2 (z-q^-1/2w)^-1 (z-q^1/2w)");
    }

    #[test]
    fn long_root_eps_zero_is_trivial() {
        let d = datum(2);
        let f = ope_contraction(&d, XLabel::new(2, 1, 0), XLabel::new(2, -1, 1)).unwrap();
        assert_eq!(f, ContractionFactor::one());
    }

    #[test]
    fn engine_matches_table_on_z_pair() {
        let d = datum(1);
        let engine = Engine::new(d.clone(), crate::vertex::Cocycle::trivial(1));
        let a = crate::currents::build_current(FieldKind::Z, 1, 1);
        let b = crate::currents::build_current(FieldKind::Z, 1, -1);
        let w = engine_contraction(&engine, &a, &b, &ChargeSector::origin(1), 3).unwrap();
        assert!(windows_agree(&w, &spec_contraction(&d, &a, &b).expand(3)));
        assert_eq!(w.get(&[-4, 3]), Some(VRat::one()));
    }
}

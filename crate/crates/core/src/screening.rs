//! Screening charges, the ghost zero modes, kernels of `Q_j^-`, characters of
//! the four submodules and their highest weight vectors.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::coeff::{q_units, Rat, VPoly, VRat};
use crate::currents::build_current;
use crate::error::{Error, Result};
use crate::fock::{
    all_slots, grade, hw_sector, hw_vector, monomials_of_degree, ChargeSector, Family, FockBasisState, FockVector,
};
use crate::linalg::{kernel, rank, Matrix};
use crate::modes::{extract_op, GradedOperator, Op, Realization, Term};
use crate::relations::{run_instances, CheckParams, Instance};
use crate::roots::{AffineWeight, RootDatum, WeightVec};
use crate::vertex::{CurrentSpec, Engine, FieldKind};

/// `Z_j^-(z)`; its residue is `Q_j^-` and its `z^{-1}` coefficient `η_0`.
pub fn screening_spec(j: usize) -> CurrentSpec {
    build_current(FieldKind::Z, j, -1)
}

/// `Z_j^+(z) = Σ ξ_m z^{-m}`.
pub fn xi_spec(j: usize) -> CurrentSpec {
    build_current(FieldKind::Z, j, 1)
}

/// `Q_j^-` as an operator.
pub fn screening_op(real: &Realization, j: usize) -> Op {
    real.raw(&screening_spec(j), -1)
}

/// `ξ_0` as an operator.
pub fn xi0_op(real: &Realization, j: usize) -> Op {
    real.raw(&xi_spec(j), 0)
}

/// Matrix of `Q_j^-` on a sector up to degree `cutoff`.
pub fn screening_charge(real: &Realization, j: usize, sector: &ChargeSector, cutoff: u32) -> Result<GradedOperator> {
    extract_op(real, screening_op(real, j), sector, cutoff)
}

/// States of the charge-`l` Fock space of `b_j` alone, of degree `m`.
pub fn b_states(datum: &RootDatum, j: usize, l: i64, m: i64) -> Vec<FockBasisState> {
    if m < 0 {
        return Vec::new();
    }
    let sector = ChargeSector::new(WeightVec::zero(datum.rank()), datum.epsilon(j).scale(l)).expect("integral charge");
    monomials_of_degree(&[(Family::B, j)], m as u32)
        .into_iter()
        .map(|modes| FockBasisState::new(sector.clone(), modes))
        .collect()
}

/// Degree of the image of a degree-`m` charge-`l` state under `Q_j^-`.
pub fn q_target_degree(l: i64, m: i64) -> i64 {
    m + l - 1
}

fn coeff_of(v: &FockVector, s: &FockBasisState) -> VRat {
    v.get(s).cloned().unwrap_or_else(VRat::zero)
}

fn lvec_field(engine: &Engine, id: usize, e: i64, s: &FockBasisState) -> FockVector {
    engine.apply(id, &[e], s).map_coeffs(|c: &VPoly| VRat::from_poly(c.clone()))
}

/// Matrix of `Q_j^-` from charge `l`, degree `m` to charge `l - 1`.
pub fn q_block(engine: &Engine, j: usize, l: i64, m: i64) -> Result<(Matrix, usize)> {
    let id = engine.intern(&screening_spec(j));
    let src = b_states(engine.datum(), j, l, m);
    let tgt = b_states(engine.datum(), j, l - 1, q_target_degree(l, m));
    let mut mat = vec![vec![VRat::zero(); src.len()]; tgt.len()];
    for (c, s) in src.iter().enumerate() {
        let img = lvec_field(engine, id, -1, s);
        let mut seen = 0;
        for (r, t) in tgt.iter().enumerate() {
            mat[r][c] = coeff_of(&img, t);
            if !mat[r][c].is_zero() {
                seen += 1;
            }
        }
        if seen != img.len() {
            return Err(Error::domain(format!("Q_{j} leaves the expected graded piece on {s}")));
        }
    }
    Ok((mat, src.len()))
}

/// Dimension of `Ker Q_j^-` on the charge-`l` degree-`m` piece.
pub fn kernel_dim(engine: &Engine, j: usize, l: i64, m: i64) -> Result<usize> {
    let (mat, cols) = q_block(engine, j, l, m)?;
    Ok(cols - rank(&mat))
}

/// Echelon basis of `Ker Q_j^-` on the charge-`l` Fock space, per degree up to `cutoff`.
pub fn kernel_basis(engine: &Engine, j: usize, l: i64, cutoff: u32) -> Result<Vec<(u32, Vec<FockVector>)>> {
    let mut out = Vec::new();
    for m in 0..=cutoff {
        let (mat, cols) = q_block(engine, j, l, m as i64)?;
        let src = b_states(engine.datum(), j, l, m as i64);
        let vecs = kernel(&mat, cols)
            .into_iter()
            .map(|v| {
                let mut f = FockVector::zero();
                for (s, c) in src.iter().zip(v) {
                    f.add_term(s.clone(), &c);
                }
                f
            })
            .collect();
        out.push((m, vecs));
    }
    Ok(out)
}

/// Exactness data of the complex `Q_j^-` at one graded piece.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessEntry {
    pub charge: i64,
    pub degree: i64,
    pub dim: usize,
    pub kernel: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub ok: bool,
}

/// Ghost algebra and exact-sequence checks for one node.
#[derive(Clone, Debug, Serialize)]
pub struct GhostReport {
    pub node: usize,
    pub cutoff: u32,
    pub charges: (i64, i64),
    pub checks: usize,
    pub eta_squared_failures: Vec<String>,
    pub anticommutator_failures: Vec<String>,
    pub exactness: Vec<ExactnessEntry>,
    pub pass: bool,
}

/// Checks `η_0² = 0`, `ξ_0 η_0 + η_0 ξ_0 = 1` on every state of the `b_j`
/// Fock spaces with charge in `lo..=hi` and degree `<= cutoff`, and that
/// `Ker Q = Im Q` with rank-nullity on every such piece.
pub fn ghost_check(engine: &Engine, j: usize, lo: i64, hi: i64, cutoff: u32) -> Result<GhostReport> {
    let eta = engine.intern(&screening_spec(j));
    let xi = engine.intern(&xi_spec(j));
    let apply = |id: usize, e: i64, v: &FockVector| {
        let mut out = FockVector::zero();
        for (s, c) in v.iter() {
            out.add_scaled(&lvec_field(engine, id, e, s), c);
        }
        out
    };
    let mut eta_sq = Vec::new();
    let mut anti = Vec::new();
    let mut checks = 0;
    let mut exactness = Vec::new();
    for l in lo..=hi {
        for m in 0..=cutoff as i64 {
            for s in b_states(engine.datum(), j, l, m) {
                checks += 1;
                let v = FockVector::basis(s.clone());
                let ev = apply(eta, -1, &v);
                if !apply(eta, -1, &ev).is_zero() {
                    eta_sq.push(s.to_string());
                }
                let mut r = apply(xi, 0, &ev);
                r.add_vec(&apply(eta, -1, &apply(xi, 0, &v)));
                r.sub_vec(&v);
                if !r.is_zero() {
                    anti.push(s.to_string());
                }
            }
            let (out_mat, dim) = q_block(engine, j, l, m)?;
            let rank_out = rank(&out_mat);
            let ker = kernel(&out_mat, dim).len();
            // Q from charge l+1 lands on degree m from degree m - l
            let rank_in = if m - l >= 0 { rank(&q_block(engine, j, l + 1, m - l)?.0) } else { 0 };
            exactness.push(ExactnessEntry {
                charge: l,
                degree: m,
                dim,
                kernel: ker,
                rank_out,
                rank_in,
                ok: ker + rank_out == dim && ker == rank_in,
            });
        }
    }
    let pass = eta_sq.is_empty() && anti.is_empty() && exactness.iter().all(|e| e.ok);
    Ok(GhostReport {
        node: j,
        cutoff,
        charges: (lo, hi),
        checks,
        eta_squared_failures: eta_sq,
        anticommutator_failures: anti,
        exactness,
        pass,
    })
}

/// Number of partitions of `m`, the dimension of a one-boson piece.
pub fn partition_count(m: i64) -> i64 {
    if m < 0 {
        return 0;
    }
    let m = m as usize;
    let mut p = vec![0i64; m + 1];
    p[0] = 1;
    for part in 1..=m {
        for k in part..=m {
            p[k] += p[k - part];
        }
    }
    p[m]
}

/// Kernel dimension predicted by the exact sequence: the alternating sum of
/// `dim F_k` over `k <= l` at the same grade.
pub fn telescoped_kernel_dim(l: i64, m: i64) -> i64 {
    let p = |k: i64| (k * k - k) / 2;
    let total = m + p(l);
    let mut acc = 0;
    let mut k = l;
    loop {
        let deg = total - p(k);
        if deg < 0 {
            break;
        }
        acc += if (l - k) % 2 == 0 { 1 } else { -1 } * partition_count(deg);
        k -= 1;
    }
    acc
}

/// Formal series `Σ c · e^{w} p^{e}` with weights relative to an offset.
///
/// `w` is in ε-coordinates and `e` in units of `p^{1/8}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QSeries {
    pub weight_offset2: Vec<i64>,
    pub p_offset8: i64,
    pub terms: BTreeMap<(Vec<i64>, i64), i64>,
}

#[derive(Serialize)]
struct QTerm {
    weight: Vec<i64>,
    p: String,
    coeff: i64,
}

fn eighths(e: i64) -> String {
    Rat::new(e, 8).to_string()
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            weight_offset: Vec<String>,
            p_offset: String,
            terms: Vec<QTerm>,
        }
        let terms = self
            .terms
            .iter()
            .map(|((w, e), c)| QTerm { weight: w.clone(), p: eighths(*e), coeff: *c })
            .collect();
        Repr {
            weight_offset: self.weight_offset2.iter().map(|x| Rat::new(*x, 2).to_string()).collect(),
            p_offset: eighths(self.p_offset8),
            terms,
        }
        .serialize(s)
    }
}

impl QSeries {
    pub fn new(weight_offset2: Vec<i64>, p_offset8: i64) -> QSeries {
        QSeries { weight_offset2, p_offset8, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, w: Vec<i64>, p8: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((w.clone(), p8)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(w, p8));
        }
    }

    pub fn coeff(&self, w: &[i64], p8: i64) -> i64 {
        self.terms.get(&(w.to_vec(), p8)).copied().unwrap_or(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| *c >= 0)
    }

    /// Terms on which `self` and `other` differ, with both coefficients.
    pub fn differences(&self, other: &QSeries) -> Vec<(Vec<i64>, i64, i64, i64)> {
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).cloned().collect();
        keys.into_iter()
            .filter_map(|(w, e)| {
                let (a, b) = (self.coeff(&w, e), other.coeff(&w, e));
                (a != b).then_some((w, e, a, b))
            })
            .collect()
    }

    pub fn merged(&self, other: &QSeries) -> QSeries {
        let mut out = self.clone();
        for ((w, e), c) in &other.terms {
            out.add(w.clone(), *e, *c);
        }
        out
    }
}

/// Which pair of submodules a character refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family2 {
    /// `F_1 ⊕ F_2`, β = α ∈ P.
    F12,
    /// `F_3 ⊕ F_4`, α - ½λ_n with β = α ∈ P.
    F34,
}

impl Family2 {
    fn half_shift(self) -> bool {
        self == Family2::F34
    }
}

/// Counts of `a`-oscillator monomials per degree, `0..=dmax`.
pub fn fock1_counts(n: usize, dmax: i64) -> Vec<i64> {
    let slots: Vec<(Family, usize)> = all_slots(n).into_iter().filter(|s| s.0 == Family::A).collect();
    (0..=dmax.max(0)).map(|d| monomials_of_degree(&slots, d as u32).len() as i64).collect()
}

fn weights(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (-bound..=bound).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

/// Character of `⊕ F'_{α(-½λ_n), α}` over `α = Σ l_j ε_j`, `|l_j| <= bound`,
/// up to `p^{pmax}`, by enumerating oscillator states and kernels of the
/// screening charges. Weights are `l`; exponents are absolute.
pub fn enumerated_character(engine: &Engine, family: Family2, pmax: i64, bound: i64) -> Result<QSeries> {
    let datum = engine.datum();
    let n = datum.rank();
    let half = family.half_shift();
    let offset2 = vec![if half { -1 } else { 0 }; n];
    let off8 = if half { -(n as i64) } else { 0 };
    let mut series = QSeries::new(offset2.clone(), off8);
    // degree budget: the largest vacuum grade over the weight box
    let mut cache: BTreeMap<(usize, i64, i64), i64> = BTreeMap::new();
    let ws = weights(n, bound);
    let mut grades = Vec::with_capacity(ws.len());
    for w in &ws {
        let beta = WeightVec(w.iter().map(|l| 2 * l).collect());
        let alpha = WeightVec(beta.0.iter().zip(&offset2).map(|(b, o)| b + o).collect());
        let sector = ChargeSector::new(alpha, beta)?;
        grades.push(sector.vacuum_grade());
    }
    let dmax = grades
        .iter()
        .map(|g| (&(g * &Rat::from_int(8)).to_i64().expect("grade in eighths") + 8 * pmax).div_euclid(8))
        .max()
        .unwrap_or(0);
    let counts = fock1_counts(n, dmax);
    for (w, g) in ws.iter().zip(&grades) {
        let g8 = (g * &Rat::from_int(8)).to_i64().expect("grade in eighths");
        let budget = (8 * pmax + g8).div_euclid(8);
        if budget < 0 {
            continue;
        }
        // per-degree dimensions: a-part convolved with each node's kernel
        let mut dims = counts[..=budget as usize].to_vec();
        for (j, &l) in w.iter().enumerate() {
            let mut k = vec![0i64; budget as usize + 1];
            for (m, slot) in k.iter_mut().enumerate() {
                let key = (j + 1, l, m as i64);
                *slot = match cache.get(&key) {
                    Some(x) => *x,
                    None => {
                        let x = kernel_dim(engine, j + 1, l, m as i64)? as i64;
                        cache.insert(key, x);
                        x
                    }
                };
            }
            let mut next = vec![0i64; budget as usize + 1];
            for (a, x) in dims.iter().enumerate() {
                for (b, y) in k.iter().enumerate() {
                    if a + b <= budget as usize {
                        next[a + b] += x * y;
                    }
                }
            }
            dims = next;
        }
        for (deg, c) in dims.into_iter().enumerate() {
            let p8 = 8 * deg as i64 - g8;
            if p8 <= 8 * pmax {
                series.add(w.clone(), p8, c);
            }
        }
    }
    Ok(series)
}

type Series2 = BTreeMap<(i64, i64), i64>;

/// `1/(x^s p^{c/2}; p)_∞` as a series in `(l, 2·p-exponent)`.
fn inv_pochhammer(s: i64, c2: i64, p2max: i64, lbound: i64) -> Series2 {
    let mut acc: Series2 = BTreeMap::new();
    acc.insert((0, 0), 1);
    let mut step = c2;
    while step <= p2max {
        let kmax = if step == 0 { lbound } else { p2max / step };
        let mut next: Series2 = BTreeMap::new();
        for (&(l, e), &c) in &acc {
            for k in 0..=kmax {
                let (l2, e2) = (l + s * k, e + step * k);
                if e2 > p2max || l2.abs() > lbound {
                    break;
                }
                *next.entry((l2, e2)).or_insert(0) += c;
            }
        }
        acc = next;
        step += 2;
    }
    acc
}

fn mul_series(a: &Series2, b: &Series2, p2max: i64, lbound: i64) -> Series2 {
    let mut out: Series2 = BTreeMap::new();
    for (&(la, ea), &ca) in a {
        for (&(lb, eb), &cb) in b {
            let (l, e) = (la + lb, ea + eb);
            if e <= p2max && l.abs() <= lbound {
                *out.entry((l, e)).or_insert(0) += ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Product side of the character identity, per family, up to `p^{pmax}`
/// and `|l_j| <= bound`. With `with_offset` the `p^{-n/8}` prefactor of
/// the `F_3 ⊕ F_4` formula is included.
pub fn product_character(n: usize, family: Family2, pmax: i64, bound: i64, with_offset: bool) -> QSeries {
    let p2max = 2 * pmax;
    let node = match family {
        Family2::F12 => {
            let lb = p2max;
            mul_series(&inv_pochhammer(1, 1, p2max, lb), &inv_pochhammer(-1, 1, p2max, lb), p2max, bound)
        }
        Family2::F34 => {
            let plus = inv_pochhammer(1, 2, p2max, pmax);
            let minus = inv_pochhammer(-1, 0, p2max, bound + pmax);
            mul_series(&plus, &minus, p2max, bound)
        }
    };
    let half = family.half_shift();
    let off8 = if half && with_offset { -(n as i64) } else { 0 };
    let mut acc: BTreeMap<(Vec<i64>, i64), i64> = BTreeMap::new();
    acc.insert((Vec::new(), 0), 1);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for ((w, e), c) in &acc {
            for (&(l, e2), &c2) in &node {
                if e + e2 <= p2max {
                    let mut w2 = w.clone();
                    w2.push(l);
                    *next.entry((w2, e + e2)).or_insert(0) += c * c2;
                }
            }
        }
        acc = next;
    }
    let mut out = QSeries::new(vec![if half { -1 } else { 0 }; n], off8);
    for ((w, e2), c) in acc {
        let p8 = 4 * e2 + off8;
        if p8 <= 8 * pmax {
            out.add(w, p8, c);
        }
    }
    out
}

/// Character comparison for one family.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterReport {
    pub family: Family2,
    pub rank: usize,
    pub pmax: i64,
    pub weight_bound: i64,
    pub enumerated: QSeries,
    pub product: QSeries,
    /// The two cosets (`Σ l_j` even, odd): `F_1`/`F_2` or `F_3`/`F_4`.
    pub split: [QSeries; 2],
    /// `(weight, p, enumerated, product)` where they differ.
    pub mismatches: Vec<(Vec<i64>, String, i64, i64)>,
    /// Differences when the product side omits the `p^{-n/8}` prefactor.
    pub mismatches_without_offset: usize,
    pub nonnegative: bool,
    pub pass: bool,
}

pub fn compare_characters(engine: &Engine, family: Family2, pmax: i64, bound: i64) -> Result<CharacterReport> {
    let n = engine.datum().rank();
    let enumerated = enumerated_character(engine, family, pmax, bound)?;
    let product = product_character(n, family, pmax, bound, true);
    let bare = product_character(n, family, pmax, bound, false);
    let mut split = [QSeries::new(enumerated.weight_offset2.clone(), enumerated.p_offset8), QSeries::default()];
    split[1] = split[0].clone();
    for ((w, e), c) in &enumerated.terms {
        let odd = w.iter().sum::<i64>().rem_euclid(2) as usize;
        split[odd].add(w.clone(), *e, *c);
    }
    let mismatches: Vec<_> =
        enumerated.differences(&product).into_iter().map(|(w, e, a, b)| (w, eighths(e), a, b)).collect();
    let nonnegative = enumerated.is_nonnegative();
    Ok(CharacterReport {
        family,
        rank: n,
        pmax,
        weight_bound: bound,
        mismatches_without_offset: enumerated.differences(&bare).len(),
        pass: mismatches.is_empty() && nonnegative,
        mismatches,
        nonnegative,
        split,
        enumerated,
        product,
    })
}

/// Highest weight checks for `|μ_index⟩`.
#[derive(Clone, Debug, Serialize)]
pub struct HighestWeightReport {
    pub index: usize,
    pub weight: String,
    pub state: String,
    pub k_exponents: Vec<String>,
    pub expected_k_exponents: Vec<String>,
    pub grade: String,
    pub expected_grade: String,
    pub annihilators_checked: usize,
    pub violations: Vec<String>,
    /// `Q_j^-` kills the vector for every `j`, so it lies in `F_index`.
    pub in_kernel: bool,
    pub pass: bool,
}

fn eval_op(real: &Realization, op: Op, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (s, c) in v.iter() {
        let t: Term = (VRat::one(), vec![op]);
        let img = real.standardize(&real.eval(&[t], s), s);
        out.add_scaled(&img, c);
    }
    out
}

/// `q^{e}` for a rational exponent `e`.
fn q_power(e: &Rat) -> Result<VRat> {
    let u = q_units(e).ok_or_else(|| Error::domain(format!("q^{e} is not a power of q^(1/8)")))?;
    Ok(VRat::from_poly(VPoly::unit_pow(u)))
}

pub fn check_highest_weight(real: &Realization, index: usize, window: i64) -> Result<HighestWeightReport> {
    let datum = real.datum();
    let n = datum.rank();
    let mu = AffineWeight::highest_weight(index, n)?;
    let v = hw_vector(index, datum)?;
    let state = v.iter().next().expect("basis vector").0.clone();
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut ops = Vec::new();
    for i in 1..=n {
        for k in 1..=window {
            ops.push(Op::A { node: i, k });
            ops.push(Op::X { node: i, sign: 1, k });
            ops.push(Op::X { node: i, sign: -1, k });
        }
        ops.push(Op::X { node: i, sign: 1, k: 0 });
    }
    for op in ops {
        checked += 1;
        if !eval_op(real, op, &v).is_zero() {
            violations.push(format!("{op} does not annihilate"));
        }
    }
    let expected = mu.k_exponents(datum);
    let mut measured = Vec::new();
    for i in 1..=n {
        let kv = eval_op(real, Op::K { node: i, power: 1 }, &v);
        let want = v.scale(&q_power(&expected[i - 1])?);
        if kv != want {
            violations.push(format!("K{i} eigenvalue"));
        }
        let x = &state.sector.a0(datum, i);
        measured.push(x.to_string());
    }
    let g = grade(&state);
    let qd = eval_op(real, Op::Qd { power: 1 }, &v);
    if g != mu.delta || qd != v.scale(&q_power(&mu.delta)?) {
        violations.push("grade".to_string());
    }
    let mut in_kernel = true;
    for j in 1..=n {
        if !eval_op(real, screening_op(real, j), &v).is_zero() {
            in_kernel = false;
        }
    }
    let sector_ok = hw_sector(index, datum)? == state.sector;
    Ok(HighestWeightReport {
        index,
        weight: mu.to_string(),
        state: state.to_string(),
        k_exponents: measured,
        expected_k_exponents: expected.iter().map(|e| e.to_string()).collect(),
        grade: g.to_string(),
        expected_grade: mu.delta.to_string(),
        annihilators_checked: checked,
        pass: violations.is_empty() && in_kernel && sector_ok,
        violations,
        in_kernel,
    })
}

/// Basis of `⋂_j Ker Q_j^-` on one sector, per degree up to `cutoff`.
pub fn joint_kernel(real: &Realization, sector: &ChargeSector, cutoff: u32) -> Vec<FockVector> {
    let n = real.rank();
    let mut out = Vec::new();
    for m in 0..=cutoff {
        let src = crate::fock::basis_of_degree(sector, m);
        let images: Vec<Vec<(usize, FockVector)>> = src
            .iter()
            .map(|s| (1..=n).map(|j| (j, eval_op(real, screening_op(real, j), &FockVector::basis(s.clone())))).collect())
            .collect();
        let mut rows: BTreeMap<(usize, FockBasisState), usize> = BTreeMap::new();
        for img in &images {
            for (j, v) in img {
                for (t, _) in v.iter() {
                    let k = rows.len();
                    rows.entry((*j, t.clone())).or_insert(k);
                }
            }
        }
        let mut mat = vec![vec![VRat::zero(); src.len()]; rows.len()];
        for (c, img) in images.iter().enumerate() {
            for (j, v) in img {
                for (t, x) in v.iter() {
                    mat[rows[&(*j, t.clone())]][c] = x.clone();
                }
            }
        }
        for k in kernel(&mat, src.len()) {
            let mut f = FockVector::zero();
            for (s, c) in src.iter().zip(&k) {
                f.add_term(s.clone(), c);
            }
            out.push(f);
        }
    }
    out
}

/// Closure of the joint kernel under the currents.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub sector: String,
    pub kernel_dim: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Applies every `x_{i,k}^±` with `|k| <= window` to the joint kernel on
/// `sector` and checks that each `Q_j^-` still kills the result.
pub fn submodule_closure(real: &Realization, sector: &ChargeSector, cutoff: u32, window: i64) -> ClosureReport {
    let n = real.rank();
    let ker = joint_kernel(real, sector, cutoff);
    let mut checks = 0;
    let mut failures = Vec::new();
    for (idx, v) in ker.iter().enumerate() {
        for i in 1..=n {
            for sign in [1i8, -1] {
                for k in -window..=window {
                    let x = Op::X { node: i, sign, k };
                    let xv = eval_op(real, x, v);
                    for j in 1..=n {
                        checks += 1;
                        if !eval_op(real, screening_op(real, j), &xv).is_zero() {
                            failures.push(format!("Q{j} {x} on kernel vector {idx}"));
                        }
                    }
                }
            }
        }
    }
    real.clear_caches();
    ClosureReport { sector: sector.to_string(), kernel_dim: ker.len(), checks, pass: failures.is_empty(), failures }
}

/// Sign relating `Q_i^-` and `x_j^±`.
#[derive(Clone, Debug, Serialize)]
pub struct SignEntry {
    pub screening: usize,
    pub node: usize,
    pub sign: i8,
    /// `s` with `Q x = s x Q` on every check, if any.
    pub s: Option<i8>,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignReport {
    pub params: CheckParams,
    pub entries: Vec<SignEntry>,
    /// Sign against `x_j^+` and `x_j^-`, indexed `[i-1][j-1]`.
    pub plus: Vec<Vec<Option<i8>>>,
    pub minus: Vec<Vec<Option<i8>>>,
    /// `s_ij` where both currents give the same sign.
    pub matrix: Vec<Vec<Option<i8>>>,
    /// Every `Q_i^-` commutes or anticommutes with every `x_j^±`.
    pub pass: bool,
}

pub fn q_sign_matrix(real: &Realization, sectors: &[ChargeSector], cutoff: u32, window: i64) -> SignReport {
    let n = real.rank();
    let states = crate::relations::states_of(sectors, cutoff);
    let params = CheckParams {
        rank: n,
        cutoff,
        window,
        sectors: sectors.iter().map(|s| s.to_string()).collect(),
    };
    let mut jobs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for sign in [1i8, -1] {
                jobs.push((i, j, sign));
            }
        }
    }
    let entries: Vec<SignEntry> = jobs
        .iter()
        .map(|&(i, j, sign)| {
            let q = screening_op(real, i);
            let inst: Vec<Instance> = (-window..=window)
                .map(|k| {
                    let x = Op::X { node: j, sign, k };
                    Instance::new(format!("Q{i} {x}"), vec![(VRat::one(), vec![q, x])], vec![(VRat::one(), vec![x, q])])
                })
                .collect();
            let rep = run_instances(real, "QX", params.clone(), &inst, &states);
            let s = if rep.pass {
                Some(1)
            } else if rep.failures == rep.sign_flips {
                Some(-1)
            } else {
                None
            };
            SignEntry { screening: i, node: j, sign, s, checks: rep.checks, failures: rep.failures }
        })
        .collect();
    let table = |sign: i8| {
        let mut m = vec![vec![None; n]; n];
        for e in entries.iter().filter(|e| e.sign == sign) {
            m[e.screening - 1][e.node - 1] = e.s;
        }
        m
    };
    let (plus, minus) = (table(1), table(-1));
    let matrix: Vec<Vec<Option<i8>>> = plus
        .iter()
        .zip(&minus)
        .map(|(p, m)| p.iter().zip(m).map(|(a, b)| if a == b { *a } else { None }).collect())
        .collect();
    let pass = entries.iter().all(|e| e.s.is_some());
    SignReport { params, entries, plus, minus, matrix, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::Cocycle;

    fn engine(n: usize) -> Engine {
        Engine::new(RootDatum::new(n).unwrap(), Cocycle::trivial(n))
    }

    #[test]
    fn q_on_vacua() {
        let e = engine(2);
        // charge 0: no residue
        let (m, _) = q_block(&e, 1, 0, 0).unwrap();
        assert!(m.is_empty() || m.iter().all(|r| r.iter().all(|x| x.is_zero())));
        // charge 1: vacuum to vacuum with a unit coefficient
        let (m, _) = q_block(&e, 1, 1, 0).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0][0] == VRat::one() || m[0][0] == VRat::from_int(-1));
    }

    #[test]
    fn q_is_integral() {
        let e = engine(1);
        for l in -2..=3 {
            for m in 0..=3 {
                let (mat, _) = q_block(&e, 1, l, m).unwrap();
                for x in mat.iter().flatten() {
                    assert!(x.as_poly().and_then(|p| p.as_constant()).is_some(), "{x}");
                }
            }
        }
    }

    #[test]
    fn partitions() {
        let p: Vec<i64> = (0..8).map(partition_count).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn pochhammer_geometric() {
        // 1/(x;p) at p^0 is Σ x^k
        let s = inv_pochhammer(1, 0, 0, 3);
        assert_eq!(s.len(), 4);
        assert!(s.values().all(|c| *c == 1));
    }
}

//! One test per acceptance criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line; run with `--nocapture` to see them.

use std::collections::BTreeSet;

use uqcn::coeff::Rat;
use uqcn::fock::{hw_sector, ChargeSector};
use uqcn::modes::Realization;
use uqcn::oscillator::verify_oscillator_relations;
use uqcn::relations::{self, RelationReport};
use uqcn::report::{self, RunConfig, SectorSelection, Subcommand};
use uqcn::roots::RootDatum;
use uqcn::screening::{self, Family2};
use uqcn::symbolic;

fn line(n: u32, pass: bool, what: &str) {
    println!("criterion {n:>2}: {} {what}", if pass { "PASS" } else { "FAIL" });
}

fn hw(real: &Realization) -> Vec<ChargeSector> {
    (1..=4).map(|i| hw_sector(i, real.datum()).unwrap()).collect()
}

fn summary(r: &RelationReport) -> String {
    format!("{} {} checks, {} failures", r.relation, r.checks, r.failures)
}

#[test]
fn c01_oscillator_suite() {
    let mut ok = true;
    let mut total = 0;
    for n in 1..=3 {
        let real = Realization::trivial(n).unwrap();
        let r = verify_oscillator_relations(real.datum(), 3, 3, &hw(&real));
        total += r.checks;
        ok &= r.pass && r.checks > 0;
    }
    line(1, ok, &format!("oscillator brackets n=1,2,3 D=3 W=3, {total} checks"));
    assert!(ok);
}

#[test]
fn c02_drinfeld_r2_to_r6() {
    let mut ok = true;
    let mut msgs = Vec::new();
    for n in 1..=2 {
        let real = Realization::trivial(n).unwrap();
        let secs = relations::default_sectors(&real).unwrap();
        for r in relations::check_r1_r6(&real, 2, &secs, 2) {
            if r.relation != "R1" {
                ok &= r.pass && r.checks > 0;
            }
            msgs.push(format!("n={n} {}", summary(&r)));
        }
    }
    line(2, ok, &format!("R2-R6 |k|<=2 D=2 default sectors: {}", msgs.join("; ")));
    assert!(ok, "{msgs:?}");
}

#[test]
fn c03_relation_r7() {
    // pairings between simple roots at n = 2 and, for 0 and -1/2, n = 3
    let mut seen = BTreeSet::new();
    for n in [2, 3] {
        let d = RootDatum::new(n).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                seen.insert(d.alpha_pair(i, j).to_string());
            }
        }
    }
    let want: BTreeSet<String> = ["0", "-1/2", "-1", "1", "2"].iter().map(|s| s.to_string()).collect();
    let covered = seen == want;
    let real2 = Realization::trivial(2).unwrap();
    assert_eq!(real2.datum().alpha_pair(2, 2), Rat::from_int(2));
    let r2 = relations::check_r7(&real2, 2, &hw(&real2), 2);
    let real3 = Realization::trivial(3).unwrap();
    let r3 = relations::check_r7(&real3, 1, &hw(&real3), 1);
    let ok = covered && r2.pass && r3.pass && r2.checks > 0 && r3.checks > 0;
    line(3, ok, &format!("R7 n=2 W=2 D=2 ({}) and n=3 W=1 D=1 ({}), pairings {seen:?}", summary(&r2), summary(&r3)));
    assert!(ok);
}

#[test]
fn c04_relation_r8() {
    let real = Realization::trivial(2).unwrap();
    let r = relations::check_r8(&real, 2, &hw(&real), 2);
    // the window contains every (k, l) with |k|, |l| <= 2, so k + l <= 2 on the
    // diagonal and the adjacent (2, 1) pair off it
    let labels: Vec<String> = relations::r8_instances(&real, 2, 1, 2).into_iter().map(|i| i.label).collect();
    let ok = r.pass && labels.iter().any(|l| l == "[x2+[2], x1-[0]]") && r.instances == 4 * 25;
    line(4, ok, &format!("R8 n=2 W=2 D=2 hw sectors: {}", summary(&r)));
    assert!(ok);
}

#[test]
fn c05_serre() {
    let real = Realization::trivial(2).unwrap();
    let r = relations::check_r9(&real, -1, 1, &hw(&real), 1).unwrap();
    // (1,2): A = -2, three x_1; (2,1): A = -1, two x_2
    let m3 = relations::r9_instances(&real, 1, 2, 1, -1, 1).unwrap();
    let m2 = relations::r9_instances(&real, 2, 1, 1, -1, 1).unwrap();
    let ok = r.pass && m3.len() == 10 * 3 && m2.len() == 6 * 3;
    line(5, ok, &format!("Serre m=2 and m=3 at n=2, indices in -1..1, D=1: {}", summary(&r)));
    assert!(ok);
}

#[test]
fn c06_symbolic_identities() {
    let s2 = symbolic::verify_s2();
    let s3 = symbolic::verify_s3();
    let omega = s3.iter().find(|c| c.name.contains("mod")).unwrap().holds;
    let ok = s2.iter().chain(&s3).all(|c| c.holds) && omega;
    line(6, ok, "S2 generic and specialized, S3 generic and mod q^2+q+1");
    assert!(ok);
}

#[test]
fn c07_proof_identities() {
    let real = Realization::trivial(2).unwrap();
    let r = relations::check_proof_identities(&real, &relations::default_sectors(&real).unwrap(), 2, 4).unwrap();
    let ok = r.pass && r.checks > 0;
    line(7, ok, &format!("normal-ordered identities n=2 D=2: {}", summary(&r)));
    assert!(ok);
}

#[test]
fn c08_ghost_algebra() {
    let mut ok = true;
    let mut states = 0;
    for n in [1, 2] {
        let real = Realization::trivial(n).unwrap();
        for j in 1..=n {
            let g = screening::ghost_check(real.engine(), j, -2, 2, 4).unwrap();
            ok &= g.pass;
            states += g.checks;
            for e in &g.exactness {
                ok &= e.kernel as i64 == screening::telescoped_kernel_dim(e.charge, e.degree);
            }
        }
    }
    line(8, ok, &format!("eta0^2=0, xi0 eta0 + eta0 xi0 = 1, exactness for |l|<=2 D=4 ({states} states)"));
    assert!(ok);
}

#[test]
fn c09_characters() {
    let mut ok = true;
    let mut msgs = Vec::new();
    for (n, pmax, bound) in [(1, 3, 3), (2, 2, 2)] {
        let real = Realization::trivial(n).unwrap();
        for fam in [Family2::F12, Family2::F34] {
            let c = screening::compare_characters(real.engine(), fam, pmax, bound).unwrap();
            ok &= c.pass && !c.enumerated.terms.is_empty();
            msgs.push(format!("n={n} {fam:?} {} terms {} mismatches", c.enumerated.terms.len(), c.mismatches.len()));
            if n == 1 {
                match fam {
                    // p^{1/2}: e^{ε} + e^{-ε}
                    Family2::F12 => ok &= c.enumerated.coeff(&[1], 4) == 1 && c.enumerated.coeff(&[-1], 4) == 1,
                    // p^0 after the p^{-1/8} offset: Σ_k e^{-kε}
                    Family2::F34 => ok &= (0..=bound).all(|k| c.enumerated.coeff(&[-k], -1) == 1),
                }
            }
        }
    }
    line(9, ok, &msgs.join("; "));
    assert!(ok);
}

#[test]
fn c10_highest_weights() {
    let mut ok = true;
    for n in 1..=3 {
        let real = Realization::trivial(n).unwrap();
        for i in 1..=4 {
            let h = screening::check_highest_weight(&real, i, 2).unwrap();
            ok &= h.pass;
            let want = match i {
                2 => "-1/2".to_string(),
                3 | 4 => Rat::new(n as i64, 8).to_string(),
                _ => "0".to_string(),
            };
            ok &= h.grade == want;
            if i == 3 {
                ok &= h.expected_k_exponents[n - 1] == "-1/2";
            }
        }
    }
    line(10, ok, "four highest weight vectors at n=1,2,3, W=2; grades -1/2 and n/8");
    assert!(ok);
}

#[test]
fn c11_screening_signs() {
    let real = Realization::trivial(2).unwrap();
    let secs = relations::default_sectors(&real).unwrap();
    let m = screening::q_sign_matrix(&real, &secs, 2, 1);
    let xn_plus = m.entries.iter().find(|e| e.screening == 2 && e.node == 2 && e.sign == 1).unwrap();
    let resolved = m.matrix.iter().flatten().all(|x| x.is_some());
    let ok = m.pass && resolved && xn_plus.s == Some(1) && xn_plus.failures == 0;
    line(11, ok, &format!("sign matrix n=2 D=2 W=1: {:?}; [X2+, Q2-] = 0", m.matrix));
    assert!(ok);
}

#[test]
fn c12_determinism() {
    let cfg = RunConfig { rank: 1, cutoff: 1, window: 1, pmax: 2, sectors: SectorSelection::Hw, ..RunConfig::default() };
    let a = report::run(Subcommand::All, &cfg).unwrap();
    let b = report::run(Subcommand::All, &cfg).unwrap();
    let ok = a.pass && a.deterministic_json() == b.deterministic_json();
    line(12, ok, &format!("two runs of `all` at n=1 agree byte for byte ({} results)", a.results.len()));
    assert!(ok);
}

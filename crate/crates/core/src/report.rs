//! Run configuration, orchestration of all checks and the JSON report.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{hw_sector, ChargeSector};
use crate::modes::Realization;
use crate::ope::{wick_check, WickReport};
use crate::oscillator::{verify_oscillator_relations, OscReport};
use crate::relations::{self, RelationReport};
use crate::roots::RootDatum;
use crate::screening::{self, CharacterReport, ClosureReport, Family2, GhostReport, HighestWeightReport, SignReport};
use crate::symbolic::{self, CubicReport, IdentityCheck};
use crate::vertex::Cocycle;

pub const SCHEMA_VERSION: u32 = 1;

/// Relation families selectable with `--relations`.
pub const RELATION_NAMES: [&str; 7] = ["oscillator", "r1-r6", "r7", "r8", "r9", "proof-identities", "ope"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    VerifyRelations,
    VerifyIdentities,
    Characters,
    HighestWeights,
    Screening,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorSelection {
    /// The four highest weight sectors and their one-step neighbours.
    Default,
    /// The four highest weight sectors only.
    Hw,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "table")]
pub enum CocycleChoice {
    Trivial,
    /// `2n × 2n` table over `(a_1..a_n, b_1..b_n)`, entries mod 2.
    Table(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub rank: usize,
    pub cutoff: u32,
    pub window: i64,
    pub pmax: i64,
    pub weight_bound: i64,
    pub sectors: SectorSelection,
    pub cocycle: CocycleChoice,
    /// Subset of [`RELATION_NAMES`]; empty means all.
    pub relations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rank: 2,
            cutoff: 2,
            window: 2,
            pmax: 3,
            weight_bound: 2,
            sectors: SectorSelection::Default,
            cocycle: CocycleChoice::Trivial,
            relations: Vec::new(),
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.rank == 0 {
            return bad("rank must be at least 1");
        }
        if self.window < 0 || self.pmax < 0 || self.weight_bound < 0 {
            return bad("window, pmax and weight bound must be nonnegative");
        }
        if let Some(r) = self.relations.iter().find(|r| !RELATION_NAMES.contains(&r.as_str())) {
            return Err(Error::Config(format!("unknown relation {r:?}; expected one of {}", RELATION_NAMES.join(", "))));
        }
        self.cocycle()?;
        Ok(())
    }

    pub fn cocycle(&self) -> Result<Cocycle> {
        match &self.cocycle {
            CocycleChoice::Trivial => Ok(Cocycle::trivial(self.rank)),
            CocycleChoice::Table(m) => Cocycle::from_matrix(self.rank, m.clone()),
        }
    }

    fn wants(&self, name: &str) -> bool {
        self.relations.is_empty() || self.relations.iter().any(|r| r == name)
    }

    /// Ghost checks always reach degree 4.
    pub fn ghost_cutoff(&self) -> u32 {
        self.cutoff.max(4)
    }

    /// Serre checks use mode indices in `-w..=w` and states up to degree
    /// `d`, with `w = min(window, 1)` and `d = min(cutoff, 1)`.
    pub fn serre_params(&self) -> (i64, u32) {
        (self.window.min(1), self.cutoff.min(1))
    }
}

/// One sub-report.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Section {
    Oscillator(OscReport),
    Relation(RelationReport),
    Wick(WickReport),
    Identities(Vec<IdentityCheck>),
    Cubic(CubicReport),
    Ghost(GhostReport),
    Character(Box<CharacterReport>),
    HighestWeight(HighestWeightReport),
    SignMatrix(SignReport),
    Closure(ClosureReport),
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub pass: bool,
    pub summary: String,
    pub section: Section,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub entries: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub subcommand: Subcommand,
    pub config: RunConfig,
    pub results: Vec<ResultEntry>,
    pub pass: bool,
    pub timing: Timing,
}

impl VerificationReport {
    /// JSON without the timing block, for determinism comparisons.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("{} {}: {}\n", if r.pass { "PASS" } else { "FAIL" }, r.name, r.summary));
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

struct Runner {
    results: Vec<ResultEntry>,
    timing: Timing,
}

impl Runner {
    fn push(&mut self, name: impl Into<String>, start: Instant, pass: bool, summary: String, section: Section) {
        let name = name.into();
        self.timing.entries.push((name.clone(), start.elapsed().as_secs_f64()));
        self.results.push(ResultEntry { name, pass, summary, section });
    }

    fn relation(&mut self, start: Instant, r: RelationReport) {
        let summary = format!("{} checks, {} failures, {} sign flips", r.checks, r.failures, r.sign_flips);
        self.push(r.relation.clone(), start, r.pass, summary, Section::Relation(r));
    }
}

pub fn sectors(real: &Realization, sel: SectorSelection) -> Result<Vec<ChargeSector>> {
    match sel {
        SectorSelection::Default => relations::default_sectors(real),
        SectorSelection::Hw => (1..=4).map(|i| hw_sector(i, real.datum())).collect(),
    }
}

fn run_relations(cfg: &RunConfig, real: &Realization, run: &mut Runner) -> Result<()> {
    let secs = sectors(real, cfg.sectors)?;
    let (d, w) = (cfg.cutoff, cfg.window);
    if cfg.wants("oscillator") {
        let t = Instant::now();
        let r = verify_oscillator_relations(real.datum(), d, w, &secs);
        let s = format!("{} checks, {} residuals", r.checks, r.residuals.len());
        run.push("oscillator", t, r.pass, s, Section::Oscillator(r));
    }
    if cfg.wants("r1-r6") {
        for r in relations::check_r1_r6(real, w, &secs, d) {
            run.relation(Instant::now(), r);
        }
        real.clear_caches();
    }
    if cfg.wants("r7") {
        let t = Instant::now();
        run.relation(t, relations::check_r7(real, w, &secs, d));
    }
    if cfg.wants("r8") {
        let t = Instant::now();
        run.relation(t, relations::check_r8(real, w, &secs, d));
    }
    if cfg.wants("r9") && cfg.rank >= 2 {
        let t = Instant::now();
        let (sw, sd) = cfg.serre_params();
        run.relation(t, relations::check_r9(real, -sw, sw, &secs, sd)?);
    }
    if cfg.wants("proof-identities") {
        let t = Instant::now();
        run.relation(t, relations::check_proof_identities(real, &secs, d, 2 * w)?);
    }
    if cfg.wants("ope") {
        let t = Instant::now();
        let r = wick_check(real.engine(), d as usize + 2)?;
        let s = format!("{} products, {} reference factors differ", r.entries.len(), r.reference_mismatches.len());
        run.push("ope", t, r.pass, s, Section::Wick(r));
    }
    real.clear_caches();
    Ok(())
}

fn run_identities(run: &mut Runner) {
    for (name, checks) in [("S2", symbolic::verify_s2()), ("S3", symbolic::verify_s3())] {
        let t = Instant::now();
        let pass = checks.iter().all(|c| c.holds);
        let s = checks.iter().map(|c| format!("{}={}", c.name, c.holds)).collect::<Vec<_>>().join(", ");
        run.push(name, t, pass, s, Section::Identities(checks));
    }
    let t = Instant::now();
    let c = symbolic::verify_cubic_simplification();
    // the reference form is a report outcome; only the bracket's own consistency gates
    let pass = c.s3_coefficient_matches && c.extreme_w_parts_vanish && c.bracket_at_q1.is_zero();
    let s = format!(
        "reference form {}, with (q+q^2) {}",
        if c.reference_matches { "matches" } else { "differs" },
        if c.s3_coefficient_matches { "matches" } else { "differs" }
    );
    run.push("cubic-simplification", t, pass, s, Section::Cubic(c));
}

fn run_characters(cfg: &RunConfig, real: &Realization, run: &mut Runner) -> Result<()> {
    for fam in [Family2::F12, Family2::F34] {
        let t = Instant::now();
        let c = screening::compare_characters(real.engine(), fam, cfg.pmax, cfg.weight_bound)?;
        let s = format!(
            "{} terms, {} mismatches ({} without p^-n/8)",
            c.enumerated.terms.len(),
            c.mismatches.len(),
            c.mismatches_without_offset
        );
        let name = match fam {
            Family2::F12 => "characters F1+F2",
            Family2::F34 => "characters F3+F4",
        };
        run.push(name, t, c.pass, s, Section::Character(Box::new(c)));
    }
    Ok(())
}

fn run_highest_weights(cfg: &RunConfig, real: &Realization, run: &mut Runner) -> Result<()> {
    for i in 1..=4 {
        let t = Instant::now();
        let h = screening::check_highest_weight(real, i, cfg.window.max(1))?;
        let s = format!("{} = {}, grade {}, {} violations", h.state, h.weight, h.grade, h.violations.len());
        run.push(format!("highest weight {i}"), t, h.pass, s, Section::HighestWeight(h));
    }
    real.clear_caches();
    Ok(())
}

fn run_screening(cfg: &RunConfig, real: &Realization, run: &mut Runner) -> Result<()> {
    for j in 1..=cfg.rank {
        let t = Instant::now();
        let g = screening::ghost_check(real.engine(), j, -2, 2, cfg.ghost_cutoff())?;
        let s = format!("{} states, {} graded pieces", g.checks, g.exactness.len());
        run.push(format!("ghost algebra node {j}"), t, g.pass, s, Section::Ghost(g));
    }
    let secs = sectors(real, cfg.sectors)?;
    let t = Instant::now();
    let m = screening::q_sign_matrix(real, &secs, cfg.cutoff, cfg.window);
    let fmt_s = |x: &Option<i8>| x.map_or("?".to_string(), |v| if v > 0 { "+".into() } else { "-".into() });
    let rows = |t: &Vec<Vec<Option<i8>>>| t.iter().map(|r| r.iter().map(fmt_s).collect::<String>()).collect::<Vec<_>>().join(" ");
    let s = format!("x+ [{}], x- [{}]", rows(&m.plus), rows(&m.minus));
    run.push("sign matrix", t, m.pass, s, Section::SignMatrix(m));
    for i in 1..=4 {
        let t = Instant::now();
        let c = screening::submodule_closure(real, &hw_sector(i, real.datum())?, cfg.cutoff, cfg.window);
        let s = format!("kernel dim {}, {} checks", c.kernel_dim, c.checks);
        run.push(format!("closure sector {i}"), t, c.pass, s, Section::Closure(c));
    }
    Ok(())
}

/// Runs a subcommand.
pub fn run(sub: Subcommand, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let real = Realization::new(RootDatum::new(cfg.rank)?, cfg.cocycle()?)?;
    let mut run = Runner { results: Vec::new(), timing: Timing::default() };
    let all = sub == Subcommand::All;
    if all || sub == Subcommand::VerifyRelations {
        run_relations(cfg, &real, &mut run)?;
    }
    if all || sub == Subcommand::VerifyIdentities {
        run_identities(&mut run);
    }
    if all || sub == Subcommand::Characters {
        run_characters(cfg, &real, &mut run)?;
    }
    if all || sub == Subcommand::HighestWeights {
        run_highest_weights(cfg, &real, &mut run)?;
    }
    if all || sub == Subcommand::Screening {
        run_screening(cfg, &real, &mut run)?;
    }
    run.timing.total_seconds = start.elapsed().as_secs_f64();
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        subcommand: sub,
        config: cfg.clone(),
        pass: run.results.iter().all(|r| r.pass),
        results: run.results,
        timing: run.timing,
    })
}

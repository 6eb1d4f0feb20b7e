//! Per-level assembly of gonality intervals for X₀⁺(N).
//!
//! Bounds are applied in a fixed order: genus trivialities and upper bounds,
//! then computed lower bounds, then certificates. Every change to an interval
//! is recorded as an [`Evidence`] entry that [`replay_evidence`] can recheck.

pub mod facts;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, ogg_l, primes_up_to, psi, ArithError, Level};
use crate::bounds::{
    cs_forces_degree4_factorization, gonality_lb_from_count, kim_sarnak_lb, kim_sarnak_plus_lb,
    ogg_plus_lower_bound, poonen_upper_bounds, tower_rule, Conclusion, Evidence, EvidenceKind, FieldTag,
    GonalityInterval, Relation,
};
use crate::modsym::{build_space, AtkinLehnerKey, ModsymError, ModularSymbolSpace};
use crate::pointcount::{count_with_genus, CountError, CountRequest};

pub use facts::{certificates, certificates_for, embedded_facts, Certificate, Claim, Classification, Facts};

pub const DEFAULT_PRIME_BOUND: u64 = 13;
pub const MAX_VERIFY_LEVEL: u64 = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Modsym(#[from] ModsymError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("prime budget entry {0} is not prime")]
    NotPrime(u64),
    #[error("range [{0}, {1}] must satisfy 2 <= min <= max <= 5000")]
    BadRange(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub use_certificates: bool,
    /// Primes used for point counts and Ogg's bound; those dividing N are skipped.
    pub prime_budget: Vec<u64>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            use_certificates: true,
            prime_budget: primes_up_to(DEFAULT_PRIME_BOUND),
        }
    }
}

impl AnalyzeOptions {
    pub fn without_certificates() -> Self {
        AnalyzeOptions {
            use_certificates: false,
            ..Default::default()
        }
    }

    fn primes_for(&self, level: &Level) -> Result<Vec<u64>, ClassifyError> {
        let mut out = Vec::new();
        for &p in &self.prime_budget {
            if !is_prime(p) {
                return Err(ClassifyError::NotPrime(p));
            }
            if !level.is_divisible_by(p) && !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "matches-paper")]
    MatchesPaper,
    #[serde(rename = "consistent-but-incomplete")]
    ConsistentButIncomplete,
    #[serde(rename = "paper-inconsistent/unresolved")]
    PaperInconsistent,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::MatchesPaper => "matches-paper",
            Verdict::ConsistentButIncomplete => "consistent-but-incomplete",
            Verdict::PaperInconsistent => "paper-inconsistent/unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    #[serde(rename = "N")]
    pub level: u64,
    pub genus_plus: u64,
    pub counts: Vec<PointCount>,
    #[serde(rename = "gonQ")]
    pub gon_q: GonalityInterval,
    #[serde(rename = "gonC")]
    pub gon_c: GonalityInterval,
    pub evidence: Vec<Evidence>,
    pub certificates_used: Vec<String>,
    pub verdict: Verdict,
}

/// The reference value for one gonality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Expected {
    Exactly(u64),
    AtLeast(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Agreement {
    Exact,
    Consistent,
    Contradiction,
}

impl Expected {
    pub fn compare(&self, iv: &GonalityInterval) -> Agreement {
        if iv.is_empty() {
            return Agreement::Contradiction;
        }
        match *self {
            Expected::Exactly(v) if iv.exact() == Some(v) => Agreement::Exact,
            Expected::Exactly(v) if iv.contains(v) => Agreement::Consistent,
            Expected::AtLeast(v) if iv.lower >= v => Agreement::Exact,
            Expected::AtLeast(v) if iv.upper.map_or(true, |u| u >= v) => Agreement::Consistent,
            _ => Agreement::Contradiction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PaperValue {
    #[serde(rename = "gonQ")]
    pub gon_q: Expected,
    #[serde(rename = "gonC")]
    pub gon_c: Expected,
}

/// Reference gonalities of X₀⁺(N) implied by the classification lists.
pub fn paper_expectation(n: u64, genus_plus: u64) -> PaperValue {
    use Expected::*;
    let (q, c) = match genus_plus {
        0 => (Exactly(1), Exactly(1)),
        1 | 2 => (Exactly(2), Exactly(2)),
        _ => match embedded_facts().classification(n) {
            Some(Classification::Hyperelliptic) => (Exactly(2), Exactly(2)),
            Some(Classification::TrigonalQ) => (Exactly(3), Exactly(3)),
            Some(Classification::TetragonalQTrigonalC) => (Exactly(4), Exactly(3)),
            Some(Classification::Tetragonal) => (Exactly(4), Exactly(4)),
            Some(Classification::TetragonalCOnly) => (AtLeast(5), Exactly(4)),
            None => (AtLeast(5), AtLeast(5)),
        },
    };
    PaperValue { gon_q: q, gon_c: c }
}

impl LevelReport {
    pub fn expectation(&self) -> PaperValue {
        paper_expectation(self.level, self.genus_plus)
    }

    /// Worst agreement of the two intervals with the reference values.
    pub fn agreement(&self) -> Agreement {
        let e = self.expectation();
        e.gon_q.compare(&self.gon_q).max(e.gon_c.compare(&self.gon_c))
    }
}

mod cite {
    pub const GENUS: &str = "genus 0 curves are P^1; curves of genus >= 1 have no degree-1 map";
    pub const ELLIPTIC: &str = "an elliptic curve with a rational point is a double cover of P^1";
    pub const POONEN: &str = "Poonen, Prop. A.1: gon <= 2g-2, gon <= g with a rational point, gon_C <= (g+3)/2";
    pub const OGG: &str = "Ogg: #X0(N)(F_p^2) >= L_p(N); a degree-d map on X0+(N) gives degree 2d on X0(N)";
    pub const COUNT: &str = "#C(F_q) > d(q+1) implies gon_Q(C) > d";
    pub const KIM_SARNAK: &str = "Kim-Sarnak (Jeon-Kim-Park, Thm 1.2): index <= (12000/119) gon_C, halved for a degree-2 quotient";
    pub const CS: &str = "Castelnuovo-Severi inequality with a degree-4 map and the degree-2 quotient map";
    pub const QUOTIENT: &str = "composition X0+(N) -> X0(N)/<w_d, w_N> -> P^1";
    pub const TOWER: &str = "Tower theorem (Nguyen-Saito): gon_C = 4 and g >= 10 with a rational point force gon_Q = 4";
}

struct Assembly {
    gon_q: GonalityInterval,
    gon_c: GonalityInterval,
    evidence: Vec<Evidence>,
    certificates_used: Vec<String>,
}

impl Assembly {
    /// Apply a bound, keeping the evidence only if it tightened an interval.
    /// C-lower bounds also bound Q from below, Q-upper bounds also bound C.
    fn apply(&mut self, ev: Evidence) -> bool {
        let Conclusion { field, relation, value } = ev.conclusion;
        let changed = match (field, relation) {
            (FieldTag::Q, Relation::AtLeast) => self.gon_q.raise_lower(value),
            (FieldTag::C, Relation::AtLeast) => self.gon_c.raise_lower(value) | self.gon_q.raise_lower(value),
            (FieldTag::Q, Relation::AtMost) => self.gon_q.cap_upper(value) | self.gon_c.cap_upper(value),
            (FieldTag::C, Relation::AtMost) => self.gon_c.cap_upper(value),
        };
        if changed {
            if ev.kind == EvidenceKind::Certificate {
                if let Some(label) = ev.text("certificate") {
                    self.certificates_used.push(label.to_string());
                }
            }
            self.evidence.push(ev);
        }
        changed
    }

    fn tower(&mut self, genus: u64) {
        if self.gon_c.lower == 4 && tower_rule(genus, self.gon_q.lower > 4) {
            self.apply(
                Evidence::new(EvidenceKind::TowerRule, Conclusion::at_least(FieldTag::C, 5), cite::TOWER)
                    .with("genus", genus)
                    .with("gonQ_lower", self.gon_q.lower)
                    .with("gonC_lower", self.gon_c.lower),
            );
        }
    }
}

fn fricke(level: &Level) -> Result<AtkinLehnerKey, ModsymError> {
    AtkinLehnerKey::new(level, level.n())
}

/// One representative d of each group ⟨w_d, w_N⟩ with 1 < d < N/d.
fn quotient_indices(level: &Level) -> Vec<u64> {
    let n = level.n();
    level.exact_divisors().into_iter().filter(|&d| d > 1 && d * d < n).collect()
}

fn quotient_genus_of(space: &ModularSymbolSpace, d: u64) -> Result<u64, ClassifyError> {
    let level = space.level();
    let keys = [AtkinLehnerKey::new(level, d)?, fricke(level)?];
    Ok(space.quotient_genus(&keys)?)
}

fn certificate_evidence(cert: &Certificate, genus: u64, gon_c_lower: u64) -> Option<Evidence> {
    let conclusion = match cert.claim {
        Claim::FpGonalityAtLeast { d, .. } => Conclusion::at_least(FieldTag::Q, d),
        // β₂,₂ = 0 excludes a g¹₄ only on curves of genus >= 5 that are not
        // hyperelliptic or trigonal
        Claim::Beta22Zero if genus >= 5 && gon_c_lower >= 4 => Conclusion::at_least(FieldTag::C, 5),
        Claim::Beta22Zero => return None,
        Claim::CliffordIndexTwo => Conclusion::at_most(FieldTag::C, 4),
        Claim::ExplicitDegree4Map => Conclusion::at_most(FieldTag::Q, 4),
        Claim::ExplicitDegree3Map => Conclusion::at_most(FieldTag::Q, 3),
    };
    Some(
        Evidence::new(EvidenceKind::Certificate, conclusion, &cert.source)
            .with("certificate", cert.label())
            .with("genus", genus),
    )
}

/// Analyze one level, building its modular-symbol space.
pub fn analyze_level(n: u64, options: &AnalyzeOptions) -> Result<LevelReport, ClassifyError> {
    let level = Level::new(n)?;
    if n < 2 {
        return Err(ClassifyError::BadRange(n, n));
    }
    analyze_space(&build_space(&level), options)
}

/// Analyze the level of an existing space; its operator memo is reused.
pub fn analyze_space(space: &ModularSymbolSpace, options: &AnalyzeOptions) -> Result<LevelReport, ClassifyError> {
    let level = space.level();
    let n = level.n();
    if n < 2 {
        return Err(ClassifyError::BadRange(n, n));
    }
    let primes = options.primes_for(level)?;
    let facts = embedded_facts();
    let w_n = fricke(level)?;
    let genus = space.quotient_genus(&[w_n])?;
    let mut a = Assembly {
        gon_q: GonalityInterval::new(FieldTag::Q),
        gon_c: GonalityInterval::new(FieldTag::C),
        evidence: Vec::new(),
        certificates_used: Vec::new(),
    };
    let poonen_genus = |kind, c, cite: &str, rule: &str| Evidence::new(kind, c, cite).with("rule", rule).with("genus", genus);

    // (1) genus and its immediate consequences
    match genus {
        0 => {
            a.apply(poonen_genus(EvidenceKind::PoonenGenus, Conclusion::at_most(FieldTag::Q, 1), cite::GENUS, "genus_zero"));
        }
        _ => {
            a.apply(poonen_genus(EvidenceKind::PoonenGenus, Conclusion::at_least(FieldTag::C, 2), cite::GENUS, "positive_genus"));
        }
    }
    if genus == 1 {
        a.apply(poonen_genus(EvidenceKind::PoonenGenus, Conclusion::at_most(FieldTag::Q, 2), cite::ELLIPTIC, "elliptic"));
    }
    if genus >= 3 {
        if facts.is_hyperelliptic(n) {
            a.apply(
                Evidence::new(EvidenceKind::EmbeddedFact, Conclusion::at_most(FieldTag::Q, 2), &facts.hyperelliptic_source)
                    .with("rule", "hyperelliptic")
                    .with("genus", genus),
            );
        } else {
            a.apply(
                Evidence::new(EvidenceKind::EmbeddedFact, Conclusion::at_least(FieldTag::C, 3), &facts.hyperelliptic_source)
                    .with("rule", "not_hyperelliptic")
                    .with("genus", genus),
            );
            if genus >= facts.trigonal_min_genus {
                let (c, rule) = if facts.is_high_genus_trigonal(n) {
                    (Conclusion::at_most(FieldTag::Q, 3), "trigonal")
                } else {
                    (Conclusion::at_least(FieldTag::C, 4), "not_trigonal")
                };
                a.apply(
                    Evidence::new(EvidenceKind::EmbeddedFact, c, &facts.trigonal_source)
                        .with("rule", rule)
                        .with("genus", genus),
                );
            }
        }
    }

    // (2) upper bounds
    if genus >= 2 {
        let (ub_q, ub_c) = poonen_upper_bounds(genus, true).expect("genus >= 2");
        a.apply(poonen_genus(EvidenceKind::PoonenGenus, Conclusion::at_most(FieldTag::Q, ub_q), cite::POONEN, "poonen_q"));
        a.apply(poonen_genus(EvidenceKind::PoonenGenus, Conclusion::at_most(FieldTag::C, ub_c), cite::POONEN, "poonen_c"));
    }
    let mut quotient_genera = Vec::new();
    for d in quotient_indices(level) {
        let gq = quotient_genus_of(space, d)?;
        quotient_genera.push((d, gq));
        let bound = match gq {
            0 => Some(2),
            1 | 2 => Some(4),
            _ if facts.hyperelliptic_quotient(n, d) => Some(4),
            _ => None,
        };
        if let Some(b) = bound {
            let mut ev = Evidence::new(EvidenceKind::QuotientMap, Conclusion::at_most(FieldTag::Q, b), cite::QUOTIENT)
                .with("d", d)
                .with("genus_quotient", gq);
            if gq >= 3 {
                ev = ev.with("fact", facts.hyperelliptic_quotients_source.as_str());
            }
            a.apply(ev);
        }
    }

    // (3) lower bounds
    let mut counts = Vec::new();
    if genus >= 3 {
        for &p in &primes {
            for r in 1..=2 {
                let req = CountRequest::new(level, &[n], p, r)?;
                let (count, _) = count_with_genus(space, &req)?;
                let q = req.q();
                counts.push(PointCount { p, r, q, count });
                a.apply(
                    Evidence::new(
                        EvidenceKind::ExplicitCount,
                        Conclusion::at_least(FieldTag::Q, gonality_lb_from_count(count, q)),
                        cite::COUNT,
                    )
                    .with("p", p)
                    .with("r", r as u64)
                    .with("q", q)
                    .with("count", count),
                );
            }
        }
    }
    for &p in &primes {
        let l = ogg_l(level, p)?;
        a.apply(
            Evidence::new(EvidenceKind::OggCount, Conclusion::at_least(FieldTag::Q, ogg_plus_lower_bound(&l, p)), cite::OGG)
                .with("p", p)
                .with("L_p", l.to_string()),
        );
    }
    let index = psi(level);
    a.apply(
        Evidence::new(EvidenceKind::KimSarnak, Conclusion::at_least(FieldTag::C, kim_sarnak_plus_lb(&index)), cite::KIM_SARNAK)
            .with("psi", index.to_string())
            .with("gonC_X0_lower", kim_sarnak_lb(&index)),
    );
    for &(d, gq) in &quotient_genera {
        if a.gon_c.lower == 4 && cs_forces_degree4_factorization(genus, gq) && facts.nonhyperelliptic_quotient(n, d) {
            a.apply(
                Evidence::new(EvidenceKind::CastelnuovoSeveri, Conclusion::at_least(FieldTag::C, 5), cite::CS)
                    .with("d", d)
                    .with("genus_plus", genus)
                    .with("genus_quotient", gq)
                    .with("fact", facts.nonhyperelliptic_quotients_source.as_str()),
            );
        }
    }
    a.tower(genus);

    // (4) certificates
    if options.use_certificates {
        for cert in certificates_for(n) {
            if let Some(ev) = certificate_evidence(cert, genus, a.gon_c.lower) {
                a.apply(ev);
            }
        }
        // certificates can raise gonQ past 4, which re-enables the tower rule
        a.tower(genus);
    }

    // (5) verdict
    let mut report = LevelReport {
        level: n,
        genus_plus: genus,
        counts,
        gon_q: a.gon_q,
        gon_c: a.gon_c,
        evidence: a.evidence,
        certificates_used: a.certificates_used,
        verdict: Verdict::ConsistentButIncomplete,
    };
    report.verdict = if facts.is_anomaly(n) {
        Verdict::PaperInconsistent
    } else {
        match report.agreement() {
            Agreement::Exact => Verdict::MatchesPaper,
            Agreement::Consistent => Verdict::ConsistentButIncomplete,
            Agreement::Contradiction => Verdict::PaperInconsistent,
        }
    };
    Ok(report)
}

fn check_range(min: u64, max: u64) -> Result<(), ClassifyError> {
    if min < 2 || min > max || max > MAX_VERIFY_LEVEL {
        return Err(ClassifyError::BadRange(min, max));
    }
    Ok(())
}

/// Reports for every level in [min, max], computed in parallel, ascending N.
pub fn analyze_range(min: u64, max: u64, options: &AnalyzeOptions) -> Result<Vec<LevelReport>, ClassifyError> {
    check_range(min, max)?;
    (min..=max).into_par_iter().map(|n| analyze_level(n, options)).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationSummary {
    pub exact: Vec<u64>,
    pub consistent: Vec<u64>,
    pub contradictions: Vec<u64>,
    /// Contradictions at levels recorded as anomalies.
    pub recorded_anomalies: Vec<u64>,
}

impl VerificationSummary {
    pub fn from_reports(reports: &[LevelReport]) -> Self {
        let facts = embedded_facts();
        let mut s = VerificationSummary::default();
        for r in reports {
            match r.agreement() {
                Agreement::Exact => s.exact.push(r.level),
                Agreement::Consistent => s.consistent.push(r.level),
                Agreement::Contradiction => {
                    s.contradictions.push(r.level);
                    if facts.is_anomaly(r.level) {
                        s.recorded_anomalies.push(r.level);
                    }
                }
            }
        }
        s
    }

    pub fn unexpected_contradictions(&self) -> Vec<u64> {
        self.contradictions
            .iter()
            .copied()
            .filter(|n| !self.recorded_anomalies.contains(n))
            .collect()
    }

    pub fn is_clean(&self) -> bool {
        self.unexpected_contradictions().is_empty()
    }
}

pub fn verify_against_paper(
    min: u64,
    max: u64,
    options: &AnalyzeOptions,
) -> Result<(Vec<LevelReport>, VerificationSummary), ClassifyError> {
    let reports = analyze_range(min, max, options)?;
    let summary = VerificationSummary::from_reports(&reports);
    Ok((reports, summary))
}

/// Recheck one evidence record from its parameters. Certificates and embedded
/// facts are checked against the tables, not recomputed.
pub fn replay_evidence(ev: &Evidence, space: &ModularSymbolSpace) -> Result<bool, ClassifyError> {
    let level = space.level();
    let n = level.n();
    let facts = embedded_facts();
    let c = ev.conclusion;
    let value = c.value;
    let genus = || -> Result<u64, ClassifyError> { Ok(space.quotient_genus(&[fricke(level)?])?) };
    let param = |name: &str| ev.uint(name);
    let ok = match ev.kind {
        EvidenceKind::OggCount => {
            let Some(p) = param("p") else { return Ok(false) };
            let l = ogg_l(level, p)?;
            ev.text("L_p") == Some(l.to_string().as_str())
                && c == Conclusion::at_least(FieldTag::Q, ogg_plus_lower_bound(&l, p))
        }
        EvidenceKind::ExplicitCount => {
            let (Some(p), Some(r), Some(count)) = (param("p"), param("r"), param("count")) else {
                return Ok(false);
            };
            let req = CountRequest::new(level, &[n], p, r as u32)?;
            let (recount, _) = count_with_genus(space, &req)?;
            recount == count
                && param("q") == Some(req.q())
                && c == Conclusion::at_least(FieldTag::Q, gonality_lb_from_count(count, req.q()))
        }
        EvidenceKind::KimSarnak => {
            let index = psi(level);
            ev.text("psi") == Some(index.to_string().as_str())
                && c == Conclusion::at_least(FieldTag::C, kim_sarnak_plus_lb(&index))
        }
        EvidenceKind::CastelnuovoSeveri => {
            let (Some(d), Some(gp), Some(gq)) = (param("d"), param("genus_plus"), param("genus_quotient")) else {
                return Ok(false);
            };
            gp == genus()?
                && gq == quotient_genus_of(space, d)?
                && cs_forces_degree4_factorization(gp, gq)
                && facts.nonhyperelliptic_quotient(n, d)
                && gp >= facts.trigonal_min_genus
                && !facts.is_high_genus_trigonal(n)
                && c == Conclusion::at_least(FieldTag::C, 5)
        }
        EvidenceKind::QuotientMap => {
            let (Some(d), Some(gq)) = (param("d"), param("genus_quotient")) else {
                return Ok(false);
            };
            let expected = match gq {
                0 => 2,
                1 | 2 => 4,
                _ if facts.hyperelliptic_quotient(n, d) => 4,
                _ => return Ok(false),
            };
            gq == quotient_genus_of(space, d)? && c == Conclusion::at_most(FieldTag::Q, expected)
        }
        EvidenceKind::PoonenGenus => {
            let g = genus()?;
            if param("genus") != Some(g) {
                return Ok(false);
            }
            match ev.text("rule") {
                Some("genus_zero") => g == 0 && c == Conclusion::at_most(FieldTag::Q, 1),
                Some("positive_genus") => g >= 1 && c == Conclusion::at_least(FieldTag::C, 2),
                Some("elliptic") => g == 1 && c == Conclusion::at_most(FieldTag::Q, 2),
                Some("poonen_q") => poonen_upper_bounds(g, true).is_ok_and(|(q, _)| c == Conclusion::at_most(FieldTag::Q, q)),
                Some("poonen_c") => poonen_upper_bounds(g, true).is_ok_and(|(_, cc)| c == Conclusion::at_most(FieldTag::C, cc)),
                _ => false,
            }
        }
        EvidenceKind::TowerRule => {
            let (Some(g), Some(q_lower), Some(c_lower)) = (param("genus"), param("gonQ_lower"), param("gonC_lower")) else {
                return Ok(false);
            };
            g == genus()? && c_lower >= 4 && tower_rule(g, q_lower > 4) && value == 5 && c.field == FieldTag::C
        }
        EvidenceKind::EmbeddedFact => {
            let g = genus()?;
            match ev.text("rule") {
                Some("hyperelliptic") => facts.is_hyperelliptic(n) && c == Conclusion::at_most(FieldTag::Q, 2),
                Some("not_hyperelliptic") => {
                    g >= 3 && !facts.is_hyperelliptic(n) && c == Conclusion::at_least(FieldTag::C, 3)
                }
                Some("not_trigonal") => {
                    g >= facts.trigonal_min_genus
                        && !facts.is_hyperelliptic(n)
                        && !facts.is_high_genus_trigonal(n)
                        && c == Conclusion::at_least(FieldTag::C, 4)
                }
                Some("trigonal") => {
                    g >= facts.trigonal_min_genus
                        && facts.is_high_genus_trigonal(n)
                        && c == Conclusion::at_most(FieldTag::Q, 3)
                }
                _ => false,
            }
        }
        EvidenceKind::Certificate => {
            let g = genus()?;
            certificates_for(n).any(|cert| {
                ev.text("certificate") == Some(cert.label().as_str())
                    && certificate_evidence(cert, g, 4).is_some_and(|e| e.conclusion == c)
            })
        }
    };
    Ok(ok)
}

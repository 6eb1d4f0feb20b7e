//! Embedded fact and certificate tables, parsed once from the shipped TOML.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, Level};

pub const DATA_FORMAT_VERSION: u32 = 1;

const FACTS_TOML: &str = include_str!("../../data/facts.toml");
const CERTIFICATES_TOML: &str = include_str!("../../data/certificates.toml");

#[derive(Deserialize)]
struct RawLevels {
    source: String,
    levels: Vec<u64>,
}

#[derive(Deserialize)]
struct RawRows {
    source: String,
    rows: Vec<Vec<u64>>,
}

#[derive(Deserialize)]
struct RawTrigonal {
    source: String,
    min_genus: u64,
    levels: Vec<u64>,
}

#[derive(Deserialize)]
struct RawClassification {
    source: String,
    trigonal_q: Vec<u64>,
    tetragonal_q_trigonal_c: Vec<u64>,
    tetragonal: Vec<u64>,
    tetragonal_c_only: Vec<u64>,
    anomalies: Vec<u64>,
}

#[derive(Deserialize)]
struct RawFacts {
    format_version: u32,
    hyperelliptic: RawLevels,
    trigonal: RawTrigonal,
    nonhyperelliptic_quotients: RawRows,
    hyperelliptic_quotients: RawRows,
    classification: RawClassification,
}

#[derive(Deserialize)]
struct RawCertificates {
    format_version: u32,
    fp_gonality: RawRows,
    fp_quotient_gonality: RawRows,
    beta22_zero: RawLevels,
    clifford_index_two: RawLevels,
    explicit_degree4_map: Vec<RawLevels>,
    explicit_degree3_map: RawLevels,
}

/// Reference class of a level, from the embedded classification lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Hyperelliptic,
    TrigonalQ,
    TetragonalQTrigonalC,
    Tetragonal,
    TetragonalCOnly,
}

#[derive(Debug)]
pub struct Facts {
    hyperelliptic: BTreeSet<u64>,
    pub hyperelliptic_source: String,
    /// From this genus on, trigonality over C happens only for `trigonal_levels`.
    pub trigonal_min_genus: u64,
    trigonal_levels: BTreeSet<u64>,
    pub trigonal_source: String,
    /// keyed by (N, min(d, N/d)) since w_d and w_{N/d} generate the same group with w_N
    nonhyperelliptic_quotients: BTreeSet<(u64, u64)>,
    pub nonhyperelliptic_quotients_source: String,
    hyperelliptic_quotients: BTreeSet<(u64, u64)>,
    pub hyperelliptic_quotients_source: String,
    classification: BTreeMap<u64, Classification>,
    pub classification_source: String,
    anomalies: BTreeSet<u64>,
}

fn group_key(n: u64, d: u64) -> (u64, u64) {
    (n, d.min(n / d))
}

fn quotient_rows(raw: &RawRows, what: &str) -> BTreeSet<(u64, u64)> {
    raw.rows
        .iter()
        .map(|row| {
            let [n, d] = row[..] else {
                panic!("{what}: rows must be [N, d], got {row:?}");
            };
            let level = Level::new(n).unwrap_or_else(|e| panic!("{what}: {e}"));
            assert!(
                d > 1 && d < n && level.exactly_divides(d),
                "{what}: {d} is not a proper exact divisor of {n}"
            );
            group_key(n, d)
        })
        .collect()
}

impl Facts {
    fn parse(text: &str) -> Facts {
        let raw: RawFacts = toml::from_str(text).unwrap_or_else(|e| panic!("malformed facts table: {e}"));
        assert_eq!(raw.format_version, DATA_FORMAT_VERSION, "facts table version");
        let c = &raw.classification;
        let mut classification = BTreeMap::new();
        for (levels, class) in [
            (&raw.hyperelliptic.levels, Classification::Hyperelliptic),
            (&c.trigonal_q, Classification::TrigonalQ),
            (&c.tetragonal_q_trigonal_c, Classification::TetragonalQTrigonalC),
            (&c.tetragonal, Classification::Tetragonal),
            (&c.tetragonal_c_only, Classification::TetragonalCOnly),
        ] {
            for &n in levels {
                assert!(n >= 2, "classification lists contain level {n}");
                if let Some(prev) = classification.insert(n, class) {
                    panic!("level {n} listed as both {prev:?} and {class:?}");
                }
            }
        }
        Facts {
            hyperelliptic: raw.hyperelliptic.levels.iter().copied().collect(),
            hyperelliptic_source: raw.hyperelliptic.source,
            trigonal_min_genus: raw.trigonal.min_genus,
            trigonal_levels: raw.trigonal.levels.iter().copied().collect(),
            trigonal_source: raw.trigonal.source,
            nonhyperelliptic_quotients: quotient_rows(&raw.nonhyperelliptic_quotients, "nonhyperelliptic_quotients"),
            nonhyperelliptic_quotients_source: raw.nonhyperelliptic_quotients.source,
            hyperelliptic_quotients: quotient_rows(&raw.hyperelliptic_quotients, "hyperelliptic_quotients"),
            hyperelliptic_quotients_source: raw.hyperelliptic_quotients.source,
            classification,
            classification_source: raw.classification.source,
            anomalies: raw.classification.anomalies.into_iter().collect(),
        }
    }

    pub fn is_hyperelliptic(&self, n: u64) -> bool {
        self.hyperelliptic.contains(&n)
    }

    /// Trigonal over C (and over Q) among curves of genus >= `trigonal_min_genus`.
    pub fn is_high_genus_trigonal(&self, n: u64) -> bool {
        self.trigonal_levels.contains(&n)
    }

    pub fn classification(&self, n: u64) -> Option<Classification> {
        self.classification.get(&n).copied()
    }

    pub fn is_trigonal_q(&self, n: u64) -> bool {
        self.classification(n) == Some(Classification::TrigonalQ)
    }

    pub fn is_tetragonal_c_only(&self, n: u64) -> bool {
        self.classification(n) == Some(Classification::TetragonalCOnly)
    }

    /// Levels of one class, ascending.
    pub fn levels(&self, class: Classification) -> Vec<u64> {
        self.classification
            .iter()
            .filter(|&(_, &c)| c == class)
            .map(|(&n, _)| n)
            .collect()
    }

    pub fn nonhyperelliptic_quotient(&self, n: u64, d: u64) -> bool {
        self.nonhyperelliptic_quotients.contains(&group_key(n, d))
    }

    pub fn hyperelliptic_quotient(&self, n: u64, d: u64) -> bool {
        self.hyperelliptic_quotients.contains(&group_key(n, d))
    }

    pub fn is_anomaly(&self, n: u64) -> bool {
        self.anomalies.contains(&n)
    }

    pub fn anomalies(&self) -> Vec<u64> {
        self.anomalies.iter().copied().collect()
    }
}

pub fn embedded_facts() -> &'static Facts {
    static FACTS: OnceLock<Facts> = OnceLock::new();
    FACTS.get_or_init(|| Facts::parse(FACTS_TOML))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "claim")]
pub enum Claim {
    /// gon over F_p is at least d; `via_quotient` names w_e when the bound
    /// was computed on X₀(N)/⟨w_e, w_N⟩ and lifted through the degree-2 map.
    FpGonalityAtLeast { d: u64, p: u64, via_quotient: Option<u64> },
    Beta22Zero,
    CliffordIndexTwo,
    ExplicitDegree4Map,
    ExplicitDegree3Map,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::FpGonalityAtLeast { d, p, via_quotient: None } => write!(f, "FpGonalityAtLeast(d={d}, p={p})"),
            Claim::FpGonalityAtLeast { d, p, via_quotient: Some(e) } => {
                write!(f, "FpGonalityAtLeast(d={d}, p={p}, quotient w_{e})")
            }
            Claim::Beta22Zero => write!(f, "Beta22Zero"),
            Claim::CliffordIndexTwo => write!(f, "CliffordIndexTwo"),
            Claim::ExplicitDegree4Map => write!(f, "ExplicitDegree4Map"),
            Claim::ExplicitDegree3Map => write!(f, "ExplicitDegree3Map"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub level: u64,
    #[serde(flatten)]
    pub claim: Claim,
    pub source: String,
}

impl Certificate {
    pub fn label(&self) -> String {
        format!("{} {}", self.level, self.claim)
    }
}

fn parse_certificates(text: &str) -> Vec<Certificate> {
    let raw: RawCertificates = toml::from_str(text).unwrap_or_else(|e| panic!("malformed certificate table: {e}"));
    assert_eq!(raw.format_version, DATA_FORMAT_VERSION, "certificate table version");
    let mut out = Vec::new();
    let check_level = |n: u64| Level::new(n).unwrap_or_else(|e| panic!("certificate level: {e}"));
    for row in &raw.fp_gonality.rows {
        let [n, p, d] = row[..] else {
            panic!("fp_gonality rows must be [N, p, d], got {row:?}");
        };
        let level = check_level(n);
        assert!(is_prime(p) && !level.is_divisible_by(p), "fp_gonality: bad prime {p} for {n}");
        out.push(Certificate {
            level: n,
            claim: Claim::FpGonalityAtLeast { d, p, via_quotient: None },
            source: raw.fp_gonality.source.clone(),
        });
    }
    for row in &raw.fp_quotient_gonality.rows {
        let [n, p, e] = row[..] else {
            panic!("fp_quotient_gonality rows must be [N, p, d], got {row:?}");
        };
        let level = check_level(n);
        assert!(is_prime(p) && !level.is_divisible_by(p), "fp_quotient_gonality: bad prime {p} for {n}");
        assert!(level.exactly_divides(e), "fp_quotient_gonality: {e} does not exactly divide {n}");
        out.push(Certificate {
            level: n,
            claim: Claim::FpGonalityAtLeast { d: 5, p, via_quotient: Some(e) },
            source: raw.fp_quotient_gonality.source.clone(),
        });
    }
    let mut push_levels = |table: &RawLevels, claim: Claim| {
        for &n in &table.levels {
            check_level(n);
            out.push(Certificate {
                level: n,
                claim: claim.clone(),
                source: table.source.clone(),
            });
        }
    };
    push_levels(&raw.beta22_zero, Claim::Beta22Zero);
    push_levels(&raw.clifford_index_two, Claim::CliffordIndexTwo);
    for table in &raw.explicit_degree4_map {
        push_levels(table, Claim::ExplicitDegree4Map);
    }
    push_levels(&raw.explicit_degree3_map, Claim::ExplicitDegree3Map);
    out.sort_by_key(|c| c.level);
    out
}

/// All certificates, sorted by level (stable within a level).
pub fn certificates() -> &'static [Certificate] {
    static CERTS: OnceLock<Vec<Certificate>> = OnceLock::new();
    CERTS.get_or_init(|| parse_certificates(CERTIFICATES_TOML))
}

pub fn certificates_for(n: u64) -> impl Iterator<Item = &'static Certificate> {
    let all = certificates();
    let start = all.partition_point(|c| c.level < n);
    all[start..].iter().take_while(move |c| c.level == n)
}

//! Gonality inequalities: Ogg elimination, count bounds, Kim–Sarnak,
//! Castelnuovo–Severi, Poonen's genus bounds and the tower rule.
//!
//! The functions here are pure. [`Evidence`] records carry enough parameters
//! to replay each deduction.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ogg_l, primes_up_to, Level};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("genus {0} is below 2, the genus bounds need g >= 2")]
    GenusTooSmall(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    Q,
    C,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::C => write!(f, "C"),
        }
    }
}

/// [lower, upper] with an open upper end when unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GonalityInterval {
    #[serde(skip)]
    pub field: FieldTag,
    pub lower: u64,
    pub upper: Option<u64>,
}

impl GonalityInterval {
    pub fn new(field: FieldTag) -> Self {
        GonalityInterval {
            field,
            lower: 1,
            upper: None,
        }
    }

    /// Returns true if the bound improved the interval.
    pub fn raise_lower(&mut self, v: u64) -> bool {
        if v > self.lower {
            self.lower = v;
            true
        } else {
            false
        }
    }

    pub fn cap_upper(&mut self, v: u64) -> bool {
        match self.upper {
            Some(u) if u <= v => false,
            _ => {
                self.upper = Some(v);
                true
            }
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.lower && self.upper.map_or(true, |u| v <= u)
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_some_and(|u| u < self.lower)
    }

    pub fn exact(&self) -> Option<u64> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

impl fmt::Display for GonalityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) if u == self.lower => write!(f, "{u}"),
            Some(u) => write!(f, "[{}, {u}]", self.lower),
            None => write!(f, "[{}, ?]", self.lower),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EvidenceKind {
    OggCount,
    ExplicitCount,
    KimSarnak,
    CastelnuovoSeveri,
    QuotientMap,
    PoonenGenus,
    TowerRule,
    Certificate,
    EmbeddedFact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<=")]
    AtMost,
}

/// A one-sided bound on one of the two gonalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conclusion {
    pub field: FieldTag,
    pub relation: Relation,
    pub value: u64,
}

impl Conclusion {
    pub fn at_least(field: FieldTag, value: u64) -> Self {
        Conclusion {
            field,
            relation: Relation::AtLeast,
            value,
        }
    }

    pub fn at_most(field: FieldTag, value: u64) -> Self {
        Conclusion {
            field,
            relation: Relation::AtMost,
            value,
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::AtLeast => ">=",
            Relation::AtMost => "<=",
        };
        write!(f, "gon{} {op} {}", self.field, self.value)
    }
}

/// Parameter values are integers, lists of integers or exact text (rationals).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Ints(Vec<u64>),
    Text(String),
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v as i64)
    }
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

impl From<Vec<u64>> for Param {
    fn from(v: Vec<u64>) -> Self {
        Param::Ints(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub kind: EvidenceKind,
    pub params: BTreeMap<String, Param>,
    pub conclusion: Conclusion,
    pub citation: String,
}

impl Evidence {
    pub fn new(kind: EvidenceKind, conclusion: Conclusion, citation: &str) -> Self {
        Evidence {
            kind,
            params: BTreeMap::new(),
            conclusion,
            citation: citation.to_string(),
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<Param>) -> Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        match self.params.get(name)? {
            Param::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn uint(&self, name: &str) -> Option<u64> {
        self.int(name).and_then(|v| u64::try_from(v).ok())
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.params.get(name)? {
            Param::Text(s) => Some(s),
            _ => None,
        }
    }
}

/// ceil(a / b) for b > 0.
fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// Lower bound on gon_Q(X₀⁺(N)) from Ogg's count at p: a map of degree d on
/// X₀⁺ gives one of degree 2d on X₀, so gon_Q(X₀⁺) ≥ ⌈L_p / (2(p²+1))⌉.
pub fn ogg_plus_lower_bound(l_p: &BigRational, p: u64) -> u64 {
    let denom = BigRational::from_integer(BigInt::from(2 * (p * p + 1)));
    let x = l_p / denom;
    ceil_div(x.numer(), x.denom()).to_u64().unwrap_or(u64::MAX)
}

/// Smallest prime p ≤ p_bound, p ∤ N, with L_p(N) > 2·d_max·(p²+1).
pub fn ogg_eliminates(level: &Level, d_max: u64, p_bound: u64) -> Option<u64> {
    primes_up_to(p_bound).into_iter().find(|&p| {
        !level.is_divisible_by(p)
            && ogg_l(level, p).is_ok_and(|l| {
                l > BigRational::from_integer(BigInt::from(2 * d_max * (p * p + 1)))
            })
    })
}

/// #C(F_q) > d(q+1) implies gon_Q(C) > d; the best such bound is ⌈count/(q+1)⌉.
pub fn gonality_lb_from_count(count: u64, q: u64) -> u64 {
    count.div_ceil(q + 1)
}

/// Smallest d with index ≤ (12000/119)·d: a lower bound on gon_C(X₀(N)).
pub fn kim_sarnak_lb(index: &BigUint) -> u64 {
    let num = BigUint::from(119u32) * index;
    num.div_ceil(&BigUint::from(12000u32)).to_u64().unwrap_or(u64::MAX)
}

/// gon_C(X₀⁺(N)) ≥ ⌈gon_C(X₀(N)) / 2⌉ through the degree-2 quotient.
pub fn kim_sarnak_plus_lb(index: &BigUint) -> u64 {
    kim_sarnak_lb(index).div_ceil(2)
}

/// g(X) ≤ m·g(Y) + n·g(Z) + (m−1)(n−1).
pub fn cs_holds(gx: u64, m: u64, gy: u64, n: u64, gz: u64) -> bool {
    gx <= m * gy + n * gz + (m - 1) * (n - 1)
}

/// A degree-4 map to P¹ and the degree-2 quotient of genus g_quotient must
/// factor through a common map when g_plus > 2·g_quotient + 3.
pub fn cs_forces_degree4_factorization(g_plus: u64, g_quotient: u64) -> bool {
    !cs_holds(g_plus, 4, 0, 2, g_quotient)
}

/// (ubQ, ubC) from gon ≤ 2g−2, gon ≤ g with a rational point, and
/// gon_C ≤ ⌊(g+3)/2⌋.
pub fn poonen_upper_bounds(g: u64, has_rational_point: bool) -> Result<(u64, u64), BoundsError> {
    if g < 2 {
        return Err(BoundsError::GenusTooSmall(g));
    }
    let mut ub_q = 2 * g - 2;
    if has_rational_point {
        ub_q = ub_q.min(g);
    }
    let ub_c = ub_q.min((g + 3) / 2);
    Ok((ub_q, ub_c))
}

/// gon_C = 4 and g ≥ 10 with a rational point force gon_Q = 4. Returns true
/// when the contrapositive applies, i.e. gon_C ≠ 4 follows.
pub fn tower_rule(g: u64, gon_q_not_4: bool) -> bool {
    g >= 10 && gon_q_not_4
}

//! Point counts of X₀(N) and its Atkin–Lehner quotients over F_p and F_{p²}.
//!
//! With S the cuspidal symbols fixed by the group, g_W = dim S / 2,
//! t₁ = tr(T_p | S) and t₂ = tr(T_p² | S):
//!
//!   #X_W(F_p)  = p + 1 − t₁/2
//!   #X_W(F_p²) = p² + 1 − t₂/2 + 2p·g_W

use num_integer::Roots;
use thiserror::Error;

use crate::arith::{is_prime, ArithError, Level};
use crate::exactla::Rat;
use crate::modsym::{build_space, AtkinLehnerKey, ModsymError, ModularSymbolSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("prime {p} divides the level {n}")]
    BadReduction { n: u64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be 1 or 2, got {0}")]
    BadExponent(u32),
    #[error("non-integral point count {value} for N = {n}, p = {p}, r = {r}")]
    NonIntegerCount { n: u64, p: u64, r: u32, value: String },
    #[error(transparent)]
    Modsym(#[from] ModsymError),
}

impl From<ArithError> for CountError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::BadReduction { n, p } => CountError::BadReduction { n, p },
            ArithError::NotPrime(p) => CountError::NotPrime(p),
            other => CountError::Modsym(other.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRequest {
    pub level: Level,
    /// Atkin–Lehner indices; empty means X₀(N) itself.
    pub keys: Vec<AtkinLehnerKey>,
    pub p: u64,
    pub r: u32,
}

impl CountRequest {
    pub fn new(level: &Level, qs: &[u64], p: u64, r: u32) -> Result<Self, CountError> {
        if !is_prime(p) {
            return Err(CountError::NotPrime(p));
        }
        if level.is_divisible_by(p) {
            return Err(CountError::BadReduction { n: level.n(), p });
        }
        if !(1..=2).contains(&r) {
            return Err(CountError::BadExponent(r));
        }
        let keys = qs
            .iter()
            .map(|&q| AtkinLehnerKey::new(level, q))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CountRequest {
            level: level.clone(),
            keys,
            p,
            r,
        })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }
}

/// Count points, building the modular-symbol space for the level.
pub fn count_points(req: &CountRequest) -> Result<u64, CountError> {
    count_points_in(&build_space(&req.level), req)
}

/// Count points using an already built space of the same level.
pub fn count_points_in(space: &ModularSymbolSpace, req: &CountRequest) -> Result<u64, CountError> {
    Ok(count_with_genus(space, req)?.0)
}

/// The count together with the genus g_W of the curve counted.
pub fn count_with_genus(space: &ModularSymbolSpace, req: &CountRequest) -> Result<(u64, u64), CountError> {
    if space.level() != &req.level {
        return Err(ModsymError::LevelMismatch {
            key: req.level.n(),
            space: space.level().n(),
        }
        .into());
    }
    let genus = if req.keys.is_empty() {
        space.cuspidal_dimension() as u64 / 2
    } else {
        space.quotient_genus(&req.keys)?
    };
    let (t1, t2) = space.fixed_hecke_traces(&req.keys, req.p)?;
    let p = Rat::from_int(req.p as i64);
    let half = Rat::new(1, 2);
    let value = match req.r {
        1 => &(&p + &Rat::ONE) - &(&t1 * &half),
        _ => {
            let p2 = &p * &p;
            let tail = &(&Rat::from_int(2 * genus as i64) * &p) - &(&t2 * &half);
            &(&p2 + &Rat::ONE) + &tail
        }
    };
    match value.to_i64() {
        Some(v) if v >= 0 => Ok((v as u64, genus)),
        _ => Err(CountError::NonIntegerCount {
            n: req.level.n(),
            p: req.p,
            r: req.r,
            value: value.to_string(),
        }),
    }
}

/// Integer window [max(0, q+1 − ⌊2g√q⌋), q+1 + ⌊2g√q⌋] containing #C(F_q).
pub fn hasse_weil_window(genus: u64, q: u64) -> (u64, u64) {
    let g = genus as u128;
    let width = (4 * g * g * q as u128).sqrt() as u64;
    ((q + 1).saturating_sub(width), q + 1 + width)
}

//! Arithmetic of the level: factorization, the index ψ(N), elliptic point
//! and cusp counts for Γ₀(N), the genus of X₀(N), and Ogg's bound L_p(N).
//!
//! Everything here is a pure function of the factorization of N. Quantities
//! that can grow (ψ, L_p, the genus numerator) are computed in
//! arbitrary-precision integers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} divides the level {n}")]
    BadReduction { n: u64, p: u64 },
    #[error("genus formula gave a non-integer for N = {0}")]
    NonIntegralGenus(u64),
}

/// A positive integer together with its prime factorization.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Level {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level({})", self.n)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

impl Level {
    pub fn new(n: u64) -> Result<Self, ArithError> {
        if n == 0 {
            return Err(ArithError::ZeroLevel);
        }
        Ok(factorize(n))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Prime factorization in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_divisible_by(&self, m: u64) -> bool {
        m != 0 && self.n % m == 0
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Divisors Q with gcd(Q, N/Q) = 1, ascending (includes 1 and N).
    pub fn exact_divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let pe = p.pow(e);
            let len = divs.len();
            for i in 0..len {
                divs.push(divs[i] * pe);
            }
        }
        divs.sort_unstable();
        divs
    }

    /// True iff Q | N and gcd(Q, N/Q) = 1.
    pub fn exactly_divides(&self, q: u64) -> bool {
        q != 0 && self.n % q == 0 && q.gcd(&(self.n / q)) == 1
    }
}

/// Trial-division factorization. N = 1 has the empty factorization.
pub fn factorize(n: u64) -> Level {
    assert!(n >= 1, "factorize requires N >= 1");
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Level { n, factors }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.factors.len() == 1 && f.factors[0].1 == 1
}

/// Primes p with p <= bound, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let b = bound as usize;
    let mut sieve = vec![true; b + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= b {
        if sieve[i] {
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=b).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let level = factorize(n);
    level
        .factors
        .iter()
        .fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// ψ(N) = N ∏_{q | N} (1 + 1/q), the index of Γ₀(N) in SL₂(Z).
pub fn psi(level: &Level) -> BigUint {
    level
        .factors
        .iter()
        .fold(BigUint::one(), |acc, &(p, e)| {
            acc * BigUint::from(p).pow(e - 1) * BigUint::from(p + 1)
        })
}

/// Number of distinct prime divisors.
pub fn omega(level: &Level) -> u32 {
    level.factors.len() as u32
}

/// Kronecker symbol (a | n) for n > 0, via quadratic reciprocity.
pub fn kronecker(a: i64, n: u64) -> i32 {
    assert!(n > 0, "kronecker symbol needs a positive modulus");
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    // factor out powers of two from n using (a|2)
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    // now n odd: Jacobi symbol
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Number of elliptic points of order 2 on X₀(N).
pub fn nu2(level: &Level) -> u64 {
    if level.n % 4 == 0 {
        return 0;
    }
    level
        .primes()
        // (-4|p) agrees with (-1|p) for odd p and vanishes at 2
        .map(|p| (1 + kronecker(-4, p)) as u64)
        .product()
}

/// Number of elliptic points of order 3 on X₀(N).
pub fn nu3(level: &Level) -> u64 {
    if level.n % 9 == 0 {
        return 0;
    }
    level
        .primes()
        .map(|p| (1 + kronecker(-3, p)) as u64)
        .product()
}

/// Number of cusps of X₀(N): Σ_{d | N} φ(gcd(d, N/d)).
pub fn nu_inf(level: &Level) -> u64 {
    level
        .divisors()
        .into_iter()
        .map(|d| euler_phi(d.gcd(&(level.n / d))))
        .sum()
}

/// Genus of X₀(N) from g = 1 + ψ/12 − ν₂/4 − ν₃/3 − ν_∞/2.
pub fn genus_x0(level: &Level) -> Result<u64, ArithError> {
    let twelve_g = BigInt::from(12)
        + BigInt::from(psi(level))
        - BigInt::from(3 * nu2(level))
        - BigInt::from(4 * nu3(level))
        - BigInt::from(6 * nu_inf(level));
    let (q, r) = twelve_g.div_rem(&BigInt::from(12));
    if !r.is_zero() || q < BigInt::zero() {
        return Err(ArithError::NonIntegralGenus(level.n));
    }
    q.to_u64().ok_or(ArithError::NonIntegralGenus(level.n))
}

/// Ogg's lower bound L_p(N) = (p − 1)ψ(N)/12 + 2^ω(N) on #X₀(N)(F_{p²}).
pub fn ogg_l(level: &Level, p: u64) -> Result<BigRational, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if level.n % p == 0 {
        return Err(ArithError::BadReduction { n: level.n, p });
    }
    let main = BigRational::new(BigInt::from(p - 1) * BigInt::from(psi(level)), BigInt::from(12));
    let tail = BigInt::one() << omega(level) as usize;
    Ok(main + BigRational::from_integer(tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(n: u64) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(lv(268).factors(), &[(2, 2), (67, 1)]);
        assert!(lv(1).factors().is_empty());
        assert_eq!(lv(456).factors(), &[(2, 3), (3, 1), (19, 1)]);
        assert_eq!(Level::new(0), Err(ArithError::ZeroLevel));
    }

    #[test]
    fn psi_and_omega() {
        for p in [2u64, 3, 11, 97, 271] {
            assert_eq!(psi(&lv(p)), BigUint::from(p + 1));
        }
        assert_eq!(psi(&lv(268)), BigUint::from(408u32));
        assert_eq!(psi(&lv(456)), BigUint::from(960u32));
        assert_eq!(omega(&lv(1)), 0);
        assert_eq!(omega(&lv(268)), 2);
        assert_eq!(omega(&lv(456)), 3);
    }

    #[test]
    fn kronecker_case_tables() {
        for p in primes_up_to(500).into_iter().filter(|&p| p > 3) {
            let m1 = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(kronecker(-1, p), m1, "(-1|{p})");
            assert_eq!(kronecker(-4, p), m1, "(-4|{p})");
            let m3 = if p % 3 == 1 { 1 } else { -1 };
            assert_eq!(kronecker(-3, p), m3, "(-3|{p})");
        }
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-1, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 3), 0);
        assert_eq!(kronecker(-1, 3), -1);
    }

    #[test]
    fn elliptic_and_cusp_counts() {
        assert_eq!(nu_inf(&lv(11)), 2);
        assert_eq!(nu_inf(&lv(4)), 3);
        assert_eq!(nu_inf(&lv(36)), 12);
        assert_eq!(nu2(&lv(22)), 0);
        assert_eq!(nu3(&lv(22)), 0);
        assert_eq!(nu2(&lv(1)), 1);
        assert_eq!(nu3(&lv(1)), 1);
        assert_eq!(nu2(&lv(13)), 2);
        assert_eq!(nu3(&lv(13)), 2);
        assert_eq!(nu2(&lv(8)), 0);
        assert_eq!(nu2(&lv(2)), 1);
        assert_eq!(nu3(&lv(3)), 1);
        assert_eq!(nu3(&lv(9)), 0);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_x0(&lv(1)).unwrap(), 0);
        assert_eq!(genus_x0(&lv(11)).unwrap(), 1);
        assert_eq!(genus_x0(&lv(22)).unwrap(), 2);
        assert_eq!(genus_x0(&lv(37)).unwrap(), 2);
        assert_eq!(genus_x0(&lv(10)).unwrap(), 0);
    }

    #[test]
    fn genus_is_integral_everywhere() {
        for n in 1..=3000 {
            genus_x0(&lv(n)).unwrap();
        }
    }

    #[test]
    fn ogg_examples() {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(ogg_l(&lv(268), 3).unwrap(), int(72));
        assert_eq!(ogg_l(&lv(456), 5).unwrap(), int(328));
        assert_eq!(ogg_l(&lv(255), 2).unwrap(), int(44));
        assert_eq!(
            ogg_l(&lv(268), 2),
            Err(ArithError::BadReduction { n: 268, p: 2 })
        );
        assert_eq!(ogg_l(&lv(268), 9), Err(ArithError::NotPrime(9)));
    }

    #[test]
    fn psi_exceeds_n_exactly_off_primes() {
        for n in 2..=10_000u64 {
            let l = lv(n);
            let v = psi(&l);
            assert!(v >= BigUint::from(n + 1));
            assert_eq!(v == BigUint::from(n + 1), is_prime(n), "N = {n}");
        }
    }

    #[test]
    fn cusp_count_at_least_two() {
        for n in 2..=2000u64 {
            assert!(nu_inf(&lv(n)) >= 2);
        }
    }

    #[test]
    fn exact_divisors_of_level() {
        assert_eq!(lv(120).exact_divisors(), vec![1, 3, 5, 8, 15, 24, 40, 120]);
        assert!(lv(120).exactly_divides(8));
        assert!(!lv(120).exactly_divides(4));
        assert_eq!(lv(12).divisors(), vec![1, 2, 3, 4, 6, 12]);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn psi_is_multiplicative(m in 1u64..400, n in 1u64..400) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(psi(&lv(m * n)), psi(&lv(m)) * psi(&lv(n)));
        }
    }
}

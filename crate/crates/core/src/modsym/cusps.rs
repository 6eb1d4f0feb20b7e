//! Cusps of Γ₀(N) up to equivalence.
//!
//! The cusp a/c (lowest terms) determines d = gcd(c, N) and the residue
//! a·(c/d) mod gcd(d, N/d), which is a unit. The pair is a complete invariant,
//! and every pair (d, unit) occurs, so there are Σ_{d|N} φ(gcd(d, N/d)) classes.

use std::collections::HashMap;

use num_integer::Integer;

use super::sl2::Cusp;

/// Equivalence invariant (d, r) of a cusp for Γ₀(n).
pub fn cusp_invariant(n: u64, cusp: Cusp) -> (u64, u64) {
    let ni = n as i128;
    let (a, c) = (cusp.num as i128, cusp.den as i128);
    let d = c.gcd(&ni);
    let m = d.gcd(&(ni / d));
    let r = (a.rem_euclid(m) * (c / d).rem_euclid(m)) % m;
    (d as u64, r as u64)
}

/// Whether two cusps are Γ₀(n)-equivalent.
pub fn cusp_equivalent(a: Cusp, b: Cusp, n: u64) -> bool {
    cusp_invariant(n, a) == cusp_invariant(n, b)
}

#[derive(Debug, Clone)]
pub struct CuspClasses {
    n: u64,
    invariants: Vec<(u64, u64)>,
    representatives: Vec<Cusp>,
    index: HashMap<(u64, u64), usize>,
}

impl CuspClasses {
    /// Classes ordered by d ascending, then by residue.
    pub fn new(n: u64) -> Self {
        let mut invariants = Vec::new();
        let mut representatives = Vec::new();
        for d in (1..=n).filter(|d| n % d == 0) {
            let m = d.gcd(&(n / d));
            for r in (0..m).filter(|r| r.gcd(&m) == 1) {
                let rep = if d == n {
                    Cusp::INFINITY
                } else if d == 1 {
                    Cusp::new(0, 1)
                } else {
                    // a ≡ r mod m with gcd(a, d) = 1
                    let a = (0..)
                        .map(|k| r + k * m)
                        .find(|a| a.gcd(&d) == 1)
                        .expect("a unit lift exists");
                    Cusp::new(a as i64, d as i64)
                };
                debug_assert_eq!(cusp_invariant(n, rep), (d, r % m));
                invariants.push((d, r % m));
                representatives.push(rep);
            }
        }
        let index = invariants.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        CuspClasses {
            n,
            invariants,
            representatives,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[Cusp] {
        &self.representatives
    }

    pub fn invariants(&self) -> &[(u64, u64)] {
        &self.invariants
    }

    pub fn class_of(&self, cusp: Cusp) -> usize {
        self.index[&cusp_invariant(self.n, cusp)]
    }
}

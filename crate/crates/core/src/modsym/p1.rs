//! The projective line P¹(Z/N).
//!
//! Canonical form: the lexicographically smallest pair in the orbit of (c, d)
//! under multiplication by units of Z/N. Concretely the first coordinate is
//! gcd(c, N) (or 0 when c ≡ 0, in which case the form is (0, 1)), and the
//! second is the least value reachable by units fixing that first coordinate.
//! Elements are listed in increasing lexicographic order of canonical pairs.
//! Cache files index Manin symbols by position in this list, so changing the
//! rule requires bumping [`P1_RULE`].

use std::collections::HashMap;

use num_integer::Integer;

/// Identifier of the canonical-form rule, recorded in cache files.
pub const P1_RULE: &str = "lexmin-units-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct P1Element {
    pub c: u64,
    pub d: u64,
}

#[derive(Debug, Clone)]
pub struct P1List {
    n: u64,
    elements: Vec<P1Element>,
    index: HashMap<(u64, u64), usize>,
}

/// Extended gcd: returns (g, x, y) with a·x + b·y = g ≥ 0.
pub(crate) fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

impl P1List {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let mut elements = Vec::new();
        if n == 1 {
            elements.push(P1Element { c: 0, d: 0 });
        } else {
            elements.push(P1Element { c: 0, d: 1 });
            let mut firsts: Vec<u64> = (1..n).filter(|g| n % g == 0).collect();
            firsts.sort_unstable();
            for g in firsts {
                for v in 0..n {
                    if normalize_mod(n, g as i64, v as i64) == Some((g, v)) {
                        elements.push(P1Element { c: g, d: v });
                    }
                }
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.c, e.d), i))
            .collect();
        P1List { n, elements, index }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[P1Element] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> P1Element {
        self.elements[i]
    }

    pub fn normalize(&self, c: i64, d: i64) -> Option<P1Element> {
        normalize_mod(self.n, c, d).map(|(c, d)| P1Element { c, d })
    }

    /// Position of the class of (c : d), or `None` if gcd(c, d, N) ≠ 1.
    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        let (c, d) = normalize_mod(self.n, c, d)?;
        self.index.get(&(c, d)).copied()
    }
}

/// Canonical representative of (c : d) in P¹(Z/n).
pub(crate) fn normalize_mod(n: u64, c: i64, d: i64) -> Option<(u64, u64)> {
    if n == 1 {
        return Some((0, 0));
    }
    let ni = n as i64;
    let c = c.rem_euclid(ni);
    let d = d.rem_euclid(ni);
    if c == 0 {
        return if d.gcd(&ni) == 1 { Some((0, 1)) } else { None };
    }
    let (g, s, _) = xgcd(c, ni);
    if g.gcd(&d) != 1 {
        return None;
    }
    let mut s = s.rem_euclid(ni);
    if g != 1 {
        // lift s (a unit mod n/g) to a unit mod n
        let step = ni / g;
        while s.gcd(&ni) != 1 {
            s = (s + step) % ni;
        }
    }
    let v = ((s as i128 * d as i128) % ni as i128) as i64;
    let ng = ni / g;
    let v_step = ((v as i128 * ng as i128) % ni as i128) as i64;
    let (mut best, mut cur, mut t) = (v, v, 1i64);
    for _ in 1..g {
        cur = (cur + v_step) % ni;
        t += ng;
        if cur < best && t.gcd(&ni) == 1 {
            best = cur;
        }
    }
    Some((g as u64, best as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, psi};
    use num_traits::ToPrimitive;

    /// Brute-force lexicographic minimum over all unit multiples.
    fn lexmin(n: u64, c: u64, d: u64) -> (u64, u64) {
        (1..n)
            .filter(|u| u.gcd(&n) == 1)
            .map(|u| (u * c % n, u * d % n))
            .min()
            .unwrap()
    }

    #[test]
    fn sizes_match_index() {
        assert_eq!(P1List::new(1).len(), 1);
        assert_eq!(P1List::new(2).len(), 3);
        assert_eq!(P1List::new(11).len(), 12);
        assert_eq!(P1List::new(268).len(), 408);
        for n in 1..=200u64 {
            assert_eq!(
                P1List::new(n).len(),
                psi(&factorize(n)).to_usize().unwrap(),
                "N = {n}"
            );
        }
    }

    #[test]
    fn canonical_form_is_lexmin() {
        for n in [2u64, 4, 12, 18, 36, 45, 64, 100] {
            for c in 0..n {
                for d in 0..n {
                    let valid = c.gcd(&d).gcd(&n) == 1;
                    let got = normalize_mod(n, c as i64, d as i64);
                    if valid {
                        assert_eq!(got, Some(lexmin(n, c, d)), "N={n} ({c}:{d})");
                    } else {
                        assert_eq!(got, None);
                    }
                }
            }
        }
    }

    #[test]
    fn list_is_sorted_and_indexed() {
        let p1 = P1List::new(60);
        let els = p1.elements();
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        for (i, e) in els.iter().enumerate() {
            assert_eq!(p1.index_of(e.c as i64, e.d as i64), Some(i));
            assert_eq!(p1.index_of(-(7 * e.c as i64), -(7 * e.d as i64)), Some(i));
        }
        assert_eq!(p1.index_of(2, 4), None);
    }

    #[test]
    fn xgcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (5, 0), (12, -18)] {
            let (g, x, y) = xgcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, a.gcd(&b));
        }
    }
}

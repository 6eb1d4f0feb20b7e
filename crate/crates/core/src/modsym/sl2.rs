//! Integer 2×2 matrix helpers: lifting to SL₂(Z), Möbius action on cusps,
//! and Manin's continued-fraction trick.

use num_integer::Integer;

use super::p1::xgcd;

/// [a, b; c, d] in row-major order.
pub type Mat2 = [i64; 4];

/// A cusp a/c in lowest terms with c ≥ 0; ∞ is 1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cusp {
    pub num: i64,
    pub den: i64,
}

impl Cusp {
    pub const INFINITY: Cusp = Cusp { num: 1, den: 0 };

    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        assert!(num != 0 || den != 0, "0/0 is not a cusp");
        if den == 0 {
            return Cusp::INFINITY;
        }
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        Cusp {
            num: i64::try_from(num / g).expect("cusp numerator overflow"),
            den: i64::try_from(den / g).expect("cusp denominator overflow"),
        }
    }

    /// Image under z ↦ (az + b)/(cz + d).
    pub fn act(self, m: &Mat2) -> Cusp {
        let (x, y) = (self.num as i128, self.den as i128);
        let [a, b, c, d] = m.map(|v| v as i128);
        Cusp::from_i128(a * x + b * y, c * x + d * y)
    }
}

impl std::fmt::Display for Cusp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 0 {
            write!(f, "oo")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A matrix in SL₂(Z) whose bottom row is congruent to (c, d) mod n.
pub fn lift_to_sl2z(c: u64, d: u64, n: u64) -> Mat2 {
    if n == 1 {
        return [1, 0, 0, 1];
    }
    let ni = n as i64;
    let (c, mut d) = (c as i64 % ni, d as i64 % ni);
    let c = if c == 0 {
        // gcd(d, n) = 1 here
        ni
    } else {
        while c.gcd(&d) != 1 {
            d += ni;
        }
        c
    };
    let (g, x, y) = xgcd(d, c);
    debug_assert_eq!(g, 1);
    // x·d + y·c = 1, so [x, -y; c, d] has determinant 1
    [x, -y, c, d]
}

/// Manin symbols (as integer bottom rows with signs) summing to {0, r}.
pub fn zero_to_cusp(r: Cusp) -> Vec<(i64, i64, i8)> {
    let mut out = Vec::new();
    // convergents p_{k-2}/q_{k-2}, p_{k-1}/q_{k-1}, starting at 0/1 and 1/0
    let (mut q_prev2, mut q_prev) = (1i64, 0i64);
    out.push((0, 1, 1)); // {0, ∞}
    if r.den == 0 {
        return out;
    }
    let (mut a, mut b) = (r.num, r.den);
    let mut sign = -1i8; // (-1)^(k-1) at k = 0
    while b != 0 {
        let quot = a.div_euclid(b);
        let rem = a.rem_euclid(b);
        let q = quot * q_prev + q_prev2;
        out.push((sign as i64 * q, q_prev, 1));
        q_prev2 = q_prev;
        q_prev = q;
        sign = -sign;
        a = b;
        b = rem;
    }
    out
}

/// Manin symbols summing to {α, β} = {0, β} − {0, α}.
pub fn symbol_between(alpha: Cusp, beta: Cusp) -> Vec<(i64, i64, i8)> {
    let mut out = zero_to_cusp(beta);
    out.extend(zero_to_cusp(alpha).into_iter().map(|(c, d, s)| (c, d, -s)));
    out
}

/// An Atkin–Lehner matrix [Qx, y; N, Q] of determinant Q, for Q ‖ N.
pub fn atkin_lehner_matrix(n: u64, q: u64) -> Mat2 {
    let (q, m) = (q as i64, (n / q) as i64);
    // Q·x − m·y = 1
    let (g, x, y) = xgcd(q, m);
    assert_eq!(g, 1, "Q must exactly divide N");
    [q * x, -y, n as i64, q]
}

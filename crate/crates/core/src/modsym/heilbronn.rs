//! Merel's Heilbronn matrices: all [a b; c d] with ad − bc = n, a > b ≥ 0 and
//! d > c ≥ 0. Acting on the right on Manin symbols they give T_n for n
//! coprime to the level.

use super::sl2::Mat2;

pub fn merel(n: u64) -> Vec<Mat2> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=n {
            let bc = a * d - n;
            if bc < 0 {
                continue;
            }
            if bc == 0 {
                // b = 0 with any c < d, or c = 0 with 0 < b < a
                out.extend((0..d).map(|c| [a, 0, c, d]));
                out.extend((1..a).map(|b| [a, b, 0, d]));
                continue;
            }
            for b in 1..a {
                if bc % b == 0 && bc / b < d {
                    out.push([a, b, bc / b, d]);
                }
            }
        }
    }
    out
}

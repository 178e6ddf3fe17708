//! Closed-form coefficients of the multilinear polynomial of the dual matching function.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bigraph::BipartiteGraph;
use crate::ordered::{self, Block, Decomposition, RepresentingSequence};

pub type Coefficient = BigInt;

/// `C(a, b)` when `0 <= b <= a`, zero otherwise.
pub fn binomial(a: i64, b: i64) -> Coefficient {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `f(n,d,k)`: `C(n-1,k)` for `d <= 0`, otherwise `-C(n-d-1,k-d) * C(k-1,d-1)`.
pub fn f_factor(n: i64, d: i64, k: i64) -> Coefficient {
    if d <= 0 {
        binomial(n - 1, k)
    } else {
        -(binomial(n - d - 1, k - d) * binomial(k - 1, d - 1))
    }
}

pub fn block_coefficient(b: &Block) -> Coefficient {
    f_factor(b.n as i64, b.d as i64, b.k as i64)
}

/// Coefficient of the sorted ordered graph decoded from `s`.
pub fn coefficient_from_sequence(s: &RepresentingSequence) -> Coefficient {
    let n = s.n() as i64;
    let t = s.t();
    let k = |i: usize| s.k(i) as i64;
    let d = |i: usize| s.d(i) as i64;
    let mut acc = binomial(n - k(t - 1) - 1, n - d(t));
    for i in 1..t {
        if acc.is_zero() {
            break;
        }
        acc *= f_factor(d(i + 1) - k(i - 1), d(i) - k(i - 1), k(i) - k(i - 1));
    }
    debug_assert!(acc.abs() <= BigInt::one() << (2 * s.n()));
    acc
}

/// Product of block coefficients and the trailing binomial.
pub fn coefficient_from_blocks(dec: &Decomposition) -> Coefficient {
    let (a, b) = dec.final_factor;
    dec.blocks
        .iter()
        .fold(binomial(a, b), |acc, blk| acc * block_coefficient(blk))
}

/// Coefficient of the monomial `prod_{e in E(G)} x_e`; zero unless `G` is totally ordered.
pub fn dual_coefficient(g: &BipartiteGraph) -> Coefficient {
    match ordered::sequence_of(g) {
        Ok(s) => coefficient_from_sequence(&s),
        Err(_) => BigInt::zero(),
    }
}

//! Test-local oracles, written independently of the library: perfect matchings by
//! permutation search, coefficients by subset Möbius inversion, and the closed form
//! evaluated straight from a `(d, k)` sequence.

#![allow(dead_code)]

pub fn bit(n: usize, i: usize, j: usize) -> u64 {
    1u64 << (i * n + j)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Perfect-matching indicator for every mask, by trying all `n!` permutations.
pub struct MatchingOracle {
    n: usize,
    perms: Vec<u64>,
}

impl MatchingOracle {
    pub fn new(n: usize) -> Self {
        let perms = permutations(n)
            .into_iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| bit(n, i, j)).fold(0, |a, b| a | b))
            .collect();
        MatchingOracle { n, perms }
    }

    pub fn full(&self) -> u64 {
        if self.n * self.n == 64 {
            u64::MAX
        } else {
            (1u64 << (self.n * self.n)) - 1
        }
    }

    pub fn bpm(&self, mask: u64) -> i64 {
        i64::from(self.perms.iter().any(|p| p & mask == *p))
    }

    pub fn bpm_star(&self, mask: u64) -> i64 {
        1 - self.bpm(!mask & self.full())
    }
}

/// Coefficients of BPM*_n for all `2^{n²}` masks.
pub fn mobius_table(n: usize) -> Vec<i64> {
    let o = MatchingOracle::new(n);
    let bits = n * n;
    let mut f: Vec<i64> = (0..1u64 << bits).map(|m| o.bpm_star(m)).collect();
    for b in 0..bits {
        for m in 0..f.len() {
            if m >> b & 1 == 1 {
                f[m] -= f[m ^ (1 << b)];
            }
        }
    }
    f
}

pub fn binom(a: i64, b: i64) -> i128 {
    if b < 0 || a < 0 || b > a {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..b {
        r = r * (a - i) as i128 / (i + 1) as i128;
    }
    r
}

fn f(n: i64, d: i64, k: i64) -> i128 {
    if d <= 0 {
        binom(n - 1, k)
    } else {
        -binom(n - d - 1, k - d) * binom(k - 1, d - 1)
    }
}

/// Closed form from a sequence `(d_1, k_1) … (d_t, k_t)`.
pub fn closed_form(n: usize, pairs: &[(usize, usize)]) -> i128 {
    let n = n as i64;
    let t = pairs.len();
    let d = |i: usize| pairs[i - 1].0 as i64;
    let k = |i: usize| if i == 0 { 0 } else { pairs[i - 1].1 as i64 };
    let mut a = binom(n - k(t - 1) - 1, n - d(t));
    for i in 1..t {
        a *= f(d(i + 1) - k(i - 1), d(i) - k(i - 1), k(i) - k(i - 1));
    }
    a
}

//! Multilinear polynomials with exact rational coefficients over at most 64 variables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_limit, Result};
use crate::polyspace::DualPolynomial;

/// Keys are variable masks; the empty mask is the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultilinearPolynomial {
    pub vars: usize,
    pub terms: BTreeMap<u64, BigRational>,
}

fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(out)
    })
}

impl MultilinearPolynomial {
    pub fn new(vars: usize) -> Result<Self> {
        check_limit("variable count", vars, 64)?;
        Ok(MultilinearPolynomial { vars, terms: BTreeMap::new() })
    }

    pub fn from_dual(p: &DualPolynomial) -> Self {
        MultilinearPolynomial {
            vars: p.n * p.n,
            terms: p.terms.iter().map(|(m, c)| (*m, BigRational::from_integer(c.clone()))).collect(),
        }
    }

    pub fn add_term(&mut self, mask: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: u64) -> BigRational {
        self.terms
            .iter()
            .filter(|(m, _)| *m & !x == 0)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// Multilinear form of `p(sum_{v in support} x_v)`: the coefficient of a subset `T`
    /// is the `|T|`-th forward difference of `p` at 0.
    pub fn symmetric_from_values(vars: usize, support: u64, values: &[BigRational]) -> Result<Self> {
        let s = support.count_ones() as usize;
        assert!(values.len() > s, "need p(0..=|support|)");
        let mut diffs = Vec::with_capacity(s + 1);
        let mut row = values[..=s].to_vec();
        for _ in 0..=s {
            diffs.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        let mut p = Self::new(vars)?;
        for t in submasks(support) {
            p.add_term(t, diffs[t.count_ones() as usize].clone());
        }
        Ok(p)
    }

    pub fn add_scaled(&mut self, other: &Self, s: &BigRational) {
        for (m, c) in &other.terms {
            self.add_term(*m, c * s);
        }
    }
}

/// `p*(x) = 1 - p(1 - x)`.
pub fn dualize_polynomial(p: &MultilinearPolynomial) -> MultilinearPolynomial {
    let mut out = MultilinearPolynomial { vars: p.vars, terms: BTreeMap::new() };
    for (s, c) in &p.terms {
        for t in submasks(*s) {
            let v = if t.count_ones() % 2 == 0 { -c.clone() } else { c.clone() };
            out.add_term(t, v);
        }
    }
    out.add_term(0, BigRational::one());
    out
}

pub fn rational_from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

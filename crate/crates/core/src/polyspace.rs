//! The dual polynomial as a coefficient map, representing-sequence enumeration, orbit
//! counting and the count and magnitude bounds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bigraph::BipartiteGraph;
use crate::coeff::{coefficient_from_sequence, dual_coefficient, Coefficient};
use crate::error::{check_limit, Error, Result};
use crate::limits;
use crate::ordered::RepresentingSequence;

/// Multilinear polynomial over the `n²` edge variables. Keys are edge masks with bit
/// `i*n + j` for edge `(a_i, b_j)`; the empty mask is the constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPolynomial {
    pub n: usize,
    pub terms: BTreeMap<u64, Coefficient>,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    n: usize,
    terms: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    edges: Vec<[usize; 2]>,
}

impl DualPolynomial {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DomainError("side size must be positive".into()));
        }
        check_limit("side size for polynomial keys", n, limits::MASK_MAX_N)?;
        Ok(DualPolynomial { n, terms: BTreeMap::new() })
    }

    /// Adds `c` to the coefficient at `mask`, dropping the entry if it becomes zero.
    pub fn add_term(&mut self, mask: u64, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> Coefficient {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: &BipartiteGraph) -> Result<BigInt> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.n() });
        }
        let xm = x.mask();
        Ok(self
            .terms
            .iter()
            .filter(|(m, _)| *m & !xm == 0)
            .map(|(_, c)| c)
            .sum())
    }

    /// Terms ordered by `(degree, mask)`.
    pub fn sorted_terms(&self) -> Vec<(u64, &Coefficient)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, c)).collect();
        v.sort_by_key(|(m, _)| (m.count_ones(), *m));
        v
    }

    fn mask_edges(&self, mask: u64) -> Vec<[usize; 2]> {
        let n = self.n;
        (0..n * n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| [b / n + 1, b % n + 1])
            .collect()
    }

    fn edges_mask(&self, edges: &[[usize; 2]]) -> Result<u64> {
        let n = self.n;
        let mut m = 0u64;
        for &[i, j] in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Parse(format!("edge ({i},{j}) out of range for n = {n}")));
            }
            m |= 1 << ((i - 1) * n + (j - 1));
        }
        Ok(m)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.sorted_terms() {
            let edges = self.mask_edges(m);
            let list = if edges.is_empty() {
                "-".to_string()
            } else {
                edges.iter().map(|[i, j]| format!("({i},{j})")).collect::<Vec<_>>().join(",")
            };
            let _ = writeln!(out, "{c}\t{list}");
        }
        out
    }

    /// Parses the TSV dump; `n` is not stored in the format so it is passed in.
    pub fn parse_tsv(n: usize, text: &str) -> Result<Self> {
        let mut p = Self::new(n)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let (c, list) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
            let c: BigInt = c.trim().parse().map_err(|_| bad("bad coefficient"))?;
            let list = list.trim();
            let mut edges = Vec::new();
            if list != "-" {
                for part in list.split("),") {
                    let part = part.trim().trim_start_matches('(').trim_end_matches(')');
                    let (i, j) = part.split_once(',').ok_or_else(|| bad("bad edge"))?;
                    let i = i.trim().parse().map_err(|_| bad("bad edge index"))?;
                    let j = j.trim().parse().map_err(|_| bad("bad edge index"))?;
                    edges.push([i, j]);
                }
            }
            let m = p.edges_mask(&edges).map_err(|e| bad(&e.to_string()))?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonPoly {
            n: self.n,
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| JsonTerm { coeff: c.to_string(), edges: self.mask_edges(m) })
                .collect(),
        };
        serde_json::to_string(&doc).expect("serialisable")
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: JsonPoly = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut p = Self::new(doc.n)?;
        for t in doc.terms {
            let c: BigInt = t.coeff.parse().map_err(|_| Error::Parse(format!("bad coefficient `{}`", t.coeff)))?;
            let m = p.edges_mask(&t.edges)?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Accepts either serialisation; `n` is only consulted for TSV.
    pub fn parse_any(n: usize, text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let p = Self::parse_json(text)?;
            if p.n != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.n });
            }
            Ok(p)
        } else {
            Self::parse_tsv(n, text)
        }
    }
}

/// All valid sequences for side `n`, ordered by length and then lexicographically.
pub fn enumerate_sequences(
    n: usize,
    nonzero_only: bool,
) -> Result<impl Iterator<Item = RepresentingSequence>> {
    if n == 0 {
        return Err(Error::DomainError("side size must be positive".into()));
    }
    check_limit("side size for sequence enumeration", n, limits::SEQUENCE_MAX_N)?;
    let mut out = Vec::new();
    for t in 1..=n {
        let mut buf = Vec::with_capacity(t);
        extend_sequences(n, t, 0, 0, &mut buf, &mut out);
    }
    Ok(out
        .into_iter()
        .map(move |p| RepresentingSequence::new(n, p).expect("enumerated sequences are valid"))
        .filter(move |s| !nonzero_only || !coefficient_from_sequence(s).is_zero()))
}

fn extend_sequences(
    n: usize,
    t: usize,
    d_min: usize,
    k_min: usize,
    buf: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let rest = t - buf.len() - 1;
    for d in d_min..=n - rest {
        let k_range = if rest == 0 { n..=n } else { k_min..=n - rest };
        for k in k_range {
            if k == 0 {
                continue;
            }
            buf.push((d, k));
            if rest == 0 {
                out.push(buf.clone());
            } else {
                extend_sequences(n, t, d + 1, k + 1, buf, out);
            }
            buf.pop();
        }
    }
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for i in 1..=n {
        let next = &f[i - 1] * i;
        f.push(next);
    }
    f
}

fn multinomial(fact: &[BigInt], parts: &[usize]) -> BigInt {
    let total: usize = parts.iter().sum();
    parts.iter().fold(fact[total].clone(), |acc, &p| acc / &fact[p])
}

/// Number of labelled graphs whose sorted form decodes from `s`.
pub fn labeled_count(s: &RepresentingSequence) -> BigInt {
    let fact = factorials(s.n());
    labeled_count_with(&fact, s)
}

fn labeled_count_with(fact: &[BigInt], s: &RepresentingSequence) -> BigInt {
    let t = s.t();
    let left: Vec<usize> = (1..=t).map(|i| s.k(i) - s.k(i - 1)).collect();
    let mut right = vec![s.d(1)];
    right.extend((1..=t).map(|i| s.d(i + 1) - s.d(i)));
    multinomial(fact, &left) * multinomial(fact, &right)
}

pub fn monomial_count(n: usize) -> Result<BigInt> {
    let fact = factorials(n);
    Ok(enumerate_sequences(n, true)?.map(|s| labeled_count_with(&fact, &s)).sum())
}

pub fn max_abs_coefficient(n: usize) -> Result<BigInt> {
    Ok(enumerate_sequences(n, true)?
        .map(|s| coefficient_from_sequence(&s).abs())
        .max()
        .unwrap_or_default())
}

/// `log2(count) / (2 n log2 n)`, reported next to the counts for `n >= 2`.
pub fn asymptotic_ratio(n: usize, count: &BigInt) -> Option<f64> {
    if n < 2 || count.is_zero() {
        return None;
    }
    let bits = count.bits() as f64;
    let top = (count >> (count.bits().saturating_sub(53) as usize)).to_f64()?;
    let log2 = top.log2() + (bits - 53.0).max(0.0);
    let nf = n as f64;
    Some(log2 / (2.0 * nf * nf.log2()))
}

/// Scans all `2^{n²}` edge sets and keeps the nonzero closed-form coefficients.
pub fn materialize(n: usize) -> Result<DualPolynomial> {
    if n == 0 {
        return Err(Error::DomainError("side size must be positive".into()));
    }
    check_limit("side size for materialize", n, limits::MATERIALIZE_MAX_N)?;
    let total = 1u64 << (n * n);
    let found: Vec<(u64, BigInt)> = (0..total)
        .into_par_iter()
        .filter_map(|m| {
            let g = BipartiteGraph::from_mask(n, m).expect("mask in range");
            let c = dual_coefficient(&g);
            (!c.is_zero()).then_some((m, c))
        })
        .collect();
    let mut p = DualPolynomial::new(n)?;
    p.terms.extend(found);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered::is_sorted_ordered;

    #[test]
    fn enumerate_small() {
        let all: Vec<String> = enumerate_sequences(2, false).unwrap().map(|s| s.to_string()).collect();
        assert_eq!(
            all,
            ["2; (0,2)", "2; (1,2)", "2; (2,2)", "2; (0,1)(1,2)", "2; (0,1)(2,2)", "2; (1,1)(2,2)"]
        );
        assert_eq!(enumerate_sequences(2, true).unwrap().count(), 4);
        let one: Vec<String> = enumerate_sequences(1, false).unwrap().map(|s| s.to_string()).collect();
        assert_eq!(one, ["1; (0,1)", "1; (1,1)"]);
        assert!(enumerate_sequences(11, false).is_err());
    }

    #[test]
    fn enumeration_count_matches_closed_form() {
        for n in 1..=8i64 {
            let want: BigInt = (1..=n)
                .map(|t| crate::coeff::binomial(n + 1, t) * crate::coeff::binomial(n - 1, t - 1))
                .sum();
            assert_eq!(BigInt::from(enumerate_sequences(n as usize, false).unwrap().count()), want);
        }
    }

    #[test]
    fn enumeration_is_bijective_with_sorted_graphs() {
        for n in 1..=4 {
            let from_seq: Vec<u64> = enumerate_sequences(n, false).unwrap().map(|s| s.decode().mask()).collect();
            let mut a = from_seq.clone();
            a.sort();
            a.dedup();
            assert_eq!(a.len(), from_seq.len());
            let b: Vec<u64> = (0..1u64 << (n * n))
                .filter(|&m| is_sorted_ordered(&BipartiteGraph::from_mask(n, m).unwrap()))
                .collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn labeled_count_examples() {
        let c = |s: &str| labeled_count(&s.parse().unwrap());
        assert_eq!(c("2; (2,2)"), BigInt::from(1));
        assert_eq!(c("2; (0,1)(2,2)"), BigInt::from(2));
        assert_eq!(c("2; (1,1)(2,2)"), BigInt::from(4));
    }

    #[test]
    fn labeled_count_matches_orbit_scan() {
        for n in 1..=3 {
            let mut counts: BTreeMap<String, u64> = BTreeMap::new();
            for m in 0..1u64 << (n * n) {
                let g = BipartiteGraph::from_mask(n, m).unwrap();
                if let Ok(s) = crate::ordered::sequence_of(&g) {
                    *counts.entry(s.to_string()).or_default() += 1;
                }
            }
            for s in enumerate_sequences(n, false).unwrap() {
                assert_eq!(labeled_count(&s), BigInt::from(counts[&s.to_string()]), "{s}");
            }
        }
    }

    #[test]
    fn count_and_magnitude_examples() {
        assert_eq!(monomial_count(1).unwrap(), BigInt::from(1));
        assert_eq!(monomial_count(2).unwrap(), BigInt::from(9));
        let c3 = monomial_count(3).unwrap();
        assert!(c3 >= BigInt::from(36) && c3 <= BigInt::from(390625));
        assert_eq!(max_abs_coefficient(1).unwrap(), BigInt::from(1));
        assert_eq!(max_abs_coefficient(2).unwrap(), BigInt::from(1));
        let m4 = max_abs_coefficient(4).unwrap();
        assert!(m4 >= BigInt::from(3) && m4 <= BigInt::from(256));
    }

    #[test]
    fn materialize_and_evaluate_examples() {
        assert_eq!(materialize(1).unwrap().terms, BTreeMap::from([(1u64, BigInt::from(1))]));
        let p = materialize(2).unwrap();
        assert_eq!(p.len(), 9);
        let one = BigInt::from(1);
        assert_eq!(p.evaluate(&BipartiteGraph::complete(2).unwrap()).unwrap(), one);
        assert_eq!(p.evaluate(&BipartiteGraph::empty(2).unwrap()).unwrap(), BigInt::zero());
        let x = BipartiteGraph::from_edges_1based(2, &[(1, 1), (1, 2)]).unwrap();
        assert_eq!(p.evaluate(&x).unwrap(), one);
        assert!(p.evaluate(&BipartiteGraph::empty(3).unwrap()).is_err());
    }

    #[test]
    fn serialisations_round_trip() {
        let p = materialize(3).unwrap();
        let tsv = p.to_tsv();
        assert_eq!(DualPolynomial::parse_tsv(3, &tsv).unwrap(), p);
        assert_eq!(DualPolynomial::parse_json(&p.to_json()).unwrap(), p);
        let p2 = materialize(2).unwrap();
        assert!(p2.to_tsv().starts_with("1\t(1,1),(1,2)\n"));
        assert!(p2.to_tsv().ends_with("1\t(1,1),(1,2),(2,1),(2,2)\n"));
        let mut c = DualPolynomial::new(2).unwrap();
        c.add_term(0, BigInt::from(-4));
        assert_eq!(c.to_tsv(), "-4\t-\n");
        assert_eq!(DualPolynomial::parse_tsv(2, "-4\t-\n").unwrap(), c);
        assert!(DualPolynomial::parse_tsv(2, "1\t(3,1)\n").is_err());
    }

    #[test]
    fn asymptotic_ratio_reported() {
        let r = asymptotic_ratio(4, &monomial_count(4).unwrap()).unwrap();
        assert!(r > 0.0 && r < 2.0);
    }
}

//! Approximate degree: the minimal degree of a symmetric approximant of `AND_m`, the
//! `epsilon'` used per monomial, the resulting degree bound for the matching function and
//! an end-to-end certified approximant for very small `n`.
//!
//! By symmetrisation, degree `d` suffices for error `eps` iff `M_d >= (1 - eps) / eps`,
//! where `M_d = max { q(m) : deg q <= d, |q(k)| <= 1 for k = 0..m-1 }`. The exchange solver
//! computes `M_d`; the Chebyshev-basis LP in [`lp`] is an independent route for small `m`.

pub mod exchange;
pub mod lp;
pub mod multilinear;
pub mod univariate;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::{Float, Integer};
use serde::Serialize;

use crate::bigraph::BipartiteGraph;
use crate::error::{check_limit, Error, Result};
use crate::limits;
use crate::oracle::{bpm_star_value, bpm_value};
use crate::polyspace::materialize;
use exchange::{Certificate, ExchangeResult};
pub use multilinear::{dualize_polynomial, MultilinearPolynomial};
pub use univariate::UnivariatePolynomial;

/// Relative slack on `eps` under which the reported degree must not change.
pub const TOLERANCES: [f64; 2] = [1e-9, 1e-12];
/// Margin in `log2` below which a binary64 decision is re-done in MPFR.
const DOUBLE_MARGIN: f64 = 1e-6;
const TARGET_PREC: u32 = 2048;

fn to_rug(b: &BigInt) -> Integer {
    Integer::from_str_radix(&b.to_str_radix(32), 32).expect("radix-32 digits")
}

pub(crate) fn to_float(r: &BigRational, prec: u32) -> Float {
    let num = Float::with_val(prec, to_rug(r.numer()));
    num / to_rug(r.denom())
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| to_float(r, 128).to_f64())
}

pub fn log2_rational(r: &BigRational) -> f64 {
    to_float(r, TARGET_PREC).log2().to_f64()
}

/// Parses `p/q` or an integer literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational `{s}`, expected p/q"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

pub fn validate_epsilon(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || *eps > BigRational::new(1.into(), 3.into()) {
        return Err(Error::DomainError(format!("epsilon must satisfy 0 < eps <= 1/3, got {eps}")));
    }
    Ok(())
}

/// `eps * 2^{-2n} * (n+2)^{-(2n+2)}`.
pub fn epsilon_prime(n: usize, eps: &BigRational) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::DomainError("n must be positive".into()));
    }
    validate_epsilon(eps)?;
    let den = (BigInt::one() << (2 * n)) * num_traits::pow(BigInt::from(n + 2), 2 * n + 2);
    Ok(eps / BigRational::from_integer(den))
}

/// `eps >= 2^{-m}`, the range in which the cited AND bound is stated.
pub fn and_in_regime(m: usize, eps: &BigRational) -> bool {
    *eps >= BigRational::new(BigInt::one(), BigInt::one() << m)
}

/// The exact polynomial `C(t, m)` agreeing with `AND_m` on `0..=m`.
pub fn exact_and(m: usize) -> Result<UnivariatePolynomial> {
    let mut vals = vec![BigRational::zero(); m + 1];
    vals[m] = BigRational::one();
    UnivariatePolynomial::interpolate(m, &(0..=m).collect::<Vec<_>>(), &vals)
}

/// `(1 - e) / e` for `e = eps (1 + tol)`: the smallest `M_d` that admits error `e`.
struct Target {
    value: Float,
    log2: f64,
}

impl Target {
    fn new(eps: &BigRational, tol: f64) -> Self {
        let e = to_float(eps, TARGET_PREC) * Float::with_val(TARGET_PREC, 1.0 + tol);
        let value = (Float::with_val(TARGET_PREC, 1) - &e) / e;
        let log2 = value.clone().log2().to_f64();
        Target { value, log2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AndDegree {
    pub m: usize,
    pub degree: usize,
    /// Extremal nodes at `degree` when `degree < m`.
    pub nodes: Option<Vec<usize>>,
}

struct AndSolver {
    m: usize,
    extremal: HashMap<usize, ExchangeResult>,
    certificates: HashMap<usize, Certificate>,
}

impl AndSolver {
    fn new(m: usize) -> Self {
        AndSolver { m, extremal: HashMap::new(), certificates: HashMap::new() }
    }

    fn extremal(&mut self, d: usize) -> Result<&ExchangeResult> {
        if !self.extremal.contains_key(&d) {
            let r = exchange::exchange(self.m, d, None)?;
            self.extremal.insert(d, r);
        }
        Ok(&self.extremal[&d])
    }

    fn certificate(&mut self, d: usize) -> Result<&Certificate> {
        if !self.certificates.contains_key(&d) {
            let nodes = self.extremal(d)?.nodes.clone();
            let c = exchange::certify(self.m, &nodes)?;
            self.certificates.insert(d, c);
        }
        Ok(&self.certificates[&d])
    }

    /// `M_{m-1} = 2^m - 1` exactly.
    fn top_degree_feasible(&self, t: &Target) -> bool {
        let prec = TARGET_PREC.max(self.m as u32 + 64);
        let top = (Float::with_val(prec, 1) << self.m as u32) - 1u32;
        top >= t.value
    }

    fn decide(&mut self, d: usize, t: &Target) -> Result<bool> {
        if d >= self.m {
            return Ok(true);
        }
        if d + 1 == self.m {
            return Ok(self.top_degree_feasible(t));
        }
        let diff = self.extremal(d)?.log2_growth - t.log2;
        if diff > DOUBLE_MARGIN {
            Ok(true)
        } else if diff < -DOUBLE_MARGIN {
            Ok(false)
        } else {
            self.certified_decide(d, t)
        }
    }

    fn certified_decide(&mut self, d: usize, t: &Target) -> Result<bool> {
        if d + 1 >= self.m {
            return self.decide(d, t);
        }
        let c = self.certificate(d)?;
        if c.lower() >= t.value {
            Ok(true)
        } else if c.growth < t.value {
            Ok(false)
        } else {
            Err(Error::NumericalFailure(format!(
                "certificate at m = {}, d = {d} brackets the target",
                self.m
            )))
        }
    }

    fn search(&mut self, t: &Target) -> Result<usize> {
        let (mut lo, mut hi) = (0, self.m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.decide(mid, t)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if !self.certified_decide(hi, t)? {
            return Err(Error::NumericalFailure(format!("degree {hi} at m = {} failed certification", self.m)));
        }
        if hi > 0 && self.certified_decide(hi - 1, t)? {
            return Err(Error::NumericalFailure(format!(
                "degree {} at m = {} certified feasible after the search rejected it",
                hi - 1,
                self.m
            )));
        }
        Ok(hi)
    }

    fn nodes_at(&mut self, d: usize) -> Result<Option<Vec<usize>>> {
        Ok(if d >= self.m {
            None
        } else if d + 1 == self.m {
            Some((0..self.m).collect())
        } else {
            Some(self.extremal(d)?.nodes.clone())
        })
    }
}

fn check_arity(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::DomainError("AND arity must be positive".into()));
    }
    check_limit("AND arity", m, limits::AND_MAX_ARITY)
}

/// Minimal degree at one tolerance, certified in MPFR at the optimum and one below it.
pub fn and_degree_with_tolerance(m: usize, eps: &BigRational, tol: f64) -> Result<AndDegree> {
    check_arity(m)?;
    validate_epsilon(eps)?;
    let mut s = AndSolver::new(m);
    let degree = s.search(&Target::new(eps, tol))?;
    Ok(AndDegree { m, degree, nodes: s.nodes_at(degree)? })
}

/// Minimal degree, required to agree across [`TOLERANCES`].
pub fn and_degree(m: usize, eps: &BigRational) -> Result<AndDegree> {
    check_arity(m)?;
    validate_epsilon(eps)?;
    let mut s = AndSolver::new(m);
    let mut degrees = Vec::new();
    for tol in TOLERANCES {
        degrees.push(s.search(&Target::new(eps, tol))?);
    }
    if degrees.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::NumericalFailure(format!(
            "degree for m = {m} changes with tolerance: {degrees:?}"
        )));
    }
    let degree = degrees[0];
    Ok(AndDegree { m, degree, nodes: s.nodes_at(degree)? })
}

pub fn min_and_approx_degree(m: usize, eps: &BigRational) -> Result<usize> {
    Ok(and_degree(m, eps)?.degree)
}

/// A certified witness at the minimal degree: `p = lambda q_N` with
/// `lambda = min(1 / F, eps / Q)`, where `F = q_N(m)` and `Q = max_{k<m} |q_N(k)|`.
pub fn build_and_approximant(m: usize, eps: &BigRational) -> Result<UnivariatePolynomial> {
    check_limit("AND arity for exact witnesses", m, limits::AND_LP_MAX_ARITY)?;
    let found = and_degree(m, eps)?;
    let Some(nodes) = found.nodes else {
        return exact_and(m);
    };
    let d = found.degree;
    let values: Vec<BigRational> = (0..=d)
        .map(|i| BigRational::from_integer(BigInt::from(if (d - i) % 2 == 0 { 1 } else { -1 })))
        .collect();
    let q = UnivariatePolynomial::interpolate(m, &nodes, &values)?;
    let f = q.evaluate_int(m);
    let big_q = (0..m).map(|k| q.evaluate_int(k).abs()).max().unwrap_or_else(BigRational::one);
    let lambda = (BigRational::one() / &f).min(eps / &big_q);
    let p = q.scale(&lambda);
    let slack = eps * BigRational::from_float(1.0 + TOLERANCES[1]).expect("finite");
    if p.and_error() > slack {
        return Err(Error::NumericalFailure(format!(
            "witness for m = {m} has error {} > {eps}",
            p.and_error()
        )));
    }
    Ok(p)
}

/// Smallest integer `t` with `t >= n^{3/2}`.
pub fn threshold(n: usize) -> usize {
    let cube = (n as u128).pow(3);
    let mut t = (cube as f64).sqrt() as u128;
    while t * t < cube {
        t += 1;
    }
    while t > 0 && (t - 1) * (t - 1) >= cube {
        t -= 1;
    }
    t as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeBoundReport {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon_prime: BigRational,
    pub log2_epsilon_prime: f64,
    pub and_arity: usize,
    pub and_degree: usize,
    pub threshold: usize,
    pub overall_bound: usize,
    /// `eps' >= 2^{-n²}`.
    pub and_in_regime: bool,
    /// `eps >= 2^{-n log2 n}`.
    pub bpm_in_regime: bool,
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl DegreeBoundReport {
    /// `overall_bound / (n^{1.5} sqrt(log2 n))`, defined for `n >= 2`.
    pub fn normalized(&self) -> Option<f64> {
        (self.n >= 2).then(|| {
            let n = self.n as f64;
            self.overall_bound as f64 / (n.powf(1.5) * n.log2().sqrt())
        })
    }

    pub const TSV_HEADER: &'static str = "n\teps\teps_prime_log2\tthreshold\tand_degree\tbound";

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{:.6}\t{}\t{}\t{}",
            self.n, self.epsilon, self.log2_epsilon_prime, self.threshold, self.and_degree, self.overall_bound
        )
    }
}

pub fn bpm_degree_bound(n: usize, eps: &BigRational) -> Result<DegreeBoundReport> {
    if n == 0 {
        return Err(Error::DomainError("n must be positive".into()));
    }
    check_limit("side size for bpm_degree_bound", n, limits::BOUND_MAX_N)?;
    let ep = epsilon_prime(n, eps)?;
    let m = n * n;
    let and_degree = min_and_approx_degree(m, &ep)?;
    let thr = threshold(n);
    let nf = n as f64;
    Ok(DegreeBoundReport {
        n,
        epsilon: eps.clone(),
        log2_epsilon_prime: log2_rational(&ep),
        and_in_regime: and_in_regime(m, &ep),
        bpm_in_regime: log2_rational(eps) >= -nf * nf.log2(),
        epsilon_prime: ep,
        and_arity: m,
        and_degree,
        threshold: thr,
        overall_bound: thr.max(and_degree),
    })
}

#[derive(Clone, Debug)]
pub struct AssembledApproximant {
    pub n: usize,
    pub epsilon: BigRational,
    pub epsilon_prime: BigRational,
    pub threshold: usize,
    pub polynomial: MultilinearPolynomial,
    pub degree: usize,
    /// Degree of the AND approximant used for each replaced monomial size.
    pub and_degrees: BTreeMap<usize, usize>,
    pub replaced_monomials: usize,
    /// `max_x |A(x) - BPM*(x)|` over all inputs.
    pub max_error: BigRational,
    /// `max_x |A*(x) - BPM(x)|` for the dual `A*` of the approximant.
    pub dual_max_error: BigRational,
}

/// Keeps monomials with `|E(G)| < n^{3/2}` exact and replaces each larger one by its
/// symmetric AND approximant at error `eps'`, then certifies both the approximant and its
/// dual on every input.
pub fn assemble_bpm_approximant(n: usize, eps: &BigRational) -> Result<AssembledApproximant> {
    if n == 0 {
        return Err(Error::DomainError("n must be positive".into()));
    }
    check_limit("side size for assemble_bpm_approximant", n, limits::ASSEMBLE_MAX_N)?;
    let ep = epsilon_prime(n, eps)?;
    let thr = threshold(n);
    let cube = n * n * n;
    let vars = n * n;
    let dual = materialize(n)?;
    let mut poly = MultilinearPolynomial::new(vars)?;
    let mut approximants: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
    let mut and_degrees = BTreeMap::new();
    let mut replaced = 0;
    for (&mask, a) in &dual.terms {
        let a = BigRational::from_integer(a.clone());
        let s = mask.count_ones() as usize;
        if s * s < cube {
            poly.add_term(mask, a);
            continue;
        }
        replaced += 1;
        let values = match approximants.entry(s) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                let p = build_and_approximant(s, &ep)?;
                and_degrees.insert(s, p.degree());
                e.insert((0..=s).map(|k| p.evaluate_int(k)).collect())
            }
        };
        let sym = MultilinearPolynomial::symmetric_from_values(vars, mask, values)?;
        poly.add_scaled(&sym, &a);
    }
    let star = dualize_polynomial(&poly);
    let mut max_error = BigRational::zero();
    let mut dual_max_error = BigRational::zero();
    for x in 0..1u64 << vars {
        let g = BipartiteGraph::from_mask(n, x)?;
        let target = BigRational::from_integer(bpm_star_value(&g).into());
        max_error = max_error.max((poly.evaluate(x) - target).abs());
        let target = BigRational::from_integer(bpm_value(&g).into());
        dual_max_error = dual_max_error.max((star.evaluate(x) - target).abs());
    }
    if max_error > *eps || dual_max_error != max_error {
        return Err(Error::NumericalFailure(format!(
            "assembled approximant error {max_error} (dual {dual_max_error}) exceeds {eps}"
        )));
    }
    Ok(AssembledApproximant {
        n,
        epsilon: eps.clone(),
        epsilon_prime: ep,
        threshold: thr,
        degree: poly.degree(),
        polynomial: poly,
        and_degrees,
        replaced_monomials: replaced,
        max_error,
        dual_max_error,
    })
}

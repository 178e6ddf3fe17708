//! Discrete minimax for the symmetrised AND problem.
//!
//! For a node set `N` of `d+1` points in `0..m`, let `q_N` interpolate `(-1)^{d-i}` at the
//! sorted nodes. Then `q_N(m) = F(N) = sum_i |l_i(m)|`, and every polynomial of degree `<= d`
//! bounded by 1 on `0..m` takes a value `<= F(N)` at `m`. The multiple-exchange iteration
//! walks `N` to the minimiser of `F`, where `q_N` itself is bounded by 1 on the grid, so
//! `M_d = min_N F(N)` is attained. Iterations run in binary64 with log-scaled barycentric
//! weights; final claims are re-evaluated in MPFR.

use rug::{Assign, Float};

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;
/// Slack for ties when choosing the new node of a run.
const TIE_SLACK: f64 = 1e-12;
const MIN_PREC: u32 = 256;
const MAX_PREC: u32 = 8192;
/// Guard bits required beyond the measured cancellation of each evaluation.
const GUARD_BITS: f64 = 64.0;

#[derive(Clone, Debug)]
pub struct ExchangeResult {
    pub nodes: Vec<usize>,
    pub log2_growth: f64,
    /// `true` when the node set is a fixed point, i.e. `log2_growth = log2 M_d`.
    pub converged: bool,
    pub iterations: usize,
}

/// High-precision values for a node set.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub nodes: Vec<usize>,
    /// `F(N)`, an upper bound on `M_d`.
    pub growth: Float,
    /// `max_k |q_N(k)|` over the grid; `F(N) / max(1, this)` is a lower bound on `M_d`.
    pub max_abs: Float,
    pub prec: u32,
}

impl Certificate {
    pub fn lower(&self) -> Float {
        let one = Float::with_val(self.prec, 1);
        let denom = if self.max_abs > one { self.max_abs.clone() } else { one };
        Float::with_val(self.prec, &self.growth / &denom)
    }
}

/// Starting nodes at quantiles of the constrained equilibrium density for `d+1` points
/// on an `m`-point grid, saturated at one point per grid cell.
pub fn initial_nodes(m: usize, d: usize) -> Vec<usize> {
    let count = d + 1;
    assert!(count <= m);
    if count == m {
        return (0..m).collect();
    }
    let xs: Vec<f64> = (0..m).map(|k| (2.0 * k as f64 - (m as f64 - 1.0)) / m as f64).collect();
    let density = |c: f64| -> Vec<f64> {
        let r2 = 1.0 - c * c;
        xs.iter()
            .map(|&x| {
                let s = r2 - x * x;
                if r2 <= 0.0 || s <= 0.0 {
                    1.0
                } else {
                    std::f64::consts::FRAC_2_PI * (c / s.sqrt()).atan()
                }
            })
            .collect()
    };
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..100 {
        let c = 0.5 * (lo + hi);
        if density(c).iter().sum::<f64>() < count as f64 {
            lo = c;
        } else {
            hi = c;
        }
    }
    let mut cum = Vec::with_capacity(m);
    let mut acc = 0.0;
    for v in density(hi) {
        acc += v;
        cum.push(acc);
    }
    let mut nodes: Vec<usize> = (0..count)
        .map(|i| {
            let target = i as f64 + 0.5;
            cum.partition_point(|&c| c < target).min(m - 1)
        })
        .collect();
    for i in 1..count {
        if nodes[i] <= nodes[i - 1] {
            nodes[i] = nodes[i - 1] + 1;
        }
    }
    for i in (0..count).rev() {
        let lim = m - count + i;
        if nodes[i] > lim {
            nodes[i] = lim;
        }
    }
    nodes
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mode {
    Double,
    Multi(u32),
}

struct Evaluation {
    q: Vec<f64>,
    log2_growth: f64,
}

fn ln_table(m: usize) -> Vec<f64> {
    (0..=m).map(|k| (k as f64).ln()).collect()
}

fn eval_double(m: usize, nodes: &[usize], ln: &[f64]) -> Evaluation {
    let d = nodes.len() - 1;
    let lw: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| -nodes.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &xj)| ln[xi.abs_diff(xj)]).sum::<f64>())
        .collect();
    let lw_max = lw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let a: Vec<f64> = lw.iter().map(|&l| (l - lw_max).exp()).collect();
    let sgn: Vec<f64> = (0..=d).map(|i| if (d - i) % 2 == 0 { 1.0 } else { -1.0 }).collect();

    let ln_ell: f64 = nodes.iter().map(|&x| ln[m - x]).sum();
    let terms: Vec<f64> = nodes.iter().zip(&lw).map(|(&x, &l)| l - ln[m - x]).collect();
    let t_max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = t_max + terms.iter().map(|&t| (t - t_max).exp()).sum::<f64>().ln();
    let log2_growth = (ln_ell + lse) / std::f64::consts::LN_2;

    let mut q = vec![0.0; m];
    let mut next = 0;
    for (k, slot) in q.iter_mut().enumerate() {
        if next <= d && nodes[next] == k {
            *slot = sgn[next];
            next += 1;
            continue;
        }
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..=d {
            let r = a[i] / (k as f64 - nodes[i] as f64);
            num += r;
            den += sgn[i] * r;
        }
        *slot = num / den;
    }
    Evaluation { q, log2_growth }
}

struct MultiEvaluation {
    q: Vec<Float>,
    growth: Float,
    /// Largest `log2` of the cancellation ratio seen among the grid evaluations.
    log2_cond: f64,
}

fn eval_multi(m: usize, nodes: &[usize], prec: u32) -> MultiEvaluation {
    let d = nodes.len() - 1;
    let a: Vec<Float> = nodes
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let mut p = Float::with_val(prec, 1);
            for (j, &xj) in nodes.iter().enumerate() {
                if j != i {
                    p *= xi.abs_diff(xj) as u32;
                }
            }
            p.recip()
        })
        .collect();
    let mut ell = Float::with_val(prec, 1);
    let mut s = Float::with_val(prec, 0);
    for (i, &x) in nodes.iter().enumerate() {
        ell *= (m - x) as u32;
        s += Float::with_val(prec, &a[i] / ((m - x) as u32));
    }
    let growth = ell * s;

    let mut q = Vec::with_capacity(m);
    let mut log2_cond: f64 = 0.0;
    let mut next = 0;
    let mut r = Float::new(prec);
    for k in 0..m {
        if next <= d && nodes[next] == k {
            q.push(Float::with_val(prec, if (d - next) % 2 == 0 { 1 } else { -1 }));
            next += 1;
            continue;
        }
        let mut num = Float::with_val(prec, 0);
        let mut den = Float::with_val(prec, 0);
        let mut abs = Float::with_val(prec, 0);
        for i in 0..=d {
            let diff = k as i32 - nodes[i] as i32;
            r.assign(&a[i] / diff);
            num += &r;
            if (d - i) % 2 == 0 {
                den += &r;
            } else {
                den -= &r;
            }
            abs += &*r.as_abs();
        }
        let ratio = Float::with_val(prec, &abs / &*den.as_abs());
        log2_cond = log2_cond.max(ratio.log2().to_f64());
        q.push(num / den);
    }
    MultiEvaluation { q, growth, log2_cond }
}

fn evaluate(mode: Mode, m: usize, nodes: &[usize], ln: &[f64]) -> Evaluation {
    match mode {
        Mode::Double => eval_double(m, nodes, ln),
        Mode::Multi(prec) => {
            let e = eval_multi(m, nodes, prec);
            Evaluation {
                q: e.q.iter().map(|v| v.to_f64()).collect(),
                log2_growth: e.growth.log2().to_f64(),
            }
        }
    }
}

/// One node per sign run of `q`, at the run's largest `|q|`; the old node is kept on ties.
fn exchange_nodes(q: &[f64], nodes: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(nodes.len());
    let mut k = 0;
    let m = q.len();
    let mut node_idx = 0;
    while k < m {
        let sign = if q[k] != 0.0 { q[k].signum() } else { next_sign(q, k) };
        let start = k;
        let mut best = k;
        while k < m && (q[k] == 0.0 || q[k].signum() == sign) {
            if q[k].abs() > q[best].abs() {
                best = k;
            }
            k += 1;
        }
        while node_idx < nodes.len() && nodes[node_idx] < start {
            node_idx += 1;
        }
        let old = (node_idx < nodes.len() && nodes[node_idx] < k).then(|| nodes[node_idx]);
        let pick = match old {
            Some(o) if q[best].abs() <= q[o].abs() * (1.0 + TIE_SLACK) => o,
            _ => best,
        };
        out.push(pick);
    }
    (out.len() == nodes.len()).then_some(out)
}

fn next_sign(q: &[f64], k: usize) -> f64 {
    q[k..].iter().find(|v| **v != 0.0).map(|v| v.signum()).unwrap_or(1.0)
}

/// Runs the exchange for `d <= m - 2`. With `stop_below`, returns early as soon as
/// `log2 F(N)` drops under it: that already proves `log2 M_d` is smaller.
pub fn exchange(m: usize, d: usize, stop_below: Option<f64>) -> Result<ExchangeResult> {
    if d + 2 > m {
        return Err(Error::DomainError(format!("exchange needs d <= m - 2, got m = {m}, d = {d}")));
    }
    let ln = ln_table(m);
    let mut nodes = initial_nodes(m, d);
    let mut mode = Mode::Double;
    let mut prev = f64::INFINITY;
    for it in 0..MAX_ITERATIONS {
        let e = evaluate(mode, m, &nodes, &ln);
        if !e.log2_growth.is_finite() {
            return Err(Error::NumericalFailure(format!("non-finite growth at m = {m}, d = {d}")));
        }
        if let Some(t) = stop_below {
            if e.log2_growth < t {
                return Ok(ExchangeResult { nodes, log2_growth: e.log2_growth, converged: false, iterations: it });
            }
        }
        let rising = e.log2_growth > prev + 1e-9 * prev.abs().max(1.0);
        let next = exchange_nodes(&e.q, &nodes);
        match (next, rising, mode) {
            (Some(next), false, _) => {
                if next == nodes {
                    return Ok(ExchangeResult { nodes, log2_growth: e.log2_growth, converged: true, iterations: it });
                }
                nodes = next;
                prev = e.log2_growth;
            }
            (_, _, Mode::Double) => mode = Mode::Multi(MIN_PREC),
            (_, _, Mode::Multi(p)) if p < MAX_PREC => mode = Mode::Multi(2 * p),
            _ => {
                return Err(Error::NumericalFailure(format!(
                    "exchange lost the alternation at m = {m}, d = {d}"
                )))
            }
        }
    }
    Err(Error::NumericalFailure(format!("exchange did not converge at m = {m}, d = {d}")))
}

/// Re-evaluates `F(N)` and `max |q_N|` in MPFR, raising the precision until every grid
/// evaluation keeps `GUARD_BITS` beyond its cancellation.
pub fn certify(m: usize, nodes: &[usize]) -> Result<Certificate> {
    let mut prec = MIN_PREC;
    loop {
        let e = eval_multi(m, nodes, prec);
        if e.log2_cond + GUARD_BITS < prec as f64 {
            let mut max_abs = Float::with_val(prec, 0);
            for v in &e.q {
                let a = v.clone().abs();
                if a > max_abs {
                    max_abs = a;
                }
            }
            return Ok(Certificate { nodes: nodes.to_vec(), growth: e.growth, max_abs, prec });
        }
        if prec >= MAX_PREC {
            return Err(Error::NumericalFailure(format!("certification needs more than {MAX_PREC} bits")));
        }
        prec *= 2;
    }
}

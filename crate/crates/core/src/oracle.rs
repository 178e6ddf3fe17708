//! Brute-force ground truth for the closed-form coefficients.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::bigraph::BipartiteGraph;
use crate::coeff::Coefficient;
use crate::error::{check_limit, Error, Result};
use crate::limits;
use crate::ordered::{is_sorted_ordered, representing_sequence};
use crate::polyspace::DualPolynomial;

/// 1 iff the complement of `g` has no perfect matching.
pub fn bpm_star_value(g: &BipartiteGraph) -> u8 {
    u8::from(!g.complement().has_perfect_matching())
}

pub fn bpm_value(g: &BipartiteGraph) -> u8 {
    u8::from(g.has_perfect_matching())
}

fn sign(parity: usize) -> i64 {
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sum over all edge subsets `H` of `G` of `(-1)^{|E(G) \ E(H)|} * BPM*(H)`.
pub fn mobius_coefficient(g: &BipartiteGraph) -> Result<Coefficient> {
    let edges = g.edges();
    check_limit("edge count for mobius_coefficient", edges.len(), limits::MOBIUS_MAX_EDGES)?;
    let n = g.n();
    let e = edges.len();
    let mut acc = 0i64;
    for s in 0u64..1 << e {
        let mut rows = vec![0u32; n];
        for (b, &(i, j)) in edges.iter().enumerate() {
            if s >> b & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let h = BipartiteGraph::from_rows(n, rows)?;
        if bpm_star_value(&h) == 1 {
            acc += sign(e - s.count_ones() as usize);
        }
    }
    Ok(BigInt::from(acc))
}

fn supergraph_masks(g: &BipartiteGraph) -> impl Iterator<Item = u64> {
    let n = g.n();
    let base = g.mask();
    let free = ((1u64 << (n * n)) - 1) & !base;
    let mut sub = free;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = base | sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & free;
        }
        Some(out)
    })
}

/// `(-1)^{|E|+1} * sum over matching-covered supergraphs H of (-1)^{cyclomatic(H)}`.
pub fn mc_chi_sum_coefficient(g: &BipartiteGraph) -> Result<Coefficient> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    mc_chi_sum_unchecked(g)
}

/// The same sum without the nonempty precondition; on the empty graph it disagrees with
/// the true constant term.
pub fn mc_chi_sum_unchecked(g: &BipartiteGraph) -> Result<Coefficient> {
    check_limit("side size for mc_chi_sum_coefficient", g.n(), limits::SUPERGRAPH_MAX_N)?;
    let n = g.n();
    let mut acc = 0i64;
    for m in supergraph_masks(g) {
        let h = BipartiteGraph::from_mask(n, m)?;
        if h.is_matching_covered() {
            acc += sign(h.cyclomatic_number());
        }
    }
    Ok(BigInt::from(sign(g.edge_count() + 1) * acc))
}

/// True when all left vertices share a component or all right vertices do.
pub fn one_side_connected(g: &BipartiteGraph) -> bool {
    let full = if g.n() == 32 { u32::MAX } else { (1u32 << g.n()) - 1 };
    g.components().iter().any(|&(l, r)| l == full || r == full)
}

/// Sum over elementary supergraphs `H` of `(-1)^{|E(H) \ E(G)|}`.
pub fn elementary_sum_coefficient(g: &BipartiteGraph) -> Result<Coefficient> {
    check_limit("side size for elementary_sum_coefficient", g.n(), limits::SUPERGRAPH_MAX_N)?;
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if !one_side_connected(g) {
        return Err(Error::PreconditionViolated(
            "neither all left nor all right vertices lie in one component".into(),
        ));
    }
    let n = g.n();
    let base = g.edge_count();
    let mut acc = 0i64;
    for m in supergraph_masks(g) {
        let h = BipartiteGraph::from_mask(n, m)?;
        if h.is_elementary() {
            acc += sign(m.count_ones() as usize - base);
        }
    }
    Ok(BigInt::from(acc))
}

/// The elementary sum restricted to supergraphs that add only permitted edges.
pub fn permitted_sum_coefficient(h: &BipartiteGraph) -> Result<Coefficient> {
    check_limit("side size for permitted_sum_coefficient", h.n(), limits::PERMITTED_MAX_N)?;
    if !is_sorted_ordered(h) {
        return Err(Error::NotSortedOrdered);
    }
    if h.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let permitted = representing_sequence(h)?.permitted_edges().edges;
    let mut acc = 0i64;
    for s in 0u64..1 << permitted.len() {
        let mut x = h.clone();
        for (b, &(i, j)) in permitted.iter().enumerate() {
            if s >> b & 1 == 1 {
                x = x.with_edge(i, j);
            }
        }
        if x.is_elementary() {
            acc += sign(s.count_ones() as usize);
        }
    }
    Ok(BigInt::from(acc))
}

/// Full coefficient table by a subset Möbius transform over all `2^{n²}` edge sets.
pub fn coefficient_table(n: usize, huge: bool) -> Result<DualPolynomial> {
    if n == 0 {
        return Err(Error::DomainError("side size must be positive".into()));
    }
    let cap = if huge { limits::TABLE_HUGE_MAX_N } else { limits::TABLE_MAX_N };
    check_limit("side size for coefficient_table", n, cap)?;
    let bits = n * n;
    let mut f: Vec<i32> = (0..1u64 << bits)
        .into_par_iter()
        .map(|m| bpm_star_value(&BipartiteGraph::from_mask(n, m).expect("mask in range")) as i32)
        .collect();
    for b in 0..bits {
        let step = 1usize << b;
        f.par_chunks_mut(2 * step).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(step);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h -= *l;
            }
        });
    }
    let mut p = DualPolynomial::new(n)?;
    for (m, &c) in f.iter().enumerate() {
        if c != 0 {
            p.terms.insert(m as u64, BigInt::from(c));
        }
    }
    Ok(p)
}

/// Coefficient of a single graph from a precomputed table (zero when absent).
pub fn table_coefficient(table: &DualPolynomial, g: &BipartiteGraph) -> Coefficient {
    table.terms.get(&g.mask()).cloned().unwrap_or_else(BigInt::zero)
}

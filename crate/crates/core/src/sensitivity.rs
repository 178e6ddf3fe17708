//! Pointwise sensitivity of the matching function and the two-path sensitive input.

use crate::bigraph::BipartiteGraph;
use crate::error::{check_limit, Error, Result};
use crate::limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityReport {
    pub n: usize,
    pub input: BipartiteGraph,
    /// 0-based positions whose flip changes the value.
    pub sensitive_edges: Vec<(usize, usize)>,
    pub count: usize,
    pub lower_bound_formula: usize,
    pub degree_lower_bound: usize,
}

pub fn sensitivity_at(x: &BipartiteGraph) -> Result<SensitivityReport> {
    let n = x.n();
    check_limit("side size for sensitivity_at", n, limits::SENSITIVITY_MAX_N)?;
    let base = x.has_perfect_matching();
    let mut sensitive_edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if x.toggle_edge(i, j).has_perfect_matching() != base {
                sensitive_edges.push((i, j));
            }
        }
    }
    let (lb, deg) = if n >= 2 {
        (sens_lower_bound(n)?, degree_lower_bound(n)?)
    } else {
        (0, 0)
    };
    Ok(SensitivityReport {
        n,
        input: x.clone(),
        count: sensitive_edges.len(),
        sensitive_edges,
        lower_bound_formula: lb,
        degree_lower_bound: deg,
    })
}

/// `(P1 left, P1 right, P2 left, P2 right)`, 0-based.
pub type PathParts = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>);

/// Vertex sets of the two paths.
pub fn path_parts(n: usize) -> Result<PathParts> {
    if n < 2 {
        return Err(Error::DomainError("the path construction needs n >= 2".into()));
    }
    let k = n / 2;
    Ok(((0..=k).collect(), (0..k).collect(), (k + 1..n).collect(), (k..n).collect()))
}

/// `P1 = a_1 b_1 a_2 … b_k a_{k+1}` and `P2 = b_{k+1} a_{k+2} b_{k+2} … a_n b_n` with
/// `k = ⌊n/2⌋`. `P1` has an odd vertex count, so the input has no perfect matching.
pub fn construct_path_input(n: usize) -> Result<BipartiteGraph> {
    if n < 2 {
        return Err(Error::DomainError("the path construction needs n >= 2".into()));
    }
    let k = n / 2;
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, i));
        edges.push((i + 1, i));
    }
    for j in k + 1..n {
        edges.push((j, j - 1));
        edges.push((j, j));
    }
    BipartiteGraph::from_edges(n, &edges)
}

pub fn sens_lower_bound(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::DomainError("sensitivity bound needs n >= 2".into()));
    }
    Ok(if n % 2 == 0 {
        (n / 2) * (n / 2 + 1)
    } else {
        ((n - 1) / 2 + 1).pow(2)
    })
}

/// `⌈sqrt(s / 6)⌉` for `s = sens_lower_bound(n)`.
pub fn degree_lower_bound(n: usize) -> Result<usize> {
    let s = sens_lower_bound(n)?;
    let mut d = 0usize;
    while 6 * d * d < s {
        d += 1;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_examples() {
        assert_eq!(sensitivity_at(&BipartiteGraph::complete(2).unwrap()).unwrap().count, 0);
        let x = construct_path_input(2).unwrap();
        assert_eq!(x, BipartiteGraph::from_edges_1based(2, &[(1, 1), (2, 1)]).unwrap());
        let r = sensitivity_at(&x).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.sensitive_edges, vec![(0, 1), (1, 1)]);
        assert_eq!(sensitivity_at(&construct_path_input(6).unwrap()).unwrap().count, 12);
        assert!(construct_path_input(1).is_err());
    }

    #[test]
    fn construction_shape_n4() {
        let x = construct_path_input(4).unwrap();
        let want = BipartiteGraph::from_edges_1based(4, &[(1, 1), (2, 1), (2, 2), (3, 2), (4, 3), (4, 4)]).unwrap();
        assert_eq!(x, want);
        assert!(!x.has_perfect_matching());
    }

    #[test]
    fn formulas() {
        assert_eq!(sens_lower_bound(2).unwrap(), 2);
        assert_eq!(sens_lower_bound(3).unwrap(), 4);
        assert_eq!(sens_lower_bound(6).unwrap(), 12);
        assert_eq!(degree_lower_bound(2).unwrap(), 1);
        assert_eq!(degree_lower_bound(6).unwrap(), 2);
        assert_eq!(degree_lower_bound(100).unwrap(), 21);
    }

    #[test]
    fn sensitive_set_is_path_product() {
        for n in 2..=9 {
            let x = construct_path_input(n).unwrap();
            assert!(!x.has_perfect_matching());
            let r = sensitivity_at(&x).unwrap();
            let (l1, _, _, r2) = path_parts(n).unwrap();
            let want: Vec<_> = l1.iter().flat_map(|&i| r2.iter().map(move |&j| (i, j))).collect();
            assert_eq!(r.sensitive_edges, want, "n = {n}");
            assert!(r.count >= r.lower_bound_formula);
            for &(i, j) in &r.sensitive_edges {
                assert!(x.with_edge(i, j).has_perfect_matching());
            }
        }
    }

    #[test]
    fn elementary_inputs_are_insensitive() {
        for n in 2..=3 {
            for m in 0..1u64 << (n * n) {
                let g = BipartiteGraph::from_mask(n, m).unwrap();
                if g.is_elementary() {
                    assert_eq!(sensitivity_at(&g).unwrap().count, 0, "{g}");
                }
            }
        }
    }

    // Disconnected matching-covered graphs and K_2 are sensitive: removing a matching edge
    // with no alternative destroys every perfect matching.
    #[test]
    fn matching_covered_alone_does_not_imply_insensitive() {
        let pm = BipartiteGraph::from_edges_1based(2, &[(1, 1), (2, 2)]).unwrap();
        assert!(pm.is_matching_covered());
        assert_eq!(sensitivity_at(&pm).unwrap().count, 2);
        let k2 = BipartiteGraph::complete(1).unwrap();
        assert!(k2.is_matching_covered());
        assert_eq!(sensitivity_at(&k2).unwrap().count, 1);
    }
}

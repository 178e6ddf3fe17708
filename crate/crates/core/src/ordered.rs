//! Totally ordered graphs, canonical sorting, representing sequences and the block
//! decomposition used by the closed-form coefficient.

use std::fmt;
use std::str::FromStr;

use crate::bigraph::BipartiteGraph;
use crate::error::{Error, Result};
use crate::limits;

/// Run-length encoding `(d_1,k_1),…,(d_t,k_t)` of the left degree profile of a sorted
/// ordered graph: rows `k_{j-1}+1..=k_j` (1-based) have neighbourhood `{b_1..b_{d_j}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepresentingSequence {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

/// The sorted ordered graph with sequence `{(d,k),(n,n)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub n: usize,
    pub d: usize,
    pub k: usize,
}

/// Non-edges of a sorted ordered graph that may be added without leaving the chain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermittedEdgeSet {
    pub n: usize,
    /// 0-based `(i, j)` pairs in lexicographic order.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedForm {
    pub graph: BipartiteGraph,
    /// `graph` row `p` is row `left[p]` of the input.
    pub left: Vec<usize>,
    /// `graph` column `q` is column `right[q]` of the input.
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    /// Binomial arguments `(n - k_{t-1} - 1, n - d_t)` of the trailing biclique factor.
    pub final_factor: (i64, i64),
}

fn prefix(d: usize) -> u32 {
    if d == 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}

pub fn is_totally_ordered(g: &BipartiteGraph) -> bool {
    let mut rows = g.rows().to_vec();
    rows.sort_by_key(|r| r.count_ones());
    rows.windows(2).all(|w| w[0] & !w[1] == 0)
}

pub fn is_sorted_ordered(g: &BipartiteGraph) -> bool {
    let rows = g.rows();
    rows.iter().all(|&r| r == prefix(r.count_ones() as usize))
        && rows.windows(2).all(|w| w[0].count_ones() <= w[1].count_ones())
}

pub fn canonical_sort(g: &BipartiteGraph) -> Result<SortedForm> {
    if !is_totally_ordered(g) {
        return Err(Error::NotTotallyOrdered);
    }
    let n = g.n();
    let mut left: Vec<usize> = (0..n).collect();
    left.sort_by_key(|&i| g.left_degree(i));
    let col_deg: Vec<usize> = (0..n).map(|j| g.right_degree(j)).collect();
    let mut right: Vec<usize> = (0..n).collect();
    right.sort_by_key(|&j| std::cmp::Reverse(col_deg[j]));
    let graph = g.permute(&left, &right);
    debug_assert!(is_sorted_ordered(&graph));
    Ok(SortedForm { graph, left, right })
}

pub fn representing_sequence(h: &BipartiteGraph) -> Result<RepresentingSequence> {
    if !is_sorted_ordered(h) {
        return Err(Error::NotSortedOrdered);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, &r) in h.rows().iter().enumerate() {
        let d = r.count_ones() as usize;
        match pairs.last_mut() {
            Some(last) if last.0 == d => last.1 = i + 1,
            _ => pairs.push((d, i + 1)),
        }
    }
    Ok(RepresentingSequence { n: h.n(), pairs })
}

/// Sorts a totally ordered graph and extracts its sequence.
pub fn sequence_of(g: &BipartiteGraph) -> Result<RepresentingSequence> {
    representing_sequence(&canonical_sort(g)?.graph)
}

impl RepresentingSequence {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || n > limits::MAX_N {
            return Err(Error::DomainError(format!("side size {n} out of range")));
        }
        if pairs.is_empty() {
            return Err(Error::DomainError("sequence must have t >= 1".into()));
        }
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::DomainError("d and k must be strictly increasing".into()));
            }
        }
        let (d_last, k_last) = *pairs.last().unwrap();
        if d_last > n || k_last != n || pairs[0].1 == 0 {
            return Err(Error::DomainError("need d_t <= n, k_1 > 0 and k_t = n".into()));
        }
        Ok(RepresentingSequence { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    /// `d_i` for `1 <= i <= t+1`, with `d_{t+1} = n`.
    pub fn d(&self, i: usize) -> usize {
        if i == self.t() + 1 {
            self.n
        } else {
            self.pairs[i - 1].0
        }
    }

    /// `k_i` for `0 <= i <= t`, with `k_0 = 0`.
    pub fn k(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.pairs[i - 1].1
        }
    }

    pub fn decode(&self) -> BipartiteGraph {
        let mut rows = Vec::with_capacity(self.n);
        let mut prev = 0;
        for &(d, k) in &self.pairs {
            rows.extend(std::iter::repeat_n(prefix(d), k - prev));
            prev = k;
        }
        BipartiteGraph::from_rows(self.n, rows).expect("valid sequence decodes")
    }

    pub fn permitted_edges(&self) -> PermittedEdgeSet {
        let mut edges = Vec::new();
        for j in 1..=self.t() {
            for i in self.k(j - 1)..self.k(j) {
                for col in self.d(j)..self.d(j + 1) {
                    edges.push((i, col));
                }
            }
        }
        PermittedEdgeSet { n: self.n, edges }
    }

    pub fn is_degenerate(&self) -> bool {
        (1..self.t()).any(|i| self.d(i + 1) <= self.k(i))
    }

    pub fn block_decompose(&self) -> Result<Decomposition> {
        if self.is_degenerate() {
            return Err(Error::DegenerateSequence);
        }
        let t = self.t();
        let blocks = (1..t)
            .map(|i| Block {
                n: self.d(i + 1) - self.k(i - 1),
                d: self.d(i) - self.k(i - 1),
                k: self.k(i) - self.k(i - 1),
            })
            .collect();
        let n = self.n as i64;
        let final_factor = (n - self.k(t - 1) as i64 - 1, n - self.d(t) as i64);
        Ok(Decomposition { blocks, final_factor })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad sequence `{s}`, expected `n; (d1,k1)(d2,k2)...`"));
        let (head, tail) = s.split_once(';').ok_or_else(bad)?;
        let n: usize = head.trim().parse().map_err(|_| bad())?;
        let mut pairs = Vec::new();
        let mut rest = tail.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let (inner, after) = body.split_once(')').ok_or_else(bad)?;
            let (d, k) = inner.split_once(',').ok_or_else(bad)?;
            pairs.push((
                d.trim().parse().map_err(|_| bad())?,
                k.trim().parse().map_err(|_| bad())?,
            ));
            rest = after.trim_start();
        }
        Self::new(n, pairs)
    }
}

impl fmt::Display for RepresentingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n)?;
        if !self.pairs.is_empty() {
            write!(f, " ")?;
        }
        for (d, k) in &self.pairs {
            write!(f, "({d},{k})")?;
        }
        Ok(())
    }
}

impl FromStr for RepresentingSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Block {
    pub fn new(n: usize, d: usize, k: usize) -> Result<Self> {
        if d > n || k == 0 || k >= n {
            return Err(Error::DomainError(format!("invalid block <{n},{d},{k}>")));
        }
        Ok(Block { n, d, k })
    }

    /// `{(d,k),(n,n)}`; only defined for `d < n`.
    pub fn sequence(&self) -> Result<RepresentingSequence> {
        if self.d >= self.n {
            return Err(Error::DomainError("block sequence needs d < n".into()));
        }
        RepresentingSequence::new(self.n, vec![(self.d, self.k), (self.n, self.n)])
    }
}

impl PermittedEdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_graph(&self) -> BipartiteGraph {
        BipartiteGraph::from_edges(self.n, &self.edges).expect("permitted edges lie in K_{n,n}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> RepresentingSequence {
        s.parse().unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_totally_ordered(g: &BipartiteGraph) -> bool {
        permutations(g.n())
            .iter()
            .any(|p| p.windows(2).all(|w| g.row(w[0]) & !g.row(w[1]) == 0))
    }

    #[test]
    fn totally_ordered_examples() {
        let pm = BipartiteGraph::from_edges_1based(2, &[(1, 1), (2, 2)]).unwrap();
        assert!(!is_totally_ordered(&pm));
        assert!(is_totally_ordered(&BipartiteGraph::empty(3).unwrap()));
        // K_{2,3} inside K_{4,4}
        let b = BipartiteGraph::from_rows(4, vec![0b0111, 0, 0b0111, 0]).unwrap();
        assert!(is_totally_ordered(&b));
    }

    #[test]
    fn totally_ordered_matches_brute_force() {
        for n in 1..=4 {
            for m in 0u64..1 << (n * n) {
                let g = BipartiteGraph::from_mask(n, m).unwrap();
                assert_eq!(is_totally_ordered(&g), brute_totally_ordered(&g));
            }
        }
    }

    #[test]
    fn canonical_sort_examples() {
        let g = BipartiteGraph::from_edges_1based(2, &[(2, 1), (2, 2)]).unwrap();
        let s = canonical_sort(&g).unwrap();
        assert_eq!(s.graph, g);
        assert_eq!((s.left.clone(), s.right.clone()), (vec![0, 1], vec![0, 1]));
        let g2 = BipartiteGraph::from_edges_1based(2, &[(1, 1), (1, 2)]).unwrap();
        let s2 = canonical_sort(&g2).unwrap();
        assert_eq!(s2.graph, g);
        assert_eq!(s2.left, vec![1, 0]);
        assert_eq!(g2.permute(&s2.left, &s2.right), s2.graph);
        let k = BipartiteGraph::complete(3).unwrap();
        let sk = canonical_sort(&k).unwrap();
        assert_eq!((sk.graph, sk.left, sk.right), (k, vec![0, 1, 2], vec![0, 1, 2]));
        let pm = BipartiteGraph::from_edges_1based(2, &[(1, 1), (2, 2)]).unwrap();
        assert_eq!(canonical_sort(&pm), Err(Error::NotTotallyOrdered));
    }

    #[test]
    fn canonical_sort_orbit_invariant() {
        let perms = permutations(3);
        for m in 0u64..1 << 9 {
            let g = BipartiteGraph::from_mask(3, m).unwrap();
            let Ok(base) = canonical_sort(&g) else { continue };
            for l in &perms {
                for r in &perms {
                    let h = canonical_sort(&g.permute(l, r)).unwrap();
                    assert_eq!(h.graph, base.graph);
                }
            }
        }
    }

    #[test]
    fn sequence_examples() {
        let n = 5;
        let (s, t) = (2, 3);
        let rows = (0..n).map(|i| if i >= n - s { prefix(t) } else { 0 }).collect();
        let b = BipartiteGraph::from_rows(n, rows).unwrap();
        assert_eq!(representing_sequence(&b).unwrap().pairs(), &[(0, n - s), (t, n)]);
        let k = BipartiteGraph::complete(4).unwrap();
        assert_eq!(representing_sequence(&k).unwrap().pairs(), &[(4, 4)]);
        let blk = Block::new(6, 2, 4).unwrap().sequence().unwrap();
        assert_eq!(representing_sequence(&blk.decode()).unwrap(), blk);
        assert_eq!(representing_sequence(&BipartiteGraph::empty(3).unwrap()).unwrap().pairs(), &[(0, 3)]);
        let pm = BipartiteGraph::from_edges_1based(2, &[(1, 1), (2, 2)]).unwrap();
        assert_eq!(representing_sequence(&pm), Err(Error::NotSortedOrdered));
    }

    #[test]
    fn sequence_round_trip_exhaustive() {
        for n in 1..=4 {
            for m in 0u64..1 << (n * n) {
                let g = BipartiteGraph::from_mask(n, m).unwrap();
                if is_sorted_ordered(&g) {
                    assert_eq!(representing_sequence(&g).unwrap().decode(), g);
                }
            }
        }
    }

    #[test]
    fn permitted_examples() {
        let b = Block::new(5, 2, 3).unwrap().sequence().unwrap();
        let p = b.permitted_edges();
        let want: Vec<_> = (0..3).flat_map(|i| (2..5).map(move |j| (i, j))).collect();
        assert_eq!(p.edges, want);
        assert!(seq("4; (4,4)").permitted_edges().is_empty());
        assert_eq!(seq("3; (0,3)").permitted_edges().len(), 9);
    }

    #[test]
    fn permitted_disjoint_from_graph() {
        for n in 1..=5 {
            for m in 0u64..1 << (n * n) {
                let g = BipartiteGraph::from_mask(n, m).unwrap();
                if is_sorted_ordered(&g) {
                    let s = representing_sequence(&g).unwrap();
                    let p = s.permitted_edges().to_graph();
                    assert!(g.rows().iter().zip(p.rows()).all(|(a, b)| a & b == 0));
                }
            }
        }
    }

    #[test]
    fn degenerate_and_blocks() {
        assert!(seq("2; (0,1)(1,2)").is_degenerate());
        assert!(!seq("2; (0,1)(2,2)").is_degenerate());
        assert!(!seq("3; (3,3)").is_degenerate());
        let d = seq("7; (3,4)(7,7)").block_decompose().unwrap();
        assert_eq!(d.blocks, vec![Block { n: 7, d: 3, k: 4 }]);
        assert_eq!(d.final_factor, (2, 0));
        let d = seq("4; (4,4)").block_decompose().unwrap();
        assert!(d.blocks.is_empty());
        assert_eq!(d.final_factor, (3, 0));
        let d = seq("2; (1,1)(2,2)").block_decompose().unwrap();
        assert_eq!(d.blocks, vec![Block { n: 2, d: 1, k: 1 }]);
        assert_eq!(d.final_factor, (0, 0));
        assert_eq!(seq("2; (0,1)(1,2)").block_decompose(), Err(Error::DegenerateSequence));
    }

    #[test]
    fn text_form() {
        let s = seq("8; (2,2)(5,5)(8,8)");
        assert_eq!(s.to_string(), "8; (2,2)(5,5)(8,8)");
        assert_eq!(s.k(0), 0);
        assert_eq!(s.d(4), 8);
        assert!("3; (2,2)(1,3)".parse::<RepresentingSequence>().is_err());
        assert!("3; (0,2)".parse::<RepresentingSequence>().is_err());
        assert!("3; (0,0)(1,3)".parse::<RepresentingSequence>().is_err());
        assert!("3 (1,3)".parse::<RepresentingSequence>().is_err());
    }
}

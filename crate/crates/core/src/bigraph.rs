//! Balanced bipartite graphs on the vertex set of `K_{n,n}` and the matching predicates
//! built on top of them.
//!
//! Left vertices are `a_0..a_{n-1}`, right vertices `b_0..b_{n-1}`. Row `i` of the
//! biadjacency is a `u32` bit-set of the right neighbours of `a_i`. Text I/O is 1-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_limit, Error, Result};
use crate::limits;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BipartiteGraph {
    n: usize,
    rows: Vec<u32>,
}

/// The five conditions of Hetyei's characterisation of elementary bipartite graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HetyeiConditions {
    pub elementary: bool,
    pub two_minimum_covers: bool,
    pub strict_surplus: bool,
    pub removal_matchings: bool,
    pub connected_all_allowed: bool,
}

impl HetyeiConditions {
    pub fn as_array(&self) -> [bool; 5] {
        [
            self.elementary,
            self.two_minimum_covers,
            self.strict_surplus,
            self.removal_matchings,
            self.connected_all_allowed,
        ]
    }

    pub fn all_equal(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&b| b == a[0])
    }
}

#[inline]
fn full(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl BipartiteGraph {
    pub fn empty(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(BipartiteGraph { n, rows: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        Ok(BipartiteGraph { n, rows: vec![full(n); n] })
    }

    pub fn from_rows(n: usize, rows: Vec<u32>) -> Result<Self> {
        Self::check_n(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
        }
        if rows.iter().any(|&r| r & !full(n) != 0) {
            return Err(Error::DomainError(format!("row bit index out of range for n = {n}")));
        }
        Ok(BipartiteGraph { n, rows })
    }

    /// Builds a graph from 0-based edges `(i, j)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::DomainError(format!("edge ({i},{j}) out of range for n = {n}")));
            }
            g.rows[i] |= 1 << j;
        }
        Ok(g)
    }

    /// Builds a graph from 1-based edges, as written in examples and files.
    pub fn from_edges_1based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(Error::DomainError("1-based edge with a zero index".into()));
        }
        let e: Vec<_> = edges.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
        Self::from_edges(n, &e)
    }

    /// Decodes an `n²`-bit edge mask, bit `i*n + j` for edge `(a_i, b_j)`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_limit("side size for edge masks", n, limits::MASK_MAX_N)?;
        Self::check_n(n)?;
        let nn = n * n;
        if nn < 64 && mask >> nn != 0 {
            return Err(Error::DomainError("mask has bits beyond n^2".into()));
        }
        let rows = (0..n).map(|i| ((mask >> (i * n)) as u32) & full(n)).collect();
        Ok(BipartiteGraph { n, rows })
    }

    fn check_n(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::DomainError("side size must be positive".into()));
        }
        check_limit("side size", n, limits::MAX_N)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> u32 {
        self.rows[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// 0-based edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, &r) in self.rows.iter().enumerate() {
            let mut r = r;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                out.push((i, j));
                r &= r - 1;
            }
        }
        out
    }

    /// Edge mask with bit `i*n + j`; only for `n <= 8`.
    pub fn mask(&self) -> u64 {
        assert!(self.n <= limits::MASK_MAX_N, "edge masks need n <= 8");
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | (r as u64) << (i * self.n))
    }

    pub fn left_degree(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    pub fn right_degree(&self, j: usize) -> usize {
        self.rows.iter().filter(|&&r| r >> j & 1 == 1).count()
    }

    pub fn with_edge(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        g.rows[i] |= 1 << j;
        g
    }

    pub fn without_edge(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        g.rows[i] &= !(1 << j);
        g
    }

    pub fn toggle_edge(&self, i: usize, j: usize) -> Self {
        let mut g = self.clone();
        g.rows[i] ^= 1 << j;
        g
    }

    pub fn complement(&self) -> Self {
        let f = full(self.n);
        BipartiteGraph { n: self.n, rows: self.rows.iter().map(|&r| !r & f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![0u32; self.n];
        for (i, j) in self.edges() {
            rows[j] |= 1 << i;
        }
        BipartiteGraph { n: self.n, rows }
    }

    /// Relabels vertices: new left vertex `p` is old `left[p]`, new right vertex `q` is
    /// old `right[q]`.
    pub fn permute(&self, left: &[usize], right: &[usize]) -> Self {
        let n = self.n;
        assert!(left.len() == n && right.len() == n);
        let rows = left
            .iter()
            .map(|&old_i| {
                let r = self.rows[old_i];
                right
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (q, &old_j)| acc | ((r >> old_j) & 1) << q)
            })
            .collect();
        BipartiteGraph { n, rows }
    }

    pub fn has_perfect_matching(&self) -> bool {
        let f = full(self.n);
        matching_size_within(&self.rows, f, f) == self.n
    }

    /// Perfect matching test on the subgraph induced by `left` and `right` vertex masks.
    pub fn has_perfect_matching_within(&self, left: u32, right: u32) -> bool {
        left.count_ones() == right.count_ones()
            && matching_size_within(&self.rows, left, right) == left.count_ones() as usize
    }

    /// True when edge `(i, j)` lies in some perfect matching.
    pub fn is_allowed_edge(&self, i: usize, j: usize) -> bool {
        let f = full(self.n);
        self.has_edge(i, j) && self.has_perfect_matching_within(f & !(1 << i), f & !(1 << j))
    }

    /// Connected components as `(left mask, right mask)` pairs; isolated vertices included.
    pub fn components(&self) -> Vec<(u32, u32)> {
        let n = self.n;
        let mut seen_left = 0u32;
        let mut seen_right = 0u32;
        let mut out = Vec::new();
        for start in 0..n {
            if seen_left >> start & 1 == 1 {
                continue;
            }
            let mut left = 1u32 << start;
            let mut right = 0u32;
            loop {
                let new_right = left_neighbourhood(&self.rows, left);
                let new_left = (0..n)
                    .filter(|&i| self.rows[i] & new_right != 0)
                    .fold(left, |acc, i| acc | 1 << i);
                if new_left == left && new_right == right {
                    break;
                }
                left = new_left;
                right = new_right;
            }
            seen_left |= left;
            seen_right |= right;
            out.push((left, right));
        }
        let mut rest = full(n) & !seen_right;
        while rest != 0 {
            out.push((0, 1 << rest.trailing_zeros()));
            rest &= rest - 1;
        }
        out
    }

    pub fn connected_components(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components() == 1
    }

    pub fn cyclomatic_number(&self) -> usize {
        self.edge_count() + self.connected_components() - 2 * self.n
    }

    /// Has a perfect matching and every edge lies in one. The empty graph is rejected.
    pub fn is_matching_covered(&self) -> bool {
        if !self.has_perfect_matching() {
            return false;
        }
        self.edges().into_iter().all(|(i, j)| self.is_allowed_edge(i, j))
    }

    pub fn is_elementary(&self) -> bool {
        self.is_connected() && self.is_matching_covered()
    }

    pub fn hetyei_conditions(&self) -> Result<HetyeiConditions> {
        check_limit("side size for hetyei_conditions", self.n, limits::HETYEI_MAX_N)?;
        Ok(HetyeiConditions {
            elementary: self.is_elementary(),
            two_minimum_covers: self.minimum_covers_are_sides(),
            strict_surplus: self.has_strict_surplus(),
            removal_matchings: self.has_removal_matchings(),
            connected_all_allowed: self.is_connected()
                && self.edges().into_iter().all(|(i, j)| self.is_allowed_edge(i, j)),
        })
    }

    // Vertex subsets are 2n-bit masks: left i at bit i, right j at bit n + j.
    fn minimum_covers_are_sides(&self) -> bool {
        let n = self.n;
        let edges = self.edges();
        let mut best = usize::MAX;
        let mut covers = Vec::new();
        for s in 0u64..1 << (2 * n) {
            let size = s.count_ones() as usize;
            if size > best {
                continue;
            }
            let covers_all = edges.iter().all(|&(i, j)| s >> i & 1 == 1 || s >> (n + j) & 1 == 1);
            if !covers_all {
                continue;
            }
            if size < best {
                best = size;
                covers.clear();
            }
            covers.push(s);
        }
        let a = (1u64 << n) - 1;
        let b = a << n;
        covers.len() == 2 && covers.contains(&a) && covers.contains(&b)
    }

    // |N(X)| > |X| for nonempty proper X of the left side, and Hall's condition for X = A.
    fn has_strict_surplus(&self) -> bool {
        let f = full(self.n);
        if left_neighbourhood(&self.rows, f).count_ones() < self.n as u32 {
            return false;
        }
        (1..f).all(|x: u32| left_neighbourhood(&self.rows, x).count_ones() > x.count_ones())
    }

    fn has_removal_matchings(&self) -> bool {
        let n = self.n;
        if n == 1 {
            return self.rows[0] == 1;
        }
        let f = full(n);
        (0..n).all(|i| (0..n).all(|j| self.has_perfect_matching_within(f & !(1 << i), f & !(1 << j))))
    }

    /// Parses the text format: first line `n`, then `n` lines of `n` characters in `{0,1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing size line".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad size line `{header}`")))?;
        Self::check_n(n)?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
            if line.chars().count() != n {
                return Err(Error::Parse(format!("row {} has length {}, expected {n}", i + 1, line.len())));
            }
            let mut r = 0u32;
            for (j, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => r |= 1 << j,
                    _ => return Err(Error::Parse(format!("row {}: invalid character `{c}`", i + 1))),
                }
            }
            rows.push(r);
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("trailing line `{extra}`")));
        }
        Ok(BipartiteGraph { n, rows })
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for &r in &self.rows {
            let line: String = (0..self.n).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn left_neighbourhood(rows: &[u32], left: u32) -> u32 {
    let mut acc = 0;
    let mut l = left;
    while l != 0 {
        acc |= rows[l.trailing_zeros() as usize];
        l &= l - 1;
    }
    acc
}

/// Maximum matching size between the left vertices in `left` and right vertices in `right`
/// by repeated augmenting paths.
fn matching_size_within(rows: &[u32], left: u32, right: u32) -> usize {
    let n = rows.len();
    let mut match_right = [usize::MAX; 32];
    let mut size = 0;
    let mut l = left;
    while l != 0 {
        let u = l.trailing_zeros() as usize;
        l &= l - 1;
        let mut visited = 0u32;
        if augment(u, rows, right, &mut visited, &mut match_right[..n]) {
            size += 1;
        }
    }
    size
}

fn augment(u: usize, rows: &[u32], right: u32, visited: &mut u32, match_right: &mut [usize]) -> bool {
    let mut cand = rows[u] & right & !*visited;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if *visited >> v & 1 == 1 {
            continue;
        }
        *visited |= 1 << v;
        if match_right[v] == usize::MAX || augment(match_right[v], rows, right, visited, match_right) {
            match_right[v] = u;
            return true;
        }
    }
    false
}

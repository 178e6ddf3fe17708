//! Dense two-phase simplex and the Chebyshev-basis linear program for the symmetrised
//! AND approximation problem. Used as an independent route next to the exchange solver.

use num_rational::BigRational;

use super::univariate::UnivariatePolynomial;
use crate::error::{check_limit, Error, Result};
use crate::limits;

const PIVOT_EPS: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// Maximise `c.x` subject to `A x <= b`, `x >= 0`.
pub fn simplex(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    Tableau::new(a, b, c).solve()
}

struct Tableau {
    rows: usize,
    cols: usize,
    // Basic and nonbasic variable ids; ids >= cols are slacks, -1 is the phase-one artificial.
    basic: Vec<isize>,
    nonbasic: Vec<isize>,
    d: Vec<Vec<f64>>,
}

impl Tableau {
    fn new(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Self {
        let (rows, cols) = (b.len(), c.len());
        let mut d = vec![vec![0.0; cols + 2]; rows + 2];
        for i in 0..rows {
            d[i][..cols].copy_from_slice(&a[i]);
            d[i][cols] = -1.0;
            d[i][cols + 1] = b[i];
        }
        for j in 0..cols {
            d[rows][j] = -c[j];
        }
        d[rows + 1][cols] = 1.0;
        let basic = (0..rows).map(|i| (cols + i) as isize).collect();
        let mut nonbasic: Vec<isize> = (0..cols as isize).collect();
        nonbasic.push(-1);
        Tableau { rows, cols, basic, nonbasic, d }
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let inv = 1.0 / self.d[r][s];
        let pivot_row = self.d[r].clone();
        for i in 0..self.rows + 2 {
            if i != r && self.d[i][s].abs() > PIVOT_EPS {
                let f = self.d[i][s] * inv;
                let row = &mut self.d[i];
                for j in 0..self.cols + 2 {
                    row[j] -= pivot_row[j] * f;
                }
                row[s] = pivot_row[s] * f;
            }
        }
        for j in 0..self.cols + 2 {
            if j != s {
                self.d[r][j] *= inv;
            }
        }
        for i in 0..self.rows + 2 {
            if i != r {
                self.d[i][s] *= -inv;
            }
        }
        self.d[r][s] = inv;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[s]);
    }

    // Entering column by smallest reduced cost, ties by variable id; leaving row by the
    // ratio test, ties by variable id.
    fn run(&mut self, phase: isize) -> bool {
        let x = if phase == 1 { self.rows } else { self.rows + 1 };
        loop {
            let mut s: Option<usize> = None;
            for j in 0..=self.cols {
                if self.nonbasic[j] == -phase {
                    continue;
                }
                let better = match s {
                    None => true,
                    Some(t) => (self.d[x][j], self.nonbasic[j]) < (self.d[x][t], self.nonbasic[t]),
                };
                if better {
                    s = Some(j);
                }
            }
            let s = s.expect("at least one column");
            if self.d[x][s] >= -PIVOT_EPS {
                return true;
            }
            let mut r: Option<usize> = None;
            for i in 0..self.rows {
                if self.d[i][s] <= PIVOT_EPS {
                    continue;
                }
                let better = match r {
                    None => true,
                    Some(t) => {
                        let lhs = (self.d[i][self.cols + 1] / self.d[i][s], self.basic[i]);
                        let rhs = (self.d[t][self.cols + 1] / self.d[t][s], self.basic[t]);
                        lhs < rhs
                    }
                };
                if better {
                    r = Some(i);
                }
            }
            match r {
                Some(r) => self.pivot(r, s),
                None => return false,
            }
        }
    }

    fn solve(mut self) -> LpOutcome {
        let rhs = self.cols + 1;
        let mut r = 0;
        for i in 1..self.rows {
            if self.d[i][rhs] < self.d[r][rhs] {
                r = i;
            }
        }
        if self.rows > 0 && self.d[r][rhs] < -PIVOT_EPS {
            self.pivot(r, self.cols);
            if !self.run(2) || self.d[self.rows + 1][rhs] < -1e-9 {
                return LpOutcome::Infeasible;
            }
            for i in 0..self.rows {
                if self.basic[i] == -1 {
                    let mut s = 0;
                    for j in 1..=self.cols {
                        if (self.d[i][j], self.nonbasic[j]) < (self.d[i][s], self.nonbasic[s]) {
                            s = j;
                        }
                    }
                    self.pivot(i, s);
                }
            }
        }
        if !self.run(1) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![0.0; self.cols];
        for i in 0..self.rows {
            if let Ok(v) = usize::try_from(self.basic[i]) {
                if v < self.cols {
                    x[v] = self.d[i][rhs];
                }
            }
        }
        LpOutcome::Optimal { x, value: self.d[self.rows][rhs] }
    }
}

fn chebyshev_row(y: f64, d: usize) -> Vec<f64> {
    let mut t = vec![1.0; d + 1];
    if d >= 1 {
        t[1] = y;
    }
    for j in 2..=d {
        t[j] = 2.0 * y * t[j - 1] - t[j - 2];
    }
    t
}

/// Minimax degree-`d` fit to `AND_m` on `0..=m` by linear programming in the Chebyshev
/// basis. Returns the binary64 witness and the LP optimum.
pub fn lp_min_error(m: usize, d: usize) -> Result<(UnivariatePolynomial, f64)> {
    check_limit("AND arity for the LP route", m, limits::AND_LP_MAX_ARITY)?;
    // Variables: c+_0..c+_d, c-_0..c-_d, t. Maximise -t.
    let cols = 2 * (d + 1) + 1;
    let mut a = Vec::with_capacity(2 * (m + 1));
    let mut b = Vec::with_capacity(2 * (m + 1));
    for k in 0..=m {
        let y = 2.0 * k as f64 / m as f64 - 1.0;
        let tk = chebyshev_row(y, d);
        let f = if k == m { 1.0 } else { 0.0 };
        let mut up = vec![0.0; cols];
        let mut down = vec![0.0; cols];
        for j in 0..=d {
            up[j] = tk[j];
            up[d + 1 + j] = -tk[j];
            down[j] = -tk[j];
            down[d + 1 + j] = tk[j];
        }
        up[cols - 1] = -1.0;
        down[cols - 1] = -1.0;
        a.push(up);
        b.push(f);
        a.push(down);
        b.push(-f);
    }
    let mut c = vec![0.0; cols];
    c[cols - 1] = -1.0;
    match simplex(&a, &b, &c) {
        LpOutcome::Optimal { x, value } => {
            let coeffs: Vec<f64> = (0..=d).map(|j| x[j] - x[d + 1 + j]).collect();
            Ok((UnivariatePolynomial::from_f64(m, &coeffs)?, -value))
        }
        other => Err(Error::NumericalFailure(format!("LP for m = {m}, d = {d} returned {other:?}"))),
    }
}

/// Least degree whose LP witness is certified by exact evaluation to be within
/// `epsilon * (1 + tol)`.
pub fn lp_min_degree(m: usize, epsilon: &BigRational, tol: f64) -> Result<(usize, UnivariatePolynomial)> {
    let slack = epsilon * BigRational::from_float(1.0 + tol).expect("finite tolerance");
    let eps_f = super::rational_to_f64(epsilon);
    for d in 0..m {
        let (w, t) = lp_min_error(m, d)?;
        if w.and_error() <= slack {
            return Ok((d, w));
        }
        if t <= eps_f * (1.0 + tol) * (1.0 - 1e-9) {
            return Err(Error::NumericalFailure(format!(
                "LP optimum {t} at m = {m}, d = {d} is feasible but its witness fails exact certification"
            )));
        }
    }
    Ok((m, super::exact_and(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_textbook() {
        // max 3x + y + 2z, x + y + 3z <= 30, 2x + 2y + 5z <= 24, 4x + y + 2z <= 36
        let a = vec![vec![1.0, 1.0, 3.0], vec![2.0, 2.0, 5.0], vec![4.0, 1.0, 2.0]];
        let out = simplex(&a, &[30.0, 24.0, 36.0], &[3.0, 1.0, 2.0]);
        let LpOutcome::Optimal { x, value } = out else { panic!("{out:?}") };
        assert!((value - 28.0).abs() < 1e-9);
        assert!((x[0] - 8.0).abs() < 1e-9 && (x[1] - 4.0).abs() < 1e-9 && x[2].abs() < 1e-9);
    }

    #[test]
    fn simplex_phase_one() {
        // max -x - y, x + y >= 2 (as -x - y <= -2), x <= 3
        let a = vec![vec![-1.0, -1.0], vec![1.0, 0.0]];
        let LpOutcome::Optimal { value, .. } = simplex(&a, &[-2.0, 3.0], &[-1.0, -1.0]) else { panic!() };
        assert!((value + 2.0).abs() < 1e-9);
        let infeasible = simplex(&[vec![1.0], vec![-1.0]], &[1.0, -2.0], &[1.0]);
        assert_eq!(infeasible, LpOutcome::Infeasible);
        assert_eq!(simplex(&[vec![-1.0]], &[1.0], &[1.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn lp_matches_known_optima() {
        // m = 3, d = 1: optimal error 1/3; m = 4, d = 1: optimal error 3/8.
        let (_, t) = lp_min_error(3, 1).unwrap();
        assert!((t - 1.0 / 3.0).abs() < 1e-9);
        let (_, t) = lp_min_error(4, 1).unwrap();
        assert!((t - 0.375).abs() < 1e-9, "{t}");
    }
}

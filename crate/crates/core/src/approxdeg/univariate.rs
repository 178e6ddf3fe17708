//! Univariate polynomials on `[0, m]` with exact rational coefficients in the Chebyshev
//! basis `T_j(2t/m - 1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    /// Right end of the interval; the variable is mapped by `y = 2t/m - 1`.
    pub m: usize,
    /// Chebyshev coefficients, trailing zeros trimmed.
    pub coefficients: Vec<BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl UnivariatePolynomial {
    pub fn new(m: usize, mut coefficients: Vec<BigRational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::DomainError("interval [0, m] needs m >= 1".into()));
        }
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Ok(UnivariatePolynomial { m, coefficients })
    }

    /// Exact conversion of binary64 Chebyshev coefficients.
    pub fn from_f64(m: usize, coefficients: &[f64]) -> Result<Self> {
        let c = coefficients
            .iter()
            .map(|&v| BigRational::from_float(v).ok_or_else(|| Error::NumericalFailure("non-finite coefficient".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, c)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Clenshaw recurrence.
    pub fn evaluate(&self, t: &BigRational) -> BigRational {
        let y = t * rat(2) / rat(self.m as i64) - rat(1);
        let two_y = &y * rat(2);
        let mut b1 = BigRational::zero();
        let mut b2 = BigRational::zero();
        for c in self.coefficients.iter().skip(1).rev() {
            let b0 = c + &two_y * &b1 - &b2;
            b2 = b1;
            b1 = b0;
        }
        match self.coefficients.first() {
            Some(c0) => c0 + y * b1 - b2,
            None => BigRational::zero(),
        }
    }

    pub fn evaluate_int(&self, k: usize) -> BigRational {
        self.evaluate(&rat(k as i64))
    }

    pub fn evaluate_f64(&self, t: f64) -> f64 {
        let y = 2.0 * t / self.m as f64 - 1.0;
        let c: Vec<f64> = self.coefficients.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c.iter().skip(1).rev() {
            let b0 = ck + 2.0 * y * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        c.first().map_or(0.0, |&c0| c0 + y * b1 - b2)
    }

    /// The interpolant through `(xs[i], values[i])`, via Newton divided differences
    /// expanded directly in the Chebyshev basis.
    pub fn interpolate(m: usize, xs: &[usize], values: &[BigRational]) -> Result<Self> {
        if xs.len() != values.len() || xs.is_empty() {
            return Err(Error::DomainError("interpolation needs matching, nonempty inputs".into()));
        }
        let x: Vec<BigRational> = xs.iter().map(|&v| rat(v as i64)).collect();
        let mut dd = values.to_vec();
        for level in 1..dd.len() {
            for i in (level..dd.len()).rev() {
                let den = &x[i] - &x[i - level];
                if den.is_zero() {
                    return Err(Error::DomainError("interpolation nodes must be distinct".into()));
                }
                dd[i] = (&dd[i] - &dd[i - 1]) / den;
            }
        }
        let half_m = BigRational::new(BigInt::from(m), BigInt::from(2));
        let mut acc = vec![dd[dd.len() - 1].clone()];
        for i in (0..dd.len() - 1).rev() {
            // acc <- acc * (t - x_i) + dd[i], with t - x_i = (m/2) y + (m/2 - x_i)
            let shift = &half_m - &x[i];
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (j, c) in acc.iter().enumerate() {
                let scaled = c * &half_m;
                if j == 0 {
                    next[1] += &scaled;
                } else {
                    let h = &scaled / rat(2);
                    next[j + 1] += &h;
                    next[j - 1] += &h;
                }
                next[j] += c * &shift;
            }
            next[0] += &dd[i];
            acc = next;
        }
        Self::new(m, acc)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        UnivariatePolynomial { m: self.m, coefficients: self.coefficients.iter().map(|c| c * s).collect() }
            .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coefficients.last().is_some_and(|c| c.is_zero()) {
            self.coefficients.pop();
        }
        self
    }

    /// `max_{k < m} |p(k)|` and `|p(m) - 1|`, the two error terms against `AND_m`.
    pub fn and_errors(&self) -> (BigRational, BigRational) {
        let low = (0..self.m).map(|k| self.evaluate_int(k).abs()).max().unwrap_or_default();
        let top = (self.evaluate_int(self.m) - BigRational::one()).abs();
        (low, top)
    }

    pub fn and_error(&self) -> BigRational {
        let (a, b) = self.and_errors();
        a.max(b)
    }
}

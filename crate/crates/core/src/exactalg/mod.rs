//! Exact scalars, graded polynomials, truncated power series and rational
//! linear algebra.

mod linalg;
mod parse;
mod poly;
mod series;

pub use linalg::{rank_of, to_dense, to_sparse, Echelon, Matrix, SparseVec};
pub use parse::{parse_expr, parse_polynomial, ExprValue};
pub use poly::Polynomial;
pub use series::{ord_with_retry, PowerSeries};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse { line: 1, col: 1, msg: format!("invalid rational `{s}`") };
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `p/q` rendering (integers without denominator).
pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Decimal approximation for display only; truncates toward zero.
pub fn fmt_decimal(c: &Rational, digits: usize) -> String {
    let neg = c.is_negative();
    let a = c.abs();
    let int = a.trunc().to_integer();
    let mut frac = a.fract();
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        for _ in 0..digits {
            frac *= q(10);
            let d = frac.trunc().to_integer();
            s.push_str(&d.to_string());
            frac = frac.fract();
        }
    }
    s
}

/// Positive integer weights `λ_1..λ_m` defining the quasi-degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    weights: Vec<u32>,
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::Structural(format!("weights must be positive, got {weights:?}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    pub fn qdeg(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// All exponent vectors of quasi-degree exactly `delta`, in lexicographic order.
    pub fn monomials_of_degree(&self, delta: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.weights.len()];
        self.fill(0, delta, &mut cur, &mut out);
        out.sort();
        out
    }

    fn fill(&self, i: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == self.weights.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = self.weights[i];
        for e in 0..=rest / w {
            cur[i] = e;
            self.fill(i + 1, rest - e * w, cur, out);
        }
        cur[i] = 0;
    }
}

/// An order of vanishing or tangency: finite, certified infinite, or a lower
/// bound that a truncation cap prevented from being pinned down.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Order<T = u32> {
    Finite(T),
    Infinite,
    AtLeast(T),
}

impl<T: Clone + PartialOrd> Order<T> {
    pub fn finite(&self) -> Option<T> {
        match self {
            Order::Finite(v) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Order::AtLeast(_))
    }

    /// Certain `self <= other` given what each value asserts.
    pub fn certainly_le(&self, other: &Self) -> bool {
        match (self, other) {
            (_, Order::Infinite) => true,
            (Order::Finite(a), Order::Finite(b)) => a <= b,
            (Order::Finite(a), Order::AtLeast(b)) => a <= b,
            _ => false,
        }
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> Order<U> {
        match self {
            Order::Finite(v) => Order::Finite(f(v)),
            Order::Infinite => Order::Infinite,
            Order::AtLeast(v) => Order::AtLeast(f(v)),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Order<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => write!(f, "inf"),
            Order::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_and_rendering() {
        assert_eq!(parse_rational("6/4").unwrap(), qf(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(fmt_rational(&qf(-3, 6)), "-1/2");
        assert_eq!(fmt_decimal(&qf(-1, 3), 4), "-0.3333");
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightSystem::new(vec![3, 0, 2]).is_err());
        let w = WeightSystem::new(vec![3, 3, 2]).unwrap();
        assert_eq!(w.qdeg(&[0, 2, 2]), 10);
        assert_eq!(w.monomials_of_degree(6), vec![vec![0, 0, 3], vec![0, 2, 0], vec![1, 1, 0], vec![2, 0, 0]]);
        assert!(w.monomials_of_degree(1).is_empty());
    }

    #[test]
    fn order_comparisons() {
        assert!(Order::Finite(2).certainly_le(&Order::Infinite));
        assert!(Order::Finite(2).certainly_le(&Order::AtLeast(3)));
        assert!(!Order::AtLeast(2).certainly_le(&Order::Finite(5)));
        assert_eq!(Order::<u32>::Infinite.to_string(), "inf");
    }
}

use super::{Order, Polynomial, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

/// Univariate series in `t` known modulo `t^cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn zero(cap: u32) -> Self {
        Self { coeffs: vec![Rational::zero(); cap as usize] }
    }

    pub fn one(cap: u32) -> Self {
        Self::constant(Rational::one(), cap)
    }

    pub fn constant(c: Rational, cap: u32) -> Self {
        Self::monomial(c, 0, cap)
    }

    /// `c·t^e`, which truncates to zero when `e >= cap`.
    pub fn monomial(c: Rational, e: u32, cap: u32) -> Self {
        let mut s = Self::zero(cap);
        if e < cap {
            s.coeffs[e as usize] = c;
        }
        s
    }

    /// Truncation of a univariate polynomial.
    pub fn from_polynomial(p: &Polynomial, cap: u32) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::Structural(format!("series from a polynomial in {} variables", p.nvars())));
        }
        let mut s = Self::zero(cap);
        for (e, c) in p.terms() {
            if e[0] < cap {
                s.coeffs[e[0] as usize] += c;
            }
        }
        Ok(s)
    }

    pub fn cap(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeff(&self, e: u32) -> Rational {
        self.coeffs.get(e as usize).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// True when every coefficient below the cap vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn with_cap(&self, cap: u32) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(cap as usize, Rational::zero());
        Self { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap()) as usize;
        Self { coeffs: (0..cap).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap()) as usize;
        Self { coeffs: (0..cap).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap()) as usize;
        let mut out = vec![Rational::zero(); cap];
        for (i, a) in self.coeffs.iter().enumerate().take(cap) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.cap());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `d/dt`; the result is known one order less precisely.
    pub fn derivative(&self) -> Self {
        let cap = self.coeffs.len().saturating_sub(1);
        Self {
            coeffs: (0..cap).map(|i| &self.coeffs[i + 1] * Rational::from_integer((i as i64 + 1).into())).collect(),
        }
    }

    /// Order of vanishing. A series that is zero below its cap yields
    /// `AtLeast(cap)`: truncation can never certify an infinite order.
    pub fn ord(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Order::Finite(i as u32),
            None => Order::AtLeast(self.cap()),
        }
    }
}

/// Recomputes `f(cap)` with doubling caps until the order is certified or
/// `max_cap` is reached.
pub fn ord_with_retry(f: impl Fn(u32) -> Result<PowerSeries>, start: u32, max_cap: u32) -> Result<Order> {
    let mut cap = start.max(1);
    loop {
        let o = f(cap)?.ord();
        if o.is_exact() || cap >= max_cap {
            return Ok(o);
        }
        cap = (cap * 2).min(max_cap);
    }
}

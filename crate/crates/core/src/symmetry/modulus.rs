use crate::exactalg::{fmt_decimal, fmt_rational, q, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// An exact real number `coeff · base^exp` with rational `coeff`, positive
/// rational `base` and rational `exp`. Scalings by fractional powers of the
/// coordinates produce such values.
#[derive(Debug, Clone)]
pub struct Modulus {
    coeff: Rational,
    base: Rational,
    exp: Rational,
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

fn rational_pow(b: &Rational, e: &BigInt) -> Rational {
    let k = e.abs().to_usize().expect("exponent fits");
    let p = num_traits::pow(b.clone(), k);
    if e.is_negative() {
        p.recip()
    } else {
        p
    }
}

impl Modulus {
    pub fn rational(c: Rational) -> Self {
        Self { coeff: c, base: Rational::one(), exp: Rational::zero() }
    }

    /// `coeff · base^exp`, folded into a rational when the power is rational.
    pub fn new(coeff: Rational, base: Rational, exp: Rational) -> Self {
        assert!(base.is_positive(), "modulus base must be positive");
        let mut m = Self { coeff, base, exp };
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        if self.coeff.is_zero() || self.exp.is_zero() || self.base.is_one() {
            self.base = Rational::one();
            self.exp = Rational::zero();
            return;
        }
        let den = self.exp.denom().to_u32().expect("small exponent denominator");
        if let (Some(a), Some(b)) = (exact_root(self.base.numer(), den), exact_root(self.base.denom(), den)) {
            let root = Rational::new(a, b);
            self.coeff = &self.coeff * rational_pow(&root, self.exp.numer());
            self.base = Rational::one();
            self.exp = Rational::zero();
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn exp(&self) -> &Rational {
        &self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.exp.is_zero().then(|| self.coeff.clone())
    }

    pub fn signum(&self) -> i32 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        }
    }

    /// `value^L` for an integer `L` clearing the exponent denominator.
    fn power(&self, l: &BigInt) -> Rational {
        let e = &self.exp * Rational::from_integer(l.clone());
        debug_assert!(e.is_integer());
        rational_pow(&self.coeff, l) * rational_pow(&self.base, &e.to_integer())
    }

    /// Approximate value for display; never used in computations.
    pub fn approx(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let b = self.base.to_f64().unwrap_or(f64::NAN);
        let e = self.exp.to_f64().unwrap_or(f64::NAN);
        c * b.powf(e)
    }

    pub fn render_decimal(&self, digits: usize) -> String {
        match self.as_rational() {
            Some(c) => fmt_decimal(&c, digits),
            None => format!("{:.*}", digits, self.approx()),
        }
    }
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        if self.signum() != other.signum() {
            return false;
        }
        if self.signum() == 0 {
            return true;
        }
        let l = self.exp.denom().lcm(other.exp.denom());
        self.power(&l) == other.power(&l)
    }
}

impl Eq for Modulus {}

impl From<Rational> for Modulus {
    fn from(c: Rational) -> Self {
        Self::rational(c)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.is_zero() {
            return f.write_str(&fmt_rational(&self.coeff));
        }
        let pow = format!("({})^({})", fmt_rational(&self.base), fmt_rational(&self.exp));
        if self.coeff == q(1) {
            f.write_str(&pow)
        } else if self.coeff == q(-1) {
            write!(f, "-{pow}")
        } else {
            write!(f, "{}*{pow}", fmt_rational(&self.coeff))
        }
    }
}

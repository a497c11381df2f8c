use super::{fmt_rational, PowerSeries, Rational, WeightSystem};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse multivariate polynomial over the rationals. Exponent vectors are
/// dense with a fixed length, and zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_i` (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Structural(format!("exponent vector {e:?} has length {}, expected {nvars}", e.len())));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Adds `c·x^e` in place.
    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.len(), self.nvars);
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Structural(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Set of quasi-degrees of the terms.
    pub fn quasi_degrees(&self, w: &WeightSystem) -> BTreeSet<u32> {
        self.terms.keys().map(|e| w.qdeg(e)).collect()
    }

    /// Quasi-degree if the polynomial is nonzero and quasi-homogeneous.
    pub fn qdeg(&self, w: &WeightSystem) -> Option<u32> {
        let d = self.quasi_degrees(w);
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_quasi_homogeneous(&self, w: &WeightSystem) -> bool {
        self.quasi_degrees(w).len() <= 1
    }

    pub fn graded_part(&self, w: &WeightSystem, delta: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| w.qdeg(e) == delta).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Smallest total (unweighted) degree among the terms.
    pub fn min_std_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::Structural(format!("point of length {} for {} variables", point.len(), self.nvars)));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Composition `p(g_1, …, g_m)` with polynomial arguments in a common ring.
    pub fn compose(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.nvars {
            return Err(Error::Structural(format!("{} arguments for {} variables", args.len(), self.nvars)));
        }
        let target = args.first().map(|a| a.nvars).unwrap_or(0);
        if args.iter().any(|a| a.nvars != target) {
            return Err(Error::Structural("composition arguments live in different rings".into()));
        }
        let mut powers: Vec<Vec<Polynomial>> = args.iter().map(|a| vec![Polynomial::one(target), a.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &args[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Composition with truncated series `x_i = s_i(t)`; the result has the
    /// common cap of the arguments.
    pub fn substitute_series(&self, branch: &[PowerSeries]) -> Result<PowerSeries> {
        if branch.len() != self.nvars {
            return Err(Error::Structural(format!("{} series for {} variables", branch.len(), self.nvars)));
        }
        let cap = branch.iter().map(|s| s.cap()).min().unwrap_or(0);
        if branch.iter().any(|s| s.cap() != cap) {
            return Err(Error::Structural("branch series have different caps".into()));
        }
        let mut powers: Vec<Vec<PowerSeries>> = branch.iter().map(|s| vec![PowerSeries::one(cap), s.clone()]).collect();
        let mut out = PowerSeries::zero(cap);
        for (e, c) in &self.terms {
            let mut t = PowerSeries::constant(c.clone(), cap);
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i][powers[i].len() - 1].mul(&branch[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Re-indexes into `nvars` variables, sending `x_i` to `x_{map[i]}`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.nvars || map.iter().any(|&j| j >= nvars) {
            return Err(Error::Structural(format!("bad variable map {map:?}")));
        }
        let mut out = Polynomial::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Renders with variable names `names[i]` for `x_i`.
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            if vars.is_empty() {
                s.push_str(&fmt_rational(&a));
            } else {
                if !a.is_one() {
                    s.push_str(&fmt_rational(&a));
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&Self::default_names(self.nvars)))
    }
}

// Operator forms panic on ring mismatch; use the `checked_*` methods on
// untrusted input.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

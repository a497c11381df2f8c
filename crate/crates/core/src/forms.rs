//! Polynomial differential forms and vector fields on `R^m`.
//!
//! A k-form is stored as a map from strictly increasing index tuples
//! `(i_1 < … < i_k)` to coefficient polynomials, so `f dx_1∧dx_3` is the
//! entry `[0, 2] -> f`.

use crate::error::{Error, Result};
use crate::exactalg::{fmt_rational, parse_expr, ExprValue, Polynomial, PowerSeries, Rational, WeightSystem};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffForm {
    nvars: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Polynomial>,
}

/// Sign of the shuffle that sorts `a ++ b`, or `None` when they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut m: Vec<usize> = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    Some((m, inversions % 2 == 1))
}

impl DiffForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Self { nvars, degree, comps: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(f: Polynomial) -> Self {
        let mut w = Self::zero(f.nvars(), 0);
        w.add_component(vec![], f);
        w
    }

    /// `dx_i` (0-based).
    pub fn dx(nvars: usize, i: usize) -> Self {
        Self::basis(nvars, &[i], Polynomial::one(nvars))
    }

    /// `f dx_{idx[0]} ∧ dx_{idx[1]} ∧ …` for any index order; repeated
    /// indices give zero.
    pub fn basis(nvars: usize, idx: &[usize], f: Polynomial) -> Self {
        let mut sorted = idx.to_vec();
        let mut neg = false;
        // Bubble sort records the permutation sign.
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    neg = !neg;
                }
            }
        }
        let mut w = Self::zero(nvars, idx.len());
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return w;
        }
        w.add_component(sorted, if neg { -&f } else { f });
        w
    }

    pub fn from_components(nvars: usize, degree: usize, comps: impl IntoIterator<Item = (Vec<usize>, Polynomial)>) -> Result<Self> {
        let mut w = Self::zero(nvars, degree);
        for (idx, f) in comps {
            if idx.len() != degree || f.nvars() != nvars || idx.iter().any(|&i| i >= nvars) {
                return Err(Error::Structural(format!("component {idx:?} does not fit a {degree}-form on R^{nvars}")));
            }
            w = w.checked_add(&Self::basis(nvars, &idx, f))?;
        }
        Ok(w)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, Polynomial> {
        &self.comps
    }

    pub fn component(&self, idx: &[usize]) -> Polynomial {
        self.comps.get(idx).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn add_component(&mut self, idx: Vec<usize>, f: Polynomial) {
        if f.is_zero() {
            return;
        }
        let sum = match self.comps.remove(&idx) {
            Some(g) => &g + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.comps.insert(idx, sum);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::Structural(format!(
                "adding a {}-form on R^{} to a {}-form on R^{}",
                other.degree, other.nvars, self.degree, self.nvars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (idx, f) in &other.comps {
            out.add_component(idx.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    /// Panicking addition for forms known to be compatible.
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("form mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("form mismatch")
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        if !c.is_zero() {
            for (idx, f) in &self.comps {
                out.comps.insert(idx.clone(), f.scale(c));
            }
        }
        out
    }

    pub fn mul_poly(&self, g: &Polynomial) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (idx, f) in &self.comps {
            out.add_component(idx.clone(), f * g);
        }
        out
    }

    pub fn checked_wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::Structural("wedge of forms on different spaces".into()));
        }
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (a, f) in &self.comps {
            for (b, g) in &other.comps {
                if let Some((idx, neg)) = merge_sign(a, b) {
                    let p = f * g;
                    out.add_component(idx, if neg { -&p } else { p });
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.checked_wedge(other).expect("form mismatch")
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (idx, f) in &self.comps {
            for j in 0..self.nvars {
                let df = f.derivative(j);
                if df.is_zero() {
                    continue;
                }
                if let Some((m, neg)) = merge_sign(&[j], idx) {
                    out.add_component(m, if neg { -&df } else { df });
                }
            }
        }
        out
    }

    /// Interior product `ι_X`.
    pub fn interior(&self, x: &VectorField) -> Result<Self> {
        if x.nvars() != self.nvars {
            return Err(Error::Structural("vector field and form on different spaces".into()));
        }
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return Ok(out);
        }
        for (idx, f) in &self.comps {
            for (s, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(s);
                let p = f * &x.comps[i];
                out.add_component(rest, if s % 2 == 1 { -&p } else { p });
            }
        }
        Ok(out)
    }

    /// Lie derivative via Cartan's formula `L_X = d ι_X + ι_X d`.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Self> {
        let a = self.interior(x)?.d();
        let b = self.d().interior(x)?;
        if self.degree == 0 {
            return Ok(b);
        }
        a.checked_add(&b)
    }

    /// Lie derivative from the coordinate formula
    /// `L_X(f dx_I) = X(f) dx_I + Σ_s f dx_{i_1}∧…∧dX_{i_s}∧…`,
    /// independent of [`Self::interior`] and [`Self::d`].
    pub fn lie_derivative_coordinates(&self, x: &VectorField) -> Result<Self> {
        if x.nvars() != self.nvars {
            return Err(Error::Structural("vector field and form on different spaces".into()));
        }
        let mut out = Self::zero(self.nvars, self.degree);
        for (idx, f) in &self.comps {
            out = out.add(&Self::basis(self.nvars, idx, x.apply(f)));
            for s in 0..idx.len() {
                for j in 0..self.nvars {
                    // L_X dx_i = d X_i = Σ_j ∂_j X_i dx_j, placed in slot s
                    let dx = x.comps[idx[s]].derivative(j);
                    if dx.is_zero() {
                        continue;
                    }
                    let mut slot = idx.clone();
                    slot[s] = j;
                    out = out.add(&Self::basis(self.nvars, &slot, f * &dx));
                }
            }
        }
        Ok(out)
    }

    /// Quasi-degrees of the monomial pieces, counting `λ_i` for each `dx_i`.
    pub fn quasi_degrees(&self, w: &WeightSystem) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for (idx, f) in &self.comps {
            let base: u32 = idx.iter().map(|&i| w.weight(i)).sum();
            for e in f.terms().keys() {
                out.insert(base + w.qdeg(e));
            }
        }
        out
    }

    pub fn qdeg(&self, w: &WeightSystem) -> Option<u32> {
        let d = self.quasi_degrees(w);
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    pub fn graded_part(&self, w: &WeightSystem, delta: u32) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (idx, f) in &self.comps {
            let base: u32 = idx.iter().map(|&i| w.weight(i)).sum();
            if base <= delta {
                out.add_component(idx.clone(), f.graded_part(w, delta - base));
            }
        }
        out
    }

    /// Smallest total degree among coefficient monomials (order of vanishing at 0).
    pub fn vanishing_order_at_zero(&self) -> Option<u32> {
        self.comps.values().filter_map(Polynomial::min_std_degree).min()
    }

    /// Pullback along a polynomial map `φ: R^k -> R^m`, given as `m`
    /// polynomials in `k` variables.
    pub fn pullback(&self, map: &[Polynomial]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::Structural(format!("map with {} components for a form on R^{}", map.len(), self.nvars)));
        }
        let k = map.first().map(Polynomial::nvars).unwrap_or(0);
        let dphi: Vec<DiffForm> = map.iter().map(|p| DiffForm::function(p.clone()).d()).collect();
        let mut out = Self::zero(k, self.degree);
        for (idx, f) in &self.comps {
            let mut t = DiffForm::function(f.compose(map)?);
            for &i in idx {
                t = t.checked_wedge(&dphi[i])?;
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Pullback to a branch `t ↦ (x_1(t), …)` given as truncated series.
    /// Returns `g` for a 0-form `g(t)`, the coefficient `g` of `g(t) dt` for
    /// a 1-form, and zero for higher degrees.
    pub fn pullback_branch(&self, branch: &[PowerSeries]) -> Result<PowerSeries> {
        if branch.len() != self.nvars {
            return Err(Error::Structural(format!("branch with {} components on R^{}", branch.len(), self.nvars)));
        }
        let cap = branch.iter().map(PowerSeries::cap).min().unwrap_or(0);
        match self.degree {
            0 => self.component(&[]).substitute_series(branch),
            1 => {
                // The derivative loses one order of precision; compensate by
                // truncating everything to cap - 1.
                let c = cap.saturating_sub(1);
                let short: Vec<PowerSeries> = branch.iter().map(|s| s.with_cap(c)).collect();
                let mut acc = PowerSeries::zero(c);
                for (idx, f) in &self.comps {
                    let g = f.substitute_series(&short)?;
                    acc = acc.add(&g.mul(&branch[idx[0]].derivative()));
                }
                Ok(acc)
            }
            _ => Ok(PowerSeries::zero(cap)),
        }
    }

    /// Value of the constant part of a 2-form on `(u, v)`.
    pub fn evaluate_at_zero(&self, u: &[Rational], v: &[Rational]) -> Result<Rational> {
        if self.degree != 2 || u.len() != self.nvars || v.len() != self.nvars {
            return Err(Error::Structural("evaluate_at_zero needs a 2-form and two ambient vectors".into()));
        }
        let mut acc = Rational::zero();
        for (idx, f) in &self.comps {
            let c = f.constant_term();
            if !c.is_zero() {
                let (i, j) = (idx[0], idx[1]);
                acc += c * (&u[i] * &v[j] - &u[j] * &v[i]);
            }
        }
        Ok(acc)
    }

    /// Antisymmetric Gram matrix `Ω_{ij} = ω(0)(e_i, e_j)` of a 2-form.
    pub fn constant_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.nvars;
        let mut m = vec![vec![Rational::zero(); n]; n];
        if self.degree == 2 {
            for (idx, f) in &self.comps {
                let c = f.constant_term();
                m[idx[0]][idx[1]] += &c;
                m[idx[1]][idx[0]] -= &c;
            }
        }
        m
    }

    /// Re-indexes into `nvars` variables, sending `x_i` to `x_{map[i]}`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        let mut out = Self::zero(nvars, self.degree);
        for (idx, f) in &self.comps {
            let new_idx: Vec<usize> = idx.iter().map(|&i| map[i]).collect();
            out = out.checked_add(&Self::basis(nvars, &new_idx, f.embed(nvars, map)?))?;
        }
        Ok(out)
    }

    /// Text in the form grammar, e.g. `dx1^dx3 + x3*dx1^dx2`.
    pub fn render(&self) -> String {
        self.render_with(&Polynomial::default_names(self.nvars))
    }

    pub fn render_with(&self, names: &[String]) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (idx, f) in &self.comps {
            let dx: Vec<String> = idx.iter().map(|&i| format!("d{}", names[i])).collect();
            let dx = dx.join("^");
            if f.len() == 1 {
                let (e, c) = f.terms().iter().next().expect("one term");
                let mono = Polynomial::monomial(e.clone(), c.abs());
                let body = mono.fmt_with(names);
                let s = match (body.as_str(), dx.is_empty()) {
                    (b, true) => b.to_string(),
                    ("1", false) => dx,
                    (b, false) => format!("{b}*{dx}"),
                };
                parts.push((c.is_negative(), s));
            } else {
                let body = f.fmt_with(names);
                parts.push((false, if dx.is_empty() { body } else { format!("({body})*{dx}") }));
            }
        }
        let mut s = String::new();
        for (k, (neg, p)) in parts.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&p);
        }
        s
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Parsed constants start life on R^0 and are widened when combined.
fn align(a: &DiffForm, b: &DiffForm) -> (DiffForm, DiffForm) {
    let widen = |w: &DiffForm, n: usize| {
        if w.nvars == 0 && n > 0 {
            DiffForm::function(Polynomial::constant(n, w.component(&[]).constant_term()))
        } else {
            w.clone()
        }
    };
    let n = a.nvars.max(b.nvars);
    (widen(a, n), widen(b, n))
}

impl ExprValue for DiffForm {
    fn constant(c: Rational) -> Self {
        DiffForm::function(Polynomial::constant(0, c))
    }
    fn add(&self, o: &Self) -> std::result::Result<Self, String> {
        let (a, b) = align(self, o);
        a.checked_add(&b).map_err(|e| e.to_string())
    }
    fn sub(&self, o: &Self) -> std::result::Result<Self, String> {
        let (a, b) = align(self, o);
        a.checked_sub(&b).map_err(|e| e.to_string())
    }
    fn mul(&self, o: &Self) -> std::result::Result<Self, String> {
        let (a, b) = align(self, o);
        a.checked_wedge(&b).map_err(|e| e.to_string())
    }
    fn wedge(&self, o: &Self) -> std::result::Result<Self, String> {
        self.mul(o)
    }
    fn pow(&self, k: u32) -> std::result::Result<Self, String> {
        if self.degree != 0 {
            return Err("only functions can be raised to a power".into());
        }
        Ok(DiffForm::function(self.component(&[]).pow(k)))
    }
    fn as_constant(&self) -> Option<Rational> {
        let f = self.component(&[]);
        (self.degree == 0 && f.terms().keys().all(|e| e.iter().all(|&k| k == 0))).then(|| f.constant_term())
    }
    fn scale(&self, c: &Rational) -> Self {
        DiffForm::scale(self, c)
    }
}

/// Parses a form on `R^nvars` with coordinates `x1..xm`, differentials
/// `dx1..dxm`, and extra named forms from `named`.
pub fn parse_form(text: &str, nvars: usize, named: &BTreeMap<String, DiffForm>) -> Result<DiffForm> {
    let resolve = |s: &str| -> Option<DiffForm> {
        if let Some(w) = named.get(s) {
            return Some(w.clone());
        }
        let (is_d, rest) = match s.strip_prefix("dx") {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('x')?),
        };
        let i: usize = rest.parse().ok()?;
        if i == 0 || i > nvars || rest.starts_with('0') {
            return None;
        }
        Some(if is_d { DiffForm::dx(nvars, i - 1) } else { DiffForm::function(Polynomial::var(nvars, i - 1)) })
    };
    let w: DiffForm = parse_expr(text, &resolve)?;
    Ok(if w.nvars == 0 { DiffForm::function(Polynomial::constant(nvars, w.component(&[]).constant_term())) } else { w })
}

/// Polynomial vector field `Σ X_i ∂/∂x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(comps: Vec<Polynomial>) -> Result<Self> {
        let n = comps.len();
        if comps.iter().any(|p| p.nvars() != n) {
            return Err(Error::Structural("vector field components must live on the same space".into()));
        }
        Ok(Self { comps })
    }

    /// Euler field `E = Σ λ_i x_i ∂/∂x_i`.
    pub fn euler(w: &WeightSystem) -> Self {
        let n = w.len();
        Self {
            comps: (0..n).map(|i| Polynomial::var(n, i).scale(&Rational::from_integer(w.weight(i).into()))).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn mul_poly(&self, g: &Polynomial) -> Self {
        Self { comps: self.comps.iter().map(|c| c * g).collect() }
    }

    /// Derivation `X(f) = Σ X_i ∂f/∂x_i`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.nvars());
        for (i, c) in self.comps.iter().enumerate() {
            let df = f.derivative(i);
            if !df.is_zero() {
                out = &out + &(c * &df);
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let names = Polynomial::default_names(self.nvars());
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d/d{}", c.fmt_with(&names), names[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Renders a rational coefficient in front of a label, `c*label`.
pub fn fmt_coeff_label(c: &Rational, label: &str) -> String {
    if c.is_one() {
        label.to_string()
    } else if (-c).is_one() {
        format!("-{label}")
    } else {
        format!("{}*{label}", fmt_rational(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_polynomial, q};

    fn f(s: &str) -> DiffForm {
        parse_form(s, 3, &BTreeMap::new()).unwrap()
    }

    fn poly(s: &str) -> Polynomial {
        parse_polynomial(s, &Polynomial::default_names(3)).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert!(f("dx1").wedge(&f("dx1")).is_zero());
        assert_eq!(f("x2*dx3 + x3*dx2").wedge(&f("dx2")), f("-x2*dx2^dx3"));
        assert_eq!(f("dx1^dx2"), f("-dx2^dx1"));
        assert_eq!(f("dx1^dx1"), DiffForm::zero(3, 2));
    }

    #[test]
    fn exterior_derivative_examples() {
        assert_eq!(DiffForm::function(poly("x2*x3")).d(), f("x2*dx3 + x3*dx2"));
        assert_eq!(DiffForm::function(poly("x1^2 - x2^2 - x3^4")).d(), f("2*x1*dx1 - 2*x2*dx2 - 4*x3^3*dx3"));
        assert!(f("x3*dx1^dx2 - x1*dx2^dx3").d().is_zero());
        assert!(!f("x3*dx1^dx2").d().is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let w = WeightSystem::new(vec![4, 4, 2]).unwrap();
        let e = VectorField::euler(&w);
        assert_eq!(f("dx1^dx2").lie_derivative(&e).unwrap(), f("8*dx1^dx2"));
        assert_eq!(f("dx1").lie_derivative(&e).unwrap(), f("4*dx1"));
        let w7 = f("x3^2*dx1^dx3");
        assert_eq!(w7.lie_derivative(&e).unwrap(), w7.scale(&q(10)));
        assert_eq!(w7.lie_derivative_coordinates(&e).unwrap(), w7.scale(&q(10)));
        // x3 ∂/∂x1 moves dx1 to dx3: L_X dx1 = dx3, L_X dx3 = 0.
        let x = VectorField::new(vec![poly("x3"), Polynomial::zero(3), Polynomial::zero(3)]).unwrap();
        assert_eq!(f("dx1").lie_derivative_coordinates(&x).unwrap(), f("dx3"));
        assert!(f("dx3").lie_derivative_coordinates(&x).unwrap().is_zero());
        let w3 = f("dx1^dx2");
        assert_eq!(w3.lie_derivative_coordinates(&x).unwrap(), f("dx3^dx2"));
        assert_eq!(w3.lie_derivative(&x).unwrap(), f("dx3^dx2"));
    }

    #[test]
    fn pullback_examples() {
        let cap = 16;
        let t = PowerSeries::monomial(q(1), 1, cap);
        let zero = PowerSeries::zero(cap);
        let b = vec![t.pow(5), t.pow(2), zero.clone()];
        let s = f("dx3").pullback_branch(&b).unwrap();
        assert!(s.is_zero());
        let s = f("dx2").pullback_branch(&b).unwrap();
        assert_eq!(s.coeff(1), q(2));
        assert!(f("dx1^dx2").pullback_branch(&b).unwrap().is_zero());
        let s = f("x1*dx2").pullback_branch(&[t.clone(), t.clone(), zero]).unwrap();
        assert_eq!(s.ord(), crate::exactalg::Order::Finite(1));
        assert_eq!(s.coeff(1), q(1));
    }

    #[test]
    fn polynomial_pullback_matches_series_pullback() {
        let t = Polynomial::var(1, 0);
        let map = vec![t.pow(3), Polynomial::zero(1), t.pow(2)];
        let w = f("x1*dx3 + x3^2*dx1");
        let exact = w.pullback(&map).unwrap();
        let cap = 12;
        let series: Vec<PowerSeries> = map.iter().map(|p| PowerSeries::from_polynomial(p, cap).unwrap()).collect();
        let s = w.pullback_branch(&series).unwrap();
        let g = exact.component(&[0]);
        for e in 0..s.cap() {
            assert_eq!(s.coeff(e), g.coeff(&[e]));
        }
    }

    #[test]
    fn evaluation_at_zero() {
        let e = |i: usize| (0..3).map(|j| if i == j { q(1) } else { q(0) }).collect::<Vec<_>>();
        assert_eq!(f("dx1^dx3").evaluate_at_zero(&e(0), &e(2)).unwrap(), q(1));
        let th4 = f("x3*dx1^dx2 - x1*dx2^dx3");
        assert_eq!(th4.evaluate_at_zero(&e(0), &e(1)).unwrap(), q(0));
        let u = vec![q(1), q(1), q(0)];
        let v = vec![q(1), q(-1), q(0)];
        assert_eq!(f("dx1^dx2").evaluate_at_zero(&u, &v).unwrap(), q(-2));
    }

    #[test]
    fn render_round_trip() {
        let w = f("dx1^dx3 + 2*(x1 + x3^2)*dx2^dx3 - 3/2*x3*dx1^dx2");
        assert_eq!(f(&w.render()), w);
        assert_eq!(f("x3*dx1^dx2 - x1*dx2^dx3").render(), "x3*dx1^dx2 - x1*dx2^dx3");
    }

    #[test]
    fn parse_rejects_unknown_symbols() {
        assert!(matches!(parse_form("dx4", 3, &BTreeMap::new()), Err(Error::Parse { .. })));
        assert!(parse_form("dx1^dx2 + dx3", 3, &BTreeMap::new()).is_err());
        assert!(parse_form("x01", 3, &BTreeMap::new()).is_err());
    }

    #[test]
    fn embedding_lifts_indices() {
        let w = f("x2*dx1^dx3");
        let lifted = w.embed(6, &[0, 1, 2]).unwrap();
        assert_eq!(lifted.nvars(), 6);
        assert_eq!(lifted.component(&[0, 2]), Polynomial::var(6, 1));
    }
}

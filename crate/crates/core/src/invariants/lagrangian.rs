//! Lagrangian tangency orders by exact linear feasibility.
//!
//! A symplectic form is first brought to Darboux coordinates `(Q, P)` by an
//! explicit polynomial change of variables. Every Lagrangian germ through
//! the origin is then the graph of a generating function `S(Z)` in one of
//! the `2^n` index splittings `Z_k ∈ {Q_k, P_k}`, with defining equations
//! `P_k = ∂_k S` (`k ∈ I`) and `Q_k = −∂_k S` (`k ∉ I`). Asking a set of
//! branches to be tangent to order `T` is linear in the coefficients of
//! `S`, and the rows for orders below `T` only involve monomials of degree
//! at most `T`. So the search is exhaustive up to its cap: a returned finite
//! order is exact, and hitting the cap yields a lower bound.

use crate::error::{Error, Result};
use crate::exactalg::{Echelon, Matrix, Order, Polynomial, Rational, SparseVec, WeightSystem};
use crate::forms::{DiffForm, VectorField};
use crate::restriction::{is_zero_restriction, Branch, CurveGerm};
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};

/// Polynomial Darboux coordinates: `Σ dQ_i ∧ dP_i = ω` exactly.
#[derive(Debug, Clone)]
pub struct DarbouxChart {
    pub q: Vec<Polynomial>,
    pub p: Vec<Polynomial>,
}

fn unit(m: usize, i: usize) -> Vec<Rational> {
    (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

fn linear(v: &[Rational]) -> Polynomial {
    let m = v.len();
    let mut p = Polynomial::zero(m);
    for (i, c) in v.iter().enumerate() {
        if !c.is_zero() {
            p = &p + &Polynomial::var(m, i).scale(c);
        }
    }
    p
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl DarbouxChart {
    /// Needs `ω` closed, nondegenerate at 0, and its nonconstant part
    /// supported on variables whose linear coordinates Poisson-commute.
    /// These hold for every normal-form model.
    pub fn new(omega: &DiffForm) -> Result<Self> {
        let m = omega.nvars();
        if omega.degree() != 2 || m % 2 != 0 {
            return Err(Error::Structural("a Darboux chart needs a 2-form on an even-dimensional space".into()));
        }
        if !omega.d().is_zero() {
            return Err(Error::Structural("the form is not closed".into()));
        }
        let n = m / 2;
        let a = Matrix::from_rows(omega.constant_matrix());
        let ainv = a.inverse().ok_or_else(|| Error::Constraint("the form is degenerate at the origin".into()))?;
        let pi = |u: &[Rational], v: &[Rational]| dot(u, &ainv.mul_vec(v));

        let mut beta = DiffForm::zero(m, 2);
        let mut used = BTreeSet::new();
        for (idx, f) in omega.components() {
            let mut g = f.clone();
            g.add_term(vec![0; m], -f.constant_term());
            if g.is_zero() {
                continue;
            }
            used.extend(idx.iter().copied());
            for e in g.terms().keys() {
                used.extend(e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i));
            }
            beta = beta.add(&DiffForm::basis(m, idx, g));
        }
        let used: Vec<usize> = used.into_iter().collect();
        if used.len() > n {
            return Err(Error::Unsupported("the nonconstant part involves too many variables".into()));
        }

        let mut qs: Vec<Vec<Rational>> = used.iter().map(|&u| unit(m, u)).collect();
        for (i, a) in qs.iter().enumerate() {
            for b in &qs[..i] {
                if !pi(a, b).is_zero() {
                    return Err(Error::Unsupported("the nonconstant part is not in involution".into()));
                }
            }
        }
        // Extend to a maximal isotropic set, preferring coordinate vectors.
        let mut candidates: Vec<Vec<Rational>> = (0..m).map(|i| unit(m, i)).collect();
        while qs.len() < n {
            let rows: Vec<Vec<Rational>> = qs.iter().map(|q| ainv.transpose().mul_vec(q)).collect();
            let fits = |v: &[Rational], qs: &[Vec<Rational>]| {
                rows.iter().all(|r| dot(r, v).is_zero()) && {
                    let mut all = qs.to_vec();
                    all.push(v.to_vec());
                    crate::exactalg::rank_of(&all) == qs.len() + 1
                }
            };
            let pick = candidates.iter().find(|v| fits(v, &qs)).cloned().or_else(|| {
                let ns = if rows.is_empty() { (0..m).map(|i| unit(m, i)).collect() } else { Matrix::from_rows(rows.clone()).nullspace() };
                ns.into_iter().find(|v| fits(v, &qs))
            });
            let v = pick.ok_or_else(|| Error::Internal("no isotropic extension".into()))?;
            candidates.retain(|c| c != &v);
            qs.push(v);
        }
        // Conjugate momenta: π(q_j, p_i) = −δ_ij and π(p_k, p_i) = 0.
        let mut ps: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for (j, q) in qs.iter().enumerate() {
                rows.push(ainv.transpose().mul_vec(q));
                rhs.push(if i == j { -Rational::one() } else { Rational::zero() });
            }
            for p in &ps {
                rows.push(ainv.transpose().mul_vec(p));
                rhs.push(Rational::zero());
            }
            let p = Matrix::from_rows(rows).solve(&rhs).ok_or_else(|| Error::Internal("no conjugate momentum".into()))?;
            ps.push(p);
        }

        // Homotopy primitive of the nonconstant part: β = dη.
        let ones = WeightSystem::new(vec![1; m])?;
        let radial = VectorField::euler(&ones);
        let mut eta = DiffForm::zero(m, 1);
        for d in beta.quasi_degrees(&ones) {
            let part = beta.graded_part(&ones, d).interior(&radial)?;
            eta = eta.add(&part.scale(&Rational::new(1.into(), (d as i64).into())));
        }
        if eta.d() != beta {
            return Err(Error::Internal("homotopy primitive failed".into()));
        }
        let mut shift = vec![Polynomial::zero(m); n];
        for (idx, g) in eta.components() {
            let k = used.iter().position(|&u| u == idx[0]).ok_or_else(|| Error::Internal("primitive leaves the chart".into()))?;
            shift[k] = g.clone();
        }

        let q: Vec<Polynomial> = qs.iter().map(|v| linear(v)).collect();
        let p: Vec<Polynomial> = ps.iter().zip(&shift).map(|(v, g)| &linear(v) - g).collect();
        let chart = Self { q, p };
        if chart.form() != *omega {
            return Err(Error::Internal("Darboux chart does not reproduce the form".into()));
        }
        Ok(chart)
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// `Σ dQ_i ∧ dP_i`.
    pub fn form(&self) -> DiffForm {
        let m = self.q.first().map_or(0, Polynomial::nvars);
        let mut acc = DiffForm::zero(m, 2);
        for (q, p) in self.q.iter().zip(&self.p) {
            acc = acc.add(&DiffForm::function(q.clone()).d().wedge(&DiffForm::function(p.clone()).d()));
        }
        acc
    }

    fn image(&self, b: &Branch) -> Result<Image> {
        let q = self.q.iter().map(|f| f.compose(&b.map)).collect::<Result<Vec<_>>>()?;
        let p = self.p.iter().map(|f| f.compose(&b.map)).collect::<Result<Vec<_>>>()?;
        Ok(Image { q, p })
    }
}

/// A branch in Darboux coordinates.
#[derive(Debug, Clone)]
struct Image {
    q: Vec<Polynomial>,
    p: Vec<Polynomial>,
}

fn degree(p: &Polynomial) -> u32 {
    p.terms().keys().map(|e| e[0]).max().unwrap_or(0)
}

fn dense(p: &Polynomial, cap: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); cap];
    for (e, c) in p.terms() {
        if (e[0] as usize) < cap {
            v[e[0] as usize] = c.clone();
        }
    }
    v
}

fn mul_trunc(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let cap = a.len();
    let mut out = vec![Rational::zero(); cap];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(cap - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Exponent vectors in `n` variables of total degree at most `d`, by degree.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    let mut last = vec![vec![0; n]];
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for e in &last {
            for k in 0..n {
                let mut f = e.clone();
                f[k] += 1;
                next.insert(f);
            }
        }
        last = next.into_iter().collect();
        out.extend(last.iter().cloned());
    }
    out
}

const RHS: usize = usize::MAX;

/// Tangency rows of one branch within one splitting.
struct RowSource {
    /// `Z^b ∘ f` as dense truncated series, indexed like `lower`.
    zpow: Vec<Vec<Rational>>,
    /// `[t^m]` of the defining value: `P_k` for `k ∈ I`, `−Q_k` otherwise.
    rhs: Vec<Vec<Rational>>,
}

struct Split<'a> {
    n: usize,
    lower: &'a [Vec<u32>],
    index: &'a HashMap<Vec<u32>, usize>,
}

impl Split<'_> {
    fn source(&self, mask: u32, img: &Image, cap: usize) -> RowSource {
        let z: Vec<Vec<Rational>> = (0..self.n)
            .map(|k| dense(if mask >> k & 1 == 1 { &img.q[k] } else { &img.p[k] }, cap))
            .collect();
        let rhs = (0..self.n)
            .map(|k| {
                if mask >> k & 1 == 1 {
                    dense(&img.p[k], cap)
                } else {
                    dense(&img.q[k], cap).into_iter().map(|c| -c).collect()
                }
            })
            .collect();
        let mut zpow: Vec<Vec<Rational>> = Vec::with_capacity(self.lower.len());
        for b in self.lower {
            let v = match b.iter().position(|&e| e > 0) {
                None => dense(&Polynomial::one(1), cap),
                Some(j) => {
                    let mut parent = b.clone();
                    parent[j] -= 1;
                    mul_trunc(&zpow[self.index[&parent]], &z[j])
                }
            };
            zpow.push(v);
        }
        RowSource { zpow, rhs }
    }

    /// Row `[t^m](H_k ∘ f) = 0` over the coefficients of `S`; columns are
    /// the indices of `b` with `a = b + e_k`.
    fn row(&self, src: &RowSource, k: usize, m: usize) -> SparseVec {
        let mut row = SparseVec::new();
        for (i, b) in self.lower.iter().enumerate() {
            let deg: u32 = b.iter().sum();
            if deg == 0 || deg as usize > m {
                continue;
            }
            let c = &src.zpow[i][m];
            if c.is_zero() {
                continue;
            }
            let mut a = b.clone();
            a[k] += 1;
            let col = self.index[&a];
            row.insert(col, c * Rational::from_integer((b[k] + 1).into()));
        }
        let r = &src.rhs[k][m];
        if !r.is_zero() {
            row.insert(RHS, r.clone());
        }
        row
    }
}

/// Adds a row; false when the system became inconsistent.
fn push(ech: &mut Echelon, row: &SparseVec) -> bool {
    let red = ech.reduce(row);
    match red.keys().next() {
        Some(&RHS) => false,
        Some(_) => {
            ech.insert(&red);
            true
        }
        None => true,
    }
}

/// Whether a branch must lie on the Lagrangian exactly, or only to the
/// search cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Exact,
    ToCap,
}

/// Exhaustive generating-function search for one symplectic form.
#[derive(Debug, Clone)]
pub struct TangencySearch {
    chart: DarbouxChart,
    cap: u32,
}

impl TangencySearch {
    pub fn new(omega: &DiffForm, cap: u32) -> Result<Self> {
        Ok(Self { chart: DarbouxChart::new(omega)?, cap: cap.max(1) })
    }

    pub fn chart(&self) -> &DarbouxChart {
        &self.chart
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// `max_L min_{f ∈ touching} t(f, L)` over Lagrangians `L` that contain
    /// the `contained` branches. `AtLeast(cap)` when the cap is reached.
    pub fn max_min_order(&self, touching: &[&Branch], contained: &[(&Branch, Containment)]) -> Result<Order> {
        self.max_min_order_capped(touching, contained, self.cap)
    }

    pub fn max_min_order_capped(
        &self,
        touching: &[&Branch],
        contained: &[(&Branch, Containment)],
        cap: u32,
    ) -> Result<Order> {
        let n = self.chart.n();
        let touch: Vec<Image> = touching.iter().map(|b| self.chart.image(b)).collect::<Result<_>>()?;
        let held: Vec<(Image, usize)> = contained
            .iter()
            .map(|(b, how)| {
                let img = self.chart.image(b)?;
                let rows = match how {
                    Containment::ToCap => cap as usize,
                    Containment::Exact => {
                        let top = img.q.iter().chain(&img.p).map(degree).max().unwrap_or(0);
                        (top * (cap + 1)) as usize + 1
                    }
                };
                Ok((img, rows))
            })
            .collect::<Result<_>>()?;
        // S has degree at most cap + 1; its partial derivatives at most cap.
        let lower = monomials(n, cap);
        let all = monomials(n, cap + 1);
        let index: HashMap<Vec<u32>, usize> = all.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let lower_index: HashMap<Vec<u32>, usize> = lower.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let split = Split { n, lower: &lower, index: &lower_index };

        let mut best: Option<u32> = None;
        for mask in 0..(1u32 << n) {
            let col_split = Split { n, lower: &lower, index: &index };
            let mut ech = Echelon::new();
            let mut feasible = true;
            'held: for (img, rows) in &held {
                let src = split.source(mask, img, *rows);
                for m in 0..*rows {
                    for k in 0..n {
                        if !push(&mut ech, &Self::row(&col_split, &src, k, m)) {
                            feasible = false;
                            break 'held;
                        }
                    }
                }
            }
            if !feasible {
                continue;
            }
            let srcs: Vec<RowSource> = touch.iter().map(|img| split.source(mask, img, cap as usize)).collect();
            let mut reached = cap;
            'orders: for m in 0..cap as usize {
                for src in &srcs {
                    for k in 0..n {
                        if !push(&mut ech, &Self::row(&col_split, src, k, m)) {
                            reached = m as u32;
                            break 'orders;
                        }
                    }
                }
            }
            best = Some(best.map_or(reached, |b| b.max(reached)));
            if reached == cap {
                break;
            }
        }
        match best {
            None => Err(Error::Internal("no Lagrangian contains the prescribed branches".into())),
            Some(t) if t >= cap => Ok(Order::AtLeast(cap)),
            Some(t) => Ok(Order::Finite(t)),
        }
    }

    fn row(split: &Split<'_>, src: &RowSource, k: usize, m: usize) -> SparseVec {
        split.row(src, k, m)
    }
}

/// Tangency orders of a multi-germ and its components for one symplectic
/// form. Infinity is certified only by a vanishing algebraic restriction.
#[derive(Debug, Clone)]
pub struct LagrangianProbe<'a> {
    omega: &'a DiffForm,
    germ: &'a CurveGerm,
    search: TangencySearch,
}

impl<'a> LagrangianProbe<'a> {
    pub fn new(omega: &'a DiffForm, germ: &'a CurveGerm, cap: u32) -> Result<Self> {
        if omega.nvars() != germ.nvars() {
            return Err(Error::Structural(format!("form on R^{} for a germ in R^{}", omega.nvars(), germ.nvars())));
        }
        Ok(Self { omega, germ, search: TangencySearch::new(omega, cap)? })
    }

    pub fn search(&self) -> &TangencySearch {
        &self.search
    }

    fn branches_of(&self, component: &str) -> Result<Vec<&'a Branch>> {
        let c = self
            .germ
            .component(component)
            .ok_or_else(|| Error::InvalidCurve(format!("no component named {component}")))?;
        Ok(c.branches.iter().map(|&i| &self.germ.branches()[i]).collect())
    }

    /// Whether the component lies in some Lagrangian submanifold.
    pub fn component_is_lagrangian(&self, component: &str) -> Result<bool> {
        is_zero_restriction(self.omega, &self.germ.component_as_germ(component)?)
    }

    pub fn germ_is_lagrangian(&self) -> Result<bool> {
        is_zero_restriction(self.omega, self.germ)
    }

    /// `Lt` of one component.
    pub fn component_lt(&self, component: &str) -> Result<Order> {
        if self.component_is_lagrangian(component)? {
            return Ok(Order::Infinite);
        }
        self.search.max_min_order(&self.branches_of(component)?, &[])
    }

    /// `Lt` of the whole multi-germ, searched no further than `bound`
    /// (an already known upper bound such as `min(L1, L2)`).
    pub fn multigerm_lt(&self, bound: &Order) -> Result<Order> {
        if self.germ_is_lagrangian()? {
            return Ok(Order::Infinite);
        }
        let all: Vec<&Branch> = self.germ.branches().iter().collect();
        let cap = match bound {
            Order::Finite(b) => self.search.cap.min(b + 1),
            _ => self.search.cap,
        };
        self.search.max_min_order_capped(&all, &[], cap)
    }

    /// `max` over the listed branches `b` of `t(component, L)` over
    /// Lagrangians `L ⊃ b`. Returns the value under exact containment and
    /// the value when containment is only imposed to the cap; these bracket
    /// the true value.
    pub fn relative_lt(&self, component: &str, anchors: &[&str]) -> Result<(Order, Order)> {
        let touching = self.branches_of(component)?;
        let mut lo: Option<Order> = None;
        let mut hi: Option<Order> = None;
        let better = |cur: Option<Order>, v: Order| match cur {
            None => Some(v),
            Some(c) => Some(if order_key(&v) > order_key(&c) { v } else { c }),
        };
        for a in anchors {
            let b = self.germ.branch(a).ok_or_else(|| Error::InvalidCurve(format!("no branch labelled {a}")))?;
            lo = better(lo, self.search.max_min_order(&touching, &[(b, Containment::Exact)])?);
            hi = better(hi, self.search.max_min_order(&touching, &[(b, Containment::ToCap)])?);
        }
        match (lo, hi) {
            (Some(l), Some(h)) => Ok((l, h)),
            _ => Err(Error::Structural("no anchor branches given".into())),
        }
    }
}

fn order_key(o: &Order) -> (u8, u32) {
    match o {
        Order::Finite(v) => (0, *v),
        Order::AtLeast(v) => (1, *v),
        Order::Infinite => (2, 0),
    }
}

/// `ord(f*α) + 1` for a 1-form, so that `α = dH` gives `ord(H ∘ f)`.
/// Infinite when the pullback vanishes identically.
pub fn vanishing_order_on_branch(alpha: &DiffForm, branch: &Branch) -> Result<Order> {
    if alpha.degree() != 1 || alpha.nvars() != branch.map.len() {
        return Err(Error::Structural("vanishing order needs a 1-form matching the branch".into()));
    }
    let g = alpha.pullback(&branch.map)?;
    let coeff = g.component(&[0]);
    Ok(match coeff.terms().keys().map(|e| e[0]).min() {
        Some(o) => Order::Finite(o + 1),
        None => Order::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;

    fn t(c: i64, e: u32) -> Polynomial {
        Polynomial::monomial(vec![e], q(c))
    }

    fn dxx(m: usize, i: usize, j: usize) -> DiffForm {
        DiffForm::dx(m, i).wedge(&DiffForm::dx(m, j))
    }

    #[test]
    fn chart_of_a_nonlinear_form() {
        // dx1∧dx2 + dx3∧dx4 + x3² dx1∧dx3
        let m = 4;
        let x3 = Polynomial::var(m, 2).pow(2);
        let omega = dxx(m, 0, 1).add(&dxx(m, 0, 2).mul_poly(&x3)).add(&dxx(m, 2, 3));
        let chart = DarbouxChart::new(&omega).unwrap();
        assert_eq!(chart.form(), omega);
        assert_eq!(chart.n(), 2);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let omega = dxx(4, 0, 1);
        assert!(matches!(DarbouxChart::new(&omega), Err(Error::Constraint(_))));
    }

    #[test]
    fn planar_curves_in_the_standard_plane() {
        // In (R^2, dx∧dy) every smooth curve is Lagrangian. A line lies on
        // one; the cusp (t², t³) meets y = s(x) to order 3 and no better.
        let omega = dxx(2, 0, 1);
        let s = TangencySearch::new(&omega, 8).unwrap();
        let line = Branch { label: "l".into(), map: vec![t(1, 1), t(0, 0)] };
        assert_eq!(s.max_min_order(&[&line], &[]).unwrap(), Order::AtLeast(8));
        let cusp = Branch { label: "c".into(), map: vec![t(1, 2), t(1, 3)] };
        assert_eq!(s.max_min_order(&[&cusp], &[]).unwrap(), Order::Finite(3));
        // Two transverse lines: no smooth curve follows both past order 1.
        let other = Branch { label: "o".into(), map: vec![Polynomial::zero(1), t(1, 1)] };
        assert_eq!(s.max_min_order(&[&line, &other], &[]).unwrap(), Order::Finite(1));
    }

    #[test]
    fn smooth_branch_lies_on_a_lagrangian() {
        // Any smooth curve is isotropic, so the search must run to its cap
        // even though the osculating plane of (t, 0, t², 0) is symplectic.
        let m = 4;
        let omega = dxx(m, 0, 2).add(&dxx(m, 1, 3));
        let s = TangencySearch::new(&omega, 8).unwrap();
        let f = Branch { label: "f".into(), map: vec![t(1, 1), Polynomial::zero(1), t(1, 2), Polynomial::zero(1)] };
        assert_eq!(s.max_min_order(&[&f], &[]).unwrap(), Order::AtLeast(8));
        assert_eq!(s.max_min_order(&[], &[(&f, Containment::Exact)]).unwrap(), Order::AtLeast(8));
    }

    #[test]
    fn vanishing_order_examples() {
        let m = 3;
        let f = Branch { label: "f".into(), map: vec![t(1, 5), t(1, 2), Polynomial::zero(1)] };
        assert_eq!(vanishing_order_on_branch(&DiffForm::dx(m, 1), &f).unwrap(), Order::Finite(2));
        let a = DiffForm::dx(m, 1).mul_poly(&Polynomial::var(m, 1));
        assert_eq!(vanishing_order_on_branch(&a, &f).unwrap(), Order::Finite(4));
        assert_eq!(vanishing_order_on_branch(&DiffForm::dx(m, 2), &f).unwrap(), Order::Infinite);
    }
}

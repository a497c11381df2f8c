//! Discrete symplectic invariants of a classified restriction: symplectic
//! multiplicity, index of isotropy, Lagrangian tangency orders and the
//! geometric conditions on the tangent lines of the branches.
//!
//! Tangency orders are measured in the natural parameter of each branch.
//! For odd `mu` the second component splits into two branches
//! `(±t^{r/2}, 0, t)`, so these orders already come in the halved units of
//! the odd tables and no further normalization is applied.

mod geometry;
mod lagrangian;

pub use geometry::{GeometricFlags, Table5Row, TangentFrame};
pub use lagrangian::{vanishing_order_on_branch, Containment, DarbouxChart, LagrangianProbe, TangencySearch};

use crate::error::{Error, Result};
use crate::exactalg::{to_dense, Echelon, Matrix, Order, Rational, SparseVec};
use crate::restriction::{
    builtin_smu, realizable_by_symplectic, BasisKind, GradedIdeal, IdealSource, MonomialFrame, RestrictionBasis,
    RestrictionCoords, A0Slice,
};
use crate::symmetry::{model_form, reduce_to_model, ClassLabel, SmuContext};
use serde_json::{json, Value};

/// `dim [Z²]_N − dim(orbit tangent)`: the codimension of the symplectic
/// orbit inside the closed restrictions.
pub fn symplectic_multiplicity(ctx: &SmuContext, c: &RestrictionCoords) -> usize {
    ctx.closed.dim() - ctx.orbit_tangent_dim(c)
}

/// Largest `d` such that some closed form with restriction `c` vanishes to
/// standard order `d` at the origin. Closed forms with zero restriction are
/// searched slice by slice on the minimal embedding.
pub fn index_of_isotropy(basis: &RestrictionBasis, c: &RestrictionCoords) -> Result<Order> {
    if basis.kind() != BasisKind::Closed {
        return Err(Error::Structural("the index of isotropy is defined on closed-basis coordinates".into()));
    }
    if c.is_zero() {
        return Ok(Order::Infinite);
    }
    let rho = basis.representative(c)?;
    let germ = basis.germ();
    let w = germ.weights();
    let ideal = GradedIdeal::new(germ.nvars(), w.clone(), IdealSource::Generators(germ.ideal().to_vec()));
    let mut ind: Option<u32> = None;
    for delta in rho.quasi_degrees(w) {
        let part = rho.graded_part(w, delta);
        let slice = A0Slice::compute(&ideal, 2, delta);
        let frame = &slice.frame;
        let three = MonomialFrame::new(w, 3, delta);
        let forms = slice.basis_forms();
        let vectors: Vec<SparseVec> = forms.iter().map(|f| frame.vector(f)).collect::<Result<_>>()?;
        let closed: Vec<SparseVec> = if three.is_empty() || forms.is_empty() {
            vectors
        } else {
            let cols: Vec<Vec<Rational>> =
                forms.iter().map(|f| Ok(to_dense(&three.vector(&f.d())?, three.len()))).collect::<Result<_>>()?;
            Matrix::from_columns(&cols)
                .nullspace()
                .into_iter()
                .map(|a| {
                    let mut acc = SparseVec::new();
                    for (x, v) in a.iter().zip(&vectors) {
                        for (&j, y) in v {
                            *acc.entry(j).or_default() += x * y;
                        }
                    }
                    acc.retain(|_, y| *y != Rational::default());
                    acc
                })
                .collect()
        };
        let std_deg = |j: usize| -> u32 { frame.column(j).1.iter().sum() };
        let target = frame.vector(&part)?;
        let top = (0..frame.len()).map(std_deg).max().unwrap_or(0);
        let low = |v: &SparseVec, d: u32| -> SparseVec {
            v.iter().filter(|(&j, _)| std_deg(j) < d).map(|(&j, x)| (j, x.clone())).collect()
        };
        let feasible = |d: u32| {
            let mut ech = Echelon::new();
            for z in &closed {
                ech.insert(&low(z, d));
            }
            ech.contains(&low(&target, d))
        };
        let mut d = 0;
        while d <= top && feasible(d + 1) {
            d += 1;
        }
        if d > top {
            // This slice is itself closed with zero restriction.
            continue;
        }
        ind = Some(ind.map_or(d, |i: u32| i.min(d)));
    }
    Ok(ind.map_or(Order::Infinite, Order::Finite))
}

/// Tangency orders of the multi-germ and its components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tangency {
    pub lt: Order,
    pub l1: Order,
    pub l2: Order,
    /// Relative order of the second component against Lagrangians that
    /// contain a branch of the first: certified lower and upper values.
    pub l21: (Order, Order),
}

impl Tangency {
    pub fn l21_exact(&self) -> Option<&Order> {
        (self.l21.0 == self.l21.1).then_some(&self.l21.0)
    }
}

/// Everything computed for one coordinate vector.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub class: ClassLabel,
    pub n: u32,
    pub realizable: bool,
    pub mu_sym: Option<usize>,
    pub ind: Option<Order>,
    pub tangency: Option<Tangency>,
    pub geometric: Option<GeometricFlags>,
    pub table5: Option<Table5Row>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct InvariantOptions {
    /// Highest tangency order searched; defaults to `3r + 2`.
    pub cap: Option<u32>,
}

fn min_order(a: &Order, b: &Order) -> Order {
    if a.certainly_le(b) {
        a.clone()
    } else if b.certainly_le(a) {
        b.clone()
    } else {
        match (a, b) {
            (Order::AtLeast(x), Order::AtLeast(y)) => Order::AtLeast(*x.min(y)),
            _ => a.clone(),
        }
    }
}

impl InvariantReport {
    /// Invariants of closed-basis coordinates `c` on `S_mu ⊂ R^{2n}`.
    /// Classes that are empty for this `n` are flagged and left blank.
    pub fn compute(mu: u32, n: u32, c: &RestrictionCoords, opts: InvariantOptions) -> Result<Self> {
        if n < 2 {
            return Err(Error::Constraint("S_mu needs 2n >= 4".into()));
        }
        let ctx = SmuContext::shared(mu, 2)?;
        let (class, target) = reduce_to_model(&ctx, c)?;
        let realizable = realizable_by_symplectic(c, &ctx.closed, n)?;
        if realizable == (n == 2 && class.name.needs_dim_six()) {
            return Err(Error::Internal(format!("realizability of {} disagrees with its class", class.concrete())));
        }
        let mut report =
            Self { class, n, realizable, mu_sym: None, ind: None, tangency: None, geometric: None, table5: None };
        if !realizable {
            return Ok(report);
        }
        report.mu_sym = Some(symplectic_multiplicity(&ctx, c));
        report.ind = Some(index_of_isotropy(&ctx.closed, c)?);

        let model_n = if report.class.name.needs_dim_six() { 3 } else { 2 };
        let omega = model_form(mu, report.class.name, &target, model_n)?;
        let mctx = SmuContext::shared(mu, model_n)?;
        if mctx.closed.coords(&omega)?.values != target {
            return Err(Error::Internal("model form does not restrict to its normal form".into()));
        }
        let germ = builtin_smu(mu, model_n)?;
        let cap = opts.cap.unwrap_or(3 * ctx.r() + 2);
        let probe = LagrangianProbe::new(&omega, &germ, cap)?;
        let l1 = probe.component_lt("C1")?;
        let l2 = probe.component_lt("C2")?;
        let bound = min_order(&l1, &l2);
        let lt = probe.multigerm_lt(&bound)?;
        if !lt.certainly_le(&bound) && lt.is_exact() {
            return Err(Error::Internal(format!("Lt = {lt} exceeds min(L1, L2) = {bound}")));
        }
        let anchors: Vec<String> = germ
            .component("C1")
            .map(|c1| c1.branches.iter().map(|&i| germ.branches()[i].label.clone()).collect())
            .unwrap_or_default();
        let anchors: Vec<&str> = anchors.iter().map(String::as_str).collect();
        let l21 = probe.relative_lt("C2", &anchors)?;
        let tangency = Tangency { lt, l1, l2, l21 };

        let frame = TangentFrame::from_germ(&germ)?;
        let flags = GeometricFlags::evaluate(&frame, &omega, &probe)?;
        report.table5 = Some(Table5Row::select(mu, &flags, &tangency)?);
        report.geometric = Some(flags);
        report.tangency = Some(tangency);
        Ok(report)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "class": self.class.to_json(),
            "n": self.n,
            "realizable": self.realizable,
        });
        let obj = v.as_object_mut().expect("object");
        if !self.realizable {
            obj.insert("empty_for_n".into(), json!(true));
            return v;
        }
        obj.insert("mu_sym".into(), json!(self.mu_sym));
        obj.insert("ind".into(), self.ind.as_ref().map_or(Value::Null, order_json));
        if let Some(t) = &self.tangency {
            obj.insert("Lt".into(), order_json(&t.lt));
            obj.insert("L1".into(), order_json(&t.l1));
            obj.insert("L2".into(), order_json(&t.l2));
            let l21 = match t.l21_exact() {
                Some(o) => order_json(o),
                None => json!({"ge": order_json(&t.l21.0), "le": order_json(&t.l21.1)}),
            };
            obj.insert("L21".into(), l21);
        }
        if let Some(g) = &self.geometric {
            obj.insert("geometric".into(), g.to_json());
        }
        if let Some(row) = &self.table5 {
            obj.insert("table5_row".into(), json!(row.to_string()));
        }
        v
    }
}

/// `"inf"` for certified infinity, `{"ge": v}` for cap-limited bounds.
pub fn order_json(o: &Order) -> Value {
    match o {
        Order::Finite(v) => json!(v),
        Order::Infinite => json!("inf"),
        Order::AtLeast(v) => json!({ "ge": v }),
    }
}

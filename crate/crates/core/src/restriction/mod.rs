//! Algebraic restrictions to a curve germ: the quotient spaces
//! `[Λ^k]_N = Λ^k / A^k_0(N)`, their bases and coordinates.

mod germ;
mod quotient;
pub mod smu;

pub use germ::{
    builtin_smu, curve_from_json, curve_from_shorthand, reduce_to_minimal_embedding, Branch, Component, ComponentGerm,
    CurveGerm, SmuFamily,
};
pub use quotient::{index_tuples, A0Slice, GradedIdeal, IdealSource, MonomialFrame, QuotientSpace};

use crate::error::{Error, Result};
use crate::exactalg::{to_dense, Matrix, Polynomial, Rational};
use crate::forms::DiffForm;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Basis of `[Λ²]_N`.
    Full,
    /// Basis of the restrictions of closed forms, `[Z²]_N`.
    Closed,
}

/// An ordered basis of a restriction space by quasi-homogeneous
/// representatives.
#[derive(Debug, Clone)]
pub struct RestrictionBasis {
    kind: BasisKind,
    germ: Arc<CurveGerm>,
    space: Arc<QuotientSpace>,
    labels: Vec<String>,
    reps: Vec<DiffForm>,
    degrees: Vec<u32>,
    by_degree: BTreeMap<u32, Vec<usize>>,
}

/// Coordinates with respect to a [`RestrictionBasis`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictionCoords {
    pub kind: BasisKind,
    pub values: Vec<Rational>,
}

impl RestrictionCoords {
    pub fn new(kind: BasisKind, values: Vec<Rational>) -> Self {
        Self { kind, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// 1-based access, matching the `c_1, …, c_mu` naming.
    pub fn c(&self, i: usize) -> &Rational {
        &self.values[i - 1]
    }
}

impl RestrictionBasis {
    fn assemble(
        kind: BasisKind,
        germ: Arc<CurveGerm>,
        space: Arc<QuotientSpace>,
        named: Vec<(String, DiffForm)>,
    ) -> Result<Self> {
        let w = germ.weights().clone();
        let mut labels = Vec::new();
        let mut reps = Vec::new();
        let mut degrees = Vec::new();
        let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, (l, f)) in named.into_iter().enumerate() {
            let d = f
                .qdeg(&w)
                .ok_or_else(|| Error::Internal(format!("representative {l} is not quasi-homogeneous")))?;
            by_degree.entry(d).or_default().push(i);
            labels.push(l);
            reps.push(f);
            degrees.push(d);
        }
        let b = Self { kind, germ, space, labels, reps, degrees, by_degree };
        // Representatives must be independent modulo A_0 in each degree.
        for (&d, idx) in &b.by_degree {
            let cols = b.residual_columns(d, idx)?;
            if Matrix::from_columns(&cols).rank() != idx.len() {
                return Err(Error::Internal(format!("dependent representatives in quasi-degree {d}")));
            }
            if kind == BasisKind::Full && b.space.slice(d).map(A0Slice::quotient_dim) != Some(idx.len()) {
                return Err(Error::Internal(format!("representatives do not span quasi-degree {d}")));
            }
        }
        if kind == BasisKind::Full && b.reps.len() != b.space.dim() {
            return Err(Error::Internal("representatives do not span the restriction space".into()));
        }
        Ok(b)
    }

    fn residual_columns(&self, d: u32, idx: &[usize]) -> Result<Vec<Vec<Rational>>> {
        let slice = self.space.slice(d).ok_or_else(|| Error::Internal(format!("no slice at degree {d}")))?;
        idx.iter()
            .map(|&i| {
                let v = slice.frame.vector(&self.reps[i])?;
                Ok(to_dense(&slice.echelon.reduce(&v), slice.frame.len()))
            })
            .collect()
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn germ(&self) -> &CurveGerm {
        &self.germ
    }

    pub fn space(&self) -> &QuotientSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn representatives(&self) -> &[DiffForm] {
        &self.reps
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree_cap(&self) -> u32 {
        self.space.top_degree()
    }

    /// `Σ c_i · rep_i`.
    pub fn representative(&self, c: &RestrictionCoords) -> Result<DiffForm> {
        if c.kind != self.kind || c.len() != self.dim() {
            return Err(Error::Structural(format!(
                "coordinates of length {} for a basis of dimension {}",
                c.len(),
                self.dim()
            )));
        }
        let n = self.germ.nvars();
        let mut acc = DiffForm::zero(n, self.space.form_degree());
        for (a, f) in c.values.iter().zip(&self.reps) {
            if !a.is_zero() {
                acc = acc.add(&f.scale(a));
            }
        }
        Ok(acc)
    }

    /// Brings a form on the original ambient space down to the minimal
    /// embedding by setting the dropped coordinates to zero.
    pub fn restrict_to_embedding(&self, form: &DiffForm) -> Result<DiffForm> {
        let n = self.germ.nvars();
        if form.nvars() == n {
            return Ok(form.clone());
        }
        if form.nvars() != self.germ.ambient_dim() {
            return Err(Error::Structural(format!("form on R^{} for a germ in R^{}", form.nvars(), self.germ.ambient_dim())));
        }
        let kept = self.germ.embedding();
        let map: Vec<Polynomial> = (0..form.nvars())
            .map(|i| match kept.iter().position(|&j| j == i) {
                Some(p) => Polynomial::var(n, p),
                None => Polynomial::zero(n),
            })
            .collect();
        form.pullback(&map)
    }

    /// Unique coordinates of `[ω]_N`.
    pub fn coords(&self, form: &DiffForm) -> Result<RestrictionCoords> {
        let form = self.restrict_to_embedding(form)?;
        if form.degree() != self.space.form_degree() {
            return Err(Error::Structural(format!("a {}-form has no coordinates in this basis", form.degree())));
        }
        let mut values = vec![Rational::zero(); self.dim()];
        for (d, r) in self.space.residuals(&form)? {
            let Some(idx) = self.by_degree.get(&d) else {
                return Err(match self.kind {
                    BasisKind::Full => Error::Internal(format!("no representatives in quasi-degree {d}")),
                    BasisKind::Closed => Error::Structural("the restriction is not that of a closed form".into()),
                });
            };
            let cols = self.residual_columns(d, idx)?;
            let len = cols[0].len();
            let x = Matrix::from_columns(&cols)
                .solve(&to_dense(&r, len))
                .ok_or_else(|| Error::Structural("the restriction is not that of a closed form".into()))?;
            for (k, &i) in idx.iter().enumerate() {
                values[i] = x[k].clone();
            }
        }
        Ok(RestrictionCoords::new(self.kind, values))
    }
}

/// The `A^k_0` slice of quasi-degree `delta` for the germ's ideal.
pub fn a0_slice(germ: &CurveGerm, k: usize, delta: u32) -> A0Slice {
    A0Slice::compute(&germ_ideal(germ), k, delta)
}

fn germ_ideal(germ: &CurveGerm) -> GradedIdeal {
    GradedIdeal::new(germ.nvars(), germ.weights().clone(), IdealSource::Generators(germ.ideal().to_vec()))
}

/// Basis of `[Λ²]_N`. The germ is first reduced to its minimal embedding.
/// For `S_mu` the representatives are θ1, θ2, θ3, σ1, σ2, θ5, …, θ_mu;
/// otherwise the standard monomials of each slice are used.
pub fn full_basis(germ: &CurveGerm) -> Result<RestrictionBasis> {
    full_basis_with_cap(germ, None)
}

pub fn full_basis_with_cap(germ: &CurveGerm, hard_cap: Option<u32>) -> Result<RestrictionBasis> {
    let red = Arc::new(reduce_to_minimal_embedding(germ)?);
    let space = Arc::new(QuotientSpace::build(germ_ideal(&red), 2, hard_cap)?);
    let named = match red.family() {
        Some(fam) if red.nvars() == 3 => smu::full_representatives(&fam),
        _ => standard_representatives(&space),
    };
    RestrictionBasis::assemble(BasisKind::Full, red, space, named)
}

fn standard_representatives(space: &QuotientSpace) -> Vec<(String, DiffForm)> {
    let mut out = Vec::new();
    for d in space.support().keys() {
        let s = space.slice(*d).expect("supported degree");
        for j in s.standard_monomials() {
            let f = s.frame.column_form(j);
            out.push((f.render(), f));
        }
    }
    out
}

/// The 3-form restriction space of the germ, used to test closedness.
pub fn three_form_space(germ: &CurveGerm) -> Result<QuotientSpace> {
    let red = reduce_to_minimal_embedding(germ)?;
    QuotientSpace::build(germ_ideal(&red), 3, None)
}

/// Basis of `[Z²]_N`: the kernel of `[α] ↦ [dα]` into the 3-form
/// restriction space. For `S_mu` this is θ1, …, θ_mu with θ4 = σ1 − σ2.
pub fn closed_basis(full: &RestrictionBasis) -> Result<RestrictionBasis> {
    if full.kind != BasisKind::Full {
        return Err(Error::Structural("closed_basis expects a full basis".into()));
    }
    let three = three_form_space(&full.germ)?;
    // Kernel of d, degree by degree.
    let mut kernel: Vec<(String, DiffForm)> = Vec::new();
    let mut kernel_dims: BTreeMap<u32, usize> = BTreeMap::new();
    for (&d, idx) in &full.by_degree {
        let slice3 = three.slice_owned(d);
        let cols: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| {
                let v = slice3.frame.vector(&full.reps[i].d())?;
                Ok(to_dense(&slice3.echelon.reduce(&v), slice3.frame.len()))
            })
            .collect::<Result<_>>()?;
        let ns = if slice3.frame.is_empty() {
            (0..idx.len())
                .map(|k| (0..idx.len()).map(|j| if j == k { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
                .collect()
        } else {
            Matrix::from_columns(&cols).nullspace()
        };
        kernel_dims.insert(d, ns.len());
        for v in ns {
            let mut f = DiffForm::zero(full.germ.nvars(), 2);
            for (a, &i) in v.iter().zip(idx) {
                f = f.add(&full.reps[i].scale(a));
            }
            kernel.push((f.render(), f));
        }
    }
    let named = match full.germ.family() {
        Some(fam) if full.germ.nvars() == 3 => {
            let preferred = smu::closed_representatives(&fam);
            for (l, f) in &preferred {
                if !three.is_zero(&f.d())? {
                    return Err(Error::Internal(format!("{l} is not closed modulo A_0")));
                }
            }
            if preferred.len() != kernel.len() {
                return Err(Error::Internal(format!(
                    "closed restriction space has dimension {}, expected {}",
                    kernel.len(),
                    preferred.len()
                )));
            }
            preferred
        }
        _ => kernel,
    };
    RestrictionBasis::assemble(BasisKind::Closed, full.germ.clone(), full.space.clone(), named)
}

/// Coordinates of `ω` in `basis`.
pub fn coords(form: &DiffForm, basis: &RestrictionBasis) -> Result<RestrictionCoords> {
    basis.coords(form)
}

/// `[ω]_N = 0`.
pub fn is_zero_restriction(form: &DiffForm, germ: &CurveGerm) -> Result<bool> {
    let red = reduce_to_minimal_embedding(germ)?;
    let space = QuotientSpace::build(germ_ideal(&red), form.degree(), None)?;
    let probe = RestrictionBasis {
        kind: BasisKind::Full,
        germ: Arc::new(red),
        space: Arc::new(space),
        labels: vec![],
        reps: vec![],
        degrees: vec![],
        by_degree: BTreeMap::new(),
    };
    let f = probe.restrict_to_embedding(form)?;
    probe.space.is_zero(&f)
}

/// Checks every basic relation of `S_mu` as an identity of coordinates in
/// the full basis. Returns `(relation, holds)` pairs.
pub fn check_relations(full: &RestrictionBasis) -> Result<Vec<(smu::Relation, bool)>> {
    let fam = full
        .germ
        .family()
        .filter(|_| full.germ.nvars() == 3)
        .ok_or_else(|| Error::Unsupported("relations are tabulated for the builtin S_mu family".into()))?;
    smu::relations(&fam)
        .into_iter()
        .map(|rel| {
            let holds = full.coords(&rel.lhs)? == full.coords(&rel.rhs)?;
            Ok((rel, holds))
        })
        .collect()
}

/// Rank of the constant part of the representative on the tangent space of
/// the minimal embedding.
pub fn constant_rank(c: &RestrictionCoords, basis: &RestrictionBasis) -> Result<usize> {
    let rep = basis.representative(c)?;
    let m = rep.constant_matrix();
    Ok(Matrix::from_rows(m).rank())
}

/// Whether `[θ]` is the restriction of a symplectic form on `R^{2n}`:
/// `rank θ(0)|_{T_0 M} >= 2·dim M − 2n`.
pub fn realizable_by_symplectic(c: &RestrictionCoords, basis: &RestrictionBasis, n: u32) -> Result<bool> {
    let m = basis.germ.nvars() as i64;
    let rank = constant_rank(c, basis)? as i64;
    Ok(rank >= 2 * m - 2 * n as i64)
}

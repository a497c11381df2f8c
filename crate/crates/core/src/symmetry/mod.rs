//! Symmetries of the germ acting on restriction coordinates, and the
//! normal-form classifier for `S_mu`.

mod classify;
mod modulus;

pub use classify::{
    classify, model_form, normal_form_representative, reduce_to_model, verify_reduction, ClassLabel, ClassName, NormalForm,
};
pub use modulus::Modulus;

use crate::error::{Error, Result};
use crate::exactalg::{rank_of, Echelon, Matrix, Polynomial, Rational, SparseVec};
use crate::forms::VectorField;
use crate::restriction::{
    builtin_smu, closed_basis, full_basis, reduce_to_minimal_embedding, BasisKind, CurveGerm, GradedIdeal, IdealSource,
    RestrictionBasis, RestrictionCoords, SmuFamily,
};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Quasi-homogeneous vector fields tangent to the germ, on its minimal
/// embedding. For `S_mu`: `X0 = E, X1 = x1E, X2 = x2E, X3 = x3E` and
/// `X_{l+2} = x3^l E` for `2 <= l <= mu − 4`. Other germs get `E` and
/// `x_i E`. Every field is checked to preserve the ideal.
pub fn tangent_fields(germ: &CurveGerm) -> Result<Vec<(String, VectorField)>> {
    let red = reduce_to_minimal_embedding(germ)?;
    let n = red.nvars();
    let e = VectorField::euler(red.weights());
    let mut fields = vec![("X0".to_string(), e.clone())];
    match red.family() {
        Some(fam) if n == 3 => {
            for i in 0..3 {
                fields.push((format!("X{}", i + 1), e.mul_poly(&Polynomial::var(3, i))));
            }
            for l in 2..fam.r() {
                fields.push((format!("X{}", l + 2), e.mul_poly(&Polynomial::var(3, 2).pow(l))));
            }
        }
        _ => {
            for i in 0..n {
                fields.push((format!("x{}E", i + 1), e.mul_poly(&Polynomial::var(n, i))));
            }
        }
    }
    let ideal = GradedIdeal::new(n, red.weights().clone(), IdealSource::Generators(red.ideal().to_vec()));
    for (name, x) in &fields {
        for g in red.ideal() {
            let xg = x.apply(g);
            for d in xg.quasi_degrees(red.weights()) {
                let part = xg.graded_part(red.weights(), d);
                if !ideal_contains(&ideal, &part, d) {
                    return Err(Error::InvalidSymmetry(format!("{name} maps {g} outside the ideal")));
                }
            }
        }
    }
    Ok(fields)
}

fn ideal_contains(ideal: &GradedIdeal, p: &Polynomial, d: u32) -> bool {
    let monos = ideal.weights().monomials_of_degree(d);
    let col: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let to_vec = |q: &Polynomial| -> SparseVec { q.terms().iter().map(|(e, c)| (col[e], c.clone())).collect() };
    let mut ech = Echelon::new();
    for g in ideal.piece(d) {
        ech.insert(&to_vec(&g));
    }
    ech.contains(&to_vec(p))
}

/// Matrix of `[θ] ↦ [L_X θ]` on closed-basis coordinates; column `j` holds
/// the coordinates of `L_X θ_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMatrix {
    pub field_label: String,
    pub matrix: Matrix,
}

pub fn action_matrix(label: &str, x: &VectorField, basis: &RestrictionBasis) -> Result<ActionMatrix> {
    if basis.kind() != BasisKind::Closed {
        return Err(Error::Structural("action matrices act on the closed basis".into()));
    }
    let cols: Vec<Vec<Rational>> = basis
        .representatives()
        .iter()
        .map(|th| Ok(basis.coords(&th.lie_derivative(x)?)?.values))
        .collect::<Result<_>>()?;
    Ok(ActionMatrix { field_label: label.to_string(), matrix: Matrix::from_columns(&cols) })
}

/// Dimension of `span{A_i c}` over all action matrices.
pub fn orbit_tangent_dim(c: &RestrictionCoords, actions: &[ActionMatrix]) -> usize {
    let vs: Vec<Vec<Rational>> = actions.iter().map(|a| a.matrix.mul_vec(&c.values)).collect();
    rank_of(&vs)
}

/// Everything needed to classify restrictions to one `S_mu`: the germ,
/// both bases, the tangent fields and their action matrices.
#[derive(Debug)]
pub struct SmuContext {
    pub family: SmuFamily,
    pub germ: CurveGerm,
    pub full: RestrictionBasis,
    pub closed: RestrictionBasis,
    pub fields: Vec<(String, VectorField)>,
    pub actions: Vec<ActionMatrix>,
}

impl SmuContext {
    pub fn new(mu: u32, n: u32) -> Result<Self> {
        let germ = builtin_smu(mu, n)?;
        let family = germ.family().expect("builtin family");
        let full = full_basis(&germ)?;
        let closed = closed_basis(&full)?;
        let fields = tangent_fields(&germ)?;
        let actions = fields.iter().map(|(l, x)| action_matrix(l, x, &closed)).collect::<Result<_>>()?;
        Ok(Self { family, germ, full, closed, fields, actions })
    }

    /// Process-wide cached context.
    pub fn shared(mu: u32, n: u32) -> Result<Arc<SmuContext>> {
        static CACHE: OnceLock<Mutex<BTreeMap<(u32, u32), Arc<SmuContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        if let Some(c) = cache.lock().expect("cache lock").get(&(mu, n)) {
            return Ok(c.clone());
        }
        let ctx = Arc::new(Self::new(mu, n)?);
        cache.lock().expect("cache lock").entry((mu, n)).or_insert_with(|| ctx.clone());
        Ok(ctx)
    }

    pub fn mu(&self) -> u32 {
        self.family.mu
    }

    pub fn r(&self) -> u32 {
        self.family.r()
    }

    /// Action matrix of `X_i`.
    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i].matrix
    }

    /// The nilpotent action matrices (all fields except the Euler field).
    pub fn nilpotent_actions(&self) -> &[ActionMatrix] {
        &self.actions[1..]
    }

    /// Quasi-degrees of θ1..θ_mu.
    pub fn degrees(&self) -> &[u32] {
        self.closed.degrees()
    }

    pub fn coords(&self, values: Vec<Rational>) -> Result<RestrictionCoords> {
        if values.len() != self.mu() as usize {
            return Err(Error::Structural(format!("expected {} coordinates, got {}", self.mu(), values.len())));
        }
        Ok(RestrictionCoords::new(BasisKind::Closed, values))
    }

    pub fn orbit_tangent_dim(&self, c: &RestrictionCoords) -> usize {
        orbit_tangent_dim(c, &self.actions)
    }
}

//! Degree-by-degree computation of `A^k_0(N) = Λ^k_N + dΛ^{k-1}_N` and of
//! the quotient `Λ^k / A^k_0`.

use super::germ::Branch;
use crate::error::{Error, Result};
use crate::exactalg::{to_sparse, Echelon, Matrix, Polynomial, Rational, SparseVec, WeightSystem};
use crate::forms::DiffForm;
use std::collections::{BTreeMap, HashMap};

/// How the graded pieces `I_e` of the ideal of functions vanishing on `N`
/// are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSource {
    /// The ideal generated by the given quasi-homogeneous polynomials.
    Generators(Vec<Polynomial>),
    /// All polynomials vanishing identically on the given branches.
    Vanishing(Vec<Branch>),
}

#[derive(Debug, Clone)]
pub struct GradedIdeal {
    nvars: usize,
    weights: WeightSystem,
    source: IdealSource,
}

impl GradedIdeal {
    pub fn new(nvars: usize, weights: WeightSystem, source: IdealSource) -> Self {
        Self { nvars, weights, source }
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Largest generator quasi-degree (for vanishing ideals, a bound derived
    /// from the branch exponents).
    pub fn max_generator_degree(&self) -> u32 {
        match &self.source {
            IdealSource::Generators(g) => g.iter().filter_map(|p| p.qdeg(&self.weights)).max().unwrap_or(0),
            IdealSource::Vanishing(bs) => {
                // Each branch x_i = a t^{s λ_i}; equations of the image have
                // quasi-degree at most twice the largest weight times the
                // number of branches.
                let lam = self.weights.max_weight();
                2 * lam * bs.len().max(1) as u32
            }
        }
    }

    /// A basis of the quasi-degree `e` piece.
    pub fn piece(&self, e: u32) -> Vec<Polynomial> {
        let monos = self.weights.monomials_of_degree(e);
        if monos.is_empty() {
            return Vec::new();
        }
        let col: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        match &self.source {
            IdealSource::Generators(gens) => {
                let mut ech = Echelon::new();
                for g in gens {
                    let Some(dg) = g.qdeg(&self.weights) else { continue };
                    if dg > e {
                        continue;
                    }
                    for m in self.weights.monomials_of_degree(e - dg) {
                        let p = g.checked_mul(&Polynomial::monomial(m, Rational::from_integer(1.into()))).expect("same ring");
                        let v: SparseVec = p.terms().iter().map(|(ex, c)| (col[ex], c.clone())).collect();
                        ech.insert(&v);
                    }
                }
                ech.rows().iter().map(|row| sparse_to_poly(self.nvars, &monos, row)).collect()
            }
            IdealSource::Vanishing(branches) => {
                // Columns: monomials; rows: coefficients of t^j on each branch.
                let mut rows: Vec<Vec<Rational>> = Vec::new();
                for b in branches {
                    let images: Vec<Polynomial> =
                        monos.iter().map(|m| Polynomial::monomial(m.clone(), Rational::from_integer(1.into())).compose(&b.map).expect("branch")).collect();
                    let mut exps: Vec<u32> = images.iter().flat_map(|p| p.terms().keys().map(|e| e[0])).collect();
                    exps.sort_unstable();
                    exps.dedup();
                    for t in exps {
                        rows.push(images.iter().map(|p| p.coeff(&[t])).collect());
                    }
                }
                if rows.is_empty() {
                    return monos.iter().map(|m| Polynomial::monomial(m.clone(), Rational::from_integer(1.into()))).collect();
                }
                Matrix::from_rows(rows)
                    .nullspace()
                    .into_iter()
                    .map(|v| sparse_to_poly(self.nvars, &monos, &to_sparse(&v)))
                    .collect()
            }
        }
    }
}

fn sparse_to_poly(nvars: usize, monos: &[Vec<u32>], v: &SparseVec) -> Polynomial {
    Polynomial::from_terms(nvars, v.iter().map(|(&j, c)| (monos[j].clone(), c.clone()))).expect("consistent ring")
}

/// Strictly increasing index tuples of length `k` in `0..n`.
pub fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

type Column = (Vec<usize>, Vec<u32>);

/// The monomial k-forms of one quasi-degree, used as coordinates.
#[derive(Debug, Clone)]
pub struct MonomialFrame {
    pub delta: u32,
    pub form_degree: usize,
    nvars: usize,
    columns: Vec<Column>,
    index: HashMap<Column, usize>,
}

impl MonomialFrame {
    pub fn new(w: &WeightSystem, k: usize, delta: u32) -> Self {
        let n = w.len();
        let mut columns = Vec::new();
        for idx in index_tuples(n, k) {
            let base: u32 = idx.iter().map(|&i| w.weight(i)).sum();
            if base <= delta {
                for e in w.monomials_of_degree(delta - base) {
                    columns.push((idx.clone(), e));
                }
            }
        }
        let index = columns.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Self { delta, form_degree: k, nvars: n, columns, index }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Coordinates of a form whose pieces all have quasi-degree `delta`.
    pub fn vector(&self, form: &DiffForm) -> Result<SparseVec> {
        if form.degree() != self.form_degree || form.nvars() != self.nvars {
            return Err(Error::Structural("form does not match the slice".into()));
        }
        let mut v = SparseVec::new();
        for (idx, f) in form.components() {
            for (e, c) in f.terms() {
                let key = (idx.clone(), e.clone());
                let Some(&j) = self.index.get(&key) else {
                    return Err(Error::Structural(format!("form piece off quasi-degree {}", self.delta)));
                };
                v.insert(j, c.clone());
            }
        }
        Ok(v)
    }

    pub fn form(&self, v: &SparseVec) -> DiffForm {
        let mut comps: BTreeMap<Vec<usize>, Vec<(Vec<u32>, Rational)>> = BTreeMap::new();
        for (&j, c) in v {
            let (idx, e) = &self.columns[j];
            comps.entry(idx.clone()).or_default().push((e.clone(), c.clone()));
        }
        DiffForm::from_components(
            self.nvars,
            self.form_degree,
            comps.into_iter().map(|(idx, ts)| (idx, Polynomial::from_terms(self.nvars, ts).expect("ring"))),
        )
        .expect("well-formed")
    }

    /// Index set and coefficient exponents of column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[u32]) {
        let (idx, e) = &self.columns[j];
        (idx, e)
    }

    pub fn column_form(&self, j: usize) -> DiffForm {
        let (idx, e) = &self.columns[j];
        DiffForm::basis(self.nvars, idx, Polynomial::monomial(e.clone(), Rational::from_integer(1.into())))
    }
}

/// Echelonized basis of one quasi-degree slice of `A^k_0`.
#[derive(Debug, Clone)]
pub struct A0Slice {
    pub frame: MonomialFrame,
    pub echelon: Echelon,
}

impl A0Slice {
    pub fn compute(ideal: &GradedIdeal, k: usize, delta: u32) -> Self {
        Self::compute_with_cache(ideal, k, delta, &mut HashMap::new())
    }

    pub(crate) fn compute_with_cache(
        ideal: &GradedIdeal,
        k: usize,
        delta: u32,
        cache: &mut HashMap<u32, Vec<Polynomial>>,
    ) -> Self {
        let w = ideal.weights().clone();
        let n = ideal.nvars();
        let frame = MonomialFrame::new(&w, k, delta);
        let mut echelon = Echelon::new();
        if frame.is_empty() {
            return Self { frame, echelon };
        }
        let mut piece = |e: u32| cache.entry(e).or_insert_with(|| ideal.piece(e)).clone();
        for idx in index_tuples(n, k) {
            let base: u32 = idx.iter().map(|&i| w.weight(i)).sum();
            if base > delta {
                continue;
            }
            for f in piece(delta - base) {
                let form = DiffForm::basis(n, &idx, f);
                echelon.insert(&frame.vector(&form).expect("graded"));
            }
        }
        if k >= 1 {
            for idx in index_tuples(n, k - 1) {
                let base: u32 = idx.iter().map(|&i| w.weight(i)).sum();
                if base > delta {
                    continue;
                }
                for f in piece(delta - base) {
                    let form = DiffForm::basis(n, &idx, f).d();
                    if !form.is_zero() {
                        echelon.insert(&frame.vector(&form).expect("graded"));
                    }
                }
            }
        }
        Self { frame, echelon }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.frame.len() - self.echelon.rank()
    }

    pub fn contains(&self, form: &DiffForm) -> Result<bool> {
        Ok(self.echelon.contains(&self.frame.vector(form)?))
    }

    pub fn basis_forms(&self) -> Vec<DiffForm> {
        self.echelon.rows().iter().map(|r| self.frame.form(r)).collect()
    }

    /// Monomial forms not hit by a pivot: a canonical quotient basis.
    pub fn standard_monomials(&self) -> Vec<usize> {
        (0..self.frame.len()).filter(|&j| !self.echelon.is_pivot(j)).collect()
    }
}

/// `Λ^k / A^k_0` over all quasi-degrees, with a stabilization certificate.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    ideal: GradedIdeal,
    form_degree: usize,
    slices: BTreeMap<u32, A0Slice>,
    cap: u32,
}

impl QuotientSpace {
    /// Computes slices upward from degree 0. After the last generator and
    /// dx-weights are passed, a run of `2·max λ` consecutive zero quotient
    /// slices certifies that nothing lives above. Reaching `hard_cap` first
    /// is an error.
    pub fn build(ideal: GradedIdeal, k: usize, hard_cap: Option<u32>) -> Result<Self> {
        let w = ideal.weights().clone();
        let lam = w.max_weight();
        let gmax = ideal.max_generator_degree();
        let hard_cap = hard_cap.unwrap_or(6 * gmax.max(lam));
        let start = gmax + k as u32 * lam;
        let window = 2 * lam;
        let mut slices = BTreeMap::new();
        let mut cache = HashMap::new();
        let mut zero_run = 0u32;
        let mut delta = 0u32;
        loop {
            if delta > hard_cap {
                return Err(Error::NonStabilization { cap: hard_cap });
            }
            let s = A0Slice::compute_with_cache(&ideal, k, delta, &mut cache);
            let qd = s.quotient_dim();
            slices.insert(delta, s);
            if delta > start {
                zero_run = if qd == 0 { zero_run + 1 } else { 0 };
                if zero_run >= window {
                    break;
                }
            }
            delta += 1;
        }
        // Keep only slices up to the last nonzero quotient; the rest are
        // recomputed on demand.
        let top = slices.iter().filter(|(_, s)| s.quotient_dim() > 0).map(|(&d, _)| d).max().unwrap_or(0);
        slices.retain(|&d, _| d <= top);
        Ok(Self { ideal, form_degree: k, slices, cap: top })
    }

    pub fn ideal(&self) -> &GradedIdeal {
        &self.ideal
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    /// Highest quasi-degree with a nonzero quotient.
    pub fn top_degree(&self) -> u32 {
        self.cap
    }

    pub fn dim(&self) -> usize {
        self.slices.values().map(A0Slice::quotient_dim).sum()
    }

    /// Quotient dimension per quasi-degree (nonzero entries only).
    pub fn support(&self) -> BTreeMap<u32, usize> {
        self.slices.iter().filter(|(_, s)| s.quotient_dim() > 0).map(|(&d, s)| (d, s.quotient_dim())).collect()
    }

    pub fn slice(&self, delta: u32) -> Option<&A0Slice> {
        self.slices.get(&delta)
    }

    /// The slice at `delta`, computed on demand above the stored range.
    pub fn slice_owned(&self, delta: u32) -> A0Slice {
        match self.slices.get(&delta) {
            Some(s) => s.clone(),
            None => A0Slice::compute(&self.ideal, self.form_degree, delta),
        }
    }

    /// Canonical residual of each graded part of `form`, keyed by degree.
    /// Parts above the stored range must reduce to zero; anything else
    /// contradicts the stabilization certificate.
    pub fn residuals(&self, form: &DiffForm) -> Result<BTreeMap<u32, SparseVec>> {
        let w = self.ideal.weights();
        let mut out = BTreeMap::new();
        for delta in form.quasi_degrees(w) {
            let part = form.graded_part(w, delta);
            match self.slices.get(&delta) {
                Some(s) => {
                    let r = s.echelon.reduce(&s.frame.vector(&part)?);
                    if !r.is_empty() {
                        out.insert(delta, r);
                    }
                }
                None => {
                    let s = A0Slice::compute(&self.ideal, self.form_degree, delta);
                    if !s.contains(&part)? {
                        return Err(Error::Internal(format!(
                            "nonzero restriction in quasi-degree {delta}, above the certified range"
                        )));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, form: &DiffForm) -> Result<bool> {
        Ok(self.residuals(form)?.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_polynomial;
    use crate::forms::parse_form;

    fn smu_ideal(r: u32, even: bool) -> GradedIdeal {
        let names = Polynomial::default_names(3);
        let w = if even { vec![r, r, 2] } else { vec![r / 2, r / 2, 1] };
        let g1 = parse_polynomial(&format!("x1^2 - x2^2 - x3^{r}"), &names).unwrap();
        let g2 = parse_polynomial("x2*x3", &names).unwrap();
        GradedIdeal::new(3, WeightSystem::new(w).unwrap(), IdealSource::Generators(vec![g1, g2]))
    }

    fn form(s: &str) -> DiffForm {
        parse_form(s, 3, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn slice_contains_relations() {
        let ideal = smu_ideal(4, false);
        let w = ideal.weights().clone();
        let a = form("x2*dx2^dx3");
        let s = A0Slice::compute(&ideal, 2, a.qdeg(&w).unwrap());
        assert!(s.contains(&a).unwrap());
        let b = form("x3*dx1^dx2 - x2*dx3^dx1");
        let s = A0Slice::compute(&ideal, 2, b.qdeg(&w).unwrap());
        assert!(s.contains(&b).unwrap());
        assert!(!s.contains(&form("x3*dx1^dx2")).unwrap());
        let s = A0Slice::compute(&ideal, 2, 1);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn quotient_dimensions() {
        for (r, even, mu) in [(3, true, 6), (4, false, 7), (5, true, 8)] {
            let q2 = QuotientSpace::build(smu_ideal(r, even), 2, None).unwrap();
            assert_eq!(q2.dim(), mu + 1, "mu = {mu}");
        }
    }

    #[test]
    fn vanishing_ideal_of_a_component() {
        // Branches (t, ±t, 0) cut out (x3, x1² − x2²).
        let t = Polynomial::var(1, 0);
        let z = Polynomial::zero(1);
        let bs = vec![
            Branch { label: "a".into(), map: vec![t.clone(), t.clone(), z.clone()] },
            Branch { label: "b".into(), map: vec![t.clone(), -&t, z.clone()] },
        ];
        let w = WeightSystem::new(vec![3, 3, 2]).unwrap();
        let van = GradedIdeal::new(3, w.clone(), IdealSource::Vanishing(bs));
        let names = Polynomial::default_names(3);
        let gens = vec![parse_polynomial("x3", &names).unwrap(), parse_polynomial("x1^2 - x2^2", &names).unwrap()];
        let gen = GradedIdeal::new(3, w, IdealSource::Generators(gens));
        for e in 0..20 {
            assert_eq!(van.piece(e).len(), gen.piece(e).len(), "degree {e}");
        }
    }

    #[test]
    fn non_stabilization_is_reported() {
        let ideal = smu_ideal(5, true);
        assert!(matches!(QuotientSpace::build(ideal, 2, Some(4)), Err(Error::NonStabilization { cap: 4 })));
    }
}

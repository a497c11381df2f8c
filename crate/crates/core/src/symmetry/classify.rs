//! Decision tree bringing closed-basis coordinates on `S_mu` to normal form.
//!
//! Coordinates `c1, c2, c3` are invariant under the unipotent part of the
//! symmetry group (no nilpotent action matrix reaches θ1, θ2 or θ3), so the
//! case split is well defined. Within each case the surviving moduli are
//! read off from flow-invariant combinations and then scaled by the Euler
//! flow. Each reduction is certified by checking that the linear homotopy
//! from the input to the unscaled normal form stays tangent to the orbit.

use super::{Modulus, SmuContext};
use crate::error::{Error, Result};
use crate::exactalg::{fmt_rational, q, Echelon, Rational};
use crate::exactalg::{qf, to_sparse};
use crate::forms::DiffForm;
use crate::restriction::smu::theta;
use crate::restriction::{BasisKind, RestrictionCoords};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// Rows of the classification. `k` follows the row's own indexing:
/// `Two{k}` is `S^k_2` for `1 <= k <= mu−4` (the last is the special row),
/// `R{k}` is `S^{1+k}_r` for `1 <= k <= mu−5` (the last is `S^{mu−4}_r`),
/// `TwoK1{k}` is `S^{2+k,1}` and `ThreeKK{k}` is `S^{3+k,k}`, both for
/// `2 <= k <= mu−4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassName {
    Zero,
    Two { k: u32 },
    R { k: u32 },
    ThreeOne,
    TwoK1 { k: u32 },
    ThreeKK { k: u32 },
    Mu,
}

impl ClassName {
    /// Every row for the given `mu`, in table order.
    pub fn all(mu: u32) -> Vec<ClassName> {
        let mut v = vec![ClassName::Zero];
        v.extend((1..=mu - 4).map(|k| ClassName::Two { k }));
        v.extend((1..=mu - 5).map(|k| ClassName::R { k }));
        v.push(ClassName::ThreeOne);
        v.extend((2..=mu - 4).map(|k| ClassName::TwoK1 { k }));
        v.extend((2..=mu - 4).map(|k| ClassName::ThreeKK { k }));
        v.push(ClassName::Mu);
        v
    }

    pub fn is_valid(&self, mu: u32) -> bool {
        match *self {
            ClassName::Two { k } => (1..=mu - 4).contains(&k),
            ClassName::R { k } => (1..=mu - 5).contains(&k),
            ClassName::TwoK1 { k } | ClassName::ThreeKK { k } => (2..=mu - 4).contains(&k),
            _ => true,
        }
    }

    pub fn codim(&self, mu: u32) -> u32 {
        match *self {
            ClassName::Zero => 0,
            ClassName::Two { k } => k,
            ClassName::R { k } => k + 1,
            ClassName::ThreeOne => 3,
            ClassName::TwoK1 { k } => k + 2,
            ClassName::ThreeKK { k } => k + 3,
            ClassName::Mu => mu,
        }
    }

    /// Classes whose ω restricted to the tangent space `W` vanishes; they
    /// need `2n >= 6`.
    pub fn needs_dim_six(&self) -> bool {
        matches!(self, ClassName::ThreeOne | ClassName::TwoK1 { .. } | ClassName::ThreeKK { .. } | ClassName::Mu)
    }

    pub fn k(&self) -> Option<u32> {
        match *self {
            ClassName::Two { k } | ClassName::R { k } | ClassName::TwoK1 { k } | ClassName::ThreeKK { k } => Some(k),
            _ => None,
        }
    }

    /// Row template, e.g. `S^{k}_2` or `S^{mu-4}_r`.
    pub fn template(&self, mu: u32) -> &'static str {
        match *self {
            ClassName::Zero => "S^0",
            ClassName::Two { k } if k == mu - 4 => "S^{mu-4}_2",
            ClassName::Two { .. } => "S^{k}_2",
            ClassName::R { k } if k == mu - 5 => "S^{mu-4}_r",
            ClassName::R { .. } => "S^{1+k}_r",
            ClassName::ThreeOne => "S^{3,1}",
            ClassName::TwoK1 { .. } => "S^{2+k,1}",
            ClassName::ThreeKK { .. } => "S^{3+k,k}",
            ClassName::Mu => "S^mu",
        }
    }

    /// Row name with indices substituted, e.g. `S^{6,1}`.
    pub fn concrete(&self, mu: u32) -> String {
        match *self {
            ClassName::Zero => "S^0".into(),
            ClassName::Two { k } => format!("S^{{{k}}}_2"),
            ClassName::R { k } => format!("S^{{{}}}_r", k + 1),
            ClassName::ThreeOne => "S^{3,1}".into(),
            ClassName::TwoK1 { k } => format!("S^{{{},1}}", k + 2),
            ClassName::ThreeKK { k } => format!("S^{{{},{k}}}", k + 3),
            ClassName::Mu => format!("S^{{{mu}}}"),
        }
    }

    /// θ-indices of the moduli slots.
    pub fn moduli_slots(&self, mu: u32) -> Vec<u32> {
        match *self {
            ClassName::Zero => vec![2, 3],
            ClassName::Two { k } => vec![3, 4 + k],
            ClassName::R { k } if k == mu - 5 => vec![mu - 1],
            ClassName::R { k } => vec![4 + k, 5 + k],
            ClassName::ThreeOne => vec![4],
            ClassName::TwoK1 { k } => vec![4 + k],
            ClassName::ThreeKK { .. } | ClassName::Mu => vec![],
        }
    }

    /// θ-indices carrying coefficient 1 in the normal form.
    /// θ-indices whose coefficient the normal form fixes to 1.
    pub fn unit_slots(&self) -> Vec<u32> {
        match *self {
            ClassName::Zero => vec![1],
            ClassName::Two { .. } => vec![2],
            ClassName::R { .. } => vec![3],
            ClassName::ThreeOne => vec![5],
            ClassName::TwoK1 { .. } => vec![4],
            ClassName::ThreeKK { k } => vec![4 + k],
            ClassName::Mu => vec![],
        }
    }
}

/// A normal-form identifier with its moduli, keyed by θ-index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassLabel {
    pub mu: u32,
    pub name: ClassName,
    pub moduli: BTreeMap<u32, Modulus>,
}

impl ClassLabel {
    /// Validates the slot set; values are checked by
    /// [`normal_form_representative`].
    pub fn new(mu: u32, name: ClassName, moduli: BTreeMap<u32, Modulus>) -> Result<Self> {
        if !name.is_valid(mu) {
            return Err(Error::Constraint(format!("{name:?} is not a class of S_{mu}")));
        }
        let slots = name.moduli_slots(mu);
        if moduli.keys().copied().collect::<Vec<_>>() != slots {
            return Err(Error::Constraint(format!(
                "{} expects moduli {:?}, got {:?}",
                name.concrete(mu),
                slots,
                moduli.keys().collect::<Vec<_>>()
            )));
        }
        Ok(Self { mu, name, moduli })
    }

    /// Label with rational moduli given in slot order.
    pub fn with_rationals(mu: u32, name: ClassName, values: &[Rational]) -> Result<Self> {
        let slots = name.moduli_slots(mu);
        if slots.len() != values.len() {
            return Err(Error::Constraint(format!("{} takes {} moduli", name.concrete(mu), slots.len())));
        }
        let m = slots.into_iter().zip(values).map(|(j, v)| (j, Modulus::rational(v.clone()))).collect();
        Self::new(mu, name, m)
    }

    pub fn codim(&self) -> u32 {
        self.name.codim(self.mu)
    }

    pub fn template(&self) -> &'static str {
        self.name.template(self.mu)
    }

    pub fn concrete(&self) -> String {
        self.name.concrete(self.mu)
    }

    pub fn modulus(&self, j: u32) -> Option<&Modulus> {
        self.moduli.get(&j)
    }

    pub fn to_json(&self) -> Value {
        let moduli: serde_json::Map<String, Value> = self
            .moduli
            .iter()
            .map(|(j, m)| {
                let v = match m.as_rational() {
                    Some(c) => json!(fmt_rational(&c)),
                    None if m.coeff() == &q(1) => {
                        json!({"base": fmt_rational(m.base()), "exp": fmt_rational(m.exp())})
                    }
                    None => json!({
                        "coeff": fmt_rational(m.coeff()),
                        "base": fmt_rational(m.base()),
                        "exp": fmt_rational(m.exp()),
                    }),
                };
                (format!("c{j}"), v)
            })
            .collect();
        json!({
            "class": self.template(),
            "name": self.concrete(),
            "k": self.name.k(),
            "codim": self.codim(),
            "moduli": moduli,
        })
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.concrete())?;
        if !self.moduli.is_empty() {
            let parts: Vec<String> = self.moduli.iter().map(|(j, m)| format!("c{j}={m}")).collect();
            write!(f, " [{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of the decision tree before scaling: the sign-normalized input,
/// the unscaled normal form it is reached from, and the scaling data.
#[derive(Debug, Clone)]
struct Reduction {
    name: ClassName,
    signed: Vec<Rational>,
    target: Vec<Rational>,
    /// θ-index whose coefficient the Euler scaling sends to `±1`.
    lead: Option<u32>,
}

fn sigma1(c: &[Rational]) -> Vec<Rational> {
    c.iter().enumerate().map(|(i, v)| if i == 1 { v.clone() } else { -v }).collect()
}

fn sigma2(c: &[Rational]) -> Vec<Rational> {
    c.iter().enumerate().map(|(i, v)| if (1..=3).contains(&i) { -v } else { v.clone() }).collect()
}

/// `target` agreeing with `c` on the listed θ-indices and zero elsewhere.
fn keep(c: &[Rational], idx: &[u32]) -> Vec<Rational> {
    let mut t = vec![q(0); c.len()];
    for &j in idx {
        t[j as usize - 1] = c[j as usize - 1].clone();
    }
    t
}

fn reduce(ctx: &SmuContext, c: &[Rational]) -> Result<Reduction> {
    let mu = ctx.mu();
    let at = |v: &[Rational], j: u32| v[j as usize - 1].clone();
    let first_nonzero = |v: &[Rational], from: u32, to: u32| (from..=to).find(|&j| !at(v, j).is_zero());

    if !c[0].is_zero() {
        let s = if c[0].is_negative() { sigma1(c) } else { c.to_vec() };
        let target = keep(&s, &[1, 2, 3]);
        return Ok(Reduction { name: ClassName::Zero, signed: s, target, lead: Some(1) });
    }
    if !c[1].is_zero() {
        let s = if c[1].is_negative() { sigma2(c) } else { c.to_vec() };
        let (name, target) = match first_nonzero(&s, 5, mu - 1) {
            Some(j) => (ClassName::Two { k: j - 4 }, keep(&s, &[2, 3, j])),
            None if !at(&s, 3).is_zero() => (ClassName::Two { k: mu - 4 }, keep(&s, &[2, 3])),
            None => (ClassName::Two { k: mu - 4 }, keep(&s, &[2, mu])),
        };
        return Ok(Reduction { name, signed: s, target, lead: Some(2) });
    }
    if !c[2].is_zero() {
        let s = if c[2].is_negative() { sigma1(c) } else { c.to_vec() };
        // Flow along X3 until the θ4 coefficient vanishes; this fixes the
        // tail coefficient that X3 couples to θ4.
        let a3 = ctx.action(3);
        let pivot = &a3[(3, 2)];
        if pivot.is_zero() {
            return Err(Error::Internal("X3 does not reach θ4 from θ3".into()));
        }
        let step = -(&s[3] / (pivot * &s[2]));
        let flow = a3.exp_nilpotent(&step).ok_or_else(|| Error::Internal("X3 action is not nilpotent".into()))?;
        let hat = flow.mul_vec(&s);
        debug_assert!(hat[3].is_zero());
        let (name, idx) = match first_nonzero(&hat, 5, mu - 2) {
            Some(j) => (ClassName::R { k: j - 4 }, vec![3, j, j + 1]),
            None => (ClassName::R { k: mu - 5 }, vec![3, mu - 1]),
        };
        return Ok(Reduction { name, signed: s, target: keep(&hat, &idx), lead: Some(3) });
    }
    let lead_idx = match first_nonzero(c, 4, mu) {
        None => return Ok(Reduction { name: ClassName::Mu, signed: c.to_vec(), target: c.to_vec(), lead: None }),
        Some(j) => j,
    };
    // Only X3 and the x3-power fields act here; none reaches θ4 or the
    // first nonzero tail entry, so the unit slot is chosen on `c` itself.
    let unit = if !at(c, 5).is_zero() { 5 } else { lead_idx };
    let s = if at(c, unit).is_negative() { sigma1(c) } else { c.to_vec() };
    let red = if unit == 5 {
        Reduction { name: ClassName::ThreeOne, target: keep(&s, &[4, 5]), signed: s, lead: Some(5) }
    } else if unit == 4 {
        let j = first_nonzero(&s, 6, mu).unwrap_or(mu);
        Reduction { name: ClassName::TwoK1 { k: j - 4 }, target: keep(&s, &[4, j]), signed: s, lead: Some(4) }
    } else {
        Reduction { name: ClassName::ThreeKK { k: unit - 4 }, target: keep(&s, &[unit]), signed: s, lead: Some(unit) }
    };
    Ok(red)
}

/// Checks that `target − c` is tangent to the orbit along the segment from
/// `c` to `target`, at a grid of parameter values.
fn homotopy_certified(ctx: &SmuContext, c: &[Rational], target: &[Rational]) -> bool {
    let diff: Vec<Rational> = target.iter().zip(c).map(|(a, b)| a - b).collect();
    if diff.iter().all(Zero::is_zero) {
        return true;
    }
    [qf(0, 1), qf(1, 4), qf(1, 2), qf(3, 4), qf(1, 1)].iter().all(|t| {
        let bt: Vec<Rational> = c.iter().zip(target).map(|(a, b)| (q(1) - t) * a + t * b).collect();
        let mut ech = Echelon::new();
        for a in ctx.nilpotent_actions() {
            ech.insert(&to_sparse(&a.matrix.mul_vec(&bt)));
        }
        ech.contains(&to_sparse(&diff))
    })
}

/// Recomputes the reduction of `c` and certifies it; errors if the
/// homotopy system is unsolvable somewhere along the path.
pub fn verify_reduction(ctx: &SmuContext, c: &RestrictionCoords) -> Result<()> {
    let red = reduce(ctx, &checked_values(ctx, c)?)?;
    if homotopy_certified(ctx, &red.signed, &red.target) {
        Ok(())
    } else {
        Err(Error::Internal(format!("reduction to {} is not certified", red.name.concrete(ctx.mu()))))
    }
}

fn checked_values(ctx: &SmuContext, c: &RestrictionCoords) -> Result<Vec<Rational>> {
    if c.kind != BasisKind::Closed || c.len() != ctx.mu() as usize {
        return Err(Error::Structural(format!(
            "classification needs {} closed-basis coordinates, got {} ({:?})",
            ctx.mu(),
            c.len(),
            c.kind
        )));
    }
    Ok(c.values.clone())
}

/// The class of `c` together with an equivalent rational coordinate
/// vector: the normal form before the Euler scaling.
pub fn reduce_to_model(ctx: &SmuContext, c: &RestrictionCoords) -> Result<(ClassLabel, Vec<Rational>)> {
    let label = classify(ctx, c)?;
    let red = reduce(ctx, &checked_values(ctx, c)?)?;
    Ok((label, red.target))
}

fn theta_combination(fam: &crate::restriction::SmuFamily, c: &[Rational]) -> DiffForm {
    let mut acc = DiffForm::zero(3, 2);
    for (j, cj) in c.iter().enumerate() {
        if !cj.is_zero() {
            acc = acc.add(&theta(fam, j as u32 + 1).scale(cj));
        }
    }
    acc
}

/// `Σ c_j θ_j` plus the constant completion used for the class `name`,
/// as a 2-form on `R^{2n}`. The completion is nondegenerate whenever the
/// leading coefficient of the class is nonzero.
pub fn model_form(mu: u32, name: ClassName, c: &[Rational], n: u32) -> Result<DiffForm> {
    if n == 2 && name.needs_dim_six() {
        return Err(Error::Constraint(format!("class {} is empty for n = 2", name.concrete(mu))));
    }
    let fam = crate::restriction::SmuFamily::new(mu, n)?;
    let dim = 2 * n as usize;
    let dxx = |i: usize, j: usize| DiffForm::dx(dim, i - 1).wedge(&DiffForm::dx(dim, j - 1));
    let pairs_from = |start: usize| (start..=n as usize).map(|i| dxx(2 * i - 1, 2 * i)).collect::<Vec<_>>();
    let tail: Vec<DiffForm> = match name {
        ClassName::Zero => [vec![dxx(2, 4)], pairs_from(3)].concat(),
        ClassName::Two { .. } => [vec![dxx(1, 4)], pairs_from(3)].concat(),
        ClassName::R { k } if k == mu - 5 => [vec![dxx(4, 3)], pairs_from(3)].concat(),
        ClassName::R { .. } => pairs_from(2),
        _ => [(1..=3).map(|i| dxx(i, i + 3)).collect(), pairs_from(4)].concat(),
    };
    let mut omega = theta_combination(&fam, c).embed(dim, &[0, 1, 2])?;
    for t in tail {
        omega = omega.add(&t);
    }
    Ok(omega)
}

/// Normal form of a closed-basis coordinate vector.
pub fn classify(ctx: &SmuContext, c: &RestrictionCoords) -> Result<ClassLabel> {
    let mu = ctx.mu();
    let red = reduce(ctx, &checked_values(ctx, c)?)?;
    if !homotopy_certified(ctx, &red.signed, &red.target) {
        return Err(Error::Internal(format!("reduction to {} is not certified", red.name.concrete(mu))));
    }
    let deg = |j: u32| ctx.degrees()[j as usize - 1] as i64;
    let moduli = red
        .name
        .moduli_slots(mu)
        .into_iter()
        .map(|j| {
            let cj = red.target[j as usize - 1].clone();
            let m = match red.lead {
                Some(l) => {
                    let base = red.target[l as usize - 1].abs();
                    Modulus::new(cj, base, qf(-deg(j), deg(l)))
                }
                None => Modulus::rational(cj),
            };
            (j, m)
        })
        .collect();
    ClassLabel::new(mu, red.name, moduli)
}

/// Algebraic normal form on the minimal embedding together with a
/// symplectic representative on `R^{2n}`.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub label: ClassLabel,
    pub coords: RestrictionCoords,
    /// `Σ c_j θ_j` on `R^3`.
    pub algebraic: DiffForm,
    /// Symplectic form on `R^{2n}` whose restriction is `algebraic`.
    pub omega: DiffForm,
}

/// Builds the normal form of `label`. Moduli must be rational and satisfy
/// the row constraints; classes needing `2n >= 6` are empty for `n = 2`.
pub fn normal_form_representative(label: &ClassLabel, n: u32) -> Result<NormalForm> {
    let mu = label.mu;
    let name = label.name;
    if n < 2 {
        return Err(Error::Constraint("S_mu needs 2n >= 4".into()));
    }
    if n == 2 && name.needs_dim_six() {
        return Err(Error::Constraint(format!("class {} is empty for n = 2", name.concrete(mu))));
    }
    let checked = ClassLabel::new(mu, name, label.moduli.clone())?;
    let mut c = vec![q(0); mu as usize];
    for j in name.unit_slots() {
        c[j as usize - 1] = q(1);
    }
    for (&j, m) in &checked.moduli {
        let v = m.as_rational().ok_or_else(|| {
            Error::Constraint(format!("modulus c{j} = {m} is irrational; normal forms need rational moduli"))
        })?;
        c[j as usize - 1] = v;
    }
    let nz = |j: u32| !c[j as usize - 1].is_zero();
    let violated = match name {
        ClassName::Two { k } if k < mu - 4 => !nz(4 + k),
        ClassName::Two { .. } => nz(3) && nz(mu),
        ClassName::R { k } if k < mu - 5 => !nz(4 + k),
        ClassName::TwoK1 { k } if k < mu - 4 => !nz(4 + k),
        _ => false,
    };
    if violated {
        return Err(Error::Constraint(format!("moduli violate the constraints of {}", name.concrete(mu))));
    }

    let fam = crate::restriction::SmuFamily::new(mu, n)?;
    let algebraic = theta_combination(&fam, &c);
    let omega = model_form(mu, name, &c, n)?;
    Ok(NormalForm { label: checked, coords: RestrictionCoords::new(BasisKind::Closed, c), algebraic, omega })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Matrix;
    use crate::restriction::{builtin_smu, full_basis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(mu: u32) -> std::sync::Arc<SmuContext> {
        SmuContext::shared(mu, 2).unwrap()
    }

    fn coords(v: Vec<Rational>) -> RestrictionCoords {
        RestrictionCoords::new(BasisKind::Closed, v)
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn generic_case() {
        let cx = ctx(8);
        let l = classify(&cx, &coords(qs(&[1, 5, 2, 7, -1, 3, 0, 4]))).unwrap();
        assert_eq!(l.name, ClassName::Zero);
        assert_eq!(l.modulus(2).unwrap().as_rational(), Some(q(5)));
        assert_eq!(l.modulus(3).unwrap().as_rational(), Some(q(2)));
    }

    #[test]
    fn generic_case_scaling_exponent() {
        // c1 = 2 on S_8: c̃3 = c3 · 2^{−2r/(r+2)} = 3 · 2^{−10/7}
        let cx = ctx(8);
        let l = classify(&cx, &coords(qs(&[2, 1, 3, 0, 0, 0, 0, 0]))).unwrap();
        assert_eq!(l.modulus(2).unwrap().as_rational(), Some(qf(1, 2)));
        assert_eq!(*l.modulus(3).unwrap(), Modulus::new(q(3), q(2), qf(-10, 7)));
    }

    #[test]
    fn zero_and_sparse_cases() {
        let cx = ctx(8);
        assert_eq!(classify(&cx, &coords(vec![q(0); 8])).unwrap().name, ClassName::Mu);
        let mut v = vec![q(0); 8];
        v[3] = q(1);
        v[7] = qf(2, 3);
        let l = classify(&cx, &coords(v)).unwrap();
        assert_eq!(l.name, ClassName::TwoK1 { k: 4 });
        assert_eq!(l.modulus(8).unwrap().as_rational(), Some(qf(2, 3)));
    }

    #[test]
    fn second_case_example() {
        // θ2 + 3 x3 θ1 = θ2 + 3θ5 on S_8
        let cx = ctx(8);
        let l = classify(&cx, &coords(qs(&[0, 1, 0, 0, 3, 0, 0, 0]))).unwrap();
        assert_eq!(l.name, ClassName::Two { k: 1 });
        assert_eq!(l.modulus(3).unwrap().as_rational(), Some(q(0)));
        assert_eq!(l.modulus(5).unwrap().as_rational(), Some(q(3)));
    }

    #[test]
    fn third_case_corrects_tail() {
        let cx = ctx(8);
        let r = 5;
        // c3 = 1, c4 = 2, c5 = 1, c6 = 0: ĉ6 = −c4 (r+6) c5 / (r c3)
        let l = classify(&cx, &coords(qs(&[0, 0, 1, 2, 1, 0, 0, 0]))).unwrap();
        assert_eq!(l.name, ClassName::R { k: 1 });
        assert_eq!(l.modulus(6).unwrap().as_rational(), Some(qf(-2 * (r + 6), r)));
    }

    #[test]
    fn idempotent_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for mu in [6, 7, 8, 9] {
            let cx = ctx(mu);
            for name in ClassName::all(mu) {
                for _ in 0..5 {
                    let vals: Vec<Rational> = name
                        .moduli_slots(mu)
                        .iter()
                        .map(|_| qf(rng.gen_range(1..9) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..5)))
                        .collect();
                    let mut label = ClassLabel::with_rationals(mu, name, &vals).unwrap();
                    if let ClassName::Two { k } = name {
                        if k == mu - 4 {
                            label.moduli.insert(mu, Modulus::rational(q(0)));
                        }
                    }
                    let nf = normal_form_representative(&label, 3).unwrap();
                    let got = classify(&cx, &nf.coords).unwrap();
                    assert_eq!(got, label, "mu={mu} {name:?}");
                }
            }
        }
    }

    #[test]
    fn invariant_under_unipotent_flows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for mu in [6, 7, 8] {
            let cx = ctx(mu);
            for _ in 0..30 {
                let mut v: Vec<Rational> =
                    (0..mu).map(|_| if rng.gen_bool(0.4) { q(0) } else { qf(rng.gen_range(-5..6), rng.gen_range(1..4)) }).collect();
                for j in 0..3 {
                    if rng.gen_bool(0.5) {
                        v[j] = q(0);
                    }
                }
                let base = classify(&cx, &coords(v.clone())).unwrap();
                for a in cx.nilpotent_actions() {
                    let s = qf(rng.gen_range(-4..5), rng.gen_range(1..4));
                    let g: Matrix = a.matrix.exp_nilpotent(&s).unwrap();
                    let moved = classify(&cx, &coords(g.mul_vec(&v))).unwrap();
                    assert_eq!(moved, base, "mu={mu} field {}", a.field_label);
                }
            }
        }
    }

    #[test]
    fn representatives_restrict_to_their_coordinates() {
        let mu = 7;
        let germ = builtin_smu(mu, 3).unwrap();
        let full = full_basis(&germ).unwrap();
        for name in ClassName::all(mu) {
            let vals = vec![q(2); name.moduli_slots(mu).len()];
            let mut label = ClassLabel::with_rationals(mu, name, &vals).unwrap();
            if name == (ClassName::Two { k: mu - 4 }) {
                label.moduli.insert(mu, Modulus::rational(q(0)));
            }
            let nf = normal_form_representative(&label, 3).unwrap();
            let mut expected = vec![q(0); mu as usize + 1];
            // full basis order θ1, θ2, θ3, σ1, σ2, θ5.. with θ4 = σ1 − σ2
            for (j, v) in nf.coords.values.iter().enumerate() {
                match j {
                    0..=2 => expected[j] = v.clone(),
                    3 => {
                        expected[3] = v.clone();
                        expected[4] = -v;
                    }
                    _ => expected[j + 1] = v.clone(),
                }
            }
            assert_eq!(full.coords(&nf.omega).unwrap().values, expected, "{name:?}");
            let m = nf.omega.constant_matrix();
            let rows: Vec<Vec<Rational>> = m;
            assert_eq!(crate::exactalg::rank_of(&rows), 6, "{name:?} degenerate");
        }
    }

    #[test]
    fn constraints() {
        let mu = 8;
        let l = ClassLabel::with_rationals(mu, ClassName::Two { k: 2 }, &[q(1), q(0)]).unwrap();
        assert!(matches!(normal_form_representative(&l, 2), Err(Error::Constraint(_))));
        let l = ClassLabel::with_rationals(mu, ClassName::Mu, &[]).unwrap();
        assert!(matches!(normal_form_representative(&l, 2), Err(Error::Constraint(_))));
        assert!(normal_form_representative(&l, 3).is_ok());
        let mut m = BTreeMap::new();
        m.insert(3, Modulus::rational(q(1)));
        m.insert(8, Modulus::rational(q(1)));
        let l = ClassLabel::new(mu, ClassName::Two { k: 4 }, m).unwrap();
        assert!(matches!(normal_form_representative(&l, 2), Err(Error::Constraint(_))));
        let mut m = BTreeMap::new();
        m.insert(4, Modulus::new(q(1), q(2), qf(1, 3)));
        let l = ClassLabel::new(mu, ClassName::ThreeOne, m).unwrap();
        assert!(matches!(normal_form_representative(&l, 3), Err(Error::Constraint(_))));
    }

    #[test]
    fn json_report_shape() {
        let mut m = BTreeMap::new();
        m.insert(3, Modulus::rational(qf(5, 3)));
        m.insert(6, Modulus::new(q(1), q(2), qf(-7, 9)));
        let l = ClassLabel::new(9, ClassName::Two { k: 2 }, m).unwrap();
        let j = l.to_json();
        assert_eq!(j["class"], "S^{k}_2");
        assert_eq!(j["k"], 2);
        assert_eq!(j["codim"], 2);
        assert_eq!(j["moduli"]["c3"], "5/3");
        assert_eq!(j["moduli"]["c6"]["base"], "2");
        assert_eq!(j["moduli"]["c6"]["exp"], "-7/9");
    }
}

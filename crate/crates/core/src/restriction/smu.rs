//! Named representatives of the builtin `S_mu` family on the minimal
//! embedding `R^3`.

use super::germ::SmuFamily;
use crate::exactalg::{q, Polynomial};
use crate::forms::DiffForm;

fn mono(e: [u32; 3]) -> Polynomial {
    Polynomial::monomial(e.to_vec(), q(1))
}

/// `θ_j` for `1 <= j <= mu`: `θ1 = dx1∧dx3`, `θ2 = dx2∧dx3`, `θ3 = dx1∧dx2`,
/// `θ4 = x3 dx1∧dx2 − x1 dx2∧dx3`, `θ_{4+k} = x3^k dx1∧dx3`.
pub fn theta(fam: &SmuFamily, j: u32) -> DiffForm {
    assert!((1..=fam.mu).contains(&j), "theta index {j} out of range");
    match j {
        1 => DiffForm::basis(3, &[0, 2], mono([0, 0, 0])),
        2 => DiffForm::basis(3, &[1, 2], mono([0, 0, 0])),
        3 => DiffForm::basis(3, &[0, 1], mono([0, 0, 0])),
        4 => sigma1().sub(&sigma2()),
        _ => DiffForm::basis(3, &[0, 2], mono([0, 0, j - 4])),
    }
}

/// `σ1 = x3 dx1∧dx2`.
pub fn sigma1() -> DiffForm {
    DiffForm::basis(3, &[0, 1], mono([0, 0, 1]))
}

/// `σ2 = x1 dx2∧dx3`.
pub fn sigma2() -> DiffForm {
    DiffForm::basis(3, &[1, 2], mono([1, 0, 0]))
}

/// Full basis of `[Λ²]`: θ1, θ2, θ3, σ1, σ2, θ5, …, θ_mu.
pub fn full_representatives(fam: &SmuFamily) -> Vec<(String, DiffForm)> {
    let mut v = vec![
        ("theta1".to_string(), theta(fam, 1)),
        ("theta2".to_string(), theta(fam, 2)),
        ("theta3".to_string(), theta(fam, 3)),
        ("sigma1".to_string(), sigma1()),
        ("sigma2".to_string(), sigma2()),
    ];
    v.extend((5..=fam.mu).map(|j| (format!("theta{j}"), theta(fam, j))));
    v
}

/// Closed basis of `[Z²]`: θ1, …, θ_mu.
pub fn closed_representatives(fam: &SmuFamily) -> Vec<(String, DiffForm)> {
    (1..=fam.mu).map(|j| (format!("theta{j}"), theta(fam, j))).collect()
}

/// One of the basic linear relations among 2-form restrictions to
/// `S_mu`, as `[lhs]_N = [rhs]_N`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub row: u32,
    pub text: String,
    pub lhs: DiffForm,
    pub rhs: DiffForm,
}

/// The nine relations obtained by wedging the differentials of the
/// defining equations with 1-forms.
pub fn relations(fam: &SmuFamily) -> Vec<Relation> {
    let r = fam.r();
    let f = |e: [u32; 3], i: usize, j: usize| DiffForm::basis(3, &[i, j], mono(e));
    let zero = DiffForm::zero(3, 2);
    let rows: Vec<(String, DiffForm, DiffForm)> = vec![
        ("x2 dx2^dx3 = 0".into(), f([0, 1, 0], 1, 2), zero.clone()),
        ("x3 dx2^dx3 = 0".into(), f([0, 0, 1], 1, 2), zero.clone()),
        ("x1 dx1^dx2 = 0".into(), f([1, 0, 0], 0, 1), zero.clone()),
        ("x1 dx1^dx3 = 0".into(), f([1, 0, 0], 0, 2), zero.clone()),
        ("x3 dx1^dx2 = x2 dx3^dx1".into(), f([0, 0, 1], 0, 1), f([0, 1, 0], 0, 2).scale(&q(-1))),
        (
            format!("2 x2 dx1^dx2 = {r} x3^{} dx3^dx1", r - 1),
            f([0, 1, 0], 0, 1).scale(&q(2)),
            f([0, 0, r - 1], 0, 2).scale(&q(-(r as i64))),
        ),
        ("x1^2 dx2^dx3 = 0".into(), f([2, 0, 0], 1, 2), zero.clone()),
        ("x3^2 dx1^dx2 = 0".into(), f([0, 0, 2], 0, 1), zero.clone()),
        ("x2^2 dx1^dx2 = 0".into(), f([0, 2, 0], 0, 1), zero),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (text, lhs, rhs))| Relation { row: i as u32 + 1, text, lhs, rhs })
        .collect()
}

/// Quasi-degree of `θ_j` in the weights of the family.
pub fn theta_degree(fam: &SmuFamily, j: u32) -> u32 {
    let w = fam.weights3();
    let (a, c) = (w[0], w[2]);
    match j {
        1 | 2 => a + c,
        3 => 2 * a,
        4 => 2 * a + c,
        _ => a + c + c * (j - 4),
    }
}

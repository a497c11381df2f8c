//! Regeneration of the classification tables for one `mu`.

use crate::output::{Document, Table};
use algres::exactalg::{fmt_rational, q};
use algres::forms::fmt_coeff_label;
use algres::invariants::{InvariantOptions, InvariantReport};
use algres::restriction::{check_relations, RestrictionCoords};
use algres::symmetry::{normal_form_representative, ClassLabel, ClassName, SmuContext};
use algres::{Order, Rational, Result};
use num_traits::Zero;

/// One representative per row of the invariant tables: a class, the
/// subcase condition it illustrates, and moduli in slot order.
#[derive(Debug, Clone)]
pub struct Sample {
    pub name: ClassName,
    pub condition: String,
    pub moduli: Vec<Rational>,
}

fn sample(name: ClassName, condition: &str, moduli: &[i64]) -> Sample {
    Sample { name, condition: condition.into(), moduli: moduli.iter().map(|&x| q(x)).collect() }
}

/// Table row order, with both subcases where the tables split a class.
pub fn samples(mu: u32) -> Vec<Sample> {
    let mut out = Vec::new();
    for name in ClassName::all(mu) {
        match name {
            ClassName::Zero => {
                out.push(sample(name, "c3!=0", &[2, 3]));
                out.push(sample(name, "c3=0", &[2, 0]));
            }
            ClassName::Two { k } if k < mu - 4 => {
                out.push(sample(name, "c3!=0", &[3, 2]));
                out.push(sample(name, "c3=0", &[0, 2]));
            }
            ClassName::Two { .. } => {
                out.push(sample(name, "c3!=0", &[3, 0]));
                out.push(sample(name, "c3=0", &[0, 2]));
            }
            ClassName::R { k } if k < mu - 5 => out.push(sample(name, "", &[2, 3])),
            ClassName::R { .. } => {
                out.push(sample(name, &format!("c{}!=0", mu - 1), &[2]));
                out.push(sample(name, &format!("c{}=0", mu - 1), &[0]));
            }
            ClassName::ThreeOne => out.push(sample(name, "", &[2])),
            ClassName::TwoK1 { k } | ClassName::ThreeKK { k } if k == mu - 4 => {
                let slots = name.moduli_slots(mu).len();
                out.push(sample(name, "k=mu-4", &vec![2; slots]));
            }
            ClassName::TwoK1 { .. } => out.push(sample(name, "", &[2])),
            ClassName::ThreeKK { .. } | ClassName::Mu => out.push(sample(name, "", &[])),
        }
    }
    out
}

impl Sample {
    pub fn label(&self, mu: u32) -> Result<ClassLabel> {
        ClassLabel::with_rationals(mu, self.name, &self.moduli)
    }

    pub fn coords(&self, mu: u32) -> Result<RestrictionCoords> {
        Ok(normal_form_representative(&self.label(mu)?, 3)?.coords)
    }
}

/// `θ2 + c3*θ3 + c6*θ6` style rendering of a class's normal form.
pub fn normal_form_text(mu: u32, name: ClassName) -> String {
    let mut slots: Vec<(u32, bool)> = name.unit_slots().into_iter().map(|j| (j, false)).collect();
    slots.extend(name.moduli_slots(mu).into_iter().map(|j| (j, true)));
    slots.sort();
    if slots.is_empty() {
        return "0".into();
    }
    slots
        .iter()
        .map(|&(j, modulus)| if modulus { format!("c{j}*theta{j}") } else { format!("theta{j}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `Σ a_i θ_i` for a coordinate vector.
pub fn combination(values: &[Rational], prefix: &str) -> String {
    let terms: Vec<String> = values
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| fmt_coeff_label(c, &format!("{prefix}{}", i + 1)))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

pub fn order_cell(o: &Order) -> String {
    o.to_string()
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

pub fn relations_table(mu: u32) -> Result<(Table, bool)> {
    let ctx = SmuContext::shared(mu, 2)?;
    let mut t = Table::new(&format!("relations_mu{mu}"), &format!("Basic relations on S_{mu}"), &["row", "relation", "holds"]);
    let mut all = true;
    for (rel, ok) in check_relations(&ctx.full)? {
        all &= ok;
        t.push(vec![rel.row.to_string(), rel.text, if ok { "PASS" } else { "FAIL" }.into()]);
    }
    Ok((t, all))
}

pub fn basis_table(name: &str, caption: &str, labels: &[String], degrees: &[u32], reps: &[String]) -> Table {
    let mut t = Table::new(name, caption, &["index", "label", "quasi_degree", "representative"]);
    for (i, ((l, d), r)) in labels.iter().zip(degrees).zip(reps).enumerate() {
        t.push(vec![(i + 1).to_string(), l.clone(), d.to_string(), r.clone()]);
    }
    t
}

/// Every table for one `mu`.
pub fn paper_tables(mu: u32, cap: Option<u32>) -> Result<Document> {
    let ctx = SmuContext::shared(mu, 2)?;
    let mut tables = Vec::new();
    tables.push(relations_table(mu)?.0);
    let render = |b: &algres::restriction::RestrictionBasis| b.representatives().iter().map(|f| f.render()).collect::<Vec<_>>();
    tables.push(basis_table(
        &format!("full_basis_mu{mu}"),
        &format!("Basis of 2-form restrictions to S_{mu}"),
        ctx.full.labels(),
        ctx.full.degrees(),
        &render(&ctx.full),
    ));
    tables.push(basis_table(
        &format!("closed_basis_mu{mu}"),
        &format!("Basis of closed 2-form restrictions to S_{mu}"),
        ctx.closed.labels(),
        ctx.closed.degrees(),
        &render(&ctx.closed),
    ));

    let opts = InvariantOptions { cap };
    let reports: Vec<(Sample, InvariantReport)> = samples(mu)
        .into_iter()
        .map(|s| {
            let r = InvariantReport::compute(mu, 3, &s.coords(mu)?, opts)?;
            Ok((s, r))
        })
        .collect::<Result<_>>()?;

    let mut t2 = Table::new(
        &format!("classification_mu{mu}"),
        &format!("Symplectic classes of S_{mu}"),
        &["class", "normal_form", "min_2n", "cod", "mu_sym", "ind"],
    );
    let mut seen = Vec::new();
    for (s, r) in &reports {
        if seen.contains(&s.name) {
            continue;
        }
        seen.push(s.name);
        t2.push(vec![
            s.name.concrete(mu),
            normal_form_text(mu, s.name),
            if s.name.needs_dim_six() { "6" } else { "4" }.into(),
            s.name.codim(mu).to_string(),
            r.mu_sym.map_or("-".into(), |m| m.to_string()),
            r.ind.as_ref().map_or("-".into(), order_cell),
        ]);
    }
    tables.push(t2);

    let parity = if mu % 2 == 0 { "even" } else { "odd" };
    let mut t3 = Table::new(
        &format!("tangency_mu{mu}"),
        &format!("Lagrangian tangency orders for S_{mu} ({parity} mu)"),
        &["class", "condition", "Lt", "L1", "L2", "L21"],
    );
    let mut t5 = Table::new(
        &format!("geometry_mu{mu}"),
        &format!("Geometric conditions for S_{mu}"),
        &["class", "condition", "row", "w(l2,l3)!=0", "w(l1+-,l2)!=0", "w(l1+,l1-)!=0", "w|W=0", "C1_lagr", "C2_lagr", "N_lagr"],
    );
    for (s, r) in &reports {
        let t = r.tangency.as_ref().expect("realizable in dimension 6");
        let l21 = match t.l21_exact() {
            Some(o) => order_cell(o),
            None => format!("[{}, {}]", t.l21.0, t.l21.1),
        };
        t3.push(vec![
            s.name.concrete(mu),
            s.condition.clone(),
            order_cell(&t.lt),
            order_cell(&t.l1),
            order_cell(&t.l2),
            l21,
        ]);
        let g = r.geometric.expect("realizable in dimension 6");
        t5.push(vec![
            s.name.concrete(mu),
            s.condition.clone(),
            r.table5.map_or("-".into(), |row| row.to_string()),
            yes(g.l2_l3),
            yes(g.l1_l2),
            yes(g.l1_l1),
            yes(g.w_isotropic),
            yes(g.c1_lagrangian),
            yes(g.c2_lagrangian),
            yes(g.n_lagrangian),
        ]);
    }
    tables.push(t3);
    tables.push(t5);
    tables.push(action_table(&ctx));
    Ok(Document::tables(tables))
}

/// `L_X[θ_j]` in the closed basis, one row per field and basis element.
pub fn action_table(ctx: &SmuContext) -> Table {
    let mu = ctx.mu();
    let mut t = Table::new(
        &format!("action_mu{mu}"),
        &format!("Infinitesimal action of tangent fields on closed restrictions to S_{mu}"),
        &["field", "theta", "image"],
    );
    for a in &ctx.actions {
        for j in 0..a.matrix.ncols() {
            t.push(vec![a.field_label.clone(), format!("theta{}", j + 1), combination(&a.matrix.column(j), "theta")]);
        }
    }
    t
}

pub fn coords_cells(values: &[Rational]) -> Vec<String> {
    values.iter().map(fmt_rational).collect()
}

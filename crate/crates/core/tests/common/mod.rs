//! Strategies and property checks shared by the property suite and the
//! acceptance runner.
#![allow(dead_code)]

use algres::exactalg::{parse_polynomial, q, qf};
use algres::forms::parse_form;
use algres::invariants::{InvariantOptions, InvariantReport};
use algres::restriction::{builtin_smu, BasisKind, RestrictionCoords};
use algres::symmetry::SmuContext;
use algres::{DiffForm, Order, Polynomial, Rational, VectorField};
use num_traits::Zero;
use proptest::prelude::*;
use std::collections::BTreeMap;

pub type Check = Result<(), TestCaseError>;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| qf(if neg { -n } else { n }, d))
}

/// Polynomials in `nvars` variables with exponents up to `max_exp`.
pub fn poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), rational()), 0..=max_terms).prop_map(
        move |terms| {
            let mut p = Polynomial::zero(nvars);
            for (e, c) in terms {
                p = &p + &Polynomial::monomial(e, c);
            }
            p
        },
    )
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            subsets(n, k - 1).into_iter().filter(move |rest| rest.first().is_none_or(|&r| r > first)).map(
                move |rest| {
                    let mut v = vec![first];
                    v.extend(rest);
                    v
                },
            )
        })
        .collect()
}

/// `k`-forms on `R^nvars` with polynomial coefficients.
pub fn form(nvars: usize, k: usize, max_exp: u32) -> impl Strategy<Value = DiffForm> {
    let idx = subsets(nvars, k);
    let count = idx.len();
    prop::collection::vec((0..count, poly(nvars, max_exp, 3)), 0..=3).prop_map(move |parts| {
        let mut acc = DiffForm::zero(nvars, k);
        for (i, p) in parts {
            acc = acc.add(&DiffForm::basis(nvars, &idx[i], p));
        }
        acc
    })
}

pub fn field(nvars: usize, max_exp: u32) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(nvars, max_exp, 3), nvars).prop_map(|c| VectorField::new(c).expect("matching sizes"))
}

pub fn check_d_squared(w: &DiffForm) -> Check {
    prop_assert!(w.d().d().is_zero(), "d(d({})) != 0", w.render());
    Ok(())
}

pub fn check_leibniz(a: &DiffForm, b: &DiffForm) -> Check {
    let lhs = a.wedge(b).d();
    let sign = if a.degree() % 2 == 0 { q(1) } else { q(-1) };
    let rhs = a.d().wedge(b).add(&a.wedge(&b.d()).scale(&sign));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Cartan's formula against the coordinate formula, and `[L_X, d] = 0`.
pub fn check_cartan(x: &VectorField, w: &DiffForm) -> Check {
    let cartan = w.lie_derivative(x).unwrap();
    let coordinate = w.lie_derivative_coordinates(x).unwrap();
    prop_assert_eq!(&cartan, &coordinate);
    prop_assert_eq!(w.d().lie_derivative_coordinates(x).unwrap(), coordinate.d());
    Ok(())
}

pub fn check_ring_axioms(a: &Polynomial, b: &Polynomial, c: &Polynomial) -> Check {
    prop_assert_eq!(&(a + b), &(b + a));
    prop_assert_eq!(&(a * b), &(b * a));
    prop_assert_eq!(&(&(a * b) * c), &(a * &(b * c)));
    prop_assert_eq!(&(a * &(b + c)), &(&(a * b) + &(a * c)));
    prop_assert_eq!(&(&(a + b) - b), a);
    Ok(())
}

/// Composition is a ring homomorphism and agrees with evaluation.
pub fn check_substitution(a: &Polynomial, b: &Polynomial, args: &[Polynomial], point: &[Rational]) -> Check {
    let prod = (a * b).compose(args).unwrap();
    prop_assert_eq!(&prod, &(&a.compose(args).unwrap() * &b.compose(args).unwrap()));
    let values: Vec<Rational> = args.iter().map(|g| g.eval(point).unwrap()).collect();
    prop_assert_eq!(prod.eval(point).unwrap(), (a * b).eval(&values).unwrap());
    Ok(())
}

pub fn check_round_trip(p: &Polynomial, w: &DiffForm) -> Check {
    let names = Polynomial::default_names(p.nvars());
    prop_assert_eq!(&parse_polynomial(&p.to_string(), &names).unwrap(), p);
    let parsed = parse_form(&w.render(), w.nvars(), &BTreeMap::new()).unwrap();
    // "0" carries no degree
    if w.is_zero() {
        prop_assert!(parsed.is_zero());
    } else {
        prop_assert_eq!(&parsed, w);
    }
    Ok(())
}

/// A random element of `A²_0` for `S_mu ⊂ R^4`: `Σ g_i β_i + d(g_i γ_i)`
/// over the ideal generators.
#[derive(Debug, Clone)]
pub struct A0Sample {
    pub mu: u32,
    pub betas: Vec<DiffForm>,
    pub gammas: Vec<DiffForm>,
}

pub fn a0_sample(mu_range: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = A0Sample> {
    mu_range.prop_flat_map(|mu| {
        (
            Just(mu),
            prop::collection::vec(form(4, 2, 2), 4),
            prop::collection::vec(form(4, 1, 2), 4),
        )
            .prop_map(|(mu, betas, gammas)| A0Sample { mu, betas, gammas })
    })
}

impl A0Sample {
    pub fn form(&self) -> DiffForm {
        let germ = builtin_smu(self.mu, 2).unwrap();
        let mut acc = DiffForm::zero(4, 2);
        for ((g, b), c) in germ.ideal().iter().zip(&self.betas).zip(&self.gammas) {
            acc = acc.add(&b.mul_poly(g)).add(&c.mul_poly(g).d());
        }
        acc
    }
}

pub fn closed_coords(mu: u32) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), mu as usize)
}

/// Adding an element of `A²_0` leaves the coordinates unchanged.
pub fn check_well_defined(sample: &A0Sample, c: &[Rational]) -> Check {
    let ctx = SmuContext::shared(sample.mu, 2).unwrap();
    let coords = RestrictionCoords::new(BasisKind::Closed, c.to_vec());
    let rep = ctx.closed.representative(&coords).unwrap();
    let rep = if rep.nvars() == 4 { rep } else { rep.embed(4, &[0, 1, 2]).unwrap() };
    let a0 = sample.form();
    prop_assert!(ctx.full.coords(&a0).unwrap().is_zero());
    prop_assert_eq!(ctx.closed.coords(&rep.add(&a0)).unwrap().values, c.to_vec());
    prop_assert_eq!(ctx.full.coords(&rep.add(&a0)).unwrap(), ctx.full.coords(&rep).unwrap());
    Ok(())
}

/// Zero restriction forces `ω|W = 0` for `W = span(∂x1, ∂x2, ∂x3)`.
/// `extra` is a constant 2-form added to test the implication on forms
/// whose restriction need not vanish.
pub fn check_zero_on_w(sample: &A0Sample, extra: &[Rational; 6]) -> Check {
    let ctx = SmuContext::shared(sample.mu, 2).unwrap();
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut w = sample.form();
    for ((i, j), c) in pairs.iter().zip(extra) {
        w = w.add(&DiffForm::basis(4, &[*i, *j], Polynomial::constant(4, c.clone())));
    }
    let e = |i: usize| (0..4).map(|k| if k == i { q(1) } else { q(0) }).collect::<Vec<_>>();
    if ctx.full.coords(&w).unwrap().is_zero() {
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(w.evaluate_at_zero(&e(i), &e(j)).unwrap().is_zero());
            }
        }
    }
    Ok(())
}

/// Certified `Lt <= min(L1, L2)` on a report.
pub fn check_lt_bound(mu: u32, c: &[Rational]) -> Check {
    let coords = RestrictionCoords::new(BasisKind::Closed, c.to_vec());
    let report = InvariantReport::compute(mu, 3, &coords, InvariantOptions::default()).unwrap();
    let t = report.tangency.expect("realizable for n = 3");
    for l in [&t.l1, &t.l2] {
        match (&t.lt, l) {
            (Order::Finite(_), _) | (Order::Infinite, Order::Infinite) => {
                prop_assert!(t.lt.certainly_le(l), "Lt = {} exceeds {}", t.lt, l)
            }
            (Order::Infinite, other) => prop_assert!(false, "Lt = inf but a component has order {}", other),
            (Order::AtLeast(a), Order::Finite(b)) => prop_assert!(a <= b, "Lt >= {} but a component has {}", a, b),
            (Order::AtLeast(_), _) => {}
        }
    }
    Ok(())
}

/// Sparse closed coordinates so that every branch of the classifier is hit.
pub fn sparse_closed_coords(mu: u32) -> impl Strategy<Value = Vec<Rational>> {
    (prop::collection::vec(rational(), mu as usize), 0..=(mu as usize)).prop_map(|(mut v, lead)| {
        for x in v.iter_mut().take(lead) {
            *x = Rational::zero();
        }
        v
    })
}

/// Sparse closed coordinates drawn from a seed, for strategies whose
/// length depends on an earlier draw.
pub fn coords_from_seed(mu: u32, seed: u64) -> Vec<Rational> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let lead = rng.gen_range(0..=mu as usize);
    (0..mu as usize)
        .map(|i| if i < lead || rng.gen_bool(0.3) { Rational::zero() } else { qf(rng.gen_range(-6..=6), rng.gen_range(1..=4)) })
        .collect()
}

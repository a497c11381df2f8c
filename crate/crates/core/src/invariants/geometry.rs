//! Tangent lines of the branches and the geometric conditions that
//! separate the symplectic classes.

use super::{lagrangian::LagrangianProbe, Tangency};
use crate::error::{Error, Result};
use crate::exactalg::{rank_of, Matrix, Order, Rational};
use crate::forms::DiffForm;
use crate::restriction::CurveGerm;
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;

/// `ℓ1±` are the tangents of the two branches of `C1`, `ℓ2` the tangent of
/// `C2`, and `ℓ3` spans `P1 ∩ P2` where `P1 = ℓ1+ + ℓ1−` and `P2` is the
/// Zariski tangent space of `C2`. `W = ℓ1+ + ℓ1− + ℓ2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentFrame {
    pub l1_plus: Vec<Rational>,
    pub l1_minus: Vec<Rational>,
    pub l2: Vec<Rational>,
    pub l3: Vec<Rational>,
    pub w: Vec<Vec<Rational>>,
}

impl TangentFrame {
    pub fn from_germ(germ: &CurveGerm) -> Result<Self> {
        let c1 = germ.component("C1").ok_or_else(|| Error::DegenerateFrame("no component C1".into()))?;
        let c2 = germ.component("C2").ok_or_else(|| Error::DegenerateFrame("no component C2".into()))?;
        if c1.branches.len() != 2 || c2.branches.is_empty() {
            return Err(Error::DegenerateFrame("C1 needs two branches and C2 at least one".into()));
        }
        let tangent = |i: usize| germ.branches()[i].tangent();
        let (l1_plus, l1_minus, l2) = (tangent(c1.branches[0]), tangent(c1.branches[1]), tangent(c2.branches[0]));
        let eqs = c2
            .ideal
            .as_ref()
            .ok_or_else(|| Error::DegenerateFrame("C2 has no equations, so P2 is unknown".into()))?;
        let m = germ.nvars();
        let linear_parts: Vec<Vec<Rational>> = eqs
            .iter()
            .map(|g| {
                (0..m)
                    .map(|i| {
                        let mut e = vec![0; m];
                        e[i] = 1;
                        g.coeff(&e)
                    })
                    .collect()
            })
            .collect();
        // a·ℓ1+ + b·ℓ1− ∈ P2
        let images: Vec<Vec<Rational>> = [&l1_plus, &l1_minus]
            .iter()
            .map(|l| Matrix::from_rows(linear_parts.clone()).mul_vec(l))
            .collect();
        let ns = Matrix::from_columns(&images).nullspace();
        if ns.len() != 1 || rank_of(&[l1_plus.clone(), l1_minus.clone()]) != 2 {
            return Err(Error::DegenerateFrame(format!("P1 ∩ P2 has dimension {}", ns.len())));
        }
        let (a, b) = (&ns[0][0], &ns[0][1]);
        let l3: Vec<Rational> = l1_plus.iter().zip(&l1_minus).map(|(x, y)| a * x + b * y).collect();
        let w = vec![l1_plus.clone(), l1_minus.clone(), l2.clone()];
        if rank_of(&w) != 3 {
            return Err(Error::DegenerateFrame("the branch tangents do not span a 3-space".into()));
        }
        Ok(Self { l1_plus, l1_minus, l2, l3, w })
    }
}

/// The flag set evaluated from `ω(0)` on the frame and from Lagrangian
/// containment of the components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometricFlags {
    pub l2_l3: bool,
    /// `ω(ℓ1+, ℓ2) ≠ 0` or `ω(ℓ1−, ℓ2) ≠ 0`.
    pub l1_l2: bool,
    pub l1_l1: bool,
    pub w_isotropic: bool,
    pub c1_lagrangian: bool,
    pub c2_lagrangian: bool,
    pub n_lagrangian: bool,
}

impl GeometricFlags {
    pub fn evaluate(frame: &TangentFrame, omega: &DiffForm, probe: &LagrangianProbe<'_>) -> Result<Self> {
        let w = |u: &[Rational], v: &[Rational]| omega.evaluate_at_zero(u, v).map(|x| !x.is_zero());
        let l1_l2 = w(&frame.l1_plus, &frame.l2)? || w(&frame.l1_minus, &frame.l2)?;
        let l1_l1 = w(&frame.l1_plus, &frame.l1_minus)?;
        Ok(Self {
            l2_l3: w(&frame.l2, &frame.l3)?,
            l1_l2,
            l1_l1,
            w_isotropic: !l1_l2 && !l1_l1,
            c1_lagrangian: probe.component_is_lagrangian("C1")?,
            c2_lagrangian: probe.component_is_lagrangian("C2")?,
            n_lagrangian: probe.germ_is_lagrangian()?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "omega_l2_l3_nonzero": self.l2_l3,
            "omega_l1pm_l2_nonzero": self.l1_l2,
            "omega_l1p_l1m_nonzero": self.l1_l1,
            "omega_W_zero": self.w_isotropic,
            "C1_in_lagrangian": self.c1_lagrangian,
            "C2_in_lagrangian": self.c2_lagrangian,
            "N_in_lagrangian": self.n_lagrangian,
        })
    }
}

/// Rows of the geometric classification, grouped by the leading condition
/// on `ω(0)`: `A` (`ω(ℓ2, ℓ3) ≠ 0`), `B` (`ω(ℓ1±, ℓ2) ≠ 0`), `C`
/// (`ω(ℓ1+, ℓ1−) ≠ 0` only) and `D` (`ω|W = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table5Row {
    A1,
    A2,
    B1(u32),
    B2(u32),
    B3,
    B4,
    C1(u32),
    C2,
    C3,
    D1,
    D2(u32),
    D3,
    D4(u32),
    D5,
    D6,
}

impl fmt::Display for Table5Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Table5Row::*;
        match self {
            A1 => write!(f, "A1"),
            A2 => write!(f, "A2"),
            B1(k) => write!(f, "B1(k={k})"),
            B2(k) => write!(f, "B2(k={k})"),
            B3 => write!(f, "B3"),
            B4 => write!(f, "B4"),
            C1(k) => write!(f, "C1(k={k})"),
            C2 => write!(f, "C2"),
            C3 => write!(f, "C3"),
            D1 => write!(f, "D1"),
            D2(k) => write!(f, "D2(k={k})"),
            D3 => write!(f, "D3"),
            D4(k) => write!(f, "D4(k={k})"),
            D5 => write!(f, "D5"),
            D6 => write!(f, "D6"),
        }
    }
}

impl Table5Row {
    /// Every row for `mu`, in table order.
    pub fn all(mu: u32) -> Vec<Self> {
        use Table5Row::*;
        let mut rows = vec![A1, A2];
        rows.extend((1..=mu - 5).map(B1));
        rows.extend((1..=mu - 5).map(B2));
        rows.extend([B3, B4]);
        rows.extend((1..=mu - 6).map(C1));
        rows.extend([C2, C3, D1]);
        rows.extend((2..=mu - 5).map(D2));
        rows.push(D3);
        rows.extend((2..=mu - 5).map(D4));
        rows.extend([D5, D6]);
        rows
    }

    /// Whether this row's conditions hold. Orders are compared in the
    /// units of the branch parameters, `(r + 2k)/λ` with `λ = 2` for odd
    /// `mu`.
    pub fn holds(&self, mu: u32, g: &GeometricFlags, t: &Tangency) -> bool {
        use Table5Row::*;
        let r = mu - 3;
        let lambda = if mu % 2 == 0 { 1 } else { 2 };
        let v = |num: u32| Order::Finite(num / lambda);
        let vk = |k: u32| v(r + 2 * k);
        let a = g.l2_l3;
        let b = !g.l2_l3 && g.l1_l2;
        let c = !g.l2_l3 && !g.l1_l2 && g.l1_l1;
        let d = g.w_isotropic && g.c1_lagrangian;
        let none = !g.c1_lagrangian && !g.c2_lagrangian;
        let both = g.c1_lagrangian && g.c2_lagrangian;
        match *self {
            A1 => a && g.l1_l1 && none,
            A2 => a && !g.l1_l1,
            B1(k) => b && g.l1_l1 && t.l2 == vk(k),
            B2(k) => b && !g.l1_l1 && t.l2 == vk(k),
            B3 => b && g.l1_l1 && g.c2_lagrangian,
            B4 => b && !g.l1_l1 && both,
            C1(k) => c && none && t.l2 == vk(k),
            C2 => c && none && t.l2 == v(3 * r - 4),
            C3 => c && g.c2_lagrangian,
            D1 => d && t.l2 == vk(1) && t.lt == vk(1),
            D2(k) => d && t.l2 == vk(k) && t.lt == vk(1),
            D3 => d && both && t.lt == vk(1),
            D4(k) => d && t.l2 == vk(k) && t.lt == vk(k),
            D5 => d && both && t.lt == v(3 * r - 2),
            D6 => d && g.n_lagrangian,
        }
    }

    /// The unique row whose conditions hold.
    pub fn select(mu: u32, g: &GeometricFlags, t: &Tangency) -> Result<Self> {
        let hits: Vec<Self> = Self::all(mu).into_iter().filter(|row| row.holds(mu, g, t)).collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::Internal(format!(
                "geometric conditions select {} rows ({}) for flags {:?}, Lt = {}, L2 = {}",
                hits.len(),
                hits.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                g,
                t.lt,
                t.l2
            ))),
        }
    }
}

use crate::error::{Error, Result};
use crate::exactalg::{parse_polynomial, q, Polynomial, PowerSeries, WeightSystem};
use serde::Deserialize;
use std::collections::BTreeMap;

/// A parametrized branch `t ↦ (x_1(t), …, x_m(t))` with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub label: String,
    pub map: Vec<Polynomial>,
}

impl Branch {
    pub fn series(&self, cap: u32) -> Vec<PowerSeries> {
        self.map.iter().map(|p| PowerSeries::from_polynomial(p, cap).expect("univariate branch")).collect()
    }

    /// Lowest-order nonzero coefficient vector: the tangent direction.
    pub fn tangent(&self) -> Vec<crate::exactalg::Rational> {
        let ord = self.map.iter().filter_map(Polynomial::min_std_degree).min().unwrap_or(0);
        self.map.iter().map(|p| p.coeff(&[ord])).collect()
    }
}

/// An irreducible-component grouping of branches, optionally with its own
/// defining equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub branches: Vec<usize>,
    pub ideal: Option<Vec<Polynomial>>,
}

/// Parameters of the builtin `S_mu` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmuFamily {
    pub mu: u32,
    pub n: u32,
}

impl SmuFamily {
    pub fn new(mu: u32, n: u32) -> Result<Self> {
        if mu <= 5 {
            return Err(Error::Unsupported(format!("S_mu needs mu > 5, got {mu}")));
        }
        if n < 2 {
            return Err(Error::Unsupported(format!("symplectic space R^(2n) needs n >= 2, got {n}")));
        }
        Ok(Self { mu, n })
    }

    /// `r = mu - 3`.
    pub fn r(&self) -> u32 {
        self.mu - 3
    }

    pub fn is_even(&self) -> bool {
        self.mu % 2 == 0
    }

    /// Parity normalization: 1 for even `mu`, 2 for odd `mu`.
    pub fn lambda(&self) -> u32 {
        if self.is_even() {
            1
        } else {
            2
        }
    }

    /// Weights of `(x_1, x_2, x_3)`.
    pub fn weights3(&self) -> Vec<u32> {
        let r = self.r();
        if self.is_even() {
            vec![r, r, 2]
        } else {
            vec![r / 2, r / 2, 1]
        }
    }
}

/// A quasi-homogeneous curve germ at the origin: ideal generators plus the
/// branch parametrizations of its zero set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveGerm {
    variables: Vec<String>,
    weights: WeightSystem,
    ideal: Vec<Polynomial>,
    branches: Vec<Branch>,
    components: Vec<Component>,
    ambient_dim: usize,
    kept: Vec<usize>,
    family: Option<SmuFamily>,
}

impl CurveGerm {
    /// Validates quasi-homogeneity of the generators and that every branch
    /// lies on the zero set.
    pub fn new(
        variables: Vec<String>,
        weights: WeightSystem,
        ideal: Vec<Polynomial>,
        branches: Vec<Branch>,
        components: Vec<Component>,
    ) -> Result<Self> {
        let m = variables.len();
        if weights.len() != m {
            return Err(Error::InvalidCurve(format!("{} weights for {m} variables", weights.len())));
        }
        for g in &ideal {
            if g.nvars() != m {
                return Err(Error::InvalidCurve(format!("generator {g} lives in the wrong ring")));
            }
            if g.is_zero() || g.qdeg(&weights).is_none() {
                return Err(Error::InvalidCurve(format!("generator {g} is not quasi-homogeneous")));
            }
            if !g.constant_term().eq(&q(0)) {
                return Err(Error::InvalidCurve(format!("generator {g} does not vanish at 0")));
            }
        }
        for b in &branches {
            if b.map.len() != m || b.map.iter().any(|p| p.nvars() != 1) {
                return Err(Error::InvalidCurve(format!("branch {} must have {m} components in t", b.label)));
            }
            if b.map.iter().any(|p| !p.constant_term().eq(&q(0))) {
                return Err(Error::InvalidCurve(format!("branch {} does not pass through 0", b.label)));
            }
            for g in &ideal {
                if !g.compose(&b.map)?.is_zero() {
                    return Err(Error::InvalidCurve(format!("branch {} does not satisfy {g}", b.label)));
                }
            }
        }
        for c in &components {
            if c.branches.iter().any(|&i| i >= branches.len()) {
                return Err(Error::InvalidCurve(format!("component {} refers to a missing branch", c.name)));
            }
            if let Some(gens) = &c.ideal {
                for g in gens {
                    if g.nvars() != m || g.qdeg(&weights).is_none() {
                        return Err(Error::InvalidCurve(format!("component equation {g} is invalid")));
                    }
                    for &b in &c.branches {
                        if !g.compose(&branches[b].map)?.is_zero() {
                            return Err(Error::InvalidCurve(format!(
                                "branch {} does not satisfy component equation {g}",
                                branches[b].label
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { variables, weights, ideal, branches, components, ambient_dim: m, kept: (0..m).collect(), family: None })
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn ideal(&self) -> &[Polynomial] {
        &self.ideal
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, label: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.label == label)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn family(&self) -> Option<SmuFamily> {
        self.family
    }

    /// Dimension of the original ambient space before any reduction.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Original indices of the variables that survived reduction.
    pub fn embedding(&self) -> &[usize] {
        &self.kept
    }

    /// Sub-germ formed by one component. Its ideal is the component's own
    /// equations when given, otherwise the vanishing ideal of its branches
    /// is used degree by degree.
    pub fn component_germ(&self, name: &str) -> Result<ComponentGerm> {
        let c = self.component(name).ok_or_else(|| Error::InvalidCurve(format!("no component named {name}")))?;
        let branches: Vec<Branch> = c.branches.iter().map(|&i| self.branches[i].clone()).collect();
        Ok(ComponentGerm {
            name: c.name.clone(),
            nvars: self.nvars(),
            weights: self.weights.clone(),
            ideal: c.ideal.clone(),
            branches,
        })
    }
}

impl CurveGerm {
    /// One component as a germ in the same ambient space. Needs the
    /// component's own equations.
    pub fn component_as_germ(&self, name: &str) -> Result<CurveGerm> {
        let c = self.component(name).ok_or_else(|| Error::InvalidCurve(format!("no component named {name}")))?;
        let ideal = c
            .ideal
            .clone()
            .ok_or_else(|| Error::Unsupported(format!("component {name} has no equations")))?;
        let branches: Vec<Branch> = c.branches.iter().map(|&i| self.branches[i].clone()).collect();
        let comp = Component { name: c.name.clone(), branches: (0..branches.len()).collect(), ideal: None };
        let mut g = CurveGerm::new(self.variables.clone(), self.weights.clone(), ideal, branches, vec![comp])?;
        g.ambient_dim = self.ambient_dim;
        g.kept = self.kept.clone();
        Ok(g)
    }
}

/// A component viewed as a germ of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGerm {
    pub name: String,
    pub nvars: usize,
    pub weights: WeightSystem,
    pub ideal: Option<Vec<Polynomial>>,
    pub branches: Vec<Branch>,
}

fn t_pow(c: i64, e: u32) -> Polynomial {
    Polynomial::monomial(vec![e], q(c))
}

/// The germ `S_mu = {x1² − x2² − x3^(mu−3) = x2·x3 = x_{≥4} = 0}` in `R^(2n)`.
pub fn builtin_smu(mu: u32, n: u32) -> Result<CurveGerm> {
    let fam = SmuFamily::new(mu, n)?;
    let m = 2 * n as usize;
    let r = fam.r();
    let mut weights = fam.weights3();
    weights.resize(m, 1);
    let x = |i: usize| Polynomial::var(m, i);
    let mut ideal = vec![
        &(&x(0).pow(2) - &x(1).pow(2)) - &x(2).pow(r),
        &x(1) * &x(2),
    ];
    ideal.extend((3..m).map(x));
    let z = Polynomial::zero(1);
    let pad = |mut v: Vec<Polynomial>| {
        v.resize(m, z.clone());
        v
    };
    let mut branches = vec![
        Branch { label: "B1+".into(), map: pad(vec![t_pow(1, 1), t_pow(1, 1), z.clone()]) },
        Branch { label: "B1-".into(), map: pad(vec![t_pow(1, 1), t_pow(-1, 1), z.clone()]) },
    ];
    if fam.is_even() {
        branches.push(Branch { label: "C2".into(), map: pad(vec![t_pow(1, r), z.clone(), t_pow(1, 2)]) });
    } else {
        branches.push(Branch { label: "B2+".into(), map: pad(vec![t_pow(1, r / 2), z.clone(), t_pow(1, 1)]) });
        branches.push(Branch { label: "B2-".into(), map: pad(vec![t_pow(-1, r / 2), z.clone(), t_pow(1, 1)]) });
    }
    let mut c1 = vec![x(2), &x(0).pow(2) - &x(1).pow(2)];
    let mut c2 = vec![x(1), &x(0).pow(2) - &x(2).pow(r)];
    c1.extend((3..m).map(x));
    c2.extend((3..m).map(x));
    let components = vec![
        Component { name: "C1".into(), branches: vec![0, 1], ideal: Some(c1) },
        Component { name: "C2".into(), branches: (2..branches.len()).collect(), ideal: Some(c2) },
    ];
    let mut g = CurveGerm::new(
        Polynomial::default_names(m),
        WeightSystem::new(weights)?,
        ideal,
        branches,
        components,
    )?;
    g.family = Some(fam);
    Ok(g)
}

/// Drops every variable `x_j` that is itself (a multiple of) a generator,
/// recording which original coordinates were kept.
pub fn reduce_to_minimal_embedding(germ: &CurveGerm) -> Result<CurveGerm> {
    let m = germ.nvars();
    let is_linear_coord = |g: &Polynomial| -> Option<usize> {
        if g.len() != 1 {
            return None;
        }
        let (e, _) = g.terms().iter().next()?;
        (e.iter().sum::<u32>() == 1).then(|| e.iter().position(|&k| k == 1).expect("degree one"))
    };
    let dropped: Vec<usize> = {
        let mut d: Vec<usize> = germ.ideal.iter().filter_map(is_linear_coord).collect();
        d.sort_unstable();
        d.dedup();
        d
    };
    if dropped.is_empty() {
        return Ok(germ.clone());
    }
    let kept_local: Vec<usize> = (0..m).filter(|i| !dropped.contains(i)).collect();
    let k = kept_local.len();
    // x_i ↦ new variable, dropped ↦ 0
    let subst: Vec<Polynomial> = (0..m)
        .map(|i| match kept_local.iter().position(|&j| j == i) {
            Some(p) => Polynomial::var(k, p),
            None => Polynomial::zero(k),
        })
        .collect();
    let reduce_ideal = |gens: &[Polynomial]| -> Result<Vec<Polynomial>> {
        let mut out = Vec::new();
        for g in gens {
            if is_linear_coord(g).is_some_and(|j| dropped.contains(&j)) {
                continue;
            }
            let h = g.compose(&subst)?;
            if !h.is_zero() {
                out.push(h);
            }
        }
        Ok(out)
    };
    let ideal = reduce_ideal(&germ.ideal)?;
    let weights = WeightSystem::new(kept_local.iter().map(|&i| germ.weights.weight(i)).collect())?;
    let mut branches = Vec::new();
    for b in &germ.branches {
        if dropped.iter().any(|&j| !b.map[j].is_zero()) {
            return Err(Error::InvalidCurve(format!("branch {} leaves the minimal embedding", b.label)));
        }
        branches.push(Branch { label: b.label.clone(), map: kept_local.iter().map(|&i| b.map[i].clone()).collect() });
    }
    let mut components = Vec::new();
    for c in &germ.components {
        let ideal = match &c.ideal {
            Some(gens) => Some(reduce_ideal(gens)?),
            None => None,
        };
        components.push(Component { name: c.name.clone(), branches: c.branches.clone(), ideal });
    }
    let variables = kept_local.iter().map(|&i| germ.variables[i].clone()).collect();
    let mut out = CurveGerm::new(variables, weights, ideal, branches, components)?;
    out.ambient_dim = germ.ambient_dim;
    out.kept = kept_local.iter().map(|&i| germ.kept[i]).collect();
    out.family = germ.family;
    Ok(out)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BuiltinSpec {
    family: String,
    mu: u32,
    #[serde(default = "default_n")]
    n: u32,
}

fn default_n() -> u32 {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchSpec {
    label: String,
    map: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ComponentSpec {
    Labels(Vec<String>),
    Full {
        name: String,
        branches: Vec<String>,
        #[serde(default)]
        equations: Option<Vec<String>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneralSpec {
    variables: Vec<String>,
    weights: Vec<u32>,
    equations: Vec<String>,
    branches: Vec<BranchSpec>,
    #[serde(default)]
    components: Vec<ComponentSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CurveSpec {
    Builtin { builtin: BuiltinSpec },
    General(GeneralSpec),
}

/// Reads a curve document: `{"builtin": {"family": "S", "mu": 7, "n": 2}}`
/// or an explicit germ with variables, weights, equations and branches.
pub fn curve_from_json(text: &str) -> Result<CurveGerm> {
    let spec: CurveSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
    match spec {
        CurveSpec::Builtin { builtin } => {
            if builtin.family != "S" {
                return Err(Error::Unsupported(format!("unknown builtin family `{}`", builtin.family)));
            }
            builtin_smu(builtin.mu, builtin.n)
        }
        CurveSpec::General(g) => {
            let names = g.variables.clone();
            let ideal = g.equations.iter().map(|s| parse_polynomial(s, &names)).collect::<Result<Vec<_>>>()?;
            let tname = vec!["t".to_string()];
            let mut branches = Vec::new();
            for b in &g.branches {
                let map = b.map.iter().map(|s| parse_polynomial(s, &tname)).collect::<Result<Vec<_>>>()?;
                branches.push(Branch { label: b.label.clone(), map });
            }
            let index: BTreeMap<&str, usize> = branches.iter().enumerate().map(|(i, b)| (b.label.as_str(), i)).collect();
            let lookup = |l: &String| {
                index.get(l.as_str()).copied().ok_or_else(|| Error::InvalidCurve(format!("unknown branch label {l}")))
            };
            let mut components = Vec::new();
            for (k, c) in g.components.iter().enumerate() {
                components.push(match c {
                    ComponentSpec::Labels(ls) => Component {
                        name: format!("C{}", k + 1),
                        branches: ls.iter().map(lookup).collect::<Result<_>>()?,
                        ideal: None,
                    },
                    ComponentSpec::Full { name, branches: ls, equations } => Component {
                        name: name.clone(),
                        branches: ls.iter().map(lookup).collect::<Result<_>>()?,
                        ideal: match equations {
                            Some(eqs) => Some(eqs.iter().map(|s| parse_polynomial(s, &names)).collect::<Result<_>>()?),
                            None => None,
                        },
                    },
                });
            }
            CurveGerm::new(names, WeightSystem::new(g.weights)?, ideal, branches, components)
        }
    }
}

/// Parses the shorthand `S:<mu>[:<n>]`.
pub fn curve_from_shorthand(s: &str) -> Result<CurveGerm> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Parse { line: 1, col: 1, msg: format!("expected S:<mu>[:<n>], got `{s}`") };
    if parts.first() != Some(&"S") || !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let mu: u32 = parts[1].parse().map_err(|_| bad())?;
    let n: u32 = match parts.get(2) {
        Some(p) => p.parse().map_err(|_| bad())?,
        None => 2,
    };
    builtin_smu(mu, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_weights_and_branches() {
        let g = builtin_smu(7, 2).unwrap();
        assert_eq!(g.weights().weights(), &[2, 2, 1, 1]);
        assert_eq!(g.branches().len(), 4);
        assert_eq!(g.branch("B2-").unwrap().map[0], t_pow(-1, 2));
        let g = builtin_smu(8, 2).unwrap();
        assert_eq!(&g.weights().weights()[..3], &[5, 5, 2]);
        assert_eq!(g.branches().len(), 3);
        assert!(matches!(builtin_smu(5, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn reduction_drops_linear_generators() {
        let g = builtin_smu(9, 3).unwrap();
        let red = reduce_to_minimal_embedding(&g).unwrap();
        assert_eq!(red.nvars(), 3);
        assert_eq!(red.embedding(), &[0, 1, 2]);
        assert_eq!(red.ambient_dim(), 6);
        assert_eq!(red.ideal().len(), 2);
        assert_eq!(red.component("C1").unwrap().ideal.as_ref().unwrap().len(), 2);
        // A second reduction is the identity.
        assert_eq!(reduce_to_minimal_embedding(&red).unwrap(), red);
    }

    #[test]
    fn rejects_branches_off_the_curve() {
        let spec = r#"{"variables":["x","y"],"weights":[2,3],"equations":["x^3 - y^2"],
            "branches":[{"label":"b","map":["t^2","t^2"]}]}"#;
        assert!(matches!(curve_from_json(spec), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn general_json_germ() {
        let spec = r#"{"variables":["x","y"],"weights":[2,3],"equations":["x^3 - y^2"],
            "branches":[{"label":"b","map":["t^2","t^3"]}],"components":[["b"]]}"#;
        let g = curve_from_json(spec).unwrap();
        assert_eq!(g.components()[0].name, "C1");
        let b = curve_from_json(r#"{"builtin":{"family":"S","mu":7,"n":2}}"#).unwrap();
        assert_eq!(b, builtin_smu(7, 2).unwrap());
        assert_eq!(curve_from_shorthand("S:8:3").unwrap(), builtin_smu(8, 3).unwrap());
        assert!(curve_from_shorthand("T:8").is_err());
    }
}

//! `algres`: algebraic restrictions of differential forms to curve germs.
//!
//! Exit status is 0 on success, 1 when an internal check fails and 2 for
//! bad input.

mod output;
mod tables;

use algres::exactalg::{fmt_rational, parse_rational};
use algres::forms::parse_form;
use algres::invariants::{order_json, InvariantOptions, InvariantReport};
use algres::restriction::{
    closed_basis, curve_from_json, curve_from_shorthand, full_basis_with_cap, BasisKind, CurveGerm, RestrictionBasis,
    RestrictionCoords,
};
use algres::symmetry::{classify, SmuContext};
use algres::{DiffForm, Error, Result};
use clap::{Args, Parser, Subcommand};
use output::{Document, Format, Table};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "algres", version, about = "Algebraic restrictions and symplectic S_mu singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Also show decimal approximations of moduli with this many digits (text only).
    #[arg(long, global = true)]
    decimals: Option<usize>,
    /// Highest quasi-degree examined when computing restriction spaces.
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// Highest tangency order searched when computing invariants.
    #[arg(long, global = true)]
    series_cap: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct CurveArg {
    /// `S:<mu>[:<n>]` or a path to a curve JSON document.
    #[arg(long)]
    curve: String,
}

#[derive(Args, Debug, Clone)]
struct InputArg {
    #[command(flatten)]
    curve: CurveArg,
    /// A 2-form, e.g. "dx2^dx3 + 3*x3*dx1^dx3" or "theta1 + 2*theta3".
    #[arg(long, conflicts_with = "coords")]
    form: Option<String>,
    /// Closed-basis coordinates, comma separated, e.g. "1,0,2/3,0,0,0".
    #[arg(long)]
    coords: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis of all 2-form restrictions.
    Basis(CurveArg),
    /// Basis of closed 2-form restrictions.
    ClosedBasis(CurveArg),
    /// Coordinates of a form's restriction.
    Coords {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        form: String,
        /// Use the closed basis.
        #[arg(long)]
        closed: bool,
    },
    /// Normal form of a closed restriction to S_mu.
    Classify(InputArg),
    /// Discrete symplectic invariants of a closed restriction to S_mu.
    Invariants(InputArg),
    /// Action of the tangent vector fields on closed restrictions.
    ActionTable(CurveArg),
    /// All classification tables for the given values of mu.
    PaperTables {
        #[arg(long, required = true, num_args = 1..)]
        mu: Vec<u32>,
    },
    /// Verifies the basic relations for the given values of mu.
    CheckRelations {
        #[arg(long, num_args = 1.., default_values_t = [6u32, 7, 8, 9, 10, 11, 12])]
        mu: Vec<u32>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Internal(_) => (1, "internal"),
            Error::NonStabilization { .. } => (1, "non_stabilization"),
            Error::Parse { .. } => (2, "parse"),
            Error::Structural(_) => (2, "structural"),
            Error::Unsupported(_) => (2, "unsupported"),
            Error::InvalidCurve(_) => (2, "invalid_curve"),
            Error::InvalidSymmetry(_) => (2, "invalid_symmetry"),
            Error::Constraint(_) => (2, "constraint"),
            Error::DegenerateFrame(_) => (2, "degenerate_frame"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "input", message: msg.into() }
}

fn load_curve(spec: &str) -> std::result::Result<CurveGerm, Failure> {
    if spec.starts_with("S:") {
        return Ok(curve_from_shorthand(spec)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| input_error(format!("cannot read {spec}: {e}")))?;
    Ok(curve_from_json(&text)?)
}

fn smu_of(germ: &CurveGerm) -> Result<(u32, u32)> {
    let fam = germ.family().ok_or_else(|| Error::Unsupported("this command needs the builtin S_mu family".into()))?;
    Ok((fam.mu, fam.n))
}

/// Parses a form on the curve's ambient space. For `S_mu`, `theta1..`,
/// `sigma1` and `sigma2` name the basis representatives.
fn read_form(germ: &CurveGerm, text: &str) -> Result<DiffForm> {
    let m = germ.ambient_dim();
    let mut named = BTreeMap::new();
    if let Some(fam) = germ.family() {
        let lift = |f: DiffForm| f.embed(m, &[0, 1, 2]);
        for (l, f) in algres::restriction::smu::full_representatives(&fam) {
            named.insert(l, lift(f)?);
        }
        named.insert("theta4".into(), lift(algres::restriction::smu::theta(&fam, 4))?);
    }
    parse_form(text, m, &named)
}

fn closed_coords(ctx: &SmuContext, germ: &CurveGerm, input: &InputArg) -> std::result::Result<RestrictionCoords, Failure> {
    match (&input.form, &input.coords) {
        (Some(f), None) => Ok(ctx.closed.coords(&read_form(germ, f)?)?),
        (None, Some(c)) => {
            let values = c.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>>>()?;
            Ok(ctx.coords(values)?)
        }
        _ => Err(input_error("give exactly one of --form or --coords")),
    }
}

fn basis_doc(b: &RestrictionBasis, name: &str, caption: &str) -> Document {
    let reps: Vec<String> = b.representatives().iter().map(|f| f.render()).collect();
    let t = tables::basis_table(name, caption, b.labels(), b.degrees(), &reps);
    let json = json!({
        "kind": if b.kind() == BasisKind::Full { "full" } else { "closed" },
        "dim": b.dim(),
        "labels": b.labels(),
        "quasi_degrees": b.degrees(),
        "representatives": reps,
    });
    Document { tables: vec![t], json: Some(json) }
}

fn run(cli: &Cli) -> std::result::Result<(Document, bool), Failure> {
    let ok = |d: Document| Ok((d, true));
    match &cli.command {
        Command::Basis(c) => {
            let full = full_basis_with_cap(&load_curve(&c.curve)?, cli.degree_cap)?;
            ok(basis_doc(&full, "full_basis", "Basis of 2-form restrictions"))
        }
        Command::ClosedBasis(c) => {
            let full = full_basis_with_cap(&load_curve(&c.curve)?, cli.degree_cap)?;
            ok(basis_doc(&closed_basis(&full)?, "closed_basis", "Basis of closed 2-form restrictions"))
        }
        Command::Coords { curve, form, closed } => {
            let germ = load_curve(&curve.curve)?;
            let full = full_basis_with_cap(&germ, cli.degree_cap)?;
            let basis = if *closed { closed_basis(&full)? } else { full };
            let c = basis.coords(&read_form(&germ, form)?)?;
            let mut t = Table::new("coords", "Coordinates of the restriction", &["label", "value"]);
            for (l, v) in basis.labels().iter().zip(&c.values) {
                t.push(vec![l.clone(), fmt_rational(v)]);
            }
            let json = json!({
                "basis": if *closed { "closed" } else { "full" },
                "labels": basis.labels(),
                "coords": tables::coords_cells(&c.values),
                "zero": c.is_zero(),
            });
            ok(Document { tables: vec![t], json: Some(json) })
        }
        Command::Classify(input) => {
            let germ = load_curve(&input.curve.curve)?;
            let (mu, n) = smu_of(&germ)?;
            let ctx = SmuContext::shared(mu, n)?;
            let c = closed_coords(&ctx, &germ, input)?;
            let label = classify(&ctx, &c)?;
            let mut headers = vec!["class", "name", "codim", "moduli"];
            if cli.decimals.is_some() {
                headers.push("approx");
            }
            let mut t = Table::new("classification", "Normal form", &headers);
            let moduli: Vec<String> = label.moduli.iter().map(|(j, m)| format!("c{j}={m}")).collect();
            let mut row = vec![label.template().into(), label.concrete(), label.codim().to_string(), moduli.join(", ")];
            if let Some(d) = cli.decimals {
                let approx: Vec<String> =
                    label.moduli.iter().map(|(j, m)| format!("c{j}~{}", m.render_decimal(d))).collect();
                row.push(approx.join(", "));
            }
            t.push(row);
            let mut json = label.to_json();
            json["coords"] = json!(tables::coords_cells(&c.values));
            ok(Document { tables: vec![t], json: Some(json) })
        }
        Command::Invariants(input) => {
            let germ = load_curve(&input.curve.curve)?;
            let (mu, n) = smu_of(&germ)?;
            let ctx = SmuContext::shared(mu, n)?;
            let c = closed_coords(&ctx, &germ, input)?;
            let r = InvariantReport::compute(mu, n, &c, InvariantOptions { cap: cli.series_cap })?;
            ok(Document { tables: vec![invariants_table(&r)], json: Some(r.to_json()) })
        }
        Command::ActionTable(c) => {
            let germ = load_curve(&c.curve)?;
            let (mu, n) = smu_of(&germ)?;
            let ctx = SmuContext::shared(mu, n)?;
            let t = tables::action_table(&ctx);
            let json = json!({
                "mu": mu,
                "fields": ctx.actions.iter().map(|a| json!({
                    "field": a.field_label,
                    "matrix": (0..a.matrix.nrows()).map(|i| tables::coords_cells(&a.matrix.row(i))).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            ok(Document { tables: vec![t], json: Some(json) })
        }
        Command::PaperTables { mu } => {
            let mut all = Vec::new();
            for &m in mu {
                all.extend(tables::paper_tables(m, cli.series_cap)?.tables);
            }
            ok(Document::tables(all))
        }
        Command::CheckRelations { mu } => {
            let mut all = Vec::new();
            let mut pass = true;
            for &m in mu {
                let (t, ok) = tables::relations_table(m)?;
                pass &= ok;
                all.push(t);
            }
            Ok((Document::tables(all), pass))
        }
    }
}

fn invariants_table(r: &InvariantReport) -> Table {
    let mut t = Table::new("invariants", "Symplectic invariants", &["invariant", "value"]);
    let mut row = |k: &str, v: String| t.push(vec![k.into(), v]);
    row("class", r.class.to_string());
    row("n", r.n.to_string());
    row("realizable", r.realizable.to_string());
    if !r.realizable {
        row("note", format!("class is empty for 2n = {}", 2 * r.n));
        return t;
    }
    row("mu_sym", r.mu_sym.map_or("-".into(), |m| m.to_string()));
    row("ind", r.ind.as_ref().map_or("-".into(), tables::order_cell));
    if let Some(tg) = &r.tangency {
        row("Lt", tables::order_cell(&tg.lt));
        row("L1", tables::order_cell(&tg.l1));
        row("L2", tables::order_cell(&tg.l2));
        row(
            "L21",
            match tg.l21_exact() {
                Some(o) => tables::order_cell(o),
                None => format!("[{}, {}]", tg.l21.0, tg.l21.1),
            },
        );
    }
    if let Some(g) = &r.geometric {
        if let Value::Object(m) = g.to_json() {
            for (k, v) in m {
                row(&k, v.to_string());
            }
        }
    }
    if let Some(row5) = &r.table5 {
        row("geometric_row", row5.to_string());
    }
    let _ = order_json;
    t
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, pass)) => {
            print!("{}", doc.render(cli.format));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let doc = json!({ "error": { "kind": f.kind, "message": f.message } });
            if cli.format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                eprintln!("error ({}): {}", f.kind, f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

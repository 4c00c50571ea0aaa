//! The `rsset` command-line tool.

pub mod format;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{best_upper_bound, exponent_table, format_real, BoundValue, BoundsReport, ExponentTable};
use crate::constructions::{
    elliptic_ovoid, graph_curve_32_square, monomial_curve, monomial_curve_affine_variant, rational_normal_curve,
    ProductRecipe,
};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::projgeom::PointSet;
use crate::randomized::{
    cubic_92_construction_with, gv_construction, quadric_42_construction, CubicOptions, Prng,
};
use crate::verifier::{Verdict, Verifier, ViolationWitness, DEFAULT_BUDGET};

pub use format::{read_point_set, write_point_set, PointSetFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

#[derive(Parser, Debug)]
#[command(name = "rsset", version, about = "Construct, verify and bound (r,s)-sets in PG(n,q)")]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Worker threads for verification (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Cap on the number of subsets the verifier may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a point set and write it as JSON.
    Construct(ConstructArgs),
    /// Check a point set file against (r, s).
    Verify(VerifyArgs),
    /// List upper bounds for (r, s)-sets of PG(n, q).
    Bounds(BoundsArgs),
    /// Tabulate asymptotic bound exponents.
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Monomial,
    MonomialAffine,
    Rnc,
    Ovoid,
    Graph32,
    Gv,
    Quadrics,
    Cubics,
    Product,
}

impl Kind {
    fn name(&self) -> &'static str {
        match self {
            Kind::Monomial => "monomial",
            Kind::MonomialAffine => "monomial-affine",
            Kind::Rnc => "rnc",
            Kind::Ovoid => "ovoid",
            Kind::Graph32 => "graph32",
            Kind::Gv => "gv",
            Kind::Quadrics => "quadrics",
            Kind::Cubics => "cubics",
            Kind::Product => "product",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    /// Caps from elliptic quadrics.
    Caps,
    /// (3,2)-sets from rational normal curves of PG(4, q).
    RncPlanes,
    /// (3,2)-sets from the graph curve and rational normal curves.
    GraphRnc,
    /// (r, r-1)-sets from rational normal curves of PG(c, q).
    RncCaps,
}

#[derive(Args, Debug)]
pub struct FieldArgs {
    /// Field order; must be a prime power.
    #[arg(long, conflicts_with_all = ["p", "k"])]
    pub q: Option<u64>,
    /// Field characteristic, with --k.
    #[arg(long, requires = "k")]
    pub p: Option<u64>,
    /// Extension degree, with --p.
    #[arg(long, requires = "p")]
    pub k: Option<u32>,
}

impl FieldArgs {
    fn field(&self) -> Result<Option<FieldSpec>> {
        match (self.q, self.p, self.k) {
            (Some(q), _, _) => FieldSpec::with_order(q).map(Some),
            (None, Some(p), Some(k)) => FieldSpec::new(p, k).map(Some),
            _ => Ok(None),
        }
    }

    fn require(&self) -> Result<FieldSpec> {
        self.field()?
            .ok_or_else(|| Error::param("a field is required: pass --q or --p and --k"))
    }
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Projective dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Square root of the field order for graph32.
    #[arg(long)]
    pub q0: Option<u64>,
    /// Degree of the rational normal curve.
    #[arg(long)]
    pub c: Option<usize>,
    /// Number of quadrics, or number of product factors.
    #[arg(long)]
    pub m: Option<usize>,
    /// Point bound r, for gv and rnc-caps
    #[arg(long)]
    pub r: Option<usize>,
    /// Subspace dimension s, for gv
    #[arg(long)]
    pub s: Option<usize>,
    /// Seed for randomized kinds.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Product recipe.
    #[arg(long, value_enum)]
    pub recipe: Option<Recipe>,
    /// Keep cubics that vanish on a hyperplane.
    #[arg(long)]
    pub no_filter: bool,
    /// Skip verification of the result.
    #[arg(long)]
    pub no_verify: bool,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Defaults to the file's `r`.
    #[arg(long)]
    pub r: Option<usize>,
    /// Defaults to the file's `s`.
    #[arg(long)]
    pub s: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub smax: usize,
    #[arg(long)]
    pub gapmax: usize,
}

fn need<T>(v: Option<T>, flag: &str, kind: Kind) -> Result<T> {
    v.ok_or_else(|| Error::param(format!("{} needs --{flag}", kind.name())))
}

fn seeded(a: &ConstructArgs) -> Result<Prng> {
    need(a.seed, "seed", a.kind).map(Prng::new)
}

struct Built {
    set: PointSet,
    r: usize,
    s: usize,
}

fn build(a: &ConstructArgs) -> Result<Built> {
    let kind = a.kind;
    let (set, r, s) = match kind {
        Kind::Monomial | Kind::MonomialAffine => {
            let n = need(a.n, "n", kind)?;
            let f = a.field.require()?;
            let x = if kind == Kind::Monomial {
                monomial_curve(n, &f)?
            } else {
                monomial_curve_affine_variant(n, &f)?
            };
            (x, n, 1)
        }
        Kind::Rnc => {
            let c = need(a.c, "c", kind)?;
            (rational_normal_curve(c, &a.field.require()?)?, c, c - 1)
        }
        Kind::Ovoid => (elliptic_ovoid(&a.field.require()?), 2, 1),
        Kind::Graph32 => (graph_curve_32_square(need(a.q0, "q0", kind)?)?, 3, 2),
        Kind::Gv => {
            let (n, r, s) = (need(a.n, "n", kind)?, need(a.r, "r", kind)?, need(a.s, "s", kind)?);
            let f = a.field.require()?;
            (gv_construction(n, &f, r, s, &mut seeded(a)?)?, r, s)
        }
        Kind::Quadrics => {
            let m = need(a.m, "m", kind)?;
            let f = a.field.require()?;
            (quadric_42_construction(m, &f, &mut seeded(a)?)?, 4, 2)
        }
        Kind::Cubics => {
            let f = a.field.require()?;
            let opts = CubicOptions {
                reject_hyperplane_factors: !a.no_filter,
            };
            (cubic_92_construction_with(&f, opts, &mut seeded(a)?)?, 9, 2)
        }
        Kind::Product => {
            let m = need(a.m, "m", kind)?;
            let recipe = match need(a.recipe, "recipe", kind)? {
                Recipe::Caps => ProductRecipe::ovoid_caps(m),
                Recipe::RncPlanes => ProductRecipe::rnc_planes(m),
                Recipe::GraphRnc => ProductRecipe::graph_then_rnc(m),
                Recipe::RncCaps => {
                    let c = need(a.c, "c", kind)?;
                    ProductRecipe::rnc_generalized_caps(c, m, a.r.unwrap_or(c))
                }
            };
            let base = match (a.field.field()?, a.q0) {
                (Some(f), _) => f,
                (None, Some(q0)) => FieldSpec::with_order(q0.checked_mul(q0).ok_or_else(|| Error::Overflow("q0^2".into()))?)?,
                (None, None) => return Err(Error::param("product needs --q, --p/--k or --q0")),
            };
            let check = (!a.no_verify).then(Verifier::new);
            (recipe.build(&base, check.as_ref())?, recipe.r, recipe.s)
        }
    };
    Ok(Built { set, r, s })
}

fn construct(cli: &Cli, a: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let built = build(a)?;
    let verdict = if a.no_verify {
        "skipped"
    } else if Verifier::new()
        .with_budget(cli.budget)
        .is_rs_set(&built.set, built.r, built.s)?
        .is_valid()
    {
        "yes"
    } else {
        "no"
    };
    std::fs::write(&a.out, write_point_set(&built.set, Some(built.r), Some(built.s))?)?;
    let (name, n, q, size) = (a.kind.name(), built.set.n(), built.set.field().order(), built.set.len());
    match cli.format {
        OutputFormat::Text => writeln!(out, "{name} {n} {q} {size} {} {} {verdict}", built.r, built.s)?,
        OutputFormat::Json => writeln!(
            out,
            "{{\"kind\": \"{name}\", \"n\": {n}, \"q\": {q}, \"size\": {size}, \"r\": {}, \"s\": {}, \"verified\": \"{verdict}\"}}",
            built.r, built.s
        )?,
    }
    Ok(if verdict == "no" { EXIT_INVALID } else { EXIT_OK })
}

fn points_json(pts: &[crate::projgeom::ProjPoint]) -> String {
    serde_json::to_string(pts).expect("points serialize")
}

fn write_witness(w: &ViolationWitness, fmt: OutputFormat, out: &mut dyn Write) -> Result<()> {
    match fmt {
        OutputFormat::Text => {
            writeln!(out, "VIOLATED")?;
            writeln!(out, "span_dim {}", w.span_dim)?;
            writeln!(out, "generating_points {}", points_json(&w.generating_points))?;
            writeln!(out, "intersection_count {}", w.intersection.len())?;
            writeln!(out, "intersection {}", points_json(&w.intersection))?;
        }
        OutputFormat::Json => writeln!(
            out,
            "{{\"valid\": false, \"span_dim\": {}, \"generating_points\": {}, \"intersection_count\": {}, \"intersection\": {}}}",
            w.span_dim,
            points_json(&w.generating_points),
            w.intersection.len(),
            points_json(&w.intersection)
        )?,
    }
    Ok(())
}

fn verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(&a.file)?;
    let file = read_point_set(&text)?;
    let r = a.r.or(file.r).ok_or_else(|| Error::param("no r given and none recorded in the file"))?;
    let s = a.s.or(file.s).ok_or_else(|| Error::param("no s given and none recorded in the file"))?;
    match Verifier::new().with_budget(cli.budget).is_rs_set(&file.set, r, s)? {
        Verdict::Valid => {
            match cli.format {
                OutputFormat::Text => writeln!(out, "VALID")?,
                OutputFormat::Json => writeln!(out, "{{\"valid\": true}}")?,
            }
            Ok(EXIT_OK)
        }
        Verdict::Violated(w) => {
            write_witness(&w, cli.format, out)?;
            Ok(EXIT_INVALID)
        }
    }
}

fn value_json(v: &BoundValue) -> String {
    match v {
        BoundValue::Exact(x) => x.to_string(),
        BoundValue::Real(x) if x.is_finite() => format_real(*x),
        BoundValue::Real(_) => "null".into(),
    }
}

fn params_text(p: &[(&str, usize)]) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn string_json(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

pub fn render_bounds(rep: &BoundsReport, fmt: OutputFormat) -> String {
    let best = rep.best();
    let mut out = String::new();
    match fmt {
        OutputFormat::Text => {
            out.push_str(&format!("bounds for (r,s) = ({},{}) in PG({},{})\n", rep.r, rep.s, rep.n, rep.q));
            let width = rep.entries.iter().map(|e| e.label.len()).max().unwrap_or(0).max(5);
            out.push_str(&format!("{:<width$}  {:<22}  params\n", "label", "value"));
            for e in &rep.entries {
                let value = match &e.value {
                    Ok(v) => v.to_string(),
                    Err(a) => format!("absent ({a})"),
                };
                out.push_str(&format!("{:<width$}  {:<22}  {}", e.label, value, params_text(&e.params)).trim_end().to_string());
                out.push('\n');
            }
            out.push_str(&format!("best {} {}\n", best.label, rep.best_value()));
        }
        OutputFormat::Json => {
            let entries: Vec<String> = rep
                .entries
                .iter()
                .map(|e| {
                    let params: Vec<String> = e.params.iter().map(|(k, v)| format!("\"{k}\": {v}")).collect();
                    let (value, absent) = match &e.value {
                        Ok(v) => (value_json(v), "null".to_string()),
                        Err(a) => ("null".to_string(), string_json(&a.0)),
                    };
                    format!(
                        "{{\"label\": {}, \"provenance\": \"{}\", \"params\": {{{}}}, \"value\": {value}, \"absent\": {absent}}}",
                        string_json(&e.label),
                        e.provenance.as_str(),
                        params.join(", ")
                    )
                })
                .collect();
            out.push_str(&format!(
                "{{\"n\": {}, \"q\": {}, \"r\": {}, \"s\": {}, \"entries\": [{}], \"best\": {}, \"best_value\": {}}}\n",
                rep.n,
                rep.q,
                rep.r,
                rep.s,
                entries.join(", "),
                string_json(&best.label),
                value_json(rep.best_value())
            ));
        }
    }
    out
}

pub fn render_table(t: &ExponentTable, fmt: OutputFormat) -> String {
    let mut out = String::new();
    match fmt {
        OutputFormat::Text => {
            let cells: Vec<Vec<String>> = (1..=t.s_max)
                .map(|s| (1..=t.gap_max).map(|g| t.get(s, g).map(|c| c.exponent.to_string()).unwrap_or_default()).collect())
                .collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(6);
            out.push_str(&format!("exponents for n = {}\n", t.n));
            out.push_str(&format!("{:>4}", "s"));
            for g in 1..=t.gap_max {
                out.push_str(&format!("  {:>width$}", format!("r-s={g}")));
            }
            out.push('\n');
            for (i, row) in cells.iter().enumerate() {
                out.push_str(&format!("{:>4}", i + 1));
                for c in row {
                    out.push_str(&format!("  {c:>width$}"));
                }
                out.push('\n');
            }
        }
        OutputFormat::Json => {
            let cells: Vec<String> = t
                .cells
                .iter()
                .map(|c| {
                    format!(
                        "{{\"s\": {}, \"r\": {}, \"exponent\": \"{}\", \"source\": {}}}",
                        c.s,
                        c.r,
                        c.exponent,
                        string_json(&c.source)
                    )
                })
                .collect();
            out.push_str(&format!(
                "{{\"n\": {}, \"s_max\": {}, \"gap_max\": {}, \"cells\": [{}]}}\n",
                t.n,
                t.s_max,
                t.gap_max,
                cells.join(", ")
            ));
        }
    }
    out
}

/// Runs a parsed command, returning the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(threads) = cli.threads {
        // A pool can only be installed once; later calls keep the first.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match &cli.command {
        Command::Construct(a) => construct(cli, a, out),
        Command::Verify(a) => verify(cli, a, out),
        Command::Bounds(a) => {
            let rep = best_upper_bound(a.n, a.q, a.r, a.s)?;
            out.write_all(render_bounds(&rep, cli.format).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Table(a) => {
            let t = exponent_table(a.n, a.smax, a.gapmax)?;
            out.write_all(render_table(&t, cli.format).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `std::env::args`, runs, and reports errors on stderr.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

//! The `spinor` command line. The binary only forwards to [`run`], so every
//! subcommand can be exercised in-process.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bong::{GoodBong, UpsRule};
use crate::dyadic::{DyadicField, FieldSpec, DEFAULT_PRECISION};
use crate::error::{ArithError, LatticeError};
use crate::gmaps::gmap_report;
use crate::groups::{Alpha, ClassSubgroup};
use crate::io::{FieldContext, FieldDoc, IoError, LatticeDoc};
use crate::oracle::{crosscheck, crosscheck_all, generate_pairs, random_pairs};
use crate::relative::LatticePair;
use crate::SCHEMA;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "spinor", version, about = "Spinor norm groups of dyadic lattices given by good BONGs")]
pub struct Cli {
    /// Working 2-adic precision in bits.
    #[arg(long, global = true, env = "SPINOR_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A lattice or pair document: a path, `-` for stdin, or inline JSON.
#[derive(Args, Debug, Clone)]
pub struct LatticeArg {
    #[arg(long)]
    pub lattice: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Square classes, Hilbert symbols and defects of a field.
    FieldInfo {
        #[arg(long, default_value = "q2")]
        field: String,
    },
    /// Check the good-BONG conditions.
    Validate(LatticeArg),
    /// R, α, orders, determinant and properties A/B.
    Invariants(LatticeArg),
    /// θ(O⁺(L)).
    ThetaPlus {
        #[command(flatten)]
        input: LatticeArg,
        /// Recompute a property-A lattice by the refined ups rule.
        #[arg(long, value_enum)]
        refined: Option<RefinedRule>,
    },
    /// θ(X(M/N)) for a pair N ⊆ M.
    ThetaRel {
        #[arg(long)]
        pair: String,
        /// Include factors and the per-condition report.
        #[arg(long)]
        explain: bool,
        /// Also evaluate by reduction and compare.
        #[arg(long)]
        oracle: bool,
        /// Allow the reduction on pairs not produced by the generator.
        #[arg(long)]
        force: bool,
    },
    /// Decide whether two lattices are isometric.
    Isometric {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        other: String,
    },
    /// ĝ, ḡ and Ḡ at a point (a, R).
    Gmap {
        #[arg(long, default_value = "q2")]
        field: String,
        #[arg(long)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// Cross-check the closed form against the reduction on generated pairs.
    Selftest {
        #[arg(long, default_value = "q2")]
        field: String,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        /// Range of BONG orders, `lo..hi` inclusive.
        #[arg(long, default_value = "-2..3", allow_hyphen_values = true)]
        vals: String,
        /// Number of additional random pairs.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RefinedRule {
    EvenGaps,
    DropOddMaximum,
}

/// What a run printed and how it ended.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Precision(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        if e.is_precision() {
            Failure::Precision(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        IoError::from(e).into()
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A successful report: JSON body, text rendering, and whether it verified.
struct Report {
    body: Value,
    text: String,
    verified: bool,
}

impl Report {
    fn ok(body: Value, text: String) -> Self {
        Report { body, text, verified: true }
    }
}

/// Parse arguments and run one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: rendered, ..Default::default() }
            } else {
                Outcome { stderr: rendered, code, ..Default::default() }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut body = report.body;
                    body["schema"] = json!(SCHEMA);
                    format!("{}\n", serde_json::to_string_pretty(&body).expect("serializable"))
                }
                Format::Text => report.text,
            };
            Outcome { stdout, stderr: String::new(), code: if report.verified { EXIT_OK } else { EXIT_VERIFY } }
        }
        Err(f) => {
            let (kind, message, code) = match f {
                Failure::Usage(m) => ("usage", m, EXIT_USAGE),
                Failure::Input(m) => ("input", m, EXIT_USAGE),
                Failure::Precision(m) => ("precision", m, EXIT_PRECISION),
            };
            let err = json!({"schema": SCHEMA, "error": {"kind": kind, "message": message}});
            Outcome { stdout: String::new(), stderr: format!("{err}\n"), code }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let p = cli.precision;
    match &cli.command {
        Command::FieldInfo { field } => field_info(field, p),
        Command::Validate(arg) => validate(&arg.lattice, p),
        Command::Invariants(arg) => invariants(&read_doc(&arg.lattice)?.lattice(p)?),
        Command::ThetaPlus { input, refined } => theta_plus(&read_doc(&input.lattice)?.lattice(p)?, *refined),
        Command::ThetaRel { pair, explain, oracle, force } => {
            theta_rel(&read_doc(pair)?.pair(p)?, *explain, *oracle, *force)
        }
        Command::Isometric { lattice, other } => {
            let a = read_doc(lattice)?.lattice(p)?;
            let b = read_doc(other)?.lattice(p)?;
            if a.model() != b.model() {
                return Err(LatticeError::ModelMismatch.into());
            }
            let report = a.isometry_report(&b)?;
            let iso = report.isometric();
            let text = format!("{a} {} {b}\n", if iso { "≅" } else { "≇" });
            Ok(Report::ok(json!({"isometric": iso, "report": report}), text))
        }
        Command::Gmap { field, a, r } => gmap(field, a, r, p),
        Command::Selftest { field, rank, vals, count, seed, depth } => {
            selftest(field, *rank, vals, *count, *seed, *depth, p)
        }
    }
}

fn read_doc(src: &str) -> Result<LatticeDoc, Failure> {
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else if src == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::Input(format!("{src}: {e}")))?
    };
    Ok(LatticeDoc::parse(&text)?)
}

fn field_context(field: &str, precision: u32) -> Result<FieldContext, Failure> {
    let spec = FieldSpec::parse(field).map_err(|e| Failure::Usage(e.to_string()))?.with_precision(precision);
    Ok(FieldContext::from_spec(&spec)?)
}

fn field_info(field: &str, precision: u32) -> Result<Report, Failure> {
    let ctx = field_context(field, precision)?;
    let f: &DyadicField = ctx.field.as_ref().expect("built from a spec");
    let m = &*ctx.model;
    let mut rows = Vec::new();
    let mut text = format!(
        "{}  e = {}  |F*/F*²| = {}  Δ = {}  precision = {precision}\n",
        m.name(),
        m.e(),
        m.classes().count(),
        m.label(m.delta())
    );
    let _ = writeln!(text, "π = {}  -1 = {}", m.label(m.pi()), m.label(m.minus_one()));
    text.push_str("class  representative  ord  d     Hilbert row\n");
    for c in m.classes() {
        let (a, b) = f.representative(c);
        let rep = f.ring().format_pair(a, b);
        let row: String = m.classes().map(|x| if m.hilbert(c, x) == 1 { '+' } else { '-' }).collect();
        let _ = writeln!(text, "{:<6} {:<15} {:<4} {:<5} {row}", m.label(c), rep, m.ord_parity(c), m.d(c).to_string());
        rows.push(json!({"class": m.label(c), "representative": rep, "ordParity": m.ord_parity(c)}));
    }
    let body = json!({
        "field": FieldDoc::from_kind(f.ring().kind()),
        "precision": precision,
        "classes": rows,
        "model": m.to_dump(),
    });
    Ok(Report::ok(body, text))
}

fn validate(src: &str, precision: u32) -> Result<Report, Failure> {
    let doc = read_doc(src)?;
    match doc.lattice(precision) {
        Ok(l) => Ok(Report::ok(json!({"valid": true, "lattice": l.to_string()}), format!("valid: {l}\n"))),
        Err(IoError::Lattice { source: LatticeError::BadBong { index, condition }, .. }) => Ok(Report {
            body: json!({"valid": false, "index": index, "condition": condition.to_string()}),
            text: format!("invalid at index {index}: {condition}\n"),
            verified: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn invariants(l: &GoodBong) -> Result<Report, Failure> {
    let inv = l.invariants();
    let alphas: Vec<String> = inv.alpha.iter().map(|a| a.to_string()).collect();
    let text = format!(
        "{l}\nR = {:?}\nα = [{}]\nnL = π^{}  sL = π^{}  vL = π^{}  det = {}\nproperty A: {}  property B: {}\n",
        inv.r,
        alphas.join(", "),
        inv.norm_order,
        inv.scale_order,
        inv.vol_order,
        inv.det,
        inv.prop_a,
        inv.prop_b
    );
    Ok(Report::ok(json!({"lattice": l.to_string(), "invariants": inv}), text))
}

/// Group name with N(c) written as N(-k) when −k is the shorter integer label.
fn group_text(g: ClassSubgroup, l: &GoodBong) -> String {
    let m = l.model();
    let mut name = g.name(m);
    for c in m.classes() {
        let (Ok(own), Ok(k)) = (m.label(c).parse::<i64>(), m.label(m.neg(c)).parse::<i64>()) else { continue };
        if 2 * k < own {
            name = name.replace(&format!("N({own})"), &format!("N(-{k})"));
        }
    }
    format!("{name}, index {}", g.index_in_full())
}

fn theta_plus(l: &GoodBong, refined: Option<RefinedRule>) -> Result<Report, Failure> {
    let md = l.model();
    let g = l.theta_plus();
    let mut body = json!({"lattice": l.to_string(), "theta": g.render(md), "unitsCriterion": l.units_criterion()});
    let mut text = format!("{}\n", group_text(g, l));
    if let Some(rule) = refined {
        let rule = match rule {
            RefinedRule::EvenGaps => UpsRule::EvenGaps,
            RefinedRule::DropOddMaximum => UpsRule::DropOddMaximum,
        };
        let r = l.theta_plus_refined(rule)?;
        body["refined"] = json!(r.render(md));
        body["refinedAgrees"] = json!(r == g);
        let _ = writeln!(text, "refined: {}", group_text(r, l));
    }
    Ok(Report::ok(body, text))
}

fn theta_rel(p: &LatticePair, explain: bool, oracle: bool, force: bool) -> Result<Report, Failure> {
    if oracle && !force {
        return Err(Failure::Usage(
            "the reduction is only certified on generated pairs; pass --force to run it on this input".into(),
        ));
    }
    let md = p.model();
    let v = p.theta_x();
    let mut body = json!({
        "M": p.outer().to_string(),
        "N": p.inner().to_string(),
        "theta": v.group.render(md),
        "branch": v.branch,
    });
    let mut text = format!("{}\n", group_text(v.group, p.outer()));
    if explain {
        body["invariants"] = json!(p.invariants());
        body["factors"] = json!(v.factors);
        body["conditions"] = json!(v.conditions);
        let _ = writeln!(text, "branch: {}", json!(v.branch).as_str().unwrap_or_default());
        for f in &v.factors {
            let _ = writeln!(text, "  Ḡ({}, {}) = {}", f.class, f.weight, f.group.name);
        }
    }
    let mut verified = true;
    if oracle {
        let c = crosscheck(p);
        verified = c.agree;
        let _ = writeln!(
            text,
            "oracle: {}",
            match &c.oracle {
                Ok(g) => format!("{g} ({})", if c.agree { "agrees" } else { "DISAGREES" }),
                Err(e) => format!("error: {e}"),
            }
        );
        body["oracle"] = json!(c);
    }
    Ok(Report { body, text, verified })
}

fn gmap(field: &str, a: &str, r: &str, precision: u32) -> Result<Report, Failure> {
    let ctx = field_context(field, precision)?;
    let m = &*ctx.model;
    let class = match m.class_by_label(a) {
        Some(c) => c,
        None => ctx.field.as_ref().expect("built from a spec").parse_class(a)?.0,
    };
    let r = Alpha::parse(r).ok_or_else(|| Failure::Usage(format!("cannot parse R = `{r}`")))?;
    let rep = gmap_report(m, class, r);
    let text = format!(
        "a = {}  R = {}  α = {}  f(R) = {}\nĝ = {}\nḡ = {}\nḠ = {}\n",
        rep.a, rep.r, rep.alpha, rep.f_r, rep.g_hat.name, rep.g_bar.name, rep.big_g_bar.name
    );
    Ok(Report::ok(json!(rep), text))
}

fn parse_range(vals: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("--vals expects lo..hi, got `{vals}`"));
    let (lo, hi) = vals.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn selftest(
    field: &str,
    rank: usize,
    vals: &str,
    count: usize,
    seed: u64,
    depth: usize,
    precision: u32,
) -> Result<Report, Failure> {
    let (lo, hi) = parse_range(vals)?;
    if rank == 0 || rank > 6 {
        return Err(Failure::Usage("--rank must be between 1 and 6".into()));
    }
    let ctx = field_context(field, precision)?;
    let start = Instant::now();
    let pairs = generate_pairs(&ctx.model, rank, lo, hi, depth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = random_pairs(&ctx.model, count, &mut rng);
    let bad_exhaustive = crosscheck_all(&pairs);
    let bad_random = crosscheck_all(&random);
    let self_pairs = pairs.iter().filter(|p| p.outer() == p.inner()).count();
    let self_bad = pairs.iter().filter(|p| p.outer() == p.inner() && p.theta_x().group != p.outer().theta_plus()).count();
    let verified = bad_exhaustive.is_empty() && bad_random.is_empty() && self_bad == 0;
    let text = format!(
        "pairs: {}, mismatches: {}\nexhaustive: {} pairs, {} disagreements\nrandom: {} pairs, {} disagreements\nself pairs: {self_pairs}, {self_bad} disagreements\n{} in {:.1}s\n",
        pairs.len() + random.len(),
        bad_exhaustive.len() + bad_random.len(),
        pairs.len(),
        bad_exhaustive.len(),
        random.len(),
        bad_random.len(),
        if verified { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    let sample: Vec<_> = bad_exhaustive.iter().chain(&bad_random).take(5).collect();
    let body = json!({
        "field": ctx.model.name(),
        "rank": rank,
        "vals": [lo, hi],
        "depth": depth,
        "seed": seed,
        "exhaustive": {"pairs": pairs.len(), "disagreements": bad_exhaustive.len()},
        "random": {"pairs": random.len(), "disagreements": bad_random.len()},
        "selfPairs": {"pairs": self_pairs, "disagreements": self_bad},
        "failures": sample,
        "passed": verified,
    });
    Ok(Report { body, text, verified })
}

//! Command-line frontend. `run` parses arguments, dispatches, and returns the
//! exit code together with what should be printed.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::autgroups::{GroupElement, GroupKind, QuasiStrictAutGA, StrictAutGa, StrictAutHn, ga2_vars};
use crate::error::{Error, Result};
use crate::fgl::{build_honda, honda_cached, set_cache_dir, verify_honda};
use crate::fiberprod::{corep_order, corepresentability_check, kappa_star, pushout, pushout_universal_property, Functor};
use crate::galgebra::{is_prime, parse_presentation, AlgebraPresentation, CoeffRing};
use crate::hopf::{convolution_points, derive_coproduct, verify_hopf_axioms, Builder, HopfPresentation, ProductOrder};
use crate::report::{Check, Report};
use crate::series::{even_vars, SeriesTuple, TruncatedSeries, VariableSpec};
use crate::suite::{run_suite, test_algebra_texts, SuiteConfig};

pub const CACHE_ENV: &str = "MORAVA_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "morava", version, about = "Honda formal group laws, their automorphism groups and the Hopf algebras corepresenting them")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory for cached Honda laws.
    #[arg(long, env = CACHE_ENV, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Seed for randomized property checks.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    /// Leave the timing field out of JSON output.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Base {
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build (or load) the Honda law and verify it.
    Honda {
        #[command(flatten)]
        base: Base,
        /// Truncation: the law is computed modulo (x, y)^N.
        #[arg(long = "N", short = 'N')]
        order: u32,
        /// Rebuild from the logarithm and include the checks made on the integral lift.
        #[arg(long)]
        lift: bool,
    },
    /// Arithmetic on truncated power series.
    Series {
        #[command(flatten)]
        base: Base,
        #[arg(long = "N", short = 'N', default_value_t = 10)]
        order: u32,
        /// Comma-separated variables; suffix `:odd` for an odd one.
        #[arg(long, default_value = "x")]
        vars: String,
        /// Coefficient algebra: a presentation file or a built-in name.
        #[arg(long = "R")]
        r: Option<String>,
        #[arg(value_enum)]
        action: SeriesAction,
        exprs: Vec<String>,
    },
    /// Automorphism groups: validate, compose, invert.
    Aut {
        #[command(flatten)]
        base: Base,
        /// hn, ga or GA.
        #[arg(long)]
        group: String,
        /// Truncation; defaults to the order that decides membership
        /// (p^{n+window}+1 for hn, p^n otherwise).
        #[arg(long = "N", short = 'N')]
        order: Option<u32>,
        #[arg(long)]
        window: Option<u32>,
        #[arg(long = "R")]
        r: Option<String>,
        #[arg(value_enum)]
        action: AutAction,
        /// Series in x (for GA: "f1 ; f2" in e, x).
        exprs: Vec<String>,
    },
    /// Hopf algebras: print, verify, derive, antipode, points.
    Hopf {
        #[command(flatten)]
        base: Base,
        /// sigma, A, B, C or KK.
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 2)]
        window: u32,
        #[arg(long)]
        deg_bound: Option<i64>,
        #[arg(long = "R")]
        r: Option<String>,
        /// Exponent cap for free generators of R during enumeration.
        #[arg(long, default_value_t = 4)]
        bound: u32,
        #[arg(value_enum)]
        action: HopfAction,
    },
    /// The fiber product: pushout, corepresentability, κ.
    Fiber {
        #[command(flatten)]
        base: Base,
        #[arg(long, default_value_t = 2)]
        window: u32,
        #[arg(long, default_value = "C")]
        functor: String,
        #[arg(long = "R")]
        r: Option<String>,
        #[arg(long, default_value = "-100:0")]
        band: String,
        #[arg(long, default_value_t = 4)]
        bound: u32,
        #[arg(value_enum)]
        action: FiberAction,
    },
    /// The acceptance matrix at (p, n).
    Suite {
        #[command(flatten)]
        base: Base,
        /// Random cases per property.
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesAction {
    Show,
    Add,
    Mul,
    Compose,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AutAction {
    Validate,
    Compose,
    Invert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HopfAction {
    Print,
    Verify,
    Derive,
    Antipode,
    Points,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FiberAction {
    Pushout,
    Corep,
    Kappa,
}

/// Parse `argv` (including the program name) and run. Returns the exit code
/// (0 iff no check failed, 1 on failures, 2 on errors) and the text for stdout.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    set_cache_dir(cli.global.cache_dir.clone());
    match execute(&cli) {
        Ok(report) => {
            let code = if report.ok() { 0 } else { 1 };
            (code, render(&report, &cli.global))
        }
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn render(report: &Report, g: &Global) -> String {
    match g.format {
        Format::Json if g.no_timing => report.to_json_stable() + "\n",
        Format::Json => report.to_json() + "\n",
        Format::Text => {
            let mut s = report.to_text();
            if let Some(out) = &report.output {
                s.push_str(&text_output(out));
            }
            s
        }
    }
}

/// Flatten the `output` value for humans: strings as-is, the rest as JSON.
fn text_output(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(m) = v {
        for (k, x) in m {
            match x {
                Value::String(t) => s.push_str(&format!("{k}: {t}\n")),
                other => s.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    s
}

fn check_base(b: &Base) -> Result<()> {
    if b.p < 3 || !is_prime(b.p) {
        return Err(Error::Config(format!("p must be an odd prime (got {})", b.p)));
    }
    if b.n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    Ok(())
}

/// A presentation file, or one of the built-in test algebras by name: `K`,
/// `dual(-1)`, and `dual(d)`, `trunc(d,3)` with `d = 2-2p` (`dual(-4)` at p = 3).
pub fn resolve_algebra(source: Option<&str>, p: u32, n: u32) -> Result<Arc<AlgebraPresentation>> {
    let text = match source {
        None => format!("prime {p}\nheight {n}\nname K({n})_*\n"),
        Some(s) if Path::new(s).exists() => std::fs::read_to_string(s)?,
        Some(s) => {
            let builtins = test_algebra_texts(p, n);
            let hit = builtins.iter().find(|(name, _)| name == s || (s.eq_ignore_ascii_case("k") && name.starts_with("K(")));
            match hit {
                Some((_, t)) => t.clone(),
                None => {
                    let names: Vec<_> = builtins.iter().map(|(n, _)| n.as_str()).collect();
                    return Err(Error::Config(format!("`{s}` is neither a file nor a built-in algebra ({})", names.join(", "))));
                }
            }
        }
    };
    let a = parse_presentation(&text)?;
    if a.p() != p || a.height() != n || a.ring() != CoeffRing::Kn {
        return Err(Error::Config(format!("algebra is over p={} n={} ({}), expected K({n})_* at p={p}", a.p(), a.height(), a.ring().name())));
    }
    Ok(Arc::new(a))
}

fn parse_vars(s: &str) -> Result<Arc<[VariableSpec]>> {
    let vars: Vec<VariableSpec> = s
        .split(',')
        .map(|v| v.trim())
        .filter(|v| !v.is_empty())
        .map(|v| match v.strip_suffix(":odd") {
            Some(name) => VariableSpec::odd(name),
            None => VariableSpec::even(v),
        })
        .collect();
    if vars.is_empty() {
        return Err(Error::Config("no variables".into()));
    }
    Ok(vars.into())
}

fn parse_band(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Config(format!("band `{s}` is not lo:hi")))?;
    let lo = a.trim().parse().map_err(|_| Error::Config(format!("bad band start `{a}`")))?;
    let hi = b.trim().parse().map_err(|_| Error::Config(format!("bad band end `{b}`")))?;
    if lo > hi {
        return Err(Error::Config(format!("empty band {lo}:{hi}")));
    }
    Ok((lo, hi))
}

fn execute(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let t0 = Instant::now();
    let mut report = match &cli.command {
        Command::Honda { base, order, lift } => cmd_honda(g, base, *order, *lift)?,
        Command::Series { base, order, vars, r, action, exprs } => cmd_series(g, base, *order, vars, r.as_deref(), *action, exprs)?,
        Command::Aut { base, group, order, window, r, action, exprs } => cmd_aut(g, base, group, *order, *window, r.as_deref(), *action, exprs)?,
        Command::Hopf { base, which, window, deg_bound, r, bound, action } => cmd_hopf(g, base, which, *window, *deg_bound, r.as_deref(), *bound, *action)?,
        Command::Fiber { base, window, functor, r, band, bound, action } => cmd_fiber(g, base, *window, functor, r.as_deref(), band, *bound, *action)?,
        Command::Suite { base, cases, bound } => {
            check_base(base)?;
            let mut rep = Report::new("suite", json!({"p": base.p, "n": base.n, "seed": g.seed, "cases": cases, "bound": bound}));
            let cfg = SuiteConfig { p: base.p, n: base.n, seed: g.seed, cases: *cases, bound: *bound };
            let checks = rep.timed("suite", || run_suite(&cfg))?;
            rep.extend(checks);
            let passed = rep.checks.iter().filter(|c| c.passed()).count();
            rep.output = Some(json!({"passed": passed, "total": rep.checks.len()}));
            rep
        }
    };
    report.timing.insert("total".into(), t0.elapsed().as_secs_f64());
    Ok(report)
}

fn config(base: &Base, g: &Global, extra: Value) -> Value {
    let mut v = json!({"p": base.p, "n": base.n, "seed": g.seed});
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn cmd_honda(g: &Global, base: &Base, order: u32, lift: bool) -> Result<Report> {
    check_base(base)?;
    if order < 2 {
        return Err(Error::Config("N must be at least 2".into()));
    }
    let mut rep = Report::new("honda", config(base, g, json!({"N": order, "lift": lift})));
    let h = if lift {
        let h = rep.timed("build", || build_honda(base.p, base.n, order))?;
        rep.extend(h.lift_checks.clone());
        Arc::new(h)
    } else {
        let (h, from_disk) = rep.timed("build", || honda_cached(base.p, base.n, order, g.cache_dir.as_deref()))?;
        if from_disk {
            eprintln!("loaded from cache");
        }
        h
    };
    let checks = rep.timed("verify", || verify_honda(&h));
    rep.extend(checks);
    rep.output = Some(json!({"model": h.fgl.model(), "fgl": h.fgl.series().render(), "terms": h.fgl.series().to_json()}));
    Ok(rep)
}

fn cmd_series(g: &Global, base: &Base, order: u32, vars: &str, r: Option<&str>, action: SeriesAction, exprs: &[String]) -> Result<Report> {
    check_base(base)?;
    let alg = resolve_algebra(r, base.p, base.n)?;
    let vars = parse_vars(vars)?;
    let mut rep = Report::new("series", config(base, g, json!({"N": order, "R": alg.label(), "action": format!("{action:?}").to_lowercase(), "exprs": exprs})));
    let parse = |s: &str| TruncatedSeries::parse(s, vars.clone(), order, alg.clone(), None);
    let need = |k: usize| -> Result<()> {
        if exprs.len() < k {
            return Err(Error::Config(format!("{action:?} needs {k} series")));
        }
        Ok(())
    };
    let out = match action {
        SeriesAction::Show => {
            need(1)?;
            parse(&exprs[0])?
        }
        SeriesAction::Add | SeriesAction::Mul => {
            need(2)?;
            let (a, b) = (parse(&exprs[0])?, parse(&exprs[1])?);
            if action == SeriesAction::Add {
                a.add(&b)?
            } else {
                a.mul(&b)?
            }
        }
        SeriesAction::Compose => {
            need(1 + vars.len())?;
            let f = parse(&exprs[0])?;
            let subs = exprs[1..=vars.len()].iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
            f.compose(&subs)?
        }
        SeriesAction::Inverse => {
            need(1)?;
            parse(&exprs[0])?.inverse()?
        }
    };
    rep.push(Check::from_result("homogeneous", &out.check_homogeneous()));
    rep.output = Some(json!({"series": out.render(), "terms": out.to_json()}));
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn cmd_aut(g: &Global, base: &Base, group: &str, order: Option<u32>, window: Option<u32>, r: Option<&str>, action: AutAction, exprs: &[String]) -> Result<Report> {
    check_base(base)?;
    let kind: GroupKind = group.parse()?;
    let alg = resolve_algebra(r, base.p, base.n)?;
    let (p, n) = (base.p, base.n);
    let pn = p.pow(n);
    let window = window.unwrap_or(1);
    // membership in the window is decided modulo x^{p^{n+m}+1}
    let full = match kind {
        GroupKind::Hn => corep_order(p, n, window),
        _ => pn,
    };
    let order = order.unwrap_or(full);
    let mut rep = Report::new("aut", config(base, g, json!({"group": group, "N": order, "window": window, "R": alg.label(), "action": format!("{action:?}").to_lowercase(), "exprs": exprs})));
    if order < full {
        rep.push(Check::skipped("relations of the window", format!("only checked modulo x^{order}; they are decided modulo x^{full}")));
    }
    let need = exprs.len() < if action == AutAction::Compose { 2 } else { 1 };
    if need {
        return Err(Error::Config(format!("{action:?} needs more series")));
    }
    let x = even_vars(&["x"]);
    let output = match kind {
        GroupKind::Hn => {
            let law = Arc::new(crate::fgl::honda(p, n, order)?.fgl.base_change(alg.clone())?);
            let parse = |s: &str| TruncatedSeries::parse(s, x.clone(), order, alg.clone(), None);
            let val = |f: &TruncatedSeries| StrictAutHn::validate(law.clone(), f, window);
            aut_action(&mut rep, action, exprs, parse, val, |f| (f.to_json(), f.realize().map(|s| s.render())))?
        }
        GroupKind::Ga => {
            let parse = |s: &str| TruncatedSeries::parse(s, x.clone(), order.max(pn), alg.clone(), None);
            let val = |f: &TruncatedSeries| StrictAutGa::validate(alg.clone(), f);
            aut_action(&mut rep, action, exprs, parse, val, |f| (f.to_json(), f.realize().map(|s| s.render())))?
        }
        GroupKind::GA => {
            let vars = ga2_vars();
            let parse = |s: &str| {
                let (a, b) = s.split_once(';').ok_or_else(|| Error::Config("GA series are given as \"f1 ; f2\"".into()))?;
                let s1 = TruncatedSeries::parse(a, vars.clone(), order.max(pn), alg.clone(), Some(1))?;
                let s2 = TruncatedSeries::parse(b, vars.clone(), order.max(pn), alg.clone(), Some(2))?;
                SeriesTuple::new(s1, s2)
            };
            let val = |f: &SeriesTuple| QuasiStrictAutGA::validate(alg.clone(), f, false);
            aut_action(&mut rep, action, exprs, parse, val, |f| (f.to_json(), f.realize().map(|s| format!("{} ; {}", s.s1.render(), s.s2.render()))))?
        }
    };
    rep.output = Some(output);
    Ok(rep)
}

fn aut_action<S, T: GroupElement>(
    rep: &mut Report,
    action: AutAction,
    exprs: &[String],
    parse: impl Fn(&str) -> Result<S>,
    validate: impl Fn(&S) -> Result<T>,
    show: impl Fn(&T) -> (Value, Result<String>),
) -> Result<Value> {
    let parsed = exprs.iter().map(|e| parse(e)).collect::<Result<Vec<_>>>()?;
    let first = validate(&parsed[0]);
    rep.push(Check::from_result("first series is a group element", &first));
    let Ok(f) = first else {
        return Ok(json!({}));
    };
    let out = match action {
        AutAction::Validate => f,
        AutAction::Invert => {
            let i = f.invert()?;
            rep.push(Check::from_witness("f·f⁻¹ = 1", (f.compose(&i)? != f.identity_like()).then(|| "not an inverse".to_string())));
            i
        }
        AutAction::Compose => {
            let second = validate(&parsed[1]);
            rep.push(Check::from_result("second series is a group element", &second));
            let Ok(h) = second else {
                return Ok(json!({}));
            };
            f.compose(&h)?
        }
    };
    let (coeffs, series) = show(&out);
    Ok(json!({"result": coeffs, "series": series?}))
}

#[allow(clippy::too_many_arguments)]
fn cmd_hopf(g: &Global, base: &Base, which: &str, window: u32, deg_bound: Option<i64>, r: Option<&str>, bound: u32, action: HopfAction) -> Result<Report> {
    check_base(base)?;
    let b: Builder = which.parse()?;
    let h = HopfPresentation::build(b, base.p, base.n, window)?;
    let db = deg_bound.unwrap_or_else(|| h.default_degree_bound());
    let mut cfg = json!({"which": b.name(), "window": h.window(), "deg_bound": db, "action": format!("{action:?}").to_lowercase()});
    if action == HopfAction::Points {
        cfg["R"] = json!(r.unwrap_or("K"));
        cfg["bound"] = json!(bound);
    }
    let mut rep = Report::new("hopf", config(base, g, cfg));
    match action {
        HopfAction::Print => rep.output = Some(h.to_json()),
        HopfAction::Verify => {
            let cs = rep.timed("verify", || verify_hopf_axioms(&h, db))?;
            rep.extend(cs);
        }
        HopfAction::Derive => {
            let (_, cs) = rep.timed("derive", || derive_coproduct(&h, ProductOrder::default_for(b)))?;
            rep.extend(cs);
            rep.output = Some(h.to_json());
        }
        HopfAction::Antipode => {
            let c = h.antipode_images()?;
            let a = h.alg();
            let cs = rep.timed("verify", || verify_hopf_axioms(&h, db))?;
            rep.extend(cs.into_iter().filter(|c| c.name.starts_with("antipode")));
            rep.output = Some(json!({"antipode": a.generators().iter().zip(&c).map(|(gen, x)| json!({"generator": gen.name, "image": a.render(x)})).collect::<Vec<_>>()}));
        }
        HopfAction::Points => {
            let ra = resolve_algebra(r, base.p, base.n)?;
            let (pg, cs) = rep.timed("points", || convolution_points(&h, &ra, bound))?;
            rep.extend(cs);
            let points: Vec<Vec<String>> = pg.homs.iter().map(|x| x.images().iter().map(|y| ra.render(y)).collect()).collect();
            rep.output = Some(json!({
                "order": pg.order(),
                "abelian": pg.is_abelian(),
                "cyclic": pg.is_cyclic(),
                "order_profile": pg.order_profile(),
                "points": points,
            }));
        }
    }
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fiber(g: &Global, base: &Base, window: u32, functor: &str, r: Option<&str>, band: &str, bound: u32, action: FiberAction) -> Result<Report> {
    check_base(base)?;
    let (p, n) = (base.p, base.n);
    match action {
        FiberAction::Pushout => {
            let ra = resolve_algebra(r, p, n)?;
            let mut rep = Report::new("fiber pushout", config(base, g, json!({"window": window, "R": ra.label(), "bound": bound})));
            let po = rep.timed("pushout", || pushout(p, n, window))?;
            rep.extend(po.checks.clone());
            let ax = verify_hopf_axioms(&po.hopf, po.hopf.default_degree_bound())?;
            rep.extend(ax);
            let up = rep.timed("universal property", || pushout_universal_property(&po, &ra, bound))?;
            rep.push(up);
            rep.output = Some(po.hopf.to_json());
            Ok(rep)
        }
        FiberAction::Corep => {
            let f: Functor = functor.parse()?;
            let ra = resolve_algebra(r, p, n)?;
            let mut rep = Report::new("fiber corep", config(base, g, json!({"functor": f.name(), "window": window, "R": ra.label(), "bound": bound})));
            let c = rep.timed("corep", || corepresentability_check(f, p, n, window, &ra, bound))?;
            rep.extend(c.checks.clone());
            let mut out = c.to_json();
            out["elements"] = Value::Array(c.values.iter().map(|v| v.to_json()).collect());
            rep.output = Some(out);
            Ok(rep)
        }
        FiberAction::Kappa => {
            let band = parse_band(band)?;
            let mut rep = Report::new("fiber kappa", config(base, g, json!({"window": window, "band": [band.0, band.1]})));
            let k = rep.timed("kappa", || kappa_star(p, n, window, band))?;
            rep.extend(k.checks.clone());
            rep.output = Some(k.to_json());
            Ok(rep)
        }
    }
}

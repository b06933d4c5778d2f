use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::{json, Map, Value};

use projperm::acceptance::{self, Grid};
use projperm::hirschfeld::{
    counts, enumerate_distinct_psi_tables, enumerate_subprimitive_roots, hirschfeld_map,
    list_subprimitive, SubprimitiveRoot,
};
use projperm::permpoly::{
    build_from_bijection, construct_prop312, construct_thm310, construct_thm36, construct_thm37,
    index_decompose, interpolate_univariate, verify_agw, verify_homogeneous, verify_permutation,
    verify_permutation_on, Domain, PiecewisePermutation, Thm37Params,
};
use projperm::projective::{enumerate_pg, PgMap};
use projperm::wire;
use projperm::{Elem, Error, FieldCtx, FieldSpec, GmtContext, UniPoly};

const DEFAULT_MAX_FIELD: u64 = 1 << 16;
const MAX_FIELD_ENV: &str = "PROJPERM_MAX_FIELD";

#[derive(Parser)]
#[command(name = "projperm", version, about = "Möbius transformations of projective space and homogeneous permutation polynomials")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    /// Criterion on the roots of unity only.
    Fast,
    /// Every verifier over the whole field.
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Any projective bijection (`--pg-map`).
    Generic,
    #[value(alias = "class-preserving")]
    Thm36,
    #[value(alias = "quadratic")]
    Thm37,
    #[value(alias = "parity-twist")]
    Thm310,
    #[value(alias = "three-set-swap")]
    Prop312,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Small,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a field tower, optionally with element details.
    Field {
        #[arg(long)]
        field: String,
        /// Element as packed index, `g^k`, or nested coefficient JSON.
        #[arg(long)]
        elem: Vec<String>,
    },
    /// Moore data, dual basis, projective polynomials and psi for a basis.
    Gmt {
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "poly")]
        basis_w: String,
        /// Include the table of psi on every point.
        #[arg(long)]
        psi: bool,
        /// Include the partition report.
        #[arg(long)]
        partitions: bool,
    },
    /// Build a permutation from one of the families and verify it.
    Construct(Box<ConstructArgs>),
    /// Verify a permutation given as JSON (a file path or `-` for stdin).
    Verify {
        input: String,
        #[arg(long, value_enum, default_value_t = Level::Exhaustive)]
        level: Level,
    },
    /// Interpolate a permutation given as JSON, or one of its branches.
    Interpolate {
        input: String,
        #[arg(long)]
        branch: Option<usize>,
        /// Also give coefficients as powers of the fixed generator.
        #[arg(long)]
        logs: bool,
    },
    /// Number of Möbius transformations (M) and subprimitive roots (H).
    Count {
        #[arg(long)]
        field: String,
        /// Cross-check both counts by enumeration (small fields only).
        #[arg(long)]
        enumerate: bool,
    },
    /// Subprimitive polynomials and their orbit maps.
    Hirschfeld {
        #[arg(long)]
        field: String,
        /// Include each orbit map table.
        #[arg(long)]
        tables: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, value_enum, default_value_t = GridArg::Small)]
        grid: GridArg,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    field: String,
    /// Basis W: element list JSON, `std`, `poly`, `normal` or `random:<seed>`.
    #[arg(long, default_value = "poly")]
    basis_w: String,
    /// Basis Y; defaults to W.
    #[arg(long)]
    basis_y: Option<String>,
    #[arg(long, default_value_t = 1)]
    r: u64,
    /// Polynomial H_j (repeat for j = 1..n-1) or H for the quadratic family.
    #[arg(long)]
    h: Vec<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    w: Option<String>,
    /// Seed for sampling quadratic-family parameters when none are given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, default_value_t = 1)]
    d: u64,
    /// Projective bijection for the generic family: JSON file, or `identity`.
    #[arg(long, default_value = "identity")]
    pg_map: String,
    #[arg(long, value_enum, default_value_t = Level::Exhaustive)]
    level: Level,
    /// Give coefficients as powers of the fixed generator as well.
    #[arg(long)]
    logs: bool,
}

enum Failure {
    Usage(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Value, Failure>;

fn max_field() -> Result<u64, Failure> {
    match std::env::var(MAX_FIELD_ENV) {
        Ok(s) => s.parse().map_err(|_| Failure::Usage(format!("{MAX_FIELD_ENV} must be an integer"))),
        Err(_) => Ok(DEFAULT_MAX_FIELD),
    }
}

fn build_field(spec: &str) -> Result<Arc<FieldCtx>, Failure> {
    let spec: FieldSpec = spec.parse()?;
    let limit = max_field()?;
    Ok(Arc::new(spec.build_with_limit(limit)?))
}

fn check_size(ctx: &FieldCtx) -> Result<(), Failure> {
    let limit = max_field()?;
    if ctx.order() as u64 > limit {
        return Err(Error::FieldTooLarge { order: ctx.order() as u64, limit }.into());
    }
    Ok(())
}

fn read_input(path: &str) -> Result<Value, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn cmd_field(spec: &str, elems: &[String]) -> CmdResult {
    let ctx = build_field(spec)?;
    let mut out = json!({
        "field": wire::field_to_json(&ctx),
        "p": ctx.p(),
        "m": ctx.m(),
        "n": ctx.n(),
        "q": ctx.q(),
        "order": ctx.order(),
        "conway": ctx.is_conway(),
        "generator": wire::elem_to_json(&ctx, ctx.generator()),
        "generator_text": ctx.render(ctx.generator()),
    });
    if !elems.is_empty() {
        let details = elems
            .iter()
            .map(|s| {
                let x = wire::parse_elem_str(&ctx, s)?;
                let mut d = json!({
                    "elem": wire::elem_to_json(&ctx, x),
                    "text": ctx.render(x),
                    "trace": wire::elem_to_json(&ctx, ctx.trace(x)),
                    "norm": wire::elem_to_json(&ctx, ctx.norm(x)),
                    "in_mu": ctx.is_in_mu(x),
                });
                if !x.is_zero() {
                    d["log"] = json!(ctx.log(x)?);
                    d["order"] = json!(ctx.order_of(x)?);
                    d["subprimitive_order"] = json!(ctx.subprimitive_order(x)?);
                }
                Ok(d)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        out["elements"] = Value::Array(details);
    }
    Ok(out)
}

fn cmd_gmt(spec: &str, basis: &str, psi: bool, partitions: bool) -> CmdResult {
    let ctx = build_field(spec)?;
    let w = wire::parse_basis_str(&ctx, basis)?;
    let gmt = GmtContext::new(ctx.clone(), w)?;
    let mut out = wire::gmt_to_json(&gmt);
    if psi {
        let table: Vec<Value> = enumerate_pg(&ctx)
            .iter()
            .map(|p| {
                let x = gmt.psi(p);
                json!({
                    "point": p.coords().iter().map(|&c| ctx.base_coeffs(c)).collect::<Vec<_>>(),
                    "psi": wire::elem_to_json(&ctx, x.elem()),
                    "class": gmt.partition_index_mu(x),
                })
            })
            .collect();
        out["psi"] = Value::Array(table);
    }
    if partitions {
        out["partitions"] = serde_json::to_value(gmt.verify_partitions()?).expect("plain data");
    }
    Ok(out)
}

fn parse_elem_opt(ctx: &FieldCtx, s: &Option<String>) -> Result<Option<Elem>, Error> {
    s.as_deref().map(|s| wire::parse_elem_str(ctx, s)).transpose()
}

fn construct(args: &ConstructArgs) -> Result<PiecewisePermutation, Failure> {
    let ctx = build_field(&args.field)?;
    if let FamilyArg::Thm37 = args.family {
        let given = [&args.a, &args.b, &args.u, &args.v, &args.w];
        let params = if given.iter().all(|x| x.is_none()) && args.h.is_empty() {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            acceptance::sample_thm37_params(&ctx, &mut rng)
        } else {
            let need = |name: &str, s: &Option<String>| -> Result<Elem, Failure> {
                parse_elem_opt(&ctx, s)?
                    .ok_or_else(|| Failure::Usage(format!("--{name} is required when parameters are given")))
            };
            let h = match args.h.as_slice() {
                [] => UniPoly::monomial(Elem::ONE, 1),
                [h] => wire::parse_poly_str(&ctx, h)?,
                _ => return Err(Failure::Usage("the quadratic family takes one --h".into())),
            };
            Thm37Params {
                h,
                r: args.r,
                a: need("a", &args.a)?,
                b: need("b", &args.b)?,
                u: need("u", &args.u)?,
                v: need("v", &args.v)?,
                w: need("w", &args.w)?,
            }
        };
        return Ok(construct_thm37(ctx, params)?);
    }
    let w = wire::parse_basis_str(&ctx, &args.basis_w)?;
    let y = match &args.basis_y {
        Some(s) => wire::parse_basis_str(&ctx, s)?,
        None => w.clone(),
    };
    let gmt = Arc::new(GmtContext::new(ctx.clone(), w)?);
    Ok(match args.family {
        FamilyArg::Generic => {
            let g = if args.pg_map == "identity" {
                PgMap::identity(&ctx)
            } else {
                wire::pgmap_from_json(&ctx, &read_input(&args.pg_map)?)?
            };
            build_from_bijection(gmt, y, g, args.r)?
        }
        FamilyArg::Thm36 => {
            let h = if args.h.is_empty() {
                vec![UniPoly::monomial(Elem::ONE, 1); ctx.n() - 1]
            } else {
                args.h.iter().map(|s| wire::parse_poly_str(&ctx, s)).collect::<Result<_, _>>()?
            };
            construct_thm36(gmt, y, &h, args.r)?
        }
        FamilyArg::Thm310 => {
            let delta = match parse_elem_opt(&ctx, &args.delta)? {
                Some(d) => d,
                None => ctx.base_generator(),
            };
            let alpha = parse_elem_opt(&ctx, &args.alpha)?.unwrap_or(Elem::ONE);
            construct_thm310(gmt, y, delta, alpha, args.r, args.d)?
        }
        FamilyArg::Prop312 => construct_prop312(gmt, y, args.r)?,
        FamilyArg::Thm37 => unreachable!("handled above"),
    })
}

/// Verification block; `is_permutation` is the exhaustive verdict at the
/// exhaustive level and the roots-of-unity criterion at the fast level.
fn verification(perm: &PiecewisePermutation, level: Level) -> Result<Value, Failure> {
    let ctx = perm.field();
    match level {
        Level::Fast => {
            let qm1 = ctx.q() as u64 - 1;
            let h = perm.h_table();
            let gcd_ok = projperm::arith::gcd(perm.r(), qm1) == 1;
            let mu_ok = verify_permutation_on(ctx.mu_elements(), |x| {
                ctx.mul(ctx.pow(x, perm.r()), ctx.pow(h[x.index() as usize], qm1))
            })
            .is_permutation;
            Ok(json!({ "level": "fast", "gcd_ok": gcd_ok, "mu_permuted": mu_ok, "is_permutation": gcd_ok && mu_ok }))
        }
        Level::Exhaustive => {
            check_size(ctx)?;
            let p = verify_permutation(ctx, |x| perm.eval(x));
            let hom = verify_homogeneous(perm);
            let agw = verify_agw(perm);
            Ok(json!({
                "level": "exhaustive",
                "is_permutation": p.is_permutation,
                "collision": p.collision.map(|(a, b, y)| json!([
                    wire::elem_to_json(ctx, a), wire::elem_to_json(ctx, b), wire::elem_to_json(ctx, y)
                ])),
                "is_homogeneous": hom.is_homogeneous,
                "agw": {
                    "gcd_ok": agw.gcd_ok,
                    "mu_permuted": agw.mu_permuted,
                    "identity_failures": agw.eq_failures.len(),
                    "consistent_with_f": agw.consistent_with_f,
                    "agrees_with_exhaustive": agw.agree,
                },
                "passed": p.is_permutation && hom.is_homogeneous && agw.passed(),
            }))
        }
    }
}

fn generator_opt(ctx: &FieldCtx, logs: bool) -> Option<Elem> {
    logs.then(|| ctx.generator())
}

fn cmd_construct(args: &ConstructArgs) -> CmdResult {
    let perm = construct(args)?;
    let ctx = perm.field();
    let g = generator_opt(ctx, args.logs);
    let mut out = wire::perm_to_json(&perm);
    let ver = verification(&perm, args.level)?;
    if args.level == Level::Exhaustive {
        let full = interpolate_univariate(&perm, Domain::Full)?;
        out["polynomial"] = wire::poly_to_json(ctx, &full, g);
        out["polynomial_text"] = json!(full.render(ctx, args.logs));
        let branch_polys = (0..perm.branches().len())
            .map(|b| Ok(wire::poly_to_json(ctx, &interpolate_univariate(&perm, Domain::Branch(b))?, g)))
            .collect::<Result<Vec<_>, Error>>()?;
        out["branch_polynomials"] = Value::Array(branch_polys);
        if let Ok(d) = index_decompose(ctx, &full) {
            out["index"] = json!({ "r": d.r, "s": d.s, "ell": d.ell });
        }
    }
    out["is_permutation"] = ver["is_permutation"].clone();
    out["verification"] = ver;
    finish(out)
}

fn finish(out: Value) -> CmdResult {
    let ok = out["is_permutation"].as_bool().unwrap_or(true)
        && out["verification"]["passed"].as_bool().unwrap_or(true);
    if ok {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn cmd_verify(input: &str, level: Level) -> CmdResult {
    let perm = wire::perm_from_json(&read_input(input)?)?;
    check_size(perm.field())?;
    let ver = verification(&perm, level)?;
    let mut out = json!({ "field": wire::field_to_json(perm.field()), "family": perm.family().tag() });
    out["is_permutation"] = ver["is_permutation"].clone();
    out["verification"] = ver;
    finish(out)
}

fn cmd_interpolate(input: &str, branch: Option<usize>, logs: bool) -> CmdResult {
    let perm = wire::perm_from_json(&read_input(input)?)?;
    let ctx = perm.field();
    check_size(ctx)?;
    let domain = branch.map_or(Domain::Full, Domain::Branch);
    let p = interpolate_univariate(&perm, domain)?;
    let mut out = wire::poly_to_json(ctx, &p, generator_opt(ctx, logs));
    out["text"] = json!(p.render(ctx, logs));
    if let Ok(d) = index_decompose(ctx, &p) {
        out["index"] = json!({
            "r": d.r,
            "s": d.s,
            "ell": d.ell,
            "h": wire::poly_to_json(ctx, &d.h, None)["terms"].clone(),
        });
    }
    Ok(out)
}

fn cmd_count(spec: &str, enumerate: bool) -> CmdResult {
    let parsed: FieldSpec = spec.parse()?;
    let (n, q) = (parsed.ext.degree(), parsed.p.pow(parsed.base.degree() as u32));
    let c = counts(n, q);
    let mut out = Map::new();
    out.insert("M".into(), json!(c.m as u64));
    out.insert("H".into(), json!(c.h as u64));
    if enumerate {
        let ctx = build_field(spec)?;
        out.insert("M_enumerated".into(), json!(enumerate_distinct_psi_tables(&ctx, 1 << 20)?));
        out.insert("H_enumerated".into(), json!(enumerate_subprimitive_roots(&ctx)));
        out.insert("bound".into(), json!(c.bound.to_string()));
        out.insert("ratio_exceeds_bound".into(), json!(c.ratio_exceeds_bound));
    }
    Ok(Value::Object(out))
}

fn cmd_hirschfeld(spec: &str, tables: bool) -> CmdResult {
    let ctx = build_field(spec)?;
    let ell = ctx.mu_order();
    let mut all_ok = true;
    let polys = list_subprimitive(&ctx)
        .into_iter()
        .map(|p| {
            let roots = p
                .roots
                .iter()
                .map(|&a| {
                    let map = hirschfeld_map(&ctx, &SubprimitiveRoot::new(&ctx, a)?);
                    all_ok &= map.power_identity && map.bijective;
                    let mut r = json!({
                        "alpha": wire::elem_to_json(&ctx, a),
                        "power_identity": map.power_identity,
                        "bijective": map.bijective,
                        "image_is_mu": map.image_is_mu,
                        "alpha_pow_ell_is_one": ctx.pow(a, ell) == Elem::ONE,
                    });
                    if tables {
                        r["table"] = Value::Array(
                            map.table
                                .iter()
                                .map(|(pt, v)| {
                                    json!([
                                        pt.coords().iter().map(|&c| ctx.base_coeffs(c)).collect::<Vec<_>>(),
                                        wire::elem_to_json(&ctx, *v)
                                    ])
                                })
                                .collect(),
                        );
                    }
                    Ok(r)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(json!({
                "polynomial": p.coeffs.iter().map(|&c| ctx.base_coeffs(c)).collect::<Vec<_>>(),
                "roots": roots,
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = json!({ "field": wire::field_to_json(&ctx), "ell": ell, "polynomials": polys });
    if all_ok {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn cmd_selftest(grid: GridArg, format: Format) -> CmdResult {
    let grid = match grid {
        GridArg::Small => Grid::Small,
        GridArg::Full => Grid::Full,
    };
    let results = acceptance::run_all(grid);
    if let Format::Text = format {
        for r in &results {
            println!("{r}");
        }
    }
    let out = json!({
        "passed": results.iter().all(|r| r.passed),
        "criteria": results.iter().map(|r| json!({
            "id": r.id,
            "title": r.title,
            "passed": r.passed,
            "detail": r.detail,
            "seconds": r.elapsed.as_secs_f64(),
        })).collect::<Vec<_>>(),
    });
    if results.iter().all(|r| r.passed) {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(x, &key, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                render_text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn emit(v: &Value, format: Format) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(v).expect("valid JSON") + "\n",
        Format::Text => {
            let mut s = String::new();
            render_text(v, "", &mut s);
            s
        }
    };
    // A closed pipe is not an error for a report.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = match &cli.command {
        Command::Field { field, elem } => cmd_field(field, elem),
        Command::Gmt { field, basis_w, psi, partitions } => cmd_gmt(field, basis_w, *psi, *partitions),
        Command::Construct(args) => cmd_construct(args),
        Command::Verify { input, level } => cmd_verify(input, *level),
        Command::Interpolate { input, branch, logs } => cmd_interpolate(input, *branch, *logs),
        Command::Count { field, enumerate } => cmd_count(field, *enumerate),
        Command::Hirschfeld { field, tables } => cmd_hirschfeld(field, *tables),
        Command::Selftest { grid } => cmd_selftest(*grid, format),
    };
    let selftest_text = matches!(cli.command, Command::Selftest { .. }) && matches!(format, Format::Text);
    match result {
        Ok(v) => {
            if !selftest_text {
                emit(&v, format);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            if !selftest_text {
                emit(&v, format);
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}


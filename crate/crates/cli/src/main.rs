//! `apnsurf` — analyze functions over GF(2^n) through their surface
//! polynomial: build phi, factor it, decide absolute irreducibility, run
//! exhaustive APN scans, and classify polynomials against the non-APN
//! criteria.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 budget exceeded,
//! 3 internal invariant violation (including failed verification checks).

mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use apn_surface::apn::{diff_uniformity, surface_scan, witness_pair};
use apn_surface::classify::classify;
use apn_surface::factor::{
    absolute_irreducibility, bivar_factor, kasami_phi_factors, AbsIrredVerdict, Budget,
    VerdictCache,
};
use apn_surface::phi::{phi_mono_in, phi_of};
use apn_surface::unipoly::UniFactorization;
use apn_surface::verify::run_checks;
use apn_surface::{Error, FieldSpec, TriPoly, UniPoly};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use parse::{parse_field, parse_poly};
use report::{envelope, modulus_text, tri_text, witness_json, witness_text};

const CACHE_ENV: &str = "APN_SURFACE_CACHE";
const CACHE_DEFAULT: &str = "phi-verdicts.jsonl";

#[derive(Parser)]
#[command(name = "apnsurf", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a field description and print its parameters
    Field(FieldArgs),
    /// Build the surface polynomial of f, or of a single monomial x^J
    Phi(PhiArgs),
    /// Factor a polynomial, the surface polynomial of a monomial, or the
    /// Kasami factor set
    Factor(FactorArgs),
    /// Differential-uniformity tabulation and surface point scans
    Apn(ApnArgs),
    /// Decide which non-APN criterion applies to f
    Classify(ClassifyArgs),
    /// Re-derive the published identities and worked computations
    #[command(name = "verify-paper")]
    VerifyPaper(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BudgetArg {
    Default,
    High,
}

impl From<BudgetArg> for Budget {
    fn from(b: BudgetArg) -> Budget {
        match b {
            BudgetArg::Default => Budget::Default,
            BudgetArg::High => Budget::High,
        }
    }
}

#[derive(Args)]
struct FieldArgs {
    /// Field notation `2^N` or `2^N/0xMOD`
    #[arg(long)]
    field: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PhiArgs {
    /// Coefficient field (defaults to 2^1)
    #[arg(long, default_value = "2^1")]
    field: String,
    /// Polynomial f in the CLI grammar
    #[arg(long, conflicts_with = "poly_phi")]
    poly: Option<String>,
    /// Use the surface polynomial of the monomial x^J
    #[arg(long = "poly-phi")]
    poly_phi: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FactorArgs {
    #[arg(long, default_value = "2^1")]
    field: String,
    /// Univariate polynomial to factor over the field
    #[arg(long, conflicts_with_all = ["poly_phi", "kasami"])]
    poly: Option<String>,
    /// Factor the surface polynomial of x^J over the field
    #[arg(long = "poly-phi", conflicts_with = "kasami")]
    poly_phi: Option<u32>,
    /// Compute the Kasami factor set for parameter k (2..=4)
    #[arg(long)]
    kasami: Option<u32>,
    /// Also decide absolute irreducibility (with --poly-phi)
    #[arg(long)]
    abs: bool,
    #[arg(long, value_enum, default_value = "default")]
    budget: BudgetArg,
    /// Verdict cache path (JSON lines); defaults to $APN_SURFACE_CACHE or
    /// ./phi-verdicts.jsonl
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ApnArgs {
    #[arg(long, default_value = "2^1")]
    field: String,
    #[arg(long)]
    poly: String,
    /// Single extension degree to test
    #[arg(long, conflicts_with = "range")]
    n: Option<u32>,
    /// Extension degree range LO..HI (inclusive)
    #[arg(long)]
    range: Option<String>,
    /// Also count rational points on the surface (needs 3n <= 36)
    #[arg(long)]
    surface: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, default_value = "2^1")]
    field: String,
    #[arg(long)]
    poly: String,
    /// Extension degree used by the gcd(k, n) side condition
    #[arg(long)]
    n: u32,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "default")]
    budget: BudgetArg,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => 2,
            Error::InvariantViolation(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = std::panic::catch_unwind(|| run(cli));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            eprintln!("error: internal invariant violation: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(json_flag: bool, report: Value, text: String) {
    if json_flag {
        println!("{report}");
    } else {
        println!("{text}");
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let start = Instant::now();
    match cli.cmd {
        Cmd::Field(a) => {
            let spec = parse_field(&a.field).map_err(Failure::usage)?;
            let default = FieldSpec::default_modulus(spec.n()).map_err(Failure::from)?;
            let text = format!(
                "field {spec}\n  order   {}\n  modulus {} (0x{:X}){}",
                spec.order(),
                modulus_text(spec.modulus()),
                spec.modulus(),
                if spec.modulus() == default {
                    "  [default]"
                } else {
                    ""
                }
            );
            let result = json!({
                "n": spec.n(),
                "modulus": format!("0x{:X}", spec.modulus()),
                "modulus_poly": modulus_text(spec.modulus()),
                "order": spec.order(),
                "is_default_modulus": spec.modulus() == default,
            });
            let report = envelope(json!({"subcommand": "field", "field": a.field}), Some(spec), result, start);
            emit(a.json, report, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Phi(a) => {
            let spec = parse_field(&a.field).map_err(Failure::usage)?;
            let (input, f) = match (&a.poly, a.poly_phi) {
                (Some(p), None) => (
                    json!({"subcommand": "phi", "field": a.field, "poly": p}),
                    parse_poly(p, spec).map_err(|e| Failure::usage(e.to_string()))?,
                ),
                (None, Some(j)) => (
                    json!({"subcommand": "phi", "field": a.field, "poly_phi": j}),
                    UniPoly::monomial(spec.one(), j as usize),
                ),
                _ => return Err(Failure::usage("exactly one of --poly / --poly-phi required")),
            };
            let surface = phi_of(&f);
            let phi = surface.phi();
            let parts = phi.homogeneous_parts();
            let degrees: Vec<u32> = parts.parts.keys().copied().collect();
            let text = format!(
                "f = {f}\nphi degree {}\nphi terms  {}\nhomogeneous degrees {:?}{}",
                surface
                    .degree()
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "none (phi = 0)".into()),
                phi.num_terms(),
                degrees,
                match tri_text(phi) {
                    Value::String(s) => format!("\nphi = {s}"),
                    _ => String::new(),
                }
            );
            let result = json!({
                "f": f.to_string(),
                "degree": surface.degree(),
                "terms": phi.num_terms(),
                "homogeneous_degrees": degrees,
                "phi": tri_text(phi),
            });
            emit(a.json, envelope(input, Some(spec), result, start), text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Factor(a) => run_factor(a, start),
        Cmd::Apn(a) => run_apn(a, start),
        Cmd::Classify(a) => {
            let spec = parse_field(&a.field).map_err(Failure::usage)?;
            let f = parse_poly(&a.poly, spec).map_err(|e| Failure::usage(e.to_string()))?;
            let (mut cache, cache_path) = open_cache(a.cache.as_deref());
            let v = classify(&f, a.n, &mut cache);
            save_cache(&cache, &cache_path);
            fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
                v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
            }
            let text = format!(
                "f = {f}\noutcome   {}\ncriterion {}\nparameters d={} k={} j={}\nreasons:\n{}",
                v.outcome,
                v.criterion
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "none".into()),
                opt(v.d),
                opt(v.k),
                opt(v.witness_j),
                v.reasons
                    .iter()
                    .map(|r| format!("  - {r}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            let result = json!({
                "f": f.to_string(),
                "outcome": v.outcome.to_string(),
                "criterion": v.criterion.map(|c| c.to_string()),
                "d": v.d,
                "k": v.k,
                "witness_j": v.witness_j,
                "reasons": v.reasons,
            });
            let input = json!({
                "subcommand": "classify", "field": a.field, "poly": a.poly, "n": a.n,
            });
            emit(a.json, envelope(input, Some(spec), result, start), text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyPaper(a) => {
            let reports = run_checks(a.budget.into());
            let all = reports.iter().all(|r| r.passed);
            let text = reports
                .iter()
                .map(|r| {
                    format!(
                        "[{}] {} — {}",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.name,
                        r.detail
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let result = json!({
                "checks": reports.iter().map(|r| json!({
                    "name": r.name, "passed": r.passed, "detail": r.detail,
                })).collect::<Vec<_>>(),
                "all_passed": all,
            });
            let input = json!({
                "subcommand": "verify-paper",
                "budget": if a.budget == BudgetArg::High { "high" } else { "default" },
            });
            emit(a.json, envelope(input, None, result, start), text);
            if all {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Failure {
                    code: 3,
                    message: "verification checks failed".into(),
                })
            }
        }
    }
}

fn open_cache(flag: Option<&std::path::Path>) -> (VerdictCache, PathBuf) {
    let path = flag
        .map(|p| p.to_path_buf())
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(CACHE_DEFAULT));
    let cache = if path.exists() {
        VerdictCache::load(&path).unwrap_or_default()
    } else {
        VerdictCache::new()
    };
    (cache, path)
}

fn save_cache(cache: &VerdictCache, path: &std::path::Path) {
    if cache.is_dirty() {
        if let Err(e) = cache.save(path) {
            eprintln!("warning: could not write verdict cache {}: {e}", path.display());
        }
    }
}

fn uni_factor_json(fac: &UniFactorization) -> Value {
    json!({
        "unit": fac.unit.to_string(),
        "factors": fac.factors.iter().map(|(g, m)| json!({
            "poly": g.to_string(), "multiplicity": m, "degree": g.degree(),
        })).collect::<Vec<_>>(),
    })
}

fn abs_verdict_json(v: &AbsIrredVerdict) -> Value {
    match v {
        AbsIrredVerdict::AbsolutelyIrreducible => json!({
            "verdict": "absolutely-irreducible", "r": null, "factor_count": 1,
        }),
        AbsIrredVerdict::ReducibleOverBase(f) => json!({
            "verdict": "reducible-over-base", "r": null, "factor_count": f.factor_count(),
        }),
        AbsIrredVerdict::SplitsOverExtension { r, factorization } => json!({
            "verdict": "splits-over-extension", "r": r, "factor_count": factorization.factor_count(),
        }),
    }
}

fn abs_verdict_text(v: &AbsIrredVerdict) -> String {
    match v {
        AbsIrredVerdict::AbsolutelyIrreducible => "absolutely irreducible".into(),
        AbsIrredVerdict::ReducibleOverBase(f) => {
            format!("reducible over the base field ({} factors)", f.factor_count())
        }
        AbsIrredVerdict::SplitsOverExtension { r, factorization } => format!(
            "splits over the degree-{r} extension ({} conjugate factors)",
            factorization.factor_count()
        ),
    }
}

fn run_factor(a: FactorArgs, start: Instant) -> Result<ExitCode, Failure> {
    let spec = parse_field(&a.field).map_err(Failure::usage)?;
    match (&a.poly, a.poly_phi, a.kasami) {
        (Some(p), None, None) => {
            let f = parse_poly(p, spec).map_err(|e| Failure::usage(e.to_string()))?;
            if f.is_zero() {
                return Err(Failure::usage("cannot factor the zero polynomial"));
            }
            let fac = f.factor();
            let text = format!(
                "f = {f}\nunit {}\n{}",
                fac.unit,
                fac.factors
                    .iter()
                    .map(|(g, m)| format!("  ({g})^{m}"))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            let input = json!({"subcommand": "factor", "field": a.field, "poly": p});
            emit(a.json, envelope(input, Some(spec), uni_factor_json(&fac), start), text);
            Ok(ExitCode::SUCCESS)
        }
        (None, Some(j), None) => {
            let phi = phi_mono_in(j, spec);
            if phi.is_zero() {
                return Err(Failure::usage(format!(
                    "phi_{j} is the zero polynomial (j < 3 or a power of 2)"
                )));
            }
            let fac = bivar_factor(&phi.dehomogenize_z());
            let rehom: Vec<(TriPoly, u32)> = fac
                .factors
                .iter()
                .map(|(g, m)| (g.homogenize_z_to(g.total_degree().unwrap()), *m))
                .collect();
            let mut text = format!(
                "phi_{j} over {spec}: {} irreducible factor(s)\n{}",
                fac.factor_count(),
                rehom
                    .iter()
                    .map(|(g, m)| format!(
                        "  degree {} terms {} mult {}{}",
                        g.total_degree().unwrap(),
                        g.num_terms(),
                        m,
                        match tri_text(g) {
                            Value::String(s) => format!("  {s}"),
                            _ => String::new(),
                        }
                    ))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            let mut result = json!({
                "j": j,
                "factor_count": fac.factor_count(),
                "factors": rehom.iter().map(|(g, m)| json!({
                    "degree": g.total_degree(), "terms": g.num_terms(),
                    "multiplicity": m, "poly": tri_text(g),
                })).collect::<Vec<_>>(),
            });
            if a.abs {
                let (mut cache, cache_path) = open_cache(a.cache.as_deref());
                let verdict = if spec.n() == 1 {
                    // cache applies to the GF(2) verdicts only
                    if let Some(c) = cache.get(j) {
                        text.push_str(&format!("\nabsolute irreducibility: {c} (cached)"));
                        result["absolute_irreducibility"] = json!({
                            "verdict": match c.kind {
                                apn_surface::factor::CachedKind::AbsolutelyIrreducible => "absolutely-irreducible",
                                apn_surface::factor::CachedKind::ReducibleOverBase => "reducible-over-base",
                                apn_surface::factor::CachedKind::SplitsOverExtension => "splits-over-extension",
                            },
                            "r": c.r, "factor_count": c.factor_count, "cached": true,
                        });
                        None
                    } else {
                        let v = absolute_irreducibility(&phi_mono_in(j, spec));
                        cache.record(j, &v);
                        save_cache(&cache, &cache_path);
                        Some(v)
                    }
                } else {
                    Some(absolute_irreducibility(&phi))
                };
                if let Some(v) = verdict {
                    text.push_str(&format!("\nabsolute irreducibility: {}", abs_verdict_text(&v)));
                    result["absolute_irreducibility"] = abs_verdict_json(&v);
                }
            }
            let input = json!({
                "subcommand": "factor", "field": a.field, "poly_phi": j, "abs": a.abs,
            });
            emit(a.json, envelope(input, Some(spec), result, start), text);
            Ok(ExitCode::SUCCESS)
        }
        (None, None, Some(k)) => {
            let set = kasami_phi_factors(k, a.budget.into()).map_err(Failure::from)?;
            let text = format!(
                "phi_{} over {}: {} factors of degree {}\n{}",
                set.d,
                set.field,
                set.factors.len(),
                (1u32 << k) + 1,
                set.factors
                    .iter()
                    .map(|(alpha, p)| format!(
                        "  alpha = {alpha}: p_alpha(x,0,1) = (x + {alpha})^{}, {} terms",
                        (1u32 << k) + 1,
                        p.num_terms()
                    ))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            let result = json!({
                "k": k,
                "d": set.d,
                "kasami_field": set.field.to_string(),
                "factors": set.factors.iter().map(|(alpha, p)| json!({
                    "alpha": alpha.to_string(),
                    "degree": p.is_homogeneous(),
                    "terms": p.num_terms(),
                    "poly": tri_text(p),
                })).collect::<Vec<_>>(),
            });
            let input = json!({
                "subcommand": "factor", "field": a.field, "kasami": k,
                "budget": if a.budget == BudgetArg::High { "high" } else { "default" },
            });
            emit(a.json, envelope(input, Some(set.field), result, start), text);
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(Failure::usage(
            "exactly one of --poly / --poly-phi / --kasami required",
        )),
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), Failure> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Failure::usage(format!("malformed range `{s}`, expected LO..HI")))?;
    let lo: u32 = lo
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("bad range start in `{s}`")))?;
    let hi: u32 = hi
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("bad range end in `{s}`")))?;
    if lo > hi {
        return Err(Failure::usage(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn run_apn(a: ApnArgs, start: Instant) -> Result<ExitCode, Failure> {
    let spec = parse_field(&a.field).map_err(Failure::usage)?;
    let f = parse_poly(&a.poly, spec).map_err(|e| Failure::usage(e.to_string()))?;
    let (lo, hi) = match (a.n, &a.range) {
        (Some(n), None) => (n, n),
        (None, Some(r)) => parse_range(r)?,
        _ => return Err(Failure::usage("exactly one of --n / --range required")),
    };
    let mut rows = Vec::new();
    let mut surface_rows = Vec::new();
    let mut text_lines = vec![format!("f = {f}"), "  n  delta  apn  witness".into()];
    for n in lo..=hi {
        let scan_spec = if spec.n() == n {
            spec
        } else {
            FieldSpec::with_default_modulus(n).map_err(Failure::from)?
        };
        let s = diff_uniformity(&f, scan_spec).map_err(Failure::from)?;
        let apn = s.delta <= 2;
        let wtext = s.witness.as_ref().map(witness_text).unwrap_or_default();
        text_lines.push(format!(
            "{n:>3}  {delta:>5}  {apn_s:>3}  {wtext}",
            delta = s.delta,
            apn_s = if apn { "yes" } else { "no" }
        ));
        rows.push(json!({
            "n": n,
            "delta": s.delta,
            "apn": apn,
            "witness": s.witness.as_ref().map(witness_json),
        }));
        if a.surface {
            let c = surface_scan(&f, n).map_err(Failure::from)?;
            let wit = c.witness.map(|p| {
                let pair = witness_pair(&f, p).expect("witness expansion");
                json!({
                    "point": [p[0].to_string(), p[1].to_string(), p[2].to_string()],
                    "pair": witness_json(&pair),
                })
            });
            text_lines.push(format!(
                "     surface: total {} nondegenerate {}{}",
                c.total,
                c.nondegenerate,
                c.witness
                    .map(|p| format!("  witness ({}, {}, {})", p[0], p[1], p[2]))
                    .unwrap_or_default()
            ));
            surface_rows.push(json!({
                "n": n,
                "total": c.total,
                "nondegenerate": c.nondegenerate,
                "witness": wit,
            }));
        }
    }
    let mut result = json!({"f": f.to_string(), "rows": rows});
    if a.surface {
        result["surface"] = Value::Array(surface_rows);
    }
    let input = json!({
        "subcommand": "apn", "field": a.field, "poly": a.poly,
        "n": a.n, "range": a.range, "surface": a.surface,
    });
    emit(a.json, envelope(input, Some(spec), result, start), text_lines.join("\n"));
    Ok(ExitCode::SUCCESS)
}

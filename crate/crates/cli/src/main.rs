//! `radmach`: coefficients, expansions, pointwise sums, dualities and verification suites.
//!
//! Every command prints one canonical JSON document (or CSV for `coeff --format csv`).
//! Exit codes: 0 success, 2 usage or validation error, 3 numerical failure flag.

mod classes;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use radmach::arith::{parse_rat, Rat};
use radmach::jacobi::{self, ExactQSeries};
use radmach::json::{complex, float, to_canonical_string};
use radmach::kloosterman::{kloosterman_zeta_partial, SpectralIndex};
use radmach::modgroup::GroupSpec;
use radmach::multiplier::MultiplierSystem;
use radmach::radseries::{
    coefficients, constant_term, eichler_duality, eichler_integral, q_expansion, shadow_expansion, zagier_duality,
    QExpansion, SeriesResult,
};
use radmach::radsums::{qexp_eval, sum_eval};
use radmach::verify::{run_suite, Settings, SUITES};
use radmach::Error;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(name = "radmach", version, about = "Rademacher sums and series for Gamma0(N)")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Mathieu class table; rows become available as `--multiplier class:<name>`.
    #[arg(long, global = true)]
    classes: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SeriesArgs {
    #[arg(long, default_value = "gamma0:1")]
    group: String,
    /// `trivial`, `eta:<s>`, `rho:<n>|<h>`, `class:<name>`, or `*`-joined products.
    #[arg(long, default_value = "trivial")]
    multiplier: String,
    /// Weight as `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    /// Polar index as `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    #[arg(long, default_value_t = 10_000)]
    cmax: i64,
    /// Average the last `window` partial sums (0: plain truncation).
    #[arg(long, default_value_t = 0)]
    window: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expansion {
    /// The series itself.
    Series,
    /// Its shadow.
    Shadow,
    /// Its Eichler integral (weight w > 1).
    Eichler,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Box sum over coset representatives.
    Sum,
    /// Truncated q-expansion from the series coefficients.
    Qexp,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualityKind {
    Zagier,
    Eichler,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier coefficients c(mu, nu).
    Coeff {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "nu_range")]
        nu: Option<String>,
        /// Inclusive range `a..b`, stepping through the index lattice.
        #[arg(long, allow_hyphen_values = true)]
        nu_range: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Truncated q-expansion, optionally compared against an exact oracle.
    Qexp {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, default_value = "series")]
        kind: Expansion,
        /// Oracle name as for `oracle`; reports coefficient ratios.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Pointwise value at tau.
    Eval {
        #[command(flatten)]
        series: SeriesArgs,
        /// Point in the upper half plane, e.g. `0+1i`.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long = "K", default_value_t = 500.0)]
        k: f64,
        #[arg(long, value_enum, default_value = "sum")]
        method: Method,
        /// Coefficients used by `--method qexp`.
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
    /// Residual of the Zagier or Eichler duality for one pair (mu, nu).
    Duality {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, value_enum, default_value = "zagier")]
        kind: DualityKind,
        /// Residuals above this exit with status 3.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Truncated Kloosterman zeta function sum_c S(mu, nu; c) c^{-2s}.
    Zeta {
        #[arg(long, default_value = "gamma0:1")]
        group: String,
        #[arg(long, default_value = "trivial")]
        multiplier: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        /// Complex argument, e.g. `1+0i`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 1000)]
        cmax: i64,
    },
    /// Run a verification suite (or `all`); exit 0 iff every check passes.
    Verify {
        suite: String,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(long, default_value_t = 10_000)]
        cmax: i64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact q-series: `eta:<p>`, `j`, `e:<w>`, `mathieu`, `mu`, `k3`, `level2`, `unary:<ell>:<r>`.
    Oracle {
        name: String,
        /// Exponents up to and including this bound.
        #[arg(long, default_value = "10", allow_hyphen_values = true)]
        order: String,
    },
    /// List the Mathieu class table in use.
    Classes,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerical(_) | Error::Bound(_) => EXIT_NUMERIC,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_VALIDATION, message: message.into() }
}

type Outcome = std::result::Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("radmach: cannot start {n} threads: {e}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    }
    match run(cli) {
        Ok((out, code)) => {
            use std::io::Write;
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("radmach: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let table = classes::load(cli.classes.as_deref())?;
    match cli.command {
        Command::Coeff { series, nu, nu_range, format } => cmd_coeff(&table, &series, nu, nu_range, format),
        Command::Qexp { series, terms, kind, compare } => cmd_qexp(&table, &series, terms, kind, compare),
        Command::Eval { series, tau, k, method, terms } => cmd_eval(&table, &series, &tau, k, method, terms),
        Command::Duality { series, nu, kind, tol } => cmd_duality(&table, &series, &nu, kind, tol),
        Command::Zeta { group, multiplier, mu, nu, s, cmax } => {
            let spec = GroupSpec::parse(&group)?;
            let sys = classes::multiplier(&table, &multiplier)?;
            let s = parse_complex(&s)?;
            let z = kloosterman_zeta_partial(&spec, &sys, SpectralIndex::parse(&mu)?, SpectralIndex::parse(&nu)?, s, cmax)?;
            let trace: Vec<Value> = z.partial_sums.iter().map(|(c, v)| json!([c, float(v.re), float(v.im)])).collect();
            let out = json!({"value": complex(z.value), "s": complex(s), "c_max": cmax, "partial_sums": trace});
            Ok((to_canonical_string(&out), 0))
        }
        Command::Verify { suite, format, cmax, seed } => cmd_verify(&suite, format, cmax, seed),
        Command::Oracle { name, order } => {
            let order = parse_rat(&order)?;
            let series = oracle(&name, order)?;
            Ok((to_canonical_string(&series.to_json()), 0))
        }
        Command::Classes => {
            let rows: Vec<Value> = table.iter().map(classes::Class::to_json).collect();
            Ok((to_canonical_string(&Value::Array(rows)), 0))
        }
    }
}

struct Resolved {
    spec: GroupSpec,
    sys: MultiplierSystem,
    w: Rat,
    mu: SpectralIndex,
}

fn resolve(table: &[classes::Class], a: &SeriesArgs) -> std::result::Result<Resolved, Failure> {
    if a.cmax < 1 {
        return Err(invalid(format!("--cmax must be positive, got {}", a.cmax)));
    }
    Ok(Resolved {
        spec: GroupSpec::parse(&a.group)?,
        sys: classes::multiplier(table, &a.multiplier)?,
        w: parse_rat(&a.weight)?,
        mu: SpectralIndex::parse(&a.mu)?,
    })
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, Failure> {
    s.trim().parse::<Complex64>().map_err(|_| invalid(format!("cannot read {s:?} as a complex number like 0.5+2i")))
}

/// Indices `a, a + 1/h, ..., <= b` on the lattice of `sys`, starting at the first lattice point `>= a`.
fn nu_range(r: &Resolved, range: &str) -> std::result::Result<Vec<SpectralIndex>, Failure> {
    let (a, b) = range.split_once("..").ok_or_else(|| invalid(format!("--nu-range expects a..b, got {range:?}")))?;
    let (a, b) = (parse_rat(a)?, parse_rat(b)?);
    if b < a {
        return Err(invalid(format!("empty range {range:?}")));
    }
    let h = r.spec.width;
    let alpha = r.sys.alpha_at_infinity(h).value();
    // lattice points are (k - alpha)/h
    let k0 = (a * h + alpha).ceil().to_integer();
    let mut out = Vec::new();
    let mut k = k0;
    while Rat::new(k, 1) - alpha <= b * h {
        out.push(SpectralIndex::new((Rat::from_integer(k) - alpha) / h));
        k += 1;
        if out.len() > 100_000 {
            return Err(invalid("--nu-range spans more than 100000 indices"));
        }
    }
    Ok(out)
}

/// Coefficients for each index; `nu = 0` goes through the constant-term formula.
fn series_results(r: &Resolved, nus: &[SpectralIndex], c_max: i64, window: usize) -> std::result::Result<Vec<SeriesResult>, Failure> {
    let nonzero: Vec<SpectralIndex> = nus.iter().copied().filter(|n| !n.value.is_zero()).collect();
    let mut computed = if nonzero.is_empty() {
        Vec::new()
    } else {
        coefficients(&r.spec, &r.sys, r.w, r.mu, &nonzero, c_max, window)?
    }
    .into_iter();
    let mut out = Vec::with_capacity(nus.len());
    for nu in nus {
        if nu.value.is_zero() {
            out.push(constant_term(&r.spec, &r.sys, r.w, r.mu, c_max)?);
        } else {
            out.push(computed.next().expect("one result per index"));
        }
    }
    Ok(out)
}

fn cmd_coeff(
    table: &[classes::Class],
    a: &SeriesArgs,
    nu: Option<String>,
    range: Option<String>,
    format: Format,
) -> Outcome {
    let r = resolve(table, a)?;
    let nus = match (nu, range) {
        (Some(n), None) => vec![SpectralIndex::parse(&n)?],
        (None, Some(rg)) => nu_range(&r, &rg)?,
        _ => return Err(invalid("give exactly one of --nu and --nu-range")),
    };
    let results = series_results(&r, &nus, a.cmax, a.window)?;
    let code = if results.iter().all(|x| x.converged_flag) { 0 } else { EXIT_NUMERIC };
    let out = match format {
        Format::Json => {
            to_canonical_string(&json!({"results": results.iter().map(SeriesResult::to_json).collect::<Vec<_>>()}))
        }
        Format::Csv => {
            let mut s = String::from("nu,value_re,value_im,tail_estimate,converged_flag,c_max,window");
            for x in &results {
                s.push_str(&format!(
                    "\n{},{:.16e},{:.16e},{:.16e},{},{},{}",
                    x.nu, x.value.re, x.value.im, x.tail_estimate, x.converged_flag, x.c_max, x.window
                ));
            }
            s
        }
    };
    Ok((out, code))
}

fn cmd_qexp(table: &[classes::Class], a: &SeriesArgs, terms: usize, kind: Expansion, compare: Option<String>) -> Outcome {
    let r = resolve(table, a)?;
    if terms == 0 {
        return Err(invalid("--terms must be positive"));
    }
    let mut extra = serde_json::Map::new();
    let exp = match kind {
        Expansion::Series => q_expansion(&r.spec, &r.sys, r.w, r.mu, terms, a.cmax, a.window)?,
        Expansion::Eichler => eichler_integral(&r.spec, &r.sys, r.w, r.mu, terms, a.cmax, a.window)?,
        Expansion::Shadow => {
            let s = shadow_expansion(&r.spec, &r.sys, r.w, r.mu, terms, a.cmax, a.window)?;
            extra.insert("gamma_pole".into(), Value::Bool(s.gamma_pole));
            s.expansion
        }
    };
    extra.insert("expansion".into(), exp.to_json());
    if let Some(name) = compare {
        let last = exp.exponent(terms - 1);
        let oracle = oracle(&name, last)?;
        extra.insert("compare".into(), comparison(&exp, &oracle, &name));
    }
    Ok((to_canonical_string(&Value::Object(extra)), 0))
}

/// Per exponent: computed total coefficient, oracle coefficient, and their ratio where defined.
fn comparison(exp: &QExpansion, oracle: &ExactQSeries, name: &str) -> Value {
    use num_traits::ToPrimitive;
    let mut exponents: Vec<Rat> = (0..exp.coefficients.len()).map(|k| exp.exponent(k)).collect();
    if let Some((e, _)) = exp.leading_singular {
        if !exponents.contains(&e) {
            exponents.insert(0, e);
        }
    }
    let rows: Vec<Value> = exponents
        .into_iter()
        .map(|e| {
            let got = exp.total_coefficient(e);
            let want = oracle.coefficient(e).and_then(|c| c.to_f64()).unwrap_or(0.0);
            let ratio = if want == 0.0 { Value::Null } else { complex(got / want) };
            json!({"exponent": e.to_string(), "computed": complex(got), "oracle": float(want), "ratio": ratio})
        })
        .collect();
    json!({"oracle": name, "rows": rows})
}

fn cmd_eval(table: &[classes::Class], a: &SeriesArgs, tau: &str, k: f64, method: Method, terms: usize) -> Outcome {
    let r = resolve(table, a)?;
    let tau = parse_complex(tau)?;
    if !(tau.im > 0.0) {
        return Err(invalid(format!("tau = {tau} must have positive imaginary part")));
    }
    match method {
        Method::Sum => {
            let res = sum_eval(&r.spec, &r.sys, r.w, r.mu, tau, k, a.cmax)?;
            let mut v = res.to_json();
            v["tau"] = complex(tau);
            Ok((to_canonical_string(&v), 0))
        }
        Method::Qexp => {
            let exp = q_expansion(&r.spec, &r.sys, r.w, r.mu, terms, a.cmax, a.window)?;
            let q = qexp_eval(&exp, tau)?;
            let code = if q.tail_bound <= 1e-6 * q.value.norm().max(1.0) { 0 } else { EXIT_NUMERIC };
            let out = json!({"value": complex(q.value), "tail_bound": float(q.tail_bound), "tau": complex(tau), "terms": terms});
            Ok((to_canonical_string(&out), code))
        }
    }
}

fn cmd_duality(table: &[classes::Class], a: &SeriesArgs, nu: &str, kind: DualityKind, tol: f64) -> Outcome {
    let r = resolve(table, a)?;
    let nu = SpectralIndex::parse(nu)?;
    let rep = match kind {
        DualityKind::Zagier => zagier_duality(&r.spec, &r.sys, r.w, r.mu, nu, a.cmax)?,
        DualityKind::Eichler => eichler_duality(&r.spec, &r.sys, r.w, r.mu, nu, a.cmax)?,
    };
    let out = json!({
        "lhs": complex(rep.lhs),
        "rhs": complex(rep.rhs),
        "residual": float(rep.residual),
        "per_modulus": float(rep.per_modulus),
        "tolerance": float(tol),
        "passed": rep.residual < tol,
    });
    Ok((to_canonical_string(&out), if rep.residual < tol { 0 } else { EXIT_NUMERIC }))
}

fn cmd_verify(suite: &str, format: ReportFormat, cmax: i64, seed: Option<u64>) -> Outcome {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(invalid(format!("unknown suite {suite:?}; expected all or one of {}", SUITES.join(", "))));
    };
    let mut settings = Settings { c_max: cmax, ..Settings::default() };
    if let Some(s) = seed {
        settings.seed = s;
    }
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, &settings)?);
    }
    let code = if reports.iter().all(|r| r.passed()) { 0 } else { EXIT_NUMERIC };
    let out = match format {
        ReportFormat::Json => to_canonical_string(&Value::Array(reports.iter().map(|r| r.to_json()).collect())),
        ReportFormat::Table => reports.iter().map(|r| r.table()).collect::<String>().trim_end().to_string(),
    };
    Ok((out, code))
}

fn oracle(name: &str, order: Rat) -> std::result::Result<ExactQSeries, Failure> {
    let int = |s: &str| s.trim().parse::<i64>().map_err(|_| invalid(format!("bad oracle parameter in {name:?}")));
    let series = if let Some(p) = name.strip_prefix("eta:") {
        jacobi::eta_power(int(p)?, order)?
    } else if let Some(w) = name.strip_prefix("e:") {
        let w = int(w)?;
        if w < 2 || w % 2 != 0 {
            return Err(invalid(format!("Eisenstein weight must be even and at least 2, got {w}")));
        }
        jacobi::eisenstein_series(w as u32, order)?
    } else if let Some(rest) = name.strip_prefix("unary:") {
        let (ell, r) = rest.split_once(':').ok_or_else(|| invalid("expected unary:<ell>:<r>"))?;
        jacobi::unary_theta(int(ell)?, int(r)?, order)?
    } else {
        match name {
            "j" => jacobi::j_oracle(order)?,
            "mathieu" => jacobi::mathieu_h_series(order)?,
            "mu" => jacobi::appell_mu_series(order, jacobi::appell_ell_max(order))?,
            "k3" => jacobi::zk3_series(order)?,
            "level2" => jacobi::eta_quotient_level2(order)?,
            _ => return Err(invalid(format!("unknown oracle {name:?}"))),
        }
    };
    Ok(series)
}

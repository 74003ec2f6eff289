use clap::{Args, Parser, Subcommand};
use fockcorr::combinat::{Algebra, Level, ModuleLabel};
use fockcorr::correlators::eval::{Exact, PointEval};
use fockcorr::correlators::npoint::{npoint, Sector};
use fockcorr::correlators::qdim::qdim;
use fockcorr::fock::{self, Op, OpKind, SectorSpec, DEFAULT_MAX_STATES};
use fockcorr::laurent::{Monomial, Var};
use fockcorr::qseries::{AnySeries, QExp};
use fockcorr::ring::{parse_rat, Rat};
use fockcorr::verify::{self, Mode, Params, Report};
use fockcorr::weyl::WeylType;
use fockcorr::{Error, Result};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA: &str = "fock-correlators/1";

#[derive(Parser)]
#[command(name = "fockcorr", version, about = "Exact q-series for n-point functions of classical infinite-rank Lie algebras")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for memoized characters and level-½ bases.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Upper bound on enumerated Fock states.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// n-point function of one module.
    Corr(CorrArgs),
    /// q-dimension of one module.
    Qdim(QdimArgs),
    /// Direct Fock-space trace.
    Oracle(OracleArgs),
    /// Check one registered identity.
    Verify(VerifyArgs),
    /// List registered identities.
    ListIdentities,
}

#[derive(Args)]
struct LabelArgs {
    /// a, b, c or d.
    #[arg(long)]
    algebra: String,
    /// Integer or half-integer such as 3/2.
    #[arg(long)]
    level: String,
    /// Comma-separated parts; omitted entries are zero.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    lambda: String,
    #[arg(long)]
    det: bool,
    #[arg(long)]
    spin: bool,
}

#[derive(Args)]
struct CorrArgs {
    #[command(flatten)]
    label: LabelArgs,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long)]
    order: String,
    /// exact or eval.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Comma-separated s_i with t_i = s_i².
    #[arg(long)]
    s: Option<String>,
}

#[derive(Args)]
struct QdimArgs {
    #[command(flatten)]
    label: LabelArgs,
    #[arg(long)]
    order: String,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    pairs: usize,
    /// 0 or 1.
    #[arg(long, default_value_t = 0)]
    neutral: u8,
    /// ns or r.
    #[arg(long, default_value = "ns")]
    sector: String,
    /// "none" or operators separated by ';', e.g. "D,s=2;D,t=9".
    #[arg(long, default_value = "none")]
    ops: String,
    /// Comma-separated charges per pair; omitted means z = 1.
    #[arg(long, allow_hyphen_values = true)]
    charge: Option<String>,
    #[arg(long)]
    order: String,
    /// eval, or exact with at most one operator.
    #[arg(long, default_value = "eval")]
    mode: String,
}

#[derive(Args)]
struct VerifyArgs {
    id: String,
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    /// Weyl type B, C or D.
    #[arg(long = "type")]
    weyl_type: Option<String>,
}

fn parse_rats(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| parse_rat(x.trim()).ok_or_else(|| Error::Parse(format!("bad rational {x:?}"))))
        .collect()
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad integer {x:?}"))))
        .collect()
}

fn label(a: &LabelArgs) -> Result<ModuleLabel> {
    ModuleLabel::new(Algebra::parse(&a.algebra)?, Level::parse(&a.level)?, parse_ints(&a.lambda)?, a.det, a.spin)
}

fn order(s: &str) -> Result<QExp> {
    let o = QExp::parse(s)?;
    if o <= QExp::ZERO {
        return Err(Error::Parse("order must be positive".into()));
    }
    Ok(o)
}

fn series_out(json: bool, command: &str, params: Value, s: &AnySeries) -> String {
    if json {
        let v = json!({ "schema": SCHEMA, "command": command, "params": params, "series": s.to_json() });
        serde_json::to_string_pretty(&v).expect("serializable")
    } else {
        s.to_string()
    }
}

fn corr(a: &CorrArgs, json: bool) -> Result<String> {
    let lab = label(&a.label)?;
    let o = order(&a.order)?;
    let mode = Mode::parse(&a.mode)?;
    let s = parse_rats(a.s.as_deref().unwrap_or(""))?;
    let series = match mode {
        Mode::Exact if a.n == 0 => AnySeries::Rational(npoint(&PointEval::new(&[])?, &lab, 0, o)?),
        Mode::Exact => AnySeries::RatFunc(npoint(&Exact, &lab, a.n, o)?.reduced()),
        Mode::Eval => {
            if s.len() != a.n {
                return Err(Error::Parse(format!("--s needs exactly {} values", a.n)));
            }
            AnySeries::Rational(npoint(&PointEval::new(&s)?, &lab, a.n, o)?)
        }
    };
    let params = json!({
        "label": lab.to_string(),
        "n": a.n,
        "order": o.to_string(),
        "mode": mode.name(),
        "s": s.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    Ok(series_out(json, "corr", params, &series))
}

fn qdim_cmd(a: &QdimArgs, json: bool) -> Result<String> {
    let lab = label(&a.label)?;
    let o = order(&a.order)?;
    let series = AnySeries::Rational(qdim(&lab, o)?);
    let params = json!({ "label": lab.to_string(), "order": o.to_string() });
    Ok(series_out(json, "qdim", params, &series))
}

/// Square root of a non-negative rational, if it is rational.
fn rat_sqrt(t: &Rat) -> Option<Rat> {
    use num_bigint::BigInt;
    let isqrt = |n: &BigInt| -> Option<BigInt> {
        if n < &BigInt::from(0) {
            return None;
        }
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rat::new(isqrt(t.numer())?, isqrt(t.denom())?))
}

/// Operators with their evaluation points, if given.
fn parse_ops(s: &str) -> Result<Vec<(OpKind, Option<Rat>)>> {
    if s.trim().eq_ignore_ascii_case("none") || s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|item| {
            let mut parts = item.split(',').map(str::trim);
            let kind = match parts.next().unwrap_or("").to_ascii_uppercase().as_str() {
                "A" => OpKind::A,
                "B" => OpKind::B,
                "C" => OpKind::C,
                "D" => OpKind::D,
                k => return Err(Error::Parse(format!("unknown operator {k:?}"))),
            };
            let value = match parts.next() {
                None => None,
                Some(p) => {
                    let (key, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("bad operator point {p:?}")))?;
                    let v = parse_rat(v.trim()).ok_or_else(|| Error::Parse(format!("bad rational {v:?}")))?;
                    match key.trim() {
                        "s" => Some(v),
                        "t" => Some(rat_sqrt(&v).ok_or_else(|| {
                            Error::Parse(format!("t = {v} is not a rational square; pass s instead"))
                        })?),
                        k => return Err(Error::Parse(format!("unknown operator parameter {k:?}"))),
                    }
                }
            };
            if parts.next().is_some() {
                return Err(Error::Parse(format!("bad operator {item:?}")));
            }
            Ok((kind, value))
        })
        .collect()
}

fn oracle(a: &OracleArgs, json: bool, max_states: usize) -> Result<String> {
    let o = order(&a.order)?;
    let sector = match a.sector.to_ascii_lowercase().as_str() {
        "ns" => Sector::NS,
        "r" => Sector::R,
        x => return Err(Error::Parse(format!("sector must be ns or r, got {x:?}"))),
    };
    if a.neutral > 1 {
        return Err(Error::Parse("--neutral must be 0 or 1".into()));
    }
    let spec = SectorSpec { pairs: a.pairs, neutral: a.neutral == 1, sector, cutoff: o };
    let parsed = parse_ops(&a.ops)?;
    let ops: Vec<Op> = parsed
        .iter()
        .enumerate()
        .map(|(i, (k, _))| Op::new(*k, Monomial::var(Var::S(i as u8 + 1), 1)))
        .collect();
    let charges = match &a.charge {
        None => None,
        Some(c) => {
            let v = parse_rats(c)?;
            if v.len() != a.pairs {
                return Err(Error::Parse(format!("--charge needs {} entries", a.pairs)));
            }
            let doubled: Vec<i64> = v
                .iter()
                .map(|x| {
                    let d = x * Rat::from_integer(2.into());
                    if d.is_integer() {
                        i64::try_from(d.to_integer()).map_err(|_| Error::Parse("charge too large".into()))
                    } else {
                        Err(Error::Parse(format!("charge {x} is not a half-integer")))
                    }
                })
                .collect::<Result<_>>()?;
            Some(doubled)
        }
    };
    let mode = Mode::parse(&a.mode)?;
    let series = match mode {
        Mode::Eval => {
            let s: Vec<Rat> = parsed
                .iter()
                .map(|(_, v)| v.clone().ok_or_else(|| Error::Parse("eval mode needs s= or t= for every operator".into())))
                .collect::<Result<_>>()?;
            let g = fock::trace(&PointEval::new(&s)?, &spec, &ops, max_states)?;
            AnySeries::Rational(select(&g, charges.as_deref(), o))
        }
        Mode::Exact => {
            if ops.len() > 1 {
                return Err(Error::Parse("exact oracle traces take at most one operator; use eval".into()));
            }
            let g = fock::trace(&Exact, &spec, &ops, max_states)?;
            AnySeries::RatFunc(select(&g, charges.as_deref(), o).reduced())
        }
    };
    let params = json!({
        "pairs": a.pairs,
        "neutral": a.neutral,
        "sector": format!("{sector:?}"),
        "ops": a.ops,
        "charge": a.charge,
        "order": o.to_string(),
        "mode": mode.name(),
    });
    Ok(series_out(json, "oracle", params, &series))
}

fn select<C: fockcorr::ring::Ring>(g: &fock::GradedTrace<C>, charges: Option<&[i64]>, o: QExp) -> fockcorr::qseries::QSeries<C> {
    match charges {
        Some(c) => fock::charge_sector(g, c, o),
        None => fock::total(g, o),
    }
}

fn report_text(r: &Report) -> String {
    let mut out = format!("identity: {}\n", r.identity);
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    out.push_str(&format!("params: {}\n", params.join(" ")));
    out.push_str(&format!("order: q^{}\n", r.order));
    for c in &r.checks {
        match &c.mismatch {
            None => out.push_str(&format!("  pass  {}\n", c.name)),
            Some(m) => out.push_str(&format!(
                "  FAIL  {}\n        first mismatch at q^{}\n        lhs: {}\n        rhs: {}\n",
                c.name, m.exponent, m.lhs, m.rhs
            )),
        }
    }
    out.push_str(if r.passed { "result: pass" } else { "result: FAIL" });
    out
}

fn verify_cmd(a: &VerifyArgs, json: bool, max_states: usize) -> Result<(String, bool)> {
    let id = verify::find(&a.id)?;
    let weyl_type = match a.weyl_type.as_deref().map(str::to_ascii_uppercase).as_deref() {
        None => None,
        Some("B") => Some(WeylType::B),
        Some("C") => Some(WeylType::C),
        Some("D") => Some(WeylType::D),
        Some(t) => return Err(Error::Parse(format!("type must be B, C or D, got {t:?}"))),
    };
    let params = Params {
        order: a.order.as_deref().map(order).transpose()?,
        l: a.l,
        n: a.n,
        s: a.s.as_deref().map(parse_rats).transpose()?,
        mode: a.mode.as_deref().map(Mode::parse).transpose()?,
        weyl_type,
        max_states: Some(max_states),
    };
    let r = id.run(&params)?;
    let text = if json {
        let v = json!({ "schema": SCHEMA, "command": "verify", "report": r });
        serde_json::to_string_pretty(&v).expect("serializable")
    } else {
        report_text(&r)
    };
    Ok((text, r.passed))
}

fn list(json: bool) -> String {
    let ids = verify::registry();
    if json {
        let v: Vec<Value> = ids.iter().map(|i| json!({ "id": i.id, "description": i.description })).collect();
        serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "command": "list-identities", "identities": v }))
            .expect("serializable")
    } else {
        let width = ids.iter().map(|i| i.id.len()).max().unwrap_or(0);
        ids.iter().map(|i| format!("{:width$}  {}", i.id, i.description)).collect::<Vec<_>>().join("\n")
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Pole(_) | Error::ZeroDenominator => 3,
        Error::ResourceLimit(_) | Error::Divergent(_) => 4,
        Error::Parse(_)
        | Error::InvalidLabel(_)
        | Error::UnknownIdentity(_)
        | Error::SectorMismatch(..)
        | Error::BadExponent(_)
        | Error::NotDominant(_) => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<(String, bool)> {
    match &cli.command {
        Command::Corr(a) => Ok((corr(a, cli.json)?, true)),
        Command::Qdim(a) => Ok((qdim_cmd(a, cli.json)?, true)),
        Command::Oracle(a) => Ok((oracle(a, cli.json, cli.max_states)?, true)),
        Command::Verify(a) => verify_cmd(a, cli.json, cli.max_states),
        Command::ListIdentities => Ok((list(cli.json), true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 || rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            eprintln!("error: invalid --threads {t}");
            return ExitCode::from(2);
        }
    }
    if let Err(e) = fockcorr::cache::set_cache_dir(cli.cache_dir.clone()) {
        eprintln!("error: cache directory: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok((text, passed)) => {
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

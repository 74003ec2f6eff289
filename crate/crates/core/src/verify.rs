//! Registry of checkable identities. Each entry computes two sides independently
//! and compares them coefficient by coefficient.

use crate::characters::{binomial_det, denominator_det, scaled_numerator, Family};
use crate::combinat::{enumerate_labels, odd_strict_partitions, Algebra, HalfInt, Level, ModuleLabel};
use crate::correlators::closed;
use crate::correlators::eval::{Evaluator, Exact, PartialEval, PointEval};
use crate::correlators::npoint::{
    a_npoint, graded_trace_at_one, graded_trace_f, half_level_base, npoint, s_args, Correlators, FactorSum, Sector,
};
use crate::correlators::qdim::qdim_forms;
use crate::correlators::theta::{euler, f_bo};
use crate::error::{Error, Result};
use crate::fock::{self, GradedTrace, Op, OpKind, SectorSpec, DEFAULT_MAX_STATES};
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::qseries::{doubled_indices, lattice_sum, pochhammer, Offsets, QExp, QSeries};
use crate::ring::{rat, ratio, Rat, Ring};
use crate::weyl::{elements, rho, weyl_sum, weyl_sum_product_form, weyl_sum_series, WeylType};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Display;

/// Coefficient ring of a check: exact rational functions or values at s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Eval,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "eval" => Ok(Mode::Eval),
            _ => Err(Error::Parse(format!("mode must be exact or eval, got {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Eval => "eval",
        }
    }
}

/// Overrides; unset fields take the identity's defaults.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub order: Option<QExp>,
    pub l: Option<usize>,
    pub n: Option<usize>,
    pub s: Option<Vec<Rat>>,
    pub mode: Option<Mode>,
    pub weyl_type: Option<WeylType>,
    pub max_states: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Defaults {
    order: i64,
    l: usize,
    n: usize,
    mode: Mode,
}

const fn defaults(order: i64, l: usize, n: usize, mode: Mode) -> Defaults {
    Defaults { order, l, n, mode }
}

/// Parameters after defaults are applied.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub order: QExp,
    pub l: usize,
    pub n: usize,
    /// Exactly n values.
    pub s: Vec<Rat>,
    pub mode: Mode,
    pub weyl_type: Option<WeylType>,
    pub max_states: usize,
}

/// Default evaluation points s_1, s_2, ...
const DEFAULT_S: [i64; 5] = [2, 3, 5, 7, 11];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// q-exponent, or "-" for Laurent-polynomial identities.
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub mismatch: Option<Mismatch>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub identity: String,
    pub params: BTreeMap<String, String>,
    /// Every comparison covers exponents strictly below this.
    pub order: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub struct Identity {
    pub id: &'static str,
    pub description: &'static str,
    defaults: Defaults,
    check: fn(&Resolved) -> Result<Vec<Check>>,
}

const EXACT: Mode = Mode::Exact;
const EVAL: Mode = Mode::Eval;

static REGISTRY: &[Identity] = &[
    Identity {
        id: "jacobi-z",
        description: "Jacobi triple product over integer charges",
        defaults: defaults(12, 0, 0, EXACT),
        check: jacobi_z,
    },
    Identity {
        id: "jacobi-half",
        description: "Jacobi triple product over half-integer charges",
        defaults: defaults(12, 0, 0, EXACT),
        check: jacobi_half,
    },
    Identity {
        id: "weyl-denom-D",
        description: "type D Weyl denominator as half a determinant, l ≤ --l",
        defaults: defaults(1, 4, 0, EXACT),
        check: weyl_denom_d,
    },
    Identity {
        id: "weyl-denom-B",
        description: "type B Weyl denominator as a determinant of differences, l ≤ --l",
        defaults: defaults(1, 4, 0, EXACT),
        check: weyl_denom_b,
    },
    Identity {
        id: "weyl-lemma",
        description: "Weyl sums against their product forms for random dominant weights",
        defaults: defaults(15, 4, 0, EXACT),
        check: weyl_lemma,
    },
    Identity {
        id: "shift-sym",
        description: "charge sectors ±k of one pair agree, and scale from charge 0 at n = 1",
        defaults: defaults(8, 1, 1, EVAL),
        check: shift_sym,
    },
    Identity {
        id: "f0-trace",
        description: "charge-0 trace of one pair equals the signed F_bo sum",
        defaults: defaults(8, 1, 1, EXACT),
        check: f0_trace,
    },
    Identity {
        id: "graded-A",
        description: "charge-graded D-operator trace of one NS pair",
        defaults: defaults(6, 1, 2, EVAL),
        check: graded_a,
    },
    Identity {
        id: "graded-B",
        description: "charge-graded B-operator trace of one R pair",
        defaults: defaults(6, 1, 2, EVAL),
        check: graded_b,
    },
    Identity {
        id: "howe-D",
        description: "O(2l) duality: Fock trace against Σ characters × d∞ correlators",
        defaults: defaults(6, 1, 1, EVAL),
        check: howe_d,
    },
    Identity {
        id: "howe-Dhalf",
        description: "O(2l+1) duality at level l+½ against d∞ correlators",
        defaults: defaults(6, 1, 1, EVAL),
        check: howe_d_half,
    },
    Identity {
        id: "howe-C",
        description: "Sp(2l) duality against c∞ correlators",
        defaults: defaults(6, 1, 1, EVAL),
        check: howe_c,
    },
    Identity {
        id: "howe-Pin",
        description: "Pin(2l) duality against b∞ correlators at integer level",
        defaults: defaults(6, 1, 1, EVAL),
        check: howe_pin,
    },
    Identity {
        id: "howe-Bhalf",
        description: "Spin(2l+1) duality against b∞ correlators at level l+½",
        defaults: defaults(6, 1, 1, EVAL),
        check: howe_b_half,
    },
    Identity {
        id: "rec-d-half",
        description: "level-½ d∞ recursion: subset products, neutral trace, n = 1 closed forms",
        defaults: defaults(8, 0, 2, EXACT),
        check: rec_d_half,
    },
    Identity {
        id: "rec-b-half",
        description: "level-½ b∞ recursion: subset products, neutral trace, n = 1 closed forms",
        defaults: defaults(8, 0, 2, EXACT),
        check: rec_b_half,
    },
    Identity {
        id: "refined-d",
        description: "τ-refined level-1 traces against both closed forms",
        defaults: defaults(10, 1, 1, EXACT),
        check: refined_d,
    },
    Identity {
        id: "gt-osp",
        description: "tr₊ − tr₋ = (q;q²)∞, its odd strict partition form, and the two forms of :G:",
        defaults: defaults(20, 1, 0, EXACT),
        check: gt_osp,
    },
    Identity {
        id: "osp-gf",
        description: "odd strict partition generating functions with a marked part",
        defaults: defaults(20, 0, 0, EXACT),
        check: osp_gf,
    },
    Identity {
        id: "cor-d",
        description: "q-identity from the level-½ d∞ one-point function",
        defaults: defaults(12, 0, 1, EXACT),
        check: cor_d,
    },
    Identity {
        id: "cor-b",
        description: "q-identity from the level-½ b∞ one-point function, with its log-derivative form",
        defaults: defaults(12, 0, 1, EXACT),
        check: cor_b,
    },
    Identity {
        id: "qdim-consistency",
        description: "q-dimension forms, zero-point correlators and zero-point dualities",
        defaults: defaults(10, 2, 0, EVAL),
        check: qdim_consistency,
    },
    Identity {
        id: "AD-trace",
        description: "D(t) = A(t) − A(1/t) statewise and on traces",
        defaults: defaults(6, 2, 1, EVAL),
        check: ad_trace,
    },
    Identity {
        id: "oracle-a1",
        description: "level-1 gl∞ correlators against charge-m traces of A operators",
        defaults: defaults(6, 1, 2, EVAL),
        check: oracle_a1,
    },
];

pub fn registry() -> &'static [Identity] {
    REGISTRY
}

pub fn find(id: &str) -> Result<&'static Identity> {
    REGISTRY.iter().find(|i| i.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

impl Identity {
    pub fn resolve(&self, p: &Params) -> Result<Resolved> {
        let d = self.defaults;
        let n = p.n.unwrap_or(d.n);
        let s = match &p.s {
            Some(s) if s.len() < n => {
                return Err(Error::Parse(format!("--s needs {n} values, got {}", s.len())));
            }
            Some(s) => s[..n].to_vec(),
            None => {
                if n > DEFAULT_S.len() {
                    return Err(Error::ResourceLimit(format!("at most {} points", DEFAULT_S.len())));
                }
                DEFAULT_S[..n].iter().map(|&x| rat(x)).collect()
            }
        };
        Ok(Resolved {
            order: p.order.unwrap_or(QExp::int(d.order)),
            l: p.l.unwrap_or(d.l),
            n,
            s,
            mode: p.mode.unwrap_or(d.mode),
            weyl_type: p.weyl_type,
            max_states: p.max_states.unwrap_or(DEFAULT_MAX_STATES),
        })
    }

    pub fn run(&self, p: &Params) -> Result<Report> {
        let r = self.resolve(p)?;
        let checks = (self.check)(&r)?;
        let mut params = BTreeMap::new();
        params.insert("l".into(), r.l.to_string());
        params.insert("n".into(), r.n.to_string());
        params.insert("mode".into(), r.mode.name().into());
        if r.mode == Mode::Eval && r.n > 0 {
            let s: Vec<String> = r.s.iter().map(|x| x.to_string()).collect();
            params.insert("s".into(), s.join(","));
        }
        if let Some(t) = r.weyl_type {
            params.insert("type".into(), format!("{t:?}"));
        }
        let passed = checks.iter().all(Check::passed);
        Ok(Report { identity: self.id.into(), params, order: r.order.to_string(), checks, passed })
    }
}

pub fn run(id: &str, params: &Params) -> Result<Report> {
    find(id)?.run(params)
}

macro_rules! by_mode {
    ($r:expr, $f:ident($($arg:expr),*)) => {
        match $r.mode {
            Mode::Exact => $f(&Exact, $($arg),*),
            Mode::Eval => $f(&PointEval::new(&$r.s)?, $($arg),*),
        }
    };
}

fn clip(s: String) -> String {
    const MAX: usize = 240;
    if s.chars().count() <= MAX {
        return s;
    }
    let mut t: String = s.chars().take(MAX).collect();
    t.push_str("...");
    t
}

fn cmp<C: Ring + Display>(name: impl Into<String>, lhs: &QSeries<C>, rhs: &QSeries<C>, order: QExp) -> Check {
    let mismatch = lhs.first_mismatch(rhs, order).map(|m| Mismatch {
        exponent: m.exp.to_string(),
        lhs: clip(m.lhs.to_string()),
        rhs: clip(m.rhs.to_string()),
    });
    Check { name: name.into(), mismatch }
}

fn cmp_poly(name: impl Into<String>, lhs: &LaurentPoly, rhs: &LaurentPoly) -> Check {
    let mismatch = (lhs != rhs).then(|| Mismatch {
        exponent: "-".into(),
        lhs: clip(lhs.to_string()),
        rhs: clip(rhs.to_string()),
    });
    Check { name: name.into(), mismatch }
}

/// Passes iff the two polynomials differ.
fn differ_poly(name: impl Into<String>, lhs: &LaurentPoly, rhs: &LaurentPoly) -> Check {
    let mismatch = (lhs == rhs).then(|| Mismatch {
        exponent: "-".into(),
        lhs: clip(lhs.to_string()),
        rhs: "expected a different polynomial".into(),
    });
    Check { name: name.into(), mismatch }
}

/// Collapses a family of cases into one check, keeping the first failure.
fn all_of(name: impl Display, cases: impl IntoIterator<Item = Result<Check>>) -> Result<Check> {
    let mut count = 0;
    for c in cases {
        let c = c?;
        count += 1;
        if !c.passed() {
            return Ok(Check { name: format!("{name}: {}", c.name), mismatch: c.mismatch });
        }
    }
    Ok(Check { name: format!("{name} ({count} cases)"), mismatch: None })
}

fn lift(s: &QSeries<Rat>) -> QSeries<LaurentPoly> {
    s.map(|c| LaurentPoly::constant(c.clone()))
}

fn var(v: Var, e: i64) -> LaurentPoly {
    LaurentPoly::var(v, e as i32)
}

/// Largest integer strictly below `order`.
fn below(order: QExp) -> u32 {
    ((order.sixteenths() + 15) / 16 - 1).max(0) as u32
}

fn ops(kind: OpKind, args: &[Monomial]) -> Vec<Op> {
    args.iter().map(|u| Op::new(kind, *u)).collect()
}

fn spec(pairs: usize, neutral: bool, sector: Sector, cutoff: QExp) -> SectorSpec {
    SectorSpec { pairs, neutral, sector, cutoff }
}

fn jacobi_z(r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let z = |e: i64| var(Var::Z(1), e);
    let lhs = lattice_sum(Offsets::Integer, |k2| z(k2 / 2), o);
    let (h, one) = (QExp::half(1), QExp::int(1));
    let rhs = lift(&euler(o))
        .mul(&pochhammer(&z(1).neg(), h, one, o)?)
        .mul(&pochhammer(&z(-1).neg(), h, one, o)?);
    Ok(vec![cmp("Σ z^k q^(k²/2) = (q;q)(−zq^½;q)(−q^½/z;q)", &lhs, &rhs, o)])
}

fn jacobi_half(r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let w = |e: i64| var(Var::W(1), e);
    let lhs = lattice_sum(Offsets::HalfInteger, w, o);
    let one = QExp::int(1);
    let rhs = lift(&euler(o))
        .mul(&pochhammer(&w(2).neg(), one, one, o)?)
        .mul(&pochhammer(&w(-2).neg(), one, one, o)?)
        .scale(&w(1).add(&w(-1)))
        .shift(QExp::from_sixteenths(2))
        .truncate(o);
    Ok(vec![cmp("Σ_{k∈½+ℤ} z^k q^(k²/2) = q^(1/8)(z^½+z^−½)(q;q)(−zq;q)(−q/z;q)", &lhs, &rhs, o)])
}

/// Σ_σ (−1)^ℓ(σ) z^{σρ} in the w variables.
fn weyl_denominator(ty: WeylType, l: usize) -> LaurentPoly {
    let r = rho(ty, l);
    let mut sum = LaurentPoly::zero();
    for g in elements(ty, l) {
        let mut m = Monomial::one();
        for (j, x) in g.apply(&r).iter().enumerate() {
            m.set(Var::W(j as u8 + 1), x.doubled() as i32);
        }
        sum.add_term(m, rat(g.sign() as i64));
    }
    sum
}

fn weyl_denom_d(r: &Resolved) -> Result<Vec<Check>> {
    Ok((1..=r.l)
        .map(|l| {
            let det = binomial_det(&rho(WeylType::D, l), 1).scale(&ratio(1, 2));
            cmp_poly(format!("D{l}"), &weyl_denominator(WeylType::D, l), &det)
        })
        .collect())
}

fn weyl_denom_b(r: &Resolved) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for l in 1..=r.l {
        let sum = weyl_denominator(WeylType::B, l);
        let rb = rho(WeylType::B, l);
        out.push(cmp_poly(format!("B{l} with differences"), &sum, &binomial_det(&rb, -1)));
        out.push(differ_poly(format!("B{l} with sums is not an identity"), &sum, &binomial_det(&rb, 1)));
    }
    Ok(out)
}

fn random_dominant(rng: &mut StdRng, ty: WeylType, l: usize) -> Vec<HalfInt> {
    let spin = ty != WeylType::C && rng.gen_bool(0.5);
    let mut parts: Vec<i64> = (0..l).map(|_| rng.gen_range(0..=4)).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    let mut v: Vec<HalfInt> = parts.iter().map(|&m| HalfInt(2 * m + spin as i64)).collect();
    if ty == WeylType::D && rng.gen_bool(0.5) {
        if let Some(x) = v.last_mut() {
            *x = -*x;
        }
    }
    v
}

fn weyl_lemma(r: &Resolved) -> Result<Vec<Check>> {
    let types = match r.weyl_type {
        Some(t) => vec![t],
        None => vec![WeylType::B, WeylType::C, WeylType::D],
    };
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    let mut out = Vec::new();
    for ty in types {
        for l in 1..=r.l {
            let weights: Vec<Vec<HalfInt>> = (0..20).map(|_| random_dominant(&mut rng, ty, l)).collect();
            out.push(all_of(
                format!("{ty:?}{l}"),
                weights.iter().map(|w| {
                    let sum = weyl_sum_series(&weyl_sum(w, ty)?, r.order);
                    let prod = weyl_sum_product_form(w, ty, r.order)?;
                    Ok(cmp(format!("λ = {w:?}"), &sum, &prod, r.order))
                }),
            )?);
        }
    }
    Ok(out)
}

fn shift_sym(r: &Resolved) -> Result<Vec<Check>> {
    by_mode!(r, shift_sym_in(r))
}

fn shift_sym_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let args = s_args(r.n);
    let g = fock::trace(ev, &spec(1, false, Sector::NS, o), &ops(OpKind::D, &args), r.max_states)?;
    let zero = fock::charge_sector(&g, &[0], o);
    let mut out = Vec::new();
    for k2 in doubled_indices(Offsets::Integer, o).into_iter().filter(|&k| k > 0) {
        let k = k2 / 2;
        let plus = fock::charge_sector(&g, &[k2], o);
        let minus = fock::charge_sector(&g, &[-k2], o);
        out.push(cmp(format!("F^(−{k}) = F^({k})"), &minus, &plus, o));
        if r.n == 1 {
            let s = Var::S(1);
            let c = ev.poly(&var(s, 2 * k).add(&var(s, -2 * k)).scale(&ratio(1, 2)))?;
            let rhs = zero.scale(&c).shift(QExp::from_sixteenths(8 * k * k)).truncate(o);
            out.push(cmp(format!("F^({k}) = ½(t^{k}+t^−{k}) q^({k}²/2) F^(0)"), &plus, &rhs, o));
        }
    }
    Ok(out)
}

fn f0_trace(r: &Resolved) -> Result<Vec<Check>> {
    by_mode!(r, f0_trace_in(r))
}

fn f0_trace_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let args = s_args(r.n);
    let g = fock::trace(ev, &spec(1, false, Sector::NS, o), &ops(OpKind::D, &args), r.max_states)?;
    let lhs = fock::charge_sector(&g, &[0], o);
    let mut out = vec![cmp("F^(0) = Σ_ε [ε] F_bo(t^ε)", &lhs, &FactorSum::new(ev, &args, o)?.factor(0)?, o)];
    if r.n == 1 {
        out.push(cmp("F^(0) = 2 F_bo(t)", &lhs, &f_bo(ev, &args, o)?.scale_rat(&rat(2)), o));
    }
    Ok(out)
}

fn graded(r: &Resolved, sector: Sector) -> Result<Vec<Check>> {
    by_mode!(r, graded_in(r, sector))
}

fn graded_in<E: Evaluator>(ev: &E, r: &Resolved, sector: Sector) -> Result<Vec<Check>> {
    let o = r.order;
    let args = s_args(r.n);
    let kind = if sector == Sector::NS { OpKind::D } else { OpKind::B };
    let g = fock::trace(ev, &spec(1, false, sector, o), &ops(kind, &args), r.max_states)?;
    let ctx = FactorSum::new(ev, &args, o)?;
    Ok(graded_trace_f(&ctx, sector)?
        .iter()
        .map(|(&k2, s)| cmp(format!("charge {}", HalfInt(k2)), &fock::charge_sector(&g, &[k2], o), s, o))
        .collect())
}

fn graded_a(r: &Resolved) -> Result<Vec<Check>> {
    graded(r, Sector::NS)
}

fn graded_b(r: &Resolved) -> Result<Vec<Check>> {
    graded(r, Sector::R)
}

/// One of the five duality identities with cleared character denominators.
#[derive(Clone, Copy, Debug)]
pub struct HoweKind {
    pub algebra: Algebra,
    pub half: bool,
    pub family: Family,
    pub sector: Sector,
    pub op: OpKind,
}

pub const HOWE_D: HoweKind =
    HoweKind { algebra: Algebra::D, half: false, family: Family::O2l, sector: Sector::NS, op: OpKind::D };
pub const HOWE_D_HALF: HoweKind =
    HoweKind { algebra: Algebra::D, half: true, family: Family::B, sector: Sector::NS, op: OpKind::D };
pub const HOWE_C: HoweKind =
    HoweKind { algebra: Algebra::C, half: false, family: Family::Sp2l, sector: Sector::NS, op: OpKind::D };
pub const HOWE_PIN: HoweKind =
    HoweKind { algebra: Algebra::B, half: false, family: Family::Pin2l, sector: Sector::R, op: OpKind::B };
pub const HOWE_B_HALF: HoweKind =
    HoweKind { algebra: Algebra::B, half: true, family: Family::B, sector: Sector::R, op: OpKind::B };

/// A one-pair graded trace with the charge carried by w_{p+1}.
fn pair_to_w(g: &GradedTrace<LaurentPoly>, p: usize, order: QExp) -> QSeries<LaurentPoly> {
    let mut s = QSeries::zero(order);
    for (c, v) in g {
        let m = Monomial::var(Var::W(p as u8 + 1), c[0] as i32);
        s.add_assign(&v.map(|x| x.mul_monomial(&m)));
    }
    s
}

/// The Fock-space side times the character denominator against
/// Σ_λ numerator_λ · correlator_λ, all in the w variables.
///
/// For n ≥ 1 the Fock side is the product of one-pair traces, which is the form
/// the correlator formulas satisfy; for n = 0 it is the genuine l-pair trace.
pub fn howe_check(kind: HoweKind, l: usize, s: &[Rat], order: QExp, max_states: usize) -> Result<Check> {
    let n = s.len();
    let ev = PartialEval::new(s)?;
    let args = s_args(n);
    let ops = ops(kind.op, &args);
    let mut lhs = if n == 0 {
        fock::to_w(&fock::trace(&ev, &spec(l, kind.half, kind.sector, order), &ops, max_states)?, order)
    } else {
        let g = fock::trace(&ev, &spec(1, false, kind.sector, order), &ops, max_states)?;
        let mut acc = QSeries::one(order);
        for p in 0..l {
            acc = acc.mul(&pair_to_w(&g, p, order));
        }
        if kind.half {
            let neutral = fock::trace(&ev, &spec(0, true, kind.sector, order), &ops, max_states)?;
            acc = acc.mul(&fock::total(&neutral, order));
        }
        acc
    };
    if kind.half && kind.sector == Sector::R {
        lhs = lhs.scale_rat(&ratio(1, 2));
    }
    let den = denominator_det(kind.family, l).z_to_w();
    let lhs = lhs.map(|c| c.mul(&den));
    let level = if kind.half { Level::half(l as u32) } else { Level::int(l as u32) };
    let corr = Correlators::new(&ev, n, order)?;
    let mut rhs = QSeries::zero(order);
    for label in enumerate_labels(kind.algebra, level, order)? {
        let num = scaled_numerator(kind.family, &label.weight())?;
        rhs.add_assign(&corr.get(&label)?.map(|c| c.mul(&num)));
    }
    Ok(cmp(format!("level {level}, n = {n}"), &lhs, &rhs, order))
}

fn howe(kind: HoweKind, r: &Resolved) -> Result<Vec<Check>> {
    Ok(vec![howe_check(kind, r.l, &r.s, r.order, r.max_states)?])
}

fn howe_d(r: &Resolved) -> Result<Vec<Check>> {
    howe(HOWE_D, r)
}

fn howe_d_half(r: &Resolved) -> Result<Vec<Check>> {
    howe(HOWE_D_HALF, r)
}

fn howe_c(r: &Resolved) -> Result<Vec<Check>> {
    howe(HOWE_C, r)
}

fn howe_pin(r: &Resolved) -> Result<Vec<Check>> {
    howe(HOWE_PIN, r)
}

fn howe_b_half(r: &Resolved) -> Result<Vec<Check>> {
    howe(HOWE_B_HALF, r)
}

fn rec_half(r: &Resolved, sector: Sector) -> Result<Vec<Check>> {
    by_mode!(r, rec_half_in(r, sector))
}

fn rec_half_in<E: Evaluator>(ev: &E, r: &Resolved, sector: Sector) -> Result<Vec<Check>> {
    let o = r.order;
    let n = r.n;
    let args = s_args(n);
    let full = (1usize << n) - 1;
    let bases: Vec<QSeries<E::C>> = (0..=full)
        .map(|mask| {
            let sub: Vec<Monomial> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| args[i]).collect();
            half_level_base(ev, sector, &sub, o)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut f1 = graded_trace_at_one(&FactorSum::new(ev, &args, o)?, sector)?;
    if sector == Sector::R {
        f1 = f1.scale_rat(&ratio(1, 2));
    }
    let mut sum = QSeries::zero(o);
    for mask in 0..=full {
        sum.add_assign(&bases[mask].mul(&bases[full ^ mask]));
    }
    out.push(cmp("Σ_I f(I)·f(I^c) against the level-1 graded trace at z = 1", &sum, &f1, o));
    let kind = if sector == Sector::NS { OpKind::D } else { OpKind::B };
    let mut tr = fock::total(&fock::trace(ev, &spec(0, true, sector, o), &ops(kind, &args), r.max_states)?, o);
    if sector == Sector::R {
        tr = tr.scale_rat(&ratio(1, 2));
    }
    out.push(cmp("neutral-fermion trace", &tr, &bases[full], o));
    if n == 1 {
        let u = &args[0];
        let (prod, sum) = match sector {
            Sector::NS => (closed::d_half_one_point_product(ev, u, o)?, closed::d_half_one_point_sum(ev, u, o)?),
            Sector::R => (closed::b_half_one_point_product(ev, u, o)?, closed::b_half_one_point_sum(ev, u, o)?),
        };
        out.push(cmp("closed product form", &bases[full], &prod, o));
        out.push(cmp("theta-quotient sum form", &bases[full], &sum, o));
    }
    Ok(out)
}

fn rec_d_half(r: &Resolved) -> Result<Vec<Check>> {
    rec_half(r, Sector::NS)
}

fn rec_b_half(r: &Resolved) -> Result<Vec<Check>> {
    rec_half(r, Sector::R)
}

fn refined_d(r: &Resolved) -> Result<Vec<Check>> {
    let r = Resolved { s: r.s.iter().cloned().chain(std::iter::once(rat(2))).take(1).collect(), ..r.clone() };
    by_mode!(r, refined_d_in(&r))
}

fn refined_d_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let u = s_args(1)[0];
    let (p, m) = fock::tau_refined_trace(ev, &[Op::new(OpKind::D, u)], o, r.max_states)?;
    Ok(vec![
        cmp("tr₊ = ½(𝔇 + G)", &p, &closed::refined_level1(ev, true, &u, o)?, o),
        cmp("tr₋ = ½(𝔇 − G)", &m, &closed::refined_level1(ev, false, &u, o)?, o),
        cmp("tr₊ in log-derivative form", &p, &closed::refined_level1_log_form(ev, true, &u, o)?, o),
        cmp("tr₋ in log-derivative form", &m, &closed::refined_level1_log_form(ev, false, &u, o)?, o),
        cmp(
            "log form as printed with + equals tr₋",
            &closed::refined_level1_log_form_literal(ev, true, &u, o)?,
            &m,
            o,
        ),
    ])
}

fn gt_osp(r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let ev = PointEval::new(&[])?;
    let (p, m) = fock::tau_refined_trace(&ev, &[], o, r.max_states)?;
    let poch = closed::q_odd_poch(o);
    let mut osp = QSeries::zero(o);
    for mu in odd_strict_partitions(below(o)) {
        let size: u32 = mu.iter().sum();
        osp.add_term(QExp::int(size as i64), rat(if mu.len() % 2 == 0 { 1 } else { -1 }));
    }
    let g_order = o.min(QExp::int(12));
    let u = s_args(1)[0];
    Ok(vec![
        cmp("tr₊ − tr₋ of q^L₀ = (q;q²)", &p.sub(&m), &poch, o),
        cmp("Σ_OSP (−1)^ℓ q^|μ| = (q;q²)", &osp, &poch, o),
        cmp(
            ":G: closed form against symmetric partitions",
            &closed::normal_ordered_g(&Exact, &u, g_order)?,
            &closed::normal_ordered_g_partitions(&Exact, &u, g_order)?,
            g_order,
        ),
    ])
}

fn osp_gf(r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let max = below(o) as i64;
    let z = |e: i64| var(Var::Z(1), e);
    let s = |e: i64| var(Var::S(1), e);
    let mut gf = QSeries::zero(o);
    let mut marked = QSeries::zero(o);
    for mu in odd_strict_partitions(max as u32) {
        let e = QExp::int(mu.iter().sum::<u32>() as i64);
        let zl = z(mu.len() as i64);
        gf.add_term(e, zl.clone());
        // t^{μ_k/2} = s^{μ_k}
        let parts = mu.iter().fold(LaurentPoly::zero(), |a, &p| a.add(&s(p as i64)));
        marked.add_term(e, zl.mul(&parts));
    }
    let poch = pochhammer(&z(1).neg(), QExp::int(1), QExp::int(2), o)?;
    // Σ_n z q^{2n−1} t^{n−½}/(1 + q^{2n−1}z)
    let mut tail = QSeries::zero(o);
    for a in (1..=max).step_by(2) {
        let den = QSeries::one(o).mul_one_minus(&z(1).neg(), QExp::int(a)).inverse()?;
        tail.add_assign(&den.scale(&z(1).mul(&s(a))).shift(QExp::int(a)).truncate(o));
    }
    // Σ_r (−1)^r z^{r+1} q^{r+1} t^½/(1 − q^{2(r+1)}t)
    let mut second = QSeries::zero(o);
    for b in 1..=max {
        let den = QSeries::one(o).mul_one_minus(&s(2), QExp::int(2 * b)).inverse()?;
        let sign = if b % 2 == 1 { 1 } else { -1 };
        second.add_assign(&den.scale(&z(b).mul(&s(1)).scale(&rat(sign))).shift(QExp::int(b)).truncate(o));
    }
    let printed = poch.mul(&QSeries::one(o).add(&tail));
    Ok(vec![
        cmp("Σ_OSP z^ℓ q^|μ| = (−qz;q²)", &gf, &poch, o),
        cmp("Σ_OSP z^ℓ q^|μ| Σ_k t^(μ_k/2) = (−qz;q²)·Σ_n", &marked, &poch.mul(&tail), o),
        cmp("the form with a leading 1 exceeds the sum by exactly (−qz;q²)", &printed.sub(&marked), &poch, o),
        cmp("Σ_n form = Σ_r form", &tail, &second, o),
    ])
}

fn cor_d(r: &Resolved) -> Result<Vec<Check>> {
    let r = Resolved { s: vec![r.s.first().cloned().unwrap_or_else(|| rat(2))], ..r.clone() };
    by_mode!(r, cor_d_in(&r))
}

fn cor_d_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let (lhs, rhs) = closed::q_identity_d(ev, &s_args(1)[0], r.order)?;
    Ok(vec![cmp("product side = sum side", &lhs, &rhs, r.order)])
}

fn cor_b(r: &Resolved) -> Result<Vec<Check>> {
    let r = Resolved { s: vec![r.s.first().cloned().unwrap_or_else(|| rat(2))], ..r.clone() };
    by_mode!(r, cor_b_in(&r))
}

fn cor_b_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let u = s_args(1)[0];
    let (lhs, rhs) = closed::q_identity_b(ev, &u, r.order)?;
    let log = closed::q_identity_b_log_form(ev, &u, r.order)?;
    Ok(vec![
        cmp("product side = sum side", &lhs, &rhs, r.order),
        cmp("log-derivative form = sum side", &log, &rhs, r.order),
    ])
}

/// (algebra, level) pairs of the acceptance grid, with l the number of pairs.
pub fn grid_levels() -> Vec<(Algebra, Level)> {
    vec![
        (Algebra::D, Level::int(1)),
        (Algebra::D, Level::int(2)),
        (Algebra::C, Level::int(1)),
        (Algebra::C, Level::int(2)),
        (Algebra::B, Level::int(1)),
        (Algebra::B, Level::int(2)),
        (Algebra::D, Level::half(0)),
        (Algebra::D, Level::half(1)),
        (Algebra::B, Level::half(0)),
        (Algebra::B, Level::half(1)),
    ]
}

/// Grid labels with ‖λ‖²/2 ≤ 2.
pub fn grid_labels(algebra: Algebra, level: Level) -> Result<Vec<ModuleLabel>> {
    enumerate_labels(algebra, level, QExp::int(2) + QExp::from_sixteenths(1))
}

pub fn howe_kind(algebra: Algebra, level: Level) -> Option<HoweKind> {
    match (algebra, level.is_half()) {
        (Algebra::D, false) => Some(HOWE_D),
        (Algebra::D, true) => Some(HOWE_D_HALF),
        (Algebra::C, _) => Some(HOWE_C),
        (Algebra::B, false) => Some(HOWE_PIN),
        (Algebra::B, true) => Some(HOWE_B_HALF),
        (Algebra::A, _) => None,
    }
}

fn qdim_label(label: &ModuleLabel, order: QExp) -> Result<Check> {
    let name = label.to_string();
    let q = match qdim_forms(label, order) {
        Ok(q) => q,
        Err(Error::Internal(msg)) => {
            let mismatch = Some(Mismatch { exponent: "-".into(), lhs: msg, rhs: "forms should agree".into() });
            return Ok(Check { name, mismatch });
        }
        Err(e) => return Err(e),
    };
    let corr = npoint(&PointEval::new(&[])?, label, 0, order)?;
    Ok(cmp(name, &q.weyl_form, &corr, order))
}

fn qdim_consistency(r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let mut out = Vec::new();
    for (algebra, level) in grid_levels() {
        let labels = grid_labels(algebra, level)?;
        out.push(all_of(
            format!("{algebra:?} level {level}: Weyl form = product form = zero-point correlator"),
            labels.iter().map(|label| qdim_label(label, o)),
        )?);
    }
    for (algebra, level) in grid_levels() {
        if level.rank() > r.l {
            continue;
        }
        let kind = howe_kind(algebra, level).expect("grid has no type A");
        let mut c = howe_check(kind, level.rank(), &[], o, r.max_states)?;
        c.name = format!("{algebra:?} zero-point duality, {}", c.name);
        out.push(c);
    }
    Ok(out)
}

fn ad_trace(r: &Resolved) -> Result<Vec<Check>> {
    by_mode!(r, ad_trace_in(r))
}

fn ad_trace_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let n = r.n;
    let sp = spec(r.l, false, Sector::NS, o);
    let args = s_args(n);
    let states = fock::enumerate_states(&sp, r.max_states)?;
    let mut bad = None;
    'states: for st in &states {
        for u in &args {
            let d = fock::eigenvalue(ev, &Op::new(OpKind::D, *u), st, &sp)?;
            let a = fock::eigenvalue(ev, &Op::new(OpKind::A, *u), st, &sp)?
                .minus(&fock::eigenvalue(ev, &Op::new(OpKind::A, u.inv()), st, &sp)?);
            if d != a {
                bad = Some(Mismatch {
                    exponent: st.energy(&sp).to_string(),
                    lhs: clip(d.to_string()),
                    rhs: clip(a.to_string()),
                });
                break 'states;
            }
        }
    }
    let mut out = vec![Check { name: format!("statewise on {} states", states.len()), mismatch: bad }];
    let d_tr = fock::trace(ev, &sp, &ops(OpKind::D, &args), r.max_states)?;
    let mut a_tr: GradedTrace<E::C> = BTreeMap::new();
    for eps in 0usize..(1 << n) {
        let a_ops: Vec<Op> = (0..n)
            .map(|i| Op::new(OpKind::A, if eps >> i & 1 == 1 { args[i].inv() } else { args[i] }))
            .collect();
        let sign = if eps.count_ones() % 2 == 0 { 1 } else { -1 };
        for (k, v) in fock::trace(ev, &sp, &a_ops, r.max_states)? {
            a_tr.entry(k).or_insert_with(|| QSeries::zero(o)).add_assign(&v.scale_rat(&rat(sign)));
        }
    }
    let mut keys: Vec<&Vec<i64>> = d_tr.keys().chain(a_tr.keys()).collect();
    keys.sort();
    keys.dedup();
    out.push(all_of(
        "traces per charge sector",
        keys.into_iter().map(|k| {
            Ok(cmp(
                format!("charge {k:?}"),
                &fock::charge_sector(&d_tr, k, o),
                &fock::charge_sector(&a_tr, k, o),
                o,
            ))
        }),
    )?);
    out.push(cmp("total trace", &fock::total(&d_tr, o), &fock::total(&a_tr, o), o));
    Ok(out)
}

fn oracle_a1(r: &Resolved) -> Result<Vec<Check>> {
    by_mode!(r, oracle_a1_in(r))
}

fn oracle_a1_in<E: Evaluator>(ev: &E, r: &Resolved) -> Result<Vec<Check>> {
    let o = r.order;
    let args = s_args(r.n);
    let g = fock::trace(ev, &spec(1, false, Sector::NS, o), &ops(OpKind::A, &args), r.max_states)?;
    doubled_indices(Offsets::Integer, o)
        .into_iter()
        .map(|k2| {
            let m = k2 / 2;
            Ok(cmp(format!("m = {m}"), &fock::charge_sector(&g, &[k2], o), &a_npoint(ev, &[m], r.n, o)?, o))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = registry().iter().map(|i| i.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 24);
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(run("nope", &Params::default()), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn short_s_list_is_rejected() {
        let p = Params { n: Some(2), s: Some(vec![rat(2)]), ..Params::default() };
        assert!(matches!(run("graded-A", &p), Err(Error::Parse(_))));
    }
}

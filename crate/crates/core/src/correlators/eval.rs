//! Coefficient evaluators: how s- and z-variables are realised in a computation.

use crate::error::{Error, Result};
use crate::laurent::{rat_pow, LaurentPoly, Monomial, RationalFunction, Var};
use crate::qseries::CoeffJson;
use crate::ring::{fmt_rat, Rat, Ring};
use num_traits::Signed;
use std::collections::BTreeMap;

/// Realises Laurent polynomials in the coefficient ring `C`.
///
/// Every t-argument enters as a monomial `u` in the s-variables with t = u².
pub trait Evaluator: Sync + Send {
    type C: Ring + CoeffJson + std::fmt::Display;

    /// Identifies the evaluation point in disk-cache keys.
    fn cache_tag(&self) -> String;

    /// Image of a Laurent polynomial free of the internal variable U.
    fn poly(&self, p: &LaurentPoly) -> Result<Self::C>;

    fn monomial(&self, m: &Monomial) -> Result<Self::C> {
        self.poly(&LaurentPoly::monomial(*m))
    }

    /// Image of `p(U := u)` for a polynomial `p` in U alone.
    fn subst_u(&self, p: &LaurentPoly, u: &Monomial) -> Result<Self::C> {
        self.poly(&p.subst_monomial(Var::U, u))
    }

    /// Image of 1/(u − u^{-1}); a pole when u − u^{-1} vanishes.
    fn inv_half_diff(&self, u: &Monomial) -> Result<Self::C>;

    /// Image of 1/p; a pole when p vanishes at the evaluation point.
    fn inv_poly(&self, p: &LaurentPoly) -> Result<Self::C>;

    fn constant(&self, r: Rat) -> Self::C {
        Self::C::from_rat(r)
    }
}

fn pole(u: &Monomial) -> Error {
    Error::Pole(format!("u - 1/u vanishes at u = {u:?}"))
}

/// Exact mode: rational functions in the s- and z-variables.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl Evaluator for Exact {
    type C = RationalFunction;

    fn cache_tag(&self) -> String {
        "exact".into()
    }

    fn poly(&self, p: &LaurentPoly) -> Result<RationalFunction> {
        Ok(RationalFunction::from_poly(p.clone()))
    }

    fn inv_half_diff(&self, u: &Monomial) -> Result<RationalFunction> {
        if u.is_one() {
            return Err(pole(u));
        }
        let d = LaurentPoly::monomial(*u).sub(&LaurentPoly::monomial(u.inv()));
        RationalFunction::new(LaurentPoly::one(), &d)
    }

    fn inv_poly(&self, p: &LaurentPoly) -> Result<RationalFunction> {
        if p.is_empty() {
            return Err(Error::Pole("division by zero polynomial".into()));
        }
        RationalFunction::new(LaurentPoly::one(), p)
    }
}

fn point_tag(kind: &str, point: &BTreeMap<Var, Rat>) -> String {
    let vals: Vec<String> = point.iter().map(|(v, x)| format!("{}={}", v.name(), fmt_rat(x))).collect();
    format!("{kind}[{}]", vals.join(","))
}

fn value_of(point: &BTreeMap<Var, Rat>, u: &Monomial) -> Result<Rat> {
    let mut v = <Rat as Ring>::one();
    for (var, e) in u.vars() {
        let x = point.get(&var).ok_or_else(|| Error::UnboundVariable(var.name()))?;
        v *= rat_pow(x, e).ok_or_else(|| Error::Pole(format!("{} = 0", var.name())))?;
    }
    Ok(v)
}

fn inv_half_diff_value(x: &Rat, u: &Monomial) -> Result<Rat> {
    if <Rat as Ring>::is_zero(x) {
        return Err(pole(u));
    }
    let d = x - x.recip();
    d.try_inv().ok_or_else(|| pole(u))
}

fn subst_value(p: &LaurentPoly, x: &Rat) -> Result<Rat> {
    let mut acc = <Rat as Ring>::zero();
    for (m, c) in p.terms() {
        let e = m.get(Var::U);
        acc += c * rat_pow(x, e).ok_or_else(|| Error::Pole("u = 0".into()))?;
    }
    Ok(acc)
}

/// Evaluation mode: every variable bound to a rational number.
#[derive(Clone, Debug)]
pub struct PointEval {
    pub point: BTreeMap<Var, Rat>,
}

impl PointEval {
    /// Binds s_1, s_2, ... to the given values.
    pub fn new(s: &[Rat]) -> Result<Self> {
        Ok(PointEval { point: s_point(s)? })
    }
}

/// Binds s_1, s_2, ... after checking s ∉ {0, ±1}.
pub fn s_point(s: &[Rat]) -> Result<BTreeMap<Var, Rat>> {
    if s.len() > crate::laurent::MAX_INDEX as usize {
        return Err(Error::ResourceLimit(format!("at most {} points", crate::laurent::MAX_INDEX)));
    }
    let mut point = BTreeMap::new();
    for (i, x) in s.iter().enumerate() {
        let bad = <Rat as Ring>::is_zero(x) || x.abs() == <Rat as Ring>::one();
        if bad {
            return Err(Error::Pole(format!("s{} = {x} is not allowed", i + 1)));
        }
        point.insert(Var::S(i as u8 + 1), x.clone());
    }
    Ok(point)
}

impl Evaluator for PointEval {
    type C = Rat;

    fn cache_tag(&self) -> String {
        point_tag("eval", &self.point)
    }

    fn poly(&self, p: &LaurentPoly) -> Result<Rat> {
        p.eval_at(&self.point)
    }

    fn monomial(&self, m: &Monomial) -> Result<Rat> {
        value_of(&self.point, m)
    }

    fn subst_u(&self, p: &LaurentPoly, u: &Monomial) -> Result<Rat> {
        subst_value(p, &value_of(&self.point, u)?)
    }

    fn inv_half_diff(&self, u: &Monomial) -> Result<Rat> {
        inv_half_diff_value(&value_of(&self.point, u)?, u)
    }

    fn inv_poly(&self, p: &LaurentPoly) -> Result<Rat> {
        let v = p.eval_at(&self.point)?;
        v.try_inv().ok_or_else(|| Error::Pole(format!("{p} vanishes")))
    }
}

/// Bound s-variables, symbolic z- and w-variables.
#[derive(Clone, Debug)]
pub struct PartialEval {
    pub point: BTreeMap<Var, Rat>,
}

impl PartialEval {
    pub fn new(s: &[Rat]) -> Result<Self> {
        Ok(PartialEval { point: s_point(s)? })
    }
}

impl Evaluator for PartialEval {
    type C = LaurentPoly;

    fn cache_tag(&self) -> String {
        point_tag("partial", &self.point)
    }

    fn poly(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        p.partial_eval(&self.point)
    }

    fn subst_u(&self, p: &LaurentPoly, u: &Monomial) -> Result<LaurentPoly> {
        let bound = u.vars().all(|(v, _)| self.point.contains_key(&v));
        if bound {
            Ok(LaurentPoly::constant(subst_value(p, &value_of(&self.point, u)?)?))
        } else {
            self.poly(&p.subst_monomial(Var::U, u))
        }
    }

    fn inv_half_diff(&self, u: &Monomial) -> Result<LaurentPoly> {
        Ok(LaurentPoly::constant(inv_half_diff_value(&value_of(&self.point, u)?, u)?))
    }

    fn inv_poly(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let v = self.poly(p)?;
        v.try_inv().ok_or_else(|| Error::Pole(format!("{p} is not a unit after binding s")))
    }
}

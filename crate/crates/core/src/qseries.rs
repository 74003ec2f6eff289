//! Truncated formal power series in q with exponents in (1/16)·ℤ.

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, MonomialJson, RatFuncJson, RationalFunction};
use crate::ring::{fmt_rat, parse_rat, Rat, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Exponent of q, stored in sixteenths.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QExp(i64);

impl QExp {
    pub const ZERO: QExp = QExp(0);

    pub const fn from_sixteenths(n: i64) -> Self {
        QExp(n)
    }

    pub const fn int(n: i64) -> Self {
        QExp(16 * n)
    }

    /// `n/2`.
    pub const fn half(n: i64) -> Self {
        QExp(8 * n)
    }

    /// `n/d`, failing unless `d` divides 16 after reduction.
    pub fn frac(n: i64, d: i64) -> Result<Self> {
        Self::from_rat(&Rat::new(n.into(), d.into()))
    }

    pub fn from_rat(r: &Rat) -> Result<Self> {
        let scaled = r * Rat::from_integer(16.into());
        if !scaled.is_integer() {
            return Err(Error::BadExponent(r.to_string()));
        }
        let n: i64 = scaled
            .to_integer()
            .try_into()
            .map_err(|_| Error::BadExponent(r.to_string()))?;
        Ok(QExp(n))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let r = parse_rat(s).ok_or_else(|| Error::Parse(format!("bad exponent {s:?}")))?;
        Self::from_rat(&r)
    }

    pub fn sixteenths(self) -> i64 {
        self.0
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(self.0.into(), 16.into())
    }

    pub fn is_integer(self) -> bool {
        self.0 % 16 == 0
    }

    pub fn scale(self, k: i64) -> Self {
        QExp(self.0 * k)
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, o: QExp) -> QExp {
        QExp(self.0 + o.0)
    }
}

impl Sub for QExp {
    type Output = QExp;
    fn sub(self, o: QExp) -> QExp {
        QExp(self.0 - o.0)
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        QExp(-self.0)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rat();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

impl fmt::Debug for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Left and right sides of an identity.
pub type Sides<C> = (QSeries<C>, QSeries<C>);

/// Σ c_e q^e known for every exponent below `trunc`.
#[derive(Clone, PartialEq)]
pub struct QSeries<C> {
    terms: BTreeMap<QExp, C>,
    trunc: QExp,
}

/// First coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch<C> {
    pub exp: QExp,
    pub lhs: C,
    pub rhs: C,
}

impl<C: Ring> QSeries<C> {
    pub fn zero(trunc: QExp) -> Self {
        QSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn one(trunc: QExp) -> Self {
        Self::constant(C::one(), trunc)
    }

    pub fn constant(c: C, trunc: QExp) -> Self {
        Self::monomial(QExp::ZERO, c, trunc)
    }

    pub fn monomial(e: QExp, c: C, trunc: QExp) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(e, c);
        s
    }

    pub fn from_terms(it: impl IntoIterator<Item = (QExp, C)>, trunc: QExp) -> Self {
        let mut s = Self::zero(trunc);
        for (e, c) in it {
            s.add_term(e, c);
        }
        s
    }

    /// Adds `c·q^e`, ignoring terms at or beyond the truncation.
    pub fn add_term(&mut self, e: QExp, c: C) {
        if e >= self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().plus_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn trunc(&self) -> QExp {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<QExp, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<QExp, C> {
        self.terms
    }

    pub fn coeff(&self, e: QExp) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest stored exponent, or the truncation for the zero series.
    pub fn ord(&self) -> QExp {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn truncate(&self, t: QExp) -> Self {
        let t = t.min(self.trunc);
        QSeries { terms: self.terms.range(..t).map(|(e, c)| (*e, c.clone())).collect(), trunc: t }
    }

    pub fn add(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut r = self.truncate(trunc);
        for (e, c) in o.terms.range(..trunc) {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn add_assign(&mut self, o: &Self) {
        if o.trunc < self.trunc {
            *self = self.truncate(o.trunc);
        }
        for (e, c) in o.terms.range(..self.trunc) {
            self.add_term(*e, c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negate())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut r = Self::zero(self.trunc);
        for (e, c) in &self.terms {
            r.add_term(*e, c.times(k));
        }
        r
    }

    pub fn scale_rat(&self, k: &Rat) -> Self {
        self.scale(&C::from_rat(k.clone()))
    }

    /// Multiplication by q^e; the truncation moves with the series.
    pub fn shift(&self, e: QExp) -> Self {
        QSeries { terms: self.terms.iter().map(|(k, c)| (*k + e, c.clone())).collect(), trunc: self.trunc + e }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        QSeries::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))), self.trunc)
    }

    pub fn try_map<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<QSeries<D>> {
        let mut r = QSeries::zero(self.trunc);
        for (e, c) in &self.terms {
            r.add_term(*e, f(c)?);
        }
        Ok(r)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let trunc = (self.trunc + o.ord()).min(o.trunc + self.ord());
        let mut r = Self::zero(trunc);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = *ea + *eb;
                if e >= trunc {
                    break;
                }
                r.add_term(e, ca.times(cb));
            }
        }
        r
    }

    /// Multiplication by `1 − a·q^e` with `e > 0`.
    pub fn mul_one_minus(&self, a: &C, e: QExp) -> Self {
        let mut r = self.clone();
        let na = a.negate();
        for (k, c) in &self.terms {
            if *k + e >= r.trunc {
                break;
            }
            r.add_term(*k + e, c.times(&na));
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.trunc);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the leading coefficient must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let (e0, c0) = match self.terms.iter().next() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(Error::ZeroSeries),
        };
        let c0inv = c0.try_inv().ok_or(Error::NonUnit)?;
        let prec = (self.trunc - e0).sixteenths();
        let trunc = self.trunc - e0.scale(2);
        let tail: Vec<(i64, C)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(e, c)| ((*e - e0).sixteenths(), c.times(&c0inv)))
            .collect();
        let g = tail.iter().fold(0i64, |g, (e, _)| g.gcd(e));
        let mut out = Self::zero(trunc);
        if g == 0 {
            out.add_term(-e0, c0inv);
            return Ok(out);
        }
        let n = ((prec + g - 1) / g).max(0) as usize;
        let b: Vec<(usize, C)> = tail.into_iter().map(|(e, c)| ((e / g) as usize, c)).collect();
        let mut inv: Vec<C> = Vec::with_capacity(n);
        for i in 0..n {
            if i == 0 {
                inv.push(C::one());
                continue;
            }
            let mut acc = C::zero();
            for (j, bj) in &b {
                if *j > i {
                    break;
                }
                let prev = &inv[i - j];
                if !prev.is_zero() {
                    acc.plus_assign(&bj.times(prev));
                }
            }
            inv.push(acc.negate());
        }
        for (i, c) in inv.into_iter().enumerate() {
            out.add_term(QExp::from_sixteenths(i as i64 * g) - e0, c.times(&c0inv));
        }
        Ok(out)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Coefficientwise comparison below `min(order, trunc_a, trunc_b)`.
    pub fn first_mismatch(&self, o: &Self, order: QExp) -> Option<Mismatch<C>> {
        let t = order.min(self.trunc).min(o.trunc);
        let mut exps: Vec<QExp> = self.terms.range(..t).map(|(e, _)| *e).collect();
        exps.extend(o.terms.range(..t).map(|(e, _)| *e));
        exps.sort();
        exps.dedup();
        for e in exps {
            let (a, b) = (self.coeff(e), o.coeff(e));
            if a != b {
                return Some(Mismatch { exp: e, lhs: a, rhs: b });
            }
        }
        None
    }

    /// True when both series are known below `order` and agree there.
    pub fn agrees_to(&self, o: &Self, order: QExp) -> bool {
        self.trunc >= order && o.trunc >= order && self.first_mismatch(o, order).is_none()
    }
}

impl QSeries<RationalFunction> {
    pub fn reduced(&self) -> Self {
        self.map(|c| c.clone().reduced())
    }
}

/// (prefix·q^{qshift}; q^{step})_∞ truncated below `order`.
pub fn pochhammer<C: Ring>(prefix: &C, qshift: QExp, step: QExp, order: QExp) -> Result<QSeries<C>> {
    if step <= QExp::ZERO {
        return Err(Error::Divergent("pochhammer step must be positive".into()));
    }
    if qshift < QExp::ZERO {
        return Err(Error::Divergent("pochhammer shift must be nonnegative".into()));
    }
    let mut s = QSeries::one(order);
    let mut e = qshift;
    if e == QExp::ZERO {
        let f = C::one().minus(prefix);
        if f.is_zero() {
            return Err(Error::Divergent("factor (1 - 1) in pochhammer symbol".into()));
        }
        s = s.scale(&f);
        e = e + step;
    }
    while e < order {
        s = s.mul_one_minus(prefix, e);
        e = e + step;
    }
    Ok(s)
}

/// Which lattice the summation index k runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Offsets {
    Integer,
    HalfInteger,
}

/// Σ_k weight(2k)·q^{k²/2} over k ∈ ℤ or ½+ℤ with k²/2 < order.
///
/// `weight` receives the doubled index `2k` so that half-integers stay integral.
pub fn lattice_sum<C: Ring>(offsets: Offsets, weight: impl Fn(i64) -> C, order: QExp) -> QSeries<C> {
    let mut s = QSeries::zero(order);
    for k2 in doubled_indices(offsets, order) {
        s.add_term(QExp::from_sixteenths(2 * k2 * k2), weight(k2));
    }
    s
}

/// The doubled indices `2k` with `k²/2 < order`, in increasing order.
pub fn doubled_indices(offsets: Offsets, order: QExp) -> Vec<i64> {
    let parity = match offsets {
        Offsets::Integer => 0,
        Offsets::HalfInteger => 1,
    };
    let mut bound = 0i64;
    while 2 * bound * bound < order.sixteenths() {
        bound += 1;
    }
    (-bound..=bound).filter(|k| k.rem_euclid(2) == parity && 2 * k * k < order.sixteenths()).collect()
}

/// JSON encoding of one coefficient.
pub trait CoeffJson: Sized {
    fn to_value(&self) -> Value;
    fn from_value(v: &Value) -> Result<Self>;
}

impl CoeffJson for Rat {
    fn to_value(&self) -> Value {
        Value::String(fmt_rat(self))
    }
    fn from_value(v: &Value) -> Result<Self> {
        v.as_str().and_then(parse_rat).ok_or_else(|| Error::Parse(format!("bad rational {v}")))
    }
}

impl CoeffJson for LaurentPoly {
    fn to_value(&self) -> Value {
        serde_json::to_value(self.to_json()).expect("serializable")
    }
    fn from_value(v: &Value) -> Result<Self> {
        let m: Vec<MonomialJson> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        LaurentPoly::from_json(&m)
    }
}

impl CoeffJson for RationalFunction {
    fn to_value(&self) -> Value {
        serde_json::to_value(self.to_json()).expect("serializable")
    }
    fn from_value(v: &Value) -> Result<Self> {
        let r: RatFuncJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        RationalFunction::from_json(&r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub q: String,
    pub coeff: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub mode: String,
    pub trunc: String,
    pub terms: Vec<TermJson>,
}

fn exp_json(e: QExp) -> String {
    fmt_rat(&e.to_rat())
}

impl<C: Ring + CoeffJson> QSeries<C> {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            mode: C::MODE.to_string(),
            trunc: exp_json(self.trunc),
            terms: self.terms.iter().map(|(e, c)| TermJson { q: exp_json(*e), coeff: c.to_value() }).collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.mode != C::MODE {
            return Err(Error::ModeMismatch(C::MODE, mode_name(&j.mode)));
        }
        let mut s = Self::zero(QExp::parse(&j.trunc)?);
        for t in &j.terms {
            s.add_term(QExp::parse(&t.q)?, C::from_value(&t.coeff)?);
        }
        Ok(s)
    }
}

fn mode_name(m: &str) -> &'static str {
    match m {
        "rational" => "rational",
        "laurent" => "laurent",
        "ratfunc" => "ratfunc",
        _ => "unknown",
    }
}

/// A series whose coefficient ring is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySeries {
    Rational(QSeries<Rat>),
    Laurent(QSeries<LaurentPoly>),
    RatFunc(QSeries<RationalFunction>),
}

impl AnySeries {
    pub fn mode(&self) -> &'static str {
        match self {
            AnySeries::Rational(_) => Rat::MODE,
            AnySeries::Laurent(_) => LaurentPoly::MODE,
            AnySeries::RatFunc(_) => RationalFunction::MODE,
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (AnySeries::Rational(a), AnySeries::Rational(b)) => Ok(AnySeries::Rational(a.add(b))),
            (AnySeries::Laurent(a), AnySeries::Laurent(b)) => Ok(AnySeries::Laurent(a.add(b))),
            (AnySeries::RatFunc(a), AnySeries::RatFunc(b)) => Ok(AnySeries::RatFunc(a.add(b))),
            _ => Err(Error::ModeMismatch(self.mode(), o.mode())),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (AnySeries::Rational(a), AnySeries::Rational(b)) => Ok(AnySeries::Rational(a.mul(b))),
            (AnySeries::Laurent(a), AnySeries::Laurent(b)) => Ok(AnySeries::Laurent(a.mul(b))),
            (AnySeries::RatFunc(a), AnySeries::RatFunc(b)) => Ok(AnySeries::RatFunc(a.mul(b))),
            _ => Err(Error::ModeMismatch(self.mode(), o.mode())),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        match self {
            AnySeries::Rational(s) => s.to_json(),
            AnySeries::Laurent(s) => s.to_json(),
            AnySeries::RatFunc(s) => s.to_json(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        match j.mode.as_str() {
            "rational" => Ok(AnySeries::Rational(QSeries::from_json(j)?)),
            "laurent" => Ok(AnySeries::Laurent(QSeries::from_json(j)?)),
            "ratfunc" => Ok(AnySeries::RatFunc(QSeries::from_json(j)?)),
            m => Err(Error::Parse(format!("unknown mode {m:?}"))),
        }
    }
}

impl fmt::Display for AnySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnySeries::Rational(s) => write!(f, "{s}"),
            AnySeries::Laurent(s) => write!(f, "{s}"),
            AnySeries::RatFunc(s) => write!(f, "{s}"),
        }
    }
}

impl<C: Ring + fmt::Display> fmt::Display for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.terms {
            if *e == QExp::ZERO {
                writeln!(f, "q^0: {c}")?;
            } else {
                writeln!(f, "q^{e}: {c}")?;
            }
        }
        write!(f, "O(q^{})", self.trunc)
    }
}

impl<C: Ring> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in &self.terms {
            writeln!(f, "q^{e}: {c:?}")?;
        }
        write!(f, "O(q^{})", self.trunc)
    }
}

/// Converts an integer to a rational coefficient.
pub fn int_coeff<C: Ring>(n: i64) -> C {
    C::from_rat(Rat::from_integer(BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Var;
    use crate::ring::{rat, ratio};

    fn ints(v: &[(i64, i64)], trunc: i64) -> QSeries<Rat> {
        QSeries::from_terms(v.iter().map(|&(e, c)| (QExp::int(e), rat(c))), QExp::int(trunc))
    }

    fn qq(order: i64) -> QSeries<Rat> {
        pochhammer(&Rat::from_integer(1.into()), QExp::int(1), QExp::int(1), QExp::int(order)).unwrap()
    }

    #[test]
    fn qexp_denominators() {
        assert_eq!(QExp::frac(1, 16).unwrap().sixteenths(), 1);
        assert_eq!(QExp::frac(3, 8).unwrap(), QExp::from_sixteenths(6));
        assert!(matches!(QExp::frac(1, 3), Err(Error::BadExponent(_))));
        assert_eq!(QExp::parse("5/2").unwrap().to_string(), "5/2");
    }

    #[test]
    fn geometric_inverse() {
        let a = ints(&[(0, 1), (1, -1)], 12);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, ints(&(0..12).map(|k| (k, 1)).collect::<Vec<_>>(), 12));
        assert_eq!(a.mul(&inv), QSeries::one(QExp::int(12)));
    }

    #[test]
    fn euler_product_and_partitions() {
        assert_eq!(qq(6), ints(&[(0, 1), (1, -1), (2, -1), (5, 1)], 6));
        assert_eq!(qq(4), ints(&[(0, 1), (1, -1), (2, -1)], 4));
        assert_eq!(qq(6).inverse().unwrap(), ints(&[(0, 1), (1, 1), (2, 2), (3, 3), (4, 5), (5, 7)], 6));
    }

    #[test]
    fn monomial_inverse() {
        let c = ratio(3, 5);
        let a = QSeries::monomial(QExp::half(1), c.clone(), QExp::int(4));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.terms().len(), 1);
        assert_eq!(inv.coeff(QExp::half(-1)), c.recip());
        assert!(matches!(QSeries::<Rat>::zero(QExp::int(3)).inverse(), Err(Error::ZeroSeries)));
        let l = QSeries::constant(LaurentPoly::var(Var::S(1), 1).add(&LaurentPoly::one()), QExp::int(2));
        assert!(matches!(l.inverse(), Err(Error::NonUnit)));
    }

    #[test]
    fn pochhammer_examples() {
        let minus_one = rat(-1);
        let p = pochhammer(&minus_one, QExp::half(1), QExp::int(1), QExp::int(3)).unwrap();
        let expect = QSeries::from_terms(
            [1, 1, 0, 1, 1, 1].iter().enumerate().map(|(i, &c)| (QExp::half(i as i64), rat(c))),
            QExp::int(3),
        );
        assert_eq!(p, expect);
        let p = pochhammer(&rat(1), QExp::int(1), QExp::int(2), QExp::int(6)).unwrap();
        // (1-q)(1-q^3)(1-q^5) below q^6
        assert_eq!(p, ints(&[(0, 1), (1, -1), (3, -1), (4, 1), (5, -1)], 6));
        assert!(pochhammer(&rat(1), QExp::ZERO, QExp::int(1), QExp::int(3)).is_err());
        assert!(pochhammer(&rat(1), QExp::int(1), QExp::ZERO, QExp::int(3)).is_err());
    }

    #[test]
    fn theta_numerator_first_order() {
        let t = LaurentPoly::var(Var::S(1), 2);
        let ti = LaurentPoly::var(Var::S(1), -2);
        let a = pochhammer(&t, QExp::int(1), QExp::int(1), QExp::int(2)).unwrap();
        let b = pochhammer(&ti, QExp::int(1), QExp::int(1), QExp::int(2)).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.coeff(QExp::ZERO), LaurentPoly::one());
        assert_eq!(p.coeff(QExp::int(1)), t.add(&ti).neg());
        assert_eq!(p.trunc(), QExp::int(2));
    }

    #[test]
    fn lattice_sum_examples() {
        let z = |k2: i64| LaurentPoly::var(Var::Z(1), (k2 / 2) as i32);
        let s = lattice_sum(Offsets::Integer, z, QExp::half(9));
        assert_eq!(s.terms().len(), 3);
        assert_eq!(s.coeff(QExp::half(1)), LaurentPoly::binomial(Var::Z(1), 1, 1));
        assert_eq!(s.coeff(QExp::int(2)), LaurentPoly::binomial(Var::Z(1), 2, 1));
        let one = lattice_sum(Offsets::Integer, |_| rat(1), QExp::half(1));
        assert_eq!(one, QSeries::one(QExp::half(1)));
    }

    #[test]
    fn mul_truncation_tracks_orders() {
        let a = QSeries::from_terms([(QExp::int(2), rat(1))], QExp::int(5));
        let b = QSeries::from_terms([(QExp::int(1), rat(1))], QExp::int(10));
        assert_eq!(a.mul(&b).trunc(), QExp::int(6));
        let c = a.shift(QExp::from_sixteenths(-1));
        assert_eq!(c.trunc(), QExp::from_sixteenths(79));
    }

    #[test]
    fn json_round_trip_and_modes() {
        let a = ints(&[(0, 1), (3, -7)], 5).shift(QExp::half(1));
        let j = serde_json::to_string(&a.to_json()).unwrap();
        let back: SeriesJson = serde_json::from_str(&j).unwrap();
        assert_eq!(QSeries::<Rat>::from_json(&back).unwrap(), a);
        assert_eq!(serde_json::to_string(&QSeries::<Rat>::from_json(&back).unwrap().to_json()).unwrap(), j);
        assert!(QSeries::<LaurentPoly>::from_json(&back).is_err());
        let l = AnySeries::Laurent(QSeries::one(QExp::int(1)));
        assert!(matches!(AnySeries::Rational(a).mul(&l), Err(Error::ModeMismatch(_, _))));
    }
}

//! Multivariate Laurent polynomials and rational functions over ℚ.
//!
//! Variables live in one fixed global order: the internal theta variable `u`,
//! then `s1..s5` (square roots of the t-variables), `z1..z5` (torus variables)
//! and `w1..w5` (square roots of the z-variables, used where characters carry
//! half-integer exponents).

use crate::error::{Error, Result};
use crate::ring::{fmt_rat, parse_rat, Rat, Ring};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const NVARS: usize = 16;
pub const MAX_INDEX: u8 = 5;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    U,
    S(u8),
    Z(u8),
    W(u8),
}

impl Var {
    pub fn slot(self) -> usize {
        match self {
            Var::U => 0,
            Var::S(i) => {
                assert!((1..=MAX_INDEX).contains(&i), "s-variable index {i} out of range");
                i as usize
            }
            Var::Z(i) => {
                assert!((1..=MAX_INDEX).contains(&i), "z-variable index {i} out of range");
                5 + i as usize
            }
            Var::W(i) => {
                assert!((1..=MAX_INDEX).contains(&i), "w-variable index {i} out of range");
                10 + i as usize
            }
        }
    }

    pub fn from_slot(slot: usize) -> Var {
        match slot {
            0 => Var::U,
            1..=5 => Var::S(slot as u8),
            6..=10 => Var::Z((slot - 5) as u8),
            11..=15 => Var::W((slot - 10) as u8),
            _ => panic!("slot {slot} out of range"),
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::U => "u".into(),
            Var::S(i) => format!("s{i}"),
            Var::Z(i) => format!("z{i}"),
            Var::W(i) => format!("w{i}"),
        }
    }

    pub fn parse(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("unknown variable {s:?}"));
        if s == "u" {
            return Ok(Var::U);
        }
        let (head, idx) = s.split_at(1);
        let i: u8 = idx.parse().map_err(|_| bad())?;
        if !(1..=MAX_INDEX).contains(&i) {
            return Err(bad());
        }
        match head {
            "s" => Ok(Var::S(i)),
            "z" => Ok(Var::Z(i)),
            "w" => Ok(Var::W(i)),
            _ => Err(bad()),
        }
    }
}

/// Exponent vector over the global variable order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [i16; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.slot()] = to_i16(e);
        m
    }

    pub fn get(&self, v: Var) -> i32 {
        self.0[v.slot()] as i32
    }

    pub fn set(&mut self, v: Var, e: i32) {
        self.0[v.slot()] = to_i16(e);
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a = to_i16(*a as i32 + *b as i32);
        }
        r
    }

    pub fn inv(&self) -> Self {
        let mut r = *self;
        for a in r.0.iter_mut() {
            *a = -*a;
        }
        r
    }

    pub fn pow(&self, k: i32) -> Self {
        let mut r = *self;
        for a in r.0.iter_mut() {
            *a = to_i16(*a as i32 * k);
        }
        r
    }

    /// True if every exponent of `self` is at least the corresponding one of `o`.
    pub fn dominates(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a >= b)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var::from_slot(i), e as i32))
    }
}

fn to_i16(e: i32) -> i16 {
    i16::try_from(e).expect("exponent overflow in Laurent monomial")
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .vars()
            .map(|(v, e)| if e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Laurent polynomial with rational coefficients; no zero coefficient is stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rat::one())
    }

    pub fn var(v: Var, e: i32) -> Self {
        Self::monomial(Monomial::var(v, e))
    }

    /// `x^a + sign·x^{-a}` for a single variable.
    pub fn binomial(v: Var, a: i32, sign: i64) -> Self {
        let mut p = Self::var(v, a);
        p.add_term(Monomial::var(v, -a), Rat::from_integer(sign.into()));
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Largest monomial in the lexicographic order of the global variable list.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(Monomial, Rat)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((*m, c.clone()))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut r = Self::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        <Self as Ring>::pow(self, e)
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        let mut m = *first;
        for k in it {
            for (a, b) in m.0.iter_mut().zip(k.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    pub fn max_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        let mut m = *first;
        for k in it {
            for (a, b) in m.0.iter_mut().zip(k.0.iter()) {
                *a = (*a).max(*b);
            }
        }
        m
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut used = [false; NVARS];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    used[i] = true;
                }
            }
        }
        (0..NVARS).filter(|&i| used[i]).map(Var::from_slot).collect()
    }

    /// Applies `(x/2)·d/dx` in the variable `v`, i.e. `t·d/dt` when `x² = t`.
    pub fn half_euler(&self, v: Var) -> Self {
        let half = Rat::new(1.into(), 2.into());
        Self::from_terms(
            self.terms.iter().map(|(m, c)| (*m, c * Rat::from_integer(m.get(v).into()) * &half)),
        )
    }

    /// Substitutes the monomial `x` for the variable `v`.
    pub fn subst_monomial(&self, v: Var, x: &Monomial) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let e = m.get(v);
            let mut rest = *m;
            rest.set(v, 0);
            r.add_term(rest.mul(&x.pow(e)), c.clone());
        }
        r
    }

    /// Rewrites `z_j^e` as `w_j^{2e}`.
    pub fn z_to_w(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut k = *m;
            for j in 1..=MAX_INDEX {
                let e = k.get(Var::Z(j));
                if e != 0 {
                    k.set(Var::Z(j), 0);
                    k.set(Var::W(j), k.get(Var::W(j)) + 2 * e);
                }
            }
            (k, c.clone())
        }))
    }

    /// Rewrites `w_j^{2e}` as `z_j^e` when every w-exponent is even.
    pub fn w_to_z(&self) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut k = *m;
            for j in 1..=MAX_INDEX {
                let e = k.get(Var::W(j));
                if e % 2 != 0 {
                    return None;
                }
                if e != 0 {
                    k.set(Var::W(j), 0);
                    k.set(Var::Z(j), k.get(Var::Z(j)) + e / 2);
                }
            }
            out.add_term(k, c.clone());
        }
        Some(out)
    }

    /// Permutes and inverts variables of one family: `v_i ↦ v_{perm[i]}^{sign[i]}`.
    pub fn act_signed_perm(&self, family: fn(u8) -> Var, perm: &[usize], signs: &[i8]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut k = *m;
            for i in 0..perm.len() {
                k.set(family(i as u8 + 1), 0);
            }
            for i in 0..perm.len() {
                let e = m.get(family(i as u8 + 1)) * signs[i] as i32;
                let target = family(perm[i] as u8 + 1);
                k.set(target, k.get(target) + e);
            }
            (k, c.clone())
        }))
    }

    /// Substitutes rationals for the bound variables, leaving the rest symbolic.
    pub fn partial_eval(&self, point: &BTreeMap<Var, Rat>) -> Result<Self> {
        let mut cache: BTreeMap<(Var, i32), Rat> = BTreeMap::new();
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let mut k = *m;
            let mut val = c.clone();
            for (v, e) in m.vars() {
                if let Some(x) = point.get(&v) {
                    let p = match cache.get(&(v, e)) {
                        Some(p) => p.clone(),
                        None => {
                            let p = rat_pow(x, e).ok_or_else(|| {
                                Error::Pole(format!("{} = 0 with negative exponent", v.name()))
                            })?;
                            cache.insert((v, e), p.clone());
                            p
                        }
                    };
                    val *= p;
                    k.set(v, 0);
                }
            }
            r.add_term(k, val);
        }
        Ok(r)
    }

    pub fn eval_at(&self, point: &BTreeMap<Var, Rat>) -> Result<Rat> {
        let r = self.partial_eval(point)?;
        match r.as_constant() {
            Some(c) => Ok(c),
            None => Err(Error::UnboundVariable(
                r.vars().first().map(|v| v.name()).unwrap_or_default(),
            )),
        }
    }

    pub fn to_json(&self) -> Vec<MonomialJson> {
        self.terms
            .iter()
            .map(|(m, c)| MonomialJson {
                exps: m.vars().map(|(v, e)| (v.name(), e)).collect(),
                coeff: fmt_rat(c),
            })
            .collect()
    }

    pub fn from_json(v: &[MonomialJson]) -> Result<Self> {
        let mut p = Self::zero();
        for t in v {
            let mut m = Monomial::one();
            for (name, e) in &t.exps {
                m.set(Var::parse(name)?, *e);
            }
            let c = parse_rat(&t.coeff).ok_or_else(|| Error::Parse(t.coeff.clone()))?;
            p.add_term(m, c);
        }
        Ok(p)
    }
}

pub fn rat_pow(x: &Rat, e: i32) -> Option<Rat> {
    if e >= 0 {
        Some(num_traits::pow(x.clone(), e as usize))
    } else if x.is_zero() {
        None
    } else {
        Some(num_traits::pow(x.recip(), (-e) as usize))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub exps: BTreeMap<String, i32>,
    pub coeff: String,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "{a}*{m:?}")?;
            }
        }
        Ok(())
    }
}

/// Quotient `q` with `q·den = num` in the Laurent ring.
pub fn exact_div(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly> {
    if den.is_empty() {
        return Err(Error::ZeroDenominator);
    }
    if num.is_empty() {
        return Ok(LaurentPoly::zero());
    }
    if let Some((m, c)) = den.as_monomial() {
        return Ok(num.mul_monomial(&m.inv()).scale(&c.recip()));
    }
    let sd = den.min_exponents();
    let sn = num.min_exponents();
    let d = den.mul_monomial(&sd.inv());
    let mut rem = num.mul_monomial(&sn.inv());
    let (ld, cd) = {
        let (m, c) = d.leading().unwrap();
        (*m, c.clone())
    };
    let mut quot = LaurentPoly::zero();
    while let Some((lt, ct)) = rem.leading() {
        if !lt.dominates(&ld) {
            return Err(Error::InexactDivision);
        }
        let m = lt.mul(&ld.inv());
        let c = ct / &cd;
        quot.add_term(m, c.clone());
        for (dm, dc) in d.terms() {
            rem.add_term(dm.mul(&m), -(dc * &c));
        }
    }
    Ok(quot.mul_monomial(&sn.mul(&sd.inv())))
}

/// Splits `p` as `unit · f` where `unit` is a rational multiple of a monomial and
/// `f` is a polynomial free of monomial content with leading coefficient 1.
fn split_unit(p: &LaurentPoly) -> (Monomial, Rat, LaurentPoly) {
    let shift = p.min_exponents();
    let f = p.mul_monomial(&shift.inv());
    let lc = f.leading().unwrap().1.clone();
    (shift, lc.clone(), f.scale(&lc.recip()))
}

/// Rational function with a factored denominator.
///
/// The denominator is a product of normalized polynomial factors (no monomial
/// content, leading coefficient 1).  Factors need not be coprime or irreducible;
/// sums use the product of maximal powers as a common denominator, which is a
/// multiple of both, and [`RationalFunction::reduce`] cancels by trial division.
#[derive(Clone, Default)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: BTreeMap<LaurentPoly, u32>,
}

impl RationalFunction {
    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: BTreeMap::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `num/den` in canonical form (see [`rf_normalize`]).
    pub fn new(num: LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        rf_normalize(num, den)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &BTreeMap<LaurentPoly, u32> {
        &self.den
    }

    pub fn den(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one();
        for (f, e) in &self.den {
            d = d.mul(&f.pow(*e));
        }
        d
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    fn divide_by_poly(mut self, p: &LaurentPoly) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::ZeroDenominator);
        }
        if self.num.is_empty() {
            return Ok(self);
        }
        let (shift, lc, f) = split_unit(p);
        self.num = self.num.mul_monomial(&shift.inv()).scale(&lc.recip());
        if f.len() > 1 || !f.leading().unwrap().0.is_one() {
            *self.den.entry(f).or_insert(0) += 1;
        }
        Ok(self)
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(&mut self) {
        if self.num.is_empty() {
            self.den.clear();
            return;
        }
        let keys: Vec<LaurentPoly> = self.den.keys().cloned().collect();
        for f in keys {
            loop {
                let e = self.den[&f];
                if e == 0 {
                    break;
                }
                match exact_div(&self.num, &f) {
                    Ok(q) => {
                        self.num = q;
                        if e == 1 {
                            self.den.remove(&f);
                            break;
                        }
                        self.den.insert(f.clone(), e - 1);
                    }
                    Err(_) => break,
                }
            }
        }
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    /// Numerators of `self` and `o` over the common denominator `max-power(den)`.
    fn common(&self, o: &Self) -> (LaurentPoly, LaurentPoly, BTreeMap<LaurentPoly, u32>) {
        if self.den == o.den {
            return (self.num.clone(), o.num.clone(), self.den.clone());
        }
        let mut lcm = self.den.clone();
        for (f, &e) in &o.den {
            let x = lcm.entry(f.clone()).or_insert(0);
            *x = (*x).max(e);
        }
        let lift = |x: &Self| {
            let mut n = x.num.clone();
            for (f, &e) in &lcm {
                let have = x.den.get(f).copied().unwrap_or(0);
                if e > have {
                    n = n.mul(&f.pow(e - have));
                }
            }
            n
        };
        (lift(self), lift(o), lcm)
    }

    pub fn eval_at(&self, point: &BTreeMap<Var, Rat>) -> Result<Rat> {
        let n = self.num.eval_at(point)?;
        let mut d = Rat::one();
        for (f, e) in &self.den {
            let v = f.eval_at(point)?;
            if v.is_zero() {
                return Err(Error::Pole(format!("denominator factor {f} vanishes")));
            }
            d *= num_traits::pow(v, *e as usize);
        }
        Ok(n / d)
    }

    /// Substitutes rationals for the bound variables.
    pub fn partial_eval(&self, point: &BTreeMap<Var, Rat>) -> Result<Self> {
        let mut r = Self::from_poly(self.num.partial_eval(point)?);
        for (f, e) in &self.den {
            let fv = f.partial_eval(point)?;
            for _ in 0..*e {
                r = r.divide_by_poly(&fv)?;
            }
        }
        Ok(r)
    }

    pub fn z_to_w(&self) -> Self {
        let mut r = Self::from_poly(self.num.z_to_w());
        for (f, e) in &self.den {
            let g = f.z_to_w();
            for _ in 0..*e {
                r = r.divide_by_poly(&g).expect("nonzero factor");
            }
        }
        r
    }

    pub fn subst_monomial(&self, v: Var, x: &Monomial) -> Result<Self> {
        let mut r = Self::from_poly(self.num.subst_monomial(v, x));
        for (f, e) in &self.den {
            let g = f.subst_monomial(v, x);
            for _ in 0..*e {
                r = r.divide_by_poly(&g)?;
            }
        }
        Ok(r)
    }

    pub fn to_json(&self) -> RatFuncJson {
        RatFuncJson {
            num: self.num.to_json(),
            den: self.den.iter().map(|(f, e)| DenFactorJson { factor: f.to_json(), power: *e }).collect(),
        }
    }

    pub fn from_json(j: &RatFuncJson) -> Result<Self> {
        let num = LaurentPoly::from_json(&j.num)?;
        let mut den = BTreeMap::new();
        for d in &j.den {
            let f = LaurentPoly::from_json(&d.factor)?;
            if f.is_empty() {
                return Err(Error::ZeroDenominator);
            }
            if d.power > 0 {
                den.insert(f, d.power);
            }
        }
        Ok(RationalFunction { num, den })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenFactorJson {
    pub factor: Vec<MonomialJson>,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: Vec<MonomialJson>,
    pub den: Vec<DenFactorJson>,
}

/// Canonical form of `num/den`: the denominator's monomial content and leading
/// coefficient move to the numerator, then common factors found by trial division
/// are cancelled.
pub fn rf_normalize(num: LaurentPoly, den: &LaurentPoly) -> Result<RationalFunction> {
    if den.is_empty() {
        return Err(Error::ZeroDenominator);
    }
    let r = RationalFunction::from_poly(num).divide_by_poly(den)?;
    Ok(r.reduced())
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        let (a, b, _) = self.common(o);
        a == b
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/", self.num)?;
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| if *e == 1 { format!("({p})") } else { format!("({p})^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl Ring for LaurentPoly {
    const MODE: &'static str = "laurent";
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn from_rat(r: Rat) -> Self {
        LaurentPoly::constant(r)
    }
    fn try_inv(&self) -> Option<Self> {
        let (m, c) = self.as_monomial()?;
        Some(LaurentPoly::term(m.inv(), c.recip()))
    }
    fn plus_assign(&mut self, o: &Self) {
        self.add_assign(o);
    }
}

impl Ring for RationalFunction {
    const MODE: &'static str = "ratfunc";
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, den) = self.common(o);
        let num = a.add(&b);
        if num.is_empty() {
            return Self::zero();
        }
        RationalFunction { num, den }
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.num);
        if num.is_empty() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RationalFunction { num, den }
    }
    fn negate(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_rat(r: Rat) -> Self {
        Self::constant(r)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.num.is_empty() {
            return None;
        }
        RationalFunction::from_poly(self.den()).divide_by_poly(&self.num).ok()
    }
    fn plus_assign(&mut self, o: &Self) {
        if o.is_zero() {
            return;
        }
        if self.den == o.den {
            self.num.add_assign(&o.num);
            if self.num.is_empty() {
                self.den.clear();
            }
        } else {
            *self = self.plus(o);
        }
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, ratio};

    fn s() -> LaurentPoly {
        LaurentPoly::var(Var::S(1), 1)
    }

    fn z(j: u8, e: i32) -> LaurentPoly {
        LaurentPoly::var(Var::Z(j), e)
    }

    fn pt(v: &[(Var, Rat)]) -> BTreeMap<Var, Rat> {
        v.iter().cloned().collect()
    }

    #[test]
    fn exact_div_examples() {
        let num = z(1, 2).sub(&z(1, -2));
        let den = z(1, 1).sub(&z(1, -1));
        assert_eq!(exact_div(&num, &den).unwrap(), z(1, 1).add(&z(1, -1)));

        let num = z(1, 1).add(&z(1, -1)).mul(&z(2, 1).add(&z(2, -1)));
        let den = z(2, 1).add(&z(2, -1));
        assert_eq!(exact_div(&num, &den).unwrap(), z(1, 1).add(&z(1, -1)));
    }

    #[test]
    fn exact_div_rejects_remainder() {
        let num = z(1, 2).add(&LaurentPoly::one());
        let den = z(1, 1).sub(&LaurentPoly::one());
        assert_eq!(exact_div(&num, &den), Err(Error::InexactDivision));
        assert_eq!(exact_div(&num, &LaurentPoly::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn normalize_examples() {
        let s2 = s().mul(&s());
        let r = rf_normalize(s2.scale(&rat(2)).sub(&LaurentPoly::constant(rat(2))), &s().scale(&rat(4)))
            .unwrap();
        assert!(r.is_polynomial());
        assert_eq!(*r.num(), s().scale(&ratio(1, 2)).sub(&LaurentPoly::var(Var::S(1), -1).scale(&ratio(1, 2))));

        let three = LaurentPoly::constant(rat(3));
        let a = rf_normalize(s2.sub(&LaurentPoly::one()).mul(&s().add(&three)), &s().mul(&s().add(&three)))
            .unwrap();
        let b = rf_normalize(s2.sub(&LaurentPoly::one()), &s()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.den_factors().len(), 0);

        let c = rf_normalize(LaurentPoly::one(), &s2.sub(&LaurentPoly::one())).unwrap();
        assert_eq!(c.den_factors().len(), 1);
        assert_eq!(rf_normalize(LaurentPoly::one(), &LaurentPoly::zero()).unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn eval_examples() {
        let p = s().sub(&LaurentPoly::var(Var::S(1), -1));
        assert_eq!(p.eval_at(&pt(&[(Var::S(1), rat(2))])).unwrap(), ratio(3, 2));

        let t = LaurentPoly::var(Var::S(1), 2);
        let one = LaurentPoly::one();
        let r = rf_normalize(t.add(&one), &t.sub(&one)).unwrap();
        assert_eq!(r.eval_at(&pt(&[(Var::S(1), rat(2))])).unwrap(), ratio(5, 3));
        assert!(matches!(r.eval_at(&pt(&[(Var::S(1), rat(1))])), Err(Error::Pole(_))));
        assert!(matches!(r.eval_at(&pt(&[])), Err(Error::UnboundVariable(_))));

        let ch = z(1, 1).add(&z(1, -1));
        assert_eq!(ch.eval_at(&pt(&[(Var::Z(1), rat(3))])).unwrap(), ratio(10, 3));
    }

    #[test]
    fn ratfunc_field_ops() {
        let t = LaurentPoly::var(Var::S(1), 2);
        let one = LaurentPoly::one();
        let a = rf_normalize(one.clone(), &t.sub(&one)).unwrap();
        let b = rf_normalize(one.clone(), &t.add(&one)).unwrap();
        let sum = a.plus(&b);
        let expect = rf_normalize(t.scale(&rat(2)), &t.mul(&t).sub(&one)).unwrap();
        assert_eq!(sum, expect);
        let inv = sum.try_inv().unwrap();
        assert_eq!(inv.times(&sum), RationalFunction::one());
        assert!(RationalFunction::zero().try_inv().is_none());
    }

    #[test]
    fn json_round_trip() {
        let p = z(2, 3).scale(&ratio(-3, 7)).add(&LaurentPoly::var(Var::S(1), -1));
        let j = serde_json::to_string(&p.to_json()).unwrap();
        let back: Vec<MonomialJson> = serde_json::from_str(&j).unwrap();
        assert_eq!(LaurentPoly::from_json(&back).unwrap(), p);
        assert!(j.contains("\"z2\":3"));
    }
}

//! n-point functions of types A, B, C, D and the level-½ base functions.

use super::eval::Evaluator;
use super::theta::{euler_inv, f_bo};
use crate::combinat::{half_norm2, Algebra, HalfInt, ModuleLabel};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::qseries::{doubled_indices, pochhammer, Offsets, QExp, QSeries};
use crate::ring::{rat, ratio, Ring};
use crate::weyl::{weyl_sum, WeylType};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// Fermion sector: half-integer (NS) or integer (R) modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sector {
    NS,
    R,
}

impl Sector {
    pub fn offsets(self) -> Offsets {
        match self {
            Sector::NS => Offsets::Integer,
            Sector::R => Offsets::HalfInteger,
        }
    }
}

/// The arguments u_i = s_i (t_i = s_i²) of an n-point function.
pub fn s_args(n: usize) -> Vec<Monomial> {
    (1..=n).map(|i| Monomial::var(Var::S(i as u8), 1)).collect()
}

/// Σ_ε [ε](Πt^ε)^k F_bo(q; t^ε), tabulated by the doubled index 2k.
pub struct FactorSum<'a, E: Evaluator> {
    ev: &'a E,
    order: QExp,
    args: Vec<Monomial>,
    /// (ε, F_bo(t^ε)) for every sign vector
    fbo: Vec<(Vec<i8>, QSeries<E::C>)>,
    memo: Mutex<HashMap<i64, QSeries<E::C>>>,
}

impl<'a, E: Evaluator> FactorSum<'a, E> {
    pub fn new(ev: &'a E, args: &[Monomial], order: QExp) -> Result<Self> {
        let n = args.len();
        let mut fbo = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let eps: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let targs: Vec<Monomial> = args.iter().zip(&eps).map(|(u, &e)| u.pow(e as i32)).collect();
            fbo.push((eps, f_bo(ev, &targs, order)?));
        }
        Ok(FactorSum { ev, order, args: args.to_vec(), fbo, memo: Mutex::new(HashMap::new()) })
    }

    pub fn order(&self) -> QExp {
        self.order
    }

    pub fn n(&self) -> usize {
        self.args.len()
    }

    /// The factor for k = k2/2.
    pub fn factor(&self, k2: i64) -> Result<QSeries<E::C>> {
        if let Some(s) = self.memo.lock().unwrap().get(&k2) {
            return Ok(s.clone());
        }
        let mut acc = QSeries::zero(self.order);
        for (eps, f) in &self.fbo {
            // (Π t_i^{ε_i})^k = Π u_i^{2k ε_i}
            let mut m = Monomial::one();
            for (u, &e) in self.args.iter().zip(eps) {
                m = m.mul(&u.pow(k2 as i32 * e as i32));
            }
            let sign: i64 = eps.iter().map(|&e| e as i64).product();
            let c = self.ev.monomial(&m)?.times(&E::C::from_rat(rat(sign)));
            acc.add_assign(&f.scale(&c));
        }
        self.memo.lock().unwrap().insert(k2, acc.clone());
        Ok(acc)
    }
}

/// Σ_σ (−1)^{ℓ(σ)} q^{‖λ+ρ−σρ‖²/2} Π_a factor(k_a) with k = λ+ρ−σρ over W(ty).
pub fn weyl_correlator<E: Evaluator>(
    ctx: &FactorSum<'_, E>,
    lambda: &[HalfInt],
    ty: WeylType,
) -> Result<QSeries<E::C>> {
    let order = ctx.order();
    let terms = weyl_sum(lambda, ty)?;
    let parts: Vec<Result<QSeries<E::C>>> = terms
        .par_iter()
        .filter(|t| t.qexp < order)
        .map(|t| {
            let rem = order - t.qexp;
            let mut prod = QSeries::one(rem);
            for k in &t.k {
                prod = prod.mul(&ctx.factor(k.doubled())?.truncate(rem));
            }
            Ok(prod.shift(t.qexp).scale_rat(&rat(t.sign as i64)))
        })
        .collect();
    let mut sum = QSeries::zero(order);
    for p in parts {
        sum.add_assign(&p?);
    }
    Ok(sum)
}

/// The type-A n-point function of level l and highest weight λ.
pub fn a_npoint<E: Evaluator>(ev: &E, lambda: &[i64], n: usize, order: QExp) -> Result<QSeries<E::C>> {
    let l = lambda.len();
    if l == 0 || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidLabel(format!("{lambda:?} is not a weakly decreasing vector of positive length")));
    }
    let hl: Vec<HalfInt> = lambda.iter().map(|&x| HalfInt::int(x)).collect();
    let shift = half_norm2(&hl);
    if shift >= order {
        return Ok(QSeries::zero(order));
    }
    let rem = order - shift;
    let size: i64 = lambda.iter().sum();
    let args = s_args(n);
    let mut m = Monomial::one();
    for u in &args {
        m = m.mul(&u.pow(2 * size as i32));
    }
    let mut s = QSeries::constant(ev.monomial(&m)?, rem);
    for i in 0..l {
        for j in i + 1..l {
            let e = lambda[i] - lambda[j] + (j - i) as i64;
            s = s.mul_one_minus(&E::C::one(), QExp::int(e));
        }
    }
    let fb = f_bo(ev, &args, rem)?;
    for _ in 0..l {
        s = s.mul(&fb);
    }
    Ok(s.shift(shift))
}

/// 𝐅(z, q; t) (NS) or 𝐅_b(z, q; t) (R) as a map from the doubled z-exponent 2k
/// to its q-series coefficient.
pub fn graded_trace_f<E: Evaluator>(
    ctx: &FactorSum<'_, E>,
    sector: Sector,
) -> Result<BTreeMap<i64, QSeries<E::C>>> {
    let order = ctx.order();
    let mut out = BTreeMap::new();
    for k2 in doubled_indices(sector.offsets(), order) {
        let e = QExp::from_sixteenths(2 * k2 * k2);
        let s = ctx.factor(k2)?.truncate(order - e).shift(e);
        out.insert(k2, s);
    }
    Ok(out)
}

/// The graded trace at z = 1.
pub fn graded_trace_at_one<E: Evaluator>(ctx: &FactorSum<'_, E>, sector: Sector) -> Result<QSeries<E::C>> {
    let mut s = QSeries::zero(ctx.order());
    for v in graded_trace_f(ctx, sector)?.values() {
        s.add_assign(v);
    }
    Ok(s)
}

/// Converts a graded trace to a series whose coefficients carry z = w² as w^{2k}.
pub fn graded_to_w(graded: &BTreeMap<i64, QSeries<LaurentPoly>>, w: Var, order: QExp) -> QSeries<LaurentPoly> {
    let mut s = QSeries::zero(order);
    for (&k2, series) in graded {
        s.add_assign(&series.map(|c| c.mul_monomial(&Monomial::var(w, k2 as i32))));
    }
    s
}

/// (−q^{1/2};q)_∞ or (−q;q)_∞ below `order`.
fn neg_poch<C: Ring>(start: QExp, order: QExp) -> QSeries<C> {
    pochhammer(&C::from_rat(rat(-1)), start, QExp::int(1), order).expect("valid pochhammer")
}

/// 𝔇^{½}_{(0)} (sector NS) or 𝔅^{½}_{(½)} (sector R) at the points `args`.
pub fn half_level_base<E: Evaluator>(
    ev: &E,
    sector: Sector,
    args: &[Monomial],
    order: QExp,
) -> Result<QSeries<E::C>> {
    // one sixteenth of headroom for the q^{∓1/16} shifts of the R sector
    let work = order + QExp::from_sixteenths(1);
    let n = args.len();
    let key = format!("half-level/{sector:?}/{}/{}/{:?}", ev.cache_tag(), work, args);
    if let Some(j) = crate::cache::load(&key) {
        if let Ok(s) = QSeries::from_json(&j) {
            return Ok(s.truncate(order));
        }
    }
    let (empty, pre) = match sector {
        Sector::NS => {
            let p = neg_poch::<E::C>(QExp::half(1), work);
            (p.clone(), p.inverse()?.scale_rat(&ratio(1, 2)))
        }
        Sector::R => {
            let p = neg_poch::<E::C>(QExp::int(1), work);
            let e = QExp::from_sixteenths(1);
            (p.shift(e).truncate(work), p.inverse()?.scale_rat(&ratio(1, 2)).shift(QExp::ZERO - e))
        }
    };
    let mut memo: Vec<Option<QSeries<E::C>>> = vec![None; 1 << n];
    memo[0] = Some(empty);
    for mask in 1usize..(1 << n) {
        let sub: Vec<Monomial> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| args[i]).collect();
        let ctx = FactorSum::new(ev, &sub, work)?;
        let mut acc = graded_trace_at_one(&ctx, sector)?;
        if sector == Sector::R {
            acc = acc.scale_rat(&ratio(1, 2));
        }
        // proper nonempty submasks
        let mut j = (mask - 1) & mask;
        while j > 0 {
            let a = memo[j].as_ref().unwrap();
            let b = memo[mask ^ j].as_ref().unwrap();
            acc = acc.sub(&a.mul(b));
            j = (j - 1) & mask;
        }
        memo[mask] = Some(acc.mul(&pre).truncate(work));
    }
    let result = memo.pop().unwrap().unwrap();
    crate::cache::store(&key, &result.to_json());
    Ok(result.truncate(order))
}

/// n-point functions at fixed points t_i = s_i², sharing the F_bo tables and the
/// level-½ base functions across labels.
pub struct Correlators<'a, E: Evaluator> {
    ev: &'a E,
    n: usize,
    ctx: FactorSum<'a, E>,
    bases: Mutex<HashMap<Sector, QSeries<E::C>>>,
}

impl<'a, E: Evaluator> Correlators<'a, E> {
    pub fn new(ev: &'a E, n: usize, order: QExp) -> Result<Self> {
        let ctx = FactorSum::new(ev, &s_args(n), order)?;
        Ok(Correlators { ev, n, ctx, bases: Mutex::new(HashMap::new()) })
    }

    pub fn factors(&self) -> &FactorSum<'a, E> {
        &self.ctx
    }

    pub fn half_base(&self, sector: Sector) -> Result<QSeries<E::C>> {
        if let Some(b) = self.bases.lock().unwrap().get(&sector) {
            return Ok(b.clone());
        }
        let b = half_level_base(self.ev, sector, &s_args(self.n), self.ctx.order())?;
        self.bases.lock().unwrap().insert(sector, b.clone());
        Ok(b)
    }

    /// The n-point function of the module `label`.
    pub fn get(&self, label: &ModuleLabel) -> Result<QSeries<E::C>> {
        label.validate()?;
        if label.det {
            return Err(Error::InvalidLabel(
                "the closed formulas describe the folded module; drop the det twist".into(),
            ));
        }
        let order = self.ctx.order();
        if label.algebra == Algebra::A {
            return a_npoint(self.ev, &label.lambda, self.n, order);
        }
        let weight = label.weight();
        let half = label.level.is_half();
        let (ty, base) = match (label.algebra, half) {
            (Algebra::D, false) => (WeylType::D, None),
            (Algebra::D, true) => (WeylType::B, Some(Sector::NS)),
            (Algebra::C, _) => (WeylType::C, None),
            (Algebra::B, false) => (WeylType::D, None),
            (Algebra::B, true) => (WeylType::B, Some(Sector::R)),
            (Algebra::A, _) => unreachable!(),
        };
        let sum = weyl_correlator(&self.ctx, &weight, ty)?;
        match base {
            None => Ok(sum),
            Some(sector) => Ok(self.half_base(sector)?.mul(&sum).truncate(order)),
        }
    }
}

/// The n-point function of the module `label` at the points t_i = s_i².
pub fn npoint<E: Evaluator>(ev: &E, label: &ModuleLabel, n: usize, order: QExp) -> Result<QSeries<E::C>> {
    label.validate()?;
    if label.algebra == Algebra::A && !label.det {
        return a_npoint(ev, &label.lambda, n, order);
    }
    Correlators::new(ev, n, order)?.get(label)
}

/// 1/(q;q)_∞ in the coefficient ring (the n = 0 type-A factor).
pub fn inverse_euler<E: Evaluator>(ev: &E, order: QExp) -> QSeries<E::C> {
    euler_inv(ev, order)
}

#[cfg(test)]
mod tests {
    use super::super::closed::{b_half_one_point_product, d_half_one_point_product};
    use super::super::eval::{Exact, PointEval};
    use super::*;
    use crate::combinat::Level;
    use crate::ring::Rat;

    fn label(a: Algebra, level: Level, lambda: Vec<i64>, spin: bool) -> ModuleLabel {
        ModuleLabel::new(a, level, lambda, false, spin).unwrap()
    }

    fn s1() -> Monomial {
        Monomial::var(Var::S(1), 1)
    }

    fn t_pow_sum(ev: &PointEval, k2: i32) -> Rat {
        ev.monomial(&s1().pow(k2)).unwrap() + ev.monomial(&s1().pow(-k2)).unwrap()
    }

    #[test]
    fn level_one_examples() {
        let order = QExp::int(6);
        let ev = PointEval::new(&[rat(2)]).unwrap();
        let f = f_bo(&ev, &[s1()], order).unwrap();
        let d0 = npoint(&ev, &label(Algebra::D, Level::int(1), vec![0], false), 1, order).unwrap();
        assert_eq!(d0, f.scale_rat(&rat(2)));
        let d2 = npoint(&ev, &label(Algebra::D, Level::int(1), vec![2], false), 1, order).unwrap();
        assert_eq!(d2, f.scale_rat(&t_pow_sum(&ev, 4)).shift(QExp::int(2)).truncate(order));
        let c1 = npoint(&ev, &label(Algebra::C, Level::int(1), vec![1], false), 1, order).unwrap();
        let expect = f
            .scale_rat(&t_pow_sum(&ev, 2))
            .shift(QExp::half(1))
            .sub(&f.scale_rat(&t_pow_sum(&ev, 6)).shift(QExp::half(9)))
            .truncate(order);
        assert_eq!(c1, expect);
        let b = npoint(&ev, &label(Algebra::B, Level::int(1), vec![0], true), 1, order).unwrap();
        let expect = f.scale_rat(&t_pow_sum(&ev, 1)).shift(QExp::from_sixteenths(2)).truncate(order);
        assert_eq!(b, expect);
    }

    #[test]
    fn a_level_one() {
        let order = QExp::int(5);
        let ev = PointEval::new(&[ratio(3, 2)]).unwrap();
        let a = a_npoint(&ev, &[1], 1, order).unwrap();
        let f = f_bo(&ev, &[s1()], order).unwrap();
        let t = ev.monomial(&s1().pow(2)).unwrap();
        assert_eq!(a, f.scale_rat(&t).shift(QExp::half(1)).truncate(order));
    }

    #[test]
    fn half_level_one_point_products() {
        let order = QExp::int(5);
        let d = half_level_base(&Exact, Sector::NS, &[s1()], order).unwrap();
        assert_eq!(d, d_half_one_point_product(&Exact, &s1(), order).unwrap());
        let b = half_level_base(&Exact, Sector::R, &[s1()], order).unwrap();
        assert_eq!(b, b_half_one_point_product(&Exact, &s1(), order).unwrap());
    }

    #[test]
    fn b_and_d_share_the_formula() {
        let order = QExp::int(4);
        let ev = PointEval::new(&[rat(2), rat(3)]).unwrap();
        let ctx = FactorSum::new(&ev, &s_args(2), order).unwrap();
        let w: Vec<HalfInt> = vec![HalfInt(3), HalfInt(1)];
        let b = npoint(&ev, &label(Algebra::B, Level::int(2), vec![1, 0], true), 2, order).unwrap();
        assert_eq!(b, weyl_correlator(&ctx, &w, WeylType::D).unwrap());
    }

    #[test]
    fn symmetric_in_points() {
        let order = QExp::int(3);
        let a = PointEval::new(&[rat(2), ratio(1, 3)]).unwrap();
        let b = PointEval::new(&[ratio(1, 3), rat(2)]).unwrap();
        for l in [
            label(Algebra::D, Level::int(2), vec![1, 0], false),
            label(Algebra::C, Level::int(2), vec![1, 1], false),
            label(Algebra::D, Level::half(1), vec![0], false),
        ] {
            assert_eq!(npoint(&a, &l, 2, order).unwrap(), npoint(&b, &l, 2, order).unwrap(), "{l}");
        }
    }
}

//! The theta function, its t·d/dt derivatives and the F_bo determinant.
//!
//! Θ is tabulated once per order as a series in q whose coefficients are
//! Laurent polynomials in the internal variable U = t^{1/2}; an argument is
//! then substituted as a monomial in the s-variables.

use super::eval::Evaluator;
use crate::error::Result;
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::qseries::{pochhammer, QExp, QSeries};
use crate::ring::{rat, Rat, Ring};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub struct ThetaTables {
    pub order: QExp,
    /// Θ^{(k)} for k = 0, 1, ...
    pub derivs: Vec<QSeries<LaurentPoly>>,
    /// (q;q)²/((qU²;q)(qU^{-2};q)), so that 1/Θ = P^{-1}/(U − U^{-1}).
    pub p_inv: QSeries<LaurentPoly>,
    /// 1/(q;q)_∞.
    pub euler_inv: QSeries<Rat>,
}

fn lift(s: &QSeries<Rat>) -> QSeries<LaurentPoly> {
    s.map(|c| LaurentPoly::constant(c.clone()))
}

/// (q;q)_∞ below `order`.
pub fn euler(order: QExp) -> QSeries<Rat> {
    pochhammer(&rat(1), QExp::int(1), QExp::int(1), order).expect("valid pochhammer")
}

fn build(order: QExp, max_k: usize) -> ThetaTables {
    let u2 = LaurentPoly::var(Var::U, 2);
    let um2 = LaurentPoly::var(Var::U, -2);
    let qq = euler(order);
    let euler_inv = qq.inverse().expect("unit constant term");
    let a = pochhammer(&u2, QExp::int(1), QExp::int(1), order).expect("valid pochhammer");
    let b = pochhammer(&um2, QExp::int(1), QExp::int(1), order).expect("valid pochhammer");
    let ab = a.mul(&b);
    let p = ab.mul(&lift(&euler_inv.mul(&euler_inv)));
    let p_inv = ab.inverse().expect("unit constant term").mul(&lift(&qq.mul(&qq)));
    let half_diff = LaurentPoly::var(Var::U, 1).sub(&LaurentPoly::var(Var::U, -1));
    let mut derivs = vec![p.scale(&half_diff)];
    for k in 1..=max_k {
        let prev = &derivs[k - 1];
        derivs.push(prev.map(|c| c.half_euler(Var::U)));
    }
    ThetaTables { order, derivs, p_inv, euler_inv }
}

/// Shared tables with at least `max_k` derivatives.
pub fn tables(order: QExp, max_k: usize) -> Arc<ThetaTables> {
    type Cache = Mutex<HashMap<QExp, Arc<ThetaTables>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&order) {
        if t.derivs.len() > max_k {
            return t.clone();
        }
    }
    let t = Arc::new(build(order, max_k.max(5)));
    cache.lock().unwrap().insert(order, t.clone());
    t
}

fn subst<E: Evaluator>(ev: &E, s: &QSeries<LaurentPoly>, u: &Monomial) -> Result<QSeries<E::C>> {
    s.try_map(|c| ev.subst_u(c, u))
}

/// Θ(t) with t = u².
pub fn theta<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    theta_k(ev, 0, u, order)
}

/// (t·d/dt)^k Θ(t) with t = u².
pub fn theta_k<E: Evaluator>(ev: &E, k: usize, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    subst(ev, &tables(order, k).derivs[k], u)
}

/// 1/Θ(t) with t = u².
pub fn theta_inv<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let t = tables(order, 0);
    Ok(subst(ev, &t.p_inv, u)?.scale(&ev.inv_half_diff(u)?))
}

/// 1/(q;q)_∞ in the coefficient ring.
pub fn euler_inv<E: Evaluator>(_ev: &E, order: QExp) -> QSeries<E::C> {
    tables(order, 0).euler_inv.map(|c| E::C::from_rat(c.clone()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn factorial(k: usize) -> Rat {
    (1..=k as i64).fold(rat(1), |a, b| a * rat(b))
}

/// Determinant of an upper Hessenberg matrix given by entry(i, j), 1-based.
fn hessenberg_det<C: Ring>(
    n: usize,
    entry: impl Fn(usize, usize) -> Result<QSeries<C>>,
    trunc: QExp,
) -> Result<QSeries<C>> {
    let mut d = vec![QSeries::one(trunc)];
    for k in 1..=n {
        let mut acc = QSeries::zero(trunc);
        // running product of subdiagonal entries a_{j+1,j} for j = i..k-1
        let mut sub = QSeries::one(trunc);
        for i in (1..=k).rev() {
            if i < k {
                sub = sub.mul(&entry(i + 1, i)?);
            }
            let term = entry(i, k)?.mul(&sub).mul(&d[i - 1]);
            if (k - i) % 2 == 0 {
                acc.add_assign(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        d.push(acc);
    }
    Ok(d.pop().unwrap())
}

/// F_bo(q; t_1, ..., t_n) with t_i = u_i²; for n = 0 this is 1/(q;q)_∞.
pub fn f_bo<E: Evaluator>(ev: &E, args: &[Monomial], order: QExp) -> Result<QSeries<E::C>> {
    let n = args.len();
    let tab = tables(order, n);
    let euler = euler_inv(ev, order);
    if n == 0 {
        return Ok(euler);
    }
    let terms: Vec<Result<QSeries<E::C>>> = permutations(n)
        .into_par_iter()
        .map(|sigma| {
            // x[m] = u_{σ(1)}···u_{σ(m)}
            let mut x = vec![Monomial::one()];
            for &i in &sigma {
                let last = *x.last().unwrap();
                x.push(last.mul(&args[i]));
            }
            let mut cache: HashMap<(usize, usize), QSeries<E::C>> = HashMap::new();
            let mut get = |k: usize, m: usize| -> Result<QSeries<E::C>> {
                if let Some(s) = cache.get(&(k, m)) {
                    return Ok(s.clone());
                }
                let s = subst(ev, &tab.derivs[k], &x[m])?.scale_rat(&factorial(k).recip());
                cache.insert((k, m), s.clone());
                Ok(s)
            };
            let mut entries: HashMap<(usize, usize), QSeries<E::C>> = HashMap::new();
            for i in 1..=n {
                for j in (i.saturating_sub(1)).max(1)..=n {
                    entries.insert((i, j), get(j + 1 - i, n - j)?);
                }
            }
            let det = hessenberg_det(n, |i, j| Ok(entries[&(i, j)].clone()), order)?;
            let mut acc = det;
            for xm in &x[1..] {
                let inv = subst(ev, &tab.p_inv, xm)?.scale(&ev.inv_half_diff(xm)?);
                acc = acc.mul(&inv);
            }
            Ok(acc)
        })
        .collect();
    let mut sum = QSeries::zero(order);
    for t in terms {
        sum.add_assign(&t?);
    }
    Ok(sum.mul(&euler))
}

#[cfg(test)]
mod tests {
    use super::super::eval::{Exact, PointEval};
    use super::*;
    use crate::laurent::RationalFunction;
    use crate::ring::ratio;

    fn s(i: u8) -> Monomial {
        Monomial::var(Var::S(i), 1)
    }

    #[test]
    fn theta_first_orders() {
        let order = QExp::int(2);
        let th = theta(&Exact, &s(1), order).unwrap();
        let d = LaurentPoly::var(Var::S(1), 1).sub(&LaurentPoly::var(Var::S(1), -1));
        assert_eq!(th.coeff(QExp::ZERO), RationalFunction::from_poly(d.clone()));
        assert_eq!(th.coeff(QExp::int(1)), RationalFunction::from_poly(d.pow(3).neg()));
        let inv = theta(&Exact, &s(1).inv(), order).unwrap();
        assert_eq!(inv, th.neg());
        let d1 = theta_k(&Exact, 1, &s(1), order).unwrap();
        let half_sum = LaurentPoly::var(Var::S(1), 1).add(&LaurentPoly::var(Var::S(1), -1)).scale(&ratio(1, 2));
        assert_eq!(d1.coeff(QExp::ZERO), RationalFunction::from_poly(half_sum));
    }

    #[test]
    fn theta_derivatives_at_one() {
        let order = QExp::int(6);
        let one = Monomial::one();
        let ev = PointEval::new(&[]).unwrap();
        assert!(theta(&ev, &one, order).unwrap().is_zero());
        assert_eq!(theta_k(&ev, 1, &one, order).unwrap(), QSeries::one(order));
        assert!(theta_k(&ev, 2, &one, order).unwrap().is_zero());
    }

    #[test]
    fn one_point_is_inverse_theta() {
        let order = QExp::int(5);
        let ev = PointEval::new(&[rat(2)]).unwrap();
        let f = f_bo(&ev, &[s(1)], order).unwrap();
        assert_eq!(f.coeff(QExp::ZERO), ratio(2, 3));
        let th = theta(&ev, &s(1), order).unwrap();
        let prod = f.mul(&th).mul(&euler(order).map(|c| c.clone()));
        assert_eq!(prod, QSeries::one(order));
        let g = f_bo(&ev, &[s(1).inv()], order).unwrap();
        assert_eq!(g, f.neg());
    }

    #[test]
    fn two_point_symmetric_and_closed_form() {
        let order = QExp::int(4);
        let ev = PointEval::new(&[rat(2), ratio(3, 5)]).unwrap();
        let a = f_bo(&ev, &[s(1), s(2)], order).unwrap();
        let b = f_bo(&ev, &[s(2), s(1)], order).unwrap();
        assert_eq!(a, b);
        // (1/(q;q))·[Θ'(t1)/Θ(t1) + Θ'(t2)/Θ(t2)]/Θ(t1 t2)
        let log_d = |u: &Monomial| {
            theta_k(&ev, 1, u, order).unwrap().mul(&theta_inv(&ev, u, order).unwrap())
        };
        let closed = log_d(&s(1))
            .add(&log_d(&s(2)))
            .mul(&theta_inv(&ev, &s(1).mul(&s(2)), order).unwrap())
            .mul(&euler_inv(&ev, order));
        assert_eq!(a, closed);
    }

    #[test]
    fn three_point_symmetric() {
        let order = QExp::int(3);
        let ev = PointEval::new(&[rat(2), ratio(3, 5), rat(7)]).unwrap();
        let a = f_bo(&ev, &[s(1), s(2), s(3)], order).unwrap();
        let b = f_bo(&ev, &[s(3), s(1), s(2)], order).unwrap();
        assert_eq!(a, b);
    }
}

//! Closed product and sum forms: level-½ one-point functions, the two product/sum
//! q-identities and the refined level-1 functions.
//!
//! Every function takes a single argument u with t = u².

use super::eval::Evaluator;
use super::theta::{euler, f_bo};
use crate::combinat::{frobenius, partitions_of};
use crate::error::Result;
use crate::laurent::{LaurentPoly, Monomial};
use crate::qseries::{pochhammer, QExp, QSeries, Sides};
use crate::ring::{rat, ratio, Rat, Ring};

fn poch<E: Evaluator>(ev: &E, a: Rat, x: &Monomial, start: QExp, step: QExp, order: QExp) -> Result<QSeries<E::C>> {
    // (a·x·q^start; q^step)_∞
    let prefix = ev.monomial(x)?.times(&E::C::from_rat(a));
    pochhammer(&prefix, start, step, order)
}

fn lift<E: Evaluator>(s: &QSeries<Rat>) -> QSeries<E::C> {
    s.map(|c| E::C::from_rat(c.clone()))
}

fn mono(u: &Monomial, e: i32) -> LaurentPoly {
    LaurentPoly::monomial(u.pow(e))
}

/// (t+1)/(t−1).
fn t_ratio<E: Evaluator>(ev: &E, u: &Monomial) -> Result<E::C> {
    let num = mono(u, 2).add(&LaurentPoly::one());
    let den = mono(u, 2).sub(&LaurentPoly::one());
    Ok(ev.poly(&num)?.times(&ev.inv_poly(&den)?))
}

/// Σ_{r≥0} (−1)^r [f(q^{r+1}t) − f(q^{r+1}t^{−1})] with f(x) = x^{1/2}/(1−x) (`half`)
/// or f(x) = x/(1−x), expanded as Σ_{m} x^m.
fn alternating_bracket<E: Evaluator>(ev: &E, u: &Monomial, half: bool, order: QExp) -> Result<QSeries<E::C>> {
    let mut s = QSeries::zero(order);
    let mut r = 1i64;
    while QExp::int(r) < order || (half && QExp::half(r) < order) {
        let sign = if r % 2 == 1 { 1 } else { -1 };
        // x = q^r t^{±1}; f(x) = Σ_m x^{m + ½} or Σ_{m≥1} x^m
        let mut m = 0i64;
        loop {
            let (pe, te) = if half { (QExp::half(r * (2 * m + 1)), 2 * m + 1) } else { (QExp::int(r * (m + 1)), 2 * (m + 1)) };
            if pe >= order {
                break;
            }
            let c = ev.poly(&mono(u, te as i32).sub(&mono(u, -(te as i32))))?;
            s.add_term(pe, c.times(&E::C::from_rat(rat(sign))));
            m += 1;
        }
        r += 1;
    }
    Ok(s)
}

/// (−q^{1/2}t;q)_∞(−q^{1/2}t^{−1};q)_∞ / ((−q^{1/2};q)_∞ Θ(t)).
pub fn d_half_one_point_product<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let a = poch(ev, rat(-1), &u.pow(2), QExp::half(1), QExp::int(1), order)?;
    let b = poch(ev, rat(-1), &u.pow(-2), QExp::half(1), QExp::int(1), order)?;
    let c = poch(ev, rat(-1), &Monomial::one(), QExp::half(1), QExp::int(1), order)?;
    let inv_theta = f_bo(ev, &[*u], order)?.mul(&lift::<E>(&euler(order)));
    Ok(a.mul(&b).mul(&c.inverse()?).mul(&inv_theta))
}

/// q^{1/16}(−qt;q)_∞(−t^{−1};q)_∞(q;q)²_∞ / (2(qt;q)_∞(t^{−1};q)_∞(−q;q)_∞).
pub fn b_half_one_point_product<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let one = QExp::int(1);
    let t = u.pow(2);
    let ti = u.pow(-2);
    // (−t^{−1};q)/(t^{−1};q) = (t+1)/(t−1) · (−qt^{−1};q)/(qt^{−1};q)
    let num = poch(ev, rat(-1), &t, one, one, order)?.mul(&poch(ev, rat(-1), &ti, one, one, order)?);
    let den = poch(ev, rat(1), &t, one, one, order)?
        .mul(&poch(ev, rat(1), &ti, one, one, order)?)
        .mul(&poch(ev, rat(-1), &Monomial::one(), one, one, order)?);
    let qq = lift::<E>(&euler(order));
    let s = num.mul(&qq).mul(&qq).mul(&den.inverse()?).scale(&t_ratio(ev, u)?).scale_rat(&ratio(1, 2));
    Ok(s.shift(QExp::from_sixteenths(1)).truncate(order))
}

/// (−q^{1/2};q)_∞ (1/(t^{1/2}−t^{−1/2}) + Σ_r (−1)^r[(q^{r+1}t)^{1/2}/(1−q^{r+1}t) − (t ↦ t^{−1})]).
pub fn d_half_one_point_sum<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let mut s = alternating_bracket(ev, u, true, order)?;
    s.add_term(QExp::ZERO, ev.inv_half_diff(u)?);
    let c = poch(ev, rat(-1), &Monomial::one(), QExp::half(1), QExp::int(1), order)?;
    Ok(c.mul(&s))
}

/// q^{1/16}(−q;q)_∞ ((t+1)/(2(t−1)) + Σ_r (−1)^r[q^{r+1}t/(1−q^{r+1}t) − (t ↦ t^{−1})]).
pub fn b_half_one_point_sum<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let mut s = alternating_bracket(ev, u, false, order)?;
    s.add_term(QExp::ZERO, t_ratio(ev, u)?.times(&E::C::from_rat(ratio(1, 2))));
    let c = poch(ev, rat(-1), &Monomial::one(), QExp::int(1), QExp::int(1), order)?;
    Ok(c.mul(&s).shift(QExp::from_sixteenths(1)).truncate(order))
}

/// Both sides of the type-D product/sum q-identity.
pub fn q_identity_d<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<Sides<E::C>> {
    let one = QExp::int(1);
    let h = QExp::half(1);
    let num = poch(ev, rat(-1), &u.pow(2), h, one, order)?.mul(&poch(ev, rat(-1), &u.pow(-2), h, one, order)?);
    let qq = lift::<E>(&euler(order));
    let c = poch(ev, rat(-1), &Monomial::one(), h, one, order)?;
    let den = poch(ev, rat(1), &u.pow(2), one, one, order)?
        .mul(&poch(ev, rat(1), &u.pow(-2), one, one, order)?)
        .mul(&c)
        .mul(&c);
    let lhs = num.mul(&qq).mul(&qq).mul(&den.inverse()?);
    let diff = ev.poly(&mono(u, 1).sub(&mono(u, -1)))?;
    let mut rhs = alternating_bracket(ev, u, true, order)?.scale(&diff);
    rhs.add_term(QExp::ZERO, E::C::one());
    Ok((lhs, rhs))
}

/// Both sides of the type-B product/sum q-identity.
pub fn q_identity_b<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<Sides<E::C>> {
    let one = QExp::int(1);
    let t = u.pow(2);
    let ti = u.pow(-2);
    let num = poch(ev, rat(-1), &t, one, one, order)?.mul(&poch(ev, rat(-1), &ti, one, one, order)?);
    let c = poch(ev, rat(-1), &Monomial::one(), one, one, order)?;
    let den = poch(ev, rat(1), &t, one, one, order)?
        .mul(&poch(ev, rat(1), &ti, one, one, order)?)
        .mul(&c)
        .mul(&c);
    let qq = lift::<E>(&euler(order));
    let lhs = num.mul(&qq).mul(&qq).mul(&den.inverse()?).scale(&t_ratio(ev, u)?);
    let mut rhs = alternating_bracket(ev, u, false, order)?.scale_rat(&rat(2));
    rhs.add_term(QExp::ZERO, t_ratio(ev, u)?);
    Ok((lhs, rhs))
}

/// t·d/dt ln(1 − a q^r u^β) with t = u².
fn log_deriv<E: Evaluator>(ev: &E, a: i64, r: QExp, beta: i32, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let half_beta = ratio(beta as i64, 2);
    let mut s = QSeries::zero(order);
    if r == QExp::ZERO {
        // −(β/2)·a u^β/(1 − a u^β)
        let x = LaurentPoly::term(u.pow(beta), rat(a));
        let den = LaurentPoly::one().sub(&x);
        let c = ev.poly(&x)?.times(&ev.inv_poly(&den)?).times(&E::C::from_rat(-half_beta));
        s.add_term(QExp::ZERO, c);
        return Ok(s);
    }
    // −(β/2) Σ_{m≥1} a^m q^{rm} u^{βm}
    let mut m = 1i64;
    while r.scale(m) < order {
        let c = LaurentPoly::term(u.pow(beta * m as i32), -half_beta.clone() * rat(a.pow(m as u32)));
        s.add_term(r.scale(m), ev.poly(&c)?);
        m += 1;
    }
    Ok(s)
}

/// Σ over the factors (1 − a q^{start + step·j} u^β), j ≥ 0, of their log-derivatives.
fn log_deriv_poch<E: Evaluator>(
    ev: &E,
    a: i64,
    beta: i32,
    start: QExp,
    step: QExp,
    u: &Monomial,
    order: QExp,
) -> Result<QSeries<E::C>> {
    let mut s = QSeries::zero(order);
    let mut e = start;
    while e < order {
        s.add_assign(&log_deriv(ev, a, e, beta, u, order)?);
        e = e + step;
    }
    Ok(s)
}

/// 2t·d/dt ln(t^{−1/2}(t;q²)_∞(q²t^{−1};q²)_∞ / ((qt;q²)_∞(qt^{−1};q²)_∞)).
pub fn q_identity_b_log_form<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let two = QExp::int(2);
    let mut s = QSeries::constant(E::C::from_rat(ratio(-1, 2)), order);
    s.add_assign(&log_deriv_poch(ev, 1, 2, QExp::ZERO, two, u, order)?);
    s.add_assign(&log_deriv_poch(ev, 1, -2, two, two, u, order)?);
    s = s.sub(&log_deriv_poch(ev, 1, 2, QExp::int(1), two, u, order)?);
    s = s.sub(&log_deriv_poch(ev, 1, -2, QExp::int(1), two, u, order)?);
    Ok(s.scale_rat(&rat(2)))
}

/// (q;q²)_∞.
pub fn q_odd_poch(order: QExp) -> QSeries<Rat> {
    pochhammer(&rat(1), QExp::int(1), QExp::int(2), order).expect("valid pochhammer")
}

/// :G(t): = 2(q;q²)_∞ Σ_{n≥1} q^{2n−1}(t^{−n+½} − t^{n−½})/(1−q^{2n−1}).
pub fn normal_ordered_g<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let mut s = QSeries::zero(order);
    let mut n = 1i64;
    while QExp::int(2 * n - 1) < order {
        let c = ev.poly(&mono(u, -(2 * n as i32 - 1)).sub(&mono(u, 2 * n as i32 - 1)))?;
        // q^{2n−1}/(1−q^{2n−1}) = Σ_{m≥1} q^{m(2n−1)}
        let mut m = 1i64;
        while QExp::int(m * (2 * n - 1)) < order {
            s.add_term(QExp::int(m * (2 * n - 1)), c.clone());
            m += 1;
        }
        n += 1;
    }
    Ok(s.mul(&lift::<E>(&q_odd_poch(order))).scale_rat(&rat(2)))
}

/// :G(t): as 2Σ_{λ=λ^t} (−1)^{rk λ} q^{|λ|} Σ_{i≤rk λ}(t^{λ_i−i+½} − t^{−(λ_i−i+½)}).
pub fn normal_ordered_g_partitions<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let mut s = QSeries::zero(order);
    let mut size = 0u32;
    while QExp::int(size as i64) < order {
        for lam in partitions_of(size).into_iter().filter(|p| p.is_symmetric()) {
            let f = frobenius(&lam);
            let mut p = LaurentPoly::zero();
            for x in &f.p {
                // t^{x} = u^{2x}
                p = p.add(&mono(u, x.doubled() as i32)).sub(&mono(u, -(x.doubled() as i32)));
            }
            let sign = if lam.rank() % 2 == 0 { 2 } else { -2 };
            s.add_term(QExp::int(size as i64), ev.poly(&p.scale(&rat(sign)))?);
        }
        size += 1;
    }
    Ok(s)
}

/// G(t) = :G(t): + (q;q²)_∞·2/(t^{1/2}−t^{−1/2}).
pub fn refined_g<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let central = lift::<E>(&q_odd_poch(order)).scale(&ev.inv_half_diff(u)?).scale_rat(&rat(2));
    Ok(normal_ordered_g(ev, u, order)?.add(&central))
}

/// ½(𝔇¹_{(0)}(q,t) ± G(t)).
pub fn refined_level1<E: Evaluator>(ev: &E, plus: bool, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let d = f_bo(ev, &[*u], order)?.scale_rat(&rat(2));
    let g = refined_g(ev, u, order)?;
    let s = if plus { d.add(&g) } else { d.sub(&g) };
    Ok(s.scale_rat(&ratio(1, 2)))
}

/// t d/dt ln[(−t^{−½};q)(−qt^{½};q)/((t^{−½};q)(qt^{½};q))], the logarithmic
/// derivative printed in the refined level-1 formula.
pub fn refined_log_derivative<E: Evaluator>(ev: &E, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let one = QExp::int(1);
    let mut l = log_deriv_poch(ev, -1, -1, QExp::ZERO, one, u, order)?;
    l.add_assign(&log_deriv_poch(ev, -1, 1, one, one, u, order)?);
    l = l.sub(&log_deriv_poch(ev, 1, -1, QExp::ZERO, one, u, order)?);
    l = l.sub(&log_deriv_poch(ev, 1, 1, one, one, u, order)?);
    Ok(l)
}

/// 1/((q;q)_∞Θ(t)) ∓ (q;q²)_∞·[`refined_log_derivative`]: the printed log-derivative
/// form with its ratio inverted, which is what equals ½(𝔇¹_{(0)} ± G).
pub fn refined_level1_log_form<E: Evaluator>(ev: &E, plus: bool, u: &Monomial, order: QExp) -> Result<QSeries<E::C>> {
    let g = refined_log_derivative(ev, u, order)?.mul(&lift::<E>(&q_odd_poch(order)));
    let f = f_bo(ev, &[*u], order)?;
    Ok(if plus { f.sub(&g) } else { f.add(&g) })
}

/// The log-derivative form exactly as printed, with ± in front of the log term.
pub fn refined_level1_log_form_literal<E: Evaluator>(
    ev: &E,
    plus: bool,
    u: &Monomial,
    order: QExp,
) -> Result<QSeries<E::C>> {
    let g = refined_log_derivative(ev, u, order)?.mul(&lift::<E>(&q_odd_poch(order)));
    let f = f_bo(ev, &[*u], order)?;
    Ok(if plus { f.add(&g) } else { f.sub(&g) })
}

#[cfg(test)]
mod tests {
    use super::super::eval::{Exact, PointEval};
    use super::*;
    use crate::laurent::Var;

    fn s1() -> Monomial {
        Monomial::var(Var::S(1), 1)
    }

    #[test]
    fn corollaries_low_order() {
        let order = QExp::int(5);
        let (l, r) = q_identity_d(&Exact, &s1(), order).unwrap();
        assert_eq!(l, r);
        let (l, r) = q_identity_b(&Exact, &s1(), order).unwrap();
        assert_eq!(l, r);
        assert_eq!(q_identity_b_log_form(&Exact, &s1(), order).unwrap(), r);
    }

    #[test]
    fn one_point_half_level_forms_agree() {
        let order = QExp::int(5);
        let ev = PointEval::new(&[ratio(5, 3)]).unwrap();
        let a = d_half_one_point_product(&ev, &s1(), order).unwrap();
        assert_eq!(a, d_half_one_point_sum(&ev, &s1(), order).unwrap());
        let b = b_half_one_point_product(&ev, &s1(), order).unwrap();
        assert_eq!(b, b_half_one_point_sum(&ev, &s1(), order).unwrap());
    }

    #[test]
    fn refined_forms_agree() {
        let order = QExp::int(6);
        let ev = PointEval::new(&[rat(3)]).unwrap();
        assert_eq!(normal_ordered_g(&ev, &s1(), order).unwrap(), normal_ordered_g_partitions(&ev, &s1(), order).unwrap());
        for plus in [true, false] {
            assert_eq!(
                refined_level1(&ev, plus, &s1(), order).unwrap(),
                refined_level1_log_form(&ev, plus, &s1(), order).unwrap()
            );
        }
        // the printed orientation swaps the two eigenspaces
        assert_eq!(
            refined_level1_log_form_literal(&ev, true, &s1(), order).unwrap(),
            refined_level1(&ev, false, &s1(), order).unwrap()
        );
        let g = refined_g(&Exact, &s1(), order).unwrap();
        assert_eq!(g.coeff(QExp::ZERO), Exact.inv_half_diff(&s1()).unwrap().times(&Exact.constant(rat(2))));
    }
}

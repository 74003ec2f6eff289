//! q-dimensions from the Weyl-sum and product forms.

use super::eval::PointEval;
use super::npoint::npoint;
use super::theta::euler;
use crate::combinat::{half_norm2, Algebra, HalfInt, ModuleLabel};
use crate::error::{Error, Result};
use crate::qseries::{pochhammer, QExp, QSeries};
use crate::ring::{rat, Rat};
use crate::weyl::{weyl_sum, weyl_sum_product_form, weyl_sum_series, WeylType};

/// The two forms of a q-dimension.
#[derive(Clone, Debug)]
pub struct QDim {
    pub weyl_form: QSeries<Rat>,
    pub product_form: QSeries<Rat>,
}

fn prefactor(label: &ModuleLabel, order: QExp) -> Result<QSeries<Rat>> {
    let l = label.l() as u32;
    let inv = euler(order).inverse()?.pow(l);
    let extra = match (label.algebra, label.level.is_half()) {
        (Algebra::D, true) => pochhammer(&rat(-1), QExp::half(1), QExp::int(1), order)?,
        (Algebra::B, true) => pochhammer(&rat(-1), QExp::int(1), QExp::int(1), order)?
            .shift(QExp::from_sixteenths(1))
            .truncate(order),
        _ => QSeries::one(order),
    };
    Ok(inv.mul(&extra))
}

fn weyl_type(label: &ModuleLabel) -> Option<WeylType> {
    match (label.algebra, label.level.is_half()) {
        (Algebra::A, _) => None,
        (Algebra::D, false) | (Algebra::B, false) => Some(WeylType::D),
        (Algebra::D, true) | (Algebra::B, true) => Some(WeylType::B),
        (Algebra::C, _) => Some(WeylType::C),
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting the largest element before (len − pos) others
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Type A: Σ_{σ∈S_l} (−1)^σ q^{‖λ+ρ−σρ‖²/2} and q^{‖λ‖²/2}Π_{i<j}(1−q^{λ_i−λ_j+j−i}).
fn type_a_forms(lambda: &[i64], order: QExp) -> (QSeries<Rat>, QSeries<Rat>) {
    let l = lambda.len();
    let rho: Vec<i64> = (0..l).map(|i| (l - 1 - i) as i64).collect();
    let mut sum = QSeries::zero(order);
    for (p, sign) in permutations(l) {
        let k: Vec<HalfInt> = (0..l).map(|i| HalfInt::int(lambda[i] + rho[i] - rho[p[i]])).collect();
        sum.add_term(half_norm2(&k), rat(sign));
    }
    let hl: Vec<HalfInt> = lambda.iter().map(|&x| HalfInt::int(x)).collect();
    let mut prod = QSeries::monomial(half_norm2(&hl), rat(1), order);
    for i in 0..l {
        for j in i + 1..l {
            prod = prod.mul_one_minus(&rat(1), QExp::int(lambda[i] - lambda[j] + (j - i) as i64));
        }
    }
    (sum, prod)
}

/// Both forms of dim_q, checked against each other.
pub fn qdim_forms(label: &ModuleLabel, order: QExp) -> Result<QDim> {
    label.validate()?;
    let pre = prefactor(label, order)?;
    let (sum, prod) = match weyl_type(label) {
        None => type_a_forms(&label.lambda, order),
        Some(ty) => {
            let w = label.weight();
            (weyl_sum_series(&weyl_sum(&w, ty)?, order), weyl_sum_product_form(&w, ty, order)?)
        }
    };
    let q = QDim { weyl_form: pre.mul(&sum).truncate(order), product_form: pre.mul(&prod).truncate(order) };
    if let Some(m) = q.weyl_form.first_mismatch(&q.product_form, order) {
        return Err(Error::Internal(format!("q-dimension forms of {label} differ at q^{}", m.exp)));
    }
    Ok(q)
}

/// dim_q of the module `label`.
pub fn qdim(label: &ModuleLabel, order: QExp) -> Result<QSeries<Rat>> {
    Ok(qdim_forms(label, order)?.weyl_form)
}

/// dim_q compared with the zero-point correlator.
pub fn qdim_consistency(label: &ModuleLabel, order: QExp) -> Result<Option<QExp>> {
    let q = qdim(label, order)?;
    let ev = PointEval::new(&[])?;
    let c = npoint(&ev, label, 0, order)?;
    Ok(q.first_mismatch(&c, order).map(|m| m.exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Level;

    #[test]
    fn examples() {
        let order = QExp::int(8);
        let d = ModuleLabel::new(Algebra::D, Level::int(1), vec![0], false, false).unwrap();
        assert_eq!(qdim(&d, order).unwrap(), euler(order).inverse().unwrap());
        let c = ModuleLabel::new(Algebra::C, Level::int(1), vec![2], false, false).unwrap();
        let expect = QSeries::monomial(QExp::int(2), rat(1), order)
            .mul_one_minus(&rat(1), QExp::int(6))
            .mul(&euler(order).inverse().unwrap());
        assert_eq!(qdim(&c, order).unwrap(), expect);
        let b = ModuleLabel::new(Algebra::B, Level::half(0), vec![], false, true).unwrap();
        let expect = pochhammer(&rat(-1), QExp::int(1), QExp::int(1), order)
            .unwrap()
            .shift(QExp::from_sixteenths(1))
            .truncate(order);
        assert_eq!(qdim(&b, order).unwrap(), expect);
    }

    #[test]
    fn zero_point_correlators_match() {
        let order = QExp::int(6);
        let labels = [
            ModuleLabel::new(Algebra::A, Level::int(2), vec![2, 1], false, false),
            ModuleLabel::new(Algebra::D, Level::int(2), vec![1, 0], false, false),
            ModuleLabel::new(Algebra::D, Level::half(1), vec![1], false, false),
            ModuleLabel::new(Algebra::C, Level::int(2), vec![1, 1], false, false),
            ModuleLabel::new(Algebra::B, Level::int(2), vec![1, 0], false, true),
            ModuleLabel::new(Algebra::B, Level::half(1), vec![0], false, true),
        ];
        for l in labels {
            let l = l.unwrap();
            assert_eq!(qdim_consistency(&l, order).unwrap(), None, "{l}");
        }
    }
}

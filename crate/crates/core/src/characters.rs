//! Determinant-ratio characters of the classical groups acting on Fock spaces.
//!
//! Characters are returned in the variables z_j when every exponent is an
//! integer and in w_j (z_j = w_j²) otherwise.

use crate::combinat::{HalfInt, ModuleLabel};
use crate::error::{Error, Result};
use crate::laurent::{exact_div, LaurentPoly, Monomial, MonomialJson, Var};
use crate::ring::{rat, Ring};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Family {
    SO2l,
    O2l,
    /// O(2l+1), equivalently Spin(2l+1) restricted to the torus.
    B,
    Sp2l,
    Pin2l,
}

fn w(j: usize) -> Var {
    Var::W(j as u8 + 1)
}

/// Row exponents doubled, i.e. the w-exponents.
fn binomial_entry(a: HalfInt, j: usize, sign: i64) -> LaurentPoly {
    LaurentPoly::binomial(w(j), a.doubled() as i32, sign)
}

/// |x_j^{a_i} + sign·x_j^{−a_i}| in the w-variables.
pub fn binomial_det(a: &[HalfInt], sign: i64) -> LaurentPoly {
    let l = a.len();
    let m: Vec<Vec<LaurentPoly>> =
        (0..l).map(|i| (0..l).map(|j| binomial_entry(a[i], j, sign)).collect()).collect();
    if l <= 4 {
        leibniz(&m)
    } else {
        bareiss(m)
    }
}

fn leibniz(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    fn go(m: &[Vec<LaurentPoly>], row: usize, used: &mut [bool], acc: LaurentPoly, sign: i64, out: &mut LaurentPoly) {
        if acc.is_empty() {
            return;
        }
        if row == m.len() {
            out.add_assign(&acc.scale(&rat(sign)));
            return;
        }
        let mut s = sign;
        for j in 0..m.len() {
            if used[j] {
                continue;
            }
            // parity of the number of still-unused columns before j
            used[j] = true;
            go(m, row + 1, used, acc.mul(&m[row][j]), s, out);
            used[j] = false;
            s = -s;
        }
    }
    let mut out = LaurentPoly::zero();
    go(m, 0, &mut vec![false; m.len()], LaurentPoly::one(), 1, &mut out);
    out
}

fn bareiss(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    let mut sign = 1;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&r| !m[r][k].is_empty()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return LaurentPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = exact_div(&num, &prev).expect("Bareiss step is exact");
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&rat(sign))
}

fn to_z_if_possible(p: LaurentPoly) -> LaurentPoly {
    p.w_to_z().unwrap_or(p)
}

/// Numerator and denominator exponents and the scalar factor of each family.
fn shape(family: Family, lambda: &[HalfInt]) -> Result<(Vec<HalfInt>, Vec<HalfInt>, i64, i64)> {
    let l = lambda.len();
    let integral = lambda.iter().all(|x| x.is_integer());
    let half = HalfInt(1);
    let shift = |extra: HalfInt| -> (Vec<HalfInt>, Vec<HalfInt>) {
        let rows = |i: usize| HalfInt::int((l - 1 - i) as i64) + extra;
        ((0..l).map(|i| lambda[i] + rows(i)).collect(), (0..l).map(rows).collect())
    };
    let bad = |m: &str| Err(Error::InvalidLabel(format!("{m}: {family:?} {lambda:?}")));
    if lambda.windows(2).any(|x| x[0] < x[1]) {
        return bad("weight not weakly decreasing");
    }
    let tail_nonneg = lambda.last().is_none_or(|x| x.0 >= 0);
    match family {
        Family::SO2l => {
            if !(integral || lambda.iter().all(|x| !x.is_integer())) {
                return bad("mixed integrality");
            }
            let (n, d) = shift(HalfInt(0));
            Ok((n, d, 1, 1))
        }
        Family::O2l | Family::Pin2l => {
            if (family == Family::O2l) != integral || !tail_nonneg || (!integral && lambda.iter().any(|x| x.is_integer())) {
                return bad("illegal weight");
            }
            let (n, d) = shift(HalfInt(0));
            let factor = if lambda.last().is_some_and(|x| x.0 != 0) { 2 } else { 1 };
            Ok((n, d, 1, factor))
        }
        Family::B => {
            let spin = lambda.iter().all(|x| !x.is_integer());
            if !(integral || spin) || !tail_nonneg {
                return bad("illegal weight");
            }
            let (n, d) = shift(half);
            Ok((n, d, -1, 1))
        }
        Family::Sp2l => {
            if !integral || !tail_nonneg {
                return bad("illegal weight");
            }
            let (n, d) = shift(HalfInt::int(1));
            Ok((n, d, -1, 1))
        }
    }
}

type CharCache = Mutex<HashMap<(Family, Vec<HalfInt>), LaurentPoly>>;

fn memo() -> &'static CharCache {
    static CACHE: OnceLock<CharCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Character of the irreducible module with highest weight `lambda`.
///
/// For `SO2l` the last entry may be negative (the λ̄ partner).
pub fn character_of_weight(family: Family, lambda: &[HalfInt]) -> Result<LaurentPoly> {
    let key = (family, lambda.to_vec());
    if let Some(p) = memo().lock().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let disk_key = format!("character/{family:?}/{lambda:?}");
    let value = match crate::cache::load::<Vec<MonomialJson>>(&disk_key) {
        Some(j) => LaurentPoly::from_json(&j)?,
        None => {
            let v = compute(family, lambda)?;
            crate::cache::store(&disk_key, &v.to_json());
            v
        }
    };
    memo().lock().unwrap().insert(key, value.clone());
    Ok(value)
}

fn compute(family: Family, lambda: &[HalfInt]) -> Result<LaurentPoly> {
    let (num_e, den_e, sign, factor) = shape(family, lambda)?;
    let mut num = binomial_det(&num_e, sign);
    if family == Family::SO2l {
        num.add_assign(&binomial_det(&num_e, -1));
    }
    let den = binomial_det(&den_e, sign);
    let q = exact_div(&num, &den)?;
    Ok(to_z_if_possible(q.scale(&rat(factor))))
}

/// Group family dual to a module label's algebra and level.
pub fn family_for(label: &ModuleLabel) -> Family {
    use crate::combinat::Algebra;
    match (label.algebra, label.level.is_half()) {
        (Algebra::C, _) => Family::Sp2l,
        (Algebra::D, false) => Family::O2l,
        (Algebra::D, true) => Family::B,
        (Algebra::B, false) => Family::Pin2l,
        (Algebra::B, true) => Family::B,
        (Algebra::A, _) => Family::SO2l,
    }
}

/// Character of the group dual to `label`. The ⊗det twist does not change the
/// restriction to the diagonal torus.
pub fn character(family: Family, label: &ModuleLabel) -> Result<LaurentPoly> {
    label.validate()?;
    character_of_weight(family, &label.weight())
}

/// Numerator determinant of the character, in z or w variables.
pub fn numerator_det(family: Family, lambda: &[HalfInt]) -> Result<LaurentPoly> {
    let (num_e, _, sign, _) = shape(family, lambda)?;
    Ok(to_z_if_possible(binomial_det(&num_e, sign)))
}

/// factor·numerator, so that character = this / denominator; always in w variables.
pub fn scaled_numerator(family: Family, lambda: &[HalfInt]) -> Result<LaurentPoly> {
    let (num_e, _, sign, factor) = shape(family, lambda)?;
    let mut num = binomial_det(&num_e, sign);
    if family == Family::SO2l {
        num.add_assign(&binomial_det(&num_e, -1));
    }
    Ok(num.scale(&rat(factor)))
}

/// Denominator determinant of the character, in z or w variables.
pub fn denominator_det(family: Family, l: usize) -> LaurentPoly {
    let zero = vec![HalfInt(0); l];
    // Pin(2l) shares the O(2l) denominator
    let family = if family == Family::Pin2l { Family::O2l } else { family };
    let (_, den_e, sign, _) = shape(family, &zero).expect("zero weight is legal");
    to_z_if_possible(binomial_det(&den_e, sign))
}

/// Coefficient of the dominant monomial z^{λ+ρ} in the numerator determinant.
pub fn dominant_coefficient(family: Family, lambda: &[HalfInt]) -> Result<i64> {
    let (num_e, _, sign, _) = shape(family, lambda)?;
    let det = binomial_det(&num_e, sign);
    let mut m = Monomial::one();
    for (j, a) in num_e.iter().enumerate() {
        m.set(w(j), a.doubled() as i32);
    }
    let c = det.coeff(&m);
    if !c.is_integer() {
        return Err(Error::Internal("non-integral determinant coefficient".into()));
    }
    i64::try_from(c.to_integer()).map_err(|_| Error::Internal("coefficient overflow".into()))
}

/// Value at z = 1, i.e. the dimension, from the coefficient sum.
pub fn dimension(ch: &LaurentPoly) -> crate::ring::Rat {
    ch.terms().values().fold(<crate::ring::Rat as Ring>::zero(), |a, c| a + c)
}

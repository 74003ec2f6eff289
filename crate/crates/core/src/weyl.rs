//! Weyl groups of types B, C, D as signed permutations, and Weyl sums.

use crate::combinat::{half_norm2, HalfInt};
use crate::error::{Error, Result};
use crate::qseries::{QExp, QSeries};
use crate::ring::{rat, Rat};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum WeylType {
    B,
    C,
    D,
}

/// σ(ε_i) = signs[i]·ε_{perm[i]}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(l: usize) -> Self {
        SignedPerm { perm: (0..l).collect(), signs: vec![1; l] }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, v: &[HalfInt]) -> Vec<HalfInt> {
        let mut out = vec![HalfInt(0); v.len()];
        for i in 0..v.len() {
            out[self.perm[i]] = HalfInt(self.signs[i] as i64 * v[i].0);
        }
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        let l = self.rank();
        let mut perm = vec![0; l];
        let mut signs = vec![1; l];
        for i in 0..l {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        SignedPerm { perm, signs }
    }

    /// Determinant of the signed permutation matrix, which is (−1)^{ℓ(σ)}.
    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.rank()];
        let mut s: i8 = self.signs.iter().product();
        for start in 0..self.rank() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.perm[k];
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    pub fn in_type(&self, ty: WeylType) -> bool {
        ty != WeylType::D || self.signs.iter().product::<i8>() == 1
    }
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                go(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; l], &mut out);
    out
}

/// All elements of W(X_l).
pub fn elements(ty: WeylType, l: usize) -> Vec<SignedPerm> {
    let mut out = Vec::new();
    for perm in permutations(l) {
        for mask in 0u32..(1 << l) {
            let signs: Vec<i8> = (0..l).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let g = SignedPerm { perm: perm.clone(), signs };
            if g.in_type(ty) {
                out.push(g);
            }
        }
    }
    out
}

pub fn group_order(ty: WeylType, l: usize) -> usize {
    let fact: usize = (1..=l).product();
    match ty {
        WeylType::D if l > 0 => fact << (l - 1),
        _ => fact << l,
    }
}

/// Simple reflections, used for reduced-word lengths.
pub fn simple_reflections(ty: WeylType, l: usize) -> Vec<SignedPerm> {
    let mut gens = Vec::new();
    for i in 0..l.saturating_sub(1) {
        let mut g = SignedPerm::identity(l);
        g.perm.swap(i, i + 1);
        gens.push(g);
    }
    match ty {
        WeylType::B | WeylType::C if l > 0 => {
            let mut g = SignedPerm::identity(l);
            g.signs[l - 1] = -1;
            gens.push(g);
        }
        WeylType::D if l > 1 => {
            let mut g = SignedPerm::identity(l);
            g.perm.swap(l - 2, l - 1);
            g.signs[l - 2] = -1;
            g.signs[l - 1] = -1;
            gens.push(g);
        }
        _ => {}
    }
    gens
}

pub fn rho(ty: WeylType, l: usize) -> Vec<HalfInt> {
    (0..l)
        .map(|i| {
            let k = (l - 1 - i) as i64;
            match ty {
                WeylType::D => HalfInt::int(k),
                WeylType::B => HalfInt(2 * k + 1),
                WeylType::C => HalfInt::int(k + 1),
            }
        })
        .collect()
}

pub fn is_dominant(ty: WeylType, lambda: &[HalfInt]) -> bool {
    let l = lambda.len();
    let head = if ty == WeylType::D { l.saturating_sub(1) } else { l };
    let decreasing = lambda[..head].windows(2).all(|w| w[0] >= w[1]);
    let tail = match (ty, l) {
        (_, 0) | (WeylType::D, 1) => true,
        (WeylType::D, _) => lambda[l - 2].0 >= lambda[l - 1].0.abs(),
        _ => lambda[l - 1].0 >= 0,
    };
    let integrality = lambda.iter().all(|x| x.is_integer()) || lambda.iter().all(|x| !x.is_integer());
    decreasing && tail && integrality
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylTerm {
    pub sign: i8,
    /// ‖λ+ρ−σρ‖²/2
    pub qexp: QExp,
    /// k = λ+ρ−σρ
    pub k: Vec<HalfInt>,
}

/// One record per σ ∈ W(X_l) of Σ_σ (−1)^{ℓ(σ)} q^{‖λ+ρ−σρ‖²/2}.
pub fn weyl_sum(lambda: &[HalfInt], ty: WeylType) -> Result<Vec<WeylTerm>> {
    let l = lambda.len();
    if !is_dominant(ty, lambda) {
        return Err(Error::NotDominant(format!("{lambda:?} for {ty:?}{l}")));
    }
    let r = rho(ty, l);
    let base: Vec<HalfInt> = lambda.iter().zip(&r).map(|(&a, &b)| a + b).collect();
    Ok(elements(ty, l)
        .into_iter()
        .map(|g| {
            let sr = g.apply(&r);
            let k: Vec<HalfInt> = base.iter().zip(&sr).map(|(&a, &b)| a - b).collect();
            WeylTerm { sign: g.sign(), qexp: half_norm2(&k), k }
        })
        .collect())
}

/// The Weyl sum as a q-series truncated at `trunc`.
pub fn weyl_sum_series(terms: &[WeylTerm], trunc: QExp) -> QSeries<Rat> {
    QSeries::from_terms(terms.iter().map(|t| (t.qexp, rat(t.sign as i64))), trunc)
}

/// Positive roots as coefficient vectors in the ε-basis.
pub fn positive_roots(ty: WeylType, l: usize) -> Vec<Vec<i64>> {
    let mut roots = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            for s in [-1, 1] {
                let mut a = vec![0; l];
                a[i] = 1;
                a[j] = s;
                roots.push(a);
            }
        }
        match ty {
            WeylType::B => {
                let mut a = vec![0; l];
                a[i] = 1;
                roots.push(a);
            }
            WeylType::C => {
                let mut a = vec![0; l];
                a[i] = 2;
                roots.push(a);
            }
            WeylType::D => {}
        }
    }
    roots
}

/// q^{‖λ‖²/2}·Π_{α>0}(1 − q^{(λ+ρ,α)}).
pub fn weyl_sum_product_form(lambda: &[HalfInt], ty: WeylType, trunc: QExp) -> Result<QSeries<Rat>> {
    let l = lambda.len();
    if !is_dominant(ty, lambda) {
        return Err(Error::NotDominant(format!("{lambda:?} for {ty:?}{l}")));
    }
    let r = rho(ty, l);
    let base: Vec<HalfInt> = lambda.iter().zip(&r).map(|(&a, &b)| a + b).collect();
    let mut acc = QSeries::monomial(half_norm2(lambda), rat(1), trunc);
    for alpha in positive_roots(ty, l) {
        let doubled: i64 = alpha.iter().zip(&base).map(|(a, b)| a * b.0).sum();
        acc = acc.mul_one_minus(&rat(1), QExp::half(doubled));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, VecDeque};

    fn h(v: &[i64]) -> Vec<HalfInt> {
        v.iter().map(|&x| HalfInt::int(x)).collect()
    }

    fn lengths(ty: WeylType, l: usize) -> HashMap<SignedPerm, usize> {
        let gens = simple_reflections(ty, l);
        let mut dist = HashMap::from([(SignedPerm::identity(l), 0)]);
        let mut queue = VecDeque::from([SignedPerm::identity(l)]);
        while let Some(g) = queue.pop_front() {
            let d = dist[&g];
            for s in &gens {
                let n = g.compose(s);
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), d + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    #[test]
    fn sign_matches_reduced_length() {
        for (ty, l) in [
            (WeylType::B, 2),
            (WeylType::C, 2),
            (WeylType::D, 2),
            (WeylType::D, 3),
            (WeylType::B, 3),
            (WeylType::D, 4),
        ] {
            let len = lengths(ty, l);
            let els = elements(ty, l);
            assert_eq!(len.len(), els.len());
            assert_eq!(els.len(), group_order(ty, l));
            for g in els {
                let expected = if len[&g].is_multiple_of(2) { 1 } else { -1 };
                assert_eq!(g.sign(), expected, "{ty:?}{l} {g:?}");
            }
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(WeylType::D, 3), h(&[2, 1, 0]));
        assert_eq!(rho(WeylType::B, 1), vec![HalfInt(1)]);
        assert_eq!(rho(WeylType::C, 2), h(&[2, 1]));
    }

    #[test]
    fn rank_one_sums() {
        for m in 0..5 {
            let d = weyl_sum(&h(&[m]), WeylType::D).unwrap();
            assert_eq!(d, vec![WeylTerm { sign: 1, qexp: QExp::from_sixteenths(8 * m * m), k: h(&[m]) }]);
            let mut b = weyl_sum(&h(&[m]), WeylType::B).unwrap();
            b.sort_by_key(|t| t.qexp);
            assert_eq!(b[1], WeylTerm { sign: -1, qexp: QExp::from_sixteenths(8 * (m + 1) * (m + 1)), k: h(&[m + 1]) });
            let mut c = weyl_sum(&h(&[m]), WeylType::C).unwrap();
            c.sort_by_key(|t| t.qexp);
            assert_eq!(c[1], WeylTerm { sign: -1, qexp: QExp::from_sixteenths(8 * (m + 2) * (m + 2)), k: h(&[m + 2]) });
        }
    }

    #[test]
    fn product_form_examples() {
        let t = QExp::int(20);
        let b = weyl_sum_product_form(&h(&[2]), WeylType::B, t).unwrap();
        let expect = QSeries::from_terms([(QExp::int(2), rat(1)), (QExp::half(9), rat(-1))], t);
        assert_eq!(b, expect);
        let c = weyl_sum_product_form(&h(&[0, 0]), WeylType::C, t).unwrap();
        let mut expect = QSeries::one(t);
        for e in 1..=4 {
            expect = expect.mul_one_minus(&rat(1), QExp::int(e));
        }
        assert_eq!(c, expect);
        assert_eq!(weyl_sum_series(&weyl_sum(&h(&[0, 0]), WeylType::C).unwrap(), t), expect);
    }

    #[test]
    fn non_dominant_rejected() {
        assert!(weyl_sum(&h(&[0, 1]), WeylType::B).is_err());
        assert!(weyl_sum(&h(&[1, -1]), WeylType::C).is_err());
        assert!(weyl_sum(&h(&[1, -1]), WeylType::D).is_ok());
    }
}

//! Partitions, Frobenius coordinates, module labels and the Λ label maps.

use crate::error::{Error, Result};
use crate::qseries::QExp;
use crate::ring::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub const fn int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(self.0.into(), 2.into())
    }

}

impl std::ops::Neg for HalfInt {
    type Output = Self;
    fn neg(self) -> Self {
        HalfInt(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// ‖v‖²/2 as a q-exponent.
pub fn half_norm2(v: &[HalfInt]) -> QExp {
    // (n/2)²/2 = n²/8 = 2n²/16
    QExp::from_sixteenths(v.iter().map(|x| 2 * x.0 * x.0).sum())
}

/// Weakly decreasing nonnegative parts; trailing zeros are significant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidLabel(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Nonzero parts only.
    pub fn nonzero(&self) -> &[u32] {
        let n = self.parts.iter().take_while(|&&p| p > 0).count();
        &self.parts[..n]
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn norm2(&self) -> u64 {
        self.parts.iter().map(|&p| (p as u64) * (p as u64)).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length padded or trimmed to `l` (only zeros may be trimmed).
    pub fn with_len(&self, l: usize) -> Result<Self> {
        if self.nonzero().len() > l {
            return Err(Error::InvalidLabel(format!("{:?} has more than {l} parts", self.parts)));
        }
        let mut parts = self.nonzero().to_vec();
        parts.resize(l, 0);
        Ok(Partition { parts })
    }

    pub fn conjugate(&self) -> Self {
        let nz = self.nonzero();
        let m = nz.first().copied().unwrap_or(0);
        let parts = (1..=m).map(|j| nz.iter().filter(|&&p| p >= j).count() as u32).collect();
        Partition { parts }
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().enumerate().filter(|(i, &p)| p as usize > *i).count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.conjugate().nonzero() == self.nonzero()
    }
}

/// All partitions of `n`, parts in decreasing order, in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Strict partitions into odd parts with size at most `max`, parts decreasing.
pub fn odd_strict_partitions(max: u32) -> Vec<Vec<u32>> {
    fn go(rem: u32, below: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        let mut p = 1;
        while p < below && p <= rem {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
            p += 2;
        }
    }
    let mut out = Vec::new();
    go(max, u32::MAX, &mut Vec::new(), &mut out);
    out
}

/// Frobenius coordinates (p | q) with half-integer entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrobeniusCoords {
    pub p: Vec<HalfInt>,
    pub q: Vec<HalfInt>,
}

pub fn frobenius(lambda: &Partition) -> FrobeniusCoords {
    let r = lambda.rank();
    let conj = lambda.conjugate();
    let coord = |parts: &[u32]| {
        (0..r).map(|k| HalfInt(2 * parts[k] as i64 - 2 * (k as i64 + 1) + 1)).collect::<Vec<_>>()
    };
    FrobeniusCoords { p: coord(lambda.parts()), q: coord(conj.parts()) }
}

pub fn from_frobenius(c: &FrobeniusCoords) -> Result<Partition> {
    let r = c.p.len();
    let valid = |v: &[HalfInt]| {
        v.iter().all(|x| !x.is_integer() && x.0 > 0) && v.windows(2).all(|w| w[0] > w[1])
    };
    if c.q.len() != r || !valid(&c.p) || !valid(&c.q) {
        return Err(Error::InvalidLabel(format!("bad Frobenius coordinates {c:?}")));
    }
    // arm/leg lengths back to row and column lengths of the diagonal part
    let rows: Vec<i64> = (0..r).map(|k| (c.p[k].0 - 1) / 2 + k as i64 + 1).collect();
    let cols: Vec<i64> = (0..r).map(|k| (c.q[k].0 - 1) / 2 + k as i64 + 1).collect();
    let depth = cols.first().copied().unwrap_or(0);
    let mut parts: Vec<u32> = rows.iter().map(|&x| x as u32).collect();
    for i in (r as i64 + 1)..=depth {
        parts.push(cols.iter().filter(|&&c| c >= i).count() as u32);
    }
    Partition::new(parts)
}

/// Symmetric partition ↦ strict partition into odd parts (diagonal hook lengths).
pub fn sym_to_osp(lambda: &Partition) -> Result<Vec<u32>> {
    if !lambda.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok((0..lambda.rank()).map(|i| 2 * lambda.parts()[i] - 2 * i as u32 - 1).collect())
}

pub fn osp_to_sym(mu: &[u32]) -> Result<Partition> {
    let coords: Vec<HalfInt> = mu.iter().map(|&m| HalfInt(m as i64)).collect();
    from_frobenius(&FrobeniusCoords { p: coords.clone(), q: coords })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Algebra {
    A,
    B,
    C,
    D,
}

impl Algebra {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Algebra::A),
            "b" => Ok(Algebra::B),
            "c" => Ok(Algebra::C),
            "d" => Ok(Algebra::D),
            _ => Err(Error::Parse(format!("unknown algebra {s:?}"))),
        }
    }
}

/// A level l or l + ½, stored doubled.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Level(pub u32);

impl Level {
    pub fn int(l: u32) -> Self {
        Level(2 * l)
    }

    pub fn half(l: u32) -> Self {
        Level(2 * l + 1)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let r = crate::ring::parse_rat(s).ok_or_else(|| Error::Parse(format!("bad level {s:?}")))?;
        let twice = r * Rat::from_integer(2.into());
        if !twice.is_integer() || twice < Rat::from_integer(0.into()) {
            return Err(Error::Parse(format!("level {s:?} is not in ½ℤ₊")));
        }
        Ok(Level(twice.to_integer().try_into().map_err(|_| Error::Parse(s.into()))?))
    }

    /// The integer part l.
    pub fn rank(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_half(self) -> bool {
        self.0 % 2 == 1
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half() {
            write!(f, "{}/2", self.0)
        } else {
            write!(f, "{}", self.0 / 2)
        }
    }
}

/// An element of Σ(A), Σ(B), Σ(C), Σ(D) or Σ(Pin) together with the algebra and level.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ModuleLabel {
    pub algebra: Algebra,
    pub level: Level,
    /// Parts m_i; for Σ(A) any weakly decreasing integers.
    pub lambda: Vec<i64>,
    pub det: bool,
    pub spin: bool,
}

impl ModuleLabel {
    pub fn new(algebra: Algebra, level: Level, lambda: Vec<i64>, det: bool, spin: bool) -> Result<Self> {
        let mut label = ModuleLabel { algebra, level, lambda, det, spin };
        let l = level.rank();
        if label.lambda.len() < l && label.lambda.iter().all(|&x| x >= 0) {
            label.lambda.resize(l, 0);
        }
        if algebra == Algebra::B && l == 0 {
            label.spin = true;
        }
        label.validate()?;
        Ok(label)
    }

    pub fn l(&self) -> usize {
        self.level.rank()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidLabel(format!("{m}: {self:?}")));
        let l = self.l();
        if self.lambda.len() != l {
            return bad("λ must have exactly l entries");
        }
        if self.lambda.windows(2).any(|w| w[0] < w[1]) {
            return bad("λ must be weakly decreasing");
        }
        if self.algebra != Algebra::A && self.lambda.iter().any(|&x| x < 0) {
            return bad("λ must be a partition");
        }
        match self.algebra {
            Algebra::A | Algebra::C => {
                if self.level.is_half() || l == 0 {
                    return bad("level must be a positive integer");
                }
                if self.det || self.spin {
                    return bad("no det/spin labels for this algebra");
                }
            }
            Algebra::D => {
                if self.spin {
                    return bad("spin labels belong to b∞");
                }
                if !self.level.is_half() {
                    if l == 0 {
                        return bad("level must be positive");
                    }
                    if self.det && self.lambda[l - 1] != 0 {
                        return bad("⊗det only when λ_l = 0");
                    }
                }
            }
            Algebra::B => {
                if self.det {
                    return bad("b∞ labels carry no det flag");
                }
                if !self.spin {
                    return bad("b∞ labels need the spin flag");
                }
                if !self.level.is_half() && l == 0 {
                    return bad("level must be positive");
                }
            }
        }
        Ok(())
    }

    /// The weight vector: λ, or 𝟏/2 + λ for spin labels.
    pub fn weight(&self) -> Vec<HalfInt> {
        let shift = if self.spin { 1 } else { 0 };
        self.lambda.iter().map(|&m| HalfInt(2 * m + shift)).collect()
    }

    /// ‖weight‖²/2.
    pub fn half_norm2(&self) -> QExp {
        half_norm2(&self.weight())
    }

    /// c_λ = 1 if λ_l = 0 and 2 otherwise.
    pub fn c_lambda(&self) -> u32 {
        match self.weight().last() {
            Some(x) if x.0 != 0 => 2,
            _ => 1,
        }
    }

    /// Whether the correlator of this label sums the λ and λ⊗det modules.
    pub fn is_folded(&self) -> bool {
        match self.algebra {
            Algebra::D => self.level.is_half() || self.lambda.last().is_none_or(|&m| m == 0),
            _ => false,
        }
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.algebra {
            Algebra::A => "a",
            Algebra::B => "b",
            Algebra::C => "c",
            Algebra::D => "d",
        };
        let w: Vec<String> = self.weight().iter().map(|x| x.to_string()).collect();
        write!(f, "{a}[level {}]({})", self.level, w.join(","))?;
        if self.det {
            write!(f, "⊗det")?;
        }
        Ok(())
    }
}

/// Partitions of length exactly `l` (trailing zeros) with ‖λ + shift·𝟏/2‖²/2 < bound.
pub fn bounded_partitions(l: usize, spin: bool, bound: QExp) -> Vec<Vec<i64>> {
    fn go(l: usize, spin: bool, bound: QExp, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for m in 0..=max {
            cur.push(m);
            let mut w: Vec<HalfInt> =
                cur.iter().map(|&x| HalfInt(2 * x + spin as i64)).collect();
            w.resize(l, HalfInt(spin as i64));
            if half_norm2(&w) < bound {
                go(l, spin, bound, m, cur, out);
            }
            cur.pop();
            if half_norm2(&w) >= bound {
                break;
            }
        }
    }
    let mut out = Vec::new();
    let mut max = 0;
    while 2 * 4 * max * max < bound.sixteenths() + 64 {
        max += 1;
    }
    go(l, spin, bound, max, &mut Vec::new(), &mut out);
    out
}

/// Labels whose correlation functions can contribute below q^bound.
///
/// Every σ-term of the Weyl sums has exponent ‖λ+ρ−σρ‖²/2 ≥ ‖λ‖²/2 because
/// (λ, ρ−σρ) ≥ 0 for dominant λ, so labels with ‖λ‖²/2 ≥ bound vanish there.
/// Folded pairs (λ, λ⊗det) appear once, without the det flag.
pub fn enumerate_labels(algebra: Algebra, level: Level, bound: QExp) -> Result<Vec<ModuleLabel>> {
    let spin = algebra == Algebra::B;
    if algebra == Algebra::A {
        return Err(Error::InvalidLabel("Σ(A) is not enumerated by norm".into()));
    }
    bounded_partitions(level.rank(), spin, bound)
        .into_iter()
        .map(|lambda| ModuleLabel::new(algebra, level, lambda, false, spin))
        .collect()
}

/// Coefficients of the fundamental weights Λ_i in Λ(label).
pub fn fundamental_weight_label(label: &ModuleLabel) -> Result<BTreeMap<usize, u32>> {
    label.validate()?;
    let l = label.l() as i64;
    let m = &label.lambda;
    let i = m.iter().filter(|&&x| x > 1).count() as i64;
    let j_ones = m.iter().filter(|&&x| x >= 1).count() as i64;
    let mut out: BTreeMap<usize, u32> = BTreeMap::new();
    let mut add = |idx: usize, k: i64| {
        if k < 0 {
            panic!("negative Λ coefficient");
        }
        if k > 0 {
            *out.entry(idx).or_insert(0) += k as u32;
        }
    };
    match label.algebra {
        Algebra::A => return Err(Error::InvalidLabel("no Λ map for Σ(A) here".into())),
        Algebra::D => {
            let width = if label.level.is_half() { 2 * l + 1 } else { 2 * l };
            let (a0, a1) = (width - i - j_ones, j_ones - i);
            let (a0, a1) = if label.det { (a1, a0) } else { (a0, a1) };
            add(0, a0);
            add(1, a1);
            for &x in m.iter().take(i as usize) {
                add(x as usize, 1);
            }
        }
        Algebra::C => {
            add(0, l - j_ones);
            for &x in m.iter().take(j_ones as usize) {
                add(x as usize, 1);
            }
        }
        Algebra::B => {
            let width = if label.level.is_half() { 2 * l + 1 } else { 2 * l };
            add(0, width - 2 * j_ones);
            for &x in m.iter().take(j_ones as usize) {
                add(x as usize, 1);
            }
        }
    }
    Ok(out)
}

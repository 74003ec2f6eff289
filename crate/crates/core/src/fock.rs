//! Fermionic Fock-space oracle: graded traces by exhaustive summation over basis states.
//!
//! Mode indices are stored doubled, so NS modes k ∈ ½+ℕ are odd and R modes are even.

use crate::correlators::eval::Evaluator;
use crate::correlators::npoint::Sector;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial, Var};
use crate::qseries::{QExp, QSeries, Sides};
use crate::ring::{rat, Ring};
use std::collections::{BTreeMap, HashMap};

/// Default bound on enumerated states and table entries.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

/// A Fock space: `pairs` charged pairs, optionally one neutral fermion, in one sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorSpec {
    pub pairs: usize,
    pub neutral: bool,
    pub sector: Sector,
    /// States with energy ≥ cutoff are dropped.
    pub cutoff: QExp,
}

impl SectorSpec {
    /// Twice the level.
    pub fn level_doubled(&self) -> i64 {
        2 * self.pairs as i64 + self.neutral as i64
    }

    /// Energy of the vacuum.
    pub fn energy_shift(&self) -> QExp {
        match self.sector {
            Sector::NS => QExp::ZERO,
            Sector::R => QExp::from_sixteenths(2 * self.pairs as i64 + self.neutral as i64),
        }
    }

    fn check(&self) -> Result<()> {
        if self.pairs > crate::laurent::MAX_INDEX as usize {
            return Err(Error::ResourceLimit(format!("at most {} pairs", crate::laurent::MAX_INDEX)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    A,
    B,
    C,
    D,
}

/// The operator X(t) with t = u².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Op {
    pub kind: OpKind,
    pub u: Monomial,
}

impl Op {
    pub fn new(kind: OpKind, u: Monomial) -> Self {
        Op { kind, u }
    }

    fn check(&self, spec: &SectorSpec) -> Result<()> {
        let ok = match self.kind {
            OpKind::A => spec.sector == Sector::NS && !spec.neutral,
            OpKind::C | OpKind::D => spec.sector == Sector::NS,
            OpKind::B => spec.sector == Sector::R,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SectorMismatch(
                format!("{:?}", self.kind),
                format!("{:?} ({} pairs, neutral {})", spec.sector, spec.pairs, spec.neutral),
            ))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Flavor {
    Plus(usize),
    Minus(usize),
    Neutral,
}

fn flavors(spec: &SectorSpec) -> Vec<Flavor> {
    let mut f = Vec::new();
    for p in 0..spec.pairs {
        f.push(Flavor::Plus(p));
        f.push(Flavor::Minus(p));
    }
    if spec.neutral {
        f.push(Flavor::Neutral);
    }
    f
}

/// Smallest doubled mode index of a flavor.
fn first_mode(flavor: Flavor, sector: Sector) -> i64 {
    match (sector, flavor) {
        (Sector::NS, _) => 1,
        (Sector::R, Flavor::Plus(_)) => 2,
        (Sector::R, _) => 0,
    }
}

/// A basis state: occupied creator modes per flavor, doubled and strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockState {
    pub plus: Vec<Vec<i64>>,
    pub minus: Vec<Vec<i64>>,
    /// Neutral modes; in the R sector a 0 entry is the zero-mode bit.
    pub neutral: Vec<i64>,
}

impl FockState {
    pub fn energy(&self, spec: &SectorSpec) -> QExp {
        let doubled: i64 = self.plus.iter().chain(&self.minus).flatten().chain(&self.neutral).sum();
        QExp::half(doubled) + spec.energy_shift()
    }

    /// Doubled charges per pair.
    pub fn charges(&self, spec: &SectorSpec) -> Vec<i64> {
        let r = (spec.sector == Sector::R) as i64;
        (0..spec.pairs).map(|p| 2 * (self.plus[p].len() as i64 - self.minus[p].len() as i64) + r).collect()
    }

    fn modes(&self, f: Flavor) -> &[i64] {
        match f {
            Flavor::Plus(p) => &self.plus[p],
            Flavor::Minus(p) => &self.minus[p],
            Flavor::Neutral => &self.neutral,
        }
    }
}

/// All strict mode sets of one flavor with doubled mode sum < `bound`, as
/// decreasing vectors.
fn strict_sets(first: i64, bound: i64, limit: usize) -> Result<Vec<Vec<i64>>> {
    fn go(next: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, limit: usize) -> Result<()> {
        let mut v = cur.clone();
        v.reverse();
        out.push(v);
        if out.len() > limit {
            return Err(Error::ResourceLimit(format!("more than {limit} states")));
        }
        let used: i64 = cur.iter().sum();
        let mut m = next;
        while used + m < bound || (m == 0 && used < bound) {
            cur.push(m);
            go(m + 2, bound, cur, out, limit)?;
            cur.pop();
            m += 2;
        }
        Ok(())
    }
    let mut out = Vec::new();
    if bound > 0 {
        go(first, bound, &mut Vec::new(), &mut out, limit)?;
    }
    Ok(out)
}

/// Doubled budget for the mode sum: energy − shift < cutoff.
fn mode_bound(spec: &SectorSpec) -> i64 {
    let room = spec.cutoff - spec.energy_shift();
    // doubled mode sum d contributes d/2 = 8d sixteenths; need 8d < room
    let s = room.sixteenths();
    if s <= 0 {
        0
    } else {
        (s + 7) / 8
    }
}

/// Every basis state with energy below the cutoff, each exactly once.
pub fn enumerate_states(spec: &SectorSpec, max_states: usize) -> Result<Vec<FockState>> {
    spec.check()?;
    let bound = mode_bound(spec);
    let fl = flavors(spec);
    let sets: Vec<Vec<Vec<i64>>> =
        fl.iter().map(|&f| strict_sets(first_mode(f, spec.sector), bound, max_states)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let empty = FockState { plus: vec![vec![]; spec.pairs], minus: vec![vec![]; spec.pairs], neutral: vec![] };
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        fl: &[Flavor],
        sets: &[Vec<Vec<i64>>],
        used: i64,
        bound: i64,
        cur: &mut FockState,
        out: &mut Vec<FockState>,
        max: usize,
    ) -> Result<()> {
        if i == fl.len() {
            out.push(cur.clone());
            if out.len() > max {
                return Err(Error::ResourceLimit(format!("more than {max} states")));
            }
            return Ok(());
        }
        for s in &sets[i] {
            let e: i64 = s.iter().sum();
            if used + e >= bound {
                continue;
            }
            match fl[i] {
                Flavor::Plus(p) => cur.plus[p] = s.clone(),
                Flavor::Minus(p) => cur.minus[p] = s.clone(),
                Flavor::Neutral => cur.neutral = s.clone(),
            }
            go(i + 1, fl, sets, used + e, bound, cur, out, max)?;
        }
        Ok(())
    }
    let mut cur = empty;
    go(0, &fl, &sets, 0, bound, &mut cur, &mut out, max_states)?;
    Ok(out)
}

/// Eigenvalue of the normal-ordered part of `op` on one occupied mode (doubled `d`).
fn mode_value(op: &Op, f: Flavor, d: i64) -> LaurentPoly {
    let up = LaurentPoly::monomial(op.u.pow(d as i32));
    let down = LaurentPoly::monomial(op.u.pow(-d as i32));
    match (op.kind, f) {
        (OpKind::A, Flavor::Plus(_)) => up,
        (OpKind::A, _) => down.neg(),
        _ => up.sub(&down),
    }
}

/// Central constant of `op` on the space `spec`.
fn central<E: Evaluator>(ev: &E, op: &Op, spec: &SectorSpec) -> Result<E::C> {
    let ihd = ev.inv_half_diff(&op.u)?;
    Ok(match op.kind {
        OpKind::A => ihd.times(&E::C::from_rat(rat(spec.pairs as i64))),
        OpKind::C | OpKind::D => ihd.times(&E::C::from_rat(rat(spec.level_doubled()))),
        OpKind::B => {
            let sum = LaurentPoly::monomial(op.u).add(&LaurentPoly::monomial(op.u.inv()));
            ev.poly(&sum)?.times(&ihd).times(&E::C::from_rat(crate::ring::ratio(spec.level_doubled(), 2)))
        }
    })
}

/// Eigenvalue of `op` (normal-ordered part plus central constant) on `state`.
pub fn eigenvalue<E: Evaluator>(ev: &E, op: &Op, state: &FockState, spec: &SectorSpec) -> Result<E::C> {
    op.check(spec)?;
    let mut p = LaurentPoly::zero();
    for f in flavors(spec) {
        for &d in state.modes(f) {
            p.add_assign(&mode_value(op, f, d));
        }
    }
    Ok(ev.poly(&p)?.plus(&central(ev, op, spec)?))
}

/// Trace graded by the doubled charge vector.
pub type GradedTrace<C> = BTreeMap<Vec<i64>, QSeries<C>>;

/// Σ_states Π_i eigenvalue(op_i) · z^{charge} · q^{energy}, below the cutoff.
pub fn brute_force_trace<E: Evaluator>(
    ev: &E,
    spec: &SectorSpec,
    ops: &[Op],
    max_states: usize,
) -> Result<GradedTrace<E::C>> {
    for op in ops {
        op.check(spec)?;
    }
    let mut out: GradedTrace<E::C> = BTreeMap::new();
    for st in enumerate_states(spec, max_states)? {
        let mut v = E::C::one();
        for op in ops {
            v = v.times(&eigenvalue(ev, op, &st, spec)?);
        }
        out.entry(st.charges(spec)).or_insert_with(|| QSeries::zero(spec.cutoff)).add_term(st.energy(spec), v);
    }
    Ok(out)
}

/// Moments Σ_states Π_{i∈S} :X_i: for every subset S, keyed by (doubled mode sum,
/// doubled charge vector).
type Moments<C> = HashMap<(i64, Vec<i64>), Vec<C>>;

fn subset_convolve<C: Ring>(a: &[C], b: &[C]) -> Vec<C> {
    let full = a.len();
    let mut out = vec![C::zero(); full];
    for (s, o) in out.iter_mut().enumerate() {
        // T ranges over the submasks of s
        let mut t = s;
        loop {
            if !a[t].is_zero() && !b[s ^ t].is_zero() {
                o.plus_assign(&a[t].times(&b[s ^ t]));
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
    }
    out
}

fn flavor_moments<E: Evaluator>(
    ev: &E,
    spec: &SectorSpec,
    ops: &[Op],
    f: Flavor,
    bound: i64,
    max_states: usize,
) -> Result<Moments<E::C>> {
    let n = ops.len();
    let mut cache: HashMap<(usize, i64), E::C> = HashMap::new();
    let mut out: Moments<E::C> = HashMap::new();
    for set in strict_sets(first_mode(f, spec.sector), bound, max_states)? {
        let mut vals = Vec::with_capacity(n);
        for (i, op) in ops.iter().enumerate() {
            let mut v = E::C::zero();
            for &d in &set {
                let c = match cache.get(&(i, d)) {
                    Some(c) => c.clone(),
                    None => {
                        let c = ev.poly(&mode_value(op, f, d))?;
                        cache.insert((i, d), c.clone());
                        c
                    }
                };
                v.plus_assign(&c);
            }
            vals.push(v);
        }
        let mut mom = vec![E::C::one(); 1 << n];
        for s in 1usize..(1 << n) {
            let low = s.trailing_zeros() as usize;
            mom[s] = mom[s & (s - 1)].times(&vals[low]);
        }
        let mut charge = vec![0i64; spec.pairs];
        match f {
            Flavor::Plus(p) => charge[p] = 2 * set.len() as i64,
            Flavor::Minus(p) => charge[p] = -2 * set.len() as i64,
            Flavor::Neutral => {}
        }
        let e: i64 = set.iter().sum();
        let entry = out.entry((e, charge)).or_insert_with(|| vec![E::C::zero(); 1 << n]);
        for (x, y) in entry.iter_mut().zip(&mom) {
            x.plus_assign(y);
        }
    }
    Ok(out)
}

/// Σ_states Π_i eigenvalue(op_i) · z^{charge} · q^{energy}, by combining per-flavor
/// moment tables (no explicit product-space enumeration).
pub fn trace<E: Evaluator>(ev: &E, spec: &SectorSpec, ops: &[Op], max_states: usize) -> Result<GradedTrace<E::C>> {
    spec.check()?;
    for op in ops {
        op.check(spec)?;
    }
    let n = ops.len();
    let bound = mode_bound(spec);
    let mut table: Moments<E::C> = HashMap::new();
    let mut unit = vec![E::C::zero(); 1 << n];
    unit[0] = E::C::one();
    table.insert((0, vec![0; spec.pairs]), unit);
    for f in flavors(spec) {
        let fm = flavor_moments(ev, spec, ops, f, bound, max_states)?;
        let mut next: Moments<E::C> = HashMap::new();
        for ((e1, c1), m1) in &table {
            for ((e2, c2), m2) in &fm {
                if e1 + e2 >= bound {
                    continue;
                }
                let c: Vec<i64> = c1.iter().zip(c2).map(|(a, b)| a + b).collect();
                let conv = subset_convolve(m1, m2);
                let entry = next.entry((e1 + e2, c)).or_insert_with(|| vec![E::C::zero(); 1 << n]);
                for (x, y) in entry.iter_mut().zip(&conv) {
                    x.plus_assign(y);
                }
            }
        }
        if next.len() > max_states {
            return Err(Error::ResourceLimit(format!("moment table exceeds {max_states} entries")));
        }
        table = next;
    }
    let consts: Vec<E::C> = ops.iter().map(|op| central(ev, op, spec)).collect::<Result<_>>()?;
    let full = (1usize << n) - 1;
    let r = (spec.sector == Sector::R) as i64;
    let mut out: GradedTrace<E::C> = BTreeMap::new();
    for ((e, c), m) in table {
        let mut v = E::C::zero();
        for (s, ms) in m.iter().enumerate() {
            if ms.is_zero() {
                continue;
            }
            let mut term = ms.clone();
            for (i, ci) in consts.iter().enumerate() {
                if (full ^ s) >> i & 1 == 1 {
                    term = term.times(ci);
                }
            }
            v.plus_assign(&term);
        }
        let charge: Vec<i64> = c.iter().map(|x| x + r).collect();
        let energy = QExp::half(e) + spec.energy_shift();
        if energy < spec.cutoff {
            out.entry(charge).or_insert_with(|| QSeries::zero(spec.cutoff)).add_term(energy, v);
        }
    }
    Ok(out)
}

/// The z = 1 specialization.
pub fn total<C: Ring>(g: &GradedTrace<C>, cutoff: QExp) -> QSeries<C> {
    let mut s = QSeries::zero(cutoff);
    for v in g.values() {
        s.add_assign(v);
    }
    s
}

/// The charge-sector restriction F^{(k)} (doubled charges).
pub fn charge_sector<C: Ring>(g: &GradedTrace<C>, charges: &[i64], cutoff: QExp) -> QSeries<C> {
    g.get(charges).cloned().unwrap_or_else(|| QSeries::zero(cutoff))
}

/// The graded trace with z_p = w_p² carried as w_p^{doubled charge}.
pub fn to_w(g: &GradedTrace<LaurentPoly>, cutoff: QExp) -> QSeries<LaurentPoly> {
    let mut s = QSeries::zero(cutoff);
    for (c, v) in g {
        let mut m = Monomial::one();
        for (p, &x) in c.iter().enumerate() {
            m.set(Var::W(p as u8 + 1), x as i32);
        }
        s.add_assign(&v.map(|x| x.mul_monomial(&m)));
    }
    s
}

/// Sign of sorting `ops` into canonical order (ψ⁺ before ψ⁻, modes decreasing).
fn reorder_sign(ops: &[(u8, i64)]) -> i64 {
    let key = |x: &(u8, i64)| (x.0, -x.1);
    let mut inv = 0usize;
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if key(&ops[i]) > key(&ops[j]) {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign with which τ (ψ^±_k ↦ ψ^∓_k) maps a τ-fixed basis state to itself.
pub fn tau_sign(state: &FockState) -> i64 {
    let mut image: Vec<(u8, i64)> = Vec::new();
    for &k in &state.plus[0] {
        image.push((1, k));
    }
    for &k in &state.minus[0] {
        image.push((0, k));
    }
    reorder_sign(&image)
}

/// (tr over F^{(0)}_+, tr over F^{(0)}_−) of q^{L₀}·Π ops for one NS pair.
pub fn tau_refined_trace<E: Evaluator>(
    ev: &E,
    ops: &[Op],
    cutoff: QExp,
    max_states: usize,
) -> Result<Sides<E::C>> {
    let spec = SectorSpec { pairs: 1, neutral: false, sector: Sector::NS, cutoff };
    for op in ops {
        op.check(&spec)?;
    }
    let mut full = QSeries::zero(cutoff);
    let mut twisted = QSeries::zero(cutoff);
    for st in enumerate_states(&spec, max_states)? {
        if st.charges(&spec)[0] != 0 {
            continue;
        }
        let mut v = E::C::one();
        for op in ops {
            v = v.times(&eigenvalue(ev, op, &st, &spec)?);
        }
        let e = st.energy(&spec);
        if st.plus[0] == st.minus[0] {
            twisted.add_term(e, v.times(&E::C::from_rat(rat(tau_sign(&st)))));
        }
        full.add_term(e, v);
    }
    let half = crate::ring::ratio(1, 2);
    Ok((full.add(&twisted).scale_rat(&half), full.sub(&twisted).scale_rat(&half)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::closed::{d_half_one_point_sum, q_odd_poch, refined_level1};
    use crate::correlators::eval::{Exact, PartialEval, PointEval};
    use crate::correlators::theta::{euler, f_bo};
    use crate::qseries::pochhammer;
    use crate::ring::ratio;

    fn spec(pairs: usize, neutral: bool, sector: Sector, cutoff: i64) -> SectorSpec {
        SectorSpec { pairs, neutral, sector, cutoff: QExp::int(cutoff) }
    }

    fn s(i: u8) -> Monomial {
        Monomial::var(Var::S(i), 1)
    }

    #[test]
    fn small_enumerations() {
        let sp = SectorSpec { pairs: 1, neutral: false, sector: Sector::NS, cutoff: QExp::half(3) };
        assert_eq!(enumerate_states(&sp, 100).unwrap().len(), 4);
        let sp = spec(0, true, Sector::NS, 2);
        assert_eq!(enumerate_states(&sp, 100).unwrap().len(), 3);
        let sp = spec(0, true, Sector::R, 1);
        assert_eq!(enumerate_states(&sp, 100).unwrap().len(), 2);
    }

    #[test]
    fn partition_counts() {
        let sp = spec(1, false, Sector::NS, 8);
        let g = trace(&PointEval::new(&[]).unwrap(), &sp, &[], DEFAULT_MAX_STATES).unwrap();
        assert_eq!(charge_sector(&g, &[0], sp.cutoff), euler(sp.cutoff).inverse().unwrap());
        let neutral = total(&trace(&PointEval::new(&[]).unwrap(), &spec(0, true, Sector::NS, 6), &[], 1000).unwrap(), QExp::int(6));
        assert_eq!(neutral, pochhammer(&rat(-1), QExp::half(1), QExp::int(1), QExp::int(6)).unwrap());
        let r = total(&trace(&PointEval::new(&[]).unwrap(), &spec(0, true, Sector::R, 6), &[], 1000).unwrap(), QExp::int(6));
        let expect = pochhammer(&rat(-1), QExp::int(1), QExp::int(1), QExp::int(6))
            .unwrap()
            .scale_rat(&rat(2))
            .shift(QExp::from_sixteenths(1))
            .truncate(QExp::int(6));
        assert_eq!(r, expect);
    }

    #[test]
    fn moment_trace_matches_brute_force() {
        let ev = PartialEval::new(&[rat(2), ratio(1, 3)]).unwrap();
        let ops = [Op::new(OpKind::D, s(1)), Op::new(OpKind::D, s(2))];
        let sp = spec(2, true, Sector::NS, 3);
        assert_eq!(trace(&ev, &sp, &ops, DEFAULT_MAX_STATES).unwrap(), brute_force_trace(&ev, &sp, &ops, DEFAULT_MAX_STATES).unwrap());
        let ops = [Op::new(OpKind::B, s(1))];
        let sp = spec(1, true, Sector::R, 3);
        assert_eq!(trace(&ev, &sp, &ops, DEFAULT_MAX_STATES).unwrap(), brute_force_trace(&ev, &sp, &ops, DEFAULT_MAX_STATES).unwrap());
    }

    #[test]
    fn level_one_d_trace() {
        let order = QExp::int(6);
        let sp = SectorSpec { pairs: 1, neutral: false, sector: Sector::NS, cutoff: order };
        let g = trace(&Exact, &sp, &[Op::new(OpKind::D, s(1))], DEFAULT_MAX_STATES).unwrap();
        let f = f_bo(&Exact, &[s(1)], order).unwrap();
        assert_eq!(charge_sector(&g, &[0], order), f.scale_rat(&rat(2)));
        let ev = PointEval::new(&[rat(2)]).unwrap();
        let g = trace(&ev, &sp, &[Op::new(OpKind::D, s(1))], DEFAULT_MAX_STATES).unwrap();
        let zero = charge_sector(&g, &[0], order);
        let one = charge_sector(&g, &[2], order);
        let expect = zero.scale_rat(&ratio(17, 8)).shift(QExp::half(1)).truncate(order);
        assert_eq!(one, expect);
        assert_eq!(one, charge_sector(&g, &[-2], order));
    }

    #[test]
    fn neutral_d_trace_matches_closed_form() {
        let order = QExp::int(5);
        let ev = PointEval::new(&[ratio(5, 2)]).unwrap();
        let sp = SectorSpec { pairs: 0, neutral: true, sector: Sector::NS, cutoff: order };
        let g = total(&trace(&ev, &sp, &[Op::new(OpKind::D, s(1))], DEFAULT_MAX_STATES).unwrap(), order);
        assert_eq!(g, d_half_one_point_sum(&ev, &s(1), order).unwrap());
    }

    #[test]
    fn tau_refinement() {
        let order = QExp::int(8);
        let ev = PointEval::new(&[rat(3)]).unwrap();
        let (p, m) = tau_refined_trace(&ev, &[], order, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(p.sub(&m), q_odd_poch(order));
        let (p, m) = tau_refined_trace(&ev, &[Op::new(OpKind::D, s(1))], order, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(p, refined_level1(&ev, true, &s(1), order).unwrap());
        assert_eq!(m, refined_level1(&ev, false, &s(1), order).unwrap());
    }

    #[test]
    fn tau_sign_alternates_with_rank() {
        for r in 0..5usize {
            let modes: Vec<i64> = (0..r as i64).map(|i| 2 * (r as i64 - i) - 1).collect();
            let st = FockState { plus: vec![modes.clone()], minus: vec![modes], neutral: vec![] };
            assert_eq!(tau_sign(&st), if r % 2 == 0 { 1 } else { -1 });
        }
    }
}

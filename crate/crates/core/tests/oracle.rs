use fockcorr::combinat::{Algebra, Level, ModuleLabel};
use fockcorr::correlators::eval::{PartialEval, PointEval};
use fockcorr::correlators::npoint::{npoint, s_args, Sector};
use fockcorr::fock::{self, Op, OpKind, SectorSpec};
use fockcorr::laurent::{Monomial, Var};
use fockcorr::qseries::QExp;
use fockcorr::ring::{rat, ratio};

fn spec(pairs: usize, neutral: bool, sector: Sector, cutoff: QExp) -> SectorSpec {
    SectorSpec { pairs, neutral, sector, cutoff }
}

/// At level 1 and m ≥ 1 the O(2) character is z^m + z^(−m), so the correlator
/// of λ = (m) is the trace over either charge sector ±m.
#[test]
fn level_one_correlators_are_charge_sector_traces() {
    let o = QExp::int(6);
    let ev = PointEval::new(&[rat(2), ratio(1, 3)]).unwrap();
    let args = s_args(2);
    let ops: Vec<Op> = args.iter().map(|u| Op::new(OpKind::D, *u)).collect();
    let g = fock::trace(&ev, &spec(1, false, Sector::NS, o), &ops, 1_000_000).unwrap();
    for m in 1..=3i64 {
        let label = ModuleLabel::new(Algebra::D, Level::int(1), vec![m], false, false).unwrap();
        let corr = npoint(&ev, &label, 2, o).unwrap();
        assert_eq!(corr, fock::charge_sector(&g, &[2 * m], o), "m = {m}");
        assert_eq!(corr, fock::charge_sector(&g, &[-2 * m], o), "m = -{m}");
    }
}

/// The level-½ correlators are the neutral-fermion traces.
#[test]
fn level_half_correlators_are_neutral_traces() {
    let o = QExp::int(6);
    let ev = PointEval::new(&[rat(3)]).unwrap();
    let u = s_args(1)[0];
    let d = ModuleLabel::new(Algebra::D, Level::half(0), vec![], false, false).unwrap();
    let tr = fock::trace(&ev, &spec(0, true, Sector::NS, o), &[Op::new(OpKind::D, u)], 100_000).unwrap();
    assert_eq!(npoint(&ev, &d, 1, o).unwrap(), fock::total(&tr, o));
    let b = ModuleLabel::new(Algebra::B, Level::half(0), vec![], false, true).unwrap();
    let tr = fock::trace(&ev, &spec(0, true, Sector::R, o), &[Op::new(OpKind::B, u)], 100_000).unwrap();
    assert_eq!(npoint(&ev, &b, 1, o).unwrap(), fock::total(&tr, o).scale_rat(&ratio(1, 2)));
}

/// Pins a known discrepancy: with operators inserted, the genuine two-pair trace
/// is not the product of one-pair traces, which is the form the level-l
/// correlator formulas satisfy. Already the vacuum term differs: the central
/// constant is additive over pairs (2·4/3) while the product multiplies (4/3)².
#[test]
fn two_pair_trace_is_not_a_product_of_one_pair_traces() {
    let o = QExp::int(3);
    let ev = PartialEval::new(&[rat(2)]).unwrap();
    let ops = [Op::new(OpKind::D, s_args(1)[0])];
    let genuine = fock::to_w(&fock::trace(&ev, &spec(2, false, Sector::NS, o), &ops, 100_000).unwrap(), o);
    let one = fock::to_w(&fock::trace(&ev, &spec(1, false, Sector::NS, o), &ops, 100_000).unwrap(), o);
    let shifted = one.map(|c| c.subst_monomial(Var::W(1), &Monomial::var(Var::W(2), 1)));
    let product = one.mul(&shifted);
    assert_ne!(genuine, product);
    assert_eq!(genuine.coeff(QExp::ZERO).as_constant(), Some(ratio(8, 3)));
    assert_eq!(product.coeff(QExp::ZERO).as_constant(), Some(ratio(16, 9)));
    // without operators the two agree
    let genuine = fock::to_w(&fock::trace(&ev, &spec(2, false, Sector::NS, o), &[], 100_000).unwrap(), o);
    let one = fock::to_w(&fock::trace(&ev, &spec(1, false, Sector::NS, o), &[], 100_000).unwrap(), o);
    let shifted = one.map(|c| c.subst_monomial(Var::W(1), &Monomial::var(Var::W(2), 1)));
    assert_eq!(genuine, one.mul(&shifted));
}

#[test]
fn operators_outside_their_sector_are_rejected() {
    let o = QExp::int(2);
    let ev = PointEval::new(&[rat(2)]).unwrap();
    let u = s_args(1)[0];
    assert!(fock::trace(&ev, &spec(1, false, Sector::R, o), &[Op::new(OpKind::D, u)], 1000).is_err());
    assert!(fock::trace(&ev, &spec(1, false, Sector::NS, o), &[Op::new(OpKind::B, u)], 1000).is_err());
    assert!(fock::trace(&ev, &spec(1, true, Sector::NS, o), &[Op::new(OpKind::A, u)], 1000).is_err());
}

#[test]
fn state_budget_is_enforced() {
    let r = fock::enumerate_states(&spec(2, false, Sector::NS, QExp::int(8)), 10);
    assert!(matches!(r, Err(fockcorr::Error::ResourceLimit(_))));
}

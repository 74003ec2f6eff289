use fockcorr::combinat::{frobenius, from_frobenius, osp_to_sym, sym_to_osp, HalfInt, Partition};
use fockcorr::correlators::npoint::Sector;
use fockcorr::correlators::eval::PointEval;
use fockcorr::correlators::npoint::s_args;
use fockcorr::fock::{self, Op, OpKind, SectorSpec};
use fockcorr::laurent::{exact_div, LaurentPoly, Monomial, Var};
use fockcorr::qseries::{QExp, QSeries};
use fockcorr::ring::{rat, ratio, Rat};
use fockcorr::verify::{howe_check, HOWE_C, HOWE_D, HOWE_PIN};
use fockcorr::weyl::{weyl_sum, weyl_sum_product_form, weyl_sum_series, WeylType};
use proptest::prelude::*;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=6, 0..=6).prop_filter_map("size ≤ 12", |mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        (v.iter().sum::<u32>() <= 12).then(|| Partition::new(v).unwrap())
    })
}

fn odd_strict() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::btree_set(0u32..10, 0..=4).prop_filter_map("size ≤ 20", |s| {
        let mut v: Vec<u32> = s.into_iter().map(|k| 2 * k + 1).collect();
        v.reverse();
        (v.iter().sum::<u32>() <= 20).then_some(v)
    })
}

fn rat_coeff() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn series(unit: bool) -> impl Strategy<Value = QSeries<Rat>> {
    prop::collection::vec(rat_coeff(), 6).prop_map(move |c| {
        let mut s = QSeries::from_terms(c.into_iter().enumerate().map(|(i, x)| (QExp::int(i as i64), x)), QExp::int(6));
        if unit && s.coeff(QExp::ZERO) == rat(0) {
            s.add_term(QExp::ZERO, rat(1));
        }
        s
    })
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -2i32..=2, rat_coeff()), 1..=4).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(a, b, c)| {
            let mut m = Monomial::var(Var::Z(1), a);
            m.set(Var::Z(2), b);
            (m, c)
        }))
    })
}

fn dominant() -> impl Strategy<Value = (WeylType, Vec<HalfInt>)> {
    (0usize..3, prop::collection::vec(0i64..=3, 1..=3), any::<bool>(), any::<bool>()).prop_map(|(t, mut v, spin, flip)| {
        let ty = [WeylType::B, WeylType::C, WeylType::D][t];
        v.sort_unstable_by(|a, b| b.cmp(a));
        let spin = spin && ty != WeylType::C;
        let mut w: Vec<HalfInt> = v.iter().map(|&m| HalfInt(2 * m + spin as i64)).collect();
        if ty == WeylType::D && flip {
            let last = w.len() - 1;
            w[last] = -w[last];
        }
        (ty, w)
    })
}

/// s ∉ {0, ±1}.
fn point() -> impl Strategy<Value = Rat> {
    (2i64..=7, 1i64..=3, any::<bool>()).prop_map(|(n, d, inv)| if inv { ratio(d, n) } else { ratio(n, d) }).prop_filter("s ≠ ±1", |x| x != &rat(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_round_trip(lam in partition()) {
        prop_assert_eq!(from_frobenius(&frobenius(&lam)).unwrap(), lam);
    }

    #[test]
    fn odd_strict_round_trip(mu in odd_strict()) {
        let lam = osp_to_sym(&mu).unwrap();
        prop_assert!(lam.is_symmetric());
        prop_assert_eq!(lam.size(), mu.iter().map(|&x| x as u64).sum::<u64>());
        prop_assert_eq!(lam.rank(), mu.len());
        prop_assert_eq!(sym_to_osp(&lam).unwrap(), mu);
    }

    #[test]
    fn series_product_is_associative(a in series(false), b in series(false), c in series(false)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn series_inverse(a in series(true)) {
        prop_assert_eq!(a.mul(&a.inverse().unwrap()), QSeries::one(QExp::int(6)));
    }

    #[test]
    fn laurent_exact_division(p in laurent(), q in laurent()) {
        prop_assume!(!q.is_empty());
        prop_assert_eq!(exact_div(&p.mul(&q), &q).unwrap(), p);
    }

    #[test]
    fn weyl_sum_equals_product((ty, w) in dominant()) {
        let order = QExp::int(12);
        let sum = weyl_sum_series(&weyl_sum(&w, ty).unwrap(), order);
        prop_assert_eq!(sum, weyl_sum_product_form(&w, ty, order).unwrap());
    }

    #[test]
    fn charge_sectors_are_symmetric(s in point()) {
        let o = QExp::int(5);
        let ev = PointEval::new(&[s]).unwrap();
        let spec = SectorSpec { pairs: 1, neutral: false, sector: Sector::NS, cutoff: o };
        let g = fock::trace(&ev, &spec, &[Op::new(OpKind::D, s_args(1)[0])], 100_000).unwrap();
        for k in 1..=3 {
            prop_assert_eq!(fock::charge_sector(&g, &[2 * k], o), fock::charge_sector(&g, &[-2 * k], o));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dualities_at_random_points(s in point(), which in 0usize..3) {
        let kind = [HOWE_D, HOWE_C, HOWE_PIN][which];
        let c = howe_check(kind, 1, &[s], QExp::int(5), 1_000_000).unwrap();
        prop_assert!(c.passed(), "{:?}", c);
    }
}

use piforge_core::catalog::Catalog;
use piforge_core::exact::{rat, Surd};
use piforge_core::families::{
    admissible_s, convolve, convolve_symmetric, prop7_recurrence, Family, FamilySpec, HypTerm,
};
use piforge_core::numeric::sum::moments;
use piforge_core::numeric::BigFloat;
use piforge_core::series::TruncSeries;
use piforge_core::transforms::Formula;
use piforge_core::Rational;
use proptest::prelude::*;

const RADICANDS: [u64; 7] = [1, 2, 3, 5, 6, 7, 10];

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..25).prop_map(|(n, d)| rat(n, d))
}

fn surd() -> impl Strategy<Value = Surd> {
    prop::collection::vec((rational(), prop::sample::select(RADICANDS.to_vec())), 0..4)
        .prop_map(|terms| terms.into_iter().fold(Surd::zero(), |acc, (q, d)| &acc + &Surd::sqrt_of(d).scale(&q)))
}

fn series(len: usize) -> impl Strategy<Value = TruncSeries<Rational>> {
    prop::collection::vec(rational(), len).prop_map(TruncSeries::from_coeffs)
}

fn unit_series(len: usize) -> impl Strategy<Value = TruncSeries<Rational>> {
    prop::collection::vec(rational(), len - 1).prop_map(|mut c| {
        c.insert(0, rat(1, 1));
        TruncSeries::from_coeffs(c)
    })
}

fn same(a: &TruncSeries<Rational>, b: &TruncSeries<Rational>) -> bool {
    a.coeffs() == b.coeffs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surd_ring_laws(a in surd(), b in surd(), c in surd()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn surd_division_inverts(a in surd(), b in surd()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
        let inv = b.try_inv().unwrap();
        prop_assert_eq!(&b * &inv, Surd::one());
    }

    #[test]
    fn surd_text_round_trip(a in surd()) {
        prop_assert_eq!(a.to_string().parse::<Surd>().unwrap(), a);
    }

    #[test]
    fn denesting_is_sound(alpha in rational(), beta in rational(), d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10])) {
        let x = &Surd::from_rational(alpha) + &Surd::sqrt_of(d).scale(&beta);
        let sq = &x * &x;
        let root = sq.sqrt_denest().unwrap();
        prop_assert_eq!(&root * &root, sq);
        prop_assert_eq!(root, x.abs());
    }

    #[test]
    fn series_ring_laws(f in series(10), g in series(10), h in series(10)) {
        prop_assert!(same(&f.mul(&g), &g.mul(&f)));
        prop_assert!(same(&f.mul(&g).mul(&h), &f.mul(&g.mul(&h))));
        prop_assert!(same(&f.mul(&g.add(&h)), &f.mul(&g).add(&f.mul(&h))));
        prop_assert!(same(&f.sub(&g).add(&g), &f));
    }

    #[test]
    fn series_inverse(f in unit_series(10), c in 1i64..9) {
        let g = f.scale(&rat(c, 1));
        let one = TruncSeries::<Rational>::one(9);
        prop_assert!(same(&g.mul(&g.inv().unwrap()), &one));
    }

    #[test]
    fn pow_rational_laws(f in unit_series(9), p in rational(), q in rational()) {
        let fp = f.pow_rational(&p).unwrap();
        let fq = f.pow_rational(&q).unwrap();
        prop_assert!(same(&fp.mul(&fq), &f.pow_rational(&(&p + &q)).unwrap()));
        prop_assert!(same(&f.pow_rational(&rat(1, 2)).unwrap().pow_int(2), &f));
        prop_assert!(same(&f.pow_rational(&rat(3, 1)).unwrap(), &f.pow_int(3)));
    }

    #[test]
    fn symmetric_convolution(u in prop::collection::vec(rational(), 1..16)) {
        for n in 0..u.len() {
            prop_assert_eq!(convolve_symmetric(&u, n), convolve(&u, &u, n));
        }
    }

    #[test]
    fn catalog_round_trip(si in 0usize..4, fam in 0usize..5, arg in surd(), lin0 in surd(), lin1 in surd(), rhs in surd()) {
        let kinds = [Family::Hyp, Family::Prop1, Family::Prop3, Family::Prop5, Family::Prop7];
        let spec = FamilySpec::new(kinds[fam], admissible_s()[si].clone()).unwrap();
        let f = Formula::new("generated-row", spec, arg, lin0, lin1, rhs);
        let mut cat = Catalog::embedded();
        cat.push_formula(f.clone()).unwrap();
        let text = cat.serialize();
        let back = Catalog::parse(&text).unwrap();
        prop_assert_eq!(back.get("generated-row").unwrap(), &f);
        prop_assert_eq!(back.serialize(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn summation_ignores_worker_count(n in -9i64..10, si in 0usize..4) {
        let s = admissible_s()[si].clone();
        let term = HypTerm::f21(rat(1, 1), s.clone(), rat(1, 1) - s);
        let w = BigFloat::from_rational(&rat(n, 10), 200);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| moments(&term, &w, -180.0, 50_000).unwrap())
        };
        prop_assert_eq!(run(1), run(4));
    }
}

#[test]
fn prop7_recurrence_matches_convolution() {
    for s in admissible_s() {
        let spec = FamilySpec::new(Family::Prop7, s.clone()).unwrap();
        assert_eq!(spec.coefficients(25), prop7_recurrence(&s, 25), "s = {s}");
    }
}

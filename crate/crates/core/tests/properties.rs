use pdisc::equilibria::{finite_equilibria, Classification};
use pdisc::exactalg::roots::all_real_roots;
use pdisc::exactalg::{ffdet, rat, MPoly, Monomial, Rat, UPoly, Var};
use pdisc::modelio::{parse_system, PlanarSystem};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0..=max_deg), (0..=max_deg), small_rat()), 0..=max_terms).prop_map(
        move |ts| {
            MPoly::from_terms(
                ts.into_iter()
                    .filter(|(i, j, _)| i + j <= max_deg)
                    .map(|(i, j, c)| (Monomial::new(i, j), c)),
            )
        },
    )
}

fn nonzero_poly(max_deg: u32) -> impl Strategy<Value = MPoly> {
    poly(max_deg, 4).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(3, 5), b in poly(3, 5), c in poly(2, 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &MPoly::zero(), a.clone());
        prop_assert_eq!(&a * &MPoly::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_rule(a in poly(3, 5), b in poly(3, 5)) {
        for v in [Var::X, Var::Y] {
            let lhs = (&a * &b).diff(v);
            let rhs = &(&a.diff(v) * &b) + &(&a * &b.diff(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(3, 5), b in poly(3, 5), x in small_rat(), y in small_rat()) {
        prop_assert_eq!((&a * &b).eval(&x, &y), a.eval(&x, &y) * b.eval(&x, &y));
        prop_assert_eq!((&a + &b).eval(&x, &y), a.eval(&x, &y) + b.eval(&x, &y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_div_inverts_product(a in poly(3, 4), b in nonzero_poly(2)) {
        let ab = &a * &b;
        prop_assert_eq!(ab.exact_div(&b).unwrap(), Some(a.clone()));
        let (q, r) = (&ab + &MPoly::one()).div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, &ab + &MPoly::one());
    }

    #[test]
    fn ffdet_matches_cofactor_expansion(entries in prop::collection::vec(poly(1, 3), 9)) {
        let m: Vec<Vec<MPoly>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let minor = |r: usize, c: usize| {
            let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
            &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]) - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]])
        };
        let mut expected = MPoly::zero();
        for (c, e) in m[0].iter().enumerate() {
            let t = e * &minor(0, c);
            expected = if c % 2 == 0 { &expected + &t } else { &expected - &t };
        }
        prop_assert_eq!(ffdet(&m), expected);
    }

    #[test]
    fn roots_are_isolated(roots in prop::collection::btree_set((-20i64..=20, 1i64..=4), 1..5), lead in nonzero_rat()) {
        let mut rs: Vec<Rat> = roots.iter().map(|&(n, d)| rat(n, d)).collect();
        rs.sort();
        rs.dedup();
        let p = rs
            .iter()
            .fold(UPoly::constant(lead.clone()), |acc, r| acc.mul(&UPoly::linear_root(r)));
        let ivs = all_real_roots(&p);
        prop_assert_eq!(ivs.len(), rs.len());
        for (iv, r) in ivs.iter().zip(&rs) {
            prop_assert!(iv.contains(r));
            prop_assert_eq!(rs.iter().filter(|s| iv.contains(s)).count(), 1);
        }
    }

    #[test]
    fn source_round_trip(p in poly(3, 6), q in poly(3, 6)) {
        let sys = PlanarSystem::new(p, q);
        prop_assert_eq!(parse_system(&sys.to_source()).unwrap(), sys);
    }

    #[test]
    fn classification_invariant_under_time_scaling(
        p in poly(2, 4), q in poly(2, 4), c in (1i64..=7, 1i64..=5).prop_map(|(n, d)| rat(n, d))
    ) {
        let sys = PlanarSystem::new(p, q);
        let Ok(a) = finite_equilibria(&sys, false) else { return Ok(()) };
        let b = finite_equilibria(&sys.scaled(&c), false).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(&b) {
            prop_assert_eq!(ra.classification, rb.classification);
        }
    }

    #[test]
    fn classification_invariant_under_linear_conjugation(
        j in prop::collection::vec(small_rat(), 4),
        t in prop::collection::vec(small_rat(), 4),
    ) {
        let det_t = &t[0] * &t[3] - &t[1] * &t[2];
        prop_assume!(det_t != Rat::from_integer(0.into()));
        let lin = |m: &[Rat]| -> PlanarSystem {
            let x = MPoly::x();
            let y = MPoly::y();
            PlanarSystem::new(&x.scale(&m[0]) + &y.scale(&m[1]), &x.scale(&m[2]) + &y.scale(&m[3]))
        };
        let sys = lin(&j);
        let Ok(a) = finite_equilibria(&sys, false) else { return Ok(()) };
        // T J T^-1
        let inv = [&t[3] / &det_t, -&t[1] / &det_t, -&t[2] / &det_t, &t[0] / &det_t];
        let mul = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
            vec![
                &a[0] * &b[0] + &a[1] * &b[2],
                &a[0] * &b[1] + &a[1] * &b[3],
                &a[2] * &b[0] + &a[3] * &b[2],
                &a[2] * &b[1] + &a[3] * &b[3],
            ]
        };
        let conj = mul(&mul(&t, &j), &inv);
        let b = finite_equilibria(&lin(&conj), false).unwrap();
        prop_assert_eq!(a.len(), 1);
        prop_assert_eq!(a[0].classification, b[0].classification);
        prop_assert!(a[0].classification != Classification::Undetermined);
    }
}

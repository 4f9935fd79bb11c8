use proptest::prelude::*;

use lipdouble::closure::{
    closure_membership_ideal, monomial_closure, newton_test, verify_verdict, ClosureOptions, NewtonTest, Status, Strategy as Engine,
};
use lipdouble::curvefam::{bilip_verdict, chain_rule_check, implicitize, normal_form, CurveFamilyParam};
use lipdouble::double::{double_module, Basis, DoubleMode};
use lipdouble::exactalg::{rat, ratio};
use lipdouble::groebner::{submodule_membership, verify_combination, GroebnerBasis, MonomialOrder};
use lipdouble::modulealg::{generic_rank, Ideal, ModulePresentation, RingContext};
use lipdouble::{BiSeries, Monomial, Poly};

fn poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -5i64..=5), 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial::from_exps(e), rat(c))))
    })
}

fn nonzero_poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    poly(nvars, max_exp, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn exps2(max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    (1..=max_deg).prop_flat_map(|d| (0..=d).prop_map(move |a| vec![a, d - a]))
}

fn mono(e: &[u32]) -> Poly {
    Poly::term(e.len(), rat(1), Monomial::from_exps(e.to_vec()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in poly(3, 3, 5), b in poly(3, 3, 5), c in poly(3, 3, 5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Poly::zero(3));
        prop_assert_eq!(&a * &Poly::one(3), a.clone());
        prop_assert!((&a * &Poly::zero(3)).is_zero());
    }

    #[test]
    fn leibniz_rule(a in poly(3, 4, 6), b in poly(3, 4, 6), v in 0usize..3) {
        let lhs = (&a * &b).differentiate(v);
        let rhs = &(&a.differentiate(v) * &b) + &(&a * &b.differentiate(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(2, 3, 4), b in nonzero_poly(2, 3, 4)) {
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn composition_is_a_homomorphism(a in poly(2, 3, 4), b in poly(2, 3, 4), g in prop::collection::vec(poly(2, 2, 3), 2)) {
        let sum = (&a + &b).compose(&g, 2);
        prop_assert_eq!(sum, &a.compose(&g, 2) + &b.compose(&g, 2));
        let prod = (&a * &b).compose(&g, 2);
        prop_assert_eq!(prod, &a.compose(&g, 2) * &b.compose(&g, 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_inverse(c in prop::collection::vec(-4i64..=4, 1..6)) {
        let mut p = Poly::one(2);
        for (k, x) in c.iter().enumerate() {
            p = &p + &Poly::parse(&format!("{x}*t^{}*s^{}", k % 2, 1 + k / 2), &["t".into(), "s".into()]).unwrap();
        }
        let u = BiSeries::from_poly(&p, 12);
        let inv = u.inverse().unwrap();
        prop_assert_eq!(u.mul(&inv), BiSeries::constant(rat(1), 12));
        let root = u.nth_root(3).unwrap();
        prop_assert_eq!(root.pow(3), u);
    }

    #[test]
    fn groebner_bases_generate_their_ideal(gens in prop::collection::vec(nonzero_poly(3, 2, 3), 1..4), m in poly(3, 2, 3)) {
        let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let gb = GroebnerBasis::compute(3, 1, &cols, MonomialOrder::DegRevLex, true).unwrap();
        prop_assert!(gb.is_groebner());
        for g in &gens {
            prop_assert!(gb.contains(std::slice::from_ref(g)).unwrap());
        }
        let member = &m * &gens[0];
        let cof = gb.express(std::slice::from_ref(&member)).unwrap();
        prop_assert!(cof.is_some());
        prop_assert!(verify_combination(3, &[member], &cols, &cof.unwrap(), &[]).unwrap());
        for b in gb.polys() {
            prop_assert!(gb.normal_form_poly(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn normal_forms_are_canonical(gens in prop::collection::vec(nonzero_poly(2, 2, 3), 1..3), f in poly(2, 3, 4), m in poly(2, 2, 3)) {
        let gb = GroebnerBasis::ideal(2, &gens, MonomialOrder::DegRevLex).unwrap();
        let shifted = &f + &(&m * &gens[0]);
        prop_assert_eq!(gb.normal_form_poly(&f).unwrap(), gb.normal_form_poly(&shifted).unwrap());
    }
}

fn rank1_module() -> impl Strategy<Value = Vec<Poly>> {
    prop::collection::vec(nonzero_poly(2, 2, 2), 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn doubled_rank_and_bases(gens in rank1_module()) {
        let ctx = RingContext::new(&["z1", "z2"], &[]).unwrap();
        let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let m = ModulePresentation::new(ctx, 1, cols).unwrap();
        let k = generic_rank(&m).unwrap();
        let b = double_module(&m, DoubleMode::Absolute, Basis::B).unwrap();
        prop_assert_eq!(generic_rank(&b.module).unwrap(), 2 * k);
        let b2 = double_module(&m, DoubleMode::Absolute, Basis::BDoublePrime).unwrap();
        let nv = b.product.context().nvars();
        for g in b2.module.generators() {
            prop_assert!(submodule_membership(nv, g, b.module.generators(), &[]).unwrap().is_member());
        }
        for g in b.module.generators() {
            prop_assert!(submodule_membership(nv, g, b2.module.generators(), &[]).unwrap().is_member());
        }
    }

    #[test]
    fn difference_split_telescopes(a in poly(2, 3, 4)) {
        let ctx = RingContext::new(&["x", "y"], &[]).unwrap();
        let pr = lipdouble::double::ProductRingContext::new(&ctx, DoubleMode::Absolute).unwrap();
        let qs = pr.split_difference(&a);
        let mut rhs = pr.context().zero();
        for (&v, q) in pr.doubled_vars().iter().zip(&qs) {
            rhs = &rhs + &(&pr.difference(v) * q);
        }
        prop_assert_eq!(pr.pi1(&a) - pr.pi2(&a), rhs);
    }
}

fn monomial_ideal() -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(exps2(6), 1..=3)
}

fn inside(exps: &[Vec<u32>], alpha: &[u32]) -> bool {
    matches!(newton_test(exps, alpha), NewtonTest::Inside { .. })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monomial_closure_is_idempotent_and_monotone(exps in monomial_ideal(), extra in exps2(6)) {
        let gens: Vec<Poly> = exps.iter().map(|e| mono(e)).collect();
        let cl = monomial_closure(2, &gens).unwrap();
        prop_assert_eq!(monomial_closure(2, &cl).unwrap(), cl.clone());
        for g in &gens {
            let e = g.terms().next().unwrap().0.exps().to_vec();
            prop_assert!(inside(&exps, &e));
        }
        let mut bigger = exps.clone();
        bigger.push(extra);
        for c in &cl {
            let e = c.terms().next().unwrap().0.exps().to_vec();
            prop_assert!(inside(&exps, &e));
            prop_assert!(inside(&bigger, &e));
        }
    }

    #[test]
    fn closure_engines_agree(exps in monomial_ideal(), alpha in exps2(6)) {
        let ctx = RingContext::new(&["x", "y"], &[]).unwrap();
        let gens: Vec<Poly> = exps.iter().map(|e| mono(e)).collect();
        let ideal = Ideal::new(ctx, gens).unwrap();
        let f = mono(&alpha);
        let newton = inside(&exps, &alpha);
        let arcs = ClosureOptions { strategy: Engine::Arcs, arc_count: 8, ..Default::default() };
        let v = closure_membership_ideal(&f, &ideal, &arcs).unwrap();
        prop_assert!(!(newton && v.status == Status::Fails));
        let auto = closure_membership_ideal(&f, &ideal, &ClosureOptions::default()).unwrap();
        prop_assert_eq!(auto.status, if newton { Status::Holds } else { Status::Fails });
        prop_assert!(verify_verdict(&auto).unwrap());
    }
}

fn ts(src: &str) -> Poly {
    Poly::parse(src, &["t".into(), "s".into()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn normal_form_of_random_families(p in 2u32..=3, q in 1u32..=2, a in -3i64..=3, b in -3i64..=3, c in 1i64..=3) {
        // (t, s^(p+q) + a t s^(p+q+1), c s^p (1 + b s + t s))
        let f1 = ts(&format!("s^{} + {a}*t*s^{}", p + q, p + q + 1));
        let f2 = ts(&format!("{c}*s^{p}*(1 + {b}*s + t*s)"));
        let param = CurveFamilyParam::from_polys(vec![f1, f2], 24).unwrap();
        let r = normal_form(&param).unwrap();
        prop_assert!(r.family.is_normal_form());
        prop_assert!(r.verify(&param).unwrap());
        let last = &r.family.coords()[1];
        prop_assert_eq!(last, &BiSeries::s(last.order()).pow(p));
        prop_assert!(r.family.coords()[0].s_order().map_or(true, |o| o > p));
    }

    #[test]
    fn bilipschitz_holds_for_product_families(q in prop::sample::select(vec![3u32, 5, 7]), c in 1i64..=4) {
        let param = CurveFamilyParam::from_polys(vec![ts(&format!("{c}*s^{q}")), ts("s^2")], 20).unwrap();
        let (_, r) = bilip_verdict(&param, &ClosureOptions::default()).unwrap();
        prop_assert_eq!(r.aggregate, Status::Holds);
        prop_assert!(r.verify().unwrap());
    }

    #[test]
    fn chain_rule_round_trip(num in 1i64..=4, den in 1i64..=3, q in prop::sample::select(vec![3u32, 5])) {
        let a = ratio(num, den);
        let param = CurveFamilyParam::from_polys(vec![ts(&format!("s^{q} + ({a})*t*s^{}", q + 1)), ts("s^2")], 30).unwrap();
        let imp = implicitize(&param).unwrap();
        let r = chain_rule_check(&param, &imp).unwrap();
        prop_assert!(r.vanishes);
        prop_assert!(r.ok);
    }
}

use std::sync::Arc;

use proptest::prelude::*;

use ciprobe_core::dgmodel::build_minimal_model;
use ciprobe_core::exactalg::{monomials_of_degree, multivariate_divide, parse_poly, FieldSpec, MonomialOrder, PolyRing, Polynomial};
use ciprobe_core::groebner::{
    buchberger, hilbert_by_slice_rank, hilbert_by_standard_monomials, syzygies, GradedRing, Ideal, ModulePresentation,
};
use ciprobe_core::koszul::minimal_ideal_generators;
use ciprobe_core::resolve::minimal_free_resolution;

fn ring(n: usize, field: FieldSpec) -> Arc<PolyRing> {
    let names: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    PolyRing::new(&names, field).unwrap()
}

/// A homogeneous polynomial of degree `d` from a coefficient per monomial.
fn homogeneous(r: &Arc<PolyRing>, d: u32, coeffs: &[i64]) -> Polynomial {
    let f = r.field();
    let terms = monomials_of_degree(r.nvars(), d).into_iter().zip(coeffs.iter().cycle()).map(|(m, &c)| (m, f.from_i64(c))).collect();
    Polynomial::from_terms(r, terms)
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::new_prime(7).unwrap()), Just(FieldSpec::new_prime(32003).unwrap())]
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..8)
}

/// Up to three homogeneous generators of degree 1..=3 in two or three variables.
fn ideal_spec() -> impl Strategy<Value = (usize, Vec<(u32, Vec<i64>)>)> {
    (2usize..=3, prop::collection::vec((1u32..=3, coeffs()), 1..=3))
}

fn build_ideal(n: usize, gens: &[(u32, Vec<i64>)]) -> Ideal {
    let r = ring(n, FieldSpec::Rationals);
    let g: Vec<Polynomial> = gens.iter().map(|(d, c)| homogeneous(&r, *d, c)).filter(|p| !p.is_zero()).collect();
    Ideal::new(&r, g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in field(), n in 1usize..=3, a in coeffs(), b in coeffs(), c in coeffs(), da in 0u32..3, db in 0u32..3, dc in 0u32..3) {
        let r = ring(n, f);
        let (p, q, s) = (homogeneous(&r, da, &a), homogeneous(&r, db, &b), homogeneous(&r, dc, &c));
        let pq = p.try_mul(&q).unwrap();
        prop_assert_eq!(pq.clone(), q.try_mul(&p).unwrap());
        prop_assert_eq!(pq.try_mul(&s).unwrap(), p.try_mul(&q.try_mul(&s).unwrap()).unwrap());
        let lhs = p.try_mul(&q.try_add(&s).unwrap()).unwrap();
        let rhs = pq.try_add(&p.try_mul(&s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(p.try_sub(&p).unwrap().is_zero());
    }

    #[test]
    fn print_parse_round_trip(f in field(), n in 1usize..=3, a in coeffs(), d in 0u32..4, num in -9i64..=9, den in 1i64..=5) {
        let r = ring(n, f);
        let p = homogeneous(&r, d, &a);
        prop_assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p.clone());
        // rational coefficients survive as a/b
        if f == FieldSpec::Rationals {
            let c = f.from_ratio(&num.into(), &den.into()).unwrap();
            let q = p.scale(&c);
            prop_assert_eq!(parse_poly(&r, &q.to_string()).unwrap(), q);
        }
    }

    #[test]
    fn division_identity(f in field(), n in 1usize..=3, a in coeffs(), da in 0u32..5, ds in prop::collection::vec((1u32..=3, coeffs()), 1..=3)) {
        let r = ring(n, f);
        let order = MonomialOrder::DegRevLex;
        let p = homogeneous(&r, da, &a);
        let divisors: Vec<Polynomial> = ds.iter().map(|(d, c)| homogeneous(&r, *d, c)).filter(|q| !q.is_zero()).collect();
        prop_assume!(!divisors.is_empty());
        let (q, rem) = multivariate_divide(&p, &divisors, order).unwrap();
        let mut acc = rem.clone();
        for (qi, di) in q.iter().zip(&divisors) {
            acc = acc.try_add(&qi.try_mul(di).unwrap()).unwrap();
        }
        prop_assert_eq!(acc, p);
        for (m, _) in rem.terms() {
            for d in &divisors {
                prop_assert!(!d.leading_monomial(order).unwrap().divides(m));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn groebner_bases_are_closed((n, gens) in ideal_spec()) {
        let i = build_ideal(n, &gens);
        let gb = buchberger(&i, MonomialOrder::DegRevLex);
        prop_assert!(gb.satisfies_buchberger_criterion());
        for g in i.generators() {
            prop_assert!(gb.contains(g).unwrap());
        }
        if let Ok(q) = GradedRing::quotient(&i) {
            prop_assert_eq!(hilbert_by_standard_monomials(&q, 7), hilbert_by_slice_rank(&i, 7));
        }
    }

    #[test]
    fn syzygies_compose_to_zero((n, gens) in ideal_spec()) {
        let i = build_ideal(n, &gens);
        let r = i.ring();
        let cols: Vec<Vec<Polynomial>> = i.generators().iter().map(|g| vec![g.clone()]).collect();
        let degs: Vec<i32> = i.degrees().iter().map(|&d| d as i32).collect();
        for s in syzygies(r, &cols, &degs, &[0], None) {
            let mut sum = Polynomial::zero(r);
            for (c, g) in s.iter().zip(i.generators()) {
                sum = sum.try_add(&c.try_mul(g).unwrap()).unwrap();
            }
            prop_assert!(sum.is_zero());
        }
    }

    #[test]
    fn minimal_generator_count_survives_unimodular_changes((n, gens) in ideal_spec(), c in -3i64..=3, h in coeffs()) {
        let i = build_ideal(n, &gens);
        prop_assume!(!i.generators().is_empty());
        let r = i.ring().clone();
        let mut g = i.generators().to_vec();
        // g_0 += (homogeneous multiplier) * g_j, then rescale, then reverse
        let j = g.len() - 1;
        let (d0, dj) = (g[0].total_degree().unwrap(), g[j].total_degree().unwrap());
        if j > 0 && d0 >= dj {
            let m = homogeneous(&r, d0 - dj, &h);
            g[0] = g[0].try_add(&m.try_mul(&g[j]).unwrap()).unwrap();
        }
        if c != 0 {
            g[j] = g[j].scale(&r.field().from_i64(c));
        }
        g.reverse();
        let g: Vec<Polynomial> = g.into_iter().filter(|p| !p.is_zero()).collect();
        let changed = Ideal::new(&r, g).unwrap();
        prop_assert_eq!(minimal_ideal_generators(&i).len(), minimal_ideal_generators(&changed).len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn residue_resolutions_are_minimal_complexes((n, gens) in ideal_spec()) {
        let i = build_ideal(n, &gens);
        let Ok(s) = GradedRing::quotient(&i) else { return Ok(()) };
        let k = ModulePresentation::residue_field(&s);
        let res = minimal_free_resolution(&k, 3, 6);
        prop_assert!(res.check_all(&k).is_ok(), "{:?}", res.check_all(&k));
    }

    #[test]
    fn model_differential_is_a_derivation((n, gens) in ideal_spec(), picks in prop::collection::vec((0usize..64, 0usize..64), 4)) {
        let i = build_ideal(n, &gens);
        let Ok(m) = build_minimal_model(&i, 3, 6) else { return Ok(()) };
        prop_assert!(m.check_all().is_ok());
        let a = &m.algebra;
        let nv = a.vars().len();
        prop_assume!(nv > 0);
        for (p, q) in picks {
            let (u, v) = (p % nv, q % nv);
            let (x, y) = (a.var_element(u), a.var_element(v));
            let hx = a.vars()[u].hdeg;
            let hy = a.vars()[v].hdeg;
            // graded commutativity
            let xy = a.multiply(&x, &y);
            let yx = a.multiply(&y, &x);
            prop_assert_eq!(xy.clone(), if hx * hy % 2 == 1 { yx.neg() } else { yx });
            // Leibniz: d(xy) = dx y + (-1)^|x| x dy
            let lhs = a.differential(&xy);
            let t1 = a.multiply(&a.differential(&x), &y);
            let t2 = a.multiply(&x, &a.differential(&y));
            let rhs = if hx % 2 == 1 { t1.sub(&t2) } else { t1.add(&t2) };
            prop_assert_eq!(lhs, rhs);
            prop_assert!(a.differential(&a.differential(&xy)).is_zero());
        }
    }
}

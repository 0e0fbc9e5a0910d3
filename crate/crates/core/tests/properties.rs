use std::collections::HashMap;

use bilv_core::exactalg::{cyclic_shift, rat, ratio, Monomial, Poly, Rational, Var};
use bilv_core::indexsets::{complement, enumerate_s, sigma, tau, IndexTuple};
use bilv_core::poisson::{Bracket, BracketKind, ConstantStructure};
use bilv_core::veselov::{f_to_g, g_to_f};
use proptest::prelude::*;

fn var_pool(k: usize) -> Vec<Var> {
    let n = 2 * k + 1;
    let mut v: Vec<Var> = (1..=n).map(Var::x).collect();
    v.extend((1..=n).map(|i| Var::b(i, (i + k - 1) % n + 1)).map(|v| match v {
        Var::B(i, j) if i > j => Var::b(j as usize, i as usize),
        v => v,
    }));
    v
}

fn poly_strategy(k: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    let pool = var_pool(k);
    let m = pool.len();
    let term = (-4i64..=4, 1i64..=3, prop::collection::vec((0..m, 0u32..=2), 0..=3));
    prop::collection::vec(term, 0..=max_terms).prop_map(move |ts| {
        Poly::from_terms(ts.into_iter().map(|(p, q, vs)| {
            let mono = Monomial::from_pairs(vs.into_iter().filter(|&(_, e)| e > 0).map(|(i, e)| (pool[i], e)));
            (ratio(p, q), mono)
        }))
    })
}

fn x_poly(k: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    let n = 2 * k + 1;
    let term = (-4i64..=4, prop::collection::vec((1..=n, 1u32..=2), 0..=3));
    prop::collection::vec(term, 0..=max_terms).prop_map(|ts| {
        Poly::from_terms(
            ts.into_iter()
                .map(|(c, vs)| (rat(c), Monomial::from_pairs(vs.into_iter().map(|(i, e)| (Var::x(i), e))))),
        )
    })
}

fn assignment(k: usize, vals: &[i64]) -> HashMap<Var, Rational> {
    var_pool(k).into_iter().zip(vals).map(|(v, &c)| (v, rat(c))).collect()
}

fn tuple_strategy() -> impl Strategy<Value = (usize, IndexTuple)> {
    (1usize..=4).prop_flat_map(|k| {
        let n = 2 * k + 1;
        prop::sample::subsequence((1..=n).collect::<Vec<_>>(), 0..=n)
            .prop_map(move |e| (k, IndexTuple::new(k, e).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly_strategy(2, 4), q in poly_strategy(2, 4), r in poly_strategy(2, 4)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p - &p, Poly::zero());
        prop_assert_eq!(&p * &Poly::one(), p.clone());
    }

    #[test]
    fn partials_commute(p in poly_strategy(2, 5), a in 0usize..10, b in 0usize..10) {
        let pool = var_pool(2);
        let (u, v) = (pool[a], pool[b]);
        prop_assert_eq!(p.partial(u).partial(v), p.partial(v).partial(u));
    }

    #[test]
    fn eval_is_a_homomorphism(p in poly_strategy(2, 4), q in poly_strategy(2, 4),
                              vals in prop::collection::vec(-5i64..=5, 10)) {
        let a = assignment(2, &vals);
        let (ep, eq) = (p.eval(&a).unwrap(), q.eval(&a).unwrap());
        prop_assert_eq!((&p * &q).eval(&a).unwrap(), &ep * &eq);
        prop_assert_eq!((&p + &q).eval(&a).unwrap(), &ep + &eq);
    }

    #[test]
    fn full_cycle_of_shifts_is_identity(k in 1usize..=3, seed in 0usize..1000) {
        let _ = seed;
        let p = (1..=2 * k + 1).fold(Poly::zero(), |acc, i| &acc + &(&Poly::x(i) * &Poly::var(Var::b(1, k + 1))).scale(&rat(i as i64)));
        let mut q = p.clone();
        for _ in 0..2 * k + 1 {
            q = cyclic_shift(&q, k);
        }
        prop_assert_eq!(q, p);
    }

    #[test]
    fn shifts_of_random_polys_cycle(p in poly_strategy(2, 5)) {
        let mut q = p.clone();
        for _ in 0..5 {
            q = cyclic_shift(&q, 2);
        }
        prop_assert_eq!(q, p);
    }

    #[test]
    fn bracket_antisymmetry_and_leibniz(k in 1usize..=2, f in x_poly(2, 3), g in x_poly(2, 3), h in x_poly(2, 3)) {
        // keep only variables that exist for this k
        let n = 2 * k + 1;
        let restrict = |p: &Poly| p.substitute(|v| match v {
            Var::X(i) if i as usize > n => Some(Poly::one()),
            _ => None,
        });
        let (f, g, h) = (restrict(&f), restrict(&g), restrict(&h));
        for kind in [
            BracketKind::Quadratic { k },
            BracketKind::Deformed(ConstantStructure::symbolic(k)),
        ] {
            let br = Bracket::new(&kind);
            let fg = br.apply(&f, &g).unwrap();
            prop_assert_eq!(&fg, &-br.apply(&g, &f).unwrap());
            let lhs = br.apply(&f, &(&g * &h)).unwrap();
            let rhs = &(&br.apply(&f, &g).unwrap() * &h) + &(&g * &br.apply(&f, &h).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tuple_maps((k, m) in tuple_strategy()) {
        prop_assert_eq!(sigma(k, &sigma(k, &m)), m.clone());
        prop_assert_eq!(complement(k, &complement(k, &m)), m.clone());
        let mut t = m.clone();
        for _ in 0..2 * k + 1 {
            t = tau(k, &t);
        }
        prop_assert_eq!(t, m);
    }

    #[test]
    fn g_f_round_trip(f in prop::collection::vec(-10.0f64..10.0, 5)) {
        let back = g_to_f(&f_to_g(&f));
        for (a, b) in f.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let back = f_to_g(&g_to_f(&f));
        for (a, b) in f.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn tau_has_exact_order_on_sets() {
    for k in 1..=4 {
        for ell in 0..k {
            for m in enumerate_s(k, ell) {
                let mut t = tau(k, &m);
                let mut order = 1;
                while t != m {
                    t = tau(k, &t);
                    order += 1;
                }
                assert_eq!((2 * k + 1) % order, 0, "{m}");
            }
        }
    }
}

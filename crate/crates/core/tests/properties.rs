use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ntuple_core::cocycle::{are_cohomologous, check_cocycle, Cocycle, CoverNerve};
use ntuple_core::graded::{random, Field, PolyMap, Polynomial};
use ntuple_core::group::{
    catalog, is_normal, normal_subgroups, quotient, subgroup_closure, FiniteGroup,
    DEFAULT_MAX_ORDER,
};
use ntuple_core::io::{GroupSpec, PolyMapSpec};

fn small_group(k: usize) -> FiniteGroup {
    let all = [
        catalog::cyclic(5),
        catalog::klein(),
        catalog::quaternion(),
        catalog::dihedral(4),
        catalog::symmetric(3),
        catalog::alternating(4),
        catalog::symmetric(3).direct_product(&catalog::cyclic(2)),
    ];
    all[k % all.len()].clone()
}

fn permutation(degree: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..degree).collect::<Vec<_>>()).prop_shuffle()
}

fn field(k: u8) -> Field {
    if k.is_multiple_of(2) {
        Field::Rational
    } else {
        Field::prime(3).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subgroup_orders_divide(k in 0usize..7, gens in prop::collection::vec(0usize..64, 0..3)) {
        let g = small_group(k);
        let gens: Vec<usize> = gens.into_iter().map(|x| x % g.order()).collect();
        let s = subgroup_closure(&g, &gens).unwrap();
        prop_assert_eq!(g.order() % s.order(), 0);
        for &a in s.members() {
            prop_assert!(s.contains(g.inv(a)));
            for &b in s.members() {
                prop_assert!(s.contains(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn quotients_have_the_index_order(k in 0usize..7) {
        let g = small_group(k);
        for n in normal_subgroups(&g) {
            prop_assert!(is_normal(&g, &n).unwrap());
            let q = quotient(&g, &n).unwrap();
            prop_assert_eq!(q.group.order() * n.order(), g.order());
            let kernel = q.projection.kernel();
            prop_assert_eq!(kernel.members(), n.members());
        }
    }

    #[test]
    fn permutation_closure_is_a_group(a in permutation(5), b in permutation(5)) {
        let (g, perms) = FiniteGroup::from_permutations(&[a.clone(), b], 5, DEFAULT_MAX_ORDER).unwrap();
        prop_assert_eq!(120 % g.order(), 0);
        prop_assert_eq!(&perms[g.identity()], &(0..5).collect::<Vec<_>>());
        let ia = perms.iter().position(|p| p == &a).unwrap();
        for (x, p) in perms.iter().enumerate() {
            // (a*b)[x] = b[a[x]]
            let composed: Vec<usize> = a.iter().map(|&y| p[y]).collect();
            prop_assert_eq!(&perms[g.mul(ia, x)], &composed);
        }
    }

    #[test]
    fn group_json_round_trips(k in 0usize..7) {
        let g = small_group(k);
        let text = serde_json::to_string(&GroupSpec::from_group(&g)).unwrap();
        let back = serde_json::from_str::<GroupSpec>(&text).unwrap().build(DEFAULT_MAX_ORDER).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn polynomial_ring_laws(seed in any::<u64>(), f in 0u8..2) {
        let field = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random::signature(3, 5, &mut rng);
        let p = random::polynomial(&sig, field, 4, 5, &mut rng);
        let q = random::polynomial(&sig, field, 4, 5, &mut rng);
        let r = random::polynomial(&sig, field, 4, 5, &mut rng);
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
        let x: Vec<_> = (0..sig.coords()).map(|_| random::scalar(field, &mut rng, false)).collect();
        prop_assert_eq!(p.mul(&q).eval(&x), &p.eval(&x) * &q.eval(&x));
        for i in 0..sig.coords() {
            let lhs = p.mul(&q).derivative(i);
            let rhs = p.derivative(i).mul(&q).add(&p.mul(&q.derivative(i)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn scalars_form_a_field(n in -50i64..50, d in 1i64..20, f in 0u8..2) {
        let field = field(f);
        let x = field.ratio(&n.into(), &d.into());
        if let Ok(x) = x {
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
            prop_assert!((&x - &x).is_zero());
            prop_assert_eq!(&x + &(-&x), field.zero());
        }
    }

    #[test]
    fn polymap_json_round_trips(seed in any::<u64>(), f in 0u8..2) {
        let field = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random::signature(3, 5, &mut rng);
        let phi = random::graded_map(&sig, &sig, field, 3, &mut rng);
        let text = serde_json::to_string(&PolyMapSpec::from_map(&phi)).unwrap();
        let back: PolyMap = serde_json::from_str::<PolyMapSpec>(&text).unwrap().build().unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn inverse_of_automorphism_evaluates_back(seed in any::<u64>(), f in 0u8..2) {
        let field = field(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random::signature(3, 6, &mut rng);
        let phi = random::graded_automorphism(&sig, field, 2, &mut rng);
        let inv = phi.invert().unwrap();
        let x: Vec<_> = (0..sig.coords()).map(|_| random::scalar(field, &mut rng, false)).collect();
        prop_assert_eq!(inv.eval(&phi.eval(&x)), x.clone());
        prop_assert_eq!(phi.eval(&inv.eval(&x)), x);
    }

    #[test]
    fn coboundaries_are_cohomologous_to_trivial(k in 0usize..7, lambda in prop::collection::vec(0usize..64, 3)) {
        let g = small_group(k);
        let lambda: Vec<usize> = lambda.into_iter().map(|x| x % g.order()).collect();
        let nerve = CoverNerve::full(3);
        let values = nerve
            .ordered_pairs()
            .into_iter()
            .chain((0..3).map(|i| (i, i)))
            .map(|(i, j)| ((i, j), g.mul(lambda[i], g.inv(lambda[j]))))
            .collect();
        let c = Cocycle::new(&nerve, values).unwrap();
        prop_assert!(check_cocycle(&c, &g).valid);
        let trivial = Cocycle::trivial(&nerve, &g);
        let r = are_cohomologous(&trivial, &c, &g, u128::MAX).unwrap();
        prop_assert!(r.cohomologous);
    }
}

#[test]
fn zero_polynomial_has_no_degree() {
    let p = Polynomial::zero(3, Field::Rational);
    assert_eq!(p.degree(), None);
    assert!(p.is_empty());
}

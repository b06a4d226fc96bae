mod common;

use common::{catalog, m, random_unimodular};
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torlat_core::conjtest::*;
use torlat_core::exact::IntMatrix;
use torlat_core::matgroup::IntGroup;
use torlat_core::torus::gl_order_mod_n;

fn catalog_group() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=3).prop_flat_map(|d| (Just(d), 0..catalog(d).z_count()))
}

#[test]
fn closure_and_schreier_sims_agree() {
    for d in 1..=3 {
        for g in catalog(d).z_classes() {
            let fresh = IntGroup::new(d, g.generators().to_vec()).unwrap();
            let ss = fresh.order_schreier_sims().unwrap();
            assert_eq!(ss, BigUint::from(g.elements().unwrap().len()));
        }
    }
}

#[test]
fn lagrange_and_class_equation() {
    for g in catalog(3).z_classes() {
        let n = g.order_u64().unwrap();
        let classes = g.conjugacy_classes().unwrap();
        let sizes: u64 = classes.iter().map(|c| c.size as u64).sum();
        assert_eq!(sizes, n);
        for c in classes {
            assert!((n % c.size as u64).is_zero());
        }
        for h in g.all_subgroups().unwrap() {
            assert!((n % h.order_u64().unwrap()).is_zero());
        }
    }
}

#[test]
fn minkowski_serre_reductions() {
    for d in 1..=3 {
        for g in catalog(d).z_classes() {
            let n = g.order().unwrap();
            for modulus in 3..=8 {
                let (faithful, kernel) = g.is_faithful_reduction(modulus).unwrap();
                assert!(faithful && kernel.is_empty());
                assert!((gl_order_mod_n(d, modulus) % &n).is_zero());
            }
            // the kernel mod 2 is an elementary abelian 2-group
            let (_, kernel) = g.is_faithful_reduction(2).unwrap();
            let id = IntMatrix::identity(d);
            for a in &kernel {
                assert_eq!(a * a, id);
                for b in &kernel {
                    assert_eq!(a * b, b * a);
                }
            }
            assert!(kernel.len() < 1 << d);
        }
    }
}

#[test]
fn mod_two_kernel_can_exceed_plus_minus_identity() {
    let g = IntGroup::new(2, vec![m(&[&[1, 0], &[0, -1]])]).unwrap();
    let (faithful, kernel) = g.is_faithful_reduction(2).unwrap();
    assert!(!faithful);
    assert_eq!(kernel, vec![m(&[&[1, 0], &[0, -1]])]);
    let square = form_automorphisms(&IntMatrix::identity(2)).unwrap();
    assert_eq!(square.order_u64().unwrap(), 8);
    assert_eq!(gl_order_mod_n(2, 2), BigUint::from(6u32));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugation_preserves_group_invariants((d, i) in catalog_group(), seed in any::<u64>()) {
        let g = &catalog(d).z_classes()[i];
        let u = random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), d);
        let h = g.conjugate_by(&u, &u.inverse_z().unwrap());
        prop_assert_eq!(h.order().unwrap(), g.order().unwrap());
        prop_assert_eq!(h.character_fingerprint().unwrap(), g.character_fingerprint().unwrap());
        prop_assert_eq!(ZProfile::of(&h).unwrap(), ZProfile::of(g).unwrap());
    }

    #[test]
    fn z_conjugacy_round_trip((d, i) in catalog_group(), seed in any::<u64>()) {
        let g = &catalog(d).z_classes()[i];
        let u = random_unimodular(&mut ChaCha8Rng::seed_from_u64(seed), d);
        let h = g.conjugate_by(&u, &u.inverse_z().unwrap());
        let c = z_conjugacy(g, &h, DEFAULT_SEARCH_BOUND).unwrap();
        prop_assert!(c.is_conjugate());
        prop_assert!(c.verify(g, &h).unwrap());
        let back = z_conjugacy(&h, g, DEFAULT_SEARCH_BOUND).unwrap();
        prop_assert!(back.is_conjugate() && back.verify(&h, g).unwrap());
        prop_assert!(q_conjugacy(g, &h).unwrap().verify(g, &h).unwrap());
    }

    #[test]
    fn invariant_lattice_round_trip((d, i) in catalog_group(), diag in prop::collection::vec(1i64..4, 3)) {
        let g = &catalog(d).z_classes()[i];
        let s = IntMatrix::diagonal(&diag[..d].iter().map(|&x| x.into()).collect::<Vec<_>>());
        let rational = g.to_rational().conjugate_by(&s.to_rat(), &s.inverse_q().unwrap());
        let (b, gz) = invariant_lattice(&rational).unwrap();
        let back = rational.conjugate_by(&b.inverse().unwrap(), &b);
        prop_assert!(back.to_integral().is_some());
        prop_assert_eq!(catalog(d).q_class_of(catalog(d).lookup(&gz).unwrap()), catalog(d).q_class_of(i));
    }
}

#[test]
fn pairwise_verdicts_are_symmetric_and_decided() {
    for d in 1..=2 {
        let reps = catalog(d).z_classes();
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let z = z_conjugacy(a, b, DEFAULT_SEARCH_BOUND).unwrap();
                assert!(!z.is_unknown());
                assert_eq!(z.is_conjugate(), i == j);
                let q = q_conjugacy(a, b).unwrap();
                assert_eq!(q.is_conjugate(), catalog(d).q_class_of(i) == catalog(d).q_class_of(j));
                assert_eq!(q.is_conjugate(), q_conjugacy(b, a).unwrap().is_conjugate());
                if z.is_conjugate() {
                    assert!(q.is_conjugate());
                }
            }
        }
    }
}

#[test]
fn swap_and_diag() {
    let swap = IntGroup::new(2, vec![m(&[&[0, 1], &[1, 0]])]).unwrap();
    let diag = IntGroup::new(2, vec![m(&[&[1, 0], &[0, -1]])]).unwrap();
    let z = z_conjugacy(&swap, &diag, DEFAULT_SEARCH_BOUND).unwrap();
    assert!(z.is_not_conjugate());
    assert!(z.invariant().is_some());
    let q = q_conjugacy(&swap, &diag).unwrap();
    assert!(q.is_conjugate() && q.verify(&swap, &diag).unwrap());
}

#[test]
fn forms_are_invariant() {
    for g in catalog(3).z_classes() {
        let f = invariant_form(g).unwrap().matrix;
        for x in g.elements().unwrap() {
            assert_eq!(&(&x.transpose() * &f) * x, f);
        }
        let aut = form_automorphisms(&f).unwrap();
        for x in g.generators() {
            assert!(aut.contains(x).unwrap());
        }
        assert!(!invariant_form_space(g).is_empty());
        if let Some(p) = primitive_invariant_form(g) {
            assert!(torlat_core::exact::is_positive_definite(&p));
        }
    }
}

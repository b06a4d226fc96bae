use num_bigint::BigUint;
use torlat_core::rootsys::{
    build_group, cartan_matrix, designated_group, max_order_table, root_count, signed_permutation_order,
    weyl_generators, weyl_order, RootSystemType,
};

fn ty(s: &str) -> RootSystemType {
    s.parse().unwrap()
}

#[test]
fn large_weyl_orders() {
    assert_eq!(weyl_order(ty("F4")).unwrap(), BigUint::from(1152u32));
    assert_eq!(weyl_order(ty("E6")).unwrap(), BigUint::from(51840u32));
    assert_eq!(weyl_order(ty("E7")).unwrap(), BigUint::from(2903040u32));
    assert_eq!(weyl_order(ty("E8")).unwrap(), BigUint::from(696729600u32));
}

#[test]
fn e8_has_unit_determinant_and_240_roots() {
    assert_eq!(cartan_matrix(ty("E8")).det(), 1.into());
    assert_eq!(root_count(ty("E8")).unwrap(), 240);
    // orbit-stabilizer: |W(E8)| = 240 * |W(E7)|
    assert_eq!(weyl_order(ty("E8")).unwrap(), weyl_order(ty("E7")).unwrap() * BigUint::from(240u32));
}

#[test]
fn schreier_sims_matches_closure_for_small_types() {
    for name in ["A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "C3", "G2", "D4"] {
        let g = weyl_generators(ty(name));
        let closure = g.elements().unwrap().len();
        assert_eq!(g.order_schreier_sims().unwrap(), BigUint::from(closure), "{name}");
    }
}

#[test]
fn generators_preserve_averaged_form() {
    for name in ["G2", "B3", "A3"] {
        let g = weyl_generators(ty(name));
        let f = torlat_core::conjtest::invariant_form(&g).unwrap().matrix;
        for s in g.generators() {
            assert_eq!(&(&s.transpose() * &f) * s, f, "{name}");
        }
    }
}

#[test]
fn adjoining_minus_identity_doubles_e6() {
    let g = build_group(&designated_group(6));
    assert_eq!(g.order_schreier_sims().unwrap(), weyl_order(ty("E6")).unwrap() * BigUint::from(2u32));
}

#[test]
fn direct_product_orders_multiply() {
    let a = weyl_generators(ty("G2"));
    let b = weyl_generators(ty("A2"));
    let p = a.direct_product(&b);
    assert_eq!(p.order_schreier_sims().unwrap(), BigUint::from(12u32 * 6));
    assert_eq!(p.generators()[0].rows(), 4);
}

#[test]
fn table_dominates_signed_permutations() {
    let table = max_order_table().unwrap();
    assert_eq!(table.len(), 10);
    for e in &table {
        assert!(e.max_order >= signed_permutation_order(e.d), "d = {}", e.d);
    }
    let json = serde_json::to_string(&table).unwrap();
    let back: Vec<torlat_core::rootsys::MaxOrderEntry> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, table);
}

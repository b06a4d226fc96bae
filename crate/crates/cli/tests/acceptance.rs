//! One test per acceptance criterion. Criteria 1 and 2 drive the `torlat`
//! binary; the rest call the library directly.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torlat_core::classify::{enumerate_z_types, partition_q_types, TypeCatalog};
use torlat_core::conjtest::{q_conjugacy, z_conjugacy, z_conjugacy_with_profiles, Verdict, DEFAULT_SEARCH_BOUND};
use torlat_core::exact::{hnf, integer_kernel, rank, snf, IntMatrix};
use torlat_core::matgroup::IntGroup;
use torlat_core::torus::{
    acting_group, character_inner_product, gl_order_mod_n, hom_module, homs_fixed_by, is_isogenous, is_isomorphic,
    make_torus, TorusPresentation, DEFAULT_ISOMORPHISM_HEIGHT,
};

fn torlat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_torlat"))
        .args(args)
        .env_remove("TORLAT_CACHE_DIR")
        .output()
        .expect("run torlat");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

fn catalog(d: usize) -> &'static TypeCatalog {
    static CATALOGS: [OnceLock<TypeCatalog>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CATALOGS[d - 1].get_or_init(|| partition_q_types(enumerate_z_types(d).unwrap()).unwrap())
}

fn all_representatives() -> Vec<&'static IntGroup> {
    (1..=3).flat_map(|d| catalog(d).z_classes()).collect()
}

fn swap() -> IntGroup {
    IntGroup::new(2, vec![m(&[&[0, 1], &[1, 0]])]).unwrap()
}

fn diag() -> IntGroup {
    IntGroup::new(2, vec![m(&[&[1, 0], &[0, -1]])]).unwrap()
}

fn torus_of(g: &IntGroup, label: Option<&str>) -> TorusPresentation {
    let t = make_torus(g.clone()).unwrap();
    match label {
        Some(l) => t.with_label(l),
        None => t,
    }
}

#[test]
fn criterion_1_table1_reproduction() {
    let start = Instant::now();
    let (code, stdout, stderr) = torlat(&["table1", "--verify"]);
    let elapsed = start.elapsed();
    assert_eq!(code, 0, "{stderr}");
    let fact = |d: u64| (1..=d).product::<u64>();
    let expected: Vec<(usize, u64)> = (1..=10u64)
        .map(|d| {
            let n = match d {
                2 => 12,
                4 => 1152,
                6 => 103_680,
                7 => 2_903_040,
                8 => 696_729_600,
                9 => 1_393_459_200,
                10 => 8_360_755_200,
                _ => (1u64 << d) * fact(d),
            };
            (d as usize, n)
        })
        .collect();
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for (row, (d, n)) in rows.iter().zip(&expected) {
        let cells: Vec<&str> = row.split(" | ").collect();
        assert_eq!(cells[0], d.to_string());
        assert_eq!(cells[2], n.to_string(), "row {row}");
    }
    assert!(stdout.contains("8 | W(E8) | 696729600"));
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");

    let (code, stdout, _) = torlat(&["table1", "--format", "json", "--dims", "2,4", "-q"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let parsed: Vec<torlat_core::rootsys::MaxOrderEntry> = serde_json::from_value(v).unwrap();
    assert_eq!(parsed.len(), 2);
    assert_eq!(parsed[1].max_order, BigUint::from(1152u32));
}

#[test]
fn criterion_2_classification_counts() {
    for (d, z, q) in [(1, 2, 2), (2, 13, 10), (3, 73, 32)] {
        let start = Instant::now();
        let (code, stdout, stderr) = torlat(&["classify", "--dim", &d.to_string(), "--verify-counts", "--no-cache"]);
        assert_eq!(code, 0, "{stderr}");
        assert_eq!(stdout.trim(), format!("{z} Z-classes, {q} Q-classes"));
        assert!(start.elapsed() < Duration::from_secs(300));
    }
    let (code, stdout, _) = torlat(&["classify", "--dim", "2", "--format", "json", "-q", "--no-cache"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!((v["z_classes"].as_u64(), v["q_classes"].as_u64()), (Some(13), Some(10)));
    let reps: Vec<IntGroup> = serde_json::from_value(v["representatives"].clone()).unwrap();
    assert_eq!(reps.len(), 13);

    let (code, _, stderr) = torlat(&["classify", "--dim", "4", "--verify-counts", "-q"]);
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn criterion_3_minkowski_serre_suite() {
    let reps = all_representatives();
    assert_eq!(reps.len(), 88);
    let mut violations = Vec::new();
    for g in reps {
        let d = g.dimension();
        let order = g.order().unwrap();
        for n in 3..=8 {
            let (faithful, kernel) = g.is_faithful_reduction(n).unwrap();
            if !faithful || !kernel.is_empty() {
                violations.push(format!("{g:?}: not injective mod {n}"));
            }
            if !(gl_order_mod_n(d, n) % &order).is_zero() {
                violations.push(format!("{g:?}: order {order} does not divide #GL_{d}(Z/{n})"));
            }
        }
        let (_, kernel) = g.is_faithful_reduction(2).unwrap();
        let minus = -&IntMatrix::identity(d);
        if let Some(k) = kernel.iter().find(|k| **k != minus) {
            violations.push(format!("d = {d}, |G| = {order}: {k} lies in the kernel mod 2"));
        }
        let bound = gl_order_mod_n(d, 2) * 2u32;
        if !(&bound % &order).is_zero() {
            violations.push(format!("d = {d}: |G| = {order} does not divide {bound}"));
        }
    }
    assert!(violations.is_empty(), "{} violations:\n{}", violations.len(), violations.join("\n"));
}

/// Rank of the solution space of `b X = X a` over Q, by elimination on
/// the linear system in machine integers.
fn oracle_hom_rank(pairs: &[(IntMatrix, IntMatrix)], d1: usize, d2: usize) -> usize {
    let n = d1 * d2;
    let entry = |x: &IntMatrix, i: usize, j: usize| -> i128 { i128::try_from(&x[(i, j)]).unwrap() };
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for (a, b) in pairs {
        // (b X - X a)_{ij} = sum_k b_ik X_kj - sum_k X_ik a_kj, with X_kj at k * d1 + j
        for i in 0..d2 {
            for j in 0..d1 {
                let mut row = vec![0i128; n];
                for k in 0..d2 {
                    row[k * d1 + j] += entry(b, i, k);
                }
                for k in 0..d1 {
                    row[i * d1 + k] -= entry(a, k, j);
                }
                rows.push(row);
            }
        }
    }
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let (f, g) = (rows[r][c], rows[i][c]);
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = *x * f - y * g;
                }
                let content = rows[i].iter().fold(0i128, |acc, &x| num_integer_gcd(acc, x));
                if content > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= content);
                }
            }
        }
        r += 1;
    }
    n - r
}

fn num_integer_gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(1/|Γ|) Σ χ1(g) χ2(g)` from the elements of the acting group.
fn oracle_inner_product(t1: &TorusPresentation, t2: &TorusPresentation) -> BigInt {
    let acting = acting_group(t1, t2);
    let d1 = t1.dimension();
    let els = acting.elements().unwrap();
    let mut sum = BigInt::zero();
    for x in els {
        let a: BigInt = (0..d1).map(|i| x[(i, i)].clone()).sum();
        let b: BigInt = (d1..x.rows()).map(|i| x[(i, i)].clone()).sum();
        sum += a * b;
    }
    assert!((&sum % BigInt::from(els.len())).is_zero());
    sum / BigInt::from(els.len())
}

fn determinant_character(g: &IntGroup) -> IntGroup {
    IntGroup::new(1, g.generators().iter().map(|x| IntMatrix::from_vec(1, 1, vec![x.det()])).collect()).unwrap()
}

fn torus_pairs_low_dimension() -> Vec<(TorusPresentation, TorusPresentation)> {
    let groups: Vec<&IntGroup> = (1..=2).flat_map(|d| catalog(d).z_classes()).collect();
    let mut pairs = Vec::new();
    for a in &groups {
        for b in &groups {
            pairs.push((torus_of(a, None), torus_of(b, None)));
        }
        let shared = |g: &IntGroup| torus_of(g, Some("K"));
        pairs.push((shared(a), shared(a)));
        pairs.push((shared(a), shared(&a.dual())));
        pairs.push((shared(a), shared(&determinant_character(a))));
        pairs.push((shared(&determinant_character(a)), shared(a)));
    }
    pairs
}

#[test]
fn criterion_4_hom_module_oracles() {
    let pairs = torus_pairs_low_dimension();
    assert!(pairs.len() >= 15 * 15);
    for (t1, t2) in &pairs {
        let h = hom_module(t1, t2);
        let (d1, d2) = (t1.dimension(), t2.dimension());
        let acting = acting_group(t1, t2);
        let gens: Vec<(IntMatrix, IntMatrix)> = acting
            .generators()
            .iter()
            .map(|x| {
                let (r1, r2): (Vec<usize>, Vec<usize>) = ((0..d1).collect(), (d1..d1 + d2).collect());
                (x.submatrix(&r1, &r1), x.submatrix(&r2, &r2))
            })
            .collect();
        assert_eq!(BigInt::from(h.rank), character_inner_product(t1, t2).unwrap());
        assert_eq!(BigInt::from(h.rank), oracle_inner_product(t1, t2));
        assert_eq!(h.rank, oracle_hom_rank(&gens, d1, d2));
        for phi in &h.basis {
            for (a, b) in &gens {
                assert_eq!(b * phi, phi * a);
            }
        }
    }
}

#[test]
fn criterion_5_fixed_point_tower() {
    let s = torus_of(&swap(), Some("K"));
    let full = acting_group(&s, &s).generators().to_vec();
    assert_eq!(homs_fixed_by(&s, &s, &full).unwrap().rank, 2);
    assert_eq!(homs_fixed_by(&s, &s, &[]).unwrap().rank, 4);

    let groups: Vec<&IntGroup> = (1..=2).flat_map(|d| catalog(d).z_classes()).collect();
    for a in &groups {
        for b in [(*a).clone(), a.dual()] {
            let (t1, t2) = (torus_of(a, Some("K")), torus_of(&b, Some("K")));
            let (d1, d2) = (t1.dimension(), t2.dimension());
            let acting = acting_group(&t1, &t2);
            let full_rank = homs_fixed_by(&t1, &t2, acting.generators()).unwrap().rank;
            assert_eq!(full_rank, hom_module(&t1, &t2).rank);
            let trivial_rank = homs_fixed_by(&t1, &t2, &[]).unwrap().rank;
            assert_eq!(trivial_rank, d1 * d2);
            for h in acting.all_subgroups().unwrap() {
                let r = homs_fixed_by(&t1, &t2, h.generators()).unwrap().rank;
                assert!(full_rank <= r && r <= trivial_rank);
                for sub in h.all_subgroups().unwrap() {
                    assert!(homs_fixed_by(&t1, &t2, sub.generators()).unwrap().rank >= r);
                }
            }
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> IntMatrix {
    loop {
        let mut u = IntMatrix::identity(d);
        for _ in 0..rng.gen_range(1..=2 * d + 2) {
            let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let mut e = IntMatrix::identity(d);
            if i == j {
                e[(i, i)] = BigInt::from(-1);
            } else {
                e[(i, j)] = BigInt::from(rng.gen_range(-2..=2));
            }
            let next = &e * &u;
            if next.max_abs_entry() <= BigInt::from(3) {
                u = next;
            }
        }
        if !u.is_identity() {
            return u;
        }
    }
}

#[test]
fn criterion_6_conjugacy_engine_soundness() {
    let reps = all_representatives();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let g = reps[rng.gen_range(0..reps.len())];
        let u = random_unimodular(&mut rng, g.dimension());
        assert!(u.max_abs_entry() <= BigInt::from(3));
        let h = g.conjugate_by(&u, &u.inverse_z().unwrap());
        let c = z_conjugacy(g, &h, DEFAULT_SEARCH_BOUND).unwrap();
        assert!(c.is_conjugate(), "{g:?} conjugated by {u}: {c:?}");
        assert!(c.verify(g, &h).unwrap());
    }

    let (s, t) = (swap(), diag());
    assert!(z_conjugacy(&s, &t, DEFAULT_SEARCH_BOUND).unwrap().is_not_conjugate());
    let q = q_conjugacy(&s, &t).unwrap();
    assert!(q.is_conjugate());
    assert!(q.verify(&s, &t).unwrap());

    for d in 1..=3 {
        let c = catalog(d);
        let (reps, profiles) = (c.z_classes(), c.profiles().unwrap());
        for i in 0..reps.len() {
            for j in 0..reps.len() {
                let cert =
                    z_conjugacy_with_profiles(&reps[i], &profiles[i], &reps[j], &profiles[j], DEFAULT_SEARCH_BOUND)
                        .unwrap();
                assert!(!matches!(cert.verdict, Verdict::Unknown(_)), "d = {d}: {i} vs {j}");
                assert_eq!(cert.is_conjugate(), i == j);
            }
        }
    }
}

#[test]
fn criterion_7_isogeny_versus_isomorphism() {
    let (s, t) = (torus_of(&swap(), Some("K")), torus_of(&diag(), Some("K")));
    assert!(is_isogenous(&s, &t).unwrap());
    let iso = is_isomorphic(&s, &t, DEFAULT_ISOMORPHISM_HEIGHT).unwrap();
    assert!(iso.is_not_conjugate());
    assert_eq!(iso.invariant(), Some("no equivariant map has unit determinant modulo a small integer"));

    // the rational intertwiner exists but has determinant -2
    let q = q_conjugacy(s.galois(), t.galois()).unwrap();
    let w = q.witness_matrix().unwrap();
    assert_eq!(w, m(&[&[-1, -1], &[-1, 1]]).to_rat());
    assert_eq!(w.det().to_integer(), BigInt::from(-2));
    assert!(q.verify(s.galois(), t.galois()).unwrap());
    let hom = hom_module(&s, &t);
    assert_eq!(hom.rank, 2);
    let (x, y) = (&hom.basis[0], &hom.basis[1]);
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            let phi = &x.scale(&BigInt::from(a)) + &y.scale(&BigInt::from(b));
            assert!((phi.det() % BigInt::from(2)).is_zero());
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn det_i128(a: &[Vec<i128>]) -> i128 {
    if a.is_empty() {
        return 1;
    }
    (0..a.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * a[0][j] * det_i128(&minor)
        })
        .sum()
}

/// gcd of all k-by-k minors, for each k.
fn minor_gcds(a: &[Vec<i128>], rows: usize, cols: usize) -> Vec<i128> {
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = 0i128;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                    g = num_integer_gcd(g, det_i128(&minor));
                }
            }
            g
        })
        .collect()
}

#[test]
fn criterion_8_exact_linear_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let raw: Vec<Vec<i128>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_i64_rows(raw.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect());

        let (h, u) = hnf(&a);
        assert!(u.is_unimodular());
        assert_eq!(&u * &a, h);
        let mut last = None;
        for i in 0..r {
            if let Some(p) = (0..c).find(|&j| !h[(i, j)].is_zero()) {
                assert!(last.is_none_or(|q| p > q));
                assert!(h[(i, p)].is_positive());
                for k in 0..i {
                    assert!(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)]);
                }
                last = Some(p);
            } else {
                assert!((i..r).all(|k| (0..c).all(|j| h[(k, j)].is_zero())));
            }
        }

        let s = snf(&a);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(&(&s.u * &a) * &s.v, s.s);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        }
        let oracle = minor_gcds(&raw, r, c);
        let mut prod = BigInt::one();
        for (k, dk) in oracle.iter().enumerate() {
            prod *= &diag[k];
            assert_eq!(prod, BigInt::from(*dk));
        }

        let rk = rank(&a);
        assert_eq!(rk, oracle.iter().filter(|&&x| x != 0).count());
        let kernel = integer_kernel(&a);
        assert_eq!(kernel.len(), c - rk);
        for v in &kernel {
            assert!(a.apply(v).iter().all(Zero::is_zero));
        }
    }
}

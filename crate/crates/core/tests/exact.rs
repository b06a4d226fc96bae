use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use torlat_core::exact::*;

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c)
            .prop_map(move |v| IntMatrix::from_i64_rows(v.chunks(c).map(|x| x.to_vec()).collect()))
    })
}

fn unimodular_strategy(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k) in ops {
            if i != j {
                let mut e = IntMatrix::identity(n);
                e[(i, j)] = BigInt::from(k);
                u = &e * &u;
            }
        }
        u
    })
}

fn det_i128(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                a[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * a[0][j] * det_i128(&minor)
        })
        .sum()
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

/// Determinantal divisors `D_k` (gcd of all k×k minors), computed without
/// any elimination.
fn determinantal_divisors(a: &IntMatrix) -> Vec<i128> {
    let rows: Vec<Vec<i128>> =
        a.to_i64_rows().unwrap().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        let mut g = 0i128;
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                g = g.gcd(&det_i128(&minor));
            }
        }
        out.push(g);
    }
    out
}

fn check_snf(a: &IntMatrix) {
    let r = snf(a);
    assert!(r.u.is_unimodular() && r.v.is_unimodular());
    assert_eq!(&(&r.u * a) * &r.v, r.s);
    for i in 0..r.s.rows() {
        for j in 0..r.s.cols() {
            if i != j {
                assert!(r.s[(i, j)].is_zero());
            }
        }
    }
    let diag = r.diagonal();
    assert!(diag.iter().all(|d| !d.is_negative()));
    for w in diag.windows(2) {
        if w[0].is_zero() {
            assert!(w[1].is_zero());
        } else {
            assert!((&w[1] % &w[0]).is_zero());
        }
    }
    let divisors = determinantal_divisors(a);
    let mut prod = BigInt::from(1);
    for (k, dk) in divisors.iter().enumerate() {
        prod *= &diag[k];
        assert_eq!(prod, BigInt::from(*dk), "D_{} of {a:?}", k + 1);
    }
}

fn check_hnf(a: &IntMatrix) {
    let (h, u) = hnf(a);
    assert!(u.is_unimodular());
    assert_eq!(&u * a, h);
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        match (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) {
            None => seen_zero = true,
            Some(p) => {
                assert!(!seen_zero);
                assert!(last_pivot.is_none_or(|q| p > q));
                assert!(h[(i, p)].is_positive());
                for k in 0..i {
                    assert!(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)]);
                }
                last_pivot = Some(p);
            }
        }
    }
}

fn check_kernel(a: &IntMatrix) {
    let k = integer_kernel(a);
    assert_eq!(k.len(), a.cols() - rank(a));
    for v in &k {
        assert!(a.apply(v).iter().all(Zero::is_zero));
    }
    if !k.is_empty() {
        // saturated: the kernel basis has trivial elementary divisors
        let b = IntMatrix::from_rows(k.clone());
        assert!(snf(&b).invariant_factors().iter().all(|d| *d == BigInt::from(1)));
    }
    assert_eq!(rank(a), determinantal_divisors(a).iter().filter(|d| **d != 0).count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_unimodular_equivalence(a in matrix_strategy(5, 9)) {
        check_snf(&a);
    }

    #[test]
    fn hermite_form_is_canonical(a in matrix_strategy(5, 9), u in unimodular_strategy(5)) {
        check_hnf(&a);
        if a.rows() == 5 {
            let moved = &u * &a;
            prop_assert_eq!(hnf(&moved).0, hnf(&a).0);
        }
    }

    #[test]
    fn smith_form_is_invariant_under_equivalence(a in matrix_strategy(4, 9), p in unimodular_strategy(4), q in unimodular_strategy(4)) {
        if a.rows() == 4 && a.cols() == 4 {
            let b = &(&p * &a) * &q;
            prop_assert_eq!(snf(&b).diagonal(), snf(&a).diagonal());
        }
    }

    #[test]
    fn kernel_dimension(a in matrix_strategy(5, 4)) {
        check_kernel(&a);
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix_strategy(4, 9), b in matrix_strategy(4, 9)) {
        if a.is_square() && b.is_square() && a.rows() == b.rows() {
            prop_assert_eq!((&a * &b).det(), a.det() * b.det());
            prop_assert_eq!(a.transpose().det(), a.det());
        }
    }

    #[test]
    fn gram_reduction_preserves_the_lattice(u in unimodular_strategy(4), diag in prop::collection::vec(1i64..6, 4)) {
        let d = IntMatrix::diagonal(&diag.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let f = &(&u.transpose() * &d) * &u;
        let (r, t) = gram_reduce(&f).unwrap();
        prop_assert!(t.is_unimodular());
        prop_assert_eq!(&(&t.transpose() * &f) * &t, r.clone());
        prop_assert_eq!(r.det(), f.det());
        prop_assert!(is_positive_definite(&r));
    }
}

#[test]
fn rational_inverse() {
    let a = IntMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
    let inv = a.inverse_q().unwrap();
    assert_eq!(&a.to_rat() * &inv, RatMatrix::identity(3));
    assert!(a.inverse_z().is_err());
}

#[test]
fn short_vectors_of_a2() {
    let f = IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
    let v = short_vectors(&f, &BigInt::from(2)).unwrap();
    assert_eq!(v.len(), 6);
    for (x, n) in &v {
        assert_eq!(quadratic_value(&f, x), *n);
        assert_eq!(*n, BigInt::from(2));
    }
}

use proptest::prelude::*;

use deligne_core::cli::parse_range;
use deligne_core::deligne::build_deligne;
use deligne_core::dolbeault::BigradedComplex;
use deligne_core::exactnum::{q, CMatrix, Field, QMatrix, Rational, Scalar};
use deligne_core::format::{parse_complex_file, serialize};
use deligne_core::green::{a_map, class_map, is_green_for, p1_green_context};
use deligne_core::models::suite;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| q(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(a, b)| Scalar::new(a, b))
}

fn qmatrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        QMatrix::from_rows((0..rows).map(|i| v[i * cols..(i + 1) * cols].iter().map(|&x| q(x, 1)).collect()).collect(), cols)
    })
}

fn model(i: usize) -> BigradedComplex {
    suite()[i % 10].complex.clone()
}

proptest! {
    #[test]
    fn gaussian_rationals_form_a_field(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.plus(&b), b.plus(&a));
        prop_assert_eq!(a.times(&b), b.times(&a));
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert!(a.minus(&a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.times(&a.inv()), Scalar::one());
        }
        prop_assert_eq!(a.times(&b).conj(), a.conj().times(&b.conj()));
    }

    #[test]
    fn literals_round_trip(a in scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn kernel_and_rank(m in qmatrix(3, 5)) {
        let k = m.kernel();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols() + m.rank(), 5);
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn solve_finds_preimages(m in qmatrix(4, 3), x in prop::collection::vec(-4i64..=4, 3)) {
        let x = QMatrix::from_columns(3, &[x.iter().map(|&v| q(v, 1)).collect()]);
        let b = m.mul(&x);
        let y = m.solve(&b).expect("b is in the image");
        prop_assert_eq!(m.mul(&y), b);
    }

    #[test]
    fn realification_is_multiplicative(a in prop::collection::vec(scalar(), 4), b in prop::collection::vec(scalar(), 4)) {
        let ma = CMatrix::from_rows(vec![a[..2].to_vec(), a[2..].to_vec()], 2);
        let mb = CMatrix::from_rows(vec![b[..2].to_vec(), b[2..].to_vec()], 2);
        prop_assert_eq!(ma.mul(&mb).realify(), ma.realify().mul(&mb.realify()));
    }

    #[test]
    fn hodge_projectors_are_idempotent(i in 0usize..10, n in -3i64..=1, k in -2i64..=2, k2 in -2i64..=2) {
        let a = model(i);
        let f = a.fkk_h(n, k, k2);
        prop_assert_eq!(f.mul(&f), f.clone());
        let p = a.pi_real_h(n, k);
        prop_assert_eq!(p.mul(&p), p.clone());
    }

    #[test]
    fn deligne_euler_characteristic(i in 0usize..10, p in -2i64..=3) {
        let a = model(i);
        let d = build_deligne(&a, p).unwrap();
        let chain = d.chain();
        let sign = |n: i64| if n.rem_euclid(2) == 0 { 1i64 } else { -1 };
        let from_chains: i64 = chain.dims.iter().map(|(&n, &k)| sign(n) * k as i64).sum();
        let from_homology: i64 = chain.homology_dims().iter().map(|(&n, &k)| sign(n) * k as i64).sum();
        prop_assert_eq!(from_chains, from_homology);
    }

    #[test]
    fn greenness_is_invariant_under_a(s in -3i64..=3, eta in prop::collection::vec(-5i64..=5, 2)) {
        let c = p1_green_context().unwrap();
        let eta: Vec<Rational> = eta.iter().map(|&x| q(x, 2)).collect();
        let base = c.scaled_class(&q(s, 1));
        let moved = base.add(&a_map(&c.ctx, &eta).unwrap());
        let v0 = is_green_for(&c.ctx, &base, &c.delta).unwrap();
        let v1 = is_green_for(&c.ctx, &moved, &c.delta).unwrap();
        prop_assert_eq!(v0.is_green(), v1.is_green());
        prop_assert_eq!(class_map(&c.ctx, &base), class_map(&c.ctx, &moved));
    }

    #[test]
    fn ranges_hold_their_endpoints(a in -50i64..50, len in 1i64..30) {
        let r = parse_range(&format!("{a}..{}", a + len - 1), 64).unwrap();
        prop_assert_eq!(r.len() as i64, len);
        prop_assert_eq!(r[0], a);
    }
}

#[test]
fn suite_files_round_trip() {
    for f in suite() {
        let text = serialize(&f.complex);
        let back = parse_complex_file(&text).unwrap();
        assert_eq!(back.dims(), f.complex.dims(), "{}", f.complex.name);
        for which in ["del", "delbar", "sigma"] {
            let nonzero = |a: &BigradedComplex| a.blocks(which).into_iter().filter(|(_, m)| !m.is_zero()).collect::<Vec<_>>();
            assert_eq!(nonzero(&back), nonzero(&f.complex), "{} {which}", f.complex.name);
        }
        assert_eq!(serialize(&back), text);
    }
}

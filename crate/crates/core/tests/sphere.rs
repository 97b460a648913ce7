use proptest::prelude::*;
use steiner_msr::orthrep::triple_product;
use steiner_msr::sphere::{antipode, center_in_hull, equivalence_suite, phi, probe_suite, HULL_TOL};
use steiner_msr::{CVector, Complex64, Execution};

fn pair() -> impl Strategy<Value = CVector> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| CVector::new(vec![Complex64::new(a, b), Complex64::new(c, d)]))
}

fn close(p: [f64; 3], q: [f64; 3], tol: f64) -> bool {
    p.iter().zip(&q).all(|(a, b)| (a - b).abs() <= tol)
}

proptest! {
    #[test]
    fn image_lies_on_sphere(u in pair()) {
        let [x, y, z] = phi(&u).unwrap().coords();
        prop_assert!((x * x + y * y + (z - 0.5).powi(2) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn image_ignores_scaling(u in pair(), r in 0.01..100.0f64, t in 0.0..std::f64::consts::TAU) {
        let s = Complex64::from_polar(r, t);
        prop_assert!(close(phi(&u).unwrap().coords(), phi(&u.scaled(s)).unwrap().coords(), 1e-12));
    }

    #[test]
    fn orthogonal_vectors_map_to_antipodes(u in pair()) {
        let e = u.entries();
        let perp = CVector::new(vec![-e[1].conj(), e[0].conj()]);
        let a = antipode(&phi(&u).unwrap()).coords();
        prop_assert!(close(a, phi(&perp).unwrap().coords(), 1e-12));
    }

    #[test]
    fn hull_test_is_symmetric(u in pair(), v in pair(), w in pair()) {
        let (p, q, r) = (phi(&u).unwrap(), phi(&v).unwrap(), phi(&w).unwrap());
        let h = center_in_hull(&p, &q, &r, HULL_TOL);
        prop_assert_eq!(h, center_in_hull(&q, &r, &p, HULL_TOL));
        prop_assert_eq!(h, center_in_hull(&r, &q, &p, HULL_TOL));
    }

    #[test]
    fn complex_products_keep_center_off_hull(u in pair(), v in pair(), w in pair()) {
        let scale = u.norm_sqr() * v.norm_sqr() * w.norm_sqr();
        let t = triple_product(&u, &v, &w).unwrap() / scale;
        prop_assume!(t.im.abs() > 1e-3);
        let (p, q, r) = (phi(&u).unwrap(), phi(&v).unwrap(), phi(&w).unwrap());
        prop_assert!(!center_in_hull(&p, &q, &r, HULL_TOL));
    }
}

#[test]
fn suites_agree_and_reproduce() {
    let a = equivalence_suite(2_000, 11, Execution::Parallel);
    assert!(a.pass(), "{a:?}");
    assert_eq!(a, equivalence_suite(2_000, 11, Execution::Sequential));
    assert!(a.both_true > 0 && a.coplanar > 0 && a.generic > 0);
    let p = probe_suite(50, 2_000, 11, Execution::Parallel);
    assert!(p.pass(), "{p:?}");
    assert_eq!(p, probe_suite(50, 2_000, 11, Execution::Sequential));
}

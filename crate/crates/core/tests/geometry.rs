use proptest::prelude::*;
use std::f64::consts::PI;
use strichartz::geometry::*;

fn point(n: usize) -> impl Strategy<Value = HPoint> {
    (prop::collection::vec(-3.0f64..3.0, 2 * n), -3.0f64..3.0).prop_map(|(z, t)| HPoint::new(z, t).unwrap())
}

fn close(p: &HPoint, q: &HPoint) -> bool {
    p.z.iter().zip(&q.z).all(|(a, b)| (a - b).abs() < 1e-12) && (p.t - q.t).abs() < 1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_law_is_associative((p, q, r) in (1usize..4).prop_flat_map(|n| (point(n), point(n), point(n)))) {
        let a = group_mul(&group_mul(&p, &q).unwrap(), &r).unwrap();
        let b = group_mul(&p, &group_mul(&q, &r).unwrap()).unwrap();
        prop_assert!(close(&a, &b));
    }

    #[test]
    fn inverse_and_identity(p in (1usize..4).prop_flat_map(point)) {
        let e = HPoint::identity(p.dim());
        prop_assert!(close(&group_mul(&p, &p.inverse()).unwrap(), &e));
        prop_assert!(close(&group_mul(&e, &p).unwrap(), &p));
        prop_assert!((homogeneous_norm(&p.inverse()) - homogeneous_norm(&p)).abs() < 1e-12);
    }

    #[test]
    fn dilations_are_automorphisms((p, q) in (1usize..3).prop_flat_map(|n| (point(n), point(n))), r in 0.1f64..5.0) {
        let a = group_mul(&p, &q).unwrap().dilate(r);
        let b = group_mul(&p.dilate(r), &q.dilate(r)).unwrap();
        prop_assert!(close(&a, &b));
        prop_assert!((homogeneous_norm(&p.dilate(r)) - r * homogeneous_norm(&p)).abs() < 1e-12 * (1.0 + r));
    }

    #[test]
    fn norm_triangle_inequality((p, q) in (1usize..3).prop_flat_map(|n| (point(n), point(n)))) {
        let pq = group_mul(&p, &q).unwrap();
        prop_assert!(homogeneous_norm(&pq) <= homogeneous_norm(&p) + homogeneous_norm(&q) + 1e-12);
    }
}

#[test]
fn centre_commutes_and_symplectic_term() {
    let p = HPoint::new(vec![1.0, 0.0], 0.0).unwrap();
    let q = HPoint::new(vec![0.0, 1.0], 0.0).unwrap();
    // [p, q] = p q p^{-1} q^{-1} is central with t = Im(z w̄)
    let c = group_mul(&group_mul(&group_mul(&p, &q).unwrap(), &p.inverse()).unwrap(), &q.inverse()).unwrap();
    assert!(c.z.iter().all(|v| v.abs() < 1e-15));
    assert!((c.t + 1.0).abs() < 1e-15);
    assert!(group_mul(&p, &HPoint::identity(2)).is_err());
}

#[test]
fn ball_and_sphere() {
    // R^2: πρ², R^4: π²ρ⁴/2
    assert!((ball_volume(1, 2.0) - 4.0 * PI).abs() < 1e-12);
    assert!((ball_volume(2, 1.5) - PI * PI * 1.5f64.powi(4) / 2.0).abs() < 1e-12);
    assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-12);
    assert!((sphere_area(2) - 2.0 * PI * PI).abs() < 1e-12);
}

#[test]
fn homogeneous_norm_example() {
    let p = HPoint::new(vec![1.0, 1.0], 0.25).unwrap();
    // |z|⁴ = 4, 16 t² = 1
    assert!((homogeneous_norm(&p) - 5f64.powf(0.25)).abs() < 1e-15);
    assert!((norm_rt(2f64.sqrt(), 0.25) - 5f64.powf(0.25)).abs() < 1e-15);
}

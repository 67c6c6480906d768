use proptest::prelude::*;
use spectral_lp::spectral::nodes_for_degree;
use spectral_lp::*;

fn binom(n: f64, k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * (n - k as f64 + j as f64) / j as f64)
}

fn gram_error(f: &Family, nodes: &[f64], weights: &[f64], top: usize) -> f64 {
    let vals: Vec<Vec<f64>> = nodes.iter().map(|&x| f.evaluate_upto(top, x).unwrap()).collect();
    let mut worst = 0.0f64;
    for i in 0..=top {
        for j in i..=top {
            let g: f64 = vals.iter().zip(weights).map(|(v, w)| w * v[i] * v[j]).sum();
            worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

fn discrete(f: &Family) -> (Vec<f64>, Vec<f64>) {
    match f.measure() {
        MeasureSpec::Discrete { points, weights } => (points, weights),
        _ => panic!("discrete family expected"),
    }
}

#[test]
fn discrete_families_are_orthonormal() {
    for n in 1..=50 {
        let f = Family::hamming(n).unwrap();
        let (x, w) = discrete(&f);
        let e = gram_error(&f, &x, &w, 15.min(n as usize));
        assert!(e < 1e-9, "Hamming n={n}: {e}");
    }
    for n in 2..=50u32 {
        for wt in 1..=(n / 2).min(25) {
            let f = Family::johnson(n, wt).unwrap();
            let (x, w) = discrete(&f);
            let e = gram_error(&f, &x, &w, 12.min(wt as usize));
            assert!(e < 1e-9, "Johnson n={n} w={wt}: {e}");
        }
    }
}

#[test]
fn continuous_families_are_orthonormal_under_gauss_rules() {
    for n in 3..=30 {
        let mut fams = vec![Family::sphere(n).unwrap()];
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            fams.push(Family::projective(n, field).unwrap());
        }
        for f in fams {
            let q = gauss_quadrature(&f, nodes_for_degree(24)).unwrap();
            let e = gram_error(&f, &q.nodes, &q.weights, 12);
            assert!(e < 1e-9, "{:?}: {e}", f.spec());
        }
    }
}

#[test]
fn gauss_rules_reproduce_jacobi_moments() {
    // E[(1+x)^m] under (1−x)^α (1+x)^β equals 2^m Π_{j<m} (β+1+j)/(α+β+2+j).
    let cases: Vec<Family> = vec![
        Family::sphere(3).unwrap(),
        Family::sphere(7).unwrap(),
        Family::projective(4, Field::Real).unwrap(),
        Family::projective(5, Field::Complex).unwrap(),
        Family::projective(3, Field::Quaternion).unwrap(),
        Family::jacobi(2.5, 0.0).unwrap(),
    ];
    for f in cases {
        let (al, be) = match f.spec() {
            FamilySpec::Sphere { n } => ((n as f64 - 3.0) / 2.0, (n as f64 - 3.0) / 2.0),
            _ => f.jacobi_params().unwrap(),
        };
        let q = gauss_quadrature(&f, 8).unwrap();
        for m in 0..=15 {
            let want = (0..m).fold(1.0, |acc, j| acc * 2.0 * (be + 1.0 + j as f64) / (al + be + 2.0 + j as f64));
            let got: f64 = q.nodes.iter().zip(&q.weights).map(|(x, w)| w * (1.0 + x).powi(m)).sum();
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "{:?} m={m}: {got} vs {want}", f.spec());
        }
    }
}

#[test]
fn special_values_at_tau0() {
    for n in [5u32, 10, 40, 200] {
        let f = Family::hamming(n).unwrap();
        for k in [0, 1, n / 3, n / 2, n - 1, n] {
            let got = f.evaluate(k as usize, 0.0).unwrap();
            let want = binom(n as f64, k).sqrt();
            assert!((got - want).abs() < 1e-9 * want, "Hamming n={n} k={k}: {got} vs {want}");
        }
    }
    for (n, w) in [(10u32, 5u32), (30, 10), (61, 30)] {
        let f = Family::johnson(n, w).unwrap();
        for k in 0..=w {
            let got = f.evaluate(k as usize, 0.0).unwrap();
            let nf = n as f64;
            let want = ((nf - 2.0 * k as f64 + 1.0) / (nf - k as f64 + 1.0) * binom(nf, k)).sqrt();
            assert!((got - want).abs() < 1e-9 * want, "Johnson ({n},{w}) k={k}: {got} vs {want}");
        }
    }
    for n in [3u32, 4, 9, 24] {
        let f = Family::sphere(n).unwrap();
        for k in [0u32, 1, 2, 7, 20] {
            let nf = n as f64;
            let want = ((nf + 2.0 * k as f64 - 2.0) / (nf - 2.0) * binom(nf + k as f64 - 3.0, k)).sqrt();
            let got = f.evaluate(k as usize, 1.0).unwrap();
            assert!((got - want).abs() < 1e-9 * want, "sphere n={n} k={k}");
        }
    }
    for (al, be) in [(0.5, -0.5), (3.0, 1.0), (9.0, 0.0)] {
        let f = Family::jacobi(al, be).unwrap();
        let s = al + be;
        for k in [0u32, 1, 5, 17] {
            let kf = k as f64;
            let want = ((2.0 * kf + s + 1.0) / (s + 1.0) * binom(kf + al, k) * binom(kf + s, k) / binom(kf + be, k)).sqrt();
            let got = f.evaluate(k as usize, 1.0).unwrap();
            assert!((got - want).abs() < 1e-9 * want, "Jacobi ({al},{be}) k={k}: {got} vs {want}");
        }
    }
}

#[test]
fn hahn_value_at_zero_example() {
    // Sphere n=4: C̃_2(1) = 3; Hamming n=10: K̃_3(0) = √120.
    assert!((Family::sphere(4).unwrap().evaluate(2, 1.0).unwrap() - 3.0).abs() < 1e-13);
    assert!((Family::hamming(10).unwrap().evaluate(3, 0.0).unwrap() - 120f64.sqrt()).abs() < 1e-12);
}

#[test]
fn recurrence_examples() {
    let r = Family::hamming(10).unwrap().recurrence(0).unwrap();
    assert_eq!((r.a, r.b, r.c), (10f64.sqrt(), 0.0, 0.0));
    let r = Family::sphere(5).unwrap().recurrence(0).unwrap();
    assert!((r.a - 1.0 / 5f64.sqrt()).abs() < 1e-15 && r.b == 0.0);
    let f = Family::jacobi(1.5, 1.5).unwrap();
    assert!((0..20).all(|k| f.recurrence(k).unwrap().b == 0.0));
    assert_eq!(Family::johnson(10, 5).unwrap().recurrence(1).unwrap().b, 0.0);
    assert!(Family::hamming(10).unwrap().recurrence(11).is_err());
    assert!(Family::johnson(10, 4).unwrap().recurrence(5).is_err());
}

#[test]
fn johnson_weight_above_half_is_rejected_with_complement() {
    match Family::johnson(10, 7) {
        Err(Error::JohnsonWeightTooLarge { complement, .. }) => assert_eq!(complement, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn linearization_is_nonnegative() {
    let fams = vec![
        Family::hamming(12).unwrap(),
        Family::johnson(16, 6).unwrap(),
        Family::johnson(20, 10).unwrap(),
        Family::sphere(5).unwrap(),
        Family::sphere(3).unwrap(),
        Family::projective(4, Field::Real).unwrap(),
        Family::projective(4, Field::Complex).unwrap(),
        Family::projective(4, Field::Quaternion).unwrap(),
    ];
    for f in fams {
        let top = f.max_degree().map_or(10, |m| m.min(10));
        let lin = Linearizer::new(&f, 2 * top).unwrap();
        for i in 0..=top {
            for j in 0..=top {
                let q = lin.coefficients(i, j, 2 * top).unwrap();
                let worst = q.iter().copied().fold(f64::INFINITY, f64::min);
                assert!(worst >= -1e-9, "{:?} i={i} j={j}: {worst}", f.spec());
            }
        }
    }
}

fn any_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (1u32..60).prop_map(|n| Family::hamming(n).unwrap()),
        (2u32..60, 0.0f64..1.0).prop_map(|(n, u)| {
            let w = 1 + ((n / 2 - 1) as f64 * u) as u32;
            Family::johnson(n, w.max(1)).unwrap()
        }),
        (3u32..60).prop_map(|n| Family::sphere(n).unwrap()),
        (3u32..40, 0usize..3).prop_map(|(n, i)| {
            Family::projective(n, [Field::Real, Field::Complex, Field::Quaternion][i]).unwrap()
        }),
    ]
}

proptest! {
    #[test]
    fn recurrence_coefficients_are_consistent(f in any_family(), u in 0.0f64..1.0) {
        let top = f.max_degree().unwrap_or(40);
        let k = ((top as f64) * u) as usize;
        let r = f.recurrence(k).unwrap();
        prop_assert!(r.a >= 0.0 && r.b >= -1e-15 && r.c >= 0.0);
        if k < top {
            let next = f.recurrence(k + 1).unwrap();
            prop_assert!((next.c - r.a).abs() <= 1e-12 * r.a.max(1e-300));
        }
        // Same relation in the x variable: x = (P1 − intercept) / slope.
        let (slope, intercept) = f.p1_affine();
        prop_assert!((r.alpha * slope - r.a).abs() <= 1e-12 * r.a.abs().max(1.0));
        prop_assert!((r.beta * slope + intercept - r.b).abs() <= 1e-12 * (r.b.abs() + intercept.abs()).max(1.0));
    }

    #[test]
    fn both_recurrences_agree(f in any_family(), u in 0.0f64..1.0, k in 0usize..12) {
        let top = f.max_degree().unwrap_or(12);
        let k = k.min(top);
        let (lo, hi) = f.support_interval();
        let x = lo + (hi - lo) * u;
        let a = f.evaluate(k, x).unwrap();
        let b = f.evaluate_via_p1(k, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn p0_is_one(f in any_family(), x in -1.0f64..1.0) {
        prop_assert_eq!(f.evaluate(0, x).unwrap(), 1.0);
    }

    #[test]
    fn p1_is_monotone_and_inverse(f in any_family(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (lo, hi) = f.support_interval();
        let (x, y) = (lo + (hi - lo) * u, lo + (hi - lo) * v);
        let (slope, _) = f.p1_affine();
        if x < y {
            prop_assert!((f.p1_value(y) - f.p1_value(x)) * slope.signum() >= 0.0);
        }
        prop_assert!((f.p1_inverse(f.p1_value(x)) - x).abs() < 1e-9 * (hi - lo).max(1.0));
    }
}

#[test]
fn tau_examples() {
    assert_eq!(Family::hamming(12).unwrap().tau(5.0).unwrap(), 5.0);
    assert_eq!(Family::hamming(12).unwrap().p1_value(5.0), 2.0);
    assert!(Family::sphere(5).unwrap().tau(2f64.sqrt()).unwrap().abs() < 1e-15);
    let t: f64 = 0.6;
    let d = (2.0 * (1.0 - t)).sqrt();
    let x = Family::projective(5, Field::Real).unwrap().tau(d).unwrap();
    assert!((x - (2.0 * t * t - 1.0)).abs() < 1e-15);
    assert!(Family::hamming(12).unwrap().tau(13.0).is_err());
    assert!(Family::sphere(5).unwrap().tau(2.5).is_err());
}

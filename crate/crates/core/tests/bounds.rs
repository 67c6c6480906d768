use spectral_lp::bound::{generic_bound_log2, specialized_bound_log2, NoBoundReason};
use spectral_lp::tridiag::largest_eigenvalue;
use spectral_lp::*;

fn best(q: BoundQuery) -> BoundResult {
    match spectral_bound(&q, &BoundOptions::default()).unwrap() {
        BoundOutcome::Bound(b) => b,
        other => panic!("{q:?}: {other:?}"),
    }
}

#[test]
fn generic_and_specialized_agree_exhaustively_at_small_length() {
    let mut queries = Vec::new();
    for n in 2..=30u32 {
        queries.extend((1..=n).map(|d| BoundQuery::hamming(n, d)));
        for w in 1..=n / 2 {
            queries.extend((1..=w).map(|d| BoundQuery::johnson(n, w, d)));
        }
        if n >= 3 {
            for t in [-0.7, -0.2, 0.0, 0.3, 0.6, 0.85] {
                queries.push(BoundQuery::sphere(n, t));
            }
            for field in [Field::Real, Field::Complex, Field::Quaternion] {
                for t in [0.0, 0.4, 0.75] {
                    queries.push(BoundQuery::projective(n, field, t));
                }
            }
        }
    }
    let mut checked = 0;
    for q in &queries {
        let (f, _) = q.resolve().unwrap();
        let WindowOutcome::Window(w) = k_window(q, None, None).unwrap() else { continue };
        for k in w.k_min..=w.k_max {
            let l = largest_eigenvalue(&build_s(&f, k).unwrap(), 0.0).unwrap();
            let g = generic_bound_log2(&f, k, l).unwrap();
            let c = specialized_bound_log2(&f, k, l).unwrap();
            assert!(((g - c) * std::f64::consts::LN_2).abs() <= 1e-9, "{q:?} k={k}: {g} vs {c}");
            checked += 1;
        }
    }
    assert!(checked > 5000);
}

#[test]
fn rho_generic_matches_closed_forms() {
    let fams = [
        Family::hamming(40).unwrap(),
        Family::johnson(40, 13).unwrap(),
        Family::johnson(30, 15).unwrap(),
        Family::sphere(7).unwrap(),
        Family::projective(6, Field::Quaternion).unwrap(),
    ];
    for f in fams {
        let top = f.max_degree().map_or(40, |m| m - 1);
        for k in 0..=top {
            let r = rho(&f, k).unwrap();
            let g = rho_generic(&f, k).unwrap();
            assert!((r - g).abs() <= 1e-10 * r, "{:?} k={k}", f.spec());
        }
    }
}

#[test]
fn window_examples() {
    assert_eq!(
        k_window(&BoundQuery::hamming(10, 4), None, None).unwrap(),
        WindowOutcome::Window(KWindow { k_min: 2, k_max: 9 })
    );
    let WindowOutcome::Window(w) = k_window(&BoundQuery::hamming(10, 5), None, None).unwrap() else { panic!() };
    assert_eq!(w.k_min, 1);
    let out = spectral_bound(&BoundQuery::sphere(4, 0.99999), &BoundOptions { k_cap: Some(3), ..Default::default() }).unwrap();
    match out {
        BoundOutcome::NoBound(nb) => {
            assert_eq!(nb.reason, NoBoundReason::ThresholdNotReached);
            assert!(nb.lambda_at_cap < nb.threshold);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn hamming_examples() {
    let b = best(BoundQuery::hamming(10, 4));
    assert_eq!(b.k_star, 2);
    assert!((b.lambda_k - 28f64.sqrt()).abs() < 1e-13);
    assert!((b.bound_value.unwrap() - 1440.0 / (10.0 - 28f64.sqrt())).abs() < 1e-9);
    let b = best(BoundQuery::hamming(7, 3));
    assert!(b.bound_value.unwrap() >= 16.0);
}

#[test]
fn sweep_over_distance_is_ordered_and_monotone() {
    let qs: Vec<_> = (1..=10).map(|d| BoundQuery::hamming(10, d)).collect();
    let out = bound_sweep(&qs, &BoundOptions::default());
    assert_eq!(out.len(), 10);
    let mut last = f64::INFINITY;
    for ((q, r), want) in out.iter().zip(&qs) {
        assert_eq!(q, want);
        let b = r.as_ref().unwrap().bound().unwrap().bound_log2;
        assert!(b <= last + 1e-12);
        last = b;
    }
    assert!(bound_sweep(&[], &BoundOptions::default()).is_empty());
    let mixed =
        vec![BoundQuery::sphere(8, 0.5), BoundQuery::hamming(12, 13), BoundQuery::projective(4, Field::Complex, 0.5)];
    let out = bound_sweep(&mixed, &BoundOptions::default());
    assert!(out[0].1.is_ok() && out[1].1.is_err() && out[2].1.is_ok());
    assert_eq!(out[1].0, mixed[1]);
}

#[test]
fn bounds_dominate_explicit_codes() {
    // Repetition code: {0^n, 1^n} has distance n.
    for n in 2..=20 {
        assert!(best(BoundQuery::hamming(n, n)).bound_value.unwrap() >= 2.0 - 1e-12);
    }
    // Even-weight code: 2^{n−1} words at distance 2.
    for n in 2..=16 {
        assert!(best(BoundQuery::hamming(n, 2)).bound_value.unwrap() >= 2f64.powi(n as i32 - 1));
    }
    // Regular simplex: n + 1 unit vectors with pairwise inner product −1/n.
    for n in 3..=12u32 {
        let nf = n as f64;
        let verts: Vec<Vec<f64>> = (0..=n as usize)
            .map(|i| {
                let mut v = vec![-1.0 / (nf + 1.0); n as usize + 1];
                v[i] += 1.0;
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.into_iter().map(|x| x / norm).collect()
            })
            .collect();
        let ip: f64 = verts[0].iter().zip(&verts[1]).map(|(a, b)| a * b).sum();
        assert!((ip + 1.0 / nf).abs() < 1e-12);
        assert!(best(BoundQuery::sphere(n, -1.0 / nf)).bound_value.unwrap() >= nf + 1.0 - 1e-9);
    }
    // Cuboctahedron: 12 kissing vectors in R^3, inner products at most 1/2.
    let mut pts = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let mut v = [0.0f64; 3];
            v[i] = si / 2f64.sqrt();
            v[j] = sj / 2f64.sqrt();
            pts.push(v);
        }
    }
    let max_ip = (0..12)
        .flat_map(|a| ((a + 1)..12).map(move |b| (a, b)))
        .map(|(a, b)| (0..3).map(|c| pts[a][c] * pts[b][c]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(max_ip <= 0.5 + 1e-15);
    assert!(best(BoundQuery::sphere(3, 0.5)).bound_value.unwrap() >= 12.0);
}

#[test]
fn large_bounds_stay_in_log_domain() {
    let b = best(BoundQuery::hamming(1200, 40));
    assert!(b.bound_log2 > 800.0);
    assert!(b.bound_value.is_none());
    assert!(b.bound_log2 < 1200.0);
}

#[test]
fn invalid_queries_are_errors() {
    let o = BoundOptions::default();
    assert!(matches!(
        spectral_bound(&BoundQuery::johnson(10, 7, 2), &o),
        Err(Error::JohnsonWeightTooLarge { complement: 3, .. })
    ));
    assert!(spectral_bound(&BoundQuery::sphere(3, -1.0), &o).is_err());
    assert!(spectral_bound(&BoundQuery::projective(3, Field::Real, 1.0), &o).is_err());
    assert!(spectral_bound(&BoundQuery::hamming(0, 0), &o).is_err());
}

#[test]
fn certificate_reproduces_engine_bound() {
    for q in [
        BoundQuery::hamming(10, 4),
        BoundQuery::hamming(23, 7),
        BoundQuery::johnson(24, 8, 3),
        BoundQuery::sphere(8, 0.5),
        BoundQuery::projective(5, Field::Complex, 0.5),
    ] {
        let b = best(q);
        let c = spectral_lp::certificate::certificate_at_optimum(&q, &CertificateOptions::default()).unwrap();
        assert_eq!(c.k, b.k_star);
        assert!(c.checks.all_passed, "{q:?}: {:?}", c.checks.failed());
        assert!(c.implied_bound <= b.bound_value.unwrap() * (1.0 + 1e-6));
        assert!((c.implied_bound - c.closed_form_bound).abs() <= 1e-6 * c.closed_form_bound);
    }
}

#[test]
fn results_serialize_round_trip() {
    let out = spectral_bound(&BoundQuery::johnson(20, 7, 3), &BoundOptions { per_k: true, ..Default::default() }).unwrap();
    let json = serde_json::to_string(&out).unwrap();
    let back: BoundOutcome = serde_json::from_str(&json).unwrap();
    assert_eq!(back, out);
}

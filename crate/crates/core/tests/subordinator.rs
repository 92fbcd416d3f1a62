use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subharnack::quad::integrate_positive;
use subharnack::subordinator::boundary_ratio;
use subharnack::{QuadratureSpec, StableSubordinator};

fn sub(alpha: f64, t: f64) -> StableSubordinator {
    StableSubordinator::new(alpha, t).unwrap()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-11, 1e-300, 4000).unwrap()
}

fn against_density(s: &StableSubordinator, g: impl Fn(f64) -> f64) -> f64 {
    let sc = s.scale();
    integrate_positive(
        |x| {
            let d = s.density(x).unwrap();
            if d == 0.0 {
                0.0
            } else {
                g(x) * d
            }
        },
        &[sc * 1e-2, sc, sc * 1e2],
        &spec(),
    )
    .unwrap()
    .value
}

#[test]
fn normalization() {
    for &(alpha, t) in &[(0.5, 2.0), (0.7, 1.0), (0.3, 1.0), (0.9, 0.5)] {
        let m = against_density(&sub(alpha, t), |_| 1.0);
        assert!((m - 1.0).abs() < 1e-9, "alpha={alpha} t={t}: mass {m}");
    }
}

#[test]
fn laplace_identity_by_quadrature() {
    for &t in &[0.5, 1.0, 2.0] {
        for &x in &[0.1, 1.0, 10.0] {
            let s = sub(0.5, t);
            let q = against_density(&s, |u| (-x * u).exp());
            let exact = (-t * f64::sqrt(x)).exp();
            assert!(
                ((q - exact) / exact).abs() < 1e-8,
                "t={t} x={x}: {q} vs {exact}"
            );
        }
    }
    // general α goes through the Zolotarev integral
    for &alpha in &[0.3, 0.7, 0.9] {
        let s = sub(alpha, 1.3);
        for &x in &[0.1, 1.0, 10.0] {
            let q = against_density(&s, |u| (-x * u).exp());
            let exact = s.laplace(x).unwrap();
            assert!(
                ((q - exact) / exact).abs() < 1e-8,
                "alpha={alpha} x={x}: {q} vs {exact}"
            );
        }
    }
}

#[test]
fn moment_identity_by_quadrature() {
    for &t in &[0.5, 1.0, 2.0] {
        for &r in &[0.5, 1.0, 2.0, 3.0] {
            let s = sub(0.5, t);
            let q = against_density(&s, |u| u.powf(-r));
            let m = s.fractional_moment(r).unwrap();
            assert!(((q - m) / m).abs() < 1e-8, "t={t} r={r}: {q} vs {m}");
        }
    }
    let s = sub(0.75, 1.0);
    let q = against_density(&s, |u| u.powf(-1.5));
    let m = s.fractional_moment(1.5).unwrap();
    assert!(((q - m) / m).abs() < 1e-8);
}

#[test]
fn laplace_identity_by_monte_carlo() {
    let cases = [
        (0.5, 1.0, 1.0),
        (0.8, 2.0, 3.0),
        (0.3, 1.0, 0.5),
        (0.7, 1.0, 2.0),
        (0.9, 0.5, 1.0),
    ];
    for (i, &(alpha, t, x)) in cases.iter().enumerate() {
        let s = sub(alpha, t);
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
        let mc = s.laplace_mc(x, 200_000, &mut rng).unwrap();
        let exact = s.laplace(x).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 4.0 * mc.std_err,
            "{alpha} {t} {x}: {} ± {} vs {exact}",
            mc.mean,
            mc.std_err
        );
    }
}

fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn time_scaling_in_law() {
    const N: usize = 100_000;
    // critical value of the two-sample KS test at level 1e-3
    let crit = (-0.5 * (1e-3f64 / 2.0).ln()).sqrt() * (2.0 / N as f64).sqrt();
    for &(alpha, t) in &[(0.3, 2.0), (0.5, 3.0), (0.8, 0.4)] {
        let mut r1 = ChaCha8Rng::seed_from_u64(11);
        let mut r2 = ChaCha8Rng::seed_from_u64(12);
        let st = sub(alpha, t);
        let s1 = sub(alpha, 1.0);
        let a: Vec<f64> = (0..N).map(|_| st.sample(&mut r1)).collect();
        let b: Vec<f64> = (0..N)
            .map(|_| t.powf(1.0 / alpha) * s1.sample(&mut r2))
            .collect();
        let d = ks_statistic(a, b);
        assert!(d < crit, "alpha={alpha} t={t}: D={d} crit={crit}");
    }
}

#[test]
fn exp_moment_threshold_on_delta_grid() {
    let spec = QuadratureSpec::default();
    for &t in &[0.5, 1.0, 2.0] {
        let edge = t * t / 4.0;
        for &f in &[0.1, 0.5, 0.9, 0.99, 1.0, 1.01, 1.5, 2.0, 3.0] {
            let e = sub(0.5, t).exp_moment(f * edge, 1.0, &spec).unwrap();
            assert_eq!(e.converged, f < 1.0, "t={t} factor={f}");
            if !e.converged {
                assert!(e.value.is_infinite() && e.divergence_reason.is_some());
            }
        }
    }
}

#[test]
fn exp_moment_matches_quadrature() {
    let spec = QuadratureSpec::default();
    let s = sub(0.5, 2.0);
    let e = s.exp_moment(0.5, 1.0, &spec).unwrap();
    let q = s.exp_moment_quadrature(0.5, 1.0, &spec).unwrap();
    assert!(((e.value - q.value) / q.value).abs() < 1e-6);
    // above the boundary, general α
    for &(alpha, kappa, t, delta) in &[
        (0.75, 1.0, 1.0, 0.8),
        (0.6, 1.0, 0.5, 0.2),
        (0.8, 2.0, 1.0, 0.3),
    ] {
        let s = sub(alpha, t);
        let e = s.exp_moment(delta, kappa, &spec).unwrap();
        let q = s.exp_moment_quadrature(delta, kappa, &spec).unwrap();
        assert!(e.converged);
        assert!(
            ((e.value - q.value) / q.value).abs() < 1e-7,
            "{alpha} {kappa}: {} vs {}",
            e.value,
            q.value
        );
    }
}

#[test]
fn divergence_probe_at_boundary() {
    let spec = QuadratureSpec::new(1e-9, 1e-300, 2000).unwrap();
    let s = sub(0.5, 1.0);
    assert!(s.divergence_probe(0.6, 1.0, &spec).unwrap().diverges);
    assert!(s.divergence_probe(0.26, 1.0, &spec).unwrap().diverges);
    assert!(!s.divergence_probe(0.2, 1.0, &spec).unwrap().diverges);
    assert!((boundary_ratio(0.6, 1.0, 1.0) - 2.4).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplace_in_unit_interval(alpha in 0.05f64..=1.0, t in 0.01f64..50.0, x in 0.0f64..1e3) {
        let v = sub(alpha, t).laplace(x).unwrap();
        prop_assert!(v > 0.0 || t * x.powf(alpha) > 700.0);
        prop_assert!(v <= 1.0);
    }

    #[test]
    fn converged_series_respect_truncation_bound(alpha in 0.55f64..0.99, t in 0.3f64..3.0, delta in 0.0f64..3.0) {
        let spec = QuadratureSpec::default();
        let e = sub(alpha, t).exp_moment(delta, 1.0, &spec).unwrap();
        if e.converged {
            prop_assert!(e.value >= 1.0);
            prop_assert!(e.truncation_bound <= spec.rel_tol * e.value);
        } else {
            prop_assert!(e.value.is_infinite());
            prop_assert!(e.divergence_reason.is_some());
        }
    }

    #[test]
    fn density_non_negative(alpha in 0.2f64..0.95, s in 1e-3f64..1e3) {
        let d = sub(alpha, 1.0).density(s).unwrap();
        prop_assert!(d >= 0.0 && d.is_finite());
    }
}

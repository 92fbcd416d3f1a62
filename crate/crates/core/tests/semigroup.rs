use std::f64::consts::PI;

use subharnack::quad::{integrate, try_integrate_line};
use subharnack::semigroup::*;
use subharnack::{QuadratureSpec, StableSubordinator};

fn spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-10, 1e-300, 4000).unwrap()
}

fn p(x: f64) -> Point {
    Point::scalar(x)
}

fn line<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64]) -> f64 {
    try_integrate_line(|z| Ok(f(z)), breaks, &spec())
        .unwrap()
        .value
}

#[test]
fn heat_kernel_normalizes() {
    let g = BaseKernel::GaussHeat { d: 1 };
    for &s in &[0.01, 1.0, 30.0] {
        let m = line(|y| g.kernel_density(s, &p(0.4), &p(y)).unwrap(), &[0.4]);
        assert!((m - 1.0).abs() < 1e-10);
    }
}

#[test]
fn chapman_kolmogorov() {
    for base in [BaseKernel::GaussHeat { d: 1 }, BaseKernel::Ou1d] {
        for &(s, u, x, y) in &[
            (0.3, 0.5, 0.0, 1.0),
            (1.0, 2.0, -0.5, 0.7),
            (0.1, 0.05, 0.2, 0.3),
        ] {
            let lhs = line(
                |z| {
                    base.kernel_density(s, &p(x), &p(z)).unwrap()
                        * base.kernel_density(u, &p(z), &p(y)).unwrap()
                },
                &[x, y],
            );
            let rhs = base.kernel_density(s + u, &p(x), &p(y)).unwrap();
            assert!(((lhs - rhs) / rhs).abs() < 1e-7, "{base:?} {s} {u}");
        }
    }
}

#[test]
fn ou_invariance() {
    let ou = BaseKernel::Ou1d;
    for &(s, y) in &[(0.2, 0.0), (1.0, 1.5), (3.0, -2.0)] {
        let v = line(
            |x| ou.invariant_density(x).unwrap() * ou.kernel_density(s, &p(x), &p(y)).unwrap(),
            &[0.0, y],
        );
        let g = ou.invariant_density(y).unwrap();
        assert!(((v - g) / g).abs() < 1e-7);
    }
}

#[test]
fn subordinated_heat_is_cauchy() {
    for d in 1..=3 {
        let g = BaseKernel::GaussHeat { d };
        for &t in &[0.5, 1.0, 2.0] {
            let sub = StableSubordinator::new(0.5, t).unwrap();
            let x = Point::new(vec![0.1; d]).unwrap();
            for &r in &[0.0, 0.5, 2.0] {
                let mut yc = vec![0.1; d];
                yc[0] += r;
                let y = Point::new(yc).unwrap();
                let num = subordinated_density(&g, &sub, &x, &y, &spec()).unwrap();
                let exact = cauchy_closed_form(d, t, &x, &y).unwrap();
                assert!(
                    ((num - exact) / exact).abs() < 1e-6,
                    "d={d} t={t} r={r}: {num} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn subordinated_density_normalizes_and_is_symmetric() {
    let g = BaseKernel::GaussHeat { d: 1 };
    let sub = StableSubordinator::new(0.7, 1.0).unwrap();
    let sp = QuadratureSpec::new(1e-8, 1e-300, 2000).unwrap();
    let outer = QuadratureSpec::new(1e-6, 1e-300, 2000).unwrap();
    let m = try_integrate_line(
        |y| subordinated_density(&g, &sub, &p(0.0), &p(y), &sp),
        &[0.0],
        &outer,
    )
    .unwrap()
    .value;
    assert!((m - 1.0).abs() < 1e-6, "{m}");
    let a = subordinated_density(&g, &sub, &p(0.3), &p(1.4), &sp).unwrap();
    let b = subordinated_density(&g, &sub, &p(1.4), &p(0.3), &sp).unwrap();
    assert!((a - b).abs() < 1e-12 * a);
}

#[test]
fn subordinated_indicator_matches_poisson() {
    let g = BaseKernel::GaussHeat { d: 1 };
    for &(t, x, a, b) in &[
        (1.0, 0.0, -0.5, 1.0),
        (0.5, 2.0, 0.0, 1.0),
        (2.0, -1.0, 1.0, 3.0),
    ] {
        let sub = StableSubordinator::new(0.5, t).unwrap();
        let num =
            subordinated_apply(&g, &sub, &TestFunction::indicator(a, b), &p(x), &spec()).unwrap();
        // ∫_a^b t/(π(t² + (x−y)²)) dy
        let exact = (((b - x) / t).atan() - ((a - x) / t).atan()) / PI;
        let quad = integrate(
            |y| cauchy_closed_form(1, t, &p(x), &p(y)).unwrap(),
            a,
            b,
            &spec(),
        )
        .unwrap()
        .value;
        assert!(((quad - exact) / exact).abs() < 1e-10);
        assert!(((num - exact) / exact).abs() < 1e-6, "{num} vs {exact}");
    }
}

#[test]
fn subordinated_constant_and_degenerate() {
    let g = BaseKernel::Ou1d;
    let sub = StableSubordinator::new(0.6, 1.0).unwrap();
    assert_eq!(
        subordinated_apply(&g, &sub, &TestFunction::constant(2.5), &p(0.3), &spec()).unwrap(),
        2.5
    );
    let one = StableSubordinator::new(1.0, 0.8).unwrap();
    let f = TestFunction::bump(0.2, 0.5);
    let a = subordinated_apply(&g, &one, &f, &p(0.3), &spec()).unwrap();
    let b = g.apply(&f, 0.8, &p(0.3), &spec()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ondiag_examples() {
    let x1 = p(0.0);
    let s = StableSubordinator::new(0.5, 1.0).unwrap();
    let v = ondiag(&BaseKernel::GaussHeat { d: 1 }, &s, &x1, &spec()).unwrap();
    assert!((v - 1.0 / PI).abs() < 1e-8);
    let x2 = Point::new(vec![0.0, 0.0]).unwrap();
    let v = ondiag(&BaseKernel::GaussHeat { d: 2 }, &s, &x2, &spec()).unwrap();
    assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-8);
    for &(d, alpha, t) in &[(1, 0.7, 2.0), (2, 0.3, 1.0), (3, 0.9, 0.5)] {
        let s = StableSubordinator::new(alpha, t).unwrap();
        let x = Point::new(vec![0.0; d]).unwrap();
        let v = ondiag(&BaseKernel::GaussHeat { d }, &s, &x, &spec()).unwrap();
        let c = ondiag_closed_form(d, alpha, t).unwrap();
        assert!(((v - c) / c).abs() < 1e-7, "{d} {alpha}: {v} vs {c}");
    }
    assert!(ondiag(&BaseKernel::Ou1d, &s, &x1, &spec()).is_err());
}

#[test]
fn cauchy_semigroup_property() {
    let (s, u, x, y) = (0.4, 1.1, 0.0, 0.9);
    let v = line(
        |z| {
            cauchy_closed_form(1, s, &p(x), &p(z)).unwrap()
                * cauchy_closed_form(1, u, &p(z), &p(y)).unwrap()
        },
        &[x, y],
    );
    let c = cauchy_closed_form(1, s + u, &p(x), &p(y)).unwrap();
    assert!(((v - c) / c).abs() < 1e-8);
}

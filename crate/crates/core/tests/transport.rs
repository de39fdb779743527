use skewshift_core::skewshift::{SkewShiftSystem, TorusPoint};
use skewshift_core::transport::{growth_fit, GrowthModel, Kernel, Spectral, TransportConfig};
use skewshift_core::Frequency;

fn free(l: usize) -> TransportConfig {
    let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
    TransportConfig::new(l, 0.0, sys, TorusPoint::zero(2).unwrap())
}

/// `J_n(x) = (1/pi) int_0^pi cos(n theta - x sin theta) d theta` by the
/// trapezoid rule on the full period, which converges geometrically.
fn bessel_j(n: i64, x: f64) -> f64 {
    const M: usize = 2048;
    let h = 2.0 * std::f64::consts::PI / M as f64;
    let s: f64 = (0..M)
        .map(|j| {
            let th = j as f64 * h;
            (n as f64 * th - x * th.sin()).cos()
        })
        .sum();
    s / M as f64
}

#[test]
fn free_evolution_matches_bessel_functions() {
    let l = 400;
    let sp = Spectral::new(&free(l)).unwrap();
    for &t in &[0.5, 3.0, 10.0, 20.0] {
        let psi = sp.evolve(t);
        let mut worst: f64 = 0.0;
        for n in -80i64..=80 {
            let want = bessel_j(n, 2.0 * t).abs();
            worst = worst.max((psi[(n + l as i64) as usize].norm() - want).abs());
        }
        assert!(worst < 1e-6, "t={t} worst={worst}");
        let m2 = sp.moment(t, 2.0).value;
        assert!((m2 / (2.0 * t * t) - 1.0).abs() < 1e-4, "t={t} m2={m2}");
        let mass = sp.moment(t, 0.0).value;
        assert!((mass - 1.0).abs() < 1e-10, "{mass}");
    }
}

/// Composite 5-point Gauss-Legendre on `[a, b]` with `pieces` panels.
fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for i in 0..pieces {
        let mid = a + (i as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W) {
            total += w * 0.5 * h * f(mid + 0.5 * h * x);
        }
    }
    total
}

#[test]
fn abel_mean_matches_quadrature() {
    let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
    let x0 = TorusPoint::from_f64(&[0.1, 0.3]).unwrap();
    for lambda in [0.0, 2.0] {
        let cfg = TransportConfig::new(40, lambda, sys, x0.clone());
        let sp = Spectral::new(&cfg).unwrap();
        for &big_t in &[0.7, 2.0] {
            let closed = sp.abel_mean(big_t, 2.0).unwrap().value;
            let upper = 40.0 * big_t;
            let quad = gauss_legendre(
                |t| (2.0 / big_t) * (-2.0 * t / big_t).exp() * sp.moment(t, 2.0).value,
                0.0,
                upper,
                800,
            );
            assert!(
                (closed - quad).abs() <= 1e-6 * quad.max(1.0),
                "{lambda} {big_t}: {closed} vs {quad}"
            );
        }
    }
}

#[test]
fn ballistic_slope_and_abel_of_free_motion() {
    let sp = Spectral::new(&free(200)).unwrap();
    let grid: Vec<f64> = (0..12).map(|i| 2f64.powf(i as f64 * 0.4)).collect();
    let s = sp.series(&grid, 2.0, false).unwrap();
    let fit = growth_fit(&s, GrowthModel::Poly).unwrap();
    assert!((fit.slope - 2.0).abs() < 0.05, "{fit:?}");
    // Abel mean of 2 t^2 is T^2
    let a = sp.abel_mean(4.0, 2.0).unwrap();
    assert!((a.value / 16.0 - 1.0).abs() < 1e-6, "{a:?}");
}

#[test]
fn doubling_the_box_leaves_interior_moments_unchanged() {
    let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
    let x0 = TorusPoint::from_f64(&[0.2, 0.7]).unwrap();
    let small = Spectral::new(&TransportConfig::new(60, 1.0, sys, x0.clone())).unwrap();
    let large = Spectral::new(&TransportConfig::new(120, 1.0, sys, x0)).unwrap();
    for &t in &[1.0, 5.0, 10.0] {
        let a = small.moment(t, 2.0);
        let b = large.moment(t, 2.0);
        assert!(!a.truncated);
        assert!((a.value - b.value).abs() <= 1e-8 * b.value.max(1.0), "{t}: {a:?} {b:?}");
    }
}

#[test]
fn moment_norms_increase_with_p() {
    let sys = SkewShiftSystem::new(3, Frequency::golden().value).unwrap();
    let x0 = TorusPoint::from_f64(&[0.2, 0.7, 0.1]).unwrap();
    let sp = Spectral::new(&TransportConfig::new(80, 0.5, sys, x0)).unwrap();
    for &t in &[2.0, 8.0] {
        let norms: Vec<f64> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&p| sp.moment(t, p).value.powf(1.0 / p))
            .collect();
        for w in norms.windows(2) {
            assert!(w[0] <= w[1] * (1.0 + 1e-12), "{norms:?}");
        }
    }
}

#[test]
fn exponential_kernel_is_symmetric_and_unitary() {
    let mut cfg = free(50);
    cfg.kernel = Kernel::Exponential { c: 0.5, decay: 1.0 };
    cfg.lambda = 1.0;
    let h = skewshift_core::transport::build_operator(&cfg).unwrap();
    assert_eq!(h.transpose(), h);
    let sp = Spectral::new(&cfg).unwrap();
    assert!((sp.moment(7.0, 0.0).value - 1.0).abs() < 1e-10);
}

#[test]
fn strong_coupling_moments_stay_small() {
    let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
    let cfg = TransportConfig::new(100, 10.0, sys, TorusPoint::zero(2).unwrap());
    let sp = Spectral::new(&cfg).unwrap();
    let grid: Vec<f64> = (0..=10).map(|i| 10f64.powf(i as f64 * 0.2)).collect();
    let s = sp.series(&grid, 2.0, true).unwrap();
    let fit = growth_fit(&s, GrowthModel::Poly).unwrap();
    assert!(!fit.truncated);
    assert!(fit.slope <= 0.5, "{fit:?}");
}

#[test]
fn moments_grow_with_p_and_stay_below_the_box() {
    let sys = SkewShiftSystem::new(2, Frequency::golden().value).unwrap();
    let l = 30;
    let sp = Spectral::new(&TransportConfig::new(
        l,
        1.5,
        sys,
        TorusPoint::from_f64(&[0.4, 0.8]).unwrap(),
    ))
    .unwrap();
    for &t in &[0.5, 3.0, 40.0] {
        let m: Vec<f64> = (1..=4).map(|p| sp.moment(t, p as f64).value).collect();
        // |n|^p <= |n|^(p+1) on every nonzero site
        for w in m.windows(2) {
            assert!(w[0] <= w[1] * (1.0 + 1e-12), "t={t} {m:?}");
        }
        for (p, v) in (1..=4).zip(&m) {
            assert!(*v <= (l as f64).powi(p) * (1.0 + 1e-12), "t={t} p={p} {v}");
        }
    }
}

use skewshift_core::diophantine::{
    continued_fraction, dc_prefix_minima, dcweyl_bound, find_denominator, min_sum, rational_min_sum_bound,
    DiophantineProfile,
};
use skewshift_core::Frequency;

const TAU: f64 = 1.001;
/// Both estimates hold up to an absolute constant; with constant one they
/// fail at small `N` and large `H`, with constant two they hold throughout.
const CONSTANT: f64 = 2.0;

fn grid() -> Vec<u64> {
    // ten values from 1 to 1024, roughly geometric
    vec![1, 2, 5, 10, 22, 46, 100, 215, 464, 1024]
}

#[test]
fn dcweyl_holds_on_grid() {
    let alpha = Frequency::golden().value;
    let g = grid();
    let depth = (g.last().unwrap() * g.last().unwrap()).max(10_000);
    let minima = dc_prefix_minima(alpha, TAU, depth).unwrap();
    let mut literal = 0;
    let mut worst: f64 = 0.0;
    for &h in &g {
        for &n in &g {
            let gamma = minima[((h * n).max(10_000) - 1) as usize];
            let lhs = min_sum(alpha, h, n);
            let rhs = dcweyl_bound(gamma, TAU, h, n);
            literal += (lhs > rhs) as u32;
            worst = worst.max(lhs / rhs);
        }
    }
    assert!(worst <= CONSTANT, "{worst}");
    // violations of the constant-one form are real, not rounding
    assert_eq!(literal, 14);
    assert!(worst > 1.2);
}

#[test]
fn classic_bound_for_every_convergent() {
    for f in ["surd:(sqrt(5)-1)/2", "surd:sqrt(2)-1", "surd:(sqrt(7)-2)/3"] {
        let alpha = Frequency::parse(f).unwrap().value;
        for a in continued_fraction(alpha, 25).unwrap() {
            for &h in &[1, 7, 100, 1000] {
                for &n in &[1, 10, 1000] {
                    let lhs = min_sum(alpha, h, n);
                    let rhs = rational_min_sum_bound(h, n, a.q);
                    assert!(lhs <= CONSTANT * rhs, "{f} q={} H={h} N={n}: {lhs} > {rhs}", a.q);
                }
            }
        }
    }
}

#[test]
fn classic_bound_fails_with_constant_one() {
    let alpha = Frequency::golden().value;
    // H = 100 terms averaging about 2 (1 + log(N/2)) against HN/q = 1000/3
    assert!(min_sum(alpha, 100, 10) > rational_min_sum_bound(100, 10, 3));
}

#[test]
fn denominators_bracket_n() {
    let alpha = Frequency::golden().value;
    let p = DiophantineProfile::compute(alpha, TAU, 100_000, 40).unwrap();
    for n in [10u64, 100, 1_000, 10_000] {
        let q = find_denominator(&p, n).unwrap();
        assert!(q <= n);
        assert!(q as f64 > (p.gamma_emp * n as f64).powf(1.0 / TAU));
        assert!(p.approximants.iter().any(|a| a.q == q));
    }
}

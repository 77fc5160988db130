//! Elementary and special functions used across modules.

use num_complex::Complex64;

use super::sum::NeumaierSum;

/// `x / sinh x`, equal to 1 at the origin.
pub fn x_over_sinh(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let x2 = x * x;
        return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
    }
    if ax > 700.0 {
        return 2.0 * ax * (-ax).exp();
    }
    x / x.sinh()
}

/// `sech² x`, safe for large arguments.
pub fn sech2(x: f64) -> f64 {
    let ax = x.abs();
    let e = (-2.0 * ax).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// `ln(1 + w)` for complex `w`, accurate when `|w|` is small.
pub fn ln_1p_complex(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

// B_{2k} / (2k)! for k = 1..=8
const BERNOULLI_OVER_FACT: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (k + q)^{−s}` for integer `s ≥ 2`, `q > 0`.
///
/// Direct summation of the first terms followed by an Euler–Maclaurin tail.
pub fn hurwitz_zeta(s: u32, q: f64) -> f64 {
    assert!(s >= 2, "hurwitz_zeta needs s >= 2");
    assert!(q > 0.0, "hurwitz_zeta needs q > 0");
    const M: usize = 12;
    let sf = s as f64;
    let mut acc = NeumaierSum::new();
    for k in 0..M {
        acc.add((k as f64 + q).powf(-sf));
    }
    let a = M as f64 + q;
    acc.add(a.powf(1.0 - sf) / (sf - 1.0));
    acc.add(0.5 * a.powf(-sf));
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · a^{−s−2k+1}
    let mut rising = sf; // s(s+1)...(s+2k-2)
    let mut pow = a.powf(-sf - 1.0);
    for (k, coef) in BERNOULLI_OVER_FACT.iter().enumerate() {
        acc.add(coef * rising * pow);
        let m = 2 * k as u32 + 1;
        rising *= (sf + m as f64) * (sf + m as f64 + 1.0);
        pow /= a * a;
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_values() {
        assert!((hurwitz_zeta(2, 1.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((hurwitz_zeta(4, 1.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        // ζ(2, 1/2) = π²/2
        assert!((hurwitz_zeta(2, 0.5) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zeta_against_brute_force() {
        for &(s, q) in &[(3u32, 0.73), (5, 1.4), (2, 0.51)] {
            let mut acc = NeumaierSum::new();
            for k in (0..2_000_000).rev() {
                acc.add((k as f64 + q).powi(-(s as i32)));
            }
            let tail = (2_000_000.0 + q).powf(1.0 - s as f64) / (s as f64 - 1.0);
            let brute = acc.value() + tail;
            assert!((hurwitz_zeta(s, q) - brute).abs() < 1e-12 * brute, "{s} {q}");
        }
    }

    #[test]
    fn x_over_sinh_is_continuous_at_the_switch() {
        let a = x_over_sinh(1e-4 * (1.0 - 1e-12));
        let b = 1e-4 / (1e-4f64).sinh();
        assert!((a - b).abs() < 1e-15);
        assert_eq!(x_over_sinh(0.0), 1.0);
    }

    #[test]
    fn complex_log1p_matches_ln() {
        let w = Complex64::new(0.3, -0.2);
        assert!((ln_1p_complex(w) - (Complex64::new(1.0, 0.0) + w).ln()).norm() < 1e-15);
        let tiny = Complex64::new(1e-20, 1e-20);
        assert!((ln_1p_complex(tiny) - tiny).norm() < 1e-35);
    }
}

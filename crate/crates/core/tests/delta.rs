#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use schwartzkit::battery::{pairing_battery, Target};
use schwartzkit::delta::*;
use schwartzkit::gridfn::{fourier_transform, pair};
use schwartzkit::hadamard::ZeroSequence;
use schwartzkit::numeric::quad::{integrate_to_infinity, Tolerance};
use schwartzkit::numeric::special::sech2;
use schwartzkit::{Error, Grid, GridFunction};

fn grid() -> Grid {
    Grid::new(48.0, 8192).unwrap()
}

fn unit_approximant() -> DeltaApproximant {
    let b = BoundSequence::uniform(1.0, 7).unwrap();
    build_schwartz_approximant(&b, 6, 6, grid()).unwrap()
}

#[test]
fn tiny_bound_is_met_or_reported() {
    let mut v = vec![1.0; 5];
    v[2] = 1e-30;
    let b = BoundSequence::new(v).unwrap();
    match build_schwartz_approximant(&b, 4, 6, Grid::new(16.0, 1024).unwrap()) {
        Ok(a) => {
            assert!(a.coefficients()[2] < 1e-30);
            // doubling trace: the previous scale violated the bound
            let prev = a.scale() / 2.0;
            let c2 = a.coefficients()[2] * (a.scale() / prev).powi(4);
            assert!(c2 >= 1e-30);
        }
        Err(Error::ScaleSearchExhausted { index, .. }) => assert_eq!(index, 2),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn full_order_pairing_is_exact() {
    let a = unit_approximant();
    let tau = Target::unit_gaussian().sample(grid()).unwrap();
    let trace = pairing_convergence(&a, &tau).unwrap();
    assert!(trace.final_error() < 1e-9, "{}", trace.final_error());
    assert!(trace.error_at(4).unwrap() < trace.error_at(2).unwrap());
    // Fourier-side oracle for n = 2: ∫ P₂ ψ̂ e^{−πξ²} dξ by quadrature
    let tol = Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        max_intervals: 10_000,
    };
    let oracle = 2.0
        * integrate_to_infinity(
            |xi| a.symbol(2, xi) * a.psi_hat(xi) * (-PI * xi * xi).exp(),
            0.0,
            tol,
        )
        .value;
    let v = trace.values[2].1;
    assert!((v.re - oracle).abs() < 1e-10, "{} vs {oracle}", v.re);

    let shifted = Target::Gaussian {
        center: 1.0,
        width: 1.0,
    };
    let tau = shifted.sample(grid()).unwrap();
    let trace = pairing_convergence(&a, &tau).unwrap();
    let last = trace.values.last().unwrap().1;
    assert!((last.re - (-PI).exp()).abs() < 1e-6);
    assert!((last.re - 0.043214).abs() < 1e-6);
}

#[test]
fn pairing_errors_improve_over_the_battery() {
    let a = unit_approximant();
    for t in pairing_battery() {
        let tau = t.sample(grid()).unwrap();
        let trace = pairing_convergence(&a, &tau).unwrap();
        let half = trace.error_at(3).unwrap();
        let full = trace.error_at(6).unwrap();
        assert!(full <= half, "{}: {full} > {half}", t.label());
        assert!(full < 1e-9, "{}: {full}", t.label());
        assert!(trace
            .values
            .iter()
            .all(|(_, v)| v.re.is_finite() && v.im.is_finite()));
    }
}

#[test]
fn symbol_times_kernel_is_one() {
    let a = unit_approximant();
    let r = grid().reciprocal();
    for xi in r.abscissas() {
        let p = a.symbol(6, xi);
        let prod: f64 = a
            .zeros()
            .values()
            .iter()
            .map(|z| 1.0 + xi * xi / (z * z))
            .product();
        assert!((p - prod).abs() <= 1e-8 * prod);
        assert!((p * a.psi_hat(xi) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn zero_terms_give_the_trivial_operator() {
    let b = BoundSequence::uniform(1.0, 1).unwrap();
    let a = build_schwartz_approximant(&b, 0, 4, Grid::new(16.0, 512).unwrap()).unwrap();
    assert_eq!(a.operator_coefficients(), &[1.0]);
    assert_eq!(a.symbol(0, 0.0), 1.0);
}

#[test]
fn sobolev_bound_for_x_over_sinh() {
    let g = Grid::new(40.0, 4096).unwrap();
    let f = Target::XOverSinh.sample(g).unwrap();
    let s = sobolev_sup_bound(&fourier_transform(&f), 2).unwrap();
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-12,
        max_intervals: 10_000,
    };
    // ∫ (2πξ)² (π²/2) sech²(π²ξ) dξ
    let oracle = 2.0
        * integrate_to_infinity(
            |xi| (2.0 * PI * xi).powi(2) * 0.5 * PI * PI * sech2(PI * PI * xi),
            0.0,
            tol,
        )
        .value;
    assert!(
        (s.bound - oracle).abs() < 1e-6 * oracle,
        "{} vs {oracle}",
        s.bound
    );
    // (x/sinh x)'' at 0 is −1/3
    assert!((s.observed - 1.0 / 3.0).abs() < 1e-6);
    assert!(s.holds && s.observed.is_finite());
}

#[test]
fn uniform_bounds() {
    let g = Grid::new(32.0, 4096).unwrap();
    let c0 = uniform_derivative_bound(0, g).unwrap();
    assert!((c0 - 2.0 * PI / 3.0).abs() < 1e-6);
    let c2 = uniform_derivative_bound(2, g).unwrap();
    assert!(c2.is_finite() && c2 > 0.0);
}

#[test]
fn uniform_bound_needs_small_leading_zeros() {
    // a_n = 2n satisfies a_n ≥ n but ψ(0) = ∫ ψ̂ = π exceeds c₀ = 2π/3
    let g = Grid::new(32.0, 8192).unwrap();
    let z = ZeroSequence::linear(2.0, 200).unwrap();
    let psi_hat = GridFunction::sample(g.reciprocal(), |xi| {
        schwartzkit::hadamard::reciprocal_product_at(&z, xi)
    })
    .unwrap();
    let s = sobolev_sup_bound(&psi_hat, 0).unwrap();
    assert!((s.observed - PI).abs() < 1e-3, "{}", s.observed);
    assert!(s.observed > uniform_derivative_bound(0, g).unwrap());
}

#[test]
fn compact_flavor() {
    let g = Grid::new(16.0, 8192).unwrap();
    let b = BoundSequence::uniform(1.0, 7).unwrap();
    let a = build_compact_approximant(&b, 6, 6, g, 1.0).unwrap();
    let parts = a.compact().unwrap();
    assert_eq!(parts.sigma, 1.0);
    // h vanishes on the inner interval and outside the annulus
    for (x, v) in parts.h.iter() {
        if x.abs() <= 1.0 || x.abs() >= 2.0 {
            assert!(v.norm() < 1e-8, "h({x}) = {}", v.norm());
        }
    }
    assert!(parts.interior_residual < 1e-8);
    // f = ψ on [−σ, σ], f = 0 outside [−2σ, 2σ]
    let kernel = parts.kernel.as_ref().unwrap();
    for (k, (x, v)) in a.psi().iter().enumerate() {
        if x.abs() <= 1.0 {
            let exact = a.psi_exact(x);
            assert!((v.re - exact).abs() <= 1e-12 * exact.abs(), "{x}");
            // the grid kernel carries the aliasing of the sampled ψ̂
            assert!((v - kernel.at(k)).norm() < 1e-8 * kernel.max_abs(), "{x}");
        } else if x.abs() >= 2.0 {
            assert_eq!(v.norm(), 0.0);
        }
    }
    // shrunk bounds are respected
    for j in 1..=6 {
        assert!(a.coefficients()[j] < parts.shrunk_bounds.values()[j]);
        assert!(parts.shrunk_bounds.values()[j] <= b.values()[j]);
    }
    // a test function supported in |x| < 1/2 does not see h
    let tau = Target::Bump { radius: 0.5 }.sample(g).unwrap();
    assert_eq!(pair(&parts.h, &tau).unwrap().norm(), 0.0);
    let trace = pairing_convergence(&a, &tau).unwrap();
    assert_eq!(trace.target, tau.at_origin());
    assert!(trace.final_error() < 1e-6, "{}", trace.final_error());
}

#[test]
fn cutoff_values() {
    for sigma in [0.5, 1.0, 2.0] {
        assert_eq!(cutoff(0.0, sigma), 1.0);
        assert_eq!(cutoff(2.0 * sigma, sigma), 0.0);
        assert_eq!(cutoff(-2.0 * sigma, sigma), 0.0);
        for t in [0.1, 0.9, 1.3, 1.8] {
            assert_eq!(cutoff(t * sigma, sigma), cutoff(-t * sigma, sigma));
        }
    }
}

#[test]
fn compact_flavor_rejects_wide_supports() {
    let b = BoundSequence::uniform(1.0, 3).unwrap();
    let g = Grid::new(8.0, 1024).unwrap();
    assert!(build_compact_approximant(&b, 2, 2, g, 1.0).is_err());
}

mod properties {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_diagonal<F: Fn(usize, usize) -> f64>(b: F, j_max: usize) {
        let a = diagonal_sequence(&b, j_max).unwrap();
        for j in 1..=j_max {
            assert!(a[j] <= a[j - 1]);
            for n in 0..=j {
                assert!(a[j] * b(j, n) <= 0.5f64.powi(j as i32) * (1.0 + 1e-12));
            }
        }
        for n in 0..=j_max {
            let brute: f64 = (0..=j_max).map(|j| a[j] * b(j, n)).sum();
            let (s, bound) = partial_sum_bound(&a, &b, n);
            assert!((s - brute).abs() <= 1e-12 * brute.max(1e-300));
            assert!(s <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn diagonal_families() {
        check_diagonal(|j, n| (n as f64).powi(j as i32), 20);
        check_diagonal(|_, _| 1.0, 20);
        check_diagonal(
            |j, n| (1..=j).map(|k| k as f64).product::<f64>() * n.max(1) as f64,
            20,
        );
    }

    #[test]
    fn inversion_bound_over_random_zero_sets() {
        let g = Grid::new(32.0, 4096).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let zeros: Vec<f64> = (1..=12).map(|n| n as f64 * rng.random_range(1.0..3.0)).collect();
            let mut zeros = zeros;
            zeros.sort_by(f64::total_cmp);
            let z = ZeroSequence::explicit(zeros).unwrap();
            let psi_hat = GridFunction::sample(g.reciprocal(), |xi| {
                schwartzkit::hadamard::reciprocal_product_at(&z, xi)
            })
            .unwrap();
            for j in 0..=6 {
                let s = sobolev_sup_bound(&psi_hat, j).unwrap();
                assert!(s.holds, "j = {j}: {} > {}", s.observed, s.bound);
            }
        }
    }

    #[test]
    fn uniform_bound_under_small_leading_zeros() {
        let g = Grid::new(32.0, 8192).unwrap();
        let c: Vec<f64> = (0..=4).map(|j| uniform_derivative_bound(j, g).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            // a_m ≤ m for m ≤ 6, then anything nondecreasing
            let mut zeros: Vec<f64> = (1..=6).map(|m| m as f64 * rng.random_range(0.4..1.0)).collect();
            zeros.extend((7..=14).map(|m| m as f64 * rng.random_range(1.0..4.0)));
            zeros.sort_by(f64::total_cmp);
            let z = ZeroSequence::explicit(zeros).unwrap();
            let psi_hat = GridFunction::sample(g.reciprocal(), |xi| {
                schwartzkit::hadamard::reciprocal_product_at(&z, xi)
            })
            .unwrap();
            for (j, cj) in c.iter().enumerate() {
                let s = sobolev_sup_bound(&psi_hat, j).unwrap();
                assert!(s.observed <= *cj, "j = {j}: {} > {cj}", s.observed);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn bounds_are_respected(
            raw in prop::collection::vec(-12.0f64..1.0, 6),
            factors in 5usize..9,
        ) {
            let b = BoundSequence::new(raw.iter().map(|e| 10f64.powf(*e)).collect()).unwrap();
            let a = build_schwartz_approximant(&b, 5, factors, Grid::new(16.0, 512).unwrap()).unwrap();
            let c = a.coefficients();
            prop_assert_eq!(c[0], 1.0);
            for j in 1..=5 {
                prop_assert!(c[j] > 0.0);
                prop_assert!(c[j] < b.values()[j]);
                prop_assert!(c[j] < factorial_bound(j));
            }
        }

        #[test]
        fn exact_cancellation_on_the_grid(s in 0.5f64..4.0, factors in 1usize..10) {
            let z: Vec<f64> = (1..=factors).map(|n| s * n as f64).collect();
            let b = BoundSequence::uniform(1.0, factors + 1).unwrap();
            let a = build_schwartz_approximant(&b, factors, factors, Grid::new(16.0, 512).unwrap()).unwrap();
            let r = a.grid().reciprocal();
            for xi in r.abscissas() {
                let v = a.symbol(factors, xi) * a.psi_hat(xi);
                prop_assert!((v - 1.0).abs() < 1e-10, "{}", v);
            }
            let _ = z;
        }

        #[test]
        fn diagonal_output(rows in prop::collection::vec(prop::collection::vec(1e-3f64..1e6, 12), 12)) {
            let a = diagonal_sequence(|j, n| rows[j][n], 11).unwrap();
            for j in 1..=11 {
                prop_assert!(a[j] <= a[j - 1]);
                for n in 0..=j {
                    prop_assert!(a[j] * rows[j][n] <= 0.5f64.powi(j as i32) * (1.0 + 1e-12));
                }
            }
        }
    }
}

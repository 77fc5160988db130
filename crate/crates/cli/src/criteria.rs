//! The acceptance battery. Each check returns its metrics under the family
//! `criterion_<k>`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use schwartzkit::battery::{factorization_battery, pairing_battery, Target};
use schwartzkit::delta::{
    build_compact_approximant, build_schwartz_approximant, diagonal_sequence, pairing_convergence,
    partial_sum_bound, sobolev_sup_bound, uniform_derivative_bound, BoundSequence,
};
use schwartzkit::factorize::{
    bessel_identity_check, default_seminorms, strong_factorize, weak_factorize_compact, BoundPolicy,
};
use schwartzkit::gridfn::{
    convolve, decay_rate, derivative, fourier_transform, fourier_transform_with_tail, rapid_decay_profile,
    AlgebraicTail,
};
use schwartzkit::hadamard::{
    expand_to_series, factor_to_zeros, growth_order_fit, log_radii, reciprocal_product_at,
    reciprocal_product_grid, spectral_fit_window, FactorialPower, ZeroSequence,
};
use schwartzkit::numeric::quad::{integrate_to_infinity, Tolerance};
use schwartzkit::numeric::special::{sech2, x_over_sinh};
use schwartzkit::{Grid, GridFunction};

use crate::report::Metric;

pub const COUNT: usize = 12;

/// Short description of each criterion, indexed from 1.
pub fn title(k: usize) -> &'static str {
    match k {
        1 => "Poisson kernel transform",
        2 => "reciprocal product of a_n = πn",
        3 => "derivative of exponential convolutions",
        4 => "decay of random convolutions",
        5 => "growth orders",
        6 => "series and zeros roundtrip",
        7 => "delta approximation pairings",
        8 => "strong factorization",
        9 => "single-factor identity",
        10 => "compact-support factorization",
        11 => "diagonal sequences",
        12 => "inversion bounds",
        _ => "unknown",
    }
}

/// Runs criterion `k` with its standard parameters.
pub fn run(k: usize, seed: u64) -> Vec<Metric> {
    match k {
        1 => poisson(Grid::new(64.0, 4096).expect("valid grid"), 1e-6).0,
        2 => main_theorem_instance(),
        3 => derivative_recursion(),
        4 => decay_suite(seed),
        5 => growth(0.02),
        6 => duality(seed),
        7 => delta_pairings(),
        8 => strong_battery(),
        9 => bessel(),
        10 => compact_support(),
        11 => diagonal(),
        12 => sobolev(seed),
        _ => vec![Metric::error("suite", format!("criterion_{k}"))],
    }
}

fn family(k: usize) -> String {
    format!("criterion_{k}")
}

fn tight() -> Tolerance {
    Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        max_intervals: 20_000,
    }
}

fn or_error(k: usize, name: &str, r: schwartzkit::Result<Vec<Metric>>) -> Vec<Metric> {
    r.unwrap_or_else(|_| vec![Metric::error(family(k), name)])
}

/// Transform of `1/(x² + a²)` against `(π/a) e^{−2πa|ξ|}` for
/// `a ∈ {1/2, 1, 3}`. Also returns the spectra for plotting.
pub fn poisson(grid: Grid, tolerance: f64) -> (Vec<Metric>, Vec<(f64, GridFunction)>) {
    let mut metrics = Vec::new();
    let mut spectra = Vec::new();
    for a in [0.5, 1.0, 3.0] {
        let name = format!("a={a}.max_error");
        let r = GridFunction::sample(grid, |x| 1.0 / (x * x + a * a))
            .and_then(|f| fourier_transform_with_tail(&f, &AlgebraicTail::default()));
        match r {
            Ok(t) => {
                let err = t
                    .spectrum
                    .iter()
                    .map(|(xi, v)| (v.re - PI / a * (-2.0 * PI * a * xi.abs()).exp()).hypot(v.im))
                    .fold(0.0, f64::max);
                metrics.push(Metric::new(family(1), name, err, tolerance));
                spectra.push((a, t.spectrum));
            }
            Err(_) => metrics.push(Metric::error(family(1), name)),
        }
    }
    (metrics, spectra)
}

fn main_theorem_instance() -> Vec<Metric> {
    let k = 2;
    or_error(
        k,
        "run",
        (|| {
            let l = 40.0;
            let z = ZeroSequence::linear(PI, ZeroSequence::default_count(PI, l))?;
            let f = reciprocal_product_grid(&z, l, 4096)?;
            let sample_err = f
                .iter()
                .filter(|(x, _)| x.abs() <= 10.0)
                .map(|(x, v)| (v.re - x_over_sinh(x)).abs())
                .fold(0.0, f64::max);
            let spec = fourier_transform(&f);
            let closed = spec
                .iter()
                .map(|(xi, v)| (v.re - 0.5 * PI * PI * sech2(PI * PI * xi)).hypot(v.im))
                .fold(0.0, f64::max);
            let r = spec.grid();
            let mut quad = 0.0f64;
            for xi in [0.0, 0.1, 0.25, 0.5, 1.0] {
                let m = r.nearest(xi).expect("inside the frequency grid");
                let x = r.abscissa(m);
                let oracle = 2.0
                    * integrate_to_infinity(|t| x_over_sinh(t) * (2.0 * PI * x * t).cos(), 0.0, tight())
                        .value;
                quad = quad.max((spec.at(m).re - oracle).abs());
            }
            let fit = decay_rate(&spec, spectral_fit_window(&spec)?)?;
            Ok(vec![
                Metric::new(family(k), "samples.max_error", sample_err, 1e-10),
                Metric::new(family(k), "transform.closed_form_error", closed, 1e-6),
                Metric::new(family(k), "transform.quadrature_error", quad, 1e-6),
                Metric::new(
                    family(k),
                    "decay_rate.relative_error",
                    (fit.rate / (2.0 * PI * PI) - 1.0).abs(),
                    0.02,
                ),
            ])
        })(),
    )
}

fn derivative_recursion() -> Vec<Metric> {
    let k = 3;
    let grid = Grid::new(32.0, 1 << 18).expect("valid grid");
    let battery = factorization_battery();
    [0.5, 1.0, 3.0]
        .par_iter()
        .map(|&a| {
            let name = format!("a={a}.max_error");
            let r = (|| {
                let e = GridFunction::sample(grid, |x| (-2.0 * PI * a * x.abs()).exp())?;
                // derivative of e^{−2πa|x|}, 0 at the jump
                let psi = GridFunction::sample(grid, |x| {
                    if x == 0.0 {
                        0.0
                    } else {
                        -x.signum() * 2.0 * PI * a * (-2.0 * PI * a * x.abs()).exp()
                    }
                })?;
                let mut worst = 0.0f64;
                for t in &battery {
                    let g = t.sample(grid)?;
                    let lhs = derivative(&convolve(&e, &g)?, 1)?;
                    let rhs = convolve(&psi, &g)?;
                    worst = worst.max(lhs.max_abs_diff(&rhs)?);
                }
                Ok::<_, schwartzkit::Error>(worst)
            })();
            match r {
                Ok(w) => Metric::new(family(k), name, w, 1e-6),
                Err(_) => Metric::error(family(k), name),
            }
        })
        .collect()
}

fn random_schwartz(rng: &mut ChaCha8Rng, grid: Grid) -> schwartzkit::Result<GridFunction> {
    if rng.random_bool(0.5) {
        let t = Target::Gaussian {
            center: rng.random_range(-2.0..2.0),
            width: rng.random_range(0.5..2.0),
        };
        t.sample(grid)
    } else {
        // 1/∏(1 + x²/(s n)²) = (πx/s)/sinh(πx/s)
        let s = rng.random_range(1.0..4.0);
        let z = ZeroSequence::linear(s, ZeroSequence::default_count(s, grid.half_width()))?;
        GridFunction::sample(grid, |x| reciprocal_product_at(&z, x))
    }
}

fn decay_suite(seed: u64) -> Vec<Metric> {
    let k = 4;
    let grid = Grid::new(32.0, 2048).expect("valid grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let powers: Vec<u32> = (0..=6).collect();
    let mut non_finite = 0;
    for _ in 0..50 {
        let r = random_schwartz(&mut rng, grid)
            .and_then(|f| random_schwartz(&mut rng, grid).and_then(|g| convolve(&f, &g)));
        match r {
            Ok(c) => {
                if !rapid_decay_profile(&c, &powers).all_finite() {
                    non_finite += 1;
                }
            }
            Err(_) => non_finite += 1,
        }
    }
    vec![Metric::count(family(k), "non_finite_profiles", non_finite)]
}

/// Fitted orders of `Σ zⁿ/(n!)^p` for `p = 4, 2, 1`.
pub fn growth(tolerance: f64) -> Vec<Metric> {
    let radii = log_radii(8.0, 16.0, 9);
    [(4.0, 0.25), (2.0, 0.5), (1.0, 1.0)]
        .iter()
        .map(|&(p, order)| {
            let name = format!("p={p}.order_error");
            match growth_order_fit(&FactorialPower(p), &radii) {
                Ok(fit) => Metric::new(family(5), name, (fit.order - order).abs(), tolerance),
                Err(_) => Metric::error(family(5), name),
            }
        })
        .collect()
}

fn duality(seed: u64) -> Vec<Metric> {
    let k = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..20 {
        let len = rng.random_range(1..=10);
        let mut acc = 0.3;
        let zeros: Vec<f64> = (0..len)
            .map(|_| {
                acc += rng.random_range(0.2..1.5);
                acc
            })
            .collect();
        let ok = (|| {
            let z = ZeroSequence::explicit(zeros.clone())?;
            let series = expand_to_series(&z, len)?.series;
            let back = factor_to_zeros(&series)?.values();
            Ok::<_, schwartzkit::Error>(
                back.len() == len && zeros.iter().zip(&back).all(|(a, b)| (a - b).abs() <= 1e-8 * a),
            )
        })()
        .unwrap_or(false);
        if !ok {
            failures += 1;
        }
    }
    vec![Metric::count(family(k), "roundtrip_failures", failures)]
}

fn delta_pairings() -> Vec<Metric> {
    let k = 7;
    or_error(
        k,
        "run",
        (|| {
            let grid = Grid::new(48.0, 8192)?;
            let b = BoundSequence::uniform(1.0, 7)?;
            let appx = build_schwartz_approximant(&b, 6, 6, grid)?;
            let mut not_monotone = 0;
            let mut worst = 0.0f64;
            for t in pairing_battery() {
                let trace = pairing_convergence(&appx, &t.sample(grid)?)?;
                let half = trace.error_at(3).unwrap_or(f64::NAN);
                let full = trace.final_error();
                if !(full <= half) {
                    not_monotone += 1;
                }
                worst = worst.max(full);
            }
            Ok(vec![
                Metric::count(family(k), "non_monotone_traces", not_monotone),
                Metric::new(family(k), "exact_cancellation.max_error", worst, 1e-9),
            ])
        })(),
    )
}

fn strong_battery() -> Vec<Metric> {
    let k = 8;
    let grid = Grid::new(48.0, 8192).expect("valid grid");
    factorization_battery()
        .par_iter()
        .flat_map_iter(|t| {
            let label = t.label();
            let r = t.sample(grid).and_then(|phi| {
                let norm = phi.max_abs();
                strong_factorize(&phi, 6, 6, &BoundPolicy::Diagonal, &default_seminorms()).map(|r| (r, norm))
            });
            match r {
                Ok((r, norm)) => vec![
                    Metric::new(
                        family(k),
                        format!("{label}.relative_residual"),
                        r.residual_sup / norm,
                        1e-9,
                    ),
                    Metric::count(
                        family(k),
                        format!("{label}.trace_increases"),
                        r.residual_not_decreasing as usize,
                    ),
                ],
                Err(_) => vec![Metric::error(family(k), label)],
            }
        })
        .collect()
}

fn bessel() -> Vec<Metric> {
    let k = 9;
    or_error(
        k,
        "run",
        (|| {
            let phi = Target::unit_gaussian().sample(Grid::new(16.0, 4096)?)?;
            let a = bessel_identity_check(1.0 / (4.0 * PI * PI), &phi)?;
            let b = bessel_identity_check(1.0, &phi)?;
            Ok(vec![
                Metric::new(family(k), "b1=1/(4pi^2).max_error", a, 1e-8),
                Metric::new(family(k), "b1=1.max_error", b, 1e-8),
            ])
        })(),
    )
}

fn compact_support() -> Vec<Metric> {
    let k = 10;
    or_error(
        k,
        "run",
        (|| {
            let grid = Grid::new(16.0, 4096)?;
            let b = BoundSequence::uniform(1.0, 7)?;
            let appx = build_compact_approximant(&b, 6, 6, grid, 1.0)?;
            let phi = Target::Bump { radius: 1.0 }.sample(grid)?;
            let r = weak_factorize_compact(&phi, &appx)?;
            let s = r.support.expect("compact factorizations report supports");
            Ok(vec![
                Metric::new(family(k), "h_inner.sup", s.h_inner, 1e-6),
                Metric::new(family(k), "residual", r.residual_sup, 1e-5),
                Metric::new(family(k), "outside_4sigma.sup", s.max_outside(), 1e-6),
            ])
        })(),
    )
}

type Entry = Box<dyn Fn(usize, usize) -> f64>;

fn diagonal() -> Vec<Metric> {
    let k = 11;
    let fact = |j: usize| (1..=j).map(|i| i as f64).product::<f64>();
    let families: [(&str, Entry); 3] = [
        ("powers", Box::new(|j, n| (n as f64).powi(j as i32))),
        ("constant", Box::new(|_, _| 1.0)),
        ("factorial", Box::new(move |j, n| fact(j) * n.max(1) as f64)),
    ];
    let j_max = 20;
    let mut out = Vec::new();
    for (name, b) in families.iter() {
        match diagonal_sequence(b, j_max) {
            Ok(a) => {
                let mut violations = 0;
                for j in 0..=j_max {
                    for n in 0..=j {
                        if a[j] * b(j, n) > 0.5f64.powi(j as i32) * (1.0 + 1e-12) {
                            violations += 1;
                        }
                    }
                }
                let unbounded = (0..=j_max)
                    .filter(|&n| {
                        let brute: f64 = (0..=j_max).map(|j| a[j] * b(j, n)).sum();
                        let (_, bound) = partial_sum_bound(&a, b, n);
                        !(brute <= bound * (1.0 + 1e-12))
                    })
                    .count();
                out.push(Metric::count(family(k), format!("{name}.violations"), violations));
                out.push(Metric::count(
                    family(k),
                    format!("{name}.unbounded_sums"),
                    unbounded,
                ));
            }
            Err(_) => out.push(Metric::error(family(k), *name)),
        }
    }
    out
}

fn sobolev(seed: u64) -> Vec<Metric> {
    let k = 12;
    or_error(
        k,
        "run",
        (|| {
            let grid = Grid::new(32.0, 4096)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut violations = 0;
            for _ in 0..20 {
                // a_(k) ≥ k survives sorting: any k of the n·r_n include one with n ≥ k
                let mut zeros: Vec<f64> = (1..=12).map(|n| n as f64 * rng.random_range(1.0..3.0)).collect();
                zeros.sort_by(f64::total_cmp);
                let z = ZeroSequence::explicit(zeros)?;
                let psi_hat = GridFunction::sample(grid.reciprocal(), |xi| reciprocal_product_at(&z, xi))?;
                for j in 0..=6 {
                    if !sobolev_sup_bound(&psi_hat, j)?.holds {
                        violations += 1;
                    }
                }
            }
            let c0 = uniform_derivative_bound(0, grid)?;
            Ok(vec![
                Metric::count(family(k), "inversion_bound_violations", violations),
                Metric::new(family(k), "c0.error", (c0 - 2.0 * PI / 3.0).abs(), 1e-6),
            ])
        })(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run(13, 0)[0].pass);
    }

    #[test]
    fn titles() {
        for k in 1..=COUNT {
            assert_ne!(title(k), "unknown");
        }
    }
}

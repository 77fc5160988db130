use crate::error::{Error, Result};
use crate::numeric::sum::NeumaierSum;

/// Weights `a₀ ≥ a₁ ≥ … ≥ a_J > 0` with `a_j · b(j, n) ≤ 2^{−j}` for every
/// `n ≤ j`:
///
/// `a_j = min(a_{j−1}, 2^{−j} / max_{n≤j} b(j, n))`.
///
/// For each fixed `n` the rows `j ≥ n` are then dominated by `2^{−j}`, so
/// `Σ_j a_j b(j, n)` converges.
pub fn diagonal_sequence<F: Fn(usize, usize) -> f64>(b: F, j_max: usize) -> Result<Vec<f64>> {
    let mut a = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let mut worst = 0.0f64;
        for n in 0..=j {
            let v = b(j, n);
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "oracle b({j}, {n}) = {v} is not a nonnegative number"
                )));
            }
            worst = worst.max(v);
        }
        let cap = if worst > 0.0 {
            0.5f64.powi(j as i32) / worst
        } else {
            f64::INFINITY
        };
        let prev = a.last().copied().unwrap_or(f64::INFINITY);
        a.push(cap.min(prev));
    }
    Ok(a)
}

/// `Σ_{j≤J} a_j b(j, n)` and the bound it must respect: the head
/// `Σ_{j<n} a_j b(j, n)` plus `Σ_{n≤j≤J} 2^{−j}`.
pub fn partial_sum_bound<F: Fn(usize, usize) -> f64>(a: &[f64], b: F, n: usize) -> (f64, f64) {
    let mut sum = NeumaierSum::new();
    let mut bound = NeumaierSum::new();
    for (j, &aj) in a.iter().enumerate() {
        let term = aj * b(j, n);
        sum.add(term);
        if j < n {
            bound.add(term);
        } else {
            bound.add(0.5f64.powi(j as i32));
        }
    }
    (sum.value(), bound.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(j: usize, n: usize) -> f64 {
        (n as f64).powi(j as i32)
    }

    #[test]
    fn constant_oracle_gives_powers_of_two() {
        let a = diagonal_sequence(|_, _| 1.0, 30).unwrap();
        for (j, v) in a.iter().enumerate() {
            assert_eq!(*v, 0.5f64.powi(j as i32));
        }
        let s: f64 = a.iter().sum();
        assert!((s - 2.0).abs() < 1e-8);
    }

    #[test]
    fn power_oracle() {
        let a = diagonal_sequence(power, 20).unwrap();
        for (j, v) in a.iter().enumerate().skip(1) {
            let expected = 0.5f64.powi(j as i32) * (j as f64).powi(-(j as i32));
            assert!((v - expected).abs() <= 1e-15 * expected);
        }
        let (s, bound) = partial_sum_bound(&a, power, 3);
        // head 1 + 3/2 + 9/16 plus Σ_{j≥3} 2^{−j}
        assert!((bound - (1.0 + 1.5 + 0.5625 + 0.25)).abs() < 1e-6);
        assert!(s <= bound && (s - 3.2100).abs() < 1e-3, "{s}");
    }

    #[test]
    fn factorial_oracle_sums_stay_bounded() {
        let b = |j: usize, n: usize| (1..=j).map(|k| k as f64).product::<f64>() * n.max(1) as f64;
        let a = diagonal_sequence(b, 15).unwrap();
        for n in 1..=15 {
            let brute: f64 = (0..=15).map(|j| a[j] * b(j, n)).sum();
            let (s, bound) = partial_sum_bound(&a, b, n);
            assert!((s - brute).abs() < 1e-12 * brute);
            assert!(s <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn non_positive_oracle_is_rejected() {
        assert!(diagonal_sequence(|j, _| j as f64 - 1.0, 3).is_err());
    }
}

use serde::{Deserialize, Serialize};

use super::strong::{SeminormIndex, SeminormTraceRow, SeminormValue};
use crate::delta::BoundSequence;
use crate::error::{Error, Result};
use crate::gridfn::{derivative, seminorm, GridFunction};

/// Default bound on the last increment for a summable trace.
pub const INCREMENT_THRESHOLD: f64 = 1e-8;

/// Seminorms of the increments `Φ_n − Φ_{n−1} = (−1)^n B_n φ^{(2n)}` of the
/// real-side series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityTrace {
    pub increments: Vec<SeminormTraceRow>,
    /// Per seminorm, `Σ_n |Φ_n − Φ_{n−1}|_{m,k}`.
    pub partial_sums: Vec<SeminormValue>,
    pub last_increment: f64,
    pub threshold: f64,
    /// Every increment is at most `2^{−n}`, the domination the diagonal
    /// bounds are built to give.
    pub dominated: bool,
    /// Finite partial sums and a last increment below the threshold.
    pub summable: bool,
}

pub fn phi_series_stability(
    phi: &GridFunction,
    bounds: &BoundSequence,
    terms: usize,
    seminorms: &[SeminormIndex],
) -> Result<StabilityTrace> {
    if terms == 0 || terms >= bounds.len() {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ J < {} for the given bounds, got {terms}",
            bounds.len()
        )));
    }
    let mut increments = Vec::with_capacity(terms);
    let mut sums = vec![0.0; seminorms.len()];
    let mut dominated = true;
    let mut prev = phi.clone();
    for n in 1..=terms {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = derivative(phi, 2 * n)?.scale((sign * bounds.values()[n]).into());
        let next = prev.add(&term)?;
        let inc = next.sub(&prev)?;
        let mut values = Vec::with_capacity(seminorms.len());
        for (s, total) in seminorms.iter().zip(sums.iter_mut()) {
            let value = seminorm(&inc, s.m, s.k)?;
            *total += value;
            dominated &= value <= 0.5f64.powi(n as i32) * (1.0 + 1e-9);
            values.push(SeminormValue {
                m: s.m,
                k: s.k,
                value,
            });
        }
        increments.push(SeminormTraceRow { n, values });
        prev = next;
    }
    let last_increment = increments.last().map_or(0.0, SeminormTraceRow::max);
    let partial_sums: Vec<SeminormValue> = seminorms
        .iter()
        .zip(&sums)
        .map(|(s, &value)| SeminormValue {
            m: s.m,
            k: s.k,
            value,
        })
        .collect();
    let summable = sums.iter().all(|v| v.is_finite()) && last_increment < INCREMENT_THRESHOLD;
    Ok(StabilityTrace {
        increments,
        partial_sums,
        last_increment,
        threshold: INCREMENT_THRESHOLD,
        dominated,
        summable,
    })
}

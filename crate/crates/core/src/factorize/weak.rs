use super::strong::{FactorizationResult, SupportMetrics};
use crate::delta::DeltaApproximant;
use crate::error::{Error, Result};
use crate::gridfn::{convolve, fourier_transform, inverse_fourier_transform, GridFunction};

/// `|φ|` outside `[−σ, σ]` above this multiple of `‖φ‖_∞` violates the
/// support precondition.
pub const SUPPORT_TOLERANCE: f64 = 1e-10;

fn sup_where<P: Fn(f64) -> bool>(f: &GridFunction, keep: P) -> f64 {
    f.iter()
        .filter(|(x, _)| keep(*x))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

/// `φ = Φ∗f − h∗φ` with `Φ̂ = P_N φ̂`, `f` and `h` from a compact-flavor
/// approximant.
pub fn weak_factorize_compact(phi: &GridFunction, appx: &DeltaApproximant) -> Result<FactorizationResult> {
    let parts = appx.compact().ok_or_else(|| {
        Error::InvalidArgument("weak factorization needs a compact-flavor approximant".into())
    })?;
    phi.check_same_grid(appx.psi())?;
    let sigma = parts.sigma;
    let limit = SUPPORT_TOLERANCE * phi.max_abs();
    if let Some((x, v)) = phi
        .iter()
        .filter(|(x, v)| x.abs() > sigma && v.norm() > limit)
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
    {
        return Err(Error::SupportViolation {
            abscissa: x,
            value: v.norm(),
        });
    }
    let n = appx.factors();
    let f = appx.psi();
    let big_hat = fourier_transform(phi).map(|xi, v| v * appx.symbol(n, xi))?;
    let big_phi = inverse_fourier_transform(&big_hat);
    let first = inverse_fourier_transform(&big_hat.mul(&fourier_transform(f))?);
    let second = convolve(&parts.h, phi)?;
    let reconstruction = first.sub(&second)?;
    let residual = phi.sub(&reconstruction)?;
    let outside = |x: f64| x.abs() > 4.0 * sigma;
    let support = SupportMetrics {
        sigma,
        big_phi_outside: sup_where(&big_phi, outside),
        f_outside: sup_where(f, outside),
        h_outside: sup_where(&parts.h, outside),
        reconstruction_outside: sup_where(&reconstruction, outside),
        h_inner: sup_where(&parts.h, |x| x.abs() <= sigma),
    };
    let residual_sup = residual.max_abs();
    Ok(FactorizationResult {
        target: "phi".into(),
        terms: n,
        factors: n,
        residual_sup,
        residual_l2: residual.l2_norm(),
        spectral_residual_l2: fourier_transform(&residual).l2_norm(),
        residual_trace: vec![(n, residual_sup)],
        residual_not_decreasing: false,
        seminorm_trace: Vec::new(),
        bounds: parts.shrunk_bounds.values().to_vec(),
        b: appx.coefficients().to_vec(),
        scale: appx.scale(),
        support: Some(support),
        phi: phi.clone(),
        big_phi,
        psi: f.clone(),
        h: Some(parts.h.clone()),
    })
}

//! Standard test functions used by the factorization and pairing checks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gridfn::{Grid, GridFunction};
use crate::numeric::special::{sech2, x_over_sinh};

/// `e^{1 − 1/(1 − t²)}` on `|t| < 1`, zero elsewhere; equals 1 at `t = 0`.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// `e^{−π((x − center)/width)²}`.
    Gaussian { center: f64, width: f64 },
    /// `x/sinh x`.
    XOverSinh,
    /// `bump(x/radius)`, supported in `[−radius, radius]`.
    Bump { radius: f64 },
    /// `(1 + x²)^{−power}`.
    Rational { power: i32 },
}

impl Target {
    pub const fn unit_gaussian() -> Self {
        Target::Gaussian {
            center: 0.0,
            width: 1.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Target::Gaussian { center, width } => {
                let t = (x - center) / width;
                (-PI * t * t).exp()
            }
            Target::XOverSinh => x_over_sinh(x),
            Target::Bump { radius } => bump(x / radius),
            Target::Rational { power } => (1.0 + x * x).powi(-power),
        }
    }

    /// Closed-form transform where one is available.
    pub fn transform(&self, xi: f64) -> Option<(f64, f64)> {
        match *self {
            Target::Gaussian { center, width } => {
                let m = width * (-PI * width * width * xi * xi).exp();
                let phase = -2.0 * PI * xi * center;
                Some((m * phase.cos(), m * phase.sin()))
            }
            Target::XOverSinh => Some((0.5 * PI * PI * sech2(PI * PI * xi), 0.0)),
            Target::Bump { .. } | Target::Rational { .. } => None,
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<GridFunction> {
        GridFunction::sample(grid, |x| self.eval(x))
    }

    pub fn label(&self) -> String {
        match *self {
            Target::Gaussian { center, width } if center == 0.0 && width == 1.0 => "gaussian".to_string(),
            Target::Gaussian { center: 0.0, width } => format!("gaussian_w{width}"),
            Target::Gaussian { center, width } => format!("gaussian_c{center}_w{width}"),
            Target::XOverSinh => "x_over_sinh".to_string(),
            Target::Bump { radius } => format!("bump_r{radius}"),
            Target::Rational { power } => format!("rational_p{power}"),
        }
    }
}

/// Unit Gaussian, Gaussian of width 3, `x/sinh x`, unit bump.
pub fn factorization_battery() -> Vec<Target> {
    vec![
        Target::unit_gaussian(),
        Target::Gaussian {
            center: 0.0,
            width: 3.0,
        },
        Target::XOverSinh,
        Target::Bump { radius: 1.0 },
    ]
}

/// Gaussians at three centers and two widths, `(1 + x²)^{−4}` and a bump.
pub fn pairing_battery() -> Vec<Target> {
    let mut out = Vec::new();
    for width in [1.0, 2.0] {
        for center in [0.0, 0.5, -1.0] {
            out.push(Target::Gaussian { center, width });
        }
    }
    out.push(Target::Rational { power: 4 });
    out.push(Target::Bump { radius: 1.0 });
    out
}

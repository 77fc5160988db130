use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::special::hurwitz_zeta;
use crate::numeric::sum::NeumaierSum;

/// Upper limit on the number of factors that are multiplied out.
pub const MAX_FACTORS: usize = 1_000_000;

/// How the zeros are specified.
#[derive(Clone, Debug, PartialEq)]
pub enum ZeroKind {
    /// A finite ascending list; the product has exactly these factors.
    Explicit(Vec<f64>),
    /// `a_n = s·n`, `n ≥ 1`.
    Linear { scale: f64 },
    /// `a_n = s·(2n − 1)`, `n ≥ 1`.
    Odd { scale: f64 },
}

/// Positive, nondecreasing zeros `a_n` of `∏(1 + z²/a_n²)`, truncated to
/// the first `count` factors. Factors past `count` form the tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ZeroDoc", into = "ZeroDoc")]
pub struct ZeroSequence {
    kind: ZeroKind,
    count: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZeroDoc {
    kind: String,
    #[serde(default = "one")]
    scale: f64,
    count: Option<usize>,
    #[serde(default)]
    values: Vec<f64>,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<ZeroDoc> for ZeroSequence {
    type Error = Error;
    fn try_from(d: ZeroDoc) -> Result<Self> {
        match d.kind.as_str() {
            "explicit" => {
                let z = Self::explicit(d.values.iter().map(|v| v * d.scale).collect())?;
                match d.count {
                    Some(c) => z.with_count(c),
                    None => Ok(z),
                }
            }
            "linear" | "odd" => {
                let count = d
                    .count
                    .ok_or_else(|| Error::InvalidZeros(format!("{} family needs a count", d.kind)))?;
                if d.kind == "linear" {
                    Self::linear(d.scale, count)
                } else {
                    Self::odd(d.scale, count)
                }
            }
            other => Err(Error::InvalidZeros(format!("unknown kind {other:?}"))),
        }
    }
}

impl From<ZeroSequence> for ZeroDoc {
    fn from(z: ZeroSequence) -> Self {
        match z.kind {
            ZeroKind::Explicit(values) => ZeroDoc {
                kind: "explicit".into(),
                scale: 1.0,
                count: Some(z.count),
                values,
            },
            ZeroKind::Linear { scale } => ZeroDoc {
                kind: "linear".into(),
                scale,
                count: Some(z.count),
                values: Vec::new(),
            },
            ZeroKind::Odd { scale } => ZeroDoc {
                kind: "odd".into(),
                scale,
                count: Some(z.count),
                values: Vec::new(),
            },
        }
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if scale.is_finite() && scale > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidZeros(format!("scale {scale} must be positive")))
    }
}

fn check_count(count: usize) -> Result<()> {
    if (1..=MAX_FACTORS).contains(&count) {
        Ok(())
    } else {
        Err(Error::InvalidZeros(format!(
            "count {count} outside 1..={MAX_FACTORS}"
        )))
    }
}

impl ZeroSequence {
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidZeros("empty zero list".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidZeros(format!("zero {i} = {v} is not positive")));
            }
            if i > 0 && v < values[i - 1] {
                return Err(Error::InvalidZeros(format!("zeros decrease at index {i}")));
            }
        }
        let count = values.len();
        Ok(Self {
            kind: ZeroKind::Explicit(values),
            count,
        })
    }

    pub fn linear(scale: f64, count: usize) -> Result<Self> {
        check_scale(scale)?;
        check_count(count)?;
        Ok(Self {
            kind: ZeroKind::Linear { scale },
            count,
        })
    }

    pub fn odd(scale: f64, count: usize) -> Result<Self> {
        check_scale(scale)?;
        check_count(count)?;
        Ok(Self {
            kind: ZeroKind::Odd { scale },
            count,
        })
    }

    /// Factor count used by default for a parametric family sampled on
    /// `[−L, L]`.
    ///
    /// The tail is folded in through its power sums up to `z⁶`, so the
    /// neglected part is of order `(L/a_N)⁸ N`; `a_N ≥ 200 L` makes it
    /// negligible in double precision.
    pub fn default_count(first_zero: f64, half_width: f64) -> usize {
        let n = (200.0 * half_width / first_zero).ceil();
        (n as usize).clamp(1000, MAX_FACTORS)
    }

    pub fn kind(&self) -> &ZeroKind {
        &self.kind
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn scale(&self) -> Option<f64> {
        match self.kind {
            ZeroKind::Explicit(_) => None,
            ZeroKind::Linear { scale } | ZeroKind::Odd { scale } => Some(scale),
        }
    }

    /// Same zeros with a different truncation length.
    pub fn with_count(&self, count: usize) -> Result<Self> {
        check_count(count)?;
        if let ZeroKind::Explicit(v) = &self.kind {
            if count > v.len() {
                return Err(Error::InvalidZeros(format!(
                    "count {count} exceeds the {} listed zeros",
                    v.len()
                )));
            }
        }
        Ok(Self {
            kind: self.kind.clone(),
            count,
        })
    }

    /// The `n`-th zero, 1-based. Explicit lists are finite.
    pub fn zero(&self, n: usize) -> Option<f64> {
        assert!(n >= 1, "zeros are numbered from 1");
        match &self.kind {
            ZeroKind::Explicit(v) => v.get(n - 1).copied(),
            ZeroKind::Linear { scale } => Some(scale * n as f64),
            ZeroKind::Odd { scale } => Some(scale * (2 * n - 1) as f64),
        }
    }

    pub fn first(&self) -> f64 {
        self.zero(1).expect("sequences are nonempty")
    }

    /// The first `count` zeros.
    pub fn values(&self) -> Vec<f64> {
        (1..=self.count)
            .map(|n| self.zero(n).expect("count is within the list"))
            .collect()
    }

    fn explicit_tail(&self) -> &[f64] {
        match &self.kind {
            ZeroKind::Explicit(v) => &v[self.count..],
            _ => &[],
        }
    }

    /// Rigorous upper bound for `Σ_{n > count} 1/a_n²`.
    pub fn tail_sum_bound(&self) -> f64 {
        let n = self.count as f64;
        match self.kind {
            ZeroKind::Explicit(_) => self
                .explicit_tail()
                .iter()
                .map(|a| 1.0 / (a * a))
                .collect::<NeumaierSum>()
                .value(),
            ZeroKind::Linear { scale } => 1.0 / (scale * scale * n),
            ZeroKind::Odd { scale } => 1.0 / (2.0 * scale * scale * (2.0 * n - 1.0)),
        }
    }

    /// `Σ_{n > count} a_n^{−2k}`, summed to double precision.
    pub fn tail_power_sum(&self, k: u32) -> f64 {
        assert!(k >= 1, "power sums start at k = 1");
        let n = self.count as f64;
        match self.kind {
            ZeroKind::Explicit(_) => self
                .explicit_tail()
                .iter()
                .map(|a| a.powi(-2 * k as i32))
                .collect::<NeumaierSum>()
                .value(),
            ZeroKind::Linear { scale } => scale.powi(-2 * k as i32) * hurwitz_zeta(2 * k, n + 1.0),
            ZeroKind::Odd { scale } => (2.0 * scale).powi(-2 * k as i32) * hurwitz_zeta(2 * k, n + 0.5),
        }
    }

    /// True when factors beyond `count` exist.
    pub fn has_tail(&self) -> bool {
        match &self.kind {
            ZeroKind::Explicit(v) => v.len() > self.count,
            _ => true,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const POSITIVITY_SAMPLES: usize = 4096;

/// Collision cross-section q(|w|, cos theta).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum KernelSpec {
    /// q = 1.
    Maxwell,
    /// q = |w|^alpha * sum_m c_m cos(m theta), alpha in [0, 1].
    ProductPower { alpha: f64, cosine_coeffs: Vec<f64> },
}

impl KernelSpec {
    /// Checked constructor for the product form. The angular factor must be
    /// nonnegative; it is tested on a fine uniform grid of angles.
    pub fn product_power(alpha: f64, cosine_coeffs: Vec<f64>) -> Result<Self> {
        let k = KernelSpec::ProductPower {
            alpha,
            cosine_coeffs,
        };
        k.validate()?;
        Ok(k)
    }

    /// Angular factors |theta|^-gamma are not representable here.
    pub fn angular_power(gamma: f64) -> Result<Self> {
        Err(Error::SingularKernel { gamma })
    }

    pub fn validate(&self) -> Result<()> {
        let KernelSpec::ProductPower {
            alpha,
            cosine_coeffs,
        } = self
        else {
            return Ok(());
        };
        if !(0.0..=1.0).contains(alpha) {
            return Err(Error::InvalidKernel(format!(
                "alpha = {alpha} outside [0, 1]"
            )));
        }
        if cosine_coeffs.is_empty() || cosine_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidKernel(
                "angular coefficients must be finite and non-empty".into(),
            ));
        }
        let min = (0..POSITIVITY_SAMPLES)
            .map(|i| self.angular(-PI + 2.0 * PI * i as f64 / POSITIVITY_SAMPLES as f64))
            .fold(f64::INFINITY, f64::min);
        if min < 0.0 {
            return Err(Error::InvalidKernel(format!(
                "angular factor takes negative value {min}"
            )));
        }
        Ok(())
    }

    pub fn is_maxwell(&self) -> bool {
        matches!(self, KernelSpec::Maxwell)
    }

    /// q2(theta).
    pub fn angular(&self, theta: f64) -> f64 {
        match self {
            KernelSpec::Maxwell => 1.0,
            KernelSpec::ProductPower { cosine_coeffs, .. } => cosine_coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c * (m as f64 * theta).cos())
                .sum(),
        }
    }

    /// q1(|w|).
    pub fn radial(&self, w_norm: f64) -> f64 {
        match self {
            KernelSpec::Maxwell => 1.0,
            KernelSpec::ProductPower { alpha, .. } if *alpha == 0.0 => 1.0,
            KernelSpec::ProductPower { alpha, .. } => w_norm.powf(*alpha),
        }
    }

    pub fn eval(&self, w_norm: f64, theta: f64) -> f64 {
        self.radial(w_norm) * self.angular(theta)
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Maxwell => write!(f, "maxwell"),
            KernelSpec::ProductPower {
                alpha,
                cosine_coeffs,
            } => {
                let cs: Vec<String> = cosine_coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "power:{alpha}:{}", cs.join(","))
            }
        }
    }
}

/// Parses `maxwell`, `power:<alpha>:<c0>,<c1>,...` or `angular-power:<gamma>`
/// (the last is always rejected as singular).
impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidKernel(format!("bad number {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            ["maxwell"] => Ok(KernelSpec::Maxwell),
            ["power", alpha, coeffs] => {
                let cs = coeffs.split(',').map(num).collect::<Result<Vec<_>>>()?;
                KernelSpec::product_power(num(alpha)?, cs)
            }
            ["angular-power", gamma] => KernelSpec::angular_power(num(gamma)?),
            _ => Err(Error::InvalidKernel(format!("unrecognised kernel {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxwell_is_one() {
        assert_eq!(KernelSpec::Maxwell.eval(3.0, 1.0), 1.0);
    }

    #[test]
    fn product_power_values() {
        let k = KernelSpec::product_power(0.5, vec![1.0, 0.5]).unwrap();
        assert!((k.eval(4.0, 0.0) - 2.0 * 1.5).abs() < 1e-15);
        assert_eq!(k.angular(0.7), k.angular(-0.7));
    }

    #[test]
    fn rejects_bad_kernels() {
        assert!(matches!(
            KernelSpec::product_power(1.5, vec![1.0]),
            Err(Error::InvalidKernel(_))
        ));
        assert!(matches!(
            KernelSpec::product_power(0.5, vec![0.2, 1.0]),
            Err(Error::InvalidKernel(_))
        ));
        assert!(matches!(
            KernelSpec::angular_power(2.0),
            Err(Error::SingularKernel { .. })
        ));
        assert!(matches!(
            "angular-power:1.5".parse::<KernelSpec>(),
            Err(Error::SingularKernel { .. })
        ));
    }

    #[test]
    fn parse_round_trip() {
        let k: KernelSpec = "power:0.5:1,0.25".parse().unwrap();
        assert_eq!(k, KernelSpec::product_power(0.5, vec![1.0, 0.25]).unwrap());
        assert_eq!(k.to_string().parse::<KernelSpec>().unwrap(), k);
        assert_eq!(
            "maxwell".parse::<KernelSpec>().unwrap(),
            KernelSpec::Maxwell
        );
    }
}

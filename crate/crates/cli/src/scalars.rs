use std::str::FromStr;

use anyhow::{anyhow, Result};
use evalrep_cyclotomic::{Backend, BigRational, Complex64, CyclotomicField, ExactBackend, FloatBackend};

/// Backends the command line can drive: scalars and exponents come in as strings.
pub trait CliBackend: Backend + 'static {
    fn parse_scalar(&self, s: &str) -> Result<Self::Scalar>;
    fn parse_exponent(&self, s: &str) -> Result<Self::Exponent>;
    fn render(&self, x: &Self::Scalar) -> String;
}

impl CliBackend for ExactBackend {
    fn parse_scalar(&self, s: &str) -> Result<Self::Scalar> {
        self.field().parse(s).map_err(|e| anyhow!("scalar {s:?}: {e}"))
    }

    fn parse_exponent(&self, s: &str) -> Result<BigRational> {
        BigRational::from_str(s.trim()).map_err(|e| anyhow!("exponent {s:?}: {e}"))
    }

    fn render(&self, x: &Self::Scalar) -> String {
        x.to_string()
    }
}

impl CliBackend for FloatBackend {
    /// Complex literals such as `0.7+0.2i`, or anything the exact parser accepts.
    fn parse_scalar(&self, s: &str) -> Result<Complex64> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(z) = Complex64::from_str(&t) {
            return Ok(z);
        }
        CyclotomicField::new(self.order())
            .parse(s)
            .map(|x| x.to_complex())
            .map_err(|e| anyhow!("scalar {s:?}: {e}"))
    }

    fn parse_exponent(&self, s: &str) -> Result<Complex64> {
        self.parse_scalar(s)
    }

    fn render(&self, x: &Complex64) -> String {
        let clean = |v: f64| if v.abs() < 1e-13 { 0.0 } else { v };
        format!("{:.12}{:+.12}i", clean(x.re), clean(x.im))
    }
}

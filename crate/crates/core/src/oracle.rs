//! Brute-force term-by-term summation of every target series.
//!
//! Nothing here touches the quadrature layer or the transform kernels.
//! Denominators are exact integers while they fit in `u128`; after that the
//! log-gamma function takes over.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{CoefficientSequence, Growth, SeriesFamily};
use crate::special::ln_gamma;
use crate::transforms::TransformOutput;

/// Maximum number of terms the oracle will sum.
pub const TERM_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub family: SeriesFamily,
    pub z: Complex64,
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms_used: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Budgets above this make a comparison meaningless.
pub const INCONCLUSIVE_BUDGET: f64 = 1e-3;

pub fn compare(t: &TransformOutput, o: &OracleResult) -> Result<Verdict> {
    if t.family != o.family {
        return Err(Error::MismatchedTarget(format!(
            "transform computes {:?}, oracle computes {:?}",
            t.family, o.family
        )));
    }
    if t.z != o.z {
        return Err(Error::MismatchedTarget(format!("transform evaluated at {}, oracle at {}", t.z, o.z)));
    }
    if t.abs_error_estimate > INCONCLUSIVE_BUDGET || o.tail_bound > INCONCLUSIVE_BUDGET {
        return Ok(Verdict::Inconclusive);
    }
    if (t.value - o.value).norm() <= t.abs_error_estimate + o.tail_bound {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail)
    }
}

/// Exact running denominator, dropped once it overflows.
struct Denominator {
    family: SeriesFamily,
    exact: Option<u128>,
    // running log of the multifactorial, which has no gamma shortcut here
    ln_multifactorial: f64,
}

fn multifactorial_exact(n: u128, a: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 0 {
        acc = acc.checked_mul(k)?;
        if k <= a {
            break;
        }
        k -= a;
    }
    Some(acc)
}

impl Denominator {
    fn new(family: SeriesFamily) -> Self {
        let exact = match family {
            SeriesFamily::MittagLeffler { b, .. } => (1..=b as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)),
            SeriesFamily::Multifactorial { a, d } => multifactorial_exact(d as u128, a as u128),
            _ => Some(1),
        };
        let ln_multifactorial = match family {
            SeriesFamily::Multifactorial { a, d } => {
                let mut s = 0.0;
                let mut k = d as i64;
                while k > 0 {
                    s += (k as f64).ln();
                    if k <= a as i64 {
                        break;
                    }
                    k -= a as i64;
                }
                s
            }
            _ => 0.0,
        };
        Denominator { family, exact, ln_multifactorial }
    }

    /// Advance from index `n - 1` to `n` (n >= 1).
    fn advance(&mut self, n: u64) {
        let n128 = n as u128;
        let step = |den: u128| -> Option<u128> {
            match self.family {
                SeriesFamily::Ogf | SeriesFamily::SquareSeries { .. } => Some(den),
                SeriesFamily::Egf => den.checked_mul(n128),
                SeriesFamily::DoublyExp => den.checked_mul(n128)?.checked_mul(n128),
                SeriesFamily::Polylog { r } => (n128 + 1).checked_pow(r),
                // C(2n,n) = C(2n-2,n-1) * 2(2n-1) / n, and n! C(2n,n) = (2n)!/n!
                SeriesFamily::CentralBinomialOgf => Some(den.checked_mul(2 * (2 * n128 - 1))? / n128),
                SeriesFamily::CentralBinomialEgf => den.checked_mul(2 * (2 * n128 - 1)),
                SeriesFamily::MittagLeffler { a, b } => {
                    let base = a as u128 * (n128 - 1) + b as u128;
                    (1..=a as u128).try_fold(den, |acc, k| acc.checked_mul(base + k))
                }
                SeriesFamily::Multifactorial { a, d } => den.checked_mul(a as u128 * n128 + d as u128),
                SeriesFamily::EulerTransform => None,
            }
        };
        self.exact = self.exact.and_then(step);
        if let SeriesFamily::Multifactorial { a, d } = self.family {
            self.ln_multifactorial += ((a as u64 * n + d as u64) as f64).ln();
        }
    }

    /// `log` of the denominator at index `n`, for use after overflow.
    fn ln(&self, n: u64) -> Result<f64> {
        let x = n as f64;
        Ok(match self.family {
            SeriesFamily::Ogf | SeriesFamily::SquareSeries { .. } | SeriesFamily::EulerTransform => 0.0,
            SeriesFamily::Egf => ln_gamma(x + 1.0)?,
            SeriesFamily::DoublyExp => 2.0 * ln_gamma(x + 1.0)?,
            SeriesFamily::Polylog { r } => r as f64 * (x + 1.0).ln(),
            SeriesFamily::CentralBinomialOgf => ln_gamma(2.0 * x + 1.0)? - 2.0 * ln_gamma(x + 1.0)?,
            SeriesFamily::CentralBinomialEgf => ln_gamma(2.0 * x + 1.0)? - ln_gamma(x + 1.0)?,
            SeriesFamily::MittagLeffler { a, b } => ln_gamma(a as f64 * x + b as f64 + 1.0)?,
            SeriesFamily::Multifactorial { .. } => self.ln_multifactorial,
        })
    }
}

/// `den_{n+1} / den_n` as a real number.
fn denominator_ratio(family: SeriesFamily, n: usize) -> f64 {
    let x = n as f64;
    match family {
        SeriesFamily::Ogf | SeriesFamily::SquareSeries { .. } | SeriesFamily::EulerTransform => 1.0,
        SeriesFamily::Egf => x + 1.0,
        SeriesFamily::DoublyExp => (x + 1.0) * (x + 1.0),
        SeriesFamily::Polylog { r } => ((x + 2.0) / (x + 1.0)).powi(r as i32),
        SeriesFamily::CentralBinomialEgf => 2.0 * (2.0 * x + 1.0),
        SeriesFamily::CentralBinomialOgf => 2.0 * (2.0 * x + 1.0) / (x + 1.0),
        SeriesFamily::MittagLeffler { a, b } => {
            let base = a as f64 * x + b as f64;
            (1..=a).map(|k| base + k as f64).product()
        }
        SeriesFamily::Multifactorial { a, d } => a as f64 * (x + 1.0) + d as f64,
    }
}

/// Bounds for the majorant `u_n >= |term_n| / M`.
struct Majorant {
    family: SeriesFamily,
    growth: Growth,
    abs_z: f64,
}

impl Majorant {
    /// `u_{n+1} / u_n`.
    fn ratio(&self, n: usize) -> f64 {
        let base = match self.growth {
            Growth::Geometric { r, .. } => r * self.abs_z,
            Growth::Factorial { .. } => (n as f64 + 1.0) * self.abs_z,
        };
        match self.family {
            SeriesFamily::SquareSeries { q } => base * q.norm().powi(2 * n as i32 + 1),
            f => base / denominator_ratio(f, n),
        }
    }

    /// `lim_{n -> inf}` of [`Majorant::ratio`]; every ratio sequence used
    /// here is monotone, so the supremum over `n >= N` is the larger of
    /// the value at `N` and this limit.
    fn limit(&self) -> f64 {
        let z = self.abs_z;
        match (self.growth, self.family) {
            (_, SeriesFamily::SquareSeries { .. }) => 0.0,
            (Growth::Geometric { r, .. }, f) => {
                let x = r * z;
                match f {
                    SeriesFamily::Ogf | SeriesFamily::Polylog { .. } => x,
                    SeriesFamily::CentralBinomialOgf => x / 4.0,
                    _ => 0.0,
                }
            }
            (Growth::Factorial { .. }, f) => match f {
                SeriesFamily::Egf => z,
                SeriesFamily::CentralBinomialEgf => z / 4.0,
                SeriesFamily::MittagLeffler { a: 1, .. } => z,
                SeriesFamily::Multifactorial { a, .. } => z / a as f64,
                SeriesFamily::DoublyExp | SeriesFamily::MittagLeffler { .. } => 0.0,
                _ if z == 0.0 => 0.0,
                _ => f64::INFINITY,
            },
        }
    }
}

fn validate_point(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("z must be finite, got {z}")))
    }
}

/// Sum the target series of `family` for `seq` at `z` until the certified
/// tail drops to `tol`.
pub fn oracle_sum(family: SeriesFamily, seq: &CoefficientSequence, z: Complex64, tol: f64) -> Result<OracleResult> {
    family.validate()?;
    validate_point(z)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if family == SeriesFamily::EulerTransform {
        return Err(Error::InvalidParameter("the Euler transform is a coefficient map; use euler_transform".into()));
    }
    if let SeriesFamily::SquareSeries { q } = family {
        if !((q * z).norm() < 1.0) {
            return Err(Error::DivergentEvaluation(format!("square series needs |qz| < 1, got {}", (q * z).norm())));
        }
    }
    let growth = seq.growth();
    let m = match growth {
        Growth::Geometric { m, .. } | Growth::Factorial { m } => m,
    };
    let majorant = Majorant { family, growth, abs_z: z.norm() };
    let limit = majorant.limit();
    // the only boundary case with a usable tail: sum 1/(n+1)^r, r >= 2
    let polylog_boundary = match (family, growth) {
        (SeriesFamily::Polylog { r }, Growth::Geometric { .. }) if limit == 1.0 && r >= 2 => Some(r),
        _ => None,
    };
    if limit >= 1.0 && polylog_boundary.is_none() {
        return Err(Error::DivergentEvaluation(format!(
            "{} series of `{}` diverges at z = {z} (ratio limit {limit})",
            family.cli_name(),
            seq.id()
        )));
    }

    let ln_z = if z.norm() > 0.0 { Some(z.ln()) } else { None };
    let mut den = Denominator::new(family);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut z_pow = Complex64::new(1.0, 0.0);
    // q^(n^2) and q^(2n+1) for the square series
    let (mut q_square, mut q_odd) = match family {
        SeriesFamily::SquareSeries { q } => (Complex64::new(1.0, 0.0), q),
        _ => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
    };
    let mut ln_u = 0.0f64; // log u_n, u_0 = 1/den_0
    if let Some(d0) = den.exact {
        ln_u = -(d0 as f64).ln();
    }
    let mut tail = f64::INFINITY;

    for n in 0..TERM_BUDGET {
        if n > 0 {
            den.advance(n as u64);
            z_pow *= z;
            if let SeriesFamily::SquareSeries { q } = family {
                q_square *= q_odd;
                q_odd *= q * q;
            }
        }
        let scale = match den.exact {
            Some(d) if z_pow.re.is_finite() && z_pow.im.is_finite() => z_pow / d as f64,
            _ => match ln_z {
                Some(l) => (l * n as f64 - den.ln(n as u64)?).exp(),
                None => Complex64::new(0.0, 0.0),
            },
        };
        let term = if let SeriesFamily::SquareSeries { .. } = family {
            seq.coeff(n) * z_pow * q_square
        } else {
            seq.coeff(n) * scale
        };
        sum += term;

        // tail after index n
        let r_next = majorant.ratio(n);
        ln_u += r_next.ln();
        tail = match polylog_boundary {
            Some(r) => m / ((r as f64 - 1.0) * (n as f64 + 1.0).powi(r as i32 - 1)),
            None => {
                let q = majorant.ratio(n + 1).max(majorant.ratio(n + 2)).max(limit);
                if q < 1.0 {
                    let t = m * ln_u.exp() / (1.0 - q);
                    if t.is_nan() {
                        0.0
                    } else {
                        t
                    }
                } else {
                    f64::INFINITY
                }
            }
        };
        if tail <= tol {
            return Ok(OracleResult { family, z, value: sum, tail_bound: tail, terms_used: n + 1 });
        }
    }
    Err(Error::ToleranceUnreachable { tail, tol, terms: TERM_BUDGET })
}

//! Scalar special functions used as transform kernels and in tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semiinfinite_exp, Domain, Envelope, IntegralKernel, QuadratureConfig};
use crate::series::SeriesValue;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// `zeta(3)`.
pub const APERY: f64 = 1.202_056_903_159_594_3;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `log Gamma(z)` for `Re z >= 0.5` (Lanczos, g = 7).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `1/Gamma(z)`, entire; exactly zero at `0, -1, -2, ...`.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// `log Gamma(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("ln_gamma needs finite x > 0, got {x}")));
    }
    if x < 0.5 {
        // Gamma(x) = Gamma(x + 1) / x
        return Ok(ln_gamma_right(Complex64::new(x + 1.0, 0.0)).re - x.ln());
    }
    Ok(ln_gamma_right(Complex64::new(x, 0.0)).re)
}

/// `1/Gamma(x)` for real `x`.
pub fn recip_gamma_real(x: f64) -> f64 {
    recip_gamma(Complex64::new(x, 0.0)).re
}

/// Taylor coefficient `a_n` of `1/Gamma(z) = sum_{k>=1} a_k z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecipGammaCoeff {
    pub n: usize,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evals: usize,
}

/// `a_n = (-1)^n / (pi n!) * integral_0^inf e^(-t) Im{(log t - i pi)^n} dt`.
///
/// The range is split at `t = 1`. On `(0, 1]` the substitution `t = e^(-u)`
/// removes the logarithmic endpoint; on `[1, inf)` the shift `t = 1 + s`
/// gives a plain `e^(-s)` weight.
pub fn recip_gamma_coeff(n: usize, config: &QuadratureConfig) -> Result<RecipGammaCoeff> {
    if n == 0 {
        return Err(Error::InvalidParameter("reciprocal gamma coefficients start at n = 1".into()));
    }
    let power = n as i32;
    // (u + pi)^n grows polynomially; move T out so the tail stays negligible.
    let t_max = config.truncation_t.max(40.0 + 2.0 * n as f64);
    let mut inner = config.with_truncation(t_max);
    inner.tol = f64::INFINITY;
    let envelope = Envelope { c: (1.0 + PI / t_max).powi(power), p: n as f64, s: 0.0 };

    let near_zero = IntegralKernel::new(Domain::SemiInfiniteExp, |u: f64| {
        let im = Complex64::new(-u, -PI).powi(power).im;
        Complex64::new((-(-u).exp()).exp() * im, 0.0)
    })
    .with_envelope(envelope);
    let beyond_one = IntegralKernel::new(Domain::SemiInfiniteExp, |s: f64| {
        let im = Complex64::new(s.ln_1p(), -PI).powi(power).im;
        Complex64::new(im, 0.0)
    })
    .with_envelope(envelope);

    let lower = integrate_semiinfinite_exp(&near_zero, &inner)?;
    let upper = integrate_semiinfinite_exp(&beyond_one, &inner)?;
    let e_inv = (-1.0f64).exp();

    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let prefactor = sign / (PI * factorial);
    let value = prefactor * (lower.value.re + e_inv * upper.value.re);
    let abs_error_estimate = prefactor.abs() * (lower.abs_error_estimate + e_inv * upper.abs_error_estimate);
    if !(abs_error_estimate <= config.tol) {
        return Err(Error::QuadratureFailure { estimate: abs_error_estimate, tol: config.tol });
    }
    Ok(RecipGammaCoeff { n, value, abs_error_estimate, evals: lower.evals + upper.evals })
}

/// The first `K` coefficients `a_1..a_K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalGammaCoeffs {
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
}

impl ReciprocalGammaCoeffs {
    pub fn compute(k: usize, config: &QuadratureConfig) -> Result<Self> {
        let mut values = Vec::with_capacity(k);
        let mut error_estimates = Vec::with_capacity(k);
        for n in 1..=k {
            let c = recip_gamma_coeff(n, config)?;
            values.push(c.value);
            error_estimates.push(c.abs_error_estimate);
        }
        Ok(ReciprocalGammaCoeffs { values, error_estimates })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

/// Six-term large-`|z|` expansion of `log(1/Gamma(z))`.
pub fn recip_gamma_log_asymptotic(z: Complex64) -> Result<Complex64> {
    if z.norm() < 10.0 || z.arg().abs() > PI / 2.0 {
        return Err(Error::DomainError(format!(
            "asymptotic expansion is used for |z| >= 10, |arg z| <= pi/2; got {z}"
        )));
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    Ok(-z * z.ln() + z + 0.5 * (z / (2.0 * PI)).ln() - inv / 12.0 + inv * inv2 / 360.0 - inv * inv2 * inv2 / 1260.0)
}

/// `sum_{m<=N} w^m / Gamma(a m + b + 1)` with its tail bound
/// `|w|^(N+1) / Gamma(a(N+1)+b+1) * e^|w|`.
pub fn mittag_leffler_kernel(w: Complex64, a: u32, b: u32, n_max: usize) -> Result<SeriesValue> {
    if a == 0 {
        return Err(Error::InvalidParameter("Mittag-Leffler order a must be >= 1".into()));
    }
    let a = a as usize;
    let b = b as usize;
    // term = w^m / (a m + b)!
    let mut term = Complex64::new((1..=b).fold(1.0, |acc, k| acc / k as f64), 0.0);
    let mut sum = term;
    for m in 0..n_max {
        let base = a * m + b;
        let mut next = term * w;
        for k in 1..=a {
            next /= (base + k) as f64;
        }
        term = next;
        sum += term;
    }
    // next term magnitude, times e^|w|
    let mut bound = term.norm() * w.norm();
    for k in 1..=a {
        bound /= (a * n_max + b + k) as f64;
    }
    Ok(SeriesValue { value: sum, tail_bound: bound * w.norm().exp() })
}

/// Number of Mittag-Leffler terms needed for a tail bound below `tol`.
pub fn mittag_leffler_terms(r: f64, a: u32, b: u32, tol: f64) -> usize {
    let (a, b) = (a.max(1) as usize, b as usize);
    let mut log_term = -(1..=b).map(|k| (k as f64).ln()).sum::<f64>();
    let log_r = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
    for m in 0..100_000 {
        let base = a * m + b;
        log_term += log_r - (1..=a).map(|k| ((base + k) as f64).ln()).sum::<f64>();
        if log_term + r < tol.ln() {
            return m;
        }
    }
    100_000
}

fn erf_taylor(x: Complex64) -> Complex64 {
    // (2/sqrt(pi)) sum (-1)^k x^(2k+1) / (k! (2k+1))
    let x2 = x * x;
    let mut power = x; // (-1)^k x^(2k+1) / k!
    let mut sum = x;
    let mut k = 0usize;
    loop {
        k += 1;
        power *= -x2 / k as f64;
        let term = power / (2 * k + 1) as f64;
        sum += term;
        if k as f64 > x2.norm() && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        if k > 2000 {
            break;
        }
    }
    sum * (2.0 / PI.sqrt())
}

/// `erfc(x)` by the Laplace continued fraction (modified Lentz), `Re x > 0`.
fn erfc_continued_fraction(x: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..5000 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Complex error function for `|x| <= 8`.
///
/// Uses the Taylor series where its cancellation is mild (`|x| <= 3` or
/// `|Re x| <= 2.1`), and `1 - erfc` from the continued fraction otherwise.
pub fn erf_complex(x: Complex64) -> Result<Complex64> {
    if !(x.norm() <= 8.0) {
        return Err(Error::DomainError(format!("erf is supported for |x| <= 8, got {x}")));
    }
    if x.norm() <= 3.0 || x.re.abs() <= 2.1 {
        return Ok(erf_taylor(x));
    }
    if x.re < 0.0 {
        Ok(-(1.0 - erfc_continued_fraction(-x)))
    } else {
        Ok(1.0 - erfc_continued_fraction(x))
    }
}

/// `I0(2 sqrt z) = sum z^n / (n!)^2`, truncated after `z^N`, with tail bound
/// `|z|^(N+1) / ((N+1)!)^2 * e^(2 sqrt|z|)`.
pub fn bessel_i0_series(z: Complex64, n_max: usize) -> SeriesValue {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut bound = 1.0;
    for n in 1..=n_max {
        term *= z / ((n * n) as f64);
        sum += term;
    }
    for n in 1..=n_max + 1 {
        bound *= z.norm() / ((n * n) as f64);
    }
    SeriesValue { value: sum, tail_bound: bound * (2.0 * z.norm().sqrt()).exp() }
}

/// `n!_(a)`: `n (n-a) (n-2a) ...`, with `0!_(a) = 1` and `n!_(a) = n` for
/// `1 <= n <= a`.
pub fn multifactorial(n: u64, a: u64) -> Result<u128> {
    if a == 0 {
        return Err(Error::InvalidParameter("multifactorial step a must be >= 1".into()));
    }
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 0 {
        acc = acc.checked_mul(k as u128).ok_or_else(|| Error::Overflow(format!("{n}!_({a})")))?;
        if k <= a {
            break;
        }
        k -= a;
    }
    Ok(acc)
}

/// Exact `C(2n, n)`.
pub fn central_binomial(n: u64) -> Result<u128> {
    let mut acc: u128 = 1;
    for k in 1..=n as u128 {
        // C(2k, k) = C(2k-2, k-1) * 2 (2k - 1) / k
        acc = acc.checked_mul(2 * (2 * k - 1)).ok_or_else(|| Error::Overflow(format!("C({}, {n})", 2 * n)))? / k;
    }
    Ok(acc)
}

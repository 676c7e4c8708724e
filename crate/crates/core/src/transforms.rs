//! Integral transforms between generating functions of a sequence.
//!
//! Every transform takes a sequence, a point and a quadrature config and
//! returns a [`TransformOutput`] whose error estimate combines the
//! quadrature estimate with a bound on any series truncation used to
//! evaluate `F` or `F^` along the path.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{oracle_sum, OracleResult};
use crate::quadrature::{
    integrate_log_endpoint, integrate_oscillatory_line, integrate_periodic, integrate_semiinfinite_exp,
    integrate_semiinfinite_gauss, Domain, Envelope, IntegralKernel, IntegrationResult, QuadratureConfig,
};
use crate::series::{CoefficientSequence, ComplexFn, Growth, SeriesFamily};
use crate::special::{erf_complex, mittag_leffler_kernel, mittag_leffler_terms};

/// Factor between the printed `F::_{2,1}` kernel and its target series.
pub const MULTIFACTORIAL_2_1_CORRECTION: f64 = 1.253_314_137_315_500_3; // sqrt(pi/2)

/// Largest truncation order the transforms will build for `F` or `F^`.
const MAX_SERIES_TERMS: usize = 100_000;
/// Cap on the panel refinement near singularities.
const MAX_PANELS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformOutput {
    pub family: SeriesFamily,
    pub z: Complex64,
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: String,
    pub config: QuadratureConfig,
    pub evals: usize,
    pub oracle_value: Option<Complex64>,
    pub abs_diff: Option<f64>,
    /// Uncorrected value for kernels shipped with a correction constant.
    pub raw_value: Option<Complex64>,
}

impl TransformOutput {
    pub fn with_oracle(mut self, oracle: &OracleResult) -> Self {
        self.oracle_value = Some(oracle.value);
        self.abs_diff = Some((self.value - oracle.value).norm());
        self
    }
}

/// Which form of the polylogarithm-type kernel to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolylogForm {
    /// `((-1)^(r-1)/(r-1)!) * integral_0^1 log^(r-1)(t) F(tz) dt`
    LogKernel,
    /// `(1/(r-1)!) * integral_0^inf t^(r-1) F(e^(-t) z) e^(-t) dt`
    ExpMoment,
}

/// A transform together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "transform", rename_all = "snake_case")]
pub enum TransformId {
    LaplaceBorel,
    Fourier,
    Hankel {
        c: f64,
    },
    DoublyExp {
        c: f64,
    },
    Polylog {
        r: u32,
        form: PolylogForm,
    },
    /// Exp-moment form with the `1/r!` prefactor in place of `1/(r-1)!`.
    PolylogExpMomentPrinted {
        r: u32,
    },
    SquareSeries {
        q: Complex64,
    },
    CentralBinomialEgf,
    CentralBinomialOgf,
    /// The arcsin kernel paired with the `n! C(2n,n)` target.
    CentralBinomialEgfAsLabelled,
    /// The erf kernel paired with the `C(2n,n)` target.
    CentralBinomialOgfAsLabelled,
    MittagLeffler {
        a: u32,
        b: u32,
    },
    Multifactorial20,
    Multifactorial21,
    /// The `(2n+1)!!` kernel without its correction constant.
    Multifactorial21Printed,
}

impl TransformId {
    pub fn family(&self) -> SeriesFamily {
        match *self {
            TransformId::LaplaceBorel => SeriesFamily::Ogf,
            TransformId::Fourier | TransformId::Hankel { .. } => SeriesFamily::Egf,
            TransformId::DoublyExp { .. } => SeriesFamily::DoublyExp,
            TransformId::Polylog { r, .. } | TransformId::PolylogExpMomentPrinted { r } => SeriesFamily::Polylog { r },
            TransformId::SquareSeries { q } => SeriesFamily::SquareSeries { q },
            TransformId::CentralBinomialEgf | TransformId::CentralBinomialEgfAsLabelled => {
                SeriesFamily::CentralBinomialEgf
            }
            TransformId::CentralBinomialOgf | TransformId::CentralBinomialOgfAsLabelled => {
                SeriesFamily::CentralBinomialOgf
            }
            TransformId::MittagLeffler { a, b } => SeriesFamily::MittagLeffler { a, b },
            TransformId::Multifactorial20 => SeriesFamily::Multifactorial { a: 2, d: 0 },
            TransformId::Multifactorial21 | TransformId::Multifactorial21Printed => {
                SeriesFamily::Multifactorial { a: 2, d: 1 }
            }
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            TransformId::LaplaceBorel => Domain::SemiInfiniteExp,
            TransformId::Hankel { .. } | TransformId::DoublyExp { .. } => Domain::RealLineOscillatory,
            TransformId::Polylog { form: PolylogForm::LogKernel, .. } => Domain::UnitInterval,
            TransformId::Polylog { .. } | TransformId::PolylogExpMomentPrinted { .. } => Domain::SemiInfiniteExp,
            TransformId::SquareSeries { .. } => Domain::SemiInfiniteGauss,
            _ => Domain::Periodic,
        }
    }

    pub fn default_config(&self) -> QuadratureConfig {
        let mut config = QuadratureConfig::for_domain(self.domain());
        if let TransformId::CentralBinomialOgf | TransformId::CentralBinomialEgfAsLabelled = self {
            // the arcsin kernel has radius 4, so aliasing decays like 4^(-N/4)
            config.nodes = 128;
        }
        config
    }

    pub fn run(&self, seq: &CoefficientSequence, z: Complex64, config: &QuadratureConfig) -> Result<TransformOutput> {
        match *self {
            TransformId::LaplaceBorel => laplace_borel(seq, z, config),
            TransformId::Fourier => ogf_to_egf_fourier(seq, z, config),
            TransformId::Hankel { c } => ogf_to_egf_hankel(seq, z, c, config),
            TransformId::DoublyExp { c } => doubly_exponential_transform(seq, z, c, config),
            TransformId::Polylog { r, form } => polylog_transform(seq, z, r, form, config),
            TransformId::PolylogExpMomentPrinted { r } => polylog_exp_moment_printed(seq, z, r, config),
            TransformId::SquareSeries { q } => square_series_transform(seq, z, q, config),
            TransformId::CentralBinomialEgf => central_binomial_egf(seq, z, config),
            TransformId::CentralBinomialOgf => central_binomial_ogf(seq, z, config),
            TransformId::CentralBinomialEgfAsLabelled => central_binomial_egf_as_labelled(seq, z, config),
            TransformId::CentralBinomialOgfAsLabelled => central_binomial_ogf_as_labelled(seq, z, config),
            TransformId::MittagLeffler { a, b } => mittag_leffler_egf(seq, z, a, b, config),
            TransformId::Multifactorial20 => multifactorial_egf_2_0(seq, z, config),
            TransformId::Multifactorial21 => multifactorial_egf_2_1(seq, z, config),
            TransformId::Multifactorial21Printed => multifactorial_egf_2_1_printed(seq, z, config),
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluating F and F^ along a path

/// A closed form, or a truncated polynomial evaluated by Horner's rule.
enum SeriesEval<'a> {
    Closed(&'a ComplexFn),
    Poly(Vec<Complex64>),
}

impl SeriesEval<'_> {
    fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            SeriesEval::Closed(f) => f(w),
            SeriesEval::Poly(c) => c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a),
        }
    }
}

/// Smallest `N` with `tail(N) <= budget`.
fn terms_for(budget: f64, tail: impl Fn(usize) -> f64) -> Result<usize> {
    for n in 0..MAX_SERIES_TERMS {
        if tail(n) <= budget {
            return Ok(n);
        }
    }
    Err(Error::ToleranceUnreachable { tail: tail(MAX_SERIES_TERMS), tol: budget, terms: MAX_SERIES_TERMS })
}

/// `M x^(N+1) / (1 - x)`
fn geometric_tail(m: f64, x: f64, n: usize) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        m * x.powi(n as i32 + 1) / (1.0 - x)
    }
}

/// `M x^(N+1) / (N+1)! * e^x`
fn exponential_tail(m: f64, x: f64, n: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut t = m * x.exp();
    for k in 1..=n + 1 {
        t *= x / k as f64;
    }
    t
}

fn ogf_poly(seq: &CoefficientSequence, n: usize) -> SeriesEval<'static> {
    SeriesEval::Poly((0..=n).map(|k| seq.coeff(k)).collect())
}

fn egf_poly(seq: &CoefficientSequence, n: usize) -> SeriesEval<'static> {
    let mut inv_fact = 1.0;
    SeriesEval::Poly(
        (0..=n)
            .map(|k| {
                if k > 0 {
                    inv_fact /= k as f64;
                }
                seq.coeff(k) * inv_fact
            })
            .collect(),
    )
}

/// Radius of the disc on which `F` can be evaluated at all.
fn evaluable_radius(seq: &CoefficientSequence) -> f64 {
    if seq.ogf_closed_form().is_some() {
        seq.ogf_radius()
    } else {
        seq.growth().implied_radius()
    }
}

/// `F` on `|w| <= rmax` with a uniform truncation bound `<= budget`.
fn prepare_ogf(seq: &CoefficientSequence, rmax: f64, budget: f64) -> Result<(SeriesEval<'_>, f64)> {
    if let Some(f) = seq.ogf_closed_form() {
        if rmax < seq.ogf_radius() {
            return Ok((SeriesEval::Closed(f), 0.0));
        }
    }
    match seq.growth() {
        Growth::Geometric { m, r } if r * rmax < 1.0 => {
            let x = r * rmax;
            let n = terms_for(budget, |n| geometric_tail(m, x, n))?;
            Ok((ogf_poly(seq, n), geometric_tail(m, x, n)))
        }
        Growth::Factorial { .. } if rmax == 0.0 => Ok((ogf_poly(seq, 0), 0.0)),
        _ => Err(Error::DivergentEvaluation(format!(
            "OGF of `{}` cannot be evaluated on |w| <= {rmax} (radius {})",
            seq.id(),
            evaluable_radius(seq)
        ))),
    }
}

fn divergent(msg: String) -> Error {
    Error::DivergentEvaluation(msg)
}

fn check_point(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("z must be finite, got {z}")))
    }
}

fn accept(value: Complex64, estimate: f64, tol: f64) -> Result<()> {
    if !(value.re.is_finite() && value.im.is_finite()) || !estimate.is_finite() || estimate > tol {
        Err(Error::QuadratureFailure { estimate, tol })
    } else {
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn output(
    family: SeriesFamily,
    z: Complex64,
    value: Complex64,
    estimate: f64,
    method: &str,
    config: &QuadratureConfig,
    evals: usize,
) -> Result<TransformOutput> {
    accept(value, estimate, config.tol)?;
    Ok(TransformOutput {
        family,
        z,
        value,
        abs_error_estimate: estimate,
        method: method.to_string(),
        config: *config,
        evals,
        oracle_value: None,
        abs_diff: None,
        raw_value: None,
    })
}

// ---------------------------------------------------------------------------
// Laplace-Borel

/// `F(z) = integral_0^inf F^(tz) e^(-t) dt`.
pub fn laplace_borel(seq: &CoefficientSequence, z: Complex64, config: &QuadratureConfig) -> Result<TransformOutput> {
    check_point(z)?;
    config.validate()?;
    let (m, r) = match seq.growth() {
        Growth::Geometric { m, r } => (m, r),
        Growth::Factorial { m } if z.norm() == 0.0 => (m, 0.0),
        Growth::Factorial { .. } => {
            return Err(divergent(format!("OGF of `{}` has zero radius of convergence", seq.id())))
        }
    };
    let x = r * z.norm();
    if x >= 1.0 {
        return Err(divergent(format!("R|z| = {x} >= 1 for `{}`", seq.id())));
    }
    // |F^(tz)| e^(-t) <= M e^(-(1-x) t): stretch the range to match
    let stretch = 1.0 / (1.0 - x);
    let mut cfg = *config;
    cfg.truncation_t = config.truncation_t * stretch;
    cfg.panels = ((config.panels as f64 * stretch).ceil() as usize).max(1);

    let budget = 0.5 * config.tol;
    let (egf, series_error) = match seq.egf_closed_form() {
        Some(f) => (SeriesEval::Closed(f), 0.0),
        None => {
            // truncating F^ after z^N leaves exactly the OGF tail
            let n = terms_for(budget, |n| geometric_tail(m, x, n))?;
            (egf_poly(seq, n), geometric_tail(m, x, n))
        }
    };
    // |F^(tz)| grows like e^(x t); past ~700 it no longer fits in an f64
    if x * cfg.truncation_t > 700.0 {
        return Err(Error::Overflow(format!(
            "F^(tz) along [0, {:.0}] for R|z| = {x}; |z| is too close to the radius",
            cfg.truncation_t
        )));
    }
    let mut inner = cfg;
    inner.tol = f64::INFINITY;
    let kernel = IntegralKernel::new(Domain::SemiInfiniteExp, |t: f64| egf.eval(z * t)).with_envelope(Envelope {
        c: m,
        p: 0.0,
        s: x,
    });
    let res = integrate_semiinfinite_exp(&kernel, &inner)?;
    output(SeriesFamily::Ogf, z, res.value, res.abs_error_estimate + series_error, "laplace-borel", &cfg, res.evals)
}

// ---------------------------------------------------------------------------
// Hadamard products on a circle

/// Radius `|s|` of the circle on which `F(s e^(-it))` is sampled when
/// computing `sum f_n k_n z^n = mean_t F(s e^(-it)) K((z/s) e^(it))`.
///
/// `s = z` is the plain formula. When `|z|` approaches the radius of `F`
/// (or exceeds it) the circle is pulled in so both factors stay analytic
/// with room to spare; for an entire kernel the radius also balances the
/// aliasing of the half-resolution rule used for the error estimate.
pub fn contour_scale(z: Complex64, rho_f: f64, rho_k: f64, half_nodes: usize) -> Result<Complex64> {
    let r = z.norm();
    let phase = if r > 0.0 { z / r } else { Complex64::new(1.0, 0.0) };
    if rho_f == 0.0 {
        return Err(divergent("the OGF has zero radius of convergence".into()));
    }
    let radius = if r == 0.0 {
        if rho_f.is_infinite() {
            1.0
        } else {
            (rho_f / 2.0).min(1.0)
        }
    } else if rho_f.is_infinite() {
        r
    } else if rho_k.is_infinite() {
        let m = half_nodes.max(1) as i32;
        let plain = r.min(rho_f / 2.0);
        // aliasing of the half-resolution rule from either factor
        let ln_m_fact: f64 = (1..=m).map(|k| (k as f64).ln()).sum();
        let alias = (m as f64 * (plain / rho_f).ln()).max(m as f64 * (r / plain).ln() - ln_m_fact);
        if alias < -36.0 {
            plain
        } else {
            let balanced = (r * rho_f * std::f64::consts::E / m as f64).sqrt();
            plain.min(balanced)
        }
    } else {
        if r >= rho_f * rho_k {
            return Err(divergent(format!("|z| = {r} is outside the product of the radii {rho_f} * {rho_k}")));
        }
        r.min((r * rho_f / rho_k).sqrt())
    };
    Ok(phase * radius)
}

struct Hadamard {
    mean: Complex64,
    estimate: f64,
    evals: usize,
}

/// `mean_t F(s e^(-it)) K((z/s) e^(it))` by the periodic rule.
fn hadamard_mean<K>(
    seq: &CoefficientSequence,
    z: Complex64,
    kernel: K,
    kernel_radius: f64,
    config: &QuadratureConfig,
) -> Result<Hadamard>
where
    K: Fn(Complex64) -> Complex64 + Sync,
{
    check_point(z)?;
    config.validate()?;
    let s = contour_scale(z, evaluable_radius(seq), kernel_radius, config.nodes / 2)?;
    let ratio = z / s;
    // rough sup of |K| on its circle, to size the series budget
    let k_max = (0..32)
        .map(|j| kernel(ratio * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 32.0)).norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let (f, f_tail) = prepare_ogf(seq, s.norm(), 0.5 * config.tol / k_max)?;
    let integrand = IntegralKernel::new(Domain::Periodic, |t: f64| {
        let e = Complex64::from_polar(1.0, t);
        f.eval(s * e.conj()) * kernel(ratio * e)
    });
    let res = integrate_periodic(&integrand, config.nodes)?;
    Ok(Hadamard { mean: res.value, estimate: res.abs_error_estimate + f_tail * k_max, evals: res.evals + 32 })
}

fn exp_kernel(w: Complex64) -> Complex64 {
    w.exp()
}

/// `F^(z) = (1/2pi) integral_{-pi}^{pi} F(z e^(-it)) e^(e^(it)) dt`.
pub fn ogf_to_egf_fourier(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = hadamard_mean(seq, z, exp_kernel, f64::INFINITY, config)?;
    output(SeriesFamily::Egf, z, h.mean, h.estimate, "fourier", config, h.evals)
}

/// `sum f_n z^n / Gamma(a n + b + 1)` with the Mittag-Leffler kernel.
pub fn mittag_leffler_egf(
    seq: &CoefficientSequence,
    z: Complex64,
    a: u32,
    b: u32,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let family = SeriesFamily::MittagLeffler { a, b };
    family.validate()?;
    let s = contour_scale(z, evaluable_radius(seq), f64::INFINITY, config.nodes / 2)?;
    let terms = mittag_leffler_terms((z / s).norm(), a, b, 1e-18);
    let kernel = |w: Complex64| {
        mittag_leffler_kernel(w, a, b, terms).map(|v| v.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let h = hadamard_mean(seq, z, kernel, f64::INFINITY, config)?;
    output(family, z, h.mean, h.estimate, "fourier-mittag-leffler", config, h.evals)
}

/// `sum f_n z^n / (2^n n!)` with kernel `e^(w/2)`.
pub fn multifactorial_egf_2_0(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = hadamard_mean(seq, z, |w: Complex64| (0.5 * w).exp(), f64::INFINITY, config)?;
    output(
        SeriesFamily::Multifactorial { a: 2, d: 0 },
        z,
        h.mean,
        h.estimate,
        "fourier-multifactorial-2-0",
        config,
        h.evals,
    )
}

/// The printed `F::_{2,1}` kernel `e^(w/2) erf(sqrt(w/2)) / sqrt(w)`, which
/// equals `sqrt(2/pi) sum w^n / (2n+1)!!`. Even in `sqrt(w)`, so there is
/// no branch cut.
pub fn multifactorial_2_1_kernel(w: Complex64) -> Complex64 {
    if w.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..40 {
            term *= w / (2 * n + 1) as f64;
            sum += term;
        }
        return sum * (2.0 / PI).sqrt();
    }
    let root = w.sqrt();
    match erf_complex(root / 2f64.sqrt()) {
        Ok(e) => (0.5 * w).exp() * e / root,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

fn multifactorial_2_1_raw(seq: &CoefficientSequence, z: Complex64, config: &QuadratureConfig) -> Result<Hadamard> {
    // sqrt(w/2) must stay inside the erf domain |x| <= 8
    let s = contour_scale(z, evaluable_radius(seq), f64::INFINITY, config.nodes / 2)?;
    if (z / s).norm() > 128.0 {
        return Err(Error::DomainError(format!("|z/s| = {} is too large for the erf kernel", (z / s).norm())));
    }
    hadamard_mean(seq, z, multifactorial_2_1_kernel, f64::INFINITY, config)
}

/// `sum f_n z^n / (2n+1)!!`: printed kernel times `sqrt(pi/2)`.
pub fn multifactorial_egf_2_1(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = multifactorial_2_1_raw(seq, z, config)?;
    let mut out = output(
        SeriesFamily::Multifactorial { a: 2, d: 1 },
        z,
        h.mean * MULTIFACTORIAL_2_1_CORRECTION,
        h.estimate * MULTIFACTORIAL_2_1_CORRECTION,
        "fourier-multifactorial-2-1",
        config,
        h.evals,
    )?;
    out.raw_value = Some(h.mean);
    Ok(out)
}

/// The printed `F::_{2,1}` kernel without correction.
pub fn multifactorial_egf_2_1_printed(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = multifactorial_2_1_raw(seq, z, config)?;
    let mut out = output(
        SeriesFamily::Multifactorial { a: 2, d: 1 },
        z,
        h.mean,
        h.estimate,
        "fourier-multifactorial-2-1-printed",
        config,
        h.evals,
    )?;
    out.raw_value = Some(h.mean);
    Ok(out)
}

/// `[sqrt(4-w) + sqrt(w) asin(sqrt(w)/2)] / (4-w)^(3/2) = (1/4) sum w^n / C(2n,n)`.
pub fn arcsin_kernel(w: Complex64) -> Complex64 {
    let four_minus = 4.0 - w;
    let root = w.sqrt();
    (four_minus.sqrt() + root * (0.5 * root).asin()) / four_minus.powf(1.5)
}

/// `2 + e^(w/4) sqrt(pi w) erf(sqrt(w)/2) = 2 sum w^n / (n! C(2n,n))`.
pub fn erf_kernel(w: Complex64) -> Complex64 {
    let root = w.sqrt();
    match erf_complex(0.5 * root) {
        Ok(e) => 2.0 + (0.25 * w).exp() * (PI * w).sqrt() * e,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

fn erf_kernel_mean(seq: &CoefficientSequence, z: Complex64, config: &QuadratureConfig) -> Result<Hadamard> {
    let s = contour_scale(z, evaluable_radius(seq), f64::INFINITY, config.nodes / 2)?;
    if (z / s).norm() > 256.0 {
        return Err(Error::DomainError(format!("|z/s| = {} is too large for the erf kernel", (z / s).norm())));
    }
    // (1/4pi) integral over [-pi, pi] = mean / 2
    let h = hadamard_mean(seq, z, erf_kernel, f64::INFINITY, config)?;
    Ok(Hadamard { mean: 0.5 * h.mean, estimate: 0.5 * h.estimate, evals: h.evals })
}

fn arcsin_kernel_mean(seq: &CoefficientSequence, z: Complex64, config: &QuadratureConfig) -> Result<Hadamard> {
    // (2/pi) integral over [-pi, pi] = 4 * mean
    let h = hadamard_mean(seq, z, arcsin_kernel, 4.0, config)?;
    Ok(Hadamard { mean: 4.0 * h.mean, estimate: 4.0 * h.estimate, evals: h.evals })
}

/// `sum f_n z^n / (n! C(2n,n))` with the erf kernel.
pub fn central_binomial_egf(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = erf_kernel_mean(seq, z, config)?;
    output(SeriesFamily::CentralBinomialEgf, z, h.mean, h.estimate, "fourier-erf-kernel", config, h.evals)
}

/// `sum f_n z^n / C(2n,n)` with the arcsin kernel.
pub fn central_binomial_ogf(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = arcsin_kernel_mean(seq, z, config)?;
    output(SeriesFamily::CentralBinomialOgf, z, h.mean, h.estimate, "fourier-arcsin-kernel", config, h.evals)
}

/// The arcsin kernel reported against the `n! C(2n,n)` target.
pub fn central_binomial_egf_as_labelled(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = arcsin_kernel_mean(seq, z, config)?;
    output(
        SeriesFamily::CentralBinomialEgf,
        z,
        h.mean,
        h.estimate,
        "fourier-arcsin-kernel-as-labelled",
        config,
        h.evals,
    )
}

/// The erf kernel reported against the `C(2n,n)` target.
pub fn central_binomial_ogf_as_labelled(
    seq: &CoefficientSequence,
    z: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let h = erf_kernel_mean(seq, z, config)?;
    output(SeriesFamily::CentralBinomialOgf, z, h.mean, h.estimate, "fourier-erf-kernel-as-labelled", config, h.evals)
}

// ---------------------------------------------------------------------------
// Hankel line integrals

/// Panel count keeping the panel width below `distance`, the gap between
/// the real line and the nearest singularity of the integrand.
fn refined_panels(config: &QuadratureConfig, distance: f64) -> usize {
    let needed = (config.truncation_t / distance).ceil();
    if needed.is_finite() {
        (needed as usize).clamp(config.panels, MAX_PANELS.max(config.panels))
    } else {
        MAX_PANELS.max(config.panels)
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("c must be finite and > 0, got {c}")))
    }
}

/// `(1/2pi) integral (c+it)^(-(n+1)) e^(c+it) dt = 1/n!`.
pub fn recip_gamma_hankel_term(n: u32, c: f64, config: &QuadratureConfig) -> Result<IntegrationResult> {
    check_c(c)?;
    config.validate()?;
    let mut cfg = *config;
    cfg.panels = refined_panels(config, c);
    cfg.tol = 2.0 * PI * config.tol;
    let power = -(n as i32 + 1);
    let kernel = IntegralKernel::new(Domain::RealLineOscillatory, |t: f64| {
        let w = Complex64::new(c, t);
        w.powi(power) * w.exp()
    });
    let mut res = integrate_oscillatory_line(&kernel, &cfg)?;
    res.value /= 2.0 * PI;
    res.abs_error_estimate /= 2.0 * PI;
    Ok(res)
}

/// `F^(z) = (1/2pi) integral (e^(c+it)/(c+it)) F(z/(c+it)) dt`.
pub fn ogf_to_egf_hankel(
    seq: &CoefficientSequence,
    z: Complex64,
    c: f64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    check_point(z)?;
    check_c(c)?;
    config.validate()?;
    let rmax = z.norm() / c;
    let rho = evaluable_radius(seq);
    if rmax >= rho {
        return Err(divergent(format!("|z|/c = {rmax} is outside the radius {rho} of the OGF of `{}`", seq.id())));
    }
    let budget = 0.5 * config.tol;
    // Truncating F after w^N leaves exactly the EGF tail, since the
    // integral maps w^n to 1/n!.
    let (f, series_error) = match (seq.ogf_closed_form(), seq.growth()) {
        (Some(f), _) if rmax < seq.ogf_radius() => (SeriesEval::Closed(f), 0.0),
        (_, Growth::Geometric { m, r }) => {
            let x = r * z.norm();
            let n = terms_for(budget, |n| exponential_tail(m, x, n))?;
            (ogf_poly(seq, n), exponential_tail(m, x, n))
        }
        _ => return Err(divergent(format!("OGF of `{}` has zero radius", seq.id()))),
    };
    let mut cfg = *config;
    cfg.panels = refined_panels(config, c - z.norm() / rho);
    let mut inner = cfg;
    inner.tol = f64::INFINITY;
    let kernel = IntegralKernel::new(Domain::RealLineOscillatory, |t: f64| {
        let w = Complex64::new(c, t);
        w.exp() / w * f.eval(z / w)
    });
    let res = integrate_oscillatory_line(&kernel, &inner)?;
    output(
        SeriesFamily::Egf,
        z,
        res.value / (2.0 * PI),
        res.abs_error_estimate / (2.0 * PI) + series_error,
        "hankel",
        &cfg,
        res.evals,
    )
}

/// `sum f_n z^n / (n!)^2 = (1/2pi) integral (e^(c+it)/(c+it)) F^(z/(c+it)) dt`.
pub fn doubly_exponential_transform(
    seq: &CoefficientSequence,
    z: Complex64,
    c: f64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    check_point(z)?;
    check_c(c)?;
    config.validate()?;
    let budget = 0.5 * config.tol;
    let rmax = z.norm() / c;
    // Truncating F^ after w^N leaves sum_{n>N} f_n z^n/(n!)^2, bounded here
    // by the (larger) EGF tail.
    let (f, series_error, distance) = match (seq.egf_closed_form(), seq.growth()) {
        (Some(f), Growth::Geometric { .. }) => (SeriesEval::Closed(f), 0.0, c),
        (Some(f), Growth::Factorial { .. }) if rmax < 1.0 => (SeriesEval::Closed(f), 0.0, c - z.norm()),
        (_, Growth::Geometric { m, r }) => {
            let x = r * z.norm();
            let n = terms_for(budget, |n| exponential_tail(m, x, n))?;
            (egf_poly(seq, n), exponential_tail(m, x, n), c)
        }
        (_, Growth::Factorial { m }) => {
            let x = z.norm();
            let n = terms_for(budget, |n| exponential_tail(m, x, n))?;
            (egf_poly(seq, n), exponential_tail(m, x, n), c)
        }
    };
    let mut cfg = *config;
    cfg.panels = refined_panels(config, distance);
    let mut inner = cfg;
    inner.tol = f64::INFINITY;
    let kernel = IntegralKernel::new(Domain::RealLineOscillatory, |t: f64| {
        let w = Complex64::new(c, t);
        w.exp() / w * f.eval(z / w)
    });
    let res = integrate_oscillatory_line(&kernel, &inner)?;
    output(
        SeriesFamily::DoublyExp,
        z,
        res.value / (2.0 * PI),
        res.abs_error_estimate / (2.0 * PI) + series_error,
        "hankel-doubly-exponential",
        &cfg,
        res.evals,
    )
}

// ---------------------------------------------------------------------------
// Polylogarithm-type series

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `F` on the segment `[0, z]`, allowing the endpoint on the boundary
/// circle when a closed form exists and the kernel vanishes there.
fn prepare_segment(seq: &CoefficientSequence, z: Complex64, r: u32, budget: f64) -> Result<(SeriesEval<'_>, f64)> {
    let rz = z.norm();
    if let Some(f) = seq.ogf_closed_form() {
        if rz < seq.ogf_radius() || (rz == seq.ogf_radius() && r >= 2) {
            return Ok((SeriesEval::Closed(f), 0.0));
        }
    }
    prepare_ogf(seq, rz, budget)
}

/// Bound on `|F(w)|` for `|w| <= rho`.
fn ogf_sup(seq: &CoefficientSequence, rho: f64) -> f64 {
    match seq.growth() {
        Growth::Geometric { m, r } if r * rho < 1.0 => m / (1.0 - r * rho),
        _ => f64::INFINITY,
    }
}

fn polylog_integral(
    seq: &CoefficientSequence,
    z: Complex64,
    r: u32,
    form: PolylogForm,
    config: &QuadratureConfig,
) -> Result<(Complex64, f64, usize)> {
    check_point(z)?;
    SeriesFamily::Polylog { r }.validate()?;
    config.validate()?;
    let (f, series_error) = prepare_segment(seq, z, r, 0.5 * config.tol)?;
    // F(z e^(-u)) is singular where |z| e^(-u) meets the radius, at least
    // ln(rho/|z|) from u = 0 in the complex u-plane
    let gap = match f {
        SeriesEval::Closed(_) => (seq.ogf_radius() / z.norm()).ln(),
        _ => f64::INFINITY,
    };
    let mut inner = *config;
    inner.tol = f64::INFINITY;
    let near_zero = ogf_sup(seq, z.norm() * (-config.truncation_t).exp());
    let norm = factorial(r - 1);
    let res = match form {
        PolylogForm::LogKernel => {
            let kernel = IntegralKernel::new(Domain::UnitInterval, |t: f64| f.eval(z * t))
                .with_envelope(Envelope::constant(near_zero))
                .with_endpoint_gap(gap);
            let res = integrate_log_endpoint(&kernel, r, &inner)?;
            let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
            IntegrationResult {
                value: res.value * (sign / norm),
                abs_error_estimate: res.abs_error_estimate / norm,
                ..res
            }
        }
        PolylogForm::ExpMoment => {
            let power = r as i32 - 1;
            let kernel = IntegralKernel::new(Domain::SemiInfiniteExp, |t: f64| t.powi(power) * f.eval(z * (-t).exp()))
                .with_envelope(Envelope { c: near_zero, p: power as f64, s: 0.0 })
                .with_endpoint_gap(gap);
            let res = integrate_semiinfinite_exp(&kernel, &inner)?;
            IntegrationResult { value: res.value / norm, abs_error_estimate: res.abs_error_estimate / norm, ..res }
        }
    };
    // both kernels have total mass 1, so the truncation bound carries over
    Ok((res.value, res.abs_error_estimate + series_error, res.evals))
}

/// `sum f_n z^n / (n+1)^r` by either kernel form.
pub fn polylog_transform(
    seq: &CoefficientSequence,
    z: Complex64,
    r: u32,
    form: PolylogForm,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let (value, estimate, evals) = polylog_integral(seq, z, r, form, config)?;
    let method = match form {
        PolylogForm::LogKernel => "polylog-log-kernel",
        PolylogForm::ExpMoment => "polylog-exp-moment",
    };
    output(SeriesFamily::Polylog { r }, z, value, estimate, method, config, evals)
}

/// Exp-moment form with the `1/r!` prefactor.
pub fn polylog_exp_moment_printed(
    seq: &CoefficientSequence,
    z: Complex64,
    r: u32,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    let (value, estimate, evals) = polylog_integral(seq, z, r, PolylogForm::ExpMoment, config)?;
    let scale = 1.0 / r as f64;
    output(SeriesFamily::Polylog { r }, z, value * scale, estimate * scale, "polylog-exp-moment-printed", config, evals)
}

// ---------------------------------------------------------------------------
// Square series

/// `sum f_n q^(n^2) z^n` from a Gaussian-weighted integral of `F`.
///
/// With `s = sqrt(2 Log q)`, `q^(n^2) = (1/sqrt(2pi)) integral e^(n s t)
/// e^(-t^2/2) dt` over the real line. The line is rotated by `theta` so
/// that `s t` is purely imaginary (then `F` is sampled on a fixed circle)
/// and shifted by `i tau` so that circle has radius at most half the
/// radius of `F`. Since `arg s` lies in `(pi/4, 3pi/4)`, `|theta| < pi/4`
/// and the Gaussian still decays along the rotated line.
pub fn square_series_transform(
    seq: &CoefficientSequence,
    z: Complex64,
    q: Complex64,
    config: &QuadratureConfig,
) -> Result<TransformOutput> {
    check_point(z)?;
    let family = SeriesFamily::SquareSeries { q };
    family.validate()?;
    config.validate()?;
    if !((q * z).norm() < 1.0) {
        return Err(divergent(format!("square series needs |qz| < 1, got {}", (q * z).norm())));
    }
    let s = (2.0 * q.ln()).sqrt();
    let alpha = s.norm();
    let theta = PI / 2.0 - s.arg();
    let kappa = (2.0 * theta).cos();
    let rotation = Complex64::from_polar(1.0, theta);
    let rotation2 = rotation * rotation;

    let rho = evaluable_radius(seq);
    let tau = if rho.is_finite() && z.norm() > rho / 2.0 { (z.norm() / (rho / 2.0)).ln() / alpha } else { 0.0 };
    let shifted = z * (-alpha * tau).exp();
    let reach = shifted.norm();
    if reach >= rho {
        return Err(divergent(format!(
            "square-series circle |w| = {reach} is outside the radius {rho} of `{}`",
            seq.id()
        )));
    }
    // |integrand| <= lift * sup|F| * e^(drift v) against e^(-v^2/2)
    let lift = 2.0 * (0.5 * kappa * tau * tau).exp() / kappa.sqrt();
    let drift = (tau * (2.0 * theta).sin()).abs() / kappa.sqrt();
    let series_scale = lift * (0.5 * drift * drift).exp();
    let (f, f_tail) = prepare_ogf(seq, reach, 0.5 * config.tol / series_scale)?;
    let mut inner = *config;
    inner.tol = f64::INFINITY;
    let pre = rotation / kappa.sqrt();
    let kernel = IntegralKernel::new(Domain::SemiInfiniteGauss, |v: f64| {
        let u = v / kappa.sqrt();
        let turn = Complex64::from_polar(1.0, alpha * u);
        // e^(-e^(2i theta) u^2 / 2) e^(v^2/2), unit modulus
        let chirp = (-0.5 * (rotation2 * u * u - v * v)).exp();
        let side = |b: f64| {
            let w = if b > 0.0 { shifted * turn } else { shifted * turn.conj() };
            let gauss = (-0.5 * rotation2 * Complex64::new(-tau * tau, 2.0 * tau * b * u)).exp();
            f.eval(w) * gauss
        };
        pre * chirp * (side(1.0) + side(-1.0))
    })
    .with_envelope(Envelope { c: lift * ogf_sup(seq, reach).min(1e300), p: 0.0, s: drift });
    let res = integrate_semiinfinite_gauss(&kernel, &inner)?;
    let norm = 1.0 / (2.0 * PI).sqrt();
    output(
        family,
        z,
        res.value * norm,
        res.abs_error_estimate * norm + series_scale * f_tail,
        "square-series-gauss",
        config,
        res.evals,
    )
}

// ---------------------------------------------------------------------------
// q-integral

/// `sum_{i<=N} g(z^i) z^i` with tail `sup|g| |z|^(N+1) / (1 - |z|)`.
pub fn jackson_q_integral<G>(g: G, z: Complex64, n_max: usize, sup_g: f64) -> Result<crate::series::SeriesValue>
where
    G: Fn(Complex64) -> Complex64,
{
    let r = z.norm();
    if !(r < 1.0) {
        return Err(divergent(format!("the q-integral needs |z| < 1, got {r}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=n_max {
        sum += g(p) * p;
        p *= z;
    }
    Ok(crate::series::SeriesValue { value: sum, tail_bound: sup_g * r.powi(n_max as i32 + 1) / (1.0 - r) })
}

// ---------------------------------------------------------------------------
// Calibration

/// Constant factor between a kernel's output and the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub transform: TransformId,
    pub sequence: String,
    pub lambda: Complex64,
    pub sample_points: Vec<Complex64>,
    pub ratios: Vec<Complex64>,
    pub residual_spread: f64,
}

/// Estimate `lambda = mean(oracle / integral)` over `points` and reject
/// kernels whose ratios are not constant within `100 * tol`.
pub fn calibrate_kernel(
    id: TransformId,
    seq: &CoefficientSequence,
    points: &[Complex64],
    config: &QuadratureConfig,
) -> Result<CalibrationReport> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!("calibration needs at least 3 points, got {}", points.len())));
    }
    let oracle_tol = (config.tol * 1e-3).max(1e-15);
    let mut ratios = Vec::with_capacity(points.len());
    for &z in points {
        let t = id.run(seq, z, config)?;
        let o = oracle_sum(id.family(), seq, z, oracle_tol)?;
        if t.value.norm() == 0.0 {
            return Err(Error::InvalidParameter(format!("integral vanishes at z = {z}")));
        }
        ratios.push(o.value / t.value);
    }
    let lambda = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let residual_spread = ratios.iter().map(|r| (r - lambda).norm()).fold(0.0, f64::max);
    let report = CalibrationReport {
        transform: id,
        sequence: seq.id().to_string(),
        lambda,
        sample_points: points.to_vec(),
        ratios,
        residual_spread,
    };
    let threshold = 100.0 * config.tol;
    if !(residual_spread <= threshold) || !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::CalibrationMismatch { report: Box::new(report), threshold });
    }
    Ok(report)
}

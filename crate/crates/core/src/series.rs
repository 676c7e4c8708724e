//! Coefficient sequences, generating-function evaluation and truncated
//! power-series arithmetic.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CoeffFn = dyn Fn(usize) -> Complex64 + Send + Sync;
pub type ComplexFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;

/// Certified growth of a coefficient sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Growth {
    /// `|f_n| <= m * r^n` for every `n`.
    Geometric { m: f64, r: f64 },
    /// `|f_n| <= m * n!`; the OGF has zero radius but the EGF converges
    /// for `|z| < 1`.
    Factorial { m: f64 },
}

impl Growth {
    pub fn bound(&self, n: usize) -> f64 {
        match *self {
            Growth::Geometric { m, r } => {
                if r == 0.0 {
                    if n == 0 {
                        m
                    } else {
                        0.0
                    }
                } else {
                    m * r.powi(n as i32)
                }
            }
            Growth::Factorial { m } => m * (1..=n).fold(1.0, |acc, k| acc * k as f64),
        }
    }

    /// Radius of convergence implied by the bound alone.
    pub fn implied_radius(&self) -> f64 {
        match *self {
            Growth::Geometric { r: 0.0, .. } => f64::INFINITY,
            Growth::Geometric { r, .. } => 1.0 / r,
            Growth::Factorial { .. } => 0.0,
        }
    }
}

/// A sequence `{f_n}` with its growth certificate and optional closed forms
/// for `F(z) = sum f_n z^n` and `F^(z) = sum f_n z^n / n!`.
#[derive(Clone)]
pub struct CoefficientSequence {
    id: String,
    coeff: Arc<CoeffFn>,
    growth: Growth,
    ogf_closed_form: Option<Arc<ComplexFn>>,
    egf_closed_form: Option<Arc<ComplexFn>>,
    ogf_radius: f64,
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSequence")
            .field("id", &self.id)
            .field("growth", &self.growth)
            .field("ogf_radius", &self.ogf_radius)
            .field("ogf_closed_form", &self.ogf_closed_form.is_some())
            .field("egf_closed_form", &self.egf_closed_form.is_some())
            .finish()
    }
}

impl CoefficientSequence {
    pub fn new<F>(id: impl Into<String>, growth: Growth, coeff: F) -> Self
    where
        F: Fn(usize) -> Complex64 + Send + Sync + 'static,
    {
        CoefficientSequence {
            id: id.into(),
            coeff: Arc::new(coeff),
            growth,
            ogf_closed_form: None,
            egf_closed_form: None,
            ogf_radius: growth.implied_radius(),
        }
    }

    /// Attach a closed-form OGF valid on `|z| < radius`.
    pub fn with_ogf<F>(mut self, radius: f64, ogf: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.ogf_closed_form = Some(Arc::new(ogf));
        self.ogf_radius = radius;
        self
    }

    pub fn with_egf<F>(mut self, egf: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.egf_closed_form = Some(Arc::new(egf));
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        (self.coeff)(n)
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    /// The radius `sigma_f` inside which the OGF is analytic.
    pub fn ogf_radius(&self) -> f64 {
        self.ogf_radius
    }

    pub fn ogf_closed_form(&self) -> Option<&ComplexFn> {
        self.ogf_closed_form.as_deref()
    }

    pub fn egf_closed_form(&self) -> Option<&ComplexFn> {
        self.egf_closed_form.as_deref()
    }

    /// Look up one of the built-in sequences by id.
    pub fn builtin(id: &str) -> Option<Self> {
        let one = Complex64::new(1.0, 0.0);
        let seq = match id {
            "ones" => {
                CoefficientSequence::new("ones", Growth::Geometric { m: 1.0, r: 1.0 }, |_| Complex64::new(1.0, 0.0))
                    .with_ogf(1.0, move |z| one / (one - z))
                    .with_egf(|z| z.exp())
            }
            "alternating" => CoefficientSequence::new("alternating", Growth::Geometric { m: 1.0, r: 1.0 }, |n| {
                Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            })
            .with_ogf(1.0, move |z| one / (one + z))
            .with_egf(|z| (-z).exp()),
            // (n+1) <= 4.25 * 1.1^n, maximised near n = 9.5
            "natural" => CoefficientSequence::new("natural", Growth::Geometric { m: 4.25, r: 1.1 }, |n| {
                Complex64::new((n + 1) as f64, 0.0)
            })
            .with_ogf(1.0, move |z| one / ((one - z) * (one - z)))
            .with_egf(move |z| (one + z) * z.exp()),
            "fibonacci" => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                let psi = (1.0 - 5f64.sqrt()) / 2.0;
                CoefficientSequence::new("fibonacci", Growth::Geometric { m: 1.0 / phi, r: phi }, |n| {
                    Complex64::new(fibonacci(n), 0.0)
                })
                .with_ogf(1.0 / phi, move |z| z / (one - z - z * z))
                .with_egf(move |z| ((z * phi).exp() - (z * psi).exp()) / 5f64.sqrt())
            }
            "factorial" => CoefficientSequence::new("factorial", Growth::Factorial { m: 1.0 }, |n| {
                Complex64::new((1..=n).fold(1.0, |acc, k| acc * k as f64), 0.0)
            })
            .with_egf(move |z| one / (one - z)),
            "dirac" => CoefficientSequence::new("dirac", Growth::Geometric { m: 1.0, r: 0.0 }, |n| {
                Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0)
            })
            .with_ogf(f64::INFINITY, move |_| one)
            .with_egf(move |_| one),
            _ => return None,
        };
        Some(seq)
    }

    pub fn builtin_ids() -> &'static [&'static str] {
        &["ones", "alternating", "natural", "fibonacci", "factorial", "dirac"]
    }
}

fn fibonacci(n: usize) -> f64 {
    let (mut a, mut b) = (0.0f64, 1.0f64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// A value together with a certified bound on its truncation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Target series a transform or oracle produces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum SeriesFamily {
    /// `sum f_n z^n`
    Ogf,
    /// `sum f_n z^n / n!`
    Egf,
    /// `sum f_n z^n / (n!)^2`
    DoublyExp,
    /// `sum f_n z^n / (n+1)^r`
    Polylog { r: u32 },
    /// `sum f_n q^(n^2) z^n`
    SquareSeries { q: Complex64 },
    /// `sum f_n z^n / (n! C(2n,n))`
    CentralBinomialEgf,
    /// `sum f_n z^n / C(2n,n)`
    CentralBinomialOgf,
    /// `sum f_n z^n / Gamma(a n + b + 1)`
    MittagLeffler { a: u32, b: u32 },
    /// `sum f_n z^n / (a n + d)!_(a)`
    Multifactorial { a: u32, d: u32 },
    /// `1 + sum b_n z^n = prod (1 - z^j)^(-a_j)`
    EulerTransform,
}

impl SeriesFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SeriesFamily::Polylog { r: 0 } => Err(Error::InvalidParameter("polylog order r must be >= 1".into())),
            SeriesFamily::SquareSeries { q } if !(q.norm() < 1.0) || q.norm() == 0.0 => {
                Err(Error::InvalidParameter(format!("square series needs 0 < |q| < 1, got {q}")))
            }
            SeriesFamily::MittagLeffler { a, .. } | SeriesFamily::Multifactorial { a, .. } if a == 0 => {
                Err(Error::InvalidParameter("a must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Short name used on the command line.
    pub fn cli_name(&self) -> &'static str {
        match self {
            SeriesFamily::Ogf => "ogf",
            SeriesFamily::Egf => "egf",
            SeriesFamily::DoublyExp => "dexp",
            SeriesFamily::Polylog { .. } => "polylog",
            SeriesFamily::SquareSeries { .. } => "square",
            SeriesFamily::CentralBinomialEgf => "cbin-egf",
            SeriesFamily::CentralBinomialOgf => "cbin-ogf",
            SeriesFamily::MittagLeffler { .. } => "ml",
            SeriesFamily::Multifactorial { .. } => "mf",
            SeriesFamily::EulerTransform => "euler",
        }
    }
}

/// `sum_{n<=N} f_n z^n` with its geometric tail bound.
pub fn ogf_partial_sum(seq: &CoefficientSequence, z: Complex64, n_max: usize) -> Result<SeriesValue> {
    let x = match seq.growth() {
        Growth::Geometric { r, .. } => r * z.norm(),
        Growth::Factorial { .. } if z.norm() == 0.0 => 0.0,
        Growth::Factorial { .. } => {
            return Err(Error::DivergentEvaluation(format!("OGF of `{}` has zero radius of convergence", seq.id())))
        }
    };
    if x >= 1.0 {
        return Err(Error::DivergentEvaluation(format!("R|z| = {x} >= 1 for `{}` at z = {z}", seq.id())));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for n in 0..=n_max {
        sum += seq.coeff(n) * power;
        power *= z;
    }
    let m = match seq.growth() {
        Growth::Geometric { m, .. } | Growth::Factorial { m } => m,
    };
    let tail_bound = if x == 0.0 { 0.0 } else { m * x.powi(n_max as i32 + 1) / (1.0 - x) };
    Ok(SeriesValue { value: sum, tail_bound })
}

/// Evaluate `F(z)`: the closed form when the sequence carries one,
/// otherwise the truncated sum through `n_max`.
pub fn eval_ogf(seq: &CoefficientSequence, z: Complex64, n_max: usize) -> Result<SeriesValue> {
    match seq.ogf_closed_form() {
        Some(f) => Ok(SeriesValue { value: f(z), tail_bound: 0.0 }),
        None => ogf_partial_sum(seq, z, n_max),
    }
}

/// `sum_{n<=N} f_n z^n / n!` with its tail bound.
pub fn egf_partial_sum(seq: &CoefficientSequence, z: Complex64, n_max: usize) -> Result<SeriesValue> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term_scale = Complex64::new(1.0, 0.0); // z^n / n!
    for n in 0..=n_max {
        sum += seq.coeff(n) * term_scale;
        term_scale *= z / (n + 1) as f64;
    }
    let tail_bound = match seq.growth() {
        Growth::Geometric { m, r } => {
            let x = r * z.norm();
            if x == 0.0 {
                0.0
            } else {
                // M x^(N+1) / (N+1)! * e^x
                let mut t = m * x.exp();
                for k in 1..=n_max + 1 {
                    t *= x / k as f64;
                }
                t
            }
        }
        Growth::Factorial { m } => {
            let x = z.norm();
            if x >= 1.0 {
                return Err(Error::DivergentEvaluation(format!("EGF of `{}` needs |z| < 1, got {x}", seq.id())));
            }
            if x == 0.0 {
                0.0
            } else {
                m * x.powi(n_max as i32 + 1) / (1.0 - x)
            }
        }
    };
    Ok(SeriesValue { value: sum, tail_bound })
}

pub fn eval_egf(seq: &CoefficientSequence, z: Complex64, n_max: usize) -> Result<SeriesValue> {
    match seq.egf_closed_form() {
        Some(f) => Ok(SeriesValue { value: f(z), tail_bound: 0.0 }),
        None => egf_partial_sum(seq, z, n_max),
    }
}

/// A power series truncated after `z^order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("a truncated series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("series coefficients must be finite".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        TruncatedSeries { coeffs }
    }

    /// Cauchy product kept through `order`.
    pub fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

/// Full Cauchy product of two polynomials; the result has order
/// `s.order() + t.order()`.
pub fn series_mul(s: &TruncatedSeries, t: &TruncatedSeries) -> TruncatedSeries {
    s.mul_truncated(t, s.order() + t.order())
}

/// Formal logarithm through the order of `s`, principal branch for the
/// constant term.
pub fn series_log(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    let s0 = s.coeffs[0];
    if s0 == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroConstantTerm);
    }
    let order = s.order();
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    out[0] = s0.ln();
    // n L_n s_0 = n s_n - sum_{k=1}^{n-1} k L_k s_{n-k}
    for n in 1..=order {
        let mut acc = s.coeffs[n] * n as f64;
        for k in 1..n {
            acc -= out[k] * s.coeffs[n - k] * k as f64;
        }
        out[n] = acc / (s0 * n as f64);
    }
    Ok(TruncatedSeries { coeffs: out })
}

/// Formal exponential through the order of `t`.
pub fn series_exp(t: &TruncatedSeries) -> TruncatedSeries {
    let order = t.order();
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    out[0] = t.coeffs[0].exp();
    // n E_n = sum_{k=1}^{n} k t_k E_{n-k}
    for n in 1..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            acc += t.coeffs[k] * out[n - k] * k as f64;
        }
        out[n] = acc / n as f64;
    }
    TruncatedSeries { coeffs: out }
}

fn as_small_integer(c: Complex64) -> Option<i64> {
    if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() <= (1u64 << 20) as f64 {
        Some(c.re as i64)
    } else {
        None
    }
}

/// Coefficients `b_0..b_N` of `prod_{j<=N} (1 - z^j)^(-a_j)`.
///
/// Integer exponents go through repeated division or multiplication by
/// `1 - z^j`, which only adds and subtracts integers and so stays exact while
/// the coefficients fit in 53 bits. Other exponents use the binomial series.
pub fn euler_transform(a: &CoefficientSequence, n_max: usize) -> TruncatedSeries {
    let mut b = vec![Complex64::new(0.0, 0.0); n_max + 1];
    b[0] = Complex64::new(1.0, 0.0);
    for j in 1..=n_max {
        let aj = a.coeff(j);
        if aj == Complex64::new(0.0, 0.0) {
            continue;
        }
        match as_small_integer(aj) {
            Some(k) if k > 0 => {
                for _ in 0..k {
                    for n in j..=n_max {
                        let prev = b[n - j];
                        b[n] += prev;
                    }
                }
            }
            Some(k) => {
                for _ in 0..(-k) {
                    for n in (j..=n_max).rev() {
                        let prev = b[n - j];
                        b[n] -= prev;
                    }
                }
            }
            None => {
                // (1 - z^j)^(-a) = sum_k binom(a+k-1, k) z^(jk)
                let terms = n_max / j;
                let mut factor = vec![Complex64::new(0.0, 0.0); terms + 1];
                factor[0] = Complex64::new(1.0, 0.0);
                for k in 1..=terms {
                    factor[k] = factor[k - 1] * (aj + (k - 1) as f64) / k as f64;
                }
                let mut next = vec![Complex64::new(0.0, 0.0); n_max + 1];
                for (n, &bn) in b.iter().enumerate() {
                    for (k, &fk) in factor.iter().enumerate() {
                        let idx = n + j * k;
                        if idx > n_max {
                            break;
                        }
                        next[idx] += bn * fk;
                    }
                }
                b = next;
            }
        }
    }
    TruncatedSeries { coeffs: b }
}

/// Largest coefficient gap between `log(1 + B(z))` and `sum_k A(z^k)/k`
/// through order `N`, where `B` comes from [`euler_transform`].
pub fn euler_log_identity_check(a: &CoefficientSequence, n_max: usize) -> f64 {
    let b = euler_transform(a, n_max);
    let lhs = series_log(&b).expect("Euler transform has constant term 1");
    let mut rhs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for k in 1..=n_max {
        for m in 1..=n_max / k {
            rhs[k * m] += a.coeff(m) / k as f64;
        }
    }
    lhs.max_abs_diff(&TruncatedSeries { coeffs: rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn seq(id: &str) -> CoefficientSequence {
        CoefficientSequence::builtin(id).unwrap()
    }

    #[test]
    fn ogf_examples() {
        let v = eval_ogf(&seq("ones"), c(0.0), 64).unwrap();
        assert_eq!(v.value, c(1.0));
        assert_eq!(v.tail_bound, 0.0);
        let v = eval_ogf(&seq("ones"), c(0.5), 64).unwrap();
        assert!((v.value - c(2.0)).norm() < 1e-15);

        // brute-force sum of F_n 0.2^n through n = 64
        let s = ogf_partial_sum(&seq("fibonacci"), c(0.2), 64).unwrap();
        assert!((s.value.re - 0.263_157_894_736_842_1).abs() < 1e-15);
        assert!(s.tail_bound < 1e-20);
        let closed = eval_ogf(&seq("fibonacci"), c(0.2), 64).unwrap();
        assert!((closed.value - s.value).norm() <= s.tail_bound + 1e-16);
    }

    #[test]
    fn ogf_diverges_outside_growth_disc() {
        let plain = CoefficientSequence::new("plain", Growth::Geometric { m: 1.0, r: 1.0 }, |_| c(1.0));
        assert!(matches!(eval_ogf(&plain, c(1.0), 10), Err(Error::DivergentEvaluation(_))));
        assert!(matches!(eval_ogf(&seq("factorial"), c(0.1), 10), Err(Error::DivergentEvaluation(_))));
    }

    #[test]
    fn egf_examples() {
        let v = egf_partial_sum(&seq("ones"), c(1.0), 20).unwrap();
        assert!((v.value.re - std::f64::consts::E).abs() < 1e-14);
        assert!(v.tail_bound < 1e-18);
        for id in CoefficientSequence::builtin_ids() {
            let s = seq(id);
            let v = egf_partial_sum(&s, c(0.0), 10).unwrap();
            assert_eq!(v.value, s.coeff(0));
        }
        let v = egf_partial_sum(&seq("fibonacci"), c(1.0), 32).unwrap();
        assert!((v.value.re - 2.014_322_733_458_315_6).abs() < 1e-14);
    }

    #[test]
    fn series_ops_examples() {
        let one_plus_z = TruncatedSeries::from_real(&[1.0, 1.0]).unwrap();
        let sq = series_mul(&one_plus_z, &one_plus_z);
        assert_eq!(sq.coeffs(), &[c(1.0), c(2.0), c(1.0)]);

        let l = series_log(&TruncatedSeries::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap()).unwrap();
        let want = [0.0, 1.0, -0.5, 1.0 / 3.0];
        for (got, want) in l.coeffs().iter().zip(want) {
            assert!((got - c(want)).norm() < 1e-15);
        }
        assert!(matches!(series_log(&TruncatedSeries::from_real(&[0.0, 1.0]).unwrap()), Err(Error::ZeroConstantTerm)));
        assert!(TruncatedSeries::from_real(&[1.0, f64::NAN]).is_err());
        assert!(TruncatedSeries::new(vec![]).is_err());
    }

    #[test]
    fn euler_transform_examples() {
        let ones = CoefficientSequence::new("ones", Growth::Geometric { m: 1.0, r: 1.0 }, |_| c(1.0));
        let b = euler_transform(&ones, 9);
        let partitions = [1.0, 1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 15.0, 22.0, 30.0];
        for (got, want) in b.coeffs().iter().zip(partitions) {
            assert_eq!(*got, c(want));
        }

        let zeros = CoefficientSequence::new("zeros", Growth::Geometric { m: 0.0, r: 0.0 }, |_| c(0.0));
        let b = euler_transform(&zeros, 6);
        assert_eq!(b.coeff(0), c(1.0));
        assert!(b.coeffs()[1..].iter().all(|x| *x == c(0.0)));
        assert_eq!(euler_log_identity_check(&zeros, 6), 0.0);

        let first_only =
            CoefficientSequence::new("e1", Growth::Geometric { m: 1.0, r: 0.0 }, |n| c(if n == 1 { 1.0 } else { 0.0 }));
        assert_eq!(euler_transform(&first_only, 4).coeffs(), &[c(1.0); 5]);
    }

    #[test]
    fn euler_transform_negative_and_fractional_exponents() {
        // a_1 = -1 gives the polynomial 1 - z
        let neg = CoefficientSequence::new("neg", Growth::Geometric { m: 1.0, r: 0.0 }, |n| {
            c(if n == 1 { -1.0 } else { 0.0 })
        });
        let b = euler_transform(&neg, 4);
        assert_eq!(b.coeffs(), &[c(1.0), c(-1.0), c(0.0), c(0.0), c(0.0)]);

        // a_1 = 1/2: (1 - z)^(-1/2) = sum binom(2k,k) (z/4)^k
        let half = CoefficientSequence::new("half", Growth::Geometric { m: 0.5, r: 0.0 }, |n| {
            c(if n == 1 { 0.5 } else { 0.0 })
        });
        let b = euler_transform(&half, 4);
        let want = [1.0, 0.5, 0.375, 0.3125, 0.2734375];
        for (got, want) in b.coeffs().iter().zip(want) {
            assert!((got - c(want)).norm() < 1e-15);
        }
        assert!(euler_log_identity_check(&half, 12) < 1e-13);
    }

    #[test]
    fn euler_log_identity_examples() {
        let ones = CoefficientSequence::new("ones", Growth::Geometric { m: 1.0, r: 1.0 }, |_| c(1.0));
        assert!(euler_log_identity_check(&ones, 16) <= 1e-12);
        let a = CoefficientSequence::new("a", Growth::Geometric { m: 2.0, r: 0.0 }, |n| match n {
            1 => c(2.0),
            2 => c(1.0),
            _ => c(0.0),
        });
        assert!(euler_log_identity_check(&a, 12) <= 1e-12);
    }

    #[test]
    fn family_validation() {
        assert!(SeriesFamily::Polylog { r: 0 }.validate().is_err());
        assert!(SeriesFamily::SquareSeries { q: c(1.0) }.validate().is_err());
        assert!(SeriesFamily::SquareSeries { q: c(0.0) }.validate().is_err());
        assert!(SeriesFamily::MittagLeffler { a: 0, b: 1 }.validate().is_err());
        assert!(SeriesFamily::Multifactorial { a: 2, d: 1 }.validate().is_ok());
    }
}

//! Complex-valued quadrature for the integral shapes the transforms use.
//!
//! Every rule evaluates its integrand at a fixed node set (possibly in
//! parallel) and reduces in a fixed order: left to right inside a panel,
//! pairwise across panels. Results are therefore bit-identical regardless of
//! the size of the rayon pool.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which integral shape a kernel is meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `(1/2pi) * integral over [-pi, pi]` of a 2pi-periodic integrand.
    Periodic,
    /// `integral over [0, 1]` with a `log^(r-1)(t)` endpoint factor.
    UnitInterval,
    /// `integral over [0, inf)` against `e^(-t)`.
    SemiInfiniteExp,
    /// `integral over [0, inf)` against `e^(-t^2/2)`.
    SemiInfiniteGauss,
    /// `integral over (-inf, inf)` of `e^(it) h(t)` with `h(t) ~ 1/t`.
    RealLineOscillatory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss nodes per panel, or total nodes for the periodic rule.
    pub nodes: usize,
    pub panels: usize,
    /// Truncation point for unbounded domains.
    #[serde(rename = "truncation_T")]
    pub truncation_t: f64,
    /// Depth of the tail acceleration table.
    pub accel_depth: usize,
    pub tol: f64,
}

impl QuadratureConfig {
    pub fn for_domain(domain: Domain) -> Self {
        let truncation_t = match domain {
            Domain::Periodic => PI,
            Domain::UnitInterval | Domain::SemiInfiniteExp => 40.0,
            Domain::SemiInfiniteGauss => 8.0,
            Domain::RealLineOscillatory => 20.0,
        };
        QuadratureConfig { nodes: 64, panels: 8, truncation_t, accel_depth: 12, tol: 1e-8 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::InvalidParameter(format!("nodes must be >= 2, got {}", self.nodes)));
        }
        if self.panels == 0 {
            return Err(Error::InvalidParameter("panels must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {}", self.tol)));
        }
        if !(self.truncation_t > 0.0) || !self.truncation_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "truncation_T must be finite and > 0, got {}",
                self.truncation_t
            )));
        }
        Ok(())
    }

    /// Move the truncation point, keeping the panel width roughly fixed.
    pub fn with_truncation(mut self, t: f64) -> Self {
        let width = self.truncation_t / self.panels as f64;
        self.truncation_t = t;
        self.panels = ((t / width).ceil() as usize).max(1);
        self
    }
}

/// Bound `|g(t)| <= c * t^p * e^(s t)` on the discarded part of the domain.
///
/// For [`Domain::UnitInterval`] only `c` is used: it bounds `|g(t)|` for
/// `0 < t <= e^-T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub c: f64,
    pub p: f64,
    pub s: f64,
}

impl Envelope {
    pub fn constant(c: f64) -> Self {
        Envelope { c, p: 0.0, s: 0.0 }
    }
}

/// An integrand (or integrand factor, for weighted domains) together with
/// the domain it is written for.
pub struct IntegralKernel<F> {
    pub eval: F,
    pub domain: Domain,
    pub envelope: Option<Envelope>,
    /// Distance from the lower endpoint to the nearest singularity, when
    /// that is small; panels are then halved geometrically toward the
    /// endpoint. On the unit interval it is measured in `u = -ln t` from
    /// `t = 1`.
    pub endpoint_gap: Option<f64>,
}

impl<F> IntegralKernel<F>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    pub fn new(domain: Domain, eval: F) -> Self {
        IntegralKernel { eval, domain, envelope: None, endpoint_gap: None }
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = Some(envelope);
        self
    }

    pub fn with_endpoint_gap(mut self, gap: f64) -> Self {
        self.endpoint_gap = (gap > 0.0 && gap.is_finite()).then_some(gap);
        self
    }

    fn expect_domain(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "kernel written for {:?} passed to the {:?} rule",
                self.domain, domain
            )))
        }
    }
}

/// What the error estimate of an [`IntegrationResult`] is made of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    /// Difference against a coarser rule only (heuristic).
    RefinementDelta,
    /// Analytic truncation bound plus a refinement delta.
    TailBoundPlusRefinement,
    /// Residual of the tail acceleration plus the core refinement delta.
    AccelerationResidual,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evals: usize,
    pub kind: EstimateKind,
}

/// Gauss-Legendre rule on `[-1, 1]`, nodes ascending.
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(n).or_insert_with(|| Arc::new(GaussLegendre::compute(n))).clone()
}

pub(crate) fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

fn sequential_sum(values: &[Complex64]) -> Complex64 {
    values.iter().fold(Complex64::new(0.0, 0.0), |acc, &v| acc + v)
}

/// Gauss integral over each interval; one entry per interval.
fn gauss_intervals<F>(f: &F, intervals: &[(f64, f64)], rule: &GaussLegendre) -> Vec<Complex64>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let n = rule.len();
    let weighted: Vec<Complex64> = (0..intervals.len() * n)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = intervals[idx / n];
            let k = idx % n;
            let half = 0.5 * (b - a);
            f(a + half * (rule.nodes[k] + 1.0)) * rule.weights[k]
        })
        .collect();
    weighted.chunks(n).zip(intervals).map(|(chunk, &(a, b))| sequential_sum(chunk) * (0.5 * (b - a))).collect()
}

fn panels(a: f64, b: f64, count: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / count as f64;
    (0..count)
        .map(|p| {
            let lo = a + p as f64 * h;
            let hi = if p + 1 == count { b } else { a + (p + 1) as f64 * h };
            (lo, hi)
        })
        .collect()
}

/// Uniform panels, with the first one split by repeated halving until the
/// innermost panel is no wider than `gap`. Each graded panel then sits at
/// least its own width away from a singularity at distance `gap` below `a`.
fn graded_panels(a: f64, b: f64, count: usize, gap: Option<f64>) -> Vec<(f64, f64)> {
    let mut edges = panels(a, b, count);
    let Some(gap) = gap else {
        return edges;
    };
    let (lo, mut hi) = edges[0];
    if gap >= hi - lo {
        return edges;
    }
    let mut graded = Vec::new();
    while hi - lo > gap && graded.len() < 64 {
        let mid = lo + 0.5 * (hi - lo);
        graded.push((mid, hi));
        hi = mid;
    }
    graded.push((lo, hi));
    graded.reverse();
    graded.extend_from_slice(&edges[1..]);
    edges = graded;
    edges
}

/// Composite Gauss rule with `nodes` and `nodes/2` points per panel.
/// Returns (fine, |fine - coarse|, evals).
fn composite_with_delta<F>(
    f: &F,
    a: f64,
    b: f64,
    gap: Option<f64>,
    config: &QuadratureConfig,
) -> (Complex64, f64, usize)
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let edges = graded_panels(a, b, config.panels, gap);
    let fine_rule = gauss_legendre(config.nodes);
    let coarse_nodes = (config.nodes / 2).max(1);
    let coarse_rule = gauss_legendre(coarse_nodes);
    let fine = pairwise_sum(&gauss_intervals(f, &edges, &fine_rule));
    let coarse = pairwise_sum(&gauss_intervals(f, &edges, &coarse_rule));
    let evals = edges.len() * (config.nodes + coarse_nodes);
    (fine, (fine - coarse).norm(), evals)
}

/// `(1/2pi) * integral_{-pi}^{pi} f(t) dt` by the N-point trapezoid rule.
///
/// The error estimate is `|Q(N) - Q(N/2)|`; for even `N` the coarse rule
/// reuses every other node.
pub fn integrate_periodic<F>(kernel: &IntegralKernel<F>, n: usize) -> Result<IntegrationResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    kernel.expect_domain(Domain::Periodic)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("periodic rule needs at least 2 nodes, got {n}")));
    }
    let node = |j: usize, count: usize| -PI + 2.0 * PI * j as f64 / count as f64;
    let values: Vec<Complex64> = (0..n).into_par_iter().map(|j| (kernel.eval)(node(j, n))).collect();
    let fine = sequential_sum(&values) / n as f64;
    let half = n / 2;
    let (coarse, evals) = if n % 2 == 0 {
        let even: Vec<Complex64> = values.iter().step_by(2).copied().collect();
        (sequential_sum(&even) / half as f64, n)
    } else {
        let extra: Vec<Complex64> = (0..half).into_par_iter().map(|j| (kernel.eval)(node(j, half))).collect();
        (sequential_sum(&extra) / half as f64, n + half)
    };
    Ok(IntegrationResult {
        value: fine,
        abs_error_estimate: (fine - coarse).norm(),
        evals,
        kind: EstimateKind::RefinementDelta,
    })
}

/// Upper bound on `integral_T^inf c t^p e^(s t) e^(-t) dt`.
pub fn exp_tail_bound(env: &Envelope, t: f64) -> f64 {
    let lambda = 1.0 - env.s;
    if !(lambda > 0.0) {
        return f64::INFINITY;
    }
    let a = env.p + 1.0;
    let y = lambda * t;
    // Gamma(a, y) <= y^(a-1) e^(-y) * y / (y - a + 1)  for a >= 1, y > a - 1
    let upper_gamma = if a >= 1.0 {
        if y <= a - 1.0 {
            return f64::INFINITY;
        }
        ((a - 1.0) * y.ln() - y).exp() * y / (y - a + 1.0)
    } else {
        ((a - 1.0) * y.ln() - y).exp()
    };
    env.c * upper_gamma / lambda.powf(a)
}

/// Upper bound on `integral_T^inf c e^(s t) e^(-t^2/2) dt`.
pub fn gauss_tail_bound(env: &Envelope, t: f64) -> f64 {
    if t <= env.s {
        return f64::INFINITY;
    }
    env.c * (env.s * t - 0.5 * t * t).exp() / (t - env.s)
}

fn finish(result: IntegrationResult, tol: f64) -> Result<IntegrationResult> {
    if result.abs_error_estimate.is_finite() && result.abs_error_estimate <= tol {
        Ok(result)
    } else {
        Err(Error::QuadratureFailure { estimate: result.abs_error_estimate, tol })
    }
}

/// `integral_0^inf g(t) e^(-t) dt` for a kernel holding `g`.
pub fn integrate_semiinfinite_exp<F>(kernel: &IntegralKernel<F>, config: &QuadratureConfig) -> Result<IntegrationResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    kernel.expect_domain(Domain::SemiInfiniteExp)?;
    config.validate()?;
    let t_max = config.truncation_t;
    let weighted = |t: f64| (kernel.eval)(t) * (-t).exp();
    let (value, delta, mut evals) = composite_with_delta(&weighted, 0.0, t_max, kernel.endpoint_gap, config);
    let (tail, kind) = match &kernel.envelope {
        Some(env) => (exp_tail_bound(env, t_max), EstimateKind::TailBoundPlusRefinement),
        None => {
            evals += 1;
            (weighted(t_max).norm(), EstimateKind::RefinementDelta)
        }
    };
    finish(IntegrationResult { value, abs_error_estimate: tail + delta, evals, kind }, config.tol)
}

/// `integral_0^inf g(t) e^(-t^2/2) dt` for a kernel holding `g`.
pub fn integrate_semiinfinite_gauss<F>(
    kernel: &IntegralKernel<F>,
    config: &QuadratureConfig,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    kernel.expect_domain(Domain::SemiInfiniteGauss)?;
    config.validate()?;
    let t_max = config.truncation_t;
    let weighted = |t: f64| (kernel.eval)(t) * (-0.5 * t * t).exp();
    let (value, delta, mut evals) = composite_with_delta(&weighted, 0.0, t_max, kernel.endpoint_gap, config);
    let (tail, kind) = match &kernel.envelope {
        Some(env) => (gauss_tail_bound(env, t_max), EstimateKind::TailBoundPlusRefinement),
        None => {
            evals += 1;
            (weighted(t_max).norm(), EstimateKind::RefinementDelta)
        }
    };
    finish(IntegrationResult { value, abs_error_estimate: tail + delta, evals, kind }, config.tol)
}

/// `integral_0^1 log^(r-1)(t) g(t) dt` via `t = e^(-u)`, which turns the
/// endpoint singularity into the weight `u^(r-1) e^(-u)` on `[0, inf)`.
pub fn integrate_log_endpoint<F>(
    kernel: &IntegralKernel<F>,
    r: u32,
    config: &QuadratureConfig,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    kernel.expect_domain(Domain::UnitInterval)?;
    if r == 0 {
        return Err(Error::InvalidParameter("log power r must be >= 1".into()));
    }
    let power = (r - 1) as i32;
    let substituted = IntegralKernel {
        eval: |u: f64| (kernel.eval)((-u).exp()) * (-u).powi(power),
        domain: Domain::SemiInfiniteExp,
        envelope: kernel.envelope.map(|env| Envelope { c: env.c, p: power as f64, s: 0.0 }),
        endpoint_gap: kernel.endpoint_gap,
    };
    integrate_semiinfinite_exp(&substituted, config)
}

/// Repeated averaging of neighbouring partial sums (Euler transformation).
/// Returns the final value and its residual.
fn euler_accelerate(partial_sums: &[Complex64], depth: usize) -> (Complex64, f64) {
    let mut row = partial_sums.to_vec();
    let mut previous_last = *row.last().expect("non-empty tail sequence");
    for _ in 0..depth {
        if row.len() < 3 {
            break;
        }
        previous_last = *row.last().unwrap();
        row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    let n = row.len();
    let last = row[n - 1];
    let along_row = if n >= 2 { (last - row[n - 2]).norm() } else { f64::INFINITY };
    let across_depth = if depth > 0 { (last - previous_last).norm() } else { 0.0 };
    (last, along_row.max(across_depth))
}

/// `integral_{-inf}^{inf} f(t) dt` for `f(t) = e^(it) h(t)`, `h(t) ~ lambda/t`.
///
/// The core `[-T, T]` uses composite Gauss panels. Each tail is cut into
/// half-periods of `e^(it)`, whose integrals alternate in sign, and the
/// partial sums are accelerated by repeated averaging to `accel_depth`.
pub fn integrate_oscillatory_line<F>(kernel: &IntegralKernel<F>, config: &QuadratureConfig) -> Result<IntegrationResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    kernel.expect_domain(Domain::RealLineOscillatory)?;
    config.validate()?;
    let t_max = config.truncation_t;
    let f = &kernel.eval;
    let (core, delta, core_evals) = composite_with_delta(f, -t_max, t_max, None, config);

    let pieces = 2 * config.accel_depth + 2;
    let mut intervals = Vec::with_capacity(2 * pieces);
    for k in 0..pieces {
        let lo = t_max + k as f64 * PI;
        intervals.push((lo, lo + PI));
    }
    for k in 0..pieces {
        let hi = -t_max - k as f64 * PI;
        intervals.push((hi - PI, hi));
    }
    let rule = gauss_legendre(config.nodes);
    let tail_pieces = gauss_intervals(f, &intervals, &rule);
    let accelerate = |pieces: &[Complex64]| {
        let partial: Vec<Complex64> = pieces
            .iter()
            .scan(Complex64::new(0.0, 0.0), |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        euler_accelerate(&partial, config.accel_depth)
    };
    let (right, right_res) = accelerate(&tail_pieces[..pieces]);
    let (left, left_res) = accelerate(&tail_pieces[pieces..]);

    finish(
        IntegrationResult {
            value: core + right + left,
            abs_error_estimate: delta + right_res + left_res,
            evals: core_evals + 2 * pieces * config.nodes,
            kind: EstimateKind::AccelerationResidual,
        },
        config.tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic<F: Fn(f64) -> Complex64 + Sync>(f: F) -> IntegralKernel<F> {
        IntegralKernel::new(Domain::Periodic, f)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        for deg in 0..16 {
            let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "degree {deg}: {got} vs {want}");
        }
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn periodic_examples() {
        for k in [1i32, 3, -7, 20] {
            let r = integrate_periodic(&periodic(|t| Complex64::new(0.0, k as f64 * t).exp()), 32).unwrap();
            assert!(r.value.norm() < 1e-14, "k = {k}: {}", r.value);
        }
        let r = integrate_periodic(&periodic(|_| Complex64::new(1.0, 0.0)), 16).unwrap();
        assert!((r.value - 1.0).norm() < 1e-15);
        let r = integrate_periodic(&periodic(|t| Complex64::new(0.0, t).exp().exp()), 32).unwrap();
        assert!((r.value - 1.0).norm() < 1e-12);
        assert_eq!(r.evals, 32);
        assert!(integrate_periodic(&periodic(|_| Complex64::new(1.0, 0.0)), 1).is_err());
    }

    #[test]
    fn periodic_odd_node_count_counts_extra_coarse_evals() {
        let r = integrate_periodic(&periodic(|t| Complex64::new(0.0, t).exp().exp()), 33).unwrap();
        assert_eq!(r.evals, 33 + 16);
        assert!((r.value - 1.0).norm() < 1e-12);
    }

    #[test]
    fn semiinfinite_exp_examples() {
        let cfg = QuadratureConfig::for_domain(Domain::SemiInfiniteExp);
        let one = IntegralKernel::new(Domain::SemiInfiniteExp, |_| Complex64::new(1.0, 0.0))
            .with_envelope(Envelope::constant(1.0));
        let r = integrate_semiinfinite_exp(&one, &cfg).unwrap();
        assert!((r.value - 1.0).norm() < 1e-12);
        assert_eq!(r.kind, EstimateKind::TailBoundPlusRefinement);

        let quartic = IntegralKernel::new(Domain::SemiInfiniteExp, |t: f64| Complex64::new(t.powi(4), 0.0))
            .with_envelope(Envelope { c: 1.0, p: 4.0, s: 0.0 });
        let r = integrate_semiinfinite_exp(&quartic, &cfg).unwrap();
        assert!((r.value - 24.0).norm() < 1e-10);

        let decaying = IntegralKernel::new(Domain::SemiInfiniteExp, |t: f64| Complex64::new((-t).exp(), 0.0))
            .with_envelope(Envelope::constant(1.0));
        let r = integrate_semiinfinite_exp(&decaying, &cfg).unwrap();
        assert!((r.value - 0.5).norm() < 1e-12);
    }

    #[test]
    fn semiinfinite_exp_reports_failure_when_tail_is_too_heavy() {
        let mut cfg = QuadratureConfig::for_domain(Domain::SemiInfiniteExp);
        cfg.truncation_t = 5.0;
        let one = IntegralKernel::new(Domain::SemiInfiniteExp, |_| Complex64::new(1.0, 0.0))
            .with_envelope(Envelope::constant(1.0));
        assert!(matches!(integrate_semiinfinite_exp(&one, &cfg), Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn wrong_domain_is_rejected() {
        let cfg = QuadratureConfig::for_domain(Domain::SemiInfiniteExp);
        let k = IntegralKernel::new(Domain::Periodic, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(integrate_semiinfinite_exp(&k, &cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn semiinfinite_gauss_examples() {
        let cfg = QuadratureConfig::for_domain(Domain::SemiInfiniteGauss);
        let one = IntegralKernel::new(Domain::SemiInfiniteGauss, |_| Complex64::new(1.0, 0.0))
            .with_envelope(Envelope::constant(1.0));
        let r = integrate_semiinfinite_gauss(&one, &cfg).unwrap();
        assert!((r.value.re - (PI / 2.0).sqrt()).abs() < 1e-10);

        let lin = IntegralKernel::new(Domain::SemiInfiniteGauss, |t: f64| Complex64::new(t, 0.0))
            .with_envelope(Envelope { c: 1.0, p: 0.0, s: 1.0 });
        let r = integrate_semiinfinite_gauss(&lin, &cfg).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-10);

        // Reference: e^(1/2) sqrt(2 pi) Phi(1) = 3.4770518117036945 (high-precision quadrature)
        let expo = IntegralKernel::new(Domain::SemiInfiniteGauss, |t: f64| Complex64::new(t.exp(), 0.0))
            .with_envelope(Envelope { c: 1.0, p: 0.0, s: 1.0 });
        let r = integrate_semiinfinite_gauss(&expo, &cfg).unwrap();
        assert!((r.value.re - 3.477_051_811_703_694_5).abs() < 1e-10);
    }

    #[test]
    fn log_endpoint_examples() {
        let cfg = QuadratureConfig::for_domain(Domain::UnitInterval);
        let one = IntegralKernel::new(Domain::UnitInterval, |_| Complex64::new(1.0, 0.0))
            .with_envelope(Envelope::constant(1.0));
        let r = integrate_log_endpoint(&one, 1, &cfg).unwrap();
        assert!((r.value - 1.0).norm() < 1e-12);
        let r = integrate_log_endpoint(&one, 2, &cfg).unwrap();
        assert!((r.value + 1.0).norm() < 1e-12);
        let lin = IntegralKernel::new(Domain::UnitInterval, |t: f64| Complex64::new(t, 0.0))
            .with_envelope(Envelope::constant(1.0));
        let r = integrate_log_endpoint(&lin, 2, &cfg).unwrap();
        assert!((r.value + 0.25).norm() < 1e-10);
    }

    fn hankel_integrand(c: f64, power: f64) -> impl Fn(f64) -> Complex64 + Sync {
        move |t: f64| {
            let w = Complex64::new(c, t);
            w.exp() / w.powf(power)
        }
    }

    #[test]
    fn oscillatory_examples() {
        let cfg = QuadratureConfig::for_domain(Domain::RealLineOscillatory);
        let k = IntegralKernel::new(Domain::RealLineOscillatory, hankel_integrand(1.0, 1.0));
        let r = integrate_oscillatory_line(&k, &cfg).unwrap();
        assert!((r.value - 2.0 * PI).norm() < 1e-6);
        let k = IntegralKernel::new(Domain::RealLineOscillatory, hankel_integrand(1.0, 3.0));
        let r = integrate_oscillatory_line(&k, &cfg).unwrap();
        assert!((r.value - PI).norm() < 1e-8);
        let k = IntegralKernel::new(Domain::RealLineOscillatory, hankel_integrand(2.0, 6.0));
        let r = integrate_oscillatory_line(&k, &cfg).unwrap();
        assert!((r.value - 2.0 * PI / 120.0).norm() < 1e-8);
        assert_eq!(r.kind, EstimateKind::AccelerationResidual);
    }

    #[test]
    fn oscillatory_without_acceleration_fails_on_slow_decay() {
        let mut cfg = QuadratureConfig::for_domain(Domain::RealLineOscillatory);
        cfg.accel_depth = 0;
        let k = IntegralKernel::new(Domain::RealLineOscillatory, hankel_integrand(1.0, 1.0));
        assert!(matches!(integrate_oscillatory_line(&k, &cfg), Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn euler_averaging_sums_alternating_harmonic() {
        // sum (-1)^k / (k+1) = ln 2
        let partial: Vec<Complex64> = (0..26)
            .scan(0.0, |acc, k| {
                *acc += if k % 2 == 0 { 1.0 } else { -1.0 } / (k + 1) as f64;
                Some(Complex64::new(*acc, 0.0))
            })
            .collect();
        let (value, residual) = euler_accelerate(&partial, 12);
        assert!((value.re - 2f64.ln()).abs() < 1e-9);
        assert!(residual < 1e-6);
    }

    #[test]
    fn tail_bounds_dominate_exact_tails() {
        // integral_T^inf e^-t = e^-T
        let b = exp_tail_bound(&Envelope::constant(1.0), 10.0);
        assert!(b >= (-10f64).exp());
        // integral_T^inf t^2 e^-t = (T^2 + 2T + 2) e^-T
        let b = exp_tail_bound(&Envelope { c: 1.0, p: 2.0, s: 0.0 }, 10.0);
        assert!(b >= 122.0 * (-10f64).exp());
        assert!(exp_tail_bound(&Envelope { c: 1.0, p: 0.0, s: 1.0 }, 10.0).is_infinite());
        assert!(gauss_tail_bound(&Envelope::constant(1.0), 4.0) > 0.0);
    }
}

//! Command-line front end: argument parsing, command dispatch and output.
//!
//! [`run`] never touches the process; it returns the exit code together with
//! everything that would be printed, so the binary is a thin wrapper.

pub mod record;

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genfn::oracle::INCONCLUSIVE_BUDGET;
use genfn::special::recip_gamma_coeff;
use genfn::transforms::calibrate_kernel;
use genfn::{
    compare, oracle_sum, CoefficientSequence, Complex64, Domain, Error, PolylogForm, QuadratureConfig, TransformId,
    TransformOutput, Verdict,
};
use serde_json::json;

pub use record::{
    fmt_f64, print_json, CoeffRow, ConvergeRow, Payload, RunRecord, SequenceInfo, TransformView, VerifyView,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "genfn", version, about = "Generating-function transforms checked against series oracles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one transform at one point.
    Transform(TransformArgs),
    /// Evaluate a transform and compare it with the oracle.
    Verify(VerifyArgs),
    /// Error against the oracle over a sweep of node counts.
    Converge(ConvergeArgs),
    /// Taylor coefficients of 1/Gamma from their integral representation.
    Coeffs(CoeffsArgs),
    /// Estimate the constant between a kernel and its target series.
    Calibrate(CalibrateArgs),
    /// List the builtin sequences.
    Sequences(OutputArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Ogf,
    Egf,
    Dexp,
    Polylog,
    Square,
    CbinEgf,
    CbinOgf,
    Ml,
    Mf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fourier,
    Hankel,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Log,
    Exp,
    /// Exp-moment form with the `1/r!` prefactor.
    ExpPrinted,
}

#[derive(Args, Debug)]
pub struct TargetArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value = "ones")]
    pub seq: String,
    #[arg(long, value_enum, default_value = "fourier")]
    pub method: MethodArg,
    /// Polylog order.
    #[arg(long)]
    pub r: Option<u32>,
    /// Square-series nome as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Option<Complex64>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Abscissa of the vertical line in the Hankel integral.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum, default_value = "log")]
    pub form: FormArg,
    /// Use the kernel exactly as labelled, without the swap that fixes it.
    #[arg(long)]
    pub as_labelled: bool,
    /// Skip the correction constant on the `(2n+1)!!` kernel.
    #[arg(long)]
    pub printed: bool,
}

#[derive(Args, Debug, Default)]
pub struct QuadArgs {
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub panels: Option<usize>,
    #[arg(long)]
    pub accel: Option<usize>,
    #[arg(long = "T")]
    pub truncation: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Scale the transform value by 1.01 before comparing.
    #[arg(long, hide = true)]
    pub corrupt_kernel: bool,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    /// Comma-separated node counts.
    #[arg(long, default_value = "8,16,32,64,128")]
    pub sweep: String,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    /// Number of coefficients a_1..a_K.
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Sample point `re,im`; repeat for each point (default 0.3, 0.5, 0.7).
    #[arg(long = "point", value_parser = parse_complex, allow_hyphen_values = true)]
    pub points: Vec<Complex64>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Exit code plus captured output streams.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

/// `re,im` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected re,im, got {s:?}")),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(z)
}

/// Parse `args` (without the program name) and execute.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let command = args.join(" ");
    let cli = match Cli::try_parse_from(std::iter::once("genfn".to_string()).chain(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(code, text)
            };
        }
    };
    let result = match &cli.command {
        Command::Transform(a) => cmd_transform(&command, a),
        Command::Verify(a) => cmd_verify(&command, a),
        Command::Converge(a) => cmd_converge(&command, a),
        Command::Coeffs(a) => cmd_coeffs(&command, a),
        Command::Calibrate(a) => cmd_calibrate(&command, a),
        Command::Sequences(a) => Ok(cmd_sequences(&command, a)),
    };
    result.unwrap_or_else(|e| error_outcome(&command, &e))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::MismatchedTarget(_) => EXIT_USAGE,
        Error::CalibrationMismatch { .. } => EXIT_FAIL,
        _ => EXIT_NUMERIC,
    }
}

fn error_outcome(command: &str, e: &Error) -> Outcome {
    let mut v = json!({
        "command": command,
        "error": e.kind(),
        "message": e.to_string(),
    });
    if let Error::CalibrationMismatch { report, threshold } = e {
        v["report"] = serde_json::to_value(report).expect("plain data");
        v["threshold"] = json!(threshold);
    }
    Outcome::ok(exit_code(e), print_json(&v) + "\n")
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn sequence(id: &str) -> genfn::Result<CoefficientSequence> {
    CoefficientSequence::builtin(id).ok_or_else(|| {
        usage(format!("unknown sequence {id:?}; builtins are {}", CoefficientSequence::builtin_ids().join(", ")))
    })
}

/// Map the family flags onto a concrete transform.
pub fn select_transform(t: &TargetArgs) -> genfn::Result<TransformId> {
    let c = t.c.unwrap_or(1.0);
    let id = match t.family {
        FamilyArg::Ogf => TransformId::LaplaceBorel,
        FamilyArg::Egf => match t.method {
            MethodArg::Fourier => TransformId::Fourier,
            MethodArg::Hankel => TransformId::Hankel { c },
        },
        FamilyArg::Dexp => TransformId::DoublyExp { c },
        FamilyArg::Polylog => {
            let r = t.r.ok_or_else(|| usage("--family polylog needs --r"))?;
            match t.form {
                FormArg::Log => TransformId::Polylog { r, form: PolylogForm::LogKernel },
                FormArg::Exp => TransformId::Polylog { r, form: PolylogForm::ExpMoment },
                FormArg::ExpPrinted => TransformId::PolylogExpMomentPrinted { r },
            }
        }
        FamilyArg::Square => TransformId::SquareSeries { q: t.q.ok_or_else(|| usage("--family square needs --q"))? },
        FamilyArg::CbinEgf if t.as_labelled => TransformId::CentralBinomialEgfAsLabelled,
        FamilyArg::CbinEgf => TransformId::CentralBinomialEgf,
        FamilyArg::CbinOgf if t.as_labelled => TransformId::CentralBinomialOgfAsLabelled,
        FamilyArg::CbinOgf => TransformId::CentralBinomialOgf,
        FamilyArg::Ml => {
            TransformId::MittagLeffler { a: t.a.ok_or_else(|| usage("--family ml needs --a"))?, b: t.b.unwrap_or(0) }
        }
        FamilyArg::Mf => match (t.a.unwrap_or(2), t.d.unwrap_or(0)) {
            (2, 0) => TransformId::Multifactorial20,
            (2, 1) if t.printed => TransformId::Multifactorial21Printed,
            (2, 1) => TransformId::Multifactorial21,
            (a, d) => {
                return Err(usage(format!("no multifactorial kernel for a = {a}, d = {d}; use a = 2, d in {{0, 1}}")))
            }
        },
    };
    id.family().validate()?;
    Ok(id)
}

fn apply_quad(mut config: QuadratureConfig, q: &QuadArgs) -> genfn::Result<QuadratureConfig> {
    if let Some(n) = q.nodes {
        config.nodes = n;
    }
    if let Some(p) = q.panels {
        config.panels = p;
    }
    if let Some(t) = q.truncation {
        config.truncation_t = t;
    }
    if let Some(a) = q.accel {
        config.accel_depth = a;
    }
    if let Some(tol) = q.tol {
        config.tol = tol;
    }
    config.validate()?;
    Ok(config)
}

fn oracle_tol(config: &QuadratureConfig) -> f64 {
    (config.tol * 1e-3).max(1e-15)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn record(command: &str, payload: Payload, wall_time_ms: f64) -> String {
    RunRecord { command: command.to_string(), payload, wall_time_ms }.to_json() + "\n"
}

fn csv_complex(z: Option<Complex64>) -> String {
    match z {
        Some(z) => format!("{},{}", fmt_f64(z.re), fmt_f64(z.im)),
        None => ",".to_string(),
    }
}

fn transform_csv(v: &TransformView) -> String {
    format!(
        "family,z_re,z_im,value_re,value_im,error_estimate,method,evals,oracle_re,oracle_im,abs_diff\n{},{},{},{},{},{},{},{}\n",
        v.family,
        csv_complex(Some(v.z)),
        csv_complex(Some(v.value)),
        fmt_f64(v.error_estimate),
        v.method,
        v.evals,
        csv_complex(v.oracle),
        v.abs_diff.map(fmt_f64).unwrap_or_default(),
    )
}

fn run_transform(
    target: &TargetArgs,
    z: Complex64,
    quad: &QuadArgs,
) -> genfn::Result<(CoefficientSequence, TransformOutput, f64)> {
    let seq = sequence(&target.seq)?;
    let id = select_transform(target)?;
    let config = apply_quad(id.default_config(), quad)?;
    let start = Instant::now();
    let out = id.run(&seq, z, &config)?;
    Ok((seq, out, elapsed_ms(start)))
}

pub fn cmd_transform(command: &str, a: &TransformArgs) -> genfn::Result<Outcome> {
    let (seq, mut out, ms) = run_transform(&a.target, a.z, &a.quad)?;
    // the oracle is informational here; a failure just leaves the field empty
    if let Ok(o) = oracle_sum(out.family, &seq, a.z, oracle_tol(&out.config)) {
        out = out.with_oracle(&o);
    }
    let view = TransformView::from(&out);
    let text = if a.output.csv { transform_csv(&view) } else { record(command, Payload::Transform(view), ms) };
    Ok(Outcome::ok(EXIT_OK, text))
}

pub fn cmd_verify(command: &str, a: &VerifyArgs) -> genfn::Result<Outcome> {
    let (seq, mut out, ms) = run_transform(&a.target, a.z, &a.quad)?;
    if a.corrupt_kernel {
        out.value *= 1.01;
    }
    let oracle = match oracle_sum(out.family, &seq, a.z, oracle_tol(&out.config)) {
        Err(Error::ToleranceUnreachable { .. }) => oracle_sum(out.family, &seq, a.z, INCONCLUSIVE_BUDGET)?,
        other => other?,
    };
    let out = out.with_oracle(&oracle);
    let verdict = compare(&out, &oracle)?;
    let view = VerifyView {
        verdict,
        transform_budget: out.abs_error_estimate,
        oracle_budget: oracle.tail_bound,
        transform: TransformView::from(&out),
        oracle_result: oracle,
    };
    let text = if a.output.csv {
        format!(
            "verdict,value_re,value_im,oracle_re,oracle_im,abs_diff,transform_budget,oracle_budget\n{},{},{},{},{},{}\n",
            verdict.as_str(),
            csv_complex(Some(out.value)),
            csv_complex(Some(oracle.value)),
            fmt_f64(out.abs_diff.unwrap_or(f64::NAN)),
            fmt_f64(view.transform_budget),
            fmt_f64(view.oracle_budget),
        )
    } else {
        record(command, Payload::Verify(view), ms)
    };
    let code = match verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome::ok(code, text))
}

fn parse_sweep(s: &str) -> genfn::Result<Vec<usize>> {
    let nodes = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|e| usage(format!("bad node count {p:?}: {e}"))))
        .collect::<genfn::Result<Vec<_>>>()?;
    if nodes.is_empty() {
        return Err(usage("--sweep needs at least one node count"));
    }
    Ok(nodes)
}

pub fn cmd_converge(command: &str, a: &ConvergeArgs) -> genfn::Result<Outcome> {
    let nodes = parse_sweep(&a.sweep)?;
    let seq = sequence(&a.target.seq)?;
    let id = select_transform(&a.target)?;
    let base = apply_quad(id.default_config(), &a.quad)?;
    let reference = oracle_sum(id.family(), &seq, a.z, 1e-15)?;
    let total = Instant::now();
    let mut rows = Vec::with_capacity(nodes.len());
    for n in nodes {
        let config = QuadratureConfig { nodes: n, ..base };
        config.validate()?;
        let start = Instant::now();
        // coarse rules are expected to miss the tolerance; rerun without the
        // acceptance check so the row still reports the actual error
        let out = match id.run(&seq, a.z, &config) {
            Err(Error::QuadratureFailure { .. }) => id.run(&seq, a.z, &QuadratureConfig { tol: f64::MAX, ..config })?,
            other => other?,
        };
        rows.push(ConvergeRow {
            nodes: n,
            abs_error: (out.value - reference.value).norm(),
            evals: out.evals,
            wall_ms: elapsed_ms(start),
        });
    }
    let text = if a.output.json {
        record(command, Payload::Converge { reference: reference.value, rows }, elapsed_ms(total))
    } else {
        let mut s = String::from("nodes,abs_error,evals,wall_ms\n");
        for r in &rows {
            s.push_str(&format!("{},{},{},{}\n", r.nodes, fmt_f64(r.abs_error), r.evals, fmt_f64(r.wall_ms)));
        }
        s
    };
    Ok(Outcome::ok(EXIT_OK, text))
}

pub fn cmd_coeffs(command: &str, a: &CoeffsArgs) -> genfn::Result<Outcome> {
    if a.k == 0 {
        return Err(usage("--k must be >= 1"));
    }
    let config = apply_quad(QuadratureConfig::for_domain(Domain::SemiInfiniteExp), &a.quad)?;
    let start = Instant::now();
    let rows = (1..=a.k)
        .map(|n| {
            recip_gamma_coeff(n, &config).map(|c| CoeffRow {
                n,
                a_n: c.value,
                error_estimate: c.abs_error_estimate,
                evals: c.evals,
            })
        })
        .collect::<genfn::Result<Vec<_>>>()?;
    let text = if a.output.json {
        record(command, Payload::Coeffs { rows }, elapsed_ms(start))
    } else {
        let mut s = String::from("n,a_n,error_estimate\n");
        for r in &rows {
            s.push_str(&format!("{},{},{}\n", r.n, fmt_f64(r.a_n), fmt_f64(r.error_estimate)));
        }
        s
    };
    Ok(Outcome::ok(EXIT_OK, text))
}

pub fn cmd_calibrate(command: &str, a: &CalibrateArgs) -> genfn::Result<Outcome> {
    let seq = sequence(&a.target.seq)?;
    let id = select_transform(&a.target)?;
    let config = apply_quad(id.default_config(), &a.quad)?;
    let points = if a.points.is_empty() {
        [0.3, 0.5, 0.7].iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        a.points.clone()
    };
    let start = Instant::now();
    let report = calibrate_kernel(id, &seq, &points, &config)?;
    Ok(Outcome::ok(EXIT_OK, record(command, Payload::Calibration(report), elapsed_ms(start))))
}

pub fn sequence_table() -> Vec<SequenceInfo> {
    CoefficientSequence::builtin_ids()
        .iter()
        .map(|id| {
            let seq = CoefficientSequence::builtin(id).expect("listed builtin");
            let radius = if seq.ogf_closed_form().is_some() { seq.ogf_radius() } else { seq.growth().implied_radius() };
            SequenceInfo {
                id: id.to_string(),
                growth: seq.growth(),
                ogf_radius: radius.is_finite().then_some(radius),
                closed_ogf: seq.ogf_closed_form().is_some(),
                closed_egf: seq.egf_closed_form().is_some(),
            }
        })
        .collect()
}

pub fn cmd_sequences(command: &str, a: &OutputArgs) -> Outcome {
    let sequences = sequence_table();
    let text = if a.json {
        record(command, Payload::Sequences { sequences }, 0.0)
    } else {
        let mut s = String::from("id,growth,m,r,ogf_radius,closed_ogf,closed_egf\n");
        for info in &sequences {
            let (kind, m, r) = match info.growth {
                genfn::Growth::Geometric { m, r } => ("geometric", m, fmt_f64(r)),
                genfn::Growth::Factorial { m } => ("factorial", m, String::new()),
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                info.id,
                kind,
                fmt_f64(m),
                r,
                info.ogf_radius.map(fmt_f64).unwrap_or_else(|| "inf".into()),
                info.closed_ogf,
                info.closed_egf
            ));
        }
        s
    };
    Outcome::ok(EXIT_OK, text)
}

use std::process::Command;

use genfn::{Complex64, QuadratureConfig, SeriesFamily, Verdict};
use genfn_cli::{fmt_f64, ConvergeRow, Payload, RunRecord, TransformView, VerifyView};
use proptest::prelude::*;
use serde_json::Value;

fn genfn(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_genfn")).args(args).output().expect("run genfn");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not JSON ({e}): {s}"))
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn transform_prints_the_documented_schema() {
    let (code, out) =
        genfn(&["transform", "--family", "egf", "--seq", "ones", "--z", "1,0", "--method", "fourier", "--nodes", "48"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["family"], "egf");
    assert_eq!(v["method"], "fourier");
    assert!(v["evals"].is_u64());
    assert!(v["error_estimate"].is_f64());
    assert!(v["abs_diff"].is_f64());
    assert_eq!(v["config"]["nodes"], 48);
    assert_eq!(complex(&v["z"]), Complex64::new(1.0, 0.0));
    assert!((complex(&v["value"]) - std::f64::consts::E).norm() < 1e-12);
    assert!((complex(&v["oracle"]) - std::f64::consts::E).norm() < 1e-10);
    assert!(v["command"].as_str().unwrap().starts_with("transform --family egf"));
    assert!(v["wall_time_ms"].is_f64());
}

#[test]
fn square_series_example() {
    let (code, out) = genfn(&["transform", "--family", "square", "--seq", "ones", "--z", "1,0", "--q", "0.5,0"]);
    assert_eq!(code, 0, "{out}");
    let value = complex(&json(&out)["value"]);
    assert!((value - 1.564_468_413_605_938_6).norm() < 1e-8, "{value}");
}

#[test]
fn floats_are_printed_with_seventeen_digits() {
    let (_, out) = genfn(&["transform", "--family", "ogf", "--seq", "ones", "--z", "0.5"]);
    let mantissas: Vec<&str> =
        out.split([',', '[', ']', ':', '{', '}']).filter(|t| t.contains('e') && t.parse::<f64>().is_ok()).collect();
    assert!(!mantissas.is_empty());
    for m in mantissas {
        let digits = m.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
        assert_eq!(digits, 17, "{m}");
    }
}

#[test]
fn numerical_failures_exit_3_with_error_json() {
    let (code, out) =
        genfn(&["transform", "--family", "egf", "--seq", "ones", "--z", "10,0", "--method", "hankel", "--c", "1"]);
    assert_eq!(code, 3);
    let v = json(&out);
    assert_eq!(v["error"], "DivergentEvaluation");
    assert!(v["message"].as_str().unwrap().contains("radius"));

    let (code, out) = genfn(&["transform", "--family", "ogf", "--seq", "factorial", "--z", "0.1"]);
    assert_eq!(code, 3);
    assert_eq!(json(&out)["error"], "DivergentEvaluation");
}

#[test]
fn flag_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["transform", "--family", "egf", "--z", "1,0", "--bogus"],
        &["transform", "--family", "nope", "--z", "1,0"],
        &["transform", "--family", "egf", "--z", "1,2,3"],
        &["transform", "--family", "egf"],
        &["transform", "--family", "egf", "--z", "1", "--seq", "primes"],
        &["transform", "--family", "polylog", "--z", "0.5"],
        &["transform", "--family", "square", "--z", "0.5", "--q", "1.5,0"],
        &["transform", "--family", "mf", "--a", "3", "--d", "1", "--z", "0.5"],
        &["transform", "--family", "egf", "--z", "1", "--nodes", "1"],
        &["transform", "--family", "egf", "--z", "1", "--json", "--csv"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, out) = genfn(args);
        assert_eq!(code, 2, "{args:?}: {out}");
    }
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let base = ["verify", "--family", "egf", "--seq", "ones", "--z", "1,0", "--method", "fourier", "--nodes", "48"];
    let (code, out) = genfn(&base);
    assert_eq!(code, 0, "{out}");
    let rec = RunRecord::from_json(&out).unwrap();
    let Payload::Verify(v) = rec.payload else { panic!("{out}") };
    assert_eq!(v.verdict, Verdict::Pass);
    assert!(v.transform_budget > 0.0 && v.oracle_budget > 0.0);

    let mut corrupt = base.to_vec();
    corrupt.push("--corrupt-kernel");
    let (code, out) = genfn(&corrupt);
    assert_eq!(code, 1, "{out}");
    assert_eq!(json(&out)["verdict"], "FAIL");

    let mut loose = base.to_vec();
    loose.extend(["--tol", "1e6"]);
    let (code, out) = genfn(&loose);
    assert_eq!(code, 4, "{out}");
    assert_eq!(json(&out)["verdict"], "INCONCLUSIVE");
}

#[test]
fn verify_passes_across_families() {
    let cases: &[&[&str]] = &[
        &["--family", "ogf", "--seq", "fibonacci", "--z", "0.2"],
        &["--family", "egf", "--seq", "natural", "--z", "0.4,0.3", "--method", "hankel"],
        &["--family", "dexp", "--seq", "factorial", "--z", "0.5"],
        &["--family", "polylog", "--r", "3", "--seq", "alternating", "--z", "0.5", "--form", "exp"],
        &["--family", "square", "--seq", "natural", "--z", "0.8", "--q", "0.3,0.4"],
        &["--family", "cbin-egf", "--seq", "ones", "--z", "2"],
        &["--family", "cbin-ogf", "--seq", "alternating", "--z", "1.5"],
        &["--family", "ml", "--a", "3", "--b", "1", "--seq", "ones", "--z", "2"],
        &["--family", "mf", "--a", "2", "--d", "1", "--seq", "ones", "--z", "1"],
    ];
    for args in cases {
        let mut full = vec!["verify"];
        full.extend_from_slice(args);
        let (code, out) = genfn(&full);
        assert_eq!(code, 0, "{args:?}: {out}");
    }
}

#[test]
fn converge_fourier_sweep_decays() {
    let (code, out) = genfn(&[
        "converge",
        "--family",
        "egf",
        "--seq",
        "ones",
        "--z",
        "1,0",
        "--method",
        "fourier",
        "--sweep",
        "8,16,32,64,128",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains('\r'));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("nodes,abs_error,evals,wall_ms"));
    let rows: Vec<(usize, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 4, "{l}");
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), [8, 16, 32, 64, 128]);
    // strictly decreasing until the rounding floor
    for w in rows.windows(2) {
        if w[0].1 > 1e-14 {
            assert!(w[1].1 < w[0].1, "{rows:?}");
        }
    }
    assert!(rows.last().unwrap().1 < 1e-12, "{rows:?}");
}

#[test]
fn converge_hankel_is_accurate_at_defaults() {
    let (code, out) = genfn(&[
        "converge", "--family", "egf", "--seq", "ones", "--z", "0.5", "--method", "hankel", "--sweep", "64", "--json",
    ]);
    assert_eq!(code, 0, "{out}");
    let Payload::Converge { rows, .. } = RunRecord::from_json(&out).unwrap().payload else { panic!("{out}") };
    assert_eq!(rows.len(), 1);
    assert!(rows[0].abs_error < 1e-6, "{rows:?}");
}

#[test]
fn converge_rejects_empty_sweep() {
    for sweep in ["", ",", "8,x"] {
        let (code, _) = genfn(&["converge", "--family", "egf", "--z", "1", "--sweep", sweep]);
        assert_eq!(code, 2, "{sweep:?}");
    }
}

#[test]
fn coeffs_table() {
    let (code, out) = genfn(&["coeffs", "--k", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,a_n,error_estimate");
    let gamma = 0.577_215_664_901_532_9;
    let want = [1.0, gamma, gamma * gamma / 2.0 - std::f64::consts::PI.powi(2) / 12.0];
    for (line, w) in lines[1..].iter().zip(want) {
        let a: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((a - w).abs() < 1e-6, "{line}");
    }
    assert_eq!(lines.len(), 4);

    let (code, out) = genfn(&["coeffs", "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);

    let (code, _) = genfn(&["coeffs", "--k", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn calibrate_reports_and_rejects() {
    let (code, out) = genfn(&["calibrate", "--family", "mf", "--a", "2", "--d", "1", "--printed"]);
    assert_eq!(code, 0, "{out}");
    let Payload::Calibration(rep) = RunRecord::from_json(&out).unwrap().payload else { panic!("{out}") };
    assert!((rep.lambda.re - std::f64::consts::FRAC_PI_2.sqrt()).abs() < 1e-6);
    assert_eq!(rep.sample_points.len(), 3);

    let (code, out) = genfn(&[
        "calibrate",
        "--family",
        "polylog",
        "--r",
        "2",
        "--form",
        "exp-printed",
        "--point",
        "0.3",
        "--point",
        "0.5",
        "--point",
        "0.7",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!((complex(&json(&out)["lambda"]) - 2.0).norm() < 1e-6);

    let (code, out) = genfn(&["calibrate", "--family", "cbin-egf", "--as-labelled"]);
    assert_eq!(code, 1, "{out}");
    let v = json(&out);
    assert_eq!(v["error"], "CalibrationMismatch");
    assert!(v["report"]["residual_spread"].as_f64().unwrap() > 1e-6);

    let (code, _) = genfn(&["calibrate", "--family", "egf", "--point", "0.3", "--point", "0.5"]);
    assert_eq!(code, 2);
}

#[test]
fn sequences_lists_builtins() {
    let (code, out) = genfn(&["sequences"]);
    assert_eq!(code, 0);
    let ids: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, genfn::CoefficientSequence::builtin_ids());

    let (code, out) = genfn(&["sequences", "--json"]);
    assert_eq!(code, 0);
    let Payload::Sequences { sequences } = RunRecord::from_json(&out).unwrap().payload else { panic!("{out}") };
    let dirac = sequences.iter().find(|s| s.id == "dirac").unwrap();
    assert_eq!(dirac.ogf_radius, None);
}

#[test]
fn command_output_round_trips() {
    let runs: &[&[&str]] = &[
        &["transform", "--family", "square", "--z", "0.4,-0.3", "--q", "0.3,0.4", "--json"],
        &["transform", "--family", "mf", "--a", "2", "--d", "1", "--z", "0.7"],
        &["verify", "--family", "cbin-ogf", "--z", "1"],
        &["calibrate", "--family", "ml", "--a", "2", "--b", "1"],
        &["coeffs", "--k", "4", "--json"],
        &["converge", "--family", "egf", "--z", "0.5", "--json"],
    ];
    for args in runs {
        let (code, out) = genfn(args);
        assert_eq!(code, 0, "{args:?}: {out}");
        let rec = RunRecord::from_json(&out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(rec.to_json() + "\n", out, "{args:?}");
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e3f64..1e3, Just(0.0), Just(-0.0),]
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (finite(), finite()).prop_map(|(re, im)| Complex64::new(re, im))
}

fn transform_view() -> impl Strategy<Value = TransformView> {
    (
        complex_strategy(),
        complex_strategy(),
        finite(),
        any::<u32>(),
        proptest::option::of(complex_strategy()),
        proptest::option::of(finite()),
        1u32..5,
        2usize..512,
        finite(),
    )
        .prop_map(|(z, value, est, evals, oracle, abs_diff, r, nodes, tol)| TransformView {
            family: "polylog".into(),
            target: SeriesFamily::Polylog { r },
            z,
            value,
            error_estimate: est,
            method: "polylog-log-kernel".into(),
            evals: evals as usize,
            oracle,
            abs_diff,
            raw_value: oracle,
            config: QuadratureConfig { nodes, panels: 8, truncation_t: 40.0, accel_depth: 12, tol },
        })
}

proptest! {
    #[test]
    fn transform_records_round_trip(view in transform_view(), ms in finite(), cmd in "[a-z =,.\"\\\\-]{0,40}") {
        let rec = RunRecord { command: cmd, payload: Payload::Transform(view), wall_time_ms: ms };
        let back = RunRecord::from_json(&rec.to_json()).unwrap();
        prop_assert_eq!(back, rec);
    }

    #[test]
    fn verify_records_round_trip(view in transform_view(), tail in finite(), terms in any::<u32>()) {
        let oracle_result = genfn::OracleResult {
            family: view.target,
            z: view.z,
            value: view.value,
            tail_bound: tail,
            terms_used: terms as usize,
        };
        let rec = RunRecord {
            command: "verify".into(),
            payload: Payload::Verify(VerifyView {
                verdict: Verdict::Inconclusive,
                transform_budget: view.error_estimate,
                oracle_budget: tail,
                transform: view,
                oracle_result,
            }),
            wall_time_ms: 0.5,
        };
        prop_assert_eq!(RunRecord::from_json(&rec.to_json()).unwrap(), rec);
    }

    #[test]
    fn converge_records_round_trip(rows in proptest::collection::vec((2usize..4096, finite(), any::<u32>(), finite()), 0..8)) {
        let rows = rows
            .into_iter()
            .map(|(nodes, abs_error, evals, wall_ms)| ConvergeRow { nodes, abs_error, evals: evals as usize, wall_ms })
            .collect();
        let rec = RunRecord {
            command: "converge".into(),
            payload: Payload::Converge { reference: Complex64::new(1.0, -2.0), rows },
            wall_time_ms: 3.25,
        };
        prop_assert_eq!(RunRecord::from_json(&rec.to_json()).unwrap(), rec);
    }

    #[test]
    fn printed_floats_parse_back_exactly(x in finite()) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

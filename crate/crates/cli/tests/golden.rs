//! Every subcommand against a stored output. `HIVECURVE_BLESS=1` rewrites the goldens.

use std::path::{Path, PathBuf};
use std::process::Command;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    exit: i32,
    ext: &'static str,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32, ext: &'static str) -> Case {
    Case { name, args, exit, ext }
}

const CASES: &[Case] = &[
    case("hive_check", &["hive", "check", "quadratic3.json"], 0, "json"),
    case("hive_check_not", &["hive", "check", "negquad2.json"], 1, "json"),
    case("hive_boundary", &["hive", "boundary", "quadratic3.json"], 0, "json"),
    case("hive_convolve", &["hive", "convolve", "linear1.json", "quadratic3.json"], 0, "json"),
    case("horn_infeasible", &["horn", "feasible", "boundary_infeasible.json"], 1, "json"),
    case("horn_feasible", &["horn", "feasible", "boundary_quadratic2.json"], 0, "json"),
    case("pencil_det", &["pencil", "det", "pencil.json"], 0, "json"),
    case("pencil_beta", &["pencil", "beta", "gl.json"], 0, "json"),
    case("pencil_boundary", &["pencil", "boundary", "form2.json"], 0, "json"),
    case("pencil_sing", &["pencil", "sing", "gl.json"], 0, "json"),
    case("hyperbolic_check", &["hyperbolic", "check", "form2.json", "--probes", "90"], 0, "json"),
    case("hyperbolic_check_fail", &["hyperbolic", "check", "definite2.json", "--probes", "90"], 1, "json"),
    case("hyperbolic_backward", &["hyperbolic", "backward", "form2.json"], 0, "json"),
    case("hyperbolic_v1shift", &["hyperbolic", "v1shift", "definite2.json"], 1, "json"),
    case("trop_subdivide", &["trop", "subdivide", "quadratic3.json"], 0, "json"),
    case("trop_subdivide_constant", &["trop", "subdivide", "constant2.json"], 0, "json"),
    case("trop_curve", &["trop", "curve", "quadratic3.json"], 0, "json"),
    case("trop_honeycomb", &["trop", "honeycomb-svg", "quadratic3.json"], 0, "svg"),
    case("trop_amoeba", &["trop", "amoeba-svg", "form2.json", "--tol", "amoeba.moduli=12", "--tol", "amoeba.phases=6"], 0, "svg"),
    case("patchwork_charts", &["patchwork", "charts", "quadratic3.json"], 0, "json"),
    case("patchwork_classify", &["patchwork", "classify", "quadratic3.json"], 0, "json"),
    case("patchwork_svg", &["patchwork", "svg", "quadratic3.json"], 0, "svg"),
    case("patchwork_violation_path", &["patchwork", "violation-path", "negquad2.json"], 0, "json"),
    case("sweep_main_theorem", &["sweep", "main-theorem", "family_quad2.json", "--tgrid", "1e3,1e4", "--probes", "90"], 0, "csv"),
    case("sweep_main_theorem_fail", &["sweep", "main-theorem", "family_negquad2.json", "--tgrid", "1e2,1e3", "--probes", "90"], 1, "csv"),
    case("sweep_boundary", &["sweep", "boundary", "pencil_family.json"], 0, "csv"),
    case("sweep_convolution", &["sweep", "convolution", "family_a1.json", "family_b1.json"], 0, "json"),
    case("sweep_hive4", &["sweep", "hive4", "hive4_diag.json"], 0, "json"),
    case("sweep_hive4_seeded", &["sweep", "hive4", "--seed", "11"], 0, "json"),
    case("ronkin_value", &["ronkin", "value", "line_xy.json", "--at", "0,0,0"], 0, "json"),
    case("ronkin_coeff", &["ronkin", "coeff", "form2.json", "--tol", "ronkin.resolution=64"], 0, "json"),
    case("ronkin_boundary_check", &["ronkin", "boundary-check", "form2.json", "--tol", "ronkin.resolution=64"], 0, "json"),
];

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hivecurve"))
        .args(args)
        .current_dir(root().join("fixtures"))
        .env("HIVECURVE_THREADS", "2")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf8"))
}

/// SVG outputs may differ only in the version comment.
fn comparable(text: &str, ext: &str) -> String {
    if ext == "svg" {
        text.lines().filter(|l| !l.starts_with("<!-- hivecurve")).collect::<Vec<_>>().join("\n")
    } else {
        text.to_string()
    }
}

/// Float values written by different platforms' libm may differ in the last bits.
fn numbers_close(a: &str, b: &str) -> bool {
    let split = |s: &str| -> Vec<String> {
        s.split(|c: char| c == ',' || c == '"' || c.is_whitespace() || c == '[' || c == ']' || c == '=' || c == '>' || c == '<')
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect()
    };
    let (ta, tb) = (split(a), split(b));
    ta.len() == tb.len()
        && ta.iter().zip(&tb).all(|(x, y)| match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(u), Ok(v)) => (u - v).abs() <= 1e-9 * (1.0 + u.abs().max(v.abs())),
            _ => x == y,
        })
}

#[test]
fn goldens() {
    let bless = std::env::var("HIVECURVE_BLESS").is_ok();
    let mut failures = Vec::new();
    for c in CASES {
        let (code, out) = run(c.args);
        let path = root().join("golden").join(format!("{}.{}", c.name, c.ext));
        if code != c.exit {
            failures.push(format!("{}: exit {code}, expected {}", c.name, c.exit));
            continue;
        }
        if bless {
            std::fs::write(&path, &out).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        let (got, want) = (comparable(&out, c.ext), comparable(&want, c.ext));
        if got != want && !numbers_close(&got, &want) {
            failures.push(format!("{}: output differs from {}", c.name, path.display()));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn every_subcommand_has_a_golden() {
    let groups: &[(&str, &[&str])] = &[
        ("hive", &["check", "boundary", "convolve"]),
        ("horn", &["feasible"]),
        ("pencil", &["det", "beta", "boundary", "sing"]),
        ("hyperbolic", &["check", "backward", "v1shift"]),
        ("trop", &["subdivide", "curve", "honeycomb-svg", "amoeba-svg"]),
        ("patchwork", &["charts", "classify", "svg", "violation-path"]),
        ("sweep", &["main-theorem", "boundary", "convolution", "hive4"]),
        ("ronkin", &["value", "coeff", "boundary-check"]),
    ];
    for (g, subs) in groups {
        for s in *subs {
            assert!(CASES.iter().any(|c| c.args[0] == *g && c.args[1] == *s), "{g} {s} has no golden case");
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["hyperbolic", "check", "form2.json", "--probes", "60", "--seed", "5"][..],
        &["sweep", "hive4", "--seed", "3"][..],
        &["patchwork", "charts", "quadratic3.json"][..],
        &["sweep", "boundary", "family_quad2.json", "--tgrid", "1e2,1e3"][..],
    ] {
        assert_eq!(run(args), run(args), "{args:?}");
    }
}

#[test]
fn documented_examples() {
    let (code, out) = run(&["hive", "check", "quadratic3.json"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""verdict": "strict_hive""#));
    let (code, out) = run(&["horn", "feasible", "boundary_infeasible.json"]);
    assert_eq!(code, 1);
    assert!(out.contains(r#""verdict": "infeasible""#));
    let (code, out) = run(&["patchwork", "classify", "quadratic3.json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["ovals"].as_u64(), v["pseudoline"].as_bool(), v["nesting"].as_u64()), (Some(1), Some(true), Some(1)));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["hive", "check", "missing.json"]).0, 3);
    assert_eq!(run(&["hive", "bogus"]).0, 2);
    assert_eq!(run(&["hive", "check", "quadratic3.json", "--tol", "nope=1"]).0, 2);
    // a form is not a boundary triple
    assert_eq!(run(&["horn", "feasible", "form2.json"]).0, 3);
    // the definite quadratic has no real points on its edges
    assert_eq!(run(&["pencil", "boundary", "definite2.json"]).0, 4);
}

#[test]
fn outputs_go_to_files() {
    let dir = std::env::temp_dir().join(format!("hivecurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("b.json");
    let svg = dir.join("h.svg");
    let (code, out) = run(&["hive", "boundary", "quadratic3.json", "--out", json.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&json).unwrap().contains("alpha"));
    let (code, _) = run(&["trop", "honeycomb-svg", "quadratic3.json", "--svg", svg.to_str().unwrap(), "--tol", "t=1e4"]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<circle"));
    std::fs::remove_dir_all(&dir).unwrap();
}

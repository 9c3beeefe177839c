//! `hivecurve`: hives, determinantal curves and their tropical limits from the command line.
//!
//! Exit status: 0 success, 1 negative verdict, 2 usage, 3 bad input, 4 numeric failure.

mod svg;

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hivecurve::asymptotics::{
    boundary_asymptotics, direct_sum_check, hive4_check, main_theorem_sweep, ronkin_boundary_check, ronkin_coefficient, ronkin_value,
    FormFamily, LiftedFamily, PencilFamily, RMatrixFamily, RonkinSpec, DEFAULT_TGRID, HIVE4_TGRID,
};
use hivecurve::form::TernaryForm;
use hivecurve::hive::{boundary, classify_hive, convolve, horn_feasible, index_set, BoundarySpec, Hive, TriangleIndex};
use hivecurve::hyperbolicity::{backward_inequalities, shifted_hive_check, vinnikov_check, vinnikov_check_exact, ProbeConfig, Verdict};
use hivecurve::patchwork::{build_charts, classify_topology, find_violation_path, glued_path_sign_changes, SignedLifting};
use hivecurve::pencil::{beta_map, curve_boundary_exact, pencil_det, pencil_det_exact, GLTriple, PencilTriple};
use hivecurve::poly::Mode;
use hivecurve::rational::Q;
use hivecurve::tropical::{amoeba_sample, honeycomb_boundary, regular_subdivision, tropical_curve, AmoebaSpec};
use hivecurve::{Error, SCHEMA};

#[derive(Parser)]
#[command(name = "hivecurve", version, about = "Hives, Vinnikov curves, honeycombs and patchworks")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    group: Group,
}

#[derive(Args)]
struct Opts {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Tolerance or parameter override, repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VAL", value_parser = parse_kv)]
    tol: Vec<(String, f64)>,
    /// Comma-separated values of t.
    #[arg(long, global = true, value_delimiter = ',')]
    tgrid: Option<Vec<f64>>,
    /// Equally spaced probe lines.
    #[arg(long, global = true)]
    probes: Option<usize>,
    /// Write the JSON or CSV result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write SVG figures here; falls back to --out, then stdout
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Group {
    /// Hive predicates and maps.
    Hive {
        #[command(subcommand)]
        cmd: HiveCmd,
    },
    /// Horn feasibility of a boundary triple.
    Horn {
        #[command(subcommand)]
        cmd: HornCmd,
    },
    /// Positive definite pencils and their determinants.
    Pencil {
        #[command(subcommand)]
        cmd: PencilCmd,
    },
    /// Line-probing hyperbolicity and the coefficient inequalities.
    Hyperbolic {
        #[command(subcommand)]
        cmd: HyperbolicCmd,
    },
    /// Regular subdivisions, honeycombs and amoebas.
    Trop {
        #[command(subcommand)]
        cmd: TropCmd,
    },
    /// Viro patchworking.
    Patchwork {
        #[command(subcommand)]
        cmd: PatchworkCmd,
    },
    /// Sweeps over t for one-parameter families.
    Sweep {
        #[command(subcommand)]
        cmd: SweepCmd,
    },
    /// Ronkin function and coefficients.
    Ronkin {
        #[command(subcommand)]
        cmd: RonkinCmd,
    },
}

#[derive(Subcommand)]
enum HiveCmd {
    Check { input: PathBuf },
    Boundary { input: PathBuf },
    Convolve { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand)]
enum HornCmd {
    Feasible { input: PathBuf },
}

#[derive(Subcommand)]
enum PencilCmd {
    Det { input: PathBuf },
    Beta { input: PathBuf },
    Boundary { input: PathBuf },
    Sing { input: PathBuf },
}

#[derive(Subcommand)]
enum HyperbolicCmd {
    Check { input: PathBuf },
    Backward { input: PathBuf },
    V1shift { input: PathBuf },
}

#[derive(Subcommand)]
enum TropCmd {
    Subdivide {
        input: PathBuf,
    },
    Curve {
        input: PathBuf,
    },
    /// Honeycomb of a lifting; `--tol t=T` overlays the amoeba of the family `t^h` scaled by `1/log T`.
    HoneycombSvg {
        input: PathBuf,
    },
    AmoebaSvg {
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum PatchworkCmd {
    Charts { input: PathBuf },
    Classify { input: PathBuf },
    Svg { input: PathBuf },
    ViolationPath { input: PathBuf },
}

#[derive(Subcommand)]
enum SweepCmd {
    MainTheorem {
        input: PathBuf,
    },
    Boundary {
        input: PathBuf,
    },
    Convolution {
        first: PathBuf,
        second: PathBuf,
    },
    /// Without an input a family is drawn from `--seed`.
    Hive4 {
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RonkinCmd {
    Value {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
        at: Vec<f64>,
    },
    Coeff {
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        index: Option<Vec<usize>>,
    },
    BoundaryCheck {
        input: PathBuf,
    },
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VAL, got {s:?}"))?;
    let v: f64 = v.parse().map_err(|_| format!("{v:?} is not a number"))?;
    Ok((k.to_string(), v))
}

const TOL_KEYS: [&str; 9] = [
    "t",
    "probes.random",
    "ronkin.resolution",
    "ronkin.tolerance",
    "ronkin.residual",
    "amoeba.moduli",
    "amoeba.phases",
    "amoeba.log_min",
    "amoeba.log_max",
];

enum Failure {
    Usage(String),
    Input(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(_) | Error::DimensionMismatch(_) | Error::NotDecreasing(_) => Failure::Input(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// What a subcommand produced: the payload and whether its verdict is positive.
struct Outcome {
    text: String,
    svg: Option<String>,
    ok: bool,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Self {
        Outcome { text: serde_json::to_string_pretty(&v).expect("json") + "\n", svg: None, ok }
    }
}

struct Ctx {
    opts: Opts,
    tol: BTreeMap<String, f64>,
}

impl Ctx {
    fn new(opts: Opts) -> Run<Self> {
        let mut tol = BTreeMap::new();
        for (k, v) in &opts.tol {
            if !TOL_KEYS.contains(&k.as_str()) {
                return Err(Failure::Usage(format!("unknown --tol key {k:?}; known: {}", TOL_KEYS.join(", "))));
            }
            tol.insert(k.clone(), *v);
        }
        Ok(Ctx { opts, tol })
    }

    fn tol(&self, key: &str, default: f64) -> f64 {
        self.tol.get(key).copied().unwrap_or(default)
    }

    fn probe_config(&self) -> ProbeConfig {
        let base = ProbeConfig::default();
        ProbeConfig {
            equally_spaced: self.opts.probes.unwrap_or(base.equally_spaced),
            random: self.tol("probes.random", base.random as f64) as usize,
            seed: self.opts.seed,
            mode: match self.opts.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            ..base
        }
    }

    fn ronkin_spec(&self) -> RonkinSpec {
        let d = RonkinSpec::default();
        RonkinSpec {
            resolution: self.tol("ronkin.resolution", d.resolution as f64) as usize,
            tolerance: self.tol("ronkin.tolerance", d.tolerance),
            window: None,
        }
    }

    fn amoeba_spec(&self, d: AmoebaSpec) -> AmoebaSpec {
        AmoebaSpec {
            moduli: self.tol("amoeba.moduli", d.moduli as f64) as usize,
            phases: self.tol("amoeba.phases", d.phases as f64) as usize,
            log_min: self.tol("amoeba.log_min", d.log_min),
            log_max: self.tol("amoeba.log_max", d.log_max),
        }
    }

    fn tgrid(&self, default: &[f64]) -> Vec<f64> {
        self.opts.tgrid.clone().unwrap_or_else(|| default.to_vec())
    }

    fn exact(&self) -> bool {
        matches!(self.opts.mode, ModeArg::Exact)
    }
}

fn read_json(path: &Path) -> Run<Value> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    serde_json::from_str(&s).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Run<T> {
    serde_json::from_value(read_json(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_form_q(path: &Path) -> Run<TernaryForm<Q>> {
    Ok(TernaryForm::<Q>::from_json(&read_json(path)?)?)
}

fn read_form(path: &Path) -> Run<TernaryForm<f64>> {
    Ok(TernaryForm::<f64>::from_json(&read_json(path)?)?)
}

/// A lifted family (`{n, values: [{i,j,k,c,h}]}`), or a pencil family when `X` is present.
fn read_family(path: &Path) -> Run<Box<dyn FormFamily>> {
    let v = read_json(path)?;
    if v.get("X").is_some() {
        Ok(Box::new(PencilFamily::from_json(&v)?))
    } else {
        Ok(Box::new(LiftedFamily::from_json(&v)?))
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Run<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Failure::Numeric(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| Failure::Numeric(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Numeric(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

fn hive_cmd(cmd: &HiveCmd) -> Run<Outcome> {
    match cmd {
        HiveCmd::Check { input } => {
            let h: Hive = read(input)?;
            let c = classify_hive(&h);
            let ok = c.class.is_hive();
            Ok(Outcome::json(json!({"schema": SCHEMA, "verdict": c.class.as_str(), "violated": c.violated, "tight": c.tight}), ok))
        }
        HiveCmd::Boundary { input } => {
            let h: Hive = read(input)?;
            Ok(Outcome::json(to_value(&boundary(&h)), true))
        }
        HiveCmd::Convolve { first, second } => {
            let (a, b): (Hive, Hive) = (read(first)?, read(second)?);
            Ok(Outcome::json(to_value(&convolve(&a, &b)?), true))
        }
    }
}

fn horn_cmd(cmd: &HornCmd) -> Run<Outcome> {
    let HornCmd::Feasible { input } = cmd;
    let b: BoundarySpec = read(input)?;
    let r = horn_feasible(&b)?;
    let verdict = if r.feasible { "feasible" } else { "infeasible" };
    Ok(Outcome::json(json!({"schema": SCHEMA, "verdict": verdict, "witness": r.witness}), r.feasible))
}

fn sides_json(s: &[Vec<f64>; 3]) -> Value {
    json!({"schema": SCHEMA, "alpha": s[0], "beta": s[1], "gamma": s[2]})
}

fn pencil_cmd(ctx: &Ctx, cmd: &PencilCmd) -> Run<Outcome> {
    match cmd {
        PencilCmd::Det { input } => {
            let p = PencilTriple::from_json(&read_json(input)?)?;
            let v = if ctx.exact() { pencil_det_exact(&p.to_exact()?)?.to_json() } else { pencil_det(&p)?.to_json() };
            Ok(Outcome::json(v, true))
        }
        PencilCmd::Beta { input } => {
            let g = GLTriple::from_json(&read_json(input)?)?;
            Ok(Outcome::json(beta_map(&g)?.to_json(), true))
        }
        PencilCmd::Boundary { input } => Ok(Outcome::json(sides_json(&curve_boundary_exact(&read_form_q(input)?)?), true)),
        PencilCmd::Sing { input } => {
            let s = GLTriple::from_json(&read_json(input)?)?.singular_values()?;
            Ok(Outcome::json(json!({"schema": SCHEMA, "A": s[0], "B": s[1], "C": s[2]}), true))
        }
    }
}

fn hyperbolic_cmd(ctx: &Ctx, cmd: &HyperbolicCmd) -> Run<Outcome> {
    match cmd {
        HyperbolicCmd::Check { input } => {
            let cfg = ctx.probe_config();
            let r = if ctx.exact() { vinnikov_check_exact(&read_form_q(input)?, &cfg)? } else { vinnikov_check(&read_form(input)?, &cfg)? };
            let ok = r.verdict == Verdict::Pass;
            Ok(Outcome::json(to_value(&r), ok))
        }
        HyperbolicCmd::Backward { input } => {
            let r = backward_inequalities(&read_form(input)?)?;
            let ok = r.verdict == Verdict::Pass;
            Ok(Outcome::json(to_value(&r), ok))
        }
        HyperbolicCmd::V1shift { input } => {
            let r = shifted_hive_check(&read_form(input)?)?;
            let ok = r.verdict == Verdict::Pass;
            Ok(Outcome::json(to_value(&r), ok))
        }
    }
}

fn trop_cmd(ctx: &Ctx, cmd: &TropCmd) -> Run<Outcome> {
    match cmd {
        TropCmd::Subdivide { input } => {
            let h: Hive = read(input)?;
            Ok(Outcome::json(regular_subdivision(&h).to_json(), true))
        }
        TropCmd::Curve { input } => {
            let h: Hive = read(input)?;
            let c = tropical_curve(&h);
            let mut v = c.to_json();
            v["boundary"] = honeycomb_boundary(&c).map_or(Value::Null, |b| to_value(&b));
            Ok(Outcome::json(v, true))
        }
        TropCmd::HoneycombSvg { input } => {
            let h: Hive = read(input)?;
            let c = tropical_curve(&h);
            let overlay = match ctx.tol.get("t") {
                Some(&t) if t > 1.0 => {
                    let lt = t.ln();
                    let f = LiftedFamily::from_exponents(&h).instantiate_scaled(t)?;
                    let reach = 2.0 * (h.degree() as f64 + 1.0) * lt;
                    let spec = ctx.amoeba_spec(AmoebaSpec { moduli: 96, phases: 12, log_min: -reach, log_max: reach });
                    Some(amoeba_sample(&f, &spec).scaled(1.0 / lt))
                }
                Some(_) => return Err(Failure::Usage("t must exceed 1".into())),
                None => None,
            };
            Ok(Outcome { text: String::new(), svg: Some(svg::honeycomb(&c, overlay.as_deref())), ok: true })
        }
        TropCmd::AmoebaSvg { input } => {
            let f = read_form(input)?;
            let cloud = amoeba_sample(&f, &ctx.amoeba_spec(AmoebaSpec::default()));
            Ok(Outcome { text: String::new(), svg: Some(svg::amoeba(&cloud.points)), ok: true })
        }
    }
}

fn patchwork_cmd(cmd: &PatchworkCmd) -> Run<Outcome> {
    match cmd {
        PatchworkCmd::Charts { input } => {
            let sl = SignedLifting::from_json(&read_json(input)?)?;
            let charts = build_charts(&sl)?;
            Ok(Outcome::json(
                json!({"schema": SCHEMA, "n": sl.degree(), "charts": charts.iter().map(|c| c.to_json()).collect::<Vec<_>>()}),
                true,
            ))
        }
        PatchworkCmd::Classify { input } => {
            let r = classify_topology(&SignedLifting::from_json(&read_json(input)?)?)?;
            let ok = r.vinnikov;
            Ok(Outcome::json(to_value(&r), ok))
        }
        PatchworkCmd::Svg { input } => {
            let charts = build_charts(&SignedLifting::from_json(&read_json(input)?)?)?;
            Ok(Outcome { text: String::new(), svg: Some(svg::patchwork(&charts)), ok: true })
        }
        PatchworkCmd::ViolationPath { input } => {
            let sl = SignedLifting::from_json(&read_json(input)?)?;
            let n = sl.degree();
            let sub = regular_subdivision(&sl.lifting);
            let v = match find_violation_path(&sub) {
                Some(p) => {
                    let sc = glued_path_sign_changes(&sl, &p)?;
                    json!({"schema": SCHEMA, "path": p, "sign_changes": sc, "bound": n.saturating_sub(1), "certified": sc < n})
                }
                None => json!({"schema": SCHEMA, "path": null}),
            };
            Ok(Outcome::json(v, true))
        }
    }
}

fn sweep_cmd(ctx: &Ctx, cmd: &SweepCmd) -> Run<Outcome> {
    match cmd {
        SweepCmd::MainTheorem { input } => {
            let fam = LiftedFamily::from_json(&read_json(input)?)?;
            let r = main_theorem_sweep(&fam, &ctx.tgrid(&DEFAULT_TGRID), &ctx.probe_config())?;
            let rows = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        format!("{:e}", row.t),
                        verdict_str(row.report.verdict).to_string(),
                        row.report.probes.to_string(),
                        row.report.degenerate.to_string(),
                        row.report.counterexample.as_ref().map_or(String::new(), |c| c.real_roots.to_string()),
                    ]
                })
                .collect();
            let ok = r.all(Verdict::Pass);
            Ok(Outcome { text: csv_text(&["t", "verdict", "probes", "degenerate", "counterexample_roots"], rows)?, svg: None, ok })
        }
        SweepCmd::Boundary { input } => {
            let fam = read_family(input)?;
            let r = boundary_asymptotics(fam.as_ref(), &ctx.tgrid(&DEFAULT_TGRID))?;
            let names = ["alpha", "beta", "gamma"];
            let mut rows = Vec::new();
            for row in &r.rows {
                for (s, name) in names.iter().enumerate() {
                    for m in 0..row.residual[s].len() {
                        rows.push(vec![
                            format!("{:e}", row.t),
                            name.to_string(),
                            (m + 1).to_string(),
                            row.log_boundary[s][m].to_string(),
                            row.half_d0[s][m].to_string(),
                            row.residual[s][m].to_string(),
                            r.bounds[m].to_string(),
                        ]);
                    }
                }
            }
            // slope rows: measured slope, target, difference, allowed error
            for (s, name) in names.iter().enumerate() {
                for m in 0..r.slopes[s].len() {
                    rows.push(vec![
                        "slope".into(),
                        name.to_string(),
                        (m + 1).to_string(),
                        r.slopes[s][m].to_string(),
                        r.target[s][m].to_string(),
                        (r.slopes[s][m] - r.target[s][m]).to_string(),
                        r.slope_tolerance.to_string(),
                    ]);
                }
            }
            let ok = r.within_bound && r.slopes_ok();
            Ok(Outcome { text: csv_text(&["t", "side", "slot", "log_boundary", "half_d0", "residual", "bound"], rows)?, svg: None, ok })
        }
        SweepCmd::Convolution { first, second } => {
            let a = LiftedFamily::from_json(&read_json(first)?)?;
            let b = LiftedFamily::from_json(&read_json(second)?)?;
            let r = direct_sum_check(&a, &b)?;
            let ok = r.coefficient_identity && r.exponent_identity;
            let mut v = to_value(&r);
            v["schema"] = json!(SCHEMA);
            Ok(Outcome::json(v, ok))
        }
        SweepCmd::Hive4 { input } => {
            let fam = match input {
                Some(p) => RMatrixFamily::from_json(&read_json(p)?)?,
                None => RMatrixFamily::random(&mut ChaCha8Rng::seed_from_u64(ctx.opts.seed)),
            };
            let r = hive4_check(&fam, &ctx.tgrid(&HIVE4_TGRID))?;
            let ok = r.all_hold;
            Ok(Outcome::json(to_value(&r), ok))
        }
    }
}

fn ronkin_cmd(ctx: &Ctx, cmd: &RonkinCmd) -> Run<Outcome> {
    let spec = ctx.ronkin_spec();
    match cmd {
        RonkinCmd::Value { input, at } => {
            let [x, y, z] = <[f64; 3]>::try_from(at.as_slice()).map_err(|_| Failure::Usage("--at needs three values".into()))?;
            let mut v = to_value(&ronkin_value(&read_form(input)?, [x, y, z], &spec)?);
            v["schema"] = json!(SCHEMA);
            Ok(Outcome::json(v, true))
        }
        RonkinCmd::Coeff { input, index } => {
            let f = read_form(input)?;
            let targets: Vec<TriangleIndex> = match index {
                Some(ix) => {
                    let [i, j, k] =
                        <[usize; 3]>::try_from(ix.as_slice()).map_err(|_| Failure::Usage("--index needs three values".into()))?;
                    vec![TriangleIndex::new(i, j, k)]
                }
                None => index_set(f.degree()),
            };
            let values = targets
                .iter()
                .map(|t| Ok(json!({"i": t.i, "j": t.j, "k": t.k, "u": ronkin_coefficient(&f, *t, &spec)?})))
                .collect::<Run<Vec<_>>>()?;
            Ok(Outcome::json(json!({"schema": SCHEMA, "n": f.degree(), "values": values}), true))
        }
        RonkinCmd::BoundaryCheck { input } => {
            let r = ronkin_boundary_check(&read_form(input)?, &spec)?;
            let limit = ctx.tol("ronkin.residual", 1e-2);
            let ok = r.max_residual <= limit;
            let mut v = to_value(&r);
            v["schema"] = json!(SCHEMA);
            v["limit"] = json!(limit);
            v["verdict"] = json!(if ok { "pass" } else { "fail" });
            Ok(Outcome::json(v, ok))
        }
    }
}

fn write_to(path: &Path, text: &str) -> Run<()> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Run<bool> {
    let ctx = Ctx::new(cli.opts)?;
    let out = match &cli.group {
        Group::Hive { cmd } => hive_cmd(cmd)?,
        Group::Horn { cmd } => horn_cmd(cmd)?,
        Group::Pencil { cmd } => pencil_cmd(&ctx, cmd)?,
        Group::Hyperbolic { cmd } => hyperbolic_cmd(&ctx, cmd)?,
        Group::Trop { cmd } => trop_cmd(&ctx, cmd)?,
        Group::Patchwork { cmd } => patchwork_cmd(cmd)?,
        Group::Sweep { cmd } => sweep_cmd(&ctx, cmd)?,
        Group::Ronkin { cmd } => ronkin_cmd(&ctx, cmd)?,
    };
    let mut stdout = std::io::stdout().lock();
    match (&out.svg, &ctx.opts.svg, &ctx.opts.out) {
        (Some(s), Some(p), _) | (Some(s), None, Some(p)) => write_to(p, s)?,
        (Some(s), None, None) => stdout.write_all(s.as_bytes()).map_err(|e| Failure::Numeric(e.to_string()))?,
        (None, _, _) => {}
    }
    if !out.text.is_empty() {
        match &ctx.opts.out {
            Some(p) if out.svg.is_none() => write_to(p, &out.text)?,
            _ => stdout.write_all(out.text.as_bytes()).map_err(|e| Failure::Numeric(e.to_string()))?,
        }
    }
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HIVECURVE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second initialization can only fail if something already built the pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("input error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric error: {m}");
            ExitCode::from(4)
        }
    }
}

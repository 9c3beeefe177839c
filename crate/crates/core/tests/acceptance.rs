//! One line per acceptance criterion, with its runtime budget. Run with `--nocapture` or read
//! the lines from stderr; the test fails if any criterion fails.

mod common;

use std::io::Write;
use std::time::Instant;

use hivecurve::asymptotics::*;
use hivecurve::form::TernaryForm;
use hivecurve::hive::{
    boundary, classify_hive, convolve, horn_feasible, index_set, merge_decreasing, BoundarySpec, Hive, HiveClass, TriangleIndex,
};
use hivecurve::hyperbolicity::{backward_inequalities, shifted_hive_check, ProbeConfig, Verdict};
use hivecurve::patchwork::{classify_topology, find_violation_path, glued_path_sign_changes, SignedLifting};
use hivecurve::pencil::{
    beta_map, condition_number, curve_boundary_exact, diag, pencil_det, pencil_det_exact, random_gl_triple, random_pd, random_pencil,
    PencilTriple,
};
use hivecurve::rational::{q, q_to_f64, qf, Q};
use hivecurve::tropical::{
    amoeba_sample, classify_subdivision, honeycomb_boundary, one_sided_distance, regular_subdivision, tropical_curve, AmoebaSpec,
    SubdivisionClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn crit(id: usize, name: &str, budget: f64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let r = f();
    let secs = start.elapsed().as_secs_f64();
    let (ok, detail) = match r {
        Ok(d) if secs < budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(d) => (false, d),
    };
    let line = format!("criterion {id:>2} {:<4} {name}: {detail} [{secs:.2}s / {budget}s]\n", if ok { "PASS" } else { "FAIL" });
    // bypass the test harness capture so the lines always show
    std::io::stderr().lock().write_all(line.as_bytes()).unwrap();
    ok
}

fn subdivision_agrees(h: &Hive) -> bool {
    let hive = classify_hive(h).class;
    let sub = classify_subdivision(&regular_subdivision(h));
    (hive == HiveClass::StrictHive) == (sub == SubdivisionClass::Standard)
        && hive.is_hive() == matches!(sub, SubdivisionClass::Standard | SubdivisionClass::CoarseningOfStandard)
}

fn c1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut corpus: Vec<Hive> = Vec::new();
    for s in 0..500 {
        let n = 1 + s % 4;
        corpus.push(match s % 3 {
            0 => common::random_lifting(n, &mut rng),
            1 => common::convolved_hive(n, &mut rng),
            _ => common::perturbed_quadratic(n, &mut rng),
        });
    }
    let mut bad = Hive::quadratic(2);
    bad.set(TriangleIndex::new(1, 1, 0), q(-1));
    let mut kink = Hive::quadratic(3);
    kink.set(TriangleIndex::new(1, 1, 1), q(2));
    let mut long_edge = Hive::constant(2, q(0));
    long_edge.set(TriangleIndex::new(1, 0, 1), q(1));
    corpus.extend([
        Hive::constant(3, q(0)),
        Hive::constant(4, q(7)),
        Hive::quadratic(4).shift_linear(&q(1), &q(-2), &qf(1, 3)),
        Hive::quadratic(4).scale(&q(-1)),
        bad,
        kink,
        long_edge,
        Hive::from_fn(4, |t| q(t.i.min(2) as i64)),
        Hive::from_fn(3, |t| q(-((t.i * t.i) as i64))),
    ]);
    let mut counts = [0usize; 3];
    for h in &corpus {
        counts[classify_hive(h).class as usize] += 1;
        ensure(subdivision_agrees(h), || format!("disagreement on {:?}", h.values()))?;
    }
    ensure(counts.iter().all(|&c| c > 0), || format!("corpus misses a class: {counts:?}"))?;
    Ok(format!("{} liftings agree (strict/hive/not {counts:?})", corpus.len()))
}

fn c2() -> Outcome {
    let grid = [1e3, 1e4, 1e5, 1e6];
    let cfg = ProbeConfig::with_counts(720, 128);
    for n in 2..=4 {
        let fam = LiftedFamily::from_exponents(&Hive::quadratic(n));
        let r = main_theorem_sweep(&fam, &grid, &cfg).map_err(e)?;
        ensure(r.all(Verdict::Pass), || format!("n={n} fails at some t"))?;
    }
    Ok("n=2,3,4 pass at every t with 848 probes".into())
}

fn c3() -> Outcome {
    let grid = [1e2, 1e3, 1e4, 1e5, 1e6];
    let cfg = ProbeConfig::with_counts(720, 128);
    let mut changes = Vec::new();
    for n in 2..=3 {
        let h = Hive::quadratic(n).scale(&q(-1));
        let r = main_theorem_sweep(&LiftedFamily::from_exponents(&h), &grid, &cfg).map_err(e)?;
        ensure(r.all(Verdict::Fail), || format!("n={n} passes at some t"))?;
        let path = find_violation_path(&regular_subdivision(&h)).ok_or(format!("n={n}: no violation path"))?;
        let sc = glued_path_sign_changes(&SignedLifting::all_plus(h), &path).map_err(e)?;
        ensure(sc < n, || format!("n={n}: {sc} sign changes"))?;
        changes.push(sc);
    }
    Ok(format!("fails on the whole grid; glued-path sign changes {changes:?}"))
}

fn c4() -> Outcome {
    for n in 1..=6 {
        let r = classify_topology(&SignedLifting::all_plus(Hive::quadratic(n))).map_err(e)?;
        ensure(r.ovals == n / 2 && r.pseudoline == (n % 2 == 1) && r.nesting == n / 2, || {
            format!("n={n}: ovals {} pseudoline {} nesting {}", r.ovals, r.pseudoline, r.nesting)
        })?;
    }
    Ok("n=1..6 have floor(n/2) nested ovals, pseudoline iff odd".into())
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut worst: f64 = 0.0;
    for s in 0..100 {
        let n = 1 + s % 5;
        let g = random_gl_triple(n, 0.75, &mut rng);
        for m in [&g.a, &g.b, &g.c] {
            let k = condition_number(m).map_err(e)?;
            ensure(k <= 1e3, || format!("condition number {k}"))?;
        }
        let sv = g.singular_values().map_err(e)?;
        let f = pencil_det_exact(&beta_map(&g).map_err(e)?.to_exact().map_err(e)?).map_err(e)?;
        let sides = curve_boundary_exact(&f).map_err(e)?;
        for (a, b) in sv.iter().zip(&sides) {
            ensure(a.len() == b.len(), || "side length".into())?;
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("max deviation {worst:.3e} over 100 triples"))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut least: f64 = f64::INFINITY;
    for s in 0..200 {
        let n = 1 + s % 6;
        let f = pencil_det(&random_pencil(n, &mut rng)).map_err(e)?;
        ensure(f.coeffs().iter().all(|&c| c > 0.0), || format!("nonpositive coefficient, n={n}"))?;
        let b = backward_inequalities(&f).map_err(e)?;
        ensure(b.verdict == Verdict::Pass, || format!("backward fails, n={n}"))?;
        least = b.margins.iter().map(|m| m.relative).fold(least, f64::min);
        let sh = shifted_hive_check(&f).map_err(e)?;
        ensure(sh.verdict == Verdict::Pass, || format!("shifted hive fails, n={n}"))?;
    }
    let definite = TernaryForm::new(2, vec![1.0, 0.1, 0.1, 1.0, 0.1, 1.0]).map_err(e)?;
    ensure(backward_inequalities(&definite).map_err(e)?.verdict == Verdict::Fail, || "counterexample passes backward".into())?;
    ensure(shifted_hive_check(&definite).map_err(e)?.verdict == Verdict::Fail, || "counterexample passes shifted".into())?;
    Ok(format!("200 pencils positive and strict (least relative margin {least:.3e}); counterexample rejected"))
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let zero = q(0);
    let dense = |e: &[Q], rng: &mut ChaCha8Rng| {
        let c = random_pd(e.len(), 0.1, rng);
        MatrixFamily::scaled((&c + c.adjoint()).unscale(2.0), e, &zero)
    };
    let mut fams = vec![
        PencilFamily::diagonal(&[q(2), q(0)], &[q(0), q(0)], &[q(0), q(1)]).map_err(e)?,
        PencilFamily::diagonal(&[q(1), q(0), q(-1)], &[q(0), q(1), q(2)], &[q(0), q(0), q(0)]).map_err(e)?,
        PencilFamily::diagonal(&[qf(3, 2), q(0), q(-1)], &[q(0), qf(1, 2), q(0)], &[q(1), q(0), q(0)]).map_err(e)?,
    ];
    for e3 in [[qf(1, 2), q(0), qf(-1, 2)], [qf(1, 2), q(0), q(0)]] {
        let x = dense(&e3, &mut rng).map_err(e)?;
        let z = dense(&[q(0), qf(1, 4), qf(1, 2)], &mut rng).map_err(e)?;
        fams.push(PencilFamily::new(x, MatrixFamily::diagonal(&[q(0), q(0), q(0)]), z).map_err(e)?);
    }
    let mut excess: f64 = f64::NEG_INFINITY;
    let mut slope: f64 = 0.0;
    for (i, f) in fams.iter().enumerate() {
        let b = boundary_asymptotics(f, &DEFAULT_TGRID).map_err(e)?;
        ensure(b.within_bound, || format!("fixture {i}: bound exceeded by {:.3e}", b.max_excess()))?;
        ensure(b.slopes_ok(), || format!("fixture {i}: slope error {:.3e} > {:.3e}", b.slope_error, b.slope_tolerance))?;
        excess = excess.max(b.max_excess());
        slope = slope.max(b.slope_error / b.slope_tolerance);
    }
    Ok(format!("{} fixtures; max excess over bound {excess:.3e}; worst slope error {slope:.2} of tolerance", fams.len()))
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for s in 0..200 {
        let n = 1 + s % 5;
        let h = common::random_hive(n, &mut rng);
        let b = boundary(&h);
        let r = horn_feasible(&b).map_err(e)?;
        let w = r.witness.filter(|_| r.feasible).ok_or(format!("hive boundary rejected, n={n}"))?;
        ensure(classify_hive(&w).class.is_hive() && boundary(&w) == b, || format!("bad witness, n={n}"))?;
        let mut off = b.clone();
        off.alpha[0] += q(1);
        ensure(!horn_feasible(&off).map_err(e)?.feasible, || "trace-violating boundary accepted".into())?;
    }
    let hand = BoundarySpec { alpha: vec![q(0), q(0)], beta: vec![q(0), q(0)], gamma: vec![q(1), q(-1)] };
    ensure(!horn_feasible(&hand).map_err(e)?.feasible, || "hand instance accepted".into())?;
    Ok("200 witnesses round-trip; trace-violating and hand instance rejected".into())
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for s in 0..100 {
        let n = 1 + s % 4;
        let h = common::random_hive(n, &mut rng);
        let c = tropical_curve(&h);
        ensure(c.ray_count() == 3 * n as u64, || format!("{} rays for n={n}", c.ray_count()))?;
        ensure(c.is_balanced(), || "unbalanced".into())?;
        ensure(honeycomb_boundary(&c).map_err(e)? == boundary(&h), || "boundary mismatch".into())?;
    }
    Ok("100 honeycombs: 3n rays, balanced, boundary matches".into())
}

/// Independent max over all splittings.
fn brute_convolve(h: &Hive, h2: &Hive) -> Hive {
    Hive::from_fn(h.degree() + h2.degree(), |t| {
        index_set(h.degree())
            .into_iter()
            .filter(|a| a.i <= t.i && a.j <= t.j && a.k <= t.k)
            .map(|a| h.get(a) + h2.get(TriangleIndex::new(t.i - a.i, t.j - a.j, t.k - a.k)))
            .max()
            .unwrap()
    })
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for m in 1..=3 {
            let (p, p2) = (random_pencil(n, &mut rng), random_pencil(m, &mut rng));
            worst = worst.max(direct_sum_pencil_error(&p, &p2).map_err(e)?);

            let (h, h2) = (common::random_hive(n, &mut rng), common::random_hive(m, &mut rng));
            let coeffs = |k: usize, rng: &mut ChaCha8Rng| (0..index_set(k).len()).map(|_| rng.random_range(0.5..2.0)).collect::<Vec<f64>>();
            let fam = LiftedFamily::new(n, coeffs(n, &mut rng), h.values().to_vec()).map_err(e)?;
            let fam2 = LiftedFamily::new(m, coeffs(m, &mut rng), h2.values().to_vec()).map_err(e)?;
            let d = direct_sum_check(&fam, &fam2).map_err(e)?;
            ensure(d.coefficient_identity && d.exponent_identity, || format!("direct sum identity fails for {n},{m}"))?;

            let c = convolve(&h, &h2).map_err(e)?;
            ensure(c == brute_convolve(&h, &h2), || "convolution differs from brute force".into())?;
            let (b, b1, b2) = (boundary(&c), boundary(&h), boundary(&h2));
            let merged =
                [&b1.alpha, &b1.beta, &b1.gamma].into_iter().zip([&b2.alpha, &b2.beta, &b2.gamma]).map(|(x, y)| merge_decreasing(x, y));
            ensure(b.sides().into_iter().cloned().eq(merged), || format!("boundary is not the merge for {n},{m}"))?;
        }
    }
    ensure(worst < 1e-9, || format!("block determinant error {worst:.3e}"))?;
    Ok(format!("block determinant relative error {worst:.3e}; exact identities and merge hold"))
}

fn form(n: usize, f: impl Fn(TriangleIndex) -> f64) -> TernaryForm<f64> {
    TernaryForm::from_fn(n, f)
}

fn c11() -> Outcome {
    let spec = RonkinSpec::default();
    let mut notes = Vec::new();

    let mut worst: f64 = 0.0;
    for (idx, c) in [(TriangleIndex::new(1, 1, 1), 2.5), (TriangleIndex::new(2, 0, 0), 0.3), (TriangleIndex::new(0, 1, 3), 7.0)] {
        let f = form(idx.degree(), |t| if t == idx { c } else { 0.0 });
        for p in [[0.0, 0.0, 0.0], [1.5, -2.0, 0.25], [-3.0, 4.0, 1.0]] {
            let v = ronkin_value(&f, p, &spec).map_err(e)?.value;
            let want = f64::ln(c) + idx.i as f64 * p[0] + idx.j as f64 * p[1] + idx.k as f64 * p[2];
            worst = worst.max((v - want).abs());
        }
    }
    ensure(worst < 1e-10, || format!("monomial error {worst:.3e}"))?;
    notes.push(format!("monomial {worst:.1e}"));

    let line = form(1, |t| if t.k == 0 { 1.0 } else { 0.0 });
    let v = ronkin_value(&line, [0.0; 3], &RonkinSpec::with_resolution(2048)).map_err(e)?.value;
    ensure(v.abs() < 1e-4, || format!("line Jensen value {v:.3e}"))?;
    notes.push(format!("line {:.1e}", v.abs()));

    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut pencils = vec![PencilTriple::new(diag(&[4.0, 1.0]), diag(&[1.0, 1.0]), diag(&[4.0, 1.0])).map_err(e)?];
    pencils.extend((0..3).map(|s| random_pencil(2 + s % 2, &mut rng)));
    let mut forms: Vec<TernaryForm<f64>> = vec![TernaryForm::linear(1.0, 1.0, 3.0).mul(&TernaryForm::linear(1.0, 2.0, 1.0))];
    for p in &pencils {
        // the exact determinant keeps the double edge root of the diagonal pencil intact
        forms.push(pencil_det_exact(&p.to_exact().map_err(e)?).map_err(e)?.to_f64());
    }
    let mut edge: f64 = 0.0;
    for f in &forms {
        for (idx, u) in edge_coefficients_1d(f).map_err(e)? {
            edge = edge.max((ronkin_coefficient(f, idx, &spec).map_err(e)? - u).abs());
        }
    }
    ensure(edge < 1e-2, || format!("edge coefficient gap {edge:.3e}"))?;
    notes.push(format!("edge {edge:.1e}"));

    let mut residual: f64 = 0.0;
    for f in &forms[1..] {
        residual = residual.max(ronkin_boundary_check(f, &spec).map_err(e)?.max_residual);
    }
    ensure(residual < 1e-2, || format!("boundary residual {residual:.3e}"))?;
    notes.push(format!("boundary {residual:.1e}"));

    let ts = [1e3f64, 1e4, 1e5];
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let mut slope: f64 = 0.0;
    for n in [2, 3] {
        let h = Hive::quadratic(n);
        let fam = LiftedFamily::from_exponents(&h);
        let us: Vec<Vec<f64>> = ts.iter().map(|&t| ronkin_coefficients(&fam.instantiate(t), &spec)).collect::<Result<_, _>>().map_err(e)?;
        for (p, want) in h.values().iter().enumerate() {
            let ys: Vec<f64> = us.iter().map(|u| u[p]).collect();
            slope = slope.max((ls_slope(&xs, &ys) - q_to_f64(want)).abs());
        }
    }
    ensure(slope < 0.05, || format!("slope error {slope:.3e}"))?;
    notes.push(format!("slopes {slope:.1e}"));
    Ok(notes.join(", "))
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let mut least: f64 = f64::INFINITY;
    for s in 0..50 {
        let fam = RMatrixFamily::random(&mut rng);
        let r = hive4_check(&fam, &HIVE4_TGRID).map_err(e)?;
        ensure(r.inequalities.len() == 15, || "expected 15 inequalities".into())?;
        ensure(r.all_hold, || format!("quadruple {s} violates an inequality"))?;
        least = r.inequalities.iter().map(|i| i.rhs - i.lhs).fold(least, f64::min);
    }
    let id = hive4_check(&RMatrixFamily::identity(), &HIVE4_TGRID).map_err(e)?;
    ensure(id.inequalities.iter().all(|i| i.tight), || "identity is not tight".into())?;
    Ok(format!("50 quadruples hold (least slack {least:.2e}); identity tight"))
}

fn c13() -> Outcome {
    let t = 1e6f64;
    let lt = t.ln();
    let h = Hive::quadratic(2);
    let f = LiftedFamily::from_exponents(&h).instantiate(t);
    let cloud = amoeba_sample(&f, &AmoebaSpec { moduli: 512, phases: 64, log_min: -4.0 * lt, log_max: 4.0 * lt });
    let d = one_sided_distance(&cloud.scaled(1.0 / lt), &tropical_curve(&h), [0.0, 0.0], 2.0);
    ensure(d < 0.05, || format!("distance {d:.4}"))?;
    Ok(format!("distance {d:.4} on the window of radius 2 at t=1e6"))
}

#[test]
fn acceptance() {
    let results = [
        crit(1, "hive predicate vs regular subdivision", 10.0, c1),
        crit(2, "strict-hive families are hyperbolic", 60.0, c2),
        crit(3, "non-hive families fail, short-path witness", 30.0, c3),
        crit(4, "patchwork topology", 5.0, c4),
        crit(5, "singular values round trip", 30.0, c5),
        crit(6, "positive coefficients, backward and shifted hive", 60.0, c6),
        crit(7, "boundary bound and slopes", 60.0, c7),
        crit(8, "Horn feasibility", 30.0, c8),
        crit(9, "honeycomb duality", 10.0, c9),
        crit(10, "direct sum and convolution", 20.0, c10),
        crit(11, "Ronkin suite", 120.0, c11),
        crit(12, "four-matrix inequalities", 30.0, c12),
        crit(13, "amoeba convergence", 60.0, c13),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

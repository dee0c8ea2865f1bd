use std::f64::consts::{LN_2, PI};
use std::fs;
use std::time::Instant;

use driftlab::asymptotics::{closed_form, laplace_integral, product_formula, AsymptoticValue, LaplaceIntegrand};
use driftlab::bounds::{
    difference_interval, multiwell_upper_bound, no_decay_certificate, p2_envelope, well_upper_bound, WellParams,
};
use driftlab::eigen::{
    adjoint_eigenfunction, assemble_pencil, eigs_bisection, principal_eig, principal_for, schrodinger_principal,
    selfadjoint_check, DEFAULT_RTOL, MAX_WEIGHT_SPREAD,
};
use driftlab::export::{self, section_rows, timestamp, write_json_file, write_records_file, write_table_file};
use driftlab::pde2d::{
    adjoint_profile, estimate_decay_with, extract_profile, DecayOptions, InitialCondition, NormSample, State2D, Stepper,
};
use driftlab::potential::{check_assumption_ab, DriftSamples};
use driftlab::sweep::run_sweep;
use driftlab::wells::{detect_wells, WellReport, WellSource};
use driftlab::{build_field_2d, build_potential_1d, Field2D, FieldKind, Grid1D, Grid2D, Potential1D, PotentialKind};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

const IDS_1D: &[&str] = &["power", "power-law", "power_law", "linear", "sine", "quartic", "constant"];
const IDS_2D: &[&str] = &["vortex", "two-vortex", "two_vortex", "constant2d", "separable", "separable-linear"];

enum Model {
    Line(Potential1D),
    Plane(Field2D),
}

fn potential_id(cfg: &RunConfig) -> &str {
    cfg.potential.as_deref().unwrap_or("linear")
}

fn kind_1d(cfg: &RunConfig) -> Result<PotentialKind, CliError> {
    let id = potential_id(cfg);
    if !IDS_1D.contains(&id) {
        return Err(CliError::Config(format!("`{id}` is not a 1D potential (one of {})", IDS_1D.join(", "))));
    }
    Ok(PotentialKind::from_id(id, cfg.alpha, cfg.c)?)
}

fn potential_1d(cfg: &RunConfig) -> Result<Potential1D, CliError> {
    let grid = Grid1D::new(cfg.l.unwrap_or(1.0), cfg.n.unwrap_or(4001))?;
    Ok(build_potential_1d(kind_1d(cfg)?, grid)?)
}

/// Default 2D resolution for time stepping (h = 0.02).
const NX_EVOLVE: usize = 99;
/// Default 2D resolution for well detection and bounds (h = 0.005); the default
/// pruning tolerance `10 h max|a|` drops the two-vortex wells at h = 0.02.
const NX_WELLS: usize = 399;

fn field_2d(cfg: &RunConfig, default_nx: usize) -> Result<Field2D, CliError> {
    let id = potential_id(cfg);
    if !IDS_2D.contains(&id) {
        return Err(CliError::Config(format!("`{id}` is not a 2D field (one of {})", IDS_2D.join(", "))));
    }
    let nx = cfg.nx.unwrap_or(default_nx);
    let l = cfg.l.unwrap_or(1.0);
    let grid = Grid2D::new(l, l, nx, cfg.ny.unwrap_or(nx))?;
    Ok(build_field_2d(FieldKind::from_id(id, cfg.c)?, grid)?)
}

fn model(cfg: &RunConfig) -> Result<Model, CliError> {
    if IDS_2D.contains(&potential_id(cfg)) {
        Ok(Model::Plane(field_2d(cfg, NX_WELLS)?))
    } else {
        Ok(Model::Line(potential_1d(cfg)?))
    }
}

fn prepare_out(cfg: &RunConfig) -> Result<std::path::PathBuf, CliError> {
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

/// `Some(v)` as its shortest decimal, `None` as an empty cell.
fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn eig1d(cfg: &RunConfig) -> Result<Value, CliError> {
    let pot = potential_1d(cfg)?;
    let p = cfg.require_p()?;
    let rtol = cfg.rtol.unwrap_or(DEFAULT_RTOL);
    let m = cfg.m.unwrap_or(1);
    let start = Instant::now();
    let pencil = assemble_pencil(&pot, p)?;
    let pairs = if m == 1 { vec![principal_eig(&pencil, rtol)?] } else { eigs_bisection(&pencil, m, rtol)? };
    let runtime = start.elapsed().as_secs_f64();
    let v1 = adjoint_eigenfunction(&pairs[0], &pot, p)?;

    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    let summary = json!({
        "potential": potential_id(cfg),
        "kind": pot.kind,
        "l": pot.grid.l,
        "n": pot.n(),
        "p": p,
        "rtol": rtol,
        "runtime_s": runtime,
        "pairs": pairs.iter().map(|e| json!({
            "index": e.index,
            "lambda": e.lambda,
            "log_lambda": e.lambda.ln(),
            "residual": e.residual,
            "iterations": e.iterations,
        })).collect::<Vec<_>>(),
    });
    write_json_file(&dir.join("eigen.json"), "eigen", &summary, ts)?;

    let mut columns = vec!["x".to_string()];
    columns.extend((1..=pairs.len()).map(|k| format!("u{k}")));
    columns.push("v1".into());
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let n = pot.n();
    let rows: Vec<Vec<f64>> = (0..n + 2)
        .map(|j| {
            let inner = |v: &[f64]| if j == 0 || j == n + 1 { 0.0 } else { v[j - 1] };
            let mut row = vec![pot.grid.x_full(j)];
            row.extend(pairs.iter().map(|e| inner(&e.u)));
            row.push(inner(&v1));
            row
        })
        .collect();
    write_table_file(&dir.join("eigenfunction.csv"), "eigenfunction", &cols, &rows, ts)?;
    Ok(summary)
}

#[derive(Serialize)]
struct AsymRow {
    p: f64,
    product: AsymptoticValue,
    closed: Option<AsymptoticValue>,
    rel_gap: Option<f64>,
}

pub fn asym(cfg: &RunConfig) -> Result<Value, CliError> {
    let pot = potential_1d(cfg)?;
    let kind = kind_1d(cfg)?;
    let mut rows = Vec::new();
    for p in cfg.ps()? {
        let product = product_formula(&pot, p)?;
        let closed = closed_form(kind, pot.grid.l, p).ok();
        let rel_gap = closed.as_ref().map(|c| (product.log_lambda - c.log_lambda).abs() / c.log_lambda.abs());
        rows.push(AsymRow { p, product, closed, rel_gap });
    }
    let check = check_assumption_ab(&pot, None);
    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    let summary = json!({ "potential": potential_id(cfg), "l": pot.grid.l, "n": pot.n(), "assumption": check, "rows": rows });
    write_json_file(&dir.join("asym.json"), "asym", &summary, ts)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.p.to_string(),
                r.product.log_lambda.to_string(),
                cell(r.product.rel_error),
                cell(r.closed.as_ref().map(|c| c.log_lambda)),
                cell(r.rel_gap),
            ]
        })
        .collect();
    write_records_file(
        &dir.join("asym.csv"),
        "asym",
        &["p", "log_lambda_product", "quad_rel_error", "log_lambda_closed", "rel_gap"],
        &table,
        ts,
    )?;
    Ok(summary)
}

fn bounds_rows<S: DriftSamples + WellSource>(src: &S, ps: &[f64], wells: &WellReport) -> Result<Vec<Value>, CliError> {
    let mut rows = Vec::new();
    for &p in ps {
        let env = p2_envelope(src, p, None)?;
        let cert = if p > 0.0 { Some(no_decay_certificate(src, p)?) } else { None };
        let well = match wells.deepest {
            Some(d) => match well_upper_bound(src, &wells.wells[d], p, WellParams::default()) {
                Ok(b) => json!(b),
                Err(e) => json!({ "error": e.to_string() }),
            },
            None => Value::Null,
        };
        rows.push(json!({ "p": p, "envelope": env, "certificate": cert, "well": well }));
    }
    Ok(rows)
}

pub fn bounds(cfg: &RunConfig) -> Result<Value, CliError> {
    let ps = cfg.ps()?;
    let (mut rows, solver): (Vec<Value>, Vec<Option<f64>>) = match model(cfg)? {
        Model::Line(pot) => {
            let wells = detect_wells(&pot, cfg.tol)?;
            let rows = bounds_rows(&pot, &ps, &wells)?;
            let rtol = cfg.rtol.unwrap_or(DEFAULT_RTOL);
            let solver = ps
                .iter()
                .map(|&p| {
                    let spread = p * (pot.b_max() - pot.b_min());
                    (spread <= MAX_WEIGHT_SPREAD).then(|| principal_for(&pot, p, rtol).ok().map(|e| e.lambda)).flatten()
                })
                .collect();
            (rows, solver)
        }
        Model::Plane(field) => {
            let wells = detect_wells(&field, cfg.tol)?;
            (bounds_rows(&field, &ps, &wells)?, vec![None; ps.len()])
        }
    };
    for (row, lam) in rows.iter_mut().zip(&solver) {
        row["lambda_solver"] = json!(lam);
    }
    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    let summary = json!({ "potential": potential_id(cfg), "rows": rows });
    write_json_file(&dir.join("bounds.json"), "bounds", &summary, ts)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let f = |v: &Value| v.as_f64();
            vec![
                r["p"].to_string(),
                cell(f(&r["envelope"]["lower"])),
                cell(f(&r["envelope"]["log_upper"])),
                cell(f(&r["well"]["log_upper_explicit"])),
                cell(f(&r["well"]["log_upper_quotient"])),
                cell(f(&r["lambda_solver"]).map(f64::ln)),
            ]
        })
        .collect();
    write_records_file(
        &dir.join("bounds.csv"),
        "bounds",
        &["p", "lower", "log_upper_envelope", "log_upper_explicit", "log_upper_quotient", "log_lambda_solver"],
        &table,
        ts,
    )?;
    Ok(summary)
}

fn well_summary<S: WellSource>(src: &S, report: &WellReport, coords: impl Fn(usize) -> Vec<f64>, p: Option<f64>) -> Value {
    let wells: Vec<Value> = report
        .wells
        .iter()
        .map(|w| {
            json!({
                "min_location": coords(w.min_location),
                "min_value": w.min_value,
                "barrier_value": w.barrier_value,
                "depth": w.depth,
                "region_size": w.region_size(),
            })
        })
        .collect();
    let multi = match p {
        Some(p) if report.wells.len() >= 2 => match multiwell_upper_bound(src, &report.wells, p, &[]) {
            Ok(b) => json!(b),
            Err(e) => json!({ "error": e.to_string() }),
        },
        _ => Value::Null,
    };
    json!({ "b0": report.b0(), "tol": report.tol, "wells": wells, "multiwell_bound": multi })
}

pub fn well(cfg: &RunConfig) -> Result<Value, CliError> {
    let summary = match model(cfg)? {
        Model::Line(pot) => {
            let r = detect_wells(&pot, cfg.tol)?;
            well_summary(&pot, &r, |i| vec![pot.grid.x(i)], cfg.p)
        }
        Model::Plane(f) => {
            let r = detect_wells(&f, cfg.tol)?;
            let g = f.grid;
            well_summary(&f, &r, |k| { let (x, y) = g.xy(k % g.nx, k / g.nx); vec![x, y] }, cfg.p)
        }
    };
    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    let out = json!({ "potential": potential_id(cfg), "report": summary });
    write_json_file(&dir.join("wells.json"), "wells", &out, ts)?;
    let rows: Vec<Vec<String>> = summary["wells"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|w| {
            let loc: Vec<String> = w["min_location"].as_array().into_iter().flatten().map(|v| v.to_string()).collect();
            vec![loc.join(" "), w["min_value"].to_string(), w["barrier_value"].to_string(), w["depth"].to_string()]
        })
        .collect();
    write_records_file(&dir.join("wells.csv"), "wells", &["min_location", "min_value", "barrier_value", "depth"], &rows, ts)?;
    Ok(out)
}

pub fn sweep(cfg: &RunConfig) -> Result<Value, CliError> {
    let kind = kind_1d(cfg)?;
    let ps = cfg.p_list.clone().ok_or_else(|| CliError::Config("sweep needs p_list".into()))?;
    let res = run_sweep(kind, cfg.l.unwrap_or(1.0), cfg.n.unwrap_or(4001), &ps, cfg.rtol.unwrap_or(DEFAULT_RTOL))?;
    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    let rows: Vec<Vec<String>> = res
        .rows
        .iter()
        .map(|r| {
            vec![
                r.p.to_string(),
                cell(r.lambda_solver),
                cell(r.lambda_solver.map(f64::ln)),
                cell(r.log_lambda_asym),
                cell(r.log_lambda_closed),
                cell(finite(r.log_upper)),
                cell(finite(r.lower)),
                cell(r.rate_running),
            ]
        })
        .collect();
    write_records_file(
        &dir.join("sweep.csv"),
        "sweep",
        &["p", "lambda_solver", "log_lambda_solver", "log_lambda_asym", "log_lambda_closed", "log_upper", "lower", "rate_running"],
        &rows,
        ts,
    )?;
    let fit = json!({
        "potential": potential_id(cfg),
        "fit": res.fit,
        "fitted_b0": res.fit.as_ref().map(|f| f.b0),
        "fit_note": res.fit_note,
        "b0_detected": res.b0_detected,
        "b0_gap": res.b0_gap,
    });
    write_json_file(&dir.join("fit.json"), "sweep-fit", &fit, ts)?;
    Ok(fit)
}

pub fn evolve2d(cfg: &RunConfig) -> Result<Value, CliError> {
    let field = field_2d(cfg, NX_EVOLVE)?;
    let p = cfg.require_p()?;
    let opts = DecayOptions {
        t_end: cfg.t_end.unwrap_or(2.0),
        tau: cfg.tau.unwrap_or(driftlab::pde2d::DEFAULT_TAU),
        window: cfg.window,
        ..Default::default()
    };
    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    let snap_dir = dir.join("snapshots");
    if cfg.snapshot_every.is_some() {
        fs::create_dir_all(&snap_dir)?;
    }
    let start = Instant::now();
    let (fit, state) = estimate_decay_with(&field, p, &InitialCondition::Ones, &opts, |s: &State2D, k| {
        if let Some(every) = cfg.snapshot_every {
            if k % every == 0 {
                let prof = extract_profile(s)?;
                write_table_file(&snap_dir.join(format!("u_{k:07}.csv")), "snapshot", &["x1", "x2", "u"], &export::profile_rows(&prof), ts)
                    .map_err(|e| driftlab::Error::InvalidParameter(format!("snapshot: {e}")))?;
            }
        }
        Ok(())
    })?;
    let runtime = start.elapsed().as_secs_f64();

    let norms: Vec<Vec<f64>> = fit.samples.iter().map(|s: &NormSample| vec![s.t, s.log_l2, s.log_max]).collect();
    write_table_file(&dir.join("norms.csv"), "norms", &["t", "log_l2", "log_max"], &norms, ts)?;
    let prof = extract_profile(&state)?;
    write_table_file(&dir.join("profile.csv"), "profile", &["x1", "x2", "u"], &export::profile_rows(&prof), ts)?;
    let sec = prof.section_x2_zero();
    write_table_file(&dir.join("section_x2_0.csv"), "section", &["s", "x1", "x2", "u"], &section_rows(&sec), ts)?;
    if let Some([x1, y1, x2, y2]) = cfg.line {
        let samples = 2 * field.grid.nx.max(field.grid.ny) + 1;
        let sec = prof.section([x1, y1], [x2, y2], samples);
        write_table_file(&dir.join("section_line.csv"), "section", &["s", "x1", "x2", "u"], &section_rows(&sec), ts)?;
    }
    let adjoint = match adjoint_profile(&state, &field, p) {
        Ok(v) => {
            write_table_file(&dir.join("adjoint_profile.csv"), "profile", &["x1", "x2", "v"], &export::profile_rows(&v), ts)?;
            true
        }
        Err(driftlab::Error::MissingPotential) => false,
        Err(e) => return Err(e.into()),
    };
    let summary = json!({
        "potential": potential_id(cfg),
        "p": p,
        "nx": field.grid.nx,
        "ny": field.grid.ny,
        "tau": opts.tau,
        "t_end": opts.t_end,
        "window": fit.window,
        "rate": fit.lambda_est,
        "rate_l2": fit.rate_l2,
        "rate_max": fit.rate_max,
        "plateau_flag": fit.plateau_flag,
        "plateau_tol": fit.plateau_tol,
        "adjoint_profile": adjoint,
        "runtime_s": runtime,
    });
    write_json_file(&dir.join("fit.json"), "decay-fit", &summary, ts)?;
    Ok(summary)
}

pub fn lifespan(cfg: &RunConfig) -> Result<Value, CliError> {
    let pot = potential_1d(cfg)?;
    let p = cfg.require_p()?;
    let spread = p * (pot.b_max() - pot.b_min());
    let (log_lambda, source, v1) = if spread <= MAX_WEIGHT_SPREAD {
        let pair = principal_for(&pot, p, cfg.rtol.unwrap_or(DEFAULT_RTOL))?;
        let v = adjoint_eigenfunction(&pair, &pot, p)?;
        (pair.lambda.ln(), "solver", Some(v))
    } else {
        (product_formula(&pot, p)?.log_lambda, "product formula", None)
    };
    let representable = |v: f64| (v.abs() < 700.0).then(|| v.exp());
    let log_life = -log_lambda;
    let log_half = LN_2.ln() - log_lambda;
    let summary = json!({
        "potential": potential_id(cfg),
        "p": p,
        "source": source,
        "lambda": representable(log_lambda),
        "log_lambda": log_lambda,
        "lifespan": representable(log_life),
        "log_lifespan": log_life,
        "half_life": representable(log_half),
        "log_half_life": log_half,
    });
    let dir = prepare_out(cfg)?;
    let ts = timestamp();
    write_json_file(&dir.join("lifespan.json"), "lifespan", &summary, ts)?;
    if let Some(v) = v1 {
        let rows: Vec<Vec<f64>> = (0..pot.n()).map(|i| vec![pot.grid.x(i), v[i]]).collect();
        write_table_file(&dir.join("v1.csv"), "profile", &["x", "v1"], &rows, ts)?;
    }
    Ok(summary)
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn selfchecks(seed: u64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let line = |kind, l, n| build_potential_1d(kind, Grid1D::new(l, n).unwrap());
    let linear = PotentialKind::PowerLaw { alpha: 2.0 };

    let lam = principal_for(&line(PotentialKind::Constant { c: 0.0 }, 1.0, 1001)?, 0.0, 1e-12)?.lambda;
    let rel = (lam - PI * PI / 4.0).abs() / (PI * PI / 4.0);
    out.push(Check { name: "dirichlet baseline", passed: rel < 1e-5, detail: format!("rel err {rel:e}") });

    let pot = line(PotentialKind::Constant { c: 1.0 }, 1.0, 2001)?;
    let shift = principal_for(&pot, 5.0, 1e-12)?.lambda - principal_for(&pot, 0.0, 1e-12)?.lambda;
    let rel = (shift - 6.25).abs() / 6.25;
    out.push(Check { name: "constant drift shift", passed: rel < 1e-4, detail: format!("rel err {rel:e}") });

    let mut rng = StdRng::seed_from_u64(seed);
    let (n, h) = (99, 2.0 / 100.0);
    let mut bad = 0;
    for _ in 0..50 {
        let q1: Vec<f64> = (0..n).map(|_| rng.random_range(-20.0..20.0)).collect();
        let q2: Vec<f64> = (0..n).map(|_| rng.random_range(-20.0..20.0)).collect();
        let d = schrodinger_principal(&q1, h, 1e-14) - schrodinger_principal(&q2, h, 1e-14);
        let lo = q1.iter().zip(&q2).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
        let hi = q1.iter().zip(&q2).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
        if d < lo - 1e-9 || d > hi + 1e-9 {
            bad += 1;
        }
    }
    out.push(Check { name: "comparison interval", passed: bad == 0, detail: format!("{bad} of 50 random pairs outside") });

    let pot = line(PotentialKind::Sine, 2.0, 1001)?;
    let (l1, l2) = (principal_for(&pot, 4.0, 1e-12)?.lambda, principal_for(&pot, 1.0, 1e-12)?.lambda);
    let iv = difference_interval(&pot, 4.0, 1.0)?;
    out.push(Check {
        name: "difference interval",
        passed: iv.contains(l1 - l2, 1e-3),
        detail: format!("{} in [{}, {}]", l1 - l2, iv.lo, iv.hi),
    });

    let sa = selfadjoint_check(&line(linear, 1.0, 2001)?, 10.0, 1e-4)?;
    let gap = sa.rel_discrepancy.unwrap_or(f64::INFINITY);
    out.push(Check { name: "self-adjoint route", passed: gap < 5e-5, detail: format!("rel gap {gap:e}") });

    let g = Grid1D::new(1.0, 401)?;
    let base = Potential1D::from_samples(g, g.full().iter().map(|x| x * x / 2.0).collect())?;
    let moved = Potential1D::from_samples(g, g.full().iter().map(|x| x * x / 2.0 + 7.0).collect())?;
    let (a, b) = (product_formula(&base, 50.0)?.log_lambda, product_formula(&moved, 50.0)?.log_lambda);
    out.push(Check { name: "product formula shift invariance", passed: (a - b).abs() < 1e-9, detail: format!("{a} vs {b}") });

    let lin = |x: f64| x;
    let got = laplace_integral(LaplaceIntegrand::Analytic(&lin), 1.0, 1.0, 1e3)?.log_value;
    let exact = (-(-1e3f64).exp_m1()).ln() - 1e3f64.ln();
    out.push(Check { name: "laplace oracle", passed: (got - exact).abs() < 1e-8, detail: format!("gap {:e}", got - exact) });

    let g2 = Grid2D::new(1.0, 1.0, 21, 21)?;
    let f = build_field_2d(FieldKind::two_vortices(), g2)?;
    let init: Vec<f64> = (0..g2.len()).map(|_| rng.random_range(0.0..1.0)).collect();
    let top = init.iter().copied().fold(0.0, f64::max);
    let run = |every: usize| -> Result<(f64, bool), CliError> {
        let mut s = State2D::new(g2, &InitialCondition::Values(init.clone()), 1e-3)?;
        let mut st = Stepper::new(&f, 50.0, 1e-3)?;
        st.renorm_every = every;
        let mut bounded = true;
        for _ in 0..40 {
            st.step(&mut s)?;
            if every == 0 {
                bounded &= s.u.iter().all(|&v| v >= -1e-12 && v <= top + 1e-12);
            }
        }
        Ok((s.log_l2_norm(), bounded))
    };
    let (raw, bounded) = run(0)?;
    let (renorm, _) = run(3)?;
    out.push(Check { name: "maximum principle", passed: bounded, detail: format!("0 <= u <= {top}") });
    out.push(Check {
        name: "renormalization invariance",
        passed: (raw - renorm).abs() < 1e-10,
        detail: format!("log norm gap {:e}", raw - renorm),
    });
    Ok(out)
}

pub fn selfcheck(cfg: &RunConfig) -> Result<Value, CliError> {
    let seed = cfg.seed.unwrap_or(0);
    let checks = selfchecks(seed)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let summary = json!({
        "seed": seed,
        "passed": failed.is_empty(),
        "checks": checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
    });
    let dir = prepare_out(cfg)?;
    write_json_file(&dir.join("selfcheck.json"), "selfcheck", &summary, timestamp())?;
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(CliError::Numerical(format!("self-check failed: {}", failed.join(", "))))
    }
}

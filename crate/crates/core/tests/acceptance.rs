//! Acceptance criteria 1 to 10. Each test prints one `PASS`/`FAIL` line.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use driftlab::asymptotics::{closed_form, laplace_integral, laplace_predict, product_formula, LaplaceIntegrand};
use driftlab::eigen::{principal_for, principal_richardson, schrodinger_principal};
use driftlab::pde2d::{
    adjoint_profile, estimate_decay, extract_profile, richardson_first_order, DecayOptions, InitialCondition, State2D,
    Stepper,
};
use driftlab::sweep::{run_sweep, SweepResult};
use driftlab::{build_field_2d, build_potential_1d, FieldKind, Grid1D, Grid2D, PotentialKind};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn report(id: u32, pass: bool, detail: String) {
    // written to the raw handle so the line shows up without --nocapture
    let _ = writeln!(std::io::stderr(), "{} criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn linear() -> PotentialKind {
    PotentialKind::PowerLaw { alpha: 2.0 }
}

#[test]
fn criterion_01_dirichlet_baseline() {
    let t0 = Instant::now();
    let pot = build_potential_1d(PotentialKind::Constant { c: 0.0 }, Grid1D::new(1.0, 4001).unwrap()).unwrap();
    let lam = principal_for(&pot, 0.0, 1e-12).unwrap().lambda;
    let exact = PI * PI / 4.0;
    let rel1 = (lam - exact).abs() / exact;
    let t1 = t0.elapsed();

    let f = build_field_2d(FieldKind::Constant { c1: 0.0, c2: 0.0 }, Grid2D::square_with_spacing(1.0, 0.02).unwrap())
        .unwrap();
    let opts = DecayOptions { t_end: 2.0, tau: 5e-4, ..Default::default() };
    let (fit, _) = estimate_decay(&f, 0.0, &InitialCondition::Ones, &opts).unwrap();
    let rel2 = (fit.lambda_est - PI * PI / 2.0).abs() / (PI * PI / 2.0);
    let t2 = t0.elapsed() - t1;
    report(
        1,
        rel1 < 1e-5 && rel2 < 0.05 && t1.as_secs_f64() < 10.0 && t2.as_secs_f64() < 120.0,
        format!(
            "1D lambda {lam:.9} rel err {rel1:.2e} ({:.2}s); 2D rate {:.5} rel err {rel2:.2e} ({:.1}s)",
            t1.as_secs_f64(),
            fit.lambda_est,
            t2.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_constant_drift_shift() {
    let mut worst = 0.0f64;
    for c in [0.5, 1.0, 2.0] {
        let pot = build_potential_1d(PotentialKind::Constant { c }, Grid1D::new(1.0, 4001).unwrap()).unwrap();
        let l0 = principal_for(&pot, 0.0, 1e-13).unwrap().lambda;
        for p in [5.0, 10.0] {
            let lp = principal_for(&pot, p, 1e-13).unwrap().lambda;
            let want = p * p * c * c / 4.0;
            worst = worst.max(((lp - l0) - want).abs() / want);
        }
    }
    report(2, worst < 1e-4, format!("worst relative error of lambda(p) - lambda(0) vs p^2 c^2/4: {worst:.2e}"));
}

#[test]
fn criterion_03_product_formula_convergence() {
    let pot = build_potential_1d(linear(), Grid1D::new(1.0, 4001).unwrap()).unwrap();
    let mut devs = Vec::new();
    let mut ratio20 = 0.0;
    for p in [20.0, 30.0, 40.0, 60.0] {
        let lam = principal_richardson(linear(), 1.0, 4001, p, 1e-13).unwrap().lambda;
        let asym = product_formula(&pot, p).unwrap().log_lambda;
        let ratio = (lam.ln() - asym).exp();
        if p == 20.0 {
            ratio20 = ratio;
        }
        devs.push((p, (ratio - 1.0).abs()));
    }
    let monotone = devs.windows(2).all(|w| w[1].1 < w[0].1);
    let pass = (0.8..=1.25).contains(&ratio20) && monotone;
    let list: Vec<String> = devs.iter().map(|(p, d)| format!("p={p}: {d:.2e}")).collect();
    report(3, pass, format!("ratio at p=20 {ratio20:.6}; |ratio - 1| {}", list.join(", ")));
}

#[test]
fn criterion_04_closed_form_catalog() {
    let cases = [
        (PotentialKind::PowerLaw { alpha: 1.0 }, 1.0),
        (PotentialKind::PowerLaw { alpha: 2.0 }, 1.0),
        (PotentialKind::PowerLaw { alpha: 3.0 }, 1.0),
        (PotentialKind::Sine, PI / 2.0),
        (PotentialKind::Sine, PI),
        (PotentialKind::Sine, 1.5 * PI),
        (PotentialKind::Quartic, 2.0),
    ];
    let mut worst = 0.0f64;
    let mut finite = true;
    for (kind, l) in cases {
        let pot = build_potential_1d(kind, Grid1D::new(l, 4001).unwrap()).unwrap();
        let pf = product_formula(&pot, 100.0).unwrap().log_lambda;
        let cf = closed_form(kind, l, 100.0).unwrap().log_lambda;
        worst = worst.max((pf - cf).abs() / cf.abs());
        for p in [1e3, 1e4, 1e5, 1e6] {
            let pf = product_formula(&pot, p).unwrap().log_lambda;
            let cf = closed_form(kind, l, p).unwrap().log_lambda;
            finite &= pf.is_finite() && cf.is_finite() && (pf - cf).abs() / cf.abs() < 0.03;
        }
    }
    report(
        4,
        worst < 0.03 && finite,
        format!("worst relative log gap at p=100: {worst:.2e}; finite and consistent up to p=1e6: {finite}"),
    );
}

fn acceptance_sweeps() -> Vec<(&'static str, SweepResult)> {
    let ps_linear: Vec<f64> = (1..=6).map(|k| 10.0 * k as f64).collect();
    let ps_long: Vec<f64> = vec![10.0, 20.0, 40.0, 60.0, 80.0, 100.0];
    vec![
        ("a=x", run_sweep(linear(), 1.0, 4001, &ps_linear, 1e-10).unwrap()),
        ("sine l=3pi/2", run_sweep(PotentialKind::Sine, 1.5 * PI, 4001, &ps_long, 1e-10).unwrap()),
        ("quartic l=2", run_sweep(PotentialKind::Quartic, 2.0, 4001, &ps_long, 1e-10).unwrap()),
    ]
}

#[test]
fn criterion_05_decay_exponent_recovery() {
    let t0 = Instant::now();
    let sweeps = acceptance_sweeps();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, s) in &sweeps {
        let fitted = s.fit.as_ref().map(|f| f.b0).unwrap_or(f64::NAN);
        let detected = s.b0_detected.unwrap_or(f64::NAN);
        let rel = (fitted - detected).abs() / detected;
        pass &= rel < 0.05;
        parts.push(format!("{name}: fitted {fitted:.4} detected {detected:.4}"));
    }
    let secs = t0.elapsed().as_secs_f64();
    report(5, pass && secs < 300.0, format!("{} ({secs:.1}s)", parts.join("; ")));
}

#[test]
fn criterion_06_bounds_sandwich() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, s) in acceptance_sweeps() {
        for row in &s.rows {
            let Some(lam) = row.lambda_solver else { continue };
            checked += 1;
            let (Some(e), Some(q)) = (row.log_upper_explicit, row.log_upper_quotient) else {
                failures.push(format!("{name} p={}: no well bound", row.p));
                continue;
            };
            let ok = row.lower <= lam && lam.ln() <= e.min(q) && q <= e;
            if !ok {
                failures.push(format!("{name} p={}", row.p));
            }
        }
    }
    report(
        6,
        failures.is_empty() && checked > 0,
        format!("{checked} (potential, p) pairs checked; violations: {failures:?}"),
    );
}

#[test]
fn criterion_07_comparison_property() {
    let n = 199;
    let h = 2.0 / (n + 1) as f64;
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..200 {
        let amp = rng.random_range(0.1..50.0);
        let q1: Vec<f64> = (0..n).map(|_| rng.random_range(-amp..amp)).collect();
        let q2: Vec<f64> = (0..n).map(|_| rng.random_range(-amp..amp)).collect();
        let l1 = schrodinger_principal(&q1, h, 1e-14);
        let l2 = schrodinger_principal(&q2, h, 1e-14);
        let lo = q1.iter().zip(&q2).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
        let hi = q1.iter().zip(&q2).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
        let d = l1 - l2;
        let slack = 1e-10 * (l1.abs() + l2.abs() + 1.0);
        worst_excess = worst_excess.max((lo - d).max(d - hi) - slack);
    }
    report(7, worst_excess <= 0.0, format!("200 random pairs; worst excess beyond the interval {worst_excess:.3e}"));
}

#[test]
fn criterion_08_laplace_oracle() {
    let lin = |x: f64| x;
    let sq = |x: f64| x * x;
    let mut worst = 0.0f64;
    let mut monotone = true;
    for (mu, g) in [(1.0, &lin as &dyn Fn(f64) -> f64), (2.0, &sq as &dyn Fn(f64) -> f64)] {
        let mut prev = f64::INFINITY;
        for p in [1e2, 1e3, 1e4] {
            let got = laplace_integral(LaplaceIntegrand::Analytic(g), 1.0, mu, p).unwrap().log_value;
            let exact: f64 = if mu == 1.0 {
                (-(-p).exp_m1()).ln() - p.ln()
            } else {
                (0.5 * (PI / p).sqrt() * statrs::function::erf::erf(p.sqrt())).ln()
            };
            worst = worst.max(((got - exact).exp() - 1.0).abs());
            let dev = ((got - laplace_predict(mu, p).unwrap()).exp() - 1.0).abs();
            monotone &= dev <= prev || dev < 1e-14;
            prev = dev;
        }
    }
    report(
        8,
        worst < 1e-8 && monotone,
        format!("worst relative error vs closed forms {worst:.2e}; ratio to Gamma(1/mu+1) p^(-1/mu) tends to 1: {monotone}"),
    );
}

#[test]
fn criterion_09_separability() {
    let t0 = Instant::now();
    let kind = FieldKind::from_id("separable", None).unwrap();
    let mut rates = Vec::new();
    for (h, tau) in [(0.02, 5e-4), (0.01, 2.5e-4)] {
        let f = build_field_2d(kind.clone(), Grid2D::square_with_spacing(1.0, h).unwrap()).unwrap();
        let opts = DecayOptions { t_end: 1.5, tau, ..Default::default() };
        rates.push(estimate_decay(&f, 10.0, &InitialCondition::Ones, &opts).unwrap().0.lambda_est);
    }
    let est = richardson_first_order(rates[0], rates[1]);
    let one_d = principal_richardson(linear(), 1.0, 4001, 10.0, 1e-13).unwrap().lambda;
    let rel = (est - 2.0 * one_d).abs() / (2.0 * one_d);
    report(
        9,
        rel < 0.05,
        format!(
            "rates {:.5} (h=0.02), {:.5} (h=0.01), extrapolated {est:.5}; twice 1D {:.5}; rel gap {rel:.2e} ({:.0}s)",
            rates[0],
            rates[1],
            2.0 * one_d,
            t0.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_10_colony_reproduction() {
    let t0 = Instant::now();
    let g = Grid2D::square_with_spacing(1.0, 0.02).unwrap();
    let tau = 5e-4;

    let two = build_field_2d(FieldKind::two_vortices(), g).unwrap();
    let mut s = State2D::new(g, &InitialCondition::Ones, tau).unwrap();
    let mut st = Stepper::new(&two, 100.0, tau).unwrap();
    for _ in 0..2000 {
        st.step(&mut s).unwrap();
    }
    let v = adjoint_profile(&s, &two, 100.0).unwrap();
    let right = v.range_in_disk([0.5, 0.4], 0.4).unwrap().1;
    let left = v.range_in_disk([-2.0 / 3.0, -0.3], 0.25).unwrap().1;
    let ratio = right / left;
    let ratio_ok = ratio > 1.0 / 1500.0 && ratio < 3.0 / 500.0;

    let vortex = build_field_2d(FieldKind::centered_vortex(), g).unwrap();
    let mut s = State2D::new(g, &InitialCondition::Ones, tau).unwrap();
    let mut st = Stepper::new(&vortex, 40.0, tau).unwrap();
    for _ in 0..2000 {
        st.step(&mut s).unwrap();
    }
    let (lo, hi) = extract_profile(&s).unwrap().range_in_disk([0.0, 0.0], 0.5).unwrap();
    let flat_ok = hi - lo < 0.05;
    let secs = t0.elapsed().as_secs_f64();
    report(
        10,
        ratio_ok && flat_ok && secs < 900.0,
        format!(
            "colony peak ratio 1/{:.0} (ok: {ratio_ok}); vortex p=40 max-min on the support {:.3} (ok: {flat_ok}) ({secs:.0}s)",
            1.0 / ratio,
            hi - lo
        ),
    );
}

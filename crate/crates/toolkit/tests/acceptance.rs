//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always shown; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bergman_core::diskquad::QuadratureSpec;
use bergman_core::extremal::{self, SearchConfig};
use bergman_core::funcspace::{geom_partial_closed, AnalyticFn};
use bergman_core::norms::{bloch_seminorm, functional_p, weighted_sup, SupGrid};
use bergman_core::operators::{
    adjoint_quad, adjoint_series, project_analytic, project_polynomial_series, AdjointForm,
};
use bergman_core::{c64, Complex64};
use bergman_toolkit::search::search_parallel;
use bergman_toolkit::verify::{self, VerifyConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<Complex64> {
    let degree = rng.gen_range(0..=max_degree);
    (0..=degree)
        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// `Σ_{k=0}^{n} (k+1)(k+2) s^k` by plain summation.
fn geom_oracle(n: usize, s: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = 1.0;
    for k in 0..=n {
        sum += ((k + 1) * (k + 2)) as f64 * p;
        p *= s;
    }
    sum
}

fn criterion_1() -> Outcome {
    let s_list: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).chain([0.99]).collect();
    let mut worst: f64 = 0.0;
    for n in [0, 1, 5, 20, 100, 10_000] {
        for &s in &s_list {
            let closed = geom_partial_closed(n, s).unwrap();
            let direct = geom_oracle(n, s);
            worst = worst.max((closed - direct).abs() / direct);
        }
    }
    let limit = geom_partial_closed(100_000, 0.5).unwrap() * 0.125 / 2.0;
    outcome(
        worst <= 1e-10 && (limit - 1.0).abs() <= 1e-6,
        format!("max rel error {worst:.2e}, S_1e5(0.5)(1-0.5)^3/2 = {limit:.12}"),
    )
}

fn polar_points() -> Vec<Complex64> {
    (1..=5)
        .flat_map(|i| {
            let rho = 0.18 * i as f64;
            (0..8).map(move |j| Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / 8.0))
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let form = AdjointForm::invariant();
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut unconverged = 0;
    for _ in 0..20 {
        let c = random_poly(&mut rng, 12);
        let g = AnalyticFn::polynomial(c.clone()).unwrap();
        for z in polar_points() {
            // (1-|z|²)² Σ k(k+1) c_k z^k
            let series: Complex64 = c
                .iter()
                .enumerate()
                .map(|(k, ck)| ck * (k * (k + 1)) as f64 * z.powu(k as u32))
                .sum::<Complex64>()
                * (1.0 - z.norm_sqr()).powi(2);
            let quad = adjoint_quad(&g, form, z, &spec).unwrap();
            if !quad.converged {
                unconverged += 1;
            }
            worst = worst.max((quad.value - series).norm() / (1.0 + series.norm()));
        }
    }
    outcome(
        worst <= 1e-6 && unconverged == 0,
        format!("800 points, max rel error {worst:.2e}, unconverged {unconverged}"),
    )
}

fn criterion_3() -> Outcome {
    let report = verify::check_lemma5(&verify::lemma5_suite(0, 50), 1e-6);
    let max = report.metric("max_ratio").unwrap_or(f64::NAN);
    outcome(
        report.pass && max <= 4.0 + 1e-6,
        format!(
            "suite max ratio {max:.6} ({})",
            report.notes.last().cloned().unwrap_or_default()
        ),
    )
}

fn criterion_4() -> Outcome {
    let report = verify::check_lower_bound(1e-6);
    // Independent I_r oracle r²/(1-r⁴w̄²)² against the quadrature.
    let spec = QuadratureSpec::default();
    let g = AnalyticFn::LogExtremal;
    let mut worst: f64 = 0.0;
    for r in [0.5f64, 0.9] {
        for w in [c64(0.3, 0.0), c64(0.5, 0.2)] {
            let wc = w.conj();
            let oracle = r * r / (1.0 - r.powi(4) * wc * wc).powi(2);
            let q = bergman_core::operators::truncated_kernel_integral(&g, w, r, &spec).unwrap();
            worst = worst.max((q.value - oracle).norm());
        }
    }
    let norm = report.metric("bloch_norm").unwrap_or(f64::NAN);
    let sup = report.metric("kernel_sup").unwrap_or(f64::NAN);
    let violations = report.metric("kernel_sup_violations").unwrap_or(f64::NAN);
    outcome(
        report.pass && worst <= 1e-6 && sup <= 2.0 && violations == 0.0,
        format!("bloch norm {norm:.15}, kernel sup {sup:.9}, sample violations {violations}, I_r error {worst:.2e}"),
    )
}

/// `(1/C_n)(1-z²)^{-α} z Σ (k+1)(k+2) z^{2k}` with `C_n = 1 + Σ (1+1/k)^{-k/2}`.
fn growth_oracle(n: usize, alpha: f64) -> f64 {
    let z = 1.0 - 1.0 / n as f64;
    let c_n = 1.0
        + (1..=n)
            .map(|k| (1.0 + 1.0 / k as f64).powf(-(k as f64) / 2.0))
            .sum::<f64>();
    (1.0 - z * z).powf(-alpha) * z * geom_oracle(n, z * z) / c_n
}

fn criterion_5() -> Outcome {
    let grid = verify::growth_grid();
    let mut pass = true;
    let mut detail = Vec::new();
    for alpha in [-1.0, -1.5] {
        let report = verify::check_growth(alpha, &grid, 0.15);
        let points: Vec<(f64, f64)> = grid
            .iter()
            .map(|&n| (n as f64, growth_oracle(n, alpha)))
            .collect();
        let oracle_slope = verify::loglog_slope(&points);
        let slope = report.metric("slope").unwrap_or(f64::NAN);
        pass &= report.pass
            && (oracle_slope - (2.0 + alpha)).abs() <= 0.15
            && (slope - oracle_slope).abs() < 1e-9;
        detail.push(format!(
            "alpha {alpha}: slope {slope:.6} (oracle {oracle_slope:.6})"
        ));
    }
    outcome(pass, detail.join(", "))
}

fn criterion_6() -> Outcome {
    let report = verify::check_duality(&verify::default_duality_cases(), 1e-12, 1e-5);
    let prediction = report.metric("case0_prediction_re").unwrap_or(f64::NAN);
    let oracle = 2.0 * 0.9f64.powi(6) / 3.0;
    let closed = report.metric("closed_gap").unwrap_or(f64::NAN);
    let quad = report.metric("quad_gap").unwrap_or(f64::NAN);
    outcome(
        report.pass && (prediction - oracle).abs() <= 1e-12,
        format!(
            "closed gap {closed:.2e}, quadrature gap {quad:.2e}, case 1 value {prediction:.12}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut exact = true;
    let spec = QuadratureSpec::default().with_outer_radius(0.999);
    let mut worst: f64 = 0.0;
    for trial in 0..10 {
        let c = random_poly(&mut rng, 8);
        exact &= project_polynomial_series(&c) == c;
        if trial < 4 {
            let p = AnalyticFn::polynomial(c.clone()).unwrap();
            for z in [c64(0.0, 0.0), c64(0.5, 0.0), c64(-0.2, 0.4), c64(0.0, -0.5)] {
                let expected: Complex64 = c.iter().rev().fold(c64(0.0, 0.0), |acc, a| acc * z + a);
                let q = project_analytic(&p, z, &spec).unwrap();
                worst = worst.max((q.value - expected).norm());
            }
        }
    }
    outcome(
        exact && worst <= 5e-3,
        format!("series exact: {exact}, quadrature max error {worst:.2e} at outer radius 0.999"),
    )
}

fn criterion_8() -> Outcome {
    let config = SearchConfig::default();
    let a = search_parallel(&config);
    let b = extremal::search(&config);
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let in_range = a.best_value >= 2.0 - 1e-2 && a.best_value <= 4.0 + 1e-6;
            let same = a == b;
            outcome(
                in_range && same,
                format!(
                    "best ratio {:.9} at |z| = {:.4}, {} restarts, runs identical: {same}",
                    a.best_value,
                    a.witness_point.norm(),
                    a.restarts_run
                ),
            )
        }
        (a, b) => outcome(
            false,
            format!("search failed: {:?} / {:?}", a.err(), b.err()),
        ),
    }
}

fn criterion_9() -> Outcome {
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut check = |ok: bool, what: String| {
        checked += 1;
        if !ok {
            violations.push(what);
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut functions = vec![
        (
            "z^3".to_string(),
            AnalyticFn::real_polynomial(&[0.0, 0.0, 0.0, 1.0]).unwrap(),
        ),
        ("mobius".into(), AnalyticFn::mobius(c64(0.3, -0.4)).unwrap()),
        ("gzn".into(), AnalyticFn::gzn(20, c64(0.6, 0.2)).unwrap()),
    ];
    for i in 0..5 {
        functions.push((
            format!("random#{i}"),
            AnalyticFn::polynomial(random_poly(&mut rng, 10)).unwrap(),
        ));
    }

    for (name, f) in &functions {
        let bloch = bloch_seminorm(f).value;
        let p = functional_p(f).value;
        for c in [c64(2.0, 0.0), c64(-3.0, 0.0), c64(0.0, 1.0)] {
            let g = f.scaled(c);
            let b2 = bloch_seminorm(&g).value;
            let p2 = functional_p(&g).value;
            check(
                (b2 - c.norm() * bloch).abs() <= 1e-9 * c.norm() * bloch,
                format!("bloch homogeneity {name} c={c}"),
            );
            check(
                (p2 - c.norm() * p).abs() <= 1e-9 * c.norm() * p.max(1e-300),
                format!("P homogeneity {name} c={c}"),
            );
        }
        // Rotation: f(e^{iθ}z) through the same sup machinery.
        let rot = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let rotated = weighted_sup(
            |z| f.eval_deriv(rot * z).unwrap() * rot,
            1.0,
            &SupGrid::default(),
        )
        .value;
        check(
            (rotated - bloch).abs() <= 1e-9 * bloch,
            format!("rotation {name}: {rotated} vs {bloch}"),
        );
    }

    // Möbius invariance of the Bloch seminorm for polynomials, |λ| ≤ 0.5.
    for (name, f) in functions
        .iter()
        .filter(|(n, _)| n.starts_with("random") || n == "z^3")
    {
        let base = bloch_seminorm(f).value;
        for l in [c64(0.5, 0.0), c64(-0.1, 0.3)] {
            let composed = weighted_sup(
                |z| {
                    let d = 1.0 - l.conj() * z;
                    f.eval_deriv((z - l) / d).unwrap() * (1.0 - l.norm_sqr()) / (d * d)
                },
                1.0,
                &SupGrid::default(),
            )
            .value;
            check(
                (composed - base).abs() <= 1e-4 * base,
                format!("mobius invariance {name} λ={l}"),
            );
        }
    }

    // Operators: linearity and conjugation symmetry of the series adjoint.
    let form = AdjointForm::invariant();
    for _ in 0..20 {
        let a = random_poly(&mut rng, 8);
        let b = random_poly(&mut rng, 8);
        let c = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let z = Complex64::from_polar(
            rng.gen_range(0.0..0.95),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let n = a.len().max(b.len());
        let sum: Vec<Complex64> = (0..n)
            .map(|k| {
                c * a.get(k).copied().unwrap_or_default() + b.get(k).copied().unwrap_or_default()
            })
            .collect();
        let ps = |p: &[Complex64]| {
            adjoint_series(&AnalyticFn::polynomial(p.to_vec()).unwrap(), form, z).unwrap()
        };
        let lhs = ps(&sum);
        let rhs = c * ps(&a) + ps(&b);
        check(
            (lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()),
            format!("adjoint linearity at z={z}"),
        );
        let real: Vec<Complex64> = a.iter().map(|x| c64(x.re, 0.0)).collect();
        let g = AnalyticFn::polynomial(real).unwrap();
        let u = adjoint_series(&g, form, z).unwrap();
        let v = adjoint_series(&g, form, z.conj()).unwrap();
        check(
            (u.conj() - v).norm() <= 1e-13 * (1.0 + u.norm()),
            format!("conjugation symmetry at z={z}"),
        );
    }

    // Search: homogeneity of the objective and determinism.
    let family = extremal::Family::Polynomial { degree: 5 };
    let params: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let scaled: Vec<f64> = params.iter().map(|p| 10.0 * p).collect();
    let o1 = extremal::objective(&params, &family).unwrap().value;
    let o2 = extremal::objective(&scaled, &family).unwrap().value;
    check(
        (o1 - o2).abs() <= 1e-9 * o1,
        format!("objective homogeneity {o1} vs {o2}"),
    );
    let short = SearchConfig {
        family,
        restarts: 4,
        iterations: 150,
        seed: 5,
        ..SearchConfig::default()
    };
    let r1 = search_parallel(&short).unwrap();
    let r2 = search_parallel(&short).unwrap();
    check(r1 == r2, "search determinism".into());
    for r in 0..short.restarts {
        let h: Vec<f64> = r1
            .history
            .iter()
            .filter(|p| p.restart == r)
            .map(|p| p.value)
            .collect();
        check(
            h.windows(2).all(|w| w[1] >= w[0]),
            format!("monotone history, restart {r}"),
        );
    }

    // Verification suite determinism (computed values only).
    let config = VerifyConfig {
        only: Some(vec![
            "eq7".into(),
            "growth".into(),
            "duality".into(),
            "gzn_bloch".into(),
        ]),
        ..VerifyConfig::default()
    };
    let v1: Vec<_> = verify::run_all(&config)
        .into_iter()
        .map(|r| r.computed)
        .collect();
    let v2: Vec<_> = verify::run_all(&config)
        .into_iter()
        .map(|r| r.computed)
        .collect();
    check(v1 == v2, "run_all determinism".into());

    outcome(
        violations.is_empty(),
        if violations.is_empty() {
            format!("{checked} properties, 0 violations")
        } else {
            format!(
                "{checked} properties, {} violations: {}",
                violations.len(),
                violations.join("; ")
            )
        },
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            1,
            "geometric sum closed form",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            2,
            "adjoint quadrature vs series",
            Duration::from_secs(60),
            criterion_2,
        ),
        (3, "ratio bound 4", Duration::from_secs(120), criterion_3),
        (
            4,
            "lower bound 2 ingredients",
            Duration::from_secs(60),
            criterion_4,
        ),
        (
            5,
            "growth exponent 2+alpha",
            Duration::from_secs(5),
            criterion_5,
        ),
        (6, "duality pairing", Duration::from_secs(30), criterion_6),
        (
            7,
            "reproducing property",
            Duration::from_secs(30),
            criterion_7,
        ),
        (8, "extremal search", Duration::from_secs(600), criterion_8),
        (
            9,
            "homogeneity and determinism properties",
            Duration::MAX,
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        let time_note = if in_time {
            String::new()
        } else {
            format!(" [over time limit {limit:?}]")
        };
        println!(
            "criterion {id} {} {name}: {} ({:.2}s){time_note}",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

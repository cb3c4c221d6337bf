//! Named numerical checks with tolerances and reports.

use std::collections::BTreeMap;
use std::time::Instant;

use bergman_core::diskquad::QuadratureSpec;
use bergman_core::funcspace::{
    cn, geom_partial_closed, geom_partial_direct, gzn_build, AnalyticFn, CompactMonomial,
};
use bergman_core::norms::{bloch_norm, bloch_seminorm, lemma5_ratio, sup_over_disk, SupGrid};
use bergman_core::operators::{
    adjoint_quad, adjoint_series, duality_check, log_extremal_kernel_closed,
    truncated_kernel_integral, AdjointForm,
};
use bergman_core::{c64, Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ToolkitError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub metric: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Value { metric: String, value: f64 },
    Bracket { metric: String, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// The formula the check exercises, as quoted from the source text.
    pub paper_anchor: String,
    pub computed: Vec<Metric>,
    pub expected: Vec<Expected>,
    pub tolerance: f64,
    pub pass: bool,
    /// Informational reports never fail the suite.
    pub informational: bool,
    pub notes: Vec<String>,
    pub runtime: f64,
}

impl CheckReport {
    fn new(name: &str, anchor: &str, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            paper_anchor: anchor.into(),
            computed: Vec::new(),
            expected: Vec::new(),
            tolerance,
            pass: true,
            informational: false,
            notes: Vec::new(),
            runtime: 0.0,
        }
    }

    fn push(&mut self, metric: impl Into<String>, value: f64) {
        self.computed.push(Metric {
            metric: metric.into(),
            value,
        });
    }

    fn expect_bracket(&mut self, metric: impl Into<String>, lo: f64, hi: f64) {
        self.expected.push(Expected::Bracket {
            metric: metric.into(),
            lo,
            hi,
        });
    }

    fn fail(&mut self, note: impl Into<String>) {
        self.pass = false;
        self.notes.push(note.into());
    }

    /// Records `value` and fails unless it lies in `[lo, hi]` (NaN fails).
    fn bracket(&mut self, metric: &str, value: f64, lo: f64, hi: f64) {
        self.push(metric, value);
        self.expect_bracket(metric, lo, hi);
        if !(value >= lo && value <= hi) {
            self.fail(format!("{metric} = {value:e} outside [{lo:e}, {hi:e}]"));
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.computed
            .iter()
            .find(|m| m.metric == name)
            .map(|m| m.value)
    }
}

fn timed(f: impl FnOnce() -> CheckReport) -> CheckReport {
    let start = Instant::now();
    let mut report = f();
    report.runtime = start.elapsed().as_secs_f64();
    report
}

/// Slack for closed-interval brackets whose endpoint is attained exactly in
/// real arithmetic; covers the rounding of `(1-r)(1+r)` and one division.
pub const ROUNDING_SLACK: f64 = 8.0 * f64::EPSILON;

pub const ANCHOR_EQ7: &str = "(k+1)(k+2)|z|^{2k}";
pub const ANCHOR_IDENTITY: &str = "=\\frac{1}{2} (z^2g'(z))^{'}";
pub const ANCHOR_LEMMA5: &str = "\\leq 4\\| f\\|_{{\\cal B}}";
pub const ANCHOR_LOWER: &str =
    "=2\\sup_{|w|<1}\\left|\\frac{\\bar{w}(1-|w|^2)^{2}}{(1-\\bar w^2)^2}\\right|=2";
pub const ANCHOR_GROWTH: &str = "|P^{\\ast}g_{z_{n}}^{n}(z_{n})|\\asymp n^{2+\\alpha}";
pub const ANCHOR_DUALITY: &str =
    "\\int_{D}f(z)\\overline{P^{\\ast}g(z)}d\\lambda_{\\alpha}(z) =\\int_{D}(Pf)'(z)\\overline{g'(z)}dA(z)";
pub const ANCHOR_GZN: &str = "\\| g_{z}^{n}\\|_{{\\cal B}}\\leq 1";

/// Closed form against direct summation, plus the `n → ∞` limit at
/// `s = 1/2` checked at `n = limit_n`.
pub fn check_eq7(n_list: &[usize], s_list: &[f64], limit_n: usize, tol: f64) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("eq7", ANCHOR_EQ7, tol);
        let mut worst: f64 = 0.0;
        for &n in n_list {
            for &s in s_list {
                if !(0.0..=0.999).contains(&s) {
                    report.fail(format!("s = {s} outside [0, 0.999]"));
                    continue;
                }
                let direct = geom_partial_direct(n, s);
                match geom_partial_closed(n, s) {
                    Ok(closed) => worst = worst.max((closed - direct).abs() / direct.abs()),
                    Err(e) => report.fail(format!("n = {n}, s = {s}: {e}")),
                }
            }
        }
        report.push("max_rel_error", worst);
        report.expect_bracket("max_rel_error", 0.0, tol);
        if worst.is_nan() || worst > tol {
            report.fail(format!("max relative error {worst:e} exceeds {tol:e}"));
        }
        match geom_partial_closed(limit_n, 0.5) {
            Ok(v) => report.bracket("limit_ratio", v * 0.125 / 2.0, 1.0 - 1e-6, 1.0 + 1e-6),
            Err(e) => report.fail(e.to_string()),
        }
        report
    })
}

/// Quadrature against series form of `P*g` with `β = 2`, relative to
/// `1 + |series|`.
pub fn check_identity(gs: &[AnalyticFn], zs: &[Complex64], tol: f64) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("identity", ANCHOR_IDENTITY, tol);
        let form = AdjointForm::invariant();
        let spec = QuadratureSpec::default();
        let pairs: Vec<(usize, Complex64)> = (0..gs.len())
            .flat_map(|i| zs.iter().map(move |&z| (i, z)))
            .collect();
        let results: Vec<Result<f64, String>> = pairs
            .par_iter()
            .map(|&(i, z)| {
                if z.norm() > 0.9 + 1e-12 {
                    return Err(format!("|z| = {} exceeds 0.9", z.norm()));
                }
                let series = adjoint_series(&gs[i], form, z).map_err(|e| e.to_string())?;
                let quad = adjoint_quad(&gs[i], form, z, &spec).map_err(|e| e.to_string())?;
                if !quad.converged {
                    return Err(format!(
                        "g #{i}, z = {z}: quadrature did not converge (error estimate {:e})",
                        quad.error_estimate
                    ));
                }
                Ok((quad.value - series).norm() / (1.0 + series.norm()))
            })
            .collect();
        let mut worst: f64 = 0.0;
        for r in results {
            match r {
                Ok(e) => worst = worst.max(e),
                Err(note) => report.fail(note),
            }
        }
        report.push("points", pairs.len() as f64);
        report.push("max_rel_error", worst);
        report.expect_bracket("max_rel_error", 0.0, tol);
        if worst.is_nan() || worst > tol {
            report.fail(format!("max relative error {worst:e} exceeds {tol:e}"));
        }
        report
    })
}

/// Largest `𝒫(f)/‖f‖_B` over the suite, gated at `4 + tol`.
pub fn check_lemma5(suite: &[(String, AnalyticFn)], tol: f64) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("lemma5", ANCHOR_LEMMA5, tol);
        if suite.is_empty() {
            report.fail("empty suite");
            return report;
        }
        let ratios: Vec<Result<f64, Error>> =
            suite.par_iter().map(|(_, f)| lemma5_ratio(f)).collect();
        let mut best: Option<(usize, f64)> = None;
        let mut evaluated = 0;
        for (i, r) in ratios.into_iter().enumerate() {
            match r {
                Ok(v) => {
                    evaluated += 1;
                    if best.is_none_or(|(_, b)| v > b) {
                        best = Some((i, v));
                    }
                }
                Err(Error::ZeroSeminorm) => report
                    .notes
                    .push(format!("{}: zero seminorm, skipped", suite[i].0)),
                Err(e) => report.fail(format!("{}: {e}", suite[i].0)),
            }
        }
        report.push("evaluated", evaluated as f64);
        match best {
            Some((i, v)) => {
                report.bracket("max_ratio", v, 0.0, 4.0 + tol);
                report.push("witness_index", i as f64);
                report
                    .notes
                    .push(format!("largest ratio {v:.6} from {}", suite[i].0));
            }
            None => report.fail("no member with nonzero seminorm"),
        }
        report
    })
}

/// The three ingredients of the lower bound 2 for the logarithmic witness.
pub fn check_lower_bound(tol: f64) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("lower_bound", ANCHOR_LOWER, tol);
        let g = AnalyticFn::LogExtremal;

        // (i) Bloch norm 1, attained at the origin.
        let seminorm = bloch_seminorm(&g);
        report.bracket(
            "bloch_norm",
            bloch_norm(&g),
            1.0 - tol,
            1.0 + ROUNDING_SLACK,
        );
        report.push("bloch_argmax_abs", seminorm.argmax.norm());

        // (ii) sup of 2|w̄|(1-|w|²)²/|1-w̄²|², and every sample ≤ 2|w| ≤ 2.
        let violations = std::sync::atomic::AtomicUsize::new(0);
        let sup = sup_over_disk(
            |r, w| {
                // |1 - w̄²| with the real part 1 - x² + y² kept cancellation-free.
                let d = ((1.0 - w.re) * (1.0 + w.re) + w.im * w.im).hypot(2.0 * w.re * w.im);
                let v = 2.0 * r * ((1.0 - r) * (1.0 + r)).powi(2) / (d * d);
                if v > 2.0 * r * (1.0 + ROUNDING_SLACK) {
                    violations.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                }
                v
            },
            &SupGrid::default(),
        );
        report.bracket("kernel_sup", sup.value, 1.99, 2.0);
        report.push("kernel_sup_samples", sup.samples as f64);
        report.bracket(
            "kernel_sup_violations",
            violations.load(std::sync::atomic::Ordering::Relaxed) as f64,
            0.0,
            0.0,
        );

        // (iii) I_r against its closed form.
        let spec = QuadratureSpec::default();
        let mut worst: f64 = 0.0;
        for r in [0.5, 0.9] {
            for w in [c64(0.3, 0.0), c64(0.5, 0.2)] {
                match truncated_kernel_integral(&g, w, r, &spec) {
                    Ok(q) => worst = worst.max((q.value - log_extremal_kernel_closed(w, r)).norm()),
                    Err(e) => report.fail(format!("I_r at r = {r}, w = {w}: {e}")),
                }
            }
        }
        report.push("kernel_integral_max_error", worst);
        report.expect_bracket("kernel_integral_max_error", 0.0, tol);
        if worst.is_nan() || worst > tol {
            report.fail(format!("I_r error {worst:e} exceeds {tol:e}"));
        }
        report
    })
}

/// `|P*g_{z_n}^n(z_n)|` at `z_n = 1 - 1/n` from the closed forms.
pub fn growth_value(n: usize, alpha: f64) -> Result<f64, Error> {
    let zn = 1.0 - 1.0 / n as f64;
    // 1 - z_n² = (2 - 1/n)/n without cancellation.
    let gap = (2.0 - 1.0 / n as f64) / n as f64;
    let s = geom_partial_closed(n, zn * zn)?;
    Ok(gap.powf(-alpha) * zn * s / cn(n))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        let dx = x.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}

pub const GROWTH_MAX_N: usize = 100_000;

pub fn check_growth(alpha: f64, n_grid: &[usize], tol: f64) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("growth", ANCHOR_GROWTH, tol);
        report.push("alpha", alpha);
        if !(alpha > -2.0 && alpha <= -1.0) {
            report.fail(format!("alpha = {alpha} outside (-2, -1]"));
            return report;
        }
        if n_grid.len() < 2 || n_grid.iter().any(|&n| !(2..=GROWTH_MAX_N).contains(&n)) {
            report.fail(format!(
                "n grid needs at least two values in [2, {GROWTH_MAX_N}]"
            ));
            return report;
        }
        let mut points = Vec::with_capacity(n_grid.len());
        for &n in n_grid {
            match growth_value(n, alpha) {
                Ok(v) => {
                    report.push(format!("value_n{n}"), v);
                    points.push((n as f64, v));
                }
                Err(e) => report.fail(format!("n = {n}: {e}")),
            }
        }
        if points.len() == n_grid.len() {
            let target = 2.0 + alpha;
            report.bracket("slope", loglog_slope(&points), target - tol, target + tol);
        }
        report
    })
}

#[derive(Debug, Clone)]
pub struct DualityCase {
    pub fm: CompactMonomial,
    pub g: AnalyticFn,
    pub alpha: f64,
}

pub fn default_duality_cases() -> Vec<DualityCase> {
    let z = AnalyticFn::real_polynomial(&[0.0, 1.0]).expect("valid polynomial");
    let z2 = AnalyticFn::real_polynomial(&[0.0, 0.0, 1.0]).expect("valid polynomial");
    vec![
        DualityCase {
            fm: CompactMonomial::new(1, 2, 0.9).expect("valid monomial"),
            g: z.clone(),
            alpha: -2.0,
        },
        DualityCase {
            fm: CompactMonomial::new(2, 1, 0.7).expect("valid monomial"),
            g: z,
            alpha: -1.0,
        },
        DualityCase {
            fm: CompactMonomial::new(0, 0, 0.5).expect("valid monomial"),
            g: z2,
            alpha: -2.0,
        },
    ]
}

pub fn check_duality(cases: &[DualityCase], tol: f64, quad_tol: f64) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("duality", ANCHOR_DUALITY, tol);
        let spec = QuadratureSpec::default();
        let mut closed: f64 = 0.0;
        let mut quad: f64 = 0.0;
        for (i, case) in cases.iter().enumerate() {
            let result = AdjointForm::for_alpha(case.alpha)
                .and_then(|form| duality_check(&case.fm, &case.g, form, &spec));
            match result {
                Ok(d) => {
                    report.push(format!("case{i}_prediction_re"), d.prediction.re);
                    report.push(format!("case{i}_prediction_im"), d.prediction.im);
                    closed = closed.max(d.closed_gap());
                    quad = quad.max(d.quad_gap());
                }
                Err(e) => report.fail(format!("case {i}: {e}")),
            }
        }
        report.bracket("closed_gap", closed, 0.0, tol);
        report.bracket("quad_gap", quad, 0.0, quad_tol);
        report
    })
}

/// Informational unless `strict`: the bound is not proved, only observed.
pub fn check_gzn_bloch(samples: &[(usize, Complex64)], tol: f64, strict: bool) -> CheckReport {
    timed(|| {
        let mut report = CheckReport::new("gzn_bloch", ANCHOR_GZN, tol);
        report.informational = !strict;
        for &(n, base) in samples {
            if n > 500 {
                report.fail(format!("n = {n} exceeds 500"));
                continue;
            }
            match gzn_build(n, base) {
                Ok(g) => report.bracket(
                    &format!("seminorm_n{n}_base{}_{}", base.re, base.im),
                    bloch_seminorm(&g).value,
                    0.0,
                    1.0 + tol,
                ),
                Err(e) => report.fail(format!("n = {n}: {e}")),
            }
        }
        report
    })
}

pub const CHECK_NAMES: [&str; 7] = [
    "eq7",
    "identity",
    "lemma5",
    "lower_bound",
    "growth",
    "duality",
    "gzn_bloch",
];

/// Tolerance keys accepted by [`VerifyConfig::set_tolerance`] and their
/// defaults. `duality` is the closed-form gap, `duality_quad` the
/// quadrature gap.
pub const DEFAULT_TOLERANCES: [(&str, f64); 8] = [
    ("eq7", 1e-10),
    ("identity", 1e-6),
    ("lemma5", 1e-6),
    ("lower_bound", 1e-6),
    ("growth", 0.15),
    ("duality", 1e-12),
    ("duality_quad", 1e-5),
    ("gzn_bloch", 1e-3),
];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub alpha: f64,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    /// `None` runs every check.
    pub only: Option<Vec<String>>,
    pub strict_gzn: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            alpha: -1.0,
            seed: 0,
            tolerances: DEFAULT_TOLERANCES
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            only: None,
            strict_gzn: false,
        }
    }
}

impl VerifyConfig {
    pub fn set_tolerance(&mut self, name: &str, value: f64) -> Result<(), ToolkitError> {
        if !self.tolerances.contains_key(name) {
            return Err(ToolkitError::Usage(format!("unknown tolerance `{name}`")));
        }
        if !(value >= 0.0 && value.is_finite()) {
            return Err(ToolkitError::Usage(format!(
                "tolerance `{name}` must be finite and ≥ 0"
            )));
        }
        self.tolerances.insert(name.to_string(), value);
        Ok(())
    }

    pub fn select(&mut self, names: Vec<String>) -> Result<(), ToolkitError> {
        if let Some(bad) = names.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
            return Err(ToolkitError::Usage(format!("unknown check `{bad}`")));
        }
        self.only = Some(names);
        Ok(())
    }

    fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

/// Random polynomial with degree in `1..=max_degree` and coefficients in
/// the complex unit box; the constant term is included.
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> AnalyticFn {
    let degree = rng.gen_range(1..=max_degree);
    let coeffs = (0..=degree)
        .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    AnalyticFn::polynomial(coeffs).expect("finite coefficients")
}

/// `radii × angles` points `ρ_i e^{2πij/angles}` with `ρ_i` evenly spaced
/// up to 0.9.
pub fn polar_grid(radii: usize, angles: usize) -> Vec<Complex64> {
    (1..=radii)
        .flat_map(|i| {
            let rho = 0.9 * i as f64 / radii as f64;
            (0..angles).map(move |j| {
                Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / angles as f64)
            })
        })
        .collect()
}

pub fn identity_inputs(seed: u64, random: usize) -> (Vec<AnalyticFn>, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs = vec![
        AnalyticFn::real_polynomial(&[0.0, 1.0]).expect("valid"),
        AnalyticFn::LogExtremal,
    ];
    gs.extend((0..random).map(|_| random_polynomial(&mut rng, 12)));
    let mut zs = polar_grid(5, 8);
    zs.push(c64(0.0, 0.0));
    zs.push(c64(0.0, 0.8));
    (gs, zs)
}

/// Monomials `z^0..z^12`, atoms at `0.3`, `0.6i`, `0.9`, the logarithmic
/// witness and `random` seeded polynomials of degree 10.
pub fn lemma5_suite(seed: u64, random: usize) -> Vec<(String, AnalyticFn)> {
    let mut suite: Vec<(String, AnalyticFn)> = (0..=12)
        .map(|k| {
            let mut c = vec![0.0; k + 1];
            c[k] = 1.0;
            (
                format!("z^{k}"),
                AnalyticFn::real_polynomial(&c).expect("valid"),
            )
        })
        .collect();
    for l in [c64(0.3, 0.0), c64(0.0, 0.6), c64(0.9, 0.0)] {
        suite.push((
            format!("mobius({l})"),
            AnalyticFn::mobius(l).expect("valid"),
        ));
    }
    suite.push(("log_extremal".into(), AnalyticFn::LogExtremal));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    suite.extend((0..random).map(|i| {
        let coeffs = (0..=10)
            .map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        (
            format!("random#{i}"),
            AnalyticFn::polynomial(coeffs).expect("finite coefficients"),
        )
    }));
    suite
}

pub fn growth_grid() -> Vec<usize> {
    (6..=13).map(|k| 1usize << k).collect()
}

pub fn default_gzn_samples() -> Vec<(usize, Complex64)> {
    vec![
        (0, c64(0.0, 0.0)),
        (5, c64(0.0, 0.0)),
        (100, c64(0.95, 0.0)),
    ]
}

fn run_check(name: &str, config: &VerifyConfig) -> CheckReport {
    match name {
        "eq7" => {
            let s: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).chain([0.99]).collect();
            check_eq7(
                &[0, 1, 5, 20, 100, 10_000],
                &s,
                GROWTH_MAX_N,
                config.tol("eq7"),
            )
        }
        "identity" => {
            let (gs, zs) = identity_inputs(config.seed, 5);
            check_identity(&gs, &zs, config.tol("identity"))
        }
        "lemma5" => check_lemma5(&lemma5_suite(config.seed, 50), config.tol("lemma5")),
        "lower_bound" => check_lower_bound(config.tol("lower_bound")),
        "growth" => check_growth(config.alpha, &growth_grid(), config.tol("growth")),
        "duality" => check_duality(
            &default_duality_cases(),
            config.tol("duality"),
            config.tol("duality_quad"),
        ),
        "gzn_bloch" => check_gzn_bloch(
            &default_gzn_samples(),
            config.tol("gzn_bloch"),
            config.strict_gzn,
        ),
        other => {
            let mut r = CheckReport::new(other, "", 0.0);
            r.fail("unknown check");
            r
        }
    }
}

/// Runs the selected checks concurrently; reports come back in the fixed
/// order of [`CHECK_NAMES`].
pub fn run_all(config: &VerifyConfig) -> Vec<CheckReport> {
    let selected: Vec<&str> = CHECK_NAMES
        .iter()
        .copied()
        .filter(|n| {
            config
                .only
                .as_ref()
                .is_none_or(|only| only.iter().any(|o| o == n))
        })
        .collect();
    selected.par_iter().map(|n| run_check(n, config)).collect()
}

/// True when every non-informational report passes (vacuously for none).
pub fn aggregate_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass || r.informational)
}

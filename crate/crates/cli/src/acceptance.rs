//! The acceptance suite, criteria 1 to 12, with tolerances pinned here.
//!
//! Each criterion runs a list of named checks. Details carry measured values
//! rounded to a few digits so that the scorecard is reproducible; wall-clock
//! times are kept out of it and only the budget verdict is recorded.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use halfspace_core::combinat::binomial;
use halfspace_core::hankel::{build, closed_inverse, closed_inverse_factor, determinant_identity, factor, HankelKind};
use halfspace_core::lgv::{catalan_minor_graph, grid_binomial, grid_catalan, lgv_check, two_taxis};
use halfspace_core::network::planar_network_weights;
use halfspace_core::positivity::{total_positivity, PositivityMode};
use halfspace_core::profile::base_profile;
use halfspace_core::rational::{big, format_rational, int, pow2, rat, sign_pow};
use halfspace_core::symbol::{alt_bc_scale, alt_bc_symbol, build_m, det_m, omega_integrand, poisson_profile};
use halfspace_core::{ExactMatrix, Rational};
use halfspace_spectral::potential::{quadrature_tg, riesz_decay_study, FundamentalSolution};
use halfspace_spectral::{extend, extend_trace, forward_h, polyharmonic_residual, solve_g, Density, Field, Geometry};

use crate::synth::{band_pass_density, hermite, round_trip_band};

pub const DET_BUDGET: Duration = Duration::from_secs(5);
pub const LGV_BUDGET: Duration = Duration::from_secs(30);
pub const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(60);
/// Relative error of the profile against quadrature, on the scale
/// `max(|W(t)|, 1e-3·π·e^{-t})` so that zero crossings stay meaningful.
pub const PROFILE_TOL: f64 = 1e-9;
pub const ROUND_TRIP_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-7;
pub const RESIDUAL_ORDER_MIN: f64 = 1.8;
pub const CROSS_CHECK_TOL: f64 = 1e-3;
pub const SLOPE_TOL: f64 = 0.2;

pub const CRITERIA: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Observations that are reported but not judged.
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line: `PASS [ 7] title (3 checks, 1.23 s)`.
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self.failures().map(|c| c.name.as_str()).collect();
        let tail = if failed.is_empty() { String::new() } else { format!(" failed: {}", failed.join("; ")) };
        format!(
            "{} [{:>2}] {} ({} checks, {:.2} s){tail}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len(),
            self.elapsed.as_secs_f64()
        )
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("outcome serializes")
    }
}

struct Recorder {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records an error from a library call as a failed check.
    fn attempt<T>(&mut self, name: &str, r: Result<T, impl std::fmt::Display>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, format!("error: {e}"));
                None
            }
        }
    }

    fn budget(&mut self, start: Instant, budget: Duration) {
        let t = start.elapsed();
        self.check(format!("runtime < {} s", budget.as_secs()), t < budget, format!("budget {} s", budget.as_secs()));
    }

    fn finish(self, id: usize, title: &'static str, start: Instant) -> Outcome {
        Outcome { id, title, checks: self.checks, notes: self.notes, elapsed: start.elapsed() }
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "determinant identities",
        2 => "closed-form inverses",
        3 => "triangular factorizations",
        4 => "path-counting oracle",
        5 => "symbol matrix",
        6 => "Poisson profile consistency",
        7 => "solver round trip",
        8 => "boundary traces and polyharmonic residual",
        9 => "direct/spectral cross-check",
        10 => "total positivity",
        11 => "planar network",
        12 => "Riesz decay",
        _ => "unknown",
    }
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize) -> Outcome {
    let start = Instant::now();
    let mut r = Recorder::new();
    match id {
        1 => determinants(&mut r, start),
        2 => inverses(&mut r),
        3 => factorizations(&mut r),
        4 => path_counts(&mut r, start),
        5 => symbol_matrix(&mut r),
        6 => profiles(&mut r),
        7 => round_trip(&mut r, start),
        8 => traces_and_residual(&mut r),
        9 => cross_check(&mut r),
        10 => positivity(&mut r),
        11 => network(&mut r),
        12 => riesz(&mut r),
        _ => r.check("criterion exists", false, format!("no criterion {id}")),
    }
    r.finish(id, title(id), start)
}

pub fn run_all() -> Vec<Outcome> {
    (1..=CRITERIA).map(run).collect()
}

pub fn scorecard(outcomes: &[Outcome]) -> Value {
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    json!({
        "criteria": outcomes.iter().map(Outcome::to_json).collect::<Vec<_>>(),
        "passed": passed,
        "failed": outcomes.len() - passed,
        "all_passed": passed == outcomes.len(),
    })
}

fn determinants(r: &mut Recorder, start: Instant) {
    for kind in HankelKind::ALL {
        let mut bad = Vec::new();
        for n in 1..=10 {
            match determinant_identity(kind, n) {
                Ok(d) if d.holds() => {}
                Ok(d) => {
                    bad.push(format!("n={n}: {} vs {}", format_rational(&d.computed), format_rational(&d.claimed)))
                }
                Err(e) => bad.push(format!("n={n}: {e}")),
            }
        }
        let claim = match kind {
            HankelKind::B => "2^(n-1)",
            HankelKind::BShift => "2^n",
            _ => "1",
        };
        r.check(format!("det {}(n) = {claim}, n = 1..10", kind.label()), bad.is_empty(), bad.join("; "));
    }
    r.budget(start, DET_BUDGET);
}

fn inverses(r: &mut Recorder) {
    for kind in HankelKind::ALL {
        let mut bad = Vec::new();
        for n in 1..=8 {
            let (Ok(h), Ok(inv), Ok(f), Ok(linv)) =
                (build(kind, n), closed_inverse(kind, n), factor(kind, n), closed_inverse_factor(kind, n))
            else {
                bad.push(format!("n={n}: construction failed"));
                continue;
            };
            if h.inverse().ok() != Some(inv) {
                bad.push(format!("n={n}: Hankel inverse"));
            }
            if f.l.inverse().ok() != Some(linv) {
                bad.push(format!("n={n}: factor inverse"));
            }
        }
        r.check(format!("{} closed inverses, n = 1..8", kind.label()), bad.is_empty(), bad.join("; "));
    }
    let spot = |n: usize, i: usize, j: usize| closed_inverse(HankelKind::C, n).map(|m| m[(i, j)].clone());
    for (n, i, j, want) in [(3, 2, 0, 1), (5, 2, 1, -183)] {
        if let Some(v) = r.attempt(&format!("(C({n})^-1)_({i},{j})"), spot(n, i, j)) {
            r.check(format!("(C({n})^-1)_({i},{j}) = {want}"), v == int(want), format_rational(&v));
        }
    }
}

fn factorizations(r: &mut Recorder) {
    let names = [
        (HankelKind::C, "S·Sᵀ = C"),
        (HankelKind::CShift, "S'·S'ᵀ = C'"),
        (HankelKind::B, "R·diag(1,2,…,2)·Rᵀ = B"),
        (HankelKind::BShift, "R'·diag(2,…,2)·R'ᵀ = B'"),
    ];
    for (kind, name) in names {
        let bad: Vec<String> = (1..=8)
            .filter(|&n| match (factor(kind, n), build(kind, n)) {
                (Ok(f), Ok(h)) => f.reconstruct() != h || !f.l.is_lower_triangular(),
                _ => true,
            })
            .map(|n| format!("n={n}"))
            .collect();
        r.check(format!("{name}, n = 1..8"), bad.is_empty(), bad.join(", "));
    }
}

fn path_counts(r: &mut Recorder, start: Instant) {
    let lgv = |r: &mut Recorder, name: &str, g: halfspace_core::Result<halfspace_core::lgv::WeightedDag>, want: i64| {
        let Some(g) = r.attempt(name, g) else { return };
        let Some((det, count)) = r.attempt(name, lgv_check(&g)) else { return };
        let detail = format!("det {}, enumerated {}", format_rational(&det), format_rational(&count));
        r.check(format!("{name}: det = enumerated"), det == count, detail.clone());
        r.check(format!("{name}: value {want}"), det == int(want) && count == int(want), detail);
    };
    lgv(r, "two-taxi preset", Ok(two_taxis()), 15);
    lgv(r, "binomial grid n=2", grid_binomial(2, false), 2);
    lgv(r, "binomial grid n=3", grid_binomial(3, false), 4);
    for n in [2, 3] {
        lgv(r, &format!("Catalan grid C n={n}"), grid_catalan(n, false), 1);
        lgv(r, &format!("Catalan grid C' n={n}"), grid_catalan(n, true), 1);
    }
    lgv(r, "Catalan minor graph without o_1, d_2", catalan_minor_graph(5, 1, 2), 183);
    r.budget(start, LGV_BUDGET);
}

fn symbol_matrix(r: &mut Recorder) {
    let (mut sparse, mut block, mut det) = (Vec::new(), Vec::new(), Vec::new());
    let mut claimed_hits = 0;
    for m in 1..=12 {
        let (Ok(t), Ok(rep)) = (build_m(m), det_m(m)) else {
            det.push(format!("m={m}: construction failed"));
            continue;
        };
        let checker = (0..m)
            .all(|k| (0..m).all(|j| ((j + k) % 2 == 1) == (t.matrix[(k, j)] == Rational::from_integer(0.into()))));
        if !checker {
            sparse.push(format!("m={m}"));
        }
        let p = t.permutation_matrix();
        let lhs: ExactMatrix = &(&(&(&p * &t.d1) * &t.matrix) * &t.d2) * &p.transpose();
        if lhs != t.tilde {
            block.push(format!("m={m}"));
        }
        let want = sign_pow((m / 2) as i64) * pow2(-((m * m) as i64));
        if rep.computed != want {
            det.push(format!("m={m}: {}", format_rational(&rep.computed)));
        }
        if rep.matches_claim() {
            claimed_hits += 1;
        }
    }
    r.check("checkerboard sparsity, m = 1..12", sparse.is_empty(), sparse.join(", "));
    r.check("P·D1·M·D2·Pᵀ = M̃, m = 1..12", block.is_empty(), block.join(", "));
    r.check("det M = (-1)^⌊m/2⌋·2^(-m²), m = 1..12", det.is_empty(), det.join("; "));
    r.notes.push(format!("stated value (-1)^⌊m/2⌋·2^(+m²) matches for {claimed_hits} of 12 orders"));
    if let Ok(rep) = det_m(3) {
        r.notes.push(format!(
            "m = 3: computed {}, claimed {}",
            format_rational(&rep.computed),
            format_rational(&rep.claimed)
        ));
    }
}

/// Ooura–Mori double exponential rule for `∫_0^∞ f(x)·cos(ωx) dx`
/// (`sine = false`) or `∫_0^∞ f(x)·sin(ωx) dx`, ω > 0.
pub fn ooura_mori(f: impl Fn(f64) -> f64, omega: f64, sine: bool, h: f64) -> f64 {
    let mm = PI / h;
    let beta = 0.25;
    let alpha = beta / (1.0 + mm * (1.0 + mm).ln() / (4.0 * PI)).sqrt();
    let u = |t: f64| 2.0 * PI * t + alpha * (1.0 - (-t).exp()) + beta * (t.exp() - 1.0);
    let du = |t: f64| 2.0 * PI + alpha * (-t).exp() + beta * t.exp();
    let phi = |t: f64| -> (f64, f64) {
        if t.abs() < 1e-8 {
            let u1 = du(0.0);
            let c = 0.5 * (beta - alpha) - 0.5 * u1 * u1;
            return (1.0 / u1, -c / (u1 * u1));
        }
        let e = (-u(t)).exp();
        let den = 1.0 - e;
        (t / den, (den - t * du(t) * e) / (den * den))
    };
    let shift = if sine { 0.0 } else { 0.5 };
    let mut s = 0.0;
    for k in (-6.0 / h) as i64..=(8.0 / h) as i64 {
        let (p, dp) = phi((k as f64 - shift) * h);
        if dp == 0.0 || !dp.is_finite() {
            continue;
        }
        let trig = if sine { (mm * p).sin() } else { (mm * p).cos() };
        s += f(mm * p / omega) * trig * dp;
    }
    s * h * mm / omega
}

/// `∫_R ω(ζ) e^{itζ} dζ` for an integrand of definite parity, refining the
/// step until two rules agree. Returns the value and the last difference.
pub fn fourier_quadrature(k: usize, j: usize, m: usize, t: f64) -> (f64, f64) {
    let f = omega_integrand(k, j, m);
    let rule = |h: f64| {
        if (j + k) % 2 == 0 {
            2.0 * ooura_mori(|z| f.eval(z).re, t, false, h)
        } else {
            // ω = i·g with g odd and real: ∫ i g e^{itζ} = -2 ∫_0^∞ g sin(tζ).
            -2.0 * ooura_mori(|z| f.eval(z).im, t, true, h)
        }
    };
    let mut h = 0.05;
    let mut prev = rule(h);
    loop {
        h /= 2.0;
        let next = rule(h);
        let diff = (next - prev).abs();
        if diff <= 1e-13 * next.abs().max(1e-300) || h < 0.005 {
            return (next, diff);
        }
        prev = next;
    }
}

fn profiles(r: &mut Recorder) {
    let mut bad = Vec::new();
    for mm in 1..=6u32 {
        let want = pow2(2 - 2 * mm as i64) * big(binomial(2 * mm as i64 - 2, mm as i64 - 1));
        match base_profile(mm) {
            Ok(p) if p.at_zero_over_pi() == want => {}
            Ok(p) => bad.push(format!("M={mm}: {}", format_rational(&p.at_zero_over_pi()))),
            Err(e) => bad.push(format!("M={mm}: {e}")),
        }
    }
    r.check("∫(1+ζ²)^(-M) = π·2^(2-2M)·C(2M-2,M-1), M = 1..6", bad.is_empty(), bad.join("; "));

    let mut bad = Vec::new();
    for m in 1..=6usize {
        let Ok(t) = build_m(m) else {
            bad.push(format!("m={m}: build failed"));
            continue;
        };
        for k in 0..m {
            for j in 0..m {
                let s = (j + k) as i64;
                let want =
                    if s % 2 == 0 { sign_pow(s / 2 - m as i64) * t.matrix[(k, j)].clone() * int(2) } else { rat(0, 1) };
                match poisson_profile(k, j, m) {
                    Ok(p) if p.at_zero_over_pi() == want => {}
                    _ => bad.push(format!("m={m} ({k},{j})")),
                }
            }
        }
    }
    r.check("W_kj(0)/π = 2·(-1)^((j+k)/2-m)·M_kj, m = 1..6", bad.is_empty(), bad.join(", "));

    let (mut worst, mut worst_at, mut fails, mut quad_diff) = (0.0f64, String::new(), 0, 0.0f64);
    for m in 1..=6usize {
        for k in 0..m {
            for j in 0..m {
                let Ok(p) = poisson_profile(k, j, m) else {
                    fails += 1;
                    continue;
                };
                for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
                    let (q, diff) = fourier_quadrature(k, j, m, t);
                    let v: f64 = p.eval(t);
                    let rel = (q - v).abs() / v.abs().max(1e-3 * PI * (-t).exp());
                    quad_diff = quad_diff.max(diff);
                    if rel > PROFILE_TOL {
                        fails += 1;
                    }
                    if rel > worst {
                        worst = rel;
                        worst_at = format!("m={m} ({k},{j}) t={t}");
                    }
                }
            }
        }
    }
    r.check(
        "profiles vs quadrature, m = 1..6, t ∈ {0.1,0.5,1,2,5}",
        fails == 0,
        format!("worst relative {} at {worst_at}, tol {}", sci(worst), sci(PROFILE_TOL)),
    );
    r.notes.push(format!("largest quadrature refinement difference {}", sci(quad_diff)));
}

fn line_grid() -> Geometry {
    Geometry::new(1, 20.0, 4096).expect("valid")
}

fn plane_grid() -> Geometry {
    Geometry::new(2, 12.0, 512).expect("valid")
}

fn round_trip(r: &mut Recorder, start: Instant) {
    for (d, geom) in [(2, line_grid()), (3, plane_grid())] {
        let (kmin, kmax) = round_trip_band(geom);
        for m in [2, 3] {
            let name = format!("m={m}, d={d}, n={}^{}", geom.n, geom.dim);
            let g = band_pass_density(m, geom, kmin, kmax, 11 + m as u64);
            let Some(h) = r.attempt(&name, forward_h(&g, d)) else { continue };
            let Some(back) = r.attempt(&name, solve_g(&h, d)) else { continue };
            let Some(err) = r.attempt(&name, back.relative_l2_error(&g)) else { continue };
            r.check(
                format!("{name}: g → h → g"),
                err <= ROUND_TRIP_TOL,
                format!("relative L² error {}, modes {kmin}..{kmax}", sci(err)),
            );
        }
    }
    r.budget(start, ROUND_TRIP_BUDGET);
}

fn heights(center: f64, step: f64, m: usize) -> Vec<f64> {
    (0..=2 * m).map(|i| center + step * (i as f64 - m as f64)).collect()
}

fn traces_and_residual(r: &mut Recorder) {
    for (m, d, geom) in [(2, 2, line_grid()), (3, 2, line_grid()), (2, 3, plane_grid()), (3, 3, plane_grid())] {
        let name = format!("traces m={m}, d={d}");
        let g = band_pass_density(m, geom, 1, 20, 31);
        let Some(h) = r.attempt(&name, forward_h(&g, d)) else { continue };
        let mut worst = 0.0f64;
        for k in 0..m {
            for xd in [0.0, 1e-9] {
                match extend_trace(&g, k, xd, d).and_then(|t| t.relative_l2_error(&h.h[k])) {
                    Ok(e) => worst = worst.max(e),
                    Err(_) => worst = f64::INFINITY,
                }
            }
        }
        r.check(
            format!("{name}: extension at x_d ∈ {{0, 1e-9}} vs forward_h"),
            worst <= TRACE_TOL,
            format!("worst relative L² {}", sci(worst)),
        );
    }
    // The 2m-th difference divides roundoff by step^{2m}, so m = 3 uses
    // coarser steps, centred high enough to stay above the boundary.
    let cases = [
        (2, 2, line_grid(), 1.0, [0.1, 0.05, 0.025]),
        (2, 3, plane_grid(), 1.0, [0.1, 0.05, 0.025]),
        (3, 2, line_grid(), 2.0, [0.4, 0.2, 0.1]),
    ];
    for (m, d, geom, center, steps) in cases {
        let name = format!("residual order m={m}, d={d}");
        let g = band_pass_density(m, geom, 1, 30, 71);
        let res: Option<Vec<f64>> = steps
            .iter()
            .map(|&s| r.attempt(&name, polyharmonic_residual(&g, &heights(center, s, m), d)).map(|x| x.normalized))
            .collect();
        let Some(res) = res else { continue };
        let orders: Vec<f64> = res.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        let ok = orders.iter().all(|&o| o >= RESIDUAL_ORDER_MIN);
        let shown: Vec<String> = orders.iter().map(|o| format!("{o:.3}")).collect();
        r.check(
            format!("{name}: order ≥ {RESIDUAL_ORDER_MIN}"),
            ok,
            format!("steps {steps:?}, orders [{}]", shown.join(", ")),
        );
    }
}

fn cross_check(r: &mut Recorder) {
    let geom = Geometry::new(1, 40.0, 4096).expect("valid");
    let name = "m=2, d=2";
    let Some(fs) = r.attempt(name, FundamentalSolution::calibrated(2, 2)) else { return };
    let fields = [Field::from_fn(geom, |x| hermite(5, x[0])), Field::from_fn(geom, |x| hermite(4, x[0]))];
    let Some(g) = r.attempt(name, fields.into_iter().collect::<Result<Vec<_>, _>>().and_then(Density::new)) else {
        return;
    };
    for (xp, xd) in [(0.3, 0.5), (1.0, 1.0), (-2.0, 0.2), (0.0, 2.0), (3.0, 0.7)] {
        let i = ((xp + geom.extent) / geom.spacing()).round() as usize;
        let x = [geom.coordinate(i), xd];
        let label = format!("x = ({:.4}, {xd})", x[0]);
        let Some(u) = r.attempt(&label, extend(&g, xd, 2)) else { continue };
        let Some(q) = r.attempt(&label, quadrature_tg(&g, &x, &fs)) else { continue };
        let u = u.samples()[i];
        let err = (q.value - u).abs();
        r.check(
            format!("{label}: |quadrature - extend| ≤ {}", sci(CROSS_CHECK_TOL)),
            err <= CROSS_CHECK_TOL,
            format!("difference {}, quadrature estimate {}, value {:.6}", sci(err), sci(q.error_estimate), u),
        );
    }
}

fn tp(h: &ExactMatrix, mode: PositivityMode) -> Option<bool> {
    total_positivity(h, mode).ok().map(|v| v.totally_positive)
}

fn positivity(r: &mut Recorder) {
    let (mut all, mut pinkus, mut disagree) = (Vec::new(), Vec::new(), Vec::new());
    for kind in HankelKind::ALL {
        for n in 1..=8 {
            let Ok(h) = build(kind, n) else {
                pinkus.push(format!("{} n={n}", kind.label()));
                continue;
            };
            let p = tp(&h, PositivityMode::PinkusHankel);
            if p != Some(true) {
                pinkus.push(format!("{} n={n}", kind.label()));
            }
            if n <= 5 {
                let a = tp(&h, PositivityMode::AllMinors);
                if a != Some(true) {
                    all.push(format!("{} n={n}", kind.label()));
                }
                if a != p {
                    disagree.push(format!("{} n={n}", kind.label()));
                }
            }
        }
    }
    r.check("B, B', C, C' TP by all minors, n ≤ 5", all.is_empty(), all.join(", "));
    r.check("B, B', C, C' TP by the Hankel criterion, n ≤ 8", pinkus.is_empty(), pinkus.join(", "));
    let mut alt = Vec::new();
    let mut sizes = 0;
    for m in 1..=8 {
        let Ok((h1, h2)) = alt_bc_symbol(m) else {
            alt.push(format!("m={m}: build failed"));
            continue;
        };
        for (name, h) in [("H1", h1), ("H2", h2)] {
            if h.rows() == 0 {
                continue;
            }
            sizes = sizes.max(h.rows());
            let p = tp(&h, PositivityMode::PinkusHankel);
            let a = tp(&h, PositivityMode::AllMinors);
            if p != Some(true) || a != Some(true) {
                alt.push(format!("{name} m={m}"));
            }
            if a != p {
                disagree.push(format!("{name} m={m}"));
            }
        }
    }
    r.check(
        "H1, H2 TP by both criteria, m ≤ 8",
        alt.is_empty(),
        format!("largest block {sizes}x{sizes}; {}", alt.join(", ")),
    );
    r.check("criteria agree wherever both run", disagree.is_empty(), disagree.join(", "));
}

fn network(r: &mut Recorder) {
    let Some((h1, _)) = r.attempt("scaled H1, m=5", alt_bc_symbol(5)) else { return };
    let a = h1.scale(&alt_bc_scale(5));
    let Some(net) = r.attempt("network weights", planar_network_weights(&a)) else { return };
    let mut got: Vec<Rational> = net
        .labelled()
        .iter()
        .map(|(_, w)| halfspace_core::rational::parse_rational(w).expect("formatted rational"))
        .collect();
    let mut want =
        vec![int(70), rat(32, 7), rat(256, 5), rat(3, 5), rat(1, 7), rat(1, 7), rat(3, 5), rat(7, 5), rat(7, 5)];
    got.sort();
    want.sort();
    let shown: Vec<String> = net.labelled().iter().map(|(l, w)| format!("{l}={w}")).collect();
    r.check("labels equal the figure's multiset", got == want, shown.join(" "));
    r.check("weighted path counts reconstruct the matrix", net.dag.path_matrix() == a, String::new());
}

fn riesz(r: &mut Recorder) {
    let geom = Geometry::new(1, 4096.0, 1 << 18).expect("valid");
    let mut slopes = Vec::new();
    for l in 0..3usize {
        let name = format!("L={l}");
        // Gaussian derivative of order L+1: moments of degree ≤ L vanish.
        let Some(f) = r.attempt(&name, Field::from_fn(geom, |x| hermite(l + 1, x[0]))) else { return };
        let Some(s) = r.attempt(&name, riesz_decay_study(&f, Some(l), 0, &[0], 8.0)) else { return };
        let target = -((l + 1) as f64);
        r.check(
            format!("{name}: slope within {SLOPE_TOL} of -(L+N) = {target}"),
            (s.slope - target).abs() <= SLOPE_TOL,
            format!("slope {:.3}", s.slope),
        );
        r.notes.push(format!(
            "{name}: slope {:.3}, distance to -(L+N+1) = {:.3}",
            s.slope,
            (s.slope - target + 1.0).abs()
        ));
        slopes.push(s.slope);
    }
    let monotone = slopes.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = slopes.iter().map(|s| format!("{s:.3}")).collect();
    r.check("slopes improve monotonically with L", monotone, format!("[{}]", shown.join(", ")));
}

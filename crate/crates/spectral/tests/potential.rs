mod common;

use common::{herm, unit_bump};
use halfspace_spectral::potential::fundamental::{calibrate_with_probe, has_log};
use halfspace_spectral::potential::truncation::worst_relative_moment;
use halfspace_spectral::potential::{
    calibrate, calibrate_fourier, dphi, dyadic_decomposition, moment_truncation, phi, quadrature_tg,
    quadrature_tg_panels, riesz_decay_study, DualFamily, FundamentalSolution, Kernel, PanelConfig, Probe,
    RadialLogForm,
};
use halfspace_spectral::{extend, Density, Error, Field, Geometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Constants checked by applying Δ to `r^p` and `r^p log r` by hand.
fn known_constant(m: usize, d: usize) -> f64 {
    match (m, d) {
        (1, 2) => 1.0 / (2.0 * PI),
        (1, 3) => -1.0 / (4.0 * PI),
        (2, 2) => 1.0 / (8.0 * PI),
        (2, 3) => -1.0 / (8.0 * PI),
        (3, 2) => 1.0 / (128.0 * PI),
        (3, 3) => -1.0 / (96.0 * PI),
        _ => unreachable!(),
    }
}

const ORDERS: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

#[test]
fn phi_shapes() {
    let x = [0.6, 0.8];
    assert!((phi(2, 2, &x, 1.0).unwrap() - 0.0).abs() < 1e-15);
    let x = [1.2, 1.6];
    assert!((phi(2, 2, &x, 1.0).unwrap() - 4.0 * 2f64.ln()).abs() < 1e-14);
    assert!((phi(2, 3, &[0.0, 3.0, 4.0], 2.0).unwrap() - 10.0).abs() < 1e-14);
    assert!(matches!(phi(2, 3, &[0.0; 3], 1.0), Err(Error::Singularity(_))));
    assert!(matches!(phi(2, 3, &[1.0, 1.0], 1.0), Err(Error::Dimension(_))));
    assert!(has_log(2, 2) && has_log(1, 2) && !has_log(2, 3) && !has_log(1, 4));
}

#[test]
fn phi_scaling() {
    // φ(tx) = t^{2m-d} φ(x) without the logarithm, plus t^{2m-d} log t |x|^{2m-d} with it.
    let x = [0.3, -0.7, 0.4];
    let t = 2.5f64;
    let a = phi(3, 3, &x.map(|v| v * t), 1.0).unwrap();
    assert!((a - t.powi(3) * phi(3, 3, &x, 1.0).unwrap()).abs() < 1e-13 * a.abs());
    let y = [0.3, -0.7];
    let r2 = 0.58f64;
    let b = phi(2, 2, &y.map(|v| v * t), 1.0).unwrap();
    let want = t * t * (phi(2, 2, &y, 1.0).unwrap() + t.ln() * r2);
    assert!((b - want).abs() < 1e-13);
}

#[test]
fn calibrated_constants() {
    for (m, d) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let want = known_constant(m, d);
        let c = calibrate(m, d).unwrap();
        assert!((c.constant - want).abs() <= 1e-8 * want.abs(), "C({m},{d}) = {}", c.constant);
        assert!(c.error_estimate <= 1e-8 * want.abs());
        let other = calibrate_with_probe(m, d, &Probe { poly: vec![1.0, 0.5], sigma: 0.8 }).unwrap();
        assert!((other.constant - want).abs() <= 1e-8 * want.abs());
        let f = calibrate_fourier(m, d).unwrap();
        assert!((f.constant - want).abs() <= 1e-6 * want.abs(), "C({m},{d}) Fourier {}", f.constant);
    }
}

#[test]
fn probe_laplacian_matches_finite_differences() {
    let p = Probe { poly: vec![1.0, -0.3, 0.2], sigma: 0.9 };
    let d = 3;
    let lap = p.laplacian_power(1, d);
    let f = |r: f64| {
        Probe::eval_poly(
            &p.poly.iter().enumerate().map(|(i, c)| c / 0.81f64.powi(i as i32)).collect::<Vec<_>>(),
            r,
            0.9,
        )
    };
    let h = 1e-3;
    for r in [0.3, 0.9, 1.7] {
        let second = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
        let first = (f(r + h) - f(r - h)) / (2.0 * h);
        let fd = second + (d as f64 - 1.0) / r * first;
        let exact = Probe::eval_poly(&lap, r, 0.9);
        assert!((fd - exact).abs() < 1e-5, "r = {r}: {fd} vs {exact}");
    }
}

/// Fourth-order central difference in coordinate `i`.
fn diff(f: &dyn Fn(&[f64]) -> f64, x: &[f64], i: usize, h: f64) -> f64 {
    let at = |s: f64| {
        let mut y = x.to_vec();
        y[i] += s * h;
        f(&y)
    };
    (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h)
}

fn nested(f: &dyn Fn(&[f64]) -> f64, x: &[f64], dirs: &[usize], h: f64) -> f64 {
    match dirs.split_first() {
        None => f(x),
        Some((&i, rest)) => diff(&|y: &[f64]| nested(f, y, rest, h), x, i, h),
    }
}

fn all_betas(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|b| (0..=max).map(move |k| [b.clone(), vec![k]].concat())).collect();
    }
    out.into_iter().filter(|b| b.iter().sum::<u32>() <= max).collect()
}

#[test]
fn dphi_matches_nested_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (m, d) in ORDERS {
        let f = |x: &[f64]| phi(m, d, x, 1.0).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = loop {
                let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r > 0.7 {
                    break x;
                }
            };
            for beta in all_betas(d, 4) {
                let dirs: Vec<usize> =
                    beta.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize)).collect();
                let exact = dphi(m, d, &beta, &x, 1.0).unwrap();
                // Balances O(h⁴) truncation against roundoff over h^{|β|}.
                let (h, tol) = if dirs.len() <= 2 { (1e-3, 1e-7) } else { (1e-2, 1e-5) };
                let fd = nested(&f, &x, &dirs, h);
                assert!(
                    (fd - exact).abs() <= tol * (1.0 + exact.abs()),
                    "m={m} d={d} β={beta:?} x={x:?}: {fd} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn finite_differences_converge_at_fourth_order() {
    let x = [0.8, -0.5];
    let exact = dphi(2, 2, &[1, 1], &x, 1.0).unwrap();
    let f = |y: &[f64]| phi(2, 2, y, 1.0).unwrap();
    let e1 = (nested(&f, &x, &[0, 1], 0.1) - exact).abs();
    let e2 = (nested(&f, &x, &[0, 1], 0.05) - exact).abs();
    let order = (e1 / e2).log2();
    assert!((order - 4.0).abs() < 0.3, "order {order}");
}

#[test]
fn log_part_vanishes_above_the_degree() {
    for (m, d) in ORDERS {
        for beta in all_betas(d, 5) {
            let s = beta.iter().sum::<u32>() as usize;
            let form = RadialLogForm::structure(m, d, &beta).unwrap();
            assert_eq!(form.degree, (2 * m) as i32 - d as i32 - s as i32);
            if !has_log(m, d) || s + d > 2 * m {
                assert!(form.log_vanishes(), "m={m} d={d} β={beta:?}");
            }
        }
    }
    assert!(!RadialLogForm::structure(2, 2, &[1, 0]).unwrap().log_vanishes());
}

#[test]
fn derivatives_are_homogeneous_without_log() {
    let t = 1.7f64;
    for (m, d) in ORDERS {
        for beta in all_betas(d, 4) {
            let form = RadialLogForm::structure(m, d, &beta).unwrap();
            if !form.log_vanishes() {
                continue;
            }
            let x: Vec<f64> = (0..d).map(|i| 0.4 + 0.3 * i as f64).collect();
            let xt: Vec<f64> = x.iter().map(|v| v * t).collect();
            let a = form.eval(&xt).unwrap();
            let b = t.powi(form.degree) * form.eval(&x).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "m={m} d={d} β={beta:?}");
        }
    }
}

#[test]
fn kernel_zero_is_phi() {
    for (m, d) in ORDERS {
        let fs = FundamentalSolution::calibrated(m, d).unwrap();
        let k = Kernel::new(0, &fs).unwrap();
        let y: Vec<f64> = (0..d - 1).map(|i| 0.2 - 0.5 * i as f64).collect();
        let x: Vec<f64> = (0..d).map(|i| 1.0 - 0.3 * i as f64).collect();
        let mut z = x.clone();
        for i in 0..d - 1 {
            z[i] -= y[i];
        }
        assert!((k.eval(&x, &y).unwrap() - fs.phi(&z).unwrap()).abs() < 1e-14);
    }
}

// Δ^{j/2}(C_m φ_m) is again a fundamental solution of order m - j/2: exactly
// in odd dimension, and up to a polynomial (a constant for m = d = 2) in even.
#[test]
fn even_kernels_lower_the_order() {
    for m in [2, 3] {
        let k = Kernel::new(2, &FundamentalSolution::calibrated(m, 3).unwrap()).unwrap();
        let low = FundamentalSolution::calibrated(m - 1, 3).unwrap();
        for x in [[0.3, -0.2, 0.5], [2.0, 1.0, 0.1]] {
            let v = k.eval(&x, &[0.0, 0.0]).unwrap();
            assert!((v - low.phi(&x).unwrap()).abs() < 1e-12 * v.abs());
        }
    }
    let k = Kernel::new(2, &FundamentalSolution::calibrated(2, 2).unwrap()).unwrap();
    let low = FundamentalSolution::calibrated(1, 2).unwrap();
    let (a, b) = ([0.3, 0.4], [-1.5, 2.0]);
    let dk = k.eval(&a, &[0.0]).unwrap() - k.eval(&b, &[0.0]).unwrap();
    let dl = low.phi(&a).unwrap() - low.phi(&b).unwrap();
    assert!((dk - dl).abs() < 1e-12);
}

#[test]
fn kernel_blows_up_at_the_right_rate() {
    // k_3 for m = d = 2 behaves like |x - y|^{2m-d-j} = |x - y|^{-1}.
    let fs = FundamentalSolution::calibrated(2, 2).unwrap();
    let k = Kernel::new(3, &fs).unwrap();
    for t in [1e-2, 1e-4] {
        let ratio = k.eval(&[0.0, t / 2.0], &[0.0]).unwrap() / k.eval(&[0.0, t], &[0.0]).unwrap();
        assert!((ratio - 2.0).abs() < 1e-10);
    }
    assert!(matches!(k.eval(&[0.5, 0.0], &[0.5]), Err(Error::Singularity(_))));
}

#[test]
fn kernels_are_translation_invariant() {
    let fs = FundamentalSolution::calibrated(3, 3).unwrap();
    for j in 0..3 {
        let k = Kernel::new(j, &fs).unwrap();
        let a = k.eval(&[0.4, -0.3, 0.9], &[1.0, 0.5]).unwrap();
        let b = k.eval(&[2.4, 0.7, 0.9], &[3.0, 1.5]).unwrap();
        assert!((a - b).abs() < 1e-13 * (1.0 + a.abs()));
    }
}

fn hermite_density(geom: Geometry) -> Density {
    Density::new(vec![
        Field::from_fn(geom, |x| herm(5, x[0])).unwrap(),
        Field::from_fn(geom, |x| herm(4, x[0])).unwrap(),
    ])
    .unwrap()
}

#[test]
fn quadrature_of_zero_and_linearity() {
    let geom = Geometry::new(1, 20.0, 1024).unwrap();
    let fs = FundamentalSolution::calibrated(2, 2).unwrap();
    let zero = Density::zeros(2, geom).unwrap();
    assert_eq!(quadrature_tg(&zero, &[0.3, 0.5], &fs).unwrap().value, 0.0);
    let g = hermite_density(geom);
    let g2 = Density::new(g.g.iter().map(|f| f.scale(-2.5)).collect()).unwrap();
    let a = quadrature_tg(&g, &[0.3, 0.5], &fs).unwrap().value;
    let b = quadrature_tg(&g2, &[0.3, 0.5], &fs).unwrap().value;
    assert!((b + 2.5 * a).abs() < 1e-13);
    assert!(matches!(quadrature_tg(&g, &[0.3, 0.0], &fs), Err(Error::Domain(_))));
}

#[test]
fn quadrature_agrees_with_the_spectral_extension() {
    let geom = Geometry::new(1, 40.0, 4096).unwrap();
    let fs = FundamentalSolution::calibrated(2, 2).unwrap();
    let g = hermite_density(geom);
    let g0 = |y: &[f64]| herm(5, y[0]);
    let g1 = |y: &[f64]| herm(4, y[0]);
    for (xp, xd) in [(0.3, 0.5), (1.0, 1.0), (-2.0, 0.2), (0.0, 2.0), (3.0, 0.7)] {
        let i = ((xp + geom.extent) / geom.spacing()).round() as usize;
        let x = [geom.coordinate(i), xd];
        let u = extend(&g, xd, 2).unwrap().samples()[i];
        let q = quadrature_tg(&g, &x, &fs).unwrap();
        assert!((q.value - u).abs() <= 1e-3, "x = {x:?}: {} vs {u}", q.value);
        assert!((q.value - u).abs() <= 1e-3 * u.abs().max(1e-2));
        assert!(q.error_estimate < 1e-6 && q.tail_estimate < 1e-12);
        let p = quadrature_tg_panels(&[&g0, &g1], &x, &fs, PanelConfig::default()).unwrap();
        assert!((p.value - q.value).abs() < 1e-9, "x = {x:?}");
    }
}

#[test]
fn quadrature_on_the_plane() {
    let geom = Geometry::new(2, 10.0, 128).unwrap();
    let fs = FundamentalSolution::calibrated(2, 3).unwrap();
    let g = Density::new(vec![
        Field::from_fn(geom, |x| herm(3, x[0]) * herm(2, x[1])).unwrap(),
        Field::from_fn(geom, |x| herm(2, x[0]) * herm(2, x[1])).unwrap(),
    ])
    .unwrap();
    let xd = 1.0;
    let u = extend(&g, xd, 3).unwrap();
    let p = 70 * 128 + 60;
    let pt = geom.point(p);
    let q = quadrature_tg(&g, &[pt[0], pt[1], xd], &fs).unwrap();
    assert!((q.value - u.samples()[p]).abs() < 1e-4, "{} vs {}", q.value, u.samples()[p]);
}

#[test]
fn dual_functions_are_biorthogonal() {
    for dim in [1, 2] {
        let fam = DualFamily::new(dim, 2).unwrap();
        assert!(fam.duality_error() <= 1e-10, "dim {dim}: {:e}", fam.duality_error());
        assert_eq!(fam.eval(0, &vec![0.6; dim]), 0.0);
    }
}

#[test]
fn truncation_has_compact_support_and_keeps_moments() {
    let geom = Geometry::new(1, 64.0, 8192).unwrap();
    let f = Field::from_fn(geom, |x| herm(3, x[0])).unwrap();
    let r = 4.0;
    let t = moment_truncation(&f, r, 2).unwrap();
    for p in 0..geom.len() {
        if geom.point(p)[0].abs() >= r {
            assert_eq!(t.compact.samples()[p], 0.0);
        }
    }
    assert!(worst_relative_moment(&t.remainder, 2) <= 1e-9);
    assert!(worst_relative_moment(&t.compact, 2) <= 1e-9);
    assert!(t.remainder.max_abs() > 0.0);

    let geom = Geometry::new(2, 16.0, 512).unwrap();
    let f = Field::from_fn(geom, |x| herm(1, x[0]) * herm(2, x[1])).unwrap();
    let t = moment_truncation(&f, 4.0, 1).unwrap();
    for p in 0..geom.len() {
        let x = geom.point(p);
        if x[0].hypot(x[1]) >= 4.0 {
            assert_eq!(t.compact.samples()[p], 0.0);
        }
    }
    let w = worst_relative_moment(&t.remainder, 1);
    assert!(w <= 1e-9, "{w:e}");
}

#[test]
fn truncation_leaves_small_support_alone() {
    let geom = Geometry::new(1, 16.0, 2048).unwrap();
    let raw = Field::from_fn(geom, |x| x[0] * unit_bump(x[0])).unwrap();
    let x3 = Field::from_fn(geom, |x| x[0].powi(3) * unit_bump(x[0])).unwrap();
    // Odd, with the first moment cancelled on the grid itself.
    let a = raw.moment(&[1]) / x3.moment(&[1]);
    let f = raw.sub(&x3.scale(a)).unwrap();
    let t = moment_truncation(&f, 2.0, 1).unwrap();
    assert!(t.remainder.max_abs() <= 1e-15 * f.max_abs());
    assert!(t.coefficients.iter().all(|c| *c == 0.0));
}

#[test]
fn truncation_checks_the_precondition() {
    let geom = Geometry::new(1, 16.0, 1024).unwrap();
    let f = Field::from_fn(geom, |x| herm(0, x[0])).unwrap();
    assert!(matches!(moment_truncation(&f, 2.0, 0), Err(Error::Precondition(_))));
    assert!(matches!(moment_truncation(&f, -1.0, 0), Err(Error::Domain(_))));
    assert!(matches!(dyadic_decomposition(&f, 0, 4), Err(Error::Precondition(_))));
}

// Pieces of a mean-zero f ~ |x|^{-J} shrink like 2^{-ℓJ}.
#[test]
fn dyadic_pieces_decay() {
    let geom = Geometry::new(1, 2048.0, 1 << 17).unwrap();
    let cases: [(f64, &dyn Fn(f64) -> f64); 2] =
        [(1.0, &|x| x / (1.0 + x * x)), (2.0, &|x| x / (1.0 + x * x).powf(1.5))];
    for (j, f) in cases {
        // The grid holds -L but not +L; zero it to keep f odd on the grid.
        let field = Field::from_fn(geom, |x| if x[0] <= -geom.extent { 0.0 } else { f(x[0]) }).unwrap();
        let dd = dyadic_decomposition(&field, 0, 10).unwrap();
        let p = dd.fitted_exponent(3, 8).unwrap();
        assert!((p + j).abs() <= 0.15 * j, "J = {j}: {p}");
        assert!(dd.tail_formula_gap <= 1e-12);
        let total = dd.pieces.iter().fold(dd.tail.clone(), |acc, p| acc.add(p).unwrap());
        assert!(total.sub(&field).unwrap().max_abs() <= 1e-12);
    }
}

fn riesz_grid() -> Geometry {
    Geometry::new(1, 4096.0, 1 << 18).unwrap()
}

#[test]
fn riesz_baseline_without_moments() {
    let f = Field::from_fn(riesz_grid(), |x| unit_bump(x[0])).unwrap();
    let r = riesz_decay_study(&f, None, 0, &[0], 8.0).unwrap();
    assert!((r.slope + 1.0).abs() <= 0.2, "{}", r.slope);
}

// With moments up to L vanishing, the Hilbert transform of a rapidly
// decaying f falls off like |x|^{-(L+2)}.
#[test]
fn riesz_slopes_improve_with_moments() {
    let mut last = 0.0;
    for l in 0..3usize {
        let f = Field::from_fn(riesz_grid(), |x| herm(l + 1, x[0])).unwrap();
        let r = riesz_decay_study(&f, Some(l), 0, &[0], 8.0).unwrap();
        assert!((r.slope + (l + 2) as f64).abs() <= 0.2, "L = {l}: {}", r.slope);
        assert!(r.slope < last);
        last = r.slope;
    }
}

#[test]
fn riesz_derivative_adds_to_the_slope() {
    let f = Field::from_fn(riesz_grid(), |x| herm(1, x[0])).unwrap();
    let r = riesz_decay_study(&f, Some(0), 0, &[1], 8.0).unwrap();
    assert!((r.slope + 3.0).abs() <= 0.2, "{}", r.slope);
}

#[test]
fn riesz_needs_dynamic_range() {
    let geom = Geometry::new(1, 16.0, 256).unwrap();
    let f = Field::from_fn(geom, |x| herm(1, x[0])).unwrap();
    assert!(matches!(riesz_decay_study(&f, Some(0), 0, &[0], 8.0), Err(Error::Accuracy(_))));
    let g = Field::from_fn(geom, |x| herm(0, x[0])).unwrap();
    assert!(matches!(riesz_decay_study(&g, Some(0), 0, &[0], 1.0), Err(Error::Precondition(_))));
}

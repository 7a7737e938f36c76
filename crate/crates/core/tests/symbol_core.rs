mod common;

use common::{fourier_even, fourier_odd, integrate_line};
use halfspace_core::combinat::binomial;
use halfspace_core::profile::{base_profile, monomial_profile, GaussRational};
use halfspace_core::rational::{big, int, int_matrix, pow2, rat, sign_pow};
use halfspace_core::scalar::rational_to_f64;
use halfspace_core::symbol::{
    alt_bc_moment, alt_bc_moment_residue, build_m, d1, d2, det_m, divided_difference, invert_m, omega, omega_integrand,
    poisson_profile, product_operator_symbol, tau, tau_profile, tilde_blocks,
};
use halfspace_core::ExactMatrix;
use num_traits::Zero;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn small_symbol_matrices() {
    assert_eq!(build_m(1).unwrap().matrix, ExactMatrix::diagonal(vec![rat(1, 2)]));
    assert_eq!(build_m(2).unwrap().matrix, ExactMatrix::diagonal(vec![rat(1, 4), rat(-1, 4)]));
    let (b, c) = tilde_blocks(3).unwrap();
    assert_eq!(b, int_matrix(&[&[1, 2], &[2, 6]]));
    assert_eq!(c, int_matrix(&[&[1]]));
    assert_eq!(build_m(3).unwrap().tilde, ExactMatrix::block_diag(&[&b, &c]));
    assert!(build_m(0).is_err());
}

#[test]
fn entries_match_quadrature() {
    for m in 1..=5usize {
        let t = build_m(m).unwrap();
        for k in 0..m {
            for j in 0..m {
                let s = (j + k) as i32;
                let q = if s % 2 == 1 {
                    0.0
                } else if j % 2 == 0 {
                    integrate_line(|z| (1.0 + z * z).powi(s / 2 - m as i32)) / (2.0 * PI)
                } else {
                    -integrate_line(|z| z * z * (1.0 + z * z).powi(s / 2 - m as i32 - 1)) / (2.0 * PI)
                };
                let exact = rational_to_f64(&t.matrix[(k, j)]);
                assert!((q - exact).abs() < 1e-12, "m={m} ({k},{j}): {q} vs {exact}");
            }
        }
    }
}

#[test]
fn factorization_identities() {
    for m in 1..=12usize {
        let t = build_m(m).unwrap();
        for k in 0..m {
            for j in 0..m {
                assert_eq!(t.matrix[(k, j)].is_zero(), (j + k) % 2 == 1);
                assert_eq!(t.inverse[(k, j)].is_zero(), (j + k) % 2 == 1);
            }
        }
        let (b, c) = tilde_blocks(m).unwrap();
        assert_eq!(t.tilde, ExactMatrix::block_diag(&[&b, &c]), "m={m}");
        assert_eq!(&t.matrix * &t.inverse, ExactMatrix::identity(m));
        assert_eq!(d1(m).det().unwrap(), pow2((m * m / 2) as i64));
        assert_eq!(d2(m).det().unwrap(), pow2(m as i64 * (m as i64 + 1) / 2) * sign_pow((m / 2) as i64));
        let r = det_m(m).unwrap();
        assert_eq!(r.computed, r.derived, "m={m}");
        assert_eq!(r.log2_abs, Some(-((m * m) as i64)));
        assert_eq!(r.sign as i64, if (m / 2) % 2 == 0 { 1 } else { -1 });
        assert!(!r.matches_claim());
    }
}

#[test]
fn inverse_examples() {
    assert_eq!(invert_m(2).unwrap(), ExactMatrix::diagonal(vec![int(4), int(-4)]));
    assert_eq!(invert_m(1).unwrap(), int_matrix(&[&[2]]));
    let i4 = invert_m(4).unwrap();
    assert!(i4[(0, 1)].is_zero() && i4[(1, 2)].is_zero() && !i4[(1, 3)].is_zero());
}

#[test]
fn determinant_examples() {
    assert_eq!(det_m(1).unwrap().computed, rat(1, 2));
    assert_eq!(det_m(2).unwrap().computed, rat(-1, 16));
    assert_eq!(det_m(3).unwrap().computed, rat(-1, 512));
}

#[test]
fn base_profiles() {
    let f1 = base_profile(1).unwrap();
    assert_eq!((f1.prefactor.clone(), f1.coeffs.clone()), (int(1), vec![int(1)]));
    for t in [0.5, 1.0, 2.0] {
        let q = fourier_even(|z| 1.0 / (1.0 + z * z), t);
        assert!((q - f1.eval(t)).abs() < 1e-10, "t={t}");
        assert!((f1.eval(t) - PI * (-t as f64).exp()).abs() < 1e-14);
    }
    let f2 = base_profile(2).unwrap();
    for t in [0.0, 0.5, 1.0, 2.0] {
        assert!((f2.eval(t) - 0.5 * PI * (-t as f64).exp() * (1.0 + t)).abs() < 1e-14);
    }
    for mm in 1..=6u32 {
        let want = rat(1, 1) * pow2(2 - 2 * mm as i64) * big(binomial(2 * mm as i64 - 2, mm as i64 - 1));
        assert_eq!(base_profile(mm).unwrap().at_zero_over_pi(), want);
        let q = integrate_line(|z| (1.0 + z * z).powi(-(mm as i32)));
        assert!((q - PI * rational_to_f64(&want)).abs() < 1e-12);
    }
}

#[test]
fn poisson_profiles_at_zero() {
    for m in 1..=6usize {
        let t = build_m(m).unwrap();
        for k in 0..m {
            for j in 0..m {
                let p = poisson_profile(k, j, m).unwrap();
                let s = (j + k) as i64;
                // ∫ω / (2π) = (-1)^{(j+k-2m)/2} M_{k,j} for even j+k, and 0 otherwise.
                let want =
                    if s % 2 == 0 { sign_pow(s / 2 - m as i64) * t.matrix[(k, j)].clone() * int(2) } else { rat(0, 1) };
                assert_eq!(p.at_zero_over_pi(), want, "m={m} k={k} j={j}");
                let f = omega_integrand(k, j, m);
                let q = integrate_line(|z| f.eval(z).re);
                assert!((q - PI * rational_to_f64(&want)).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn profiles_match_fourier_quadrature() {
    for m in 1..=4usize {
        for k in 0..m {
            for j in 0..m {
                let p = poisson_profile(k, j, m).unwrap();
                let f = omega_integrand(k, j, m);
                for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
                    // Even integrands are real, odd ones purely imaginary.
                    let q = if (j + k) % 2 == 0 {
                        fourier_even(|z| f.eval(z).re, t)
                    } else {
                        -fourier_odd(|z| f.eval(z).im, t)
                    };
                    let v = p.eval(t);
                    let scale = v.abs().max(1e-3 * PI * (-t as f64).exp());
                    assert!((q - v).abs() <= 1e-9 * scale.max(1e-300) + 1e-13, "m={m} k={k} j={j} t={t}: {q} vs {v}");
                }
            }
        }
    }
}

#[test]
fn mixed_parity_profiles_are_derivatives() {
    // ζ·f(ζ) transforms to -i d/dt of the transform of f.
    for m in 2..=5u32 {
        let base = base_profile(m).unwrap();
        let odd = monomial_profile(&GaussRational::i(), 1, m).unwrap();
        assert_eq!(odd, base.derivative());
        assert!(!odd.is_zero());
        assert!(odd.at_zero_over_pi().is_zero());
    }
}

#[test]
fn profile_recursion() {
    // (1 - d²/dt²) F_M = F_{M-1}
    for m in 2..=7u32 {
        let f = base_profile(m).unwrap();
        let dd = f.derivative().derivative();
        let lhs: Vec<_> = {
            let (a, b) = (f.raw(), dd.raw());
            (0..a.len().max(b.len()))
                .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
                .collect()
        };
        let mut want = base_profile(m - 1).unwrap().raw();
        want.resize(lhs.len(), Zero::zero());
        assert_eq!(lhs, want, "M={m}");
    }
}

#[test]
fn tau_parity_and_decay() {
    for m in 1..=6usize {
        for j in 0..m {
            for z in [0.3, 1.7, 5.0] {
                let (a, b) = (tau(j, m, z), tau(j, m, -z));
                if j % 2 == 1 {
                    assert!((a + b).norm() < 1e-15);
                } else {
                    assert!((a - b).norm() < 1e-15);
                }
            }
            assert!(tau_profile(j, m).is_ok());
            for k in 0..m {
                let s = (j + k) as f64;
                for z in [1.0f64, 10.0, 100.0] {
                    let bound = (1.0 + z * z).powf(s / 2.0 - m as f64);
                    assert!(omega(k, j, m, z).norm() <= bound * (1.0 + 1e-12));
                }
            }
        }
    }
    assert!(tau_profile(3, 3).is_err());
}

#[test]
fn alt_bc_moments() {
    assert_eq!(alt_bc_moment(0, 1).unwrap(), int(1));
    for m in 1..=8usize {
        for n in 0..m {
            let a = alt_bc_moment(n, m).unwrap();
            assert_eq!(a, alt_bc_moment_residue(n, m).unwrap(), "m={m} n={n}");
            assert_eq!(a, alt_bc_moment(m - 1 - n, m).unwrap());
            let q = integrate_line(|z| z.powi(2 * n as i32) * (1.0 + z * z).powi(-(m as i32)));
            assert!((q - PI * rational_to_f64(&a)).abs() < 1e-10 * q.abs().max(1.0), "m={m} n={n}");
        }
        assert!(alt_bc_moment(m, m).is_err());
    }
}

#[test]
fn product_operator() {
    assert!((product_operator_symbol(0, 0, 0.0f64, &[1.0]).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(product_operator_symbol(1, 2, 3.0, &[1.0, 2.0, 3.0]).unwrap(), 0.0);
    assert!(product_operator_symbol(0, 0, 1.0, &[2.0, 1.0]).is_err());
    assert!(product_operator_symbol(0, 0, 1.0, &[0.0, 1.0]).is_err());
    let nodes = [1.0, 4.0, 9.0];
    for p in 0..=1 {
        for t in [0.0f64, 0.5, 3.0] {
            let v = divided_difference(&nodes, |x: f64| (t * t + x).powi(p)).unwrap();
            assert!(v.abs() < 1e-12);
        }
    }
    assert!((divided_difference(&nodes, |x: f64| x * x).unwrap() - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn product_symbol_decay(m in 1usize..=4, jk in 0usize..=3, r0 in 0.5f64..2.0, gap in 0.3f64..1.5) {
        let (j, k) = (jk.min(m - 1), (jk % 2).min(m - 1));
        prop_assume!((j + k) % 2 == 0);
        let r: Vec<f64> = (0..m).map(|i| r0 + gap * i as f64).collect();
        let rate = (j + k) as f64 + 1.0 - 2.0 * m as f64;
        // Local log-log slope between t = 50 and t = 100; larger t loses
        // everything to cancellation between the terms.
        let a = product_operator_symbol(j, k, 50.0, &r).unwrap();
        let b = product_operator_symbol(j, k, 100.0, &r).unwrap();
        prop_assert!(a.is_finite() && a.abs() > 0.0 && a.signum() == b.signum());
        let slope = (b / a).ln() / 2f64.ln();
        prop_assert!((slope - rate).abs() < 0.1, "slope {} vs {}", slope, rate);
    }

    #[test]
    fn divided_difference_matches_symbol(t in 0.0f64..5.0, m in 1usize..=4) {
        let r: Vec<f64> = (0..m).map(|i| 1.0 + i as f64).collect();
        let nodes: Vec<f64> = r.iter().map(|x| x * x).collect();
        let dd = divided_difference(&nodes, |x| (t * t + x).powf(-0.5)).unwrap();
        let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let s = product_operator_symbol(0, 0, t, &r).unwrap();
        prop_assert!((s - 0.5 * sign * dd).abs() < 1e-12 * (1.0 + s.abs()));
    }
}

#![allow(dead_code)]

use halfspace_spectral::{DensityData, Field, Geometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// `k`-th derivative of `exp(-x²/2)`, through the Hermite recurrence.
pub fn herm(k: usize, x: f64) -> f64 {
    let g = (-x * x / 2.0).exp();
    if k == 0 {
        return g;
    }
    let (mut a, mut b) = (1.0, x);
    for n in 1..k {
        let c = x * b - n as f64 * a;
        a = b;
        b = c;
    }
    if k % 2 == 0 {
        b * g
    } else {
        -b * g
    }
}

/// Random mean-zero trigonometric polynomial with integer modes `|k_i| ≤ kmax`
/// per axis and `max |k_i| ≥ kmin`.
pub fn band_pass(geom: Geometry, kmin: usize, kmax: usize, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = geom.extent;
    let mut modes = Vec::new();
    let ks = |rng: &mut ChaCha8Rng| rng.gen_range(-(kmax as i64)..=kmax as i64) as f64;
    while modes.len() < 8 {
        let k0 = ks(&mut rng);
        let k1 = if geom.dim == 2 { ks(&mut rng) } else { 0.0 };
        if k0.abs().max(k1.abs()) < kmin.max(1) as f64 {
            continue;
        }
        modes.push((k0, k1, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI)));
    }
    Field::from_fn(geom, |x| {
        modes
            .iter()
            .map(|&(k0, k1, a, ph)| {
                let arg = PI / l * (k0 * x[0] + if x.len() > 1 { k1 * x[1] } else { 0.0 }) + ph;
                a * arg.cos()
            })
            .sum()
    })
    .unwrap()
}

pub fn band_limited(geom: Geometry, kmax: usize, seed: u64) -> Field {
    band_pass(geom, 1, kmax, seed)
}

pub fn random_density(m: usize, geom: Geometry, kmax: usize, seed: u64) -> DensityData<f64> {
    DensityData::new((0..m).map(|j| band_limited(geom, kmax, seed * 31 + j as u64)).collect()).unwrap()
}

/// Roundoff in the traces is amplified by `|ξ|^{2m-1}` on the way back, so
/// round trips use data away from the lowest modes.
pub fn band_pass_density(m: usize, geom: Geometry, kmin: usize, kmax: usize, seed: u64) -> DensityData<f64> {
    DensityData::new((0..m).map(|j| band_pass(geom, kmin, kmax, seed * 31 + j as u64)).collect()).unwrap()
}

/// `exp(-1/(1-x²))` on `(-1, 1)`.
pub fn unit_bump(x: f64) -> f64 {
    let s = 1.0 - x * x;
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

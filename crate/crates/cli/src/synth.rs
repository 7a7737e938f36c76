//! Seeded synthetic fields.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use halfspace_spectral::{Density, Field, Geometry};

/// `k`-th derivative of `exp(-x²/2)`.
pub fn hermite(k: usize, x: f64) -> f64 {
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

/// Eight random cosines with integer modes `|k_i| ≤ kmax` per axis and
/// `max |k_i| ≥ kmin`. Mean zero and exactly periodic on the grid.
pub fn band_pass(geom: Geometry, kmin: usize, kmax: usize, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kmin = kmin.max(1) as f64;
    let mut modes = Vec::with_capacity(8);
    while modes.len() < 8 {
        let k0 = rng.gen_range(-(kmax as i64)..=kmax as i64) as f64;
        let k1 = if geom.dim == 2 { rng.gen_range(-(kmax as i64)..=kmax as i64) as f64 } else { 0.0 };
        if k0.abs().max(k1.abs()) < kmin {
            continue;
        }
        modes.push((k0, k1, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..2.0 * PI)));
    }
    let w = PI / geom.extent;
    Field::from_fn(geom, |x| {
        let y = if x.len() > 1 { x[1] } else { 0.0 };
        modes.iter().map(|&(k0, k1, a, ph)| a * (w * (k0 * x[0] + k1 * y) + ph).cos()).sum()
    })
    .expect("geometry is valid")
}

/// `m` independent band-pass densities.
pub fn band_pass_density(m: usize, geom: Geometry, kmin: usize, kmax: usize, seed: u64) -> Density {
    Density::new((0..m).map(|j| band_pass(geom, kmin, kmax, seed * 31 + j as u64)).collect()).expect("m >= 1")
}

/// Band window suited to a round trip starting from densities: away from
/// the lowest modes, where `V⁻¹` amplifies roundoff the most.
pub fn round_trip_band(geom: Geometry) -> (usize, usize) {
    match geom.dim {
        1 => (geom.n / 16, geom.n / 4),
        _ => (geom.n / 32, geom.n / 8),
    }
}

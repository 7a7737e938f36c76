//! Gauss–Legendre rules and composite panel integration.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A fixed rule mapped onto arbitrary panels.
#[derive(Clone, Debug)]
pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order.max(1));
        Rule { nodes, weights }
    }

    /// Nodes and weights over consecutive panels `[b_i, b_{i+1}]`.
    pub fn points(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(breaks.len().saturating_sub(1) * self.nodes.len());
        for w in breaks.windows(2) {
            let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for (x, wt) in self.nodes.iter().zip(&self.weights) {
                out.push((c + h * x, h * wt));
            }
        }
        out
    }

    pub fn integrate(&self, breaks: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        self.points(breaks).into_iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// `n` equal panels on `[a, b]`.
pub fn uniform_breaks(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Breakpoints on `[a, b]` that shrink geometrically toward `center`,
/// down to `finest`, and are at most `coarsest` wide elsewhere.
pub fn graded_breaks(a: f64, b: f64, center: f64, finest: f64, coarsest: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    if center > a && center < b {
        pts.push(center);
    }
    let mut w = finest;
    while w < (b - a) {
        for p in [center - w, center + w] {
            if p > a && p < b {
                pts.push(p);
            }
        }
        w *= 2.0;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = vec![pts[0]];
    for win in pts.windows(2) {
        let n = ((win[1] - win[0]) / coarsest).ceil().max(1.0) as usize;
        for i in 1..=n {
            out.push(win[0] + (win[1] - win[0]) * i as f64 / n as f64);
        }
    }
    out
}

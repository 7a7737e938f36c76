//! Uniform periodic grids on `[-L, L)^{d-1}` and the boundary data stored on them.

use std::fmt::Debug;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::Float;
use rustfft::FftNum;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar usable for grid samples and transforms.
pub trait Real: Float + FftNum + Default + Debug {}

impl<T: Float + FftNum + Default + Debug> Real for T {}

pub(crate) fn cast<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("value representable in the grid scalar")
}

/// Grid geometry, also the JSON sidecar of a field file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub dim: usize,
    pub extent: f64,
    pub n: usize,
}

impl Geometry {
    pub fn new(dim: usize, extent: f64, n: usize) -> Result<Self> {
        let g = Geometry { dim, extent, n };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        if !(1..=2).contains(&self.dim) {
            return Err(Error::Dimension(format!("grid dimension {} not in {{1, 2}}", self.dim)));
        }
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(Error::Dimension(format!("grid size {} is not a power of two", self.n)));
        }
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(Error::Domain(format!("half-width {} must be positive", self.extent)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Area element `h^{d-1}`.
    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.extent + self.spacing() * i as f64
    }

    /// Point of flat index `p`; the first coordinate varies slowest.
    pub fn point(&self, p: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.coordinate(p), 0.0],
            _ => [self.coordinate(p / self.n), self.coordinate(p % self.n)],
        }
    }

    /// Angular frequency of lattice index `i` along one axis.
    pub fn frequency(&self, i: usize) -> f64 {
        let k = if i < self.n / 2 { i as f64 } else { i as f64 - self.n as f64 };
        std::f64::consts::PI * k / self.extent
    }

    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI * (self.n / 2) as f64 / self.extent
    }
}

/// Real samples on a [`Geometry`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    geom: Geometry,
    samples: Vec<T>,
}

impl<T: Real> GridField<T> {
    pub fn new(geom: Geometry, samples: Vec<T>) -> Result<Self> {
        geom.check()?;
        if samples.len() != geom.len() {
            return Err(Error::Dimension(format!("{} samples for a grid of {}", samples.len(), geom.len())));
        }
        if let Some(p) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite sample at index {p}")));
        }
        Ok(GridField { geom, samples })
    }

    pub fn zeros(geom: Geometry) -> Self {
        GridField { geom, samples: vec![T::zero(); geom.len()] }
    }

    /// Samples `f` at every grid point. `f` receives `d-1` coordinates.
    pub fn from_fn(geom: Geometry, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let samples = (0..geom.len()).map(|p| cast(f(&geom.point(p)[..geom.dim]))).collect();
        Self::new(geom, samples)
    }

    pub fn geometry(&self) -> Geometry {
        self.geom
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub(crate) fn from_parts(geom: Geometry, samples: Vec<T>) -> Self {
        GridField { geom, samples }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        GridField { geom: self.geom, samples: self.samples.iter().map(|&v| f(v)).collect() }
    }

    fn zip(&self, o: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.geom != o.geom {
            return Err(Error::Dimension("fields live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&o.samples).map(|(&a, &b)| f(a, b)).collect();
        Ok(GridField { geom: self.geom, samples })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|v| v * s)
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Discrete `L²` norm with the cell weight.
    pub fn l2_norm(&self) -> T {
        let s = self.samples.iter().fold(T::zero(), |acc, &v| acc + v * v);
        (s * cast(self.geom.cell())).sqrt()
    }

    /// `‖self - reference‖ / ‖reference‖`, or the absolute norm when the
    /// reference vanishes.
    pub fn relative_l2_error(&self, reference: &Self) -> Result<T> {
        let diff = self.sub(reference)?.l2_norm();
        let r = reference.l2_norm();
        Ok(if r > T::zero() { diff / r } else { diff })
    }

    pub fn mean(&self) -> T {
        let s = self.samples.iter().fold(T::zero(), |acc, &v| acc + v);
        s / cast(self.samples.len() as f64)
    }

    /// Largest magnitude on the outer 5% frame, where `max_i |x_i| ≥ 0.95 L`.
    pub fn boundary_max(&self) -> T {
        let cut = 0.95 * self.geom.extent;
        (0..self.samples.len())
            .filter(|&p| self.geom.point(p)[..self.geom.dim].iter().any(|c| c.abs() >= cut))
            .fold(T::zero(), |m, p| m.max(self.samples[p].abs()))
    }

    /// Trapezoid approximation of `∫ x^α f`.
    pub fn moment(&self, alpha: &[u32]) -> f64 {
        self.weighted_sum(|x| monomial(x, alpha))
    }

    /// Trapezoid approximation of `∫ |x^α f|`, the natural scale of [`Self::moment`].
    pub fn moment_scale(&self, alpha: &[u32]) -> f64 {
        let c = self.geom.cell();
        (0..self.samples.len())
            .map(|p| {
                let x = self.geom.point(p);
                (monomial(&x[..self.geom.dim], alpha) * self.samples[p].to_f64().unwrap()).abs()
            })
            .sum::<f64>()
            * c
    }

    /// `h^{d-1} Σ w(x_p)·f(x_p)`.
    pub fn weighted_sum(&self, w: impl Fn(&[f64]) -> f64) -> f64 {
        let c = self.geom.cell();
        (0..self.samples.len())
            .map(|p| {
                let x = self.geom.point(p);
                w(&x[..self.geom.dim]) * self.samples[p].to_f64().unwrap()
            })
            .sum::<f64>()
            * c
    }
}

pub(crate) fn monomial(x: &[f64], alpha: &[u32]) -> f64 {
    x.iter().zip(alpha).map(|(v, &a)| v.powi(a as i32)).product()
}

/// Multi-indices of total degree at most `deg` in `dim` variables, graded
/// and in decreasing lexicographic order within each degree.
pub fn multi_indices(dim: usize, deg: usize) -> Vec<Vec<u32>> {
    fn with_sum(dim: usize, total: u32, out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>) {
        if dim == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=total).rev() {
            prefix.push(a);
            with_sum(dim - 1, total - a, out, prefix);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=deg as u32 {
        with_sum(dim.max(1), total, &mut out, &mut Vec::new());
    }
    out
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

impl GridField<f64> {
    /// Writes little-endian `f64` samples to `path` and the geometry to
    /// `path.json`.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes: Vec<u8> = self.samples.iter().flat_map(|v| v.to_le_bytes()).collect();
        fs::write(path, bytes)?;
        fs::write(sidecar(path), serde_json::to_string(&self.geom)?)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let geom: Geometry = serde_json::from_str(&fs::read_to_string(sidecar(path))?)?;
        geom.check()?;
        let bytes = fs::read(path)?;
        if bytes.len() != 8 * geom.len() {
            return Err(Error::Io(format!("{}: {} bytes, expected {}", path.display(), bytes.len(), 8 * geom.len())));
        }
        let samples = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Self::new(geom, samples)
    }
}

fn shared_geometry<T: Real>(m: usize, fields: &[GridField<T>], what: &str) -> Result<()> {
    if m == 0 {
        return Err(Error::Dimension("order m must be at least 1".into()));
    }
    if fields.len() != m {
        return Err(Error::Dimension(format!("{what}: {} fields for m = {m}", fields.len())));
    }
    if fields.windows(2).any(|w| w[0].geom != w[1].geom) {
        return Err(Error::Dimension(format!("{what}: fields do not share a grid")));
    }
    Ok(())
}

/// Dirichlet traces `h_0, …, h_{m-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletData<T> {
    pub m: usize,
    pub h: Vec<GridField<T>>,
}

impl<T: Real> DirichletData<T> {
    pub fn new(h: Vec<GridField<T>>) -> Result<Self> {
        let m = h.len();
        shared_geometry(m, &h, "Dirichlet data")?;
        Ok(DirichletData { m, h })
    }

    pub fn zeros(m: usize, geom: Geometry) -> Result<Self> {
        Self::new(vec![GridField::zeros(geom); m])
    }

    pub fn geometry(&self) -> Geometry {
        self.h[0].geom
    }
}

/// Layer densities `g_0, …, g_{m-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityData<T> {
    pub m: usize,
    pub g: Vec<GridField<T>>,
}

impl<T: Real> DensityData<T> {
    pub fn new(g: Vec<GridField<T>>) -> Result<Self> {
        let m = g.len();
        shared_geometry(m, &g, "density data")?;
        Ok(DensityData { m, g })
    }

    pub fn zeros(m: usize, geom: Geometry) -> Result<Self> {
        Self::new(vec![GridField::zeros(geom); m])
    }

    pub fn geometry(&self) -> Geometry {
        self.g[0].geom
    }

    /// Largest relative `L²` error over the components.
    pub fn relative_l2_error(&self, reference: &Self) -> Result<T> {
        let mut worst = T::zero();
        for (a, b) in self.g.iter().zip(&reference.g) {
            worst = worst.max(a.relative_l2_error(b)?);
        }
        Ok(worst)
    }
}

impl<T: Real> DirichletData<T> {
    pub fn relative_l2_error(&self, reference: &Self) -> Result<T> {
        let mut worst = T::zero();
        for (a, b) in self.h.iter().zip(&reference.h) {
            worst = worst.max(a.relative_l2_error(b)?);
        }
        Ok(worst)
    }
}

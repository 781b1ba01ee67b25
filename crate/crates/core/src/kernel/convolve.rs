use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::RieszKernel;
use crate::lattice::LatticeBox;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionBackend {
    /// Direct double sum over box sites; the reference path.
    #[default]
    Direct,
    /// Circular FFT convolution on a padded grid of side `4R + 1`.
    Fft,
}

/// Reference `(R * f)(x) = Σ_{y ∈ box} R(x - y) f(y)` by direct summation.
pub fn convolve(lattice: &LatticeBox, kernel: &RieszKernel, f: &[f64]) -> Result<Vec<f64>> {
    Convolver::new(lattice, kernel.clone(), ConvolutionBackend::Direct)?.apply(f)
}

/// `R * f` on a fixed box, with the lag lookup (or kernel spectrum) precomputed.
pub struct Convolver {
    kernel: RieszKernel,
    backend: ConvolutionBackend,
    sites: usize,
    // Σ_i x_i · stride_i per site; lag index of x - y is offset[x] - offset[y] + center
    offsets: Vec<isize>,
    center: isize,
    fft: Option<FftGrid>,
}

struct FftGrid {
    dim: usize,
    len: usize,
    radius: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    spectrum: Vec<Complex<f64>>,
}

impl std::fmt::Debug for Convolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Convolver")
            .field("backend", &self.backend)
            .field("sites", &self.sites)
            .field("alpha", &self.kernel.alpha())
            .finish()
    }
}

impl Convolver {
    pub fn new(lattice: &LatticeBox, kernel: RieszKernel, backend: ConvolutionBackend) -> Result<Self> {
        if kernel.dim() != lattice.dim() || kernel.reach() < 2 * lattice.radius() {
            return Err(Error::Kernel(format!(
                "kernel table (dim {}, reach {}) does not cover all lags of a box (dim {}, radius {})",
                kernel.dim(),
                kernel.reach(),
                lattice.dim(),
                lattice.radius()
            )));
        }
        let side = 2 * kernel.reach() + 1;
        let strides: Vec<isize> = (0..lattice.dim())
            .map(|i| side.pow((lattice.dim() - 1 - i) as u32) as isize)
            .collect();
        let offsets = (0..lattice.site_count())
            .map(|i| {
                lattice.coords(i).iter().zip(&strides).map(|(x, s)| *x as isize * s).sum()
            })
            .collect();
        let center = kernel.lag_index(&vec![0; lattice.dim()]).unwrap() as isize;
        let fft = match backend {
            ConvolutionBackend::Direct => None,
            ConvolutionBackend::Fft => Some(FftGrid::new(lattice, &kernel)),
        };
        Ok(Convolver { kernel, backend, sites: lattice.site_count(), offsets, center, fft })
    }

    pub fn kernel(&self) -> &RieszKernel {
        &self.kernel
    }

    pub fn backend(&self) -> ConvolutionBackend {
        self.backend
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.sites {
            return Err(Error::Shape { expected: self.sites, got: f.len() });
        }
        Ok(match &self.fft {
            Some(grid) => grid.apply(f),
            None => self.direct(f),
        })
    }

    fn direct(&self, f: &[f64]) -> Vec<f64> {
        let table = self.kernel.table();
        let support: Vec<(isize, f64)> = f
            .iter()
            .zip(&self.offsets)
            .filter(|(v, _)| **v != 0.0)
            .map(|(v, o)| (*o, *v))
            .collect();
        self.offsets
            .iter()
            .map(|&ox| {
                let base = ox + self.center;
                support.iter().map(|&(oy, v)| table[(base - oy) as usize] * v).sum()
            })
            .collect()
    }
}

impl FftGrid {
    fn new(lattice: &LatticeBox, kernel: &RieszKernel) -> Self {
        let dim = lattice.dim();
        let radius = lattice.radius();
        let len = 4 * radius + 1;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let total = len.pow(dim as u32);
        let mut spectrum = vec![Complex::new(0.0, 0.0); total];
        let reach = 2 * radius as i64;
        for (idx, slot) in spectrum.iter_mut().enumerate() {
            // grid index n ↔ lag z with z ≡ n (mod len), |z_i| ≤ 2R
            let mut rem = idx;
            let mut lag = vec![0i64; dim];
            for axis in (0..dim).rev() {
                let n = (rem % len) as i64;
                rem /= len;
                lag[axis] = if n > reach { n - len as i64 } else { n };
            }
            *slot = Complex::new(kernel.at(&lag), 0.0);
        }
        let mut grid = FftGrid { dim, len, radius, forward, inverse, spectrum: Vec::new() };
        grid.transform(&mut spectrum, false);
        grid.spectrum = spectrum;
        grid
    }

    fn transform(&self, data: &mut [Complex<f64>], inverse: bool) {
        let plan = if inverse { &self.inverse } else { &self.forward };
        let len = self.len;
        let mut line = vec![Complex::new(0.0, 0.0); len];
        for axis in 0..self.dim {
            let stride = len.pow((self.dim - 1 - axis) as u32);
            let outer = data.len() / (len * stride);
            for o in 0..outer {
                for inner in 0..stride {
                    let base = o * len * stride + inner;
                    for k in 0..len {
                        line[k] = data[base + k * stride];
                    }
                    plan.process(&mut line);
                    for k in 0..len {
                        data[base + k * stride] = line[k];
                    }
                }
            }
        }
    }

    fn apply(&self, f: &[f64]) -> Vec<f64> {
        let side = 2 * self.radius + 1;
        let total = self.spectrum.len();
        let mut buf = vec![Complex::new(0.0, 0.0); total];
        for (i, &v) in f.iter().enumerate() {
            buf[self.embed(i, side)] = Complex::new(v, 0.0);
        }
        self.transform(&mut buf, false);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.transform(&mut buf, true);
        let scale = 1.0 / total as f64;
        (0..f.len()).map(|i| buf[self.embed(i, side)].re * scale).collect()
    }

    // box site (offset coords x + R in [0, 2R]) → padded grid index
    fn embed(&self, mut site: usize, side: usize) -> usize {
        let mut idx = 0;
        let mut mul = 1;
        for _ in 0..self.dim {
            idx += (site % side) * mul;
            site /= side;
            mul *= self.len;
        }
        idx
    }
}

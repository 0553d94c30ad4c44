//! Masked unitary 2-D Fourier operator for single-coil MRI.
//!
//! Real image in, interleaved complex k-space out (trailing extent of 2).
//! The mask keeps a set of k-space columns: a fully sampled central (ACS)
//! band plus uniformly random columns up to the requested acceleration.
//! Transforms run in 64-bit internally; storage stays 32-bit.

use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::rng::RngStream;
use crate::tensor::Tensor;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Column keep-mask over the k-space grid of an `[h, w]` image.
///
/// `keep` is indexed in unshifted FFT order (DC at index 0).
#[derive(Debug, Clone)]
pub struct FourierMask {
    pub height: usize,
    pub width: usize,
    pub keep: Vec<bool>,
    pub acs_fraction: f64,
    pub acceleration: f64,
}

impl FourierMask {
    /// All columns kept.
    pub fn full(height: usize, width: usize) -> Self {
        FourierMask {
            height,
            width,
            keep: vec![true; width],
            acs_fraction: 1.0,
            acceleration: 1.0,
        }
    }

    /// Central `acs_fraction` of columns fully sampled, remaining columns
    /// drawn uniformly at random until `1/acceleration` of all columns are
    /// kept.
    pub fn random_columns(
        height: usize,
        width: usize,
        acs_fraction: f64,
        acceleration: f64,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&acs_fraction) {
            return Err(Error::invalid("acs_fraction must be in [0, 1]"));
        }
        if acceleration < 1.0 {
            return Err(Error::invalid("acceleration must be >= 1"));
        }
        let n_keep = ((width as f64 / acceleration).round() as usize).max(1);
        let n_acs = ((acs_fraction * width as f64).round() as usize).clamp(1, width);

        // Build in centered order (DC at width/2), then rotate to FFT order.
        let mut centered = vec![false; width];
        let acs_start = width / 2 - n_acs / 2;
        for c in acs_start..(acs_start + n_acs).min(width) {
            centered[c] = true;
        }
        let mut kept = centered.iter().filter(|&&k| k).count();
        let open: Vec<usize> = (0..width).filter(|&c| !centered[c]).collect();
        let mut open = open;
        while kept < n_keep && !open.is_empty() {
            let pick = rng.below(open.len());
            centered[open.swap_remove(pick)] = true;
            kept += 1;
        }

        let mut keep = vec![false; width];
        for (c, &k) in centered.iter().enumerate() {
            // centered index c corresponds to frequency c - width/2
            let shifted = (c + width - width / 2) % width;
            keep[shifted] = k;
        }
        Ok(FourierMask {
            height,
            width,
            keep,
            acs_fraction,
            acceleration,
        })
    }

    pub fn kept_fraction(&self) -> f64 {
        self.keep.iter().filter(|&&k| k).count() as f64 / self.width as f64
    }
}

pub struct FourierOperator {
    mask: FourierMask,
    in_shape: Vec<usize>,
    out_shape: Vec<usize>,
    fft_row: Arc<dyn Fft<f64>>,
    fft_col: Arc<dyn Fft<f64>>,
    ifft_row: Arc<dyn Fft<f64>>,
    ifft_col: Arc<dyn Fft<f64>>,
}

impl FourierOperator {
    pub fn new(mask: FourierMask) -> Self {
        let mut planner = FftPlanner::new();
        let (h, w) = (mask.height, mask.width);
        FourierOperator {
            in_shape: vec![h, w],
            out_shape: vec![h, w, 2],
            fft_row: planner.plan_fft_forward(w),
            fft_col: planner.plan_fft_forward(h),
            ifft_row: planner.plan_fft_inverse(w),
            ifft_col: planner.plan_fft_inverse(h),
            mask,
        }
    }

    pub fn mask(&self) -> &FourierMask {
        &self.mask
    }

    fn fft2(&self, grid: &mut [Complex<f64>], inverse: bool) {
        let (h, w) = (self.mask.height, self.mask.width);
        let (row_fft, col_fft) = if inverse {
            (&self.ifft_row, &self.ifft_col)
        } else {
            (&self.fft_row, &self.fft_col)
        };
        for r in 0..h {
            row_fft.process(&mut grid[r * w..(r + 1) * w]);
        }
        let mut col = vec![Complex::default(); h];
        for c in 0..w {
            for r in 0..h {
                col[r] = grid[r * w + c];
            }
            col_fft.process(&mut col);
            for r in 0..h {
                grid[r * w + c] = col[r];
            }
        }
        // unitary normalization, split across forward/inverse
        let scale = 1.0 / ((h * w) as f64).sqrt();
        for v in grid.iter_mut() {
            *v *= scale;
        }
    }

    fn apply_mask(&self, grid: &mut [Complex<f64>]) {
        let (h, w) = (self.mask.height, self.mask.width);
        for c in 0..w {
            if !self.mask.keep[c] {
                for r in 0..h {
                    grid[r * w + c] = Complex::default();
                }
            }
        }
    }
}

impl LinearOperator for FourierOperator {
    fn input_shape(&self) -> &[usize] {
        &self.in_shape
    }

    fn output_shape(&self) -> &[usize] {
        &self.out_shape
    }

    fn apply(&self, x: &Tensor) -> Result<Tensor> {
        self.check_input(x)?;
        let mut grid: Vec<Complex<f64>> = x
            .data()
            .iter()
            .map(|&v| Complex::new(v as f64, 0.0))
            .collect();
        self.fft2(&mut grid, false);
        self.apply_mask(&mut grid);
        let mut out = Vec::with_capacity(grid.len() * 2);
        for v in &grid {
            out.push(v.re as f32);
            out.push(v.im as f32);
        }
        Tensor::from_vec(&self.out_shape, out)
    }

    fn adjoint(&self, y: &Tensor) -> Result<Tensor> {
        self.check_output(y)?;
        let mut grid: Vec<Complex<f64>> = y
            .data()
            .chunks_exact(2)
            .map(|c| Complex::new(c[0] as f64, c[1] as f64))
            .collect();
        // adjoint of masking is masking; zero-fill anything not kept
        self.apply_mask(&mut grid);
        self.fft2(&mut grid, true);
        let out: Vec<f32> = grid.iter().map(|v| v.re as f32).collect();
        Tensor::from_vec(&self.in_shape, out)
    }

    fn name(&self) -> &str {
        "fourier"
    }
}

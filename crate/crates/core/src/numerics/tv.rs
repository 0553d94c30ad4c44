//! Smoothed isotropic total variation and its exact gradient.
//!
//! Forward differences with replicate boundary: the difference past the last
//! row/column is zero. The nondifferentiable point is smoothed with `eps`,
//! `Σ sqrt(Δx² + Δy² + eps²) − eps`, so the value stays zero for constant
//! images and the gradient exists everywhere.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

pub const DEFAULT_TV_EPS: f64 = 1e-6;

fn diffs(img: &Tensor, h: usize, w: usize, i: usize, j: usize) -> (f64, f64) {
    let d = img.data();
    let v = d[i * w + j] as f64;
    let dx = if j + 1 < w { d[i * w + j + 1] as f64 - v } else { 0.0 };
    let dy = if i + 1 < h { d[(i + 1) * w + j] as f64 - v } else { 0.0 };
    (dx, dy)
}

pub fn total_variation(img: &Tensor, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::invalid("tv smoothing eps must be positive"));
    }
    img.ensure_finite("total_variation input")?;
    let (h, w) = img.dims2()?;
    let mut acc = 0.0f64;
    for i in 0..h {
        for j in 0..w {
            let (dx, dy) = diffs(img, h, w, i, j);
            acc += (dx * dx + dy * dy + eps * eps).sqrt() - eps;
        }
    }
    Ok(acc)
}

/// Exact gradient of [`total_variation`] at `img`.
pub fn tv_gradient(img: &Tensor, eps: f64) -> Result<Tensor> {
    if eps <= 0.0 {
        return Err(Error::invalid("tv smoothing eps must be positive"));
    }
    let (h, w) = img.dims2()?;
    let mut grad = Tensor::zeros(img.shape());
    let g = grad.data_mut();
    for i in 0..h {
        for j in 0..w {
            let (dx, dy) = diffs(img, h, w, i, j);
            let r = (dx * dx + dy * dy + eps * eps).sqrt();
            // d/dx[i,j] of the (i,j) term
            g[i * w + j] += (-(dx + dy) / r) as f32;
            // the (i,j) term also depends on the right and lower neighbours
            if j + 1 < w {
                g[i * w + j + 1] += (dx / r) as f32;
            }
            if i + 1 < h {
                g[(i + 1) * w + j] += (dy / r) as f32;
            }
        }
    }
    Ok(grad)
}

//! Image quality metrics: PSNR and SSIM.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// PSNR is capped here when the MSE is exactly zero, so metric tables never
/// carry infinities.
pub const PSNR_CAP_DB: f64 = 300.0;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// `10·log10(data_range² / MSE)` in dB, with 64-bit accumulation of the MSE.
pub fn psnr(x: &Tensor, reference: &Tensor, data_range: f64) -> Result<f64> {
    x.check_same_shape(reference)?;
    if data_range <= 0.0 {
        return Err(Error::invalid("psnr data_range must be positive"));
    }
    let mut acc = 0.0f64;
    for (a, b) in x.data().iter().zip(reference.data()) {
        let d = *a as f64 - *b as f64;
        acc += d * d;
    }
    let mse = acc / x.numel() as f64;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok(10.0 * (data_range * data_range / mse).log10())
}

fn gaussian_window(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let mut w: Vec<f64> = (0..size)
        .map(|i| (-((i as f64 - c).powi(2)) / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = w.iter().sum();
    for v in &mut w {
        *v /= s;
    }
    w
}

/// Mean local SSIM over valid window positions with the standard constants
/// (Gaussian window 11×11, σ = 1.5, k1 = 0.01, k2 = 0.03).
pub fn ssim(x: &Tensor, reference: &Tensor, data_range: f64) -> Result<f64> {
    x.check_same_shape(reference)?;
    let (h, w) = x.dims2()?;
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(Error::invalid(format!(
            "image {h}x{w} smaller than ssim window {SSIM_WINDOW}"
        )));
    }
    let win = gaussian_window(SSIM_WINDOW, SSIM_SIGMA);
    let c1 = (SSIM_K1 * data_range).powi(2);
    let c2 = (SSIM_K2 * data_range).powi(2);

    let xd = x.data();
    let yd = reference.data();
    let mut acc = 0.0f64;
    let mut count = 0usize;
    for top in 0..=(h - SSIM_WINDOW) {
        for left in 0..=(w - SSIM_WINDOW) {
            let mut mx = 0.0f64;
            let mut my = 0.0f64;
            let mut mxx = 0.0f64;
            let mut myy = 0.0f64;
            let mut mxy = 0.0f64;
            for wi in 0..SSIM_WINDOW {
                for wj in 0..SSIM_WINDOW {
                    let wt = win[wi] * win[wj];
                    let a = xd[(top + wi) * w + left + wj] as f64;
                    let b = yd[(top + wi) * w + left + wj] as f64;
                    mx += wt * a;
                    my += wt * b;
                    mxx += wt * a * a;
                    myy += wt * b * b;
                    mxy += wt * a * b;
                }
            }
            let vx = mxx - mx * mx;
            let vy = myy - my * my;
            let cov = mxy - mx * my;
            let s = ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            acc += s;
            count += 1;
        }
    }
    Ok(acc / count as f64)
}

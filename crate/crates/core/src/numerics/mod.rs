//! Dense numerical building blocks: conjugate gradient, total variation,
//! and image quality metrics.

mod cg;
mod metrics;
mod tv;

pub use cg::conjugate_gradient;
pub use metrics::{psnr, ssim, PSNR_CAP_DB, SSIM_K1, SSIM_K2, SSIM_SIGMA, SSIM_WINDOW};
pub use tv::{total_variation, tv_gradient, DEFAULT_TV_EPS};

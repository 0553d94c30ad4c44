//! Discrete forward operators with matched adjoints, measurement simulation,
//! and the adjoint self-test used across the test suites.

mod downsample;
mod fbp;
mod fourier;
mod radon;

pub use downsample::{DownsampleOperator, DownsampleSpec};
pub use fbp::{fbp, fbp_with, FbpFilter};
pub use fourier::{FourierMask, FourierOperator};
pub use radon::{RadonGeometry, RadonOperator};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tensor::Tensor;

/// A linear map with a machine-precision matched adjoint:
/// `⟨apply(x), y⟩ = ⟨x, adjoint(y)⟩` for all x, y.
pub trait LinearOperator: Send + Sync {
    fn input_shape(&self) -> &[usize];
    fn output_shape(&self) -> &[usize];
    fn apply(&self, x: &Tensor) -> Result<Tensor>;
    fn adjoint(&self, y: &Tensor) -> Result<Tensor>;

    fn name(&self) -> &str {
        "operator"
    }

    /// `AᵀA x`, the normal-equations map used by data consistency.
    fn normal_apply(&self, x: &Tensor) -> Result<Tensor> {
        self.adjoint(&self.apply(x)?)
    }

    fn check_input(&self, x: &Tensor) -> Result<()> {
        if x.shape() == self.input_shape() {
            Ok(())
        } else {
            Err(Error::shape(self.input_shape(), x.shape()))
        }
    }

    fn check_output(&self, y: &Tensor) -> Result<()> {
        if y.shape() == self.output_shape() {
            Ok(())
        } else {
            Err(Error::shape(self.output_shape(), y.shape()))
        }
    }
}

/// The identity map; useful as a baseline operator and in tests.
pub struct IdentityOperator {
    shape: Vec<usize>,
}

impl IdentityOperator {
    pub fn new(shape: &[usize]) -> Self {
        IdentityOperator {
            shape: shape.to_vec(),
        }
    }
}

impl LinearOperator for IdentityOperator {
    fn input_shape(&self) -> &[usize] {
        &self.shape
    }
    fn output_shape(&self) -> &[usize] {
        &self.shape
    }
    fn apply(&self, x: &Tensor) -> Result<Tensor> {
        self.check_input(x)?;
        Ok(x.clone())
    }
    fn adjoint(&self, y: &Tensor) -> Result<Tensor> {
        self.check_output(y)?;
        Ok(y.clone())
    }
    fn name(&self) -> &str {
        "identity"
    }
}

/// A measurement vector together with the noise level it was simulated at
/// and the name of the operator that produced it.
#[derive(Debug, Clone)]
pub struct MeasurementData {
    pub y: Tensor,
    pub sigma: f32,
    pub operator: String,
}

/// Simulate `y = A x + η` with relative Gaussian noise:
/// `σ_y = rel_noise · ‖A x‖₂ / √d_y`, `η ~ N(0, σ_y² I)`.
///
/// `rel_noise = 0` yields the exact noiseless measurement and consumes no
/// random draws.
pub fn simulate_measurement(
    x: &Tensor,
    op: &dyn LinearOperator,
    rel_noise: f64,
    rng: &mut RngStream,
) -> Result<MeasurementData> {
    if rel_noise < 0.0 {
        return Err(Error::invalid("rel_noise must be nonnegative"));
    }
    let mut y = op.apply(x)?;
    let mut sigma = 0.0f32;
    if rel_noise > 0.0 {
        let d_y = y.numel() as f64;
        sigma = (rel_noise * y.norm2_f64() / d_y.sqrt()) as f32;
        for v in y.data_mut() {
            *v += sigma * rng.normal_f32();
        }
    }
    Ok(MeasurementData {
        y,
        sigma,
        operator: op.name().to_string(),
    })
}

/// Maximum relative adjoint discrepancy
/// `|⟨Ax,y⟩ − ⟨x,Aᵀy⟩| / (‖Ax‖·‖y‖)` over random trial pairs.
pub fn adjoint_check(op: &dyn LinearOperator, trials: usize, rng: &mut RngStream) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x = rng.normal_tensor(op.input_shape());
        let y = rng.normal_tensor(op.output_shape());
        let ax = op.apply(&x)?;
        let aty = op.adjoint(&y)?;
        let lhs = ax.dot_f64(&y)?;
        let rhs = x.dot_f64(&aty)?;
        let denom = (ax.norm2_f64() * y.norm2_f64()).max(1e-300);
        worst = worst.max((lhs - rhs).abs() / denom);
    }
    Ok(worst)
}

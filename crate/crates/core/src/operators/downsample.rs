//! Block-average downsampling along one axis, with the replicate-and-scale
//! adjoint.

use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DownsampleSpec {
    pub axis: usize,
    pub factor: usize,
}

pub struct DownsampleOperator {
    spec: DownsampleSpec,
    in_shape: Vec<usize>,
    out_shape: Vec<usize>,
    outer: usize,
    len: usize,
    inner: usize,
}

impl DownsampleOperator {
    pub fn new(input_shape: &[usize], spec: DownsampleSpec) -> Result<Self> {
        if spec.axis >= input_shape.len() {
            return Err(Error::invalid(format!(
                "downsample axis {} out of range for shape {input_shape:?}",
                spec.axis
            )));
        }
        if spec.factor == 0 {
            return Err(Error::invalid("downsample factor must be >= 1"));
        }
        let len = input_shape[spec.axis];
        if len % spec.factor != 0 {
            return Err(Error::invalid(format!(
                "extent {len} along axis {} not divisible by factor {}",
                spec.axis, spec.factor
            )));
        }
        let mut out_shape = input_shape.to_vec();
        out_shape[spec.axis] = len / spec.factor;
        Ok(DownsampleOperator {
            spec,
            outer: input_shape[..spec.axis].iter().product(),
            inner: input_shape[spec.axis + 1..].iter().product(),
            len,
            in_shape: input_shape.to_vec(),
            out_shape,
        })
    }

    pub fn spec(&self) -> DownsampleSpec {
        self.spec
    }
}

impl LinearOperator for DownsampleOperator {
    fn input_shape(&self) -> &[usize] {
        &self.in_shape
    }

    fn output_shape(&self) -> &[usize] {
        &self.out_shape
    }

    fn apply(&self, x: &Tensor) -> Result<Tensor> {
        self.check_input(x)?;
        let f = self.spec.factor;
        let out_len = self.len / f;
        let mut out = Tensor::zeros(&self.out_shape);
        let src = x.data();
        let dst = out.data_mut();
        for o in 0..self.outer {
            for block in 0..out_len {
                for i in 0..self.inner {
                    let mut acc = 0.0f64;
                    for k in 0..f {
                        acc += src[(o * self.len + block * f + k) * self.inner + i] as f64;
                    }
                    dst[(o * out_len + block) * self.inner + i] = (acc / f as f64) as f32;
                }
            }
        }
        Ok(out)
    }

    fn adjoint(&self, y: &Tensor) -> Result<Tensor> {
        self.check_output(y)?;
        let f = self.spec.factor;
        let out_len = self.len / f;
        let mut out = Tensor::zeros(&self.in_shape);
        let src = y.data();
        let dst = out.data_mut();
        let scale = 1.0 / f as f32;
        for o in 0..self.outer {
            for block in 0..out_len {
                for i in 0..self.inner {
                    let v = src[(o * out_len + block) * self.inner + i] * scale;
                    for k in 0..f {
                        dst[(o * self.len + block * f + k) * self.inner + i] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    fn name(&self) -> &str {
        "downsample"
    }
}

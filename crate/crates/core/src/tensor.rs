//! Dense row-major tensor with 32-bit storage.
//!
//! All reductions (dot products, norms) accumulate in 64-bit; everything else
//! stays in `f32`. Images are rank-2 tensors `[h, w]`, sinograms are
//! `[angles, detectors]`, and interleaved complex data carries a trailing
//! extent of 2.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f32>,
}

impl Tensor {
    pub fn zeros(shape: &[usize]) -> Self {
        let n = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![0.0; n],
        }
    }

    pub fn filled(shape: &[usize], value: f32) -> Self {
        let n = shape.iter().product();
        Tensor {
            shape: shape.to_vec(),
            data: vec![value; n],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<f32>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n != data.len() {
            return Err(Error::invalid(format!(
                "data length {} does not match shape {:?}",
                data.len(),
                shape
            )));
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn zeros_like(other: &Tensor) -> Self {
        Tensor::zeros(other.shape())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    /// Interpret as a rank-2 tensor, returning (rows, cols).
    pub fn dims2(&self) -> Result<(usize, usize)> {
        match self.shape.as_slice() {
            &[r, c] => Ok((r, c)),
            other => Err(Error::invalid(format!("expected rank-2 tensor, got {other:?}"))),
        }
    }

    pub fn same_shape(&self, other: &Tensor) -> bool {
        self.shape == other.shape
    }

    pub fn check_same_shape(&self, other: &Tensor) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(&self.shape, &other.shape))
        }
    }

    /// Reshape in place; the number of elements must not change.
    pub fn reshape(mut self, shape: &[usize]) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n != self.data.len() {
            return Err(Error::invalid(format!(
                "cannot reshape {:?} ({} elements) to {:?}",
                self.shape,
                self.data.len(),
                shape
            )));
        }
        self.shape = shape.to_vec();
        Ok(self)
    }

    pub fn map(&self, f: impl Fn(f32) -> f32) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&mut self, a: f32) {
        for v in &mut self.data {
            *v *= a;
        }
    }

    /// `self += a * other`
    pub fn scaled_add(&mut self, a: f32, other: &Tensor) -> Result<()> {
        self.check_same_shape(other)?;
        for (s, o) in self.data.iter_mut().zip(&other.data) {
            *s += a * o;
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Tensor {
            shape: self.shape.clone(),
            data,
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Tensor {
            shape: self.shape.clone(),
            data,
        })
    }

    /// Dot product with 64-bit accumulation.
    pub fn dot_f64(&self, other: &Tensor) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(dot_f64(&self.data, &other.data))
    }

    /// Euclidean norm with 64-bit accumulation.
    pub fn norm2_f64(&self) -> f64 {
        dot_f64(&self.data, &self.data).sqrt()
    }

    pub fn min_max(&self) -> (f32, f32) {
        let mut lo = f32::INFINITY;
        let mut hi = f32::NEG_INFINITY;
        for &v in &self.data {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, context: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::non_finite(context))
        }
    }

    /// Maximum absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        self.check_same_shape(other)?;
        let mut m = 0.0f64;
        for (a, b) in self.data.iter().zip(&other.data) {
            m = m.max((*a as f64 - *b as f64).abs());
        }
        Ok(m)
    }

    /// `‖self − other‖₂ / max(‖other‖₂, tiny)`.
    pub fn rel_l2_diff(&self, other: &Tensor) -> Result<f64> {
        self.check_same_shape(other)?;
        let mut num = 0.0f64;
        for (a, b) in self.data.iter().zip(&other.data) {
            let d = *a as f64 - *b as f64;
            num += d * d;
        }
        let den = other.norm2_f64().max(1e-30);
        Ok(num.sqrt() / den)
    }

    /// Bitwise equality of shape and every element.
    pub fn bit_eq(&self, other: &Tensor) -> bool {
        self.shape == other.shape
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Slice dot product with 64-bit accumulation.
pub fn dot_f64(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        acc += *x as f64 * *y as f64;
    }
    acc
}

/// Slice sum with 64-bit accumulation.
pub fn sum_f64(a: &[f32]) -> f64 {
    a.iter().map(|&v| v as f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_checks_length() {
        assert!(Tensor::from_vec(&[2, 2], vec![0.0; 3]).is_err());
        let t = Tensor::from_vec(&[2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(t.shape(), &[2, 2]);
        assert_eq!(t.numel(), 4);
    }

    #[test]
    fn dot_accumulates_f64() {
        // 1e8 + 1 overflows f32 mantissa; f64 accumulation keeps the +1s.
        let a = Tensor::from_vec(&[3], vec![1e4, 1.0, 1.0]).unwrap();
        let b = Tensor::from_vec(&[3], vec![1e4, 1.0, 1.0]).unwrap();
        assert_eq!(a.dot_f64(&b).unwrap(), 1e8 + 2.0);
    }

    #[test]
    fn scaled_add_and_norm() {
        let mut a = Tensor::zeros(&[4]);
        let b = Tensor::filled(&[4], 2.0);
        a.scaled_add(0.5, &b).unwrap();
        assert_eq!(a.data(), &[1.0; 4]);
        assert!((a.norm2_f64() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Tensor::zeros(&[2, 3]);
        let b = Tensor::zeros(&[3, 2]);
        assert!(matches!(
            a.dot_f64(&b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn finite_check() {
        let mut t = Tensor::zeros(&[2]);
        assert!(t.ensure_finite("x").is_ok());
        t.data_mut()[1] = f32::NAN;
        assert!(t.ensure_finite("x").is_err());
    }
}

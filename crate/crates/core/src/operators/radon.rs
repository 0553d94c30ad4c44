//! Parallel-beam Radon transform on the unit square.
//!
//! Ray-driven Joseph projector: each ray marches along its dominant axis one
//! pixel row/column at a time and interpolates linearly along the other axis.
//! The sparse interpolation weights are precomputed per (angle, detector), and
//! the adjoint accumulates through the very same weights, so apply/adjoint
//! form an exactly matched transpose pair.

use crate::error::{Error, Result};
use crate::operators::LinearOperator;
use crate::tensor::Tensor;
use rayon::prelude::*;

/// Square image on `[-1,1]²`, angles equidistant in `[0, π)`, detector bins
/// spanning `[-√2, √2]` so corner pixels are always covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadonGeometry {
    pub image_size: usize,
    pub num_angles: usize,
    pub num_detectors: usize,
}

impl RadonGeometry {
    pub fn new(image_size: usize, num_angles: usize, num_detectors: usize) -> Result<Self> {
        if image_size < 1 || num_angles < 1 || num_detectors < 1 {
            return Err(Error::invalid("radon geometry extents must be >= 1"));
        }
        Ok(RadonGeometry {
            image_size,
            num_angles,
            num_detectors,
        })
    }

    /// Detector count giving roughly pixel-sized bins across the diagonal.
    pub fn with_default_detectors(image_size: usize, num_angles: usize) -> Result<Self> {
        let det = ((image_size as f64) * std::f64::consts::SQRT_2).ceil() as usize;
        Self::new(image_size, num_angles, det)
    }

    pub fn angle(&self, k: usize) -> f64 {
        k as f64 * std::f64::consts::PI / self.num_angles as f64
    }

    /// Detector bin width.
    pub fn detector_spacing(&self) -> f64 {
        2.0 * std::f64::consts::SQRT_2 / self.num_detectors as f64
    }

    /// Pixel side length.
    pub fn pixel_size(&self) -> f64 {
        2.0 / self.image_size as f64
    }

    pub fn sinogram_shape(&self) -> [usize; 2] {
        [self.num_angles, self.num_detectors]
    }
}

#[derive(Debug, Clone, Copy)]
struct WeightEntry {
    pixel: u32,
    weight: f32,
}

pub struct RadonOperator {
    geo: RadonGeometry,
    in_shape: Vec<usize>,
    out_shape: Vec<usize>,
    // CSR over rays: entries for ray (angle, det) live in
    // entries[offsets[a * num_detectors + d] .. offsets[.. + 1]]
    entries: Vec<WeightEntry>,
    offsets: Vec<usize>,
}

impl RadonOperator {
    pub fn new(geo: RadonGeometry) -> Self {
        let n = geo.image_size;
        let delta = geo.pixel_size();
        let ds = geo.detector_spacing();
        let mut entries = Vec::new();
        let mut offsets = Vec::with_capacity(geo.num_angles * geo.num_detectors + 1);
        offsets.push(0);

        // Continuous pixel index for a physical coordinate; pixel c is
        // centered at -1 + (c + 0.5) * delta.
        let to_index = |coord: f64| (coord + 1.0) / delta - 0.5;

        for a in 0..geo.num_angles {
            let alpha = geo.angle(a);
            let (sin_a, cos_a) = alpha.sin_cos();
            // detector axis n̂ = (cos, sin); ray direction d̂ = (-sin, cos)
            let x_driven = sin_a.abs() >= cos_a.abs();
            for d in 0..geo.num_detectors {
                let s = -std::f64::consts::SQRT_2 + (d as f64 + 0.5) * ds;
                let step = if x_driven {
                    delta / sin_a.abs()
                } else {
                    delta / cos_a.abs()
                };
                for drive in 0..n {
                    let (x, y) = if x_driven {
                        let x = -1.0 + (drive as f64 + 0.5) * delta;
                        let tau = (x - s * cos_a) / (-sin_a);
                        (x, s * sin_a + tau * cos_a)
                    } else {
                        let y = -1.0 + (drive as f64 + 0.5) * delta;
                        let tau = (y - s * sin_a) / cos_a;
                        (s * cos_a - tau * sin_a, y)
                    };
                    let (ortho, _main) = if x_driven { (y, x) } else { (x, y) };
                    let u = to_index(ortho);
                    let i0 = u.floor();
                    let frac = u - i0;
                    let i0 = i0 as i64;
                    for (idx, w) in [(i0, 1.0 - frac), (i0 + 1, frac)] {
                        if idx < 0 || idx >= n as i64 || w == 0.0 {
                            continue;
                        }
                        let (row, col) = if x_driven {
                            (idx as usize, drive)
                        } else {
                            (drive, idx as usize)
                        };
                        entries.push(WeightEntry {
                            pixel: (row * n + col) as u32,
                            weight: (w * step) as f32,
                        });
                    }
                }
                offsets.push(entries.len());
            }
        }

        RadonOperator {
            geo,
            in_shape: vec![n, n],
            out_shape: vec![geo.num_angles, geo.num_detectors],
            entries,
            offsets,
        }
    }

    pub fn geometry(&self) -> &RadonGeometry {
        &self.geo
    }

    fn ray_entries(&self, a: usize, d: usize) -> &[WeightEntry] {
        let ray = a * self.geo.num_detectors + d;
        &self.entries[self.offsets[ray]..self.offsets[ray + 1]]
    }
}

impl LinearOperator for RadonOperator {
    fn input_shape(&self) -> &[usize] {
        &self.in_shape
    }

    fn output_shape(&self) -> &[usize] {
        &self.out_shape
    }

    fn apply(&self, x: &Tensor) -> Result<Tensor> {
        self.check_input(x)?;
        let img = x.data();
        let det = self.geo.num_detectors;
        let mut sino = vec![0.0f32; self.geo.num_angles * det];
        sino.par_chunks_mut(det).enumerate().for_each(|(a, row)| {
            for (d, out) in row.iter_mut().enumerate() {
                let mut acc = 0.0f64;
                for e in self.ray_entries(a, d) {
                    acc += e.weight as f64 * img[e.pixel as usize] as f64;
                }
                *out = acc as f32;
            }
        });
        Tensor::from_vec(&self.out_shape, sino)
    }

    fn adjoint(&self, y: &Tensor) -> Result<Tensor> {
        self.check_output(y)?;
        let sino = y.data();
        let det = self.geo.num_detectors;
        let npix = self.geo.image_size * self.geo.image_size;
        // Per-angle partial images, reduced in angle order so the
        // accumulation order is independent of thread scheduling.
        let partials: Vec<Vec<f64>> = (0..self.geo.num_angles)
            .into_par_iter()
            .map(|a| {
                let mut img = vec![0.0f64; npix];
                for d in 0..det {
                    let v = sino[a * det + d] as f64;
                    if v == 0.0 {
                        continue;
                    }
                    for e in self.ray_entries(a, d) {
                        img[e.pixel as usize] += e.weight as f64 * v;
                    }
                }
                img
            })
            .collect();
        let mut acc = vec![0.0f64; npix];
        for part in &partials {
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        }
        Tensor::from_vec(&self.in_shape, acc.into_iter().map(|v| v as f32).collect())
    }

    fn name(&self) -> &str {
        "radon"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::adjoint_check;
    use crate::rng::RngStream;

    fn smooth_disk(n: usize, radius: f64, edge: f64) -> Tensor {
        let delta = 2.0 / n as f64;
        let mut img = Tensor::zeros(&[n, n]);
        for i in 0..n {
            for j in 0..n {
                let y = -1.0 + (i as f64 + 0.5) * delta;
                let x = -1.0 + (j as f64 + 0.5) * delta;
                let rho = (x * x + y * y).sqrt();
                let t = ((radius + edge - rho) / (2.0 * edge)).clamp(0.0, 1.0);
                // cubic smoothstep edge profile
                img.data_mut()[i * n + j] = (t * t * (3.0 - 2.0 * t)) as f32;
            }
        }
        img
    }

    #[test]
    fn zero_image_zero_sinogram() {
        let geo = RadonGeometry::with_default_detectors(32, 12).unwrap();
        let op = RadonOperator::new(geo);
        let sino = op.apply(&Tensor::zeros(&[32, 32])).unwrap();
        assert!(sino.data().iter().all(|&v| v == 0.0));
        let img = op.adjoint(&Tensor::zeros(sino.shape())).unwrap();
        assert!(img.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn centered_disk_profile_is_angle_independent() {
        let n = 64;
        let geo = RadonGeometry::with_default_detectors(n, 24).unwrap();
        let op = RadonOperator::new(geo);
        // Wide edge keeps the Joseph interpolation error below the bound.
        let img = smooth_disk(n, 0.4, 0.3);
        let sino = op.apply(&img).unwrap();
        let det = geo.num_detectors;
        let first = &sino.data()[..det];
        let mut sup = 0.0f64;
        for a in 1..geo.num_angles {
            for d in 0..det {
                sup = sup.max((sino.data()[a * det + d] as f64 - first[d] as f64).abs());
            }
        }
        assert!(sup < 1e-3, "profile asymmetry {sup}");
    }

    #[test]
    fn adjoint_identity_holds() {
        let geo = RadonGeometry::with_default_detectors(48, 30).unwrap();
        let op = RadonOperator::new(geo);
        let mut rng = RngStream::new(8);
        let d = adjoint_check(&op, 20, &mut rng).unwrap();
        assert!(d < 1e-6, "adjoint discrepancy {d}");
    }

    #[test]
    fn apply_is_linear() {
        let geo = RadonGeometry::with_default_detectors(24, 10).unwrap();
        let op = RadonOperator::new(geo);
        let mut rng = RngStream::new(9);
        let x = rng.normal_tensor(&[24, 24]);
        let z = rng.normal_tensor(&[24, 24]);
        let (a, b) = (0.7f32, -1.3f32);
        let mut combo = Tensor::zeros(&[24, 24]);
        combo.scaled_add(a, &x).unwrap();
        combo.scaled_add(b, &z).unwrap();
        let lhs = op.apply(&combo).unwrap();
        let mut rhs = Tensor::zeros(lhs.shape());
        rhs.scaled_add(a, &op.apply(&x).unwrap()).unwrap();
        rhs.scaled_add(b, &op.apply(&z).unwrap()).unwrap();
        let err = lhs.rel_l2_diff(&rhs).unwrap();
        assert!(err < 1e-5, "linearity violation {err}");
    }

    #[test]
    fn one_hot_adjoint_matches_explicit_matrix_row() {
        let n = 8;
        let geo = RadonGeometry::new(n, 6, 12).unwrap();
        let op = RadonOperator::new(geo);
        // Explicit matrix built column by column from pixel basis vectors.
        let mut matrix = vec![vec![0.0f32; n * n]; 6 * 12];
        for p in 0..n * n {
            let mut e = Tensor::zeros(&[n, n]);
            e.data_mut()[p] = 1.0;
            let col = op.apply(&e).unwrap();
            for (ray, &v) in col.data().iter().enumerate() {
                matrix[ray][p] = v;
            }
        }
        for ray in [0usize, 17, 40, 71] {
            let mut onehot = Tensor::zeros(&[6, 12]);
            onehot.data_mut()[ray] = 1.0;
            let back = op.adjoint(&onehot).unwrap();
            for p in 0..n * n {
                assert!(
                    (back.data()[p] - matrix[ray][p]).abs() < 1e-6,
                    "ray {ray} pixel {p}: {} vs {}",
                    back.data()[p],
                    matrix[ray][p]
                );
            }
        }
    }

    #[test]
    fn translated_image_shifts_the_profile() {
        // Shift a smooth image by one pixel in +x; the sinogram must match
        // the original shifted along the detector axis by Δx·cos(angle),
        // up to interpolation error.
        let n = 64;
        let geo = RadonGeometry::with_default_detectors(n, 8).unwrap();
        let op = RadonOperator::new(geo);
        let img = smooth_disk(n, 0.4, 0.1);
        let mut shifted = Tensor::zeros(&[n, n]);
        for i in 0..n {
            for j in 1..n {
                shifted.data_mut()[i * n + j] = img.data()[i * n + j - 1];
            }
        }
        let sino = op.apply(&img).unwrap();
        let sino_shifted = op.apply(&shifted).unwrap();
        let det = geo.num_detectors;
        let ds = geo.detector_spacing();
        let dx = geo.pixel_size();
        let mut sup = 0.0f64;
        for a in 0..geo.num_angles {
            let off = dx * geo.angle(a).cos() / ds; // detector bins
            for d in 0..det {
                let pos = d as f64 - off;
                let lo = pos.floor();
                let frac = pos - lo;
                let lo = lo as i64;
                let sample = |k: i64| -> f64 {
                    if k < 0 || k >= det as i64 {
                        0.0
                    } else {
                        sino.data()[a * det + k as usize] as f64
                    }
                };
                let interp = (1.0 - frac) * sample(lo) + frac * sample(lo + 1);
                sup = sup.max((sino_shifted.data()[a * det + d] as f64 - interp).abs());
            }
        }
        assert!(sup < 1e-2, "translation inconsistency {sup}");
    }
}

//! Conjugate gradient for symmetric positive semidefinite systems.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Solve `H x = rhs` for a symmetric PSD map `H`, starting from `init`.
///
/// Runs until the relative residual `‖r‖/‖rhs‖` drops to `tol` or `max_steps`
/// iterations have been taken, whichever comes first. Returns the iterate and
/// the residual norms (including the initial one), which are nonincreasing in
/// exact arithmetic.
pub fn conjugate_gradient<F>(
    apply_op: F,
    rhs: &Tensor,
    init: &Tensor,
    max_steps: usize,
    tol: f64,
) -> Result<(Tensor, Vec<f64>)>
where
    F: Fn(&Tensor) -> Result<Tensor>,
{
    rhs.check_same_shape(init)?;
    if tol < 0.0 {
        return Err(Error::invalid("cg tolerance must be nonnegative"));
    }

    let mut x = init.clone();
    let hx = apply_op(&x)?;
    hx.check_same_shape(rhs)?;

    let mut r = rhs.sub(&hx)?;
    let rhs_norm = rhs.norm2_f64().max(1e-300);
    let mut rr = r.dot_f64(&r)?;
    let mut norms = vec![rr.sqrt()];

    if !rr.is_finite() {
        return Err(Error::non_finite("cg initial residual"));
    }

    let mut p = r.clone();
    for _ in 0..max_steps {
        if norms.last().unwrap() / rhs_norm <= tol {
            break;
        }
        let hp = apply_op(&p)?;
        let php = p.dot_f64(&hp)?;
        if !php.is_finite() {
            return Err(Error::non_finite("cg curvature term"));
        }
        if php <= 0.0 {
            // Exhausted the range of a semidefinite operator.
            break;
        }
        let alpha = rr / php;
        x.scaled_add(alpha as f32, &p)?;
        r.scaled_add(-(alpha as f32), &hp)?;
        let rr_new = r.dot_f64(&r)?;
        if !rr_new.is_finite() {
            return Err(Error::non_finite("cg residual"));
        }
        norms.push(rr_new.sqrt());
        let beta = rr_new / rr;
        rr = rr_new;
        // p = r + beta p
        for (pv, rv) in p.data_mut().iter_mut().zip(r.data()) {
            *pv = rv + beta as f32 * *pv;
        }
    }

    Ok((x, norms))
}

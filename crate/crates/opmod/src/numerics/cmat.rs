//! Dense complex matrices and the operator (largest singular value) norm.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::{Error, Result, TolerancePolicy};

/// Complex scalar used everywhere.
pub type C64 = Complex<f64>;
/// Dense complex matrix, the substrate of every object and morphism.
pub type CMat = DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn is_finite_mat(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn check_finite(m: &CMat) -> Result<()> {
    if is_finite_mat(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest singular value of `m`.
///
/// Returns exactly `0.0` for matrices that vanish within
/// `policy.exact_residual`.
pub fn operator_norm(m: &CMat, policy: &TolerancePolicy) -> Result<f64> {
    check_finite(m)?;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    if top < policy.exact_residual {
        Ok(0.0)
    } else {
        Ok(top)
    }
}

/// Singular values in non-increasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Trace (nuclear) norm, the dual of the operator norm.
pub fn trace_norm(m: &CMat) -> f64 {
    singular_values(m).iter().sum()
}

/// Frobenius inner product `tr(a^H b)`.
pub fn frob_inner(a: &CMat, b: &CMat) -> C64 {
    debug_assert_eq!(a.shape(), b.shape());
    let mut s = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        s += x.conj() * y;
    }
    s
}

/// Kronecker-style assembly of an element of `M_n(M_h)` into `M_{nh}`:
/// block `(i, j)` is `coeff[(i, j)] * b` summed over the given pairs.
pub fn block_assemble(n: usize, h: usize, terms: &[(CMat, CMat)]) -> CMat {
    let mut out = CMat::zeros(n * h, n * h);
    for (coeff, b) in terms {
        debug_assert_eq!(coeff.shape(), (n, n));
        debug_assert_eq!(b.shape(), (h, h));
        for i in 0..n {
            for j in 0..n {
                let z = coeff[(i, j)];
                if z != C64::new(0.0, 0.0) {
                    let mut view = out.view_mut((i * h, j * h), (h, h));
                    for r in 0..h {
                        for s in 0..h {
                            view[(r, s)] += z * b[(r, s)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Matrix unit `E_{ij}` in `M_{rows x cols}`.
pub fn unit_mat(rows: usize, cols: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Random matrix with entries uniform in the complex unit square.
pub fn random_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    })
}

pub fn random_vec<R: Rng>(rng: &mut R, len: usize) -> CVec {
    CVec::from_fn(len, |_, _| {
        c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    })
}

/// Flatten a matrix column-by-column into a vector.
pub fn vec_of_mat(m: &CMat) -> CVec {
    CVec::from_iterator(m.nrows() * m.ncols(), m.iter().copied())
}

/// Inverse of [`vec_of_mat`].
pub fn mat_of_vec(v: &CVec, rows: usize, cols: usize) -> CMat {
    debug_assert_eq!(v.len(), rows * cols);
    CMat::from_iterator(rows, cols, v.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm_is_one() {
        let p = TolerancePolicy::default();
        assert_eq!(operator_norm(&identity(2), &p).unwrap(), 1.0);
    }

    #[test]
    fn diagonal_norm_is_largest_modulus() {
        let p = TolerancePolicy::default();
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0, 0.0), c(0.0, 4.0)]));
        let n = operator_norm(&m, &p).unwrap();
        assert!((n - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        let p = TolerancePolicy::default();
        let mut m = identity(2);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(operator_norm(&m, &p), Err(Error::NonFinite)));
    }

    #[test]
    fn assemble_matches_kronecker() {
        // coeff (x) b with coeff = E_12 in M_2, b = 2x2: places b in the (0,1) block.
        let coeff = unit_mat(2, 2, 0, 1);
        let b = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let out = block_assemble(2, 2, &[(coeff, b.clone())]);
        assert_eq!(out[(0, 2)], c(1.0, 0.0));
        assert_eq!(out[(1, 3)], c(4.0, 0.0));
        assert_eq!(out[(0, 0)], c(0.0, 0.0));
    }
}

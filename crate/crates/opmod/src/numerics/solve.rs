//! Exact-regime linear algebra: ranks, null spaces, and minimum-norm affine
//! solves with infeasibility certificates.

use nalgebra::SVD;

use super::cmat::{check_finite, CMat, CVec, C64};
use crate::{Error, Result, TolerancePolicy};

/// Outcome of an affine solve `map * x = rhs`.
///
/// The two cases are mutually exclusive by construction: a witness is only
/// produced when no solution meets the residual threshold.
#[derive(Debug, Clone)]
pub enum AffineOutcome {
    /// Minimum-norm solution with its residual.
    Solution { x: CVec, residual: f64 },
    /// Left-null witness `y` (unit norm) with `y^H * map ~ 0` and
    /// `<y, rhs> != 0`; certifies that `rhs` is not in the range of `map`.
    Infeasible { witness: CVec, defect: f64 },
}

impl AffineOutcome {
    pub fn solution(&self) -> Option<&CVec> {
        match self {
            AffineOutcome::Solution { x, .. } => Some(x),
            AffineOutcome::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, AffineOutcome::Solution { .. })
    }
}

fn svd_of(m: &CMat) -> SVD<C64, nalgebra::Dyn, nalgebra::Dyn> {
    m.clone().svd(true, true)
}

fn rank_threshold(singular: &[f64], policy: &TolerancePolicy) -> f64 {
    let top = singular.first().copied().unwrap_or(0.0);
    policy.exact_residual * top.max(1.0)
}

/// Numerical rank relative to the largest singular value.
pub fn rank(m: &CMat, policy: &TolerancePolicy) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = super::cmat::singular_values(m);
    let thr = rank_threshold(&sv, policy);
    sv.iter().filter(|s| **s > thr).count()
}

/// Orthonormal basis of the null space of `m`, as columns.
pub fn null_basis(m: &CMat, policy: &TolerancePolicy) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(cols, cols);
    }
    // Pad wide matrices with zero rows so the thin SVD carries a full V and
    // every kernel direction shows up against a singular value.
    let work = if m.nrows() < cols {
        let mut w = CMat::zeros(cols, cols);
        w.view_mut((0, 0), m.shape()).copy_from(m);
        w
    } else {
        m.clone()
    };
    let svd = svd_of(&work);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let thr = rank_threshold(&{
        let mut s = sv.clone();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }, policy);
    let v_t = svd.v_t.expect("svd computed with vectors");
    let mut kernel_cols: Vec<CVec> = Vec::new();
    for (idx, s) in sv.iter().enumerate() {
        if *s <= thr {
            kernel_cols.push(v_t.row(idx).adjoint().column(0).into_owned());
        }
    }
    from_columns(cols, &kernel_cols)
}

/// Orthonormal basis of the column space of `m`, as columns.
pub fn range_basis(m: &CMat, policy: &TolerancePolicy) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let svd = svd_of(m);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let thr = rank_threshold(&{
        let mut s = sv.clone();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }, policy);
    let u = svd.u.expect("svd computed with vectors");
    let cols: Vec<CVec> = sv
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > thr)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    from_columns(m.nrows(), &cols)
}

/// Orthonormal basis (columns) of the span of the given columns.
pub fn orthonormalize(m: &CMat, policy: &TolerancePolicy) -> CMat {
    range_basis(m, policy)
}

/// Orthonormal basis of the orthogonal complement of the column span.
pub fn orthonormal_complement(basis: &CMat) -> CMat {
    let n = basis.nrows();
    if basis.ncols() == 0 {
        return CMat::identity(n, n);
    }
    let policy = TolerancePolicy::default();
    null_basis(&basis.adjoint(), &policy)
}

fn from_columns(rows: usize, cols: &[CVec]) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (i, c) in cols.iter().enumerate() {
        m.set_column(i, c);
    }
    m
}

/// Minimum-norm least-squares solution via the pseudo-inverse.
pub fn lstsq_min_norm(map: &CMat, rhs: &CVec, policy: &TolerancePolicy) -> CVec {
    if map.ncols() == 0 {
        return CVec::zeros(0);
    }
    if map.nrows() == 0 {
        return CVec::zeros(map.ncols());
    }
    let svd = svd_of(map);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let thr = rank_threshold(&{
        let mut s = sv.clone();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }, policy);
    let u = svd.u.as_ref().expect("svd computed with vectors");
    let v_t = svd.v_t.as_ref().expect("svd computed with vectors");
    // x = V * diag(1/s) * U^H * rhs, zeroing negligible singular values.
    let uh_b = u.adjoint() * rhs;
    let mut scaled = CVec::zeros(v_t.nrows());
    for (i, s) in sv.iter().enumerate() {
        if *s > thr {
            scaled[i] = uh_b[i] / C64::new(*s, 0.0);
        }
    }
    v_t.adjoint() * scaled
}

/// Solve `map * x = rhs`, returning the minimum-norm solution when the system
/// is consistent and a certified left-null witness otherwise.
pub fn solve_affine(map: &CMat, rhs: &CVec, policy: &TolerancePolicy) -> Result<AffineOutcome> {
    check_finite(map)?;
    if map.nrows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} rows but rhs has {} entries",
            map.nrows(),
            rhs.len()
        )));
    }
    let x = lstsq_min_norm(map, rhs, policy);
    let r = rhs - map * &x;
    let res = r.norm();
    let threshold = policy.exact_residual * rhs.norm().max(1.0);
    if res < threshold {
        Ok(AffineOutcome::Solution { x, residual: res })
    } else {
        let witness = &r / C64::new(res, 0.0);
        Ok(AffineOutcome::Infeasible { witness, defect: res })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cmat::{c, random_mat, random_vec, unit_mat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve_returns_rhs() {
        let p = TolerancePolicy::default();
        let map = CMat::identity(3, 3);
        let rhs = CVec::from_vec(vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 0.0)]);
        match solve_affine(&map, &rhs, &p).unwrap() {
            AffineOutcome::Solution { x, .. } => assert!((x - rhs).norm() < 1e-12),
            _ => panic!("identity system must be feasible"),
        }
    }

    #[test]
    fn zero_map_yields_witness_along_rhs() {
        let p = TolerancePolicy::default();
        let map = CMat::zeros(3, 2);
        let rhs = CVec::from_vec(vec![c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        match solve_affine(&map, &rhs, &p).unwrap() {
            AffineOutcome::Infeasible { witness, defect } => {
                assert!((defect - 2.0).abs() < 1e-12);
                // witness is rhs normalized
                assert!((witness[1] - c(1.0, 0.0)).norm() < 1e-12);
            }
            _ => panic!("zero map with nonzero rhs must be infeasible"),
        }
    }

    #[test]
    fn rank_deficient_agrees_with_column_space_test() {
        let p = TolerancePolicy::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            // Build a 4x3 map of rank 2.
            let a = random_mat(&mut rng, 4, 2);
            let b = random_mat(&mut rng, 2, 3);
            let map = &a * &b;
            let rhs = random_vec(&mut rng, 4);
            // Exhaustive column-space membership: project rhs onto range.
            let q = range_basis(&map, &p);
            let proj = &q * (q.adjoint() * &rhs);
            let in_range = (&proj - &rhs).norm() < 1e-9;
            let outcome = solve_affine(&map, &rhs, &p).unwrap();
            assert_eq!(outcome.is_feasible(), in_range);
            if let AffineOutcome::Infeasible { witness, .. } = &outcome {
                assert!((witness.adjoint() * &map).norm() < 1e-9);
                assert!((witness.adjoint() * &rhs)[(0, 0)].norm() > 10.0 * p.exact_residual);
            }
            // A rhs constructed inside the range must be feasible.
            let x0 = random_vec(&mut rng, 3);
            let rhs_in = &map * &x0;
            assert!(solve_affine(&map, &rhs_in, &p).unwrap().is_feasible());
        }
    }

    #[test]
    fn null_and_range_dimensions_are_complementary() {
        let p = TolerancePolicy::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_mat(&mut rng, 3, 2);
        let b = random_mat(&mut rng, 2, 5);
        let m = &a * &b; // rank 2, 3x5
        assert_eq!(rank(&m, &p), 2);
        let n = null_basis(&m, &p);
        assert_eq!(n.ncols(), 3);
        assert!((&m * &n).norm() < 1e-9);
        // Null basis is orthonormal.
        assert!((n.adjoint() * &n - CMat::identity(3, 3)).norm() < 1e-10);
        let r = range_basis(&m, &p);
        assert_eq!(r.ncols(), 2);
    }

    #[test]
    fn complement_of_unit_column() {
        let e0 = unit_mat(3, 1, 0, 0);
        let comp = orthonormal_complement(&e0);
        assert_eq!(comp.ncols(), 2);
        assert!((e0.adjoint() * &comp).norm() < 1e-12);
    }

    #[test]
    fn min_norm_solution_is_orthogonal_to_kernel() {
        let p = TolerancePolicy::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_mat(&mut rng, 2, 4); // wide: underdetermined
        let rhs = random_vec(&mut rng, 2);
        let x = lstsq_min_norm(&a, &rhs, &p);
        let n = null_basis(&a, &p);
        assert!((n.adjoint() * &x).norm() < 1e-9, "solution has kernel component");
    }
}

//! Finite-dimensional unital operator algebras, concretely represented
//! inside an ambient matrix algebra.
//!
//! An algebra is a linearly independent basis of `N x N` matrices whose span
//! is closed under multiplication and contains a two-sided unit. Semisimple
//! algebras built from block sizes carry their matrix units explicitly; for
//! everything else semisimplicity is decided through the radical of the
//! trace form of the left regular representation.

use nalgebra::DMatrix;

use crate::numerics::{
    lstsq_min_norm, null_basis, operator_norm, orthonormalize, rank, vec_of_mat, CMat, CVec, C64,
};
use crate::{Error, Result, TolerancePolicy};

/// Explicit matrix units `e^k_{ij}` of a blocked semisimple algebra,
/// stored as coordinate vectors in the algebra basis.
#[derive(Debug, Clone)]
pub struct SemisimpleBlocks {
    pub sizes: Vec<usize>,
    units: Vec<CVec>,
}

impl SemisimpleBlocks {
    /// Coordinates of `e^k_{ij}` (all indices zero-based).
    pub fn unit(&self, k: usize, i: usize, j: usize) -> &CVec {
        let mut offset = 0;
        for (bk, m) in self.sizes.iter().enumerate() {
            if bk == k {
                return &self.units[offset + i * m + j];
            }
            offset += m * m;
        }
        panic!("block index {k} out of range");
    }

    /// All `(k, i, j)` index triples in storage order.
    pub fn index_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (k, m) in self.sizes.iter().enumerate() {
            for i in 0..*m {
                for j in 0..*m {
                    out.push((k, i, j));
                }
            }
        }
        out
    }
}

/// A unital operator algebra together with cached structure data.
#[derive(Debug, Clone)]
pub struct OperatorAlgebra {
    ambient_dim: usize,
    basis: Vec<CMat>,
    unit_coords: CVec,
    blocks: Option<SemisimpleBlocks>,
    /// `left_mult[v]` sends coordinates of `x` to coordinates of `b_v * x`.
    left_mult: Vec<CMat>,
    /// `right_mult[v]` sends coordinates of `x` to coordinates of `x * b_v`.
    right_mult: Vec<CMat>,
    /// Basis matrices flattened into columns.
    flat_basis: CMat,
    /// Indices of a small generating set (with the unit adjoined implicitly).
    generators: Vec<usize>,
}

impl OperatorAlgebra {
    /// Block-diagonal `M_{m_1} (+) ... (+) M_{m_n}` inside `M_N`,
    /// `N = m_1 + ... + m_n`, with matrix units recorded.
    pub fn semisimple(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.iter().any(|m| *m == 0) {
            return Err(Error::InvalidAlgebra(
                "block sizes must be non-empty and positive".into(),
            ));
        }
        let n_amb: usize = sizes.iter().sum();
        let mut basis = Vec::new();
        let mut offset = 0;
        for m in sizes {
            for i in 0..*m {
                for j in 0..*m {
                    let mut e = CMat::zeros(n_amb, n_amb);
                    e[(offset + i, offset + j)] = C64::new(1.0, 0.0);
                    basis.push(e);
                }
            }
            offset += m;
        }
        let dim = basis.len();
        let units: Vec<CVec> = (0..dim)
            .map(|v| {
                let mut c = CVec::zeros(dim);
                c[v] = C64::new(1.0, 0.0);
                c
            })
            .collect();
        let blocks = SemisimpleBlocks {
            sizes: sizes.to_vec(),
            units,
        };
        Self::assemble(n_amb, basis, Some(blocks))
    }

    /// Algebra generated by arbitrary `N x N` matrices.
    ///
    /// The span is closed under multiplication if needed; the second return
    /// value counts the elements that had to be added. The unit is located by
    /// solving the identity equations, and spans without a unit are rejected.
    pub fn from_basis(ambient_dim: usize, seed_basis: &[CMat]) -> Result<(Self, usize)> {
        let policy = TolerancePolicy::default();
        if seed_basis.is_empty() {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        for b in seed_basis {
            if b.shape() != (ambient_dim, ambient_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "basis matrix has shape {:?}, ambient is {}",
                    b.shape(),
                    ambient_dim
                )));
            }
        }
        let mut flat = CMat::zeros(ambient_dim * ambient_dim, seed_basis.len());
        for (i, b) in seed_basis.iter().enumerate() {
            flat.set_column(i, &vec_of_mat(b));
        }
        let mut span = orthonormalize(&flat, &policy);
        if span.ncols() != seed_basis.len() {
            return Err(Error::InvalidAlgebra(
                "seed basis is linearly dependent".into(),
            ));
        }
        let seed_dim = span.ncols();
        loop {
            let d = span.ncols();
            let mats: Vec<CMat> = (0..d)
                .map(|i| {
                    crate::numerics::mat_of_vec(&span.column(i).into_owned(), ambient_dim, ambient_dim)
                })
                .collect();
            let mut ext = CMat::zeros(ambient_dim * ambient_dim, d * d + d);
            for (i, a) in mats.iter().enumerate() {
                for (j, b) in mats.iter().enumerate() {
                    ext.set_column(i * d + j, &vec_of_mat(&(a * b)));
                }
            }
            ext.view_mut((0, d * d), (ambient_dim * ambient_dim, d))
                .copy_from(&span);
            let closed = orthonormalize(&ext, &policy);
            if closed.ncols() == d {
                break;
            }
            span = closed;
        }
        let dim = span.ncols();
        let added = dim - seed_dim;
        // Prefer the caller's matrices as leading basis elements so reports
        // stay readable; complete with the closure directions.
        let mut basis: Vec<CMat> = seed_basis.to_vec();
        if added > 0 {
            let mut current = flat.clone();
            for i in 0..dim {
                let cand = span.column(i).into_owned();
                let mut ext = CMat::zeros(ambient_dim * ambient_dim, current.ncols() + 1);
                ext.view_mut((0, 0), current.shape()).copy_from(&current);
                ext.set_column(current.ncols(), &cand);
                if rank(&ext, &policy) > current.ncols() {
                    basis.push(crate::numerics::mat_of_vec(&cand, ambient_dim, ambient_dim));
                    current = ext;
                }
                if basis.len() == dim {
                    break;
                }
            }
        }
        let algebra = Self::assemble(ambient_dim, basis, None)?;
        Ok((algebra, added))
    }

    fn assemble(
        ambient_dim: usize,
        basis: Vec<CMat>,
        blocks: Option<SemisimpleBlocks>,
    ) -> Result<Self> {
        let policy = TolerancePolicy::default();
        let dim = basis.len();
        let mut flat_basis = CMat::zeros(ambient_dim * ambient_dim, dim);
        for (i, b) in basis.iter().enumerate() {
            flat_basis.set_column(i, &vec_of_mat(b));
        }
        if rank(&flat_basis, &policy) != dim {
            return Err(Error::InvalidAlgebra("basis is linearly dependent".into()));
        }
        let express = |m: &CMat| -> Result<CVec> {
            let rhs = vec_of_mat(m);
            let x = lstsq_min_norm(&flat_basis, &rhs, &policy);
            let residual = (&flat_basis * &x - &rhs).norm();
            if residual > policy.exact_residual * rhs.norm().max(1.0) {
                return Err(Error::InvalidAlgebra(
                    "span is not closed under multiplication".into(),
                ));
            }
            Ok(x)
        };
        let mut left_mult = vec![CMat::zeros(dim, dim); dim];
        let mut right_mult = vec![CMat::zeros(dim, dim); dim];
        for v in 0..dim {
            for w in 0..dim {
                left_mult[v].set_column(w, &express(&(&basis[v] * &basis[w]))?);
                right_mult[v].set_column(w, &express(&(&basis[w] * &basis[v]))?);
            }
        }
        // Locate the unit: coordinates u with b_v * u = u * b_v = b_v for all v.
        let mut sys = CMat::zeros(2 * dim * dim, dim);
        let mut rhs = CVec::zeros(2 * dim * dim);
        for v in 0..dim {
            for u in 0..dim {
                for w in 0..dim {
                    // coefficient of b_u in b_w b_v (left identity equations)
                    sys[(v * dim + u, w)] = right_mult[v][(u, w)];
                    // coefficient of b_u in b_v b_w (right identity equations)
                    sys[(dim * dim + v * dim + u, w)] = left_mult[v][(u, w)];
                }
                if u == v {
                    rhs[v * dim + u] = C64::new(1.0, 0.0);
                    rhs[dim * dim + v * dim + u] = C64::new(1.0, 0.0);
                }
            }
        }
        let unit_coords = lstsq_min_norm(&sys, &rhs, &policy);
        if (&sys * &unit_coords - &rhs).norm() > 1e-8 * (dim as f64).max(1.0) {
            return Err(Error::InvalidAlgebra(
                "span contains no two-sided unit".into(),
            ));
        }
        let mut algebra = OperatorAlgebra {
            ambient_dim,
            basis,
            unit_coords,
            blocks,
            left_mult,
            right_mult,
            flat_basis,
            generators: Vec::new(),
        };
        algebra.generators = algebra.compute_generators(&policy);
        algebra.verify(&policy)?;
        Ok(algebra)
    }

    fn verify(&self, policy: &TolerancePolicy) -> Result<()> {
        // L_{ab} = L_a L_b on all basis pairs.
        for v in 0..self.dim() {
            for w in 0..self.dim() {
                let ab = self.left_mult[v].column(w).into_owned();
                let l_ab = self.left_action_of(&ab);
                let composed = &self.left_mult[v] * &self.left_mult[w];
                if (&l_ab - &composed).norm() > 1e-7 {
                    return Err(Error::InvalidAlgebra(format!(
                        "left regular representation is not multiplicative at basis pair ({v}, {w})"
                    )));
                }
            }
        }
        if let Some(blocks) = &self.blocks {
            self.verify_blocks(blocks, policy)?;
        }
        Ok(())
    }

    fn verify_blocks(&self, blocks: &SemisimpleBlocks, policy: &TolerancePolicy) -> Result<()> {
        let expected: usize = blocks.sizes.iter().map(|m| m * m).sum();
        if expected != self.dim() {
            return Err(Error::InvalidAlgebra(format!(
                "blocks give dimension {expected}, basis has {}",
                self.dim()
            )));
        }
        let mut diag_sum = CVec::zeros(self.dim());
        for (k, m) in blocks.sizes.iter().enumerate() {
            for i in 0..*m {
                diag_sum += blocks.unit(k, i, i);
            }
        }
        if (&diag_sum - &self.unit_coords).norm() > 1e-8 {
            return Err(Error::InvalidAlgebra(
                "diagonal matrix units do not sum to the unit".into(),
            ));
        }
        for (k, i, j) in blocks.index_triples() {
            let e = self.realize(blocks.unit(k, i, j));
            let n = operator_norm(&e, policy)?;
            if (n - 1.0).abs() > 1e-8 {
                return Err(Error::InvalidAlgebra(format!(
                    "matrix unit ({k},{i},{j}) has norm {n}, expected 1"
                )));
            }
            for (l, p, q) in blocks.index_triples() {
                let prod = self.mul_coords(blocks.unit(k, i, j), blocks.unit(l, p, q));
                let expected = if k == l && j == p {
                    blocks.unit(k, i, q).clone()
                } else {
                    CVec::zeros(self.dim())
                };
                if (&prod - &expected).norm() > 1e-8 {
                    return Err(Error::InvalidAlgebra(format!(
                        "matrix units ({k},{i},{j}) * ({l},{p},{q}) violate the unit relations"
                    )));
                }
            }
        }
        Ok(())
    }

    fn compute_generators(&self, policy: &TolerancePolicy) -> Vec<usize> {
        let dim = self.dim();
        let mut chosen: Vec<usize> = Vec::new();
        let mut span = CMat::zeros(dim, 1);
        span.set_column(0, &self.unit_coords);
        let mut span = orthonormalize(&span, policy);
        for v in 0..dim {
            if span.ncols() == dim {
                break;
            }
            let col = CVec::from_fn(dim, |i, _| {
                if i == v {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let proj = &span * (span.adjoint() * &col);
            if (&proj - &col).norm() < 1e-10 {
                continue;
            }
            chosen.push(v);
            // Close the unital span of the chosen elements under products.
            let mut current = CMat::zeros(dim, 1 + chosen.len());
            current.set_column(0, &self.unit_coords);
            for (i, c) in chosen.iter().enumerate() {
                let mut e = CVec::zeros(dim);
                e[*c] = C64::new(1.0, 0.0);
                current.set_column(1 + i, &e);
            }
            let mut current = orthonormalize(&current, policy);
            loop {
                let d = current.ncols();
                let mut ext = CMat::zeros(dim, d * d + d);
                for i in 0..d {
                    for j in 0..d {
                        let prod = self.mul_coords(
                            &current.column(i).into_owned(),
                            &current.column(j).into_owned(),
                        );
                        ext.set_column(i * d + j, &prod);
                    }
                }
                ext.view_mut((0, d * d), (dim, d)).copy_from(&current);
                let closed = orthonormalize(&ext, policy);
                if closed.ncols() == d {
                    break;
                }
                current = closed;
            }
            span = current;
        }
        if span.ncols() == dim && !chosen.is_empty() {
            chosen
        } else {
            (0..dim).collect()
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn unit_coords(&self) -> &CVec {
        &self.unit_coords
    }

    pub fn blocks(&self) -> Option<&SemisimpleBlocks> {
        self.blocks.as_ref()
    }

    /// Indices of a generating set (the unit is adjoined implicitly).
    /// Module-map equivariance only needs to be imposed on these.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    /// Ambient matrix of an element given by coordinates.
    pub fn realize(&self, coords: &CVec) -> CMat {
        let mut m = CMat::zeros(self.ambient_dim, self.ambient_dim);
        for (v, b) in self.basis.iter().enumerate() {
            m += b * coords[v];
        }
        m
    }

    /// Coordinates of an ambient matrix, if it lies in the span.
    pub fn express(&self, m: &CMat) -> Result<CVec> {
        let policy = TolerancePolicy::default();
        let rhs = vec_of_mat(m);
        let x = lstsq_min_norm(&self.flat_basis, &rhs, &policy);
        if (&self.flat_basis * &x - &rhs).norm() > policy.exact_residual * rhs.norm().max(1.0) {
            return Err(Error::InvalidAlgebra("matrix is not in the algebra".into()));
        }
        Ok(x)
    }

    /// Product in coordinates.
    pub fn mul_coords(&self, a: &CVec, b: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim());
        for v in 0..self.dim() {
            if a[v] != C64::new(0.0, 0.0) {
                out += &self.left_mult[v] * b * a[v];
            }
        }
        out
    }

    /// Matrix of left multiplication by the element with the given coordinates.
    pub fn left_action_of(&self, coords: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim(), self.dim());
        for v in 0..self.dim() {
            m += &self.left_mult[v] * coords[v];
        }
        m
    }

    /// Matrix of right multiplication (`x -> x * a`) by the given element.
    pub fn right_action_of(&self, coords: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim(), self.dim());
        for v in 0..self.dim() {
            m += &self.right_mult[v] * coords[v];
        }
        m
    }

    pub fn left_mult(&self, v: usize) -> &CMat {
        &self.left_mult[v]
    }

    pub fn right_mult(&self, v: usize) -> &CMat {
        &self.right_mult[v]
    }

    /// Basis (columns) of the Jacobson radical, computed as the kernel of the
    /// trace form `(x, y) -> tr(L_x L_y)` of the left regular representation.
    /// Valid in characteristic zero for finite-dimensional algebras.
    pub fn radical(&self, policy: &TolerancePolicy) -> CMat {
        let dim = self.dim();
        let mut gram = CMat::zeros(dim, dim);
        for v in 0..dim {
            for w in 0..dim {
                // Bilinear (not sesquilinear) trace form.
                let prod = &self.left_mult[v] * &self.left_mult[w];
                let mut tr = C64::new(0.0, 0.0);
                for i in 0..dim {
                    tr += prod[(i, i)];
                }
                gram[(v, w)] = tr;
            }
        }
        null_basis(&gram.transpose(), policy)
    }

    pub fn radical_dim(&self, policy: &TolerancePolicy) -> usize {
        self.radical(policy).ncols()
    }

    pub fn is_semisimple(&self, policy: &TolerancePolicy) -> bool {
        self.radical_dim(policy) == 0
    }

    /// Stored matrix units, re-verified. Errors when the algebra was not
    /// constructed from block sizes: recovering a Wedderburn decomposition
    /// from a bare basis is out of scope.
    pub fn matrix_units(&self) -> Result<&SemisimpleBlocks> {
        let policy = TolerancePolicy::default();
        match &self.blocks {
            Some(blocks) => {
                self.verify_blocks(blocks, &policy)?;
                Ok(blocks)
            }
            None => Err(Error::Unsupported(
                "matrix units require an algebra built from block sizes".into(),
            )),
        }
    }
}

/// Check that the columns of `rad` span a two-sided nilpotent ideal; used by
/// property tests and load-time validation.
pub fn verify_radical_ideal(a: &OperatorAlgebra, rad: &CMat, policy: &TolerancePolicy) -> bool {
    let dim = a.dim();
    if rad.ncols() == 0 {
        return true;
    }
    let proj = rad * rad.adjoint();
    let id = DMatrix::identity(dim, dim);
    for v in 0..dim {
        for side in [a.left_mult(v), a.right_mult(v)] {
            let moved = side * rad;
            let outside = (&id - &proj) * &moved;
            if outside.norm() > 1e-7 * moved.norm().max(1.0) {
                return false;
            }
        }
    }
    // Nilpotency: N-fold products with any fixed radical element vanish.
    for c in 0..rad.ncols() {
        let col = rad.column(c).into_owned();
        let mut x = col.clone();
        for _ in 0..a.ambient_dim() {
            x = a.mul_coords(&x, &col);
        }
        if x.norm() > policy.exact_residual.sqrt() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::unit_mat;

    fn t2() -> OperatorAlgebra {
        let e11 = unit_mat(2, 2, 0, 0);
        let e12 = unit_mat(2, 2, 0, 1);
        let e22 = unit_mat(2, 2, 1, 1);
        OperatorAlgebra::from_basis(2, &[e11, e12, e22]).unwrap().0
    }

    #[test]
    fn scalar_algebra() {
        let a = OperatorAlgebra::semisimple(&[1]).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.ambient_dim(), 1);
        let unit = a.realize(a.unit_coords());
        assert!((unit[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn two_three_block_dimensions() {
        let a = OperatorAlgebra::semisimple(&[2, 3]).unwrap();
        assert_eq!(a.dim(), 13);
        assert_eq!(a.ambient_dim(), 5);
        let unit = a.realize(a.unit_coords());
        assert!((unit - CMat::identity(5, 5)).norm() < 1e-12);
    }

    #[test]
    fn matrix_unit_products_in_m2() {
        let a = OperatorAlgebra::semisimple(&[2]).unwrap();
        let blocks = a.matrix_units().unwrap();
        // e_12 e_21 = e_11
        let prod = a.mul_coords(blocks.unit(0, 0, 1), blocks.unit(0, 1, 0));
        assert!((prod - blocks.unit(0, 0, 0)).norm() < 1e-12);
        // sum of diagonal units is the unit
        let s = blocks.unit(0, 0, 0) + blocks.unit(0, 1, 1);
        assert!((s - a.unit_coords()).norm() < 1e-12);
    }

    #[test]
    fn upper_triangular_has_unit_and_radical() {
        let a = t2();
        assert_eq!(a.dim(), 3);
        let unit = a.realize(a.unit_coords());
        assert!((unit - CMat::identity(2, 2)).norm() < 1e-9);
        let p = TolerancePolicy::default();
        let rad = a.radical(&p);
        assert_eq!(rad.ncols(), 1);
        // The radical is spanned by E_12.
        let r = a.realize(&rad.column(0).into_owned());
        assert!(r[(0, 0)].norm() < 1e-9 && r[(1, 1)].norm() < 1e-9 && r[(1, 0)].norm() < 1e-9);
        assert!(r[(0, 1)].norm() > 0.9);
        assert!(!a.is_semisimple(&p));
        assert!(verify_radical_ideal(&a, &rad, &p));
        assert!(a.matrix_units().is_err());
    }

    #[test]
    fn radical_by_pairwise_kernel_oracle() {
        // Independent route: intersect the kernels of the functionals
        // x -> tr(L_x L_w), one basis element w at a time.
        let a = t2();
        let p = TolerancePolicy::default();
        let dim = a.dim();
        let mut constraints = CMat::zeros(dim, dim);
        for w in 0..dim {
            for v in 0..dim {
                let prod = a.left_mult(v) * a.left_mult(w);
                let mut tr = C64::new(0.0, 0.0);
                for i in 0..dim {
                    tr += prod[(i, i)];
                }
                constraints[(w, v)] = tr;
            }
        }
        let oracle = null_basis(&constraints, &p);
        let rad = a.radical(&p);
        assert_eq!(oracle.ncols(), rad.ncols());
        let proj = &oracle * oracle.adjoint();
        assert!(((&proj * &rad) - &rad).norm() < 1e-9);
    }

    #[test]
    fn semisimple_detection() {
        let p = TolerancePolicy::default();
        assert!(OperatorAlgebra::semisimple(&[2, 3]).unwrap().is_semisimple(&p));
        assert!(OperatorAlgebra::semisimple(&[1, 1]).unwrap().is_semisimple(&p));
        assert!(OperatorAlgebra::semisimple(&[1]).unwrap().is_semisimple(&p));
    }

    #[test]
    fn nilpotent_span_rejected() {
        let e12 = unit_mat(2, 2, 0, 1);
        assert!(OperatorAlgebra::from_basis(2, &[e12]).is_err());
    }

    #[test]
    fn corner_unit_accepted() {
        // span{E_11} in M_2 is unital with unit E_11.
        let e11 = unit_mat(2, 2, 0, 0);
        let (a, added) = OperatorAlgebra::from_basis(2, &[e11.clone()]).unwrap();
        assert_eq!(added, 0);
        let unit = a.realize(a.unit_coords());
        assert!((unit - e11).norm() < 1e-10);
    }

    #[test]
    fn closure_reports_added_elements() {
        // {E_11, E_12, E_21} closes to all of M_2.
        let gens = vec![
            unit_mat(2, 2, 0, 0),
            unit_mat(2, 2, 0, 1),
            unit_mat(2, 2, 1, 0),
        ];
        let (a, added) = OperatorAlgebra::from_basis(2, &gens).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(added, 1);
    }

    #[test]
    fn generators_close_to_full_algebra() {
        let a = OperatorAlgebra::semisimple(&[2, 2]).unwrap();
        assert!(a.generator_indices().len() < a.dim());
    }

    #[test]
    fn left_action_is_multiplicative_on_random_pairs() {
        let a = OperatorAlgebra::semisimple(&[2, 1]).unwrap();
        let mut rng = rand::SeedableRng::seed_from_u64(3u64);
        let rng: &mut rand_chacha::ChaCha8Rng = &mut rng;
        for _ in 0..10 {
            let x = crate::numerics::random_vec(rng, a.dim());
            let y = crate::numerics::random_vec(rng, a.dim());
            let xy = a.mul_coords(&x, &y);
            let lhs = a.left_action_of(&xy);
            let rhs = a.left_action_of(&x) * a.left_action_of(&y);
            assert!((lhs - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn semisimple_sizes_up_to_dim_16() {
        let p = TolerancePolicy::default();
        let size_lists: Vec<Vec<usize>> = vec![
            vec![1],
            vec![2],
            vec![3],
            vec![4],
            vec![1, 1],
            vec![1, 2],
            vec![2, 2],
            vec![2, 3],
            vec![1, 1, 1],
            vec![1, 2, 3],
            vec![3, 2, 1, 1],
        ];
        for sizes in size_lists {
            let a = OperatorAlgebra::semisimple(&sizes).unwrap();
            assert!(a.is_semisimple(&p), "sizes {:?}", sizes);
        }
    }
}

//! Operator spaces as compositional matrix-norm oracles.
//!
//! A space is a node in an immutable DAG: concrete subspaces of a matrix
//! algebra evaluate their norms exactly; quotients turn into certified coset
//! minimizations; direct sums add component norms levelwise; hom spaces and
//! Haagerup tensors answer with estimated intervals. Every node can evaluate
//! `|| . ||_n` at any matrix level `n`.
//!
//! Elements of `M_n(E)` are stored as a `dim(E) x n^2` coordinate matrix;
//! column `i * n + j` holds the coordinates of the `(i, j)` entry.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::OperatorAlgebra;
use crate::numerics::{
    block_assemble, minimize_block_norm, operator_norm, orthonormal_complement, orthonormalize,
    random_mat, rank, ratio_ascent, top_singular_pair, vec_of_mat, BlockProgram, C64, CMat, CVec,
};
use crate::{Error, Result, TolerancePolicy};

pub type SpaceRef = Arc<OperatorSpace>;

/// How a reported norm value is backed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Certification {
    /// Computed by exact linear algebra.
    Exact,
    /// Bracketed; `certified` means the duality gap met the optimization
    /// target (or the bracket is proven), not merely that iterations ran out.
    Interval {
        lower: f64,
        upper: f64,
        certified: bool,
    },
}

/// A norm value at a fixed matrix level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelNorm {
    pub level: usize,
    pub value: f64,
    pub certification: Certification,
}

impl LevelNorm {
    pub fn exact(level: usize, value: f64) -> Self {
        LevelNorm {
            level,
            value,
            certification: Certification::Exact,
        }
    }

    /// Safe lower bound on the true norm.
    pub fn lower(&self) -> f64 {
        match self.certification {
            Certification::Exact => self.value,
            Certification::Interval { lower, .. } => lower,
        }
    }

    /// Safe upper bound on the true norm (may be infinite for estimates).
    pub fn upper(&self) -> f64 {
        match self.certification {
            Certification::Exact => self.value,
            Certification::Interval { upper, .. } => upper,
        }
    }
}

#[derive(Debug)]
pub enum SpaceNode {
    /// Injective linear embedding into `M_h`; `basis[k]` is the image of the
    /// k-th coordinate vector.
    Concrete { ambient: usize, basis: Vec<CMat> },
    /// `inclusion` is `parent_dim x dim` and injective.
    Subspace { parent: SpaceRef, inclusion: CMat },
    /// Quotient by the span of `kernel` (`parent_dim x k`, orthonormal).
    /// `complement` (`parent_dim x dim`) lifts quotient coordinates to the
    /// canonical representative.
    Quotient {
        parent: SpaceRef,
        kernel: CMat,
        complement: CMat,
    },
    /// Sum norm at every level.
    DirectSum { left: SpaceRef, right: SpaceRef },
    /// Linear maps from the algebra into the target space, normed through
    /// the induced map at each level.
    Hom {
        algebra: Arc<OperatorAlgebra>,
        target: SpaceRef,
    },
    /// Algebraic tensor product with the algebra, normed by factorization
    /// bounds.
    HaagerupTensor {
        left: SpaceRef,
        algebra: Arc<OperatorAlgebra>,
    },
}

#[derive(Debug)]
pub struct OperatorSpace {
    dim: usize,
    node: SpaceNode,
}

/// An element of `M_n(E)` in coordinates.
#[derive(Debug, Clone)]
pub struct MatElement {
    pub n: usize,
    /// `dim x n^2`; column `i * n + j` is the coordinate vector of entry (i, j).
    pub coords: CMat,
}

impl MatElement {
    pub fn new(n: usize, coords: CMat) -> Self {
        debug_assert_eq!(coords.ncols(), n * n);
        MatElement { n, coords }
    }

    pub fn zero(dim: usize, n: usize) -> Self {
        MatElement {
            n,
            coords: CMat::zeros(dim, n * n),
        }
    }

    pub fn from_vector(v: &CVec) -> Self {
        MatElement {
            n: 1,
            coords: CMat::from_columns(&[v.clone()]),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> CVec {
        self.coords.column(i * self.n + j).into_owned()
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: &CVec) {
        let col = i * self.n + j;
        self.coords.set_column(col, v);
    }

    /// Scalar coefficient matrix of the given coordinate index.
    pub fn coeff(&self, k: usize) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.coords[(k, i * self.n + j)];
            }
        }
        m
    }

    pub fn from_coeffs(dim: usize, n: usize, coeffs: &[CMat]) -> Self {
        debug_assert_eq!(coeffs.len(), dim);
        let mut coords = CMat::zeros(dim, n * n);
        for (k, c) in coeffs.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    coords[(k, i * n + j)] = c[(i, j)];
                }
            }
        }
        MatElement { n, coords }
    }

    /// `alpha * x * beta` for scalar square matrices of side `n`.
    pub fn scalar_conjugate(&self, alpha: &CMat, beta: &CMat) -> Self {
        let dim = self.dim();
        let coeffs: Vec<CMat> = (0..dim).map(|k| alpha * self.coeff(k) * beta).collect();
        MatElement::from_coeffs(dim, self.n, &coeffs)
    }

    /// Block-diagonal join at level `n + m`.
    pub fn diag_join(&self, other: &MatElement) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        let n = self.n + other.n;
        let dim = self.dim();
        let coeffs: Vec<CMat> = (0..dim)
            .map(|k| {
                let mut c = CMat::zeros(n, n);
                c.view_mut((0, 0), (self.n, self.n)).copy_from(&self.coeff(k));
                c.view_mut((self.n, self.n), (other.n, other.n))
                    .copy_from(&other.coeff(k));
                c
            })
            .collect();
        MatElement::from_coeffs(dim, n, &coeffs)
    }

    pub fn random<R: Rng>(rng: &mut R, dim: usize, n: usize) -> Self {
        MatElement {
            n,
            coords: random_mat(rng, dim, n * n),
        }
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.coords.norm()
    }
}

impl OperatorSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self) -> &SpaceNode {
        &self.node
    }

    /// Concrete space from an independent family of ambient matrices.
    pub fn concrete(ambient: usize, basis: Vec<CMat>) -> Result<SpaceRef> {
        let policy = TolerancePolicy::default();
        for b in &basis {
            if b.shape() != (ambient, ambient) {
                return Err(Error::InvalidSpace(format!(
                    "basis matrix shape {:?} does not match ambient {}",
                    b.shape(),
                    ambient
                )));
            }
        }
        if !basis.is_empty() {
            let mut flat = CMat::zeros(ambient * ambient, basis.len());
            for (i, b) in basis.iter().enumerate() {
                flat.set_column(i, &vec_of_mat(b));
            }
            if rank(&flat, &policy) != basis.len() {
                return Err(Error::InvalidSpace("embedding is not injective".into()));
            }
        }
        Ok(Arc::new(OperatorSpace {
            dim: basis.len(),
            node: SpaceNode::Concrete { ambient, basis },
        }))
    }

    /// The full matrix algebra `M_h` as a space over itself.
    pub fn full_matrix(h: usize) -> SpaceRef {
        let mut basis = Vec::with_capacity(h * h);
        for i in 0..h {
            for j in 0..h {
                basis.push(crate::numerics::unit_mat(h, h, i, j));
            }
        }
        Self::concrete(h, basis).expect("matrix units are independent")
    }

    /// The algebra viewed as a concrete operator space.
    pub fn of_algebra(a: &OperatorAlgebra) -> SpaceRef {
        Self::concrete(a.ambient_dim(), a.basis().to_vec()).expect("algebra basis is independent")
    }

    /// Row space `C^{1 x m}` inside `M_m`.
    pub fn row_space(m: usize) -> SpaceRef {
        let basis: Vec<CMat> = (0..m)
            .map(|j| crate::numerics::unit_mat(m, m, 0, j))
            .collect();
        Self::concrete(m, basis).expect("row units are independent")
    }

    pub fn zero_space() -> SpaceRef {
        Self::concrete(1, Vec::new()).expect("empty basis")
    }

    pub fn subspace(parent: &SpaceRef, inclusion: CMat) -> Result<SpaceRef> {
        let policy = TolerancePolicy::default();
        if inclusion.nrows() != parent.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inclusion has {} rows, parent dimension is {}",
                inclusion.nrows(),
                parent.dim()
            )));
        }
        let d = inclusion.ncols();
        if rank(&inclusion, &policy) != d {
            return Err(Error::InvalidSpace("inclusion is not injective".into()));
        }
        Ok(Arc::new(OperatorSpace {
            dim: d,
            node: SpaceNode::Subspace {
                parent: parent.clone(),
                inclusion,
            },
        }))
    }

    /// Quotient by the column span of `kernel` (given in parent coordinates).
    pub fn quotient(parent: &SpaceRef, kernel: &CMat) -> Result<SpaceRef> {
        let policy = TolerancePolicy::default();
        if kernel.ncols() > 0 && kernel.nrows() != parent.dim() {
            return Err(Error::InvalidSpace(format!(
                "kernel lives in dimension {}, parent is {}",
                kernel.nrows(),
                parent.dim()
            )));
        }
        let kernel = if kernel.ncols() == 0 {
            CMat::zeros(parent.dim(), 0)
        } else {
            orthonormalize(kernel, &policy)
        };
        let complement = if kernel.ncols() == 0 {
            CMat::identity(parent.dim(), parent.dim())
        } else {
            orthonormal_complement(&kernel)
        };
        let dim = parent.dim() - kernel.ncols();
        debug_assert_eq!(complement.ncols(), dim);
        Ok(Arc::new(OperatorSpace {
            dim,
            node: SpaceNode::Quotient {
                parent: parent.clone(),
                kernel,
                complement,
            },
        }))
    }

    pub fn direct_sum(left: &SpaceRef, right: &SpaceRef) -> SpaceRef {
        Arc::new(OperatorSpace {
            dim: left.dim() + right.dim(),
            node: SpaceNode::DirectSum {
                left: left.clone(),
                right: right.clone(),
            },
        })
    }

    pub fn hom(algebra: &Arc<OperatorAlgebra>, target: &SpaceRef) -> SpaceRef {
        Arc::new(OperatorSpace {
            dim: algebra.dim() * target.dim(),
            node: SpaceNode::Hom {
                algebra: algebra.clone(),
                target: target.clone(),
            },
        })
    }

    pub fn haagerup_tensor(left: &SpaceRef, algebra: &Arc<OperatorAlgebra>) -> SpaceRef {
        Arc::new(OperatorSpace {
            dim: left.dim() * algebra.dim(),
            node: SpaceNode::HaagerupTensor {
                left: left.clone(),
                algebra: algebra.clone(),
            },
        })
    }

    /// True if the norm at some node is only estimated (hom or tensor).
    pub fn has_oracle_node(&self) -> bool {
        match &self.node {
            SpaceNode::Concrete { .. } => false,
            SpaceNode::Subspace { parent, .. } => parent.has_oracle_node(),
            SpaceNode::Quotient { parent, .. } => parent.has_oracle_node(),
            SpaceNode::DirectSum { left, right } => {
                left.has_oracle_node() || right.has_oracle_node()
            }
            SpaceNode::Hom { .. } | SpaceNode::HaagerupTensor { .. } => true,
        }
    }

    /// True if a direct-sum node (sum norm) occurs anywhere.
    pub fn contains_direct_sum(&self) -> bool {
        match &self.node {
            SpaceNode::Concrete { .. }
            | SpaceNode::Hom { .. }
            | SpaceNode::HaagerupTensor { .. } => false,
            SpaceNode::Subspace { parent, .. } => parent.contains_direct_sum(),
            SpaceNode::Quotient { parent, .. } => parent.contains_direct_sum(),
            SpaceNode::DirectSum { .. } => true,
        }
    }
}

/// Quotient constructor following the operation contract.
pub fn quotient_space(parent: &SpaceRef, kernel: &CMat) -> Result<SpaceRef> {
    OperatorSpace::quotient(parent, kernel)
}

pub fn direct_sum(left: &SpaceRef, right: &SpaceRef) -> SpaceRef {
    OperatorSpace::direct_sum(left, right)
}

// ---------------------------------------------------------------------------
// Norm evaluation
// ---------------------------------------------------------------------------

/// Shapes of the affine blocks a space lowers into, if it is oracle-free.
fn try_shapes(space: &OperatorSpace, n: usize) -> Option<Vec<(usize, usize)>> {
    match &space.node {
        SpaceNode::Concrete { ambient, .. } => Some(vec![(n * ambient, n * ambient)]),
        SpaceNode::Subspace { parent, .. } => try_shapes(parent, n),
        SpaceNode::Quotient { parent, .. } => try_shapes(parent, n),
        SpaceNode::DirectSum { left, right } => {
            let mut l = try_shapes(left, n)?;
            l.extend(try_shapes(right, n)?);
            Some(l)
        }
        SpaceNode::Hom { .. } | SpaceNode::HaagerupTensor { .. } => None,
    }
}

/// Map an element into its affine blocks (fixed parts only).
fn try_map(space: &OperatorSpace, x: &MatElement) -> Option<Vec<CMat>> {
    match &space.node {
        SpaceNode::Concrete { ambient, basis } => {
            let terms: Vec<(CMat, CMat)> = (0..space.dim)
                .map(|k| (x.coeff(k), basis[k].clone()))
                .collect();
            Some(vec![block_assemble(x.n, *ambient, &terms)])
        }
        SpaceNode::Subspace { parent, inclusion } => {
            let lifted = MatElement::new(x.n, inclusion * &x.coords);
            try_map(parent, &lifted)
        }
        SpaceNode::Quotient {
            parent, complement, ..
        } => {
            let rep = MatElement::new(x.n, complement * &x.coords);
            try_map(parent, &rep)
        }
        SpaceNode::DirectSum { left, right } => {
            let xl = MatElement::new(x.n, x.coords.rows(0, left.dim()).into_owned());
            let xr = MatElement::new(x.n, x.coords.rows(left.dim(), right.dim()).into_owned());
            let mut blocks = try_map(left, &xl)?;
            blocks.extend(try_map(right, &xr)?);
            Some(blocks)
        }
        SpaceNode::Hom { .. } | SpaceNode::HaagerupTensor { .. } => None,
    }
}

/// Free coset directions at level `n`, already mapped into block space.
/// Each complex kernel dimension and matrix slot yields two real directions
/// (the element and `i` times it).
fn try_dirs(space: &OperatorSpace, n: usize) -> Option<Vec<Vec<CMat>>> {
    match &space.node {
        SpaceNode::Concrete { .. } => Some(Vec::new()),
        SpaceNode::Subspace { parent, .. } => try_dirs(parent, n),
        SpaceNode::Quotient { parent, kernel, .. } => {
            let mut dirs = try_dirs(parent, n)?;
            let phases = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
            for c in 0..kernel.ncols() {
                let col = kernel.column(c).into_owned();
                for i in 0..n {
                    for j in 0..n {
                        for phase in phases {
                            let mut elem = MatElement::zero(parent.dim(), n);
                            let v: CVec = &col * phase;
                            elem.set_entry(i, j, &v);
                            dirs.push(try_map(parent, &elem)?);
                        }
                    }
                }
            }
            Some(dirs)
        }
        SpaceNode::DirectSum { left, right } => {
            let l_shapes = try_shapes(left, n)?;
            let r_shapes = try_shapes(right, n)?;
            let mut dirs = Vec::new();
            for d in try_dirs(left, n)? {
                let mut padded = d;
                padded.extend(r_shapes.iter().map(|(r, c)| CMat::zeros(*r, *c)));
                dirs.push(padded);
            }
            for d in try_dirs(right, n)? {
                let mut padded: Vec<CMat> =
                    l_shapes.iter().map(|(r, c)| CMat::zeros(*r, *c)).collect();
                padded.extend(d);
                dirs.push(padded);
            }
            Some(dirs)
        }
        SpaceNode::Hom { .. } | SpaceNode::HaagerupTensor { .. } => None,
    }
}

/// Fixed affine blocks of an element, when the space is oracle-free.
/// Exposed for samplers that assemble their own coset programs.
pub fn lower_blocks(space: &SpaceRef, x: &MatElement) -> Option<Vec<CMat>> {
    try_map(space, x)
}

/// Free coset directions of a space at a level, when oracle-free.
pub fn lower_dirs(space: &SpaceRef, n: usize) -> Option<Vec<Vec<CMat>>> {
    try_dirs(space, n)
}

/// Matrix norm `|| x ||_n` of an element of `M_n(E)`.
pub fn matrix_norm(space: &SpaceRef, x: &MatElement, policy: &TolerancePolicy) -> Result<LevelNorm> {
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "element has {} coordinates, space dimension is {}",
            x.dim(),
            space.dim()
        )));
    }
    if space.dim() == 0 {
        return Ok(LevelNorm::exact(x.n, 0.0));
    }
    if let (Some(blocks), Some(dirs)) = (try_map(space, x), try_dirs(space, x.n)) {
        if dirs.is_empty() {
            let mut total = 0.0;
            for b in &blocks {
                total += operator_norm(b, policy)?;
            }
            return Ok(LevelNorm::exact(x.n, total));
        }
        let prog = BlockProgram {
            fixed: blocks,
            directions: dirs,
        };
        let sol = minimize_block_norm(&prog, policy)?;
        return Ok(LevelNorm {
            level: x.n,
            value: sol.value,
            certification: Certification::Interval {
                lower: sol.lower,
                upper: sol.value,
                certified: sol.certified,
            },
        });
    }
    // Oracle paths.
    match &space.node {
        SpaceNode::Hom { algebra, target } => hom_level_norm(algebra, target, x, policy),
        SpaceNode::HaagerupTensor { left, algebra } => {
            let bounds = crate::haagerup::level_bounds(left, algebra, x, policy)?;
            Ok(LevelNorm {
                level: x.n,
                value: bounds.upper,
                certification: Certification::Interval {
                    lower: bounds.lower,
                    upper: bounds.upper,
                    certified: bounds.certified,
                },
            })
        }
        SpaceNode::Quotient {
            parent, complement, ..
        } => {
            // Quotient over an oracle parent: evaluate the canonical
            // representative. Upper bound only; the coset infimum is not
            // explored.
            let rep = MatElement::new(x.n, complement * &x.coords);
            let parent_norm = matrix_norm(parent, &rep, policy)?;
            Ok(LevelNorm {
                level: x.n,
                value: parent_norm.value,
                certification: Certification::Interval {
                    lower: 0.0,
                    upper: parent_norm.upper(),
                    certified: false,
                },
            })
        }
        SpaceNode::Subspace { parent, inclusion } => {
            let lifted = MatElement::new(x.n, inclusion * &x.coords);
            matrix_norm(parent, &lifted, policy)
        }
        SpaceNode::DirectSum { left, right } => {
            let xl = MatElement::new(x.n, x.coords.rows(0, left.dim()).into_owned());
            let xr = MatElement::new(x.n, x.coords.rows(left.dim(), right.dim()).into_owned());
            let nl = matrix_norm(left, &xl, policy)?;
            let nr = matrix_norm(right, &xr, policy)?;
            let certified = ln_certified(&nl) && ln_certified(&nr);
            Ok(LevelNorm {
                level: x.n,
                value: nl.value + nr.value,
                certification: Certification::Interval {
                    lower: nl.lower() + nr.lower(),
                    upper: nl.upper() + nr.upper(),
                    certified,
                },
            })
        }
        SpaceNode::Concrete { .. } => unreachable!("concrete spaces lower to blocks"),
    }
}

fn ln_certified(n: &LevelNorm) -> bool {
    match n.certification {
        Certification::Exact => true,
        Certification::Interval { certified, .. } => certified,
    }
}

/// Levels at which hom-space elements are probed.
const HOM_LEVEL_CAP: usize = 2;

/// Norm of an element of a hom space at level `n`. The induced map
/// `A -> M_n(target)` is probed at levels `m <= HOM_LEVEL_CAP` with canonical
/// and random inputs; the value is a lower estimate of the completely bounded
/// norm and the upper bound is a coarse Frobenius-type envelope.
fn hom_level_norm(
    algebra: &Arc<OperatorAlgebra>,
    target: &SpaceRef,
    x: &MatElement,
    policy: &TolerancePolicy,
) -> Result<LevelNorm> {
    let da = algebra.dim();
    let dt = target.dim();
    let n = x.n;
    let alg_space = OperatorSpace::of_algebra(algebra);
    let mut best = 0.0f64;

    let mut probe = |a: &MatElement| -> Result<()> {
        let na = matrix_norm(&alg_space, a, policy)?;
        if na.value <= policy.exact_residual {
            return Ok(());
        }
        let out = apply_hom_element(x, a, da, dt);
        let nt = matrix_norm(target, &out, policy)?;
        // Understate when either side is only estimated.
        let ratio = nt.lower() / na.upper().max(policy.exact_residual);
        if ratio > best {
            best = ratio;
        }
        Ok(())
    };

    // Canonical candidates: the unit, then each basis element.
    probe(&MatElement::from_vector(algebra.unit_coords()))?;
    for v in 0..da {
        let mut e = CVec::zeros(da);
        e[v] = C64::new(1.0, 0.0);
        probe(&MatElement::from_vector(&e))?;
    }
    // Random candidates at levels up to the cap.
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e_55ed ^ ((n as u64) << 32) ^ da as u64);
    for m in 1..=HOM_LEVEL_CAP {
        let tries = if m == 1 { 6 } else { 3 };
        for _ in 0..tries {
            probe(&MatElement::random(&mut rng, da, m))?;
        }
    }
    // Coarse upper envelope: coordinate gain times basis distortions.
    let coord_gain = top_singular_pair(&x.coords).0;
    let alg_gain = {
        let mut flat = CMat::zeros(algebra.ambient_dim() * algebra.ambient_dim(), da);
        for (i, b) in algebra.basis().iter().enumerate() {
            flat.set_column(i, &vec_of_mat(b));
        }
        let sv = crate::numerics::singular_values(&flat);
        let smallest = sv
            .iter()
            .cloned()
            .filter(|s| *s > 0.0)
            .fold(f64::INFINITY, f64::min);
        (algebra.ambient_dim() as f64).sqrt() / smallest.max(1e-300)
    };
    let target_gain = target_frobenius_gain(target, n);
    let upper = (coord_gain * alg_gain * target_gain).max(best);
    Ok(LevelNorm {
        level: n,
        value: best,
        certification: Certification::Interval {
            lower: best,
            upper,
            certified: false,
        },
    })
}

/// Rough bound on `|| y || / || coords(y) ||_2` over the target space.
fn target_frobenius_gain(space: &SpaceRef, n: usize) -> f64 {
    match &space.node {
        SpaceNode::Concrete { basis, .. } => {
            let mut gain: f64 = 0.0;
            for b in basis {
                gain += top_singular_pair(b).0.powi(2);
            }
            (gain.max(1.0) * n as f64).sqrt()
        }
        SpaceNode::Subspace { parent, inclusion } => {
            target_frobenius_gain(parent, n) * top_singular_pair(inclusion).0
        }
        SpaceNode::Quotient { parent, .. } => target_frobenius_gain(parent, n),
        SpaceNode::DirectSum { left, right } => {
            target_frobenius_gain(left, n) + target_frobenius_gain(right, n)
        }
        SpaceNode::Hom { target, .. } => {
            target_frobenius_gain(target, n) * (space.dim() as f64).sqrt()
        }
        SpaceNode::HaagerupTensor { left, algebra } => {
            let alg_gain: f64 = algebra
                .basis()
                .iter()
                .map(|b| top_singular_pair(b).0.powi(2))
                .sum::<f64>()
                .sqrt();
            target_frobenius_gain(left, n) * alg_gain.max(1.0) * (space.dim() as f64).sqrt()
        }
    }
}

/// Apply a level-`n` hom element to a level-`m` algebra element, producing a
/// level `m * n` element of the target. Hom coordinates index `(u, v)` as
/// `v * dim_target + u`: the map sending algebra basis `v` to target basis `u`.
pub fn apply_hom_element(x: &MatElement, a: &MatElement, da: usize, dt: usize) -> MatElement {
    let n = x.n;
    let m = a.n;
    let big = m * n;
    let mut out = MatElement::zero(dt, big);
    for u in 0..dt {
        for v in 0..da {
            let xc = x.coords.row(v * dt + u);
            let ac = a.coords.row(v);
            for i1 in 0..m {
                for j1 in 0..m {
                    let av = ac[i1 * m + j1];
                    if av == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for i2 in 0..n {
                        for j2 in 0..n {
                            let col = (i1 * n + i2) * big + (j1 * n + j2);
                            out.coords[(u, col)] += av * xc[i2 * n + j2];
                        }
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Maps between spaces and completely bounded norm estimates
// ---------------------------------------------------------------------------

/// A linear map between operator spaces, in coordinates.
#[derive(Debug, Clone)]
pub struct SpaceMap {
    pub src: SpaceRef,
    pub dst: SpaceRef,
    /// `dst_dim x src_dim`.
    pub matrix: CMat,
}

/// Result of a completely bounded norm estimate.
#[derive(Debug, Clone, Serialize)]
pub struct CbEstimate {
    /// Best estimate up to each probed level, non-decreasing by construction.
    pub per_level: Vec<LevelNorm>,
    /// Supremum of the per-level values.
    pub value: f64,
    pub certification: Certification,
    /// True when the norm cannot grow past the last probed level (map into a
    /// concrete matrix space probed up to its ambient side).
    pub exact_at_cap: bool,
}

impl SpaceMap {
    pub fn new(src: &SpaceRef, dst: &SpaceRef, matrix: CMat) -> Result<Self> {
        if matrix.ncols() != src.dim() || matrix.nrows() != dst.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, spaces are {} -> {}",
                matrix.nrows(),
                matrix.ncols(),
                src.dim(),
                dst.dim()
            )));
        }
        Ok(SpaceMap {
            src: src.clone(),
            dst: dst.clone(),
            matrix,
        })
    }

    /// Amplification applied to coordinates.
    pub fn apply(&self, x: &MatElement) -> MatElement {
        MatElement::new(x.n, &self.matrix * &x.coords)
    }

    /// Rewrite maps out of quotient chains as maps out of the parent: the
    /// ratio supremum is unchanged and the source loses its coset directions.
    fn flatten_source(&self) -> SpaceMap {
        let mut map = self.clone();
        while let SpaceNode::Quotient {
            parent, complement, ..
        } = &map.src.node
        {
            map = SpaceMap {
                src: parent.clone(),
                dst: map.dst.clone(),
                matrix: &map.matrix * complement.adjoint(),
            };
        }
        map
    }

    /// Estimate `max_{n <= cap} || f_n ||` by seeded ascent with restarts.
    ///
    /// Reported values are genuine ratios evaluated at concrete elements, so
    /// the estimate never overstates the true norm when both endpoint norms
    /// evaluate exactly; with interval-normed endpoints the ratio understates.
    pub fn cb_norm_estimate(
        &self,
        level_cap: Option<usize>,
        policy: &TolerancePolicy,
    ) -> Result<CbEstimate> {
        let flat = self.flatten_source();
        // Maps into a concrete M_h are decided at level h.
        let concrete_cap = match &flat.dst.node {
            SpaceNode::Concrete { ambient, .. } => Some(*ambient),
            _ => None,
        };
        let cap = level_cap.or(concrete_cap).unwrap_or(2).clamp(1, 4);
        let exact_at_cap = concrete_cap.map(|h| cap >= h).unwrap_or(false);

        let mut per_level = Vec::new();
        let mut best = 0.0f64;
        for n in 1..=cap {
            let level_best = flat.level_norm_estimate(n, policy)?;
            best = best.max(level_best);
            per_level.push(LevelNorm {
                level: n,
                value: best,
                certification: Certification::Interval {
                    lower: best,
                    upper: f64::INFINITY,
                    certified: false,
                },
            });
        }
        let upper = if exact_at_cap { best } else { f64::INFINITY };
        Ok(CbEstimate {
            per_level,
            value: best,
            certification: Certification::Interval {
                lower: best,
                upper,
                certified: exact_at_cap,
            },
            exact_at_cap,
        })
    }

    /// Best found `|| f_n(x) || / || x ||_n` at a fixed level.
    pub fn level_norm_estimate(&self, n: usize, policy: &TolerancePolicy) -> Result<f64> {
        let src_dim = self.src.dim();
        if src_dim == 0 || self.dst.dim() == 0 {
            return Ok(0.0);
        }
        let src_affine = try_dirs(&self.src, n).map(|d| d.is_empty()).unwrap_or(false);
        let dst_affine = try_dirs(&self.dst, n).map(|d| d.is_empty()).unwrap_or(false);
        if src_affine && dst_affine {
            let src = self.src.clone();
            let dst = self.dst.clone();
            let fmat = self.matrix.clone();
            let num = move |v: &CVec| -> (f64, CVec) {
                let x = MatElement::new(n, crate::numerics::mat_of_vec(v, src.dim(), n * n));
                let y = MatElement::new(n, &fmat * &x.coords);
                block_norm_with_grad(&dst, &y, Some(&fmat))
            };
            let src2 = self.src.clone();
            let den = move |v: &CVec| -> (f64, CVec) {
                let x = MatElement::new(n, crate::numerics::mat_of_vec(v, src2.dim(), n * n));
                block_norm_with_grad(&src2, &x, None)
            };
            let mut seeds = Vec::new();
            for k in 0..src_dim.min(8) {
                let mut x = MatElement::zero(src_dim, n);
                let mut e = CVec::zeros(src_dim);
                e[k] = C64::new(1.0, 0.0);
                x.set_entry(0, 0, &e);
                seeds.push(vec_of_mat(&x.coords));
            }
            let r = ratio_ascent(
                src_dim * n * n,
                &num,
                &den,
                &seeds,
                6,
                150,
                0xcb ^ ((n as u64) << 8),
            );
            return Ok(r.value);
        }
        // Sampled ratios with certified bounds on both sides.
        let mut rng = ChaCha8Rng::seed_from_u64(0xcb2 ^ (n as u64));
        let mut best: f64 = 0.0;
        for _ in 0..12 {
            let x = MatElement::random(&mut rng, src_dim, n);
            let sx = matrix_norm(&self.src, &x, policy)?;
            if sx.upper() <= policy.exact_residual {
                continue;
            }
            let y = self.apply(&x);
            let dy = matrix_norm(&self.dst, &y, policy)?;
            best = best.max(dy.lower() / sx.upper());
        }
        Ok(best)
    }
}

/// Value and subgradient (with respect to the element coordinates) of the
/// block norm of `y`; `pre` chains the adjoint back through a morphism matrix.
fn block_norm_with_grad(space: &SpaceRef, y: &MatElement, pre: Option<&CMat>) -> (f64, CVec) {
    let n = y.n;
    if try_map(space, y).is_none() {
        return (0.0, CVec::zeros(y.dim() * n * n));
    }
    let mut value = 0.0;
    let mut grad_elem = MatElement::zero(y.dim(), n);
    accumulate_block_grad(space, y, &mut value, &mut grad_elem);
    let flat = vec_of_mat(&grad_elem.coords);
    let g = match pre {
        Some(f) => {
            let gm = crate::numerics::mat_of_vec(&flat, f.nrows(), n * n);
            vec_of_mat(&(f.adjoint() * gm))
        }
        None => flat,
    };
    (value, g)
}

fn accumulate_block_grad(space: &SpaceRef, y: &MatElement, value: &mut f64, grad: &mut MatElement) {
    match &space.node {
        SpaceNode::Concrete { ambient, basis } => {
            let terms: Vec<(CMat, CMat)> = (0..space.dim())
                .map(|k| (y.coeff(k), basis[k].clone()))
                .collect();
            let b = block_assemble(y.n, *ambient, &terms);
            let (s, u, v) = top_singular_pair(&b);
            *value += s;
            if s <= 0.0 {
                return;
            }
            // Dual matrix Z = u v^H; the derivative with respect to
            // coeff_k(i, j) pairs the (i, j) block of Z with basis[k].
            let n = y.n;
            let h = *ambient;
            for k in 0..space.dim() {
                for i in 0..n {
                    for j in 0..n {
                        let mut g = C64::new(0.0, 0.0);
                        for r in 0..h {
                            for c in 0..h {
                                let z = u[i * h + r] * v[j * h + c].conj();
                                g += z * basis[k][(r, c)].conj();
                            }
                        }
                        grad.coords[(k, i * n + j)] += g;
                    }
                }
            }
        }
        SpaceNode::Subspace { parent, inclusion } => {
            let lifted = MatElement::new(y.n, inclusion * &y.coords);
            let mut inner = MatElement::zero(parent.dim(), y.n);
            accumulate_block_grad(parent, &lifted, value, &mut inner);
            grad.coords += inclusion.adjoint() * inner.coords;
        }
        SpaceNode::Quotient {
            parent, complement, ..
        } => {
            let rep = MatElement::new(y.n, complement * &y.coords);
            let mut inner = MatElement::zero(parent.dim(), y.n);
            accumulate_block_grad(parent, &rep, value, &mut inner);
            grad.coords += complement.adjoint() * inner.coords;
        }
        SpaceNode::DirectSum { left, right } => {
            let yl = MatElement::new(y.n, y.coords.rows(0, left.dim()).into_owned());
            let yr = MatElement::new(y.n, y.coords.rows(left.dim(), right.dim()).into_owned());
            let mut gl = MatElement::zero(left.dim(), y.n);
            let mut gr = MatElement::zero(right.dim(), y.n);
            accumulate_block_grad(left, &yl, value, &mut gl);
            accumulate_block_grad(right, &yr, value, &mut gr);
            grad.coords.rows_mut(0, left.dim()).copy_from(&gl.coords);
            grad.coords
                .rows_mut(left.dim(), right.dim())
                .copy_from(&gr.coords);
        }
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// Ruan axiom spot checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RuanReport {
    pub samples: usize,
    /// `|| a x b || <= ||a|| ||x|| ||b||` failures.
    pub scaling_violations: usize,
    /// `|| x (+) y || = max(||x||, ||y||)` failures.
    pub join_violations: usize,
    pub max_scaling_excess: f64,
    pub max_join_deviation: f64,
    /// Set when the space contains a sum-norm direct sum: its join norms are
    /// equivalent, not equal, to a concrete realization, so join deviations
    /// are expected there.
    pub sum_norm_note: bool,
}

/// Sample the matrix-norm axioms at levels up to 3.
pub fn ruan_check(
    space: &SpaceRef,
    samples: usize,
    seed: u64,
    policy: &TolerancePolicy,
) -> Result<RuanReport> {
    let mut report = RuanReport {
        samples,
        scaling_violations: 0,
        join_violations: 0,
        max_scaling_excess: 0.0,
        max_join_deviation: 0.0,
        sum_norm_note: space.contains_direct_sum(),
    };
    let dim = space.dim();
    if dim == 0 {
        return Ok(report);
    }
    let margin = |v: f64| policy.optimization_gap * v.max(1.0) * 10.0;
    for idx in 0..samples {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let n = 1 + (idx % 3);
        let x = MatElement::random(&mut rng, dim, n);
        let alpha = random_mat(&mut rng, n, n);
        let beta = random_mat(&mut rng, n, n);
        let axb = x.scalar_conjugate(&alpha, &beta);
        let nx = matrix_norm(space, &x, policy)?;
        let naxb = matrix_norm(space, &axb, policy)?;
        let na = operator_norm(&alpha, policy)?;
        let nb = operator_norm(&beta, policy)?;
        let bound = na * nx.upper() * nb;
        if naxb.lower() > bound + margin(bound) {
            report.scaling_violations += 1;
            report.max_scaling_excess = report.max_scaling_excess.max(naxb.lower() - bound);
        }
        // Join axiom.
        let m = 1 + ((idx + 1) % 2);
        let y = MatElement::random(&mut rng, dim, m);
        let ny = matrix_norm(space, &y, policy)?;
        let joined = x.diag_join(&y);
        let nj = matrix_norm(space, &joined, policy)?;
        let expected = nx.value.max(ny.value);
        let dev = (nj.value - expected).abs();
        if dev > margin(expected) {
            report.join_violations += 1;
            report.max_join_deviation = report.max_join_deviation.max(dev);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn m2_space() -> SpaceRef {
        OperatorSpace::full_matrix(2)
    }

    #[test]
    fn zero_element_norm() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let x = MatElement::zero(4, 2);
        let n = matrix_norm(&s, &x, &p).unwrap();
        assert_eq!(n.value, 0.0);
        assert!(matches!(n.certification, Certification::Exact));
    }

    #[test]
    fn concrete_unit_norm() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        // E_12 at level 1: basis index 1 in row-major unit order.
        let mut v = CVec::zeros(4);
        v[1] = c(1.0, 0.0);
        let x = MatElement::from_vector(&v);
        let n = matrix_norm(&s, &x, &p).unwrap();
        assert!((n.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_by_e11_grid_oracle() {
        // M_2 / span{E_11}: the class of E_12 has norm 1, the class of E_11
        // has norm 0.
        let p = TolerancePolicy::default();
        let s = m2_space();
        let mut kernel = CMat::zeros(4, 1);
        kernel[(0, 0)] = c(1.0, 0.0);
        let q = quotient_space(&s, &kernel).unwrap();
        assert_eq!(q.dim(), 3);
        let proj = match q.node() {
            SpaceNode::Quotient { complement, .. } => complement.adjoint(),
            _ => unreachable!(),
        };
        let mut e12 = CVec::zeros(4);
        e12[1] = c(1.0, 0.0);
        let xq = MatElement::from_vector(&(&proj * &e12));
        let n = matrix_norm(&q, &xq, &p).unwrap();
        // One-dimensional grid oracle over the coset || E_12 + t E_11 ||.
        let mut grid_best = f64::INFINITY;
        for k in -300..=300 {
            let t = k as f64 / 100.0;
            let m = CMat::from_row_slice(2, 2, &[c(t, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
            grid_best = grid_best.min(operator_norm(&m, &p).unwrap());
        }
        assert!((grid_best - 1.0).abs() < 1e-9);
        assert!((n.value - 1.0).abs() < 2e-6, "value = {}", n.value);
        match n.certification {
            Certification::Interval {
                lower,
                upper,
                certified,
            } => {
                assert!(certified);
                assert!(lower <= n.value && n.value <= upper);
            }
            _ => panic!("quotient norms are intervals"),
        }
        let e11q = MatElement::from_vector(
            &(&proj
                * CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])),
        );
        let n0 = matrix_norm(&q, &e11q, &p).unwrap();
        assert!(n0.value < 1e-6);
    }

    #[test]
    fn quotient_by_zero_keeps_norms() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let q = quotient_space(&s, &CMat::zeros(4, 0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=2 {
            let x = MatElement::random(&mut rng, 4, n);
            let a = matrix_norm(&s, &x, &p).unwrap().value;
            let b = matrix_norm(&q, &x, &p).unwrap().value;
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn quotient_by_everything_is_zero_space() {
        let s = m2_space();
        let q = quotient_space(&s, &CMat::identity(4, 4)).unwrap();
        assert_eq!(q.dim(), 0);
    }

    #[test]
    fn direct_sum_norm_is_sum() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let ds = direct_sum(&s, &s);
        // Unit vectors in each summand at level 1: norm 2.
        let mut v = CVec::zeros(8);
        v[0] = c(1.0, 0.0);
        v[4] = c(1.0, 0.0);
        let x = MatElement::from_vector(&v);
        let n = matrix_norm(&ds, &x, &p).unwrap();
        assert!((n.value - 2.0).abs() < 1e-12);
        // Random level-3 element: sum of independently computed norms.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let xl = MatElement::random(&mut rng, 4, 3);
        let xr = MatElement::random(&mut rng, 4, 3);
        let mut coords = CMat::zeros(8, 9);
        coords.rows_mut(0, 4).copy_from(&xl.coords);
        coords.rows_mut(4, 4).copy_from(&xr.coords);
        let joint = MatElement::new(3, coords);
        let total = matrix_norm(&ds, &joint, &p).unwrap().value;
        let nl = matrix_norm(&s, &xl, &p).unwrap().value;
        let nr = matrix_norm(&s, &xr, &p).unwrap().value;
        assert!((total - nl - nr).abs() < 1e-10);
    }

    #[test]
    fn sum_with_zero_space_keeps_norms() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let z = OperatorSpace::zero_space();
        let ds = direct_sum(&s, &z);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = MatElement::random(&mut rng, 4, 2);
        let joint = MatElement::new(2, x.coords.clone());
        assert!(
            (matrix_norm(&ds, &joint, &p).unwrap().value
                - matrix_norm(&s, &x, &p).unwrap().value)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn quotient_monotone_under_projection() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let mut kernel = CMat::zeros(4, 1);
        kernel[(3, 0)] = c(1.0, 0.0);
        let q = quotient_space(&s, &kernel).unwrap();
        let proj = match q.node() {
            SpaceNode::Quotient { complement, .. } => complement.adjoint(),
            _ => unreachable!(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let x = MatElement::random(&mut rng, 4, 2);
            let nx = matrix_norm(&s, &x, &p).unwrap().value;
            let xq = MatElement::new(2, &proj * &x.coords);
            let nq = matrix_norm(&q, &xq, &p).unwrap().value;
            assert!(nq <= nx + p.optimization_gap * nx.max(1.0));
        }
    }

    #[test]
    fn padding_with_zeros_preserves_concrete_norms() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let x = MatElement::random(&mut rng, 4, 2);
        let zero = MatElement::zero(4, 1);
        let padded = x.diag_join(&zero);
        let a = matrix_norm(&s, &x, &p).unwrap().value;
        let b = matrix_norm(&s, &padded, &p).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn cb_estimate_identity_and_zero() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let id = SpaceMap::new(&s, &s, CMat::identity(4, 4)).unwrap();
        let est = id.cb_norm_estimate(None, &p).unwrap();
        assert!((est.value - 1.0).abs() < 1e-7, "value = {}", est.value);
        assert!(est.exact_at_cap);
        let zero = SpaceMap::new(&s, &s, CMat::zeros(4, 4)).unwrap();
        assert!(zero.cb_norm_estimate(None, &p).unwrap().value < 1e-12);
    }

    #[test]
    fn cb_estimate_rank_one_stabilizes() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = crate::numerics::random_vec(&mut rng, 4);
        let v = crate::numerics::random_vec(&mut rng, 4);
        let m = &u * v.adjoint();
        let f = SpaceMap::new(&s, &s, m).unwrap();
        let est = f.cb_norm_estimate(Some(4), &p).unwrap();
        // Brute amplification oracle at level 4 must not exceed the estimate.
        let level4 = f.level_norm_estimate(4, &p).unwrap();
        assert!(est.value + 1e-7 >= level4);
        // Maps into M_2 stabilize by level 2.
        let level2 = f.level_norm_estimate(2, &p).unwrap();
        assert!((level2 - est.value).abs() < 1e-4 * est.value.max(1.0));
    }

    #[test]
    fn ruan_concrete_zero_violations() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let r = ruan_check(&s, 30, 7, &p).unwrap();
        assert_eq!(r.scaling_violations, 0);
        assert_eq!(r.join_violations, 0);
        assert!(!r.sum_norm_note);
    }

    #[test]
    fn ruan_quotient_zero_violations() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let mut kernel = CMat::zeros(4, 1);
        kernel[(0, 0)] = c(1.0, 0.0);
        let q = quotient_space(&s, &kernel).unwrap();
        let r = ruan_check(&q, 50, 11, &p).unwrap();
        assert_eq!(r.scaling_violations, 0, "excess {}", r.max_scaling_excess);
        assert_eq!(r.join_violations, 0, "dev {}", r.max_join_deviation);
    }

    #[test]
    fn ruan_direct_sum_notes_sum_norm() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let ds = direct_sum(&s, &s);
        let r = ruan_check(&ds, 20, 13, &p).unwrap();
        assert!(r.sum_norm_note);
        // The scaling axiom still holds for the sum norm.
        assert_eq!(r.scaling_violations, 0);
    }

    #[test]
    fn subspace_norms_are_parent_norms() {
        let p = TolerancePolicy::default();
        let s = m2_space();
        let mut incl = CMat::zeros(4, 2);
        incl[(0, 0)] = c(1.0, 0.0);
        incl[(1, 1)] = c(1.0, 0.0);
        let sub = OperatorSpace::subspace(&s, incl).unwrap();
        let mut v = CVec::zeros(2);
        v[1] = c(1.0, 0.0);
        let x = MatElement::from_vector(&v);
        assert!((matrix_norm(&sub, &x, &p).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hom_space_over_scalars_recovers_target_norm() {
        // Hom(C, M_2) is M_2: the induced map at the unit recovers the
        // element, so the estimate matches the element norm.
        let p = TolerancePolicy::default();
        let a = Arc::new(crate::algebra::OperatorAlgebra::semisimple(&[1]).unwrap());
        let t = m2_space();
        let h = OperatorSpace::hom(&a, &t);
        assert_eq!(h.dim(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = MatElement::random(&mut rng, 4, 1);
        let want = matrix_norm(&t, &x, &p).unwrap().value;
        let got = matrix_norm(&h, &x, &p).unwrap();
        assert!((got.value - want).abs() < 1e-9, "{} vs {}", got.value, want);
    }
}

//! Minimization of sums of operator norms over affine matrix families.
//!
//! The problem solved here is
//!
//! ```text
//!     minimize over t in R^p:   sum_b || X_b0 + sum_j t_j D_bj ||
//! ```
//!
//! which covers quotient norms (infimum over a coset of a kernel), norms on
//! direct sums of quotients, and minimal-preimage norms. The objective is
//! convex but nonsmooth; we minimize a uniformly smoothed surrogate
//! (soft-max of the eigenvalues of the Hermitian dilation) with L-BFGS and a
//! continuation schedule on the smoothing parameter, then certify the result
//! with a dual feasible point: matrices `Z_b` of trace norm at most one that
//! annihilate every direction give the lower bound `sum_b Re<Z_b, X_b0>`.
//! The reported gap is `value - lower`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::cmat::{frob_inner, operator_norm, trace_norm, CMat, C64};
use crate::{Error, Result, TolerancePolicy};

/// One affine spectral-norm term per block plus shared real coefficients.
#[derive(Debug, Clone)]
pub struct BlockProgram {
    /// Constant part of each block.
    pub fixed: Vec<CMat>,
    /// `directions[j][b]` is the coefficient of `t_j` in block `b`.
    pub directions: Vec<Vec<CMat>>,
}

impl BlockProgram {
    pub fn single(point: CMat, dirs: Vec<CMat>) -> Self {
        BlockProgram {
            fixed: vec![point],
            directions: dirs.into_iter().map(|d| vec![d]).collect(),
        }
    }

    fn eval_blocks(&self, t: &[f64]) -> Vec<CMat> {
        let mut blocks = self.fixed.clone();
        for (j, dir) in self.directions.iter().enumerate() {
            let c = C64::new(t[j], 0.0);
            for (b, d) in dir.iter().enumerate() {
                if d.nrows() > 0 {
                    blocks[b] += d * c;
                }
            }
        }
        blocks
    }

    fn objective(&self, t: &[f64], policy: &TolerancePolicy) -> f64 {
        self.eval_blocks(t)
            .iter()
            .map(|m| operator_norm(m, policy).unwrap_or(f64::INFINITY))
            .sum()
    }
}

/// Result of a certified coset minimization.
#[derive(Debug, Clone)]
pub struct CosetMin {
    /// Best objective value found (always an upper bound on the infimum).
    pub value: f64,
    /// Dual lower bound on the infimum.
    pub lower: f64,
    /// Real coefficients achieving `value`.
    pub coefficients: Vec<f64>,
    /// True when `value - lower` is below the optimization gap.
    pub certified: bool,
}

/// Hermitian dilation [[0, X], [X^H, 0]]; its top eigenvalue is ||X||.
fn dilation(x: &CMat) -> CMat {
    let (p, q) = x.shape();
    let n = p + q;
    let mut h = CMat::zeros(n, n);
    h.view_mut((0, p), (p, q)).copy_from(x);
    h.view_mut((p, 0), (q, p)).copy_from(&x.adjoint());
    h
}

struct SmoothEval {
    value: f64,
    /// Off-diagonal block of the soft-max density, one per program block.
    duals: Vec<CMat>,
}

/// Soft-max eigenvalue of each dilation: value and density matrices.
fn smooth_eval(blocks: &[CMat], mu: f64) -> SmoothEval {
    let mut value = 0.0;
    let mut duals = Vec::with_capacity(blocks.len());
    for x in blocks {
        let (p, q) = x.shape();
        if p == 0 || q == 0 {
            duals.push(CMat::zeros(p, q));
            continue;
        }
        let h = dilation(x);
        let eig = SymmetricEigen::new(h);
        let lam_max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        let weights: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|l| {
                let w = ((l - lam_max) / mu).exp();
                z += w;
                w
            })
            .collect();
        value += lam_max + mu * z.ln();
        // Density Gamma = V diag(w/z) V^H; we only need its (1,2) block.
        let v = &eig.eigenvectors;
        let mut gamma12 = CMat::zeros(p, q);
        for (k, w) in weights.iter().enumerate() {
            let wk = w / z;
            if wk < 1e-300 {
                continue;
            }
            let col = v.column(k);
            for i in 0..p {
                for j in 0..q {
                    gamma12[(i, j)] += C64::new(wk, 0.0) * col[i] * col[p + j].conj();
                }
            }
        }
        duals.push(gamma12);
    }
    SmoothEval { value, duals }
}

/// Gradient of the smoothed objective with respect to the coefficients.
fn smooth_grad(prog: &BlockProgram, duals: &[CMat]) -> Vec<f64> {
    prog.directions
        .iter()
        .map(|dir| {
            let mut g = 0.0;
            for (b, d) in dir.iter().enumerate() {
                if d.nrows() > 0 && duals[b].nrows() > 0 {
                    g += 2.0 * frob_inner(&duals[b], d).re;
                }
            }
            g
        })
        .collect()
}

/// L-BFGS with backtracking on a fixed smoothing level. Returns iterations used.
fn lbfgs_stage(
    prog: &BlockProgram,
    t: &mut Vec<f64>,
    mu: f64,
    max_iter: usize,
    grad_tol: f64,
) -> usize {
    let p = t.len();
    let memory = 8usize;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut rho: Vec<f64> = Vec::new();

    let mut eval = smooth_eval(&prog.eval_blocks(t), mu);
    let mut grad = smooth_grad(prog, &eval.duals);
    let mut iters = 0;

    for _ in 0..max_iter {
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm <= grad_tol {
            break;
        }
        // Two-loop recursion.
        let mut q: Vec<f64> = grad.clone();
        let mut alpha = vec![0.0; s_hist.len()];
        for i in (0..s_hist.len()).rev() {
            let a = rho[i] * dot(&s_hist[i], &q);
            alpha[i] = a;
            axpy(-a, &y_hist[i], &mut q);
        }
        let gamma = if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            let sy = dot(s, y);
            let yy = dot(y, y);
            if yy > 0.0 && sy > 0.0 {
                sy / yy
            } else {
                mu.max(1e-12)
            }
        } else {
            mu.max(1e-12)
        };
        for v in q.iter_mut() {
            *v *= gamma;
        }
        for i in 0..s_hist.len() {
            let beta = rho[i] * dot(&y_hist[i], &q);
            axpy(alpha[i] - beta, &s_hist[i], &mut q);
        }
        // q now approximates H * grad; descend along -q.
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&grad, &dir);
        if slope >= 0.0 {
            dir = grad.iter().map(|g| -g).collect();
            slope = -dot(&grad, &grad);
        }
        // Backtracking Armijo line search.
        let mut step = 1.0;
        let f0 = eval.value;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = t.iter().zip(dir.iter()).map(|(a, d)| a + step * d).collect();
            let trial_eval = smooth_eval(&prog.eval_blocks(&trial), mu);
            iters += 1;
            if trial_eval.value <= f0 + 1e-4 * step * slope {
                let new_grad = smooth_grad(prog, &trial_eval.duals);
                let s: Vec<f64> = trial.iter().zip(t.iter()).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = new_grad.iter().zip(grad.iter()).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 1e-14 * dot(&y, &y).max(1e-300) {
                    if s_hist.len() == memory {
                        s_hist.remove(0);
                        y_hist.remove(0);
                        rho.remove(0);
                    }
                    rho.push(1.0 / sy);
                    s_hist.push(s);
                    y_hist.push(y);
                }
                *t = trial;
                eval = trial_eval;
                grad = new_grad;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break; // line search stalled at this smoothing level
        }
        if iters >= max_iter {
            break;
        }
        let _ = p;
    }
    iters
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += a * xi;
    }
}

/// Dual lower bound from the smoothed densities at the final iterate.
///
/// Projects the candidate `Z_b = 2 Gamma12_b` onto the subspace annihilating
/// every direction (real Frobenius pairing), rescales into the trace-norm
/// ball, and evaluates against the fixed parts.
fn dual_lower_bound(prog: &BlockProgram, duals: &[CMat]) -> f64 {
    let mut z: Vec<CMat> = duals.iter().map(|g| g * C64::new(2.0, 0.0)).collect();
    let p = prog.directions.len();
    if p > 0 {
        // Gram system of the constraint functionals.
        let mut gram = DMatrix::<f64>::zeros(p, p);
        let mut rhs = DMatrix::<f64>::zeros(p, 1);
        for j in 0..p {
            for k in 0..p {
                let mut s = 0.0;
                for b in 0..z.len() {
                    if prog.directions[j][b].nrows() > 0 {
                        s += frob_inner(&prog.directions[j][b], &prog.directions[k][b]).re;
                    }
                }
                gram[(j, k)] = s;
            }
            let mut s = 0.0;
            for b in 0..z.len() {
                if prog.directions[j][b].nrows() > 0 {
                    s += frob_inner(&prog.directions[j][b], &z[b]).re;
                }
            }
            rhs[(j, 0)] = s;
        }
        let svd = gram.svd(true, true);
        if let Ok(gamma) = svd.solve(&rhs, 1e-12) {
            for j in 0..p {
                let cj = C64::new(gamma[(j, 0)], 0.0);
                for (b, zb) in z.iter_mut().enumerate() {
                    let d = &prog.directions[j][b];
                    if d.nrows() > 0 {
                        *zb -= d * cj;
                    }
                }
            }
        } else {
            return 0.0;
        }
    }
    let scale = z
        .iter()
        .map(|zb| if zb.nrows() > 0 { trace_norm(zb) } else { 0.0 })
        .fold(1.0f64, f64::max);
    let mut lower = 0.0;
    for (zb, xb) in z.iter().zip(prog.fixed.iter()) {
        if zb.nrows() > 0 {
            lower += frob_inner(zb, xb).re / scale;
        }
    }
    lower.max(0.0)
}

/// Minimize the block program, certifying via the duality gap.
pub fn minimize_block_norm(prog: &BlockProgram, policy: &TolerancePolicy) -> Result<CosetMin> {
    for d in prog.directions.iter() {
        if d.len() != prog.fixed.len() {
            return Err(Error::DimensionMismatch(
                "direction does not cover every block".into(),
            ));
        }
        for (b, m) in d.iter().enumerate() {
            if m.nrows() > 0 && m.shape() != prog.fixed[b].shape() {
                return Err(Error::DimensionMismatch(format!(
                    "direction block {b} has shape {:?}, expected {:?}",
                    m.shape(),
                    prog.fixed[b].shape()
                )));
            }
        }
    }
    let p = prog.directions.len();
    let exact = prog.objective(&vec![0.0; p], policy);
    if p == 0 {
        return Ok(CosetMin {
            value: exact,
            lower: exact,
            coefficients: vec![],
            certified: true,
        });
    }
    let scale = exact.max(1.0);
    let mut t = vec![0.0; p];
    let mut budget = policy.iteration_cap;
    let schedule = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 3e-8];
    let mut last_duals: Vec<CMat> = Vec::new();
    for (stage, mu_rel) in schedule.iter().enumerate() {
        let mu = mu_rel * scale;
        let max_iter = if stage + 1 == schedule.len() { 400 } else { 150 }.min(budget);
        if max_iter == 0 {
            break;
        }
        let used = lbfgs_stage(prog, &mut t, mu, max_iter, 0.3 * mu / scale.max(1.0));
        budget = budget.saturating_sub(used.max(1));
        let eval = smooth_eval(&prog.eval_blocks(&t), mu);
        last_duals = eval.duals;
    }
    let value = prog.objective(&t, policy);
    let lower = if last_duals.is_empty() {
        0.0
    } else {
        dual_lower_bound(prog, &last_duals)
    };
    let lower = lower.min(value);
    let certified = value - lower <= policy.optimization_gap * value.max(1.0);
    Ok(CosetMin {
        value,
        lower,
        coefficients: t,
        certified,
    })
}

/// Minimize `|| point + sum_i c_i * directions_i ||` over complex `c`.
pub fn min_opnorm_over_coset(
    point: &CMat,
    directions: &[CMat],
    policy: &TolerancePolicy,
) -> Result<(CosetMin, Vec<C64>)> {
    for d in directions {
        if d.shape() != point.shape() {
            return Err(Error::DimensionMismatch(format!(
                "direction shape {:?} differs from point shape {:?}",
                d.shape(),
                point.shape()
            )));
        }
    }
    // Complex coefficients become pairs of real ones on (d, i*d).
    let mut real_dirs: Vec<CMat> = Vec::with_capacity(2 * directions.len());
    for d in directions {
        real_dirs.push(d.clone());
        real_dirs.push(d * C64::new(0.0, 1.0));
    }
    let prog = BlockProgram::single(point.clone(), real_dirs);
    let result = minimize_block_norm(&prog, policy)?;
    let coeffs = result
        .coefficients
        .chunks(2)
        .map(|c| C64::new(c[0], c[1]))
        .collect();
    Ok((result, coeffs))
}

//! Heuristic maximization of norm ratios.
//!
//! Computing the norm of a linear map between operator spaces means
//! maximizing a convex function over a unit ball, which has no certified
//! polynomial algorithm. At desk scale we use seeded subgradient ascent on
//! the log-ratio with random restarts; every iterate yields a valid lower
//! bound, and canonical starting points supplied by the caller pin the known
//! extremal elements.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::cmat::{random_vec, CMat, CVec, C64};
use crate::par;

/// Top singular triple `(sigma, u, v)` with `m v = sigma u`.
pub fn top_singular_pair(m: &CMat) -> (f64, CVec, CVec) {
    let svd = m.clone().svd(true, true);
    let mut best = 0usize;
    let mut top = f64::NEG_INFINITY;
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > top {
            top = *s;
            best = i;
        }
    }
    let u = svd.u.as_ref().unwrap().column(best).into_owned();
    let v = svd.v_t.as_ref().unwrap().row(best).adjoint().column(0).into_owned();
    (top.max(0.0), u, v)
}

/// Value and subgradient of a norm-like function at a coordinate vector.
pub type NormOracle<'a> = dyn Fn(&CVec) -> (f64, CVec) + Sync + 'a;

#[derive(Debug, Clone)]
pub struct RatioAscent {
    pub value: f64,
    pub argmax: CVec,
}

/// Maximize `num(x) / den(x)` over nonzero `x` by subgradient ascent on the
/// log-ratio. `seeds` are deterministic starting points tried before the
/// random restarts. The result never overstates: the returned value was
/// evaluated at the returned point.
pub fn ratio_ascent(
    dim: usize,
    num: &NormOracle<'_>,
    den: &NormOracle<'_>,
    seeds: &[CVec],
    restarts: usize,
    iters: usize,
    seed: u64,
) -> RatioAscent {
    let evaluate = |x: &CVec| -> f64 {
        let (nv, _) = num(x);
        let (dv, _) = den(x);
        if dv <= 1e-14 {
            0.0
        } else {
            nv / dv
        }
    };

    let run_from = |x0: &CVec| -> (f64, CVec) {
        let mut x = x0.clone();
        let nrm = x.norm();
        if nrm < 1e-14 {
            return (0.0, x);
        }
        x /= C64::new(nrm, 0.0);
        let mut best_val = evaluate(&x);
        let mut best_x = x.clone();
        let mut step = 0.5;
        for _ in 0..iters {
            let (nv, gn) = num(&x);
            let (dv, gd) = den(&x);
            if dv <= 1e-14 || nv <= 1e-14 {
                break;
            }
            // Subgradient of log(num) - log(den).
            let g = &gn / C64::new(nv, 0.0) - &gd / C64::new(dv, 0.0);
            let gnorm = g.norm();
            if gnorm < 1e-13 {
                break;
            }
            let mut advanced = false;
            for _ in 0..20 {
                let mut trial = &x + &g * C64::new(step / gnorm, 0.0);
                let tn = trial.norm();
                if tn < 1e-14 {
                    break;
                }
                trial /= C64::new(tn, 0.0);
                let tv = evaluate(&trial);
                if tv > best_val + 1e-15 {
                    best_val = tv;
                    best_x = trial.clone();
                    x = trial;
                    advanced = true;
                    step *= 1.4;
                    break;
                }
                step *= 0.5;
            }
            if !advanced {
                break;
            }
        }
        (best_val, best_x)
    };

    let total = seeds.len() + restarts;
    let outcomes = par::map_indexed(total, |i| {
        if i < seeds.len() {
            run_from(&seeds[i])
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1)));
            let x0 = random_vec(&mut rng, dim);
            run_from(&x0)
        }
    });
    let mut best = RatioAscent {
        value: 0.0,
        argmax: CVec::zeros(dim),
    };
    for (v, x) in outcomes {
        if v > best.value {
            best = RatioAscent { value: v, argmax: x };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cmat::{c, mat_of_vec, vec_of_mat};
    use crate::TolerancePolicy;

    #[test]
    fn recovers_operator_norm_of_matrix_map() {
        // num = ||M x||_2, den = ||x||_2: the ratio maximum is sigma_max(M).
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)]);
        let p = TolerancePolicy::default();
        let sigma = crate::numerics::cmat::operator_norm(&m, &p).unwrap();
        let m2 = m.clone();
        let num = move |x: &CVec| -> (f64, CVec) {
            let y = &m2 * x;
            let n = y.norm();
            if n < 1e-15 {
                (0.0, CVec::zeros(x.len()))
            } else {
                (n, m2.adjoint() * y / c(n, 0.0))
            }
        };
        let den = |x: &CVec| -> (f64, CVec) {
            let n = x.norm();
            (n, x / c(n.max(1e-300), 0.0))
        };
        let r = ratio_ascent(2, &num, &den, &[], 6, 200, 42);
        assert!((r.value - sigma).abs() < 1e-7, "{} vs {}", r.value, sigma);
    }

    #[test]
    fn top_pair_reconstructs_norm() {
        let m = CMat::from_row_slice(2, 3, &[c(1.0, 1.0), c(0.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(0.0, -1.0)]);
        let (s, u, v) = top_singular_pair(&m);
        let res = (&m * &v - &u * c(s, 0.0)).norm();
        assert!(res < 1e-10);
        // round-trip helpers
        let flat = vec_of_mat(&m);
        let back = mat_of_vec(&flat, 2, 3);
        assert_eq!(back, m);
    }
}

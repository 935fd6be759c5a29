//! Numerical tolerances threaded through every solver and norm oracle.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Separates "exact linear algebra" residuals from optimization accuracy.
///
/// `exact_residual` guards rank decisions, solvability of linear systems and
/// algebraic identities that hold to machine precision. `optimization_gap` is
/// the duality-gap target for norm computations that are infima (quotient
/// norms, coset minimization, factorization norms). The two regimes never
/// share a threshold: a certified optimization result is meaningless at
/// machine precision and an algebraic identity should not be accepted at
/// optimizer accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Residual below which a linear identity counts as exact.
    pub exact_residual: f64,
    /// Target duality gap for certified convex solves.
    pub optimization_gap: f64,
    /// Hard cap on optimizer iterations before a result is flagged
    /// non-certified.
    pub iteration_cap: usize,
}

impl TolerancePolicy {
    pub fn new(exact_residual: f64, optimization_gap: f64, iteration_cap: usize) -> Result<Self> {
        if !(exact_residual > 0.0 && exact_residual < optimization_gap && optimization_gap < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "need 0 < exact_residual ({exact_residual}) < optimization_gap ({optimization_gap}) < 1"
            )));
        }
        Ok(Self {
            exact_residual,
            optimization_gap,
            iteration_cap,
        })
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            exact_residual: 1e-9,
            optimization_gap: 1e-6,
            iteration_cap: 20_000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let p = TolerancePolicy::default();
        assert!(TolerancePolicy::new(p.exact_residual, p.optimization_gap, p.iteration_cap).is_ok());
    }

    #[test]
    fn rejects_inverted_thresholds() {
        assert!(TolerancePolicy::new(1e-6, 1e-9, 100).is_err());
        assert!(TolerancePolicy::new(0.0, 1e-6, 100).is_err());
        assert!(TolerancePolicy::new(1e-9, 1.5, 100).is_err());
    }
}

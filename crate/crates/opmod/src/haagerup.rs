//! Haagerup tensor module (under construction).
use crate::algebra::OperatorAlgebra;
use crate::opspace::{MatElement, SpaceRef};
use crate::{Result, TolerancePolicy};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct HaagerupBounds {
    pub level: usize,
    pub lower: f64,
    pub upper: f64,
    pub certified: bool,
}

pub fn level_bounds(
    _left: &SpaceRef,
    _algebra: &Arc<OperatorAlgebra>,
    x: &MatElement,
    _policy: &TolerancePolicy,
) -> Result<HaagerupBounds> {
    Ok(HaagerupBounds { level: x.n, lower: 0.0, upper: f64::INFINITY, certified: false })
}

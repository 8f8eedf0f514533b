//! Forward evaluation: acceptability degrees as the unique fixed point of
//! `Φ_w(x)_i = w_i / (1 + φ_i(x))`, reached by plain iteration
//! `x ← Φ_w(x)` from any starting point.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::framework::{ordering_from_degrees, DegreeVector, OrderingPartition, Topology, WeightedFramework};
use crate::kernel::{Kernel, KernelDescriptor};

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointConfig {
    /// Stop once the max-norm of successive iterates' difference is at most this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Starting point; `None` starts from the weights.
    pub initial: Option<DegreeVector>,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 10_000,
            initial: None,
        }
    }
}

impl FixedPointConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max-iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult {
    pub degrees: DegreeVector,
    pub iterations: usize,
    /// `‖x_{k+1} − x_k‖_∞` of the last step taken.
    pub residual: f64,
    /// `‖x − Φ_w(x)‖_∞` at the returned point.
    pub fixed_point_residual: f64,
    pub converged: bool,
}

/// One application of `Φ_w`.
pub fn phi_step<K: Kernel + ?Sized>(
    framework: &WeightedFramework,
    kernel: &K,
    x: &DegreeVector,
) -> Result<DegreeVector> {
    let topology = framework.topology();
    topology.check_len(x.len())?;
    kernel.check_dimension(topology.len())?;
    let mut phi = vec![0.0; x.len()];
    let mut out = vec![0.0; x.len()];
    step(topology, framework.weights(), kernel, x.as_slice(), &mut phi, &mut out);
    Ok(DegreeVector::from_raw(out))
}

fn step<K: Kernel + ?Sized>(
    topology: &Topology,
    weights: &[f64],
    kernel: &K,
    x: &[f64],
    phi: &mut [f64],
    out: &mut [f64],
) {
    kernel.eval_forward(topology, weights, x, phi);
    for ((o, &w), &p) in out.iter_mut().zip(weights).zip(phi.iter()) {
        *o = w / (1.0 + p);
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Iterates `Φ_w` until successive iterates agree to `config.tolerance`.
///
/// Running out of iterations is reported through `converged = false`.
pub fn fixed_point<K: Kernel + ?Sized>(
    framework: &WeightedFramework,
    kernel: &K,
    config: &FixedPointConfig,
) -> Result<FixedPointResult> {
    config.validate()?;
    let topology = framework.topology();
    kernel.check_dimension(topology.len())?;
    if let Some(x0) = &config.initial {
        topology.check_len(x0.len())?;
    }
    Ok(iterate(topology, framework.weights(), kernel, config))
}

/// Fixed-point iteration on raw weights, which may lie outside `[0, 1]` when
/// checking an infeasible inverse solution. Dimensions are assumed valid.
pub(crate) fn iterate<K: Kernel + ?Sized>(
    topology: &Topology,
    weights: &[f64],
    kernel: &K,
    config: &FixedPointConfig,
) -> FixedPointResult {
    let n = weights.len();
    let mut x: Vec<f64> = match &config.initial {
        Some(x0) => x0.as_slice().to_vec(),
        None => weights.to_vec(),
    };
    let mut next = vec![0.0; n];
    let mut phi = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        step(topology, weights, kernel, &x, &mut phi, &mut next);
        iterations += 1;
        residual = max_abs_diff(&x, &next);
        core::mem::swap(&mut x, &mut next);
        if residual <= config.tolerance {
            break;
        }
    }
    if n == 0 {
        residual = 0.0;
    }
    step(topology, weights, kernel, &x, &mut phi, &mut next);
    let fixed_point_residual = max_abs_diff(&x, &next);
    FixedPointResult {
        degrees: DegreeVector::from_raw(x),
        iterations,
        converged: residual <= config.tolerance,
        residual,
        fixed_point_residual,
    }
}

/// Degrees plus the induced ranking, with ties at `10 · tolerance`.
pub fn evaluate(
    framework: &WeightedFramework,
    kernel: &KernelDescriptor,
    config: &FixedPointConfig,
) -> Result<(FixedPointResult, OrderingPartition)> {
    kernel.validate()?;
    let result = fixed_point(framework, kernel, config)?;
    let ranking = ordering_from_degrees(framework.topology(), &result.degrees, 10.0 * config.tolerance)?;
    Ok((result, ranking))
}

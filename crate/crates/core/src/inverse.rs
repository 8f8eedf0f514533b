//! The inverse problem: from a desired preference ordering to initial weights.
//!
//! Solving runs in two phases. [`compute_bounds`] turns the ordering into a
//! target degree per argument (a descending recursion over the classes,
//! separated by the gap parameter `ζ`). The weights realizing those targets
//! are then obtained either in closed form by [`invert_analytic`], which
//! evaluates `k_φ(x)_i = x_i (1 + φ_i(x))`, or numerically by
//! [`invert_bisection`], which repeatedly bisects the weight of the argument
//! furthest from its target.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::framework::{ordering_from_degrees, DegreeVector, OrderingPartition, Topology};
use crate::kernel::{Kernel, KernelDescriptor};
use crate::semantics::{iterate, FixedPointConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsConfig {
    /// Gap parameter `ζ > 0` between consecutive levels.
    pub zeta: f64,
    /// Starting upper bound of the recursion, in `(0, 1]`.
    pub top: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self { zeta: 1.0, top: 1.0 }
    }
}

impl BoundsConfig {
    pub fn with_zeta(zeta: f64) -> Self {
        Self { zeta, top: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(Error::InvalidConfig("zeta must be positive"));
        }
        if !(self.top > 0.0 && self.top <= 1.0) {
            return Err(Error::InvalidConfig("top must lie in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionConfig {
    /// Target max-norm gap between achieved and target degrees.
    pub tolerance: f64,
    /// Outer rounds (one scalar bisection each); `None` means `64 · n`.
    pub max_rounds: Option<usize>,
    /// Probes per scalar bisection.
    pub max_probes: usize,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_rounds: None,
            max_probes: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InverseMethod {
    Analytic,
    Bisection(BisectionConfig),
}

impl InverseMethod {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::Bisection(_) => "bisection",
        }
    }
}

/// Outcome of re-evaluating a solution and ranking the achieved degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub achieved: OrderingPartition,
    pub tie_tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseSolution {
    pub weights: Vec<f64>,
    pub method: InverseMethod,
    /// Max-norm gap between the degrees the weights produce and the targets.
    pub residual: f64,
    /// Every weight lies in `[0, 1]`.
    pub feasible: bool,
    /// Direct evaluations of `k_φ`.
    pub kernel_inversions: usize,
    /// Full fixed-point solves, including the final residual check.
    pub fixed_point_solves: usize,
    /// Outer bisection rounds; zero for the analytic method.
    pub rounds: usize,
    /// Set by [`solve_inverse`].
    pub verification: Option<Verification>,
}

fn feasible(weights: &[f64]) -> bool {
    weights.iter().all(|w| (0.0..=1.0).contains(w))
}

fn max_gap(a: &[f64], b: &[f64]) -> (usize, f64) {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .enumerate()
        .fold((0, 0.0), |best, (i, g)| if g > best.1 { (i, g) } else { best })
}

/// Target degree for every argument: each class `Ar_k` gets
/// `bound_k = bound_{k-1} / (1 + m_k + ζ)` starting from `bound_{-1} = top`.
///
/// `m_k` is the largest value `φ_i` can take for `i ∈ Ar_k`. For h-categorizer
/// this is `max |Att(a)|`, for card-based `1 + max |Att(a)|` and for max-based
/// `1`; other kernels use their supremum over `[0, 1]^n`.
pub fn compute_bounds(
    partition: &OrderingPartition,
    topology: &Topology,
    kernel: &KernelDescriptor,
    config: &BoundsConfig,
) -> Result<DegreeVector> {
    config.validate()?;
    kernel.validate()?;
    kernel.check_dimension(topology.len())?;
    partition.class_of_each(topology)?;

    let mut targets = vec![0.0; topology.len()];
    let mut upper = config.top;
    for class in partition.classes() {
        let members: Vec<usize> = class.iter().map(|id| topology.index_of(id)).collect::<Result<_>>()?;
        let max_attackers = members
            .iter()
            .map(|&i| topology.attackers_of(i).len())
            .max()
            .unwrap_or(0) as f64;
        let m = match kernel {
            KernelDescriptor::MaxBased => 1.0,
            KernelDescriptor::HCategorizer => max_attackers,
            KernelDescriptor::CardBased => 1.0 + max_attackers,
            general => members
                .iter()
                .map(|&i| general.phi_sup(topology, i))
                .fold(0.0, f64::max),
        };
        let bound = upper / (1.0 + m + config.zeta);
        for &i in &members {
            targets[i] = bound;
        }
        upper = bound;
    }
    DegreeVector::new(targets)
}

/// Weights `w = k_φ(x)` reaching the target degrees `x` exactly.
///
/// Weights above 1 are returned as is, flagged through `feasible = false`.
pub fn invert_analytic<K: Kernel + ?Sized>(
    targets: &DegreeVector,
    topology: &Topology,
    kernel: &K,
    fixed_point: &FixedPointConfig,
) -> Result<InverseSolution> {
    topology.check_len(targets.len())?;
    kernel.check_dimension(topology.len())?;
    fixed_point.validate()?;
    let x = targets.as_slice();
    let mut phi = vec![0.0; x.len()];
    kernel.eval(topology, x, &mut phi);
    let weights: Vec<f64> = x.iter().zip(&phi).map(|(xi, p)| xi * (1.0 + p)).collect();

    let check = iterate(
        topology,
        &weights,
        kernel,
        &FixedPointConfig {
            initial: Some(targets.clone()),
            ..fixed_point.clone()
        },
    );
    let (_, residual) = max_gap(check.degrees.as_slice(), x);
    Ok(InverseSolution {
        feasible: feasible(&weights),
        weights,
        method: InverseMethod::Analytic,
        residual,
        kernel_inversions: 1,
        fixed_point_solves: 1,
        rounds: 0,
        verification: None,
    })
}

/// Numerical baseline: starting from `w = x`, pick the argument whose degree is
/// furthest from its target and bisect its weight over `[0, 1]`, re-solving the
/// whole fixed point per probe, until every gap is within tolerance.
///
/// Non-convergence shows up as `residual > tolerance`.
pub fn invert_bisection<K: Kernel + ?Sized>(
    targets: &DegreeVector,
    topology: &Topology,
    kernel: &K,
    config: &BisectionConfig,
    fixed_point: &FixedPointConfig,
) -> Result<InverseSolution> {
    topology.check_len(targets.len())?;
    kernel.check_dimension(topology.len())?;
    fixed_point.validate()?;
    if config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(Error::InvalidConfig("bisection tolerance must be positive"));
    }
    let target = targets.as_slice();
    let n = target.len();
    let max_rounds = config.max_rounds.unwrap_or(64 * n);

    let mut weights = target.to_vec();
    let mut solves = 0;
    let mut solve = |weights: &[f64], warm: &DegreeVector| {
        solves += 1;
        let cfg = FixedPointConfig {
            initial: Some(warm.clone()),
            ..fixed_point.clone()
        };
        iterate(topology, weights, kernel, &cfg).degrees
    };

    let mut degrees = solve(&weights, targets);
    let mut rounds = 0;
    loop {
        let (i, gap) = max_gap(degrees.as_slice(), target);
        if gap <= config.tolerance || rounds >= max_rounds {
            break;
        }
        rounds += 1;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..config.max_probes {
            let mid = 0.5 * (lo + hi);
            weights[i] = mid;
            degrees = solve(&weights, &degrees);
            let diff = degrees[i] - target[i];
            if diff.abs() <= 0.1 * config.tolerance {
                break;
            }
            if diff < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON {
                break;
            }
        }
    }
    let (_, residual) = max_gap(degrees.as_slice(), target);
    Ok(InverseSolution {
        feasible: feasible(&weights),
        weights,
        method: InverseMethod::Bisection(config.clone()),
        residual,
        kernel_inversions: 0,
        fixed_point_solves: solves,
        rounds,
        verification: None,
    })
}

/// Bounds, then inversion, then a check that the produced weights rank the
/// arguments exactly as requested.
pub fn solve_inverse(
    topology: &Topology,
    partition: &OrderingPartition,
    kernel: &KernelDescriptor,
    bounds: &BoundsConfig,
    method: &InverseMethod,
    fixed_point: &FixedPointConfig,
) -> Result<InverseSolution> {
    let targets = compute_bounds(partition, topology, kernel, bounds)?;
    let mut solution = match method {
        InverseMethod::Analytic => invert_analytic(&targets, topology, kernel, fixed_point)?,
        InverseMethod::Bisection(cfg) => invert_bisection(&targets, topology, kernel, cfg, fixed_point)?,
    };
    let achieved = iterate(topology, &solution.weights, kernel, fixed_point);
    solution.fixed_point_solves += 1;
    let method_tolerance = match method {
        InverseMethod::Analytic => 0.0,
        InverseMethod::Bisection(cfg) => cfg.tolerance,
    };
    let tie_tolerance = 10.0 * fixed_point.tolerance + 2.0 * method_tolerance;
    let ranking = ordering_from_degrees(topology, &achieved.degrees, tie_tolerance)?;
    solution.verification = Some(Verification {
        passed: &ranking == partition,
        achieved: ranking,
        tie_tolerance,
    });
    Ok(solution)
}

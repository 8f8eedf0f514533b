//! Randomized check of the kernel axioms: non-negativity, monotonicity and
//! homogeneity, plus `φ(0) = 0`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::Topology;
use crate::kernel::Kernel;

/// Absolute slack allowed in homogeneity comparisons.
pub const HOMOGENEITY_TOLERANCE: f64 = 1e-9;
/// Absolute slack allowed in monotonicity and sign comparisons.
pub const ORDER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Negative,
    Monotonicity,
    Homogeneity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub sample: usize,
    pub argument: usize,
    /// Size of the violation (how far past the allowed slack).
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub samples: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Draws `samples` triples `(x, y, t)` with `x ⪯ y` and `t ∈ [0, 1]` and checks
/// `φ(x) ⪰ 0`, `φ(x) ⪯ φ(y)` and `φ(t·x) = t·φ(x)`.
///
/// Coordinates are drawn from `(0, 1]`, never exactly zero, so kernels whose
/// active attacker set changes at zero (card-based) are probed away from that
/// boundary. The origin itself is checked once with `t = 0`.
pub fn check_kernel_axioms<K: Kernel + ?Sized>(
    kernel: &K,
    topology: &Topology,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    if samples == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1"));
    }
    kernel.check_dimension(topology.len())?;
    let n = topology.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport {
        samples,
        violations: Vec::new(),
    };
    let (mut x, mut y, mut tx) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut fx, mut fy, mut ftx) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);

    kernel.eval(topology, &x, &mut fx);
    for (i, &v) in fx.iter().enumerate() {
        if v.abs() > HOMOGENEITY_TOLERANCE {
            report.violations.push(Violation {
                kind: ViolationKind::Homogeneity,
                sample: 0,
                argument: i,
                magnitude: v.abs(),
            });
        }
    }

    for sample in 0..samples {
        for i in 0..n {
            x[i] = 1.0 - rng.gen::<f64>();
            y[i] = x[i] + (1.0 - x[i]) * rng.gen::<f64>();
        }
        let t: f64 = rng.gen();
        for i in 0..n {
            tx[i] = t * x[i];
        }
        kernel.eval(topology, &x, &mut fx);
        kernel.eval(topology, &y, &mut fy);
        kernel.eval(topology, &tx, &mut ftx);
        for i in 0..n {
            let mut push = |kind, magnitude: f64| {
                report.violations.push(Violation {
                    kind,
                    sample,
                    argument: i,
                    magnitude,
                })
            };
            if fx[i] < -ORDER_TOLERANCE || !fx[i].is_finite() {
                push(ViolationKind::Negative, -fx[i]);
            }
            if fx[i] > fy[i] + ORDER_TOLERANCE {
                push(ViolationKind::Monotonicity, fx[i] - fy[i]);
            }
            let gap = (ftx[i] - t * fx[i]).abs();
            if gap > HOMOGENEITY_TOLERANCE || gap.is_nan() {
                push(ViolationKind::Homogeneity, gap);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::small_framework;
    use crate::kernel::{combine_linear, KernelDescriptor};

    struct OneMinus;

    impl Kernel for OneMinus {
        fn eval(&self, _: &Topology, x: &[f64], out: &mut [f64]) {
            for (o, v) in out.iter_mut().zip(x) {
                *o = 1.0 - v;
            }
        }
    }

    #[test]
    fn hc_is_clean() {
        let t = small_framework().topology().clone();
        let r = check_kernel_axioms(&KernelDescriptor::HCategorizer, &t, 1000, 7).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations.first());
        assert_eq!(r.samples, 1000);
    }

    #[test]
    fn broken_kernel_is_reported() {
        let t = small_framework().topology().clone();
        let r = check_kernel_axioms(&OneMinus, &t, 100, 1).unwrap();
        assert!(r.count(ViolationKind::Homogeneity) > 0);
        assert!(r.count(ViolationKind::Monotonicity) > 0);
    }

    #[test]
    fn card_based_is_not_homogeneous() {
        // φ(tx) - tφ(x) = (1 - t)|Att*| for attacked arguments
        let t = small_framework().topology().clone();
        let r = check_kernel_axioms(&KernelDescriptor::CardBased, &t, 1000, 3).unwrap();
        assert_eq!(r.count(ViolationKind::Monotonicity), 0);
        assert_eq!(r.count(ViolationKind::Negative), 0);
        assert!(r.count(ViolationKind::Homogeneity) > 0);
        assert!(r.violations.iter().all(|v| v.argument != 0));
    }

    #[test]
    fn deterministic_given_seed() {
        let t = small_framework().topology().clone();
        let k = combine_linear(alloc::vec![(1.0, KernelDescriptor::CardBased)]).unwrap();
        let a = check_kernel_axioms(&k, &t, 50, 11).unwrap();
        let b = check_kernel_axioms(&k, &t, 50, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_samples_rejected() {
        let t = small_framework().topology().clone();
        assert!(check_kernel_axioms(&KernelDescriptor::HCategorizer, &t, 0, 0).is_err());
    }
}

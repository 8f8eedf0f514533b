//! Argumentation kernels: the per-argument aggregation `φ_i` of attacker
//! degrees that defines a semantics through `Φ_w(x)_i = w_i / (1 + φ_i(x))`.
//!
//! A kernel must be non-negative, monotonic and homogeneous on `[0, 1]^n`.
//! The built-ins cover the weighted max-based, card-based and h-categorizer
//! semantics plus geometric-mean and `L^p` kernels; non-negative linear
//! combinations and geometric combinations of kernels are kernels again.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::framework::{DegreeVector, Topology};

/// An evaluable argumentation kernel.
pub trait Kernel {
    /// Writes `φ_i(x)` for every argument into `out`.
    ///
    /// `x` and `out` have the topology's length; callers check this through
    /// [`Kernel::check_dimension`] once rather than on every evaluation.
    fn eval(&self, topology: &Topology, x: &[f64], out: &mut [f64]);

    /// Evaluation used by the forward semantics, where the initial weights are
    /// known. Kernels whose attacker set depends on positive weights (card-based)
    /// override this; everything else evaluates as [`Kernel::eval`].
    fn eval_forward(&self, topology: &Topology, weights: &[f64], x: &[f64], out: &mut [f64]) {
        let _ = weights;
        self.eval(topology, x, out);
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        let _ = n;
        Ok(())
    }
}

/// Symbolic description of a kernel; also its evaluable form.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelDescriptor {
    /// `φ_i = max` of attacker degrees.
    MaxBased,
    /// `φ_i = |Att*| + mean` of attacker degrees over attackers with positive degree.
    CardBased,
    /// `φ_i = Σ` of attacker degrees.
    HCategorizer,
    /// `φ_i = (b_i · x_1 ⋯ x_n)^(1/n)`; an empty `scales` means every `b_i = 1`.
    GeometricMean {
        scales: Vec<f64>,
    },
    /// `L^p` norm of the attacker degrees, `p ≥ 1` or `p = ∞`.
    LpNorm(f64),
    LinearCombination(Vec<(f64, KernelDescriptor)>),
    GeometricCombination(Vec<KernelDescriptor>),
}

#[derive(Clone, Copy)]
enum Support<'a> {
    Degrees,
    Weights(&'a [f64]),
}

impl Support<'_> {
    fn active(self, x: &[f64], j: usize) -> bool {
        match self {
            Support::Degrees => x[j] > 0.0,
            Support::Weights(w) => w[j] > 0.0,
        }
    }
}

impl KernelDescriptor {
    pub fn lp(p: f64) -> Result<Self> {
        let d = Self::LpNorm(p);
        d.validate()?;
        Ok(d)
    }

    pub fn geometric_mean(scales: Vec<f64>) -> Result<Self> {
        let d = Self::GeometricMean { scales };
        d.validate()?;
        Ok(d)
    }

    /// The zero kernel `φ ≡ 0`; its fixed point is `x = w`.
    pub fn zero() -> Self {
        Self::LinearCombination(Vec::new())
    }

    pub fn is_builtin_semantics(&self) -> bool {
        matches!(self, Self::MaxBased | Self::CardBased | Self::HCategorizer)
    }

    /// Checks parameters recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::MaxBased | Self::CardBased | Self::HCategorizer => Ok(()),
            Self::GeometricMean { scales } => {
                if scales.iter().all(|&b| b > 0.0 && b.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidKernelParameter(
                        "geometric-mean scales must be positive and finite".into(),
                    ))
                }
            }
            Self::LpNorm(p) => {
                if *p >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidKernelParameter(alloc::format!(
                        "L^p exponent must be at least 1, got {p}"
                    )))
                }
            }
            Self::LinearCombination(terms) => {
                for (lambda, k) in terms {
                    if !(*lambda >= 0.0 && lambda.is_finite()) {
                        return Err(Error::NegativeCoefficient(*lambda));
                    }
                    k.validate()?;
                }
                Ok(())
            }
            Self::GeometricCombination(parts) => {
                if parts.is_empty() {
                    return Err(Error::EmptyGeometricCombination);
                }
                parts.iter().try_for_each(Self::validate)
            }
        }
    }

    /// `sup { φ_i(x) : x ∈ [0, 1]^n }` for argument `i`.
    pub fn phi_sup(&self, topology: &Topology, i: usize) -> f64 {
        let attackers = topology.attackers_of(i).len() as f64;
        let attacked = if attackers > 0.0 { 1.0 } else { 0.0 };
        match self {
            Self::MaxBased => attacked,
            Self::CardBased => attackers + attacked,
            Self::HCategorizer => attackers,
            Self::GeometricMean { scales } => {
                let b = scales.get(i).copied().unwrap_or(1.0);
                libm::pow(b, 1.0 / topology.len() as f64)
            }
            Self::LpNorm(p) if p.is_infinite() => attacked,
            Self::LpNorm(p) => libm::pow(attackers, 1.0 / p),
            Self::LinearCombination(terms) => terms.iter().map(|(lambda, k)| lambda * k.phi_sup(topology, i)).sum(),
            Self::GeometricCombination(parts) => {
                let prod: f64 = parts.iter().map(|k| k.phi_sup(topology, i)).product();
                libm::pow(prod, 1.0 / parts.len() as f64)
            }
        }
    }

    fn eval_with(&self, topology: &Topology, x: &[f64], support: Support<'_>, out: &mut [f64]) {
        match self {
            Self::MaxBased => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = topology.attackers_of(i).iter().map(|&j| x[j]).fold(0.0, f64::max);
                }
            }
            Self::HCategorizer => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = topology.attackers_of(i).iter().map(|&j| x[j]).sum();
                }
            }
            Self::CardBased => {
                for (i, o) in out.iter_mut().enumerate() {
                    let (count, sum) = topology
                        .attackers_of(i)
                        .iter()
                        .filter(|&&j| support.active(x, j))
                        .fold((0usize, 0.0), |(c, s), &j| (c + 1, s + x[j]));
                    *o = if count == 0 {
                        0.0
                    } else {
                        count as f64 + sum / count as f64
                    };
                }
            }
            Self::GeometricMean { scales } => {
                let n = x.len();
                let prod: f64 = x.iter().product();
                for (i, o) in out.iter_mut().enumerate() {
                    let b = scales.get(i).copied().unwrap_or(1.0);
                    *o = libm::pow(b * prod, 1.0 / n as f64);
                }
            }
            Self::LpNorm(p) => {
                for (i, o) in out.iter_mut().enumerate() {
                    let attackers = topology.attackers_of(i);
                    *o = if p.is_infinite() {
                        attackers.iter().map(|&j| x[j].abs()).fold(0.0, f64::max)
                    } else if attackers.is_empty() {
                        0.0
                    } else {
                        let s: f64 = attackers.iter().map(|&j| libm::pow(x[j].abs(), *p)).sum();
                        libm::pow(s, 1.0 / p)
                    };
                }
            }
            Self::LinearCombination(terms) => {
                out.fill(0.0);
                let mut part = vec![0.0; out.len()];
                for (lambda, k) in terms {
                    k.eval_with(topology, x, support, &mut part);
                    for (o, v) in out.iter_mut().zip(&part) {
                        *o += lambda * v;
                    }
                }
            }
            Self::GeometricCombination(parts) => {
                out.fill(1.0);
                let mut part = vec![0.0; out.len()];
                for k in parts {
                    k.eval_with(topology, x, support, &mut part);
                    for (o, v) in out.iter_mut().zip(&part) {
                        *o *= v;
                    }
                }
                let root = 1.0 / parts.len() as f64;
                for o in out.iter_mut() {
                    *o = libm::pow(*o, root);
                }
            }
        }
    }
}

impl Kernel for KernelDescriptor {
    fn eval(&self, topology: &Topology, x: &[f64], out: &mut [f64]) {
        self.eval_with(topology, x, Support::Degrees, out);
    }

    fn eval_forward(&self, topology: &Topology, weights: &[f64], x: &[f64], out: &mut [f64]) {
        self.eval_with(topology, x, Support::Weights(weights), out);
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        match self {
            Self::GeometricMean { scales } if !scales.is_empty() && scales.len() != n => {
                Err(Error::DimensionMismatch {
                    expected: n,
                    found: scales.len(),
                })
            }
            Self::LinearCombination(terms) => terms.iter().try_for_each(|(_, k)| k.check_dimension(n)),
            Self::GeometricCombination(parts) => parts.iter().try_for_each(|k| k.check_dimension(n)),
            _ => Ok(()),
        }
    }
}

impl<K: Kernel + ?Sized> Kernel for &K {
    fn eval(&self, topology: &Topology, x: &[f64], out: &mut [f64]) {
        (**self).eval(topology, x, out)
    }

    fn eval_forward(&self, topology: &Topology, weights: &[f64], x: &[f64], out: &mut [f64]) {
        (**self).eval_forward(topology, weights, x, out)
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        (**self).check_dimension(n)
    }
}

/// Evaluates `φ(x)` after checking dimensions.
pub fn eval_kernel<K: Kernel + ?Sized>(kernel: &K, topology: &Topology, x: &DegreeVector) -> Result<Vec<f64>> {
    topology.check_len(x.len())?;
    kernel.check_dimension(topology.len())?;
    let mut out = vec![0.0; x.len()];
    kernel.eval(topology, x.as_slice(), &mut out);
    Ok(out)
}

/// `Σ λ_k φ_k`; all coefficients must be non-negative.
pub fn combine_linear(terms: Vec<(f64, KernelDescriptor)>) -> Result<KernelDescriptor> {
    let d = KernelDescriptor::LinearCombination(terms);
    d.validate()?;
    Ok(d)
}

/// `(φ_1 ⋯ φ_k)^(1/k)` component-wise; the list must be non-empty.
pub fn combine_geometric(parts: Vec<KernelDescriptor>) -> Result<KernelDescriptor> {
    let d = KernelDescriptor::GeometricCombination(parts);
    d.validate()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::small_framework;
    use KernelDescriptor::*;

    fn eval(k: &KernelDescriptor, t: &Topology, x: &[f64]) -> Vec<f64> {
        eval_kernel(k, t, &DegreeVector::new(x.to_vec()).unwrap()).unwrap()
    }

    fn three_cycle() -> Topology {
        Topology::from_indices(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn hc_recovers_example_weight_at_fixed_point() {
        let t = small_framework().topology().clone();
        let phi = eval(&HCategorizer, &t, &[0.43, 0.30, 0.38, 0.30]);
        assert!((phi[2] - 1.41).abs() < 1e-12);
        // w = x (1 + φ) at the printed degrees is 0.38 * 2.41 = 0.9158
        assert!((0.38 * (1.0 + phi[2]) - 0.92).abs() < 5e-3);
    }

    #[test]
    fn max_based_on_three_cycle() {
        let phi = eval(&MaxBased, &three_cycle(), &[0.2, 0.4, 0.6]);
        assert_eq!(phi, vec![0.6, 0.2, 0.4]);
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let t = small_framework().topology().clone();
        let kernels = [
            MaxBased,
            CardBased,
            HCategorizer,
            GeometricMean { scales: vec![] },
            LpNorm(2.0),
            LpNorm(f64::INFINITY),
            combine_linear(vec![(0.5, HCategorizer), (0.5, MaxBased)]).unwrap(),
            combine_geometric(vec![HCategorizer, CardBased]).unwrap(),
        ];
        for k in &kernels {
            assert_eq!(eval(k, &t, &[0.0; 4]), vec![0.0; 4], "{k:?}");
        }
    }

    #[test]
    fn card_based_uses_positive_attackers() {
        let t = small_framework().topology().clone();
        let phi = eval(&CardBased, &t, &[0.4, 0.2, 0.1, 0.0]);
        // a2 has positive attackers a0, a1, a2: 3 + 0.7 / 3
        assert!((phi[2] - (3.0 + 0.7 / 3.0)).abs() < 1e-12);
        assert!((phi[1] - 1.2).abs() < 1e-12);
        assert_eq!(phi[0], 0.0);

        let mut out = vec![0.0; 4];
        CardBased.eval_forward(&t, &[0.4, 0.2, 0.1, 0.5], &[0.4, 0.2, 0.1, 0.0], &mut out);
        assert!((out[2] - (4.0 + 0.7 / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn lp_kernels() {
        let t = small_framework().topology().clone();
        let x = [0.3, 0.4, 0.0, 0.0];
        assert!((eval(&LpNorm(2.0), &t, &x)[2] - 0.5).abs() < 1e-12);
        assert!((eval(&LpNorm(1.0), &t, &x)[2] - 0.7).abs() < 1e-12);
        assert_eq!(eval(&LpNorm(f64::INFINITY), &t, &x)[2], 0.4);
        assert!(KernelDescriptor::lp(0.5).is_err());
    }

    #[test]
    fn geometric_mean_kernel() {
        let t = Topology::from_indices(2, &[]).unwrap();
        let k = KernelDescriptor::geometric_mean(vec![1.0, 4.0]).unwrap();
        let phi = eval(&k, &t, &[0.25, 1.0]);
        assert!((phi[0] - 0.5).abs() < 1e-12);
        assert!((phi[1] - 1.0).abs() < 1e-12);
        assert!(KernelDescriptor::geometric_mean(vec![0.0]).is_err());
        assert!(matches!(
            eval_kernel(
                &KernelDescriptor::geometric_mean(vec![1.0; 3]).unwrap(),
                &t,
                &DegreeVector::zeros(2)
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn linear_combinations() {
        let t = small_framework().topology().clone();
        let x = [0.1, 0.7, 0.3, 0.9];
        let single = combine_linear(vec![(1.0, HCategorizer)]).unwrap();
        assert_eq!(eval(&single, &t, &x), eval(&HCategorizer, &t, &x));

        assert_eq!(eval(&KernelDescriptor::zero(), &t, &x), vec![0.0; 4]);

        let mix = combine_linear(vec![(0.5, HCategorizer), (0.5, MaxBased)]).unwrap();
        let hc = eval(&HCategorizer, &t, &x);
        let mb = eval(&MaxBased, &t, &x);
        for ((m, h), b) in eval(&mix, &t, &x).iter().zip(&hc).zip(&mb) {
            assert!((m - (0.5 * h + 0.5 * b)).abs() < 1e-15);
        }

        assert_eq!(
            combine_linear(vec![(-1.0, HCategorizer)]).unwrap_err(),
            Error::NegativeCoefficient(-1.0)
        );
    }

    #[test]
    fn geometric_combinations() {
        let t = small_framework().topology().clone();
        let x = [0.1, 0.7, 0.3, 0.9];
        let hc = eval(&HCategorizer, &t, &x);
        let mb = eval(&MaxBased, &t, &x);
        let one = combine_geometric(vec![HCategorizer]).unwrap();
        let two = combine_geometric(vec![HCategorizer, HCategorizer]).unwrap();
        for (a, b) in eval(&one, &t, &x).iter().zip(&hc) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in eval(&two, &t, &x).iter().zip(&hc) {
            assert!((a - b).abs() < 1e-15);
        }
        let mixed = combine_geometric(vec![HCategorizer, MaxBased]).unwrap();
        for (i, v) in eval(&mixed, &t, &x).iter().enumerate() {
            assert!((v - libm::sqrt(hc[i] * mb[i])).abs() < 1e-15);
        }
        assert_eq!(combine_geometric(vec![]).unwrap_err(), Error::EmptyGeometricCombination);
    }

    #[test]
    fn suprema() {
        let t = small_framework().topology().clone();
        assert_eq!(HCategorizer.phi_sup(&t, 2), 4.0);
        assert_eq!(CardBased.phi_sup(&t, 2), 5.0);
        assert_eq!(MaxBased.phi_sup(&t, 2), 1.0);
        assert_eq!(MaxBased.phi_sup(&t, 0), 0.0);
        assert!((LpNorm(2.0).phi_sup(&t, 2) - 2.0).abs() < 1e-15);
        // sup is attained at x = 1
        for k in [HCategorizer, MaxBased, LpNorm(3.0), GeometricMean { scales: vec![] }] {
            let phi = eval(&k, &t, &[1.0; 4]);
            for (i, p) in phi.iter().enumerate() {
                assert!((p - k.phi_sup(&t, i)).abs() < 1e-12, "{k:?} {i}");
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let t = small_framework().topology().clone();
        assert!(matches!(
            eval_kernel(&HCategorizer, &t, &DegreeVector::zeros(3)),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn hc_dominates_mb() {
        let t = small_framework().topology().clone();
        let x = [0.9, 0.1, 0.5, 0.3];
        let hc = eval(&HCategorizer, &t, &x);
        let mb = eval(&MaxBased, &t, &x);
        assert!(mb.iter().zip(&hc).all(|(m, h)| m <= h));
    }
}

//! The acceptability degree space `H_φ`: the set of degree vectors some weight
//! vector in `[0, 1]^n` produces.
//!
//! Since `k_φ(x)_i = x_i (1 + φ_i(x))` inverts the forward map on `H_φ`,
//! membership reduces to a range check of `k_φ(x)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::framework::{DegreeVector, Topology, WeightedFramework};
use crate::kernel::{Kernel, KernelDescriptor};
use crate::semantics::{fixed_point, FixedPointConfig};

/// `k_φ(x)`: the weights whose fixed point is `x`.
pub fn k_phi<K: Kernel + ?Sized>(x: &DegreeVector, topology: &Topology, kernel: &K) -> Result<Vec<f64>> {
    topology.check_len(x.len())?;
    kernel.check_dimension(topology.len())?;
    let mut phi = vec![0.0; x.len()];
    kernel.eval(topology, x.as_slice(), &mut phi);
    Ok(x.as_slice().iter().zip(&phi).map(|(xi, p)| xi * (1.0 + p)).collect())
}

/// `x ∈ H_φ`, i.e. `k_φ(x) ∈ [0, 1]^n`.
pub fn is_valid_degree_vector<K: Kernel + ?Sized>(x: &DegreeVector, topology: &Topology, kernel: &K) -> Result<bool> {
    is_valid_degree_vector_within(x, topology, kernel, 0.0)
}

/// Membership with `k_φ(x)_i ≤ 1 + slack`, for points produced numerically.
pub fn is_valid_degree_vector_within<K: Kernel + ?Sized>(
    x: &DegreeVector,
    topology: &Topology,
    kernel: &K,
    slack: f64,
) -> Result<bool> {
    Ok(k_phi(x, topology, kernel)?
        .iter()
        .all(|&w| w >= 0.0 && w <= 1.0 + slack))
}

/// Largest degree a self-attacking argument can reach: `(√5 − 1)/2` for
/// h-categorizer and max-based (`x (1 + x) = 1`), `√2 − 1` for card-based
/// (`x (2 + x) = 1`).
pub fn max_self_attack_degree(kernel: &KernelDescriptor) -> Result<f64> {
    match kernel {
        KernelDescriptor::HCategorizer | KernelDescriptor::MaxBased => Ok((libm::sqrt(5.0) - 1.0) / 2.0),
        KernelDescriptor::CardBased => Ok(libm::sqrt(2.0) - 1.0),
        _ => Err(Error::UnsupportedKernel),
    }
}

/// Some argument can reach degree 1 iff nothing attacks itself.
pub fn can_reach_degree_one(topology: &Topology) -> bool {
    !(0..topology.len()).any(|i| topology.is_self_attacking(i))
}

/// Weights putting argument `i` at degree 1: `w_i = 1`, all others 0. `None`
/// when a self-attack rules this out.
pub fn degree_one_witness(topology: &Topology, i: usize) -> Option<Vec<f64>> {
    if !can_reach_degree_one(topology) || i >= topology.len() {
        return None;
    }
    let mut w = vec![0.0; topology.len()];
    w[i] = 1.0;
    Some(w)
}

/// A bijection on argument indices preserving the attack relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIsomorphism {
    mapping: Vec<usize>,
}

impl GraphIsomorphism {
    pub fn new(topology: &Topology, mapping: Vec<usize>) -> Result<Self> {
        topology.check_len(mapping.len())?;
        let mut hit = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || core::mem::replace(&mut hit[m], true) {
                return Err(Error::NotAnIsomorphism);
            }
        }
        let n = topology.len();
        for a in 0..n {
            for b in 0..n {
                if topology.attacks(a, b) != topology.attacks(mapping[a], mapping[b]) {
                    return Err(Error::NotAnIsomorphism);
                }
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(topology: &Topology) -> Self {
        Self {
            mapping: (0..topology.len()).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }
}

/// Swaps coordinates `i` and `j`, which `iso` must relate (`iso(i) = j`).
pub fn permute_degrees(x: &DegreeVector, iso: &GraphIsomorphism, i: usize, j: usize) -> Result<DegreeVector> {
    if x.len() != iso.mapping.len() {
        return Err(Error::DimensionMismatch {
            expected: iso.mapping.len(),
            found: x.len(),
        });
    }
    if i >= x.len() || j >= x.len() || iso.apply(i) != j {
        return Err(Error::IsomorphismMismatch { from: i, to: j });
    }
    let mut v = x.as_slice().to_vec();
    v.swap(i, j);
    DegreeVector::new(v)
}

/// How weight vectors are drawn when sampling the degree space.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleSpec {
    /// Every combination of the listed values across all coordinates.
    Grid(Vec<f64>),
    /// Uniform weights in `[0, 1]^n`.
    Random { count: usize },
}

const MAX_GRID_POINTS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSample<'a> {
    pub topology: &'a Topology,
    pub kernel: KernelDescriptor,
    pub points: Vec<DegreeVector>,
}

/// Maps sampled weight vectors through the forward semantics.
pub fn sample_degree_space<'a>(
    topology: &'a Topology,
    kernel: &KernelDescriptor,
    spec: &SampleSpec,
    seed: u64,
) -> Result<SpaceSample<'a>> {
    kernel.validate()?;
    kernel.check_dimension(topology.len())?;
    let n = topology.len();
    let weights: Vec<Vec<f64>> = match spec {
        SampleSpec::Grid(values) => {
            if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidConfig("grid values must lie in [0, 1]"));
            }
            let total = u32::try_from(n)
                .ok()
                .and_then(|e| values.len().checked_pow(e))
                .filter(|&t| t <= MAX_GRID_POINTS)
                .ok_or(Error::InvalidConfig("grid has too many points"))?;
            (0..total)
                .map(|mut k| {
                    let mut w = vec![0.0; n];
                    for slot in w.iter_mut().rev() {
                        *slot = values[k % values.len()];
                        k /= values.len();
                    }
                    w
                })
                .collect()
        }
        SampleSpec::Random { count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..*count)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect())
                .collect()
        }
    };
    let config = FixedPointConfig::default();
    let points = weights
        .into_iter()
        .map(|w| {
            let framework = WeightedFramework::new(topology.clone(), w)?;
            Ok(fixed_point(&framework, kernel, &config)?.degrees)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpaceSample {
        topology,
        kernel: kernel.clone(),
        points,
    })
}

/// `(h(w + ε e_i)_i − h(w)_i) / ε`, a forward finite difference of the degree
/// of argument `i` in its own weight.
pub fn monotonicity_probe<K: Kernel + ?Sized>(
    framework: &WeightedFramework,
    kernel: &K,
    i: usize,
    epsilon: f64,
    config: &FixedPointConfig,
) -> Result<f64> {
    if i >= framework.len() {
        return Err(Error::DimensionMismatch {
            expected: framework.len(),
            found: i + 1,
        });
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidConfig("epsilon must be positive"));
    }
    let mut bumped = framework.weights().to_vec();
    bumped[i] += epsilon;
    let shifted = framework.with_weights(bumped)?;
    let base = fixed_point(framework, kernel, config)?;
    let moved = fixed_point(&shifted, kernel, config)?;
    Ok((moved.degrees[i] - base.degrees[i]) / epsilon)
}

/// Jacobian of `k_φ` for the h-categorizer kernel at `x`:
/// `I + diag(A x) + diag(x) A`, row-major.
pub fn hc_jacobian(x: &DegreeVector, topology: &Topology) -> Result<Vec<Vec<f64>>> {
    topology.check_len(x.len())?;
    let n = x.len();
    let a = topology.attack_matrix();
    let ax = a.mul_vec(x.as_slice());
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let diag = if i == j { 1.0 + ax[i] } else { 0.0 };
                    diag + x[i] * f64::from(a.get(i, j))
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::small_framework;
    use KernelDescriptor::*;

    fn dv(v: &[f64]) -> DegreeVector {
        DegreeVector::new(v.to_vec()).unwrap()
    }

    fn self_attacker() -> Topology {
        Topology::from_indices(1, &[(0, 0)]).unwrap()
    }

    fn complete_with_loops(n: usize) -> Topology {
        let edges: Vec<_> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        Topology::from_indices(n, &edges).unwrap()
    }

    #[test]
    fn membership() {
        let t = small_framework().topology().clone();
        assert!(is_valid_degree_vector(&DegreeVector::zeros(4), &t, &HCategorizer).unwrap());
        assert!(!is_valid_degree_vector(&dv(&[0.7]), &self_attacker(), &HCategorizer).unwrap());

        let x = dv(&[0.43, 0.30, 0.38, 0.30]);
        assert!(is_valid_degree_vector(&x, &t, &HCategorizer).unwrap());
        let w = k_phi(&x, &t, &HCategorizer).unwrap();
        for (got, want) in w.iter().zip([0.43, 0.39, 0.92, 0.3]) {
            assert!((got - want).abs() < 5e-3);
        }
        assert!(is_valid_degree_vector(&DegreeVector::zeros(3), &t, &HCategorizer).is_err());
    }

    #[test]
    fn self_attack_caps() {
        assert!((max_self_attack_degree(&HCategorizer).unwrap() - 0.61803398).abs() < 1e-8);
        assert!((max_self_attack_degree(&MaxBased).unwrap() - 0.61803398).abs() < 1e-8);
        assert!((max_self_attack_degree(&CardBased).unwrap() - 0.41421356).abs() < 1e-8);
        assert_eq!(max_self_attack_degree(&LpNorm(2.0)), Err(Error::UnsupportedKernel));
    }

    #[test]
    fn degree_one_reachability() {
        assert!(!can_reach_degree_one(small_framework().topology()));
        let two_cycle = Topology::from_indices(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(can_reach_degree_one(&two_cycle));
        assert!(can_reach_degree_one(&Topology::from_indices(3, &[]).unwrap()));

        let w = degree_one_witness(&two_cycle, 1).unwrap();
        let f = WeightedFramework::new(two_cycle, w).unwrap();
        for k in [HCategorizer, MaxBased, CardBased] {
            let r = fixed_point(&f, &k, &FixedPointConfig::default()).unwrap();
            assert_eq!(r.degrees.as_slice(), &[0.0, 1.0]);
        }
        assert!(degree_one_witness(small_framework().topology(), 0).is_none());
    }

    #[test]
    fn isomorphisms() {
        let two_cycle = Topology::from_indices(2, &[(0, 1), (1, 0)]).unwrap();
        let swap = GraphIsomorphism::new(&two_cycle, vec![1, 0]).unwrap();
        let x = dv(&[0.3, 0.5]);
        assert!(is_valid_degree_vector(&x, &two_cycle, &HCategorizer).unwrap());
        let y = permute_degrees(&x, &swap, 0, 1).unwrap();
        assert_eq!(y.as_slice(), &[0.5, 0.3]);
        assert!(is_valid_degree_vector(&y, &two_cycle, &HCategorizer).unwrap());

        let id = GraphIsomorphism::identity(&two_cycle);
        assert_eq!(permute_degrees(&x, &id, 0, 0).unwrap(), x);
        assert!(matches!(
            permute_degrees(&x, &id, 0, 1),
            Err(Error::IsomorphismMismatch { .. })
        ));

        let chain = Topology::from_indices(2, &[(0, 1)]).unwrap();
        assert_eq!(GraphIsomorphism::new(&chain, vec![1, 0]), Err(Error::NotAnIsomorphism));
        assert_eq!(GraphIsomorphism::new(&chain, vec![0, 0]), Err(Error::NotAnIsomorphism));
    }

    #[test]
    fn complete_graph_symmetry() {
        let t = complete_with_loops(3);
        let transposition = GraphIsomorphism::new(&t, vec![1, 0, 2]).unwrap();
        let sample = sample_degree_space(&t, &HCategorizer, &SampleSpec::Random { count: 200 }, 5).unwrap();
        for x in &sample.points {
            let y = permute_degrees(x, &transposition, 0, 1).unwrap();
            assert!(is_valid_degree_vector_within(&y, &t, &HCategorizer, 1e-12).unwrap());
        }
    }

    #[test]
    fn grid_sampling() {
        let t = Topology::from_indices(1, &[]).unwrap();
        let s = sample_degree_space(&t, &HCategorizer, &SampleSpec::Grid(vec![0.0, 0.5, 1.0]), 0).unwrap();
        let pts: Vec<f64> = s.points.iter().map(|p| p[0]).collect();
        assert_eq!(pts, vec![0.0, 0.5, 1.0]);

        let t = complete_with_loops(3);
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let s = sample_degree_space(&t, &MaxBased, &SampleSpec::Grid(grid), 0).unwrap();
        assert_eq!(s.points.len(), 1331);
        let cap = max_self_attack_degree(&MaxBased).unwrap();
        assert!(s.points.iter().all(|p| p.as_slice().iter().all(|&v| v <= cap + 1e-9)));
    }

    #[test]
    fn random_sampling_respects_cap() {
        let t = self_attacker();
        let s = sample_degree_space(&t, &HCategorizer, &SampleSpec::Random { count: 1000 }, 9).unwrap();
        assert_eq!(s.points.len(), 1000);
        assert!(s.points.iter().all(|p| p[0] <= 0.6180339887 + 1e-9));
        let again = sample_degree_space(&t, &HCategorizer, &SampleSpec::Random { count: 1000 }, 9).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn probes() {
        let cfg = FixedPointConfig::default();
        let f = small_framework();
        assert!(monotonicity_probe(&f, &HCategorizer, 2, 1e-6, &cfg).unwrap() > 0.0);

        let free = WeightedFramework::new(Topology::from_indices(2, &[]).unwrap(), vec![0.3, 0.6]).unwrap();
        let d = monotonicity_probe(&free, &HCategorizer, 0, 1e-6, &cfg).unwrap();
        assert!((d - 1.0).abs() < 1e-9);

        let s = WeightedFramework::new(self_attacker(), vec![0.5]).unwrap();
        assert!(monotonicity_probe(&s, &HCategorizer, 0, 1e-6, &cfg).unwrap() > 0.0);

        let full = WeightedFramework::new(self_attacker(), vec![1.0]).unwrap();
        assert!(matches!(
            monotonicity_probe(&full, &HCategorizer, 0, 1e-6, &cfg),
            Err(Error::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let t = small_framework().topology().clone();
        let x = dv(&[0.2, 0.3, 0.1, 0.4]);
        let jac = hc_jacobian(&x, &t).unwrap();
        let base = k_phi(&x, &t, &HCategorizer).unwrap();
        let h = 1e-7;
        for j in 0..4 {
            let mut v = x.as_slice().to_vec();
            v[j] += h;
            let moved = k_phi(&dv(&v), &t, &HCategorizer).unwrap();
            for i in 0..4 {
                assert!(((moved[i] - base[i]) / h - jac[i][j]).abs() < 1e-6);
            }
        }
    }
}

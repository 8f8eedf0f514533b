//! Kernel-based gradual semantics over weighted argumentation frameworks.
//!
//! The forward direction computes acceptability degrees as the unique fixed
//! point of `Φ_w(x)_i = w_i / (1 + φ_i(x))` for an argumentation kernel `φ`.
//! The inverse direction takes a desired preference ordering, derives target
//! degrees from it, and recovers initial weights either analytically through
//! `k_φ(x)_i = x_i (1 + φ_i(x))` or numerically by repeated bisection.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod descriptor;
mod error;
pub mod framework;
pub mod inverse;
pub mod kernel;
pub mod semantics;
pub mod space;

pub use axioms::{check_kernel_axioms, AxiomReport, Violation, ViolationKind};
pub use error::{Error, Result};
pub use framework::{
    ordering_from_degrees, AttackMatrix, DegreeVector, OrderingPartition, Topology, WeightedFramework,
};
pub use inverse::{
    compute_bounds, invert_analytic, invert_bisection, solve_inverse, BisectionConfig, BoundsConfig, InverseMethod,
    InverseSolution, Verification,
};
pub use kernel::{combine_geometric, combine_linear, eval_kernel, Kernel, KernelDescriptor};
pub use semantics::{evaluate, fixed_point, phi_step, FixedPointConfig, FixedPointResult};
pub use space::{
    can_reach_degree_one, degree_one_witness, hc_jacobian, is_valid_degree_vector, is_valid_degree_vector_within,
    k_phi, max_self_attack_degree, monotonicity_probe, permute_degrees, sample_degree_space, GraphIsomorphism,
    SampleSpec, SpaceSample,
};

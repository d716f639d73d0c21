//! Galois cohomology of Γ = ℤ/2 on integer lattices.

mod cohomology;
mod matrix;
mod permutation;

pub use cohomology::{
    brute_force_h1, cohomology, is_permutation_involution, BruteForceH1, CohomologyReport,
    InvolutionLattice,
};
pub use matrix::{smith_normal_form, IntMatrix, SmithForm};
pub use permutation::{
    compose, group_closure, is_identity, sum_zero_permutation_certificate, Permutation,
    PermutationVerdict, GROUP_CAP,
};

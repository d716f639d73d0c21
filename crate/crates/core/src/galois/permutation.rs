//! Permutation groups on puncture sets and the sum-zero lattice criterion.

use std::collections::{BTreeSet, VecDeque};

use super::cohomology::{cohomology, CohomologyReport, InvolutionLattice};
use crate::curves::sum_zero_action;
use crate::error::{CoreError, Result};

/// Closure cap for generated groups.
pub const GROUP_CAP: usize = 10080;

/// `perm[j]` is the image of `j`.
pub type Permutation = Vec<usize>;

pub fn compose(p: &[usize], q: &[usize]) -> Permutation {
    q.iter().map(|&j| p[j]).collect()
}

pub fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| i == j)
}

/// Group generated by `generators` on `n` points, identity first.
pub fn group_closure(n: usize, generators: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    for g in generators {
        let distinct: BTreeSet<_> = g.iter().collect();
        if g.len() != n || distinct.len() != n || g.iter().any(|&x| x >= n) {
            return Err(CoreError::DimensionMismatch { expected: n, found: g.len() });
        }
    }
    let id: Permutation = (0..n).collect();
    let mut seen: BTreeSet<Permutation> = BTreeSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(CoreError::GroupTooLarge { cap });
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermutationVerdict {
    /// The group fixes this point, so `e_j ↦ e_j − e_s` is an equivariant
    /// basis of the sum-zero lattice.
    Permutation { fixed_point: usize },
    /// An involution of the group acts on the sum-zero lattice with a sign summand.
    NotPermutation { involution: Permutation, report: CohomologyReport },
    Unknown,
}

/// Decides whether the sum-zero sublattice of ℤ^S is a permutation module
/// for the group generated by `generators` (acting on `n ≥ 1` points).
pub fn sum_zero_permutation_certificate(
    n: usize,
    generators: &[Permutation],
) -> Result<PermutationVerdict> {
    if n == 0 {
        return Err(CoreError::OutOfRange("sum-zero lattice needs at least one point".into()));
    }
    let group = group_closure(n, generators, GROUP_CAP)?;
    if let Some(s) = (0..n).find(|&s| generators.iter().all(|g| g[s] == s)) {
        return Ok(PermutationVerdict::Permutation { fixed_point: s });
    }
    for g in &group {
        if is_identity(g) || !is_identity(&compose(g, g)) {
            continue;
        }
        let lattice = InvolutionLattice::new(sum_zero_action(g))?;
        let report = cohomology(&lattice)?;
        if report.b > 0 {
            return Ok(PermutationVerdict::NotPermutation { involution: g.clone(), report });
        }
    }
    Ok(PermutationVerdict::Unknown)
}

//! Cohomology of ℤ/2 acting on a lattice ℤᵐ through an integral involution σ.
//!
//! Every such lattice is a direct sum of `a` trivial, `b` sign and `c`
//! regular summands. With Ĥ⁰ = ker(σ−1)/im(σ+1) ≅ (ℤ/2)^a and
//! H¹ = ker(σ+1)/im(σ−1) ≅ (ℤ/2)^b, the triple is read off from two
//! Smith forms and two kernel ranks.

use std::collections::HashMap;

use super::matrix::{smith_normal_form, IntMatrix};
use crate::error::{CoreError, Result};

/// ℤᵐ with an integral involution σ (σ² = 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvolutionLattice {
    sigma: IntMatrix,
}

impl InvolutionLattice {
    pub fn new(sigma: IntMatrix) -> Result<Self> {
        if !sigma.is_square() {
            return Err(CoreError::NotSquare);
        }
        if sigma.mul(&sigma) != IntMatrix::identity(sigma.nrows()) {
            return Err(CoreError::NotInvolution);
        }
        Ok(Self { sigma })
    }

    pub fn rank(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub rank: usize,
    /// Trivial summands ℤ.
    pub a: usize,
    /// Sign summands ℤ⁻.
    pub b: usize,
    /// Regular summands ℤ[ℤ/2].
    pub c: usize,
    pub h1_order: u64,
    /// Nontrivial invariant factors of H¹.
    pub h1_invariants: Vec<i64>,
    pub tate0_order: u64,
    pub h0_rank: usize,
    pub ker_minus_rank: usize,
}

/// Order and invariant factors of `ker(kernel_of) / im(image_of)`; the image
/// must lie in the kernel with full rank.
fn quotient(kernel_of: &IntMatrix, image_of: &IntMatrix) -> Result<(usize, u64, Vec<i64>)> {
    let basis = smith_normal_form(kernel_of).kernel_basis();
    let r = basis.ncols();
    if r == 0 {
        return Ok((0, 1, Vec::new()));
    }
    // Coordinates of image generators in the saturated kernel basis:
    // U·K·V = [I; 0] so x = V · (U y)[..r].
    let sk = smith_normal_form(&basis);
    if sk.diagonal().iter().any(|&d| d != 1) {
        return Err(CoreError::InvariantBreach("kernel basis is not saturated".into()));
    }
    let mut coords = IntMatrix::zeros(r, image_of.ncols());
    for j in 0..image_of.ncols() {
        let y = image_of.column(j);
        let uy = sk.u.mul_vec(&y);
        let x = sk.v.mul_vec(&uy[..r]);
        if basis.mul_vec(&x) != y {
            return Err(CoreError::InvariantBreach("image is not inside the kernel".into()));
        }
        for (i, xi) in x.into_iter().enumerate() {
            coords.set(i, j, xi);
        }
    }
    let s = smith_normal_form(&coords);
    if s.rank() != r {
        return Err(CoreError::InvariantBreach("quotient is infinite".into()));
    }
    let diag = s.diagonal();
    let order = diag.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64));
    let order = order.ok_or_else(|| CoreError::InvariantBreach("quotient order overflow".into()))?;
    let invariants = diag.into_iter().filter(|&d| d != 1).collect();
    Ok((r, order, invariants))
}

fn log2_exact(n: u64) -> Result<usize> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(CoreError::InvariantBreach(format!("cohomology order {n} is not a power of two")))
    }
}

pub fn cohomology(l: &InvolutionLattice) -> Result<CohomologyReport> {
    let m = l.rank();
    let id = IntMatrix::identity(m);
    let minus = l.sigma.sub(&id);
    let plus = l.sigma.add(&id);

    let (h0_rank, tate0_order, _) = quotient(&minus, &plus)?;
    let (ker_minus_rank, h1_order, h1_invariants) = quotient(&plus, &minus)?;
    let a = log2_exact(tate0_order)?;
    let b = log2_exact(h1_order)?;
    let c = h0_rank
        .checked_sub(a)
        .ok_or_else(|| CoreError::InvariantBreach("negative regular multiplicity".into()))?;
    if ker_minus_rank != b + c || a + b + 2 * c != m {
        return Err(CoreError::InvariantBreach(format!(
            "inconsistent decomposition a={a} b={b} c={c} for rank {m}"
        )));
    }
    Ok(CohomologyReport { rank: m, a, b, c, h1_order, h1_invariants, tate0_order, h0_rank, ker_minus_rank })
}

/// Permutation modules of ℤ/2 are exactly those without sign summands.
pub fn is_permutation_involution(l: &InvolutionLattice) -> Result<(bool, CohomologyReport)> {
    let r = cohomology(l)?;
    Ok((r.b == 0, r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceH1 {
    pub order: usize,
    /// One small cocycle per class.
    pub representatives: Vec<Vec<i64>>,
    pub bound: i64,
}

/// Cocycle classes counted by direct enumeration: cocycles `a` with
/// `a + σa = 0` in the box `[−bound, bound]ᵐ`, joined whenever they differ
/// by a coboundary `e_j − σe_j`. Rerun at `bound + 2`; the counts must agree.
pub fn brute_force_h1(l: &InvolutionLattice, bound: i64) -> Result<BruteForceH1> {
    if l.rank() > 6 || !(1..=10).contains(&bound) {
        return Err(CoreError::OutOfRange(format!(
            "brute-force H1 needs rank <= 6 and 1 <= bound <= 10 (rank {}, bound {bound})",
            l.rank()
        )));
    }
    let small = count_classes(l, bound);
    let large = count_classes(l, bound + 2);
    if small.0 != large.0 {
        return Err(CoreError::Unstable(format!(
            "{} classes at bound {bound}, {} at bound {}",
            small.0,
            large.0,
            bound + 2
        )));
    }
    Ok(BruteForceH1 { order: small.0, representatives: small.1, bound })
}

fn count_classes(l: &InvolutionLattice, bound: i64) -> (usize, Vec<Vec<i64>>) {
    let m = l.rank();
    let sigma = &l.sigma;
    let width = (2 * bound + 1) as usize;
    let total = width.pow(m as u32);

    let mut cocycles: Vec<Vec<i64>> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut v = vec![-bound; m];
    for _ in 0..total {
        let sv = sigma.mul_vec(&v);
        if v.iter().zip(&sv).all(|(x, y)| x + y == 0) {
            index.insert(v.clone(), cocycles.len());
            cocycles.push(v.clone());
        }
        for x in v.iter_mut() {
            if *x < bound {
                *x += 1;
                break;
            }
            *x = -bound;
        }
    }

    let generators: Vec<Vec<i64>> = (0..m)
        .map(|j| {
            let col = sigma.column(j);
            (0..m).map(|i| i64::from(i == j) - col[i]).collect()
        })
        .filter(|g: &Vec<i64>| g.iter().any(|&x| x != 0))
        .collect();

    let mut parent: Vec<usize> = (0..cocycles.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, a) in cocycles.iter().enumerate() {
        for g in &generators {
            let shifted: Vec<i64> = a.iter().zip(g).map(|(x, y)| x + y).collect();
            if let Some(&j) = index.get(&shifted) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut best: HashMap<usize, Vec<i64>> = HashMap::new();
    let key = |v: &Vec<i64>| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone());
    for (i, cand) in cocycles.iter().enumerate() {
        let root = find(&mut parent, i);
        match best.get(&root) {
            Some(cur) if key(cur) <= key(cand) => {}
            _ => {
                best.insert(root, cand.clone());
            }
        }
    }
    let mut reps: Vec<Vec<i64>> = best.into_values().collect();
    reps.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    (reps.len(), reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[&[i64]]) -> InvolutionLattice {
        InvolutionLattice::new(
            IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rank_one_cases() {
        let r = cohomology(&lat(&[&[1]])).unwrap();
        assert_eq!((r.a, r.b, r.c, r.h1_order), (1, 0, 0, 1));
        let r = cohomology(&lat(&[&[-1]])).unwrap();
        assert_eq!((r.a, r.b, r.c, r.h1_order), (0, 1, 0, 2));
        assert_eq!(r.h1_invariants, vec![2]);
    }

    #[test]
    fn regular_module() {
        let r = cohomology(&lat(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!((r.a, r.b, r.c, r.h1_order, r.tate0_order), (0, 0, 1, 1, 1));
    }

    #[test]
    fn zero_lattice() {
        let r = cohomology(&InvolutionLattice::new(IntMatrix::zeros(0, 0)).unwrap()).unwrap();
        assert_eq!((r.a, r.b, r.c, r.h1_order), (0, 0, 0, 1));
    }

    #[test]
    fn not_involution() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(InvolutionLattice::new(m), Err(CoreError::NotInvolution));
        let m = IntMatrix::from_rows(&[vec![1, 1]]).unwrap();
        assert_eq!(InvolutionLattice::new(m), Err(CoreError::NotSquare));
    }

    #[test]
    fn brute_force_examples() {
        let b = brute_force_h1(&lat(&[&[-1]]), 5).unwrap();
        assert_eq!(b.order, 2);
        assert_eq!(b.representatives, vec![vec![0], vec![-1]]);
        assert_eq!(brute_force_h1(&lat(&[&[1]]), 5).unwrap().order, 1);
        assert_eq!(brute_force_h1(&lat(&[&[0, 1], &[1, 0]]), 5).unwrap().order, 1);
        assert!(matches!(brute_force_h1(&lat(&[&[1]]), 11), Err(CoreError::OutOfRange(_))));
    }

    #[test]
    fn permutation_test() {
        assert!(is_permutation_involution(&lat(&[&[0, 1], &[1, 0]])).unwrap().0);
        assert!(!is_permutation_involution(&lat(&[&[-1]])).unwrap().0);
        assert!(is_permutation_involution(&InvolutionLattice::new(IntMatrix::identity(3)).unwrap())
            .unwrap()
            .0);
    }

    #[test]
    fn non_diagonal_involution() {
        // [[1,1],[0,-1]] ≅ ℤ[ℤ/2]: neither trivial nor sign.
        let r = cohomology(&lat(&[&[1, 1], &[0, -1]])).unwrap();
        assert_eq!((r.a, r.b, r.c), (0, 0, 1));
        assert_eq!(brute_force_h1(&lat(&[&[1, 1], &[0, -1]]), 4).unwrap().order, 1);
    }

    #[test]
    fn block_sums() {
        let regular = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let sum = regular.block_diagonal(2);
        assert!(is_permutation_involution(&InvolutionLattice::new(sum).unwrap()).unwrap().0);
        let with_sign = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]).unwrap();
        let (ok, r) = is_permutation_involution(&InvolutionLattice::new(with_sign).unwrap()).unwrap();
        assert!(!ok);
        assert_eq!((r.a, r.b, r.c), (0, 1, 1));
    }
}

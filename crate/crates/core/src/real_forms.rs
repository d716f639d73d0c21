//! Real structures on polyhedral divisors: conjugation-stable data, the
//! twisted Γ-module Λ, the permutation-module finiteness verdict, and the
//! cocycle classification of the family μ_n in the skeleton ℤ ⋊ ℤ/2.

use std::collections::BTreeMap;
use std::fmt;

use crate::curves::{sum_zero_action, CurveModel, P1Point};
use crate::datum::AHDatum;
use crate::error::{CoreError, Result};
use crate::galois::{
    brute_force_h1, cohomology, sum_zero_permutation_certificate, BruteForceH1, CohomologyReport,
    IntMatrix, InvolutionLattice, Permutation, PermutationVerdict,
};
use crate::lifting::{k_generators, lift_group, KGenerator};
use crate::scalar::{q_frac, GaussianRational};

/// A datum stable under complex conjugation of curve points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealDatum {
    datum: AHDatum,
}

impl RealDatum {
    pub fn datum(&self) -> &AHDatum {
        &self.datum
    }

    /// Conjugation as a permutation of the ordered punctures.
    pub fn conjugation(&self) -> Permutation {
        let s = self.datum.curve().punctures();
        s.iter().map(|p| s.iter().position(|x| *x == p.conj()).expect("stable")).collect()
    }
}

pub fn validate_real_datum(d: AHDatum) -> Result<RealDatum> {
    let punctures = d.curve().punctures();
    for p in &punctures {
        if !punctures.contains(&p.conj()) {
            return Err(CoreError::NotConjugationStable(p.to_string()));
        }
    }
    for (p, c) in d.coefficients() {
        if d.coefficients().get(&p.conj()) != Some(c) {
            return Err(CoreError::NotConjugationStable(p.to_string()));
        }
    }
    Ok(RealDatum { datum: d })
}

/// Λ = (sum-zero lattice of ℤ^S)ⁿ with Γ acting through conjugation of S.
pub fn twisted_lambda(rd: &RealDatum) -> InvolutionLattice {
    let block = sum_zero_action(&rd.conjugation());
    let sigma = block.block_diagonal(rd.datum.torus_rank());
    InvolutionLattice::new(sigma).expect("conjugation is an involution")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteEvidence {
    ZeroLattice,
    /// K ⋊ Γ fixes this puncture, so Λ is a permutation module.
    FixedPuncture(P1Point),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormsVerdict {
    FiniteCertified(FiniteEvidence),
    /// An involution of K ⋊ Γ, as a permutation of the punctures, acting on
    /// each coordinate block of Λ with a sign summand.
    NotCertified { involution: Permutation, report: CohomologyReport },
    Unsupported(String),
}

impl fmt::Display for FormsVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FiniteCertified(FiniteEvidence::ZeroLattice) => {
                write!(f, "FiniteCertified (Λ = 0)")
            }
            Self::FiniteCertified(FiniteEvidence::FixedPuncture(p)) => {
                write!(f, "FiniteCertified (fixed puncture {p})")
            }
            Self::NotCertified { involution, report } => write!(
                f,
                "NotCertified (involution {involution:?}, type ({}, {}, {}))",
                report.a, report.b, report.c
            ),
            Self::Unsupported(reason) => write!(f, "Unsupported ({reason})"),
        }
    }
}

/// Permutations of the punctures generating the image of K ⋊ Γ.
pub fn forms_generators(rd: &RealDatum) -> Result<(Vec<KGenerator>, Permutation)> {
    let k = lift_group(&rd.datum)?;
    Ok((k_generators(&rd.datum, &k)?, rd.conjugation()))
}

pub fn finiteness_verdict(rd: &RealDatum) -> Result<FormsVerdict> {
    let (gens, conj) = forms_generators(rd)?;
    verdict_from_generators(rd, gens.iter().map(|g| g.permutation.clone()).chain([conj]).collect())
}

/// The verdict for an explicit generating set of permutations of the punctures.
pub fn verdict_from_generators(rd: &RealDatum, generators: Vec<Permutation>) -> Result<FormsVerdict> {
    let s = rd.datum.curve().punctures();
    if s.len() < 2 {
        return Ok(FormsVerdict::FiniteCertified(FiniteEvidence::ZeroLattice));
    }
    // Λ is n copies of the same sum-zero block, so one block decides.
    match sum_zero_permutation_certificate(s.len(), &generators) {
        Ok(PermutationVerdict::Permutation { fixed_point }) => {
            Ok(FormsVerdict::FiniteCertified(FiniteEvidence::FixedPuncture(s[fixed_point].clone())))
        }
        Ok(PermutationVerdict::NotPermutation { involution, report }) => {
            Ok(FormsVerdict::NotCertified { involution, report })
        }
        Ok(PermutationVerdict::Unknown) => Ok(FormsVerdict::Unsupported(
            "no puncture is fixed and no involution has a sign summand".into(),
        )),
        Err(CoreError::GroupTooLarge { cap }) => {
            Ok(FormsVerdict::Unsupported(format!("generated group exceeds {cap} elements")))
        }
        Err(e) => Err(e),
    }
}

/// (k, ε) in ℤ ⋊ ℤ/2 with ε acting on ℤ by sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkeletonElement {
    pub k: i64,
    pub negative: bool,
}

impl SkeletonElement {
    pub fn new(k: i64, negative: bool) -> Self {
        Self { k, negative }
    }

    pub fn identity() -> Self {
        Self::new(0, false)
    }

    fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.k + self.sign() * other.k, self.negative != other.negative)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.sign() * self.k, self.negative)
    }

    /// `self · c · self⁻¹`.
    pub fn conjugate(&self, c: &Self) -> Self {
        self.mul(c).mul(&self.inverse())
    }

    pub fn is_involution(&self) -> bool {
        self.mul(self) == Self::identity() && *self != Self::identity()
    }
}

impl fmt::Display for SkeletonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, if self.negative { '-' } else { '+' })
    }
}

/// The cocycle attached to μ_n.
pub fn mu_cocycle(n: i64) -> SkeletonElement {
    SkeletonElement::new(n, true)
}

/// First `h` with `|h.k| ≤ bound` and `h · c_n · h⁻¹ = c_m`, searching by
/// increasing `|k|`.
pub fn find_conjugator(n: i64, m: i64, bound: i64) -> Option<SkeletonElement> {
    let target = mu_cocycle(m);
    (0..=bound)
        .flat_map(|a| if a == 0 { vec![0] } else { vec![a, -a] })
        .flat_map(|k| [SkeletonElement::new(k, false), SkeletonElement::new(k, true)])
        .find(|h| h.conjugate(&mu_cocycle(n)) == target)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuConjugation {
    pub from: i64,
    pub to: i64,
    pub conjugator: SkeletonElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuClassification {
    pub bound: i64,
    /// Classes of `{−bound..bound}`, each sorted, ordered by least element.
    pub classes: Vec<Vec<i64>>,
    /// For every class, a conjugator from its least element to each other member.
    pub conjugations: Vec<MuConjugation>,
    /// `n mod 2` separates the classes and is constant on each.
    pub parity_invariant: bool,
}

pub const MU_BOUND_MAX: i64 = 64;

pub fn mu_family_classify(bound: i64) -> Result<MuClassification> {
    if !(1..=MU_BOUND_MAX).contains(&bound) {
        return Err(CoreError::OutOfRange(format!("bound must lie in 1..={MU_BOUND_MAX}")));
    }
    let range: Vec<i64> = (-bound..=bound).collect();
    let idx = |n: i64| (n + bound) as usize;
    let mut parent: Vec<usize> = (0..range.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for &n in &range {
        for k in -bound..=bound {
            for negative in [false, true] {
                let image = SkeletonElement::new(k, negative).conjugate(&mu_cocycle(n));
                if image.negative && image.k.abs() <= bound {
                    let (a, b) = (find(&mut parent, idx(n)), find(&mut parent, idx(image.k)));
                    parent[a] = b;
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for &n in &range {
        let r = find(&mut parent, idx(n));
        by_root.entry(r).or_default().push(n);
    }
    let mut classes: Vec<Vec<i64>> = by_root.into_values().collect();
    classes.sort();

    let mut conjugations = Vec::new();
    for class in &classes {
        let base = class[0];
        for &m in &class[1..] {
            let conjugator = find_conjugator(base, m, bound).ok_or_else(|| {
                CoreError::InvariantBreach(format!("no conjugator from μ_{base} to μ_{m}"))
            })?;
            conjugations.push(MuConjugation { from: base, to: m, conjugator });
        }
    }
    let parity_invariant = classes.iter().all(|c| c.iter().all(|n| n.rem_euclid(2) == c[0].rem_euclid(2)))
        && classes.len() == 2;
    Ok(MuClassification { bound, classes, conjugations, parity_invariant })
}

/// A point on the unit circle, solving |α|² = 1.
pub fn unit_circle_point() -> GaussianRational {
    GaussianRational::new(q_frac(3, 5), q_frac(4, 5))
}

/// λ with λ / λ̄ = u, for |u| = 1.
pub fn angle_solution(u: &GaussianRational) -> Option<GaussianRational> {
    if u.norm_sqr() != GaussianRational::one().norm_sqr() {
        return None;
    }
    let lambda = &GaussianRational::one() + u;
    if lambda.is_zero() {
        Some(GaussianRational::i())
    } else {
        Some(lambda)
    }
}

/// Whether the datum is the trivial rank-one divisor on a line minus two points,
/// where the μ-family classification applies.
pub fn is_mu_configuration(rd: &RealDatum) -> bool {
    let d = &rd.datum;
    matches!(d.curve(), CurveModel::P1Minus(s) if s.len() == 2)
        && d.coefficients().is_empty()
        && d.torus_rank() == 1
}

pub const H1_DISCREPANCY_WARNING: &str =
    "H1(Gamma, Lambda) for the sign lattice is Z/2 by group cohomology; the value Z quoted for this configuration is not reproduced";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuAnalysis {
    pub sign_h1: CohomologyReport,
    pub brute_force: BruteForceH1,
    pub classification: MuClassification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormsAnalysis {
    pub verdict: FormsVerdict,
    pub twisted: CohomologyReport,
    pub mu: Option<MuAnalysis>,
    pub warnings: Vec<String>,
}

pub fn forms_analysis(rd: &RealDatum, bound: i64) -> Result<FormsAnalysis> {
    let verdict = finiteness_verdict(rd)?;
    let twisted = cohomology(&twisted_lambda(rd))?;
    let mut warnings = Vec::new();
    let mu = if is_mu_configuration(rd) {
        let sign = InvolutionLattice::new(IntMatrix::scalar(1, -1))?;
        let analysis = MuAnalysis {
            sign_h1: cohomology(&sign)?,
            brute_force: brute_force_h1(&sign, 5)?,
            classification: mu_family_classify(bound)?,
        };
        warnings.push(H1_DISCREPANCY_WARNING.to_string());
        Some(analysis)
    } else {
        None
    };
    Ok(FormsAnalysis { verdict, twisted, mu, warnings })
}

//! Base curves of complexity-one torus varieties: ℙ¹, ℙ¹ minus finitely
//! many points, and elliptic curves. Divisors, principality, units and the
//! automorphisms the rest of the crate acts with.

mod elliptic;
mod mobius;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;

pub use elliptic::{EcAutomorphism, ECPoint, EllipticCurve};
pub use mobius::{mobius_stabilizer, AutDescription, MobiusMap, P1Point};

use crate::error::{CoreError, Result};
use crate::galois::IntMatrix;
use crate::scalar::GaussianRational;

/// A closed point of one of the supported curve models.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Line(P1Point),
    Elliptic(ECPoint),
}

impl CurvePoint {
    pub fn as_line(&self) -> Option<&P1Point> {
        match self {
            Self::Line(p) => Some(p),
            Self::Elliptic(_) => None,
        }
    }

    pub fn as_elliptic(&self) -> Option<&ECPoint> {
        match self {
            Self::Elliptic(p) => Some(p),
            Self::Line(_) => None,
        }
    }

    /// Complex conjugate; rational elliptic points are fixed.
    pub fn conj(&self) -> Self {
        match self {
            Self::Line(p) => Self::Line(p.conj()),
            Self::Elliptic(p) => Self::Elliptic(p.clone()),
        }
    }
}

impl From<P1Point> for CurvePoint {
    fn from(p: P1Point) -> Self {
        Self::Line(p)
    }
}

impl From<ECPoint> for CurvePoint {
    fn from(p: ECPoint) -> Self {
        Self::Elliptic(p)
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Line(p) => p.fmt(f),
            Self::Elliptic(p) => p.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveModel {
    P1,
    /// ℙ¹ with a nonempty finite set of punctures removed.
    P1Minus(BTreeSet<P1Point>),
    Elliptic(EllipticCurve),
}

impl CurveModel {
    pub fn p1_minus<I: IntoIterator<Item = P1Point>>(points: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if !set.insert(p.clone()) {
                return Err(CoreError::DuplicatePoint(p.to_string()));
            }
        }
        if set.is_empty() {
            return Err(CoreError::UnsupportedModel("empty puncture set; use p1".into()));
        }
        Ok(Self::P1Minus(set))
    }

    pub fn genus(&self) -> u32 {
        match self {
            Self::P1 | Self::P1Minus(_) => 0,
            Self::Elliptic(_) => 1,
        }
    }

    /// Punctures S (empty for projective models).
    pub fn punctures(&self) -> Vec<P1Point> {
        match self {
            Self::P1Minus(s) => s.iter().cloned().collect(),
            _ => Vec::new(),
        }
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match (self, p) {
            (Self::P1, CurvePoint::Line(_)) => true,
            (Self::P1Minus(s), CurvePoint::Line(x)) => !s.contains(x),
            (Self::Elliptic(e), CurvePoint::Elliptic(x)) => e.contains(x),
            _ => false,
        }
    }

    /// Parses a point in this model's grammar (`inf`/scalar, or `O`/`(x,y)`).
    pub fn parse_point(&self, s: &str) -> Result<CurvePoint> {
        match self {
            Self::P1 | Self::P1Minus(_) => s.parse::<P1Point>().map(CurvePoint::Line),
            Self::Elliptic(_) => ECPoint::parse(s).map(CurvePoint::Elliptic),
        }
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::P1 => f.write_str("P1"),
            Self::P1Minus(s) => {
                let pts: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "P1 minus {{{}}}", pts.join(", "))
            }
            Self::Elliptic(e) => e.fmt(f),
        }
    }
}

/// An automorphism of a curve model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveAutomorphism {
    Mobius(MobiusMap),
    Elliptic(EcAutomorphism),
}

impl CurveAutomorphism {
    pub fn identity_for(model: &CurveModel) -> Self {
        match model {
            CurveModel::Elliptic(_) => Self::Elliptic(EcAutomorphism::identity()),
            _ => Self::Mobius(MobiusMap::identity()),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Self::Mobius(m) => m.is_identity(),
            Self::Elliptic(e) => *e == EcAutomorphism::identity(),
        }
    }

    /// Checks that `self` is an automorphism of `model`.
    pub fn check_on(&self, model: &CurveModel) -> Result<()> {
        match (self, model) {
            (Self::Mobius(_), CurveModel::P1) => Ok(()),
            (Self::Mobius(m), CurveModel::P1Minus(s)) => {
                let image: BTreeSet<P1Point> = s.iter().map(|p| m.apply(p)).collect();
                if image == *s {
                    Ok(())
                } else {
                    Err(CoreError::NotAnAutomorphism(format!("{m} does not preserve the punctures")))
                }
            }
            (Self::Elliptic(a), CurveModel::Elliptic(e)) => {
                if e.contains(&a.translation) {
                    Ok(())
                } else {
                    Err(CoreError::PointNotOnCurve(a.translation.to_string()))
                }
            }
            (Self::Mobius(_), CurveModel::Elliptic(_)) => Err(CoreError::UnsupportedAutomorphism(
                "Möbius map on an elliptic curve".into(),
            )),
            (Self::Elliptic(_), _) => Err(CoreError::UnsupportedAutomorphism(
                "elliptic automorphism on a rational curve".into(),
            )),
        }
    }

    pub fn apply(&self, model: &CurveModel, p: &CurvePoint) -> Result<CurvePoint> {
        match (self, model, p) {
            (Self::Mobius(m), CurveModel::P1 | CurveModel::P1Minus(_), CurvePoint::Line(x)) => {
                Ok(CurvePoint::Line(m.apply(x)))
            }
            (Self::Elliptic(a), CurveModel::Elliptic(e), CurvePoint::Elliptic(x)) => {
                Ok(CurvePoint::Elliptic(a.apply(e, x)?))
            }
            _ => Err(CoreError::PointNotOnCurve(p.to_string())),
        }
    }

    pub fn inverse(&self, model: &CurveModel) -> Self {
        match (self, model) {
            (Self::Mobius(m), _) => Self::Mobius(m.inverse()),
            (Self::Elliptic(a), CurveModel::Elliptic(e)) => Self::Elliptic(a.inverse(e)),
            (Self::Elliptic(a), _) => Self::Elliptic(a.clone()),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, model: &CurveModel, other: &Self) -> Result<Self> {
        match (self, other, model) {
            (Self::Mobius(a), Self::Mobius(b), _) => Ok(Self::Mobius(a.compose(b))),
            (Self::Elliptic(a), Self::Elliptic(b), CurveModel::Elliptic(e)) => {
                Ok(Self::Elliptic(a.compose(e, b)?))
            }
            _ => Err(CoreError::UnsupportedAutomorphism("mixed automorphism kinds".into())),
        }
    }

    /// Permutation of `points` induced by `self`: `perm[j] = index of self(points[j])`.
    pub fn permutation_of(&self, model: &CurveModel, points: &[CurvePoint]) -> Result<Vec<usize>> {
        points
            .iter()
            .map(|p| {
                let image = self.apply(model, p)?;
                points.iter().position(|x| *x == image).ok_or_else(|| {
                    CoreError::NotAnAutomorphism(format!("{self} moves {p} outside the set"))
                })
            })
            .collect()
    }
}

impl fmt::Display for CurveAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mobius(m) => m.fmt(f),
            Self::Elliptic(a) => a.fmt(f),
        }
    }
}

/// Finite formal sum of points with nonzero integer multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<CurvePoint, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (CurvePoint, i64)>>(terms: I) -> Self {
        let mut d = Self::new();
        for (p, m) in terms {
            d.add_term(p, m);
        }
        d
    }

    pub fn add_term(&mut self, p: CurvePoint, m: i64) {
        let entry = self.terms.entry(p.clone()).or_insert(0);
        *entry += m;
        if *entry == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> &BTreeMap<CurvePoint, i64> {
        &self.terms
    }

    pub fn multiplicity(&self, p: &CurvePoint) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (p, m) in &other.terms {
            d.add_term(p.clone(), *m);
        }
        d
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(p, m)| (p.clone(), -m)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Drops points outside `model` (e.g. punctures).
    pub fn restrict_to(&self, model: &CurveModel) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| model.contains(p))
                .map(|(p, m)| (p.clone(), *m))
                .collect(),
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, m)| format!("{m}*({p})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Π (t − p)^{m_p}` over finite points `p`; the empty product is 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactoredFunction {
    pub factors: BTreeMap<GaussianRational, i64>,
}

impl FactoredFunction {
    /// Divisor on ℙ¹, with ∞ absorbing the total degree.
    pub fn divisor_on_p1(&self) -> Divisor {
        let mut d = Divisor::new();
        for (p, m) in &self.factors {
            d.add_term(CurvePoint::Line(P1Point::Finite(p.clone())), *m);
        }
        let deg: i64 = self.factors.values().sum();
        d.add_term(CurvePoint::Line(P1Point::Infinity), -deg);
        d
    }

    pub fn divisor_on(&self, model: &CurveModel) -> Divisor {
        self.divisor_on_p1().restrict_to(model)
    }

    fn push(&mut self, p: GaussianRational, m: i64) {
        let e = self.factors.entry(p.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.factors.remove(&p);
        }
    }
}

impl fmt::Display for FactoredFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, m)| {
                let base = if p.is_zero() {
                    "t".to_string()
                } else {
                    let neg = -p.clone();
                    let s = neg.to_string();
                    if s.starts_with('-') {
                        format!("(t{s})")
                    } else {
                        format!("(t+{s})")
                    }
                };
                if *m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Certificate that a divisor on an elliptic curve is principal: degree
/// zero and group-law sum O.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticSumCertificate {
    pub degree: i64,
    pub sum: ECPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrincipalWitness {
    Rational(FactoredFunction),
    Elliptic(EllipticSumCertificate),
}

impl fmt::Display for PrincipalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(func) => func.fmt(f),
            Self::Elliptic(c) => write!(f, "[deg {}, sum {}]", c.degree, c.sum),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Obstruction {
    NonzeroDegree(i64),
    NonzeroSum(ECPoint),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonzeroDegree(d) => write!(f, "degree {d}"),
            Self::NonzeroSum(p) => p.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrincipalityResult {
    Principal(PrincipalWitness),
    NotPrincipal(Obstruction),
}

/// Decides whether `d` is the divisor of a rational function on `c`.
pub fn is_principal(c: &CurveModel, d: &Divisor) -> Result<PrincipalityResult> {
    for p in d.terms().keys() {
        if !c.contains(p) {
            return Err(CoreError::PointNotOnCurve(p.to_string()));
        }
    }
    match c {
        CurveModel::P1 => {
            if d.degree() != 0 {
                return Ok(PrincipalityResult::NotPrincipal(Obstruction::NonzeroDegree(d.degree())));
            }
            let mut f = FactoredFunction::default();
            for (p, m) in d.terms() {
                if let Some(P1Point::Finite(z)) = p.as_line() {
                    f.push(z.clone(), *m);
                }
            }
            Ok(PrincipalityResult::Principal(PrincipalWitness::Rational(f)))
        }
        CurveModel::P1Minus(s) => {
            let mut f = FactoredFunction::default();
            for (p, m) in d.terms() {
                if let Some(P1Point::Finite(z)) = p.as_line() {
                    f.push(z.clone(), *m);
                }
            }
            // Balance the degree at the least puncture s₀; when s₀ = ∞ the
            // pole or zero at ∞ is already implied.
            let s0 = s.iter().next().expect("nonempty puncture set");
            if let P1Point::Finite(z) = s0 {
                f.push(z.clone(), -d.degree());
            }
            Ok(PrincipalityResult::Principal(PrincipalWitness::Rational(f)))
        }
        CurveModel::Elliptic(e) => {
            if d.degree() != 0 {
                return Ok(PrincipalityResult::NotPrincipal(Obstruction::NonzeroDegree(d.degree())));
            }
            let mut sum = ECPoint::Infinity;
            for (p, m) in d.terms() {
                let p = p.as_elliptic().expect("checked on curve");
                sum = e.add(&sum, &e.mul(&BigInt::from(*m), p)?)?;
            }
            if sum.is_infinity() {
                Ok(PrincipalityResult::Principal(PrincipalWitness::Elliptic(
                    EllipticSumCertificate { degree: 0, sum },
                )))
            } else {
                Ok(PrincipalityResult::NotPrincipal(Obstruction::NonzeroSum(sum)))
            }
        }
    }
}

/// Recomputes the divisor a witness certifies, for round-trip checks.
/// Elliptic certificates carry no function, so they are re-verified against `d`.
pub fn witness_matches(c: &CurveModel, w: &PrincipalWitness, d: &Divisor) -> Result<bool> {
    match w {
        PrincipalWitness::Rational(f) => Ok(f.divisor_on(c) == *d),
        PrincipalWitness::Elliptic(cert) => Ok(cert.sum.is_infinity()
            && cert.degree == 0
            && matches!(is_principal(c, d)?, PrincipalityResult::Principal(_))),
    }
}

/// O(C)^× / k^×: free of rank |S| − 1 on ℙ¹ ∖ S, trivial on projective models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitsLattice {
    pub rank: usize,
    /// Ordered punctures `s₀ < s₁ < …`; generator `j` is the class of
    /// `(t − s_j)/(t − s₀)`, with divisor `e_j − e_0`.
    pub punctures: Vec<P1Point>,
}

impl UnitsLattice {
    pub fn basis_labels(&self) -> Vec<String> {
        let Some(s0) = self.punctures.first() else {
            return Vec::new();
        };
        self.punctures[1..].iter().map(|sj| format!("({sj}) - ({s0})")).collect()
    }
}

pub fn units_lattice(c: &CurveModel) -> UnitsLattice {
    match c {
        CurveModel::P1Minus(s) => UnitsLattice { rank: s.len() - 1, punctures: s.iter().cloned().collect() },
        _ => UnitsLattice { rank: 0, punctures: Vec::new() },
    }
}

/// Matrix of `e_j − e_0 ↦ e_{σ(j)} − e_{σ(0)}` on the sum-zero lattice of
/// ℤ^S, in the basis `e_j − e_0` (`j = 1..|S|−1`). Columns are images.
pub fn sum_zero_action(perm: &[usize]) -> IntMatrix {
    let m = perm.len().saturating_sub(1);
    let mut mat = IntMatrix::zeros(m, m);
    // e_k − e_0 expressed in the basis: coordinate k−1 (zero for k = 0).
    let coords = |k: usize| -> Vec<i64> {
        let mut v = vec![0; m];
        if k > 0 {
            v[k - 1] = 1;
        }
        v
    };
    for j in 1..perm.len() {
        let a = coords(perm[j]);
        let b = coords(perm[0]);
        for i in 0..m {
            mat.set(i, j - 1, a[i] - b[i]);
        }
    }
    mat
}

/// Action of `ψ` on [`units_lattice`] by push-forward of puncture classes.
pub fn induced_unit_action(c: &CurveModel, psi: &CurveAutomorphism) -> Result<IntMatrix> {
    match c {
        CurveModel::P1Minus(s) => {
            psi.check_on(c)?;
            let pts: Vec<CurvePoint> = s.iter().cloned().map(CurvePoint::Line).collect();
            let all = CurveModel::P1;
            let perm = psi.permutation_of(&all, &pts)?;
            Ok(sum_zero_action(&perm))
        }
        _ => {
            psi.check_on(c)?;
            Ok(IntMatrix::zeros(0, 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> CurvePoint {
        CurvePoint::Line(s.parse().unwrap())
    }

    fn minus(pts: &[&str]) -> CurveModel {
        CurveModel::p1_minus(pts.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    fn mobius(a: i64, b: i64, c: i64, d: i64) -> CurveAutomorphism {
        CurveAutomorphism::Mobius(MobiusMap::from_ints(a, b, c, d).unwrap())
    }

    #[test]
    fn principal_on_p1() {
        let d = Divisor::from_terms([(lp("0"), 1), (lp("inf"), -1)]);
        let PrincipalityResult::Principal(PrincipalWitness::Rational(f)) =
            is_principal(&CurveModel::P1, &d).unwrap()
        else {
            panic!("expected principal");
        };
        assert_eq!(f.to_string(), "t");
        assert_eq!(f.divisor_on_p1(), d);

        let d = Divisor::from_terms([(lp("1"), 2)]);
        assert_eq!(
            is_principal(&CurveModel::P1, &d).unwrap(),
            PrincipalityResult::NotPrincipal(Obstruction::NonzeroDegree(2))
        );
    }

    #[test]
    fn principal_on_punctured_line() {
        let c = minus(&["0", "inf"]);
        let d = Divisor::from_terms([(lp("1"), 1)]);
        let PrincipalityResult::Principal(w) = is_principal(&c, &d).unwrap() else {
            panic!("expected principal");
        };
        assert_eq!(w.to_string(), "t^-1*(t-1)");
        assert!(witness_matches(&c, &w, &d).unwrap());

        // s₀ = ∞ absorbs the degree automatically.
        let c = minus(&["inf"]);
        let d = Divisor::from_terms([(lp("2"), 3), (lp("i"), -1)]);
        let PrincipalityResult::Principal(w) = is_principal(&c, &d).unwrap() else {
            panic!("expected principal");
        };
        assert!(witness_matches(&c, &w, &d).unwrap());

        assert!(matches!(
            is_principal(&c, &Divisor::from_terms([(lp("inf"), 1)])),
            Err(CoreError::PointNotOnCurve(_))
        ));
    }

    #[test]
    fn principal_on_elliptic() {
        let e = EllipticCurve::from_ints(-1, 0).unwrap();
        let c = CurveModel::Elliptic(e);
        let ep = |x, y| CurvePoint::Elliptic(ECPoint::from_ints(x, y));
        let o = CurvePoint::Elliptic(ECPoint::Infinity);
        let d = Divisor::from_terms([(ep(0, 0), 1), (o.clone(), -1)]);
        assert_eq!(
            is_principal(&c, &d).unwrap(),
            PrincipalityResult::NotPrincipal(Obstruction::NonzeroSum(ECPoint::from_ints(0, 0)))
        );
        let d = Divisor::from_terms([(ep(0, 0), 1), (ep(1, 0), 1), (ep(-1, 0), 1), (o, -3)]);
        assert!(matches!(is_principal(&c, &d).unwrap(), PrincipalityResult::Principal(_)));
    }

    #[test]
    fn units_lattice_ranks() {
        let u = units_lattice(&minus(&["0", "inf"]));
        assert_eq!(u.rank, 1);
        assert_eq!(u.basis_labels(), vec!["(inf) - (0)"]);
        assert_eq!(units_lattice(&minus(&["0", "1", "inf"])).rank, 2);
        let e = CurveModel::Elliptic(EllipticCurve::from_ints(-1, 0).unwrap());
        assert_eq!(units_lattice(&e).rank, 0);
        assert_eq!(units_lattice(&CurveModel::P1).rank, 0);
    }

    #[test]
    fn unit_actions() {
        let c = minus(&["0", "inf"]);
        assert_eq!(induced_unit_action(&c, &mobius(1, 0, 0, 1)).unwrap(), IntMatrix::identity(1));
        assert_eq!(induced_unit_action(&c, &mobius(0, 1, 1, 0)).unwrap().rows(), vec![vec![-1]]);

        let c = minus(&["0", "1", "inf"]);
        let m = induced_unit_action(&c, &mobius(-1, 1, 0, 1)).unwrap();
        assert_eq!(m.rows(), vec![vec![-1, -1], vec![0, 1]]);
        assert_eq!(m.mul(&m), IntMatrix::identity(2));
        assert!(matches!(
            induced_unit_action(&c, &mobius(2, 0, 0, 1)),
            Err(CoreError::NotAnAutomorphism(_))
        ));
    }

    #[test]
    fn unit_action_is_homomorphism() {
        let c = minus(&["0", "1", "inf"]);
        let AutDescription::Finite(maps) = mobius_stabilizer(&c.punctures().into_iter().collect())
        else {
            panic!()
        };
        for a in &maps {
            for b in &maps {
                let a = CurveAutomorphism::Mobius(a.clone());
                let b = CurveAutomorphism::Mobius(b.clone());
                let ab = a.compose(&c, &b).unwrap();
                assert_eq!(
                    induced_unit_action(&c, &ab).unwrap(),
                    induced_unit_action(&c, &a).unwrap().mul(&induced_unit_action(&c, &b).unwrap())
                );
            }
        }
    }

    #[test]
    fn rank_formula_sampled() {
        for n in 1..=8i64 {
            let c = CurveModel::p1_minus((0..n).map(P1Point::int)).unwrap();
            assert_eq!(units_lattice(&c).rank, (n - 1) as usize);
        }
    }
}

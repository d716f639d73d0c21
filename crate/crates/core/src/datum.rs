//! Polyhedral divisors 𝔇 = Σ Δ_P ⊗ P on a curve: validation, support, bad
//! locus, pullback and differences.

use std::collections::BTreeMap;
use std::fmt;

use crate::curves::{
    is_principal, CurveAutomorphism, CurveModel, CurvePoint, Divisor, Obstruction,
    PrincipalWitness, PrincipalityResult,
};
use crate::error::{CoreError, Result};
use crate::polyhedra::{is_integral, translate_of, Cone, Polyhedron, RationalVector};

/// One unvalidated coefficient. `rays = None` means "use the tail cone".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCoefficient {
    pub point: CurvePoint,
    pub vertices: Vec<RationalVector>,
    pub rays: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDatum {
    pub torus_rank: usize,
    pub tail_rays: Vec<Vec<i64>>,
    pub curve: CurveModel,
    pub coefficients: Vec<RawCoefficient>,
}

/// A validated polyhedral divisor. Points absent from `coefficients` carry ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AHDatum {
    torus_rank: usize,
    tail: Cone,
    curve: CurveModel,
    coefficients: BTreeMap<CurvePoint, Polyhedron>,
}

impl AHDatum {
    /// The trivial divisor (empty support).
    pub fn trivial(tail: Cone, curve: CurveModel) -> Self {
        Self { torus_rank: tail.dim(), tail, curve, coefficients: BTreeMap::new() }
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn coefficients(&self) -> &BTreeMap<CurvePoint, Polyhedron> {
        &self.coefficients
    }

    pub fn support(&self) -> Vec<CurvePoint> {
        self.coefficients.keys().cloned().collect()
    }

    pub fn coefficient(&self, p: &CurvePoint) -> Polyhedron {
        self.coefficients.get(p).cloned().unwrap_or_else(|| Polyhedron::from_cone(&self.tail))
    }

    /// χ_P with Δ_P = χ_P + ω, when Δ_P is a translate of ω.
    pub fn translate_vector(&self, p: &CurvePoint) -> Option<RationalVector> {
        translate_of(&Polyhedron::from_cone(&self.tail), &self.coefficient(p))
    }

    fn with_coefficients(&self, coefficients: BTreeMap<CurvePoint, Polyhedron>) -> Self {
        let omega = Polyhedron::from_cone(&self.tail);
        let coefficients = coefficients.into_iter().filter(|(_, c)| *c != omega).collect();
        Self { torus_rank: self.torus_rank, tail: self.tail.clone(), curve: self.curve.clone(), coefficients }
    }
}

impl fmt::Display for AHDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0 on {}", self.curve);
        }
        let terms: Vec<String> =
            self.coefficients.iter().map(|(p, c)| format!("({c}) ⊗ {p}")).collect();
        write!(f, "{} on {}", terms.join(" + "), self.curve)
    }
}

pub fn validate_datum(raw: &RawDatum) -> Result<AHDatum> {
    let n = raw.torus_rank;
    if n == 0 {
        return Err(CoreError::OutOfRange("torus rank must be at least 1".into()));
    }
    let tail = Cone::new(n, &raw.tail_rays)?;
    let omega = Polyhedron::from_cone(&tail);
    let mut coefficients = BTreeMap::new();
    let mut seen = BTreeMap::new();
    for c in &raw.coefficients {
        if !raw.curve.contains(&c.point) {
            return Err(CoreError::PointNotOnCurve(c.point.to_string()));
        }
        if seen.insert(c.point.clone(), ()).is_some() {
            return Err(CoreError::DuplicatePoint(c.point.to_string()));
        }
        let cone = match &c.rays {
            Some(rays) => Cone::new(n, rays)?,
            None => tail.clone(),
        };
        if cone != tail {
            return Err(CoreError::TailMismatch(c.point.to_string()));
        }
        let poly = Polyhedron::new(c.vertices.clone(), cone)?;
        if poly != omega {
            coefficients.insert(c.point.clone(), poly);
        }
    }
    Ok(AHDatum { torus_rank: n, tail, curve: raw.curve.clone(), coefficients })
}

/// The bad locus F, partitioned into classes of mutual translates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BadLocus {
    pub classes: Vec<Vec<CurvePoint>>,
}

impl BadLocus {
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn points(&self) -> Vec<CurvePoint> {
        let mut pts: Vec<_> = self.classes.iter().flatten().cloned().collect();
        pts.sort();
        pts
    }
}

pub fn bad_locus(d: &AHDatum) -> BadLocus {
    let omega = Polyhedron::from_cone(&d.tail);
    let mut classes: Vec<Vec<CurvePoint>> = Vec::new();
    for (p, c) in &d.coefficients {
        if translate_of(&omega, c).is_some() {
            continue;
        }
        match classes.iter_mut().find(|cl| translate_of(&d.coefficients[&cl[0]], c).is_some()) {
            Some(cl) => cl.push(p.clone()),
            None => classes.push(vec![p.clone()]),
        }
    }
    BadLocus { classes }
}

/// Representative of Δ modulo integral translations: the translate whose
/// lexicographically least vertex lies in [0, 1)ⁿ.
pub fn integral_type(p: &Polyhedron) -> Polyhedron {
    let v = p.lex_min_vertex();
    let shift = RationalVector(v.0.iter().map(|x| -x.floor()).collect());
    p.translate(&shift)
}

/// Points whose coefficient is not an integral translate of ω, grouped by
/// [`integral_type`]. Any liftable automorphism permutes these points and
/// preserves their types.
pub fn rigid_points(d: &AHDatum) -> BTreeMap<CurvePoint, Polyhedron> {
    let omega = Polyhedron::from_cone(&d.tail);
    d.coefficients
        .iter()
        .map(|(p, c)| (p.clone(), integral_type(c)))
        .filter(|(_, t)| *t != omega)
        .collect()
}

/// ψ*𝔇: the coefficient at P is Δ_{ψ(P)}.
pub fn pullback(psi: &CurveAutomorphism, d: &AHDatum) -> Result<AHDatum> {
    psi.check_on(&d.curve)?;
    let inv = psi.inverse(&d.curve);
    let mut coefficients = BTreeMap::new();
    for (q, c) in &d.coefficients {
        coefficients.insert(inv.apply(&d.curve, q)?, c.clone());
    }
    Ok(d.with_coefficients(coefficients))
}

/// An n-tuple of divisors, one per torus coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PluriDivisor {
    pub divisors: Vec<Divisor>,
}

impl PluriDivisor {
    pub fn zero(n: usize) -> Self {
        Self { divisors: vec![Divisor::new(); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.divisors.iter().all(Divisor::is_zero)
    }
}

impl fmt::Display for PluriDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.divisors.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Difference {
    Divisor(PluriDivisor),
    /// At `point` the coefficients are not integral translates; `translate`
    /// holds the non-integral vector when they are rational translates.
    Mismatch { point: CurvePoint, translate: Option<RationalVector> },
}

/// `d1 − d2` as a plurifunction divisor, when d1_P = d2_P + v_P with v_P ∈ ℤⁿ.
pub fn difference(d1: &AHDatum, d2: &AHDatum) -> Result<Difference> {
    if d1.curve != d2.curve {
        return Err(CoreError::InvariantBreach("difference of data on different curves".into()));
    }
    if d1.tail != d2.tail {
        return Err(CoreError::TailMismatch("difference of data with different tails".into()));
    }
    let n = d1.torus_rank;
    let mut points: Vec<&CurvePoint> = d1.coefficients.keys().chain(d2.coefficients.keys()).collect();
    points.sort();
    points.dedup();
    let mut out = PluriDivisor::zero(n);
    for p in points {
        let Some(v) = translate_of(&d2.coefficient(p), &d1.coefficient(p)) else {
            return Ok(Difference::Mismatch { point: p.clone(), translate: None });
        };
        let Some(ints) = v.to_integers() else {
            return Ok(Difference::Mismatch { point: p.clone(), translate: Some(v) });
        };
        for (div, m) in out.divisors.iter_mut().zip(ints) {
            div.add_term(p.clone(), m);
        }
    }
    Ok(Difference::Divisor(out))
}

/// An n-tuple of principal-divisor witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plurifunction {
    pub components: Vec<PrincipalWitness>,
}

impl fmt::Display for Plurifunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.components.as_slice() {
            [one] => one.fmt(f),
            many => {
                let parts: Vec<String> = many.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessResult {
    Plurifunction(Plurifunction),
    NotPrincipal { coordinate: usize, obstruction: Obstruction },
}

pub fn plurifunction_witness(c: &CurveModel, pd: &PluriDivisor) -> Result<WitnessResult> {
    let mut components = Vec::with_capacity(pd.divisors.len());
    for (i, d) in pd.divisors.iter().enumerate() {
        match is_principal(c, d)? {
            PrincipalityResult::Principal(w) => components.push(w),
            PrincipalityResult::NotPrincipal(obstruction) => {
                return Ok(WitnessResult::NotPrincipal { coordinate: i, obstruction })
            }
        }
    }
    Ok(WitnessResult::Plurifunction(Plurifunction { components }))
}

/// χ_P for every support point, when all coefficients are integral translates of ω.
pub(crate) fn integral_translates(d: &AHDatum) -> Option<BTreeMap<CurvePoint, Vec<i64>>> {
    d.coefficients
        .keys()
        .map(|p| {
            let v = d.translate_vector(p)?;
            is_integral(&v).then(|| (p.clone(), v.to_integers().expect("integral")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{MobiusMap, P1Point};
    use crate::scalar::q_frac;

    fn lp(s: &str) -> CurvePoint {
        CurvePoint::Line(s.parse::<P1Point>().unwrap())
    }

    fn coef(p: &str, verts: &[i64], rays: Option<Vec<Vec<i64>>>) -> RawCoefficient {
        RawCoefficient {
            point: lp(p),
            vertices: verts.iter().map(|&v| RationalVector::from_ints(&[v])).collect(),
            rays,
        }
    }

    pub(crate) fn swap_datum() -> AHDatum {
        validate_datum(&RawDatum {
            torus_rank: 1,
            tail_rays: vec![vec![1]],
            curve: CurveModel::P1,
            coefficients: vec![coef("0", &[1], None), coef("inf", &[-1], None)],
        })
        .unwrap()
    }

    fn segments(pairs: &[(&str, i64, i64)]) -> AHDatum {
        validate_datum(&RawDatum {
            torus_rank: 1,
            tail_rays: vec![],
            curve: CurveModel::P1,
            coefficients: pairs.iter().map(|&(p, a, b)| coef(p, &[a, b], None)).collect(),
        })
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        let raw = RawDatum {
            torus_rank: 1,
            tail_rays: vec![vec![1]],
            curve: CurveModel::P1,
            coefficients: vec![coef("0", &[1], Some(vec![]))],
        };
        assert_eq!(validate_datum(&raw), Err(CoreError::TailMismatch("0".into())));

        let raw = RawDatum {
            torus_rank: 1,
            tail_rays: vec![vec![1]],
            curve: CurveModel::p1_minus(["0".parse().unwrap(), "inf".parse().unwrap()]).unwrap(),
            coefficients: vec![coef("0", &[1], None)],
        };
        assert!(matches!(validate_datum(&raw), Err(CoreError::PointNotOnCurve(_))));

        let raw = RawDatum {
            torus_rank: 1,
            tail_rays: vec![vec![1], vec![-1]],
            curve: CurveModel::P1,
            coefficients: vec![],
        };
        assert_eq!(validate_datum(&raw), Err(CoreError::NotPointed));
    }

    #[test]
    fn omega_coefficients_are_dropped() {
        let d = validate_datum(&RawDatum {
            torus_rank: 1,
            tail_rays: vec![vec![1]],
            curve: CurveModel::P1,
            coefficients: vec![coef("0", &[0], None), coef("1", &[0, 3], None)],
        })
        .unwrap();
        assert!(d.coefficients().is_empty());
    }

    #[test]
    fn bad_locus_examples() {
        assert!(bad_locus(&swap_datum()).is_empty());
        let d = segments(&[("0", 0, 1)]);
        assert_eq!(bad_locus(&d).classes, vec![vec![lp("0")]]);
        let d = segments(&[("0", 0, 1), ("1", 2, 3)]);
        assert_eq!(bad_locus(&d).classes, vec![vec![lp("0"), lp("1")]]);
    }

    #[test]
    fn rigid_points_include_fractional_translates() {
        let d = validate_datum(&RawDatum {
            torus_rank: 1,
            tail_rays: vec![vec![1]],
            curve: CurveModel::P1,
            coefficients: vec![
                RawCoefficient {
                    point: lp("0"),
                    vertices: vec![RationalVector(vec![q_frac(1, 2)])],
                    rays: None,
                },
                coef("1", &[4], None),
            ],
        })
        .unwrap();
        assert!(bad_locus(&d).is_empty());
        let rigid = rigid_points(&d);
        assert_eq!(rigid.keys().cloned().collect::<Vec<_>>(), vec![lp("0")]);
    }

    #[test]
    fn pullback_and_difference_of_swap() {
        let d = swap_datum();
        let psi = CurveAutomorphism::Mobius(MobiusMap::from_ints(0, 1, 1, 0).unwrap());
        let pulled = pullback(&psi, &d).unwrap();
        assert_eq!(pulled.coefficient(&lp("0")).lex_min_vertex(), &RationalVector::from_ints(&[-1]));
        assert_eq!(pulled.coefficient(&lp("inf")).lex_min_vertex(), &RationalVector::from_ints(&[1]));

        let Difference::Divisor(pd) = difference(&pulled, &d).unwrap() else {
            panic!("expected integral translates");
        };
        assert_eq!(pd.divisors, vec![Divisor::from_terms([(lp("0"), -2), (lp("inf"), 2)])]);

        let WitnessResult::Plurifunction(f) = plurifunction_witness(d.curve(), &pd).unwrap() else {
            panic!("expected principal");
        };
        assert_eq!(f.to_string(), "t^-2");

        assert!(difference(&d, &d).unwrap() == Difference::Divisor(PluriDivisor::zero(1)));
        assert_eq!(pullback(&CurveAutomorphism::identity_for(d.curve()), &d).unwrap(), d);
    }

    #[test]
    fn difference_reports_shape_mismatch() {
        let d = segments(&[("0", 0, 1)]);
        let psi = CurveAutomorphism::Mobius(MobiusMap::from_ints(-1, 1, 0, 1).unwrap());
        let pulled = pullback(&psi, &d).unwrap();
        assert_eq!(
            difference(&pulled, &d).unwrap(),
            Difference::Mismatch { point: lp("0"), translate: None }
        );
    }

    #[test]
    fn witness_on_punctured_line() {
        let c = CurveModel::p1_minus(["0".parse().unwrap(), "inf".parse().unwrap()]).unwrap();
        let pd = PluriDivisor { divisors: vec![Divisor::from_terms([(lp("1"), 1)])] };
        let WitnessResult::Plurifunction(f) = plurifunction_witness(&c, &pd).unwrap() else {
            panic!("always principal on an affine line minus points");
        };
        assert_eq!(f.to_string(), "t^-1*(t-1)");
    }
}

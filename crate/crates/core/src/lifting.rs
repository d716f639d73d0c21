//! The lifting criterion ψ*𝔇 = 𝔇 + div(𝔣) and the image group K ⊂ Aut(C).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::curves::{
    mobius_stabilizer, units_lattice, witness_matches, AutDescription, CurveAutomorphism,
    CurveModel, CurvePoint, ECPoint, EcAutomorphism, EllipticCurve, MobiusMap, Obstruction,
    P1Point, UnitsLattice,
};
use crate::datum::{
    bad_locus, difference, integral_translates, plurifunction_witness, pullback, rigid_points,
    AHDatum, BadLocus, Difference, PluriDivisor, Plurifunction, WitnessResult,
};
use crate::error::{CoreError, Result};
use crate::galois::{IntMatrix, Permutation};
use crate::polyhedra::{Polyhedron, RationalVector};
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftResult {
    /// `divisor = ψ*𝔇 − 𝔇` and `witness` is a plurifunction with that divisor.
    Liftable { witness: Plurifunction, divisor: PluriDivisor },
    NonTranslate { point: CurvePoint, translate: Option<RationalVector> },
    NotPrincipal { coordinate: usize, obstruction: Obstruction },
    UnsupportedAutomorphism(String),
}

impl LiftResult {
    pub fn is_liftable(&self) -> bool {
        matches!(self, Self::Liftable { .. })
    }
}

pub fn lift_test(d: &AHDatum, psi: &CurveAutomorphism) -> Result<LiftResult> {
    match psi.check_on(d.curve()) {
        Err(CoreError::UnsupportedAutomorphism(reason)) => {
            return Ok(LiftResult::UnsupportedAutomorphism(reason))
        }
        other => other?,
    }
    let pulled = pullback(psi, d)?;
    let divisor = match difference(&pulled, d)? {
        Difference::Divisor(pd) => pd,
        Difference::Mismatch { point, translate } => {
            return Ok(LiftResult::NonTranslate { point, translate })
        }
    };
    match plurifunction_witness(d.curve(), &divisor)? {
        WitnessResult::NotPrincipal { coordinate, obstruction } => {
            Ok(LiftResult::NotPrincipal { coordinate, obstruction })
        }
        WitnessResult::Plurifunction(witness) => {
            for (w, div) in witness.components.iter().zip(&divisor.divisors) {
                if !witness_matches(d.curve(), w, div)? {
                    return Err(CoreError::InvariantBreach(format!(
                        "witness {w} does not reproduce {div}"
                    )));
                }
            }
            Ok(LiftResult::Liftable { witness, divisor })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocusPoints {
    AllRational,
    Finite(Vec<ECPoint>),
}

/// Translations `P ↦ P + t` that lift. `g` is the gcd of the coordinate
/// weights when every coefficient is an integral translate of ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationLocus {
    pub g: Option<i64>,
    pub points: LocusPoints,
}

fn elliptic_curve(d: &AHDatum) -> Result<&EllipticCurve> {
    match d.curve() {
        CurveModel::Elliptic(e) => Ok(e),
        other => Err(CoreError::UnsupportedModel(format!("{other} is not an elliptic curve"))),
    }
}

fn ec_point(p: &CurvePoint) -> &ECPoint {
    p.as_elliptic().expect("point of an elliptic datum")
}

fn translation(t: &ECPoint) -> CurveAutomorphism {
    CurveAutomorphism::Elliptic(EcAutomorphism::translation(t.clone()))
}

fn negation_plus(t: &ECPoint) -> CurveAutomorphism {
    CurveAutomorphism::Elliptic(EcAutomorphism { negate: true, translation: t.clone() })
}

fn certify(d: &AHDatum, psi: &CurveAutomorphism) -> Result<()> {
    if lift_test(d, psi)?.is_liftable() {
        Ok(())
    } else {
        Err(CoreError::InvariantBreach(format!("{psi} was predicted to lift but does not")))
    }
}

/// Coordinate weights `w_i = Σ_P (χ_P)_i`.
fn weights(n: usize, chis: &BTreeMap<CurvePoint, Vec<i64>>) -> Vec<i64> {
    (0..n).map(|i| chis.values().map(|c| c[i]).sum()).collect()
}

fn gcd_all(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn translation_lift_locus(d: &AHDatum) -> Result<TranslationLocus> {
    let e = elliptic_curve(d)?;
    if !bad_locus(d).is_empty() {
        return Err(CoreError::BadLocusNonEmpty);
    }
    let Some(chis) = integral_translates(d) else {
        // Fractional translates: t must move one rigid point onto another.
        let rigid: Vec<CurvePoint> = rigid_points(d).into_keys().collect();
        let f0 = ec_point(&rigid[0]);
        let mut points = Vec::new();
        for f in &rigid {
            let t = e.sub(ec_point(f), f0)?;
            if lift_test(d, &translation(&t))?.is_liftable() {
                points.push(t);
            }
        }
        points.sort();
        return Ok(TranslationLocus { g: None, points: LocusPoints::Finite(points) });
    };
    let g = gcd_all(&weights(d.torus_rank(), &chis));
    if g == 0 {
        return Ok(TranslationLocus { g: Some(0), points: LocusPoints::AllRational });
    }
    let points = e.torsion_killed_by(&BigInt::from(g))?;
    for t in &points {
        certify(d, &translation(t))?;
    }
    Ok(TranslationLocus { g: Some(g), points: LocusPoints::Finite(points) })
}

/// The part of K that is a subgroup of known shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KBase {
    FullPgl2,
    /// Maps fixing `point`; see [`AutDescription::AffineFamily`].
    AffineFamily { point: P1Point, conjugator: MobiusMap },
    /// Maps fixing both points; see [`AutDescription::TorusFamily`].
    TorusFamily { points: [P1Point; 2], conjugator: MobiusMap },
    Finite(Vec<CurveAutomorphism>),
    EllipticTranslations(TranslationLocus),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetStatus {
    Liftable,
    NotLiftable,
    Undetermined,
}

/// A coset of the base group, its tested representative and the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetVerdict {
    pub representative: CurveAutomorphism,
    pub result: LiftResult,
    pub status: CosetStatus,
    /// All members when the coset is finite and listed.
    pub members: Vec<CurveAutomorphism>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDescription {
    pub genus: u32,
    pub bad_locus: BadLocus,
    /// Bad points together with non-integral translates of ω.
    pub rigid: Vec<CurvePoint>,
    pub base: KBase,
    pub cosets: Vec<CosetVerdict>,
    /// Family members checked with [`lift_test`].
    pub spot_checks: Vec<CurveAutomorphism>,
    pub warnings: Vec<String>,
}

impl KDescription {
    /// Listed elements of K: finite base elements and members of liftable cosets.
    pub fn listed_elements(&self) -> Vec<CurveAutomorphism> {
        let mut out = match &self.base {
            KBase::Finite(v) => v.clone(),
            _ => Vec::new(),
        };
        for c in self.cosets.iter().filter(|c| c.status == CosetStatus::Liftable) {
            if c.members.is_empty() {
                out.push(c.representative.clone());
            } else {
                out.extend(c.members.iter().cloned());
            }
        }
        out
    }
}

const SPOT_CHECKS: i64 = 20;

fn sample_scalar(k: i64) -> GaussianRational {
    GaussianRational::new(
        crate::scalar::q_frac(k + 2, (k % 3) + 1),
        crate::scalar::q((k % 5) - 2),
    )
}

/// Rational translate class of a coefficient: the translate with lex-min vertex 0.
fn shape(p: &Polyhedron) -> Polyhedron {
    p.translate(&p.lex_min_vertex().neg())
}

pub fn lift_group(d: &AHDatum) -> Result<KDescription> {
    let rigid_map = rigid_points(d);
    let rigid: Vec<CurvePoint> = rigid_map.keys().cloned().collect();
    let mut k = KDescription {
        genus: d.curve().genus(),
        bad_locus: bad_locus(d),
        rigid: rigid.clone(),
        base: KBase::FullPgl2,
        cosets: Vec::new(),
        spot_checks: Vec::new(),
        warnings: Vec::new(),
    };
    match d.curve() {
        CurveModel::Elliptic(e) => lift_group_elliptic(d, e, &rigid, &mut k)?,
        _ => lift_group_rational(d, &rigid, &mut k)?,
    }
    Ok(k)
}

fn lift_group_rational(d: &AHDatum, rigid: &[CurvePoint], k: &mut KDescription) -> Result<()> {
    let punctures: BTreeSet<P1Point> = d.curve().punctures().into_iter().collect();
    let shapes: BTreeMap<P1Point, Polyhedron> = rigid
        .iter()
        .map(|p| (p.as_line().expect("line point").clone(), shape(&d.coefficient(p))))
        .collect();
    let mut u = punctures.clone();
    u.extend(shapes.keys().cloned());
    // Whether m maps U to itself, S to S and rigid points to rigid points of the same shape.
    let admissible = |m: &MobiusMap| {
        punctures.iter().all(|s| punctures.contains(&m.apply(s)))
            && shapes.iter().all(|(p, sh)| shapes.get(&m.apply(p)) == Some(sh))
    };
    let mobius = |m: &MobiusMap| CurveAutomorphism::Mobius(m.clone());

    match mobius_stabilizer(&u) {
        AutDescription::FullPgl2 => {
            k.base = KBase::FullPgl2;
            for j in 0..SPOT_CHECKS {
                let m = MobiusMap::from_ints(j + 1, j - 3, 2, j + 5)?;
                certify(d, &mobius(&m))?;
                k.spot_checks.push(mobius(&m));
            }
        }
        AutDescription::AffineFamily { point, conjugator } => {
            for j in 0..SPOT_CHECKS {
                let m = AutDescription::affine_member(&conjugator, sample_scalar(j), sample_scalar(j + 7))?;
                certify(d, &mobius(&m))?;
                k.spot_checks.push(mobius(&m));
            }
            k.base = KBase::AffineFamily { point, conjugator };
        }
        AutDescription::TorusFamily { points, conjugator, swap } => {
            for j in 0..SPOT_CHECKS {
                let m = AutDescription::torus_member(&conjugator, sample_scalar(j))?;
                certify(d, &mobius(&m))?;
                k.spot_checks.push(mobius(&m));
            }
            if admissible(&swap) {
                let rep = mobius(&swap);
                let result = lift_test(d, &rep)?;
                let status =
                    if result.is_liftable() { CosetStatus::Liftable } else { CosetStatus::NotLiftable };
                k.cosets.push(CosetVerdict { representative: rep, result, status, members: Vec::new(), note: None });
            }
            k.base = KBase::TorusFamily { points, conjugator };
        }
        AutDescription::Finite(maps) => {
            let rigid_pts: Vec<CurvePoint> = rigid.to_vec();
            let mut base = Vec::new();
            let mut cosets: BTreeMap<Permutation, Vec<CurveAutomorphism>> = BTreeMap::new();
            for m in maps.iter().filter(|m| admissible(m)) {
                let psi = mobius(m);
                let perm = psi.permutation_of(&CurveModel::P1, &rigid_pts)?;
                if crate::galois::is_identity(&perm) {
                    base.push(psi);
                } else {
                    cosets.entry(perm).or_default().push(psi);
                }
            }
            for psi in &base {
                certify(d, psi)?;
            }
            for members in cosets.into_values() {
                let rep = members[0].clone();
                let result = lift_test(d, &rep)?;
                let status =
                    if result.is_liftable() { CosetStatus::Liftable } else { CosetStatus::NotLiftable };
                k.cosets.push(CosetVerdict { representative: rep, result, status, members, note: None });
            }
            k.base = KBase::Finite(base);
        }
    }
    Ok(())
}

/// Integers `a` with `Σ a_i w_i = gcd(w)`.
fn bezout(w: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coeffs: Vec<i64> = Vec::new();
    for &x in w {
        let eg = g.extended_gcd(&x);
        let (mut gg, mut a, mut b) = (eg.gcd, eg.x, eg.y);
        if gg < 0 {
            gg = -gg;
            a = -a;
            b = -b;
        }
        for c in coeffs.iter_mut() {
            *c *= a;
        }
        coeffs.push(b);
        g = gg;
    }
    (g, coeffs)
}

fn lift_group_elliptic(
    d: &AHDatum,
    e: &EllipticCurve,
    rigid: &[CurvePoint],
    k: &mut KDescription,
) -> Result<()> {
    use num_traits::Zero;
    if e.a().is_zero() || e.b().is_zero() {
        k.warnings.push(
            "curve has j-invariant 0 or 1728; automorphisms beyond ±P + t are not enumerated".into(),
        );
    }
    let verdict = |result: &LiftResult| {
        if result.is_liftable() {
            CosetStatus::Liftable
        } else {
            CosetStatus::NotLiftable
        }
    };

    if !rigid.is_empty() {
        // Every lift maps the first rigid point f₀ into the rigid set, so
        // t ∈ R − f₀ for translations and t ∈ R + f₀ for −P + t.
        let f0 = ec_point(&rigid[0]);
        let mut translations = Vec::new();
        for f in rigid {
            let t = e.sub(ec_point(f), f0)?;
            if lift_test(d, &translation(&t))?.is_liftable() {
                translations.push(translation(&t));
            }
        }
        translations.sort();
        for f in rigid {
            let t = e.add(ec_point(f), f0)?;
            let rep = negation_plus(&t);
            let result = lift_test(d, &rep)?;
            let status = verdict(&result);
            k.cosets.push(CosetVerdict { representative: rep, result, status, members: Vec::new(), note: None });
        }
        k.base = KBase::Finite(translations);
        return Ok(());
    }

    let locus = translation_lift_locus(d)?;
    let chis = integral_translates(d).expect("no rigid points");
    let n = d.torus_rank();
    let w = weights(n, &chis);
    let (g, a) = bezout(&w);

    let mut candidates: BTreeSet<ECPoint> = BTreeSet::from([ECPoint::Infinity]);
    if g != 0 {
        // g·t = Σ a_i w_i t = 2 Σ a_i s_i with s_i = Σ_Q (χ_Q)_i Q.
        let mut r = ECPoint::Infinity;
        for (i, ai) in a.iter().enumerate() {
            for (q, chi) in &chis {
                let term = e.mul(&BigInt::from(2 * ai * chi[i]), ec_point(q))?;
                r = e.add(&r, &term)?;
            }
        }
        if g == 1 {
            candidates.insert(r);
        }
    }
    let support: Vec<&ECPoint> = chis.keys().map(ec_point).collect();
    for (i, p) in support.iter().enumerate() {
        candidates.insert((*p).clone());
        for p2 in &support[i..] {
            candidates.insert(e.add(p, p2)?);
        }
    }

    let mut found = None;
    let mut last = None;
    for t in &candidates {
        let rep = negation_plus(t);
        let result = lift_test(d, &rep)?;
        if result.is_liftable() {
            found = Some((rep, result));
            break;
        }
        last.get_or_insert((rep, result));
    }
    let coset = match (found, g) {
        (Some((rep, result)), 0) => CosetVerdict {
            representative: rep,
            result,
            status: CosetStatus::Liftable,
            members: Vec::new(),
            note: Some("every -P + t lifts".into()),
        },
        (Some((rep, result)), _) => {
            let CurveAutomorphism::Elliptic(ref a0) = rep else { unreachable!() };
            let LocusPoints::Finite(torsion) = &locus.points else { unreachable!("g != 0") };
            let mut members = Vec::new();
            for t in torsion {
                let m = negation_plus(&e.add(&a0.translation, t)?);
                certify(d, &m)?;
                members.push(m);
            }
            members.sort();
            CosetVerdict { representative: rep, result, status: CosetStatus::Liftable, members, note: None }
        }
        (None, 0 | 1) => {
            let (rep, result) = last.expect("at least one candidate");
            CosetVerdict { representative: rep, result, status: CosetStatus::NotLiftable, members: Vec::new(), note: None }
        }
        (None, _) => {
            let (rep, result) = last.expect("at least one candidate");
            CosetVerdict {
                representative: rep,
                result,
                status: CosetStatus::Undetermined,
                members: Vec::new(),
                note: Some(format!("a lift needs {g}·t = r for a computed point r; no candidate t found")),
            }
        }
    };
    k.cosets.push(coset);
    k.base = KBase::EllipticTranslations(locus);
    Ok(())
}

/// An element of K with its action on the units lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGenerator {
    pub label: String,
    pub automorphism: CurveAutomorphism,
    /// Permutation of the ordered punctures.
    pub permutation: Permutation,
    /// Block-diagonal action on Λ, one block per torus coordinate.
    pub matrix: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberGroup {
    pub torus_rank: usize,
    pub units: UnitsLattice,
    pub lambda_rank: usize,
    pub k_generators: Vec<KGenerator>,
}

pub fn k_generators(d: &AHDatum, k: &KDescription) -> Result<Vec<KGenerator>> {
    let c = d.curve();
    let pts: Vec<CurvePoint> = c.punctures().into_iter().map(CurvePoint::Line).collect();
    if pts.len() < 2 {
        return Ok(Vec::new());
    }
    let mut elements: Vec<(String, CurveAutomorphism)> = Vec::new();
    match &k.base {
        KBase::TorusFamily { conjugator, .. } => {
            let m = AutDescription::torus_member(conjugator, GaussianRational::from_int(2))?;
            elements.push(("torus family member".into(), CurveAutomorphism::Mobius(m)));
        }
        KBase::AffineFamily { conjugator, .. } => {
            let m = AutDescription::affine_member(
                conjugator,
                GaussianRational::from_int(2),
                GaussianRational::one(),
            )?;
            elements.push(("affine family member".into(), CurveAutomorphism::Mobius(m)));
        }
        KBase::Finite(v) => {
            elements.extend(v.iter().filter(|a| !a.is_identity()).map(|a| ("fixes rigid points".into(), a.clone())))
        }
        KBase::FullPgl2 | KBase::EllipticTranslations(_) => {}
    }
    for c in k.cosets.iter().filter(|c| c.status == CosetStatus::Liftable) {
        if c.members.is_empty() {
            elements.push(("coset representative".into(), c.representative.clone()));
        } else {
            elements.extend(c.members.iter().map(|m| ("coset member".into(), m.clone())));
        }
    }
    let n = d.torus_rank();
    elements
        .into_iter()
        .map(|(label, automorphism)| {
            let permutation = automorphism.permutation_of(&CurveModel::P1, &pts)?;
            let block = crate::curves::sum_zero_action(&permutation);
            let matrix = IntMatrix::block_diagonal(&block, n);
            Ok(KGenerator { label, automorphism, permutation, matrix })
        })
        .collect()
}

pub fn fiber_group(d: &AHDatum) -> Result<FiberGroup> {
    let units = units_lattice(d.curve());
    let k = lift_group(d)?;
    Ok(FiberGroup {
        torus_rank: d.torus_rank(),
        lambda_rank: d.torus_rank() * units.rank,
        k_generators: k_generators(d, &k)?,
        units,
    })
}

//! Points of ℙ¹ over ℚ(i) and Möbius transformations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};
use crate::scalar::GaussianRational;

/// A point of ℙ¹(ℚ(i)): either an affine coordinate `[t : 1]` or `∞ = [1 : 0]`.
///
/// Ordering puts every finite point (ordered by real then imaginary part)
/// before ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Point {
    Finite(GaussianRational),
    Infinity,
}

impl P1Point {
    pub fn finite(z: GaussianRational) -> Self {
        Self::Finite(z)
    }

    pub fn int(n: i64) -> Self {
        Self::Finite(GaussianRational::from_int(n))
    }

    /// Point from homogeneous coordinates `[a : b]`.
    pub fn from_homogeneous(a: &GaussianRational, b: &GaussianRational) -> Option<Self> {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => None,
            (_, true) => Some(Self::Infinity),
            _ => Some(Self::Finite(a / b)),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Self::Finite(z) => Self::Finite(z.conj()),
            Self::Infinity => Self::Infinity,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Self::Finite(z) => z.is_real(),
            Self::Infinity => true,
        }
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) => write!(f, "{z}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for P1Point {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Self::Infinity),
            other => other.parse().map(Self::Finite),
        }
    }
}

/// `t ↦ (a·t + b) / (c·t + d)` with nonzero determinant, scaled so the first
/// nonzero entry of `(a, b, c, d)` is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MobiusMap {
    a: GaussianRational,
    b: GaussianRational,
    c: GaussianRational,
    d: GaussianRational,
}

impl MobiusMap {
    pub fn new(
        a: GaussianRational,
        b: GaussianRational,
        c: GaussianRational,
        d: GaussianRational,
    ) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(CoreError::DegenerateMobius);
        }
        let lead = [&a, &b, &c, &d]
            .into_iter()
            .find(|x| !x.is_zero())
            .cloned()
            .expect("nonzero determinant");
        Ok(Self { a: &a / &lead, b: &b / &lead, c: &c / &lead, d: &d / &lead })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(
            GaussianRational::from_int(a),
            GaussianRational::from_int(b),
            GaussianRational::from_int(c),
            GaussianRational::from_int(d),
        )
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1).expect("identity is invertible")
    }

    /// `t ↦ λ·t`.
    pub fn scaling(lambda: GaussianRational) -> Result<Self> {
        Self::new(lambda, GaussianRational::zero(), GaussianRational::zero(), GaussianRational::one())
    }

    /// `t ↦ λ·t + μ`.
    pub fn affine(lambda: GaussianRational, mu: GaussianRational) -> Result<Self> {
        Self::new(lambda, mu, GaussianRational::zero(), GaussianRational::one())
    }

    pub fn entries(&self) -> [&GaussianRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, p: &P1Point) -> P1Point {
        match p {
            P1Point::Finite(t) => {
                let num = &(&self.a * t) + &self.b;
                let den = &(&self.c * t) + &self.d;
                P1Point::from_homogeneous(&num, &den).expect("invertible map")
            }
            P1Point::Infinity => {
                P1Point::from_homogeneous(&self.a, &self.c).expect("invertible map")
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            &(&self.a * &other.a) + &(&self.b * &other.c),
            &(&self.a * &other.b) + &(&self.b * &other.d),
            &(&self.c * &other.a) + &(&self.d * &other.c),
            &(&self.c * &other.b) + &(&self.d * &other.d),
        )
        .expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone()).expect("invertible map")
    }

    /// Coefficient-wise conjugate: `z ↦ conj(m(conj z))`.
    pub fn conj(&self) -> Self {
        Self::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
            .expect("invertible map")
    }

    /// The map sending `p0, p1, p2` to `0, 1, ∞`.
    pub fn to_standard_frame(p0: &P1Point, p1: &P1Point, p2: &P1Point) -> Result<Self> {
        use P1Point::*;
        let one = GaussianRational::one;
        let zero = GaussianRational::zero;
        match (p0, p1, p2) {
            (Infinity, Finite(x1), Finite(x2)) => Self::new(zero(), x1 - x2, one(), -x2),
            (Finite(x0), Infinity, Finite(x2)) => Self::new(one(), -x0, one(), -x2),
            (Finite(x0), Finite(x1), Infinity) => Self::new(one(), -x0, zero(), x1 - x0),
            (Finite(x0), Finite(x1), Finite(x2)) => {
                let u = x1 - x2;
                let v = x1 - x0;
                Self::new(u.clone(), -(x0 * &u), v.clone(), -(x2 * &v))
            }
            _ => Err(CoreError::DegenerateMobius),
        }
    }

    /// The unique map with `from[k] ↦ to[k]` for three distinct points each.
    pub fn through_three(from: [&P1Point; 3], to: [&P1Point; 3]) -> Result<Self> {
        let f = Self::to_standard_frame(from[0], from[1], from[2])?;
        let g = Self::to_standard_frame(to[0], to[1], to[2])?;
        Ok(g.inverse().compose(&f))
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t -> ({}*t + {})/({}*t + {})", self.a, self.b, self.c, self.d)
    }
}

/// Möbius maps preserving a finite set of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutDescription {
    /// Every element of PGL₂ (empty set).
    FullPgl2,
    /// `h⁻¹ ∘ (t ↦ a·t + b) ∘ h` with `h(point) = ∞`.
    AffineFamily { point: P1Point, conjugator: MobiusMap },
    /// Maps fixing both points, `h⁻¹ ∘ (t ↦ a·t) ∘ h`, plus the coset of
    /// `swap = h⁻¹ ∘ (t ↦ 1/t) ∘ h` exchanging them; `h` sends the pair to `0, ∞`.
    TorusFamily { points: [P1Point; 2], conjugator: MobiusMap, swap: MobiusMap },
    /// Finite stabilizer, listed exhaustively.
    Finite(Vec<MobiusMap>),
}

impl AutDescription {
    /// A member of the two-point family: `h⁻¹ ∘ (t ↦ λ·t) ∘ h`.
    pub fn torus_member(conjugator: &MobiusMap, lambda: GaussianRational) -> Result<MobiusMap> {
        let core = MobiusMap::scaling(lambda)?;
        Ok(conjugator.inverse().compose(&core).compose(conjugator))
    }

    pub fn affine_member(
        conjugator: &MobiusMap,
        lambda: GaussianRational,
        mu: GaussianRational,
    ) -> Result<MobiusMap> {
        let core = MobiusMap::affine(lambda, mu)?;
        Ok(conjugator.inverse().compose(&core).compose(conjugator))
    }
}

/// A map sending `p ↦ 0`, `q ↦ ∞`.
fn two_point_frame(p: &P1Point, q: &P1Point) -> MobiusMap {
    use P1Point::*;
    let one = GaussianRational::one();
    let zero = GaussianRational::zero();
    let m = match (p, q) {
        (Finite(x), Infinity) => MobiusMap::new(one, -x, zero, GaussianRational::one()),
        (Infinity, Finite(y)) => MobiusMap::new(zero, one, GaussianRational::one(), -y),
        (Finite(x), Finite(y)) => MobiusMap::new(one.clone(), -x, one, -y),
        (Infinity, Infinity) => unreachable!("distinct points"),
    };
    m.expect("distinct points give an invertible frame")
}

/// Setwise stabilizer of `set` in PGL₂(ℚ(i)).
pub fn mobius_stabilizer(set: &BTreeSet<P1Point>) -> AutDescription {
    let pts: Vec<&P1Point> = set.iter().collect();
    match pts.len() {
        0 => AutDescription::FullPgl2,
        1 => {
            let conjugator = match pts[0] {
                P1Point::Infinity => MobiusMap::identity(),
                P1Point::Finite(x) => MobiusMap::new(
                    GaussianRational::zero(),
                    GaussianRational::one(),
                    GaussianRational::one(),
                    -x,
                )
                .expect("invertible"),
            };
            AutDescription::AffineFamily { point: pts[0].clone(), conjugator }
        }
        2 => {
            let h = two_point_frame(pts[0], pts[1]);
            let inv = MobiusMap::from_ints(0, 1, 1, 0).expect("invertible");
            let swap = h.inverse().compose(&inv).compose(&h);
            AutDescription::TorusFamily {
                points: [pts[0].clone(), pts[1].clone()],
                conjugator: h,
                swap,
            }
        }
        _ => {
            // m = g⁻¹ ∘ f preserves the set iff g maps it onto f(set); both
            // sides are compared in the standard frame before composing.
            let f = MobiusMap::to_standard_frame(pts[0], pts[1], pts[2]).expect("distinct points");
            let framed: BTreeSet<P1Point> = pts.iter().map(|p| f.apply(p)).collect();
            let mut found = BTreeSet::new();
            for (i, x) in pts.iter().enumerate() {
                for (j, y) in pts.iter().enumerate() {
                    for (k, z) in pts.iter().enumerate() {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let g = MobiusMap::to_standard_frame(x, y, z).expect("distinct points");
                        if pts.iter().all(|p| framed.contains(&g.apply(p))) {
                            found.insert(g.inverse().compose(&f));
                        }
                    }
                }
            }
            AutDescription::Finite(found.into_iter().collect())
        }
    }
}

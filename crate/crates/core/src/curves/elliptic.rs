//! Elliptic curves `y² = x³ + a·x + b` over ℚ: chord–tangent group law,
//! rational torsion by Lutz–Nagell, and the automorphisms `P ↦ ±P + t`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::scalar::{fmt_rational, parse_rational, q, Q};

/// Mazur: rational torsion points have order at most 12.
const MAX_TORSION_ORDER: usize = 12;
/// Largest |value| we factor by trial division.
const FACTOR_LIMIT: u128 = 1 << 60;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllipticCurve {
    a: Q,
    b: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ECPoint {
    /// The neutral element O.
    Infinity,
    Affine { x: Q, y: Q },
}

impl ECPoint {
    pub fn affine(x: Q, y: Q) -> Self {
        Self::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::Affine { x: q(x), y: q(y) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// Parses `O` or `(x,y)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "O" {
            return Ok(Self::Infinity);
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| CoreError::Parse(format!("invalid elliptic point '{s}'")))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| CoreError::Parse(format!("invalid elliptic point '{s}'")))?;
        Ok(Self::Affine { x: parse_rational(x)?, y: parse_rational(y)? })
    }
}

impl fmt::Display for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => f.write_str("O"),
            Self::Affine { x, y } => write!(f, "({},{})", fmt_rational(x), fmt_rational(y)),
        }
    }
}

impl EllipticCurve {
    pub fn new(a: Q, b: Q) -> Result<Self> {
        let c = Self { a, b };
        if c.discriminant().is_zero() {
            return Err(CoreError::SingularCurve);
        }
        Ok(c)
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(q(a), q(b))
    }

    pub fn a(&self) -> &Q {
        &self.a
    }

    pub fn b(&self) -> &Q {
        &self.b
    }

    /// `4a³ + 27b²`.
    pub fn discriminant(&self) -> Q {
        q(4) * &self.a * &self.a * &self.a + q(27) * &self.b * &self.b
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => y * y == x * x * x + &self.a * x + &self.b,
        }
    }

    fn check(&self, p: &ECPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(CoreError::PointNotOnCurve(p.to_string()))
        }
    }

    pub fn neg(&self, p: &ECPoint) -> ECPoint {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::Affine { x: x.clone(), y: -y.clone() },
        }
    }

    /// Chord–tangent addition; both points must lie on the curve.
    pub fn add(&self, p: &ECPoint, r: &ECPoint) -> Result<ECPoint> {
        self.check(p)?;
        self.check(r)?;
        Ok(self.add_unchecked(p, r))
    }

    fn add_unchecked(&self, p: &ECPoint, r: &ECPoint) -> ECPoint {
        let (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) = (p, r) else {
            return if p.is_infinity() { r.clone() } else { p.clone() };
        };
        let slope = if x1 != x2 {
            (y2 - y1) / (x2 - x1)
        } else if y1 == y2 && !y1.is_zero() {
            (q(3) * x1 * x1 + &self.a) / (q(2) * y1)
        } else {
            return ECPoint::Infinity;
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = &slope * (x1 - &x3) - y1;
        ECPoint::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &ECPoint, r: &ECPoint) -> Result<ECPoint> {
        self.add(p, &self.neg(r))
    }

    /// `[k]·p` for any integer `k`.
    pub fn mul(&self, k: &BigInt, p: &ECPoint) -> Result<ECPoint> {
        self.check(p)?;
        let base = if k.is_negative() { self.neg(p) } else { p.clone() };
        let mut k = k.abs();
        let mut acc = ECPoint::Infinity;
        let mut pow = base;
        while !k.is_zero() {
            if k.is_odd() {
                acc = self.add_unchecked(&acc, &pow);
            }
            pow = self.add_unchecked(&pow, &pow);
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn mul_i64(&self, k: i64, p: &ECPoint) -> Result<ECPoint> {
        self.mul(&BigInt::from(k), p)
    }

    /// Order of `p` if it is at most 12, else `None` (then `p` has infinite order).
    pub fn torsion_order(&self, p: &ECPoint) -> Result<Option<usize>> {
        self.check(p)?;
        let mut acc = p.clone();
        for n in 1..=MAX_TORSION_ORDER {
            if acc.is_infinity() {
                return Ok(Some(n));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(None)
    }

    /// Smallest `u > 0` with `a·u⁴` and `b·u⁶` integral.
    fn integral_scale(&self) -> BigInt {
        let mut u = BigInt::one();
        let need = |u: &BigInt| {
            let u2 = u * u;
            let u4 = &u2 * &u2;
            (&self.a * Q::from_integer(u4.clone())).is_integer()
                && (&self.b * Q::from_integer(&u4 * &u2)).is_integer()
        };
        // The denominators' radical-product bound: u = lcm of denominators always works.
        let bound = self.a.denom().lcm(self.b.denom());
        while !need(&u) {
            u += 1;
            if u > bound {
                return bound;
            }
        }
        u
    }

    /// All rational torsion points, including O, in ascending order.
    ///
    /// Rescales to an integral model `Y² = X³ + a u⁴ X + b u⁶`, enumerates
    /// integral points with `Y = 0` or `Y² | 4A³ + 27B²`, and keeps those of
    /// order at most 12.
    pub fn torsion_points(&self) -> Result<Vec<ECPoint>> {
        let u = self.integral_scale();
        let u2 = &u * &u;
        let u3 = &u2 * &u;
        let ai = (&self.a * Q::from_integer(&u2 * &u2)).to_integer();
        let bi = (&self.b * Q::from_integer(&u3 * &u3)).to_integer();
        let model = EllipticCurve::new(Q::from_integer(ai.clone()), Q::from_integer(bi.clone()))?;
        let disc = model.discriminant().to_integer();

        let mut ys: Vec<BigInt> = vec![BigInt::zero()];
        for d in divisors(&disc)? {
            if (&disc % (&d * &d)).is_zero() {
                ys.push(d);
            }
        }

        let mut found = BTreeSet::from([ECPoint::Infinity]);
        for y in ys {
            // X³ + A X + (B − Y²) = 0 has integer roots only among divisors of B − Y².
            let c = &bi - &y * &y;
            let candidates: Vec<BigInt> = if c.is_zero() {
                let mut v = vec![BigInt::zero()];
                if !ai.is_positive() {
                    let r = (-&ai).sqrt();
                    if &r * &r == -&ai {
                        v.push(r.clone());
                        v.push(-r);
                    }
                }
                v
            } else {
                divisors(&c)?.into_iter().flat_map(|d| [d.clone(), -d]).collect()
            };
            for x in candidates {
                if &x * &x * &x + &ai * &x + &c != BigInt::zero() {
                    continue;
                }
                for yy in [y.clone(), -y.clone()] {
                    let p = ECPoint::Affine { x: Q::from_integer(x.clone()), y: Q::from_integer(yy) };
                    if model.torsion_order(&p)?.is_some() {
                        found.insert(p);
                    }
                }
            }
        }

        let u2q = Q::from_integer(u2);
        let u3q = Q::from_integer(u3);
        let mut out: Vec<ECPoint> = found
            .into_iter()
            .map(|p| match p {
                ECPoint::Infinity => ECPoint::Infinity,
                ECPoint::Affine { x, y } => ECPoint::Affine { x: x / &u2q, y: y / &u3q },
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Points of E(ℚ) killed by `g` (all torsion when `g = 0` is excluded by callers).
    pub fn torsion_killed_by(&self, g: &BigInt) -> Result<Vec<ECPoint>> {
        let mut out = Vec::new();
        for p in self.torsion_points()? {
            if self.mul(g, &p)?.is_infinity() {
                out.push(p);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", fmt_rational(&self.a), fmt_rational(&self.b))
    }
}

/// Positive divisors of a nonzero integer, by trial division.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let m = n
        .abs()
        .to_u128()
        .filter(|&m| m > 0 && m <= FACTOR_LIMIT)
        .ok_or_else(|| CoreError::TorsionSearchTooLarge(format!("cannot factor {n}")))?;
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut rest = m;
    let mut p = 2u128;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut divs = vec![1u128];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    Ok(divs.into_iter().map(BigInt::from).collect())
}

/// `P ↦ ±P + t` on a fixed curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EcAutomorphism {
    pub negate: bool,
    pub translation: ECPoint,
}

impl EcAutomorphism {
    pub fn identity() -> Self {
        Self { negate: false, translation: ECPoint::Infinity }
    }

    pub fn translation(t: ECPoint) -> Self {
        Self { negate: false, translation: t }
    }

    /// `[−1]`.
    pub fn negation() -> Self {
        Self { negate: true, translation: ECPoint::Infinity }
    }

    pub fn apply(&self, curve: &EllipticCurve, p: &ECPoint) -> Result<ECPoint> {
        let base = if self.negate { curve.neg(p) } else { p.clone() };
        curve.add(&base, &self.translation)
    }

    pub fn inverse(&self, curve: &EllipticCurve) -> Self {
        // P = ε(Q − t) = εQ − εt
        let t = if self.negate { self.translation.clone() } else { curve.neg(&self.translation) };
        Self { negate: self.negate, translation: t }
    }

    /// `self ∘ other`.
    pub fn compose(&self, curve: &EllipticCurve, other: &Self) -> Result<Self> {
        let moved = if self.negate { curve.neg(&other.translation) } else { other.translation.clone() };
        Ok(Self {
            negate: self.negate != other.negate,
            translation: curve.add(&moved, &self.translation)?,
        })
    }
}

impl fmt::Display for EcAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negate { "-" } else { "" };
        write!(f, "P -> {sign}P + {}", self.translation)
    }
}

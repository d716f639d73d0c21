//! Exact rational convex geometry in V-representation: pointed cones,
//! polyhedra (convex hull of vertices plus a tail cone), Minkowski sums and
//! translate detection.
//!
//! Every constructor canonicalizes, so structural equality of values is
//! equality of the underlying point sets.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::lp::nonnegative_solution;
use crate::scalar::{fmt_rational, q, Q};

/// A point of N_ℚ = ℚⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Q>);

impl RationalVector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Q::zero(); dim])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| q(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a.clone()).collect())
    }

    /// Integer coordinates, if every entry has denominator one.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|x| {
                if x.is_integer() {
                    i64::try_from(x.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// True iff every coordinate of `v` is an integer.
pub fn is_integral(v: &RationalVector) -> bool {
    v.0.iter().all(|x| x.is_integer())
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Pointed rational polyhedral cone, stored by its primitive, irredundant,
/// lexicographically sorted ray generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    dim: usize,
    rays: Vec<Vec<i64>>,
}

impl Cone {
    /// The zero cone {0} in ℚⁿ.
    pub fn zero(dim: usize) -> Self {
        Self { dim, rays: Vec::new() }
    }

    pub fn new(dim: usize, raw_rays: &[Vec<i64>]) -> Result<Self> {
        canonicalize_cone(dim, raw_rays)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    fn rational_rays(&self) -> Vec<RationalVector> {
        self.rays.iter().map(|r| RationalVector::from_ints(r)).collect()
    }
}

fn primitive(v: &[i64]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    (g != 0).then(|| v.iter().map(|&x| x / g).collect())
}

/// Column-major system `Σ x_j · cols[j] = target`.
fn columns_to_rows(cols: &[RationalVector], extra_row: Option<&[Q]>) -> Vec<Vec<Q>> {
    let dim = cols.first().map_or(0, RationalVector::dim);
    let mut rows: Vec<Vec<Q>> = (0..dim)
        .map(|i| cols.iter().map(|c| c.0[i].clone()).collect())
        .collect();
    if let Some(extra) = extra_row {
        rows.push(extra.to_vec());
    }
    rows
}

/// Canonical form of the cone generated by `raw_rays` in ℚ^`dim`.
pub fn canonicalize_cone(dim: usize, raw_rays: &[Vec<i64>]) -> Result<Cone> {
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for r in raw_rays {
        if r.len() != dim {
            return Err(CoreError::DimensionMismatch { expected: dim, found: r.len() });
        }
        if let Some(p) = primitive(r) {
            rays.push(p);
        }
    }
    rays.sort();
    rays.dedup();

    let cone = Cone { dim, rays };
    if !cone.rays.is_empty() {
        // A line exists iff 0 is a nontrivial nonnegative combination.
        let gens = cone.rational_rays();
        let mut a = columns_to_rows(&gens, None);
        a.push(vec![Q::one(); gens.len()]);
        let mut b = vec![Q::zero(); dim];
        b.push(Q::one());
        if nonnegative_solution(&a, &b).is_some() {
            return Err(CoreError::NotPointed);
        }
    }

    let mut rays = cone.rays;
    let mut j = 0;
    while j < rays.len() {
        let others: Vec<RationalVector> = rays
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, r)| RationalVector::from_ints(r))
            .collect();
        let redundant = !others.is_empty() && {
            let a = columns_to_rows(&others, None);
            nonnegative_solution(&a, &RationalVector::from_ints(&rays[j]).0).is_some()
        };
        if redundant {
            rays.remove(j);
        } else {
            j += 1;
        }
    }
    Ok(Cone { dim, rays })
}

/// conv(vertices) + tail, with a pointed tail cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyhedron {
    vertices: Vec<RationalVector>,
    tail: Cone,
}

impl Polyhedron {
    pub fn new(vertices: Vec<RationalVector>, tail: Cone) -> Result<Self> {
        if vertices.is_empty() {
            return Err(CoreError::EmptyPolyhedron);
        }
        for v in &vertices {
            if v.dim() != tail.dim {
                return Err(CoreError::DimensionMismatch { expected: tail.dim, found: v.dim() });
            }
        }
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();

        let rays = tail.rational_rays();
        let mut j = 0;
        while j < vertices.len() && vertices.len() > 1 {
            let others: Vec<RationalVector> = vertices
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, v)| v.clone())
                .collect();
            let mut cols = others.clone();
            cols.extend(rays.iter().cloned());
            let mut convexity = vec![Q::one(); others.len()];
            convexity.extend(std::iter::repeat_n(Q::zero(), rays.len()));
            let a = columns_to_rows(&cols, Some(&convexity));
            let mut b = vertices[j].0.clone();
            b.push(Q::one());
            if nonnegative_solution(&a, &b).is_some() {
                vertices.remove(j);
            } else {
                j += 1;
            }
        }
        Ok(Self { vertices, tail })
    }

    /// The tail cone itself, as the polyhedron {0} + ω.
    pub fn from_cone(tail: &Cone) -> Self {
        Self { vertices: vec![RationalVector::zero(tail.dim)], tail: tail.clone() }
    }

    /// {v} + ω.
    pub fn translate_of_cone(v: RationalVector, tail: &Cone) -> Result<Self> {
        Self::new(vec![v], tail.clone())
    }

    pub fn dim(&self) -> usize {
        self.tail.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    /// Lexicographically least vertex; canonical order puts it first.
    pub fn lex_min_vertex(&self) -> &RationalVector {
        &self.vertices[0]
    }

    pub fn translate(&self, v: &RationalVector) -> Self {
        // Translation preserves irredundancy and lexicographic order.
        Self {
            vertices: self.vertices.iter().map(|w| w.add(v)).collect(),
            tail: self.tail.clone(),
        }
    }

    pub fn contains(&self, point: &RationalVector) -> bool {
        if point.dim() != self.dim() {
            return false;
        }
        let mut cols = self.vertices.clone();
        cols.extend(self.tail.rational_rays());
        let mut convexity = vec![Q::one(); self.vertices.len()];
        convexity.extend(std::iter::repeat_n(Q::zero(), self.tail.rays.len()));
        let a = columns_to_rows(&cols, Some(&convexity));
        let mut b = point.0.clone();
        b.push(Q::one());
        nonnegative_solution(&a, &b).is_some()
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "conv{{{}}}", verts.join(", "))?;
        if !self.tail.rays.is_empty() {
            let rays: Vec<String> = self.tail.rays.iter().map(|r| format!("{r:?}")).collect();
            write!(f, " + cone{{{}}}", rays.join(", "))?;
        }
        Ok(())
    }
}

pub fn minkowski_sum(p: &Polyhedron, q: &Polyhedron) -> Result<Polyhedron> {
    if p.dim() != q.dim() {
        return Err(CoreError::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let mut rays = p.tail.rays.clone();
    rays.extend(q.tail.rays.iter().cloned());
    let tail = canonicalize_cone(p.dim(), &rays)?;
    let sums = p
        .vertices
        .iter()
        .flat_map(|v| q.vertices.iter().map(move |w| v.add(w)))
        .collect();
    Polyhedron::new(sums, tail)
}

/// The vector `v` with `q = p + v`, if `q` is a translate of `p`.
pub fn translate_of(p: &Polyhedron, q: &Polyhedron) -> Option<RationalVector> {
    if p.tail != q.tail || p.vertices.len() != q.vertices.len() {
        return None;
    }
    let v = q.lex_min_vertex().sub(p.lex_min_vertex());
    (p.translate(&v) == *q).then_some(v)
}

//! Exact rational polyhedral cones: canonical generator and facet
//! descriptions, containment, intersection, interior-overlap tests and
//! simpliciality. All cones are pointed (or {0}); cones containing a line
//! are rejected at construction.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::IntVector;
use crate::linalg;
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("cone contains a line (not pointed)")]
    NotPointed,
    #[error("expected a ray, got a cone of dimension {dim}")]
    NotARay { dim: usize },
    #[error("expected a full-dimensional cone, got dimension {dim}")]
    NotFullDimensional { dim: usize },
}

/// A point of N_R with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RatVector(
            coords
                .iter()
                .map(|&v| Rat::from_integer(Int::from(v)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    /// Scale by the least common denominator to the primitive integer
    /// vector on the same ray (the zero vector maps to zero).
    pub fn to_primitive_int(&self) -> IntVector {
        let lcm = self
            .0
            .iter()
            .fold(Int::from(1), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<Int> = self
            .0
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        IntVector::new(scaled).primitive()
    }
}

impl From<&IntVector> for RatVector {
    fn from(v: &IntVector) -> Self {
        RatVector(v.to_rational())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A pointed rational polyhedral cone in canonical form: `generators` are
/// the primitive extreme-ray generators sorted lexicographically, `facets`
/// the inward primitive integer facet normals (lying in the span of the
/// cone). A point belongs to the cone iff it lies in the span and satisfies
/// every facet inequality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    ambient_dim: usize,
    dim: usize,
    generators: Vec<IntVector>,
    facets: Vec<IntVector>,
}

impl Cone {
    /// The zero cone {0}.
    pub fn zero(ambient_dim: usize) -> Self {
        Cone {
            ambient_dim,
            dim: 0,
            generators: Vec::new(),
            facets: Vec::new(),
        }
    }

    /// Canonicalize a generating set: primitive extreme rays and facet
    /// normals are computed by exact double description at desk scale.
    pub fn from_generators(gens: &[IntVector]) -> Result<Self, ConeError> {
        if gens.is_empty() {
            return Err(ConeError::EmptyGenerators);
        }
        let ambient_dim = gens[0].dim();
        for g in gens {
            if g.dim() != ambient_dim {
                return Err(ConeError::DimensionMismatch {
                    expected: ambient_dim,
                    found: g.dim(),
                });
            }
        }
        let prims: BTreeSet<IntVector> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        let prims: Vec<IntVector> = prims.into_iter().collect();
        if prims.is_empty() {
            return Ok(Cone::zero(ambient_dim));
        }
        let rows: Vec<Vec<Int>> = prims.iter().map(|v| v.coords().to_vec()).collect();
        let dim = linalg::rational_rank(&rows);
        // Independent spanning subset, used to anchor facet normals in the
        // span of the cone.
        let mut span_basis: Vec<Vec<Int>> = Vec::new();
        for row in &rows {
            if span_basis.len() == dim {
                break;
            }
            let mut cand = span_basis.clone();
            cand.push(row.clone());
            if linalg::rational_rank(&cand) > span_basis.len() {
                span_basis = cand;
            }
        }
        let facets = facet_normals(&prims, &span_basis, dim);
        let facet_rows: Vec<Vec<Int>> = facets.iter().map(|v| v.coords().to_vec()).collect();
        if linalg::rational_rank(&facet_rows) != dim {
            return Err(ConeError::NotPointed);
        }
        // Extreme rays: generators lying on dim-1 independent facets.
        let mut extreme: Vec<IntVector> = prims
            .into_iter()
            .filter(|g| {
                let active: Vec<Vec<Int>> = facets
                    .iter()
                    .filter(|n| n.dot(g).is_zero())
                    .map(|n| n.coords().to_vec())
                    .collect();
                linalg::rational_rank(&active) == dim - 1
            })
            .collect();
        extreme.sort();
        Ok(Cone {
            ambient_dim,
            dim,
            generators: extreme,
            facets,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn facets(&self) -> &[IntVector] {
        &self.facets
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    /// True iff the number of extreme rays equals the dimension.
    pub fn is_simplicial(&self) -> bool {
        self.generators.len() == self.dim
    }

    /// The unique monoid generator of `Z^d ∩ ray`.
    pub fn primitive_generator(&self) -> Result<IntVector, ConeError> {
        if self.dim != 1 {
            return Err(ConeError::NotARay { dim: self.dim });
        }
        Ok(self.generators[0].clone())
    }

    /// Integer equations cutting out the linear span of the cone.
    pub(crate) fn span_equations(&self) -> Vec<IntVector> {
        if self.dim == self.ambient_dim {
            return Vec::new();
        }
        if self.generators.is_empty() {
            return linalg::identity(self.ambient_dim)
                .into_iter()
                .map(IntVector::new)
                .collect();
        }
        let rows: Vec<Vec<Int>> = self.generators.iter().map(|v| v.coords().to_vec()).collect();
        linalg::right_kernel(&rows)
            .into_iter()
            .map(IntVector::new)
            .collect()
    }

    pub(crate) fn contains_int(&self, v: &IntVector) -> bool {
        debug_assert_eq!(v.dim(), self.ambient_dim);
        if self.dim == 0 {
            return v.is_zero();
        }
        if self.facets.iter().any(|n| n.dot(v).is_negative()) {
            return false;
        }
        self.span_equations().iter().all(|e| e.dot(v).is_zero())
    }

    /// Facet-inequality plus span membership test.
    pub fn contains(&self, x: &RatVector) -> Result<bool, ConeError> {
        if x.dim() != self.ambient_dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.dim(),
            });
        }
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.contains_int(&x.to_primitive_int()))
    }

    /// True iff every generator of `other` lies in `self`.
    pub fn contains_cone(&self, other: &Cone) -> Result<bool, ConeError> {
        if other.ambient_dim != self.ambient_dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(other.generators.iter().all(|g| self.contains_int(g)))
    }

    /// Canonical intersection, computed from the union of the facet
    /// descriptions followed by extreme-ray extraction.
    pub fn intersect(&self, other: &Cone) -> Result<Cone, ConeError> {
        if other.ambient_dim != self.ambient_dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut ineqs: BTreeSet<IntVector> = self.facets.iter().cloned().collect();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.span_equations();
        eqs.extend(other.span_equations());
        let ineqs: Vec<IntVector> = ineqs.into_iter().collect();
        let rays = rays_from_halfspaces(self.ambient_dim, &ineqs, &eqs);
        if rays.is_empty() {
            return Ok(Cone::zero(self.ambient_dim));
        }
        Cone::from_generators(&rays)
    }

    /// True iff the interiors of two full-dimensional cones meet, decided
    /// by the dimension of the intersection cone.
    pub fn interiors_overlap(&self, other: &Cone) -> Result<bool, ConeError> {
        if !self.is_full_dimensional() {
            return Err(ConeError::NotFullDimensional { dim: self.dim });
        }
        if !other.is_full_dimensional() {
            return Err(ConeError::NotFullDimensional { dim: other.dim });
        }
        Ok(self.intersect(other)?.dim() == self.ambient_dim)
    }

    /// True iff `self` is a face of `sup`: the subset of `sup`'s generators
    /// lying on the supporting hyperplanes active at `self` recovers `self`.
    pub fn is_face_of(&self, sup: &Cone) -> bool {
        if self.ambient_dim != sup.ambient_dim {
            return false;
        }
        if !sup.contains_cone(self).unwrap_or(false) {
            return false;
        }
        let active: Vec<&IntVector> = sup
            .facets
            .iter()
            .filter(|n| self.generators.iter().all(|g| n.dot(g).is_zero()))
            .collect();
        let face_gens: Vec<IntVector> = sup
            .generators
            .iter()
            .filter(|g| active.iter().all(|n| n.dot(g).is_zero()))
            .cloned()
            .collect();
        let face = if face_gens.is_empty() {
            Cone::zero(self.ambient_dim)
        } else {
            Cone::from_generators(&face_gens).expect("faces of a pointed cone are pointed")
        };
        face == *self
    }

    /// All faces of the cone (including itself and {0}), as the closure of
    /// facet-hyperplane sections.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: BTreeSet<Cone> = BTreeSet::new();
        let mut queue = vec![self.clone()];
        seen.insert(self.clone());
        while let Some(face) = queue.pop() {
            for n in &self.facets {
                if face.generators.iter().all(|g| n.dot(g).is_zero()) {
                    continue; // already inside this hyperplane
                }
                let sub_gens: Vec<IntVector> = face
                    .generators
                    .iter()
                    .filter(|g| n.dot(g).is_zero())
                    .cloned()
                    .collect();
                let sub = if sub_gens.is_empty() {
                    Cone::zero(self.ambient_dim)
                } else {
                    Cone::from_generators(&sub_gens).expect("face of pointed cone")
                };
                if seen.insert(sub.clone()) {
                    queue.push(sub);
                }
            }
        }
        seen.into_iter().collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Facet normals of `cone(prims)` inside its span: for each (dim-1)-subset
/// of generators spanning a hyperplane of the span, the normal anchored in
/// the span with all generators on its non-negative side.
fn facet_normals(prims: &[IntVector], span_basis: &[Vec<Int>], dim: usize) -> Vec<IntVector> {
    if dim == 0 {
        return Vec::new();
    }
    let mut found: BTreeSet<IntVector> = BTreeSet::new();
    let mut subset = Vec::with_capacity(dim.saturating_sub(1));
    enumerate_subsets(prims.len(), dim - 1, &mut subset, &mut |chosen| {
        // normal n = z * span_basis with <n, s> = 0 for s in the subset
        let constraint: Vec<Vec<Int>> = chosen
            .iter()
            .map(|&i| {
                span_basis
                    .iter()
                    .map(|b| {
                        b.iter()
                            .zip(prims[i].coords())
                            .map(|(x, y)| x * y)
                            .sum::<Int>()
                    })
                    .collect()
            })
            .collect();
        // constraint is |S| x dim acting on z from the right: z * M^T = 0;
        // the empty subset (dim 1) leaves all of the span
        let kernel = if constraint.is_empty() {
            linalg::identity(span_basis.len())
        } else {
            linalg::left_kernel(&linalg::transpose(&constraint))
        };
        if kernel.len() != 1 {
            return;
        }
        let normal = IntVector::new(linalg::mat_mul(&kernel, span_basis)[0].clone()).primitive();
        if normal.is_zero() {
            return;
        }
        let mut pos = false;
        let mut neg = false;
        for g in prims {
            match normal.dot(g).sign() {
                num_bigint::Sign::Plus => pos = true,
                num_bigint::Sign::Minus => neg = true,
                num_bigint::Sign::NoSign => {}
            }
        }
        if !neg {
            found.insert(normal);
        } else if !pos {
            found.insert(normal.neg());
        }
    });
    found.into_iter().collect()
}

fn enumerate_subsets(
    n: usize,
    size: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == size {
        visit(current);
        return;
    }
    let start = current.last().map_or(0, |&l| l + 1);
    let remaining = size - current.len();
    if start + remaining > n {
        return;
    }
    for i in start..=(n - remaining) {
        current.push(i);
        enumerate_subsets(n, size, current, visit);
        current.pop();
    }
}

/// Extreme rays of `{ x : <n,x> >= 0 for n in ineqs, <e,x> = 0 for e in eqs }`,
/// assuming the region is pointed. Candidates are kernel lines of
/// (dim-1)-rank subsets of the constraints.
pub(crate) fn rays_from_halfspaces(
    dim: usize,
    ineqs: &[IntVector],
    eqs: &[IntVector],
) -> Vec<IntVector> {
    let eq_rows: Vec<Vec<Int>> = eqs.iter().map(|e| e.coords().to_vec()).collect();
    let eq_rank = if eq_rows.is_empty() {
        0
    } else {
        linalg::rational_rank(&eq_rows)
    };
    if eq_rank >= dim {
        return Vec::new();
    }
    let mut rays: BTreeSet<IntVector> = BTreeSet::new();
    let max_extra = dim - 1 - eq_rank.min(dim - 1);
    for size in 0..=max_extra.min(ineqs.len()) {
        let mut subset = Vec::with_capacity(size);
        enumerate_subsets(ineqs.len(), size, &mut subset, &mut |chosen| {
            let mut rows = eq_rows.clone();
            for &i in chosen {
                rows.push(ineqs[i].coords().to_vec());
            }
            if linalg::rational_rank(&rows) != dim - 1 {
                return;
            }
            let kernel = if rows.is_empty() {
                linalg::identity(dim)
            } else {
                linalg::right_kernel(&rows)
            };
            if kernel.len() != 1 {
                return;
            }
            let v = IntVector::new(kernel[0].clone()).primitive();
            let feasible = |w: &IntVector| {
                ineqs.iter().all(|n| !n.dot(w).is_negative())
                    && eqs.iter().all(|e| e.dot(w).is_zero())
            };
            if feasible(&v) {
                rays.insert(v);
            } else {
                let nv = v.neg();
                if feasible(&nv) {
                    rays.insert(nv);
                }
            }
        });
    }
    rays.into_iter().collect()
}

/// Exact Fourier-Motzkin feasibility of `{ x : <n,x> >= 1 for all n }`,
/// i.e. strict interior feasibility of the halfspace system.
pub(crate) fn strictly_feasible(dim: usize, normals: &[IntVector]) -> bool {
    // rows: (coeffs, rhs) meaning coeffs . x >= rhs
    let mut rows: Vec<(Vec<Rat>, Rat)> = normals
        .iter()
        .map(|n| (n.to_rational(), Rat::from_integer(Int::from(1))))
        .collect();
    for var in 0..dim {
        let mut pos: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut neg: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut rest: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for (coeffs, rhs) in rows.into_iter() {
            if coeffs[var].is_positive() {
                pos.push((coeffs, rhs));
            } else if coeffs[var].is_negative() {
                neg.push((coeffs, rhs));
            } else {
                rest.push((coeffs, rhs));
            }
        }
        for (pc, pr) in &pos {
            for (nc, nr) in &neg {
                // |n_v| * p + p_v * n eliminates x_var
                let a = -nc[var].clone();
                let b = pc[var].clone();
                let coeffs: Vec<Rat> = pc
                    .iter()
                    .zip(nc.iter())
                    .map(|(p, n)| &a * p + &b * n)
                    .collect();
                let rhs = &a * pr + &b * nr;
                rest.push((coeffs, rhs));
            }
        }
        rows = rest;
        rows.retain(|(coeffs, rhs)| {
            if coeffs.iter().all(|c| c.is_zero()) {
                // constant constraint: keep only if violated
                rhs.is_positive()
            } else {
                true
            }
        });
        if rows.iter().any(|(coeffs, rhs)| {
            coeffs.iter().all(|c| c.is_zero()) && rhs.is_positive()
        }) {
            return false;
        }
        rows.sort();
        rows.dedup();
    }
    rows.iter()
        .all(|(_, rhs)| !rhs.is_positive())
}

//! Complete and full-dimensional rational fans: validity, completeness,
//! refinement, star subdivision, placing triangulation, overlay, and the
//! hyperplane-arrangement fan backing coloring realization.
//!
//! Fans are stored by their maximal cones only (all full-dimensional,
//! canonical, sorted); faces are computed on demand and cached.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cone::{rays_from_halfspaces, strictly_feasible, Cone, ConeError, RatVector};
use crate::lattice::IntVector;


#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a fan needs at least one maximal cone")]
    Empty,
    #[error("maximal cone {cone} is not full-dimensional")]
    NotFullDimensional { cone: Cone },
    #[error("cones {first} and {second} do not intersect in a common face")]
    NotAFan { first: Cone, second: Cone },
    #[error("fan is not complete")]
    NotComplete,
    #[error("point {point} lies outside the support of the fan")]
    OutsideSupport { point: IntVector },
    #[error("star subdivision center must be nonzero")]
    ZeroCenter,
    #[error("arrangement hyperplanes do not span the ambient space")]
    DegenerateArrangement,
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// A fan of full-dimensional pointed cones, represented by its sorted list
/// of maximal cones.
pub struct Fan {
    ambient_dim: usize,
    max_cones: Vec<Cone>,
    faces: OnceLock<Vec<Cone>>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            ambient_dim: self.ambient_dim,
            max_cones: self.max_cones.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl std::hash::Hash for Fan {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.max_cones.hash(state);
    }
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fan(d={}, {:?})", self.ambient_dim, self.max_cones)
    }
}

impl Fan {
    /// Build a fan from maximal cones, checking the pairwise-face axiom.
    pub fn new(ambient_dim: usize, cones: Vec<Cone>) -> Result<Self, FanError> {
        let fan = Fan::new_unchecked(ambient_dim, cones)?;
        fan.validate()?;
        Ok(fan)
    }

    /// Construction without the quadratic pairwise check, for internal
    /// operations whose output is a fan by construction.
    pub(crate) fn new_unchecked(ambient_dim: usize, mut cones: Vec<Cone>) -> Result<Self, FanError> {
        if cones.is_empty() {
            return Err(FanError::Empty);
        }
        for c in &cones {
            if c.ambient_dim() != ambient_dim {
                return Err(FanError::DimensionMismatch {
                    expected: ambient_dim,
                    found: c.ambient_dim(),
                });
            }
            if !c.is_full_dimensional() {
                return Err(FanError::NotFullDimensional { cone: c.clone() });
            }
        }
        cones.sort();
        cones.dedup();
        Ok(Fan {
            ambient_dim,
            max_cones: cones,
            faces: OnceLock::new(),
        })
    }

    /// Re-check the pairwise-face invariant, naming the offending pair.
    pub fn validate(&self) -> Result<(), FanError> {
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                let a = &self.max_cones[i];
                let b = &self.max_cones[j];
                let meet = a.intersect(b)?;
                if !meet.is_face_of(a) || !meet.is_face_of(b) {
                    return Err(FanError::NotAFan {
                        first: a.clone(),
                        second: b.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    /// Deduplicated primitive ray generators of the fan, sorted.
    pub fn rays(&self) -> Vec<IntVector> {
        let mut rays: BTreeSet<IntVector> = BTreeSet::new();
        for c in &self.max_cones {
            rays.extend(c.generators().iter().cloned());
        }
        rays.into_iter().collect()
    }

    /// All faces of all maximal cones (including {0}), computed on demand
    /// and cached.
    pub fn faces(&self) -> &[Cone] {
        self.faces.get_or_init(|| {
            let mut all: BTreeSet<Cone> = BTreeSet::new();
            for c in &self.max_cones {
                all.extend(c.faces());
            }
            all.into_iter().collect()
        })
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| c.is_simplicial())
    }

    /// Completeness through ridge pairing: a valid fan of full-dimensional
    /// pointed cones is complete iff every (d-1)-face of a maximal cone is
    /// shared by exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        let mut ridge_count: BTreeMap<Cone, usize> = BTreeMap::new();
        for c in &self.max_cones {
            for n in c.facets() {
                let gens: Vec<IntVector> = c
                    .generators()
                    .iter()
                    .filter(|g| n.dot(g).is_zero())
                    .cloned()
                    .collect();
                let ridge = if gens.is_empty() {
                    Cone::zero(self.ambient_dim)
                } else {
                    Cone::from_generators(&gens).expect("ridge of pointed cone")
                };
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        ridge_count.values().all(|&n| n == 2)
    }

    /// True iff some maximal cone contains the point.
    pub fn supports(&self, p: &IntVector) -> bool {
        self.max_cones.iter().any(|c| c.contains_int(p))
    }

    /// If every maximal cone of `self` is contained in a (necessarily
    /// unique) maximal cone of `coarse`, returns the cone map; `None`
    /// otherwise. Both fans must be complete.
    pub fn refines(&self, coarse: &Fan) -> Result<Option<Vec<usize>>, FanError> {
        if self.ambient_dim != coarse.ambient_dim {
            return Err(FanError::DimensionMismatch {
                expected: coarse.ambient_dim,
                found: self.ambient_dim,
            });
        }
        if !self.is_complete() || !coarse.is_complete() {
            return Err(FanError::NotComplete);
        }
        let mut map = Vec::with_capacity(self.max_cones.len());
        for fine in &self.max_cones {
            match coarse
                .max_cones
                .iter()
                .position(|c| c.contains_cone(fine).unwrap_or(false))
            {
                Some(idx) => map.push(idx),
                None => return Ok(None),
            }
        }
        Ok(Some(map))
    }

    /// The unique cone of the fan whose relative interior contains `x`.
    pub fn minimal_containing_cone(&self, x: &RatVector) -> Result<Cone, FanError> {
        if x.dim() != self.ambient_dim {
            return Err(FanError::DimensionMismatch {
                expected: self.ambient_dim,
                found: x.dim(),
            });
        }
        if x.is_zero() {
            return Ok(Cone::zero(self.ambient_dim));
        }
        let p = x.to_primitive_int();
        let Some(max) = self.max_cones.iter().find(|c| c.contains_int(&p)) else {
            return Err(FanError::OutsideSupport { point: p });
        };
        let active: Vec<&IntVector> = max
            .facets()
            .iter()
            .filter(|n| n.dot(&p).is_zero())
            .collect();
        let gens: Vec<IntVector> = max
            .generators()
            .iter()
            .filter(|g| active.iter().all(|n| n.dot(g).is_zero()))
            .cloned()
            .collect();
        if gens.is_empty() {
            return Ok(Cone::zero(self.ambient_dim));
        }
        Ok(Cone::from_generators(&gens).expect("face of pointed cone"))
    }

    /// Stellar subdivision at `p`: every maximal cone containing `p` is
    /// replaced by the joins of `p` with its facets not containing `p`.
    pub fn star_subdivide(&self, p: &IntVector) -> Result<Fan, FanError> {
        Ok(self.star_subdivide_with_parents(p)?.0)
    }

    /// Star subdivision that also reports, for each maximal cone of the
    /// result, the index of the input cone containing it.
    pub(crate) fn star_subdivide_with_parents(
        &self,
        p: &IntVector,
    ) -> Result<(Fan, Vec<usize>), FanError> {
        if p.dim() != self.ambient_dim {
            return Err(FanError::DimensionMismatch {
                expected: self.ambient_dim,
                found: p.dim(),
            });
        }
        if p.is_zero() {
            return Err(FanError::ZeroCenter);
        }
        if !self.supports(p) {
            return Err(FanError::OutsideSupport { point: p.clone() });
        }
        let new_ray = p.primitive();
        let mut pieces: Vec<(Cone, usize)> = Vec::new();
        for (idx, c) in self.max_cones.iter().enumerate() {
            if !c.contains_int(p) {
                pieces.push((c.clone(), idx));
                continue;
            }
            for n in c.facets() {
                if !n.dot(p).is_positive() {
                    continue; // facet contains p
                }
                let mut gens: Vec<IntVector> = c
                    .generators()
                    .iter()
                    .filter(|g| n.dot(g).is_zero())
                    .cloned()
                    .collect();
                gens.push(new_ray.clone());
                let piece = Cone::from_generators(&gens)?;
                debug_assert!(piece.is_full_dimensional());
                pieces.push((piece, idx));
            }
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        pieces.dedup_by(|a, b| a.0 == b.0);
        let parents: Vec<usize> = pieces.iter().map(|(_, idx)| *idx).collect();
        let cones: Vec<Cone> = pieces.into_iter().map(|(c, _)| c).collect();
        let fan = Fan::new_unchecked(self.ambient_dim, cones)?;
        Ok((fan, parents))
    }

    /// A simplicial refinement with the same ray set: each non-simplicial
    /// maximal cone is replaced by its placing triangulation (rays inserted
    /// in lexicographic order).
    pub fn triangulate(&self) -> Fan {
        let mut cones: Vec<Cone> = Vec::new();
        for c in &self.max_cones {
            if c.is_simplicial() {
                cones.push(c.clone());
            } else {
                cones.extend(placing_triangulation(c));
            }
        }
        Fan::new_unchecked(self.ambient_dim, cones).expect("triangulation yields a fan")
    }

    /// Common refinement: the full-dimensional pairwise intersections of
    /// the maximal cones of two complete fans.
    pub fn overlay(&self, other: &Fan) -> Result<Fan, FanError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(FanError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if !self.is_complete() || !other.is_complete() {
            return Err(FanError::NotComplete);
        }
        let mut cells: Vec<Cone> = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let meet = a.intersect(b)?;
                if meet.is_full_dimensional() {
                    cells.push(meet);
                }
            }
        }
        Fan::new_unchecked(self.ambient_dim, cells)
    }
}

/// Placing (pushing) triangulation of a pointed cone on its extreme rays,
/// inserted in the canonical sorted order. Adds no rays; every output cone
/// is simplicial of the same dimension.
fn placing_triangulation(cone: &Cone) -> Vec<Cone> {
    let rays = cone.generators();
    let mut inserted: Vec<IntVector> = Vec::new();
    let mut simplices: Vec<Vec<IntVector>> = Vec::new();
    for r in rays {
        if inserted.is_empty() {
            simplices.push(vec![r.clone()]);
            inserted.push(r.clone());
            continue;
        }
        let hull = Cone::from_generators(&inserted).expect("partial hull is pointed");
        let in_span = hull
            .span_equations()
            .iter()
            .all(|e| e.dot(r).is_zero());
        if !in_span {
            // dimension grows: cone over the existing triangulation
            for s in simplices.iter_mut() {
                s.push(r.clone());
            }
        } else {
            debug_assert!(!hull.contains_int(r), "extreme ray inside partial hull");
            let k = hull.dim();
            let mut new_simplices: Vec<Vec<IntVector>> = Vec::new();
            for n in hull.facets() {
                if !n.dot(r).is_negative() {
                    continue; // facet not visible from r
                }
                for s in &simplices {
                    let boundary: Vec<IntVector> = s
                        .iter()
                        .filter(|g| n.dot(g).is_zero())
                        .cloned()
                        .collect();
                    if boundary.len() == k - 1 {
                        let mut gens = boundary;
                        gens.push(r.clone());
                        new_simplices.push(gens);
                    }
                }
            }
            simplices.extend(new_simplices);
        }
        inserted.push(r.clone());
    }
    let mut out: Vec<Cone> = simplices
        .into_iter()
        .map(|gens| Cone::from_generators(&gens).expect("simplex cone"))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The fan obtained by subdividing N_R at each of the given hyperplanes
/// (inward normals up to sign). The normals must span the ambient space, so
/// that every full-dimensional sign cell is pointed.
pub(crate) fn arrangement_fan(
    ambient_dim: usize,
    normals: &[IntVector],
) -> Result<Fan, FanError> {
    let mut hyperplanes: BTreeSet<IntVector> = BTreeSet::new();
    for n in normals {
        if n.dim() != ambient_dim {
            return Err(FanError::DimensionMismatch {
                expected: ambient_dim,
                found: n.dim(),
            });
        }
        let p = n.primitive();
        if p.is_zero() {
            continue;
        }
        // canonical side: first nonzero coordinate positive
        let canon = match p.coords().iter().find(|v| !v.is_zero()) {
            Some(v) if v.is_negative() => p.neg(),
            _ => p,
        };
        hyperplanes.insert(canon);
    }
    let hyperplanes: Vec<IntVector> = hyperplanes.into_iter().collect();
    // cells are pointed only when the hyperplane normals span
    let rows: Vec<Vec<crate::Int>> = hyperplanes
        .iter()
        .map(|h| h.coords().to_vec())
        .collect();
    if crate::linalg::rational_rank(&rows) != ambient_dim {
        return Err(FanError::DegenerateArrangement);
    }
    // Split sign cells one hyperplane at a time, pruning cells without
    // interior via exact Fourier-Motzkin feasibility.
    let mut cells: Vec<Vec<IntVector>> = vec![Vec::new()];
    for h in &hyperplanes {
        let mut next: Vec<Vec<IntVector>> = Vec::new();
        for cell in cells {
            for side in [h.clone(), h.neg()] {
                let mut cand = cell.clone();
                cand.push(side);
                if strictly_feasible(ambient_dim, &cand) {
                    next.push(cand);
                }
            }
        }
        cells = next;
    }
    let mut cones: Vec<Cone> = Vec::new();
    for cell in &cells {
        let rays = rays_from_halfspaces(ambient_dim, cell, &[]);
        let cone = Cone::from_generators(&rays)?;
        if cone.is_full_dimensional() {
            cones.push(cone);
        }
    }
    Fan::new_unchecked(ambient_dim, cones)
}

//! Stacky fans for proper toric orbifolds: validation, cone sublattices,
//! stabilizer orders, and single-step stacky star subdivision.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cone::{Cone, ConeError};
use crate::fan::{Fan, FanError};
use crate::lattice::{IntVector, Sublattice};
use crate::Int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StackyError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("underlying fan is not complete")]
    NotComplete,
    #[error("cone {cone} is not simplicial")]
    NotSimplicial { cone: Cone },
    #[error("ray generator {generator} is a negative multiple of ray {ray}")]
    NegativeMultiple { ray: IntVector, generator: IntVector },
    #[error("ray generator {generator} does not lie on any ray of the fan")]
    NotOnRay { generator: IntVector },
    #[error("ray {ray} has no chosen generator")]
    MissingGenerator { ray: IntVector },
    #[error("ray {ray} has more than one chosen generator")]
    DuplicateGenerator { ray: IntVector },
    #[error("cone {cone} is not a cone of the fan")]
    ConeNotInFan { cone: Cone },
    #[error("stacky star subdivision requires a cone of dimension at least 2, got {dim}")]
    CenterTooSmall { dim: usize },
}

/// A stacky fan: a complete simplicial fan together with a chosen integral
/// generator on each ray. Rays are keyed by their primitive generator and
/// the chosen generator is stored as its positive integer multiple, which
/// makes the positive-multiple invariant structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StackyFan {
    fan: Fan,
    multiples: BTreeMap<IntVector, Int>,
}

impl StackyFan {
    /// Validate and build a stacky fan from a fan and one chosen generator
    /// per ray. Violations name the offending ray.
    pub fn new(fan: Fan, ray_generators: &[IntVector]) -> Result<Self, StackyError> {
        if !fan.is_complete() {
            return Err(StackyError::NotComplete);
        }
        if let Some(bad) = fan.max_cones().iter().find(|c| !c.is_simplicial()) {
            return Err(StackyError::NotSimplicial { cone: bad.clone() });
        }
        let rays = fan.rays();
        let mut multiples: BTreeMap<IntVector, Int> = BTreeMap::new();
        for gen in ray_generators {
            let prim = gen.primitive();
            if prim.is_zero() {
                return Err(StackyError::NotOnRay {
                    generator: gen.clone(),
                });
            }
            if rays.binary_search(&prim).is_ok() {
                // positive multiple of an actual ray
                let idx = prim
                    .coords()
                    .iter()
                    .position(|v| !v.is_zero())
                    .expect("primitive vector is nonzero");
                let m = &gen.coords()[idx] / &prim.coords()[idx];
                debug_assert!(m.is_positive() && prim.scale(&m) == *gen);
                if multiples.insert(prim.clone(), m).is_some() {
                    return Err(StackyError::DuplicateGenerator { ray: prim });
                }
            } else if rays.binary_search(&prim.neg()).is_ok() {
                return Err(StackyError::NegativeMultiple {
                    ray: prim.neg(),
                    generator: gen.clone(),
                });
            } else {
                return Err(StackyError::NotOnRay {
                    generator: gen.clone(),
                });
            }
        }
        if let Some(ray) = rays.iter().find(|r| !multiples.contains_key(*r)) {
            return Err(StackyError::MissingGenerator { ray: ray.clone() });
        }
        Ok(StackyFan { fan, multiples })
    }

    /// A stacky fan with the primitive generator chosen on every ray.
    pub fn with_primitive_generators(fan: Fan) -> Result<Self, StackyError> {
        let rays = fan.rays();
        StackyFan::new(fan, &rays)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn ambient_dim(&self) -> usize {
        self.fan.ambient_dim()
    }

    /// The chosen generator on the ray with the given primitive generator.
    pub fn chosen_generator(&self, ray: &IntVector) -> Option<IntVector> {
        self.multiples.get(ray).map(|m| ray.scale(m))
    }

    pub fn multiple(&self, ray: &IntVector) -> Option<&Int> {
        self.multiples.get(ray)
    }

    /// All chosen ray generators, sorted by the primitive ray.
    pub fn chosen_generators(&self) -> Vec<IntVector> {
        self.multiples
            .iter()
            .map(|(ray, m)| ray.scale(m))
            .collect()
    }

    fn require_in_fan(&self, cone: &Cone) -> Result<(), StackyError> {
        let in_fan = self
            .fan
            .max_cones()
            .iter()
            .any(|mc| cone.is_face_of(mc));
        if in_fan {
            Ok(())
        } else {
            Err(StackyError::ConeNotInFan { cone: cone.clone() })
        }
    }

    /// The sublattice spanned by the chosen generators of the rays of a
    /// cone of the fan.
    pub fn cone_sublattice(&self, cone: &Cone) -> Result<Sublattice, StackyError> {
        self.require_in_fan(cone)?;
        let gens: Vec<IntVector> = cone
            .generators()
            .iter()
            .map(|ray| {
                self.chosen_generator(ray)
                    .expect("rays of fan cones carry generators")
            })
            .collect();
        Ok(Sublattice::from_generators(self.ambient_dim(), &gens)
            .expect("equal dimensions by construction"))
    }

    /// Order of the generic stabilizer on the stratum of `cone`: the index
    /// of the cone sublattice inside the saturation of the cone's span.
    pub fn stabilizer_order(&self, cone: &Cone) -> Result<Int, StackyError> {
        let sub = self.cone_sublattice(cone)?;
        let saturated = Sublattice::full(self.ambient_dim())
            .saturate(cone.generators())
            .expect("equal dimensions by construction");
        Ok(sub
            .index_in(&saturated)
            .expect("cone sublattice has finite index in the saturation"))
    }

    /// Lattices attached to the maximal cones, in the order of
    /// `fan().max_cones()`.
    pub fn max_cone_lattices(&self) -> Vec<Sublattice> {
        self.fan
            .max_cones()
            .iter()
            .map(|c| self.cone_sublattice(c).expect("maximal cones lie in the fan"))
            .collect()
    }

    /// Stacky star subdivision at a cone of the fan: the underlying fan is
    /// star subdivided at the sum of the chosen ray generators of the cone,
    /// and the new ray receives that sum as its chosen generator.
    pub fn star_subdivide(&self, cone: &Cone) -> Result<StackyFan, StackyError> {
        self.require_in_fan(cone)?;
        if cone.dim() < 2 {
            return Err(StackyError::CenterTooSmall { dim: cone.dim() });
        }
        let center = cone
            .generators()
            .iter()
            .map(|ray| {
                self.chosen_generator(ray)
                    .expect("rays of fan cones carry generators")
            })
            .fold(IntVector::zero(self.ambient_dim()), |acc, g| acc.add(&g));
        let new_fan = self.fan.star_subdivide(&center)?;
        let mut multiples = self.multiples.clone();
        let prim = center.primitive();
        multiples.entry(prim.clone()).or_insert_with(|| {
            let idx = prim
                .coords()
                .iter()
                .position(|v| !v.is_zero())
                .expect("center is nonzero");
            &center.coords()[idx] / &prim.coords()[idx]
        });
        let gens: Vec<IntVector> = new_fan
            .rays()
            .iter()
            .map(|r| {
                multiples
                    .get(r)
                    .map(|m| r.scale(m))
                    .expect("every ray of the subdivision carries a generator")
            })
            .collect();
        StackyFan::new(new_fan, &gens)
    }
}

impl fmt::Display for StackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stacky fan (d={}, {} rays, {} maximal cones)",
            self.ambient_dim(),
            self.multiples.len(),
            self.fan.max_cones().len()
        )
    }
}

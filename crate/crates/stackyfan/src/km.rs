//! KM fans: a complete fan with a compatible finite-index sublattice on
//! each maximal cone. Smooth KM fans are exactly those coming from stacky
//! fans; the rest resolve to a stacky fan by iterated star subdivision at
//! parallelepiped witness points.

use std::fmt;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::cone::Cone;
use crate::fan::{Fan, FanError};
use crate::lattice::{IntVector, Sublattice};
use crate::linalg;
use crate::stacky::{StackyError, StackyFan};
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KmError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Stacky(#[from] StackyError),
    #[error("underlying fan is not complete")]
    NotComplete,
    #[error("expected one lattice per maximal cone: {cones} cones, {lattices} lattices")]
    LatticeCount { cones: usize, lattices: usize },
    #[error("lattice {lattice} on cone {cone} does not have finite index in the cone span")]
    LatticeNotFullRank { cone: Cone, lattice: Sublattice },
    #[error(
        "lattices on cones {first} and {second} disagree on their shared face: {left} vs {right}"
    )]
    FaceIncompatible {
        first: Cone,
        second: Cone,
        left: Sublattice,
        right: Sublattice,
    },
    #[error("cone {cone} is not simplicial; triangulate first")]
    NonSimplicial { cone: Cone },
    #[error("cone {cone} is not a maximal cone of the fan")]
    NotAMaxCone { cone: Cone },
    #[error("KM fan is not smooth")]
    NotSmooth,
    #[error("resolution exceeded the iteration cap of {cap} subdivisions")]
    IterationCapExceeded { cap: usize },
    #[error("overlay cell {cell} carries mismatched lattices {left} vs {right}")]
    OverlayMismatch {
        cell: Cone,
        left: Sublattice,
        right: Sublattice,
    },
}

/// Multiplicity of a simplicial maximal cone with respect to its attached
/// lattice, with a subdivision witness when the cone is singular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultRecord {
    pub cone: Cone,
    pub mult: Int,
    pub witness: Option<IntVector>,
}

/// Result of resolving a KM fan: the smooth stacky fan, the sequence of
/// subdivision centers, and the maximal multiplicity before each step.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub stacky: StackyFan,
    pub trace: Vec<IntVector>,
    pub max_mult_per_step: Vec<Int>,
}

/// A complete fan with a full-rank sublattice attached to each maximal
/// cone; lattices on lower-dimensional cones are derived by saturation,
/// which makes face compatibility checkable exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KmFan {
    fan: Fan,
    lattices: Vec<Sublattice>,
}

impl KmFan {
    pub fn new(fan: Fan, lattices: Vec<Sublattice>) -> Result<Self, KmError> {
        if !fan.is_complete() {
            return Err(KmError::NotComplete);
        }
        if lattices.len() != fan.max_cones().len() {
            return Err(KmError::LatticeCount {
                cones: fan.max_cones().len(),
                lattices: lattices.len(),
            });
        }
        for (cone, lattice) in fan.max_cones().iter().zip(lattices.iter()) {
            if lattice.ambient_dim() != fan.ambient_dim() || !lattice.is_full_rank() {
                return Err(KmError::LatticeNotFullRank {
                    cone: cone.clone(),
                    lattice: lattice.clone(),
                });
            }
        }
        let km = KmFan { fan, lattices };
        km.check_face_compatibility()?;
        Ok(km)
    }

    pub(crate) fn new_unchecked(fan: Fan, lattices: Vec<Sublattice>) -> Self {
        KmFan { fan, lattices }
    }

    fn check_face_compatibility(&self) -> Result<(), KmError> {
        let cones = self.fan.max_cones();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let shared = cones[i].intersect(&cones[j]).expect("equal dimensions");
                if shared.dim() == 0 {
                    continue;
                }
                let left = self.lattices[i]
                    .saturate(shared.generators())
                    .expect("equal dimensions");
                let right = self.lattices[j]
                    .saturate(shared.generators())
                    .expect("equal dimensions");
                if left != right {
                    return Err(KmError::FaceIncompatible {
                        first: cones[i].clone(),
                        second: cones[j].clone(),
                        left,
                        right,
                    });
                }
            }
        }
        Ok(())
    }

    /// The KM fan induced by a stacky fan: lattices spanned by the chosen
    /// ray generators of each maximal cone.
    pub fn from_stacky(s: &StackyFan) -> KmFan {
        let lattices = s.max_cone_lattices();
        let km = KmFan {
            fan: s.fan().clone(),
            lattices,
        };
        debug_assert!(km.check_face_compatibility().is_ok());
        km
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn ambient_dim(&self) -> usize {
        self.fan.ambient_dim()
    }

    /// Lattices in the order of `fan().max_cones()`.
    pub fn lattices(&self) -> &[Sublattice] {
        &self.lattices
    }

    /// Monoid generator of `lattice ∩ ray` for a primitive ray direction.
    fn ray_monoid_generator(lattice: &Sublattice, ray: &IntVector) -> IntVector {
        let sat = lattice
            .saturate(std::slice::from_ref(ray))
            .expect("equal dimensions");
        debug_assert_eq!(sat.rank(), 1);
        let basis = sat.basis()[0].clone();
        if basis.dot(ray).is_positive() {
            basis
        } else {
            basis.neg()
        }
    }

    fn multiplicity_at(&self, idx: usize) -> Result<MultRecord, KmError> {
        let cone = &self.fan.max_cones()[idx];
        if !cone.is_simplicial() {
            return Err(KmError::NonSimplicial { cone: cone.clone() });
        }
        let lattice = &self.lattices[idx];
        let rho: Vec<IntVector> = cone
            .generators()
            .iter()
            .map(|ray| Self::ray_monoid_generator(lattice, ray))
            .collect();
        let span = Sublattice::from_generators(self.ambient_dim(), &rho)
            .expect("equal dimensions");
        let mult = span
            .index_in(lattice)
            .expect("ray generators span a finite-index sublattice");
        let witness = if mult.is_one() {
            None
        } else {
            let points = lattice
                .parallelepiped_points(&rho)
                .expect("rho is independent and lies in the lattice");
            let rho_rows: Vec<Vec<Int>> =
                rho.iter().map(|v| v.coords().to_vec()).collect();
            let best = points
                .into_iter()
                .filter(|p| !p.is_zero())
                .map(|p| {
                    let coeffs = linalg::solve_rational(&rho_rows, &p.to_rational())
                        .expect("parallelepiped points lie in the span");
                    let weight: Rat = coeffs.into_iter().sum();
                    (weight, p)
                })
                .min()
                .map(|(_, p)| p);
            debug_assert!(best.is_some());
            best
        };
        Ok(MultRecord {
            cone: cone.clone(),
            mult,
            witness,
        })
    }

    /// Multiplicity of a maximal cone: the index of the span of its ray
    /// monoid generators inside the attached lattice. The witness is the
    /// nonzero parallelepiped point minimizing the barycentric coefficient
    /// sum, ties broken lexicographically.
    pub fn multiplicity(&self, cone: &Cone) -> Result<MultRecord, KmError> {
        match self.fan.max_cones().iter().position(|c| c == cone) {
            Some(idx) => self.multiplicity_at(idx),
            None => Err(KmError::NotAMaxCone { cone: cone.clone() }),
        }
    }

    /// True iff the fan is simplicial and every maximal cone has
    /// multiplicity one; exactly then the KM fan comes from a stacky fan.
    pub fn is_smooth(&self) -> bool {
        self.fan.is_simplicial()
            && (0..self.fan.max_cones().len()).all(|i| {
                self.multiplicity_at(i)
                    .map(|r| r.mult.is_one())
                    .unwrap_or(false)
            })
    }

    /// The inverse of `from_stacky`, defined for smooth KM fans: each ray
    /// receives the monoid generator of `lattice ∩ ray`.
    pub fn to_stacky(&self) -> Result<StackyFan, KmError> {
        if !self.is_smooth() {
            return Err(KmError::NotSmooth);
        }
        let gens: Vec<IntVector> = self
            .fan
            .rays()
            .iter()
            .map(|ray| {
                let idx = self
                    .fan
                    .max_cones()
                    .iter()
                    .position(|c| c.generators().contains(ray))
                    .expect("every ray belongs to a maximal cone");
                Self::ray_monoid_generator(&self.lattices[idx], ray)
            })
            .collect();
        Ok(StackyFan::new(self.fan.clone(), &gens)?)
    }

    /// Toric resolution: triangulate (no new rays), then repeatedly star
    /// subdivide the worst cone at its witness point until every maximal
    /// cone has multiplicity one. Deterministic: the worst cone is the one
    /// of maximal multiplicity, ties broken by the lexicographically least
    /// generator matrix.
    pub fn resolve(&self) -> Result<Resolution, KmError> {
        let tfan = self.fan.triangulate();
        let map = tfan
            .refines(&self.fan)
            .expect("triangulation refines the fan")
            .expect("triangulation refines the fan");
        let mut fan = tfan;
        let mut lattices: Vec<Sublattice> =
            map.iter().map(|&i| self.lattices[i].clone()).collect();
        let mut records: Vec<MultRecord> = {
            let staged = KmFan::new_unchecked(fan.clone(), lattices.clone());
            (0..fan.max_cones().len())
                .map(|i| staged.multiplicity_at(i))
                .collect::<Result<_, _>>()?
        };
        let total: Int = records.iter().map(|r| r.mult.clone()).sum();
        let cap = 64usize.saturating_mul(usize::try_from(&total).unwrap_or(usize::MAX));
        let mut trace = Vec::new();
        let mut max_mult_per_step = Vec::new();
        loop {
            let worst = records
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.mult.is_one())
                .max_by(|(_, a), (_, b)| {
                    a.mult
                        .cmp(&b.mult)
                        .then_with(|| b.cone.generators().cmp(a.cone.generators()))
                })
                .map(|(i, _)| i);
            let Some(worst) = worst else { break };
            if trace.len() >= cap {
                return Err(KmError::IterationCapExceeded { cap });
            }
            let center = records[worst]
                .witness
                .clone()
                .expect("singular cones carry a witness");
            max_mult_per_step.push(records[worst].mult.clone());
            trace.push(center.clone());
            let (new_fan, parents) = fan.star_subdivide_with_parents(&center)?;
            let mut new_lattices = Vec::with_capacity(parents.len());
            let mut new_records: Vec<Option<MultRecord>> = Vec::with_capacity(parents.len());
            for (new_idx, &parent) in parents.iter().enumerate() {
                new_lattices.push(lattices[parent].clone());
                if new_fan.max_cones()[new_idx] == fan.max_cones()[parent] {
                    new_records.push(Some(records[parent].clone()));
                } else {
                    new_records.push(None);
                }
            }
            let staged = KmFan::new_unchecked(new_fan.clone(), new_lattices.clone());
            let records_filled: Vec<MultRecord> = new_records
                .into_iter()
                .enumerate()
                .map(|(idx, rec)| match rec {
                    Some(r) => Ok(r),
                    None => {
                        let fresh = staged.multiplicity_at(idx)?;
                        // every split cone strictly loses multiplicity
                        debug_assert!(fresh.mult < records[parents[idx]].mult);
                        Ok(fresh)
                    }
                })
                .collect::<Result<_, KmError>>()?;
            fan = new_fan;
            lattices = new_lattices;
            records = records_filled;
        }
        let resolved = KmFan::new_unchecked(fan, lattices);
        let stacky = resolved.to_stacky()?;
        Ok(Resolution {
            stacky,
            trace,
            max_mult_per_step,
        })
    }

    /// Common-refinement KM fan of two stacky fans: each overlay cell
    /// inherits the (necessarily equal) lattices of its coarsenings. A
    /// lattice mismatch on a cell reports the failing cell, which is
    /// exactly a violation of the equivalence criterion.
    pub fn overlay(a: &StackyFan, b: &StackyFan) -> Result<KmFan, KmError> {
        let fan = a.fan().overlay(b.fan())?;
        let map_a = fan
            .refines(a.fan())
            .expect("overlay refines both inputs")
            .expect("overlay refines both inputs");
        let map_b = fan
            .refines(b.fan())
            .expect("overlay refines both inputs")
            .expect("overlay refines both inputs");
        let lat_a = a.max_cone_lattices();
        let lat_b = b.max_cone_lattices();
        let mut lattices = Vec::with_capacity(fan.max_cones().len());
        for (idx, cell) in fan.max_cones().iter().enumerate() {
            let la = &lat_a[map_a[idx]];
            let lb = &lat_b[map_b[idx]];
            if la != lb {
                return Err(KmError::OverlayMismatch {
                    cell: cell.clone(),
                    left: la.clone(),
                    right: lb.clone(),
                });
            }
            lattices.push(la.clone());
        }
        Ok(KmFan::new(fan, lattices).expect("overlay lattices are face compatible"))
    }
}

impl fmt::Display for KmFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "KM fan (d={}, {} maximal cones)",
            self.ambient_dim(),
            self.fan.max_cones().len()
        )
    }
}

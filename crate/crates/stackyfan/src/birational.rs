//! Decision procedures for torus-equivariant birational geometry of proper
//! toric orbifolds: morphism and representability checks, the equivalence
//! criterion, the sublattice-coloring invariant with validation and
//! realization, and explicit birational-roof witnesses.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cone::{Cone, RatVector};
use crate::fan::{arrangement_fan, FanError};
use crate::km::{KmError, KmFan};
use crate::lattice::{IntVector, Sublattice};
use crate::stacky::StackyFan;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BirationalError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid coloring: {0:?}")]
    InvalidColoring(Vec<ColoringViolation>),
    #[error(transparent)]
    Km(#[from] KmError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("fans are not equivalent ({} conflicting cone pairs)", report.conflicts.len())]
    NotEquivalent { report: EquivalenceReport },
    #[error(transparent)]
    Other(#[from] BirationalError),
}

/// A single reason a morphism or representability check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckFailure {
    /// The source fan does not refine the target fan.
    NotRefinement,
    /// A chosen source ray generator is not an integral combination of the
    /// target generators on its minimal containing cone.
    RayGenerator {
        generator: IntVector,
        target_cone: Cone,
        target_lattice: Sublattice,
    },
    /// A source maximal cone and its containing target cone carry
    /// different sublattices.
    LatticeMismatch {
        source_cone: Cone,
        target_cone: Cone,
        source_lattice: Sublattice,
        target_lattice: Sublattice,
    },
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::NotRefinement => {
                write!(f, "source fan does not refine the target fan")
            }
            CheckFailure::RayGenerator {
                generator,
                target_cone,
                target_lattice,
            } => write!(
                f,
                "ray generator {generator} is not in the lattice {target_lattice} of cone {target_cone}"
            ),
            CheckFailure::LatticeMismatch {
                source_cone,
                target_cone,
                source_lattice,
                target_lattice,
            } => write!(
                f,
                "cone {source_cone} has lattice {source_lattice} but its image {target_cone} has {target_lattice}"
            ),
        }
    }
}

/// Outcome of `check_morphism` / `check_representable`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub ok: bool,
    pub failures: Vec<CheckFailure>,
}

/// One conflicting pair in the equivalence criterion: overlapping maximal
/// cones with different sublattices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Conflict {
    pub cone_a: Cone,
    pub cone_b: Cone,
    pub lattice_a: Sublattice,
    pub lattice_b: Sublattice,
}

/// Verdict of the equivalence criterion with the full conflict list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub verdict: bool,
    pub conflicts: Vec<Conflict>,
}

/// One class of a sublattice coloring: a full-rank lattice and the cones
/// covering its region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorClass {
    pub lattice: Sublattice,
    pub region: Vec<Cone>,
}

/// A conical polyhedral partition of N_R indexed by finite-index
/// sublattices. Construction canonicalizes the presentation (classes
/// sorted by lattice, cones sorted); semantic validity is checked by
/// `validate`, semantic equality by `equals`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    ambient_dim: usize,
    classes: Vec<ColorClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringViolation {
    EmptyRegion { lattice: Sublattice },
    DuplicateLattice { lattice: Sublattice },
    LatticeNotFullRank { lattice: Sublattice },
    ConeNotFullDimensional { cone: Cone },
    NotCovering { cell: Cone },
    InteriorOverlap { cone_a: Cone, cone_b: Cone },
    IncompatibleLattices {
        cell: Cone,
        lattice_a: Sublattice,
        lattice_b: Sublattice,
        saturation_a: Sublattice,
        saturation_b: Sublattice,
    },
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringViolation::EmptyRegion { lattice } => {
                write!(f, "class {lattice} has an empty region")
            }
            ColoringViolation::DuplicateLattice { lattice } => {
                write!(f, "lattice {lattice} appears in two classes")
            }
            ColoringViolation::LatticeNotFullRank { lattice } => {
                write!(f, "class lattice {lattice} does not have full rank")
            }
            ColoringViolation::ConeNotFullDimensional { cone } => {
                write!(f, "region cone {cone} is not full-dimensional")
            }
            ColoringViolation::NotCovering { cell } => {
                write!(f, "cell {cell} is not covered by any region")
            }
            ColoringViolation::InteriorOverlap { cone_a, cone_b } => {
                write!(f, "cones {cone_a} and {cone_b} of different classes overlap")
            }
            ColoringViolation::IncompatibleLattices {
                cell,
                lattice_a,
                lattice_b,
                saturation_a,
                saturation_b,
            } => write!(
                f,
                "lattices {lattice_a} and {lattice_b} disagree on cell {cell}: {saturation_a} vs {saturation_b}"
            ),
        }
    }
}

impl Coloring {
    /// Assemble a coloring in canonical order. Geometric validity is not
    /// checked here; run `validate`.
    pub fn new(ambient_dim: usize, mut classes: Vec<ColorClass>) -> Coloring {
        for class in classes.iter_mut() {
            class.region.sort();
            class.region.dedup();
        }
        classes.sort_by(|a, b| a.lattice.cmp(&b.lattice));
        Coloring {
            ambient_dim,
            classes,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn classes(&self) -> &[ColorClass] {
        &self.classes
    }

    /// Full semantic validation: nonempty full-dimensional regions,
    /// coverage of N_R (through the arrangement fan of all defining
    /// hyperplanes), cross-class interior disjointness, and lattice
    /// compatibility on every pairwise-intersection cell via saturation.
    pub fn validate(&self) -> Vec<ColoringViolation> {
        let mut violations = Vec::new();
        let mut seen: BTreeSet<&Sublattice> = BTreeSet::new();
        for class in &self.classes {
            if !seen.insert(&class.lattice) {
                violations.push(ColoringViolation::DuplicateLattice {
                    lattice: class.lattice.clone(),
                });
            }
            if class.lattice.ambient_dim() != self.ambient_dim || !class.lattice.is_full_rank() {
                violations.push(ColoringViolation::LatticeNotFullRank {
                    lattice: class.lattice.clone(),
                });
            }
            if class.region.is_empty() {
                violations.push(ColoringViolation::EmptyRegion {
                    lattice: class.lattice.clone(),
                });
            }
            for cone in &class.region {
                if cone.ambient_dim() != self.ambient_dim || !cone.is_full_dimensional() {
                    violations.push(ColoringViolation::ConeNotFullDimensional {
                        cone: cone.clone(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return violations;
        }
        // cross-class interior disjointness and lattice compatibility
        for i in 0..self.classes.len() {
            for j in i + 1..self.classes.len() {
                let (a, b) = (&self.classes[i], &self.classes[j]);
                for ca in &a.region {
                    for cb in &b.region {
                        if ca.interiors_overlap(cb).unwrap_or(false) {
                            violations.push(ColoringViolation::InteriorOverlap {
                                cone_a: ca.clone(),
                                cone_b: cb.clone(),
                            });
                            continue;
                        }
                        let cell = ca.intersect(cb).expect("equal dimensions");
                        if cell.dim() == 0 {
                            continue;
                        }
                        let sat_a = a
                            .lattice
                            .saturate(cell.generators())
                            .expect("equal dimensions");
                        let sat_b = b
                            .lattice
                            .saturate(cell.generators())
                            .expect("equal dimensions");
                        if sat_a != sat_b {
                            violations.push(ColoringViolation::IncompatibleLattices {
                                cell,
                                lattice_a: a.lattice.clone(),
                                lattice_b: b.lattice.clone(),
                                saturation_a: sat_a,
                                saturation_b: sat_b,
                            });
                        }
                    }
                }
            }
        }
        // coverage through the arrangement fan of all facet hyperplanes
        let normals: Vec<IntVector> = self
            .classes
            .iter()
            .flat_map(|c| c.region.iter())
            .flat_map(|cone| cone.facets().iter().cloned())
            .collect();
        match arrangement_fan(self.ambient_dim, &normals) {
            Ok(arrangement) => {
                for cell in arrangement.max_cones() {
                    let covered = self.classes.iter().any(|class| {
                        class
                            .region
                            .iter()
                            .any(|c| c.contains_cone(cell).unwrap_or(false))
                    });
                    if !covered {
                        violations.push(ColoringViolation::NotCovering { cell: cell.clone() });
                    }
                }
            }
            Err(_) => {
                // no full-dimensional pointed cells: regions cannot cover
                violations.push(ColoringViolation::NotCovering {
                    cell: Cone::zero(self.ambient_dim),
                });
            }
        }
        violations
    }

    /// The class whose region contains the given full-dimensional cone, if
    /// any. Unique on valid colorings.
    fn class_containing(&self, cone: &Cone) -> Option<&ColorClass> {
        self.classes.iter().find(|class| {
            class
                .region
                .iter()
                .any(|c| c.contains_cone(cone).unwrap_or(false))
        })
    }

    /// Structural sanity shared by `equals`: full-rank lattices, nonempty
    /// regions of full-dimensional cones. The geometric conditions
    /// (coverage, disjointness, compatibility) are `validate`'s job.
    fn structural_violations(&self) -> Vec<ColoringViolation> {
        let mut violations = Vec::new();
        for class in &self.classes {
            if class.lattice.ambient_dim() != self.ambient_dim || !class.lattice.is_full_rank() {
                violations.push(ColoringViolation::LatticeNotFullRank {
                    lattice: class.lattice.clone(),
                });
            }
            if class.region.is_empty() {
                violations.push(ColoringViolation::EmptyRegion {
                    lattice: class.lattice.clone(),
                });
            }
            for cone in &class.region {
                if cone.ambient_dim() != self.ambient_dim || !cone.is_full_dimensional() {
                    violations.push(ColoringViolation::ConeNotFullDimensional {
                        cone: cone.clone(),
                    });
                }
            }
        }
        violations
    }

    /// Semantic equality of partitions: wherever regions overlap in the
    /// interior, the class lattices agree. Presentation-independent.
    pub fn equals(&self, other: &Coloring) -> Result<bool, BirationalError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(BirationalError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut violations = self.structural_violations();
        violations.extend(other.structural_violations());
        if !violations.is_empty() {
            return Err(BirationalError::InvalidColoring(violations));
        }
        for a in &self.classes {
            for b in &other.classes {
                if a.lattice == b.lattice {
                    continue;
                }
                for ca in &a.region {
                    for cb in &b.region {
                        if ca.interiors_overlap(cb).expect("full-dimensional checked above") {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The coloring of a stacky fan: maximal cones grouped by cone sublattice.
pub fn coloring_of(s: &StackyFan) -> Coloring {
    let lattices = s.max_cone_lattices();
    let mut classes: Vec<ColorClass> = Vec::new();
    for (cone, lattice) in s.fan().max_cones().iter().zip(lattices) {
        match classes.iter_mut().find(|c| c.lattice == lattice) {
            Some(class) => class.region.push(cone.clone()),
            None => classes.push(ColorClass {
                lattice,
                region: vec![cone.clone()],
            }),
        }
    }
    Coloring::new(s.ambient_dim(), classes)
}

fn require_same_dim(a: &StackyFan, b: &StackyFan) -> Result<(), BirationalError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(BirationalError::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    Ok(())
}

/// Does the identity on the lattice induce a toric morphism from `source`
/// to `target`? Checks refinement plus, for every source ray, membership
/// of its chosen generator in the lattice of the minimal containing target
/// cone (the strongest such condition).
pub fn check_morphism(
    source: &StackyFan,
    target: &StackyFan,
) -> Result<MorphismReport, BirationalError> {
    require_same_dim(source, target)?;
    if source.fan().refines(target.fan())?.is_none() {
        return Ok(MorphismReport {
            ok: false,
            failures: vec![CheckFailure::NotRefinement],
        });
    }
    let mut failures = Vec::new();
    for ray in source.fan().rays() {
        let generator = source
            .chosen_generator(&ray)
            .expect("fan rays carry generators");
        let carrier = target
            .fan()
            .minimal_containing_cone(&RatVector::from(&ray))
            .expect("complete fans contain every ray");
        let lattice = target
            .cone_sublattice(&carrier)
            .expect("minimal containing cone lies in the fan");
        if !lattice
            .contains(&generator)
            .expect("equal dimensions by contract")
        {
            failures.push(CheckFailure::RayGenerator {
                generator,
                target_cone: carrier,
                target_lattice: lattice,
            });
        }
    }
    Ok(MorphismReport {
        ok: failures.is_empty(),
        failures,
    })
}

/// Does the identity induce a representable toric morphism? Checks
/// refinement plus equality of the maximal-cone sublattices along the cone
/// map; maximal cones suffice.
pub fn check_representable(
    source: &StackyFan,
    target: &StackyFan,
) -> Result<MorphismReport, BirationalError> {
    require_same_dim(source, target)?;
    let Some(map) = source.fan().refines(target.fan())? else {
        return Ok(MorphismReport {
            ok: false,
            failures: vec![CheckFailure::NotRefinement],
        });
    };
    let source_lattices = source.max_cone_lattices();
    let target_lattices = target.max_cone_lattices();
    let mut failures = Vec::new();
    for (idx, &parent) in map.iter().enumerate() {
        if source_lattices[idx] != target_lattices[parent] {
            failures.push(CheckFailure::LatticeMismatch {
                source_cone: source.fan().max_cones()[idx].clone(),
                target_cone: target.fan().max_cones()[parent].clone(),
                source_lattice: source_lattices[idx].clone(),
                target_lattice: target_lattices[parent].clone(),
            });
        }
    }
    Ok(MorphismReport {
        ok: failures.is_empty(),
        failures,
    })
}

/// The equivalence criterion: for every pair of maximal cones with
/// overlapping interiors, the attached sublattices must agree.
pub fn equivalent(a: &StackyFan, b: &StackyFan) -> Result<EquivalenceReport, BirationalError> {
    require_same_dim(a, b)?;
    let lat_a = a.max_cone_lattices();
    let lat_b = b.max_cone_lattices();
    let mut conflicts = Vec::new();
    for (ca, la) in a.fan().max_cones().iter().zip(lat_a.iter()) {
        for (cb, lb) in b.fan().max_cones().iter().zip(lat_b.iter()) {
            if la != lb && ca.interiors_overlap(cb).expect("maximal cones are full-dimensional") {
                conflicts.push(Conflict {
                    cone_a: ca.clone(),
                    cone_b: cb.clone(),
                    lattice_a: la.clone(),
                    lattice_b: lb.clone(),
                });
            }
        }
    }
    conflicts.sort();
    Ok(EquivalenceReport {
        verdict: conflicts.is_empty(),
        conflicts,
    })
}

/// Result of realizing a coloring: the stacky fan together with the
/// resolution trace (subdivision centers).
#[derive(Debug, Clone)]
pub struct Realization {
    pub stacky: StackyFan,
    pub trace: Vec<IntVector>,
}

/// Realize a valid coloring as a smooth proper stacky fan: build the
/// arrangement fan of all region hyperplanes, triangulate, attach the
/// class lattice to each maximal cell, and resolve the resulting KM fan.
pub fn realize_coloring(c: &Coloring) -> Result<Realization, BirationalError> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(BirationalError::InvalidColoring(violations));
    }
    let normals: Vec<IntVector> = c
        .classes()
        .iter()
        .flat_map(|class| class.region.iter())
        .flat_map(|cone| cone.facets().iter().cloned())
        .collect();
    let base = arrangement_fan(c.ambient_dim(), &normals)?;
    let fan = base.triangulate();
    let lattices: Vec<Sublattice> = fan
        .max_cones()
        .iter()
        .map(|cell| {
            c.class_containing(cell)
                .expect("valid colorings cover every arrangement cell")
                .lattice
                .clone()
        })
        .collect();
    let km = KmFan::new(fan, lattices)?;
    let resolution = km.resolve()?;
    debug_assert!(coloring_of(&resolution.stacky)
        .equals(c)
        .expect("same dimension"));
    Ok(Realization {
        stacky: resolution.stacky,
        trace: resolution.trace,
    })
}

/// One certified cell of a witness map: a roof cone, the target cone
/// containing it, and their common sublattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCell {
    pub roof_cone: usize,
    pub target_cone: usize,
    pub lattice: Sublattice,
}

/// A representable cone map from the roof onto one of the two inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMap {
    pub cells: Vec<WitnessCell>,
}

/// An explicit birational roof between two equivalent stacky fans: the
/// resolved overlay together with both certified cone maps.
#[derive(Debug, Clone)]
pub struct Witness {
    pub roof: StackyFan,
    pub map_to_a: WitnessMap,
    pub map_to_b: WitnessMap,
    pub trace: Vec<IntVector>,
}

impl Witness {
    /// Re-check both embedded certificates against the fans they connect.
    pub fn verify(&self, a: &StackyFan, b: &StackyFan) -> bool {
        self.verify_side(a, &self.map_to_a) && self.verify_side(b, &self.map_to_b)
    }

    fn verify_side(&self, target: &StackyFan, map: &WitnessMap) -> bool {
        if map.cells.len() != self.roof.fan().max_cones().len() {
            return false;
        }
        let roof_lattices = self.roof.max_cone_lattices();
        let target_lattices = target.max_cone_lattices();
        map.cells.iter().all(|cell| {
            let roof_cone = &self.roof.fan().max_cones()[cell.roof_cone];
            let target_cone = match target.fan().max_cones().get(cell.target_cone) {
                Some(c) => c,
                None => return false,
            };
            target_cone.contains_cone(roof_cone).unwrap_or(false)
                && roof_lattices[cell.roof_cone] == cell.lattice
                && target_lattices[cell.target_cone] == cell.lattice
        })
    }
}

fn witness_map(roof: &StackyFan, target: &StackyFan) -> Result<WitnessMap, BirationalError> {
    let map = roof
        .fan()
        .refines(target.fan())?
        .expect("roof refines both inputs");
    let roof_lattices = roof.max_cone_lattices();
    let cells = map
        .iter()
        .enumerate()
        .map(|(idx, &parent)| WitnessCell {
            roof_cone: idx,
            target_cone: parent,
            lattice: roof_lattices[idx].clone(),
        })
        .collect();
    Ok(WitnessMap { cells })
}

/// Construct a birational roof for an equivalent pair: resolve the overlay
/// KM fan and certify both induced representable maps. Returns the
/// equivalence report when the pair is not equivalent.
pub fn witness(a: &StackyFan, b: &StackyFan) -> Result<Witness, Box<WitnessError>> {
    let report = equivalent(a, b).map_err(|e| Box::new(WitnessError::Other(e)))?;
    if !report.verdict {
        return Err(Box::new(WitnessError::NotEquivalent { report }));
    }
    let overlay = KmFan::overlay(a, b).expect("equivalent pairs overlay");
    let resolution = overlay.resolve().expect("overlay resolves");
    let roof = resolution.stacky;
    let map_to_a = witness_map(&roof, a).expect("roof refines input");
    let map_to_b = witness_map(&roof, b).expect("roof refines input");
    debug_assert!(check_representable(&roof, a).map(|r| r.ok).unwrap_or(false));
    debug_assert!(check_representable(&roof, b).map(|r| r.ok).unwrap_or(false));
    Ok(Witness {
        roof,
        map_to_a,
        map_to_b,
        trace: resolution.trace,
    })
}

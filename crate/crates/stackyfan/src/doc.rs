//! JSON documents for stacky fans, KM fans and colorings. Serialization is
//! canonical (sorted rays and cones, HNF lattice bases), so identical
//! inputs produce byte-identical outputs. Integers are JSON numbers up to
//! 2^53 and decimal strings beyond.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::birational::{ColorClass, Coloring};
use crate::cone::Cone;
use crate::fan::Fan;
use crate::km::KmFan;
use crate::lattice::{IntVector, Sublattice};
use crate::stacky::StackyFan;
use crate::Int;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum DocError {
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid document: {0}")]
    Invalid(String),
}

/// An integer that serializes as a JSON number when it fits into the
/// double-exact range and as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonInt(pub Int);

const MAX_SAFE: i64 = 1 << 53;

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= MAX_SAFE => serializer.serialize_i64(v),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
        Ok(JsonInt(Int::from(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(Int::from(v)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        v.parse::<Int>()
            .map(JsonInt)
            .map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<JsonInt, D::Error> {
        deserializer.deserialize_any(JsonIntVisitor)
    }
}

pub(crate) fn encode_vector(v: &IntVector) -> Vec<JsonInt> {
    v.coords().iter().cloned().map(JsonInt).collect()
}

fn decode_vector(dim: usize, raw: &[JsonInt]) -> Result<IntVector, DocError> {
    if raw.len() != dim {
        return Err(DocError::Schema(format!(
            "vector has {} coordinates, expected {dim}",
            raw.len()
        )));
    }
    Ok(IntVector::new(raw.iter().map(|j| j.0.clone()).collect()))
}

pub(crate) fn encode_lattice(l: &Sublattice) -> Vec<Vec<JsonInt>> {
    l.basis().iter().map(encode_vector).collect()
}

pub(crate) fn encode_cone(c: &Cone) -> Vec<Vec<JsonInt>> {
    c.generators().iter().map(encode_vector).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "kind")]
pub enum Document {
    #[serde(rename = "stacky_fan")]
    StackyFan(StackyFanDoc),
    #[serde(rename = "km_fan")]
    KmFan(KmFanDoc),
    #[serde(rename = "coloring")]
    Coloring(ColoringDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::StackyFan(_) => "stacky_fan",
            Document::KmFan(_) => "km_fan",
            Document::Coloring(_) => "coloring",
        }
    }

    pub fn parse(json: &str) -> Result<Document, DocError> {
        let doc: Document = serde_json::from_str(json)?;
        let version = match &doc {
            Document::StackyFan(d) => &d.format_version,
            Document::KmFan(d) => &d.format_version,
            Document::Coloring(d) => &d.format_version,
        };
        if version != FORMAT_VERSION {
            return Err(DocError::Schema(format!(
                "unsupported format_version {version:?}, expected {FORMAT_VERSION:?}"
            )));
        }
        Ok(doc)
    }

    /// Canonical compact JSON, newline terminated.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("documents serialize");
        out.push('\n');
        out
    }
}

/// Wire form of a stacky fan: `rays` carries the chosen generators; the
/// primitive ray generators and all lattices are derived.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct StackyFanDoc {
    pub format_version: String,
    pub dim: usize,
    pub rays: Vec<Vec<JsonInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// Wire form of a KM fan: primitive rays, maximal cones by ray index, and
/// one lattice basis per maximal cone (parallel lists).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct KmFanDoc {
    pub format_version: String,
    pub dim: usize,
    pub rays: Vec<Vec<JsonInt>>,
    pub max_cones: Vec<Vec<usize>>,
    pub lattices: Vec<Vec<Vec<JsonInt>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ColoringClassDoc {
    pub lattice: Vec<Vec<JsonInt>>,
    pub cones: Vec<Vec<Vec<JsonInt>>>,
}

/// Wire form of a coloring: classes with a lattice basis and the cones of
/// the region, each cone given by its generator matrix.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct ColoringDoc {
    pub format_version: String,
    pub dim: usize,
    pub classes: Vec<ColoringClassDoc>,
}

fn check_dim(dim: usize) -> Result<(), DocError> {
    if dim == 0 {
        return Err(DocError::Schema("dim must be at least 1".into()));
    }
    Ok(())
}

fn decode_rays(dim: usize, rays: &[Vec<JsonInt>]) -> Result<Vec<IntVector>, DocError> {
    if rays.is_empty() {
        return Err(DocError::Schema("rays must be nonempty".into()));
    }
    let mut out = Vec::with_capacity(rays.len());
    for raw in rays {
        let v = decode_vector(dim, raw)?;
        if v.is_zero() {
            return Err(DocError::Schema("rays must be nonzero".into()));
        }
        out.push(v);
    }
    Ok(out)
}

fn decode_cones(
    dim: usize,
    rays: &[IntVector],
    max_cones: &[Vec<usize>],
) -> Result<Vec<Cone>, DocError> {
    let _ = dim;
    if max_cones.is_empty() {
        return Err(DocError::Schema("max_cones must be nonempty".into()));
    }
    let mut cones = Vec::with_capacity(max_cones.len());
    for indices in max_cones {
        if indices.is_empty() {
            return Err(DocError::Schema("a maximal cone has no rays".into()));
        }
        let gens: Vec<IntVector> = indices
            .iter()
            .map(|&i| {
                rays.get(i)
                    .cloned()
                    .ok_or_else(|| DocError::Schema(format!("ray index {i} out of bounds")))
            })
            .collect::<Result<_, _>>()?;
        let cone = Cone::from_generators(&gens).map_err(|e| DocError::Invalid(e.to_string()))?;
        cones.push(cone);
    }
    Ok(cones)
}

impl StackyFanDoc {
    pub fn from_domain(s: &StackyFan) -> StackyFanDoc {
        let mut rays = s.chosen_generators();
        rays.sort();
        let index_of: BTreeMap<IntVector, usize> = rays
            .iter()
            .enumerate()
            .map(|(i, rho)| (rho.primitive(), i))
            .collect();
        let mut max_cones: Vec<Vec<usize>> = s
            .fan()
            .max_cones()
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> =
                    c.generators().iter().map(|g| index_of[g]).collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        max_cones.sort();
        StackyFanDoc {
            format_version: FORMAT_VERSION.to_string(),
            dim: s.ambient_dim(),
            rays: rays.iter().map(encode_vector).collect(),
            max_cones,
        }
    }

    pub fn to_domain(&self) -> Result<StackyFan, DocError> {
        check_dim(self.dim)?;
        let chosen = decode_rays(self.dim, &self.rays)?;
        let primitive: Vec<IntVector> = chosen.iter().map(|r| r.primitive()).collect();
        let cones = decode_cones(self.dim, &primitive, &self.max_cones)?;
        let fan = Fan::new(self.dim, cones).map_err(|e| DocError::Invalid(e.to_string()))?;
        StackyFan::new(fan, &chosen).map_err(|e| DocError::Invalid(e.to_string()))
    }
}

impl KmFanDoc {
    pub fn from_domain(km: &KmFan) -> KmFanDoc {
        let rays = km.fan().rays();
        let index_of: BTreeMap<&IntVector, usize> =
            rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        // pair cones with lattices, then order by the index lists
        let mut paired: Vec<(Vec<usize>, Vec<Vec<JsonInt>>)> = km
            .fan()
            .max_cones()
            .iter()
            .zip(km.lattices().iter())
            .map(|(c, l)| {
                let mut idx: Vec<usize> =
                    c.generators().iter().map(|g| index_of[g]).collect();
                idx.sort_unstable();
                (idx, encode_lattice(l))
            })
            .collect();
        paired.sort();
        let (max_cones, lattices) = paired.into_iter().unzip();
        KmFanDoc {
            format_version: FORMAT_VERSION.to_string(),
            dim: km.ambient_dim(),
            rays: rays.iter().map(encode_vector).collect(),
            max_cones,
            lattices,
        }
    }

    pub fn to_domain(&self) -> Result<KmFan, DocError> {
        check_dim(self.dim)?;
        if self.lattices.len() != self.max_cones.len() {
            return Err(DocError::Schema(format!(
                "{} lattices for {} maximal cones",
                self.lattices.len(),
                self.max_cones.len()
            )));
        }
        let rays: Vec<IntVector> = decode_rays(self.dim, &self.rays)?
            .iter()
            .map(|r| r.primitive())
            .collect();
        let cones = decode_cones(self.dim, &rays, &self.max_cones)?;
        let mut paired: Vec<(Cone, Sublattice)> = cones
            .into_iter()
            .zip(self.lattices.iter())
            .map(|(cone, rows)| {
                let gens: Vec<IntVector> = rows
                    .iter()
                    .map(|r| decode_vector(self.dim, r))
                    .collect::<Result<_, _>>()?;
                let lattice = Sublattice::from_generators(self.dim, &gens)
                    .map_err(|e| DocError::Schema(e.to_string()))?;
                Ok((cone, lattice))
            })
            .collect::<Result<_, DocError>>()?;
        paired.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in paired.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(DocError::Schema(format!(
                    "duplicate maximal cone {}",
                    pair[0].0
                )));
            }
        }
        let (cones, lattices): (Vec<Cone>, Vec<Sublattice>) = paired.into_iter().unzip();
        let fan = Fan::new(self.dim, cones).map_err(|e| DocError::Invalid(e.to_string()))?;
        KmFan::new(fan, lattices).map_err(|e| DocError::Invalid(e.to_string()))
    }
}

impl ColoringDoc {
    pub fn from_domain(c: &Coloring) -> ColoringDoc {
        ColoringDoc {
            format_version: FORMAT_VERSION.to_string(),
            dim: c.ambient_dim(),
            classes: c
                .classes()
                .iter()
                .map(|class| ColoringClassDoc {
                    lattice: encode_lattice(&class.lattice),
                    cones: class.region.iter().map(encode_cone).collect(),
                })
                .collect(),
        }
    }

    pub fn to_domain(&self) -> Result<Coloring, DocError> {
        check_dim(self.dim)?;
        if self.classes.is_empty() {
            return Err(DocError::Schema("classes must be nonempty".into()));
        }
        let mut classes = Vec::with_capacity(self.classes.len());
        for class in &self.classes {
            let rows: Vec<IntVector> = class
                .lattice
                .iter()
                .map(|r| decode_vector(self.dim, r))
                .collect::<Result<_, _>>()?;
            let lattice = Sublattice::from_generators(self.dim, &rows)
                .map_err(|e| DocError::Schema(e.to_string()))?;
            let region: Vec<Cone> = class
                .cones
                .iter()
                .map(|gens| {
                    let g: Vec<IntVector> = gens
                        .iter()
                        .map(|r| decode_vector(self.dim, r))
                        .collect::<Result<_, _>>()?;
                    if g.is_empty() {
                        return Err(DocError::Schema("a region cone has no generators".into()));
                    }
                    Cone::from_generators(&g).map_err(|e| DocError::Invalid(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            classes.push(ColorClass { lattice, region });
        }
        Ok(Coloring::new(self.dim, classes))
    }
}

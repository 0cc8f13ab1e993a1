//! Python bindings for the stackyfan toolkit. The classes wrap the Rust
//! types; construction from/to the canonical JSON documents is the main
//! bridge, plus direct methods for the decision procedures. Domain errors
//! surface as ValueError.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stackyfan::birational;
use stackyfan::doc::{ColoringDoc, Document, KmFanDoc, StackyFanDoc};
use stackyfan::lattice::IntVector;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vectors_to_py(vs: &[IntVector]) -> Vec<Vec<BigInt>> {
    vs.iter().map(|v| v.coords().to_vec()).collect()
}

fn parse_stacky(text: &str) -> PyResult<stackyfan::StackyFan> {
    match Document::parse(text).map_err(value_err)? {
        Document::StackyFan(d) => d.to_domain().map_err(value_err),
        other => Err(value_err(format!(
            "expected a stacky_fan document, found {}",
            other.kind()
        ))),
    }
}

/// A stacky fan: a complete simplicial fan with a chosen integral
/// generator on each ray.
#[pyclass(frozen)]
#[derive(Clone)]
struct StackyFan {
    inner: stackyfan::StackyFan,
}

#[pymethods]
impl StackyFan {
    /// Parse a canonical stacky_fan JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(StackyFan {
            inner: parse_stacky(text)?,
        })
    }

    /// Canonical JSON document (newline terminated).
    fn to_json(&self) -> String {
        Document::StackyFan(StackyFanDoc::from_domain(&self.inner)).to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn num_max_cones(&self) -> usize {
        self.inner.fan().max_cones().len()
    }

    /// Chosen ray generators, sorted by primitive ray.
    fn rays(&self) -> Vec<Vec<BigInt>> {
        vectors_to_py(&self.inner.chosen_generators())
    }

    /// Generator matrices of the maximal cones, in canonical order.
    fn max_cones(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.inner
            .fan()
            .max_cones()
            .iter()
            .map(|c| vectors_to_py(c.generators()))
            .collect()
    }

    /// Generic stabilizer order on each maximal cone, in canonical order.
    fn stabilizer_orders(&self) -> Vec<BigInt> {
        self.inner
            .fan()
            .max_cones()
            .iter()
            .map(|c| self.inner.stabilizer_order(c).expect("maximal cone"))
            .collect()
    }

    /// Stacky star subdivision at the maximal cone with the given index.
    fn star_subdivide(&self, cone_index: usize) -> PyResult<Self> {
        let cones = self.inner.fan().max_cones();
        let cone = cones
            .get(cone_index)
            .ok_or_else(|| value_err(format!("cone index {cone_index} out of bounds")))?
            .clone();
        Ok(StackyFan {
            inner: self.inner.star_subdivide(&cone).map_err(value_err)?,
        })
    }

    /// The sublattice-coloring invariant.
    fn coloring(&self) -> Coloring {
        Coloring {
            inner: birational::coloring_of(&self.inner),
        }
    }

    /// Torus-equivariant birational equivalence with another stacky fan.
    fn equivalent(&self, other: &StackyFan) -> PyResult<bool> {
        Ok(birational::equivalent(&self.inner, &other.inner)
            .map_err(value_err)?
            .verdict)
    }

    /// Build a birational roof toward an equivalent stacky fan: returns
    /// the roof and the subdivision trace. Raises ValueError when the
    /// fans are not equivalent.
    fn witness(&self, other: &StackyFan) -> PyResult<(StackyFan, Vec<Vec<BigInt>>)> {
        match birational::witness(&self.inner, &other.inner) {
            Ok(w) => {
                let trace = vectors_to_py(&w.trace);
                Ok((StackyFan { inner: w.roof }, trace))
            }
            Err(e) => Err(value_err(e)),
        }
    }

    /// True iff the identity induces a toric morphism to `target`
    /// (representable when `representable` is set).
    #[pyo3(signature = (target, representable = false))]
    fn maps_to(&self, target: &StackyFan, representable: bool) -> PyResult<bool> {
        let report = if representable {
            birational::check_representable(&self.inner, &target.inner)
        } else {
            birational::check_morphism(&self.inner, &target.inner)
        }
        .map_err(value_err)?;
        Ok(report.ok)
    }

    fn __repr__(&self) -> String {
        format!(
            "StackyFan(dim={}, rays={}, max_cones={})",
            self.inner.ambient_dim(),
            self.inner.fan().rays().len(),
            self.inner.fan().max_cones().len()
        )
    }

    fn __eq__(&self, other: &StackyFan) -> bool {
        self.inner == other.inner
    }
}

/// A KM fan: a complete fan with a compatible finite-index sublattice on
/// each maximal cone.
#[pyclass(frozen)]
#[derive(Clone)]
struct KmFan {
    inner: stackyfan::KmFan,
}

#[pymethods]
impl KmFan {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match Document::parse(text).map_err(value_err)? {
            Document::KmFan(d) => Ok(KmFan {
                inner: d.to_domain().map_err(value_err)?,
            }),
            other => Err(value_err(format!(
                "expected a km_fan document, found {}",
                other.kind()
            ))),
        }
    }

    fn to_json(&self) -> String {
        Document::KmFan(KmFanDoc::from_domain(&self.inner)).to_json()
    }

    /// The KM fan induced by a stacky fan.
    #[staticmethod]
    fn from_stacky(s: &StackyFan) -> KmFan {
        KmFan {
            inner: stackyfan::KmFan::from_stacky(&s.inner),
        }
    }

    /// Common-refinement KM fan of two equivalent stacky fans.
    #[staticmethod]
    fn overlay(a: &StackyFan, b: &StackyFan) -> PyResult<KmFan> {
        Ok(KmFan {
            inner: stackyfan::KmFan::overlay(&a.inner, &b.inner).map_err(value_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn num_max_cones(&self) -> usize {
        self.inner.fan().max_cones().len()
    }

    /// True iff the fan is simplicial with all multiplicities 1.
    fn is_smooth(&self) -> bool {
        self.inner.is_smooth()
    }

    /// Multiplicities of the maximal cones (simplicial fans only).
    fn multiplicities(&self) -> PyResult<Vec<BigInt>> {
        self.inner
            .fan()
            .max_cones()
            .iter()
            .map(|c| {
                self.inner
                    .multiplicity(c)
                    .map(|r| r.mult)
                    .map_err(value_err)
            })
            .collect()
    }

    /// The inverse of from_stacky, defined for smooth KM fans.
    fn to_stacky(&self) -> PyResult<StackyFan> {
        Ok(StackyFan {
            inner: self.inner.to_stacky().map_err(value_err)?,
        })
    }

    /// Toric resolution to a smooth stacky fan; returns the fan and the
    /// subdivision-center trace.
    fn resolve(&self) -> PyResult<(StackyFan, Vec<Vec<BigInt>>)> {
        let resolution = self.inner.resolve().map_err(value_err)?;
        let trace = vectors_to_py(&resolution.trace);
        Ok((
            StackyFan {
                inner: resolution.stacky,
            },
            trace,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "KmFan(dim={}, max_cones={})",
            self.inner.ambient_dim(),
            self.inner.fan().max_cones().len()
        )
    }

    fn __eq__(&self, other: &KmFan) -> bool {
        self.inner == other.inner
    }
}

/// A sublattice coloring: the complete birational invariant.
#[pyclass(frozen)]
#[derive(Clone)]
struct Coloring {
    inner: birational::Coloring,
}

#[pymethods]
impl Coloring {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match Document::parse(text).map_err(value_err)? {
            Document::Coloring(d) => Ok(Coloring {
                inner: d.to_domain().map_err(value_err)?,
            }),
            other => Err(value_err(format!(
                "expected a coloring document, found {}",
                other.kind()
            ))),
        }
    }

    fn to_json(&self) -> String {
        Document::Coloring(ColoringDoc::from_domain(&self.inner)).to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn num_classes(&self) -> usize {
        self.inner.classes().len()
    }

    /// Violation messages; empty means the coloring is valid.
    fn validate(&self) -> Vec<String> {
        self.inner
            .validate()
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    /// Semantic partition equality.
    fn equals(&self, other: &Coloring) -> PyResult<bool> {
        self.inner.equals(&other.inner).map_err(value_err)
    }

    /// Realize the coloring as a smooth proper stacky fan.
    fn realize(&self) -> PyResult<StackyFan> {
        let realization = birational::realize_coloring(&self.inner).map_err(value_err)?;
        Ok(StackyFan {
            inner: realization.stacky,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Coloring(dim={}, classes={})",
            self.inner.ambient_dim(),
            self.inner.classes().len()
        )
    }
}

/// Decide torus-equivariant birational equivalence of two stacky fans.
#[pyfunction]
fn equivalent(a: &StackyFan, b: &StackyFan) -> PyResult<bool> {
    a.equivalent(b)
}

#[pymodule]
fn stackyfan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<StackyFan>()?;
    m.add_class::<KmFan>()?;
    m.add_class::<Coloring>()?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

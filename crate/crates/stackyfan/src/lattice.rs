//! Exact integer linear algebra over the ambient lattice Z^d: canonical
//! sublattice representation, membership, index, intersection, saturation
//! and parallelepiped point enumeration.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a sublattice: {vector} lies outside the claimed superlattice")]
    NotASublattice { vector: IntVector },
    #[error("infinite index: rank {sub_rank} sublattice inside rank {sup_rank} lattice")]
    InfiniteIndex { sub_rank: usize, sup_rank: usize },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("vector {vector} does not lie in the lattice")]
    NotInLattice { vector: IntVector },
}

/// A lattice point of Z^d with arbitrary-precision coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(Vec<Int>);

impl IntVector {
    pub fn new(coords: Vec<Int>) -> Self {
        IntVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&v| Int::from(v)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(vec![Int::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    pub fn dot(&self, other: &IntVector) -> Int {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), other.dim());
        IntVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), other.dim());
        IntVector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|v| -v.clone()).collect())
    }

    pub fn scale(&self, factor: &Int) -> IntVector {
        IntVector(self.0.iter().map(|v| v * factor).collect())
    }

    /// Greatest common divisor of the coordinates (zero for the zero vector).
    pub fn content(&self) -> Int {
        self.0
            .iter()
            .fold(Int::zero(), |acc, v| acc.gcd(v))
    }

    /// The primitive vector on the same ray: coordinates divided by their
    /// gcd. The zero vector is returned unchanged.
    pub fn primitive(&self) -> IntVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|v| v / &g).collect())
    }

    pub fn to_rational(&self) -> Vec<Rat> {
        self.0.iter().map(|v| Rat::from_integer(v.clone())).collect()
    }
}

impl fmt::Display for IntVector {
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

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_dims(dim: usize, vectors: &[IntVector]) -> Result<(), LatticeError> {
    for v in vectors {
        if v.dim() != dim {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    Ok(())
}

fn rows_of(vectors: &[IntVector]) -> Vec<Vec<Int>> {
    vectors.iter().map(|v| v.coords().to_vec()).collect()
}

/// A finite-rank subgroup of Z^d, stored as the rows of its canonical
/// Hermite-normal-form basis. Two values represent the same subgroup iff
/// their stored bases are identical, so derived equality is semantic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sublattice {
    ambient_dim: usize,
    basis: Vec<IntVector>,
}

impl Sublattice {
    /// The sublattice generated by `gens`, with basis in canonical HNF.
    pub fn from_generators(ambient_dim: usize, gens: &[IntVector]) -> Result<Self, LatticeError> {
        check_dims(ambient_dim, gens)?;
        let basis = linalg::hnf(rows_of(gens))
            .into_iter()
            .map(IntVector::new)
            .collect();
        Ok(Sublattice { ambient_dim, basis })
    }

    /// The full lattice Z^d.
    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut coords = vec![Int::zero(); ambient_dim];
                coords[i] = Int::one();
                IntVector(coords)
            })
            .collect();
        Sublattice { ambient_dim, basis }
    }

    /// The rank-0 lattice {0}.
    pub fn zero(ambient_dim: usize) -> Self {
        Sublattice {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    fn pivot_col(row: &IntVector) -> usize {
        row.coords()
            .iter()
            .position(|v| !v.is_zero())
            .expect("basis rows are nonzero")
    }

    /// Integer coordinates of `v` with respect to the HNF basis, when `v`
    /// lies in the lattice. Solves the triangular system row by row.
    pub(crate) fn coords_of(&self, v: &IntVector) -> Option<Vec<Int>> {
        let mut residual = v.clone();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = Self::pivot_col(row);
            let pivot = &row.coords()[p];
            let (q, rem) = residual.coords()[p].div_rem(pivot);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                residual = residual.sub(&row.scale(&q));
            }
            coeffs.push(q);
        }
        if residual.is_zero() {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Membership test: does `v` lie in the lattice?
    pub fn contains(&self, v: &IntVector) -> Result<bool, LatticeError> {
        check_dims(self.ambient_dim, std::slice::from_ref(v))?;
        Ok(self.coords_of(v).is_some())
    }

    /// The index `[sup : self]` of `self` inside `sup`, computed from the
    /// Smith normal form of the change-of-basis matrix.
    pub fn index_in(&self, sup: &Sublattice) -> Result<Int, LatticeError> {
        if self.ambient_dim != sup.ambient_dim {
            return Err(LatticeError::DimensionMismatch {
                expected: sup.ambient_dim,
                found: self.ambient_dim,
            });
        }
        let mut change = Vec::with_capacity(self.rank());
        for row in &self.basis {
            match sup.coords_of(row) {
                Some(coeffs) => change.push(coeffs),
                None => {
                    return Err(LatticeError::NotASublattice { vector: row.clone() });
                }
            }
        }
        if self.rank() != sup.rank() {
            return Err(LatticeError::InfiniteIndex {
                sub_rank: self.rank(),
                sup_rank: sup.rank(),
            });
        }
        if self.rank() == 0 {
            return Ok(Int::one());
        }
        let (diag, _) = linalg::snf_with_col_inverse(change);
        Ok(diag.into_iter().product::<Int>().abs())
    }

    /// Canonical basis of `self ∩ other`.
    pub fn intersect(&self, other: &Sublattice) -> Result<Sublattice, LatticeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.rank() == 0 || other.rank() == 0 {
            return Ok(Sublattice::zero(self.ambient_dim));
        }
        // Integer kernel of the stacked matrix [B1; -B2]: each kernel row
        // (c1 | c2) satisfies c1*B1 = c2*B2, an element of the intersection.
        let mut stacked = rows_of(&self.basis);
        for row in &other.basis {
            stacked.push(row.neg().into_coords());
        }
        let kernel = linalg::left_kernel(&stacked);
        let r1 = self.rank();
        let gens: Vec<IntVector> = kernel
            .iter()
            .map(|k| {
                let c1 = [k[..r1].to_vec()];
                IntVector::new(linalg::mat_mul(&c1, &rows_of(&self.basis))[0].clone())
            })
            .collect();
        Sublattice::from_generators(self.ambient_dim, &gens)
    }

    /// `self ∩ Span_Q(spanning)`: the intersection of the lattice with the
    /// rational subspace spanned by the given vectors.
    pub fn saturate(&self, spanning: &[IntVector]) -> Result<Sublattice, LatticeError> {
        check_dims(self.ambient_dim, spanning)?;
        if self.rank() == 0 {
            return Ok(Sublattice::zero(self.ambient_dim));
        }
        // x in Span(S) iff x annihilates a basis of the orthogonal
        // complement of Span(S).
        let complement = if spanning.is_empty() {
            linalg::identity(self.ambient_dim)
        } else {
            linalg::right_kernel(&rows_of(spanning))
        };
        if complement.is_empty() {
            return Ok(self.clone());
        }
        // c * (B * K^T) = 0 characterizes the integer combinations of the
        // basis lying in the span.
        let bkt = linalg::mat_mul(&rows_of(&self.basis), &linalg::transpose(&complement));
        let coeffs = linalg::left_kernel(&bkt);
        let gens: Vec<IntVector> = coeffs
            .iter()
            .map(|c| {
                IntVector::new(linalg::mat_mul(std::slice::from_ref(c), &rows_of(&self.basis))[0].clone())
            })
            .collect();
        Sublattice::from_generators(self.ambient_dim, &gens)
    }

    /// All points of `self ∩ Span_Q(rho)` of the form `Σ t_i rho_i` with
    /// `0 <= t_i < 1`, enumerated through the Smith normal form of the
    /// quotient and sorted lexicographically. The origin is always included
    /// and the cardinality equals `[saturate(self, rho) : span(rho)]`.
    pub fn parallelepiped_points(&self, rho: &[IntVector]) -> Result<Vec<IntVector>, LatticeError> {
        check_dims(self.ambient_dim, rho)?;
        if linalg::rational_rank(&rows_of(rho)) != rho.len() {
            return Err(LatticeError::DependentGenerators);
        }
        for v in rho {
            if !self.contains(v)? {
                return Err(LatticeError::NotInLattice { vector: v.clone() });
            }
        }
        if rho.is_empty() {
            return Ok(vec![IntVector::zero(self.ambient_dim)]);
        }
        let saturated = self.saturate(rho)?;
        let k = rho.len();
        debug_assert_eq!(saturated.rank(), k);
        // rho in coordinates of the saturated lattice: integral since each
        // rho_i lies in self ∩ Span(rho).
        let change: Vec<Vec<Int>> = rho
            .iter()
            .map(|v| saturated.coords_of(v).expect("rho lies in the saturation"))
            .collect();
        let (diag, winv) = linalg::snf_with_col_inverse(change);
        debug_assert!(diag.iter().all(|d| d.is_positive()));
        let rho_rows = rows_of(rho);
        let basis_rows = rows_of(&saturated.basis);
        let mut points = Vec::new();
        let mut counters = vec![Int::zero(); k];
        loop {
            // representative y -> lattice coordinates y * V^{-1} -> ambient
            let y: Vec<Vec<Int>> = vec![counters.clone()];
            let x = linalg::mat_mul(&y, &winv);
            let p = IntVector::new(linalg::mat_mul(&x, &basis_rows)[0].clone());
            // reduce into the half-open parallelepiped along rho
            let q = linalg::solve_rational(&rho_rows, &p.to_rational())
                .expect("point lies in the span of rho");
            let mut reduced = p;
            for (qi, r) in q.iter().zip(rho.iter()) {
                let f = qi.floor().to_integer();
                if !f.is_zero() {
                    reduced = reduced.sub(&r.scale(&f));
                }
            }
            points.push(reduced);
            // mixed-radix increment over the SNF diagonal
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < diag[pos] {
                    break;
                }
                counters[pos] = Int::zero();
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        points.sort();
        points.dedup();
        Ok(points)
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

//! Integral lattices given by Gram matrices, and sublattices given by integer
//! coordinates of their generators.
//!
//! Everything is exact. Discriminants are kept signed; the identities that
//! relate indices to discriminants compare absolute values explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::certificate::{Check, FeasibilityCertificate, Relation};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::power::Quantity;
use crate::snf::smith_normal_form;
use crate::wire;

/// A free module of finite rank with a symmetric integer bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralLattice {
    gram: IntMatrix,
}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::InvalidInput(format!(
                "Gram matrix is {}x{}, not square",
                gram.nrows(),
                gram.ncols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
        }
        Ok(IntegralLattice { gram })
    }

    pub fn from_i64<const C: usize>(rows: &[[i64; C]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    /// The rank-one lattice `⟨a⟩`.
    pub fn rank_one<T: Into<BigInt>>(a: T) -> Self {
        IntegralLattice {
            gram: IntMatrix::diagonal([a.into()]),
        }
    }

    pub fn diagonal<I: IntoIterator<Item = i64>>(entries: I) -> Self {
        IntegralLattice {
            gram: IntMatrix::diagonal(entries.into_iter().map(BigInt::from)),
        }
    }

    pub fn zero_rank() -> Self {
        IntegralLattice {
            gram: IntMatrix::zeros(0, 0),
        }
    }

    pub fn hyperbolic_plane() -> Self {
        IntegralLattice {
            gram: IntMatrix::from_i64(&[[0, 1], [1, 0]]),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        !discriminant(self).is_zero()
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram)
    }
}

/// `E ⊂ L`: rows of `coords` are the coordinates of generators of `E` in the
/// basis of `L`, and are linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublatticeEmbedding {
    ambient: IntegralLattice,
    coords: IntMatrix,
}

impl SublatticeEmbedding {
    pub fn new(ambient: IntegralLattice, coords: IntMatrix) -> Result<Self> {
        if coords.ncols() != ambient.rank() {
            return Err(Error::InvalidInput(format!(
                "coordinates have {} columns but the ambient lattice has rank {}",
                coords.ncols(),
                ambient.rank()
            )));
        }
        if coords.rank() != coords.nrows() {
            return Err(Error::InvalidInput(
                "sublattice generators are linearly dependent".into(),
            ));
        }
        Ok(SublatticeEmbedding { ambient, coords })
    }

    pub fn identity(ambient: IntegralLattice) -> Self {
        let coords = IntMatrix::identity(ambient.rank());
        SublatticeEmbedding { ambient, coords }
    }

    pub fn ambient(&self) -> &IntegralLattice {
        &self.ambient
    }

    pub fn coords(&self) -> &IntMatrix {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.nrows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient.rank()
    }

    /// Primitive (saturated) in the ambient lattice: `L/E` is torsion-free.
    pub fn is_primitive(&self) -> bool {
        smith_normal_form(&self.coords)
            .elementary_divisors()
            .iter()
            .all(One::is_one)
    }
}

/// `[L : E]`, infinite when `E` has lower rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for LatticeIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `det(gram)`; the rank-0 lattice has discriminant 1.
pub fn discriminant(l: &IntegralLattice) -> BigInt {
    l.gram
        .determinant()
        .expect("Gram matrices are square by construction")
}

/// `L(e)`: the same module with the form multiplied by `e ≥ 1`.
pub fn rescale(l: &IntegralLattice, e: &BigInt) -> Result<IntegralLattice> {
    if !e.is_positive() {
        return Err(Error::InvalidInput(format!(
            "rescaling factor must be positive, got {e}"
        )));
    }
    Ok(IntegralLattice {
        gram: l.gram.scaled(e),
    })
}

pub fn sublattice_index(emb: &SublatticeEmbedding) -> LatticeIndex {
    if !emb.is_full_rank() {
        return LatticeIndex::Infinite;
    }
    let det = emb.coords.determinant().expect("square when full rank");
    LatticeIndex::Finite(det.abs())
}

/// `coords · gram(L) · coordsᵀ`
pub fn induced_gram(emb: &SublatticeEmbedding) -> IntegralLattice {
    let g = &(&emb.coords * &emb.ambient.gram) * &emb.coords.transpose();
    IntegralLattice::new(g).expect("congruent to a symmetric matrix")
}

/// Basis of `{x ∈ L : ⟨x, e⟩ = 0 for every generator e of E}`, saturated in
/// `L`.
pub fn orthogonal_complement(
    l: &IntegralLattice,
    emb: &SublatticeEmbedding,
) -> Result<SublatticeEmbedding> {
    if emb.ambient != *l {
        return Err(Error::Precondition(
            "sublattice is not embedded in the given lattice".into(),
        ));
    }
    // x ⟂ E  ⇔  (coords · gram) · x = 0
    let pairing = &emb.coords * &l.gram;
    let kernel = smith_normal_form(&pairing).kernel_basis();
    Ok(SublatticeEmbedding {
        ambient: l.clone(),
        coords: kernel,
    })
}

pub fn direct_sum(l1: &IntegralLattice, l2: &IntegralLattice) -> IntegralLattice {
    IntegralLattice {
        gram: l1.gram.block_diagonal(&l2.gram),
    }
}

/// Certifies `|disc(K)·disc(E) / disc(L)| = [L : K ⊕ E]²` for mutually
/// orthogonal `K`, `E` of complementary rank in a nondegenerate `L`.
pub fn glue_index_identity(
    l: &IntegralLattice,
    k: &SublatticeEmbedding,
    e: &SublatticeEmbedding,
) -> Result<FeasibilityCertificate> {
    if k.ambient != *l || e.ambient != *l {
        return Err(Error::Precondition(
            "both sublattices must live in the given lattice".into(),
        ));
    }
    if k.rank() + e.rank() != l.rank() {
        return Err(Error::Precondition(format!(
            "ranks {} + {} do not add up to {}",
            k.rank(),
            e.rank(),
            l.rank()
        )));
    }
    let cross = &(&k.coords * &l.gram) * &e.coords.transpose();
    if !cross.is_zero() {
        return Err(Error::Precondition(
            "sublattices are not mutually orthogonal".into(),
        ));
    }
    let disc_l = discriminant(l);
    if disc_l.is_zero() {
        return Err(Error::Precondition("ambient lattice is degenerate".into()));
    }
    let stacked = k.coords.vstack(&e.coords)?;
    let index = stacked.determinant()?.abs();
    if index.is_zero() {
        return Err(Error::Precondition(
            "K + E is not a direct sum of full rank".into(),
        ));
    }
    let disc_k = discriminant(&induced_gram(k));
    let disc_e = discriminant(&induced_gram(e));
    let ratio = BigRational::new(disc_k * disc_e, disc_l).abs();
    let check = Check::compare(
        "|disc(K)·disc(E)/disc(L)| = [L : K⊕E]^2",
        Quantity::Rational(ratio),
        Relation::Eq,
        Quantity::int(&index * &index),
    );
    Ok(FeasibilityCertificate::from_checks(vec![check]))
}

#[derive(Serialize, Deserialize)]
struct LatticeWire {
    rank: usize,
    #[serde(with = "wire::dec_matrix")]
    gram: Vec<Vec<BigInt>>,
}

impl Serialize for IntegralLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeWire {
            rank: self.rank(),
            gram: self.gram.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegralLattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = LatticeWire::deserialize(d)?;
        if w.gram.len() != w.rank {
            return Err(D::Error::custom(format!(
                "rank {} but Gram matrix has {} rows",
                w.rank,
                w.gram.len()
            )));
        }
        let gram = IntMatrix::from_rows_with_cols(w.gram, w.rank).map_err(D::Error::custom)?;
        IntegralLattice::new(gram).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingWire {
    ambient: IntegralLattice,
    #[serde(with = "wire::dec_matrix")]
    coords: Vec<Vec<BigInt>>,
}

impl Serialize for SublatticeEmbedding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EmbeddingWire {
            ambient: self.ambient.clone(),
            coords: self.coords.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SublatticeEmbedding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = EmbeddingWire::deserialize(d)?;
        let cols = w.ambient.rank();
        let coords = IntMatrix::from_rows_with_cols(w.coords, cols).map_err(D::Error::custom)?;
        SublatticeEmbedding::new(w.ambient, coords).map_err(D::Error::custom)
    }
}

//! Exact lattice arithmetic and certified numerical bounds on the degree of
//! irrationality, fibering gonality and fibering genus of K3 surfaces and
//! hyper-Kähler manifolds.

pub mod bounds;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod k3;
pub mod lattice;
pub mod matrix;
pub mod parallel;
pub mod power;
pub mod report;
pub mod snf;
pub mod wire;

pub use certificate::{Check, FeasibilityCertificate, Relation, Verdict};
pub use error::{Error, Result};
pub use lattice::{IntegralLattice, LatticeIndex, SublatticeEmbedding};
pub use matrix::IntMatrix;
pub use power::{PowerExpr, Quantity};
pub use snf::{smith_normal_form, SnfDecomposition};

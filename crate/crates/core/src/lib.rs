//! Root systems, Weyl groups, Coxeter complexes, Chevalley groups over prime
//! fields and their Tits buildings, with the homology needed to study the
//! Steinberg module.

pub mod building;
pub mod cache;
pub mod chevalley_fq;
pub mod coxcomplex;
pub mod error;
pub mod field;
pub mod homology;
pub mod integral_type_a;
pub mod linalg;
pub mod ring;
pub mod rootsys;
pub mod weyl;

pub use building::{Subspace, TitsBuilding};
pub use cache::Cache;
pub use chevalley_fq::{ChevalleyGroup, GroupElement, GroupEnumeration, GroupKind, GroupSpec};
pub use coxcomplex::CoxeterComplex;
pub use error::{Error, Result};
pub use field::PrimeFieldElement;
pub use homology::{Chain, HomologyProfile, SimplicialComplex};
pub use integral_type_a::ModularSymbol;
pub use ring::{Coefficients, Field, Integers, PrimeField, Rationals, Ring};
pub use rootsys::{CartanType, Family, RootSystem};
pub use weyl::{CosetTable, EnumerateOptions, WeylElement, WeylGroup};

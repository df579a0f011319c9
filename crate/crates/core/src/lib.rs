//! Weak solutions of `y'(t) = A y(t)` on the whole line for normal
//! operators in a diagonal model: the region criterion for smoothness,
//! Borel functional calculus with certified domain tests, orbit and
//! derivative probes, and construction of non-smooth initial data.

pub mod error;
pub mod evolution;
pub mod family;
pub mod forge;
pub mod numerics;
pub mod region;
pub mod spectral;

pub use error::{Error, Result};
pub use family::{FamilyKind, SpectrumFamily};
pub use region::{ComplexPoint, CriterionVerdict, RegionParams};
pub use spectral::{BorelSymbol, DiagonalOperator, DomainVerdict, SpectralVector, TailLaw, TailModel};

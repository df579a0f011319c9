//! The diagonal model of a normal operator: `A e_n = λ_n e_n` on ℓ².
//! Spectral measures become coordinate masks and the Borel calculus acts
//! coefficientwise, so `f ∈ D(F(A))` reduces to `Σ |F(λ_k) f_k|² < ∞`.

mod calculus;
mod domain;
mod operator;
mod symbol;
mod vector;

pub use calculus::{apply_symbol, apply_symbol_with_cap, pairing, spectral_projection, Pairing, Truncated};
pub use domain::{domain_test, DomainVerdict, TrailPoint, DEFAULT_CAP, DEFAULT_TRUNCATION};
pub use operator::{reflect_operator, DiagonalOperator};
pub use symbol::{BorelSymbol, RegionPredicate};
pub use vector::{SpectralVector, TailLaw, TailModel, TailPlacement};

//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use smoothlab_core::{DiagonalOperator, FamilyKind, SpectralVector, SpectrumFamily, TailLaw, TailModel};

pub fn operator(kind: FamilyKind) -> DiagonalOperator {
    DiagonalOperator::new(SpectrumFamily::new(kind).expect("valid family"))
}

/// `e^{-k²}` on every coordinate.
pub fn gaussian() -> SpectralVector {
    let tail = TailModel::contiguous(TailLaw::ExpOfSquares { alpha: 1.0 }, 1).expect("valid tail");
    SpectralVector::new(Default::default(), tail).expect("valid vector")
}

/// `k^{-2}` on coordinates `1..=n`, no tail.
pub fn dense(n: usize) -> SpectralVector {
    SpectralVector::finite((1..=n).map(|k| (k, Complex64::new(1.0 / (k * k) as f64, 0.0)))).expect("valid vector")
}

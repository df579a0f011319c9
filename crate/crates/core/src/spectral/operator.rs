use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::SpectrumFamily;
use crate::region::ComplexPoint;

/// A normal operator diagonal in a fixed orthonormal basis: `A e_n = λ_n e_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagonalOperator {
    spectrum: SpectrumFamily,
}

impl DiagonalOperator {
    pub fn new(spectrum: SpectrumFamily) -> Self {
        DiagonalOperator { spectrum }
    }

    pub fn spectrum(&self) -> &SpectrumFamily {
        &self.spectrum
    }

    /// Dimension of the space, `None` when infinite.
    pub fn dim(&self) -> Option<usize> {
        self.spectrum.len()
    }

    /// `λ_n`, with range and representability checked.
    pub fn eigenvalue(&self, n: usize) -> Result<ComplexPoint> {
        if let Some(dim) = self.dim() {
            if n == 0 || n > dim {
                return Err(Error::OutsideSpace { index: n, dim });
            }
        }
        self.spectrum.eigenvalue(n).ok_or(Error::Unrepresentable { index: n })
    }

    /// Whether coordinate `n` exists and has a representable eigenvalue.
    pub fn has_coordinate(&self, n: usize) -> bool {
        self.eigenvalue(n).is_ok()
    }

    /// `-A`.
    pub fn reflect(&self) -> Self {
        DiagonalOperator {
            spectrum: self.spectrum.reflected(),
        }
    }
}

/// `-A`, for running the `Re λ -> -∞` case through the `+∞` machinery.
pub fn reflect_operator(a: &DiagonalOperator) -> DiagonalOperator {
    a.reflect()
}

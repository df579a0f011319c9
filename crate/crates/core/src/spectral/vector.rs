use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient law of a tail: `|f_k|` as a function of the tail index `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailLaw {
    Zero,
    /// `k^{-p}`, `p > 1`
    PowerLaw {
        p: f64,
    },
    /// `e^{-αk}`
    ExpLaw {
        alpha: f64,
    },
    /// `e^{-αk²}`
    ExpOfSquares {
        alpha: f64,
    },
    /// `e^{-c·k·|Re λ|}` over a witness subsequence with `|Re λ| -> ∞`
    CoupledExp {
        c: f64,
    },
}

impl TailLaw {
    /// `ln |f_k|²`; `None` for laws that depend on the eigenvalue.
    pub fn ln_sq(&self, k: usize) -> Option<f64> {
        let x = k as f64;
        match *self {
            TailLaw::Zero => Some(f64::NEG_INFINITY),
            TailLaw::PowerLaw { p } => Some(-2.0 * p * x.ln()),
            TailLaw::ExpLaw { alpha } => Some(-2.0 * alpha * x),
            TailLaw::ExpOfSquares { alpha } => Some(-2.0 * alpha * x * x),
            TailLaw::CoupledExp { .. } => None,
        }
    }

    /// `|f_k|` for laws independent of the eigenvalue.
    pub fn value(&self, k: usize) -> Option<f64> {
        let x = k as f64;
        match *self {
            TailLaw::Zero => Some(0.0),
            TailLaw::PowerLaw { p } => Some(x.powf(-p)),
            TailLaw::ExpLaw { alpha } => Some((-alpha * x).exp()),
            TailLaw::ExpOfSquares { alpha } => Some((-alpha * x * x).exp()),
            TailLaw::CoupledExp { .. } => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            TailLaw::Zero => "zero",
            TailLaw::PowerLaw { .. } => "power-law",
            TailLaw::ExpLaw { .. } => "exp-law",
            TailLaw::ExpOfSquares { .. } => "exp-of-squares",
            TailLaw::CoupledExp { .. } => "coupled-exp",
        }
    }
}

/// Which coordinates a tail lives on.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum TailPlacement {
    /// Eigenbasis coordinates `k >= start`.
    #[default]
    Contiguous,
    /// One coordinate per witness level `k >= start`, at eigenbasis
    /// positions not stored explicitly. The eigenvalue there satisfies
    /// `|λ| > k⁴`, `|Im λ| > e^{2k|Re λ|}` and `|Re λ| <= omega`.
    WitnessBoundedRe { omega: f64 },
    /// As above but with `|Re λ| >= 1` instead of a bound on `Re λ`.
    WitnessUnboundedRe,
}

/// An analytic law for the coefficients past the stored support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTail", into = "RawTail")]
pub struct TailModel {
    law: TailLaw,
    start: usize,
    placement: TailPlacement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum TailKind {
    Zero,
    PowerLaw,
    ExpLaw,
    ExpOfSquares,
    CoupledExp,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTail {
    kind: TailKind,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default = "one")]
    start: usize,
    #[serde(default, skip_serializing_if = "is_contiguous")]
    placement: TailPlacement,
}

fn one() -> usize {
    1
}

fn is_contiguous(p: &TailPlacement) -> bool {
    *p == TailPlacement::Contiguous
}

impl TryFrom<RawTail> for TailModel {
    type Error = Error;
    fn try_from(raw: RawTail) -> Result<Self> {
        let expect = |name: &str| -> Result<f64> {
            let keys: Vec<&String> = raw.params.keys().collect();
            if keys.len() != 1 || keys[0] != name {
                return Err(Error::invalid(format!(
                    "tail params must be exactly {{\"{name}\"}}, got {keys:?}"
                )));
            }
            Ok(raw.params[name])
        };
        let law = match raw.kind {
            TailKind::Zero => {
                if !raw.params.is_empty() {
                    return Err(Error::invalid("zero tail takes no params"));
                }
                TailLaw::Zero
            }
            TailKind::PowerLaw => TailLaw::PowerLaw { p: expect("p")? },
            TailKind::ExpLaw => TailLaw::ExpLaw {
                alpha: expect("alpha")?,
            },
            TailKind::ExpOfSquares => TailLaw::ExpOfSquares {
                alpha: expect("alpha")?,
            },
            TailKind::CoupledExp => TailLaw::CoupledExp { c: expect("c")? },
        };
        TailModel::new(law, raw.start, raw.placement)
    }
}

impl From<TailModel> for RawTail {
    fn from(t: TailModel) -> Self {
        let mut params = BTreeMap::new();
        let kind = match t.law {
            TailLaw::Zero => TailKind::Zero,
            TailLaw::PowerLaw { p } => {
                params.insert("p".into(), p);
                TailKind::PowerLaw
            }
            TailLaw::ExpLaw { alpha } => {
                params.insert("alpha".into(), alpha);
                TailKind::ExpLaw
            }
            TailLaw::ExpOfSquares { alpha } => {
                params.insert("alpha".into(), alpha);
                TailKind::ExpOfSquares
            }
            TailLaw::CoupledExp { c } => {
                params.insert("c".into(), c);
                TailKind::CoupledExp
            }
        };
        RawTail {
            kind,
            params,
            start: t.start,
            placement: t.placement,
        }
    }
}

impl TailModel {
    pub const ZERO: TailModel = TailModel {
        law: TailLaw::Zero,
        start: 1,
        placement: TailPlacement::Contiguous,
    };

    pub fn new(law: TailLaw, start: usize, placement: TailPlacement) -> Result<Self> {
        if start == 0 {
            return Err(Error::invalid("tail start must be >= 1"));
        }
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(format!("{} needs {name} > 0", law.name())))
            }
        };
        match law {
            TailLaw::Zero => {}
            TailLaw::PowerLaw { p } => {
                if !(p.is_finite() && p > 1.0) {
                    return Err(Error::invalid("power-law needs p > 1"));
                }
            }
            TailLaw::ExpLaw { alpha } | TailLaw::ExpOfSquares { alpha } => positive("alpha", alpha)?,
            TailLaw::CoupledExp { c } => positive("c", c)?,
        }
        match (law, placement) {
            (TailLaw::CoupledExp { .. }, TailPlacement::WitnessUnboundedRe) => {}
            (TailLaw::CoupledExp { .. }, _) | (_, TailPlacement::WitnessUnboundedRe) => {
                return Err(Error::invalid(
                    "coupled-exp tails live exactly on witness-unbounded-re placements",
                ))
            }
            (_, TailPlacement::WitnessBoundedRe { omega }) if !(omega.is_finite() && omega >= 0.0) => {
                return Err(Error::invalid("omega must be finite and >= 0"))
            }
            _ => {}
        }
        Ok(TailModel { law, start, placement })
    }

    pub fn contiguous(law: TailLaw, start: usize) -> Result<Self> {
        Self::new(law, start, TailPlacement::Contiguous)
    }

    pub fn law(&self) -> TailLaw {
        self.law
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn placement(&self) -> TailPlacement {
        self.placement
    }

    pub fn is_zero(&self) -> bool {
        self.law == TailLaw::Zero
    }

    /// Tail coefficient at eigenbasis index `k`, if `k` is a known tail
    /// coordinate (contiguous placement only).
    pub fn coefficient_at(&self, k: usize) -> Option<f64> {
        match self.placement {
            TailPlacement::Contiguous if k >= self.start && !self.is_zero() => self.law.value(k),
            _ => None,
        }
    }
}

/// Coefficients of a vector in the eigenbasis: a finite explicit part and
/// an analytic tail. Tail coefficients are real and nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVector", into = "RawVector")]
pub struct SpectralVector {
    entries: BTreeMap<usize, Complex64>,
    tail: TailModel,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector {
    entries: Vec<(usize, f64, f64)>,
    #[serde(default = "zero_tail")]
    tail: TailModel,
}

fn zero_tail() -> TailModel {
    TailModel::ZERO
}

impl TryFrom<RawVector> for SpectralVector {
    type Error = Error;
    fn try_from(raw: RawVector) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, re, im) in raw.entries {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::invalid(format!("entry {k} is not finite")));
            }
            if entries.insert(k, Complex64::new(re, im)).is_some() {
                return Err(Error::invalid(format!("duplicate entry index {k}")));
            }
        }
        SpectralVector::new(entries, raw.tail)
    }
}

impl From<SpectralVector> for RawVector {
    fn from(v: SpectralVector) -> Self {
        RawVector {
            entries: v.entries.iter().map(|(&k, z)| (k, z.re, z.im)).collect(),
            tail: v.tail,
        }
    }
}

impl SpectralVector {
    pub fn new(entries: BTreeMap<usize, Complex64>, tail: TailModel) -> Result<Self> {
        if entries.contains_key(&0) {
            return Err(Error::invalid("eigenbasis indices start at 1"));
        }
        if let Some((&k, _)) = entries.iter().find(|(_, z)| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Overflow { index: k });
        }
        if tail.placement == TailPlacement::Contiguous && !tail.is_zero() {
            if let Some((&last, _)) = entries.last_key_value() {
                if last >= tail.start {
                    return Err(Error::invalid(format!(
                        "entry {last} overlaps the tail starting at {}",
                        tail.start
                    )));
                }
            }
        }
        Ok(SpectralVector { entries, tail })
    }

    pub fn finite<I: IntoIterator<Item = (usize, Complex64)>>(entries: I) -> Result<Self> {
        Self::new(entries.into_iter().collect(), TailModel::ZERO)
    }

    pub fn zero() -> Self {
        SpectralVector {
            entries: BTreeMap::new(),
            tail: TailModel::ZERO,
        }
    }

    /// The basis vector `e_n`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::finite([(n, Complex64::new(1.0, 0.0))])
    }

    pub fn entries(&self) -> &BTreeMap<usize, Complex64> {
        &self.entries
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    pub fn has_tail(&self) -> bool {
        !self.tail.is_zero()
    }

    /// Coefficient at eigenbasis index `k` where known. Unseen witness
    /// coordinates report `None`.
    pub fn coefficient(&self, k: usize) -> Option<Complex64> {
        if let Some(z) = self.entries.get(&k) {
            return Some(*z);
        }
        match self.tail.placement {
            TailPlacement::Contiguous => Some(Complex64::new(self.tail.coefficient_at(k).unwrap_or(0.0), 0.0)),
            _ => None,
        }
    }

    /// Explicit entries together with contiguous tail coordinates up to
    /// `n`, ascending by index. Tail coordinates are emitted while the law
    /// is nonzero and `keep(k)` holds; the index after the last emitted tail
    /// coordinate is returned alongside (where analytic bounds take over).
    pub fn window(&self, n: usize, mut keep: impl FnMut(usize) -> bool) -> (Vec<(usize, Complex64)>, usize) {
        let mut out: Vec<(usize, Complex64)> = self.entries.iter().map(|(&k, &z)| (k, z)).collect();
        let mut next = self.tail.start;
        if self.tail.placement == TailPlacement::Contiguous && !self.tail.is_zero() {
            while next <= n && keep(next) {
                let v = self.tail.law.value(next).unwrap_or(0.0);
                if v == 0.0 {
                    break;
                }
                out.push((next, Complex64::new(v, 0.0)));
                next += 1;
            }
        }
        (out, next)
    }

    pub fn explicit_norm_sq(&self) -> f64 {
        crate::numerics::compensated_sum(self.entries.values().map(|z| z.norm_sqr()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_round_trips() {
        let text = r#"{"entries":[[1,0.5,0.0],[3,0.0,-1.0]],"tail":{"kind":"power-law","params":{"p":2.0},"start":4}}"#;
        let v: SpectralVector = serde_json::from_str(text).unwrap();
        assert_eq!(v.coefficient(3), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(v.coefficient(4), Some(Complex64::new(1.0 / 16.0, 0.0)));
        assert_eq!(v.coefficient(2), Some(Complex64::new(0.0, 0.0)));
        assert_eq!(serde_json::to_string(&v).unwrap(), text);
    }

    #[test]
    fn zero_tail_is_default() {
        let v: SpectralVector = serde_json::from_str(r#"{"entries":[[2,1.0,0.0]]}"#).unwrap();
        assert!(!v.has_tail());
        assert_eq!(v, SpectralVector::unit(2).unwrap());
    }

    #[test]
    fn rejects_bad_vectors() {
        let bad = [
            r#"{"entries":[[0,1.0,0.0]]}"#,
            r#"{"entries":[[1,1.0,0.0],[1,2.0,0.0]]}"#,
            r#"{"entries":[[5,1.0,0.0]],"tail":{"kind":"power-law","params":{"p":2.0},"start":5}}"#,
            r#"{"entries":[],"tail":{"kind":"power-law","params":{"p":1.0}}}"#,
            r#"{"entries":[],"tail":{"kind":"exp-law","params":{"p":1.0}}}"#,
            r#"{"entries":[],"tail":{"kind":"coupled-exp","params":{"c":1.0}}}"#,
            r#"{"entries":[],"extra":1}"#,
        ];
        for text in bad {
            assert!(serde_json::from_str::<SpectralVector>(text).is_err(), "{text}");
        }
    }

    #[test]
    fn window_materializes_contiguous_tail() {
        let tail = TailModel::contiguous(TailLaw::ExpOfSquares { alpha: 1.0 }, 2).unwrap();
        let v = SpectralVector::new([(1, Complex64::new(2.0, 0.0))].into(), tail).unwrap();
        let (w, next) = v.window(1000, |_| true);
        // e^{-k²} underflows to zero past k = 27
        assert_eq!(next, 28);
        assert_eq!(w.len(), 27);
        let (w, next) = v.window(5, |_| true);
        assert_eq!((w.len(), next), (5, 6));
    }

    #[test]
    fn witness_tail_is_not_materialized() {
        let tail = TailModel::new(
            TailLaw::PowerLaw { p: 2.0 },
            3,
            TailPlacement::WitnessBoundedRe { omega: 0.0 },
        )
        .unwrap();
        let v = SpectralVector::new(
            [(1, Complex64::new(1.0, 0.0)), (7, Complex64::new(0.25, 0.0))].into(),
            tail,
        )
        .unwrap();
        let (w, _) = v.window(100, |_| true);
        assert_eq!(w.len(), 2);
        assert_eq!(v.coefficient(9), None);
    }
}

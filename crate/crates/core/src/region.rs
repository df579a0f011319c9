//! The logarithmic region family `L(b-, b+)` in the complex plane and the
//! bounded-complement smoothness criterion.
//!
//! A point `λ` lies in `L(b-, b+)` when
//!
//! ```text
//! Re λ <= min(0, -b- ln|Im λ|)   or   Re λ >= max(0, b+ ln|Im λ|)
//! ```
//!
//! with `ln|Im λ| = -inf` on the real axis, so every real point is inside.
//! All weak solutions of `y' = Ay` on the real line are C^∞ exactly when
//! the part of the spectrum outside some `L(b-, b+)` is bounded.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::SpectrumFamily;

/// A finite point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ComplexPoint {
    re: f64,
    im: f64,
}

impl ComplexPoint {
    pub const ORIGIN: ComplexPoint = ComplexPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexPoint { re, im })
        } else {
            Err(Error::invalid(format!("non-finite point ({re}, {im})")))
        }
    }

    /// `None` when either coordinate is infinite or NaN.
    pub fn finite(re: f64, im: f64) -> Option<Self> {
        Self::new(re, im).ok()
    }

    #[inline]
    pub fn re(&self) -> f64 {
        self.re
    }

    #[inline]
    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// `|λ|²` computed symmetrically in the sign of each coordinate.
    pub fn modulus_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn neg(&self) -> Self {
        ComplexPoint {
            re: -self.re,
            im: -self.im,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn coords(&self) -> RegionCoords {
        RegionCoords::from_point(*self)
    }
}

impl TryFrom<[f64; 2]> for ComplexPoint {
    type Error = Error;
    fn try_from([re, im]: [f64; 2]) -> Result<Self> {
        ComplexPoint::new(re, im)
    }
}

impl From<ComplexPoint> for [f64; 2] {
    fn from(p: ComplexPoint) -> Self {
        [p.re, p.im]
    }
}

/// The pair `(b-, b+)` selecting one member of the region family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRegionParams")]
pub struct RegionParams {
    b_minus: f64,
    b_plus: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegionParams {
    b_minus: f64,
    b_plus: f64,
}

impl TryFrom<RawRegionParams> for RegionParams {
    type Error = Error;
    fn try_from(raw: RawRegionParams) -> Result<Self> {
        RegionParams::new(raw.b_minus, raw.b_plus)
    }
}

impl RegionParams {
    pub fn new(b_minus: f64, b_plus: f64) -> Result<Self> {
        if !(b_minus.is_finite() && b_minus > 0.0) {
            return Err(Error::invalid("b_minus must be > 0"));
        }
        if !(b_plus.is_finite() && b_plus > 0.0) {
            return Err(Error::invalid("b_plus must be > 0"));
        }
        Ok(RegionParams { b_minus, b_plus })
    }

    /// Both parameters equal to `b`.
    pub fn symmetric(b: f64) -> Result<Self> {
        Self::new(b, b)
    }

    pub fn b_minus(&self) -> f64 {
        self.b_minus
    }

    pub fn b_plus(&self) -> f64 {
        self.b_plus
    }

    /// Parameters of the mirror image `-L(b-, b+) = L(b+, b-)`.
    pub fn swapped(&self) -> Self {
        RegionParams {
            b_minus: self.b_plus,
            b_plus: self.b_minus,
        }
    }

    /// `{2^-10, ..., 2^10}²` in row-major order (b- outer), 441 points.
    pub fn default_grid() -> Vec<RegionParams> {
        let exps = -10..=10;
        exps.clone()
            .flat_map(|i| {
                exps.clone().map(move |j| RegionParams {
                    b_minus: 2f64.powi(i),
                    b_plus: 2f64.powi(j),
                })
            })
            .collect()
    }
}

/// What the region test needs from a point: its real part and
/// `ln|Im λ|`, the latter `None` on the real axis.
///
/// Parametric families produce these in log space so membership can be
/// decided even where `Im λ` itself overflows a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCoords {
    pub re: f64,
    pub ln_abs_im: Option<f64>,
}

impl RegionCoords {
    pub fn from_point(p: ComplexPoint) -> Self {
        RegionCoords {
            re: p.re,
            ln_abs_im: if p.im == 0.0 { None } else { Some(p.im.abs().ln()) },
        }
    }

    pub fn negated(self) -> Self {
        RegionCoords {
            re: -self.re,
            ln_abs_im: self.ln_abs_im,
        }
    }

    pub fn in_region(&self, b: RegionParams) -> bool {
        let Some(l) = self.ln_abs_im else {
            // thresholds collapse to 0 on both sides
            return true;
        };
        self.re <= 0f64.min(-b.b_minus * l) || self.re >= 0f64.max(b.b_plus * l)
    }
}

pub fn in_region(lambda: ComplexPoint, b: RegionParams) -> bool {
    lambda.coords().in_region(b)
}

/// Indices `n` in `1..=n_max` whose eigenvalue lies outside `L(b)`,
/// ascending. Finite spectra are scanned up to their length.
pub fn exceptional_set(spec: &SpectrumFamily, b: RegionParams, n_max: usize) -> Vec<usize> {
    let limit = spec.len().map_or(n_max, |len| len.min(n_max));
    (1..=limit).filter(|&n| !spec.region_coords(n).in_region(b)).collect()
}

/// Outcome of the criterion check. `HoldsUpTo`/`FailsUpTo` are scoped to
/// the truncation level; `Analytic*` come from closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CriterionVerdict {
    HoldsUpTo {
        n: usize,
        region: RegionParams,
        exceptional_indices: Vec<usize>,
    },
    FailsUpTo {
        n: usize,
        witnesses_per_region: Vec<RegionWitnesses>,
    },
    AnalyticHolds {
        region: RegionParams,
    },
    AnalyticFails {
        reason: String,
    },
}

impl CriterionVerdict {
    pub fn holds(&self) -> bool {
        matches!(
            self,
            CriterionVerdict::HoldsUpTo { .. } | CriterionVerdict::AnalyticHolds { .. }
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            CriterionVerdict::HoldsUpTo { .. } => "HoldsUpTo",
            CriterionVerdict::FailsUpTo { .. } => "FailsUpTo",
            CriterionVerdict::AnalyticHolds { .. } => "AnalyticHolds",
            CriterionVerdict::AnalyticFails { .. } => "AnalyticFails",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionWitnesses {
    pub region: RegionParams,
    pub indices: Vec<usize>,
}

/// How many of the latest exceptional indices a `FailsUpTo` keeps per region.
const LATEST_WITNESSES: usize = 8;

/// Checks the criterion on a truncation of `spec` over `b_grid`.
///
/// Families whose closed-form verdict does not depend on `b` answer
/// analytically. Otherwise a region "holds" when its exceptional set is
/// empty beyond `n/2`; the region with the fewest exceptions wins, ties
/// going to the earlier grid entry.
pub fn criterion_check(spec: &SpectrumFamily, b_grid: &[RegionParams], n: usize) -> Result<CriterionVerdict> {
    if b_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if n == 0 {
        return Err(Error::invalid("truncation level must be >= 1"));
    }
    if let Some(v) = spec.uniform_verdict() {
        return Ok(v);
    }
    let scans = b_grid.iter().map(|&b| (b, exceptional_set(spec, b, n))).collect();
    criterion_from_scans(spec, scans, n)
}

/// Assembles a verdict from per-region exceptional sets computed by the
/// caller (possibly in parallel). `scans` must be in grid order.
pub fn criterion_from_scans(
    spec: &SpectrumFamily,
    scans: Vec<(RegionParams, Vec<usize>)>,
    n: usize,
) -> Result<CriterionVerdict> {
    if scans.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(len) = spec.len() {
        // a finite spectrum is bounded, so every region holds
        let (region, set) = scans.into_iter().min_by_key(|(_, set)| set.len()).expect("nonempty");
        return Ok(CriterionVerdict::HoldsUpTo {
            n: len.min(n),
            region,
            exceptional_indices: set,
        });
    }
    let quiet_from = n / 2;
    let best = scans
        .iter()
        .filter(|(_, set)| set.last().is_none_or(|&last| last <= quiet_from))
        .min_by_key(|(_, set)| set.len());
    if let (Some((region, set)), true) = (best, spec.modulus_growth()) {
        return Ok(CriterionVerdict::HoldsUpTo {
            n,
            region: *region,
            exceptional_indices: set.clone(),
        });
    }
    let witnesses_per_region = scans
        .into_iter()
        .map(|(region, set)| {
            let skip = set.len().saturating_sub(LATEST_WITNESSES);
            RegionWitnesses {
                region,
                indices: set[skip..].to_vec(),
            }
        })
        .collect();
    Ok(CriterionVerdict::FailsUpTo {
        n,
        witnesses_per_region,
    })
}

/// One row of the region boundary: the left curve `min(0, -b- ln|y|)` and
/// the right curve `max(0, b+ ln|y|)` at height `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub im: f64,
    pub left_re: f64,
    pub right_re: f64,
}

pub fn boundary_at(b: RegionParams, y: f64) -> BoundarySample {
    let (left_re, right_re) = if y == 0.0 {
        (0.0, 0.0)
    } else {
        let l = y.abs().ln();
        (0f64.min(-b.b_minus * l), 0f64.max(b.b_plus * l))
    };
    BoundarySample {
        im: y,
        left_re,
        right_re,
    }
}

/// `count` equispaced samples of both boundary curves over `im_range`.
pub fn region_boundary_samples(b: RegionParams, im_range: (f64, f64), count: usize) -> Result<Vec<BoundarySample>> {
    let (lo, hi) = im_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::DegenerateInterval { lo, hi });
    }
    if count < 2 {
        return Err(Error::invalid("boundary sample count must be >= 2"));
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let y = if i == count - 1 { hi } else { lo + step * i as f64 };
            boundary_at(b, y)
        })
        .collect())
}

/// CSV with header `im,left_re,right_re`, LF line endings, shortest
/// round-trip float formatting.
pub fn boundary_csv(samples: &[BoundarySample]) -> String {
    let mut out = String::from("im,left_re,right_re\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_float(s.im),
            format_float(s.left_re),
            format_float(s.right_re)
        );
    }
    out
}

/// Shortest round-trip formatting, identical to how the JSON outputs print
/// numbers. Negative zero prints as `0.0`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

//! Eigenvalue enumerations `n ↦ λ_n` for the diagonal model.
//!
//! Besides explicit finite lists there is a small catalog of parametric
//! families with hand-derived properties: closed-form criterion verdicts,
//! the long-run behaviour of `Re λ_n`, and growth envelopes that the
//! domain tests use to bound series tails.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::{ComplexPoint, CriterionVerdict, RegionCoords, RegionParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyKind {
    /// Explicit eigenvalues `λ_1..λ_len`.
    FiniteList { points: Vec<ComplexPoint> },
    /// `λ_n = (αn + β, 0)`: a self-adjoint operator.
    RealLine { alpha: f64, beta: f64 },
    /// `λ_n = (c ln n, n^p)`.
    LogStrip { c: f64, p: f64 },
    /// `λ_n = (0, r^n)`, `r > 1`.
    ImaginaryExponential { r: f64 },
    /// `λ_n = (n^q, e^{s n^r})`.
    ExpImaginaryVsPolyReal {
        q: f64,
        s: f64,
        #[serde(default = "one")]
        r: f64,
    },
    /// `λ_n = -μ_n` where `μ` is the inner family.
    Reflected { of: Box<FamilyKind> },
}

fn one() -> f64 {
    1.0
}

/// Long-run behaviour of `Re λ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReTrend {
    /// `|Re λ_n| <= ω` for all `n`.
    Bounded(f64),
    PlusInfinity,
    MinusInfinity,
}

/// `|Re λ_k| <= a + b·k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBound {
    pub a: f64,
    pub b: f64,
}

/// `|λ_k| <= c·k^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBound {
    pub c: f64,
    pub d: f64,
}

/// Lower growth of `|λ_k|` for `k >= from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerGrowth {
    /// `|λ_k| >= c·k^d`
    Poly { c: f64, d: f64, from: usize },
    /// `|λ_k| >= c·e^{rate·k}`
    Exp { c: f64, rate: f64, from: usize },
}

/// Growth information valid for every index `k >= 1`; `None` entries mean
/// no bound of that shape exists.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Envelope {
    pub re_abs: Option<LinearBound>,
    pub modulus_upper: Option<PowerBound>,
    pub modulus_lower: Option<LowerGrowth>,
}

/// Hand-derived verdict of the criterion for a parametric family.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub holds: bool,
    /// A region that works, when the criterion holds.
    pub region: Option<RegionParams>,
    /// The verdict is the same for every choice of `(b-, b+)`.
    pub uniform_in_b: bool,
    pub note: String,
}

/// A validated spectrum family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilyKind", into = "FamilyKind")]
pub struct SpectrumFamily {
    kind: FamilyKind,
}

impl TryFrom<FamilyKind> for SpectrumFamily {
    type Error = Error;
    fn try_from(kind: FamilyKind) -> Result<Self> {
        SpectrumFamily::new(kind)
    }
}

impl From<SpectrumFamily> for FamilyKind {
    fn from(f: SpectrumFamily) -> Self {
        f.kind
    }
}

fn validate(kind: &FamilyKind) -> Result<()> {
    let finite = |name: &str, v: f64| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!("{name} must be finite")))
        }
    };
    match kind {
        FamilyKind::FiniteList { points } => {
            if points.is_empty() {
                return Err(Error::invalid("finite-list needs at least one point"));
            }
        }
        FamilyKind::RealLine { alpha, beta } => {
            finite("alpha", *alpha)?;
            finite("beta", *beta)?;
            if *alpha == 0.0 {
                return Err(Error::invalid("alpha must be nonzero"));
            }
        }
        FamilyKind::LogStrip { c, p } => {
            finite("c", *c)?;
            if !(p.is_finite() && *p > 0.0) {
                return Err(Error::invalid("p must be > 0"));
            }
        }
        FamilyKind::ImaginaryExponential { r } => {
            if !(r.is_finite() && *r > 1.0) {
                return Err(Error::invalid("r must be > 1"));
            }
        }
        FamilyKind::ExpImaginaryVsPolyReal { q, s, r } => {
            if !(q.is_finite() && *q >= 0.0) {
                return Err(Error::invalid("q must be >= 0"));
            }
            if !(s.is_finite() && *s > 0.0) {
                return Err(Error::invalid("s must be > 0"));
            }
            if !(r.is_finite() && *r > 0.0) {
                return Err(Error::invalid("r must be > 0"));
            }
        }
        FamilyKind::Reflected { of } => validate(of)?,
    }
    Ok(())
}

impl SpectrumFamily {
    pub fn new(kind: FamilyKind) -> Result<Self> {
        validate(&kind)?;
        Ok(SpectrumFamily { kind })
    }

    pub fn finite(points: Vec<ComplexPoint>) -> Self {
        Self::new(FamilyKind::FiniteList { points }).expect("nonempty finite list")
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Number of eigenvalues for finite lists, `None` for infinite families.
    pub fn len(&self) -> Option<usize> {
        fn go(k: &FamilyKind) -> Option<usize> {
            match k {
                FamilyKind::FiniteList { points } => Some(points.len()),
                FamilyKind::Reflected { of } => go(of),
                _ => None,
            }
        }
        go(&self.kind)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `λ_n` for `n >= 1`; `None` past the end of a finite list or when a
    /// coordinate is not representable as a finite double.
    pub fn eigenvalue(&self, n: usize) -> Option<ComplexPoint> {
        fn go(k: &FamilyKind, n: usize) -> Option<ComplexPoint> {
            if n == 0 {
                return None;
            }
            let x = n as f64;
            match k {
                FamilyKind::FiniteList { points } => points.get(n - 1).copied(),
                FamilyKind::RealLine { alpha, beta } => ComplexPoint::finite(alpha * x + beta, 0.0),
                FamilyKind::LogStrip { c, p } => ComplexPoint::finite(c * x.ln(), x.powf(*p)),
                FamilyKind::ImaginaryExponential { r } => ComplexPoint::finite(0.0, r.powf(x)),
                FamilyKind::ExpImaginaryVsPolyReal { q, s, r } => {
                    ComplexPoint::finite(x.powf(*q), (s * x.powf(*r)).exp())
                }
                FamilyKind::Reflected { of } => go(of, n).map(|p| p.neg()),
            }
        }
        go(&self.kind, n)
    }

    /// Region-test coordinates of `λ_n`, computed in log space for the
    /// parametric families. `n` must be within the family.
    pub fn region_coords(&self, n: usize) -> RegionCoords {
        fn go(k: &FamilyKind, n: usize) -> RegionCoords {
            let x = n as f64;
            match k {
                FamilyKind::FiniteList { points } => points.get(n.wrapping_sub(1)).map_or(
                    RegionCoords {
                        re: 0.0,
                        ln_abs_im: None,
                    },
                    |p| p.coords(),
                ),
                FamilyKind::RealLine { alpha, beta } => RegionCoords {
                    re: alpha * x + beta,
                    ln_abs_im: None,
                },
                FamilyKind::LogStrip { c, p } => RegionCoords {
                    re: c * x.ln(),
                    ln_abs_im: Some(p * x.ln()),
                },
                FamilyKind::ImaginaryExponential { r } => RegionCoords {
                    re: 0.0,
                    ln_abs_im: Some(x * r.ln()),
                },
                FamilyKind::ExpImaginaryVsPolyReal { q, s, r } => RegionCoords {
                    re: x.powf(*q),
                    ln_abs_im: Some(s * x.powf(*r)),
                },
                FamilyKind::Reflected { of } => go(of, n).negated(),
            }
        }
        go(&self.kind, n)
    }

    /// `|λ_n|` is eventually nondecreasing and unbounded. Holds for every
    /// parametric catalog family by parameter validation.
    pub fn modulus_growth(&self) -> bool {
        self.len().is_none()
    }

    /// The spectrum of `-A`.
    pub fn reflected(&self) -> Self {
        match &self.kind {
            FamilyKind::Reflected { of } => SpectrumFamily { kind: (**of).clone() },
            k => SpectrumFamily {
                kind: FamilyKind::Reflected {
                    of: Box::new(k.clone()),
                },
            },
        }
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        fn go(k: &FamilyKind) -> Option<ClosedForm> {
            let unit = RegionParams::new(1.0, 1.0).ok();
            Some(match *k {
                FamilyKind::FiniteList { .. } => return None,
                FamilyKind::RealLine { .. } => ClosedForm {
                    holds: true,
                    region: unit,
                    uniform_in_b: true,
                    note: "real spectrum lies in every region".into(),
                },
                FamilyKind::LogStrip { c, p } if c > 0.0 => ClosedForm {
                    holds: true,
                    region: RegionParams::new(1.0, c / p).ok(),
                    uniform_in_b: false,
                    note: format!("inside exactly when b+ <= {}", c / p),
                },
                FamilyKind::LogStrip { c, p } if c < 0.0 => ClosedForm {
                    holds: true,
                    region: RegionParams::new(-c / p, 1.0).ok(),
                    uniform_in_b: false,
                    note: format!("inside exactly when b- <= {}", -c / p),
                },
                FamilyKind::LogStrip { .. } => ClosedForm {
                    holds: false,
                    region: None,
                    uniform_in_b: true,
                    note: "Re = 0 while |Im| = n^p is unbounded".into(),
                },
                FamilyKind::ImaginaryExponential { .. } => ClosedForm {
                    holds: false,
                    region: None,
                    uniform_in_b: true,
                    note: "purely imaginary and unbounded: every point with |Im| > 1 lies outside every region".into(),
                },
                FamilyKind::ExpImaginaryVsPolyReal { q, r, .. } if q > r => ClosedForm {
                    holds: true,
                    region: unit,
                    uniform_in_b: true,
                    note: "n^q outgrows b+ s n^r for every b+".into(),
                },
                FamilyKind::ExpImaginaryVsPolyReal { q, s, r } if q == r => ClosedForm {
                    holds: true,
                    region: RegionParams::new(1.0, 1.0 / s).ok(),
                    uniform_in_b: false,
                    note: format!("inside exactly when b+ <= {}", 1.0 / s),
                },
                FamilyKind::ExpImaginaryVsPolyReal { .. } => ClosedForm {
                    holds: false,
                    region: None,
                    uniform_in_b: true,
                    note: "ln|Im| = s n^r outgrows Re = n^q for every b+".into(),
                },
                FamilyKind::Reflected { ref of } => {
                    let mut cf = go(of)?;
                    cf.region = cf.region.map(|b| b.swapped());
                    cf
                }
            })
        }
        go(&self.kind)
    }

    /// The closed-form verdict when it holds for every region choice.
    pub fn uniform_verdict(&self) -> Option<CriterionVerdict> {
        let cf = self.closed_form()?;
        if !cf.uniform_in_b {
            return None;
        }
        Some(if cf.holds {
            CriterionVerdict::AnalyticHolds {
                region: cf.region.expect("holding closed forms carry a region"),
            }
        } else {
            CriterionVerdict::AnalyticFails { reason: cf.note }
        })
    }

    pub fn re_trend(&self) -> ReTrend {
        fn go(k: &FamilyKind) -> ReTrend {
            match *k {
                FamilyKind::FiniteList { ref points } => {
                    ReTrend::Bounded(points.iter().map(|p| p.re().abs()).fold(0.0, f64::max))
                }
                FamilyKind::RealLine { alpha, .. } if alpha > 0.0 => ReTrend::PlusInfinity,
                FamilyKind::RealLine { .. } => ReTrend::MinusInfinity,
                FamilyKind::LogStrip { c, .. } if c > 0.0 => ReTrend::PlusInfinity,
                FamilyKind::LogStrip { c, .. } if c < 0.0 => ReTrend::MinusInfinity,
                FamilyKind::LogStrip { .. } | FamilyKind::ImaginaryExponential { .. } => ReTrend::Bounded(0.0),
                FamilyKind::ExpImaginaryVsPolyReal { q, .. } if q > 0.0 => ReTrend::PlusInfinity,
                FamilyKind::ExpImaginaryVsPolyReal { .. } => ReTrend::Bounded(1.0),
                FamilyKind::Reflected { ref of } => match go(of) {
                    ReTrend::PlusInfinity => ReTrend::MinusInfinity,
                    ReTrend::MinusInfinity => ReTrend::PlusInfinity,
                    b => b,
                },
            }
        }
        go(&self.kind)
    }

    pub fn envelope(&self) -> Envelope {
        fn go(k: &FamilyKind) -> Envelope {
            match *k {
                FamilyKind::FiniteList { ref points } => Envelope {
                    re_abs: Some(LinearBound {
                        a: points.iter().map(|p| p.re().abs()).fold(0.0, f64::max),
                        b: 0.0,
                    }),
                    modulus_upper: Some(PowerBound {
                        c: points.iter().map(|p| p.modulus()).fold(0.0, f64::max),
                        d: 0.0,
                    }),
                    modulus_lower: None,
                },
                FamilyKind::RealLine { alpha, beta } => Envelope {
                    re_abs: Some(LinearBound {
                        a: beta.abs(),
                        b: alpha.abs(),
                    }),
                    // |αk + β| <= (|α| + |β|) k for k >= 1
                    modulus_upper: Some(PowerBound {
                        c: alpha.abs() + beta.abs(),
                        d: 1.0,
                    }),
                    // |αk + β| >= |α| k / 2 once k >= 2|β|/|α|
                    modulus_lower: Some(LowerGrowth::Poly {
                        c: alpha.abs() / 2.0,
                        d: 1.0,
                        from: ((2.0 * beta.abs() / alpha.abs()).ceil() as usize).max(1),
                    }),
                },
                FamilyKind::LogStrip { c, p } => Envelope {
                    // |c| ln k <= |c| k
                    re_abs: Some(LinearBound { a: 0.0, b: c.abs() }),
                    // |c| ln k + k^p <= (|c| + 1) k^max(p,1)
                    modulus_upper: Some(PowerBound {
                        c: c.abs() + 1.0,
                        d: p.max(1.0),
                    }),
                    modulus_lower: Some(LowerGrowth::Poly { c: 1.0, d: p, from: 1 }),
                },
                FamilyKind::ImaginaryExponential { r } => Envelope {
                    re_abs: Some(LinearBound { a: 0.0, b: 0.0 }),
                    modulus_upper: None,
                    modulus_lower: Some(LowerGrowth::Exp {
                        c: 1.0,
                        rate: r.ln(),
                        from: 1,
                    }),
                },
                FamilyKind::ExpImaginaryVsPolyReal { q, s, r } => Envelope {
                    re_abs: (q <= 1.0).then_some(LinearBound { a: 0.0, b: 1.0 }),
                    modulus_upper: None,
                    // |λ| >= e^{s k^r} >= e^{s k} when r >= 1
                    modulus_lower: (r >= 1.0).then_some(LowerGrowth::Exp {
                        c: 1.0,
                        rate: s,
                        from: 1,
                    }),
                },
                FamilyKind::Reflected { ref of } => go(of),
            }
        }
        go(&self.kind)
    }

    /// Human-readable formula.
    pub fn describe(&self) -> String {
        fn go(k: &FamilyKind) -> String {
            match k {
                FamilyKind::FiniteList { points } => format!("finite list of {} points", points.len()),
                FamilyKind::RealLine { alpha, beta } => format!("λ_n = ({alpha}·n + {beta}, 0)"),
                FamilyKind::LogStrip { c, p } => format!("λ_n = ({c}·ln n, n^{p})"),
                FamilyKind::ImaginaryExponential { r } => format!("λ_n = (0, {r}^n)"),
                FamilyKind::ExpImaginaryVsPolyReal { q, s, r } => {
                    format!("λ_n = (n^{q}, e^({s}·n^{r}))")
                }
                FamilyKind::Reflected { of } => format!("-[{}]", go(of)),
            }
        }
        go(&self.kind)
    }
}

/// One catalog family with representative parameters.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub formula: &'static str,
    pub verdict_rule: &'static str,
    pub example: SpectrumFamily,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let fam = |k| SpectrumFamily::new(k).expect("catalog parameters are valid");
    vec![
        CatalogEntry {
            id: "real-line",
            formula: "λ_n = (alpha·n + beta, 0)",
            verdict_rule: "AnalyticHolds for all parameters (self-adjoint)",
            example: fam(FamilyKind::RealLine { alpha: 1.0, beta: 0.0 }),
        },
        CatalogEntry {
            id: "log-strip",
            formula: "λ_n = (c·ln n, n^p)",
            verdict_rule: "holds iff c != 0 (region b± <= |c|/p, found by grid scan); AnalyticFails when c = 0",
            example: fam(FamilyKind::LogStrip { c: 1.0, p: 1.0 }),
        },
        CatalogEntry {
            id: "imaginary-exponential",
            formula: "λ_n = (0, r^n), r > 1",
            verdict_rule: "AnalyticFails for all parameters",
            example: fam(FamilyKind::ImaginaryExponential { r: 2.0 }),
        },
        CatalogEntry {
            id: "exp-imaginary-vs-poly-real",
            formula: "λ_n = (n^q, e^(s·n^r)), r defaults to 1",
            verdict_rule: "AnalyticHolds if q > r; holds with b+ <= 1/s if q = r (grid scan); AnalyticFails if q < r",
            example: fam(FamilyKind::ExpImaginaryVsPolyReal { q: 2.0, s: 1.0, r: 1.0 }),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(k: FamilyKind) -> SpectrumFamily {
        SpectrumFamily::new(k).unwrap()
    }

    #[test]
    fn catalog_formulas() {
        let f = fam(FamilyKind::ImaginaryExponential { r: 2.0 });
        assert_eq!(f.eigenvalue(3), ComplexPoint::finite(0.0, 8.0));
        assert_eq!(f.eigenvalue(0), None);
        let f = fam(FamilyKind::LogStrip { c: 1.0, p: 1.0 });
        assert_eq!(f.eigenvalue(1), ComplexPoint::finite(0.0, 1.0));
        let f = fam(FamilyKind::RealLine { alpha: 2.0, beta: -1.0 });
        assert_eq!(f.eigenvalue(4), ComplexPoint::finite(7.0, 0.0));
    }

    #[test]
    fn overflow_is_reported_not_stored() {
        let f = fam(FamilyKind::ExpImaginaryVsPolyReal { q: 1.0, s: 1.0, r: 3.0 });
        assert!(f.eigenvalue(8).is_some());
        assert!(f.eigenvalue(9).is_none());
        // region coordinates stay available in log space
        assert_eq!(f.region_coords(9).ln_abs_im, Some(729.0));
    }

    #[test]
    fn region_coords_agree_with_points_where_representable() {
        let fams = [
            fam(FamilyKind::LogStrip { c: -0.5, p: 1.5 }),
            fam(FamilyKind::ImaginaryExponential { r: 3.0 }),
            fam(FamilyKind::ExpImaginaryVsPolyReal { q: 2.0, s: 0.5, r: 1.0 }),
            fam(FamilyKind::ImaginaryExponential { r: 3.0 }).reflected(),
        ];
        for f in &fams {
            for n in 1..40 {
                let direct = f.eigenvalue(n).unwrap().coords();
                let logspace = f.region_coords(n);
                assert_eq!(direct.re, logspace.re);
                match (direct.ln_abs_im, logspace.ln_abs_im) {
                    (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0)),
                    (a, b) => assert_eq!(a, b),
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(SpectrumFamily::new(FamilyKind::ImaginaryExponential { r: 1.0 }).is_err());
        assert!(SpectrumFamily::new(FamilyKind::RealLine { alpha: 0.0, beta: 1.0 }).is_err());
        assert!(SpectrumFamily::new(FamilyKind::LogStrip { c: 1.0, p: 0.0 }).is_err());
        assert!(SpectrumFamily::new(FamilyKind::FiniteList { points: vec![] }).is_err());
    }

    #[test]
    fn double_reflection_is_identity() {
        let f = fam(FamilyKind::RealLine { alpha: -1.0, beta: 0.0 });
        assert_eq!(f.reflected().reflected(), f);
        assert_eq!(f.reflected().eigenvalue(3), ComplexPoint::finite(3.0, -0.0));
        assert_eq!(f.re_trend(), ReTrend::MinusInfinity);
        assert_eq!(f.reflected().re_trend(), ReTrend::PlusInfinity);
    }

    #[test]
    fn closed_forms() {
        let cf = fam(FamilyKind::ExpImaginaryVsPolyReal { q: 1.0, s: 1.0, r: 3.0 })
            .closed_form()
            .unwrap();
        assert!(!cf.holds && cf.uniform_in_b);
        let cf = fam(FamilyKind::ExpImaginaryVsPolyReal { q: 2.0, s: 1.0, r: 1.0 })
            .closed_form()
            .unwrap();
        assert!(cf.holds && cf.uniform_in_b);
        let cf = fam(FamilyKind::LogStrip { c: 1.0, p: 2.0 }).closed_form().unwrap();
        assert!(cf.holds && !cf.uniform_in_b);
        assert_eq!(cf.region, RegionParams::new(1.0, 0.5).ok());
        assert!(fam(FamilyKind::FiniteList {
            points: vec![ComplexPoint::ORIGIN]
        })
        .closed_form()
        .is_none());
    }

    #[test]
    fn envelopes_bound_the_eigenvalues() {
        let fams = [
            fam(FamilyKind::RealLine { alpha: 1.5, beta: -4.0 }),
            fam(FamilyKind::LogStrip { c: 2.0, p: 0.5 }),
            fam(FamilyKind::LogStrip { c: -1.0, p: 2.5 }),
            fam(FamilyKind::ImaginaryExponential { r: 1.5 }),
            fam(FamilyKind::ExpImaginaryVsPolyReal { q: 0.5, s: 0.1, r: 1.0 }),
        ];
        for f in &fams {
            let env = f.envelope();
            for k in 1..500usize {
                let Some(l) = f.eigenvalue(k) else { break };
                let x = k as f64;
                if let Some(LinearBound { a, b }) = env.re_abs {
                    assert!(l.re().abs() <= a + b * x, "{} re at {k}", f.describe());
                }
                if let Some(PowerBound { c, d }) = env.modulus_upper {
                    assert!(
                        l.modulus() <= c * x.powf(d) * (1.0 + 1e-14),
                        "{} upper at {k}",
                        f.describe()
                    );
                }
                match env.modulus_lower {
                    Some(LowerGrowth::Poly { c, d, from }) if k >= from => {
                        assert!(
                            l.modulus() >= c * x.powf(d) * (1.0 - 1e-14),
                            "{} lower at {k}",
                            f.describe()
                        )
                    }
                    Some(LowerGrowth::Exp { c, rate, from }) if k >= from => {
                        assert!(
                            l.modulus() >= c * (rate * x).exp() * (1.0 - 1e-12),
                            "{} lower at {k}",
                            f.describe()
                        )
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn serde_shape() {
        let f: SpectrumFamily = serde_json::from_str(r#"{"kind":"imaginary-exponential","r":2}"#).unwrap();
        assert_eq!(f.eigenvalue(3), ComplexPoint::finite(0.0, 8.0));
        assert!(serde_json::from_str::<SpectrumFamily>(r#"{"kind":"imaginary-exponential","r":2,"x":1}"#).is_err());
        assert!(serde_json::from_str::<SpectrumFamily>(r#"{"kind":"imaginary-exponential","r":0.5}"#).is_err());
        let g: SpectrumFamily = serde_json::from_str(r#"{"kind":"exp-imaginary-vs-poly-real","q":2,"s":1}"#).unwrap();
        assert_eq!(g.kind(), &FamilyKind::ExpImaginaryVsPolyReal { q: 2.0, s: 1.0, r: 1.0 });
    }
}

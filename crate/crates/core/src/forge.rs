//! Non-smooth initial data when the criterion fails.
//!
//! Witness eigenvalues are picked outside the shrinking regions
//! `L((2k)^{-1}, (2k)^{-1})` with `|λ| > k⁴`. Over witnesses with bounded
//! real part the vector `Σ k^{-2} e_{n(k)}` lies in every `D(e^{tA})` but
//! not in `D(A)`; when `Re λ -> +∞` along the witnesses the coefficients
//! `e^{-k Re λ_{n(k)}}` do the same job. `Re λ -> -∞` is handled through
//! `-A`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{ReTrend, SpectrumFamily};
use crate::region::{ComplexPoint, RegionParams};
use crate::spectral::{
    domain_test, BorelSymbol, DiagonalOperator, DomainVerdict, SpectralVector, TailLaw, TailModel, TailPlacement,
    TrailPoint,
};

pub use crate::spectral::reflect_operator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Regime {
    /// `|Re λ_{n(k)}| <= omega` (the observed maximum).
    BoundedRe {
        omega: f64,
    },
    UnboundedReUp,
    UnboundedReDown,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::BoundedRe { .. } => "bounded-re",
            Regime::UnboundedReUp => "unbounded-re-up",
            Regime::UnboundedReDown => "unbounded-re-down",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Selection level `k`: the point lies outside `L((2k)^{-1}, (2k)^{-1})`
    /// and `|λ| > k⁴`.
    pub level: usize,
    /// Eigenbasis index `n(k)`.
    pub index: usize,
    pub point: ComplexPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSequence {
    pub witnesses: Vec<Witness>,
    pub regime: Regime,
    /// Bound on `|Re λ|` assumed for witnesses beyond the scan
    /// (bounded regime only).
    pub omega_bound: Option<f64>,
}

impl WitnessSequence {
    pub fn indices(&self) -> Vec<usize> {
        self.witnesses.iter().map(|w| w.index).collect()
    }

    pub fn points(&self) -> Vec<ComplexPoint> {
        self.witnesses.iter().map(|w| w.point).collect()
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// How the regime is decided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeRule {
    /// Use the family's known long-run behaviour of `Re λ_n`.
    FamilyTrend,
    /// Bounded when the observed `|Re|` stays within `omega_max`; otherwise
    /// the sign of the largest `|Re|` witness decides.
    Threshold { omega_max: f64 },
}

pub const DEFAULT_OMEGA_MAX: f64 = 1e3;

/// Greedy first-fit witness scan over `λ_1..λ_scan_limit` with the
/// family-trend regime rule. All witnesses found are returned; at least
/// `count` are required.
pub fn select_witnesses(spec: &SpectrumFamily, count: usize, scan_limit: usize) -> Result<WitnessSequence> {
    select_witnesses_with(spec, count, scan_limit, RegimeRule::FamilyTrend)
}

pub fn select_witnesses_with(
    spec: &SpectrumFamily,
    count: usize,
    scan_limit: usize,
    rule: RegimeRule,
) -> Result<WitnessSequence> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    let limit = spec.len().map_or(scan_limit, |len| len.min(scan_limit));
    let mut all = Vec::new();
    let mut prev = 0.0f64;
    for n in 1..=limit {
        // the scan cannot see past the first unrepresentable eigenvalue
        let Some(p) = spec.eigenvalue(n) else { break };
        let k = all.len() + 1;
        let b = RegionParams::symmetric(1.0 / (2.0 * k as f64)).expect("positive");
        let kf = k as f64;
        if !spec.region_coords(n).in_region(b) && p.modulus() > (kf * kf * kf * kf).max(prev) {
            prev = p.modulus();
            all.push(Witness {
                level: k,
                index: n,
                point: p,
            });
        }
    }
    let observed = all.iter().map(|w| w.point.re().abs()).fold(0.0, f64::max);
    let (regime, omega_bound) = match rule {
        RegimeRule::FamilyTrend => match spec.re_trend() {
            ReTrend::Bounded(w) => (Regime::BoundedRe { omega: observed }, Some(w.max(observed))),
            ReTrend::PlusInfinity => (Regime::UnboundedReUp, None),
            ReTrend::MinusInfinity => (Regime::UnboundedReDown, None),
        },
        RegimeRule::Threshold { omega_max } => {
            if observed <= omega_max {
                (Regime::BoundedRe { omega: observed }, Some(observed))
            } else {
                let extreme = all
                    .iter()
                    .max_by(|a, b| a.point.re().abs().total_cmp(&b.point.re().abs()))
                    .expect("observed > 0 implies witnesses");
                if extreme.point.re() > 0.0 {
                    (Regime::UnboundedReUp, None)
                } else {
                    (Regime::UnboundedReDown, None)
                }
            }
        }
    };
    let witnesses = match regime {
        Regime::BoundedRe { .. } => all,
        Regime::UnboundedReUp => drifting(all, 1.0),
        Regime::UnboundedReDown => drifting(all, -1.0),
    };
    if witnesses.len() < count {
        return Err(Error::InsufficientWitnesses {
            found: witnesses.len(),
            needed: count,
        });
    }
    Ok(WitnessSequence {
        witnesses,
        regime,
        omega_bound,
    })
}

/// First-fit subsequence with `sign·Re λ >= j` at position `j`.
fn drifting(all: Vec<Witness>, sign: f64) -> Vec<Witness> {
    let mut out = Vec::new();
    for w in all {
        if sign * w.point.re() >= (out.len() + 1) as f64 {
            out.push(w);
        }
    }
    out
}

fn mismatch(expected: &'static str, w: &WitnessSequence) -> Error {
    Error::RegimeMismatch {
        expected,
        actual: w.regime.name().to_string(),
    }
}

/// `f = Σ k^{-2} e_{n(k)}`: explicit on the selected witnesses, with a
/// `k^{-2}` tail over the witnesses beyond the scan.
pub fn build_bounded_re_vector(w: &WitnessSequence) -> Result<SpectralVector> {
    let Regime::BoundedRe { omega } = w.regime else {
        return Err(mismatch("bounded-re", w));
    };
    let entries: BTreeMap<usize, Complex64> = w
        .witnesses
        .iter()
        .map(|x| {
            let k = x.level as f64;
            (x.index, Complex64::new(1.0 / (k * k), 0.0))
        })
        .collect();
    let omega = w.omega_bound.unwrap_or(omega);
    let tail = TailModel::new(
        TailLaw::PowerLaw { p: 2.0 },
        w.len() + 1,
        TailPlacement::WitnessBoundedRe { omega },
    )?;
    SpectralVector::new(entries, tail)
}

/// `f = Σ e^{-k Re λ_{n(k)}} e_{n(k)}` and `h = Σ e^{-(k/2) Re λ_{n(k)}} e_{n(k)}`
/// with `k` the selection level of each witness.
pub fn build_unbounded_re_vector(w: &WitnessSequence) -> Result<(SpectralVector, SpectralVector)> {
    if w.regime != Regime::UnboundedReUp {
        return Err(mismatch("unbounded-re-up", w));
    }
    let build = |c: f64| -> Result<SpectralVector> {
        let entries: BTreeMap<usize, Complex64> = w
            .witnesses
            .iter()
            .map(|x| (x.index, Complex64::new((-c * x.level as f64 * x.point.re()).exp(), 0.0)))
            .collect();
        let start = w.witnesses.last().map_or(1, |x| x.level + 1);
        let tail = TailModel::new(TailLaw::CoupledExp { c }, start, TailPlacement::WitnessUnboundedRe)?;
        SpectralVector::new(entries, tail)
    };
    Ok((build(1.0)?, build(0.5)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    CertifiedNotDifferentiableAtZero,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpCheck {
    pub t: f64,
    pub verdict: DomainVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub vector: SpectralVector,
    /// The companion vector `h` of the unbounded construction; not used by
    /// the conclusion.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub auxiliary: Option<SpectralVector>,
    pub exp_domain_checks: Vec<ExpCheck>,
    pub a_domain_check: DomainVerdict,
    pub divergence_witness: Vec<TrailPoint>,
    pub conclusion: Conclusion,
}

/// Checks `f ∈ D(e^{tA})` at each sample and `f ∉ D(A)`. Certified only when
/// every exponential test is `InDomain` and the partial sums of
/// `Σ |λ_k f_k|²` exceed `cap`.
pub fn certify(
    a: &DiagonalOperator,
    f: &SpectralVector,
    t_samples: &[f64],
    n: usize,
    cap: f64,
) -> Result<CounterexampleCertificate> {
    if !(t_samples.iter().any(|&t| t < 0.0) && t_samples.iter().any(|&t| t > 0.0)) {
        return Err(Error::Precondition("t_samples must contain both signs".into()));
    }
    let exp_domain_checks = t_samples
        .iter()
        .map(|&t| {
            Ok(ExpCheck {
                t,
                verdict: domain_test(&BorelSymbol::exp(t), a, f, n, cap)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let a_domain_check = domain_test(&BorelSymbol::power(1), a, f, n, cap)?;
    let certified = exp_domain_checks.iter().all(|c| c.verdict.is_in_domain()) && a_domain_check.crossed_cap();
    let divergence_witness = match &a_domain_check {
        DomainVerdict::NotInDomain { divergence_witness, .. } => divergence_witness.clone(),
        _ => Vec::new(),
    };
    Ok(CounterexampleCertificate {
        vector: f.clone(),
        auxiliary: None,
        exp_domain_checks,
        a_domain_check,
        divergence_witness,
        conclusion: if certified {
            Conclusion::CertifiedNotDifferentiableAtZero
        } else {
            Conclusion::Inconclusive
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgeOutcome {
    /// Witnesses the vector was built from; for the `-∞` regime these are
    /// witnesses of `-A`.
    pub witnesses: WitnessSequence,
    /// Whether the construction ran on `-A`.
    pub reflected: bool,
    pub certificate: CounterexampleCertificate,
}

/// Select, build and certify in one go. The certificate always refers to
/// `A` itself: for `Re λ -> -∞` the vector is built for `-A`, whose
/// exponential domains coincide with those of `A` over symmetric times
/// and whose operator domain is that of `A`.
pub fn forge(
    spec: &SpectrumFamily,
    count: usize,
    scan_limit: usize,
    t_samples: &[f64],
    n: usize,
    cap: f64,
) -> Result<ForgeOutcome> {
    let a = DiagonalOperator::new(spec.clone());
    let first = select_witnesses(spec, count, scan_limit)?;
    let (witnesses, reflected) = match first.regime {
        Regime::UnboundedReDown => (select_witnesses(&spec.reflected(), count, scan_limit)?, true),
        _ => (first, false),
    };
    let (f, aux) = match witnesses.regime {
        Regime::BoundedRe { .. } => (build_bounded_re_vector(&witnesses)?, None),
        _ => {
            let (f, h) = build_unbounded_re_vector(&witnesses)?;
            (f, Some(h))
        }
    };
    let mut certificate = certify(&a, &f, t_samples, n, cap)?;
    certificate.auxiliary = aux;
    Ok(ForgeOutcome {
        witnesses,
        reflected,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyKind;
    use crate::region::in_region;

    fn fam(k: FamilyKind) -> SpectrumFamily {
        SpectrumFamily::new(k).unwrap()
    }

    fn check_invariants(w: &WitnessSequence) {
        let mut prev = 0.0;
        for (pos, x) in w.witnesses.iter().enumerate() {
            let k = x.level as f64;
            assert!(x.point.modulus() > k.powi(4).max(prev));
            assert!(!in_region(x.point, RegionParams::symmetric(1.0 / (2.0 * k)).unwrap()));
            match w.regime {
                Regime::BoundedRe { omega } => assert!(x.point.re().abs() <= omega),
                Regime::UnboundedReUp => assert!(x.point.re() >= (pos + 1) as f64),
                Regime::UnboundedReDown => assert!(x.point.re() <= -((pos + 1) as f64)),
            }
            prev = x.point.modulus();
        }
    }

    #[test]
    fn squares_in_the_exponent_are_bounded_re() {
        let pts = (1..=31)
            .map(|n: i32| ComplexPoint::new(0.0, 2f64.powi(n * n)).unwrap())
            .collect();
        let w = select_witnesses(&SpectrumFamily::finite(pts), 5, 1000).unwrap();
        assert_eq!(w.regime, Regime::BoundedRe { omega: 0.0 });
        assert!(w.len() >= 5);
        assert_eq!(&w.indices()[..3], &[1, 3, 4]);
        check_invariants(&w);
    }

    #[test]
    fn cubic_exponent_is_unbounded_up() {
        let spec = fam(FamilyKind::ExpImaginaryVsPolyReal { q: 1.0, s: 1.0, r: 3.0 });
        let w = select_witnesses(&spec, 5, 10_000).unwrap();
        assert_eq!(w.regime, Regime::UnboundedReUp);
        assert_eq!(w.indices(), vec![2, 3, 4, 5, 6, 7, 8]);
        check_invariants(&w);
        let down = select_witnesses(&spec.reflected(), 5, 10_000).unwrap();
        assert_eq!(down.regime, Regime::UnboundedReDown);
        check_invariants(&down);
    }

    #[test]
    fn real_spectrum_has_no_witnesses() {
        let spec = fam(FamilyKind::RealLine { alpha: 1.0, beta: 0.0 });
        assert_eq!(
            select_witnesses(&spec, 1, 1000),
            Err(Error::InsufficientWitnesses { found: 0, needed: 1 })
        );
    }

    #[test]
    fn threshold_rule_matches_trend_on_catalog() {
        let spec = fam(FamilyKind::ImaginaryExponential { r: 2.0 });
        let a = select_witnesses(&spec, 5, 100).unwrap();
        let b = select_witnesses_with(
            &spec,
            5,
            100,
            RegimeRule::Threshold {
                omega_max: DEFAULT_OMEGA_MAX,
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounded_vector_coefficients() {
        let spec = fam(FamilyKind::ImaginaryExponential { r: 2.0 });
        let w = select_witnesses(&spec, 3, 10).unwrap();
        let f = build_bounded_re_vector(&w).unwrap();
        let ix = w.indices();
        assert_eq!(f.coefficient(ix[0]), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(f.coefficient(ix[1]), Some(Complex64::new(0.25, 0.0)));
        assert_eq!(f.coefficient(ix[2]), Some(Complex64::new(1.0 / 9.0, 0.0)));
        assert!(build_unbounded_re_vector(&w).is_err());
    }

    #[test]
    fn unbounded_vector_coefficients() {
        let w = WitnessSequence {
            witnesses: vec![Witness {
                level: 3,
                index: 10,
                point: ComplexPoint::new(5.0, 1e30).unwrap(),
            }],
            regime: Regime::UnboundedReUp,
            omega_bound: None,
        };
        let (f, h) = build_unbounded_re_vector(&w).unwrap();
        assert_eq!(f.coefficient(10).unwrap().re, (-15.0f64).exp());
        assert_eq!(h.coefficient(10).unwrap().re, (-7.5f64).exp());
        assert!(build_bounded_re_vector(&w).is_err());
    }

    #[test]
    fn certify_requires_both_signs() {
        let a = DiagonalOperator::new(fam(FamilyKind::ImaginaryExponential { r: 2.0 }));
        let f = SpectralVector::unit(1).unwrap();
        assert!(certify(&a, &f, &[1.0, 2.0], 100, 1e6).is_err());
        let c = certify(&a, &f, &[-1.0, 1.0], 100, 1e6).unwrap();
        assert_eq!(c.conclusion, Conclusion::Inconclusive);
    }
}

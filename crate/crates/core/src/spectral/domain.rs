//! Domain membership `f ∈ D(F(A))`, i.e. `Σ |F(λ_k) f_k|² < ∞` in the
//! diagonal model.
//!
//! Explicitly known coordinates are summed directly. What lies beyond is
//! decided from the tail law combined with growth envelopes of the
//! spectrum: a log-linear majorant `ln|F(λ_k)|² <= c0 + c_ln·ln k + c_lin·k`
//! turns the tail into a series with a closed-form bound, and a matching
//! minorant certifies divergence.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::{Envelope, LinearBound, LowerGrowth};
use crate::numerics::CompensatedSum;

use super::operator::DiagonalOperator;
use super::symbol::{BorelSymbol, RegionPredicate};
use super::vector::{SpectralVector, TailLaw, TailModel, TailPlacement};

pub const DEFAULT_CAP: f64 = 1e6;
pub const DEFAULT_TRUNCATION: usize = 10_000;

/// Trail entries are kept for the first few coordinates and then only at
/// power-of-two positions, plus the cap crossing.
const DENSE_TRAIL: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrailPoint {
    /// Eigenbasis index of the last coordinate included.
    pub k: usize,
    pub partial_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DomainVerdict {
    InDomain {
        sum_bound: f64,
    },
    NotInDomain {
        divergence_witness: Vec<TrailPoint>,
        /// First index at which the partial sum exceeded the cap.
        crossing: Option<usize>,
        /// Closed-form reason the tail diverges, when one applies.
        minorant: Option<String>,
    },
    Inconclusive {
        n: usize,
        partial_sum: f64,
        tail_note: String,
    },
}

impl DomainVerdict {
    pub fn is_in_domain(&self) -> bool {
        matches!(self, DomainVerdict::InDomain { .. })
    }

    pub fn is_not_in_domain(&self) -> bool {
        matches!(self, DomainVerdict::NotInDomain { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            DomainVerdict::InDomain { .. } => "InDomain",
            DomainVerdict::NotInDomain { .. } => "NotInDomain",
            DomainVerdict::Inconclusive { .. } => "Inconclusive",
        }
    }

    /// Whether the partial sums were seen to exceed the cap.
    pub fn crossed_cap(&self) -> bool {
        matches!(self, DomainVerdict::NotInDomain { crossing: Some(_), .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogLinear {
    pub c0: f64,
    pub c_ln: f64,
    pub c_lin: f64,
}

impl LogLinear {
    pub const ZERO: LogLinear = LogLinear {
        c0: 0.0,
        c_ln: 0.0,
        c_lin: 0.0,
    };

    fn at(&self, k: usize) -> f64 {
        let x = k as f64;
        let ln = if self.c_ln == 0.0 { 0.0 } else { self.c_ln * x.ln() };
        self.c0 + ln + self.c_lin * x
    }

    fn plus(self, o: LogLinear) -> LogLinear {
        LogLinear {
            c0: self.c0 + o.c0,
            c_ln: self.c_ln + o.c_ln,
            c_lin: self.c_lin + o.c_lin,
        }
    }
}

fn power_upper(n: u32, env: &Envelope) -> Option<LogLinear> {
    if n == 0 {
        return Some(LogLinear::ZERO);
    }
    let u = env.modulus_upper?;
    let n = f64::from(n);
    Some(LogLinear {
        c0: 2.0 * n * u.c.ln(),
        c_ln: 2.0 * n * u.d,
        c_lin: 0.0,
    })
}

fn exp_upper(t: f64, env: &Envelope) -> Option<LogLinear> {
    if t == 0.0 {
        return Some(LogLinear::ZERO);
    }
    let LinearBound { a, b } = env.re_abs?;
    Some(LogLinear {
        c0: 2.0 * t.abs() * a,
        c_ln: 0.0,
        c_lin: 2.0 * t.abs() * b,
    })
}

/// `ln |F(λ_k)|²` from above, valid for every tail coordinate.
pub(crate) fn symbol_upper(sym: &BorelSymbol, env: &Envelope) -> Option<LogLinear> {
    match sym {
        BorelSymbol::Power { n } => power_upper(*n, env),
        BorelSymbol::Exp { t } => exp_upper(*t, env),
        BorelSymbol::AbsPowExp { m, t } => Some(power_upper(*m, env)?.plus(exp_upper(*t, env)?)),
        BorelSymbol::Indicator { .. } => Some(LogLinear::ZERO),
    }
}

fn power_lower(n: u32, env: &Envelope) -> Option<(LogLinear, usize)> {
    if n == 0 {
        return Some((LogLinear::ZERO, 1));
    }
    let n = f64::from(n);
    Some(match env.modulus_lower? {
        LowerGrowth::Poly { c, d, from } => (
            LogLinear {
                c0: 2.0 * n * c.ln(),
                c_ln: 2.0 * n * d,
                c_lin: 0.0,
            },
            from,
        ),
        LowerGrowth::Exp { c, rate, from } => (
            LogLinear {
                c0: 2.0 * n * c.ln(),
                c_ln: 0.0,
                c_lin: 2.0 * n * rate,
            },
            from,
        ),
    })
}

fn exp_lower(t: f64, env: &Envelope) -> Option<(LogLinear, usize)> {
    if t == 0.0 {
        return Some((LogLinear::ZERO, 1));
    }
    let LinearBound { a, b } = env.re_abs?;
    Some((
        LogLinear {
            c0: -2.0 * t.abs() * a,
            c_ln: 0.0,
            c_lin: -2.0 * t.abs() * b,
        },
        1,
    ))
}

/// `ln |F(λ_k)|²` from below for `k >= from`.
pub(crate) fn symbol_lower(sym: &BorelSymbol, env: &Envelope) -> Option<(LogLinear, usize)> {
    match sym {
        BorelSymbol::Power { n } => power_lower(*n, env),
        BorelSymbol::Exp { t } => exp_lower(*t, env),
        BorelSymbol::AbsPowExp { m, t } => {
            let (p, pf) = power_lower(*m, env)?;
            let (e, ef) = exp_lower(*t, env)?;
            Some((p.plus(e), pf.max(ef)))
        }
        BorelSymbol::Indicator {
            predicate: RegionPredicate::All,
        } => Some((LogLinear::ZERO, 1)),
        BorelSymbol::Indicator { .. } => None,
    }
}

/// Longest explicit prefix a ratio bound may sum before giving up.
const MAX_EXPLICIT_TERMS: usize = 10_000_000;

/// Upper bound for `Σ_{k>=from} e^{m(k)} |f_k|²` under `law`, or `None`
/// when the majorant series is not summable in closed form.
pub(crate) fn law_majorant_sum(law: TailLaw, m: LogLinear, from: usize) -> Option<f64> {
    let from = from.max(1);
    let bound = match law {
        TailLaw::Zero => 0.0,
        TailLaw::PowerLaw { p } => {
            if m.c_lin != 0.0 {
                return None;
            }
            let s = 2.0 * p - m.c_ln;
            if s <= 1.0 {
                return None;
            }
            // Σ_{k>=K} k^{-s} <= K^{-s} + ∫_K^∞ x^{-s} dx
            let k = from as f64;
            m.c0.exp() * (k.powf(-s) + k.powf(1.0 - s) / (s - 1.0))
        }
        TailLaw::ExpLaw { alpha } => {
            let g = 2.0 * alpha - m.c_lin;
            if g <= 0.0 {
                return None;
            }
            // ratio of consecutive terms <= e^{c_ln/k - g} <= e^{-g/2} once k >= 2 c_ln / g
            let k0 = if m.c_ln > 0.0 {
                (2.0 * m.c_ln / g).ceil() as usize
            } else {
                1
            };
            let term = |k: usize| (m.at(k) - 2.0 * alpha * k as f64).exp();
            ratio_bound(from, k0.max(from), term, (-g / 2.0).exp())?
        }
        TailLaw::ExpOfSquares { alpha } => {
            let ln_ratio = |k: usize| {
                let x = k as f64;
                m.c_ln.max(0.0) / x + m.c_lin - 2.0 * alpha * (2.0 * x + 1.0)
            };
            let mut k0 = from;
            while ln_ratio(k0) > -std::f64::consts::LN_2 {
                k0 += 1;
                if k0 - from > MAX_EXPLICIT_TERMS {
                    return None;
                }
            }
            let x2 = |k: usize| (k as f64) * (k as f64);
            let term = |k: usize| (m.at(k) - 2.0 * alpha * x2(k)).exp();
            ratio_bound(from, k0, term, 0.5)?
        }
        TailLaw::CoupledExp { .. } => return None,
    };
    // slack for rounding in the closed forms above
    let bound = bound * (1.0 + 1e-12);
    bound.is_finite().then_some(bound)
}

/// `Σ_{k=from}^{k0-1} term(k) + term(k0)/(1-ρ)`.
fn ratio_bound(from: usize, k0: usize, term: impl Fn(usize) -> f64, rho: f64) -> Option<f64> {
    if k0 - from > MAX_EXPLICIT_TERMS {
        return None;
    }
    let mut s = CompensatedSum::new();
    for k in from..k0 {
        s.add(term(k));
    }
    s.add(term(k0) / (1.0 - rho));
    Some(s.value())
}

/// Whether `Σ e^{m(k)} |f_k|²` diverges for the tail law.
pub(crate) fn law_diverges(law: TailLaw, m: LogLinear) -> bool {
    match law {
        TailLaw::Zero | TailLaw::ExpOfSquares { .. } | TailLaw::CoupledExp { .. } => false,
        TailLaw::PowerLaw { p } => m.c_lin > 0.0 || (m.c_lin == 0.0 && m.c_ln - 2.0 * p >= -1.0),
        TailLaw::ExpLaw { alpha } => {
            let g = m.c_lin - 2.0 * alpha;
            g > 0.0 || (g == 0.0 && m.c_ln >= -1.0)
        }
    }
}

fn witness_envelope(omega: f64, start: usize) -> Envelope {
    Envelope {
        re_abs: Some(LinearBound { a: omega, b: 0.0 }),
        modulus_upper: None,
        modulus_lower: Some(LowerGrowth::Poly {
            c: 1.0,
            d: 4.0,
            from: start,
        }),
    }
}

/// Outcome of the analytic part: coordinates no window reaches.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TailOutcome {
    Bounded(f64),
    Diverges(String),
    Unknown(String),
}

/// Coupled-exponential tails over unbounded-Re witnesses. With
/// `|Im λ| > e^{2k|Re λ|}`, `|Re λ| >= 1` and `|f_k| = e^{-ck|Re λ|}`:
/// `|e^{tλ} f_k|² <= e^{-2(ck-|t|)}` once `ck >= |t|`, while
/// `|λ|^{2m} |e^{tλ} f_k|² >= e^{((4m-2c)k - 2|t|)|Re λ|} >= 1` for `2m > c`
/// and large `k`.
fn coupled_tail(sym: &BorelSymbol, c: f64, start: usize) -> TailOutcome {
    let (m, t) = match sym {
        BorelSymbol::Power { n } => (*n, 0.0),
        BorelSymbol::Exp { t } => (0, *t),
        BorelSymbol::AbsPowExp { m, t } => (*m, *t),
        BorelSymbol::Indicator { .. } => (0, 0.0),
    };
    if m == 0 {
        let k = start as f64;
        if c * k <= t.abs() {
            return TailOutcome::Unknown(format!(
                "coupled-exp tail with c={c} from level {start} does not dominate |t|={}",
                t.abs()
            ));
        }
        let bound = (-2.0 * (c * k - t.abs())).exp() / (1.0 - (-2.0 * c).exp());
        return TailOutcome::Bounded(bound * (1.0 + 1e-12));
    }
    let m = f64::from(m);
    if 2.0 * m > c || (2.0 * m == c && t == 0.0) {
        return TailOutcome::Diverges(format!(
            "terms |λ|^{{2m}}|e^{{tλ}}f_k|² >= 1 eventually since |Im λ| > e^{{2k|Re λ|}} and 2m={} >= c={c}",
            2.0 * m
        ));
    }
    TailOutcome::Unknown(format!("no closed form for m={m} against coupled-exp c={c}"))
}

/// Bounds `Σ |F(λ_k) f_k|²` over tail coordinates from `from` onwards
/// (witness tails always start at their own start level).
pub(crate) fn tail_outcome(sym: &BorelSymbol, a: &DiagonalOperator, tail: &TailModel, from: usize) -> TailOutcome {
    let law = tail.law();
    if law == TailLaw::Zero {
        return TailOutcome::Bounded(0.0);
    }
    let (env, from, finite) = match tail.placement() {
        TailPlacement::Contiguous => {
            if let Some(dim) = a.dim() {
                if from > dim {
                    return TailOutcome::Bounded(0.0);
                }
            }
            (a.spectrum().envelope(), from, a.dim().is_some())
        }
        TailPlacement::WitnessBoundedRe { omega } => (witness_envelope(omega, tail.start()), tail.start(), false),
        TailPlacement::WitnessUnboundedRe => {
            return coupled_tail(sym, coupled_c(law), tail.start());
        }
    };
    if let Some(bound) = symbol_upper(sym, &env).and_then(|m| law_majorant_sum(law, m, from)) {
        return TailOutcome::Bounded(bound);
    }
    if !finite {
        if let Some((m, _)) = symbol_lower(sym, &env) {
            if law_diverges(law, m) {
                return TailOutcome::Diverges(format!(
                    "tail minorant ln|F f_k|² >= {} + {}·ln k + {}·k diverges against {:?}",
                    m.c0, m.c_ln, m.c_lin, law
                ));
            }
        }
    }
    TailOutcome::Unknown(format!(
        "no closed-form majorant or minorant for {sym:?} against {law:?}"
    ))
}

/// Decides whether `f ∈ D(F(A))`.
///
/// Coordinates in the window (explicit entries and contiguous tail
/// coordinates up to `n`) are summed directly; the rest is decided
/// analytically. A certified finite total wins over the cap: the cap only
/// produces `NotInDomain` when the tail cannot be bounded.
pub fn domain_test(
    sym: &BorelSymbol,
    a: &DiagonalOperator,
    f: &SpectralVector,
    n: usize,
    cap: f64,
) -> Result<DomainVerdict> {
    let (window, next) = f.window(n, |k| a.has_coordinate(k));
    let mut sum = CompensatedSum::new();
    let mut trail = Vec::new();
    let mut crossing = None;
    let mut last_recorded = 0.0;
    for (j, &(k, z)) in window.iter().enumerate() {
        let lambda = a.eigenvalue(k)?;
        let term = sym.apply_norm_sqr(lambda, z);
        sum.add(term);
        let s = sum.value();
        let s = if s.is_nan() || s > f64::MAX { f64::MAX } else { s };
        if crossing.is_none() {
            let crossed = s > cap;
            let position = j + 1;
            if s > last_recorded && (crossed || position <= DENSE_TRAIL || position.is_power_of_two()) {
                trail.push(TrailPoint { k, partial_sum: s });
                last_recorded = s;
            }
            if crossed {
                crossing = Some(k);
            }
        }
    }
    let partial = sum.value();
    let partial = if partial.is_finite() { partial } else { f64::MAX };
    let overflowed = partial == f64::MAX;

    let outcome = tail_outcome(sym, a, f.tail(), next);
    Ok(match outcome {
        TailOutcome::Bounded(b) if !overflowed => {
            let total = partial * (1.0 + 4.0 * f64::EPSILON * window.len() as f64) + b;
            if total.is_finite() {
                DomainVerdict::InDomain { sum_bound: total }
            } else {
                inconclusive_or_crossed(n, partial, trail, crossing, "sum bound overflows".into())
            }
        }
        TailOutcome::Diverges(reason) => DomainVerdict::NotInDomain {
            divergence_witness: trail,
            crossing,
            minorant: Some(reason),
        },
        TailOutcome::Bounded(_) => {
            inconclusive_or_crossed(n, partial, trail, crossing, "explicit sum overflows".into())
        }
        TailOutcome::Unknown(note) => inconclusive_or_crossed(n, partial, trail, crossing, note),
    })
}

fn inconclusive_or_crossed(
    n: usize,
    partial: f64,
    trail: Vec<TrailPoint>,
    crossing: Option<usize>,
    note: String,
) -> DomainVerdict {
    if crossing.is_some() {
        DomainVerdict::NotInDomain {
            divergence_witness: trail,
            crossing,
            minorant: None,
        }
    } else {
        DomainVerdict::Inconclusive {
            n,
            partial_sum: partial,
            tail_note: note,
        }
    }
}

/// Upper bound for the squared norm of the tail coordinates from `from`
/// on (witness tails: from their start level). Needs no spectrum.
pub(crate) fn law_norm_sq(tail: &TailModel, from: usize) -> f64 {
    let law = tail.law();
    let bound = match tail.placement() {
        TailPlacement::Contiguous => law_majorant_sum(law, LogLinear::ZERO, from),
        TailPlacement::WitnessBoundedRe { .. } => law_majorant_sum(law, LogLinear::ZERO, tail.start()),
        TailPlacement::WitnessUnboundedRe => match coupled_tail(&BorelSymbol::IDENTITY, coupled_c(law), tail.start()) {
            TailOutcome::Bounded(b) => Some(b),
            _ => None,
        },
    };
    bound.unwrap_or(f64::INFINITY)
}

fn coupled_c(law: TailLaw) -> f64 {
    match law {
        TailLaw::CoupledExp { c } => c,
        _ => unreachable!("validated by TailModel::new"),
    }
}

//! Orbits `y(t) = e^{tA} f` and numerical checks of the weak-solution
//! identity and of strong derivatives `y^{(k)}(t) = A^k y(t)`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mul_exp, CompensatedSum};
use crate::region::format_float;
use crate::spectral::{
    apply_symbol, domain_test, BorelSymbol, DiagonalOperator, DomainVerdict, SpectralVector, DEFAULT_CAP,
};

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    pub t: f64,
    pub value: SpectralVector,
    /// ℓ² bound on the part of `y(t)` outside `value`.
    pub tail_error: f64,
}

/// `y(t) = e^{tA} f` on the window of `f` up to `n`. `t = 0` returns `f`
/// itself.
pub fn orbit(a: &DiagonalOperator, f: &SpectralVector, t: f64, n: usize) -> Result<OrbitSample> {
    if !t.is_finite() {
        return Err(Error::invalid("t must be finite"));
    }
    if t == 0.0 {
        return Ok(OrbitSample {
            t,
            value: f.clone(),
            tail_error: 0.0,
        });
    }
    let out = apply_symbol(&BorelSymbol::exp(t), a, f, n)?;
    Ok(OrbitSample {
        t,
        value: out.vector,
        tail_error: out.tail_error,
    })
}

fn require_in_domain(sym: BorelSymbol, a: &DiagonalOperator, f: &SpectralVector, n: usize) -> Result<()> {
    let verdict = domain_test(&sym, a, f, n, DEFAULT_CAP)?;
    if verdict.is_in_domain() {
        Ok(())
    } else {
        Err(Error::DomainRefused { verdict })
    }
}

fn norm(terms: impl IntoIterator<Item = Complex64>) -> f64 {
    terms
        .into_iter()
        .map(|z| z.norm_sqr())
        .collect::<CompensatedSum>()
        .value()
        .sqrt()
}

/// `‖y(t) - y(t0) - A·Q‖` where `Q` is composite Simpson quadrature of
/// `s ↦ y(s)` over `[t0, t]` with `quad_steps` panels, on the window of
/// `f` up to `n`.
///
/// Membership of `f` in `D(e^{sA})` is checked at both endpoints; by
/// convexity of `s ↦ e^{2s Re λ}` that covers the whole interval.
pub fn mild_identity_residual(
    a: &DiagonalOperator,
    f: &SpectralVector,
    t0: f64,
    t: f64,
    quad_steps: usize,
    n: usize,
) -> Result<f64> {
    if quad_steps < 2 || !quad_steps.is_multiple_of(2) {
        return Err(Error::invalid("quad_steps must be even and >= 2"));
    }
    if !(t0.is_finite() && t.is_finite()) {
        return Err(Error::invalid("times must be finite"));
    }
    require_in_domain(BorelSymbol::exp(t0), a, f, n)?;
    require_in_domain(BorelSymbol::exp(t), a, f, n)?;
    let h = (t - t0) / quad_steps as f64;
    let (window, _) = f.window(n, |k| a.has_coordinate(k));
    let mut residuals = Vec::with_capacity(window.len());
    for (k, z) in window {
        let l = a.eigenvalue(k)?;
        let y = |s: f64| mul_exp(z, s, l.re(), l.im());
        let mut q_re = CompensatedSum::new();
        let mut q_im = CompensatedSum::new();
        for i in 0..=quad_steps {
            let w = if i == 0 || i == quad_steps {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let v = y(t0 + i as f64 * h) * w;
            q_re.add(v.re);
            q_im.add(v.im);
        }
        let q = Complex64::new(q_re.value(), q_im.value()) * (h / 3.0);
        residuals.push(y(t) - y(t0) - l.to_complex() * q);
    }
    Ok(norm(residuals))
}

/// Residual of a central difference together with the level below which
/// it is indistinguishable from rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeProbe {
    pub residual: f64,
    pub noise_floor: f64,
}

fn binomial(k: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * f64::from(k - i) / f64::from(i + 1))
}

/// Integer stencil offsets and weights of the central difference of order
/// `k`: `δ^k` for even `k` (width `k+1`), and for odd `k` the average of
/// `δ^k` shifted by `±h/2` (width `k+2`), so `k = 1` is
/// `(y(t+h) - y(t-h)) / 2h`. Weights sum in absolute value to `2^k`.
fn stencil(k: u32) -> Vec<(i32, f64)> {
    let mut w = std::collections::BTreeMap::new();
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binomial(k, j);
        // twice the offset of δ^k's j-th node
        let twice = k as i32 - 2 * j as i32;
        if k.is_multiple_of(2) {
            *w.entry(twice / 2).or_insert(0.0) += c;
        } else {
            *w.entry((twice + 1) / 2).or_insert(0.0) += c / 2.0;
            *w.entry((twice - 1) / 2).or_insert(0.0) += c / 2.0;
        }
    }
    w.into_iter().filter(|&(_, c)| c != 0.0).collect()
}

/// `‖D_h^k y(t) - A^k y(t)‖` for the central difference `D_h^k` of
/// [`stencil`]; second order in `h`.
pub fn derivative_residual(a: &DiagonalOperator, f: &SpectralVector, t: f64, k: u32, h: f64, n: usize) -> Result<f64> {
    derivative_probe(a, f, t, k, h, n).map(|p| p.residual)
}

/// As [`derivative_residual`], also reporting the rounding floor
/// `2^k ε Y (4 + Λ(|t| + r)) / h^k` with `r` the stencil reach, `Y` the
/// largest stencil norm and `Λ = ‖A y(t)‖ / ‖y(t)‖`.
pub fn derivative_probe(
    a: &DiagonalOperator,
    f: &SpectralVector,
    t: f64,
    k: u32,
    h: f64,
    n: usize,
) -> Result<DerivativeProbe> {
    if k == 0 {
        return Err(Error::invalid("derivative order must be >= 1"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid("step h must be finite and > 0"));
    }
    if !t.is_finite() {
        return Err(Error::invalid("t must be finite"));
    }
    require_in_domain(BorelSymbol::abs_pow_exp(k, t), a, f, n)?;
    let reach = f64::from(k.div_ceil(2)) * h;
    require_in_domain(BorelSymbol::exp(t - reach), a, f, n)?;
    require_in_domain(BorelSymbol::exp(t + reach), a, f, n)?;

    let offsets: Vec<(f64, f64)> = stencil(k).into_iter().map(|(m, c)| (t + f64::from(m) * h, c)).collect();
    let scale = h.powi(-(k as i32));
    let (window, _) = f.window(n, |i| a.has_coordinate(i));
    let mut residuals = Vec::with_capacity(window.len());
    let mut stencil_sq = vec![CompensatedSum::new(); offsets.len()];
    let mut y_sq = CompensatedSum::new();
    let mut ay_sq = CompensatedSum::new();
    for (i, z) in window {
        let l = a.eigenvalue(i)?;
        let mut d = Complex64::new(0.0, 0.0);
        for (slot, &(s, c)) in offsets.iter().enumerate() {
            let y = mul_exp(z, s, l.re(), l.im());
            stencil_sq[slot].add(y.norm_sqr());
            d += y * c;
        }
        let yt = mul_exp(z, t, l.re(), l.im());
        let target = BorelSymbol::power(k).apply(l, yt);
        y_sq.add(yt.norm_sqr());
        ay_sq.add((yt * l.to_complex()).norm_sqr());
        residuals.push(d * scale - target);
    }
    let y_max = stencil_sq.iter().map(|s| s.value().sqrt()).fold(0.0, f64::max);
    let y_norm = y_sq.value().sqrt();
    let lambda = if y_norm > 0.0 {
        ay_sq.value().sqrt() / y_norm
    } else {
        0.0
    };
    let noise_floor = 2f64.powi(k as i32) * f64::EPSILON * y_max * (4.0 + lambda * (t.abs() + reach)) * scale;
    Ok(DerivativeProbe {
        residual: norm(residuals),
        noise_floor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothnessVerdict {
    ConvergesOrder2,
    Stalls,
    /// Certified divergence of the domain test at this order.
    DomainRefused,
    /// The domain test could not decide; the report is inconclusive.
    DomainInconclusive,
}

impl SmoothnessVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            SmoothnessVerdict::ConvergesOrder2 => "ConvergesOrder2",
            SmoothnessVerdict::Stalls => "Stalls",
            SmoothnessVerdict::DomainRefused => "DomainRefused",
            SmoothnessVerdict::DomainInconclusive => "DomainInconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub h: f64,
    pub residual: f64,
    pub noise_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: u32,
    pub points: Vec<ResidualPoint>,
    /// Least-squares slope of `ln residual` against `ln h` over the points
    /// clear of the noise floor.
    pub slope: Option<f64>,
    pub verdict: SmoothnessVerdict,
    /// The refusing verdict for `DomainRefused`/`DomainInconclusive`.
    pub domain: Option<DomainVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub t: f64,
    pub orders: Vec<OrderReport>,
}

pub const DEFAULT_H_LADDER: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Points count as signal when they clear the rounding floor by this factor.
const SIGNAL_MARGIN: f64 = 10.0;
const SLOPE_RANGE: (f64, f64) = (1.7, 2.3);

fn ls_slope(points: &[&ResidualPoint]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.h.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.residual.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn classify(points: &[ResidualPoint]) -> (Option<f64>, SmoothnessVerdict) {
    let usable: Vec<&ResidualPoint> = points
        .iter()
        .filter(|p| p.residual > SIGNAL_MARGIN * p.noise_floor)
        .collect();
    if usable.len() >= 2 {
        let s = ls_slope(&usable);
        let v = if (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s) {
            SmoothnessVerdict::ConvergesOrder2
        } else {
            SmoothnessVerdict::Stalls
        };
        return (Some(s), v);
    }
    // nothing to fit: exact up to rounding means converged
    let v = if points.iter().all(|p| p.residual <= SIGNAL_MARGIN * p.noise_floor) {
        SmoothnessVerdict::ConvergesOrder2
    } else {
        SmoothnessVerdict::Stalls
    };
    (None, v)
}

/// Probes orders `1..=max_order` at time `t` across `h_ladder`. A domain
/// refusal at some order ends the probe.
pub fn smoothness_probe(
    a: &DiagonalOperator,
    f: &SpectralVector,
    t: f64,
    max_order: u32,
    h_ladder: &[f64],
    n: usize,
) -> Result<SmoothnessReport> {
    if max_order == 0 {
        return Err(Error::invalid("max_order must be >= 1"));
    }
    if h_ladder.is_empty() {
        return Err(Error::invalid("h ladder is empty"));
    }
    if h_ladder.iter().any(|h| !(h.is_finite() && *h > 0.0)) || h_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("h ladder must be positive and strictly decreasing"));
    }
    let mut orders = Vec::new();
    for k in 1..=max_order {
        let mut points = Vec::with_capacity(h_ladder.len());
        let mut refused = None;
        for &h in h_ladder {
            match derivative_probe(a, f, t, k, h, n) {
                Ok(p) => points.push(ResidualPoint {
                    h,
                    residual: p.residual,
                    noise_floor: p.noise_floor,
                }),
                Err(Error::DomainRefused { verdict }) => {
                    refused = Some(verdict);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(verdict) = refused {
            let v = if verdict.is_not_in_domain() {
                SmoothnessVerdict::DomainRefused
            } else {
                SmoothnessVerdict::DomainInconclusive
            };
            orders.push(OrderReport {
                order: k,
                points: Vec::new(),
                slope: None,
                verdict: v,
                domain: Some(verdict),
            });
            break;
        }
        let (slope, verdict) = classify(&points);
        orders.push(OrderReport {
            order: k,
            points,
            slope,
            verdict,
            domain: None,
        });
    }
    Ok(SmoothnessReport { t, orders })
}

impl SmoothnessReport {
    pub fn verdict_at(&self, order: u32) -> Option<SmoothnessVerdict> {
        self.orders.iter().find(|o| o.order == order).map(|o| o.verdict)
    }
}

pub const REPORT_CSV_HEADER: &str = "t,order,h,residual,verdict";

/// CSV rows `t,order,h,residual,verdict` for several reports, header first.
/// Refused orders get one row with empty `h` and `residual`.
pub fn reports_csv(reports: &[SmoothnessReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        for o in &r.orders {
            if o.points.is_empty() {
                let _ = writeln!(out, "{},{},,,{}", format_float(r.t), o.order, o.verdict.as_str());
            }
            for p in &o.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    format_float(r.t),
                    o.order,
                    format_float(p.h),
                    format_float(p.residual),
                    o.verdict.as_str()
                );
            }
        }
    }
    out
}

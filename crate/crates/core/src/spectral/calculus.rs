use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

use super::domain::{domain_test, law_norm_sq, tail_outcome, TailOutcome, DEFAULT_CAP};
use super::operator::DiagonalOperator;
use super::symbol::{BorelSymbol, RegionPredicate};
use super::vector::{SpectralVector, TailModel, TailPlacement};

/// A finitely supported result plus an ℓ² bound on what was discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub vector: SpectralVector,
    pub tail_error: f64,
}

/// `F(A) f` on the window of `f` up to `n`.
///
/// The domain test runs first with the default cap; a refusal carries its
/// verdict. The identity symbol returns `f` itself, tail included.
pub fn apply_symbol(sym: &BorelSymbol, a: &DiagonalOperator, f: &SpectralVector, n: usize) -> Result<Truncated> {
    apply_symbol_with_cap(sym, a, f, n, DEFAULT_CAP)
}

pub fn apply_symbol_with_cap(
    sym: &BorelSymbol,
    a: &DiagonalOperator,
    f: &SpectralVector,
    n: usize,
    cap: f64,
) -> Result<Truncated> {
    let verdict = domain_test(sym, a, f, n, cap)?;
    if !verdict.is_in_domain() {
        return Err(Error::DomainRefused { verdict });
    }
    if *sym == BorelSymbol::IDENTITY {
        return Ok(Truncated {
            vector: f.clone(),
            tail_error: 0.0,
        });
    }
    let (window, next) = f.window(n, |k| a.has_coordinate(k));
    let mut entries = BTreeMap::new();
    for (k, z) in window {
        let g = sym.apply(a.eigenvalue(k)?, z);
        if !(g.re.is_finite() && g.im.is_finite()) {
            return Err(Error::Overflow { index: k });
        }
        entries.insert(k, g);
    }
    let tail_error = match tail_outcome(sym, a, f.tail(), next) {
        TailOutcome::Bounded(b) => b.sqrt(),
        _ => unreachable!("in-domain verdicts carry a bounded tail"),
    };
    Ok(Truncated {
        vector: SpectralVector::new(entries, TailModel::ZERO)?,
        tail_error,
    })
}

/// `E_A(δ) f`: coefficients with `λ_k ∉ δ` are set to zero on the window;
/// the unmaterialized tail is charged to the error bound in full.
pub fn spectral_projection(
    a: &DiagonalOperator,
    delta: &RegionPredicate,
    f: &SpectralVector,
    n: usize,
) -> Result<Truncated> {
    let (window, next) = f.window(n, |k| a.has_coordinate(k));
    let mut entries = BTreeMap::new();
    for (k, z) in window {
        let keep = delta.contains(a.eigenvalue(k)?);
        entries.insert(k, if keep { z } else { Complex64::new(0.0, 0.0) });
    }
    let rest = match f.tail().placement() {
        TailPlacement::Contiguous if a.dim().is_some_and(|d| next > d) => 0.0,
        _ => law_norm_sq(f.tail(), next),
    };
    Ok(Truncated {
        vector: SpectralVector::new(entries, TailModel::ZERO)?,
        tail_error: rest.sqrt(),
    })
}

/// `⟨f, g⟩ = Σ f_k conj(g_k)` with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    pub value: Complex64,
    pub error_bound: f64,
}

/// Inner product over the windows of both vectors up to `n`. Contiguous
/// tail coefficients are evaluated exactly wherever the other vector is
/// known; the rest is bounded by Cauchy–Schwarz on tail norms.
pub fn pairing(f: &SpectralVector, g: &SpectralVector, n: usize) -> Pairing {
    let (wf, nf) = f.window(n, |_| true);
    let (wg, ng) = g.window(n, |_| true);
    let mut index: BTreeMap<usize, (Complex64, Complex64)> = BTreeMap::new();
    let zero = Complex64::new(0.0, 0.0);
    for &(k, z) in &wf {
        index.entry(k).or_insert((zero, zero)).0 = z;
    }
    for &(k, z) in &wg {
        index.entry(k).or_insert((zero, zero)).1 = z;
    }
    let (mut re, mut im, mut abs) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for (&k, &(mut x, mut y)) in &index {
        if x == zero && k >= nf {
            x = f.coefficient(k).unwrap_or(zero);
        }
        if y == zero && k >= ng {
            y = g.coefficient(k).unwrap_or(zero);
        }
        let p = x * y.conj();
        re.add(p.re);
        im.add(p.im);
        abs.add(x.norm() * y.norm());
    }
    let mut error = 4.0 * f64::EPSILON * abs.value();

    let witness = |v: &SpectralVector| v.tail().placement() != TailPlacement::Contiguous;
    let f_rest = law_norm_sq(f.tail(), nf).sqrt();
    let g_rest = law_norm_sq(g.tail(), ng).sqrt();
    if witness(f) || witness(g) {
        let norm = |w: &[(usize, Complex64)], rest: f64| {
            let s: f64 = w.iter().map(|(_, z)| z.norm_sqr()).sum();
            s.sqrt() + rest
        };
        let (fa, ga) = (norm(&wf, f_rest), norm(&wg, g_rest));
        error += f_rest * ga + fa * g_rest;
    } else {
        let m = nf.max(ng);
        error += law_norm_sq(f.tail(), m).sqrt() * law_norm_sq(g.tail(), m).sqrt();
    }
    Pairing {
        value: Complex64::new(re.value(), im.value()),
        error_bound: error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{FamilyKind, SpectrumFamily};
    use crate::region::ComplexPoint;
    use crate::spectral::vector::TailLaw;

    fn op(kind: FamilyKind) -> DiagonalOperator {
        DiagonalOperator::new(SpectrumFamily::new(kind).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_eigenvector_relations() {
        let a = op(FamilyKind::RealLine { alpha: 1.0, beta: 0.0 });
        let tail = TailModel::contiguous(TailLaw::PowerLaw { p: 3.0 }, 3).unwrap();
        let f = SpectralVector::new([(1, c(0.5, 0.5))].into(), tail).unwrap();
        let out = apply_symbol(&BorelSymbol::power(0), &a, &f, 10).unwrap();
        assert_eq!(out.vector, f);
        assert_eq!(out.tail_error, 0.0);

        let e1 = SpectralVector::unit(1).unwrap();
        let out = apply_symbol(&BorelSymbol::power(1), &a, &e1, 10).unwrap();
        assert_eq!(out.vector, e1);
        let out = apply_symbol(&BorelSymbol::exp(1.0), &a, &e1, 10).unwrap();
        assert_eq!(out.vector.coefficient(1), Some(c(std::f64::consts::E, 0.0)));
    }

    #[test]
    fn refusal_carries_the_verdict() {
        let a = op(FamilyKind::ImaginaryExponential { r: 2.0 });
        let tail = TailModel::new(
            TailLaw::PowerLaw { p: 2.0 },
            1,
            TailPlacement::WitnessBoundedRe { omega: 0.0 },
        )
        .unwrap();
        let f = SpectralVector::new(Default::default(), tail).unwrap();
        match apply_symbol(&BorelSymbol::power(1), &a, &f, 10) {
            Err(Error::DomainRefused { verdict }) => assert!(verdict.is_not_in_domain()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tail_error_dominates_discarded_part() {
        let a = op(FamilyKind::RealLine { alpha: 1.0, beta: 0.0 });
        let tail = TailModel::contiguous(TailLaw::ExpLaw { alpha: 1.0 }, 1).unwrap();
        let f = SpectralVector::new(Default::default(), tail).unwrap();
        let out = apply_symbol(&BorelSymbol::power(1), &a, &f, 20).unwrap();
        let discarded: f64 = (21..2000).map(|k| (k as f64).powi(2) * (-2.0 * k as f64).exp()).sum();
        assert!(out.tail_error >= discarded.sqrt());
        assert!(out.tail_error <= 2.0 * discarded.sqrt());
    }

    #[test]
    fn projection_examples() {
        let a = op(FamilyKind::RealLine { alpha: 1.0, beta: 1.0 });
        let f = SpectralVector::finite([(1, c(1.0, 0.0)), (4, c(0.0, 2.0))]).unwrap();
        let all = spectral_projection(&a, &RegionPredicate::All, &f, 10).unwrap();
        assert_eq!(all.vector, f);
        let none = spectral_projection(&a, &RegionPredicate::Empty, &f, 10).unwrap();
        assert!(none.vector.entries().values().all(|z| *z == c(0.0, 0.0)));
        let small = spectral_projection(&a, &RegionPredicate::ModulusAtMost { radius: 1.5 }, &f, 10).unwrap();
        assert!(small.vector.entries().values().all(|z| *z == c(0.0, 0.0)));
        let point = RegionPredicate::Singleton {
            point: ComplexPoint::new(5.0, 0.0).unwrap(),
        };
        let one = spectral_projection(&a, &point, &f, 10).unwrap();
        assert_eq!(one.vector.coefficient(4), Some(c(0.0, 2.0)));
        assert_eq!(one.vector.coefficient(1), Some(c(0.0, 0.0)));
    }

    #[test]
    fn pairing_examples() {
        let e1 = SpectralVector::unit(1).unwrap();
        let e2 = SpectralVector::unit(2).unwrap();
        assert_eq!(pairing(&e1, &e1, 10).value, c(1.0, 0.0));
        assert_eq!(pairing(&e1, &e2, 10).value, c(0.0, 0.0));

        let tail = TailModel::contiguous(TailLaw::PowerLaw { p: 2.0 }, 1).unwrap();
        let f = SpectralVector::new(Default::default(), tail).unwrap();
        let p = pairing(&f, &f, 10_000);
        let target = std::f64::consts::PI.powi(4) / 90.0;
        assert!(p.error_bound < 1e-12);
        assert!((p.value.re - target).abs() <= p.error_bound + 2.0 * f64::EPSILON * target);
        assert_eq!(p.value.im, 0.0);
    }

    #[test]
    fn pairing_with_a_tail_beyond_the_window_is_exact_on_explicit_entries() {
        let tail = TailModel::contiguous(TailLaw::PowerLaw { p: 2.0 }, 1).unwrap();
        let f = SpectralVector::new(Default::default(), tail).unwrap();
        let g = SpectralVector::unit(50).unwrap();
        let p = pairing(&f, &g, 10);
        assert_eq!(p.value, c(1.0 / 2500.0, 0.0));
    }
}

//! Floating-point helpers shared by the spectral and evolution modules.

pub mod dd;
pub mod sum;

use num_complex::Complex64;

pub use dd::Dd;
pub use sum::{compensated_sum, CompensatedSum};

/// `f · e^{tλ}` with `λ = re + i·im`, rounded once from a double-double
/// intermediate. Falls back to plain double arithmetic when the phase
/// `t·im` is too large for the extended reduction, and to halving plus
/// double-angle steps when it is not even a finite double. The modulus is
/// exact either way; a phase that large carries no information at double
/// precision.
pub fn mul_exp(f: Complex64, t: f64, re: f64, im: f64) -> Complex64 {
    if t == 0.0 {
        return f;
    }
    let (growth, phase) = (Dd::product(t, re), Dd::product(t, im));
    let modulus = growth.exp();
    if !modulus.hi.is_finite() {
        return Complex64::new(f64::INFINITY, f64::INFINITY);
    }
    let (s, c) = match phase.sin_cos() {
        Some(sc) => sc,
        None => {
            let (s, c) = huge_phase(t, im);
            (Dd::new(s), Dd::new(c))
        }
    };
    let er = modulus * c;
    let ei = modulus * s;
    let re = er.mul_f64(f.re) - ei.mul_f64(f.im);
    let im = ei.mul_f64(f.re) + er.mul_f64(f.im);
    Complex64::new(re.to_f64(), im.to_f64())
}

fn huge_phase(t: f64, im: f64) -> (f64, f64) {
    let mut halvings = 0;
    let mut x = t * im;
    while !x.is_finite() {
        halvings += 1;
        x = (t / 2f64.powi(halvings)) * im;
    }
    let (mut s, mut c) = x.sin_cos();
    for _ in 0..halvings {
        (s, c) = (2.0 * s * c, c * c - s * s);
    }
    (s, c)
}

/// Unit in the last place of `|x|` (spacing of doubles at that magnitude).
pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() {
        return f64::MIN_POSITIVE * f64::EPSILON;
    }
    let exp = a.log2().floor();
    let u = 2f64.powf(exp) * f64::EPSILON;
    // log2 can land one off near powers of two
    if 2f64.powf(exp) > a {
        u / 2.0
    } else if 2f64.powf(exp + 1.0) <= a {
        u * 2.0
    } else {
        u
    }
}

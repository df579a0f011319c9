//! Double-double arithmetic: just enough of it to evaluate `exp`, `sin` and
//! `cos` to ~106 bits so that products `f · e^{tλ}` round only once.

use std::ops::{Add, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};
const PIO2_1: f64 = std::f64::consts::FRAC_PI_2;
const PIO2_2: f64 = 6.123_233_995_736_766e-17;
const PIO2_3: f64 = -1.497_384_904_859_169_8e-33;

/// Quadrant counts beyond this make the three-part reduction of `π/2` lossy.
const MAX_QUADRANTS: f64 = (1u64 << 30) as f64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, mut e) = two_prod(self.hi, b);
        e += self.lo * b;
        Self::renorm(p, e)
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, mut f) = two_sum(self.hi, -p);
        f -= e;
        f += self.lo;
        let q2 = (s + f) / b;
        Self::renorm(q1, q2)
    }

    fn scale_pow2(self, k: i32) -> Self {
        // Two steps so that 2^k itself never overflows for k near ±1074.
        let half = k / 2;
        let a = 2f64.powi(half);
        let b = 2f64.powi(k - half);
        Dd {
            hi: self.hi * a * b,
            lo: self.lo * a * b,
        }
    }

    /// `e^x`, accurate to roughly 2^-100 relative outside the
    /// overflow/underflow zones.
    pub fn exp(self) -> Self {
        if self.hi > 709.79 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - Dd::product(k, LN2.hi) - Dd::new(k * LN2.lo);
        // e^r = (e^{r/512})^512
        let s = Dd {
            hi: r.hi / 512.0,
            lo: r.lo / 512.0,
        };
        let mut p = Dd::ONE;
        for n in (2..=11).rev() {
            p = Dd::ONE + (p * s).div_f64(n as f64);
        }
        let mut u = s * p;
        for _ in 0..9 {
            u = u * (u + Dd::new(2.0));
        }
        (Dd::ONE + u).scale_pow2(k as i32)
    }

    /// `(sin x, cos x)`; `None` when `|x|` is too large for the built-in
    /// argument reduction.
    pub fn sin_cos(self) -> Option<(Dd, Dd)> {
        let k = (self.hi / PIO2_1).round();
        if k.abs() > MAX_QUADRANTS {
            return None;
        }
        let r = self - Dd::product(k, PIO2_1) - Dd::product(k, PIO2_2) - Dd::new(k * PIO2_3);
        let r2 = r * r;

        let mut sp = Dd::ONE;
        for n in (1..=13).rev() {
            let d = (2 * n * (2 * n + 1)) as f64;
            sp = Dd::ONE - (sp * r2).div_f64(d);
        }
        let s = r * sp;

        let mut c = Dd::ONE;
        for n in (1..=13).rev() {
            let d = ((2 * n - 1) * (2 * n)) as f64;
            c = Dd::ONE - (c * r2).div_f64(d);
        }

        let quadrant = (k as i64).rem_euclid(4);
        Some(match quadrant {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        })
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, mut e) = two_prod(self.hi, b.hi);
        e += self.hi * b.lo + self.lo * b.hi;
        Dd::renorm(p, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 300-bit evaluation, split into hi + lo.
    fn close(got: Dd, hi: f64, lo: f64, rel: f64) -> bool {
        let diff = (got.hi - hi) + (got.lo - lo);
        diff.abs() <= rel * hi.abs()
    }

    #[test]
    fn exp_matches_high_precision_reference() {
        let cases = [
            (0.5, 1.648_721_270_700_128_2, -4.731_568_479_435_833e-17),
            (-3.25, 0.038_774_207_831_722_01, 1.143_341_885_184_182_4e-18),
            (10.1, 24_343.009_424_408_38, -1.466_928_281_962_806_8e-12),
            (0.001, 1.001_000_500_166_708_4, -4.290_842_058_948_394e-17),
            (123.456, 4.132_944_352_778_106e53, 6.702_925_749_764_18e36),
        ];
        for (x, hi, lo) in cases {
            let got = Dd::new(x).exp();
            assert!(close(got, hi, lo, 1e-29), "exp({x}) = {got:?}");
            assert_eq!(got.to_f64(), hi, "exp({x}) must round correctly");
        }
    }

    #[test]
    fn exp_saturates() {
        assert_eq!(Dd::new(800.0).exp().hi, f64::INFINITY);
        assert_eq!(Dd::new(-800.0).exp().to_f64(), 0.0);
        assert_eq!(Dd::new(0.0).exp(), Dd::ONE);
    }

    #[test]
    fn sin_cos_match_high_precision_reference() {
        let cases = [
            (
                0.1,
                (0.099_833_416_646_828_15, 3.080_015_129_294_92e-18),
                (0.995_004_165_278_025_8, -5.502_101_569_183_77e-17),
            ),
            (
                1.0,
                (0.841_470_984_807_896_5, 1.776_845_092_935_536e-18),
                (0.540_302_305_868_139_8, -4.760_954_612_604_417e-17),
            ),
            (
                2.5,
                (0.598_472_144_103_956_5, -5.521_403_334_082_375e-17),
                (-0.801_143_615_546_933_7, -1.867_474_270_508_555_3e-17),
            ),
            (
                100.0,
                (-0.506_365_641_109_758_8, -3.050_947_053_792_115e-18),
                (0.862_318_872_287_683_9, 4.334_809_858_136_501e-17),
            ),
            (
                -7.0,
                (-0.656_986_598_718_789_1, -2.937_261_786_543_214e-17),
                (0.753_902_254_343_304_6, 3.728_245_359_710_072e-17),
            ),
            (
                1e6,
                (-0.349_993_502_171_292_94, -1.595_284_880_932_396_8e-17),
                (0.936_752_127_533_144_7, 4.637_088_260_214_747e-17),
            ),
        ];
        for (x, (sh, sl), (ch, cl)) in cases {
            let (s, c) = Dd::new(x).sin_cos().unwrap();
            assert!(close(s, sh, sl, 1e-28), "sin({x}) = {s:?}");
            assert!(close(c, ch, cl, 1e-28), "cos({x}) = {c:?}");
        }
    }

    #[test]
    fn sin_cos_refuses_huge_arguments() {
        assert!(Dd::new(1e20).sin_cos().is_none());
    }

    #[test]
    fn division_by_double_is_accurate() {
        let third = Dd::ONE.div_f64(3.0);
        let back = third.mul_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
    }
}

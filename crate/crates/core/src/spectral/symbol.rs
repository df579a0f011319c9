use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::mul_exp;
use crate::region::{ComplexPoint, RegionParams};

/// Borel sets of the plane used by indicator symbols and projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RegionPredicate {
    All,
    Empty,
    /// `|λ| <= radius`
    ModulusAtMost {
        radius: f64,
    },
    /// `|λ - center| <= radius`
    Disk {
        center: ComplexPoint,
        radius: f64,
    },
    ReAtLeast {
        value: f64,
    },
    ReAtMost {
        value: f64,
    },
    ImAtLeast {
        value: f64,
    },
    ImAtMost {
        value: f64,
    },
    InRegion {
        region: RegionParams,
    },
    Singleton {
        point: ComplexPoint,
    },
    Not {
        of: Box<RegionPredicate>,
    },
    And {
        all: Vec<RegionPredicate>,
    },
    Or {
        any: Vec<RegionPredicate>,
    },
}

impl RegionPredicate {
    pub fn contains(&self, p: ComplexPoint) -> bool {
        match self {
            RegionPredicate::All => true,
            RegionPredicate::Empty => false,
            RegionPredicate::ModulusAtMost { radius } => p.modulus() <= *radius,
            RegionPredicate::Disk { center, radius } => (p.to_complex() - center.to_complex()).norm() <= *radius,
            RegionPredicate::ReAtLeast { value } => p.re() >= *value,
            RegionPredicate::ReAtMost { value } => p.re() <= *value,
            RegionPredicate::ImAtLeast { value } => p.im() >= *value,
            RegionPredicate::ImAtMost { value } => p.im() <= *value,
            RegionPredicate::InRegion { region } => crate::region::in_region(p, *region),
            RegionPredicate::Singleton { point } => p == *point,
            RegionPredicate::Not { of } => !of.contains(p),
            RegionPredicate::And { all } => all.iter().all(|q| q.contains(p)),
            RegionPredicate::Or { any } => any.iter().any(|q| q.contains(p)),
        }
    }

    pub fn and(self, other: RegionPredicate) -> RegionPredicate {
        RegionPredicate::And { all: vec![self, other] }
    }
}

/// A scalar function of the eigenvalue from a fixed catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BorelSymbol {
    /// `λ^n`; `Power(0)` is the identity.
    Power { n: u32 },
    /// `e^{tλ}`
    Exp { t: f64 },
    /// `|λ|^m e^{t Re λ}`
    AbsPowExp { m: u32, t: f64 },
    /// `1_δ(λ)`
    Indicator { predicate: RegionPredicate },
}

impl BorelSymbol {
    pub const IDENTITY: BorelSymbol = BorelSymbol::Power { n: 0 };

    pub fn power(n: u32) -> Self {
        BorelSymbol::Power { n }
    }

    pub fn exp(t: f64) -> Self {
        BorelSymbol::Exp { t }
    }

    pub fn abs_pow_exp(m: u32, t: f64) -> Self {
        BorelSymbol::AbsPowExp { m, t }
    }

    /// `F(λ)·f`. Powers are applied as repeated multiplication, so
    /// `λ^{n+m} f` is computed exactly as `λ^n (λ^m f)`.
    pub fn apply(&self, lambda: ComplexPoint, f: Complex64) -> Complex64 {
        match self {
            BorelSymbol::Power { n } => {
                let l = lambda.to_complex();
                (0..*n).fold(f, |acc, _| acc * l)
            }
            BorelSymbol::Exp { t } => mul_exp(f, *t, lambda.re(), lambda.im()),
            BorelSymbol::AbsPowExp { m, t } => {
                let r = lambda.modulus();
                let g = mul_exp(f, *t, lambda.re(), 0.0);
                (0..*m).fold(g, |acc, _| acc * r)
            }
            BorelSymbol::Indicator { predicate } => {
                if predicate.contains(lambda) {
                    f
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    /// `|F(λ) f|²`. For `Exp` the phase is dropped, so eigenvalues whose
    /// phase `t·Im λ` is not representable still get an exact modulus.
    pub fn apply_norm_sqr(&self, lambda: ComplexPoint, f: Complex64) -> f64 {
        match self {
            BorelSymbol::Exp { t } => mul_exp(f, *t, lambda.re(), 0.0).norm_sqr(),
            _ => self.apply(lambda, f).norm_sqr(),
        }
    }

    /// `F(λ)` itself.
    pub fn value(&self, lambda: ComplexPoint) -> Complex64 {
        self.apply(lambda, Complex64::new(1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im).unwrap()
    }

    #[test]
    fn symbol_values() {
        let l = pt(1.0, 2.0);
        assert_eq!(BorelSymbol::power(0).value(l), Complex64::new(1.0, 0.0));
        assert_eq!(BorelSymbol::power(2).value(l), Complex64::new(-3.0, 4.0));
        let e = BorelSymbol::exp(1.0).value(pt(1.0, 0.0));
        assert_eq!(e, Complex64::new(std::f64::consts::E, 0.0));
        let a = BorelSymbol::abs_pow_exp(2, 0.0).value(pt(3.0, 4.0));
        assert!((a.re - 25.0).abs() < 1e-13 && a.im == 0.0);
    }

    #[test]
    fn predicates() {
        let p = pt(3.0, 4.0);
        assert!(RegionPredicate::All.contains(p));
        assert!(!RegionPredicate::Empty.contains(p));
        assert!(RegionPredicate::ModulusAtMost { radius: 5.0 }.contains(p));
        assert!(!RegionPredicate::ModulusAtMost { radius: 4.9 }.contains(p));
        assert!(RegionPredicate::Singleton { point: p }.contains(p));
        let q = RegionPredicate::ReAtLeast { value: 3.0 }.and(RegionPredicate::ImAtMost { value: 3.0 });
        assert!(!q.contains(p));
        assert!(RegionPredicate::Not { of: Box::new(q) }.contains(p));
    }

    #[test]
    fn serde_shape() {
        let s: BorelSymbol = serde_json::from_str(r#"{"kind":"abs-pow-exp","m":2,"t":-1.5}"#).unwrap();
        assert_eq!(s, BorelSymbol::abs_pow_exp(2, -1.5));
        let s: BorelSymbol =
            serde_json::from_str(r#"{"kind":"indicator","predicate":{"kind":"disk","center":[0,1],"radius":2}}"#)
                .unwrap();
        assert!(matches!(s, BorelSymbol::Indicator { .. }));
        assert!(serde_json::from_str::<BorelSymbol>(r#"{"kind":"power","n":1,"t":0}"#).is_err());
    }
}

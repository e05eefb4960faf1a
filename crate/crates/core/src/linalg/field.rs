use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational literal of the form `p/q` or `p`.
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational literal".into());
    }
    Scalar::from_str(t).map_err(|e| format!("bad rational literal {t:?}: {e}"))
}

pub fn fmt_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// The arithmetic the matrix routines need. `inverse` returns `None` on non-units.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn from_scalar(x: &Scalar) -> Self;

    fn over(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|i| self.times(&i))
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        !Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_scalar(x: &Scalar) -> Self {
        x.clone()
    }
}

/// First-order dual number `value + deriv·ε` with `ε² = 0`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct DualScalar {
    pub value: Scalar,
    pub deriv: Scalar,
}

impl DualScalar {
    pub fn new(value: Scalar, deriv: Scalar) -> Self {
        DualScalar { value, deriv }
    }

    pub fn constant(value: Scalar) -> Self {
        DualScalar { value, deriv: Zero::zero() }
    }

    pub fn variable(value: Scalar) -> Self {
        DualScalar { value, deriv: One::one() }
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deriv.is_negative() {
            write!(f, "{} - {}e", self.value, -&self.deriv)
        } else {
            write!(f, "{} + {}e", self.value, self.deriv)
        }
    }
}

impl Field for DualScalar {
    fn zero() -> Self {
        DualScalar::constant(Zero::zero())
    }
    fn one() -> Self {
        DualScalar::constant(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.value) && Zero::is_zero(&self.deriv)
    }
    fn is_unit(&self) -> bool {
        !Zero::is_zero(&self.value)
    }
    fn plus(&self, o: &Self) -> Self {
        DualScalar::new(&self.value + &o.value, &self.deriv + &o.deriv)
    }
    fn minus(&self, o: &Self) -> Self {
        DualScalar::new(&self.value - &o.value, &self.deriv - &o.deriv)
    }
    fn times(&self, o: &Self) -> Self {
        DualScalar::new(
            &self.value * &o.value,
            &self.value * &o.deriv + &self.deriv * &o.value,
        )
    }
    fn negated(&self) -> Self {
        DualScalar::new(-&self.value, -&self.deriv)
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(&self.value) {
            return None;
        }
        let inv = self.value.recip();
        let d = -(&self.deriv * &inv * &inv);
        Some(DualScalar::new(inv, d))
    }
    fn from_scalar(x: &Scalar) -> Self {
        DualScalar::constant(x.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_scalar("3/6").unwrap(), qr(1, 2));
        assert_eq!(parse_scalar("-4").unwrap(), q(-4));
        assert_eq!(parse_scalar(" -2/3 ").unwrap(), qr(-2, 3));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(fmt_scalar(&qr(6, -4)), "-3/2");
        assert_eq!(fmt_scalar(&q(5)), "5");
    }

    #[test]
    fn dual_ring_laws() {
        let a = DualScalar::new(q(2), q(3));
        let b = DualScalar::new(q(-1), qr(1, 2));
        assert_eq!(a.times(&b), DualScalar::new(q(-2), q(1) + q(-3)));
        let ai = a.inverse().unwrap();
        assert_eq!(a.times(&ai), DualScalar::one());
        assert!(DualScalar::new(q(0), q(1)).inverse().is_none());
        assert!(!DualScalar::new(q(0), q(1)).is_zero());
    }

    #[test]
    fn dual_chain_rule_quadratic() {
        // f(x) = (x^2 + 3x) / (x + 1), f'(x) = (x^2 + 2x + 3) / (x + 1)^2
        for x0 in [q(0), q(2), qr(-1, 3), q(7)] {
            let x = DualScalar::variable(x0.clone());
            let num = x.times(&x).plus(&DualScalar::from_scalar(&q(3)).times(&x));
            let den = x.plus(&DualScalar::one());
            let f = num.over(&den).unwrap();
            let one = q(1);
            let expect_v = (&x0 * &x0 + q(3) * &x0) / (&x0 + &one);
            let expect_d = (&x0 * &x0 + q(2) * &x0 + q(3)) / ((&x0 + &one) * (&x0 + &one));
            assert_eq!(f.value, expect_v);
            assert_eq!(f.deriv, expect_d);
        }
    }
}

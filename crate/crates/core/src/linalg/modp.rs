//! Arithmetic modulo the Mersenne prime `2^61 - 1`, used to certify nonvanishing quickly.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::field::{Field, Scalar};
use super::matrix::Matrix;

pub const P: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp(pub u64);

fn reduce(x: &BigInt) -> u64 {
    let r = (x.abs() % BigInt::from(P)).to_u64().expect("below modulus");
    if x.is_negative() && r != 0 {
        P - r
    } else {
        r
    }
}

impl Fp {
    /// Reduction of a rational; `None` if the denominator vanishes mod `P`.
    pub fn try_from_scalar(x: &Scalar) -> Option<Fp> {
        let d = Fp(reduce(x.denom())).inverse()?;
        Some(Fp(reduce(x.numer())).times(&d))
    }

    fn pow(self, mut e: u64) -> Fp {
        let (mut b, mut r) = (self, Fp(1));
        while e > 0 {
            if e & 1 == 1 {
                r = r.times(&b);
            }
            b = b.times(&b);
            e >>= 1;
        }
        r
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_unit(&self) -> bool {
        self.0 != 0
    }
    fn plus(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn minus(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
    fn times(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
    fn negated(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    /// Panics if the denominator vanishes mod `P`.
    fn from_scalar(x: &Scalar) -> Self {
        Fp::try_from_scalar(x).expect("denominator divisible by the modulus")
    }
}

/// Reduction of a rational matrix, if every denominator is a unit mod `P`.
pub fn reduce_matrix(m: &Matrix<Scalar>) -> Option<Matrix<Fp>> {
    let data = m.entries().iter().map(Fp::try_from_scalar).collect::<Option<Vec<_>>>()?;
    Some(Matrix::new(m.rows(), m.cols(), data))
}

pub mod field;
pub mod matrix;
pub mod modp;

pub use field::{fmt_scalar, parse_scalar, q, qr, DualScalar, Field, Scalar};
pub use matrix::{Bruhat, Matrix, Uld};
pub use modp::Fp;

//! Exact arithmetic in the cyclotomic field `Q(eps)`, `eps` a primitive
//! `l`-th root of unity, together with eps-deformed integers and an
//! interchangeable approximate complex backend.
//!
//! Elements of `Q(eps)` are stored as polynomials in `eps` reduced modulo the
//! `l`-th cyclotomic polynomial, so equality and zero tests are
//! coefficientwise.

mod backend;
mod error;
mod field;
mod order;
mod poly;
mod qnum;

pub use backend::{Backend, ExactBackend, ExponentValue, FloatBackend};
pub use error::ScalarError;
pub use field::{CycScalar, CyclotomicField};
pub use order::RootOrder;
pub use poly::{cyclotomic_poly, IntPoly};
pub use qnum::{gaussian_binomial_laurent, q_binomial, q_factorial, q_int};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;

//! Symbolic computation in the C*-algebra `Q_2` generated by a unitary `U` and
//! an isometry `S_2` with `S_2 U = U^2 S_2`, together with its Cuntz
//! subalgebra `O_2` (`S_1 = U S_2`), the canonical representation on
//! `l^2(Z)`, the Thompson-type group of unitaries of the form
//! `Σ S_α U^k S_β*`, and endomorphisms `λ_u` determined by unitaries.

pub mod canrep;
pub mod element;
pub mod endo;
pub mod error;
pub mod monomial;
pub mod parse;
pub mod sample;
pub mod scalar;
pub mod wgroup;
pub mod words;

pub use element::{Element, Membership, PutnamForm};
pub use error::{Error, Result};
pub use monomial::Monomial;
pub use parse::{parse_element, parse_monomial};
pub use scalar::Scalar;
pub use words::{Partition, Word};

/// Exact coefficients; the default for [`Element`].
pub type Rational = num_rational::BigRational;
/// Charges and exponents.
pub type Integer = num_bigint::BigInt;
pub type RationalElement = Element<Rational>;
pub type IntElement = Element<num_bigint::BigInt>;
pub type F64Element = Element<f64>;

//! Exact divisor-class calculus on moduli spaces of pointed stable
//! hyperelliptic curves.
//!
//! The crate builds canonical classes, Weierstraß-type effective divisors and
//! their pullbacks in exact rational arithmetic, and certifies positivity of
//! `K = εψ + (1-ε)W + E` by solving the linear feasibility problem in `ε`.
//! A small Reid–Tai toolkit classifies cyclic tangent-space actions by age.
//!
//! All algebra is generic over [`scalar::Scalar`]; the aliases below fix the
//! arbitrary-precision instantiation used by the verifier and the CLI.

pub mod certificate;
pub mod error;
pub mod formulas;
pub mod picard;
pub mod pullback;
pub mod reidtai;
pub mod render;
pub mod report;
pub mod scalar;
pub mod verifier;

pub use error::{Error, Result};
pub use formulas::{LambdaVariant, SpaceVariant};
pub use picard::{ClassLabel, PointSet, Space, SymLabel};
pub use pullback::LoganTerms;
pub use scalar::Scalar;
pub use verifier::Verdict;

pub use num_rational::{BigRational, Rational64};

/// Arbitrary-precision rational; the default coefficient type.
pub type Rational = BigRational;

pub type DivisorClass = picard::DivisorClass<BigRational>;
pub type SymmetricDivisorClass = picard::SymmetricDivisorClass<BigRational>;
pub type LoganClass = pullback::LoganClass<BigRational>;
pub type WClass = pullback::WClass<BigRational>;
pub type AffineCoefficient = verifier::AffineCoefficient<BigRational>;
pub type FeasibleSet = verifier::FeasibleSet<BigRational>;
pub type KodairaCertificate = verifier::KodairaCertificate<BigRational>;
pub type ActionClassification = reidtai::ActionClassification<BigRational>;

/// Machine-word instantiation for small inputs; panics on overflow.
pub type DivisorClass64 = picard::DivisorClass<Rational64>;
pub type SymmetricDivisorClass64 = picard::SymmetricDivisorClass<Rational64>;

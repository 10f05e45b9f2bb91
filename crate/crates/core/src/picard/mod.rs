//! Free-module arithmetic over canonical Picard-group generators.
//!
//! - [`label`]: generator names and the canonicalization rules identifying
//!   conjugate boundary labels
//! - [`class`]: sparse exact divisor classes in the labelled basis
//! - [`symmetric`]: the same classes written as sums over `S_n`-orbits

pub mod class;
pub mod label;
pub mod symmetric;

pub use class::DivisorClass;
pub use label::{canonicalize_label, generators, ClassLabel, PointSet, Space};
pub use symmetric::{
    orbit_label, orbit_members, orbit_size, validate_orbit_label, SymLabel, SymmetricDivisorClass,
    EXPAND_MAX_POINTS,
};
pub(crate) use symmetric::raw_multiplicity;

use crate::error::Result;
use crate::scalar::Scalar;

/// Read access to the coefficient list of either class representation.
pub trait Coefficients<T> {
    fn coefficient_values(&self) -> Vec<&T>;
}

impl<T: Scalar> Coefficients<T> for DivisorClass<T> {
    fn coefficient_values(&self) -> Vec<&T> {
        self.iter().map(|(_, c)| c).collect()
    }
}

impl<T: Scalar> Coefficients<T> for SymmetricDivisorClass<T> {
    fn coefficient_values(&self) -> Vec<&T> {
        self.iter().map(|(_, c)| c).collect()
    }
}

/// True iff every coefficient is nonnegative.
pub fn is_effective_certificate<T: Scalar, C: Coefficients<T>>(x: &C) -> bool {
    x.coefficient_values().into_iter().all(|c| !c.is_negative())
}

pub fn symmetrize<T: Scalar>(x: &DivisorClass<T>) -> Result<SymmetricDivisorClass<T>> {
    SymmetricDivisorClass::symmetrize(x)
}

pub fn expand<T: Scalar>(x: &SymmetricDivisorClass<T>) -> Result<DivisorClass<T>> {
    x.expand()
}

/// `c1 * a + c2 * b`.
pub fn combine<T: Scalar>(a: &DivisorClass<T>, c1: &T, b: &DivisorClass<T>, c2: &T) -> Result<DivisorClass<T>> {
    DivisorClass::combine(a, c1, b, c2)
}

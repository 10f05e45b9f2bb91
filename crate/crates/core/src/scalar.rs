//! Exact scalar types used as divisor-class coefficients.
//!
//! Every computation in this crate is generic over [`Scalar`]. The trait is
//! implemented for `Ratio<T>` over machine or arbitrary-precision integers.
//! Floating point types are deliberately excluded: they are not `Ord`, and the
//! threshold the verifier certifies is an exact vanishing.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    fn from_frac(num: i64, den: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_frac(value, 1)
    }

    fn to_big(&self) -> BigRational;

    /// `None` when the value does not fit the underlying integer type.
    fn from_big(value: &BigRational) -> Option<Self>;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Hash
        + Debug
        + Display
        + From<i64>
        + Into<BigInt>
        + TryFrom<BigInt>
        + Send
        + Sync
        + 'static,
{
    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(T::from(num), T::from(den))
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(self.numer().clone().into(), self.denom().clone().into())
    }

    fn from_big(value: &BigRational) -> Option<Self> {
        let num = T::try_from(value.numer().clone()).ok()?;
        let den = T::try_from(value.denom().clone()).ok()?;
        Some(Ratio::new(num, den))
    }
}

/// Binomial coefficient `C(n, k)` as an exact scalar; zero when `k > n`.
pub fn binomial<T: Scalar>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::from_int((n - i) as i64) / T::from_int((i + 1) as i64);
    }
    acc
}

/// Pascal triangle rows `0..=max_n`, columns `0..=max_k`.
#[derive(Debug, Clone)]
pub struct BinomialTable<T> {
    rows: Vec<Vec<T>>,
    max_k: usize,
}

impl<T: Clone + num_traits::Zero + num_traits::One> BinomialTable<T> {
    pub fn new(max_n: usize, max_k: usize) -> Self {
        let mut rows: Vec<Vec<T>> = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let mut row = vec![T::zero(); max_k + 1];
            row[0] = T::one();
            if n > 0 {
                let prev = &rows[n - 1];
                for k in 1..=max_k.min(n) {
                    row[k] = prev[k - 1].clone() + prev[k].clone();
                }
            }
            rows.push(row);
        }
        Self { rows, max_k }
    }

    /// `C(n, k)`, zero outside the triangle. Panics if `n` or `k` exceed the table.
    pub fn get(&self, n: i64, k: i64) -> T {
        if n < 0 || k < 0 || k > n {
            return T::zero();
        }
        assert!(k as usize <= self.max_k, "binomial table column {k} > {}", self.max_k);
        self.rows[n as usize][k as usize].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use num_traits::Zero;

    #[test]
    fn binomial_matches_integer_binomial() {
        for n in 0..40u64 {
            for k in 0..=n + 1 {
                let exact: BigRational = binomial(n, k);
                let expected = if k > n { 0u128 } else { num_integer::binomial(n as u128, k as u128) };
                assert_eq!(exact, BigRational::from_integer(BigInt::from(expected)), "C({n},{k})");
            }
        }
    }

    #[test]
    fn pascal_table_agrees_with_multiplicative_formula() {
        let table = BinomialTable::<BigRational>::new(60, 12);
        for n in 0..=60i64 {
            for k in 0..=12i64 {
                assert_eq!(table.get(n, k), binomial::<BigRational>(n as u64, k as u64));
            }
        }
        assert!(table.get(-1, 0).is_zero());
        assert!(table.get(3, 5).is_zero());
    }

    #[test]
    fn machine_rationals_round_trip_through_big() {
        let x = Rational64::from_frac(-7, 10);
        let big = x.to_big();
        assert_eq!(Rational64::from_big(&big), Some(x));
        let huge = BigRational::from_integer(BigInt::from(u64::MAX) * BigInt::from(4));
        assert_eq!(Rational64::from_big(&huge), None);
    }
}

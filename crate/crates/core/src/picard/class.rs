use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::picard::label::{canonicalize_label, ClassLabel, Space};
use crate::scalar::Scalar;

/// A rational divisor class in the free basis of canonical generators.
///
/// Terms are keyed by canonical labels and never hold a zero coefficient, so
/// structural equality is equality of classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass<T> {
    space: Space,
    terms: BTreeMap<ClassLabel, T>,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn zero(space: Space) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    /// Sums raw terms after canonicalization; convention-identified labels accumulate.
    pub fn from_raw_terms<I>(space: Space, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ClassLabel, T)>,
    {
        let mut class = Self::zero(space);
        for (label, coeff) in terms {
            class.add_raw(&label, coeff)?;
        }
        Ok(class)
    }

    pub fn single(space: Space, label: ClassLabel, coeff: T) -> Result<Self> {
        Self::from_raw_terms(space, [(label, coeff)])
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn add_raw(&mut self, label: &ClassLabel, coeff: T) -> Result<()> {
        if let Some(canonical) = canonicalize_label(label, self.space)? {
            self.add_canonical(canonical, coeff);
        }
        Ok(())
    }

    /// Caller guarantees `label` is canonical on this space.
    pub(crate) fn add_canonical(&mut self, label: ClassLabel, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient of a raw label (canonicalized first); zero if absent.
    pub fn coefficient(&self, label: &ClassLabel) -> Result<T> {
        Ok(match canonicalize_label(label, self.space)? {
            Some(canonical) => self.terms.get(&canonical).cloned().unwrap_or_else(T::zero),
            None => T::zero(),
        })
    }

    pub fn get(&self, canonical: &ClassLabel) -> Option<&T> {
        self.terms.get(canonical)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClassLabel, &T)> {
        self.terms.iter()
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &T) -> Self {
        if factor.is_zero() {
            return Self::zero(self.space);
        }
        Self {
            space: self.space,
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c.clone() * factor.clone())).collect(),
        }
    }

    /// `c1 * a + c2 * b`.
    pub fn combine(a: &Self, c1: &T, b: &Self, c2: &T) -> Result<Self> {
        if a.space != b.space {
            return Err(Error::SpaceMismatch { left: a.space, right: b.space });
        }
        let mut out = a.scale(c1);
        if !c2.is_zero() {
            for (label, coeff) in &b.terms {
                out.add_canonical(label.clone(), coeff.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::combine(self, &T::one(), other, &T::one())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        Self::combine(self, &T::one(), other, &-T::one())
    }

    pub fn add_assign_scaled(&mut self, other: &Self, factor: &T) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space, right: other.space });
        }
        for (label, coeff) in &other.terms {
            self.add_canonical(label.clone(), coeff.clone() * factor.clone());
        }
        Ok(())
    }

    /// Coefficientwise nonnegativity. Sufficient, not necessary, for effectivity:
    /// every generator is an effective boundary or tautological class.
    pub fn is_effective_certificate(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

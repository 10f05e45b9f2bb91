use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::class::DivisorClass;
use crate::picard::label::{canonicalize_label, ClassLabel, PointSet, Space};
use crate::scalar::Scalar;

/// Largest `n` for which [`SymmetricDivisorClass::expand`] will enumerate orbits.
pub const EXPAND_MAX_POINTS: u32 = 20;

/// An `S_n`-orbit of canonical generators.
///
/// `size` is `|S|` for the canonical member, except at self-conjugate genus
/// indices (`2i = g` for δ, `2i = g - 1` for ε) where `S` and `S^c` name the
/// same divisor and `size` is `min(|S|, n - |S|)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymLabel {
    Lambda,
    /// `ψ = Σ ψ_i`.
    Psi,
    DeltaIrr,
    Eps0,
    Eps { genus: u32, size: u32 },
    Delta { genus: u32, size: u32 },
    QuotDelta(u32),
}

impl fmt::Display for SymLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymLabel::Lambda => write!(f, "lambda"),
            SymLabel::Psi => write!(f, "psi"),
            SymLabel::DeltaIrr => write!(f, "deltairr"),
            SymLabel::Eps0 => write!(f, "eps0"),
            SymLabel::Eps { genus, size } => write!(f, "eps({genus},{size})"),
            SymLabel::Delta { genus: 0, size } => write!(f, "delta0({size})"),
            SymLabel::Delta { genus, size } => write!(f, "delta({genus},{size})"),
            SymLabel::QuotDelta(s) => write!(f, "qdelta({s})"),
        }
    }
}

impl FromStr for SymLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognized symmetric label `{s}`"));
        let args = |body: &str| -> Result<Vec<u32>> {
            body.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| bad())).collect()
        };
        match s.trim() {
            "lambda" => return Ok(SymLabel::Lambda),
            "psi" => return Ok(SymLabel::Psi),
            "deltairr" => return Ok(SymLabel::DeltaIrr),
            "eps0" => return Ok(SymLabel::Eps0),
            _ => {}
        }
        let (head, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let v = args(body)?;
        match (head, v.as_slice()) {
            ("eps", [genus, size]) => Ok(SymLabel::Eps { genus: *genus, size: *size }),
            ("delta", [genus, size]) if *genus > 0 => Ok(SymLabel::Delta { genus: *genus, size: *size }),
            ("delta0", [size]) => Ok(SymLabel::Delta { genus: 0, size: *size }),
            ("qdelta", [size]) => Ok(SymLabel::QuotDelta(*size)),
            _ => Err(bad()),
        }
    }
}

fn is_self_conjugate_delta(genus: u32, g: u32) -> bool {
    genus > 0 && 2 * genus == g
}

fn is_self_conjugate_eps(genus: u32, g: u32) -> bool {
    2 * genus + 1 == g
}

/// The orbit a canonical label belongs to.
pub fn orbit_label(label: &ClassLabel, space: Space) -> SymLabel {
    let n = space.marked_points();
    let g = space.genus().unwrap_or(0);
    let folded = |len: usize, self_conj: bool| {
        let len = len as u32;
        if self_conj {
            len.min(n - len)
        } else {
            len
        }
    };
    match label {
        ClassLabel::Lambda => SymLabel::Lambda,
        ClassLabel::Psi(_) => SymLabel::Psi,
        ClassLabel::DeltaIrr => SymLabel::DeltaIrr,
        ClassLabel::Eps0 => SymLabel::Eps0,
        ClassLabel::Eps { genus, points } => SymLabel::Eps {
            genus: *genus,
            size: folded(points.len(), is_self_conjugate_eps(*genus, g)),
        },
        ClassLabel::Delta { genus, points } => SymLabel::Delta {
            genus: *genus,
            size: folded(points.len(), is_self_conjugate_delta(*genus, g)),
        },
        ClassLabel::QuotDelta(s) => SymLabel::QuotDelta(*s),
    }
}

fn invalid(label: &SymLabel, space: Space) -> Error {
    Error::LabelNotInSpace { label: label.to_string(), space }
}

/// Checks that `label` names a nonempty orbit of canonical generators on `space`.
pub fn validate_orbit_label(label: &SymLabel, space: Space) -> Result<()> {
    let n = space.marked_points();
    let ok = match (label, space) {
        (SymLabel::Lambda | SymLabel::DeltaIrr, Space::MbarGN { .. }) => true,
        (SymLabel::Psi, Space::MbarGN { .. } | Space::HbarGN { .. }) => n >= 1,
        (SymLabel::Eps0, Space::HbarG { .. } | Space::HbarGN { .. }) => true,
        (SymLabel::Eps { genus, size }, Space::HbarG { g } | Space::HbarGN { g, .. }) => {
            let max_size = if is_self_conjugate_eps(*genus, g) { n / 2 } else { n };
            *genus >= 1 && 2 * genus < g && *size <= max_size
        }
        (SymLabel::Delta { genus, size }, Space::HbarG { g } | Space::HbarGN { g, .. } | Space::MbarGN { g, .. }) => {
            if *genus == 0 {
                (2..=n).contains(size)
            } else {
                let max_size = if is_self_conjugate_delta(*genus, g) { n / 2 } else { n };
                2 * genus <= g && *size <= max_size
            }
        }
        (SymLabel::QuotDelta(s), Space::M0Quot { points }) => *s >= 2 && 2 * s <= points,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(invalid(label, space))
    }
}

/// Number of distinct canonical generators in the orbit, by closed form.
pub fn orbit_size(label: &SymLabel, space: Space) -> Result<u128> {
    validate_orbit_label(label, space)?;
    let n = space.marked_points();
    let g = space.genus().unwrap_or(0);
    let choose = |k: u32| num_integer::binomial(n as u128, k as u128);
    Ok(match label {
        SymLabel::Psi => n as u128,
        SymLabel::Eps { genus, size } | SymLabel::Delta { genus, size } => {
            let self_conj = match label {
                SymLabel::Eps { .. } => is_self_conjugate_eps(*genus, g),
                _ => is_self_conjugate_delta(*genus, g),
            };
            if n == 0 {
                1
            } else if self_conj && 2 * size == n {
                choose(*size) / 2
            } else {
                choose(*size)
            }
        }
        _ => 1,
    })
}

/// How many of the `2^n` raw subsets land on each member of the orbit: two at a
/// self-conjugate midpoint, where `S` and `S^c` name the same generator, else one.
pub(crate) fn raw_multiplicity(label: &SymLabel, space: Space) -> u32 {
    let n = space.marked_points();
    let g = space.genus().unwrap_or(0);
    match label {
        SymLabel::Eps { genus, size } if n > 0 && 2 * size == n && is_self_conjugate_eps(*genus, g) => 2,
        SymLabel::Delta { genus, size } if n > 0 && 2 * size == n && is_self_conjugate_delta(*genus, g) => 2,
        _ => 1,
    }
}

/// The canonical generators making up an orbit, by enumeration.
pub fn orbit_members(label: &SymLabel, space: Space) -> Result<Vec<ClassLabel>> {
    validate_orbit_label(label, space)?;
    let n = space.marked_points();
    let raw: Vec<ClassLabel> = match label {
        SymLabel::Lambda => vec![ClassLabel::Lambda],
        SymLabel::Psi => (1..=n).map(ClassLabel::Psi).collect(),
        SymLabel::DeltaIrr => vec![ClassLabel::DeltaIrr],
        SymLabel::Eps0 => vec![ClassLabel::Eps0],
        SymLabel::Eps { genus, size } => PointSet::subsets_of_size(n, *size as usize)
            .map(|s| ClassLabel::eps(*genus, s))
            .collect(),
        SymLabel::Delta { genus, size } => PointSet::subsets_of_size(n, *size as usize)
            .map(|s| ClassLabel::delta(*genus, s))
            .collect(),
        SymLabel::QuotDelta(s) => vec![ClassLabel::QuotDelta(*s)],
    };
    let mut out = BTreeSet::new();
    for r in raw {
        if let Some(c) = canonicalize_label(&r, space)? {
            out.insert(c);
        }
    }
    Ok(out.into_iter().collect())
}

/// A class written in orbit sums: each entry `(orbit, c)` stands for
/// `c · Σ_{members} generator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricDivisorClass<T> {
    space: Space,
    terms: BTreeMap<SymLabel, T>,
}

impl<T: Scalar> SymmetricDivisorClass<T> {
    pub fn zero(space: Space) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(space: Space, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SymLabel, T)>,
    {
        let mut out = Self::zero(space);
        for (label, coeff) in terms {
            out.add(label, coeff)?;
        }
        Ok(out)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn add(&mut self, label: SymLabel, coeff: T) -> Result<()> {
        validate_orbit_label(&label, self.space)?;
        self.add_unchecked(label, coeff);
        Ok(())
    }

    pub(crate) fn add_unchecked(&mut self, label: SymLabel, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(label).or_insert_with(T::zero);
        *entry = std::mem::replace(entry, T::zero()) + coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, label: &SymLabel) -> T {
        self.terms.get(label).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SymLabel, &T)> {
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
        let mut out = Self::zero(self.space);
        for (l, c) in &self.terms {
            out.add_unchecked(l.clone(), c.clone() * factor.clone());
        }
        out
    }

    pub fn combine(a: &Self, c1: &T, b: &Self, c2: &T) -> Result<Self> {
        let mut out = if c1.is_one() { a.clone() } else { a.scale(c1) };
        out.add_assign_scaled(b, c2)?;
        Ok(out)
    }

    /// `self += factor·other` in place.
    pub fn add_assign_scaled(&mut self, other: &Self, factor: &T) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space, right: other.space });
        }
        for (l, c) in &other.terms {
            self.add_unchecked(l.clone(), c.clone() * factor.clone());
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::combine(self, &T::one(), other, &T::one())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        Self::combine(self, &T::one(), other, &-T::one())
    }

    pub fn is_effective_certificate(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Writes out every orbit as the sum of its canonical members.
    pub fn expand(&self) -> Result<DivisorClass<T>> {
        let n = self.space.marked_points();
        if n > EXPAND_MAX_POINTS {
            return Err(Error::EnumerationBound(format!(
                "expanding orbits needs n <= {EXPAND_MAX_POINTS}, got {n}"
            )));
        }
        let mut out = DivisorClass::zero(self.space);
        for (label, coeff) in &self.terms {
            for member in orbit_members(label, self.space)? {
                out.add_canonical(member, coeff.clone());
            }
        }
        Ok(out)
    }

    /// Groups an `S_n`-invariant class into orbits.
    pub fn symmetrize(class: &DivisorClass<T>) -> Result<Self> {
        let space = class.space();
        let mut grouped: BTreeMap<SymLabel, (T, u128, ClassLabel)> = BTreeMap::new();
        for (label, coeff) in class.iter() {
            let key = orbit_label(label, space);
            match grouped.get_mut(&key) {
                None => {
                    grouped.insert(key, (coeff.clone(), 1, label.clone()));
                }
                Some((first, count, witness)) => {
                    if first != coeff {
                        return Err(Error::NotInvariant(format!(
                            "orbit {key}: {witness} has {first} but {label} has {coeff}"
                        )));
                    }
                    *count += 1;
                }
            }
        }
        let mut out = Self::zero(space);
        for (key, (coeff, count, witness)) in grouped {
            let expected = orbit_size(&key, space)?;
            if count != expected {
                return Err(Error::NotInvariant(format!(
                    "orbit {key} has {expected} members but only {count} carry the coefficient {coeff} of {witness}"
                )));
            }
            out.add_unchecked(key, coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn multiplicity_times_orbit_is_binomial() {
        for g in 2..=6 {
            for n in 0..=7u32 {
                let space = Space::HbarGN { g, n };
                for i in 1..=g {
                    for size in 0..=n {
                        for label in [SymLabel::Eps { genus: i, size }, SymLabel::Delta { genus: i, size }] {
                            let Ok(orbit) = orbit_size(&label, space) else { continue };
                            let raw = if n == 0 { 1 } else { num_integer::binomial(n as u128, size as u128) };
                            assert_eq!(orbit * raw_multiplicity(&label, space) as u128, raw, "{label} g={g} n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn symmetrize_pair_sum() {
        let space = Space::HbarGN { g: 2, n: 4 };
        let class = DivisorClass::from_raw_terms(
            space,
            PointSet::subsets_of_size(4, 2).map(|s| (ClassLabel::delta(0, s), Q::from_int(1))),
        )
        .unwrap();
        let sym = SymmetricDivisorClass::symmetrize(&class).unwrap();
        let key = SymLabel::Delta { genus: 0, size: 2 };
        assert_eq!(sym.len(), 1);
        assert_eq!(sym.coefficient(&key), Q::from_int(1));
        assert_eq!(orbit_size(&key, space).unwrap(), 6);
        assert_eq!(sym.expand().unwrap(), class);
    }

    #[test]
    fn symmetrize_rejects_non_invariant() {
        let space = Space::HbarGN { g: 3, n: 2 };
        let class = DivisorClass::single(space, ClassLabel::delta(1, PointSet::new([1])), Q::from_int(1)).unwrap();
        let err = SymmetricDivisorClass::symmetrize(&class).unwrap_err();
        assert!(matches!(err, Error::NotInvariant(_)), "{err}");
    }

    #[test]
    fn symmetrize_rejects_unequal_orbit_coefficients() {
        let space = Space::MbarGN { g: 2, n: 3 };
        let class = DivisorClass::from_raw_terms(
            space,
            [(ClassLabel::Psi(1), Q::from_int(1)), (ClassLabel::Psi(2), Q::from_int(1)), (ClassLabel::Psi(3), Q::from_int(2))],
        )
        .unwrap();
        assert!(SymmetricDivisorClass::symmetrize(&class).is_err());
    }

    #[test]
    fn orbit_sizes_match_enumeration() {
        for g in 2..=6 {
            for n in 0..=7 {
                let spaces = if n == 0 {
                    vec![Space::HbarG { g }]
                } else {
                    vec![Space::HbarGN { g, n }, Space::MbarGN { g, n }]
                };
                for space in spaces {
                    let mut keys = BTreeSet::new();
                    for gen in crate::picard::label::generators(space) {
                        keys.insert(orbit_label(&gen, space));
                    }
                    let mut total = 0u128;
                    for key in &keys {
                        let members = orbit_members(key, space).unwrap();
                        assert_eq!(members.len() as u128, orbit_size(key, space).unwrap(), "{key} on {space}");
                        assert!(members.iter().all(|m| &orbit_label(m, space) == key));
                        total += members.len() as u128;
                    }
                    assert_eq!(total as usize, crate::picard::label::generators(space).len());
                }
            }
        }
    }

    #[test]
    fn label_grammar_round_trips() {
        for label in [
            SymLabel::Psi,
            SymLabel::Eps0,
            SymLabel::Lambda,
            SymLabel::DeltaIrr,
            SymLabel::Eps { genus: 2, size: 5 },
            SymLabel::Delta { genus: 0, size: 3 },
            SymLabel::Delta { genus: 4, size: 0 },
            SymLabel::QuotDelta(3),
        ] {
            assert_eq!(label.to_string().parse::<SymLabel>().unwrap(), label);
        }
        assert!("delta(0,3)".parse::<SymLabel>().is_err());
        assert!("kappa".parse::<SymLabel>().is_err());
    }
}

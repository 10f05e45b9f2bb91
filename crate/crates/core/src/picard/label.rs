use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The moduli space a class lives on. Point labels run over `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    /// Stable hyperelliptic curves of genus `g`.
    HbarG { g: u32 },
    /// Stable hyperelliptic curves of genus `g` with `n` marked points.
    HbarGN { g: u32, n: u32 },
    /// All stable curves of genus `g` with `n` marked points.
    MbarGN { g: u32, n: u32 },
    /// Stable rational curves with `points` unordered markings.
    M0Quot { points: u32 },
}

impl Space {
    pub fn genus(&self) -> Option<u32> {
        match *self {
            Space::HbarG { g } | Space::HbarGN { g, .. } | Space::MbarGN { g, .. } => Some(g),
            Space::M0Quot { .. } => None,
        }
    }

    /// Number of labelled marked points (zero on `HbarG` and `M0Quot`).
    pub fn marked_points(&self) -> u32 {
        match *self {
            Space::HbarGN { n, .. } | Space::MbarGN { n, .. } => n,
            Space::HbarG { .. } | Space::M0Quot { .. } => 0,
        }
    }

    pub fn is_hyperelliptic(&self) -> bool {
        matches!(self, Space::HbarG { .. } | Space::HbarGN { .. })
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::HbarG { g } => write!(f, "Hbar_{g}"),
            Space::HbarGN { g, n } => write!(f, "Hbar_{{{g},{n}}}"),
            Space::MbarGN { g, n } => write!(f, "Mbar_{{{g},{n}}}"),
            Space::M0Quot { points } => write!(f, "Mbar_{{0,{points}}}/S_{points}"),
        }
    }
}

/// A set of marked-point labels, stored as a strictly increasing sequence.
///
/// The derived ordering is lexicographic on that sequence, which is the
/// tie-break used for self-conjugate boundary labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointSet(Vec<u32>);

impl PointSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `{1, ..., n}`.
    pub fn full(n: u32) -> Self {
        Self((1..=n).collect())
    }

    pub fn new<I: IntoIterator<Item = u32>>(points: I) -> Self {
        let set: BTreeSet<u32> = points.into_iter().collect();
        Self(set.into_iter().collect())
    }

    pub(crate) fn from_sorted_unchecked(points: Vec<u32>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Self(points)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, point: u32) -> bool {
        self.0.binary_search(&point).is_ok()
    }

    pub fn complement(&self, n: u32) -> Self {
        let mut out = Vec::with_capacity(n as usize - self.0.len().min(n as usize));
        let mut it = self.0.iter().peekable();
        for p in 1..=n {
            if it.peek() == Some(&&p) {
                it.next();
            } else {
                out.push(p);
            }
        }
        Self(out)
    }

    pub fn union(&self, other: &PointSet) -> Self {
        Self::from_sorted_unchecked(self.0.iter().merge(other.0.iter()).dedup().copied().collect())
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.0.iter().all(|p| other.contains(*p))
    }

    pub(crate) fn check_range(&self, n: u32) -> Result<()> {
        match self.0.iter().find(|&&p| p == 0 || p > n) {
            Some(&label) => Err(Error::PointOutOfRange { label, n }),
            None => Ok(()),
        }
    }

    /// All subsets of `{1..n}`, ordered by size then lexicographically.
    pub fn all_subsets(n: u32) -> impl Iterator<Item = PointSet> {
        (0..=n as usize).flat_map(move |k| Self::subsets_of_size(n, k))
    }

    pub fn subsets_of_size(n: u32, k: usize) -> impl Iterator<Item = PointSet> {
        (1..=n).combinations(k).map(PointSet::from_sorted_unchecked)
    }

    /// All subsets of `self`.
    pub fn subsets(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.0
            .iter()
            .copied()
            .powerset()
            .map(PointSet::from_sorted_unchecked)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// A generator (or raw name of a generator) of a rational Picard group.
///
/// On `HbarG` the ε and δ labels carry the empty point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    Lambda,
    Psi(u32),
    DeltaIrr,
    Eps0,
    Eps { genus: u32, points: PointSet },
    Delta { genus: u32, points: PointSet },
    /// Boundary class `δ_{0,s}` on the symmetric quotient of `Mbar_{0,N}`.
    QuotDelta(u32),
}

impl ClassLabel {
    pub fn eps(genus: u32, points: PointSet) -> Self {
        ClassLabel::Eps { genus, points }
    }

    pub fn delta(genus: u32, points: PointSet) -> Self {
        ClassLabel::Delta { genus, points }
    }

    /// `ε_i` on `HbarG`.
    pub fn eps_hg(genus: u32) -> Self {
        Self::eps(genus, PointSet::empty())
    }

    /// `δ_i` on `HbarG`.
    pub fn delta_hg(genus: u32) -> Self {
        Self::delta(genus, PointSet::empty())
    }
}

/// Serialization grammar: `lambda`, `psi(k)`, `deltairr`, `eps0`,
/// `eps(i,{a,b})`, `delta(i,{a,b})`, `delta0({a,b})`, `qdelta(s)`.
impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Lambda => write!(f, "lambda"),
            ClassLabel::Psi(k) => write!(f, "psi({k})"),
            ClassLabel::DeltaIrr => write!(f, "deltairr"),
            ClassLabel::Eps0 => write!(f, "eps0"),
            ClassLabel::Eps { genus, points } => write!(f, "eps({genus},{points})"),
            ClassLabel::Delta { genus: 0, points } => write!(f, "delta0({points})"),
            ClassLabel::Delta { genus, points } => write!(f, "delta({genus},{points})"),
            ClassLabel::QuotDelta(s) => write!(f, "qdelta({s})"),
        }
    }
}

fn not_in_space(label: &ClassLabel, space: Space) -> Error {
    Error::LabelNotInSpace { label: label.to_string(), space }
}

/// Lexicographically smaller of `points` and its complement.
fn lex_min(points: PointSet, n: u32) -> PointSet {
    let complement = points.complement(n);
    match points.cmp(&complement) {
        Ordering::Greater => complement,
        _ => points,
    }
}

/// Reduces a raw label to its canonical representative, or `None` when the
/// label names the zero divisor.
///
/// Identifications: `δ_{i,S} = δ_{g-i,S^c}`, `ε_{i,S} = ε_{g-1-i,S^c}`,
/// `δ_{0,S} = 0` for `|S| <= 1`, `δ_{0,s} = δ_{0,N-s}` on the rational
/// quotient. Self-conjugate indices keep the lexicographically smaller of
/// `S`, `S^c`. Raw `ε_{i,S}` requires `1 <= i <= g-2`; `ε_0` has no subset.
pub fn canonicalize_label(raw: &ClassLabel, space: Space) -> Result<Option<ClassLabel>> {
    let n = space.marked_points();
    match (raw, space) {
        (ClassLabel::Lambda | ClassLabel::DeltaIrr, Space::MbarGN { .. }) => Ok(Some(raw.clone())),
        (ClassLabel::Psi(k), Space::MbarGN { .. } | Space::HbarGN { .. }) => {
            if *k == 0 || *k > n {
                Err(Error::PointOutOfRange { label: *k, n })
            } else {
                Ok(Some(raw.clone()))
            }
        }
        (ClassLabel::Eps0, Space::HbarG { .. } | Space::HbarGN { .. }) => Ok(Some(ClassLabel::Eps0)),
        (ClassLabel::Eps { genus, points }, Space::HbarG { g } | Space::HbarGN { g, .. }) => {
            if *genus == 0 || *genus + 2 > g {
                return Err(Error::IndexOutOfRange { index: *genus, max: g.saturating_sub(2), space });
            }
            points.check_range(n)?;
            let top = g - 1;
            let (genus, points) = if 2 * genus > top {
                (top - genus, points.complement(n))
            } else if 2 * genus == top {
                (*genus, lex_min(points.clone(), n))
            } else {
                (*genus, points.clone())
            };
            Ok(Some(ClassLabel::Eps { genus, points }))
        }
        (
            ClassLabel::Delta { genus, points },
            Space::HbarG { g } | Space::HbarGN { g, .. } | Space::MbarGN { g, .. },
        ) => {
            if *genus > g {
                return Err(Error::IndexOutOfRange { index: *genus, max: g, space });
            }
            points.check_range(n)?;
            let (genus, points) = if 2 * genus > g {
                (g - genus, points.complement(n))
            } else if 2 * genus == g {
                (*genus, lex_min(points.clone(), n))
            } else {
                (*genus, points.clone())
            };
            if genus == 0 && points.len() <= 1 {
                return Ok(None);
            }
            Ok(Some(ClassLabel::Delta { genus, points }))
        }
        (ClassLabel::QuotDelta(s), Space::M0Quot { points }) => {
            if *s > points {
                return Err(Error::IndexOutOfRange { index: *s, max: points, space });
            }
            let s = (*s).min(points - s);
            Ok((s >= 2).then_some(ClassLabel::QuotDelta(s)))
        }
        _ => Err(not_in_space(raw, space)),
    }
}

/// Every canonical generator of the space's rational Picard group, in order.
///
/// Enumerates all subsets of the marked points; intended for small `n`.
pub fn generators(space: Space) -> Vec<ClassLabel> {
    let mut out = BTreeSet::new();
    let n = space.marked_points();
    let mut push = |raw: ClassLabel| {
        if let Ok(Some(label)) = canonicalize_label(&raw, space) {
            out.insert(label);
        }
    };
    match space {
        Space::M0Quot { points } => {
            for s in 2..=points / 2 {
                push(ClassLabel::QuotDelta(s));
            }
        }
        Space::MbarGN { g, .. } => {
            push(ClassLabel::Lambda);
            push(ClassLabel::DeltaIrr);
            for k in 1..=n {
                push(ClassLabel::Psi(k));
            }
            for i in 0..=g / 2 {
                for s in PointSet::all_subsets(n) {
                    push(ClassLabel::delta(i, s));
                }
            }
        }
        Space::HbarG { g } | Space::HbarGN { g, .. } => {
            push(ClassLabel::Eps0);
            for k in 1..=n {
                push(ClassLabel::Psi(k));
            }
            for i in 1..=g.saturating_sub(1) / 2 {
                for s in PointSet::all_subsets(n) {
                    push(ClassLabel::eps(i, s));
                }
            }
            for i in 0..=g / 2 {
                for s in PointSet::all_subsets(n) {
                    push(ClassLabel::delta(i, s));
                }
            }
        }
    }
    out.into_iter().collect()
}

//! Named divisor classes and relations on `Hbar_g`, `Hbar_{g,n}` and the
//! rational quotient `Mbar_{0,2g+2}/S_{2g+2}`.
//!
//! Every `Σ_S` below runs over all `2^n` subsets in raw label form and is
//! canonicalized afterwards. Labels identified by the conjugation rules
//! therefore accumulate: at a self-conjugate genus index both `S` and `S^c`
//! contribute to the same generator. Each labelled constructor has a
//! symmetric twin that produces the same class in orbit form without
//! enumerating subsets; the tests check the two against each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{
    canonicalize_label, orbit_label, orbit_size, raw_multiplicity, ClassLabel, DivisorClass, PointSet, Space, SymLabel,
    SymmetricDivisorClass, EXPAND_MAX_POINTS,
};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceVariant {
    Stack,
    Coarse,
}

/// How `λ` is written in the boundary basis of `Hbar_{g,n}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaVariant {
    /// Coefficient-preserving pullback of the `Hbar_g` relation: `δ_{i,S}` gets `4i(g-i)`.
    #[default]
    Faithful,
    /// The pulled-back relation with `δ_{i,S}` coefficient `i(g-i)`.
    Printed,
}

impl std::fmt::Display for LambdaVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LambdaVariant::Faithful => "faithful",
            LambdaVariant::Printed => "printed",
        })
    }
}

impl std::str::FromStr for LambdaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "faithful" => Ok(LambdaVariant::Faithful),
            "printed" => Ok(LambdaVariant::Printed),
            _ => Err(Error::Parse(format!("unknown lambda variant `{s}`"))),
        }
    }
}

pub(crate) fn require_genus(g: u32) -> Result<()> {
    if g < 2 {
        return Err(Error::Precondition(format!("genus must be at least 2, got {g}")));
    }
    Ok(())
}

fn require_enumerable(n: u32) -> Result<()> {
    if n > EXPAND_MAX_POINTS {
        return Err(Error::EnumerationBound(format!(
            "labelled classes enumerate 2^n subsets; n <= {EXPAND_MAX_POINTS} required, got {n}"
        )));
    }
    Ok(())
}

fn frac<T: Scalar>(num: i64, den: i64) -> T {
    T::from_frac(num, den)
}

/// Coefficient of `ε_0` (and of `δ_{0,2}` on the rational quotient): `-(1/2 + 1/(2g+1))`.
pub fn eps0_canonical_coefficient<T: Scalar>(g: u32) -> T {
    let g = g as i64;
    -(frac::<T>(1, 2) + frac(1, 2 * g + 1))
}

/// `s(2g+2-s)/(2g+1) - 2`, the coefficient of `δ_{0,s}` on the rational quotient.
fn quotient_coefficient<T: Scalar>(g: u32, s: u32) -> T {
    let (g, s) = (g as i64, s as i64);
    frac::<T>(s * (2 * g + 2 - s), 2 * g + 1) - T::from_int(2)
}

/// `(2i+2)·2(g-i)/(2g+1) - 2`, the `ε_i` coefficient of the coarse canonical class.
pub fn eps_canonical_coefficient<T: Scalar>(g: u32, i: u32) -> T {
    quotient_coefficient(g, 2 * i + 2)
}

/// `(2i+1)(2g-2i+1)/(4g+2)`, the `δ_i` coefficient of the stack canonical class.
pub fn delta_stack_coefficient<T: Scalar>(g: u32, i: u32) -> T {
    let (g, i) = (g as i64, i as i64);
    frac((2 * i + 1) * (2 * g - 2 * i + 1), 4 * g + 2)
}

fn eps_indices(g: u32) -> std::ops::RangeInclusive<u32> {
    1..=g.saturating_sub(1) / 2
}

fn delta_indices(g: u32) -> std::ops::RangeInclusive<u32> {
    1..=g / 2
}

/// `λ` on `Hbar_g` in the boundary basis.
pub fn lambda_relation<T: Scalar>(g: u32) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    let space = Space::HbarG { g };
    let d = 8 * g as i64 + 4;
    let gi = g as i64;
    let mut terms = vec![(ClassLabel::Eps0, frac(gi, d))];
    for i in eps_indices(g) {
        let i = i as i64;
        terms.push((ClassLabel::eps_hg(i as u32), frac(2 * (i + 1) * (gi - i), d)));
    }
    for i in delta_indices(g) {
        let i = i as i64;
        terms.push((ClassLabel::delta_hg(i as u32), frac(4 * i * (gi - i), d)));
    }
    DivisorClass::from_raw_terms(space, terms)
}

/// `δ_irr` on `Hbar_g`, or its pullback to `Hbar_{g,n}` when `n` is given.
pub fn delta_irr_decomposition<T: Scalar>(g: u32, n: Option<u32>) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    let mut base = DivisorClass::single(Space::HbarG { g }, ClassLabel::Eps0, T::one())?;
    for i in eps_indices(g) {
        base.add_raw(&ClassLabel::eps_hg(i), T::from_int(2))?;
    }
    match n {
        None => Ok(base),
        Some(n) => hyperelliptic_forgetful_pullback(&base, n),
    }
}

pub fn delta_irr_decomposition_symmetric<T: Scalar>(g: u32, n: u32) -> Result<SymmetricDivisorClass<T>> {
    require_genus(g)?;
    hyperelliptic_forgetful_pullback_symmetric(&delta_irr_decomposition(g, None)?, n)
}

/// Canonical class of the coarse space `Mbar_{0,2g+2}/S_{2g+2}`.
pub fn canonical_class_rational_quotient<T: Scalar>(g: u32) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    let space = Space::M0Quot { points: 2 * g + 2 };
    let mut terms = vec![(ClassLabel::QuotDelta(2), eps0_canonical_coefficient(g))];
    for s in 3..=g + 1 {
        terms.push((ClassLabel::QuotDelta(s), quotient_coefficient(g, s)));
    }
    DivisorClass::from_raw_terms(space, terms)
}

/// Pullback along `Hbar_g -> Mbar_{0,2g+2}/S_{2g+2}`:
/// `δ_{0,2i+2} ↦ ε_i`, `δ_{0,2i+1} ↦ δ_i / 2`.
pub fn phi_pullback<T: Scalar>(x: &DivisorClass<T>) -> Result<DivisorClass<T>> {
    let points = match x.space() {
        Space::M0Quot { points } if points >= 6 && points % 2 == 0 => points,
        other => {
            return Err(Error::Precondition(format!(
                "phi pullback needs a class on Mbar_{{0,2g+2}}/S_{{2g+2}} with g >= 2, got {other}"
            )))
        }
    };
    let g = points / 2 - 1;
    let mut out = DivisorClass::zero(Space::HbarG { g });
    for (label, coeff) in x.iter() {
        let s = match label {
            ClassLabel::QuotDelta(s) if (2..=g + 1).contains(s) => *s,
            other => {
                return Err(Error::LabelNotInSpace { label: other.to_string(), space: x.space() });
            }
        };
        if s == 2 {
            out.add_raw(&ClassLabel::Eps0, coeff.clone())?;
        } else if s % 2 == 0 {
            out.add_raw(&ClassLabel::eps_hg((s - 2) / 2), coeff.clone())?;
        } else {
            out.add_raw(&ClassLabel::delta_hg((s - 1) / 2), coeff.clone() * frac(1, 2))?;
        }
    }
    Ok(out)
}

/// Canonical class of `Hbar_g`; the stack class adds the ramification `R = Σ δ_i`.
pub fn canonical_class_hg<T: Scalar>(g: u32, variant: SpaceVariant) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    let mut terms = vec![(ClassLabel::Eps0, eps0_canonical_coefficient(g))];
    for i in eps_indices(g) {
        terms.push((ClassLabel::eps_hg(i), eps_canonical_coefficient(g, i)));
    }
    for i in delta_indices(g) {
        let mut c: T = delta_stack_coefficient(g, i);
        if variant == SpaceVariant::Coarse {
            c = c - T::one();
        }
        terms.push((ClassLabel::delta_hg(i), c));
    }
    DivisorClass::from_raw_terms(Space::HbarG { g }, terms)
}

fn require_points(n: u32, variant: SpaceVariant) -> Result<()> {
    match variant {
        SpaceVariant::Stack if n < 1 => Err(Error::Precondition("stack canonical class requires n ≥ 1".into())),
        SpaceVariant::Coarse if n < 2 => Err(Error::Precondition("coarse canonical class requires n ≥ 2".into())),
        _ => Ok(()),
    }
}

/// Canonical class of `Hbar_{g,n}` in the labelled basis (enumerates all subsets).
pub fn canonical_class_hgn<T: Scalar>(g: u32, n: u32, variant: SpaceVariant) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    require_points(n, variant)?;
    require_enumerable(n)?;
    let space = Space::HbarGN { g, n };
    let mut out = DivisorClass::zero(space);
    for k in 1..=n {
        out.add_raw(&ClassLabel::Psi(k), T::one())?;
    }
    out.add_raw(&ClassLabel::Eps0, eps0_canonical_coefficient(g))?;
    let two = T::from_int(2);
    for s in PointSet::all_subsets(n) {
        for i in eps_indices(g) {
            out.add_raw(&ClassLabel::eps(i, s.clone()), eps_canonical_coefficient(g, i))?;
        }
        for i in delta_indices(g) {
            out.add_raw(&ClassLabel::delta(i, s.clone()), delta_stack_coefficient(g, i))?;
        }
        if s.len() >= 2 {
            out.add_raw(&ClassLabel::delta(0, s), -two.clone())?;
        }
    }
    if variant == SpaceVariant::Coarse {
        let r = ramification_divisor::<T>(g, Some(n))?;
        out = out.checked_sub(&r)?;
    }
    Ok(out)
}

/// Adds `coeff · Σ_{S ⊆ [n]} raw(i, S)` in orbit form.
///
/// Orbit `O` gets per-term coefficient `coeff · #{raw S landing in O} / |O|`.
fn add_subset_sum<T: Scalar>(
    out: &mut SymmetricDivisorClass<T>,
    raw: impl Fn(u32, PointSet) -> ClassLabel,
    i: u32,
    coeff: &T,
) -> Result<()> {
    let space = out.space();
    let n = space.marked_points();
    for t in 0..=n {
        let representative = raw(i, PointSet::from_sorted_unchecked((1..=t).collect()));
        let Some(canonical) = canonicalize_label(&representative, space)? else {
            continue;
        };
        let key = orbit_label(&canonical, space);
        match raw_multiplicity(&key, space) {
            1 => out.add(key, coeff.clone())?,
            k => out.add(key, coeff.clone() * T::from_int(k.into()))?,
        }
    }
    Ok(())
}

/// Symmetric form of [`canonical_class_hgn`]; no subset enumeration.
pub fn canonical_class_hgn_symmetric<T: Scalar>(
    g: u32,
    n: u32,
    variant: SpaceVariant,
) -> Result<SymmetricDivisorClass<T>> {
    require_genus(g)?;
    require_points(n, variant)?;
    let space = Space::HbarGN { g, n };
    let mut out = SymmetricDivisorClass::zero(space);
    out.add(SymLabel::Psi, T::one())?;
    out.add(SymLabel::Eps0, eps0_canonical_coefficient(g))?;
    for i in eps_indices(g) {
        add_subset_sum(&mut out, ClassLabel::eps, i, &eps_canonical_coefficient(g, i))?;
    }
    for i in delta_indices(g) {
        add_subset_sum(&mut out, ClassLabel::delta, i, &delta_stack_coefficient(g, i))?;
    }
    for s in 2..=n {
        out.add(SymLabel::Delta { genus: 0, size: s }, T::from_int(-2))?;
    }
    if variant == SpaceVariant::Coarse {
        out = out.checked_sub(&ramification_divisor_symmetric(g, n)?)?;
    }
    Ok(out)
}

fn hg_source_genus(x: &DivisorClass<impl Scalar>) -> Result<u32> {
    match x.space() {
        Space::HbarG { g } => Ok(g),
        other => Err(Error::Precondition(format!("expected a class on Hbar_g, got {other}"))),
    }
}

/// Pullback along the map forgetting all `n` marked points,
/// `ε_0 ↦ ε_0`, `ε_i ↦ Σ_S ε_{i,S}`, `δ_i ↦ Σ_S δ_{i,S}`.
pub fn hyperelliptic_forgetful_pullback<T: Scalar>(x: &DivisorClass<T>, n: u32) -> Result<DivisorClass<T>> {
    let g = hg_source_genus(x)?;
    if n == 0 {
        return Err(Error::Precondition("pullback to Hbar_{g,n} needs n ≥ 1".into()));
    }
    require_enumerable(n)?;
    let mut out = DivisorClass::zero(Space::HbarGN { g, n });
    for (label, coeff) in x.iter() {
        match label {
            ClassLabel::Eps0 => out.add_raw(label, coeff.clone())?,
            ClassLabel::Eps { genus, .. } => {
                for s in PointSet::all_subsets(n) {
                    out.add_raw(&ClassLabel::eps(*genus, s), coeff.clone())?;
                }
            }
            ClassLabel::Delta { genus, .. } => {
                for s in PointSet::all_subsets(n) {
                    out.add_raw(&ClassLabel::delta(*genus, s), coeff.clone())?;
                }
            }
            other => return Err(Error::LabelNotInSpace { label: other.to_string(), space: x.space() }),
        }
    }
    Ok(out)
}

pub fn hyperelliptic_forgetful_pullback_symmetric<T: Scalar>(
    x: &DivisorClass<T>,
    n: u32,
) -> Result<SymmetricDivisorClass<T>> {
    let g = hg_source_genus(x)?;
    if n == 0 {
        return Err(Error::Precondition("pullback to Hbar_{g,n} needs n ≥ 1".into()));
    }
    let mut out = SymmetricDivisorClass::zero(Space::HbarGN { g, n });
    for (label, coeff) in x.iter() {
        match label {
            ClassLabel::Eps0 => out.add(SymLabel::Eps0, coeff.clone())?,
            ClassLabel::Eps { genus, .. } => add_subset_sum(&mut out, ClassLabel::eps, *genus, coeff)?,
            ClassLabel::Delta { genus, .. } => add_subset_sum(&mut out, ClassLabel::delta, *genus, coeff)?,
            other => return Err(Error::LabelNotInSpace { label: other.to_string(), space: x.space() }),
        }
    }
    Ok(out)
}

/// `λ` on `Hbar_g` with the `δ` coefficients the chosen variant uses.
fn lambda_source<T: Scalar>(g: u32, variant: LambdaVariant) -> Result<DivisorClass<T>> {
    match variant {
        LambdaVariant::Faithful => lambda_relation(g),
        LambdaVariant::Printed => {
            let mut x = lambda_relation::<T>(g)?;
            let quarter = frac::<T>(-3, 4);
            let d = 8 * g as i64 + 4;
            for i in delta_indices(g) {
                let full: T = frac(4 * i as i64 * (g - i) as i64, d);
                x.add_raw(&ClassLabel::delta_hg(i), full * quarter.clone())?;
            }
            Ok(x)
        }
    }
}

/// `λ` on `Hbar_{g,n}` in the labelled boundary basis.
pub fn lambda_pullback<T: Scalar>(g: u32, n: u32, variant: LambdaVariant) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    hyperelliptic_forgetful_pullback(&lambda_source(g, variant)?, n)
}

pub fn lambda_pullback_symmetric<T: Scalar>(
    g: u32,
    n: u32,
    variant: LambdaVariant,
) -> Result<SymmetricDivisorClass<T>> {
    require_genus(g)?;
    hyperelliptic_forgetful_pullback_symmetric(&lambda_source(g, variant)?, n)
}

fn ramification_labels(g: u32) -> impl Iterator<Item = ClassLabel> {
    (1..=g).map(|i| ClassLabel::delta(i, PointSet::empty()))
}

/// Ramification of the stack over the coarse space: `Σ δ_i` on `Hbar_g`,
/// `Σ_{i=1}^{g} δ_{i,∅}` on `Hbar_{g,n}` (n ≥ 2).
pub fn ramification_divisor<T: Scalar>(g: u32, n: Option<u32>) -> Result<DivisorClass<T>> {
    require_genus(g)?;
    match n {
        None => DivisorClass::from_raw_terms(
            Space::HbarG { g },
            delta_indices(g).map(|i| (ClassLabel::delta_hg(i), T::one())),
        ),
        Some(n) => {
            require_ramification_points(n)?;
            DivisorClass::from_raw_terms(Space::HbarGN { g, n }, ramification_labels(g).map(|l| (l, T::one())))
        }
    }
}

fn require_ramification_points(n: u32) -> Result<()> {
    match n {
        0 => Err(Error::Precondition("ramification on Hbar_{g,n} needs n ≥ 2; use n = None for Hbar_g".into())),
        1 => Err(Error::Unsupported(
            "n = 1: the Weierstraß-point locus is a quasireflection divisor and is not modelled".into(),
        )),
        _ => Ok(()),
    }
}

pub fn ramification_divisor_symmetric<T: Scalar>(g: u32, n: u32) -> Result<SymmetricDivisorClass<T>> {
    require_genus(g)?;
    require_ramification_points(n)?;
    let space = Space::HbarGN { g, n };
    let mut out = SymmetricDivisorClass::zero(space);
    for raw in ramification_labels(g) {
        if let Some(canonical) = canonicalize_label(&raw, space)? {
            let key = orbit_label(&canonical, space);
            debug_assert_eq!(orbit_size(&key, space)?, 1);
            out.add(key, T::one())?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::symmetrize;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn hg(label: ClassLabel, c: &DivisorClass<Q>) -> Q {
        c.coefficient(&label).unwrap()
    }

    #[test]
    fn lambda_relation_small_genus() {
        let l2 = lambda_relation::<Q>(2).unwrap();
        assert_eq!(l2.len(), 2);
        assert_eq!(hg(ClassLabel::Eps0, &l2), q(1, 10));
        assert_eq!(hg(ClassLabel::delta_hg(1), &l2), q(1, 5));

        let l3 = lambda_relation::<Q>(3).unwrap();
        assert_eq!(hg(ClassLabel::Eps0, &l3), q(3, 28));
        assert_eq!(hg(ClassLabel::eps_hg(1), &l3), q(2, 7));
        assert_eq!(hg(ClassLabel::delta_hg(1), &l3), q(2, 7));

        for g in 2..30 {
            let l = lambda_relation::<Q>(g).unwrap();
            assert_eq!(l.coefficient(&ClassLabel::Eps0).unwrap(), q(g as i64, 8 * g as i64 + 4));
        }
        assert!(lambda_relation::<Q>(1).is_err());
    }

    #[test]
    fn delta_irr_examples() {
        let d2 = delta_irr_decomposition::<Q>(2, None).unwrap();
        assert_eq!(d2, DivisorClass::single(Space::HbarG { g: 2 }, ClassLabel::Eps0, q(1, 1)).unwrap());

        let d4 = delta_irr_decomposition::<Q>(4, None).unwrap();
        assert_eq!(d4.coefficient(&ClassLabel::Eps0).unwrap(), q(1, 1));
        assert_eq!(d4.coefficient(&ClassLabel::eps_hg(1)).unwrap(), q(2, 1));
        assert_eq!(d4.len(), 2);

        // g = 3: ε index 1 is self-conjugate, so ε_{1,∅} and ε_{1,{1}} are one generator
        // and the two raw terms accumulate.
        let d31 = delta_irr_decomposition::<Q>(3, Some(1)).unwrap();
        assert_eq!(d31.len(), 2);
        assert_eq!(d31.coefficient(&ClassLabel::eps(1, PointSet::empty())).unwrap(), q(4, 1));
        assert_eq!(d31.coefficient(&ClassLabel::eps(1, PointSet::new([1]))).unwrap(), q(4, 1));
    }

    #[test]
    fn rational_quotient_examples() {
        let k2 = canonical_class_rational_quotient::<Q>(2).unwrap();
        assert_eq!(k2.coefficient(&ClassLabel::QuotDelta(2)).unwrap(), q(-7, 10));
        assert_eq!(k2.coefficient(&ClassLabel::QuotDelta(3)).unwrap(), q(-1, 5));
        let k3 = canonical_class_rational_quotient::<Q>(3).unwrap();
        assert_eq!(k3.coefficient(&ClassLabel::QuotDelta(4)).unwrap(), q(2, 7));
        for g in 2..30 {
            let k = canonical_class_rational_quotient::<Q>(g).unwrap();
            assert_eq!(k.coefficient(&ClassLabel::QuotDelta(2)).unwrap(), eps0_canonical_coefficient(g));
        }
    }

    #[test]
    fn phi_pullback_dictionary() {
        let x = DivisorClass::single(Space::M0Quot { points: 8 }, ClassLabel::QuotDelta(4), q(1, 1)).unwrap();
        let y = phi_pullback(&x).unwrap();
        assert_eq!(y, DivisorClass::single(Space::HbarG { g: 3 }, ClassLabel::eps_hg(1), q(1, 1)).unwrap());
        for g in 2..8 {
            let x = DivisorClass::single(Space::M0Quot { points: 2 * g + 2 }, ClassLabel::QuotDelta(3), q(1, 1)).unwrap();
            let y = phi_pullback(&x).unwrap();
            assert_eq!(y, DivisorClass::single(Space::HbarG { g }, ClassLabel::delta_hg(1), q(1, 2)).unwrap());
        }
        let wrong = DivisorClass::<Q>::zero(Space::HbarG { g: 2 });
        assert!(phi_pullback(&wrong).is_err());
    }

    #[test]
    fn canonical_class_hg_genus_two() {
        let coarse = canonical_class_hg::<Q>(2, SpaceVariant::Coarse).unwrap();
        assert_eq!(coarse.coefficient(&ClassLabel::Eps0).unwrap(), q(-7, 10));
        assert_eq!(coarse.coefficient(&ClassLabel::delta_hg(1)).unwrap(), q(-1, 10));
        let stack = canonical_class_hg::<Q>(2, SpaceVariant::Stack).unwrap();
        assert_eq!(stack.coefficient(&ClassLabel::delta_hg(1)).unwrap(), q(9, 10));
    }

    #[test]
    fn derivation_path_identity() {
        for g in 2..=30 {
            let coarse = canonical_class_hg::<Q>(g, SpaceVariant::Coarse).unwrap();
            let via_phi = phi_pullback(&canonical_class_rational_quotient::<Q>(g).unwrap()).unwrap();
            assert_eq!(coarse, via_phi, "g = {g}");
            let stack = canonical_class_hg::<Q>(g, SpaceVariant::Stack).unwrap();
            let r = ramification_divisor::<Q>(g, None).unwrap();
            assert_eq!(stack.checked_sub(&coarse).unwrap(), r, "g = {g}");
        }
    }

    #[test]
    fn hgn_examples() {
        let k = canonical_class_hgn::<Q>(2, 2, SpaceVariant::Coarse).unwrap();
        assert_eq!(k.coefficient(&ClassLabel::delta(1, PointSet::empty())).unwrap(), q(4, 5));
        for g in 2..=5 {
            for n in 2..=5 {
                let k = canonical_class_hgn::<Q>(g, n, SpaceVariant::Coarse).unwrap();
                assert_eq!(k.coefficient(&ClassLabel::delta(0, PointSet::full(n))).unwrap(), q(-3, 1));
                for v in [SpaceVariant::Coarse, SpaceVariant::Stack] {
                    let k = canonical_class_hgn::<Q>(g, n, v).unwrap();
                    for p in 1..=n {
                        assert_eq!(k.coefficient(&ClassLabel::Psi(p)).unwrap(), q(1, 1));
                    }
                }
            }
        }
        assert!(matches!(
            canonical_class_hgn::<Q>(2, 1, SpaceVariant::Coarse),
            Err(Error::Precondition(msg)) if msg.contains("n ≥ 2")
        ));
    }

    #[test]
    fn ramification_examples() {
        let r = ramification_divisor::<Q>(5, None).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.coefficient(&ClassLabel::delta_hg(2)).unwrap(), q(1, 1));

        // g = 2: δ_{1,∅} is self-conjugate, so only i = 1 lands on it; i = 2 is δ_{0,full}.
        let r = ramification_divisor::<Q>(2, Some(3)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.coefficient(&ClassLabel::delta(1, PointSet::empty())).unwrap(), q(1, 1));
        assert_eq!(r.coefficient(&ClassLabel::delta(0, PointSet::full(3))).unwrap(), q(1, 1));

        let r = ramification_divisor::<Q>(3, Some(2)).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.coefficient(&ClassLabel::delta(1, PointSet::empty())).unwrap(), q(1, 1));
        assert_eq!(r.coefficient(&ClassLabel::delta(1, PointSet::full(2))).unwrap(), q(1, 1));
        assert_eq!(r.coefficient(&ClassLabel::delta(0, PointSet::full(2))).unwrap(), q(1, 1));

        assert!(matches!(ramification_divisor::<Q>(3, Some(1)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn stack_identity_against_pullback() {
        for g in 2..=8 {
            let stack_hg = canonical_class_hg::<Q>(g, SpaceVariant::Stack).unwrap();
            for n in 1..=8 {
                let lhs = canonical_class_hgn::<Q>(g, n, SpaceVariant::Stack).unwrap();
                let mut rhs = hyperelliptic_forgetful_pullback(&stack_hg, n).unwrap();
                for p in 1..=n {
                    rhs.add_raw(&ClassLabel::Psi(p), q(1, 1)).unwrap();
                }
                for s in PointSet::all_subsets(n).filter(|s| s.len() >= 2) {
                    rhs.add_raw(&ClassLabel::delta(0, s), q(-2, 1)).unwrap();
                }
                assert_eq!(lhs, rhs, "g = {g}, n = {n}");
            }
        }
    }

    #[test]
    fn symmetric_constructors_match_labelled() {
        for g in 2..=6 {
            for n in 2..=7 {
                for v in [SpaceVariant::Stack, SpaceVariant::Coarse] {
                    let labelled = canonical_class_hgn::<Q>(g, n, v).unwrap();
                    let sym = canonical_class_hgn_symmetric::<Q>(g, n, v).unwrap();
                    assert_eq!(symmetrize(&labelled).unwrap(), sym, "K g={g} n={n} {v:?}");
                    assert_eq!(sym.expand().unwrap(), labelled);
                }
                for lv in [LambdaVariant::Faithful, LambdaVariant::Printed] {
                    let labelled = lambda_pullback::<Q>(g, n, lv).unwrap();
                    let sym = lambda_pullback_symmetric::<Q>(g, n, lv).unwrap();
                    assert_eq!(symmetrize(&labelled).unwrap(), sym, "lambda g={g} n={n}");
                }
                let r = ramification_divisor::<Q>(g, Some(n)).unwrap();
                assert_eq!(symmetrize(&r).unwrap(), ramification_divisor_symmetric(g, n).unwrap());
                let d = delta_irr_decomposition::<Q>(g, Some(n)).unwrap();
                assert_eq!(symmetrize(&d).unwrap(), delta_irr_decomposition_symmetric(g, n).unwrap());
            }
        }
    }

    #[test]
    fn printed_variant_quarters_delta_terms() {
        for g in 2..=7 {
            let d = 8 * g as i64 + 4;
            let p = lambda_pullback::<Q>(g, 3, LambdaVariant::Printed).unwrap();
            let f = lambda_pullback::<Q>(g, 3, LambdaVariant::Faithful).unwrap();
            for (label, c) in f.iter() {
                let cp = p.coefficient(label).unwrap();
                match label {
                    ClassLabel::Delta { .. } => assert_eq!(cp, c.clone() / q(4, 1)),
                    _ => assert_eq!(&cp, c),
                }
            }
            assert_eq!(p.coefficient(&ClassLabel::Eps0).unwrap(), q(g as i64, d));
        }
    }

    #[test]
    fn zero_pulls_back_to_zero() {
        let z = DivisorClass::<Q>::zero(Space::HbarG { g: 4 });
        assert!(hyperelliptic_forgetful_pullback(&z, 3).unwrap().is_zero());
    }

    #[test]
    fn coarse_sign_pattern() {
        for g in 2..=12 {
            for n in 2..=8 {
                let k = canonical_class_hgn_symmetric::<Q>(g, n, SpaceVariant::Coarse).unwrap();
                for (label, c) in k.iter() {
                    match label {
                        SymLabel::Psi => assert_eq!(c, &q(1, 1)),
                        SymLabel::Eps0 => assert!(c < &q(0, 1)),
                        SymLabel::Eps { .. } => assert!(c > &q(0, 1), "{label} g={g} n={n}"),
                        SymLabel::Delta { genus: 0, .. } => assert!(c == &q(-2, 1) || c == &q(-3, 1)),
                        SymLabel::Delta { .. } => assert!(c > &q(0, 1), "{label} g={g} n={n}"),
                        other => panic!("unexpected {other}"),
                    }
                }
            }
        }
    }
}

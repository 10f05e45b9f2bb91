//! Forgetful pullbacks on `Mbar_{g,n}`, the Weierstraß-type class `W_g`,
//! its symmetrized average `W`, and restriction to the hyperelliptic locus.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{
    delta_irr_decomposition, delta_irr_decomposition_symmetric, lambda_pullback, lambda_pullback_symmetric,
    require_genus, LambdaVariant,
};
use crate::picard::{symmetrize, ClassLabel, DivisorClass, PointSet, Space, SymLabel, SymmetricDivisorClass};
use crate::scalar::{binomial, BinomialTable, Scalar};

/// Default bound on `n` for the brute-force oracle.
pub const ORACLE_MAX_POINTS: u32 = 14;

/// Which rational-tail terms of `W_g` on `Mbar_{g,g}` are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoganTerms {
    /// Only `-3 δ_{0,S}` for `|S| = 2` and `-(g(g+1)/2) δ_{0,[g]}`; at `g = 2` these
    /// name the same class and are stored once.
    Printed,
    /// `-C(j+1, 2) δ_{0,S}` for every `2 <= |S| = j <= g`. Agrees with
    /// [`LoganTerms::Printed`] at `j = 2` and `j = g`.
    #[default]
    RationalTails,
}

impl std::fmt::Display for LoganTerms {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LoganTerms::Printed => "printed",
            LoganTerms::RationalTails => "rational-tails",
        })
    }
}

impl std::str::FromStr for LoganTerms {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(LoganTerms::Printed),
            "rational-tails" => Ok(LoganTerms::RationalTails),
            _ => Err(Error::Parse(format!("unknown Logan term set `{s}`"))),
        }
    }
}

impl LoganTerms {
    /// `(j, c_j)`: `W_g` carries `-c_j` on each `δ_{0,S}` with `|S| = j`.
    pub fn tail_coefficients<T: Scalar>(self, g: u32) -> Vec<(u32, T)> {
        let top = T::from_int((g * (g + 1) / 2) as i64);
        match self {
            LoganTerms::Printed if g == 2 => vec![(2, T::from_int(3))],
            LoganTerms::Printed => vec![(2, T::from_int(3)), (g, top)],
            LoganTerms::RationalTails => (2..=g).map(|j| (j, binomial(j as u64 + 1, 2))).collect(),
        }
    }
}

/// Known part of `W_g` on `Mbar_{g,g}`. The remaining terms are an effective
/// combination of other boundary divisors and are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoganClass<T> {
    pub base: DivisorClass<T>,
    pub omitted_remainder: bool,
    pub terms: LoganTerms,
}

/// Symmetrized average of the pullbacks of `W_g` to `Mbar_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WClass<T> {
    pub class: SymmetricDivisorClass<T>,
    pub omitted_remainder: bool,
    pub terms: LoganTerms,
}

impl<T: Scalar> WClass<T> {
    pub fn g(&self) -> u32 {
        self.class.space().genus().unwrap_or(0)
    }

    pub fn n(&self) -> u32 {
        self.class.space().marked_points()
    }

    /// `b_{0,s}`: `W` carries `-b_{0,s}` on `δ_{0,s}`.
    pub fn b(&self, s: u32) -> T {
        -self.class.coefficient(&SymLabel::Delta { genus: 0, size: s })
    }

    /// First `s` in `3..n` with `b_{0,s} < b_{0,2}`, if any.
    pub fn monotonicity_violation(&self) -> Option<u32> {
        let b2 = self.b(2);
        (3..self.n()).find(|&s| self.b(s) < b2)
    }
}

fn mbar_parts(x: &DivisorClass<impl Scalar>) -> Result<(u32, u32)> {
    match x.space() {
        Space::MbarGN { g, n } => Ok((g, n)),
        other => Err(Error::Precondition(format!("expected a class on Mbar_{{g,n}}, got {other}"))),
    }
}

/// Pullback along `Mbar_{g,n} -> Mbar_{g,m}` forgetting the points outside
/// `retained`. Source point `k` is identified with the `k`-th smallest
/// element of `retained`.
pub fn forgetful_pullback<T: Scalar>(x: &DivisorClass<T>, retained: &PointSet, n: u32) -> Result<DivisorClass<T>> {
    let (g, m) = mbar_parts(x)?;
    if retained.len() != m as usize {
        return Err(Error::Precondition(format!(
            "retained set {retained} has {} points, source space has {m}",
            retained.len()
        )));
    }
    retained.check_range(n)?;
    let sigma = retained.as_slice();
    let forgotten = retained.complement(n);
    let image = |u: &PointSet| PointSet::new(u.iter().map(|k| sigma[k as usize - 1]));

    let mut out = DivisorClass::zero(Space::MbarGN { g, n });
    for (label, coeff) in x.iter() {
        match label {
            ClassLabel::Lambda | ClassLabel::DeltaIrr => out.add_raw(label, coeff.clone())?,
            ClassLabel::Psi(k) => {
                let p = sigma[*k as usize - 1];
                out.add_raw(&ClassLabel::Psi(p), coeff.clone())?;
                let neg = -coeff.clone();
                for t in forgotten.subsets().filter(|t| !t.is_empty()) {
                    out.add_raw(&ClassLabel::delta(0, t.union(&PointSet::new([p]))), neg.clone())?;
                }
            }
            ClassLabel::Delta { genus, points } => {
                let base = image(points);
                for t in forgotten.subsets() {
                    out.add_raw(&ClassLabel::delta(*genus, base.union(&t)), coeff.clone())?;
                }
            }
            other => return Err(Error::LabelNotInSpace { label: other.to_string(), space: x.space() }),
        }
    }
    Ok(out)
}

/// `W_g` with the printed term set.
pub fn logan_class<T: Scalar>(g: u32) -> Result<LoganClass<T>> {
    logan_class_with(g, LoganTerms::Printed)
}

pub fn logan_class_with<T: Scalar>(g: u32, terms: LoganTerms) -> Result<LoganClass<T>> {
    require_genus(g)?;
    let space = Space::MbarGN { g, n: g };
    let mut base = DivisorClass::single(space, ClassLabel::Lambda, -T::one())?;
    for k in 1..=g {
        base.add_raw(&ClassLabel::Psi(k), T::one())?;
    }
    for (j, c) in terms.tail_coefficients::<T>(g) {
        for s in PointSet::subsets_of_size(g, j as usize) {
            base.add_raw(&ClassLabel::delta(0, s), -c.clone())?;
        }
    }
    Ok(LoganClass { base, omitted_remainder: true, terms })
}

fn require_w_range(g: u32, n: u32) -> Result<()> {
    require_genus(g)?;
    if n <= g {
        return Err(Error::Precondition(format!("W needs n > g, got g = {g}, n = {n}")));
    }
    Ok(())
}

/// `b_{0,s}` for `s = 0..=n` (entries below 2 are unused and zero).
///
/// `b_{0,s} = [s·C(n-s, g-1) + Σ_j c_j·C(s, j)·C(n-s, g-j)] / C(n-1, g-1)`.
pub fn w_tail_coefficients<T: Scalar>(g: u32, n: u32, terms: LoganTerms) -> Result<Vec<T>> {
    require_w_range(g, n)?;
    // Everything but the final division is an integer, so accumulate in BigInt.
    let table = BinomialTable::<BigInt>::new(n as usize, g as usize);
    let c = |a: u32, b: i64| table.get(a as i64, b);
    let norm = c(n - 1, g as i64 - 1);
    let tails: Vec<(u32, BigInt)> = terms
        .tail_coefficients::<BigRational>(g)
        .into_iter()
        .map(|(j, cj)| (j, cj.to_integer()))
        .collect();
    let mut out = vec![T::zero(); n as usize + 1];
    for s in 2..=n {
        let mut acc = BigInt::from(s) * c(n - s, g as i64 - 1);
        for (j, cj) in &tails {
            acc += cj * c(s, *j as i64) * c(n - s, g as i64 - *j as i64);
        }
        let b = BigRational::new(acc, norm.clone());
        out[s as usize] =
            T::from_big(&b).ok_or_else(|| Error::Unsupported(format!("b_0,{s} = {b} overflows the scalar type")))?;
    }
    Ok(out)
}

/// `W = -(n/g)λ + ψ - Σ_s b_{0,s} δ_{0,s}` on `Mbar_{g,n}` in closed form.
pub fn symmetrized_w_closed_form<T: Scalar>(g: u32, n: u32, terms: LoganTerms) -> Result<WClass<T>> {
    let b = w_tail_coefficients::<T>(g, n, terms)?;
    let mut class = SymmetricDivisorClass::zero(Space::MbarGN { g, n });
    class.add(SymLabel::Lambda, -T::from_frac(n as i64, g as i64))?;
    class.add(SymLabel::Psi, T::one())?;
    for s in 2..=n {
        class.add(SymLabel::Delta { genus: 0, size: s }, -b[s as usize].clone())?;
    }
    Ok(WClass { class, omitted_remainder: true, terms })
}

/// Labelled average `C(n-1, g-1)^{-1} Σ_{|S|=g} π_S^* W_g` on `Mbar_{g,n}`.
pub fn w_oracle_labelled<T: Scalar>(g: u32, n: u32, terms: LoganTerms, max_points: u32) -> Result<DivisorClass<T>> {
    require_w_range(g, n)?;
    if n > max_points {
        return Err(Error::EnumerationBound(format!(
            "oracle sums C({n},{g}) pullbacks; n <= {max_points} required"
        )));
    }
    let logan = logan_class_with::<T>(g, terms)?;
    let space = Space::MbarGN { g, n };
    let subsets: Vec<PointSet> = PointSet::subsets_of_size(n, g as usize).collect();
    let total = subsets
        .par_iter()
        .map(|s| forgetful_pullback(&logan.base, s, n))
        .try_reduce(|| DivisorClass::zero(space), |a, b| a.checked_add(&b))?;
    let norm: T = binomial((n - 1) as u64, (g - 1) as u64);
    Ok(total.scale(&(T::one() / norm)))
}

/// Brute-force check of [`symmetrized_w_closed_form`].
pub fn enumerate_w_oracle<T: Scalar>(g: u32, n: u32, terms: LoganTerms, max_points: u32) -> Result<WClass<T>> {
    let labelled = w_oracle_labelled::<T>(g, n, terms, max_points)?;
    Ok(WClass { class: symmetrize(&labelled)?, omitted_remainder: true, terms })
}

fn restricted_space(x_space: Space) -> Result<(u32, u32)> {
    match x_space {
        Space::MbarGN { g, n } => Ok((g, n)),
        other => Err(Error::Precondition(format!("restriction starts on Mbar_{{g,n}}, got {other}"))),
    }
}

/// Restriction along `Hbar_{g,n} -> Mbar_{g,n}`.
pub fn restrict_to_hyperelliptic<T: Scalar>(x: &DivisorClass<T>, variant: LambdaVariant) -> Result<DivisorClass<T>> {
    let (g, n) = restricted_space(x.space())?;
    let mut out = DivisorClass::zero(Space::HbarGN { g, n });
    for (label, coeff) in x.iter() {
        match label {
            ClassLabel::Lambda => out.add_assign_scaled(&lambda_pullback(g, n, variant)?, coeff)?,
            ClassLabel::DeltaIrr => out.add_assign_scaled(&delta_irr_decomposition(g, Some(n))?, coeff)?,
            ClassLabel::Psi(_) | ClassLabel::Delta { .. } => out.add_raw(label, coeff.clone())?,
            other => return Err(Error::LabelNotInSpace { label: other.to_string(), space: x.space() }),
        }
    }
    Ok(out)
}

pub fn restrict_to_hyperelliptic_symmetric<T: Scalar>(
    x: &SymmetricDivisorClass<T>,
    variant: LambdaVariant,
) -> Result<SymmetricDivisorClass<T>> {
    let (g, n) = restricted_space(x.space())?;
    let mut out = SymmetricDivisorClass::zero(Space::HbarGN { g, n });
    for (label, coeff) in x.iter() {
        match label {
            SymLabel::Lambda => {
                let l = lambda_pullback_symmetric(g, n, variant)?;
                out.add_assign_scaled(&l, coeff)?;
            }
            SymLabel::DeltaIrr => {
                let d = delta_irr_decomposition_symmetric(g, n)?;
                out.add_assign_scaled(&d, coeff)?;
            }
            SymLabel::Psi | SymLabel::Delta { .. } => out.add(label.clone(), coeff.clone())?,
            other => return Err(Error::LabelNotInSpace { label: other.to_string(), space: x.space() }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn set(p: &[u32]) -> PointSet {
        PointSet::new(p.iter().copied())
    }

    #[test]
    fn psi_pullback_adds_rational_tail() {
        let x = DivisorClass::single(Space::MbarGN { g: 3, n: 1 }, ClassLabel::Psi(1), q(1, 1)).unwrap();
        let y = forgetful_pullback(&x, &set(&[1]), 2).unwrap();
        let expected = DivisorClass::from_raw_terms(
            Space::MbarGN { g: 3, n: 2 },
            [(ClassLabel::Psi(1), q(1, 1)), (ClassLabel::delta(0, set(&[1, 2])), q(-1, 1))],
        )
        .unwrap();
        assert_eq!(y, expected);
    }

    #[test]
    fn delta_pullback_sums_over_forgotten() {
        let x = DivisorClass::single(Space::MbarGN { g: 2, n: 2 }, ClassLabel::delta(0, set(&[1, 2])), q(1, 1)).unwrap();
        let y = forgetful_pullback(&x, &set(&[1, 2]), 3).unwrap();
        let expected = DivisorClass::from_raw_terms(
            Space::MbarGN { g: 2, n: 3 },
            [(ClassLabel::delta(0, set(&[1, 2])), q(1, 1)), (ClassLabel::delta(0, set(&[1, 2, 3])), q(1, 1))],
        )
        .unwrap();
        assert_eq!(y, expected);
    }

    #[test]
    fn nothing_forgotten_is_identity() {
        let x = logan_class::<Q>(3).unwrap().base;
        assert_eq!(forgetful_pullback(&x, &PointSet::full(3), 3).unwrap(), x);
    }

    #[test]
    fn logan_known_terms() {
        let w3 = logan_class::<Q>(3).unwrap();
        assert!(w3.omitted_remainder);
        let b = &w3.base;
        assert_eq!(b.coefficient(&ClassLabel::Lambda).unwrap(), q(-1, 1));
        for k in 1..=3 {
            assert_eq!(b.coefficient(&ClassLabel::Psi(k)).unwrap(), q(1, 1));
        }
        for s in PointSet::subsets_of_size(3, 2) {
            assert_eq!(b.coefficient(&ClassLabel::delta(0, s)).unwrap(), q(-3, 1));
        }
        assert_eq!(b.coefficient(&ClassLabel::delta(0, PointSet::full(3))).unwrap(), q(-6, 1));
        assert_eq!(b.len(), 1 + 3 + 3 + 1);

        let w2 = logan_class::<Q>(2).unwrap();
        assert_eq!(w2.base.coefficient(&ClassLabel::delta(0, set(&[1, 2]))).unwrap(), q(-3, 1));
        for g in 2..7 {
            for t in [LoganTerms::Printed, LoganTerms::RationalTails] {
                let w = logan_class_with::<Q>(g, t).unwrap();
                assert!(w.base.coefficient(&ClassLabel::DeltaIrr).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rational_tails_agree_with_printed_at_ends() {
        for g in 2..12u32 {
            let printed: Vec<(u32, Q)> = LoganTerms::Printed.tail_coefficients(g);
            let tails: Vec<(u32, Q)> = LoganTerms::RationalTails.tail_coefficients(g);
            for (j, c) in printed {
                assert!(tails.contains(&(j, c)), "g={g} j={j}");
            }
        }
    }

    #[test]
    fn closed_form_anchors() {
        let w = symmetrized_w_closed_form::<Q>(2, 10, LoganTerms::Printed).unwrap();
        assert_eq!(w.b(2), q(19, 9));
        assert_eq!(w.class.coefficient(&SymLabel::Lambda), q(-5, 1));
        assert_eq!(w.class.coefficient(&SymLabel::Psi), q(1, 1));
        let w = symmetrized_w_closed_form::<Q>(3, 20, LoganTerms::Printed).unwrap();
        assert_eq!(w.b(20), q(40, 1));
        for t in [LoganTerms::Printed, LoganTerms::RationalTails] {
            for g in 2..10 {
                for n in g + 1..g + 30 {
                    let w = symmetrized_w_closed_form::<Q>(g, n, t).unwrap();
                    assert_eq!(w.b(2), q(2, 1) + q(g as i64 - 1, n as i64 - 1));
                    assert_eq!(w.b(n), q((n * (g + 1)) as i64, 2));
                }
            }
        }
        assert!(symmetrized_w_closed_form::<Q>(3, 3, LoganTerms::Printed).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        for t in [LoganTerms::Printed, LoganTerms::RationalTails] {
            let oracle = enumerate_w_oracle::<Q>(2, 5, t, ORACLE_MAX_POINTS).unwrap();
            let closed = symmetrized_w_closed_form::<Q>(2, 5, t).unwrap();
            assert_eq!(oracle, closed);
        }
        // Three pullbacks, each point retained by two of them.
        let raw = {
            let logan = logan_class::<Q>(2).unwrap();
            let mut acc = DivisorClass::zero(Space::MbarGN { g: 2, n: 3 });
            for s in PointSet::subsets_of_size(3, 2) {
                acc = acc.checked_add(&forgetful_pullback(&logan.base, &s, 3).unwrap()).unwrap();
            }
            acc
        };
        for k in 1..=3 {
            assert_eq!(raw.coefficient(&ClassLabel::Psi(k)).unwrap(), q(2, 1));
        }
        let w = enumerate_w_oracle::<Q>(2, 3, LoganTerms::Printed, ORACLE_MAX_POINTS).unwrap();
        assert_eq!(w.class.coefficient(&SymLabel::Psi), q(1, 1));
        assert!(matches!(
            enumerate_w_oracle::<Q>(2, 40, LoganTerms::Printed, ORACLE_MAX_POINTS),
            Err(Error::EnumerationBound(_))
        ));
    }

    #[test]
    fn oracle_delta02_unnormalized() {
        for (g, n) in [(2u32, 6u32), (3, 7), (4, 8)] {
            let w = enumerate_w_oracle::<Q>(g, n, LoganTerms::Printed, ORACLE_MAX_POINTS).unwrap();
            let c = |a: u32, b: u32| binomial::<Q>(a as u64, b as u64);
            let expected = -(q(2, 1) * c(n - 2, g - 1) + q(3, 1) * c(n - 2, g - 2)) / c(n - 1, g - 1);
            assert_eq!(w.class.coefficient(&SymLabel::Delta { genus: 0, size: 2 }), expected);
        }
    }

    #[test]
    fn oracle_conjugate_labels_agree() {
        for (g, n) in [(2u32, 4u32), (3, 5), (4, 6)] {
            let w = w_oracle_labelled::<Q>(g, n, LoganTerms::RationalTails, ORACLE_MAX_POINTS).unwrap();
            for i in 0..=g {
                for s in PointSet::all_subsets(n) {
                    let a = w.coefficient(&ClassLabel::delta(i, s.clone())).unwrap();
                    let b = w.coefficient(&ClassLabel::delta(g - i, s.complement(n))).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        for g in 2..6 {
            let space = Space::MbarGN { g, n: 3 };
            let lam = DivisorClass::single(space, ClassLabel::Lambda, q(1, 1)).unwrap();
            let r = restrict_to_hyperelliptic(&lam, LambdaVariant::Faithful).unwrap();
            assert_eq!(r.coefficient(&ClassLabel::Eps0).unwrap(), q(g as i64, 8 * g as i64 + 4));
            let psi = DivisorClass::single(space, ClassLabel::Psi(3), q(1, 1)).unwrap();
            let r = restrict_to_hyperelliptic(&psi, LambdaVariant::Faithful).unwrap();
            assert_eq!(r, DivisorClass::single(Space::HbarGN { g, n: 3 }, ClassLabel::Psi(3), q(1, 1)).unwrap());
        }
        let irr = DivisorClass::single(Space::MbarGN { g: 2, n: 2 }, ClassLabel::DeltaIrr, q(1, 1)).unwrap();
        let r = restrict_to_hyperelliptic(&irr, LambdaVariant::Printed).unwrap();
        assert_eq!(r, DivisorClass::single(Space::HbarGN { g: 2, n: 2 }, ClassLabel::Eps0, q(1, 1)).unwrap());
    }

    #[test]
    fn symmetric_restriction_matches_labelled() {
        for g in 2..=4 {
            for n in g + 1..=7 {
                for v in [LambdaVariant::Faithful, LambdaVariant::Printed] {
                    let w = symmetrized_w_closed_form::<Q>(g, n, LoganTerms::RationalTails).unwrap();
                    let mut x = w.class.clone();
                    x.add(SymLabel::DeltaIrr, q(5, 7)).unwrap();
                    let labelled = restrict_to_hyperelliptic(&x.expand().unwrap(), v).unwrap();
                    let sym = restrict_to_hyperelliptic_symmetric(&x, v).unwrap();
                    assert_eq!(symmetrize(&labelled).unwrap(), sym);
                }
            }
        }
    }
}

//! Ages of cyclic tangent-space actions and the Reid–Tai seniority test.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A diagonalized action of `Z/m`: eigenvalues `ζ^{a_1}, ..., ζ^{a_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AutomorphismAction {
    order: u64,
    exponents: Vec<u64>,
}

impl AutomorphismAction {
    /// Exponents are reduced mod `order`.
    pub fn new(order: u64, exponents: impl IntoIterator<Item = u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("action order must be at least 1".into()));
        }
        Ok(Self { order, exponents: exponents.into_iter().map(|a| a % order).collect() })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Same group, generator `α^k`: exponents `k·a_i mod m`.
    pub fn power(&self, k: u64) -> Self {
        Self {
            order: self.order,
            exponents: self.exponents.iter().map(|a| (k % self.order) * a % self.order).collect(),
        }
    }

    fn nonzero(&self) -> usize {
        self.exponents.iter().filter(|&&a| a != 0).count()
    }
}

/// Residues `k` in `1..m` prime to `m` (just `1` when `m = 1`).
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![1];
    }
    (1..m).filter(|k| k.gcd(&m) == 1).collect()
}

/// `Σ (k·a_i mod m) / m`.
pub fn age<T: Scalar>(action: &AutomorphismAction, k: u64) -> Result<T> {
    let m = action.order;
    if k.gcd(&m) != 1 {
        return Err(Error::NotAUnit(k, m));
    }
    let total: u64 = action.power(k).exponents.iter().sum();
    Ok(T::from_frac(total as i64, m as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Identity,
    Quasireflection,
    Junior,
    Senior,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionClassification<T> {
    pub verdict: Verdict,
    pub minimal_age: T,
    /// `(k, age)` for every unit `k`, increasing in `k`.
    pub ages: Vec<(u64, T)>,
}

pub fn seniority<T: Scalar>(action: &AutomorphismAction) -> ActionClassification<T> {
    let ages: Vec<(u64, T)> = units(action.order)
        .into_iter()
        .map(|k| (k, age(action, k).expect("units are units")))
        .collect();
    let minimal_age = ages.iter().map(|(_, a)| a.clone()).min().unwrap_or_else(T::zero);
    let verdict = match action.nonzero() {
        0 => Verdict::Identity,
        1 => Verdict::Quasireflection,
        _ if minimal_age >= T::one() => Verdict::Senior,
        _ => Verdict::Junior,
    };
    ActionClassification { verdict, minimal_age, ages }
}

/// Sign of the lift `y ↦ ±y`. The invariant quadratic differentials contain
/// `y` only squared, so both lifts have the same tangent action.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum YSign {
    #[default]
    Plus,
    Minus,
}

/// Tangent action of `x ↦ ζx` on `Hbar_g` at a smooth curve: exponents `2, ..., 2g` mod `m`.
/// `m = 1` stands for the hyperelliptic involution.
pub fn tangent_action(g: u32, m: u64, _sign: YSign) -> Result<AutomorphismAction> {
    if g < 2 {
        return Err(Error::Precondition(format!("genus must be at least 2, got {g}")));
    }
    let max = 2 * g as u64 + 2;
    if m == 0 || m > max {
        return Err(Error::Precondition(format!("order m must lie in 1..={max}, got {m}")));
    }
    AutomorphismAction::new(m, 2..=2 * g as u64)
}

pub fn classify_smooth_hyperelliptic_action<T: Scalar>(g: u32, m: u64) -> Result<ActionClassification<T>> {
    Ok(seniority(&tangent_action(g, m, YSign::Plus)?))
}

/// Reid–Tai: the quotient has canonical singularities iff every nontrivial
/// element is senior. Identity entries are skipped.
pub fn canonical_singularity_verdict(actions: &[AutomorphismAction]) -> Result<bool> {
    let mut all_senior = true;
    for action in actions {
        match seniority::<crate::Rational>(action).verdict {
            Verdict::Identity => {}
            Verdict::Quasireflection => {
                return Err(Error::QuasireflectionPresent(format!(
                    "order {} exponents {:?}; reduce by the quasireflection subgroup first",
                    action.order, action.exponents
                )))
            }
            Verdict::Junior => all_senior = false,
            Verdict::Senior => {}
        }
    }
    Ok(all_senior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_frac(n, d)
    }

    fn act(m: u64, e: &[u64]) -> AutomorphismAction {
        AutomorphismAction::new(m, e.iter().copied()).unwrap()
    }

    #[test]
    fn age_examples() {
        assert_eq!(age::<Q>(&act(2, &[0, 1, 0]), 1).unwrap(), q(1, 2));
        assert_eq!(age::<Q>(&act(1, &[0, 0, 0]), 1).unwrap(), q(0, 1));
        assert_eq!(age::<Q>(&act(4, &[1, 3]), 3).unwrap(), q(1, 1));
        assert_eq!(age::<Q>(&act(4, &[1, 3]), 2), Err(Error::NotAUnit(2, 4)));
    }

    #[test]
    fn seniority_examples() {
        let c = seniority::<Q>(&act(5, &[2, 3, 4]));
        assert_eq!(c.verdict, Verdict::Senior);
        assert_eq!(c.minimal_age, q(6, 5));
        let ages: Vec<Q> = c.ages.iter().map(|(_, a)| a.clone()).collect();
        assert_eq!(ages, vec![q(9, 5), q(8, 5), q(7, 5), q(6, 5)]);

        let c = seniority::<Q>(&act(2, &[0, 0, 0, 1]));
        assert_eq!((c.verdict, c.minimal_age), (Verdict::Quasireflection, q(1, 2)));
        let c = seniority::<Q>(&act(3, &[0, 0]));
        assert_eq!((c.verdict, c.minimal_age), (Verdict::Identity, q(0, 1)));
        let c = seniority::<Q>(&act(1, &[]));
        assert_eq!(c.verdict, Verdict::Identity);
    }

    #[test]
    fn hyperelliptic_examples() {
        assert_eq!(classify_smooth_hyperelliptic_action::<Q>(2, 2).unwrap().verdict, Verdict::Quasireflection);
        let c = classify_smooth_hyperelliptic_action::<Q>(5, 2).unwrap();
        assert_eq!((c.verdict, c.minimal_age), (Verdict::Senior, q(2, 1)));
        assert_eq!(classify_smooth_hyperelliptic_action::<Q>(2, 5).unwrap().verdict, Verdict::Senior);
        assert_eq!(classify_smooth_hyperelliptic_action::<Q>(3, 1).unwrap().verdict, Verdict::Identity);
        assert!(classify_smooth_hyperelliptic_action::<Q>(2, 7).is_err());
        assert!(classify_smooth_hyperelliptic_action::<Q>(2, 0).is_err());
        for g in 3..=10 {
            let c = classify_smooth_hyperelliptic_action::<Q>(g, 2).unwrap();
            assert_eq!(c.minimal_age, q(g as i64 - 1, 2));
        }
    }

    #[test]
    fn y_sign_does_not_change_action() {
        for g in 2..6 {
            for m in 1..=2 * g as u64 + 2 {
                assert_eq!(tangent_action(g, m, YSign::Plus).unwrap(), tangent_action(g, m, YSign::Minus).unwrap());
            }
        }
    }

    #[test]
    fn genus_two_order_four_is_junior_for_the_inverse_root() {
        // With respect to ζ itself the age is 5/4, but ζ^3 gives 3/4.
        let c = classify_smooth_hyperelliptic_action::<Q>(2, 4).unwrap();
        assert_eq!(c.ages, vec![(1, q(5, 4)), (3, q(3, 4))]);
        assert_eq!(c.verdict, Verdict::Junior);
    }

    #[test]
    fn singularity_verdicts() {
        assert_eq!(canonical_singularity_verdict(&[]), Ok(true));
        assert_eq!(canonical_singularity_verdict(&[act(5, &[2, 3, 4])]), Ok(true));
        assert_eq!(canonical_singularity_verdict(&[act(5, &[2, 3, 4]), act(1, &[0])]), Ok(true));
        assert_eq!(canonical_singularity_verdict(&[act(4, &[2, 3, 0])]), Ok(false));
        assert!(matches!(
            canonical_singularity_verdict(&[act(2, &[0, 1, 0])]),
            Err(Error::QuasireflectionPresent(_))
        ));
    }

    fn action_strategy() -> impl Strategy<Value = AutomorphismAction> {
        (1u64..=12).prop_flat_map(|m| {
            proptest::collection::vec(0..m, 0..=6).prop_map(move |e| AutomorphismAction::new(m, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn age_substitution_consistency(a in action_strategy()) {
            for k in units(a.order()) {
                prop_assert_eq!(age::<Q>(&a, k).unwrap(), age::<Q>(&a.power(k), 1).unwrap());
            }
        }

        #[test]
        fn seniority_depends_only_on_group(a in action_strategy(), seed in any::<u64>()) {
            let base = seniority::<Q>(&a);
            let us = units(a.order());
            let k = us[(seed % us.len() as u64) as usize];
            let gen = seniority::<Q>(&a.power(k));
            prop_assert_eq!(gen.verdict, base.verdict);
            prop_assert_eq!(&gen.minimal_age, &base.minimal_age);
            let mut shuffled = a.exponents().to_vec();
            shuffled.reverse();
            let perm = seniority::<Q>(&AutomorphismAction::new(a.order(), shuffled).unwrap());
            prop_assert_eq!(perm.verdict, base.verdict);
            prop_assert_eq!(perm.minimal_age, base.minimal_age);
        }
    }
}

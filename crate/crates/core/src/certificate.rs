//! JSON form of [`KodairaCertificate`] and an independent re-checker.
//!
//! Fractions are written as `{"num": .., "den": ..}` with integer JSON
//! numbers of unbounded size, always in lowest terms with `den > 0`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formulas::LambdaVariant;
use crate::picard::SymLabel;
use crate::pullback::LoganTerms;
use crate::scalar::Scalar;
use crate::verifier::{build_e_with, AffineCoefficient, FeasibleSet, KodairaCertificate, Verdict, VerifyOptions, ASSUMPTIONS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction(pub BigRational);

impl Fraction {
    pub fn from_scalar<T: Scalar>(x: &T) -> Self {
        Fraction(x.to_big())
    }
}

#[derive(Serialize, Deserialize)]
struct RawFraction {
    num: serde_json::Number,
    den: serde_json::Number,
}

fn number(x: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawFraction { num: number(self.0.numer()), den: number(self.0.denom()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawFraction::deserialize(d)?;
        let parse = |n: &serde_json::Number| {
            BigInt::from_str(&n.to_string()).map_err(|_| D::Error::custom(format!("`{n}` is not an integer")))
        };
        let (num, den) = (parse(&raw.num)?, parse(&raw.den)?);
        if !den.is_positive() {
            return Err(D::Error::custom("denominator must be positive"));
        }
        let value = BigRational::new(num.clone(), den.clone());
        if value.numer() != &num || value.denom() != &den {
            return Err(D::Error::custom(format!("{num}/{den} is not in lowest terms")));
        }
        Ok(Fraction(value))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDto {
    pub lo: Fraction,
    pub hi: Fraction,
    pub hi_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientDto {
    pub label: String,
    pub constant: Fraction,
    pub slope: Fraction,
}

/// Stable certificate schema. `epsilon` and `epsilon_interval` are `null` when infeasible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDto {
    pub g: u32,
    pub n: u32,
    pub lambda_variant: LambdaVariant,
    pub logan_terms: LoganTerms,
    pub verdict: Verdict,
    pub epsilon: Option<Fraction>,
    pub epsilon_interval: Option<IntervalDto>,
    pub coefficients: Vec<CoefficientDto>,
    pub binding_constraints: Vec<String>,
    pub w_monotone: bool,
    pub omitted_remainder: bool,
    pub assumptions: Vec<String>,
}

impl<T: Scalar> From<&KodairaCertificate<T>> for CertificateDto {
    fn from(c: &KodairaCertificate<T>) -> Self {
        let epsilon_interval = match &c.interval {
            FeasibleSet::Empty => None,
            FeasibleSet::Interval { lo, hi, hi_closed } => Some(IntervalDto {
                lo: Fraction::from_scalar(lo),
                hi: Fraction::from_scalar(hi),
                hi_closed: *hi_closed,
            }),
        };
        CertificateDto {
            g: c.g,
            n: c.n,
            lambda_variant: c.options.lambda_variant,
            logan_terms: c.options.logan_terms,
            verdict: c.verdict,
            epsilon: c.epsilon.as_ref().map(Fraction::from_scalar),
            epsilon_interval,
            coefficients: c
                .coefficients
                .iter()
                .map(|(l, a)| CoefficientDto {
                    label: l.to_string(),
                    constant: Fraction::from_scalar(&a.constant),
                    slope: Fraction::from_scalar(&a.slope),
                })
                .collect(),
            binding_constraints: c.binding_constraints.iter().map(ToString::to_string).collect(),
            w_monotone: c.w_monotone,
            omitted_remainder: c.omitted_remainder,
            assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Pretty JSON with a trailing newline; byte-stable for equal certificates.
pub fn to_json<T: Scalar>(cert: &KodairaCertificate<T>) -> String {
    let mut s = serde_json::to_string_pretty(&CertificateDto::from(cert)).expect("certificate serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<CertificateDto> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {e}")))
}

fn fail(msg: String) -> Error {
    Error::InvariantViolated(msg)
}

/// Re-derives `E(ε)` from `(g, n)` and the recorded options, then checks the
/// claims directly against it without reusing the interval solver.
pub fn recheck(dto: &CertificateDto) -> Result<()> {
    let opts = VerifyOptions { lambda_variant: dto.lambda_variant, logan_terms: dto.logan_terms };
    let fresh = build_e_with::<BigRational>(dto.g, dto.n, &opts)?;
    if fresh.len() != dto.coefficients.len() {
        return Err(fail(format!("expected {} coefficients, certificate lists {}", fresh.len(), dto.coefficients.len())));
    }
    let mut e = Vec::with_capacity(fresh.len());
    for ((label, coeff), claimed) in fresh.iter().zip(&dto.coefficients) {
        let parsed: SymLabel = claimed.label.parse()?;
        if &parsed != label || claimed.constant.0 != coeff.constant || claimed.slope.0 != coeff.slope {
            return Err(fail(format!("coefficient of {label} does not match the recomputed value")));
        }
        e.push(coeff.clone());
    }
    if dto.assumptions != ASSUMPTIONS {
        return Err(fail("assumption list differs from the verifier's".into()));
    }

    let zero = BigRational::zero();
    let nonneg_at = |eps: &BigRational| e.iter().all(|c: &AffineCoefficient<BigRational>| !c.eval(eps).is_negative());
    // No ε > 0 is feasible: some coordinate is zero at 0 and strictly decreasing.
    let pinned_at_zero = || e.iter().any(|c| c.constant.is_zero() && c.slope.is_negative());

    match (dto.verdict, &dto.epsilon) {
        (Verdict::GeneralType, Some(eps)) => {
            if !(eps.0.is_positive() && eps.0 < BigRational::one()) {
                return Err(fail(format!("GeneralType needs 0 < ε < 1, got {}", eps.0)));
            }
            if !nonneg_at(&eps.0) {
                return Err(fail(format!("E({}) has a negative coefficient", eps.0)));
            }
        }
        (Verdict::NonnegativeKodaira, Some(eps)) => {
            if !eps.0.is_zero() || !nonneg_at(&zero) || !pinned_at_zero() {
                return Err(fail("NonnegativeKodaira needs E(0) ≥ 0 and a coordinate vanishing at 0 with negative slope".into()));
            }
        }
        (Verdict::Inconclusive, None) => {
            if dto.epsilon_interval.is_some() {
                return Err(fail("Inconclusive certificate carries an interval".into()));
            }
            if !infeasible(&e) {
                return Err(fail("Inconclusive claimed but some ε ∈ [0,1) is feasible".into()));
            }
        }
        (v, eps) => return Err(fail(format!("verdict {v} inconsistent with epsilon {:?}", eps.as_ref().map(|f| &f.0)))),
    }

    if let Some(iv) = &dto.epsilon_interval {
        if let Some(eps) = &dto.epsilon {
            let inside = eps.0 >= iv.lo.0 && (eps.0 < iv.hi.0 || (iv.hi_closed && eps.0 == iv.hi.0));
            if !inside {
                return Err(fail("chosen ε lies outside the recorded interval".into()));
            }
        }
        if !nonneg_at(&iv.lo.0) || (iv.hi_closed && !nonneg_at(&iv.hi.0)) {
            return Err(fail("E is negative at an included interval endpoint".into()));
        }
    }
    Ok(())
}

/// Emptiness of `{ε ∈ [0,1) : E(ε) ≥ 0}` by pairwise comparison of half-lines.
fn infeasible(e: &[AffineCoefficient<BigRational>]) -> bool {
    let one = BigRational::one();
    let root = |c: &AffineCoefficient<BigRational>| -c.constant.clone() / c.slope.clone();
    // A single coordinate negative on all of [0,1).
    if e.iter().any(|c| {
        (c.slope.is_zero() && c.constant.is_negative())
            || (c.slope.is_negative() && c.constant.is_negative())
            || (c.slope.is_positive() && root(c) >= one)
    }) {
        return true;
    }
    // Or a lower bound beyond an upper bound.
    e.iter().filter(|c| c.slope.is_positive()).any(|lower| {
        e.iter()
            .filter(|c| c.slope.is_negative())
            .any(|upper| root(lower) > root(upper))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::classify_kodaira;

    #[test]
    fn fraction_json_shape() {
        let f = Fraction(BigRational::new(BigInt::from(-7), BigInt::from(10)));
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"num":-7,"den":10}"#);
        let big = "123456789012345678901234567890";
        let g: Fraction = serde_json::from_str(&format!(r#"{{"num":{big},"den":1}}"#)).unwrap();
        assert_eq!(g.0.numer().to_string(), big);
        assert!(serde_json::from_str::<Fraction>(r#"{"num":2,"den":4}"#).is_err());
        assert!(serde_json::from_str::<Fraction>(r#"{"num":1,"den":0}"#).is_err());
        assert!(serde_json::from_str::<Fraction>(r#"{"num":1.5,"den":2}"#).is_err());
    }

    #[test]
    fn round_trip_and_recheck() {
        for (g, n) in [(2, 12), (2, 14), (2, 15), (3, 19), (4, 40)] {
            let cert = classify_kodaira::<BigRational>(g, n, LambdaVariant::Faithful).unwrap();
            let text = to_json(&cert);
            let dto = from_json(&text).unwrap();
            assert_eq!(dto, CertificateDto::from(&cert));
            recheck(&dto).unwrap();
        }
    }

    #[test]
    fn tampering_is_detected() {
        let cert = classify_kodaira::<BigRational>(2, 15, LambdaVariant::Faithful).unwrap();
        let mut dto = CertificateDto::from(&cert);
        dto.epsilon = Some(Fraction(BigRational::new(BigInt::from(1), BigInt::from(2))));
        assert!(recheck(&dto).is_err());

        let mut dto = CertificateDto::from(&cert);
        dto.coefficients[0].constant = Fraction(BigRational::from_integer(BigInt::from(5)));
        assert!(recheck(&dto).is_err());

        let cert = classify_kodaira::<BigRational>(2, 13, LambdaVariant::Faithful).unwrap();
        let mut dto = CertificateDto::from(&cert);
        dto.verdict = Verdict::NonnegativeKodaira;
        dto.epsilon = Some(Fraction(BigRational::zero()));
        assert!(recheck(&dto).is_err());
    }
}

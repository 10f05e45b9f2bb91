//! Positivity certificates `K = εψ + (1-ε)W + E` on `Hbar_{g,n}`.
//!
//! `E(ε) = K_coarse - εψ - (1-ε)W|_{Hbar_{g,n}}` is affine in `ε` in every
//! symmetric coordinate. The set of `ε ∈ [0,1)` making all coordinates
//! nonnegative is an exact interval; its shape decides the verdict.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{canonical_class_hgn_symmetric, require_genus, LambdaVariant, SpaceVariant};
use crate::picard::{SymLabel, SymmetricDivisorClass};
use crate::pullback::{restrict_to_hyperelliptic_symmetric, symmetrized_w_closed_form, LoganTerms};
use crate::scalar::Scalar;

/// Trust boundary recorded in every certificate.
pub const ASSUMPTIONS: [&str; 3] = ["psi-ample", "W-effective", "no-adjunction-conditions"];

/// `constant + slope·ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineCoefficient<T> {
    pub constant: T,
    pub slope: T,
}

impl<T: Scalar> AffineCoefficient<T> {
    pub fn eval(&self, eps: &T) -> T {
        self.constant.clone() + self.slope.clone() * eps.clone()
    }
}

/// A subset of `[0, 1)`. The lower end is always closed; the upper end is
/// closed when a constraint sets it and open when it is the bound `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FeasibleSet<T> {
    Empty,
    Interval { lo: T, hi: T, hi_closed: bool },
}

impl<T: Scalar> FeasibleSet<T> {
    pub fn contains(&self, eps: &T) -> bool {
        match self {
            FeasibleSet::Empty => false,
            FeasibleSet::Interval { lo, hi, hi_closed } => eps >= lo && (eps < hi || (*hi_closed && eps == hi)),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FeasibleSet::Empty)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    GeneralType,
    NonnegativeKodaira,
    Inconclusive,
}

impl Verdict {
    /// CLI exit status: 0 certified, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::GeneralType | Verdict::NonnegativeKodaira => 0,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GeneralType" => Ok(Verdict::GeneralType),
            "NonnegativeKodaira" => Ok(Verdict::NonnegativeKodaira),
            "Inconclusive" => Ok(Verdict::Inconclusive),
            _ => Err(Error::Parse(format!("unknown verdict `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub lambda_variant: LambdaVariant,
    pub logan_terms: LoganTerms,
}

impl VerifyOptions {
    pub fn with_variant(lambda_variant: LambdaVariant) -> Self {
        Self { lambda_variant, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KodairaCertificate<T> {
    pub g: u32,
    pub n: u32,
    pub options: VerifyOptions,
    pub verdict: Verdict,
    pub interval: FeasibleSet<T>,
    pub epsilon: Option<T>,
    pub coefficients: Vec<(SymLabel, AffineCoefficient<T>)>,
    pub binding_constraints: Vec<SymLabel>,
    /// `b_{0,s} >= b_{0,2}` for all `2 < s < n`.
    pub w_monotone: bool,
    pub omitted_remainder: bool,
}

impl<T: Scalar> KodairaCertificate<T> {
    pub fn coefficient(&self, label: &SymLabel) -> Option<&AffineCoefficient<T>> {
        self.coefficients.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }
}

fn require_cell(g: u32, n: u32) -> Result<()> {
    require_genus(g)?;
    if n < 2 || n <= g {
        return Err(Error::Precondition(format!("verification needs n ≥ max(2, g+1), got g = {g}, n = {n}")));
    }
    Ok(())
}

/// `W` restricted to `Hbar_{g,n}` together with the monotonicity flag.
fn restricted_w<T: Scalar>(g: u32, n: u32, opts: &VerifyOptions) -> Result<(SymmetricDivisorClass<T>, bool, bool)> {
    let w = symmetrized_w_closed_form::<T>(g, n, opts.logan_terms)?;
    let monotone = w.monotonicity_violation().is_none();
    Ok((restrict_to_hyperelliptic_symmetric(&w.class, opts.lambda_variant)?, monotone, w.omitted_remainder))
}

pub fn build_e<T: Scalar>(g: u32, n: u32, variant: LambdaVariant) -> Result<Vec<(SymLabel, AffineCoefficient<T>)>> {
    build_e_with(g, n, &VerifyOptions::with_variant(variant))
}

/// Symmetric coefficients of `E(ε)`, sorted by label. `ψ` is always listed.
pub fn build_e_with<T: Scalar>(
    g: u32,
    n: u32,
    opts: &VerifyOptions,
) -> Result<Vec<(SymLabel, AffineCoefficient<T>)>> {
    require_cell(g, n)?;
    let k = canonical_class_hgn_symmetric::<T>(g, n, SpaceVariant::Coarse)?;
    let (w, _, _) = restricted_w::<T>(g, n, opts)?;
    Ok(assemble_e(&k, &w))
}

fn assemble_e<T: Scalar>(
    k: &SymmetricDivisorClass<T>,
    w: &SymmetricDivisorClass<T>,
) -> Vec<(SymLabel, AffineCoefficient<T>)> {
    let mut labels: Vec<SymLabel> = k.iter().chain(w.iter()).map(|(l, _)| l.clone()).collect();
    labels.push(SymLabel::Psi);
    labels.sort();
    labels.dedup();
    labels
        .into_iter()
        .map(|label| {
            let psi = if label == SymLabel::Psi { T::one() } else { T::zero() };
            let (kc, wc) = (k.coefficient(&label), w.coefficient(&label));
            let coeff = AffineCoefficient { constant: kc - wc.clone(), slope: wc - psi };
            (label, coeff)
        })
        .collect()
}

/// Exact solution of `constant + slope·ε >= 0` for all coefficients, `ε ∈ [0,1)`.
pub fn feasibility_interval<T: Scalar>(coefficients: &[(SymLabel, AffineCoefficient<T>)]) -> FeasibleSet<T> {
    interval_from_roots(coefficients, &roots(coefficients))
}

/// Zero of each coefficient, `None` where the slope vanishes.
fn roots<T: Scalar>(coefficients: &[(SymLabel, AffineCoefficient<T>)]) -> Vec<Option<T>> {
    coefficients
        .iter()
        .map(|(_, c)| (!c.slope.is_zero()).then(|| -c.constant.clone() / c.slope.clone()))
        .collect()
}

fn interval_from_roots<T: Scalar>(coefficients: &[(SymLabel, AffineCoefficient<T>)], roots: &[Option<T>]) -> FeasibleSet<T> {
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut hi_closed = false;
    for ((_, c), root) in coefficients.iter().zip(roots) {
        let Some(root) = root else {
            if c.constant.is_negative() {
                return FeasibleSet::Empty;
            }
            continue;
        };
        if c.slope.is_positive() {
            if *root > lo {
                lo = root.clone();
            }
        } else if *root < hi {
            hi = root.clone();
            hi_closed = true;
        }
    }
    if lo > hi || (lo == hi && !hi_closed) {
        FeasibleSet::Empty
    } else {
        FeasibleSet::Interval { lo, hi, hi_closed }
    }
}

fn verdict_for<T: Scalar>(set: &FeasibleSet<T>) -> (Verdict, Option<T>) {
    match set {
        FeasibleSet::Empty => (Verdict::Inconclusive, None),
        FeasibleSet::Interval { hi, .. } if hi.is_zero() => (Verdict::NonnegativeKodaira, Some(T::zero())),
        FeasibleSet::Interval { lo, hi, .. } => {
            (Verdict::GeneralType, Some((lo.clone() + hi.clone()) / T::from_int(2)))
        }
    }
}

/// Labels vanishing at an included endpoint; for an empty set, labels negative at `ε = 0`.
fn binding<T: Scalar>(
    coefficients: &[(SymLabel, AffineCoefficient<T>)],
    roots: &[Option<T>],
    set: &FeasibleSet<T>,
) -> Vec<SymLabel> {
    match set {
        FeasibleSet::Empty => coefficients
            .iter()
            .filter(|(_, c)| c.constant.is_negative())
            .map(|(l, _)| l.clone())
            .collect(),
        FeasibleSet::Interval { lo, hi, hi_closed } => coefficients
            .iter()
            .zip(roots)
            .filter(|(_, r)| r.as_ref().is_some_and(|r| r == lo || (*hi_closed && r == hi)))
            .map(|((l, _), _)| l.clone())
            .collect(),
    }
}

pub fn classify_kodaira<T: Scalar>(g: u32, n: u32, variant: LambdaVariant) -> Result<KodairaCertificate<T>> {
    classify_kodaira_with(g, n, &VerifyOptions::with_variant(variant))
}

pub fn classify_kodaira_with<T: Scalar>(g: u32, n: u32, opts: &VerifyOptions) -> Result<KodairaCertificate<T>> {
    require_cell(g, n)?;
    let k = canonical_class_hgn_symmetric::<T>(g, n, SpaceVariant::Coarse)?;
    let (w, w_monotone, omitted_remainder) = restricted_w::<T>(g, n, opts)?;
    let coefficients = assemble_e(&k, &w);
    let roots = roots(&coefficients);
    let interval = interval_from_roots(&coefficients, &roots);
    let (verdict, epsilon) = verdict_for(&interval);
    let binding_constraints = binding(&coefficients, &roots, &interval);
    Ok(KodairaCertificate {
        g,
        n,
        options: *opts,
        verdict,
        interval,
        epsilon,
        coefficients,
        binding_constraints,
        w_monotone,
        omitted_remainder,
    })
}

/// Feasible interval using only the `ε_0` and `δ_{0,s}` constraints.
pub fn tail_interval<T: Scalar>(cert: &KodairaCertificate<T>) -> FeasibleSet<T> {
    let tails: Vec<_> = cert
        .coefficients
        .iter()
        .filter(|(l, _)| matches!(l, SymLabel::Eps0 | SymLabel::Delta { genus: 0, .. }))
        .cloned()
        .collect();
    feasibility_interval(&tails)
}

/// Both λ-variants must agree on the verdict and on the endpoints coming from
/// `ε_0` and `δ_{0,s}`; the `i >= 1` coordinates must stay positive on `[0,1)`.
pub fn check_variant_robustness<T: Scalar>(g: u32, n: u32, logan_terms: LoganTerms) -> Result<()> {
    let mk = |v| classify_kodaira_with::<T>(g, n, &VerifyOptions { lambda_variant: v, logan_terms });
    let (f, p) = (mk(LambdaVariant::Faithful)?, mk(LambdaVariant::Printed)?);
    if f.verdict != p.verdict || f.interval != p.interval || tail_interval(&f) != tail_interval(&p) {
        return Err(Error::InvariantViolated(format!(
            "λ-variants disagree at g = {g}, n = {n}: {} vs {}",
            f.verdict, p.verdict
        )));
    }
    for cert in [&f, &p] {
        if let Some(label) = first_nonpositive_interior(cert) {
            return Err(Error::InvariantViolated(format!(
                "{label} not strictly positive on [0,1) at g = {g}, n = {n} ({})",
                cert.options.lambda_variant
            )));
        }
    }
    Ok(())
}

/// First `ε_{i,s}` / `δ_{i,s}` (`i >= 1`) coordinate that is not strictly positive on `[0,1)`.
pub fn first_nonpositive_interior<T: Scalar>(cert: &KodairaCertificate<T>) -> Option<&SymLabel> {
    cert.coefficients
        .iter()
        .filter(|(l, _)| matches!(l, SymLabel::Eps { .. } | SymLabel::Delta { genus: 1.., .. }))
        .find(|(_, c)| !c.constant.is_positive() || c.eval(&T::one()).is_negative())
        .map(|(l, _)| l)
}

/// `a·g + b`, as in `4g+6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineN {
    pub a: i64,
    pub b: i64,
}

impl AffineN {
    pub fn constant(b: i64) -> Self {
        Self { a: 0, b }
    }

    pub fn at(&self, g: u32) -> i64 {
        self.a * g as i64 + self.b
    }
}

impl fmt::Display for AffineN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = match self.a {
            0 => return write!(f, "{}", self.b),
            1 => String::new(),
            -1 => "-".into(),
            a => a.to_string(),
        };
        match self.b {
            0 => write!(f, "{lead}g"),
            b if b > 0 => write!(f, "{lead}g+{b}"),
            b => write!(f, "{lead}g{b}"),
        }
    }
}

impl FromStr for AffineN {
    type Err = Error;

    /// Accepts `14`, `g`, `4g`, `4g+6`, `g+2`, `2g-1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected an expression like `4g+6`, got `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find('g') else {
            return Ok(Self::constant(t.parse().map_err(|_| bad())?));
        };
        let a = match &t[..pos] {
            "" | "+" => 1,
            "-" => -1,
            lead => lead.parse().map_err(|_| bad())?,
        };
        let rest = &t[pos + 1..];
        let b = if rest.is_empty() {
            0
        } else {
            let digits = rest.strip_prefix('+').unwrap_or(rest);
            digits.parse().map_err(|_| bad())?
        };
        Ok(Self { a, b })
    }
}

/// Genus range and per-genus `n` range, both inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub g_lo: u32,
    pub g_hi: u32,
    pub n_lo: AffineN,
    pub n_hi: AffineN,
}

impl GridSpec {
    pub fn cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for g in self.g_lo..=self.g_hi {
            let lo = self.n_lo.at(g).max(0);
            let hi = self.n_hi.at(g);
            for n in lo..=hi {
                out.push((g, n as u32));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCell<T> {
    pub g: u32,
    pub n: u32,
    pub result: std::result::Result<KodairaCertificate<T>, Error>,
}

/// One certificate per cell in `(g, n)` order. Cell errors are recorded, not raised.
/// `threads = 0` uses the global pool; output does not depend on it.
pub fn grid_verify<T: Scalar>(cells: &[(u32, u32)], opts: &VerifyOptions, threads: usize) -> Result<Vec<GridCell<T>>> {
    let run = || -> Vec<GridCell<T>> {
        cells
            .par_iter()
            .map(|&(g, n)| GridCell { g, n, result: classify_kodaira_with(g, n, opts) })
            .collect()
    };
    if threads == 0 {
        return Ok(run());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Precondition(format!("cannot build a pool of {threads} threads: {e}")))?;
    Ok(pool.install(run))
}

//! Human-readable and LaTeX renderings of divisor classes.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::picard::{ClassLabel, DivisorClass, PointSet, Space, SymLabel, SymmetricDivisorClass};
use crate::scalar::Scalar;

fn text_set(s: &PointSet) -> String {
    s.to_string()
}

fn latex_set(s: &PointSet) -> String {
    let inner: Vec<String> = s.iter().map(|p| p.to_string()).collect();
    format!("\\{{{}\\}}", inner.join(","))
}

/// `ε_0`, `δ_1`, `ψ_2`, `δ_{0,{1,2}}`, ... On `Hbar_g` subsets are dropped.
pub fn label_text(label: &ClassLabel, space: Space) -> String {
    let bare = matches!(space, Space::HbarG { .. });
    match label {
        ClassLabel::Lambda => "λ".into(),
        ClassLabel::Psi(k) => format!("ψ_{k}"),
        ClassLabel::DeltaIrr => "δ_irr".into(),
        ClassLabel::Eps0 => "ε_0".into(),
        ClassLabel::Eps { genus, .. } if bare => format!("ε_{genus}"),
        ClassLabel::Delta { genus, .. } if bare => format!("δ_{genus}"),
        ClassLabel::Eps { genus, points } => format!("ε_{{{genus},{}}}", text_set(points)),
        ClassLabel::Delta { genus, points } => format!("δ_{{{genus},{}}}", text_set(points)),
        ClassLabel::QuotDelta(s) => format!("δ_{{0,{s}}}"),
    }
}

pub fn label_latex(label: &ClassLabel, space: Space) -> String {
    let bare = matches!(space, Space::HbarG { .. });
    match label {
        ClassLabel::Lambda => "\\lambda".into(),
        ClassLabel::Psi(k) => format!("\\psi_{{{k}}}"),
        ClassLabel::DeltaIrr => "\\delta_{\\mathrm{irr}}".into(),
        ClassLabel::Eps0 => "\\varepsilon_{0}".into(),
        ClassLabel::Eps { genus, .. } if bare => format!("\\varepsilon_{{{genus}}}"),
        ClassLabel::Delta { genus, .. } if bare => format!("\\delta_{{{genus}}}"),
        ClassLabel::Eps { genus, points } => format!("\\varepsilon_{{{genus},{}}}", latex_set(points)),
        ClassLabel::Delta { genus, points } => format!("\\delta_{{{genus},{}}}", latex_set(points)),
        ClassLabel::QuotDelta(s) => format!("\\delta_{{0,{s}}}"),
    }
}

pub fn sym_label_text(label: &SymLabel) -> String {
    match label {
        SymLabel::Lambda => "λ".into(),
        SymLabel::Psi => "ψ".into(),
        SymLabel::DeltaIrr => "δ_irr".into(),
        SymLabel::Eps0 => "ε_0".into(),
        SymLabel::Eps { genus, size } => format!("ε_{{{genus},{size}}}"),
        SymLabel::Delta { genus, size } => format!("δ_{{{genus},{size}}}"),
        SymLabel::QuotDelta(s) => format!("δ_{{0,{s}}}"),
    }
}

pub fn sym_label_latex(label: &SymLabel) -> String {
    match label {
        SymLabel::Lambda => "\\lambda".into(),
        SymLabel::Psi => "\\psi".into(),
        SymLabel::DeltaIrr => "\\delta_{\\mathrm{irr}}".into(),
        SymLabel::Eps0 => "\\varepsilon_{0}".into(),
        SymLabel::Eps { genus, size } => format!("\\varepsilon_{{{genus},{size}}}"),
        SymLabel::Delta { genus, size } => format!("\\delta_{{{genus},{size}}}"),
        SymLabel::QuotDelta(s) => format!("\\delta_{{0,{s}}}"),
    }
}

/// `label: coeff` pairs joined by `, `; `0` for the zero class.
fn join_text<'a>(terms: impl Iterator<Item = (String, BigRational)> + 'a) -> String {
    // Typographic minus, so `-7/10` reads as `−7/10`.
    let parts: Vec<String> = terms
        .map(|(l, c)| if c.is_negative() { format!("{l}: −{}", -c) } else { format!("{l}: {c}") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}

fn join_latex(terms: impl Iterator<Item = (String, BigRational)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            if a.is_integer() {
                let _ = write!(out, "{}", a.numer());
            } else {
                let _ = write!(out, "\\frac{{{}}}{{{}}}", a.numer(), a.denom());
            }
            out.push_str("\\,");
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn class_text<T: Scalar>(x: &DivisorClass<T>) -> String {
    join_text(x.iter().map(|(l, c)| (label_text(l, x.space()), c.to_big())))
}

pub fn class_latex<T: Scalar>(x: &DivisorClass<T>) -> String {
    join_latex(x.iter().map(|(l, c)| (label_latex(l, x.space()), c.to_big())))
}

pub fn sym_class_text<T: Scalar>(x: &SymmetricDivisorClass<T>) -> String {
    join_text(x.iter().map(|(l, c)| (sym_label_text(l), c.to_big())))
}

pub fn sym_class_latex<T: Scalar>(x: &SymmetricDivisorClass<T>) -> String {
    join_latex(x.iter().map(|(l, c)| (sym_label_latex(l), c.to_big())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{canonical_class_hg, SpaceVariant};

    #[test]
    fn genus_two_canonical_class() {
        let k = canonical_class_hg::<BigRational>(2, SpaceVariant::Coarse).unwrap();
        assert_eq!(class_text(&k), "ε_0: −7/10, δ_1: −1/10");
        assert_eq!(class_latex(&k), "-\\frac{7}{10}\\,\\varepsilon_{0} - \\frac{1}{10}\\,\\delta_{1}");
        let k = canonical_class_hg::<BigRational>(2, SpaceVariant::Stack).unwrap();
        assert_eq!(class_text(&k), "ε_0: −7/10, δ_1: 9/10");
    }

    #[test]
    fn labelled_subsets() {
        let space = Space::HbarGN { g: 3, n: 3 };
        let l = ClassLabel::delta(0, PointSet::new([1, 3]));
        assert_eq!(label_text(&l, space), "δ_{0,{1,3}}");
        assert_eq!(label_latex(&l, space), "\\delta_{0,\\{1,3\\}}");
        assert_eq!(class_text(&DivisorClass::<BigRational>::zero(space)), "0");
    }
}

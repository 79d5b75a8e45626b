//! Elements of the free *-algebra on the vertex projections `p_v` and the
//! edge isometries `s_e`, as finite linear combinations of words with exact
//! complex-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::hypergraph::{EdgeId, VertexId};
use crate::scalar::Scalar;

/// One letter of a word: `p_v`, `s_e`, or `s_e*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    ProjV(VertexId),
    Iso(EdgeId),
    IsoStar(EdgeId),
}

impl Generator {
    pub fn adjoint(&self) -> Generator {
        match self {
            Generator::ProjV(v) => Generator::ProjV(v.clone()),
            Generator::Iso(e) => Generator::IsoStar(e.clone()),
            Generator::IsoStar(e) => Generator::Iso(e.clone()),
        }
    }

    /// +1 for `s_e`, -1 for `s_e*`, 0 for projections.
    pub fn degree(&self) -> i64 {
        match self {
            Generator::ProjV(_) => 0,
            Generator::Iso(_) => 1,
            Generator::IsoStar(_) => -1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::ProjV(v) => write!(f, "p({v})"),
            Generator::Iso(e) => write!(f, "s({e})"),
            Generator::IsoStar(e) => write!(f, "s*({e})"),
        }
    }
}

/// A finite product of generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn one_letter(g: Generator) -> Self {
        Word(vec![g])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        Word(letters)
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(Generator::adjoint).collect())
    }

    /// Number of `s` letters minus number of `s*` letters.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(Generator::degree).sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A finitely supported linear combination of words. Zero coefficients are
/// never stored, so structural equality is equality of the combinations.
/// The derived ordering is structural, for deterministic tie-breaking.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct StarExpression {
    terms: BTreeMap<Word, Scalar>,
}

impl StarExpression {
    pub fn zero() -> Self {
        StarExpression::default()
    }

    pub fn one() -> Self {
        StarExpression::from_word(Word::unit())
    }

    pub fn from_word(w: Word) -> Self {
        StarExpression::from_term(w, Scalar::one())
    }

    pub fn from_term(w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        StarExpression { terms }
    }

    pub fn proj(v: &VertexId) -> Self {
        StarExpression::from_word(Word::one_letter(Generator::ProjV(v.clone())))
    }

    pub fn iso(e: &EdgeId) -> Self {
        StarExpression::from_word(Word::one_letter(Generator::Iso(e.clone())))
    }

    pub fn iso_star(e: &EdgeId) -> Self {
        StarExpression::from_word(Word::one_letter(Generator::IsoStar(e.clone())))
    }

    /// `Σ_{v ∈ A} p_v`; the empty set gives zero.
    pub fn generalized_projection<'a>(vertices: impl IntoIterator<Item = &'a VertexId>) -> Self {
        let mut acc = StarExpression::zero();
        for v in vertices {
            acc.add_term(Word::one_letter(Generator::ProjV(v.clone())), Scalar::one());
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &StarExpression) -> StarExpression {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &StarExpression) -> StarExpression {
        self.add(&other.scale(&(-Scalar::one())))
    }

    pub fn scale(&self, c: &Scalar) -> StarExpression {
        if c.is_zero() {
            return StarExpression::zero();
        }
        StarExpression {
            terms: self
                .terms
                .iter()
                .map(|(w, k)| (w.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Bilinear concatenation, with no rewriting.
    pub fn mul(&self, other: &StarExpression) -> StarExpression {
        let mut out = StarExpression::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// The *-operation: reverses words, stars letters, conjugates coefficients.
    pub fn adjoint(&self) -> StarExpression {
        let mut out = StarExpression::zero();
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    /// The common degree of the support words if the expression is
    /// homogeneous, `None` otherwise (and for zero, which has no support).
    pub fn gauge_degree(&self) -> Option<i64> {
        let mut degrees = self.terms.keys().map(Word::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for StarExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let rendered = c.to_string();
            let needs_parens = rendered.contains('+') || rendered[1..].contains('-');
            let (sign, body) = if !needs_parens && rendered.starts_with('-') {
                ("-", &rendered[1..])
            } else {
                ("+", rendered.as_str())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if w.is_unit() {
                if needs_parens {
                    write!(f, "({rendered})")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if body == "1" {
                write!(f, "{w}")?;
            } else if needs_parens {
                write!(f, "({rendered})*{w}")?;
            } else {
                write!(f, "{body}*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }

    fn e(s: &str) -> EdgeId {
        EdgeId::new(s)
    }

    #[test]
    fn adjoint_is_an_involution() {
        let x = StarExpression::proj(&v("v"))
            .mul(&StarExpression::iso(&e("e")))
            .scale(&Scalar::i())
            .add(&StarExpression::iso_star(&e("f")));
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn adjoint_is_anti_multiplicative() {
        let x = StarExpression::iso(&e("e")).add(&StarExpression::proj(&v("v")));
        let y = StarExpression::iso_star(&e("f")).scale(&Scalar::from_ratio(1, 2));
        assert_eq!(x.mul(&y).adjoint(), y.adjoint().mul(&x.adjoint()));
    }

    #[test]
    fn unit_is_neutral_for_mul() {
        let x = StarExpression::iso(&e("e")).mul(&StarExpression::iso_star(&e("e")));
        assert_eq!(StarExpression::one().mul(&x), x);
        assert_eq!(x.mul(&StarExpression::one()), x);
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = StarExpression::proj(&v("v"));
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn degree_negates_under_adjoint_and_adds_under_concatenation() {
        let w1 = Word(vec![
            Generator::Iso(e("a")),
            Generator::ProjV(v("v")),
            Generator::Iso(e("b")),
        ]);
        let w2 = Word(vec![Generator::IsoStar(e("c"))]);
        assert_eq!(w1.adjoint().degree(), -w1.degree());
        assert_eq!(w1.concat(&w2).degree(), w1.degree() + w2.degree());
    }

    #[test]
    fn gauge_degree_of_words_and_mixtures() {
        assert_eq!(StarExpression::proj(&v("v")).gauge_degree(), Some(0));
        let two_isos_one_star = StarExpression::iso(&e("a"))
            .mul(&StarExpression::iso(&e("b")))
            .mul(&StarExpression::iso_star(&e("c")));
        assert_eq!(two_isos_one_star.gauge_degree(), Some(1));
        let mixed = StarExpression::proj(&v("v")).add(&StarExpression::iso(&e("a")));
        assert_eq!(mixed.gauge_degree(), None);
        assert_eq!(StarExpression::zero().gauge_degree(), None);
    }

    #[test]
    fn display_round_shapes() {
        let x = StarExpression::proj(&v("v"))
            .add(&StarExpression::iso(&e("f")).scale(&Scalar::from_ratio(-1, 2)));
        assert_eq!(x.to_string(), "p(v) - 1/2*s(f)");
        let y = StarExpression::one()
            .scale(&(Scalar::from_ratio(3, 2) + Scalar::from_ratio(1, 3) * Scalar::i()));
        assert_eq!(y.to_string(), "(3/2+1/3i)");
        assert_eq!(StarExpression::zero().to_string(), "0");
    }
}

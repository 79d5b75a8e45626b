//! The spanning basis `s_μ p_A s_ν*` of algebras whose hypergraph admits
//! only perfect and quasi-perfect paths, and its closed product formula.
//!
//! For quasi-perfect paths the inner collapse `s_ν* s_ν = p_{r(ν_last)}`
//! holds, so the product of two basis elements again lands in the span and
//! can be computed by comparing `ν` against `α` (equal, one a prefix of the
//! other, or divergent).

use thiserror::Error;

use std::collections::BTreeSet;

use crate::hypergraph::{EdgeId, PathClass, VertexId};
use crate::rewrite::{normalize, RelationSystem, RewriteError};
use crate::star::StarExpression;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanError {
    #[error("hypergraph admits paths beyond quasi-perfect ones")]
    NotQuasiPerfect,
    #[error("path {0:?} is not quasi-perfect")]
    PathNotQuasiPerfect(Vec<EdgeId>),
    #[error("middle projection {0:?} is not contained in the final ranges")]
    MiddleNotInRange(Vec<VertexId>),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A basis element `s_μ · p_A · s_ν*` with `μ`, `ν` quasi-perfect paths
/// (possibly empty) and `A` a vertex set inside `r(μ_last) ∩ r(ν_last)`
/// (inside everything, for empty paths).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpanElem {
    mu: Vec<EdgeId>,
    middle: BTreeSet<VertexId>,
    nu: Vec<EdgeId>,
}

impl SpanElem {
    pub fn new(
        rs: &RelationSystem,
        mu: Vec<EdgeId>,
        middle: BTreeSet<VertexId>,
        nu: Vec<EdgeId>,
    ) -> Result<Self, SpanError> {
        let h = rs.hypergraph();
        for path in [&mu, &nu] {
            if !path.is_empty() {
                match h.classify_path(path) {
                    Ok(PathClass::Perfect) | Ok(PathClass::QuasiPerfect) => {}
                    _ => return Err(SpanError::PathNotQuasiPerfect(path.clone())),
                }
            }
        }
        let bound = |path: &[EdgeId]| -> BTreeSet<VertexId> {
            match path.last() {
                None => h.vertices().clone(),
                Some(e) => h.range(e).expect("path edges exist").clone(),
            }
        };
        let allowed: BTreeSet<VertexId> = bound(&mu).intersection(&bound(&nu)).cloned().collect();
        if !middle.is_subset(&allowed) {
            return Err(SpanError::MiddleNotInRange(middle.into_iter().collect()));
        }
        Ok(SpanElem { mu, middle, nu })
    }

    pub fn mu(&self) -> &[EdgeId] {
        &self.mu
    }

    pub fn nu(&self) -> &[EdgeId] {
        &self.nu
    }

    pub fn middle(&self) -> &BTreeSet<VertexId> {
        &self.middle
    }

    /// The element as a raw product of generators.
    pub fn to_expression(&self) -> StarExpression {
        let mut acc = StarExpression::one();
        for e in &self.mu {
            acc = acc.mul(&StarExpression::iso(e));
        }
        acc = acc.mul(&StarExpression::generalized_projection(self.middle.iter()));
        for e in self.nu.iter().rev() {
            acc = acc.mul(&StarExpression::iso_star(e));
        }
        acc
    }
}

/// Multiplies two basis elements by the case split on `ν` (of `a`) against
/// `α` (of `b`): divergent sequences kill the product, otherwise the common
/// part collapses and the middle projections meet or are absorbed along the
/// leftover path. Absorption needs the leftover's first source to sit inside
/// or outside the projection; the rare proper overlap falls back to plain
/// normalization, which is always sound.
pub fn spanning_product(
    a: &SpanElem,
    b: &SpanElem,
    rs: &RelationSystem,
) -> Result<StarExpression, SpanError> {
    if !rs.hypergraph().quasi_perfect_only() {
        return Err(SpanError::NotQuasiPerfect);
    }
    let nu = &a.nu;
    let alpha = &b.mu;
    let result = if nu == alpha {
        let middle: BTreeSet<VertexId> = a.middle.intersection(&b.middle).cloned().collect();
        if middle.is_empty() {
            StarExpression::zero()
        } else {
            SpanElem {
                mu: a.mu.clone(),
                middle,
                nu: b.nu.clone(),
            }
            .to_expression()
        }
    } else if alpha.starts_with(nu) {
        let leftover = &alpha[nu.len()..];
        match absorb(&a.middle, leftover, rs) {
            Absorption::Zero => StarExpression::zero(),
            Absorption::Absorbed => {
                let mut mu = a.mu.clone();
                mu.extend(leftover.iter().cloned());
                SpanElem {
                    mu,
                    middle: b.middle.clone(),
                    nu: b.nu.clone(),
                }
                .to_expression()
            }
            Absorption::Partial => normalize(&a.to_expression().mul(&b.to_expression()), rs)?,
        }
    } else if nu.starts_with(alpha) {
        let leftover = &nu[alpha.len()..];
        match absorb(&b.middle, leftover, rs) {
            Absorption::Zero => StarExpression::zero(),
            Absorption::Absorbed => {
                let mut nu = b.nu.clone();
                nu.extend(leftover.iter().cloned());
                SpanElem {
                    mu: a.mu.clone(),
                    middle: a.middle.clone(),
                    nu,
                }
                .to_expression()
            }
            Absorption::Partial => normalize(&a.to_expression().mul(&b.to_expression()), rs)?,
        }
    } else {
        StarExpression::zero()
    };
    Ok(result)
}

enum Absorption {
    Zero,
    Absorbed,
    Partial,
}

/// How `p_A · s_leftover` behaves: gone (source inside `A`), zero (source
/// disjoint from `A`), or a genuine partial overlap.
fn absorb(middle: &BTreeSet<VertexId>, leftover: &[EdgeId], rs: &RelationSystem) -> Absorption {
    let first = match leftover.first() {
        None => return Absorption::Absorbed,
        Some(e) => e,
    };
    let source = rs.hypergraph().source(first).expect("path edges exist");
    if source.is_subset(middle) {
        Absorption::Absorbed
    } else if source.is_disjoint(middle) {
        Absorption::Zero
    } else {
        Absorption::Partial
    }
}

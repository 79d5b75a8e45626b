//! Oriented rewriting modulo the hypergraph relations.
//!
//! The relations of a hypergraph's universal algebra that are *equalities*
//! (orthogonality of vertex projections, `s_e* s_f = δ_ef Σ_{v∈r(e)} p_v`,
//! vanishing products across disjoint endpoint sets) are oriented into
//! rewrite rules. The two order relations (`s_e s_e* ≤ Σ_{v∈s(e)} p_v` and
//! `p_v ≤ Σ s_e s_e*`) are not equalities, but squeezing a projection
//! between them can force one; those forced equalities are derived once per
//! hypergraph and then drive the extra rule `s_e s_e* → Σ_{v∈s(e)} p_v`.
//!
//! On top of the word rules, the absorption identities
//! `(Σ_{v∈s(e)} p_v) s_e = s_e` and `s_e (Σ_{v∈r(e)} p_v) = s_e` (and their
//! adjoints) are applied: at the word level when the endpoint set is a
//! singleton, and as a sum-contraction step when an expression contains a
//! complete endpoint sum with one common coefficient. Without these the
//! unit `Σ_v p_v` would not act as a unit on normal forms.
//!
//! Every step strictly decreases a multiset measure (per word: isometry
//! letters, then length), so normalization terminates. Equal normal forms
//! are a *sound* but not complete test for equality in the universal
//! algebra: distinct normal forms prove nothing, which is why comparison
//! answers `Equal` or `Unknown`, never "not equal".

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, VertexId};
use crate::scalar::Scalar;
use crate::star::{Generator, StarExpression, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("expression references {0} which is not part of the hypergraph")]
    HypergraphMismatch(String),
}

/// The rewrite data derived from one hypergraph: which isometry range
/// projections `s_e s_e*` are forced to equal `Σ_{v∈s(e)} p_v`, and which
/// vertex projections are forced to equal a sum `Σ s_f s_f*`.
///
/// Vertex equalities are recorded for inspection (they witness that the
/// algebra is generated by the isometries) but are never used in the
/// expanding direction as rewrite rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSystem {
    hypergraph: Hypergraph,
    forced_iso_range: BTreeSet<EdgeId>,
    forced_vertex: BTreeMap<VertexId, BTreeSet<EdgeId>>,
}

/// Derives every equality obtainable by squeezing a projection between the
/// two order relations:
///
/// * `s_e s_e* = Σ_{v∈s(e)} p_v` whenever every `v ∈ s(e)` emits no edge
///   besides `e` (then `p_v ≤ s_e s_e*` for each of them, while always
///   `s_e s_e* ≤ Σ_{v∈s(e)} p_v`);
/// * `p_v = Σ_{f: v∈s(f)} s_f s_f*` whenever `v` emits at least one edge and
///   every edge it emits has source exactly `{v}`.
///
/// For a graph this recovers the usual `p_v = Σ_{s(e)=v} s_e s_e*` at every
/// non-sink.
pub fn derive_forced_equalities(h: &Hypergraph) -> RelationSystem {
    let mut emitters: BTreeMap<&VertexId, BTreeSet<&EdgeId>> = BTreeMap::new();
    for (e, ends) in h.edges() {
        for v in &ends.source {
            emitters.entry(v).or_default().insert(e);
        }
    }
    let mut forced_vertex = BTreeMap::new();
    for (v, out) in &emitters {
        if !out.is_empty()
            && out
                .iter()
                .all(|e| h.edge(e).expect("edge exists").source.len() == 1)
        {
            forced_vertex.insert(
                (*v).clone(),
                out.iter()
                    .map(|e| (*e).clone())
                    .collect::<BTreeSet<EdgeId>>(),
            );
        }
    }
    let mut forced_iso_range = BTreeSet::new();
    for (e, ends) in h.edges() {
        let squeezed = ends.source.iter().all(|v| {
            emitters
                .get(v)
                .is_some_and(|out| out.len() == 1 && out.contains(e))
        });
        if squeezed {
            forced_iso_range.insert(e.clone());
        }
    }
    RelationSystem {
        hypergraph: h.clone(),
        forced_iso_range,
        forced_vertex,
    }
}

impl RelationSystem {
    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    /// True iff `s_e s_e*` rewrites to `Σ_{v∈s(e)} p_v`.
    pub fn is_iso_range_forced(&self, e: &EdgeId) -> bool {
        self.forced_iso_range.contains(e)
    }

    pub fn forced_iso_ranges(&self) -> &BTreeSet<EdgeId> {
        &self.forced_iso_range
    }

    /// The edge set `F` with `p_v = Σ_{f∈F} s_f s_f*`, when forced.
    pub fn forced_vertex(&self, v: &VertexId) -> Option<&BTreeSet<EdgeId>> {
        self.forced_vertex.get(v)
    }

    /// True iff a forced vertex equality exists for every vertex, so the
    /// algebra is generated by the edge isometries alone.
    pub fn generated_by_isometries(&self) -> bool {
        self.hypergraph
            .vertices()
            .iter()
            .all(|v| self.forced_vertex.contains_key(v))
    }

    /// `Σ_{v∈V} p_v`, the unit of the algebra.
    pub fn unit_expression(&self) -> StarExpression {
        StarExpression::generalized_projection(self.hypergraph.vertices().iter())
    }

    fn check_expression(&self, x: &StarExpression) -> Result<(), RewriteError> {
        for (w, _) in x.terms() {
            for g in &w.0 {
                match g {
                    Generator::ProjV(v) => {
                        if !self.hypergraph.has_vertex(v) {
                            return Err(RewriteError::HypergraphMismatch(format!("vertex {v}")));
                        }
                    }
                    Generator::Iso(e) | Generator::IsoStar(e) => {
                        if !self.hypergraph.edges().contains_key(e) {
                            return Err(RewriteError::HypergraphMismatch(format!("edge {e}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Result of comparing two expressions modulo the relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equality {
    Equal,
    Unknown,
}

enum RuleAction {
    /// The whole word vanishes.
    Zero,
    /// Replace the two letters by a sum of single projections.
    ProjectionSum(Vec<VertexId>),
    /// Drop the projection letter of the pair (singleton absorption),
    /// keeping the letter at the given offset within the pair.
    Absorb { keep_offset: usize },
}

struct Normalizer<'a> {
    rs: &'a RelationSystem,
    memo: HashMap<Word, StarExpression>,
    steps: u64,
}

impl<'a> Normalizer<'a> {
    fn rule_at(&self, a: &Generator, b: &Generator) -> Option<RuleAction> {
        let h = self.rs.hypergraph();
        let source = |e: &EdgeId| h.source(e).expect("validated edge");
        let range = |e: &EdgeId| h.range(e).expect("validated edge");
        match (a, b) {
            (Generator::ProjV(v), Generator::ProjV(w)) => Some(if v == w {
                RuleAction::ProjectionSum(vec![v.clone()])
            } else {
                RuleAction::Zero
            }),
            (Generator::IsoStar(e), Generator::Iso(f)) => Some(if e == f {
                RuleAction::ProjectionSum(range(e).iter().cloned().collect())
            } else {
                RuleAction::Zero
            }),
            (Generator::ProjV(v), Generator::Iso(e)) => {
                if !source(e).contains(v) {
                    Some(RuleAction::Zero)
                } else if source(e).len() == 1 {
                    Some(RuleAction::Absorb { keep_offset: 1 })
                } else {
                    None
                }
            }
            (Generator::Iso(e), Generator::ProjV(v)) => {
                if !range(e).contains(v) {
                    Some(RuleAction::Zero)
                } else if range(e).len() == 1 {
                    Some(RuleAction::Absorb { keep_offset: 0 })
                } else {
                    None
                }
            }
            (Generator::ProjV(v), Generator::IsoStar(e)) => {
                if !range(e).contains(v) {
                    Some(RuleAction::Zero)
                } else if range(e).len() == 1 {
                    Some(RuleAction::Absorb { keep_offset: 1 })
                } else {
                    None
                }
            }
            (Generator::IsoStar(e), Generator::ProjV(v)) => {
                if !source(e).contains(v) {
                    Some(RuleAction::Zero)
                } else if source(e).len() == 1 {
                    Some(RuleAction::Absorb { keep_offset: 0 })
                } else {
                    None
                }
            }
            (Generator::Iso(e), Generator::IsoStar(f)) => {
                if e == f && self.rs.is_iso_range_forced(e) {
                    Some(RuleAction::ProjectionSum(
                        source(e).iter().cloned().collect(),
                    ))
                } else if range(e).is_disjoint(range(f)) {
                    Some(RuleAction::Zero)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn normalize_word(&mut self, word: &Word) -> StarExpression {
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let result = if word.is_empty() {
            // The unit expands to the full vertex sum, keeping the basis
            // free of the empty word.
            self.steps += 1;
            self.rs.unit_expression()
        } else {
            let mut fired: Option<(usize, RuleAction)> = None;
            for i in 0..word.0.len().saturating_sub(1) {
                if let Some(action) = self.rule_at(&word.0[i], &word.0[i + 1]) {
                    fired = Some((i, action));
                    break;
                }
            }
            match fired {
                None => StarExpression::from_word(word.clone()),
                Some((i, action)) => {
                    self.steps += 1;
                    match action {
                        RuleAction::Zero => StarExpression::zero(),
                        RuleAction::Absorb { keep_offset } => {
                            let mut letters = word.0[..i].to_vec();
                            letters.push(word.0[i + keep_offset].clone());
                            letters.extend(word.0[i + 2..].iter().cloned());
                            self.normalize_word(&Word(letters))
                        }
                        RuleAction::ProjectionSum(vs) => {
                            let mut acc = StarExpression::zero();
                            for v in vs {
                                let mut letters = word.0[..i].to_vec();
                                letters.push(Generator::ProjV(v));
                                letters.extend(word.0[i + 2..].iter().cloned());
                                let inner = self.normalize_word(&Word(letters));
                                acc = acc.add(&inner);
                            }
                            acc
                        }
                    }
                }
            }
        };
        self.memo.insert(word.clone(), result.clone());
        result
    }

    fn normalize_expression(&mut self, x: &StarExpression) -> StarExpression {
        let mut out = StarExpression::zero();
        for (w, c) in x.terms() {
            out = out.add(&self.normalize_word(w).scale(c));
        }
        out
    }

    /// Word normalization interleaved with sum contraction, to fixpoint.
    /// Terminates: every contraction strictly shrinks the term multiset in
    /// the (isometry letters, length) word order.
    fn run(&mut self, x: &StarExpression) -> StarExpression {
        let mut current = self.normalize_expression(x);
        while let Some(contracted) = self.contract_once(&current) {
            self.steps += 1;
            current = self.normalize_expression(&contracted);
        }
        current
    }

    /// Finds the best complete endpoint sum and contracts it: if for some
    /// word context the expression contains `Σ_{v∈S} c · (x p_v s_e y)`
    /// with `S` the full source of `e` (or the analogous range and adjoint
    /// patterns), those terms collapse to `c · (x s_e y)`.
    fn contract_once(&self, x: &StarExpression) -> Option<StarExpression> {
        let h = self.rs.hypergraph();
        let mut best: Option<(Word, Word, usize, BTreeSet<VertexId>, Scalar)> = None;
        for (word, coeff) in x.terms() {
            for i in 0..word.0.len() {
                let (slot, set): (usize, &BTreeSet<VertexId>) = match &word.0[i] {
                    Generator::Iso(e) => {
                        if i > 0 && matches!(word.0[i - 1], Generator::ProjV(_)) {
                            (i - 1, h.source(e).expect("validated edge"))
                        } else if i + 1 < word.0.len()
                            && matches!(word.0[i + 1], Generator::ProjV(_))
                        {
                            (i + 1, h.range(e).expect("validated edge"))
                        } else {
                            continue;
                        }
                    }
                    Generator::IsoStar(e) => {
                        if i > 0 && matches!(word.0[i - 1], Generator::ProjV(_)) {
                            (i - 1, h.range(e).expect("validated edge"))
                        } else if i + 1 < word.0.len()
                            && matches!(word.0[i + 1], Generator::ProjV(_))
                        {
                            (i + 1, h.source(e).expect("validated edge"))
                        } else {
                            continue;
                        }
                    }
                    Generator::ProjV(_) => continue,
                };
                if set.len() < 2 {
                    continue; // singletons are word rules already
                }
                let complete = set.iter().all(|v| {
                    let mut sibling = word.0.clone();
                    sibling[slot] = Generator::ProjV(v.clone());
                    x.coefficient(&Word(sibling)) == *coeff
                });
                if !complete {
                    continue;
                }
                let mut letters = word.0.clone();
                letters.remove(slot);
                let contracted = Word(letters);
                // Adjoint-invariant selection key, so mirrored expressions
                // contract mirrored groups.
                let key = contracted.clone().min(contracted.adjoint());
                let candidate = (key, contracted, slot, set.clone(), coeff.clone());
                if best
                    .as_ref()
                    .is_none_or(|b| (&candidate.0, &candidate.1) < (&b.0, &b.1))
                {
                    best = Some(candidate);
                }
            }
        }
        let (_, contracted, slot, set, coeff) = best?;
        let mut out = x.clone();
        for v in &set {
            let mut letters = contracted.0.clone();
            letters.insert(slot, Generator::ProjV(v.clone()));
            out.add_term(Word(letters), -coeff.clone());
        }
        out.add_term(contracted, coeff);
        Some(out)
    }
}

/// Rewrites to the normal form: word rules at the leftmost applicable
/// position, then complete endpoint sums contracted, to fixpoint. Of the
/// two equally valid normal forms reachable from `x` and from its adjoint,
/// the one with the smaller adjoint-invariant key is returned, so
/// normalization commutes with the *-operation.
pub fn normalize(x: &StarExpression, rs: &RelationSystem) -> Result<StarExpression, RewriteError> {
    normalize_counting(x, rs).map(|(expr, _)| expr)
}

/// Like [`normalize`] but also reports how many rule applications were made,
/// for termination-bound assertions.
pub fn normalize_counting(
    x: &StarExpression,
    rs: &RelationSystem,
) -> Result<(StarExpression, u64), RewriteError> {
    rs.check_expression(x)?;
    let mut normalizer = Normalizer {
        rs,
        memo: HashMap::new(),
        steps: 0,
    };
    let direct = normalizer.run(x);
    let mirrored = normalizer.run(&x.adjoint()).adjoint();
    let steps = normalizer.steps;
    if direct == mirrored {
        return Ok((direct, steps));
    }
    let key = |u: &StarExpression| u.clone().min(u.adjoint());
    let picked = if (key(&direct), &direct) <= (key(&mirrored), &mirrored) {
        direct
    } else {
        mirrored
    };
    Ok((picked, steps))
}

/// `Equal` iff `x - y` normalizes to zero; otherwise `Unknown` (the rule
/// system is sound but not complete, so distinct normal forms decide nothing).
pub fn equal_mod_relations(
    x: &StarExpression,
    y: &StarExpression,
    rs: &RelationSystem,
) -> Result<Equality, RewriteError> {
    let diff = normalize(&x.sub(y), rs)?;
    Ok(if diff.is_zero() {
        Equality::Equal
    } else {
        Equality::Unknown
    })
}

/// Convenience: `Σ_{v∈A} p_v` normalized against GR0 (e.g. `p_∅ = 0`).
pub fn generalized_projection(vertices: &BTreeSet<VertexId>) -> StarExpression {
    StarExpression::generalized_projection(vertices.iter())
}
